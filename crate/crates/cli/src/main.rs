use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use modpoisson_cli::{fixtures, run, Flags};

#[derive(Parser)]
#[command(name = "modpoisson", version, about = "Modular classes of Poisson structures, maps and quotients")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Jacobi identity of the manifest structure.
    Jacobi(Common),
    /// Modular vector field of the structure and volume.
    Modular(Common),
    /// Search for a polynomial hamiltonian of the modular field.
    HamWitness(Common),
    /// Check that the manifest map is Poisson.
    CheckMap(Common),
    /// Modular field of the manifest map.
    MapModular(Common),
    /// Integrate the modular field along the manifest path.
    PathIntegral(Common),
    /// Modular character of the map on the manifest path.
    Character(Common),
    /// Relative modular field of the manifest submanifold.
    RelModular(Common),
    /// Linear holonomy along the path and the determinant identity.
    Holonomy(Common),
    /// Quotient volume and modular field of the manifest action.
    Quotient(Common),
    /// Check the moment map and its modular residual.
    MomentCheck(Common),
    /// Sample the hamiltonian quotient at the manifest level.
    HamQuotient(Common),
    /// Write the bundled example manifests into a directory.
    EmitFixtures { dir: PathBuf },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    manifest: PathBuf,
    /// Zero-test tolerance.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// RK4 steps per path piece.
    #[arg(long)]
    steps: Option<usize>,
    /// Quadrature panels per path piece.
    #[arg(long)]
    panels: Option<usize>,
    /// Degree cap for witness searches.
    #[arg(long)]
    degree: Option<u32>,
    /// Print the full JSON report.
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, c) = match cli.command {
        Command::EmitFixtures { dir } => {
            return match fixtures::emit_fixtures(&dir) {
                Ok(paths) => {
                    for p in paths {
                        println!("{}", p.display());
                    }
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            };
        }
        Command::Jacobi(c) => ("jacobi", c),
        Command::Modular(c) => ("modular", c),
        Command::HamWitness(c) => ("ham-witness", c),
        Command::CheckMap(c) => ("check-map", c),
        Command::MapModular(c) => ("map-modular", c),
        Command::PathIntegral(c) => ("path-integral", c),
        Command::Character(c) => ("character", c),
        Command::RelModular(c) => ("rel-modular", c),
        Command::Holonomy(c) => ("holonomy", c),
        Command::Quotient(c) => ("quotient", c),
        Command::MomentCheck(c) => ("moment-check", c),
        Command::HamQuotient(c) => ("ham-quotient", c),
    };
    let flags = Flags {
        tol: c.tol,
        trials: c.trials,
        seed: c.seed,
        steps: c.steps,
        panels: c.panels,
        degree: c.degree,
    };
    let (report, code) = run(name, &c.manifest, &flags);
    if c.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    if let Some(err) = report.witness.get("error") {
        eprintln!("error: {err}");
    }
    ExitCode::from(code as u8)
}
