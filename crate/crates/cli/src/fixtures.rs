//! Ready-made manifests for the worked examples.

use std::path::{Path, PathBuf};

use crate::manifest::{
    ActionBlock, Entry, HamBlock, MapBlock, Manifest, MomentBlock, PathBlock, SubmanifoldBlock, Tolerances,
};
use crate::CliError;

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn entries(xs: &[(&str, &str, &str)]) -> Vec<Entry> {
    xs.iter().map(|(i, j, e)| Entry { i: i.to_string(), j: j.to_string(), expr: e.to_string() }).collect()
}

fn base(coords: &[&str], pi: &[(&str, &str, &str)]) -> Manifest {
    Manifest {
        coordinates: strings(coords),
        guard: None,
        poisson: entries(pi),
        volume: Some("1".into()),
        map: None,
        submanifold: None,
        path: None,
        action: None,
        moment: None,
        ham: None,
        tolerances: None,
    }
}

fn map_block(target: &[&str], comps: &[&str], pi: &[(&str, &str, &str)]) -> MapBlock {
    MapBlock {
        target_coordinates: strings(target),
        components: strings(comps),
        target_poisson: entries(pi),
        target_volume: Some("1".into()),
    }
}

fn path(base: &[&str], covector: &[&str], is_loop: bool) -> PathBlock {
    PathBlock { base: strings(base), covector: strings(covector), extension: None, is_loop }
}

/// Every fixture with its file name.
pub fn all() -> Vec<(&'static str, Manifest)> {
    let symplectic = [("x", "y", "1"), ("z", "w", "1")];
    let leaf = [("x", "y", "x"), ("z", "w", "1")];

    // Symplectic ℝ⁴ mapping onto (ℝ², a ∂a∧∂b); the path follows the pullback of (1/2) db.
    let mut basic_r4 = base(&["x", "y", "z", "w"], &symplectic);
    basic_r4.map = Some(map_block(&["a", "b"], &["y", "z*w - x*y"], &[("a", "b", "a")]));
    basic_r4.path = Some(path(&["exp(t/2)", "exp(-t/2)", "exp(-t/2)", "exp(t/2)"], &["0", "1/2"], false));

    let mut basic_r2 = base(&["a", "b"], &[("a", "b", "a")]);
    basic_r2.path = Some(path(&["exp(-t)", "t"], &["exp(t)", "1"], false));

    let mut two_dim = base(&["x", "y"], &[("x", "y", "x")]);
    two_dim.map = Some(map_block(&["u"], &["y"], &[]));

    // The 2-dimensional leaf {x = y = 0} with a loop around it.
    let mut leaf_r4 = base(&["x", "y", "z", "w"], &leaf);
    leaf_r4.submanifold = Some(SubmanifoldBlock { transverse: strings(&["x", "y"]), submanifold_volume: Some("1".into()) });
    leaf_r4.path = Some(path(
        &["0", "0", "cos(2*pi*t)", "sin(2*pi*t)"],
        &["1 + t", "cos(2*pi*t)^2 + t", "2*pi*cos(2*pi*t)", "2*pi*sin(2*pi*t)"],
        true,
    ));

    let mut r3_action = base(&["x", "y", "z"], &[("x", "y", "x"), ("y", "z", "1")]);
    r3_action.action = Some(ActionBlock {
        structure_constants: vec![],
        generators: vec![strings(&["0", "0", "1"])],
        pairing: None,
        quotient: map_block(&["a", "b"], &["x", "y"], &[("a", "b", "a")]),
    });

    let mut sphere = base(&["x", "y", "z"], &[("x", "y", "sqrt(x^2 + y^2 + z^2)")]);
    sphere.guard = Some("x^2 + y^2 + z^2".into());
    let mut shifted = base(&["x", "y", "z"], &[("x", "y", "sqrt(x^2 + y^2 + z^2) - 1")]);
    shifted.guard = Some("x^2 + y^2 + z^2".into());

    // Diagonal circle action; the quotient map is the Hopf map.
    let mut hopf = base(&["x", "y", "z", "w"], &symplectic);
    hopf.action = Some(ActionBlock {
        structure_constants: vec![],
        generators: vec![strings(&["-y", "x", "-w", "z"])],
        pairing: None,
        quotient: map_block(
            &["a", "b", "c"],
            &["x^2 + y^2 - z^2 - w^2", "2*(x*z + y*w)", "2*(y*z - x*w)"],
            &[("a", "b", "-4*c"), ("b", "c", "-4*a"), ("c", "a", "-4*b")],
        ),
    });
    hopf.moment = Some(MomentBlock { components: strings(&["(x^2 + y^2 + z^2 + w^2)/2"]) });
    hopf.ham = Some(HamBlock { tau: "1".into(), level: vec![0.5] });
    hopf.tolerances = Some(Tolerances { grid: Some(200), ..Tolerances::default() });

    // {x = 0} is fixed by the Poisson involution x ↦ −x.
    let mut involution = base(&["x", "y", "z", "w"], &leaf);
    involution.submanifold = Some(SubmanifoldBlock { transverse: strings(&["x"]), submanifold_volume: Some("1".into()) });
    involution.path = Some(PathBlock {
        extension: Some(strings(&["1 + t", "0", "2*pi*cos(2*pi*t)", "2*pi*sin(2*pi*t)"])),
        ..path(&["0", "1", "cos(2*pi*t)", "sin(2*pi*t)"], &["1 + t", "0", "2*pi*cos(2*pi*t)", "2*pi*sin(2*pi*t)"], true)
    });

    // The line {a = 0} with the constant loop carrying db.
    let mut rel_line = base(&["a", "b"], &[("a", "b", "a")]);
    rel_line.submanifold = Some(SubmanifoldBlock { transverse: strings(&["a"]), submanifold_volume: Some("1".into()) });
    rel_line.path = Some(path(&["0", "1"], &["0", "1"], true));

    vec![
        ("ex-basic-R4.json", basic_r4),
        ("ex-basic-R2.json", basic_r2),
        ("ex-2dim.json", two_dim),
        ("ex-leafR4.json", leaf_r4),
        ("ex-R3-action.json", r3_action),
        ("ex-sphere-R3.json", sphere),
        ("ex-sphere-R3-shifted.json", shifted),
        ("ex-ham-S1-R4.json", hopf),
        ("ex-conormal-involution.json", involution),
        ("ex-rel-line.json", rel_line),
    ]
}

/// Writes every fixture into `dir` and returns the paths written.
pub fn emit_fixtures(dir: &Path) -> Result<Vec<PathBuf>, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let mut out = Vec::new();
    for (name, m) in all() {
        let p = dir.join(name);
        std::fs::write(&p, m.to_json() + "\n").map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
        out.push(p);
    }
    Ok(out)
}
