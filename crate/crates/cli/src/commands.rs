//! One function per subcommand; each fills in the report or returns an error.

use std::sync::Arc;

use modpoisson::expr::find_nonzero_all;
use modpoisson::holonomy::{conormal_abelian_check, relative_modular_vf, transport, verify_holonomy_identity};
use modpoisson::maps::{algebroid_diff1_generators, map_exactness_witness, map_modular_vf, poisson_map_defect};
use modpoisson::mvf::MultiVectorField;
use modpoisson::paths::{modular_character, path_integral, Quadrature};
use modpoisson::poisson::{d_pi, hamiltonian_witness_with, modular_vf, VolumeDensity};
use modpoisson::reduction::{
    action_modular_rep, check_moment, ham_quotient_verify, moment_modular_residual, quotient_theorem_residual,
    validate_action,
};
use modpoisson::witness::{Policy, WitnessSearch};
use modpoisson::{Chart, Error, Expr};

use crate::manifest::{Effective, Manifest};
use crate::{CliError, Report, Verdict};

type Res = Result<(), CliError>;

/// Renders `Σ c_i ∂x_i`, e.g. `-∂b` or `(y/x)∂x + ∂z`.
pub(crate) fn render(names: &[Arc<str>], comps: &[Expr]) -> String {
    let mut parts = Vec::new();
    for (name, c) in names.iter().zip(comps) {
        if c.is_zero_literal() {
            continue;
        }
        let text = c.to_string();
        parts.push(if c.is_one_literal() {
            format!("∂{name}")
        } else if text == "-1" {
            format!("-∂{name}")
        } else if c.as_const().is_some() {
            format!("{text}∂{name}")
        } else {
            format!("({text})∂{name}")
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn render_field(x: &MultiVectorField) -> String {
    render(x.chart().coords(), &x.to_vec())
}

fn num(v: f64) -> String {
    format!("{v:.12e}")
}

fn quadrature(tol: &Effective) -> Quadrature {
    Quadrature { panels: tol.panels.max(2), ..Quadrature::default() }
}

fn pass_if(report: &mut Report, ok: bool) {
    report.verdict = if ok { Verdict::Pass } else { Verdict::Fail };
}

pub(crate) fn dispatch(command: &str, m: &Manifest, tol: &Effective, r: &mut Report) -> Res {
    match command {
        "jacobi" => jacobi(m, tol, r),
        "modular" => modular(m, tol, r),
        "ham-witness" => ham_witness(m, tol, r),
        "check-map" => check_map(m, tol, r),
        "map-modular" => map_modular(m, tol, r),
        "path-integral" => integral(m, tol, r),
        "character" => character(m, tol, r),
        "rel-modular" => rel_modular(m, tol, r),
        "holonomy" => holonomy(m, tol, r),
        "quotient" => quotient(m, tol, r),
        "moment-check" => moment_check(m, tol, r),
        "ham-quotient" => ham_quotient(m, tol, r),
        other => Err(CliError::UnknownCommand(other.to_string())),
    }
}

fn jacobi(m: &Manifest, tol: &Effective, r: &mut Report) -> Res {
    let chart = m.chart()?;
    match m.poisson(&chart, &tol.zero_test()) {
        Ok(_) => {
            r.residual("jacobi", 0.0);
            Ok(())
        }
        Err(CliError::Field { source: Error::JacobiFailed { component, witness }, .. }) => {
            let names: Vec<&str> = component.iter().map(|&i| chart.coord(i)).collect();
            r.residual("jacobi", witness.value.abs());
            r.witness("component", names.join(","));
            r.witness("point", &witness);
            r.verdict = Verdict::Fail;
            Ok(())
        }
        Err(e) => Err(e),
    }
}

fn modular(m: &Manifest, tol: &Effective, r: &mut Report) -> Res {
    let cfg = tol.zero_test();
    let chart = m.chart()?;
    let pi = m.poisson(&chart, &cfg)?;
    let x = modular_vf(&pi, &m.volume(&chart, &cfg)?, &cfg)?;
    r.witness("modular_field", render_field(&x));
    // The modular field is a Poisson vector field.
    let defect = d_pi(&pi, &x)?.find_nonzero(&cfg)?;
    r.residual("poisson_vector_field", defect.as_ref().map_or(0.0, |(_, w)| w.value.abs()));
    pass_if(r, defect.is_none());
    Ok(())
}

fn ham_witness(m: &Manifest, tol: &Effective, r: &mut Report) -> Res {
    let cfg = tol.zero_test();
    let chart = m.chart()?;
    let pi = m.poisson(&chart, &cfg)?;
    let x = modular_vf(&pi, &m.volume(&chart, &cfg)?, &cfg)?;
    r.witness("modular_field", render_field(&x));
    let (found, mode) = hamiltonian_witness_with(&pi, &x, tol.degree_cap, Policy::AllowSampled, &cfg)?;
    r.witness("search", format!("{mode:?}").to_lowercase());
    match found {
        WitnessSearch::Found(h) => {
            r.witness("hamiltonian", h);
            r.verdict = Verdict::Pass;
        }
        WitnessSearch::NoWitness(cap) => {
            r.witness("result", format!("no polynomial hamiltonian of degree <= {cap}"));
            r.verdict = Verdict::Inconclusive;
        }
    }
    Ok(())
}

fn check_map(m: &Manifest, tol: &Effective, r: &mut Report) -> Res {
    let cfg = tol.zero_test();
    let chart = m.chart()?;
    let pi = m.poisson(&chart, &cfg)?;
    let t = m.target(&chart, &cfg)?;
    match poisson_map_defect(&t.map, &pi, &t.pi, &cfg)? {
        None => {
            r.residual("poisson_map", 0.0);
            r.verdict = Verdict::Pass;
        }
        Some(((a, b), w)) => {
            let tc = t.map.target();
            r.residual("poisson_map", w.value.abs());
            r.witness("component", format!("{{{}, {}}}", tc.coord(a), tc.coord(b)));
            r.witness("point", &w);
            r.verdict = Verdict::Fail;
        }
    }
    Ok(())
}

fn map_modular(m: &Manifest, tol: &Effective, r: &mut Report) -> Res {
    let cfg = tol.zero_test();
    let chart = m.chart()?;
    let pi = m.poisson(&chart, &cfg)?;
    let t = m.target(&chart, &cfg)?;
    let x = map_modular_vf(&t.map, &pi, &t.pi, &m.volume(&chart, &cfg)?, &t.volume, &cfg)?;
    r.witness("field", render(t.map.target().coords(), x.components()));
    let d1: Vec<Expr> = algebroid_diff1_generators(&t.map, &pi, &t.pi, &x)?.into_iter().map(|(_, e)| e).collect();
    let defect = find_nonzero_all(&d1, &chart, &cfg)?;
    r.residual("cocycle", defect.as_ref().map_or(0.0, |(_, w)| w.value.abs()));
    match map_exactness_witness(&t.map, &pi, &x, tol.degree_cap, Policy::AllowSampled, &cfg)?.0 {
        WitnessSearch::Found(f) => r.witness("potential", f),
        WitnessSearch::NoWitness(cap) => r.witness("potential", format!("none of degree <= {cap}")),
    };
    pass_if(r, defect.is_none());
    Ok(())
}

fn integral(m: &Manifest, tol: &Effective, r: &mut Report) -> Res {
    let cfg = tol.zero_test();
    let chart = m.chart()?;
    let pi = m.poisson(&chart, &cfg)?;
    let path = m.path(&chart)?;
    let valid = path.validate(&pi, tol.grid, tol.ode_tol).map_err(|source| CliError::Field { field: "path".into(), source })?;
    if !valid {
        return Err(CliError::Field { field: "path".into(), source: Error::InvalidPath("γ̇ ≠ π♯a on the grid".into()) });
    }
    let x = modular_vf(&pi, &m.volume(&chart, &cfg)?, &cfg)?;
    let i = path_integral(&x, &path, quadrature(tol))?;
    r.witness("integral", num(i.value));
    r.residual("quadrature_error", i.error);
    r.witness("integrand", render_field(&x));
    pass_if(r, i.error <= tol.ode_tol);
    Ok(())
}

fn character(m: &Manifest, tol: &Effective, r: &mut Report) -> Res {
    let cfg = tol.zero_test();
    let chart = m.chart()?;
    let pi = m.poisson(&chart, &cfg)?;
    let t = m.target(&chart, &cfg)?;
    let path = m.path(&chart)?;
    let c = modular_character(&t.map, &pi, &t.pi, &m.volume(&chart, &cfg)?, &t.volume, &path, quadrature(tol), &cfg)
        .map_err(|source| match source {
            Error::InvalidPath(_) => CliError::Field { field: "path".into(), source },
            other => other.into(),
        })?;
    r.witness("integral", num(c.integral.value));
    r.witness("character", num(c.value));
    r.residual("quadrature_error", c.integral.error);
    pass_if(r, c.integral.error <= tol.ode_tol);
    Ok(())
}

fn rel_modular(m: &Manifest, tol: &Effective, r: &mut Report) -> Res {
    let cfg = tol.zero_test();
    let chart = m.chart()?;
    let pi = m.poisson(&chart, &cfg)?;
    let (n, rho_n) = m.submanifold(&chart, &cfg)?;
    let x = relative_modular_vf(&pi, &m.volume(&chart, &cfg)?, &rho_n, &n, &cfg)?;
    r.witness("field", render(chart.coords(), x.components()));
    let normal: Vec<Expr> = n.transverse().iter().map(|&i| x.components()[i].clone()).collect();
    let off = find_nonzero_all(&normal, n.chart(), &cfg)?;
    r.witness("tangent_to_submanifold", off.is_none());
    r.witness("conormal_abelian", conormal_abelian_check(&pi, &n, &cfg)?);
    r.verdict = Verdict::Pass;
    Ok(())
}

fn holonomy(m: &Manifest, tol: &Effective, r: &mut Report) -> Res {
    let cfg = tol.zero_test();
    let chart = m.chart()?;
    let pi = m.poisson(&chart, &cfg)?;
    let (n, rho_n) = m.submanifold(&chart, &cfg)?;
    let path = m.path(&chart)?;
    let id = verify_holonomy_identity(&pi, &n, &m.volume(&chart, &cfg)?, &rho_n, &path, tol.steps, quadrature(tol), &cfg)?;
    let residual = id.loop_residual.unwrap_or(id.open_residual);
    r.witness("det_h", num(id.holonomy.det));
    r.witness("integral", num(id.integral.value));
    r.witness("normalized_det", num(id.normalized_det));
    r.residual("identity", residual);
    r.residual("ode_error", id.holonomy.ode_error);
    let mut ok = residual <= tol.ode_tol && id.holonomy.ode_error <= tol.ode_tol;
    if let Some(ext) = m.extension(&chart)? {
        let h = transport(&pi, &n, &path, Some(&ext), tol.steps)
            .map_err(|source| CliError::Field { field: "path.extension".into(), source })?;
        let gap = (h.det - id.holonomy.det).abs();
        r.residual("extension_det_gap", gap);
        ok &= gap <= tol.ode_tol;
    }
    pass_if(r, ok);
    Ok(())
}

fn quotient(m: &Manifest, tol: &Effective, r: &mut Report) -> Res {
    let cfg = tol.zero_test();
    let chart = m.chart()?;
    let pi = m.poisson(&chart, &cfg)?;
    let (act, nu) = m.action(&chart, &cfg)?;
    validate_action(&act, &pi, &cfg)?;
    let rep = action_modular_rep(&act, &pi, &nu, &cfg)?;
    let res = quotient_theorem_residual(&act, &pi, &nu, tol.grid, &cfg)?;
    r.witness("density", rep.density.rho());
    r.witness("modular_field", render_field(&rep.field));
    r.witness("quotient_modular_field", render_field(&modular_vf(act.pi_quotient(), &nu, &cfg)?));
    r.residual("map_modular", res);
    r.residual("projection", rep.projection_defect.as_ref().map_or(0.0, |(_, _, w)| w.value.abs()));
    r.residual("relatedness", rep.relatedness_defect.as_ref().map_or(0.0, |(_, w)| w.value.abs()));
    pass_if(r, res <= tol.zero_tol && rep.is_consistent());
    Ok(())
}

fn moment_check(m: &Manifest, tol: &Effective, r: &mut Report) -> Res {
    let cfg = tol.zero_test();
    let chart = m.chart()?;
    let pi = m.poisson(&chart, &cfg)?;
    let (act, _) = m.action(&chart, &cfg)?;
    let kappa = m.moment(&chart)?;
    if !check_moment(&act, &kappa, &pi, &cfg)? {
        r.witness("moment", "ξ_M ≠ π♯d⟨κ,ξ⟩ for some generator");
        r.verdict = Verdict::Fail;
        return Ok(());
    }
    let res = moment_modular_residual(&kappa, &pi, &m.volume(&chart, &cfg)?, act.algebra(), &cfg)?;
    r.witness("residual", render(kappa.dual_chart().coords(), res.field.components()));
    let list = |v: &[num_rational::BigRational]| v.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ");
    r.witness("theta0", format!("({})", list(&res.theta0)));
    if let Some(c) = &res.constant {
        r.witness("constant", format!("({})", list(c)));
    }
    if let Some(s) = res.sign {
        r.witness("sign", s);
    }
    r.verdict = Verdict::Pass;
    Ok(())
}

fn ham_quotient(m: &Manifest, tol: &Effective, r: &mut Report) -> Res {
    let cfg = tol.zero_test();
    let chart = m.chart()?;
    let pi = m.poisson(&chart, &cfg)?;
    let (act, _) = m.action(&chart, &cfg)?;
    let kappa = m.moment(&chart)?;
    let ham = m.ham()?;
    let q: &Arc<Chart> = act.quotient().target();
    let tau_expr = q.parse(&ham.tau).map_err(|source| CliError::Field { field: "ham.tau".into(), source })?;
    let tau = VolumeDensity::new(q, tau_expr, &cfg).map_err(|source| CliError::Field { field: "ham.tau".into(), source })?;
    let rep = ham_quotient_verify(&act, &pi, &kappa, &tau, &ham.level, tol.grid, &cfg).map_err(|e| match e {
        Error::DimensionMismatch(_) => CliError::Field { field: "ham.level".into(), source: e },
        other => other.into(),
    })?;
    r.witness("samples", rep.samples);
    r.residual("tangency", rep.tangency);
    r.residual("relatedness", rep.relatedness);
    r.witness("density", rep.density.rho());
    r.witness("modular_field", render_field(&rep.field));
    pass_if(r, rep.tangency <= tol.ode_tol && rep.relatedness <= tol.ode_tol);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rendering() {
        let names: Vec<Arc<str>> = vec!["a".into(), "b".into(), "c".into()];
        assert_eq!(render(&names, &[Expr::zero(), Expr::int(-1), Expr::zero()]), "-∂b");
        assert_eq!(render(&names, &[Expr::one(), Expr::zero(), Expr::int(2)]), "∂a + 2∂c");
        assert_eq!(render(&names, &[Expr::zero(), Expr::zero(), Expr::var("a")]), "(a)∂c");
        assert_eq!(render(&names, &[Expr::zero(), Expr::zero(), Expr::zero()]), "0");
    }
}
