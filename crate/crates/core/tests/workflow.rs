//! End-to-end chains that cross module boundaries.

mod common;

use common::*;
use modpoisson::holonomy::{relative_modular_vf, restrict_poisson, verify_holonomy_identity, SubmanifoldSpec};
use modpoisson::maps::{map_modular_vf, VectorFieldAlongMap};
use modpoisson::paths::{modular_character, path_integral, CotangentPath, Quadrature};
use modpoisson::poisson::{hamiltonian_witness, modular_vf, LieAlgebraData, VolumeDensity};
use modpoisson::reduction::{action_modular_rep, quotient_volume, GroupAction};
use modpoisson::witness::WitnessSearch;
use modpoisson::expr::rat;
use modpoisson::Error;

#[test]
fn quotient_field_is_hamiltonian_upstairs_but_not_invariantly() {
    // x ∂x∧∂y + ∂y∧∂z with translations in z: X_μ = −∂y = X_z, and z is not invariant.
    let pi = r3_action();
    let q = chart(&["a", "b"]);
    let act = GroupAction::new(
        LieAlgebraData::abelian(1),
        vec![field(pi.chart(), &["0", "0", "1"])],
        map(pi.chart(), &q, &["x", "y"]),
        poisson(&q, &[("a", "b", "a")]),
    )
    .unwrap();
    let nu = VolumeDensity::lebesgue(&q);
    let m = action_modular_rep(&act, &pi, &nu, &zt()).unwrap();
    let h = hamiltonian_witness(&pi, &m.field, 2).unwrap();
    let h = h.found().unwrap();
    assert!(act.generators()[0].apply(h).as_const().is_some_and(|c| *c != rat(0, 1)));
    // Downstairs the quotient field has no hamiltonian at all.
    let down = modular_vf(act.pi_quotient(), &nu, &zt()).unwrap();
    assert_eq!(hamiltonian_witness(act.pi_quotient(), &down, 4).unwrap(), WitnessSearch::NoWitness(4));
    assert_eq!(quotient_volume(&act, &nu, &zt()).unwrap().rho().as_const(), Some(&rat(1, 1)));
}

#[test]
fn relative_field_agrees_with_the_inclusion_character() {
    let pi = leaf_r4();
    let n = SubmanifoldSpec::new(pi.chart(), &["x", "y"]).unwrap();
    let pi_n = restrict_poisson(&pi, &n, &zt()).unwrap();
    let (rm, rn) = (VolumeDensity::lebesgue(pi.chart()), VolumeDensity::lebesgue(n.chart()));
    let rel = relative_modular_vf(&pi, &rm, &rn, &n, &zt()).unwrap();
    let inc = map_modular_vf(&n.inclusion(), &pi_n, &pi, &rn, &rm, &zt()).unwrap();
    assert!(rel.add(&inc).unwrap().is_zero(&zt()).unwrap());

    // A loop in the leaf, seen as a path of the pullback algebroid of the inclusion.
    let lp = CotangentPath::parse(
        pi.chart(),
        &["0", "0", "cos(2*pi*t)", "sin(2*pi*t)"],
        &["t", "1", "2*pi*cos(2*pi*t)", "2*pi*sin(2*pi*t)"],
        true,
    )
    .unwrap();
    let id = verify_holonomy_identity(&pi, &n, &rm, &rn, &lp, 800, Quadrature::default(), &zt()).unwrap();
    let along: &VectorFieldAlongMap = &rel;
    let direct = path_integral(along, &lp.restrict_base(n.chart(), n.tangential()).unwrap(), Quadrature::default());
    assert!((direct.unwrap().value - id.integral.value).abs() < 1e-10);
    assert!(id.loop_residual.unwrap() < 1e-6);
    let char_n = modular_character(
        &n.inclusion(),
        &pi_n,
        &pi,
        &rn,
        &rm,
        &lp.restrict_base(n.chart(), n.tangential()).unwrap(),
        Quadrature::default(),
        &zt(),
    )
    .unwrap();
    // The character of the inclusion is the reciprocal square of det h.
    assert!((char_n.value * id.holonomy.det.powi(2) - 1.0).abs() < 1e-6);
}

#[test]
fn errors_name_their_cause() {
    let pi = symplectic_r4();
    let n = SubmanifoldSpec::new(pi.chart(), &["x", "y"]).unwrap();
    let p = CotangentPath::parse(pi.chart(), &["0", "0", "0", "t"], &["0", "0", "1", "0"], false).unwrap();
    let e = verify_holonomy_identity(
        &pi,
        &n,
        &VolumeDensity::lebesgue(pi.chart()),
        &VolumeDensity::lebesgue(n.chart()),
        &p,
        10,
        Quadrature::default(),
        &zt(),
    )
    .unwrap_err();
    assert!(matches!(e, Error::NotPoissonSubmanifold { .. }), "{e}");
}
