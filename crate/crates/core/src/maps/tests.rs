use proptest::prelude::*;

use super::*;
use crate::expr::is_zero;
use crate::poisson::hamiltonian_vf;
use crate::testutil::polynomial;

fn zt() -> ZeroTest {
    ZeroTest::default()
}

fn chart(names: &[&str]) -> Arc<Chart> {
    Arc::new(Chart::new(names).unwrap())
}

fn poisson(c: &Arc<Chart>, entries: &[(&str, &str, &str)]) -> PoissonStructure {
    let e: Vec<(&str, &str, Expr)> = entries.iter().map(|(a, b, s)| (*a, *b, c.parse(s).unwrap())).collect();
    PoissonStructure::from_entries(c, &e, &zt()).unwrap()
}

fn map(src: &Arc<Chart>, tgt: &Arc<Chart>, comps: &[&str]) -> SmoothMap {
    SmoothMap::new(src, tgt, comps.iter().map(|s| src.parse(s).unwrap()).collect()).unwrap()
}

struct Basic {
    m: Arc<Chart>,
    n: Arc<Chart>,
    pi_m: PoissonStructure,
    pi_n: PoissonStructure,
    phi: SmoothMap,
}

fn basic() -> Basic {
    let m = chart(&["x", "y", "z", "w"]);
    let n = chart(&["a", "b"]);
    let pi_m = poisson(&m, &[("x", "y", "1"), ("z", "w", "1")]);
    let pi_n = poisson(&n, &[("a", "b", "a")]);
    let phi = map(&m, &n, &["y", "z*w - x*y"]);
    Basic { m, n, pi_m, pi_n, phi }
}

fn two_dim() -> (Arc<Chart>, PoissonStructure) {
    let c = chart(&["x", "y"]);
    let pi = poisson(&c, &[("x", "y", "x")]);
    (c, pi)
}

#[test]
fn rejects_bad_maps() {
    let m = chart(&["x", "y"]);
    let n = chart(&["a"]);
    assert!(matches!(SmoothMap::new(&m, &n, vec![]), Err(Error::DimensionMismatch(_))));
    assert!(matches!(SmoothMap::new(&m, &n, vec![Expr::var("q")]), Err(Error::ChartMismatch(_))));
}

#[test]
fn basic_map_is_poisson() {
    let b = basic();
    assert!(check_poisson_map(&b.phi, &b.pi_m, &b.pi_n, &zt()).unwrap());
    let id = SmoothMap::identity(&b.m);
    assert!(check_poisson_map(&id, &b.pi_m, &b.pi_m, &zt()).unwrap());
}

#[test]
fn scaled_symplectomorphism_is_not_poisson() {
    let c = chart(&["x", "y"]);
    let pi = poisson(&c, &[("x", "y", "1")]);
    let phi = map(&c, &c, &["x", "2*y"]);
    assert!(!check_poisson_map(&phi, &pi, &pi, &zt()).unwrap());
    let (component, _) = poisson_map_defect(&phi, &pi, &pi, &zt()).unwrap().unwrap();
    assert_eq!(component, (0, 1));
    let rho = VolumeDensity::lebesgue(&c);
    match map_modular_vf(&phi, &pi, &pi, &rho, &rho, &zt()) {
        Err(Error::NotPoissonMap { component, .. }) => assert_eq!(component, (0, 1)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn structure_on_wrong_chart() {
    let b = basic();
    assert!(matches!(check_poisson_map(&b.phi, &b.pi_n, &b.pi_n, &zt()), Err(Error::DimensionMismatch(_))));
}

#[test]
fn anchor_of_pulled_back_generator() {
    let b = basic();
    let da = DifferentialForm::basis(&b.n, 0);
    let lhs = pullback_anchor(&b.phi, &b.pi_m, &da).unwrap();
    let rhs = b.pi_m.sharp(&DifferentialForm::basis(&b.m, 1));
    assert!(lhs.sub(&rhs).unwrap().is_zero(&zt()).unwrap());
    let zero = DifferentialForm::zero(&b.n, 1);
    assert!(pullback_anchor(&b.phi, &b.pi_m, &zero).unwrap().is_zero(&zt()).unwrap());
    let id = SmoothMap::identity(&b.n);
    let alpha = DifferentialForm::from_vec(&b.n, vec![b.n.parse("b^2").unwrap(), Expr::var("a")]).unwrap();
    let lhs = pullback_anchor(&id, &b.pi_n, &alpha).unwrap();
    assert!(lhs.sub(&b.pi_n.sharp(&alpha)).unwrap().is_zero(&zt()).unwrap());
    assert!(matches!(pullback_anchor(&b.phi, &b.pi_m, &DifferentialForm::basis(&b.m, 0)), Err(Error::ChartMismatch(_))));
}

#[test]
fn degree_zero_differential() {
    let b = basic();
    let da = DifferentialForm::basis(&b.n, 0);
    assert!(algebroid_diff0(&b.phi, &b.pi_m, &Expr::int(3), &da).unwrap().is_zero_literal());
    // Basic f = f̃∘φ paired with dg gives {g, f̃}∘φ.
    let ft = b.n.parse("a^2*b").unwrap();
    let g = b.n.parse("a + b^2").unwrap();
    let lhs = algebroid_diff0(&b.phi, &b.pi_m, &b.phi.pull_function(&ft), &DifferentialForm::exact(&b.n, &g)).unwrap();
    let rhs = b.phi.pull_function(&b.pi_n.bracket(&g, &ft));
    assert!(is_zero(&(lhs - rhs), &b.m, &zt()).unwrap());
    // On the identity it is π(α, df).
    let id = SmoothMap::identity(&b.m);
    let f = b.m.parse("x*z + w^3").unwrap();
    let alpha = DifferentialForm::basis(&b.m, 2);
    let lhs = algebroid_diff0(&id, &b.pi_m, &f, &alpha).unwrap();
    let rhs = b.pi_m.eval_pair(&alpha, &DifferentialForm::exact(&b.m, &f));
    assert!(is_zero(&(lhs - rhs), &b.m, &zt()).unwrap());
}

#[test]
fn degree_one_differential_of_exact_sections_vanishes() {
    let b = basic();
    let h = b.n.parse("a*b + b^3").unwrap();
    let p = b.phi.push_vector(&hamiltonian_vf(&b.pi_m, &b.phi.pull_function(&h))).unwrap();
    let p = p.sub(&VectorFieldAlongMap::compose(&hamiltonian_vf(&b.pi_n, &h), &b.phi).unwrap()).unwrap();
    for (_, e) in algebroid_diff1_generators(&b.phi, &b.pi_m, &b.pi_n, &p).unwrap() {
        assert!(is_zero(&e, &b.m, &zt()).unwrap());
    }
    // A generic section along φ is not closed.
    let q = VectorFieldAlongMap::new(&b.phi, vec![Expr::var("x"), Expr::zero()]).unwrap();
    let vals = algebroid_diff1_generators(&b.phi, &b.pi_m, &b.pi_n, &q).unwrap();
    assert!(!is_zero(&vals[0].1, &b.m, &zt()).unwrap());
    let zero = VectorFieldAlongMap::zero(&b.phi);
    for (_, e) in algebroid_diff1_generators(&b.phi, &b.pi_m, &b.pi_n, &zero).unwrap() {
        assert!(is_zero(&e, &b.m, &zt()).unwrap());
    }
}

#[test]
fn two_dim_projections() {
    let (c, pi) = two_dim();
    let line = chart(&["u"]);
    let zero = PoissonStructure::zero(&line);
    let rho = VolumeDensity::lebesgue(&c);
    let rho_line = VolumeDensity::lebesgue(&line);
    let phi1 = map(&c, &line, &["x"]);
    let phi2 = map(&c, &line, &["y"]);
    let x1 = map_modular_vf(&phi1, &pi, &zero, &rho, &rho_line, &zt()).unwrap();
    assert!(x1.is_zero(&zt()).unwrap());
    let x2 = map_modular_vf(&phi2, &pi, &zero, &rho, &rho_line, &zt()).unwrap();
    assert_eq!(x2.components(), &[Expr::int(-1)]);
    // Both are cocycles.
    for (phi, x) in [(&phi1, &x1), (&phi2, &x2)] {
        for (_, e) in algebroid_diff1_generators(phi, &pi, &zero, x).unwrap() {
            assert!(is_zero(&e, &c, &zt()).unwrap());
        }
    }
}

#[test]
fn identity_has_trivial_class() {
    let b = basic();
    let rho = VolumeDensity::lebesgue(&b.n);
    let id = SmoothMap::identity(&b.n);
    assert!(map_modular_vf(&id, &b.pi_n, &b.pi_n, &rho, &rho, &zt()).unwrap().is_zero(&zt()).unwrap());
}

#[test]
fn basic_map_modular_field_is_a_cocycle_but_not_exact() {
    let b = basic();
    let rm = VolumeDensity::lebesgue(&b.m);
    let rn = VolumeDensity::lebesgue(&b.n);
    let x = map_modular_vf(&b.phi, &b.pi_m, &b.pi_n, &rm, &rn, &zt()).unwrap();
    // X_μ = 0 and X_ν = −∂b, so X_{μ,ν} = ∂b along φ.
    assert_eq!(x.components(), &[Expr::zero(), Expr::one()]);
    for (_, e) in algebroid_diff1_generators(&b.phi, &b.pi_m, &b.pi_n, &x).unwrap() {
        assert!(is_zero(&e, &b.m, &zt()).unwrap());
    }
    // −{f,φ^a} = δ^a_b forces ∂x f = 0 and (y∂y + w∂z − z∂w) f = −1, and the
    // operator preserves polynomial degree while killing constants.
    let (res, mode) = map_exactness_witness(&b.phi, &b.pi_m, &x, 4, Policy::ExactOnly, &zt()).unwrap();
    assert_eq!(mode, SearchMode::Exact);
    assert_eq!(res, WitnessSearch::NoWitness(4));
}

#[test]
fn exactness_witness_recovers_hamiltonian() {
    let b = basic();
    let f = b.m.parse("x*w - z^2").unwrap();
    let p = b.phi.push_vector(&hamiltonian_vf(&b.pi_m, &f)).unwrap().scale(&Expr::int(-1));
    let (res, _) = map_exactness_witness(&b.phi, &b.pi_m, &p, 2, Policy::ExactOnly, &zt()).unwrap();
    let g = res.found().expect("witness");
    let q = b.phi.push_vector(&hamiltonian_vf(&b.pi_m, g)).unwrap().scale(&Expr::int(-1));
    assert!(q.sub(&p).unwrap().is_zero(&zt()).unwrap());
}

#[test]
fn composition_chain() {
    let b = basic();
    let line = chart(&["u"]);
    let zero = PoissonStructure::zero(&line);
    let rm = VolumeDensity::lebesgue(&b.m);
    let rn = VolumeDensity::lebesgue(&b.n);
    let rq = VolumeDensity::lebesgue(&line);
    for comp in ["a", "b"] {
        let psi = map(&b.n, &line, &[comp]);
        let r = check_composition(&b.phi, &psi, &b.pi_m, &b.pi_n, &zero, &rm, &rn, &rq, &zt()).unwrap();
        assert!(r.is_zero(&zt()).unwrap());
    }
    // With ψ = id the composite field equals X_{μ,ν}.
    let id = SmoothMap::identity(&b.n);
    let r = check_composition(&b.phi, &id, &b.pi_m, &b.pi_n, &b.pi_n, &rm, &rn, &rn, &zt()).unwrap();
    assert!(r.is_zero(&zt()).unwrap());
}

#[test]
fn composition_with_nontrivial_densities() {
    let b = basic();
    let line = chart(&["u"]);
    let zero = PoissonStructure::zero(&line);
    let rm = VolumeDensity::new(&b.m, b.m.parse("exp(x + z*w)").unwrap(), &zt()).unwrap();
    let rn = VolumeDensity::new(&b.n, b.n.parse("1 + a^2 + b^2").unwrap(), &zt()).unwrap();
    let rq = VolumeDensity::new(&line, line.parse("exp(u)").unwrap(), &zt()).unwrap();
    let psi = map(&b.n, &line, &["a*b"]);
    let r = check_composition(&b.phi, &psi, &b.pi_m, &b.pi_n, &zero, &rm, &rn, &rq, &zt()).unwrap();
    assert!(r.is_zero(&zt()).unwrap());
}

#[test]
fn volume_change_covariance() {
    let b = basic();
    let rm = VolumeDensity::lebesgue(&b.m);
    let rn = VolumeDensity::lebesgue(&b.n);
    let g = b.m.parse("exp(x*y - w)").unwrap();
    let log_g = b.m.parse("x*y - w").unwrap();
    let x0 = map_modular_vf(&b.phi, &b.pi_m, &b.pi_n, &rm, &rn, &zt()).unwrap();
    let x1 = map_modular_vf(&b.phi, &b.pi_m, &b.pi_n, &rm.scaled(&g, &zt()).unwrap(), &rn, &zt()).unwrap();
    let shift = b.phi.push_vector(&hamiltonian_vf(&b.pi_m, &log_g)).unwrap();
    assert!(x1.sub(&x0).unwrap().add(&shift).unwrap().is_zero(&zt()).unwrap());
}

#[test]
fn pullback_bracket_closure_on_generators() {
    let b = basic();
    for i in 0..2 {
        for j in 0..2 {
            let d = pullback_bracket_defect(
                &b.phi,
                &b.pi_m,
                &b.pi_n,
                &DifferentialForm::basis(&b.n, i),
                &DifferentialForm::basis(&b.n, j),
            )
            .unwrap();
            assert!(d.is_zero(&zt()).unwrap());
        }
    }
}

#[test]
fn push_composes() {
    let b = basic();
    let line = chart(&["u"]);
    let psi = map(&b.n, &line, &["a^2*b"]);
    let x = MultiVectorField::from_vec(&b.m, vec![Expr::var("z"), Expr::one(), Expr::zero(), Expr::var("x")]).unwrap();
    let lhs = b.phi.push_vector(&x).unwrap().push(&psi).unwrap();
    let rhs = b.phi.then(&psi).unwrap().push_vector(&x).unwrap();
    assert!(lhs.sub(&rhs).unwrap().is_zero(&zt()).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn pullback_bracket_closure(f in polynomial(&["a", "b"], 2), g in polynomial(&["a", "b"], 2),
                                h in polynomial(&["a", "b"], 2)) {
        let b = basic();
        let alpha = DifferentialForm::exact(&b.n, &f).scale(&h);
        let beta = DifferentialForm::from_vec(&b.n, vec![g.clone(), h.clone()]).unwrap();
        let d = pullback_bracket_defect(&b.phi, &b.pi_m, &b.pi_n, &alpha, &beta).unwrap();
        prop_assert!(d.is_zero(&zt()).unwrap());
    }

    #[test]
    fn exact_sections_are_closed(h in polynomial(&["a", "b"], 3)) {
        let b = basic();
        let p = b.phi.push_vector(&hamiltonian_vf(&b.pi_m, &b.phi.pull_function(&h))).unwrap();
        let p = p.sub(&VectorFieldAlongMap::compose(&hamiltonian_vf(&b.pi_n, &h), &b.phi).unwrap()).unwrap();
        for (_, e) in algebroid_diff1_generators(&b.phi, &b.pi_m, &b.pi_n, &p).unwrap() {
            prop_assert!(is_zero(&e, &b.m, &zt()).unwrap());
        }
    }

    #[test]
    fn volume_covariance(q in polynomial(&["x", "y", "z", "w"], 2)) {
        let b = basic();
        let rm = VolumeDensity::lebesgue(&b.m);
        let rn = VolumeDensity::lebesgue(&b.n);
        let g = Expr::exp(q.clone());
        let x0 = map_modular_vf(&b.phi, &b.pi_m, &b.pi_n, &rm, &rn, &zt()).unwrap();
        let x1 = map_modular_vf(&b.phi, &b.pi_m, &b.pi_n, &rm.scaled(&g, &zt()).unwrap(), &rn, &zt()).unwrap();
        let shift = b.phi.push_vector(&hamiltonian_vf(&b.pi_m, &q)).unwrap();
        prop_assert!(x1.sub(&x0).unwrap().add(&shift).unwrap().is_zero(&zt()).unwrap());
    }
}
