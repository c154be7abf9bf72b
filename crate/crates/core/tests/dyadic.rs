use inner_entropy_core::measures::{
    classify_bc, gap_log_integral, generalized_cantor, heavy_light_decompose, poisson_integral, sublevel_integral,
    Atom, AtomAngle, CantorRule, DyadicTree, Verdict, CLASSIFY_DEPTH,
};
use inner_entropy_core::{DiskPoint, SingularMeasure};
use proptest::prelude::*;
use std::f64::consts::PI;

fn corpus() -> Vec<(&'static str, CantorRule)> {
    vec![
        ("thirds", CantorRule::THIRDS),
        ("geo0.25", CantorRule::Ratio(0.25)),
        ("geo0.4", CantorRule::Ratio(0.4)),
        ("geo0.5", CantorRule::Ratio(0.5)),
        ("geo0.6", CantorRule::Ratio(0.6)),
        ("geo0.8", CantorRule::Ratio(0.8)),
        ("poly1.5", CantorRule::Power(1.5)),
        ("poly2", CantorRule::POLY2),
        ("poly2.5", CantorRule::Power(2.5)),
        ("poly4", CantorRule::Power(4.0)),
    ]
}

fn expected(name: &str, p: f64) -> Verdict {
    match (name, p) {
        ("poly1.5", _) => Verdict::Diverges,
        ("poly2", p) if p >= 1.0 => Verdict::Diverges,
        ("poly2.5", p) if p >= 2.0 => Verdict::Diverges,
        _ => Verdict::Converges,
    }
}

#[test]
fn cantor_corpus_is_unanimous() {
    for (name, rule) in corpus() {
        let e = generalized_cantor(rule, 40).unwrap();
        for p in [0.5, 1.0, 2.0] {
            let c = classify_bc(&e, p, CLASSIFY_DEPTH).unwrap();
            assert_eq!(c.unanimous, Some(expected(name, p)), "{name} at p = {p}");
        }
    }
}

#[test]
fn heavy_light_on_delta_atom() {
    let mu = SingularMeasure::dirac(AtomAngle::ratio(1, 3), 1.0).unwrap();
    let forest = heavy_light_decompose(&mu, 1.0, 20).unwrap();
    let report = forest.verify();
    assert!(report.passed(), "{report:?}");
    let support = forest.residual_support();
    assert_eq!(support.len(), 1);
    assert_eq!(support[0], AtomAngle::ratio(1, 3).as_exact().unwrap().clone());
}

#[test]
fn heavy_light_on_tree() {
    let tree = DyadicTree::new(4, (0..16).map(|k| if k % 5 == 0 { 0.3 } else { 0.001 }).collect()).unwrap();
    let mu = SingularMeasure::new(vec![], Some(tree)).unwrap();
    for m in [3.0, 5.0, 40.0] {
        let report = heavy_light_decompose(&mu, m, 16).unwrap().verify();
        assert!(
            report.containment && report.property1 && report.property2,
            "M = {m}: {report:?}"
        );
    }
}

fn atomic_measure() -> impl Strategy<Value = SingularMeasure> {
    prop::collection::vec((0i64..4096, 1u32..4, 0.01..2.0f64), 1..6).prop_map(|atoms| {
        let atoms = atoms
            .into_iter()
            .map(|(k, den, mass)| Atom {
                angle: AtomAngle::ratio(k, 4096 * den as i64),
                mass,
            })
            .collect();
        SingularMeasure::new(atoms, None).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn heavy_light_properties_hold_exactly(mu in atomic_measure(), m in 2.5..50.0f64) {
        let report = heavy_light_decompose(&mu, m, 18).unwrap().verify();
        prop_assert!(report.passed(), "{:?}", report);
        prop_assert_eq!(report.property3, Some(true));
    }

    #[test]
    fn gap_contribution_grows_with_length(p in 0.2..3.0f64, a in 0.0..1.0f64, b in 0.0..1.0f64) {
        let cap = (-p).exp();
        let (lo, hi) = (a.min(b) * cap, a.max(b) * cap);
        prop_assume!(lo > 1e-300 && hi > lo * (1.0 + 1e-9));
        prop_assert!(gap_log_integral(lo, p) < gap_log_integral(hi, p));
    }
}

#[test]
fn atomic_sublevel_integrals_converge() {
    let mu = SingularMeasure::dirac(AtomAngle::ratio(0, 1), 1.0).unwrap();
    for c in [(-2.0f64).exp(), 0.99] {
        for p in [0.5, 1.0, 2.0] {
            let r = sublevel_integral(&mu, c, p, 16).unwrap();
            assert_eq!(r.verdict, Verdict::Converges, "c = {c}, p = {p}: {:?}", r.shells);
        }
    }
}

#[test]
fn tree_poisson_integral_matches_simpson() {
    let tree = DyadicTree::new(3, vec![0.1, 0.0, 0.4, 0.05, 0.0, 0.0, 0.2, 0.25]).unwrap();
    let mu = SingularMeasure::new(vec![], Some(tree.clone())).unwrap();
    for z in [
        DiskPoint::new(0.3, 0.1),
        DiskPoint::new(-0.5, -0.6),
        DiskPoint::new(0.0, 0.95),
    ] {
        let got = poisson_integral(&mu, z).unwrap();
        let mut oracle = 0.0;
        for (k, mass) in tree.masses().iter().enumerate() {
            let density = mass * 8.0;
            let (a, b) = (k as f64 / 8.0, (k + 1) as f64 / 8.0);
            let n = 20_000;
            let h = (b - a) / n as f64;
            let kernel = |t: f64| {
                let (s, c) = (2.0 * PI * t).sin_cos();
                let d = (c - z.re).powi(2) + (s - z.im).powi(2);
                (1.0 - z.re * z.re - z.im * z.im) / d
            };
            let mut sum = kernel(a) + kernel(b);
            for j in 1..n {
                sum += kernel(a + j as f64 * h) * if j % 2 == 1 { 4.0 } else { 2.0 };
            }
            oracle += density * sum * h / 3.0;
        }
        assert!((got - oracle).abs() < 1e-8 * oracle.max(1.0), "{got} vs {oracle}");
    }
}
