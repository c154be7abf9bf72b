#![allow(clippy::excessive_precision)]

mod common;

use common::*;
use inner_entropy_core::entropy::{
    accumulated_distortion, accumulated_distortion_of, boundary_profile, conical_distortion, good_lambda_from_profiles,
    local_accumulated_distortion, lp_norm, Quantity, Status,
};
use inner_entropy_core::hypgeo::Mobius;
use inner_entropy_core::innerfn::PostComposed;
use inner_entropy_core::measures::{AtomAngle, CarlesonBox};
use inner_entropy_core::{DiskPoint, InnerFunctionSpec, QuadratureConfig, SingularMeasure};
use proptest::prelude::*;
use std::f64::consts::PI;

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

// 2 log(1+r) - log(1+r²), an antiderivative of μ(z²)(r)·2/(1-r²).
fn square_antiderivative(r: f64) -> f64 {
    2.0 * (1.0 + r).ln() - (1.0 + r * r).ln()
}

// For z² the distortion is radial, so B_α reduces to
// ∫_0^1 4π r φ_m(r) / ((1+r²)(1+r)²) dr with φ_m the half-width of the cone in turns.
fn square_conical_oracle(alpha: f64) -> f64 {
    let c = (alpha * alpha - 1.0).sqrt();
    let phi = |r: f64| ((1.0 - r) * c / (2.0 * r.sqrt())).min(1.0).asin() / PI;
    let g = |r: f64| {
        if r == 0.0 {
            0.0
        } else {
            4.0 * PI * r * phi(r) / ((1.0 + r * r) * (1.0 + r) * (1.0 + r))
        }
    };
    // kink where (1-r)c = 2√r
    let s = (-1.0 + (1.0 + c * c).sqrt()) / c;
    let kink = s * s;
    let simpson = |a: f64, b: f64, n: usize| {
        let h = (b - a) / n as f64;
        let mut sum = g(a) + g(b);
        for k in 1..n {
            sum += g(a + k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        sum * h / 3.0
    };
    simpson(0.0, kink, 1 << 20) + simpson(kink, 1.0, 1 << 20)
}

#[test]
fn square_radial_integral_matches_antiderivative() {
    let total = square_antiderivative(1.0) - square_antiderivative(0.0);
    assert!((total - 2f64.ln()).abs() < 1e-15);
    let f = InnerFunctionSpec::power(2);
    for xi in [0.0, 0.25, 0.613] {
        let a = accumulated_distortion(&f, xi, &cfg()).unwrap();
        assert_eq!(a.status, Status::Finite);
        assert!((a.value - total).abs() < 1e-7);
    }
    for level in [1u32, 3, 6] {
        let q = CarlesonBox::containing(0.0, level);
        let ell = q.ell();
        let local = local_accumulated_distortion(&f, q, 0.0, &cfg()).unwrap();
        let expected = square_antiderivative(1.0) - square_antiderivative(1.0 - ell);
        assert!((local.value - expected).abs() < 1e-7, "level {level}");
    }
}

#[test]
fn square_conical_matches_radial_reduction() {
    let f = InnerFunctionSpec::power(2);
    let frozen = [
        (1.5, 0.295_130_561_310_527_0),
        (2.0, 0.427_000_975_605_347_8),
        (3.0, 0.572_955_534_050_477_0),
    ];
    for (alpha, value) in frozen {
        let oracle = square_conical_oracle(alpha);
        assert!((oracle - value).abs() < 1e-8, "oracle {oracle} vs frozen {value}");
        let b = conical_distortion(&f, 0.0, alpha, &cfg()).unwrap();
        assert!((b.value - value).abs() < 1e-6, "{alpha}: {}", b.value);
    }
}

#[test]
fn worked_example_sweep() {
    for k in 1..10 {
        let a = k as f64 / 10.0;
        let f = InnerFunctionSpec::blaschke(&[DiskPoint::ORIGIN, DiskPoint::new(a, 0.0)]).unwrap();
        let v = accumulated_distortion(&f, 0.0, &cfg()).unwrap();
        assert!(
            (v.value - ((1.0 + a).ln() + 2f64.ln())).abs() < 1e-6,
            "a = {a}: {}",
            v.value
        );
    }
}

#[test]
fn cone_grows_with_aperture() {
    let mut r = rng(21);
    let specs = [
        InnerFunctionSpec::power(2),
        blaschke_through_origin(&mut r, 2, 0.8),
        mixed_spec(),
    ];
    for f in &specs {
        for xi in [0.05, 0.4, 0.77] {
            let mut last = 0.0;
            for alpha in [1.2, 1.5, 2.0, 3.0] {
                let b = conical_distortion(f, xi, alpha, &cfg()).unwrap();
                assert!(b.value >= last - 1e-7, "{alpha}: {} < {last}", b.value);
                last = b.value;
            }
        }
    }
}

#[test]
fn local_integral_is_below_full_integral() {
    let mut r = rng(23);
    let specs = [blaschke_through_origin(&mut r, 3, 0.9), mixed_spec()];
    for f in &specs {
        for k in 0..8 {
            let xi = k as f64 / 8.0 + 0.01;
            let full = accumulated_distortion(f, xi, &cfg()).unwrap();
            for level in [1, 4, 9] {
                let local = local_accumulated_distortion(f, CarlesonBox::containing(xi, level), xi, &cfg()).unwrap();
                assert!(local.value <= full.value + 1e-8);
            }
        }
    }
}

#[test]
fn conical_and_radial_share_finiteness() {
    let f = InnerFunctionSpec::singular(SingularMeasure::dirac(AtomAngle::ratio(0, 1), 1.0).unwrap());
    for xi in [0.0, 0.25, 0.5] {
        let a = accumulated_distortion(&f, xi, &cfg()).unwrap();
        let b = conical_distortion(&f, xi, 2.0, &cfg()).unwrap();
        assert_eq!(a.status == Status::Finite, b.status == Status::Finite, "{xi}");
    }
}

#[test]
fn conical_over_radial_ratio_regression() {
    let mut r = rng(29);
    let f = blaschke_through_origin(&mut r, 2, 0.8);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for k in 0..16 {
        let xi = k as f64 / 16.0;
        let a = accumulated_distortion(&f, xi, &cfg()).unwrap();
        let b = conical_distortion(&f, xi, 2.0, &cfg()).unwrap();
        assert_eq!(a.status, b.status);
        let q = b.value / a.value;
        lo = lo.min(q);
        hi = hi.max(q);
    }
    assert!(lo > 0.0 && hi.is_finite());
    assert!(
        (lo - RATIO_MIN).abs() < 1e-5 && (hi - RATIO_MAX).abs() < 1e-5,
        "{lo} {hi}"
    );
}

// B_2/A over a 16-point grid for the seeded three-zero product, frozen from a run.
const RATIO_MIN: f64 = 0.604_878_538;
const RATIO_MAX: f64 = 0.914_987_189;

#[test]
fn lp_norms_follow_pointwise_estimate() {
    let mut r = rng(31);
    for _ in 0..3 {
        let f = blaschke_through_origin(&mut r, 3, 0.9);
        let a = boundary_profile(&f, 64, Quantity::A, &cfg()).unwrap();
        let l = boundary_profile(&f, 64, Quantity::LogFp, &cfg()).unwrap();
        assert!(a.all_finite() && l.all_finite());
        for p in [0.5, 1.0, 2.0] {
            let na = lp_norm(&a, p).unwrap().norm;
            let nl = lp_norm(&l, p).unwrap().norm;
            assert!(na <= nl + 1e-7, "p = {p}: {na} > {nl}");
        }
    }
}

#[test]
fn automorphism_post_composition_keeps_accumulated_distortion() {
    let mut r = rng(37);
    let f = blaschke_through_origin(&mut r, 2, 0.85);
    for (a, theta) in [(DiskPoint::new(0.3, -0.2), 0.1), (DiskPoint::new(-0.7, 0.5), 0.6)] {
        let g = PostComposed {
            outer: Mobius::new(a, theta).unwrap(),
            inner: &f,
        };
        for xi in [0.0, 0.3, 0.71] {
            let lhs = accumulated_distortion_of(&g, xi, &cfg()).unwrap().value;
            let rhs = accumulated_distortion(&f, xi, &cfg()).unwrap().value;
            assert!((lhs - rhs).abs() < 1e-8, "{lhs} vs {rhs}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn good_lambda_numerator_shrinks(
        seed in 0u64..50,
        lambda in 0.05..2.0f64,
        e1 in 0.01..5.0f64, e2 in 0.01..5.0f64,
        m1 in 2.01..6.0f64, m2 in 2.01..6.0f64,
    ) {
        let mut r = rng(seed);
        let f = blaschke_through_origin(&mut r, 2, 0.95);
        let a = boundary_profile(&f, 32, Quantity::A, &cfg()).unwrap();
        let l = boundary_profile(&f, 32, Quantity::LogFp, &cfg()).unwrap();
        let (elo, ehi) = (e1.min(e2), e1.max(e2));
        let (mlo, mhi) = (m1.min(m2), m1.max(m2));
        let t_lo = good_lambda_from_profiles(&a, &l, mlo, 0.5, &[lambda], &[elo, ehi]).unwrap();
        let t_hi = good_lambda_from_profiles(&a, &l, mhi, 0.5, &[lambda], &[elo, ehi]).unwrap();
        prop_assert!(t_lo.numerator[0][0] <= t_lo.numerator[0][1]);
        prop_assert!(t_hi.numerator[0][1] <= t_lo.numerator[0][1]);
        prop_assert!(t_lo.numerator[0][1] <= t_lo.denominator[0]);
    }
}
