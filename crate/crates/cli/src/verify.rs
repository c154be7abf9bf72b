//! Invariant suites run by `verify`.
//!
//! Each check samples from a fixed-seed generator, so reports are
//! reproducible. A check that does not apply to the given function is
//! reported as skipped.

use crate::commands::parallel_profile;
use crate::output::{header, json_doc, Output};
use crate::{Cli, CliError};
use inner_entropy_core::entropy::{
    accumulated_distortion, check_laplacian, conical_distortion, local_accumulated_distortion, pointwise_from_profiles,
    Quantity, Status,
};
use inner_entropy_core::hypgeo::{hyperbolic_distance, mobius_apply, Mobius};
use inner_entropy_core::innerfn::{
    angular_derivative_closed_form, angular_derivative_radial, evaluate, g_quotient, grad_g, hyperbolic_derivative,
    PostComposed, RadialStatus,
};
use inner_entropy_core::measures::{
    classify_bc, generalized_cantor, heavy_light_decompose, CantorRule, CarlesonBox, Verdict, CLASSIFY_DEPTH,
};
use inner_entropy_core::{DiskPoint, InnerFunctionSpec, QuadratureConfig, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

const SEED: u64 = 0x1e57;
/// Grid of the pointwise check.
const POINTWISE_GRID: usize = 256;
/// Default heavy threshold for the decomposition check.
const DEFAULT_M: f64 = 4.0;

struct Check {
    name: &'static str,
    outcome: Outcome,
}

enum Outcome {
    Pass(String),
    Fail(String),
    Skip(String),
}

fn judge(ok: bool, detail: String) -> Outcome {
    if ok {
        Outcome::Pass(detail)
    } else {
        Outcome::Fail(detail)
    }
}

fn point(rng: &mut ChaCha8Rng, max_modulus: f64) -> DiskPoint {
    DiskPoint::from_polar(max_modulus * rng.gen::<f64>().sqrt(), rng.gen())
}

fn schwarz_pick(f: &InnerFunctionSpec, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for _ in 0..2000 {
        worst = worst.max(hyperbolic_derivative(f, point(rng, 1.0 - 1e-9))?);
    }
    Ok(judge(worst <= 1.0, format!("max D_h {worst:.17} over 2000 points")))
}

fn automorphism_invariance(f: &InnerFunctionSpec, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let phi = Mobius::new(point(rng, 0.9), rng.gen())?;
        let g = PostComposed { outer: phi, inner: f };
        for _ in 0..20 {
            let z = point(rng, 0.999);
            worst = worst.max((g.hyperbolic_derivative(z)? - hyperbolic_derivative(f, z)?).abs());
        }
    }
    Ok(judge(
        worst < 1e-10,
        format!("max |D_h(phi o f) - D_h f| {worst:.3e} (tol 1e-10)"),
    ))
}

fn laplacian(f: &InnerFunctionSpec, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let points: Vec<DiskPoint> = (0..100).map(|_| point(rng, 0.9)).collect();
    let r = check_laplacian(f, &points, 1e-4)?;
    Ok(judge(
        r.max_relative_error < 1e-3,
        format!("max relative error {:.3e} (tol 1e-3)", r.max_relative_error),
    ))
}

fn gradient(f: &InnerFunctionSpec, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let z = point(rng, 0.9);
        let h = 1e-6 * (1.0 - z.modulus());
        let gx = (g_quotient(f, DiskPoint::new(z.re + h, z.im))? - g_quotient(f, DiskPoint::new(z.re - h, z.im))?)
            / (2.0 * h);
        let gy = (g_quotient(f, DiskPoint::new(z.re, z.im + h))? - g_quotient(f, DiskPoint::new(z.re, z.im - h))?)
            / (2.0 * h);
        let g = grad_g(f, z)?;
        let scale = 1.0f64.max(g[0].abs()).max(g[1].abs());
        worst = worst.max((g[0] - gx).abs().max((g[1] - gy).abs()) / scale);
    }
    Ok(judge(
        worst < 1e-6,
        format!("max scaled difference {worst:.3e} (tol 1e-6)"),
    ))
}

fn gradient_bound(f: &InnerFunctionSpec, rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let rad = 0.5 + 0.5 * rng.gen::<f64>() * (1.0 - 1e-9);
        let g = grad_g(f, DiskPoint::from_polar(rad, rng.gen()))?;
        worst = worst.max(rad.ln().abs() * g[0].hypot(g[1]));
    }
    Ok(judge(
        worst <= 4.0 + 1e-9,
        format!("max |log|z|| |grad G| {worst:.6} (bound 4)"),
    ))
}

fn radial_quotient(f: &InnerFunctionSpec, rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let xi = rng.gen::<f64>();
        let bound = f.angular_derivative_at_angle(xi);
        if !bound.is_finite() {
            continue;
        }
        for k in 1..30 {
            let delta = 0.5f64.powi(k);
            worst = worst.max(f.one_minus_modulus_polar(xi, delta) / delta / bound);
        }
    }
    judge(
        worst <= 4.0 + 1e-9,
        format!("max (1-|f(r xi)|)/((1-r)|f'(xi)|) {worst:.6} (bound 4)"),
    )
}

fn radial_vs_closed(f: &InnerFunctionSpec, cfg: &QuadratureConfig) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    let mut finite = 0;
    for k in 0..16 {
        let xi = DiskPoint::on_circle(k as f64 / 16.0 + 0.013);
        let closed = angular_derivative_closed_form(f, xi)?;
        let radial = angular_derivative_radial(f, xi, cfg)?;
        if radial.status == RadialStatus::Finite {
            finite += 1;
            worst = worst.max((radial.estimate - closed).abs() / closed);
        }
    }
    Ok(judge(
        worst < 1e-3,
        format!("max relative difference {worst:.3e} over {finite}/16 finite radial estimates (tol 1e-3)"),
    ))
}

fn pointwise(f: &InnerFunctionSpec, cfg: &QuadratureConfig) -> std::result::Result<Outcome, CliError> {
    let v = evaluate(f, DiskPoint::ORIGIN)?.value.norm();
    if v > 1e-12 {
        return Ok(Outcome::Skip(format!("needs f(0) = 0, |f(0)| = {v:.3e}")));
    }
    let a = parallel_profile(f, POINTWISE_GRID, Quantity::A, cfg)?;
    let l = parallel_profile(f, POINTWISE_GRID, Quantity::LogFp, cfg)?;
    let r = pointwise_from_profiles(&a, &l, cfg);
    let detail = match r.max_defect {
        Some(d) => format!(
            "max (A - logfp) {d:.3e} on {POINTWISE_GRID} angles (budget {:.1e})",
            r.budget
        ),
        None => format!("no finite entries on {POINTWISE_GRID} angles"),
    };
    Ok(judge(r.passed(), detail))
}

fn local_below_global(f: &InnerFunctionSpec, cfg: &QuadratureConfig) -> Result<Outcome> {
    let mut checked = 0;
    let mut violations = 0;
    for k in 0..16 {
        let xi = (k as f64 + 0.37) / 16.0;
        let a = accumulated_distortion(f, xi, cfg)?;
        if a.status != Status::Finite {
            continue;
        }
        for level in [1, 3, 6] {
            let q = local_accumulated_distortion(f, CarlesonBox::containing(xi, level), xi, cfg)?;
            checked += 1;
            if q.value > a.value + 2.0 * cfg.abs_tol {
                violations += 1;
            }
        }
    }
    Ok(judge(
        violations == 0,
        format!("{violations} violations of A_Q <= A in {checked} comparisons"),
    ))
}

fn conical_monotone(f: &InnerFunctionSpec, cfg: &QuadratureConfig) -> Result<Outcome> {
    let alphas = [1.5, 2.0, 3.0];
    let mut checked = 0;
    let mut violations = 0;
    for k in 0..8 {
        let xi = (k as f64 + 0.21) / 8.0;
        let vals = alphas
            .iter()
            .map(|a| conical_distortion(f, xi, *a, cfg))
            .collect::<Result<Vec<_>>>()?;
        if vals.iter().any(|v| v.status != Status::Finite) {
            continue;
        }
        checked += 1;
        if vals.windows(2).any(|w| w[1].value < w[0].value - 2.0 * cfg.abs_tol) {
            violations += 1;
        }
    }
    Ok(judge(
        violations == 0,
        format!("{violations} decreases in alpha over {checked} angles"),
    ))
}

fn decomposition(f: &InnerFunctionSpec, m: f64) -> Result<Outcome> {
    let mu = f.singular_measure();
    if mu.is_zero() {
        return Ok(Outcome::Skip("no singular part".into()));
    }
    if mu.atoms().iter().any(|a| a.angle.as_exact().is_none()) {
        return Ok(Outcome::Skip("atom angles are not exact".into()));
    }
    let r = heavy_light_decompose(mu, m, 16)?.verify();
    Ok(judge(
        r.passed(),
        format!(
            "M={m}: {} heavy, {} light, containment {}, properties {} {} {:?}",
            r.heavy_count, r.light_count, r.containment, r.property1, r.property2, r.property3
        ),
    ))
}

fn bc_corpus() -> Result<Outcome> {
    let cases = [
        (CantorRule::THIRDS, 1.0, Verdict::Converges),
        (CantorRule::THIRDS, 2.0, Verdict::Converges),
        (CantorRule::POLY2, 0.5, Verdict::Converges),
        (CantorRule::POLY2, 1.0, Verdict::Diverges),
        (CantorRule::Power(2.5), 2.0, Verdict::Diverges),
        (CantorRule::Power(1.5), 0.5, Verdict::Diverges),
    ];
    let mut bad = Vec::new();
    for (rule, p, want) in cases {
        let c = classify_bc(&generalized_cantor(rule, 40)?, p, CLASSIFY_DEPTH)?;
        if c.unanimous != Some(want) {
            bad.push(format!("{rule:?} p={p}"));
        }
    }
    Ok(judge(
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} fixtures unanimous as expected", cases.len())
        } else {
            format!("unexpected verdicts: {}", bad.join(", "))
        },
    ))
}

fn geometry(rng: &mut ChaCha8Rng) -> Result<Outcome> {
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let (a, theta) = (point(rng, 0.9), rng.gen());
        let (z, w) = (point(rng, 0.99), point(rng, 0.99));
        let before = hyperbolic_distance(z, w)?;
        let after = hyperbolic_distance(mobius_apply(a, theta, z)?, mobius_apply(a, theta, w)?)?;
        worst = worst.max((after - before).abs() / before.max(1.0));
    }
    Ok(judge(
        worst < 1e-12,
        format!("max change of d_h under automorphisms {worst:.3e} (tol 1e-12)"),
    ))
}

fn settle(name: &'static str, r: std::result::Result<Outcome, CliError>) -> Check {
    Check {
        name,
        outcome: r.unwrap_or_else(|e| Outcome::Fail(format!("error: {e}"))),
    }
}

pub fn run(f: &InnerFunctionSpec, cli: &Cli, cfg: &QuadratureConfig) -> std::result::Result<Output, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let m = cli.m.unwrap_or(DEFAULT_M);
    let checks = vec![
        settle(
            "spot_check",
            f.spot_check(256)
                .map(|()| Outcome::Pass("256 samples".into()))
                .map_err(Into::into),
        ),
        settle("schwarz_pick", schwarz_pick(f, &mut rng).map_err(Into::into)),
        settle(
            "automorphism_invariance",
            automorphism_invariance(f, &mut rng).map_err(Into::into),
        ),
        settle("laplacian", laplacian(f, &mut rng).map_err(Into::into)),
        settle("gradient", gradient(f, &mut rng).map_err(Into::into)),
        settle("gradient_bound", gradient_bound(f, &mut rng).map_err(Into::into)),
        settle("radial_quotient", Ok(radial_quotient(f, &mut rng))),
        settle("radial_vs_closed_form", radial_vs_closed(f, cfg).map_err(Into::into)),
        settle("pointwise", pointwise(f, cfg)),
        settle("local_below_global", local_below_global(f, cfg).map_err(Into::into)),
        settle("conical_monotone", conical_monotone(f, cfg).map_err(Into::into)),
        settle("heavy_light", decomposition(f, m).map_err(Into::into)),
        settle("bc_corpus", bc_corpus().map_err(Into::into)),
        settle("geometry", geometry(&mut rng).map_err(Into::into)),
    ];
    let mut failed = Vec::new();
    let list: Vec<Value> = checks
        .iter()
        .map(|c| {
            let (status, detail) = match &c.outcome {
                Outcome::Pass(d) => ("pass", d),
                Outcome::Fail(d) => {
                    failed.push(c.name);
                    ("fail", d)
                }
                Outcome::Skip(d) => ("skip", d),
            };
            json!({ "name": c.name, "status": status, "detail": detail })
        })
        .collect();
    let mut body = Map::new();
    body.insert("checks".into(), Value::Array(list));
    body.insert("passed".into(), json!(failed.is_empty()));
    let text = json_doc(&header("verify", None, cfg), body);
    let failure = (!failed.is_empty()).then(|| format!("failed checks: {}", failed.join(", ")));
    Ok(Output { text, failure })
}
