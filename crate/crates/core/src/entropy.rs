//! Accumulated Möbius distortion along radii, inside Carleson boxes and over
//! Stolz angles, boundary profiles with their `L^p` norms, and empirical
//! checks of the pointwise estimate, the Laplacian identity and the good-λ
//! sets.
//!
//! Radial integrals use the hyperbolic length `t = log((1+r)/(1-r))` as the
//! variable, so `A(f)(ξ) = ∫_0^∞ μ(f)(r(t)ξ) dt` with `1 - r(t) = 2e^{-t}/(1+e^{-t})`.

use crate::error::{Error, Result};
use crate::hypgeo::{hyperbolic_distance, DiskPoint};
use crate::innerfn::{evaluate, hyperbolic_derivative, HyperbolicDerivative, InnerFunctionSpec};
use crate::math::{self, frac};
use crate::measures::CarlesonBox;
use crate::quad::{integrate, Stop};
use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

pub use crate::config::QuadratureConfig;

/// How a truncated integral ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    /// Integrand at `t_max` is small enough that the tail is negligible.
    Finite,
    /// Integrated to `t_max` but the integrand has not decayed.
    Truncated,
    /// The running integral passed the divergence cap.
    Diverged,
}

impl Status {
    /// Lower-case name.
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Finite => "finite",
            Self::Truncated => "truncated",
            Self::Diverged => "diverged",
        }
    }
}

/// Value of a distortion integral with its status.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    /// Integral up to `t_max`, or the cap when diverged.
    pub value: f64,
    /// Tail classification.
    pub status: Status,
    /// Quadrature error estimate.
    pub error: f64,
}

/// Boundary quantity tabulated by [`boundary_profile`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quantity {
    /// `A(f)(ξ)`.
    A,
    /// `log|f'(ξ)|` from the closed form.
    LogFp,
    /// `B_α(f)(ξ)`.
    BAlpha {
        /// Stolz aperture, `> 1`.
        alpha: f64,
    },
    /// `A_Q(f)(ξ)` with `Q` the dyadic box of the given level containing `ξ`.
    AQ {
        /// Dyadic level of the box.
        level: u32,
    },
}

impl Quantity {
    /// Short name used in table headers.
    pub fn name(self) -> &'static str {
        match self {
            Self::A => "A",
            Self::LogFp => "logfp",
            Self::BAlpha { .. } => "B_alpha",
            Self::AQ { .. } => "A_Q",
        }
    }
}

/// A boundary function sampled at `k/n`, `k = 0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryProfile {
    /// Tabulated quantity.
    pub quantity: Quantity,
    /// Angles in turns.
    pub points: Vec<f64>,
    /// Values; diverged entries hold the cap.
    pub values: Vec<f64>,
    /// Per-point status.
    pub status: Vec<Status>,
    /// Points where the quadrature budget ran out.
    pub budget_exhausted: Vec<bool>,
}

impl BoundaryProfile {
    /// Number of grid points.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// True for an empty grid.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Value with diverged entries read as `+∞`.
    pub fn extended_value(&self, k: usize) -> f64 {
        match self.status[k] {
            Status::Diverged => f64::INFINITY,
            _ => self.values[k],
        }
    }

    /// True when no entry diverged.
    pub fn all_finite(&self) -> bool {
        self.status.iter().all(|s| *s != Status::Diverged)
    }
}

fn delta_of(t: f64) -> f64 {
    let e = math::exp(-t);
    2.0 * e / (1.0 + e)
}

fn t_of_radius(r: f64) -> f64 {
    math::ln1p(r) - math::ln1p(-r)
}

// ∫_{t0}^{t_max} g(t) dt with the common truncation contract; `g` must be nonnegative.
fn run<F>(mut g: F, t0: f64, cfg: &QuadratureConfig) -> Result<Integral>
where
    F: FnMut(f64) -> Result<f64>,
{
    cfg.validate()?;
    if t0 >= cfg.t_max {
        return Ok(Integral {
            value: 0.0,
            status: Status::Finite,
            error: 0.0,
        });
    }
    let pieces = math::ceil((cfg.t_max - t0) / 4.0) as usize;
    let out = integrate(
        &mut g,
        t0,
        cfg.t_max,
        pieces,
        cfg.abs_tol,
        cfg.max_subdivisions,
        cfg.divergence_cap,
    )?;
    match out.stop {
        Stop::Capped => Ok(Integral {
            value: cfg.divergence_cap,
            status: Status::Diverged,
            error: out.error,
        }),
        Stop::Budget => Err(Error::Budget {
            subdivisions: out.subdivisions,
            error_estimate: out.error,
        }),
        Stop::Converged => {
            let status = if g(cfg.t_max)? < cfg.abs_tol / cfg.t_max {
                Status::Finite
            } else {
                Status::Truncated
            };
            Ok(Integral {
                value: out.value,
                status,
                error: out.error,
            })
        }
    }
}

fn radial<H: HyperbolicDerivative + ?Sized>(h: &H, xi: f64, t0: f64, cfg: &QuadratureConfig) -> Result<Integral> {
    run(|t| Ok(1.0 - h.hyperbolic_derivative_polar(xi, delta_of(t))?), t0, cfg)
}

fn check_angle(xi: f64) -> Result<f64> {
    if xi.is_finite() {
        Ok(frac(xi))
    } else {
        Err(Error::OffCircle { modulus: xi })
    }
}

/// `A(f)(ξ) = ∫_0^1 μ(f)(rξ) 2dr/(1-r²)` at the boundary angle `xi` (turns).
pub fn accumulated_distortion(f: &InnerFunctionSpec, xi: f64, cfg: &QuadratureConfig) -> Result<Integral> {
    accumulated_distortion_of(f, xi, cfg)
}

/// [`accumulated_distortion`] for any map with a hyperbolic derivative.
pub fn accumulated_distortion_of<H: HyperbolicDerivative + ?Sized>(
    h: &H,
    xi: f64,
    cfg: &QuadratureConfig,
) -> Result<Integral> {
    radial(h, check_angle(xi)?, 0.0, cfg)
}

/// `A_Q(f)(ξ) = ∫_{1-ℓ(Q)}^1 μ(f)(rξ) 2dr/(1-r²)` for `ξ ∈ I(Q)`.
pub fn local_accumulated_distortion(
    f: &InnerFunctionSpec,
    q: CarlesonBox,
    xi: f64,
    cfg: &QuadratureConfig,
) -> Result<Integral> {
    let xi = check_angle(xi)?;
    if !q.base.contains_angle(xi) {
        return Err(Error::OutsideArc { angle: xi });
    }
    let ell = q.ell();
    radial(f, xi, math::ln((2.0 - ell) / ell), cfg)
}

/// `B_α(f)(ξ) = ∫_{Γ(ξ,α)} μ(f)(z) dA(z)/(1-|z|²)²` over the Stolz angle
/// `Γ(ξ, α) = {z : |z - ξ| < α(1 - |z|)}`.
///
/// On the circle `|z| = r(t)` the angle is the arc `|φ - ξ| < φ_m(t)` with
/// `sin(πφ_m) = (1-r)√(α²-1)/(2√r)`, and
/// `B_α = ∫ dt · πrφ_m/(1-r²) · ∫_{-1}^{1} μ(f)(r e^{2πi(ξ+φ_m s)}) ds`.
pub fn conical_distortion(f: &InnerFunctionSpec, xi: f64, alpha: f64, cfg: &QuadratureConfig) -> Result<Integral> {
    conical_distortion_of(f, xi, alpha, cfg)
}

/// [`conical_distortion`] for any map with a hyperbolic derivative.
pub fn conical_distortion_of<H: HyperbolicDerivative + ?Sized>(
    h: &H,
    xi: f64,
    alpha: f64,
    cfg: &QuadratureConfig,
) -> Result<Integral> {
    let xi = check_angle(xi)?;
    if !(alpha > 1.0 && alpha.is_finite()) {
        return Err(Error::Precondition(format!("alpha must exceed 1, got {alpha}")));
    }
    let spread = math::sqrt(alpha * alpha - 1.0);
    let slice = |t: f64| -> Result<f64> {
        let delta = delta_of(t);
        let r = 1.0 - delta;
        if r <= 0.0 {
            return Ok(0.0);
        }
        let phi_m = math::asin((delta * spread / (2.0 * math::sqrt(r))).min(1.0)) / PI;
        let pre = PI * r * phi_m / (delta * (2.0 - delta));
        let tol = cfg.abs_tol / (2.0 * cfg.t_max * pre);
        let inner = integrate(
            |s| Ok(1.0 - h.hyperbolic_derivative_polar(xi + phi_m * s, delta)?),
            -1.0,
            1.0,
            2,
            tol,
            cfg.max_subdivisions,
            f64::INFINITY,
        )?;
        if inner.stop == Stop::Budget {
            return Err(Error::Budget {
                subdivisions: inner.subdivisions,
                error_estimate: inner.error * pre,
            });
        }
        Ok(pre * inner.value)
    };
    run(slice, 0.0, cfg)
}

/// Value, status and budget flag of one profile entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileEntry {
    /// Value; the cap when diverged.
    pub value: f64,
    /// Status.
    pub status: Status,
    /// The quadrature budget ran out at this point.
    pub budget_exhausted: bool,
}

/// Evaluates one profile entry at `angle`. A budget error becomes a diverged
/// entry with its flag set; other errors propagate.
pub fn profile_point(
    f: &InnerFunctionSpec,
    angle: f64,
    quantity: Quantity,
    cfg: &QuadratureConfig,
) -> Result<ProfileEntry> {
    let result = match quantity {
        Quantity::A => accumulated_distortion(f, angle, cfg),
        Quantity::BAlpha { alpha } => conical_distortion(f, angle, alpha, cfg),
        Quantity::AQ { level } => local_accumulated_distortion(f, CarlesonBox::containing(angle, level), angle, cfg),
        Quantity::LogFp => {
            let v = f.log_angular_derivative(angle);
            return Ok(if v.is_finite() {
                ProfileEntry {
                    value: v,
                    status: Status::Finite,
                    budget_exhausted: false,
                }
            } else {
                ProfileEntry {
                    value: cfg.divergence_cap,
                    status: Status::Diverged,
                    budget_exhausted: false,
                }
            });
        }
    };
    match result {
        Ok(i) => Ok(ProfileEntry {
            value: i.value,
            status: i.status,
            budget_exhausted: false,
        }),
        Err(Error::Budget { .. }) => Ok(ProfileEntry {
            value: cfg.divergence_cap,
            status: Status::Diverged,
            budget_exhausted: true,
        }),
        Err(e) => Err(e),
    }
}

/// Grid angles `k/n`, `k = 0..n`.
pub fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| k as f64 / n as f64).collect()
}

/// Assembles a profile from entries computed at [`grid`]`(entries.len())`.
pub fn profile_from_entries(quantity: Quantity, entries: &[ProfileEntry]) -> BoundaryProfile {
    BoundaryProfile {
        quantity,
        points: grid(entries.len()),
        values: entries.iter().map(|e| e.value).collect(),
        status: entries.iter().map(|e| e.status).collect(),
        budget_exhausted: entries.iter().map(|e| e.budget_exhausted).collect(),
    }
}

/// Tabulates `quantity` at the angles `k/n`.
pub fn boundary_profile(
    f: &InnerFunctionSpec,
    n: usize,
    quantity: Quantity,
    cfg: &QuadratureConfig,
) -> Result<BoundaryProfile> {
    if n == 0 {
        return Err(Error::Precondition("grid size must be at least 1".into()));
    }
    cfg.validate()?;
    let entries = grid(n)
        .into_iter()
        .map(|a| profile_point(f, a, quantity, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(profile_from_entries(quantity, &entries))
}

/// `L^p` norm of a profile and its diverged fraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpNorm {
    /// `(Σ_{non-diverged} |v_k|^p / n)^{1/p}`.
    pub norm: f64,
    /// Share of diverged points.
    pub diverged_fraction: f64,
}

/// Riemann-sum `L^p` norm over the non-diverged entries, normalised by the full grid size.
pub fn lp_norm(profile: &BoundaryProfile, p: f64) -> Result<LpNorm> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::Precondition(format!("p must be positive, got {p}")));
    }
    let n = profile.len();
    if n == 0 {
        return Ok(LpNorm {
            norm: 0.0,
            diverged_fraction: 0.0,
        });
    }
    let mut sum = 0.0;
    let mut diverged = 0usize;
    for (v, s) in profile.values.iter().zip(&profile.status) {
        if *s == Status::Diverged {
            diverged += 1;
        } else {
            sum += math::powf(v.abs(), p);
        }
    }
    Ok(LpNorm {
        norm: math::powf(sum / n as f64, 1.0 / p),
        diverged_fraction: diverged as f64 / n as f64,
    })
}

fn require_origin_zero(f: &InnerFunctionSpec) -> Result<()> {
    let m = evaluate(f, DiskPoint::ORIGIN)?.value.norm();
    if m > 1e-12 {
        return Err(Error::Precondition(format!("f(0) must vanish, |f(0)| = {m}")));
    }
    Ok(())
}

/// Outcome of [`check_pointwise`].
#[derive(Debug, Clone, PartialEq)]
pub struct PointwiseReport {
    /// `A(f)(ξ_k) - log|f'(ξ_k)|` at each grid point, `None` where either side is not finite.
    pub defects: Vec<Option<f64>>,
    /// Largest defect over the compared points.
    pub max_defect: Option<f64>,
    /// Angle of the largest defect.
    pub worst_angle: Option<f64>,
    /// Allowed excess, `10·abs_tol`.
    pub budget: f64,
}

impl PointwiseReport {
    /// `max_defect ≤ budget` (vacuous when nothing was compared).
    pub fn passed(&self) -> bool {
        self.max_defect.map_or(true, |d| d <= self.budget)
    }
}

/// Checks `A(f)(ξ) ≤ log|f'(ξ)|` on the grid `k/n`; requires `f(0) = 0`.
pub fn check_pointwise(f: &InnerFunctionSpec, n: usize, cfg: &QuadratureConfig) -> Result<PointwiseReport> {
    require_origin_zero(f)?;
    let a = boundary_profile(f, n, Quantity::A, cfg)?;
    let l = boundary_profile(f, n, Quantity::LogFp, cfg)?;
    Ok(pointwise_from_profiles(&a, &l, cfg))
}

/// [`check_pointwise`] on precomputed `A` and `logfp` profiles over the same grid.
pub fn pointwise_from_profiles(
    a: &BoundaryProfile,
    logfp: &BoundaryProfile,
    cfg: &QuadratureConfig,
) -> PointwiseReport {
    let defects: Vec<Option<f64>> = (0..a.len())
        .map(|k| {
            (a.status[k] == Status::Finite && logfp.status[k] == Status::Finite).then(|| a.values[k] - logfp.values[k])
        })
        .collect();
    let worst = defects.iter().enumerate().filter_map(|(k, d)| d.map(|d| (k, d))).fold(
        None,
        |best: Option<(usize, f64)>, (k, d)| match best {
            Some((_, b)) if b >= d => best,
            _ => Some((k, d)),
        },
    );
    PointwiseReport {
        defects,
        max_defect: worst.map(|w| w.1),
        worst_angle: worst.map(|w| a.points[w.0]),
        budget: 10.0 * cfg.abs_tol,
    }
}

/// Outcome of [`check_laplacian`].
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianReport {
    /// Five-point Laplacian of `G(f)` at each point.
    pub lhs: Vec<f64>,
    /// `4(1 - D_h f²)/(1-|z|²)²` at each point.
    pub rhs: Vec<f64>,
    /// `max |lhs - rhs| / max(|rhs|, 1)`.
    pub max_relative_error: f64,
}

/// Compares a five-point Laplacian of `G(f)`, step `h_scale·(1-|z|)`, with
/// `4(1 - D_h f(z)²)/(1-|z|²)²` at points with `|z| ≤ 0.9`.
pub fn check_laplacian(f: &InnerFunctionSpec, points: &[DiskPoint], h_scale: f64) -> Result<LaplacianReport> {
    if !(h_scale > 0.0 && h_scale < 1.0) {
        return Err(Error::Precondition(format!(
            "h_scale must lie in (0, 1), got {h_scale}"
        )));
    }
    let g = |re: f64, im: f64| crate::innerfn::g_quotient(f, DiskPoint::new(re, im));
    let mut lhs = Vec::with_capacity(points.len());
    let mut rhs = Vec::with_capacity(points.len());
    let mut worst: f64 = 0.0;
    for z in points {
        let r = z.modulus();
        if r.is_nan() || r > 0.9 {
            return Err(Error::Precondition(format!("points need |z| ≤ 0.9, got {r}")));
        }
        let h = h_scale * (1.0 - r);
        let c = g(z.re, z.im)?;
        let sum = g(z.re + h, z.im)? + g(z.re - h, z.im)? + g(z.re, z.im + h)? + g(z.re, z.im - h)?;
        let l = (sum - 4.0 * c) / (h * h);
        let d = hyperbolic_derivative(f, *z)?;
        let omsq = z.one_minus_sq();
        let rr = 4.0 * (1.0 - d * d) / (omsq * omsq);
        worst = worst.max((l - rr).abs() / rr.abs().max(1.0));
        lhs.push(l);
        rhs.push(rr);
    }
    Ok(LaplacianReport {
        lhs,
        rhs,
        max_relative_error: worst,
    })
}

/// `sup |∫_ℓ^{|z|} μ(f)(sξ_z) 2ds/(1-s²) - ∫_ℓ^{|w|} μ(f)(sξ_w) 2ds/(1-s²)| / d_h(z, w)`
/// over the pairs, skipping `z = w`.
pub fn radial_oscillation_stat(
    f: &InnerFunctionSpec,
    pairs: &[(DiskPoint, DiskPoint)],
    ell: f64,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    if !(0.0..1.0).contains(&ell) {
        return Err(Error::Precondition(format!("ell must lie in [0, 1), got {ell}")));
    }
    let t0 = t_of_radius(ell);
    let partial = |z: DiskPoint| -> Result<f64> {
        let r = z.interior()?.modulus();
        if r <= ell {
            return Err(Error::Precondition(format!("|z| = {r} must exceed ell = {ell}")));
        }
        let mut c = *cfg;
        c.t_max = t_of_radius(r);
        if c.t_max <= t0 {
            return Ok(0.0);
        }
        let angle = z.angle();
        let pieces = math::ceil((c.t_max - t0) / 4.0) as usize;
        let out = integrate(
            |t| Ok(1.0 - f.hyperbolic_derivative_polar(angle, delta_of(t))?),
            t0,
            c.t_max,
            pieces,
            cfg.abs_tol,
            cfg.max_subdivisions,
            f64::INFINITY,
        )?;
        if out.stop == Stop::Budget {
            return Err(Error::Budget {
                subdivisions: out.subdivisions,
                error_estimate: out.error,
            });
        }
        Ok(out.value)
    };
    let mut stat: f64 = 0.0;
    for (z, w) in pairs {
        let d = hyperbolic_distance(*z, *w)?;
        let (iz, iw) = (partial(*z)?, partial(*w)?);
        if d == 0.0 {
            continue;
        }
        stat = stat.max((iz - iw).abs() / d);
    }
    Ok(stat)
}

/// Grid fractions of the good-λ sets.
#[derive(Debug, Clone, PartialEq)]
pub struct GoodLambdaTable {
    /// `M`.
    pub m: f64,
    /// `η`.
    pub eta: f64,
    /// λ grid.
    pub lambdas: Vec<f64>,
    /// ε grid.
    pub epsilons: Vec<f64>,
    /// `m{log|f'| ≥ λ}` per λ.
    pub denominator: Vec<f64>,
    /// `m{log|f'| ≥ Mλ, A(f) ≤ ελ}` indexed `[λ][ε]`.
    pub numerator: Vec<Vec<f64>>,
    /// `numerator / denominator`, zero when the denominator set is empty.
    pub ratio: Vec<Vec<f64>>,
    /// Per λ, the largest ε with `ratio ≤ η`.
    pub best_epsilon: Vec<Option<f64>>,
}

/// Good-λ scan on the grid `k/n`; requires `f(0) = 0`, `M > 2`, `0 < η < 1`.
#[allow(clippy::too_many_arguments)]
pub fn good_lambda_scan(
    f: &InnerFunctionSpec,
    n: usize,
    m: f64,
    eta: f64,
    lambdas: &[f64],
    epsilons: &[f64],
    cfg: &QuadratureConfig,
) -> Result<GoodLambdaTable> {
    require_origin_zero(f)?;
    check_good_lambda(m, eta)?;
    let a = boundary_profile(f, n, Quantity::A, cfg)?;
    let l = boundary_profile(f, n, Quantity::LogFp, cfg)?;
    good_lambda_from_profiles(&a, &l, m, eta, lambdas, epsilons)
}

fn check_good_lambda(m: f64, eta: f64) -> Result<()> {
    if !(m > 2.0 && m.is_finite()) {
        return Err(Error::Precondition(format!("M must exceed 2, got {m}")));
    }
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::Precondition(format!("eta must lie in (0, 1), got {eta}")));
    }
    Ok(())
}

/// Good-λ table from precomputed `A` and `logfp` profiles on the same grid.
/// Diverged entries count as `+∞`; both thresholds are inclusive.
pub fn good_lambda_from_profiles(
    a: &BoundaryProfile,
    logfp: &BoundaryProfile,
    m: f64,
    eta: f64,
    lambdas: &[f64],
    epsilons: &[f64],
) -> Result<GoodLambdaTable> {
    check_good_lambda(m, eta)?;
    if a.len() != logfp.len() || a.is_empty() {
        return Err(Error::Precondition("profiles must share a nonempty grid".into()));
    }
    let n = a.len() as f64;
    let av: Vec<f64> = (0..a.len()).map(|k| a.extended_value(k)).collect();
    let lv: Vec<f64> = (0..logfp.len()).map(|k| logfp.extended_value(k)).collect();
    let mut denominator = Vec::with_capacity(lambdas.len());
    let mut numerator = Vec::with_capacity(lambdas.len());
    let mut ratio = Vec::with_capacity(lambdas.len());
    let mut best_epsilon = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let den = lv.iter().filter(|v| **v >= lambda).count();
        let mut num_row = Vec::with_capacity(epsilons.len());
        let mut ratio_row = Vec::with_capacity(epsilons.len());
        let mut best: Option<f64> = None;
        for &eps in epsilons {
            let num = lv
                .iter()
                .zip(&av)
                .filter(|(l, a)| **l >= m * lambda && **a <= eps * lambda)
                .count();
            let q = if den == 0 { 0.0 } else { num as f64 / den as f64 };
            if q <= eta && best.map_or(true, |b| eps > b) {
                best = Some(eps);
            }
            num_row.push(num as f64 / n);
            ratio_row.push(q);
        }
        denominator.push(den as f64 / n);
        numerator.push(num_row);
        ratio.push(ratio_row);
        best_epsilon.push(best);
    }
    Ok(GoodLambdaTable {
        m,
        eta,
        lambdas: lambdas.to_vec(),
        epsilons: epsilons.to_vec(),
        denominator,
        numerator,
        ratio,
        best_epsilon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{AtomAngle, DyadicArc, SingularMeasure};
    use std::vec;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    fn example(a: f64) -> InnerFunctionSpec {
        InnerFunctionSpec::blaschke(&[DiskPoint::ORIGIN, DiskPoint::new(a, 0.0)]).unwrap()
    }

    #[test]
    fn identity_has_no_distortion() {
        let i = accumulated_distortion(&InnerFunctionSpec::identity(), 0.3, &cfg()).unwrap();
        assert_eq!(i.value, 0.0);
        assert_eq!(i.status, Status::Finite);
    }

    #[test]
    fn worked_example() {
        let i = accumulated_distortion(&example(0.5), 0.0, &cfg()).unwrap();
        assert!((i.value - 3f64.ln()).abs() < 1e-7, "{i:?}");
        assert_eq!(i.status, Status::Finite);
    }

    #[test]
    fn square_closed_form() {
        // μ(z²)(r)·2/(1-r²) = 2/(1+r) - 2r/(1+r²); antiderivative 2log(1+r) - log(1+r²).
        let anti = |r: f64| 2.0 * (1.0 + r).ln() - (1.0 + r * r).ln();
        let sq = InnerFunctionSpec::power(2);
        let i = accumulated_distortion(&sq, 0.7, &cfg()).unwrap();
        assert!((i.value - (anti(1.0) - anti(0.0))).abs() < 1e-7);
        let q = CarlesonBox::new(DyadicArc::new(1, 0).unwrap());
        let i = local_accumulated_distortion(&sq, q, 0.0, &cfg()).unwrap();
        assert!((i.value - (anti(1.0) - anti(0.5))).abs() < 1e-7);
        assert!((i.value - 0.105_360_515_657_826_3).abs() < 1e-7);
        assert!(local_accumulated_distortion(&sq, q, 0.75, &cfg()).is_err());
    }

    #[test]
    fn atom_is_not_finite() {
        let f = InnerFunctionSpec::singular(SingularMeasure::dirac(AtomAngle::ratio(0, 1), 1.0).unwrap());
        let i = accumulated_distortion(&f, 0.0, &cfg()).unwrap();
        assert_ne!(i.status, Status::Finite);
        let mut small = cfg();
        small.divergence_cap = 10.0;
        let i = accumulated_distortion(&f, 0.0, &small).unwrap();
        assert_eq!(i.status, Status::Diverged);
        assert_eq!(i.value, 10.0);
    }

    #[test]
    fn conical_regression() {
        let sq = InnerFunctionSpec::power(2);
        let b = conical_distortion(&sq, 0.0, 2.0, &cfg()).unwrap();
        assert!((b.value - 0.427_000_975_605_347_8).abs() < 1e-6, "{b:?}");
        assert_eq!(b.status, Status::Finite);
        let zero = conical_distortion(&InnerFunctionSpec::identity(), 0.2, 3.0, &cfg()).unwrap();
        assert_eq!(zero.value, 0.0);
        assert!(conical_distortion(&sq, 0.0, 1.0, &cfg()).is_err());
    }

    #[test]
    fn profiles_and_norms() {
        let p = boundary_profile(&InnerFunctionSpec::identity(), 8, Quantity::A, &cfg()).unwrap();
        assert!(p.values.iter().all(|v| *v == 0.0));
        let p = boundary_profile(&InnerFunctionSpec::power(2), 4, Quantity::LogFp, &cfg()).unwrap();
        assert!(p.values.iter().all(|v| (v - 2f64.ln()).abs() < 1e-15));
        let p = boundary_profile(&example(0.5), 4, Quantity::LogFp, &cfg()).unwrap();
        assert!((p.values[0] - 4f64.ln()).abs() < 1e-14);
        let manual = BoundaryProfile {
            quantity: Quantity::A,
            points: vec![0.0, 0.5],
            values: vec![1.0, 2.0],
            status: vec![Status::Finite; 2],
            budget_exhausted: vec![false; 2],
        };
        let n = lp_norm(&manual, 2.0).unwrap();
        assert!((n.norm - 2.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(n.diverged_fraction, 0.0);
        assert!(lp_norm(&manual, 0.0).is_err());
    }

    #[test]
    fn pointwise_examples() {
        let r = check_pointwise(&InnerFunctionSpec::identity(), 8, &cfg()).unwrap();
        assert_eq!(r.max_defect, Some(0.0));
        assert!(r.passed());
        let r = check_pointwise(&InnerFunctionSpec::power(2), 8, &cfg()).unwrap();
        assert!(r.max_defect.unwrap().abs() < 1e-7 && r.passed());
        let r = check_pointwise(&example(0.5), 8, &cfg()).unwrap();
        assert!((r.defects[0].unwrap() - (3f64.ln() - 4f64.ln())).abs() < 1e-7);
        let shifted = InnerFunctionSpec::blaschke(&[DiskPoint::new(0.5, 0.0)]).unwrap();
        assert!(matches!(
            check_pointwise(&shifted, 8, &cfg()),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn laplacian_examples() {
        let sq = InnerFunctionSpec::power(2);
        let r = check_laplacian(&sq, &[DiskPoint::ORIGIN, DiskPoint::new(0.5, 0.0)], 1e-3).unwrap();
        assert!((r.rhs[0] - 4.0).abs() < 1e-12);
        assert!((r.rhs[1] - 2.56).abs() < 1e-12);
        assert!(r.max_relative_error < 1e-5, "{r:?}");
        assert!(check_laplacian(&sq, &[DiskPoint::new(0.95, 0.0)], 1e-3).is_err());
    }

    #[test]
    fn oscillation_on_one_radius() {
        let sq = InnerFunctionSpec::power(2);
        let z = DiskPoint::new(0.6, 0.0);
        let w = DiskPoint::new(0.95, 0.0);
        let s = radial_oscillation_stat(&sq, &[(z, w), (z, z)], 0.1, &cfg()).unwrap();
        assert!(s > 0.0 && s <= 1.0);
        assert_eq!(radial_oscillation_stat(&sq, &[(z, z)], 0.1, &cfg()).unwrap(), 0.0);
    }

    #[test]
    fn good_lambda_constant_profiles() {
        let sq = InnerFunctionSpec::power(2);
        let l2 = 2f64.ln();
        let t = good_lambda_scan(&sq, 16, 3.0, 0.5, &[l2], &[0.5, 1.0, 2.0], &cfg()).unwrap();
        assert_eq!(t.denominator, vec![1.0]);
        assert!(t.numerator[0].iter().all(|v| *v == 0.0));
        assert_eq!(t.best_epsilon, vec![Some(2.0)]);
        let t = good_lambda_scan(&InnerFunctionSpec::identity(), 8, 3.0, 0.5, &[0.1, 1.0], &[1.0], &cfg()).unwrap();
        assert_eq!(t.denominator, vec![0.0, 0.0]);
        assert_eq!(t.ratio, vec![vec![0.0], vec![0.0]]);
        assert!(good_lambda_scan(&sq, 8, 2.0, 0.5, &[1.0], &[1.0], &cfg()).is_err());
    }
}
