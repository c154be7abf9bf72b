//! Evaluation of `f = e^{2πi·rotation}·∏ b_{a_k}^{m_k}·S_μ` and of the
//! derived quantities: logarithmic derivative, hyperbolic derivative
//! `D_h f = (1-|z|²)|f'|/(1-|f|²)`, Möbius distortion `μ(f) = 1 - D_h f`,
//! `G(f) = log((1-|f|²)/(1-|z|²))` with its gradient, and angular derivatives.
//!
//! `log|f|` is always assembled term by term and `1 - |f|²` is obtained as
//! `-expm1(2 log|f|)`, so nothing cancels catastrophically near the circle.

use crate::config::QuadratureConfig;
use crate::error::{Error, Result};
use crate::hypgeo::{DiskPoint, Mobius};
use crate::math::{self, frac};
use crate::measures::SingularMeasure;
use crate::probe::{boundary_chord_sq, Probe};
use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_complex::Complex64;

/// Distance below which a point counts as a zero of `f`.
pub const POLE_DISTANCE: f64 = 1e-14;
/// Largest overshoot of `D_h f` above one that is attributed to rounding.
pub const CLAMP_TOLERANCE: f64 = 1e-9;
/// Angular derivatives beyond this are reported as infinite.
pub const ANGULAR_CAP: f64 = 1e15;

/// A Blaschke factor `((a - z)/(1 - āz))^m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlaschkeFactor {
    /// The zero `a`, `|a| < 1`.
    pub zero: DiskPoint,
    /// Multiplicity `m ≥ 1`.
    pub multiplicity: u32,
}

/// The inner function `e^{2πi·rotation}·∏ b_{a_k}^{m_k}·S_μ`.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerFunctionSpec {
    rotation: f64,
    factors: Vec<BlaschkeFactor>,
    singular: SingularMeasure,
}

/// `f(z)` with its modulus in log form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    /// `f(z)`.
    pub value: Complex64,
    /// `log|f(z)| ≤ 0`.
    pub log_modulus: f64,
    /// `1 - |f(z)|² = -expm1(2·log|f(z)|)`.
    pub one_minus_sq_modulus: f64,
    /// `|f(z)|` is below the smallest normal double.
    pub underflow: bool,
}

/// Outcome of the radial angular-derivative schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadialStatus {
    /// The quotient settled.
    Finite,
    /// The quotient kept changing through the schedule.
    Diverging,
}

/// Radial estimate of `|f'(ξ)|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialEstimate {
    /// Last extrapolated quotient.
    pub estimate: f64,
    /// Whether it settled.
    pub status: RadialStatus,
    /// Steps taken.
    pub steps: u32,
}

/// Anything with a hyperbolic derivative at polar points `(1-δ)e^{2πiθ}`.
pub trait HyperbolicDerivative: Sync {
    /// `D_h f` at `(1 - delta)·e^{2πi·angle}`, `0 < delta ≤ 1`.
    fn hyperbolic_derivative_polar(&self, angle: f64, delta: f64) -> Result<f64>;
}

impl InnerFunctionSpec {
    /// Builds a spec; zeros must be interior and multiplicities positive.
    /// Repeated zeros are merged.
    pub fn new(rotation: f64, factors: Vec<BlaschkeFactor>, singular: SingularMeasure) -> Result<Self> {
        if !rotation.is_finite() {
            return Err(Error::InvalidSpec("rotation must be finite".into()));
        }
        let mut merged: Vec<BlaschkeFactor> = Vec::with_capacity(factors.len());
        for f in factors {
            f.zero.interior()?;
            if f.multiplicity == 0 {
                return Err(Error::InvalidSpec("multiplicity must be positive".into()));
            }
            match merged.iter_mut().find(|g| g.zero == f.zero) {
                Some(g) => g.multiplicity += f.multiplicity,
                None => merged.push(f),
            }
        }
        Ok(Self {
            rotation: frac(rotation),
            factors: merged,
            singular,
        })
    }

    /// `f(z) = z`.
    pub fn identity() -> Self {
        Self::power(1)
    }

    /// `f(z) = z^k`.
    pub fn power(k: u32) -> Self {
        let factors = if k == 0 {
            Vec::new()
        } else {
            alloc::vec![BlaschkeFactor {
                zero: DiskPoint::ORIGIN,
                multiplicity: k,
            }]
        };
        // b_0(z) = -z, so z^k = e^{iπk}·b_0^k.
        Self {
            rotation: frac(0.5 * k as f64),
            factors,
            singular: SingularMeasure::zero(),
        }
    }

    /// Finite Blaschke product with simple zeros, normalised so that `f(z) = ∏ (z - a)/(1 - āz)`.
    pub fn blaschke(zeros: &[DiskPoint]) -> Result<Self> {
        let factors = zeros
            .iter()
            .map(|z| BlaschkeFactor {
                zero: *z,
                multiplicity: 1,
            })
            .collect();
        Self::new(0.5 * zeros.len() as f64, factors, SingularMeasure::zero())
    }

    /// Singular inner function `S_μ`.
    pub fn singular(mu: SingularMeasure) -> Self {
        Self {
            rotation: 0.0,
            factors: Vec::new(),
            singular: mu,
        }
    }

    /// Unimodular constant in turns.
    pub fn rotation(&self) -> f64 {
        self.rotation
    }

    /// Blaschke factors.
    pub fn factors(&self) -> &[BlaschkeFactor] {
        &self.factors
    }

    /// Singular measure.
    pub fn singular_measure(&self) -> &SingularMeasure {
        &self.singular
    }

    /// True when `f` is a disk automorphism (one simple zero, no singular part).
    pub fn is_automorphism(&self) -> bool {
        self.singular.is_zero() && self.factors.len() == 1 && self.factors[0].multiplicity == 1
    }

    /// Samples `|f| < 1` at `samples` interior points spread over the disk.
    pub fn spot_check(&self, samples: usize) -> Result<()> {
        for k in 0..samples {
            let r = 1.0 - math::powf(0.5, 1.0 + (k % 40) as f64);
            let angle = frac(k as f64 * 0.618_033_988_749_894_8);
            let e = self.eval_probe(&Probe::polar(angle, 1.0 - r), None);
            if e.0.is_nan() || e.0 >= 0.0 {
                return Err(Error::InvalidSpec(format!(
                    "|f| = exp({}) at radius {r}, angle {angle}",
                    e.0
                )));
            }
        }
        Ok(())
    }

    fn near_zero(&self, p: &Probe) -> Option<(usize, f64)> {
        self.factors.iter().enumerate().find_map(|(k, f)| {
            let d = (Complex64::from(f.zero) - p.z).norm();
            (d < POLE_DISTANCE).then_some((k, d))
        })
    }

    // (log|f|, arg f in radians) at the probe, optionally leaving out factor `skip`.
    fn eval_probe(&self, p: &Probe, skip: Option<usize>) -> (f64, f64) {
        let mut log_mod = 0.0;
        let mut phase = 2.0 * PI * self.rotation;
        for (k, f) in self.factors.iter().enumerate() {
            if Some(k) == skip {
                continue;
            }
            let (lm, arg) = blaschke_log(f.zero.into(), p);
            let m = f.multiplicity as f64;
            log_mod += m * lm;
            phase += m * arg;
        }
        if !self.singular.is_zero() {
            log_mod -= self.singular.poisson_at(p);
            phase -= self.singular.herglotz_im_at(p);
        }
        (log_mod, phase)
    }

    fn log_derivative_probe(&self, p: &Probe, skip: Option<usize>) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for (k, f) in self.factors.iter().enumerate() {
            if Some(k) == skip {
                continue;
            }
            let a = Complex64::from(f.zero);
            let one = Complex64::new(1.0, 0.0);
            sum += (a.norm_sqr() - 1.0) * f.multiplicity as f64 / ((one - a.conj() * p.z) * (a - p.z));
        }
        if !self.singular.is_zero() {
            sum += self.singular.log_derivative_at(p);
        }
        sum
    }

    pub(crate) fn evaluate_probe(&self, p: &Probe) -> EvalResult {
        let (log_modulus, phase) = self.eval_probe(p, None);
        let modulus = math::exp(log_modulus);
        EvalResult {
            value: Complex64::from_polar(modulus, phase),
            log_modulus,
            one_minus_sq_modulus: -math::expm1(2.0 * log_modulus),
            underflow: log_modulus < math::ln(f64::MIN_POSITIVE),
        }
    }

    pub(crate) fn hyperbolic_derivative_probe(&self, p: &Probe) -> Result<f64> {
        if self.is_automorphism() {
            return Ok(1.0);
        }
        let raw = match self.near_zero(p) {
            Some((k, _)) => self.dh_at_zero(p, k),
            None => {
                let (lm, _) = self.eval_probe(p, None);
                if lm == f64::NEG_INFINITY {
                    return Ok(0.0);
                }
                let q = self.log_derivative_probe(p, None).norm();
                let omsq = -math::expm1(2.0 * lm);
                p.one_minus_sq * math::exp(lm) * q / omsq
            }
        };
        clamp_unit(raw)
    }

    // f = b^m·g near the zero a of factor k: |f'| = |b|^{m-1}|g|·|m b' + b·g'/g|.
    fn dh_at_zero(&self, p: &Probe, k: usize) -> f64 {
        let fac = self.factors[k];
        let a = Complex64::from(fac.zero);
        let one = Complex64::new(1.0, 0.0);
        let den = one - a.conj() * p.z;
        let b = (a - p.z) / den;
        let db = (a.norm_sqr() - 1.0) / (den * den);
        let m = fac.multiplicity as i32;
        let (log_g, _) = self.eval_probe(p, Some(k));
        let g_ratio = self.log_derivative_probe(p, Some(k));
        let fprime = math::powf(b.norm(), (m - 1) as f64) * math::exp(log_g) * (db * m as f64 + b * g_ratio).norm();
        let log_f = m as f64 * math::ln(b.norm()) + log_g;
        let omsq = -math::expm1(2.0 * log_f);
        p.one_minus_sq * fprime / omsq
    }

    fn g_quotient_probe(&self, p: &Probe) -> f64 {
        let (lm, _) = self.eval_probe(p, None);
        math::ln(-math::expm1(2.0 * lm)) - math::ln(p.one_minus_sq)
    }

    fn angular_derivative_at(&self, xi: f64) -> f64 {
        let mut sum = 0.0;
        for f in &self.factors {
            let a = Complex64::from(f.zero);
            sum += f.multiplicity as f64 * (1.0 - a.norm_sqr()) / boundary_chord_sq(xi, a);
        }
        if !self.singular.is_zero() {
            sum += self.singular.boundary_kernel(xi);
        }
        if sum > ANGULAR_CAP {
            f64::INFINITY
        } else {
            sum
        }
    }

    /// Closed-form `|f'(ξ)|` at the boundary angle `xi` (turns); `∞` on atoms
    /// and on the closed support of the dyadic part.
    pub fn angular_derivative_at_angle(&self, xi: f64) -> f64 {
        self.angular_derivative_at(frac(xi))
    }

    /// `log|f'(ξ)|` from the closed form.
    pub fn log_angular_derivative(&self, xi: f64) -> f64 {
        math::ln(self.angular_derivative_at(frac(xi)))
    }

    /// `1 - |f((1 - delta)·e^{2πi·angle})|`, accurate for tiny `delta`.
    pub fn one_minus_modulus_polar(&self, angle: f64, delta: f64) -> f64 {
        let (lm, _) = self.eval_probe(&Probe::polar(angle, delta), None);
        -math::expm1(lm)
    }

    /// `f` at `(1 - delta)·e^{2πi·angle}`.
    pub fn evaluate_polar(&self, angle: f64, delta: f64) -> EvalResult {
        self.evaluate_probe(&Probe::polar(angle, delta))
    }

    /// `f'/f` at `(1 - delta)·e^{2πi·angle}`.
    pub fn derivative_quotient_polar(&self, angle: f64, delta: f64) -> Result<Complex64> {
        let p = Probe::polar(angle, delta);
        if let Some((_, distance)) = self.near_zero(&p) {
            return Err(Error::Pole { distance });
        }
        Ok(self.log_derivative_probe(&p, None))
    }

    /// `f` and `f'` at an interior point, with `f'` from the product rule at zeros.
    pub fn value_and_derivative(&self, z: DiskPoint) -> Result<(Complex64, Complex64)> {
        let p = Probe::from_disk(z)?;
        let e = self.evaluate_probe(&p);
        match self.near_zero(&p) {
            None => Ok((e.value, e.value * self.log_derivative_probe(&p, None))),
            Some((k, _)) => {
                let fac = self.factors[k];
                let a = Complex64::from(fac.zero);
                let one = Complex64::new(1.0, 0.0);
                let den = one - a.conj() * p.z;
                let b = (a - p.z) / den;
                let db = (a.norm_sqr() - 1.0) / (den * den);
                let m = fac.multiplicity as i32;
                let (lg, ag) = self.eval_probe(&p, Some(k));
                let g = Complex64::from_polar(math::exp(lg), ag);
                let gq = self.log_derivative_probe(&p, Some(k));
                let bm1 = b.powi(m - 1);
                Ok((e.value, bm1 * g * (db * m as f64 + b * gq)))
            }
        }
    }
}

impl HyperbolicDerivative for InnerFunctionSpec {
    fn hyperbolic_derivative_polar(&self, angle: f64, delta: f64) -> Result<f64> {
        self.hyperbolic_derivative_probe(&Probe::polar(angle, delta))
    }
}

fn clamp_unit(raw: f64) -> Result<f64> {
    if raw.is_nan() {
        return Err(Error::Consistency { value: raw });
    }
    if raw > 1.0 + CLAMP_TOLERANCE {
        return Err(Error::Consistency { value: raw });
    }
    Ok(raw.clamp(0.0, 1.0))
}

// (log|b_a(z)|, arg b_a(z)) with log|b_a|² = log(1 - q), q = (1-|a|²)(1-|z|²)/|1-āz|².
fn blaschke_log(a: Complex64, p: &Probe) -> (f64, f64) {
    let one = Complex64::new(1.0, 0.0);
    let den = one - a.conj() * p.z;
    let num = a - p.z;
    let q = (1.0 - a.norm_sqr()) * p.one_minus_sq / den.norm_sqr();
    let lm = if q < 0.5 {
        0.5 * math::ln1p(-q)
    } else {
        math::ln(num.norm() / den.norm())
    };
    let ratio = num * den.conj();
    (lm, math::atan2(ratio.im, ratio.re))
}

/// `f(z)`, `log|f(z)|` and `1 - |f(z)|²`.
pub fn evaluate(f: &InnerFunctionSpec, z: DiskPoint) -> Result<EvalResult> {
    Ok(f.evaluate_probe(&Probe::from_disk(z)?))
}

/// `f'(z)/f(z)`; errors within `1e-14` of a zero.
pub fn derivative_quotient(f: &InnerFunctionSpec, z: DiskPoint) -> Result<Complex64> {
    let p = Probe::from_disk(z)?;
    if let Some((_, distance)) = f.near_zero(&p) {
        return Err(Error::Pole { distance });
    }
    Ok(f.log_derivative_probe(&p, None))
}

/// `D_h f(z) = (1-|z|²)|f'(z)|/(1-|f(z)|²) ∈ [0, 1]`.
pub fn hyperbolic_derivative(f: &InnerFunctionSpec, z: DiskPoint) -> Result<f64> {
    f.hyperbolic_derivative_probe(&Probe::from_disk(z)?)
}

/// `μ(f)(z) = 1 - D_h f(z)`.
pub fn mobius_distortion(f: &InnerFunctionSpec, z: DiskPoint) -> Result<f64> {
    Ok(1.0 - hyperbolic_derivative(f, z)?)
}

/// `G(f)(z) = log(1-|f(z)|²) - log(1-|z|²)`.
pub fn g_quotient(f: &InnerFunctionSpec, z: DiskPoint) -> Result<f64> {
    Ok(f.g_quotient_probe(&Probe::from_disk(z)?))
}

/// `∇G(f)(z) = 2z/(1-|z|²) - 2·conj(f'(z))·f(z)/(1-|f(z)|²)` as `[∂x, ∂y]`.
pub fn grad_g(f: &InnerFunctionSpec, z: DiskPoint) -> Result<[f64; 2]> {
    let p = Probe::from_disk(z)?;
    let first = p.z * (2.0 / p.one_minus_sq);
    // Within 1e-14 of a zero |f| is below rounding and the second term vanishes.
    let second = match f.near_zero(&p) {
        Some(_) => Complex64::new(0.0, 0.0),
        None => {
            let (lm, _) = f.eval_probe(&p, None);
            let q = f.log_derivative_probe(&p, None);
            let sq = math::exp(2.0 * lm);
            q.conj() * (2.0 * sq / -math::expm1(2.0 * lm))
        }
    };
    let g = first - second;
    Ok([g.re, g.im])
}

/// Closed-form `|f'(ξ)| = Σ m_k(1-|a_k|²)/|ξ-a_k|² + 2∫dμ(η)/|η-ξ|²` for `|ξ| = 1`.
pub fn angular_derivative_closed_form(f: &InnerFunctionSpec, xi: DiskPoint) -> Result<f64> {
    Ok(f.angular_derivative_at(xi.boundary_angle()?))
}

/// Radial estimate of `|f'(ξ)|` from `(1 - |f(r_n ξ)|)/(1 - r_n)`, `r_n = 1 - 2^{-n}`.
///
/// Finite when three consecutive relative changes fall below `cfg.abs_tol`;
/// the estimate is then the extrapolated `2q_n - q_{n-1}`.
pub fn angular_derivative_radial(
    f: &InnerFunctionSpec,
    xi: DiskPoint,
    cfg: &QuadratureConfig,
) -> Result<RadialEstimate> {
    cfg.validate()?;
    Ok(radial_at(f, xi.boundary_angle()?, cfg))
}

pub(crate) fn radial_at(f: &InnerFunctionSpec, angle: f64, cfg: &QuadratureConfig) -> RadialEstimate {
    let mut prev: Option<f64> = None;
    let mut calm = 0;
    let mut last = 0.0;
    for n in 1..=cfg.radial_depth {
        let delta = libm::ldexp(1.0, -(n as i32));
        let q = f.one_minus_modulus_polar(angle, delta) / delta;
        if let Some(pq) = prev {
            let change = (q - pq).abs() / q.abs().max(f64::MIN_POSITIVE);
            calm = if change < cfg.abs_tol { calm + 1 } else { 0 };
            last = 2.0 * q - pq;
            if calm >= 3 {
                return RadialEstimate {
                    estimate: last,
                    status: RadialStatus::Finite,
                    steps: n,
                };
            }
        }
        prev = Some(q);
    }
    RadialEstimate {
        estimate: last,
        status: RadialStatus::Diverging,
        steps: cfg.radial_depth,
    }
}

/// `φ∘f` for a disk automorphism `φ`, evaluated through the chain rule.
#[derive(Debug, Clone)]
pub struct PostComposed<'a> {
    /// The automorphism applied after `f`.
    pub outer: Mobius,
    /// The inner function.
    pub inner: &'a InnerFunctionSpec,
}

impl PostComposed<'_> {
    /// `D_h(φ∘f)(z) = (1-|z|²)|φ'(f)||f'|/(1-|φ(f)|²)`.
    pub fn hyperbolic_derivative(&self, z: DiskPoint) -> Result<f64> {
        self.dh_probe(&Probe::from_disk(z)?)
    }

    fn dh_probe(&self, p: &Probe) -> Result<f64> {
        let (w, dw) = match self.inner.near_zero(p) {
            Some(_) => self.inner.value_and_derivative(DiskPoint::from(p.z))?,
            None => {
                let e = self.inner.evaluate_probe(p);
                (e.value, e.value * self.inner.log_derivative_probe(p, None))
            }
        };
        let omsq_f = self.inner.evaluate_probe(p).one_minus_sq_modulus;
        let omsq = self.outer.one_minus_sq(w, omsq_f);
        clamp_unit(p.one_minus_sq * self.outer.derivative(w).norm() * dw.norm() / omsq)
    }
}

impl HyperbolicDerivative for PostComposed<'_> {
    fn hyperbolic_derivative_polar(&self, angle: f64, delta: f64) -> Result<f64> {
        self.dh_probe(&Probe::polar(angle, delta))
    }
}
