use super::measure::SingularMeasure;
use super::verdict::{tail_verdict, Verdict};
use crate::error::{Error, Result};
use crate::math;
use crate::probe::Probe;
use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::{LN_2, PI};

/// Deepest shell supported by [`sublevel_integral`].
pub const MAX_SHELL_DEPTH: u32 = 20;
/// Default shell depth.
pub const DEFAULT_SHELL_DEPTH: u32 = 16;

/// Per-shell contributions to the sublevel-set integral.
#[derive(Debug, Clone, PartialEq)]
pub struct SublevelResult {
    /// Contribution of shell `n` (`1 - |z| ∈ [2^{-n-1}, 2^{-n})`), `n = 1..=depth`.
    pub shells: Vec<f64>,
    /// Running sums of `shells`.
    pub partial_integrals: Vec<f64>,
    /// Tail verdict on the shell contributions.
    pub verdict: Verdict,
}

const GL3: [(f64, f64); 3] = [
    (-0.774_596_669_241_483_4, 5.0 / 9.0),
    (0.0, 8.0 / 9.0),
    (0.774_596_669_241_483_4, 5.0 / 9.0),
];

/// Fraction of the `resolution` equally spaced angles `k/resolution` at which
/// `|S_μ((1-δ)ξ)| < c`, i.e. the Poisson integral exceeds `-log c`.
pub fn sublevel_fraction(mu: &SingularMeasure, c: f64, delta: f64, resolution: usize) -> f64 {
    let level = -math::ln(c);
    let hits = (0..resolution)
        .filter(|k| mu.poisson_at(&Probe::polar(*k as f64 / resolution as f64, delta)) > level)
        .count();
    hits as f64 / resolution as f64
}

/// `∫_{|S_μ(z)|<c} |log(1-|z|)|^{p-1}/(1-|z|) dA(z)` over dyadic shells,
/// with `dA` planar Lebesgue measure.
///
/// Within shell `n` the radial integral uses three Gauss–Legendre nodes in
/// `log₂(1-|z|)`, and at each node the angular measure of the sublevel set is
/// the grid fraction over `2^{n+4}` angles.
pub fn sublevel_integral(mu: &SingularMeasure, c: f64, p: f64, depth: u32) -> Result<SublevelResult> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::Precondition(format!("c must lie in (0, 1), got {c}")));
    }
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::Precondition(format!("p must be positive, got {p}")));
    }
    if depth == 0 || depth > MAX_SHELL_DEPTH {
        return Err(Error::Precondition(format!(
            "shell depth must lie in 1..={MAX_SHELL_DEPTH}, got {depth}"
        )));
    }
    let shells: Vec<f64> = (1..=depth).map(|n| shell(mu, c, p, n, 1usize << (n + 4))).collect();
    let mut acc = 0.0;
    let partial_integrals = shells
        .iter()
        .map(|s| {
            acc += s;
            acc
        })
        .collect();
    let verdict = tail_verdict(&shells);
    Ok(SublevelResult {
        shells,
        partial_integrals,
        verdict,
    })
}

// With δ = 1 - |z| = 2^{-u}: dA = 2π(1-δ) δ ln2 du · (angular fraction), so the
// integrand |ln δ|^{p-1}/δ · dA = 2π ln2 (1-δ) |ln δ|^{p-1} F(δ) du.
pub(crate) fn shell(mu: &SingularMeasure, c: f64, p: f64, n: u32, resolution: usize) -> f64 {
    let mut sum = 0.0;
    for (x, w) in GL3 {
        let u = n as f64 + 0.5 + 0.5 * x;
        let delta = math::exp(-u * LN_2);
        let frac = sublevel_fraction(mu, c, delta, resolution);
        if frac > 0.0 {
            sum += 0.5 * w * frac * (1.0 - delta) * math::powf(u * LN_2, p - 1.0);
        }
    }
    2.0 * PI * LN_2 * sum
}
