use crate::error::{Error, Result};
use alloc::format;

/// Controls for the improper radial integrals and the radial schedule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Hyperbolic-length cutoff for `t = log((1+r)/(1-r))`.
    pub t_max: f64,
    /// Absolute tolerance of the adaptive quadrature.
    pub abs_tol: f64,
    /// Running-integral value beyond which a point is declared diverged.
    pub divergence_cap: f64,
    /// Subinterval budget of the adaptive quadrature.
    pub max_subdivisions: usize,
    /// Depth `n` of the radial schedule `r_n = 1 - 2^-n`.
    pub radial_depth: u32,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            t_max: 60.0,
            abs_tol: 1e-8,
            divergence_cap: 1e4,
            max_subdivisions: 4000,
            radial_depth: 40,
        }
    }
}

impl QuadratureConfig {
    /// Checks positivity of every field.
    pub fn validate(&self) -> Result<()> {
        let ok = self.t_max > 0.0
            && self.t_max.is_finite()
            && self.abs_tol > 0.0
            && self.divergence_cap > 0.0
            && self.max_subdivisions > 0
            && self.radial_depth >= 4
            && self.radial_depth <= 1000;
        if ok {
            Ok(())
        } else {
            Err(Error::Precondition(format!("invalid quadrature config {self:?}")))
        }
    }
}
