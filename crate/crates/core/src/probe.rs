//! Interior points stored as (angle, 1 - r) so that points at hyperbolic
//! distance 60 from the origin (1 - r ≈ 1e-26) stay representable.

use crate::error::Result;
use crate::hypgeo::DiskPoint;
use crate::math::{self, cis_turns, frac, wrap_half};
use core::f64::consts::PI;
use num_complex::Complex64;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Probe {
    pub z: Complex64,
    pub angle: f64,
    pub delta: f64,
    pub one_minus_sq: f64,
}

impl Probe {
    /// `(1 - delta)·e^{2πi·angle}` with `0 < delta ≤ 1`.
    pub fn polar(angle: f64, delta: f64) -> Self {
        let angle = frac(angle);
        Self {
            z: cis_turns(angle) * (1.0 - delta),
            angle,
            delta,
            one_minus_sq: delta * (2.0 - delta),
        }
    }

    pub fn from_disk(p: DiskPoint) -> Result<Self> {
        let p = p.interior()?;
        let r = p.modulus();
        Ok(Self {
            z: p.into(),
            angle: if r == 0.0 { 0.0 } else { p.angle() },
            delta: 1.0 - r,
            one_minus_sq: (1.0 - r) * (1.0 + r),
        })
    }

    /// `(η - z, |η - z|²)` for `η = e^{2πi·eta}`, accurate when `z` is close to `η`.
    pub fn chord(&self, eta: f64) -> (Complex64, f64) {
        let d = wrap_half(eta - self.angle);
        let s = math::sin(PI * d);
        let local = Complex64::new(self.delta - 2.0 * s * s, math::sin(2.0 * PI * d));
        let sq = 4.0 * s * s * (1.0 - self.delta) + self.delta * self.delta;
        (cis_turns(self.angle) * local, sq)
    }

    /// `|η - z|²` only.
    pub fn chord_sq(&self, eta: f64) -> f64 {
        let s = math::sin(PI * wrap_half(eta - self.angle));
        4.0 * s * s * (1.0 - self.delta) + self.delta * self.delta
    }
}

/// `|e^{2πi·xi} - a|²` for interior `a`, accurate as `a` nears the circle.
pub(crate) fn boundary_chord_sq(xi: f64, a: Complex64) -> f64 {
    let rho = a.norm();
    if rho == 0.0 {
        return 1.0;
    }
    let s = math::sin(PI * wrap_half(xi - math::arg_turns(a)));
    4.0 * s * s * rho + (1.0 - rho) * (1.0 - rho)
}
