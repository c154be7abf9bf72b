//! Pseudo-hyperbolic and hyperbolic distance on the unit disk, and disk
//! automorphisms `e^{2πiθ}(a - z)/(1 - āz)`.

use crate::error::{Error, Result};
use crate::math::{self, cis_turns};
use num_complex::Complex64;

/// Tolerance on `|ξ| = 1` for points asserted to lie on the circle.
pub const CIRCLE_TOL: f64 = 1e-12;

/// A point of the closed unit disk.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DiskPoint {
    /// Real part.
    pub re: f64,
    /// Imaginary part.
    pub im: f64,
}

impl DiskPoint {
    /// The origin.
    pub const ORIGIN: Self = Self { re: 0.0, im: 0.0 };

    /// Point from Cartesian coordinates (no validation).
    pub const fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    /// `r·e^{2πi·angle}` with `angle` in turns.
    pub fn from_polar(r: f64, angle: f64) -> Self {
        (cis_turns(angle) * r).into()
    }

    /// The boundary point `e^{2πi·angle}`.
    pub fn on_circle(angle: f64) -> Self {
        cis_turns(angle).into()
    }

    /// Euclidean modulus.
    pub fn modulus(self) -> f64 {
        math::hypot(self.re, self.im)
    }

    /// Argument in turns, in `[0, 1)`.
    pub fn angle(self) -> f64 {
        math::arg_turns(self.into())
    }

    /// True when `|z| < 1`.
    pub fn is_interior(self) -> bool {
        self.modulus() < 1.0
    }

    /// True when `||z| - 1| ≤ 1e-12`.
    pub fn is_on_circle(self) -> bool {
        (self.modulus() - 1.0).abs() <= CIRCLE_TOL
    }

    /// Returns the point if it lies in the open disk.
    pub fn interior(self) -> Result<Self> {
        let modulus = self.modulus();
        if modulus < 1.0 {
            Ok(self)
        } else {
            Err(Error::OutsideDisk { modulus })
        }
    }

    /// Returns the angle in turns if the point lies on the circle.
    pub fn boundary_angle(self) -> Result<f64> {
        if self.is_on_circle() {
            Ok(self.angle())
        } else {
            Err(Error::OffCircle {
                modulus: self.modulus(),
            })
        }
    }

    /// `1 - |z|²`, computed as `(1-|z|)(1+|z|)`.
    pub fn one_minus_sq(self) -> f64 {
        let r = self.modulus();
        (1.0 - r) * (1.0 + r)
    }
}

impl From<Complex64> for DiskPoint {
    fn from(z: Complex64) -> Self {
        Self { re: z.re, im: z.im }
    }
}

impl From<DiskPoint> for Complex64 {
    fn from(p: DiskPoint) -> Self {
        Complex64::new(p.re, p.im)
    }
}

/// `ρ(z, w) = |z - w| / |1 - w̄z|`.
pub fn pseudo_hyperbolic(z: DiskPoint, w: DiskPoint) -> Result<f64> {
    let (z, w) = (Complex64::from(z.interior()?), Complex64::from(w.interior()?));
    let den = (Complex64::new(1.0, 0.0) - w.conj() * z).norm();
    Ok(((z - w).norm() / den).min(1.0))
}

/// `d_h(z, w) = log((1 + ρ)/(1 - ρ))`.
///
/// Uses `1 - ρ² = (1-|z|²)(1-|w|²)/|1 - w̄z|²` so the result stays accurate
/// when both points approach the circle.
pub fn hyperbolic_distance(z: DiskPoint, w: DiskPoint) -> Result<f64> {
    let (zi, wi) = (z.interior()?, w.interior()?);
    let (zc, wc) = (Complex64::from(zi), Complex64::from(wi));
    let den = (Complex64::new(1.0, 0.0) - wc.conj() * zc).norm_sqr();
    let rho = ((zc - wc).norm() / math::sqrt(den)).min(1.0);
    let one_minus_rho_sq = zi.one_minus_sq() * wi.one_minus_sq() / den;
    Ok((2.0 * math::ln1p(rho) - math::ln(one_minus_rho_sq)).max(0.0))
}

/// The automorphism `φ(z) = e^{2πiθ}(a - z)/(1 - āz)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius {
    a: Complex64,
    rotation: Complex64,
}

impl Mobius {
    /// Builds `φ` from `a` in the open disk and `θ` in turns.
    pub fn new(a: DiskPoint, theta: f64) -> Result<Self> {
        Ok(Self {
            a: a.interior()?.into(),
            rotation: cis_turns(theta),
        })
    }

    /// `φ(z)`, valid on the closed disk.
    pub fn apply(&self, z: Complex64) -> Complex64 {
        self.rotation * (self.a - z) / (Complex64::new(1.0, 0.0) - self.a.conj() * z)
    }

    /// `φ'(z) = -e^{2πiθ}(1 - |a|²)/(1 - āz)²`.
    pub fn derivative(&self, z: Complex64) -> Complex64 {
        let d = Complex64::new(1.0, 0.0) - self.a.conj() * z;
        -self.rotation * (1.0 - self.a.norm_sqr()) / (d * d)
    }

    /// `1 - |φ(z)|² = (1-|a|²)(1-|z|²)/|1 - āz|²`, given `1 - |z|²`.
    pub fn one_minus_sq(&self, z: Complex64, one_minus_sq_z: f64) -> f64 {
        let d = (Complex64::new(1.0, 0.0) - self.a.conj() * z).norm_sqr();
        (1.0 - self.a.norm_sqr()) * one_minus_sq_z / d
    }
}

/// `e^{2πiθ}(a - z)/(1 - āz)` for `|a| < 1`, `|z| ≤ 1`.
pub fn mobius_apply(a: DiskPoint, theta: f64, z: DiskPoint) -> Result<DiskPoint> {
    Ok(Mobius::new(a, theta)?.apply(z.into()).into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(re: f64) -> DiskPoint {
        DiskPoint::new(re, 0.0)
    }

    #[test]
    fn pseudo_examples() {
        assert_eq!(pseudo_hyperbolic(p(0.0), p(0.5)).unwrap(), 0.5);
        let z = DiskPoint::new(0.3, -0.4);
        assert_eq!(pseudo_hyperbolic(z, z).unwrap(), 0.0);
        assert!((pseudo_hyperbolic(p(0.5), p(-0.5)).unwrap() - 0.8).abs() < 1e-15);
        assert!(pseudo_hyperbolic(p(1.0), p(0.0)).is_err());
    }

    #[test]
    fn distance_examples() {
        let l3 = 3f64.ln();
        assert!((hyperbolic_distance(p(0.0), p(0.5)).unwrap() - l3).abs() < 1e-15);
        assert!((hyperbolic_distance(p(0.5), p(0.8)).unwrap() - l3).abs() < 1e-14);
        assert_eq!(hyperbolic_distance(p(0.2), p(0.2)).unwrap(), 0.0);
        assert!(hyperbolic_distance(p(0.0), DiskPoint::new(0.6, 0.8)).is_err());
    }

    #[test]
    fn distance_near_circle_matches_radial_formula() {
        let r: f64 = 1.0 - 1e-13;
        let delta = 1.0 - r;
        let expected = ((2.0 - delta) / delta).ln();
        let got = hyperbolic_distance(p(0.0), p(r)).unwrap();
        assert!((got - expected).abs() < 1e-13 * expected);
    }

    #[test]
    fn mobius_examples() {
        let z = DiskPoint::new(0.1, 0.7);
        let m = mobius_apply(DiskPoint::ORIGIN, 0.0, z).unwrap();
        assert_eq!(m, DiskPoint::new(-0.1, -0.7));
        let zero = mobius_apply(z, 0.3, z).unwrap();
        assert!(zero.modulus() < 1e-16);
        assert_eq!(mobius_apply(p(0.5), 0.0, DiskPoint::ORIGIN).unwrap(), p(0.5));
        assert!(mobius_apply(p(1.0), 0.0, z).is_err());
    }

    #[test]
    fn mobius_maps_circle_to_circle() {
        let phi = Mobius::new(DiskPoint::new(0.6, -0.3), 0.2).unwrap();
        for k in 0..16 {
            let w = phi.apply(cis_turns(k as f64 / 16.0));
            assert!((w.norm() - 1.0).abs() < 1e-14);
        }
    }
}
