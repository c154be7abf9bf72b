use crate::error::{Error, Result};
use crate::hypgeo::DiskPoint;
use crate::math::frac;
use alloc::format;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

/// Deepest representable dyadic level.
pub const MAX_LEVEL: u32 = 62;

/// The half-open arc `[index·2^-level, (index+1)·2^-level)` in turns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DyadicArc {
    /// Generation; the full circle is level 0.
    pub level: u32,
    /// Position in `[0, 2^level)`.
    pub index: u64,
}

impl DyadicArc {
    /// The full circle.
    pub const ROOT: Self = Self { level: 0, index: 0 };

    /// Validated constructor.
    pub fn new(level: u32, index: u64) -> Result<Self> {
        if level > MAX_LEVEL || index >= 1u64 << level {
            return Err(Error::InvalidSpec(format!(
                "no dyadic arc with level {level} and index {index}"
            )));
        }
        Ok(Self { level, index })
    }

    /// Arc of the given level containing the angle (turns).
    pub fn containing(angle: f64, level: u32) -> Self {
        let n = (1u64 << level) as f64;
        let index = ((frac(angle) * n) as u64).min((1u64 << level) - 1);
        Self { level, index }
    }

    /// Normalized length `2^-level`.
    pub fn length(self) -> f64 {
        libm::ldexp(1.0, -(self.level as i32))
    }

    /// Exact length.
    pub fn exact_length(self) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::one() << self.level as usize)
    }

    /// Left endpoint in turns.
    pub fn start(self) -> f64 {
        self.index as f64 * self.length()
    }

    /// Exact left endpoint.
    pub fn exact_start(self) -> BigRational {
        BigRational::new(BigInt::from(self.index), BigInt::one() << self.level as usize)
    }

    /// Midpoint in turns.
    pub fn midpoint(self) -> f64 {
        (self.index as f64 + 0.5) * self.length()
    }

    /// The two halves.
    pub fn children(self) -> [Self; 2] {
        let level = self.level + 1;
        [
            Self {
                level,
                index: 2 * self.index,
            },
            Self {
                level,
                index: 2 * self.index + 1,
            },
        ]
    }

    /// Enclosing arc one level up.
    pub fn parent(self) -> Option<Self> {
        (self.level > 0).then(|| Self {
            level: self.level - 1,
            index: self.index / 2,
        })
    }

    /// Whether `other` is contained in `self`.
    pub fn contains_arc(self, other: Self) -> bool {
        other.level >= self.level && other.index >> (other.level - self.level) == self.index
    }

    /// Whether the half-open arc contains the angle.
    pub fn contains_angle(self, angle: f64) -> bool {
        Self::containing(angle, self.level) == self
    }

    /// Exact membership of a rational angle in `[0, 1)`.
    pub fn contains_exact(self, theta: &BigRational) -> bool {
        super::measure::dyadic_index(theta, self.level) == BigInt::from(self.index)
    }
}

/// The Carleson box `Q(I) = {rξ : ξ ∈ I, 0 < 1 - r ≤ m(I)}` over a dyadic arc.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CarlesonBox {
    /// The arc `I(Q)`.
    pub base: DyadicArc,
}

impl CarlesonBox {
    /// Box over `base`.
    pub fn new(base: DyadicArc) -> Self {
        Self { base }
    }

    /// Box of side `2^-level` over the arc containing `angle`.
    pub fn containing(angle: f64, level: u32) -> Self {
        Self::new(DyadicArc::containing(angle, level))
    }

    /// Side length `ℓ(Q) = m(I)`.
    pub fn ell(self) -> f64 {
        self.base.length()
    }

    /// Centre `z(Q) = (1 - ℓ(Q))·ξ(I)` with `ξ(I)` the midpoint of `I`.
    pub fn center(self) -> DiskPoint {
        DiskPoint::from_polar(1.0 - self.ell(), self.base.midpoint())
    }

    /// Whether the point lies in the box.
    pub fn contains(self, z: DiskPoint) -> bool {
        let r = z.modulus();
        r < 1.0 && 1.0 - r <= self.ell() && self.base.contains_angle(z.angle())
    }

    /// Whether the point lies on the top side `T(Q) = {z ∈ Q : 1 - |z| = ℓ(Q)}`, to `1e-12`.
    pub fn top_contains(self, z: DiskPoint) -> bool {
        let r = z.modulus();
        ((1.0 - r) - self.ell()).abs() <= 1e-12 && self.base.contains_angle(z.angle())
    }

    /// The point of `T(Q)` above the angle.
    pub fn top_point(self, angle: f64) -> Result<DiskPoint> {
        if !self.base.contains_angle(angle) {
            return Err(Error::OutsideArc { angle });
        }
        Ok(DiskPoint::from_polar(1.0 - self.ell(), angle))
    }
}
