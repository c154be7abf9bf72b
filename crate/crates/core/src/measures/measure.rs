use crate::error::{Error, Result};
use crate::hypgeo::DiskPoint;
use crate::math::{self, cis_turns, frac, wrap_half};
use crate::probe::Probe;
use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::f64::consts::PI;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// Deepest supported dyadic mass tree.
pub const MAX_TREE_DEPTH: u32 = 20;

/// Angle of an atom in turns.
#[derive(Debug, Clone, PartialEq)]
pub enum AtomAngle {
    /// Exact rational angle, reduced to `[0, 1)`.
    Exact(BigRational),
    /// Floating angle; usable for evaluation but not for exact decomposition.
    Float(f64),
}

impl AtomAngle {
    /// Exact angle from a rational, reduced mod 1.
    pub fn exact(q: BigRational) -> Self {
        let r = &q - q.floor();
        Self::Exact(r)
    }

    /// Exact angle `num/den`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Self::exact(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Parses `"p/q"` or a decimal literal such as `"0.125"` into an exact angle.
    pub fn parse_exact(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidSpec(format!("cannot read {s:?} as an exact angle"));
        if let Some((n, d)) = s.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            return Ok(Self::exact(BigRational::new(n, d)));
        }
        let (neg, body) = match s.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int, fracpart) = body.split_once('.').unwrap_or((body, ""));
        if int.is_empty() && fracpart.is_empty() {
            return Err(bad());
        }
        if !int.chars().chain(fracpart.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let digits = [int, fracpart].concat();
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10u32), fracpart.len());
        let q = BigRational::new(if neg { -n } else { n }, d);
        Ok(Self::exact(q))
    }

    /// The angle as a float in `[0, 1)`.
    pub fn turns(&self) -> f64 {
        match self {
            Self::Exact(q) => frac(q.to_f64().unwrap_or(0.0)),
            Self::Float(x) => frac(*x),
        }
    }

    /// The exact value, if any.
    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Self::Exact(q) => Some(q),
            Self::Float(_) => None,
        }
    }
}

/// A point mass of the singular measure.
#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    /// Location in turns.
    pub angle: AtomAngle,
    /// Positive mass.
    pub mass: f64,
}

/// Piecewise-uniform measure given by masses of the `2^depth` finest dyadic arcs.
///
/// Coarser arc masses are exact sums of finest masses; within a finest arc the
/// mass is spread uniformly.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadicTree {
    depth: u32,
    masses: Vec<f64>,
}

impl DyadicTree {
    /// Builds a tree from its finest-level masses (length `2^depth`, all finite and nonnegative).
    pub fn new(depth: u32, masses: Vec<f64>) -> Result<Self> {
        if depth > MAX_TREE_DEPTH {
            return Err(Error::InvalidSpec(format!(
                "dyadic tree depth {depth} exceeds {MAX_TREE_DEPTH}"
            )));
        }
        if masses.len() != 1usize << depth {
            return Err(Error::InvalidSpec(format!(
                "dyadic tree of depth {depth} needs {} masses, got {}",
                1usize << depth,
                masses.len()
            )));
        }
        if masses.iter().any(|m| !(m.is_finite() && *m >= 0.0)) {
            return Err(Error::InvalidSpec(
                "dyadic tree masses must be finite and nonnegative".to_string(),
            ));
        }
        Ok(Self { depth, masses })
    }

    /// Finest level.
    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Finest-level masses.
    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    /// Masses at a coarser `level ≤ depth`, summed exactly.
    pub fn level_masses(&self, level: u32) -> Vec<BigRational> {
        let level = level.min(self.depth);
        let group = 1usize << (self.depth - level);
        self.masses
            .chunks(group)
            .map(|c| c.iter().map(|m| exact_f64(*m)).fold(BigRational::zero(), |a, b| a + b))
            .collect()
    }

    /// Total mass.
    pub fn total(&self) -> f64 {
        self.masses.iter().sum()
    }
}

/// The exact rational value of a finite float.
pub(crate) fn exact_f64(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(BigRational::zero)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct ArcRun {
    pub start: f64,
    pub len: f64,
    pub density: f64,
}

/// Finite positive singular measure: atoms plus an optional dyadic mass tree.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SingularMeasure {
    atoms: Vec<Atom>,
    tree: Option<DyadicTree>,
    runs: Vec<ArcRun>,
}

impl SingularMeasure {
    /// The zero measure.
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds a measure; atom masses must be positive and finite.
    pub fn new(atoms: Vec<Atom>, tree: Option<DyadicTree>) -> Result<Self> {
        for a in &atoms {
            if !(a.mass.is_finite() && a.mass > 0.0) {
                return Err(Error::InvalidSpec(format!(
                    "atom mass must be positive, got {}",
                    a.mass
                )));
            }
            if let AtomAngle::Float(x) = a.angle {
                if !x.is_finite() {
                    return Err(Error::InvalidSpec("atom angle must be finite".to_string()));
                }
            }
        }
        let runs = tree.as_ref().map(runs_of).unwrap_or_default();
        Ok(Self { atoms, tree, runs })
    }

    /// `mass·δ_{angle}` with an exact angle.
    pub fn dirac(angle: AtomAngle, mass: f64) -> Result<Self> {
        Self::new(alloc::vec![Atom { angle, mass }], None)
    }

    /// Atoms.
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Dyadic tree part.
    pub fn tree(&self) -> Option<&DyadicTree> {
        self.tree.as_ref()
    }

    /// Total mass.
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum::<f64>() + self.tree.as_ref().map_or(0.0, DyadicTree::total)
    }

    /// True for the zero measure.
    pub fn is_zero(&self) -> bool {
        self.atoms.is_empty() && self.runs.is_empty()
    }

    /// Poisson integral `∫ (1-|z|²)/|η-z|² dμ(η)` in closed form.
    pub(crate) fn poisson_at(&self, p: &Probe) -> f64 {
        let mut sum = 0.0;
        for a in &self.atoms {
            sum += a.mass * p.one_minus_sq / p.chord_sq(a.angle.turns());
        }
        for r in &self.runs {
            sum += r.density * arc_poisson(p, r.start, r.len);
        }
        sum
    }

    /// `Im ∫ (η+z)/(η-z) dμ(η)`.
    pub(crate) fn herglotz_im_at(&self, p: &Probe) -> f64 {
        let mut sum = 0.0;
        for a in &self.atoms {
            let d = wrap_half(a.angle.turns() - p.angle);
            let im_z_conj_eta = -(1.0 - p.delta) * math::sin(2.0 * PI * d);
            sum += a.mass * 2.0 * im_z_conj_eta / p.chord_sq(a.angle.turns());
        }
        for r in &self.runs {
            let q1 = p.chord_sq(r.start);
            let q2 = p.chord_sq(r.start + r.len);
            sum -= r.density / (2.0 * PI) * math::ln(q2 / q1);
        }
        sum
    }

    /// `S'/S = -∫ 2η/(η-z)² dμ(η)`.
    pub(crate) fn log_derivative_at(&self, p: &Probe) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for a in &self.atoms {
            let theta = a.angle.turns();
            let (c, _) = p.chord(theta);
            sum -= cis_turns(theta) * (2.0 * a.mass) / (c * c);
        }
        for r in &self.runs {
            let (c1, _) = p.chord(r.start);
            let (c2, _) = p.chord(r.start + r.len);
            let diff = cis_turns(r.start + 0.5 * r.len) * Complex64::new(0.0, 2.0 * math::sin(PI * r.len));
            // -(w/(πi))·(η₂-η₁)/((η₁-z)(η₂-z)) = (i·w/π)·(η₂-η₁)/((η₁-z)(η₂-z))
            sum += Complex64::new(0.0, r.density / PI) * diff / (c1 * c2);
        }
        sum
    }

    /// `2∫ dμ(η)/|η-ξ|²` at the boundary angle `xi`; infinite on the support.
    pub(crate) fn boundary_kernel(&self, xi: f64) -> f64 {
        let mut sum = 0.0;
        for a in &self.atoms {
            let s = math::sin(PI * wrap_half(a.angle.turns() - xi));
            if s == 0.0 {
                return f64::INFINITY;
            }
            sum += a.mass / (2.0 * s * s);
        }
        for r in &self.runs {
            let u1 = frac(r.start - xi);
            let u2 = u1 + r.len;
            if u1 == 0.0 || u2 >= 1.0 {
                return f64::INFINITY;
            }
            let s1 = math::sin(PI * u1);
            let s2 = math::sin(PI * u2);
            sum += r.density / (2.0 * PI) * math::sin(PI * r.len) / (s1 * s2);
        }
        sum
    }
}

fn runs_of(tree: &DyadicTree) -> Vec<ArcRun> {
    let scale = (1u64 << tree.depth) as f64;
    let mut runs: Vec<ArcRun> = Vec::new();
    let mut k = 0;
    let m = &tree.masses;
    while k < m.len() {
        let mut j = k + 1;
        while j < m.len() && m[j] == m[k] {
            j += 1;
        }
        if m[k] > 0.0 {
            runs.push(ArcRun {
                start: k as f64 / scale,
                len: (j - k) as f64 / scale,
                density: m[k] * scale,
            });
        }
        k = j;
    }
    runs
}

/// `∫_{start}^{start+len} (1-|z|²)/|η-z|² dθ` for `η = e^{2πiθ}`.
fn arc_poisson(p: &Probe, start: f64, len: f64) -> f64 {
    let k = p.delta / (2.0 - p.delta);
    let u1 = wrap_half(start - p.angle);
    let u2 = u1 + len;
    if u2 > 0.5 {
        arc_poisson_piece(k, u1, 0.5) + arc_poisson_piece(k, -0.5, u2 - 1.0)
    } else {
        arc_poisson_piece(k, u1, u2)
    }
}

// Antiderivative (1/π)·atan(tan(πu)/k) differenced without crossing branches.
fn arc_poisson_piece(k: f64, u1: f64, u2: f64) -> f64 {
    let (y1, y2) = (PI * u1, PI * u2);
    let num = k * math::sin(y2 - y1);
    let den = k * k * math::cos(y1) * math::cos(y2) + math::sin(y1) * math::sin(y2);
    math::atan2(num, den) / PI
}

/// Relative-change target for [`poisson_integral`] refinement.
pub const POISSON_REL_TOL: f64 = 1e-8;
const POISSON_MAX_POINTS: usize = 1 << 24;

/// Poisson integral `P[μ](z)`: atoms summed exactly, the dyadic tree by
/// midpoint sums refined by halving until the relative change is below `1e-8`.
///
/// This deliberately avoids the closed-form arc integrals used by the
/// evaluator, so the two can be checked against each other.
pub fn poisson_integral(mu: &SingularMeasure, z: DiskPoint) -> Result<f64> {
    let z = z.interior()?;
    let zc = Complex64::from(z);
    let omsq = z.one_minus_sq();
    let kernel = |theta: f64| omsq / (cis_turns(theta) - zc).norm_sqr();
    let mut atoms = 0.0;
    for a in &mu.atoms {
        atoms += a.mass * kernel(a.angle.turns());
    }
    let Some(tree) = &mu.tree else {
        return Ok(atoms);
    };
    let n = tree.masses.len();
    let width = 1.0 / n as f64;
    let sum_at = |sub: usize| -> f64 {
        let h = width / sub as f64;
        let mut s = 0.0;
        for (k, m) in tree.masses.iter().enumerate() {
            if *m == 0.0 {
                continue;
            }
            let base = k as f64 * width;
            let mut inner = 0.0;
            for j in 0..sub {
                inner += kernel(base + (j as f64 + 0.5) * h);
            }
            s += m * inner / sub as f64;
        }
        s
    };
    let mut sub = 1usize;
    let mut prev = sum_at(sub);
    let mut levels = 0;
    while n * sub * 2 <= POISSON_MAX_POINTS {
        sub *= 2;
        levels += 1;
        let next = sum_at(sub);
        if (next - prev).abs() <= POISSON_REL_TOL * next.abs() {
            return Ok(atoms + next);
        }
        prev = next;
    }
    Err(Error::RefinementBudget {
        tolerance: POISSON_REL_TOL,
        levels,
    })
}

/// Reduces an exact angle to `[0,1)`, returning `floor(θ·2^level)`.
pub(crate) fn dyadic_index(theta: &BigRational, level: u32) -> BigInt {
    let scaled = theta * BigRational::from_integer(BigInt::one() << level as usize);
    scaled.floor().to_integer()
}
