//! Alternating heavy/light dyadic stopping-time families of a singular
//! measure, computed in exact rational arithmetic.
//!
//! A dyadic arc `I` is heavy when `μ(I)/m(I) ≥ M` and light when
//! `μ(I)/m(I) ≤ M/100`. Generation one consists of the maximal heavy arcs;
//! inside each heavy arc the maximal light subarcs are collected, inside each
//! light arc the maximal heavy subarcs form the next generation, and so on
//! down to `max_depth`.

use super::dyadic::{DyadicArc, MAX_LEVEL};
use super::measure::{dyadic_index, exact_f64, AtomAngle, SingularMeasure};
use crate::error::{Error, Result};
use alloc::format;
use alloc::vec::Vec;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Why an arc was left undecided.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnresolvedReason {
    /// Reached `max_depth` with the stopping rule still undecided.
    DepthExhausted,
    /// Below the tree's finest level with constant density strictly between
    /// the light and heavy thresholds, so no descendant ever stops.
    UniformDensity,
}

/// An arc at which the recursion stopped without a decision.
#[derive(Debug, Clone, PartialEq)]
pub struct UnresolvedArc {
    /// The arc.
    pub arc: DyadicArc,
    /// Its exact mass.
    pub mass: BigRational,
    /// Why it stopped.
    pub reason: UnresolvedReason,
}

/// A maximal heavy arc with its light subfamily.
#[derive(Debug, Clone, PartialEq)]
pub struct HeavyArc {
    /// The arc.
    pub arc: DyadicArc,
    /// Exact `μ(arc)`.
    pub mass: BigRational,
    /// `μ(arc)/m(arc) = M` exactly.
    pub tie: bool,
    /// Maximal light subarcs.
    pub light: Vec<LightArc>,
    /// Subarcs left undecided.
    pub unresolved: Vec<UnresolvedArc>,
}

/// A maximal light arc with the next heavy generation inside it.
#[derive(Debug, Clone, PartialEq)]
pub struct LightArc {
    /// The arc.
    pub arc: DyadicArc,
    /// Exact `μ(arc)`.
    pub mass: BigRational,
    /// `μ(arc)/m(arc) = M/100` exactly.
    pub tie: bool,
    /// Maximal heavy subarcs (next generation).
    pub heavy: Vec<HeavyArc>,
    /// Subarcs left undecided.
    pub unresolved: Vec<UnresolvedArc>,
}

/// Result of [`heavy_light_decompose`].
#[derive(Debug, Clone, PartialEq)]
pub struct HeavyLightForest {
    /// Heavy threshold `M`, exactly.
    pub threshold: BigRational,
    /// Deepest dyadic level examined.
    pub max_depth: u32,
    /// Generation-one heavy arcs.
    pub heavy: Vec<HeavyArc>,
    /// Arcs undecided while searching for generation one.
    pub unresolved: Vec<UnresolvedArc>,
    atoms_exact: Vec<(BigRational, BigRational)>,
    atomic: bool,
}

/// One generation of the forest, flattened.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Generation {
    /// Heavy arcs `I_j^{(l)}` with their masses.
    pub heavy: Vec<(DyadicArc, BigRational)>,
    /// Light arcs `J_k^{(l)}` with their masses.
    pub light: Vec<(DyadicArc, BigRational)>,
}

/// Outcome of the exact property checks.
#[derive(Debug, Clone, PartialEq)]
pub struct HeavyLightReport {
    /// Every child arc lies in its parent and siblings are disjoint.
    pub containment: bool,
    /// `Σ m(light) + Σ m(undecided) = m(I)` for every heavy arc.
    pub property1: bool,
    /// `Σ m(next heavy) ≤ μ(J)/M ≤ m(J)/100` for every light arc.
    pub property2: bool,
    /// For atomic μ: `μ(J) = Σ μ(next heavy) + Σ μ(undecided)` in every light arc.
    pub property3: Option<bool>,
    /// Heavy arcs over all generations.
    pub heavy_count: usize,
    /// Light arcs over all generations.
    pub light_count: usize,
    /// Undecided arcs.
    pub unresolved_count: usize,
    /// Arcs sitting exactly on a threshold.
    pub ties: usize,
}

impl HeavyLightReport {
    /// All applicable properties hold.
    pub fn passed(&self) -> bool {
        self.containment && self.property1 && self.property2 && self.property3.unwrap_or(true)
    }
}

struct Ctx {
    heavy: BigRational,
    light: BigRational,
    max_depth: u32,
    tree_depth: u32,
    tree_prefix: Vec<BigRational>,
    tree_finest: Vec<BigRational>,
    atoms: Vec<(BigRational, BigRational)>,
}

impl Ctx {
    fn mass(&self, arc: DyadicArc, atoms: &[usize]) -> BigRational {
        let mut m = BigRational::zero();
        for &i in atoms {
            m += &self.atoms[i].1;
        }
        if self.tree_prefix.is_empty() {
            return m;
        }
        if arc.level <= self.tree_depth {
            let shift = self.tree_depth - arc.level;
            let lo = (arc.index << shift) as usize;
            let hi = ((arc.index + 1) << shift) as usize;
            m += &self.tree_prefix[hi] - &self.tree_prefix[lo];
        } else {
            let shift = arc.level - self.tree_depth;
            let finest = &self.tree_finest[(arc.index >> shift) as usize];
            m += finest / BigRational::from_integer(BigInt::one() << shift as usize);
        }
        m
    }

    fn ratio(&self, arc: DyadicArc, mass: &BigRational) -> BigRational {
        mass * BigRational::from_integer(BigInt::one() << arc.level as usize)
    }

    fn split(&self, arc: DyadicArc, atoms: &[usize]) -> [(DyadicArc, Vec<usize>); 2] {
        let [a, b] = arc.children();
        let (mut left, mut right) = (Vec::new(), Vec::new());
        for &i in atoms {
            if dyadic_index(&self.atoms[i].0, a.level) == BigInt::from(a.index) {
                left.push(i);
            } else {
                right.push(i);
            }
        }
        [(a, left), (b, right)]
    }

    // Descendants below the tree level with no atoms all have the same ratio.
    fn constant_below(&self, arc: DyadicArc, atoms: &[usize]) -> bool {
        atoms.is_empty() && arc.level >= self.tree_depth
    }

    // Maximal heavy arcs among `arc` (if `include_self`) and its descendants.
    fn heavy_within(
        &self,
        arc: DyadicArc,
        atoms: Vec<usize>,
        include_self: bool,
        heavy: &mut Vec<HeavyArc>,
        unresolved: &mut Vec<UnresolvedArc>,
    ) {
        let mass = self.mass(arc, &atoms);
        if mass.is_zero() {
            return;
        }
        let ratio = self.ratio(arc, &mass);
        if include_self && ratio >= self.heavy {
            let tie = ratio == self.heavy;
            let (light, unres) = self.light_within(arc, atoms);
            heavy.push(HeavyArc {
                arc,
                mass,
                tie,
                light,
                unresolved: unres,
            });
            return;
        }
        // Here the ratio is below M, and so is every descendant's.
        if self.constant_below(arc, &atoms) {
            return;
        }
        if arc.level >= self.max_depth {
            unresolved.push(UnresolvedArc {
                arc,
                mass,
                reason: UnresolvedReason::DepthExhausted,
            });
            return;
        }
        for (child, sub) in self.split(arc, &atoms) {
            self.heavy_within(child, sub, true, heavy, unresolved);
        }
    }

    // Maximal light proper subarcs of a heavy arc.
    fn light_within(&self, arc: DyadicArc, atoms: Vec<usize>) -> (Vec<LightArc>, Vec<UnresolvedArc>) {
        let mut light = Vec::new();
        let mut unresolved = Vec::new();
        if arc.level >= self.max_depth {
            let mass = self.mass(arc, &atoms);
            unresolved.push(UnresolvedArc {
                arc,
                mass,
                reason: UnresolvedReason::DepthExhausted,
            });
            return (light, unresolved);
        }
        for (child, sub) in self.split(arc, &atoms) {
            self.light_search(child, sub, &mut light, &mut unresolved);
        }
        (light, unresolved)
    }

    fn light_search(
        &self,
        arc: DyadicArc,
        atoms: Vec<usize>,
        light: &mut Vec<LightArc>,
        unresolved: &mut Vec<UnresolvedArc>,
    ) {
        let mass = self.mass(arc, &atoms);
        let ratio = self.ratio(arc, &mass);
        if ratio <= self.light {
            let tie = ratio == self.light;
            let mut heavy = Vec::new();
            let mut unres = Vec::new();
            self.heavy_within(arc, atoms, false, &mut heavy, &mut unres);
            light.push(LightArc {
                arc,
                mass,
                tie,
                heavy,
                unresolved: unres,
            });
            return;
        }
        let reason = if self.constant_below(arc, &atoms) {
            Some(UnresolvedReason::UniformDensity)
        } else if arc.level >= self.max_depth {
            Some(UnresolvedReason::DepthExhausted)
        } else {
            None
        };
        if let Some(reason) = reason {
            unresolved.push(UnresolvedArc { arc, mass, reason });
            return;
        }
        for (child, sub) in self.split(arc, &atoms) {
            self.light_search(child, sub, light, unresolved);
        }
    }
}

/// Decomposes `μ` into alternating heavy (`μ(I)/m(I) ≥ M`) and light
/// (`μ(J)/m(J) ≤ M/100`) families of maximal dyadic arcs down to `max_depth`.
///
/// Atom angles must be exact rationals; arc masses are exact sums.
pub fn heavy_light_decompose(mu: &SingularMeasure, m: f64, max_depth: u32) -> Result<HeavyLightForest> {
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::Precondition(format!(
            "heavy threshold must be positive, got {m}"
        )));
    }
    if max_depth > MAX_LEVEL {
        return Err(Error::Precondition(format!(
            "max_depth {max_depth} exceeds {MAX_LEVEL}"
        )));
    }
    let mut atoms = Vec::with_capacity(mu.atoms().len());
    for a in mu.atoms() {
        match &a.angle {
            AtomAngle::Exact(q) => atoms.push((q.clone(), exact_f64(a.mass))),
            AtomAngle::Float(x) => return Err(Error::Representation { angle: *x }),
        }
    }
    let (tree_depth, tree_prefix, tree_finest) = match mu.tree() {
        Some(t) => {
            let finest: Vec<BigRational> = t.masses().iter().map(|x| exact_f64(*x)).collect();
            let mut prefix = Vec::with_capacity(finest.len() + 1);
            let mut acc = BigRational::zero();
            prefix.push(acc.clone());
            for f in &finest {
                acc += f;
                prefix.push(acc.clone());
            }
            (t.depth(), prefix, finest)
        }
        None => (0, Vec::new(), Vec::new()),
    };
    let threshold = exact_f64(m);
    let ctx = Ctx {
        light: &threshold / BigRational::from_integer(BigInt::from(100)),
        heavy: threshold.clone(),
        max_depth,
        tree_depth,
        tree_prefix,
        tree_finest,
        atoms,
    };
    let mut heavy = Vec::new();
    let mut unresolved = Vec::new();
    let all: Vec<usize> = (0..ctx.atoms.len()).collect();
    ctx.heavy_within(DyadicArc::ROOT, all, true, &mut heavy, &mut unresolved);
    Ok(HeavyLightForest {
        threshold,
        max_depth,
        heavy,
        unresolved,
        atoms_exact: ctx.atoms,
        atomic: mu.tree().is_none(),
    })
}

impl HeavyLightForest {
    /// True when no heavy arc exists.
    pub fn is_empty(&self) -> bool {
        self.heavy.is_empty()
    }

    /// Generations `l = 1, 2, …` as flat lists of heavy and light arcs.
    pub fn generations(&self) -> Vec<Generation> {
        let mut out = Vec::new();
        let mut frontier: Vec<&HeavyArc> = self.heavy.iter().collect();
        while !frontier.is_empty() {
            let mut gen = Generation::default();
            let mut next = Vec::new();
            for h in frontier {
                gen.heavy.push((h.arc, h.mass.clone()));
                for l in &h.light {
                    gen.light.push((l.arc, l.mass.clone()));
                    next.extend(l.heavy.iter());
                }
            }
            out.push(gen);
            frontier = next;
        }
        out
    }

    /// Every undecided arc in the forest.
    pub fn unresolved_arcs(&self) -> Vec<&UnresolvedArc> {
        let mut out: Vec<&UnresolvedArc> = self.unresolved.iter().collect();
        let mut stack: Vec<&HeavyArc> = self.heavy.iter().collect();
        while let Some(h) = stack.pop() {
            out.extend(h.unresolved.iter());
            for l in &h.light {
                out.extend(l.unresolved.iter());
                stack.extend(l.heavy.iter());
            }
        }
        out
    }

    /// Atoms lying in arcs that exhausted the depth: the part of the support
    /// on which `μ` concentrates at the computed resolution.
    pub fn residual_support(&self) -> Vec<BigRational> {
        let deep: Vec<DyadicArc> = self
            .unresolved_arcs()
            .into_iter()
            .filter(|u| u.reason == UnresolvedReason::DepthExhausted)
            .map(|u| u.arc)
            .collect();
        let mut out: Vec<BigRational> = self
            .atoms_exact
            .iter()
            .filter(|(q, _)| deep.iter().any(|a| a.contains_exact(q)))
            .map(|(q, _)| q.clone())
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Checks containment and properties (1)–(3) exactly.
    pub fn verify(&self) -> HeavyLightReport {
        let mut r = HeavyLightReport {
            containment: true,
            property1: true,
            property2: true,
            property3: self.atomic.then_some(true),
            heavy_count: 0,
            light_count: 0,
            unresolved_count: self.unresolved.len(),
            ties: 0,
        };
        let light_factor = BigRational::from_integer(BigInt::from(100));
        r.containment &= disjoint(
            self.heavy
                .iter()
                .map(|h| h.arc)
                .chain(self.unresolved.iter().map(|u| u.arc)),
        );
        let mut stack: Vec<&HeavyArc> = self.heavy.iter().collect();
        while let Some(h) = stack.pop() {
            r.heavy_count += 1;
            r.ties += usize::from(h.tie);
            r.unresolved_count += h.unresolved.len();
            let children = h.light.iter().map(|l| l.arc).chain(h.unresolved.iter().map(|u| u.arc));
            r.containment &= children.clone().all(|c| h.arc.contains_arc(c) && c != h.arc);
            r.containment &= disjoint(children.clone());
            let covered = children.fold(BigRational::zero(), |acc, c| acc + c.exact_length());
            r.property1 &= covered == h.arc.exact_length();
            for l in &h.light {
                r.light_count += 1;
                r.ties += usize::from(l.tie);
                r.unresolved_count += l.unresolved.len();
                let inner = l.heavy.iter().map(|x| x.arc).chain(l.unresolved.iter().map(|u| u.arc));
                r.containment &= inner.clone().all(|c| l.arc.contains_arc(c) && c != l.arc);
                r.containment &= disjoint(inner);
                let heavy_len = l
                    .heavy
                    .iter()
                    .fold(BigRational::zero(), |acc, x| acc + x.arc.exact_length());
                let bound = &l.mass / &self.threshold;
                r.property2 &= heavy_len <= bound && bound <= l.arc.exact_length() / &light_factor;
                if let Some(p3) = r.property3.as_mut() {
                    let inside = l
                        .heavy
                        .iter()
                        .map(|x| &x.mass)
                        .chain(l.unresolved.iter().map(|u| &u.mass))
                        .fold(BigRational::zero(), |acc, m| acc + m);
                    *p3 &= inside == l.mass;
                }
                stack.extend(l.heavy.iter());
            }
        }
        r
    }
}

fn disjoint(arcs: impl Iterator<Item = DyadicArc>) -> bool {
    let mut v: Vec<(BigRational, BigRational)> = arcs
        .map(|a| {
            let s = a.exact_start();
            let e = &s + a.exact_length();
            (s, e)
        })
        .collect();
    v.sort();
    v.windows(2).all(|w| w[0].1 <= w[1].0)
}

/// Exact `μ(arc)` for a measure with exact atom angles.
pub fn exact_arc_mass(mu: &SingularMeasure, arc: DyadicArc) -> Result<BigRational> {
    let mut m = BigRational::zero();
    for a in mu.atoms() {
        match &a.angle {
            AtomAngle::Exact(q) => {
                if arc.contains_exact(q) {
                    m += exact_f64(a.mass);
                }
            }
            AtomAngle::Float(x) => return Err(Error::Representation { angle: *x }),
        }
    }
    if let Some(t) = mu.tree() {
        if arc.level <= t.depth() {
            m += &t.level_masses(arc.level)[arc.index as usize];
        } else {
            let shift = arc.level - t.depth();
            m += exact_f64(t.masses()[(arc.index >> shift) as usize])
                / BigRational::from_integer(BigInt::one() << shift as usize);
        }
    }
    Ok(m)
}
