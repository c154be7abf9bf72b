use super::verdict::{tail_verdict, Verdict};
use crate::error::{Error, Result};
use crate::math::{self, frac, zeta};
use crate::quad;
use alloc::format;
use alloc::vec::Vec;

/// An open complementary arc `(start, start + length)` in turns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gap {
    /// Left endpoint in turns.
    pub start: f64,
    /// Length in turns.
    pub length: f64,
}

/// Gap-length rule of a generalized Cantor set: at level `n` each of the
/// `2^{n-1}` remaining closed intervals loses an open middle gap of length `ℓ_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CantorRule {
    /// `ℓ_n = β·R_{n-1}`, removing the middle fraction `β` of every interval.
    Ratio(f64),
    /// `ℓ_n = c·2^{-n}/n^s` with `c = 2/ζ(s)`, so the gaps exhaust the circle.
    Power(f64),
}

impl CantorRule {
    /// Middle thirds.
    pub const THIRDS: Self = Self::Ratio(1.0 / 3.0);
    /// The slow `1/n²` rule, `c = 12/π²`.
    pub const POLY2: Self = Self::Power(2.0);

    fn validate(self) -> Result<()> {
        let ok = match self {
            Self::Ratio(b) => b > 0.0 && b < 1.0,
            Self::Power(s) => s > 1.0 && s.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidSpec(format!("invalid gap rule {self:?}")))
        }
    }

    /// Gap lengths `ℓ_1..ℓ_levels` and remaining lengths `R_0..R_levels`.
    fn lengths(self, levels: u32) -> Result<(Vec<f64>, Vec<f64>)> {
        self.validate()?;
        let mut gaps = Vec::with_capacity(levels as usize);
        let mut rem = Vec::with_capacity(levels as usize + 1);
        rem.push(1.0);
        let c = match self {
            Self::Power(s) => 2.0 / zeta(s),
            Self::Ratio(_) => 0.0,
        };
        let mut total = 0.0;
        for n in 1..=levels {
            let prev = rem[rem.len() - 1];
            let ell = match self {
                Self::Ratio(b) => b * prev,
                Self::Power(s) => c * libm::ldexp(1.0, -(n as i32)) / math::powf(n as f64, s),
            };
            total += libm::ldexp(ell, n as i32 - 1);
            if ell > prev || total > 1.0 + 1e-12 {
                return Err(Error::Rule { total });
            }
            gaps.push(ell);
            rem.push(0.5 * (prev - ell));
        }
        Ok((gaps, rem))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Listed(Vec<Gap>),
    Cantor {
        rule: CantorRule,
        gap_lengths: Vec<f64>,
        remaining: Vec<f64>,
    },
}

/// A closed subset `E` of the circle described by its complementary open arcs.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundarySet {
    shape: Shape,
    is_exhaustive: bool,
}

/// Tolerance on `Σ|I_j| = 1` for a listed set to count as null.
pub const NULL_TOL: f64 = 1e-12;

impl BoundarySet {
    /// The set whose complement is exactly the union of the given gaps.
    pub fn from_gaps(gaps: Vec<Gap>) -> Result<Self> {
        let mut sorted: Vec<Gap> = gaps
            .into_iter()
            .map(|g| Gap {
                start: frac(g.start),
                length: g.length,
            })
            .collect();
        for g in &sorted {
            if !(g.length > 0.0 && g.length <= 1.0 && g.start.is_finite()) {
                return Err(Error::InvalidSpec(format!("invalid gap {g:?}")));
            }
        }
        sorted.sort_by(|a, b| a.start.total_cmp(&b.start));
        for w in sorted.windows(2) {
            if w[0].start + w[0].length > w[1].start + 1e-15 {
                return Err(Error::InvalidSpec(format!("gaps {:?} and {:?} overlap", w[0], w[1])));
            }
        }
        if let (Some(first), Some(last)) = (sorted.first(), sorted.last()) {
            if sorted.len() > 1 && last.start + last.length > first.start + 1.0 + 1e-15 {
                return Err(Error::InvalidSpec("first and last gaps overlap".into()));
            }
        }
        let total: f64 = sorted.iter().map(|g| g.length).sum();
        if total > 1.0 + NULL_TOL {
            return Err(Error::Rule { total });
        }
        Ok(Self {
            shape: Shape::Listed(sorted),
            is_exhaustive: true,
        })
    }

    /// Whether every gap is listed (as opposed to generated up to a level budget).
    pub fn is_exhaustive(&self) -> bool {
        self.is_exhaustive
    }

    /// Whether `E` has measure zero: listed gaps summing to one, or a
    /// generalized Cantor set with at least one level.
    pub fn is_null(&self) -> bool {
        match &self.shape {
            Shape::Listed(g) => g.iter().map(|g| g.length).sum::<f64>() >= 1.0 - NULL_TOL,
            Shape::Cantor { gap_lengths, .. } => !gap_lengths.is_empty(),
        }
    }

    /// Number of generated levels, or `None` for a listed set.
    pub fn levels(&self) -> Option<u32> {
        match &self.shape {
            Shape::Listed(_) => None,
            Shape::Cantor { gap_lengths, .. } => Some(gap_lengths.len() as u32),
        }
    }

    /// The generating rule of a Cantor set.
    pub fn rule(&self) -> Option<CantorRule> {
        match &self.shape {
            Shape::Listed(_) => None,
            Shape::Cantor { rule, .. } => Some(*rule),
        }
    }

    /// Gap length at each Cantor level (empty for listed sets).
    pub fn level_gap_lengths(&self) -> &[f64] {
        match &self.shape {
            Shape::Listed(_) => &[],
            Shape::Cantor { gap_lengths, .. } => gap_lengths,
        }
    }

    /// Total length of the gaps (listed, or generated up to the level budget).
    pub fn total_gap_length(&self) -> f64 {
        match &self.shape {
            Shape::Listed(g) => g.iter().map(|g| g.length).sum(),
            Shape::Cantor { gap_lengths, .. } => gap_lengths
                .iter()
                .enumerate()
                .map(|(i, l)| libm::ldexp(*l, i as i32))
                .sum(),
        }
    }

    /// The gaps of a listed set, or the `2^{n-1}` gaps of Cantor level `n`
    /// (`1 ≤ n ≤ min(levels, 24)`).
    pub fn gaps(&self, level: u32) -> Vec<Gap> {
        match &self.shape {
            Shape::Listed(g) => g.clone(),
            Shape::Cantor {
                gap_lengths, remaining, ..
            } => {
                if level == 0 || level as usize > gap_lengths.len() || level > 24 {
                    return Vec::new();
                }
                let mut starts = alloc::vec![0.0f64];
                for k in 1..level as usize {
                    let (r_prev, r) = (remaining[k - 1], remaining[k]);
                    starts = starts.iter().flat_map(|a| [*a, a + r_prev - r]).collect();
                }
                let n = level as usize;
                starts
                    .into_iter()
                    .map(|a| Gap {
                        start: a + remaining[n],
                        length: gap_lengths[n - 1],
                    })
                    .collect()
            }
        }
    }

    // (count, length) of the gaps in each generation 1..=depth. Listed gaps go to
    // generation n when 2^-n < |I| ≤ 2^{1-n}; smaller ones join generation `depth`.
    fn generations(&self, depth: u32) -> Vec<Vec<(f64, f64)>> {
        let mut out: Vec<Vec<(f64, f64)>> = (0..depth).map(|_| Vec::new()).collect();
        match &self.shape {
            Shape::Listed(gaps) => {
                for g in gaps {
                    let n = libm::floor(-libm::log2(g.length)) as i64 + 1;
                    let n = (n.max(1) as usize).min(depth as usize);
                    if n >= 1 {
                        out[n - 1].push((1.0, g.length));
                    }
                }
            }
            Shape::Cantor { gap_lengths, .. } => {
                for (i, l) in gap_lengths.iter().take(depth as usize).enumerate() {
                    out[i].push((libm::ldexp(1.0, i as i32), *l));
                }
            }
        }
        out
    }

    fn series(&self, depth: u32, per_gap: impl Fn(f64) -> f64) -> Vec<f64> {
        self.generations(depth.max(1))
            .iter()
            .map(|gen| gen.iter().map(|(count, len)| count * per_gap(*len)).sum())
            .collect()
    }

    /// Number of closed dyadic arcs of level `n` meeting `E`, for `n = 1..=depth`.
    pub fn dyadic_counts(&self, depth: u32) -> Vec<u64> {
        (1..=depth).map(|n| self.dyadic_count(n)).collect()
    }

    fn dyadic_count(&self, n: u32) -> u64 {
        let total = 1u64 << n;
        let h = libm::ldexp(1.0, -(n as i32));
        match &self.shape {
            Shape::Listed(gaps) => {
                let mut inside = 0u64;
                for g in gaps {
                    // arcs [kh, (k+1)h] with start < kh and (k+1)h < start + length
                    let lo = math::floor(g.start / h) as i64 + 1;
                    let hi = math::ceil((g.start + g.length) / h) as i64 - 2;
                    if hi >= lo {
                        inside += (hi - lo + 1) as u64;
                    }
                }
                total.saturating_sub(inside)
            }
            Shape::Cantor {
                gap_lengths, remaining, ..
            } => {
                let mut ranges: Vec<(i64, i64)> = Vec::new();
                cantor_ranges(0.0, 0, gap_lengths, remaining, h, &mut ranges);
                count_mod(ranges, total as i64)
            }
        }
    }
}

// Closed interval [a, a + R_k] of generation k; its endpoints lie in E.
fn cantor_ranges(a: f64, k: usize, gaps: &[f64], rem: &[f64], h: f64, out: &mut Vec<(i64, i64)>) {
    let b = a + rem[k];
    let lo = math::ceil(a / h) as i64 - 1;
    let hi = math::floor(b / h) as i64;
    if hi - lo < 2 || k >= gaps.len() {
        out.push((lo, hi));
        return;
    }
    cantor_ranges(a, k + 1, gaps, rem, h, out);
    cantor_ranges(b - rem[k + 1], k + 1, gaps, rem, h, out);
}

// Size of the union of index ranges taken mod `total`.
fn count_mod(ranges: Vec<(i64, i64)>, total: i64) -> u64 {
    let mut flat: Vec<(i64, i64)> = Vec::with_capacity(ranges.len() + 2);
    for (lo, hi) in ranges {
        if hi - lo + 1 >= total {
            return total as u64;
        }
        let lo_m = lo.rem_euclid(total);
        let hi_m = lo_m + (hi - lo);
        if hi_m < total {
            flat.push((lo_m, hi_m));
        } else {
            flat.push((lo_m, total - 1));
            flat.push((0, hi_m - total));
        }
    }
    flat.sort_unstable();
    let mut count = 0i64;
    let mut cur: Option<(i64, i64)> = None;
    for (lo, hi) in flat {
        match cur {
            Some((cl, ch)) if lo <= ch + 1 => cur = Some((cl, ch.max(hi))),
            Some((cl, ch)) => {
                count += ch - cl + 1;
                cur = Some((lo, hi));
            }
            None => cur = Some((lo, hi)),
        }
    }
    if let Some((cl, ch)) = cur {
        count += ch - cl + 1;
    }
    count as u64
}

/// Builds the generalized Cantor set with `levels` levels of gaps.
///
/// `levels = 0` gives the whole circle (no gaps), which is not null.
pub fn generalized_cantor(rule: CantorRule, levels: u32) -> Result<BoundarySet> {
    if levels > 1000 {
        return Err(Error::Precondition(format!("level budget {levels} too large")));
    }
    let (gap_lengths, remaining) = rule.lengths(levels)?;
    Ok(BoundarySet {
        shape: Shape::Cantor {
            rule,
            gap_lengths,
            remaining,
        },
        is_exhaustive: false,
    })
}

/// Generation terms, their partial sums, and the tail verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct BcSeries {
    /// Contribution of each generation.
    pub terms: Vec<f64>,
    /// Running sums of `terms`.
    pub partial_sums: Vec<f64>,
    /// Convergence verdict.
    pub verdict: Verdict,
}

impl BcSeries {
    fn new(terms: Vec<f64>, verdict: Verdict) -> Self {
        let mut acc = 0.0;
        let partial_sums = terms
            .iter()
            .map(|t| {
                acc += t;
                acc
            })
            .collect();
        Self {
            terms,
            partial_sums,
            verdict,
        }
    }
}

fn check_p(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("p must be positive, got {p}")))
    }
}

fn finite_sum_verdict(e: &BoundarySet, terms: &[f64]) -> Verdict {
    if !e.is_null() {
        Verdict::Diverges
    } else if e.is_exhaustive {
        Verdict::Converges
    } else {
        tail_verdict(terms)
    }
}

/// `Σ |I_j|·|log|I_j||^p` over the complementary arcs, by generation.
pub fn bc_complementary_sum(e: &BoundarySet, p: f64, depth: u32) -> Result<BcSeries> {
    check_p(p)?;
    let terms = e.series(depth, |l| l * math::powf(math::ln(l).abs(), p));
    let verdict = finite_sum_verdict(e, &terms);
    Ok(BcSeries::new(terms, verdict))
}

/// `Σ_n N_n·2^{-n}·(n log 2)^{p-1}` where `N_n` counts level-`n` closed dyadic
/// arcs meeting `E`.
pub fn bc_dyadic_sum(e: &BoundarySet, p: f64, depth: u32) -> Result<BcSeries> {
    check_p(p)?;
    let terms: Vec<f64> = e
        .dyadic_counts(depth)
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let n = (i + 1) as f64;
            *c as f64 * libm::ldexp(1.0, -(i as i32 + 1)) * math::powf(n * core::f64::consts::LN_2, p - 1.0)
        })
        .collect();
    let verdict = if e.is_null() {
        tail_verdict(&terms)
    } else {
        Verdict::Diverges
    };
    Ok(BcSeries::new(terms, verdict))
}

/// `∫_𝕋 |log dist(ξ, E)|^p dm(ξ)` with arc-length distance, as per-gap
/// contributions `2∫_0^{|I|/2} |log s|^p ds` summed by generation.
pub fn bc_integral(e: &BoundarySet, p: f64, depth: u32) -> Result<BcSeries> {
    check_p(p)?;
    let terms = e.series(depth, |l| gap_log_integral(l, p));
    let verdict = finite_sum_verdict(e, &terms);
    Ok(BcSeries::new(terms, verdict))
}

/// `2∫_0^{L/2} |log s|^p ds`: closed form for integer `p`, quadrature otherwise.
pub fn gap_log_integral(length: f64, p: f64) -> f64 {
    if p == math::floor(p) && p <= 170.0 {
        gap_log_integral_closed(length, p as u32)
    } else {
        gap_log_integral_quadrature(length, p)
    }
}

// With x = L/2 and y = -log x: ∫_0^x (-log s)^p ds = x·Σ_{k=0}^p (p!/k!) y^k.
fn gap_log_integral_closed(length: f64, p: u32) -> f64 {
    let x = 0.5 * length;
    let y = -math::ln(x);
    let mut sum = 0.0;
    let mut coef = 1.0;
    let mut k = p;
    loop {
        sum += coef * libm::pow(y, k as f64);
        if k == 0 {
            break;
        }
        coef *= k as f64;
        k -= 1;
    }
    2.0 * x * sum
}

// ∫_0^x (-log s)^p ds = Γ(p+1, y) = x·∫_0^∞ (y + w)^p e^{-w} dw.
pub(crate) fn gap_log_integral_quadrature(length: f64, p: f64) -> f64 {
    let x = 0.5 * length;
    let y = -math::ln(x);
    let upper = 80.0 + 4.0 * p;
    let scale = math::powf(y.max(1.0) + p, p);
    let out = quad::integrate(
        |w| Ok(math::powf(y + w, p) * math::exp(-w)),
        0.0,
        upper,
        8,
        1e-14 * scale,
        2000,
        f64::INFINITY,
    )
    .map(|o| o.value)
    .unwrap_or(f64::NAN);
    2.0 * x * out
}

/// Per-test verdicts and the combined outcome of [`classify_bc`].
#[derive(Debug, Clone, PartialEq)]
pub struct BcClassification {
    /// Integral test (a).
    pub integral: BcSeries,
    /// Complementary-arc sum (b).
    pub complementary: BcSeries,
    /// Dyadic-arc sum (c).
    pub dyadic: BcSeries,
    /// Common verdict, or `None` when the three tests disagree.
    pub unanimous: Option<Verdict>,
}

impl BcClassification {
    /// True when the tests disagree, which means the harness failed.
    pub fn is_disagreement(&self) -> bool {
        self.unanimous.is_none()
    }
}

/// Default depth for [`classify_bc`]; the heuristics need at least 16 levels
/// before slowly converging and slowly diverging tails separate.
pub const CLASSIFY_DEPTH: u32 = 20;

/// Runs the three equivalent conditions (a), (b), (c) on `E`.
pub fn classify_bc(e: &BoundarySet, p: f64, depth: u32) -> Result<BcClassification> {
    let integral = bc_integral(e, p, depth)?;
    let complementary = bc_complementary_sum(e, p, depth)?;
    let dyadic = bc_dyadic_sum(e, p, depth)?;
    let v = integral.verdict;
    let unanimous = (complementary.verdict == v && dyadic.verdict == v).then_some(v);
    Ok(BcClassification {
        integral,
        complementary,
        dyadic,
        unanimous,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn thirds_lengths() {
        let e = generalized_cantor(CantorRule::THIRDS, 5).unwrap();
        let l = e.level_gap_lengths();
        for (i, x) in l.iter().enumerate() {
            assert!((x - 3f64.powi(-(i as i32) - 1)).abs() < 1e-16);
        }
        let g = e.gaps(2);
        assert_eq!(g.len(), 2);
        assert!((g[0].start - 1.0 / 9.0).abs() < 1e-15);
        assert!((g[1].start - 7.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn power_rule_total() {
        let e = generalized_cantor(CantorRule::POLY2, 60).unwrap();
        let l = e.level_gap_lengths();
        let c = 12.0 / (core::f64::consts::PI * core::f64::consts::PI);
        assert!((l[0] - c / 2.0).abs() < 1e-15);
        let partial: f64 = (1..=60).map(|n| 0.5 * c / (n * n) as f64).sum();
        assert!((e.total_gap_length() - partial).abs() < 1e-14);
        assert!(partial < 1.0 && partial > 0.985);
    }

    #[test]
    fn levels_zero_is_whole_circle() {
        let e = generalized_cantor(CantorRule::THIRDS, 0).unwrap();
        assert!(!e.is_null());
        assert!(e.gaps(1).is_empty());
        let c = classify_bc(&e, 1.0, 12).unwrap();
        assert_eq!(c.unanimous, Some(Verdict::Diverges));
    }

    #[test]
    fn gap_integral_routes_agree() {
        for p in [1u32, 2, 3] {
            for l in [1.0, 0.5, 1e-3, 1e-9] {
                let a = gap_log_integral_closed(l, p);
                let b = gap_log_integral_quadrature(l, p as f64);
                assert!((a - b).abs() < 1e-12 * a, "{p} {l} {a} {b}");
            }
        }
    }

    #[test]
    fn two_point_set() {
        let e = BoundarySet::from_gaps(vec![
            Gap {
                start: 0.0,
                length: 0.5,
            },
            Gap {
                start: 0.5,
                length: 0.5,
            },
        ])
        .unwrap();
        let a = bc_integral(&e, 1.0, 4).unwrap();
        assert!((a.partial_sums[3] - (1.0 + 4f64.ln())).abs() < 1e-14);
        assert_eq!(a.verdict, Verdict::Converges);
        assert_eq!(e.dyadic_counts(3), vec![2, 4, 4]);
    }

    #[test]
    fn overlapping_gaps_rejected() {
        assert!(BoundarySet::from_gaps(vec![
            Gap {
                start: 0.0,
                length: 0.6
            },
            Gap {
                start: 0.5,
                length: 0.2
            },
        ])
        .is_err());
        assert!(BoundarySet::from_gaps(vec![
            Gap {
                start: 0.9,
                length: 0.2
            },
            Gap {
                start: 0.05,
                length: 0.2
            },
        ])
        .is_err());
    }

    #[test]
    fn count_mod_wraps() {
        assert_eq!(count_mod(vec![(-1, 0), (3, 4)], 4), 2);
        assert_eq!(count_mod(vec![(-1, 0), (1, 1)], 4), 3);
        assert_eq!(count_mod(vec![(-1, 1), (2, 3)], 4), 4);
    }
}
