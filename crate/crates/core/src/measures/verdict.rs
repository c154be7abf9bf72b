use crate::math;

/// Outcome of a convergence test on a truncated infinite sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    /// Tail is dominated by a decaying sequence.
    Converges,
    /// Tail is bounded below by a non-summable sequence.
    Diverges,
    /// Neither pattern is clear at the computed depth.
    Inconclusive,
}

impl Verdict {
    /// Lower-case name.
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Converges => "converges",
            Self::Diverges => "diverges",
            Self::Inconclusive => "inconclusive",
        }
    }
}

/// Generations inspected at the end of the sequence.
pub const TAIL_WINDOW: usize = 5;
/// Per-generation ratio threshold for geometric domination.
pub const RATIO_THRESHOLD: f64 = 0.95;
/// Fewest generations for which a verdict is attempted.
pub const MIN_GENERATIONS: usize = 2 * TAIL_WINDOW;
/// Local power-law exponent below which the tail is treated as non-summable.
pub const DIVERGENT_EXPONENT: f64 = 1.5;
/// Local power-law exponent above which the tail is treated as summable.
pub const CONVERGENT_EXPONENT: f64 = 1.55;
const ACCELERATION: f64 = 1.1;

/// Decides convergence of `Σ g_n` from the nonnegative generation terms
/// `g_1, …, g_N`.
///
/// * five or more trailing zero terms: converges (fewer are ignored);
/// * mean ratio `(g_N/g_{N-5})^{1/5} ≤ 0.95` with a steepening log-log slope
///   (a geometric tail): converges;
/// * otherwise the local exponent `s` in `g_n ≈ n^{-s}` over the second half
///   of the sequence decides: `s < 1.5` diverges, `s ≥ 1.55` converges, and
///   the band between is inconclusive.
pub fn tail_verdict(terms: &[f64]) -> Verdict {
    let nonzero = terms.iter().rposition(|g| *g != 0.0).map_or(0, |i| i + 1);
    if nonzero + TAIL_WINDOW <= terms.len() {
        return Verdict::Converges;
    }
    let terms = &terms[..nonzero];
    let n = terms.len();
    if n < MIN_GENERATIONS {
        return Verdict::Inconclusive;
    }
    if terms.iter().any(|g| !(g.is_finite() && *g >= 0.0)) {
        return Verdict::Inconclusive;
    }
    let last = terms[n - 1];
    let back = terms[n - 1 - TAIL_WINDOW];
    if back == 0.0 || terms[n / 2 - 1] == 0.0 {
        return Verdict::Inconclusive;
    }
    let ratio = math::powf(last / back, 1.0 / TAIL_WINDOW as f64);
    let half = slope(terms, n / 2);
    let tail = slope(terms, n - TAIL_WINDOW);
    if ratio <= RATIO_THRESHOLD && tail >= ACCELERATION * half {
        Verdict::Converges
    } else if half < DIVERGENT_EXPONENT {
        Verdict::Diverges
    } else if half >= CONVERGENT_EXPONENT {
        Verdict::Converges
    } else {
        Verdict::Inconclusive
    }
}

// -d log g / d log n between generations `from` and `len` (1-based).
fn slope(terms: &[f64], from: usize) -> f64 {
    let n = terms.len();
    let from = from.max(1);
    let (g0, g1) = (terms[from - 1], terms[n - 1]);
    let (n0, n1) = (from as f64, n as f64);
    -(math::ln(g1) - math::ln(g0)) / (math::ln(n1) - math::ln(n0))
}
