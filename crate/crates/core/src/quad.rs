//! Globally adaptive Gauss–Kronrod (7/15) quadrature.

// Node and weight tables keep their published digits.
#![allow(clippy::excessive_precision)]

use crate::error::Result;
use alloc::collections::BinaryHeap;
use core::cmp::Ordering;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for XGK[1], XGK[3], XGK[5] and the centre.
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F>(f: &mut F, a: f64, b: f64) -> Result<Segment>
where
    F: FnMut(f64) -> Result<f64>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_sum = fc.abs() * WGK[7];
    let mut fv = [(0.0, 0.0); 7];
    for (j, x) in XGK[..7].iter().enumerate() {
        let (f1, f2) = (f(c - h * x)?, f(c + h * x)?);
        fv[j] = (f1, f2);
        kronrod += WGK[j] * (f1 + f2);
        abs_sum += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * (fc - mean).abs();
    for (j, (f1, f2)) in fv.iter().enumerate() {
        asc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
    }
    let value = kronrod * h;
    let asc = asc * h.abs();
    let abs_sum = abs_sum * h.abs();
    let mut error = ((kronrod - gauss) * h).abs();
    if asc != 0.0 && error != 0.0 {
        let scale = libm::pow(200.0 * error / asc, 1.5);
        error = if scale < 1.0 { asc * scale } else { asc };
    }
    let floor = 50.0 * f64::EPSILON * abs_sum;
    if floor > error {
        error = floor;
    }
    Ok(Segment { a, b, value, error })
}

/// Why the adaptive loop stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Stop {
    Converged,
    Budget,
    Capped,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Outcome {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
    pub stop: Stop,
}

/// Integrates `f` over `[a, b]`, starting from `pieces` equal subintervals
/// and bisecting the worst one until the summed error estimate is at most
/// `abs_tol`, the budget runs out, or `|value|` exceeds `cap`.
pub(crate) fn integrate<F>(
    mut f: F,
    a: f64,
    b: f64,
    pieces: usize,
    abs_tol: f64,
    max_subdivisions: usize,
    cap: f64,
) -> Result<Outcome>
where
    F: FnMut(f64) -> Result<f64>,
{
    let pieces = pieces.max(1);
    let mut heap = BinaryHeap::with_capacity(pieces * 2);
    let step = (b - a) / pieces as f64;
    for k in 0..pieces {
        let lo = a + step * k as f64;
        let hi = if k + 1 == pieces { b } else { lo + step };
        heap.push(gk15(&mut f, lo, hi)?);
    }
    loop {
        let (value, error) = heap.iter().fold((0.0, 0.0), |(v, e), s| (v + s.value, e + s.error));
        let stop = if value.abs() > cap {
            Some(Stop::Capped)
        } else if error <= abs_tol {
            Some(Stop::Converged)
        } else if heap.len() >= max_subdivisions.max(pieces) {
            Some(Stop::Budget)
        } else {
            None
        };
        if let Some(stop) = stop {
            return Ok(Outcome {
                value,
                error,
                subdivisions: heap.len(),
                stop,
            });
        }
        let worst = heap.pop().expect("nonempty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval below resolution: keep it with its estimate and stop refining it.
            let frozen = Segment { error: 0.0, ..worst };
            heap.push(frozen);
            let rest: f64 = heap.iter().map(|s| s.error).sum();
            if rest <= abs_tol {
                continue;
            }
            return Ok(Outcome {
                value,
                error,
                subdivisions: heap.len(),
                stop: Stop::Budget,
            });
        }
        heap.push(gk15(&mut f, worst.a, mid)?);
        heap.push(gk15(&mut f, mid, worst.b)?);
    }
}
