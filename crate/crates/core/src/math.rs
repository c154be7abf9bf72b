//! Scalar helpers over `libm`, usable without `std`.

use core::f64::consts::PI;
use num_complex::Complex64;

#[inline]
pub(crate) fn ln(x: f64) -> f64 {
    libm::log(x)
}

#[inline]
pub(crate) fn ln1p(x: f64) -> f64 {
    libm::log1p(x)
}

#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}

#[inline]
pub(crate) fn expm1(x: f64) -> f64 {
    libm::expm1(x)
}

#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub(crate) fn powf(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}

#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub(crate) fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

#[inline]
pub(crate) fn asin(x: f64) -> f64 {
    libm::asin(x)
}

#[inline]
pub(crate) fn floor(x: f64) -> f64 {
    libm::floor(x)
}

#[inline]
pub(crate) fn ceil(x: f64) -> f64 {
    libm::ceil(x)
}

#[inline]
pub(crate) fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

/// Reduces an angle in turns to `[0, 1)`.
#[inline]
pub fn frac(turns: f64) -> f64 {
    let f = turns - floor(turns);
    if f >= 1.0 {
        0.0
    } else {
        f
    }
}

/// Reduces an angle in turns to `[-1/2, 1/2)`.
#[inline]
pub fn wrap_half(turns: f64) -> f64 {
    let w = turns - floor(turns + 0.5);
    if w >= 0.5 {
        w - 1.0
    } else {
        w
    }
}

/// `e^{2πi t}` for `t` in turns.
#[inline]
pub fn cis_turns(t: f64) -> Complex64 {
    let a = 2.0 * PI * t;
    Complex64::new(cos(a), sin(a))
}

/// Argument of a complex number in turns, in `[0, 1)`.
#[inline]
pub fn arg_turns(z: Complex64) -> f64 {
    frac(atan2(z.im, z.re) / (2.0 * PI))
}

/// Riemann zeta `ζ(s)` for real `s > 1` by Euler–Maclaurin summation.
pub fn zeta(s: f64) -> f64 {
    assert!(s > 1.0, "zeta requires s > 1");
    const N: usize = 32;
    let mut sum = 0.0;
    for k in 1..N {
        sum += powf(k as f64, -s);
    }
    let n = N as f64;
    let n_s = powf(n, -s);
    sum += n_s * n / (s - 1.0) + 0.5 * n_s;
    // Bernoulli corrections B_{2j}/(2j)! · s(s+1)…(s+2j-2) · N^{-s-2j+1}.
    const B: [f64; 6] = [
        1.0 / 6.0,
        -1.0 / 30.0,
        1.0 / 42.0,
        -1.0 / 30.0,
        5.0 / 66.0,
        -691.0 / 2730.0,
    ];
    let mut rising = s;
    let mut fact = 2.0;
    let mut pow = n_s / n;
    for (j, b) in B.iter().enumerate() {
        let term = b / fact * rising * pow;
        sum += term;
        let k = 2.0 * (j as f64 + 1.0);
        rising *= (s + k - 1.0) * (s + k);
        fact *= (k + 1.0) * (k + 2.0);
        pow /= n * n;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_matches_even_values() {
        assert!((zeta(2.0) - PI * PI / 6.0).abs() < 1e-15);
        assert!((zeta(4.0) - PI.powi(4) / 90.0).abs() < 1e-15);
        assert!((zeta(6.0) - PI.powi(6) / 945.0).abs() < 1e-15);
    }

    #[test]
    fn zeta_near_one_has_simple_pole() {
        let s = 1.001;
        assert!((zeta(s) - (1.0 / (s - 1.0) + 0.577_215_664_901_532_9)).abs() < 1e-3);
    }

    #[test]
    fn wrapping() {
        assert_eq!(frac(-0.25), 0.75);
        assert_eq!(frac(1.0), 0.0);
        assert_eq!(wrap_half(0.75), -0.25);
        assert_eq!(wrap_half(0.5), -0.5);
        assert_eq!(wrap_half(-1e-20), -1e-20);
        assert_eq!(frac(-1e-20), 0.0);
    }
}
