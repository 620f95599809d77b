//! Gamma function via the Lanczos approximation (g = 7, nine terms).

use crate::scalar::{nonpositive_integer, Real};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(x) for real `x`. Poles (non-positive integers) return infinity.
pub fn gamma<T: Real>(x: T) -> T {
    if nonpositive_integer(x).is_some() {
        return T::infinity();
    }
    let half = T::lit(0.5);
    if x < half {
        // reflection
        let pi = T::PI();
        return pi / ((pi * x).sin() * gamma(T::one() - x));
    }
    let x = x - T::one();
    let mut acc = T::lit(LANCZOS_COEF[0]);
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc = acc + T::lit(c) / (x + T::from_usize_lossy(i));
    }
    let t = x + T::lit(LANCZOS_G) + half;
    (T::TAU()).sqrt() * t.powf(x + half) * (-t).exp() * acc
}

/// 1/Γ(x), exactly zero at the poles of Γ.
pub fn rgamma<T: Real>(x: T) -> T {
    if nonpositive_integer(x).is_some() {
        T::zero()
    } else {
        gamma(x).recip()
    }
}

/// Rising factorial `(a)_n = a (a+1) … (a+n-1)`.
pub fn pochhammer<T: Real>(a: T, n: u64) -> T {
    (0..n).fold(T::one(), |acc, j| acc * (a + T::from_int(j as i64)))
}
