//! Associated Legendre functions and spherical harmonics.
//!
//! `Y_{l,m}(φ, θ) = (2π)^{-1/2} e^{imφ} (-1)^m sqrt((2l+1)/2 · (l-m)!/(l+m)!) P_l^m(cos θ)`
//! for `m >= 0`, with `P_l^m` the Ferrers function carrying the Condon–Shortley
//! phase. Negative orders use `Y_{l,-m} = (-1)^m conj(Y_{l,m})`. The set is
//! orthonormal on the unit sphere.

use num_complex::Complex;

use super::SpecfunError;
use crate::scalar::Real;

/// A direction on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalPoint<T> {
    /// Polar angle in `[0, π]`.
    pub theta: T,
    /// Azimuth in `[0, 2π)`.
    pub phi: T,
}

impl<T: Real> SphericalPoint<T> {
    pub fn new(theta: T, phi: T) -> Result<Self, SpecfunError> {
        if !(theta >= T::zero() && theta <= T::PI()) {
            return Err(SpecfunError::DomainError(format!("theta={theta} outside [0, π]")));
        }
        if !(phi >= T::zero() && phi < T::TAU()) {
            return Err(SpecfunError::DomainError(format!("phi={phi} outside [0, 2π)")));
        }
        Ok(SphericalPoint { theta, phi })
    }

    /// Wraps `phi` into `[0, 2π)`; `theta` must already be valid.
    pub fn wrapped(theta: T, phi: T) -> Result<Self, SpecfunError> {
        let tau = T::TAU();
        let mut phi = phi % tau;
        if phi < T::zero() {
            phi = phi + tau;
        }
        if phi >= tau {
            phi = T::zero();
        }
        Self::new(theta, phi)
    }

    /// Cartesian unit vector.
    pub fn unit_vector(&self) -> [T; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

/// Ferrers function `P_l^m(x)` (Condon–Shortley phase included).
pub fn assoc_legendre<T: Real>(l: usize, m: usize, x: T) -> Result<T, SpecfunError> {
    if m > l {
        return Err(SpecfunError::InvalidParams(format!("m={m} exceeds l={l}")));
    }
    if !(x.abs() <= T::one()) {
        return Err(SpecfunError::DomainError(format!("|x|={} > 1", x.abs())));
    }
    Ok(legendre_unchecked(l, m, x))
}

fn legendre_unchecked<T: Real>(l: usize, m: usize, x: T) -> T {
    let one = T::one();
    let sx = ((one - x) * (one + x)).sqrt();
    // P_m^m = (-1)^m (2m-1)!! (1-x²)^{m/2}
    let mut pmm = one;
    for i in 0..m {
        pmm = -pmm * T::from_usize_lossy(2 * i + 1) * sx;
    }
    if l == m {
        return pmm;
    }
    let mut pm1 = x * T::from_usize_lossy(2 * m + 1) * pmm;
    if l == m + 1 {
        return pm1;
    }
    let mut pm0 = pmm;
    for ll in (m + 2)..=l {
        let p = (T::from_usize_lossy(2 * ll - 1) * x * pm1 - T::from_usize_lossy(ll + m - 1) * pm0)
            / T::from_usize_lossy(ll - m);
        pm0 = pm1;
        pm1 = p;
    }
    pm1
}

/// `sqrt((2l+1)/2 · (l-m)!/(l+m)!)`, the θ-normalization for order `m >= 0`.
fn theta_norm<T: Real>(l: usize, m: usize) -> T {
    let ratio = ((l - m + 1)..=(l + m)).fold(T::one(), |acc, j| acc / T::from_usize_lossy(j));
    (T::from_usize_lossy(2 * l + 1) / T::lit(2.0) * ratio).sqrt()
}

/// θ-dependent factor of `Y_{l,m}` for `m >= 0`:
/// `(2π)^{-1/2} (-1)^m sqrt(...) P_l^m(cos θ)`.
fn theta_part<T: Real>(l: usize, m: usize, theta: T) -> T {
    let sign = if m.is_multiple_of(2) { T::one() } else { -T::one() };
    let inv_sqrt_2pi = T::TAU().sqrt().recip();
    inv_sqrt_2pi * sign * theta_norm(l, m) * legendre_unchecked(l, m, theta.cos())
}

/// Spherical harmonic `Y_{l,m}` at `pt`.
pub fn sph_harm<T: Real>(l: usize, m: i64, pt: SphericalPoint<T>) -> Result<Complex<T>, SpecfunError> {
    let am = m.unsigned_abs() as usize;
    if am > l {
        return Err(SpecfunError::InvalidParams(format!("|m|={am} exceeds l={l}")));
    }
    let amp = theta_part(l, am, pt.theta);
    let phase = T::from_int(am as i64) * pt.phi;
    let y = Complex::from_polar(amp, phase);
    if m >= 0 {
        Ok(y)
    } else if am.is_multiple_of(2) {
        Ok(y.conj())
    } else {
        Ok(-y.conj())
    }
}

/// θ-factors for all `0 <= m <= l <= lmax`, stored at `l(l+1)/2 + m`.
///
/// Multiply by `e^{imφ}` to recover `Y_{l,m}`; negative orders follow from the
/// conjugation rule.
pub fn theta_table<T: Real>(lmax: usize, theta: T) -> Vec<T> {
    let mut out = Vec::with_capacity((lmax + 1) * (lmax + 2) / 2);
    for l in 0..=lmax {
        for m in 0..=l {
            out.push(theta_part(l, m, theta));
        }
    }
    out
}

/// Index into [`theta_table`].
#[inline]
pub fn theta_index(l: usize, m: usize) -> usize {
    l * (l + 1) / 2 + m
}
