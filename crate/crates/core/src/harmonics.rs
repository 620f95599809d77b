//! Spherical-harmonic analysis and synthesis on S², and convolution with
//! zonal kernels.
//!
//! A rotation-invariant operator on `L²(S²)` is a convolution
//! `(f * g)(x) = ∫_{S²} f(y) ĝ(x·y) dΩ(y)` with a zonal kernel `g`, whose
//! profile is `ĝ(cos θ) = g(θ)`. By the Funk–Hecke formula it acts on
//! coefficients as `(f * g)_l^m = c_l · f_l^m · g_l^0` with
//! `c_l = sqrt(4π / (2l + 1))` ([`zonal_multiplier`]). Tesseral entries of the
//! kernel do not contribute.

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quadrature::gauss_legendre;
use crate::scalar::Real;
use crate::specfun::legendre::{theta_index, theta_table};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HarmonicsError {
    #[error("grid {n_theta}x{n_phi} too coarse for lmax={lmax} (need {need_theta}x{need_phi})")]
    GridTooCoarse {
        n_theta: usize,
        n_phi: usize,
        lmax: usize,
        need_theta: usize,
        need_phi: usize,
    },
    #[error("expected {expected} samples, got {got}")]
    SampleCount { expected: usize, got: usize },
    #[error("spectrum entry ({l}, {m}) outside lmax={lmax}")]
    OutOfRange { l: usize, m: i64, lmax: usize },
    #[error("malformed spectrum JSON: {0}")]
    Json(String),
}

/// Triangular table of coefficients `f_l^m`, `0 <= l <= lmax`, `|m| <= l`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphericalSpectrum<T> {
    lmax: usize,
    coeffs: Vec<Complex<T>>,
}

#[inline]
fn spec_index(l: usize, m: i64) -> usize {
    ((l * l + l) as i64 + m) as usize
}

impl<T: Real> SphericalSpectrum<T> {
    pub fn zeros(lmax: usize) -> Self {
        SphericalSpectrum {
            lmax,
            coeffs: vec![Complex::new(T::zero(), T::zero()); (lmax + 1) * (lmax + 1)],
        }
    }

    pub fn lmax(&self) -> usize {
        self.lmax
    }

    fn index(&self, l: usize, m: i64) -> Option<usize> {
        if l > self.lmax || m.unsigned_abs() as usize > l {
            return None;
        }
        Some(((l * l + l) as i64 + m) as usize)
    }

    /// Coefficient at `(l, m)`; zero outside the table.
    pub fn get(&self, l: usize, m: i64) -> Complex<T> {
        self.index(l, m)
            .map(|i| self.coeffs[i])
            .unwrap_or_else(|| Complex::new(T::zero(), T::zero()))
    }

    pub fn set(&mut self, l: usize, m: i64, value: Complex<T>) -> Result<(), HarmonicsError> {
        let i = self.index(l, m).ok_or(HarmonicsError::OutOfRange {
            l,
            m,
            lmax: self.lmax,
        })?;
        self.coeffs[i] = value;
        Ok(())
    }

    /// `(l, m, f_l^m)` in storage order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, i64, Complex<T>)> + '_ {
        (0..=self.lmax).flat_map(move |l| {
            (-(l as i64)..=l as i64).map(move |m| (l, m, self.get(l, m)))
        })
    }

    /// Largest entry-wise modulus of the difference (tables may differ in lmax).
    pub fn max_abs_diff(&self, other: &Self) -> T {
        let lmax = self.lmax.max(other.lmax);
        let mut worst = T::zero();
        for l in 0..=lmax {
            for m in -(l as i64)..=l as i64 {
                worst = worst.max((self.get(l, m) - other.get(l, m)).norm());
            }
        }
        worst
    }

    /// True when the table describes a real-valued function:
    /// `f_l^{-m} = (-1)^m conj(f_l^m)` to within `tol`.
    pub fn is_real_function(&self, tol: T) -> bool {
        self.iter().all(|(l, m, v)| {
            let sign = if m.rem_euclid(2) == 0 { T::one() } else { -T::one() };
            (self.get(l, -m) - v.conj() * sign).norm() <= tol
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries: Vec<SpectrumEntry> = self
            .iter()
            .map(|(l, m, v)| SpectrumEntry {
                l,
                m,
                re: v.re.as_f64(),
                im: v.im.as_f64(),
            })
            .collect();
        serde_json::to_value(SpectrumJson {
            lmax: self.lmax,
            entries,
        })
        .expect("spectrum serializes")
    }

    /// Parses `{lmax, entries: [{l, m, re, im}]}`; omitted entries are zero.
    pub fn from_json(value: &serde_json::Value) -> Result<Self, HarmonicsError> {
        let parsed: SpectrumJson =
            serde_json::from_value(value.clone()).map_err(|e| HarmonicsError::Json(e.to_string()))?;
        let mut out = Self::zeros(parsed.lmax);
        for e in parsed.entries {
            if !(e.re.is_finite() && e.im.is_finite()) {
                return Err(HarmonicsError::Json(format!("non-finite entry at ({}, {})", e.l, e.m)));
            }
            out.set(e.l, e.m, Complex::new(T::lit(e.re), T::lit(e.im)))?;
        }
        Ok(out)
    }
}

#[derive(Serialize, Deserialize)]
struct SpectrumEntry {
    l: usize,
    m: i64,
    re: f64,
    im: f64,
}

#[derive(Serialize, Deserialize)]
struct SpectrumJson {
    lmax: usize,
    entries: Vec<SpectrumEntry>,
}

/// Gauss–Legendre nodes in `cos θ` times a uniform azimuthal grid.
///
/// Samples on the grid are stored row-major: index `i * n_phi + j` for
/// `(θ_i, φ_j)`, with `θ` ascending from the north pole.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereGrid<T> {
    n_theta: usize,
    n_phi: usize,
    theta: Vec<T>,
    phi: Vec<T>,
    /// Gauss weight of each θ row times `Δφ`.
    row_weights: Vec<T>,
}

impl<T: Real> SphereGrid<T> {
    pub fn new(n_theta: usize, n_phi: usize) -> Self {
        assert!(n_theta >= 1 && n_phi >= 1, "empty sphere grid");
        let rule = gauss_legendre::<T>(n_theta);
        let dphi = T::TAU() / T::from_usize_lossy(n_phi);
        // nodes ascend in cos θ; reverse so θ ascends
        let theta = rule.nodes.iter().rev().map(|&x| x.acos()).collect();
        let row_weights = rule.weights.iter().rev().map(|&w| w * dphi).collect();
        let phi = (0..n_phi).map(|j| T::from_usize_lossy(j) * dphi).collect();
        SphereGrid {
            n_theta,
            n_phi,
            theta,
            phi,
            row_weights,
        }
    }

    /// Smallest grid that transforms band-limit `lmax` exactly.
    pub fn for_lmax(lmax: usize) -> Self {
        Self::new(lmax + 1, 2 * lmax + 1)
    }

    pub fn n_theta(&self) -> usize {
        self.n_theta
    }

    pub fn n_phi(&self) -> usize {
        self.n_phi
    }

    pub fn len(&self) -> usize {
        self.n_theta * self.n_phi
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn theta(&self, i: usize) -> T {
        self.theta[i]
    }

    pub fn phi(&self, j: usize) -> T {
        self.phi[j]
    }

    /// Quadrature weight of node `(i, j)`.
    pub fn weight(&self, i: usize, _j: usize) -> T {
        self.row_weights[i]
    }

    /// Sum of all weights (4π up to rounding).
    pub fn total_weight(&self) -> T {
        self.row_weights.iter().copied().sum::<T>() * T::from_usize_lossy(self.n_phi)
    }

    /// `(θ, φ)` of every node in storage order.
    pub fn nodes(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.theta
            .iter()
            .flat_map(move |&t| self.phi.iter().map(move |&p| (t, p)))
    }

    /// Samples `f(θ, φ)` on the grid.
    pub fn sample<F: FnMut(T, T) -> Complex<T>>(&self, mut f: F) -> Vec<Complex<T>> {
        self.nodes().map(|(t, p)| f(t, p)).collect()
    }

    /// Checks the exactness conditions for band-limit `lmax`.
    pub fn check_exact(&self, lmax: usize) -> Result<(), HarmonicsError> {
        if self.n_theta < lmax + 1 || self.n_phi < 2 * lmax + 1 {
            return Err(HarmonicsError::GridTooCoarse {
                n_theta: self.n_theta,
                n_phi: self.n_phi,
                lmax,
                need_theta: lmax + 1,
                need_phi: 2 * lmax + 1,
            });
        }
        Ok(())
    }

    /// `∮ f dΩ` by the grid rule.
    pub fn integrate(&self, samples: &[Complex<T>]) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..self.n_theta {
            let row: Complex<T> = samples[i * self.n_phi..(i + 1) * self.n_phi].iter().copied().sum();
            acc = acc + row * self.row_weights[i];
        }
        acc
    }
}

/// Real θ-factor of `Y_{l,m}` for either sign of `m`, read from a table.
#[inline]
fn signed_theta<T: Real>(table: &[T], l: usize, m: i64) -> T {
    let am = m.unsigned_abs() as usize;
    let v = table[theta_index(l, am)];
    if m < 0 && am % 2 == 1 {
        -v
    } else {
        v
    }
}

/// Analysis: `f_l^m = ∮ f conj(Y_{l,m}) dΩ` by quadrature.
pub fn sht_forward<T: Real>(
    grid: &SphereGrid<T>,
    samples: &[Complex<T>],
    lmax: usize,
) -> Result<SphericalSpectrum<T>, HarmonicsError> {
    grid.check_exact(lmax)?;
    if samples.len() != grid.len() {
        return Err(HarmonicsError::SampleCount {
            expected: grid.len(),
            got: samples.len(),
        });
    }
    let mut out = SphericalSpectrum::zeros(lmax);
    let lm = lmax as i64;
    for i in 0..grid.n_theta {
        let row = &samples[i * grid.n_phi..(i + 1) * grid.n_phi];
        let table = theta_table(lmax, grid.theta[i]);
        for m in -lm..=lm {
            // F_m = Σ_j f_ij e^{-i m φ_j}
            let mf = T::from_int(m);
            let fm: Complex<T> = row
                .iter()
                .zip(&grid.phi)
                .map(|(&f, &p)| f * Complex::from_polar(T::one(), -mf * p))
                .sum();
            let weighted = fm * grid.row_weights[i];
            for l in m.unsigned_abs() as usize..=lmax {
                let idx = spec_index(l, m);
                out.coeffs[idx] = out.coeffs[idx] + weighted * signed_theta(&table, l, m);
            }
        }
    }
    Ok(out)
}

/// Synthesis: `f(θ_i, φ_j) = Σ f_l^m Y_{l,m}(θ_i, φ_j)`.
pub fn sht_inverse<T: Real>(spec: &SphericalSpectrum<T>, grid: &SphereGrid<T>) -> Vec<Complex<T>> {
    let lmax = spec.lmax;
    let lm = lmax as i64;
    let mut out = vec![Complex::new(T::zero(), T::zero()); grid.len()];
    for i in 0..grid.n_theta {
        let table = theta_table(lmax, grid.theta[i]);
        // G_m(θ_i) = Σ_l f_l^m Θ_{l,m}(θ_i)
        let gm: Vec<Complex<T>> = (-lm..=lm)
            .map(|m| {
                (m.unsigned_abs() as usize..=lmax)
                    .map(|l| spec.coeffs[spec_index(l, m)] * signed_theta(&table, l, m))
                    .sum()
            })
            .collect();
        for (j, &p) in grid.phi.iter().enumerate() {
            out[i * grid.n_phi + j] = (-lm..=lm)
                .zip(&gm)
                .map(|(m, &g)| g * Complex::from_polar(T::one(), T::from_int(m) * p))
                .sum();
        }
    }
    out
}

/// Funk–Hecke multiplier `c_l = sqrt(4π / (2l + 1))`.
pub fn zonal_multiplier<T: Real>(l: usize) -> T {
    (T::lit(4.0) * T::PI() / T::from_usize_lossy(2 * l + 1)).sqrt()
}

/// Convolution with a zonal kernel: `(f * g)_l^m = c_l f_l^m g_l^0`.
///
/// Only the `m = 0` column of `kernel` is read. The result has the band-limit
/// of `f`.
pub fn zonal_convolve<T: Real>(f: &SphericalSpectrum<T>, kernel: &SphericalSpectrum<T>) -> SphericalSpectrum<T> {
    let mut out = SphericalSpectrum::zeros(f.lmax);
    for l in 0..=f.lmax {
        let g = kernel.get(l, 0) * zonal_multiplier::<T>(l);
        for m in -(l as i64)..=l as i64 {
            let idx = spec_index(l, m);
            out.coeffs[idx] = f.coeffs[idx] * g;
        }
    }
    out
}

/// Zonal kernel whose convolution is the identity up to band-limit `lmax`
/// (the point mass at the north pole, truncated).
pub fn delta_kernel<T: Real>(lmax: usize) -> SphericalSpectrum<T> {
    let mut out = SphericalSpectrum::zeros(lmax);
    for l in 0..=lmax {
        let v = zonal_multiplier::<T>(l).recip();
        out.coeffs[spec_index(l, 0)] = Complex::new(v, T::zero());
    }
    out
}

/// Zonal kernel from per-degree coefficients `g_l^0`.
pub fn zonal_kernel<T: Real>(coeffs: &[T]) -> SphericalSpectrum<T> {
    let lmax = coeffs.len().saturating_sub(1);
    let mut out = SphericalSpectrum::zeros(lmax);
    for (l, &c) in coeffs.iter().enumerate() {
        out.coeffs[spec_index(l, 0)] = Complex::new(c, T::zero());
    }
    out
}

/// Rotation about the polar axis by `delta`: `f_l^m ↦ e^{-imδ} f_l^m`,
/// i.e. `(R f)(θ, φ) = f(θ, φ - δ)`.
pub fn rotate_z<T: Real>(f: &SphericalSpectrum<T>, delta: T) -> SphericalSpectrum<T> {
    let mut out = f.clone();
    for l in 0..=f.lmax {
        for m in -(l as i64)..=l as i64 {
            let idx = spec_index(l, m);
            out.coeffs[idx] = f.coeffs[idx] * Complex::from_polar(T::one(), -T::from_int(m) * delta);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{sph_harm, SphericalPoint};

    fn c(re: f64) -> Complex<f64> {
        Complex::new(re, 0.0)
    }

    #[test]
    fn grid_weights_sum_to_four_pi() {
        for &(nt, np) in &[(1, 1), (5, 9), (17, 33)] {
            let g = SphereGrid::<f64>::new(nt, np);
            assert!((g.total_weight() - 4.0 * std::f64::consts::PI).abs() < 1e-12);
        }
    }

    #[test]
    fn single_harmonic_analysis() {
        let grid = SphereGrid::<f64>::for_lmax(5);
        let samples = grid.sample(|t, p| sph_harm(3, 2, SphericalPoint::new(t, p).unwrap()).unwrap());
        let spec = sht_forward(&grid, &samples, 5).unwrap();
        for (l, m, v) in spec.iter() {
            let expected = if (l, m) == (3, 2) { 1.0 } else { 0.0 };
            assert!((v - c(expected)).norm() < 1e-12, "({l},{m}) = {v}");
        }
    }

    #[test]
    fn constant_function() {
        let grid = SphereGrid::<f64>::for_lmax(3);
        let samples = vec![c(1.0); grid.len()];
        let spec = sht_forward(&grid, &samples, 3).unwrap();
        assert!((spec.get(0, 0) - c(2.0 * std::f64::consts::PI.sqrt())).norm() < 1e-13);
        let rest: f64 = spec.iter().skip(1).map(|(_, _, v)| v.norm()).fold(0.0, f64::max);
        assert!(rest < 1e-13);
        let back = sht_inverse(&spec, &grid);
        assert!(back.iter().all(|v| (v - c(1.0)).norm() < 1e-13));
    }

    #[test]
    fn coarse_grid_rejected() {
        let grid = SphereGrid::<f64>::new(3, 9);
        let samples = vec![c(0.0); grid.len()];
        assert!(matches!(
            sht_forward(&grid, &samples, 4),
            Err(HarmonicsError::GridTooCoarse { .. })
        ));
        let grid = SphereGrid::<f64>::for_lmax(4);
        assert!(matches!(
            sht_forward(&grid, &samples, 4),
            Err(HarmonicsError::SampleCount { .. })
        ));
    }

    #[test]
    fn identity_and_single_mode_kernels() {
        let mut f = SphericalSpectrum::<f64>::zeros(4);
        f.set(2, 1, Complex::new(0.3, -0.7)).unwrap();
        f.set(4, -3, c(1.1)).unwrap();
        let same = zonal_convolve(&f, &delta_kernel(4));
        assert!(same.max_abs_diff(&f) < 1e-15);

        let mut y21 = SphericalSpectrum::<f64>::zeros(3);
        y21.set(2, 1, c(1.0)).unwrap();
        let out = zonal_convolve(&y21, &zonal_kernel(&[0.0, 0.0, 3.0]));
        for (l, m, v) in out.iter() {
            let expected = if (l, m) == (2, 1) { 3.0 * zonal_multiplier::<f64>(2) } else { 0.0 };
            assert!((v - c(expected)).norm() < 1e-15);
        }
    }

    #[test]
    fn tesseral_kernel_entries_ignored() {
        let mut f = SphericalSpectrum::<f64>::zeros(2);
        f.set(1, -1, c(2.0)).unwrap();
        let mut g = zonal_kernel(&[1.0, 0.5, 0.25]);
        let base = zonal_convolve(&f, &g);
        g.set(1, 1, c(9.0)).unwrap();
        assert_eq!(zonal_convolve(&f, &g), base);
    }

    #[test]
    fn json_round_trip_and_errors() {
        let mut f = SphericalSpectrum::<f64>::zeros(2);
        f.set(2, -2, Complex::new(0.1, 0.2)).unwrap();
        let back = SphericalSpectrum::<f64>::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
        let bad = serde_json::json!({"lmax": 1, "entries": [{"l": 2, "m": 0, "re": 1.0, "im": 0.0}]});
        assert!(matches!(
            SphericalSpectrum::<f64>::from_json(&bad),
            Err(HarmonicsError::OutOfRange { .. })
        ));
        assert!(SphericalSpectrum::<f64>::from_json(&serde_json::json!({"lmax": 1})).is_err());
    }
}
