//! Boundary-value problem on the exterior of the ball `|x| > r0`.
//!
//! The rotation-invariant condition `ψ|_{∂K} * α + ∂_r ψ|_{∂K} * β = 0` is
//! diagonal in spherical harmonics: channel `(l, m)` must satisfy
//! `a α_l⁰ + b β_l⁰ = 0`, where `a = R(r0)` and `b = R'(r0)` are the traces of
//! the channel's radial function `R = C₁ Φ-part + C₂ Ψ-part`. The zonal
//! convolution multiplier is common to both terms and cancels.
//!
//! With `C₂ = 1` the channel constant is
//! `C₁ = -(a_Ψ α + b_Ψ β) / (a_Φ α + b_Φ β)`.
//!
//! At the quantized energies the first hypergeometric parameter `l + 1 - k`
//! is a non-positive integer `-N`, and then `Ψ(-N, b, ρ) = (-1)^N (b)_N Φ(-N, b, ρ)`:
//! the two parts are proportional, the ratio above is the constant
//! `(-1)^N (b)_N` whatever the boundary data, and `C₁ Φ-part + Ψ-part`
//! vanishes identically. Such channels are reported as
//! [`ChannelStatus::Collapsed`] and contribute exactly zero. A channel whose
//! boundary data annihilate the Φ trace pair is [`ChannelStatus::Degenerate`]
//! and carries the Φ-part alone (`C₁ = 1`, `C₂ = 0`); that is the only way to
//! obtain a non-zero decaying solution at `E_k`.

use std::fmt::Write as _;

use num_complex::Complex;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quadrature::gauss_laguerre;
use crate::radial::{
    basis_at, effective_coefficient, energy, part_shapes, scale_n, Convention, LPolicy, PhysParams,
    QuantumNumbers, RadialError,
};
use crate::scalar::{nonpositive_integer, Real};
use crate::specfun::{sph_harm, SphericalPoint};

/// `|a_Φ α + b_Φ β|` below this fraction of its scale marks a degenerate channel.
pub const DEGENERACY_TOL: f64 = 1e-12;
/// Scaled Wronskian of the two parts at `r0` below which they are treated as
/// linearly dependent.
pub const DEPENDENCE_TOL: f64 = 1e-10;
/// Required relative boundary residual of a solved channel.
pub const BOUNDARY_RESIDUAL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error("channel l={l}: α_l⁰ = β_l⁰ = 0 leaves the channel unconstrained")]
    ZeroChannel { l: u32 },
    #[error("channel l={l}: the Φ-part satisfies the boundary condition (|denominator| {denominator:e} vs scale {scale:e})")]
    DegenerateChannel { l: u32, denominator: f64, scale: f64 },
    #[error("channel l={l}: boundary data only cover l <= {lmax}")]
    MissingBoundary { l: u32, lmax: usize },
    #[error(transparent)]
    Radial(#[from] RadialError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BvpError {
    #[error("{} channel(s) failed: {}", .0.len(), describe_failures(.0))]
    Channels(Vec<(QuantumNumbers, ChannelError)>),
    #[error("not normalizable: {0}")]
    NonNormalizable(String),
    #[error("outside the exterior domain: {0}")]
    DomainError(String),
    #[error("invalid boundary data: {0}")]
    InvalidBoundary(String),
    #[error(transparent)]
    Radial(#[from] RadialError),
}

fn describe_failures(list: &[(QuantumNumbers, ChannelError)]) -> String {
    list.iter()
        .map(|(qn, e)| format!("(l={}, m={}): {e}", qn.l, qn.m))
        .collect::<Vec<_>>()
        .join("; ")
}

/// Zonal coefficients `(α_l⁰, β_l⁰)`, `l = 0..=lmax`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryData<T> {
    alpha0: Vec<T>,
    beta0: Vec<T>,
}

impl<T: Real> BoundaryData<T> {
    pub fn new(alpha0: Vec<T>, beta0: Vec<T>) -> Result<Self, BvpError> {
        if alpha0.len() != beta0.len() || alpha0.is_empty() {
            return Err(BvpError::InvalidBoundary(format!(
                "alpha has {} entries, beta has {}",
                alpha0.len(),
                beta0.len()
            )));
        }
        if let Some(bad) = alpha0.iter().chain(&beta0).find(|v| !v.is_finite()) {
            return Err(BvpError::InvalidBoundary(format!("non-finite coefficient {bad}")));
        }
        Ok(BoundaryData { alpha0, beta0 })
    }

    /// `ψ = 0` on the sphere in every channel up to `lmax`.
    pub fn dirichlet(lmax: usize) -> Self {
        BoundaryData {
            alpha0: vec![T::one(); lmax + 1],
            beta0: vec![T::zero(); lmax + 1],
        }
    }

    /// `∂_r ψ = 0` on the sphere in every channel up to `lmax`.
    pub fn neumann(lmax: usize) -> Self {
        BoundaryData {
            alpha0: vec![T::zero(); lmax + 1],
            beta0: vec![T::one(); lmax + 1],
        }
    }

    /// Data from the `m = 0` columns of two spectra; tesseral entries are ignored.
    pub fn from_spectra(
        alpha: &crate::harmonics::SphericalSpectrum<T>,
        beta: &crate::harmonics::SphericalSpectrum<T>,
    ) -> Result<Self, BvpError> {
        let lmax = alpha.lmax().max(beta.lmax());
        let a = (0..=lmax).map(|l| alpha.get(l, 0).re).collect();
        let b = (0..=lmax).map(|l| beta.get(l, 0).re).collect();
        Self::new(a, b)
    }

    /// Boundary data for which the Φ-part of every channel of level `k` meets
    /// the condition: `(α_l⁰, β_l⁰) = (b_Φ, -a_Φ)`.
    pub fn phi_matched(
        pp: &PhysParams<T>,
        k: u32,
        policy: LPolicy,
        conv: Convention,
    ) -> Result<Self, BvpError> {
        let lmax = policy.l_max(k);
        let mut alpha = Vec::with_capacity(lmax as usize + 1);
        let mut beta = Vec::with_capacity(lmax as usize + 1);
        for l in 0..=lmax {
            let qn = QuantumNumbers::new(k, l, 0, policy)?;
            let ev = basis_at(pp, qn, pp.r0, conv, false)?;
            alpha.push(ev.deriv_phi_part);
            beta.push(-ev.value_phi_part);
        }
        Self::new(alpha, beta)
    }

    pub fn lmax(&self) -> usize {
        self.alpha0.len() - 1
    }

    pub fn alpha(&self) -> &[T] {
        &self.alpha0
    }

    pub fn beta(&self) -> &[T] {
        &self.beta0
    }

    /// `(α_l⁰, β_l⁰)` if covered.
    pub fn channel(&self, l: u32) -> Option<(T, T)> {
        let l = l as usize;
        (l < self.alpha0.len()).then(|| (self.alpha0[l], self.beta0[l]))
    }

    /// Pads with the Dirichlet default `(1, 0)` up to `lmax`.
    pub fn extended_to(&self, lmax: usize) -> Self {
        let mut out = self.clone();
        while out.alpha0.len() <= lmax {
            out.alpha0.push(T::one());
            out.beta0.push(T::zero());
        }
        out
    }

    /// Parses `alpha <l> <value>` / `beta <l> <value>` lines. `#` starts a
    /// comment. Coefficients not given default to `α = 1`, `β = 0`.
    pub fn parse_text(text: &str) -> Result<Self, BvpError> {
        let mut alpha: Vec<Option<T>> = Vec::new();
        let mut beta: Vec<Option<T>> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let bad = || BvpError::InvalidBoundary(format!("line {}: expected `alpha|beta <l> <value>`, got `{raw}`", lineno + 1));
            if fields.len() != 3 {
                return Err(bad());
            }
            let l: usize = fields[1].parse().map_err(|_| bad())?;
            let v: f64 = fields[2].parse().map_err(|_| bad())?;
            let target = match fields[0] {
                "alpha" => &mut alpha,
                "beta" => &mut beta,
                _ => return Err(bad()),
            };
            if target.len() <= l {
                target.resize(l + 1, None);
            }
            if target[l].is_some() {
                return Err(BvpError::InvalidBoundary(format!("line {}: duplicate {} {l}", lineno + 1, fields[0])));
            }
            target[l] = Some(T::lit(v));
        }
        let n = alpha.len().max(beta.len()).max(1);
        let a = (0..n).map(|l| alpha.get(l).copied().flatten().unwrap_or(T::one())).collect();
        let b = (0..n).map(|l| beta.get(l).copied().flatten().unwrap_or(T::zero())).collect();
        Self::new(a, b)
    }
}

/// Solver settings shared by the operations below.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SolveOptions {
    pub policy: LPolicy,
    pub convention: Convention,
    pub measure: NormMeasure,
}

/// Measure used to normalize eigenfunctions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum NormMeasure {
    /// `∫∫ |ψ|² r² dr dΩ`.
    #[default]
    Volume,
    /// `∫∫ |ψ|² dr dΩ`, without the `r²` weight.
    Radial,
}

/// How a channel's radial function came out of the boundary solve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelStatus {
    /// Independent parts, `C₂ = 1`.
    Regular,
    /// Φ-part satisfies the condition; `C₁ = 1`, `C₂ = 0`.
    Degenerate,
    /// Parts proportional; `C₁ Φ + Ψ ≡ 0`.
    Collapsed,
}

/// Output of [`solve_c1`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSolution<T> {
    pub c1: T,
    pub c2: T,
    /// `|a α + b β|` relative to `(|C₁ a_Φ| + |a_Ψ|)|α| + (|C₁ b_Φ| + |b_Ψ|)|β|`.
    pub boundary_residual: T,
    /// `|a_Φ b_Ψ - b_Φ a_Ψ| / (|a_Φ b_Ψ| + |b_Φ a_Ψ|)`; zero when the parts are
    /// proportional.
    pub independence: T,
}

/// Boundary traces `(R(r0), R'(r0))` of `R = c1 Φ-part + c2 Ψ-part`.
pub fn boundary_traces<T: Real>(
    pp: &PhysParams<T>,
    qn: QuantumNumbers,
    c1: T,
    c2: T,
    conv: Convention,
) -> Result<(T, T), RadialError> {
    let ev = basis_at(pp, qn, pp.r0, conv, false)?;
    Ok((ev.combine(c1, c2), ev.combine_deriv(c1, c2)))
}

/// Solves for `C₁` with `C₂ = 1`.
pub fn solve_c1<T: Real>(
    pp: &PhysParams<T>,
    qn: QuantumNumbers,
    bd: &BoundaryData<T>,
    conv: Convention,
) -> Result<ChannelSolution<T>, ChannelError> {
    let (alpha, beta) = bd.channel(qn.l).ok_or(ChannelError::MissingBoundary {
        l: qn.l,
        lmax: bd.lmax(),
    })?;
    if alpha == T::zero() && beta == T::zero() {
        return Err(ChannelError::ZeroChannel { l: qn.l });
    }
    let ev = basis_at(pp, qn, pp.r0, conv, false)?;
    let (a_phi, b_phi) = (ev.value_phi_part, ev.deriv_phi_part);
    let (a_psi, b_psi) = (ev.value_psi_part, ev.deriv_psi_part);

    let denominator = a_phi * alpha + b_phi * beta;
    let scale = (a_phi * alpha).abs() + (b_phi * beta).abs();
    if denominator.abs() <= T::lit(DEGENERACY_TOL) * scale {
        return Err(ChannelError::DegenerateChannel {
            l: qn.l,
            denominator: denominator.as_f64(),
            scale: scale.as_f64(),
        });
    }
    let c1 = -(a_psi * alpha + b_psi * beta) / denominator;
    let c2 = T::one();

    let a = c1 * a_phi + a_psi;
    let b = c1 * b_phi + b_psi;
    let res_scale = ((c1 * a_phi).abs() + a_psi.abs()) * alpha.abs() + ((c1 * b_phi).abs() + b_psi.abs()) * beta.abs();
    let boundary_residual = if res_scale > T::zero() {
        (a * alpha + b * beta).abs() / res_scale
    } else {
        T::zero()
    };
    let w_scale = (a_phi * b_psi).abs() + (b_phi * a_psi).abs();
    let independence = if w_scale > T::zero() {
        (a_phi * b_psi - b_phi * a_psi).abs() / w_scale
    } else {
        T::zero()
    };
    Ok(ChannelSolution {
        c1,
        c2,
        boundary_residual,
        independence,
    })
}

/// Constants of one channel of an [`Eigenpair`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelConstants<T> {
    pub qn: QuantumNumbers,
    pub c1: T,
    pub c2: T,
    pub boundary_residual: T,
    pub status: ChannelStatus,
}

/// Energy, channel constants and normalization of one eigenfunction `ψ_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigenpair<T> {
    pub k: u32,
    pub energy: T,
    pub channels: Vec<ChannelConstants<T>>,
    pub norm_constant: T,
    pub phys: PhysParams<T>,
    pub boundary: BoundaryData<T>,
    pub options: SolveOptions,
}

/// Result of solving every channel of a level, before normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSweep<T> {
    pub channels: Vec<ChannelConstants<T>>,
    pub failures: Vec<(QuantumNumbers, ChannelError)>,
}

/// Solves all admissible channels of level `k`; failures are collected, not raised.
pub fn solve_channels<T: Real>(
    pp: &PhysParams<T>,
    k: u32,
    bd: &BoundaryData<T>,
    opts: SolveOptions,
) -> ChannelSweep<T> {
    let per_l: Vec<(u32, Result<ChannelConstants<T>, ChannelError>)> = (0..=opts.policy.l_max(k))
        .into_par_iter()
        .map(|l| (l, solve_one(pp, k, l, bd, opts)))
        .collect();
    let mut channels = Vec::new();
    let mut failures = Vec::new();
    for (l, outcome) in per_l {
        for m in -(l as i32)..=l as i32 {
            let qn = QuantumNumbers { k, l, m };
            match &outcome {
                Ok(c) => channels.push(ChannelConstants { qn, ..*c }),
                Err(e) => failures.push((qn, e.clone())),
            }
        }
    }
    ChannelSweep { channels, failures }
}

fn solve_one<T: Real>(
    pp: &PhysParams<T>,
    k: u32,
    l: u32,
    bd: &BoundaryData<T>,
    opts: SolveOptions,
) -> Result<ChannelConstants<T>, ChannelError> {
    let qn = QuantumNumbers::new(k, l, 0, opts.policy)?;
    match solve_c1(pp, qn, bd, opts.convention) {
        Ok(sol) => {
            let status = if sol.independence <= T::lit(DEPENDENCE_TOL) {
                ChannelStatus::Collapsed
            } else {
                ChannelStatus::Regular
            };
            Ok(ChannelConstants {
                qn,
                c1: sol.c1,
                c2: sol.c2,
                boundary_residual: sol.boundary_residual,
                status,
            })
        }
        Err(ChannelError::DegenerateChannel { .. }) => {
            let (alpha, beta) = bd.channel(l).expect("checked by solve_c1");
            let (a, b) = boundary_traces(pp, qn, T::one(), T::zero(), opts.convention)?;
            let scale = a.abs() * alpha.abs() + b.abs() * beta.abs();
            let residual = if scale > T::zero() {
                (a * alpha + b * beta).abs() / scale
            } else {
                T::zero()
            };
            Ok(ChannelConstants {
                qn,
                c1: T::one(),
                c2: T::zero(),
                boundary_residual: residual,
                status: ChannelStatus::Degenerate,
            })
        }
        Err(e) => Err(e),
    }
}

/// Solves every channel of level `k`, then normalizes.
pub fn build_eigenpair<T: Real>(
    pp: &PhysParams<T>,
    k: u32,
    bd: &BoundaryData<T>,
    opts: SolveOptions,
) -> Result<Eigenpair<T>, BvpError> {
    if k == 0 {
        return Err(RadialError::Inadmissible("k must be >= 1".into()).into());
    }
    let sweep = solve_channels(pp, k, bd, opts);
    if !sweep.failures.is_empty() {
        return Err(BvpError::Channels(sweep.failures));
    }
    let mut ep = Eigenpair {
        k,
        energy: energy(pp, k),
        channels: sweep.channels,
        norm_constant: T::one(),
        phys: *pp,
        boundary: bd.clone(),
        options: opts,
    };
    ep.norm_constant = normalize(&ep)?;
    Ok(ep)
}

impl<T: Real> Eigenpair<T> {
    /// Radial function of a channel and its r-derivative (without `Ĉ`).
    pub fn channel_radial(&self, ch: &ChannelConstants<T>, r: T) -> Result<(T, T), RadialError> {
        if ch.status == ChannelStatus::Collapsed {
            return Ok((T::zero(), T::zero()));
        }
        let ev = basis_at(&self.phys, ch.qn, r, self.options.convention, false)?;
        Ok((ev.combine(ch.c1, ch.c2), ev.combine_deriv(ch.c1, ch.c2)))
    }

    /// Channels that contribute to `ψ`.
    pub fn active_channels(&self) -> impl Iterator<Item = &ChannelConstants<T>> {
        self.channels.iter().filter(|c| c.status != ChannelStatus::Collapsed)
    }

    pub fn degenerate_channels(&self) -> Vec<QuantumNumbers> {
        self.channels
            .iter()
            .filter(|c| c.status == ChannelStatus::Degenerate)
            .map(|c| c.qn)
            .collect()
    }

    /// Copy with every `C₁`, `C₂` multiplied by `factor` (`Ĉ` unchanged).
    pub fn with_scaled_constants(&self, factor: T) -> Self {
        let mut out = self.clone();
        for c in &mut out.channels {
            c.c1 = c.c1 * factor;
            c.c2 = c.c2 * factor;
        }
        out
    }

    /// Largest channel boundary residual.
    pub fn max_boundary_residual(&self) -> T {
        self.channels
            .iter()
            .fold(T::zero(), |acc, c| acc.max(c.boundary_residual))
    }

    /// Serializes as `{k, energy, channels: [{l, m, c1, c2, boundary_residual, status}], norm_constant, params}`.
    pub fn to_json(&self) -> serde_json::Value {
        let channels: Vec<serde_json::Value> = self
            .channels
            .iter()
            .map(|c| {
                serde_json::json!({
                    "l": c.qn.l,
                    "m": c.qn.m,
                    "c1": c.c1.as_f64(),
                    "c2": c.c2.as_f64(),
                    "boundary_residual": c.boundary_residual.as_f64(),
                    "status": c.status,
                })
            })
            .collect();
        serde_json::json!({
            "k": self.k,
            "energy": self.energy.as_f64(),
            "channels": channels,
            "norm_constant": self.norm_constant.as_f64(),
            "params": params_json(&self.phys, &self.options),
        })
    }
}

pub fn params_json<T: Real>(pp: &PhysParams<T>, opts: &SolveOptions) -> serde_json::Value {
    serde_json::json!({
        "Z": pp.charge_number.as_f64(),
        "r0": pp.r0.as_f64(),
        "mass": pp.mass.as_f64(),
        "charge": pp.charge.as_f64(),
        "hbar": pp.hbar.as_f64(),
        "lmax_policy": opts.policy,
        "convention": opts.convention,
        "measure": opts.measure,
    })
}

/// `ψ_k(r, θ, φ) = Ĉ Σ (C₁ Φ-part + C₂ Ψ-part)(r) Y_{l,m}(θ, φ)`.
pub fn eval_psi<T: Real>(ep: &Eigenpair<T>, r: T, pt: SphericalPoint<T>) -> Result<Complex<T>, BvpError> {
    if !(r >= ep.phys.r0) {
        return Err(BvpError::DomainError(format!("r={r} is inside the ball r0={}", ep.phys.r0)));
    }
    let mut acc = Complex::new(T::zero(), T::zero());
    for ch in ep.active_channels() {
        let (value, _) = ep.channel_radial(ch, r)?;
        let y = sph_harm(ch.qn.l as usize, ch.qn.m as i64, pt).map_err(RadialError::from)?;
        acc = acc + y * value;
    }
    Ok(acc * ep.norm_constant)
}

/// Normalized residual of `(Δ + 2M/ℏ² (Ze²/r + E)) ψ` at `(r, pt)`.
///
/// Radial derivatives use 5-point central differences with `h = 1e-4 r`; the
/// angular Laplacian acts as `-l(l+1)/r²` per channel. The three sums
/// (second derivative, first-derivative term, potential term) are formed
/// separately and the modulus of their total is divided by the largest of
/// their moduli. An identically vanishing `ψ` gives 0.
pub fn pde_residual<T: Real>(ep: &Eigenpair<T>, r: T, pt: SphericalPoint<T>) -> Result<T, BvpError> {
    pde_residual_at_energy(ep, ep.energy, r, pt)
}

/// [`pde_residual`] with the energy replaced by `energy`.
pub fn pde_residual_at_energy<T: Real>(
    ep: &Eigenpair<T>,
    energy: T,
    r: T,
    pt: SphericalPoint<T>,
) -> Result<T, BvpError> {
    if !(r > ep.phys.r0) {
        return Err(BvpError::DomainError(format!("r={r} not in the open exterior r > {}", ep.phys.r0)));
    }
    let h = T::lit(1e-4) * r;
    let twelve = T::lit(12.0);
    let zero = Complex::new(T::zero(), T::zero());
    let (mut t1, mut t2, mut t3) = (zero, zero, zero);
    for ch in ep.active_channels() {
        let radial = |x: T| ep.channel_radial(ch, x).map(|(v, _)| v);
        let (p2, p1, c, m1, m2) = (
            radial(r + h + h)?,
            radial(r + h)?,
            radial(r)?,
            radial(r - h)?,
            radial(r - h - h)?,
        );
        let d1 = (-p2 + T::lit(8.0) * p1 - T::lit(8.0) * m1 + m2) / (twelve * h);
        let d2 = (-p2 + T::lit(16.0) * p1 - T::lit(30.0) * c + T::lit(16.0) * m1 - m2) / (twelve * h * h);
        let y = sph_harm(ch.qn.l as usize, ch.qn.m as i64, pt).map_err(RadialError::from)?;
        t1 = t1 + y * d2;
        t2 = t2 + y * (T::lit(2.0) / r * d1);
        t3 = t3 + y * (c * effective_coefficient(&ep.phys, ch.qn.l, energy, r));
    }
    let scale = t1.norm().max(t2.norm()).max(t3.norm());
    if scale == T::zero() {
        return Ok(T::zero());
    }
    Ok((t1 + t2 + t3).norm() / scale)
}

/// `Ĉ` such that `Ĉ² Σ_channels ∫_{r0}^∞ |R|² w(r) dr = 1`, with `w = r²`
/// (or 1 for [`NormMeasure::Radial`]). Angular integrals reduce to 1 by
/// orthonormality.
///
/// Each channel is `e^{-nr}` times a polynomial (for the standard
/// convention), so after `t = 2n (r - r0)` the integral is a Gauss–Laguerre
/// integral of a polynomial and is exact with `k + 6` nodes.
pub fn normalize<T: Real>(ep: &Eigenpair<T>) -> Result<T, BvpError> {
    let total = radial_norm_squared(ep)?;
    if !(total.is_finite() && total > T::zero()) {
        let collapsed = ep
            .channels
            .iter()
            .filter(|c| c.status == ChannelStatus::Collapsed)
            .count();
        return Err(BvpError::NonNormalizable(format!(
            "level k={} has zero norm: {collapsed} of {} channels collapsed (Φ- and Ψ-parts proportional, C₁Φ + Ψ ≡ 0) and none carries a non-zero solution",
            ep.k,
            ep.channels.len()
        )));
    }
    Ok(total.sqrt().recip())
}

fn radial_norm_squared<T: Real>(ep: &Eigenpair<T>) -> Result<T, BvpError> {
    let pp = &ep.phys;
    let n = scale_n(pp, ep.k);
    let two_n = T::lit(2.0) * n;
    let nodes = match ep.options.convention {
        Convention::Standard => ep.k as usize + 6,
        Convention::PaperLiteral => 40,
    };
    let rule = gauss_laguerre::<T>(nodes);
    let prefactor = (-two_n * pp.r0).exp() / two_n;
    let mut total = T::zero();
    for ch in ep.active_channels() {
        check_decaying(ch, ep.options.convention)?;
        let mut acc = T::zero();
        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
            let r = pp.r0 + t / two_n;
            let ev = basis_at(pp, ch.qn, r, ep.options.convention, true)?;
            let s = ev.combine(ch.c1, ch.c2);
            let weight = match ep.options.measure {
                NormMeasure::Volume => r * r,
                NormMeasure::Radial => T::one(),
            };
            acc = acc + w * s * s * weight;
        }
        total = total + acc * prefactor;
    }
    Ok(total)
}

/// Non-terminating Φ grows like `e^{ρ}`; such a component is not square integrable.
fn check_decaying<T: Real>(ch: &ChannelConstants<T>, conv: Convention) -> Result<(), BvpError> {
    let (phi_shape, _) = part_shapes::<T>(ch.qn, conv);
    if ch.c1 != T::zero() && nonpositive_integer(phi_shape.a).is_none() {
        return Err(BvpError::NonNormalizable(format!(
            "channel (l={}, m={}) has a growing Φ({}, {}, ρ) component",
            ch.qn.l, ch.qn.m, phi_shape.a, phi_shape.b
        )));
    }
    Ok(())
}

/// One row of [`spectrum_table`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumRow<T> {
    pub k: u32,
    pub energy: T,
    pub channels: Vec<ChannelConstants<T>>,
    pub max_boundary_residual: T,
    /// `None` when no eigenfunction could be built.
    pub max_pde_residual: Option<T>,
    pub degenerate_channels: Vec<QuantumNumbers>,
    pub collapsed_channels: usize,
    /// `Ok` when an eigenfunction was built, otherwise the reason.
    pub outcome: Result<(), String>,
}

/// Sample points used by [`spectrum_table`] for the PDE residual:
/// `r ∈ {1.5 r0, 5/n, 20/n}` (those outside the ball) times three directions.
pub fn residual_sample_points<T: Real>(pp: &PhysParams<T>, k: u32) -> Vec<(T, SphericalPoint<T>)> {
    let n = scale_n(pp, k);
    let radii = [T::lit(1.5) * pp.r0, T::lit(5.0) / n, T::lit(20.0) / n];
    let dirs = [(0.3, 0.0), (1.2, 2.0), (2.6, 4.5)];
    let mut out = Vec::new();
    for &r in &radii {
        if r <= pp.r0 {
            continue;
        }
        for &(t, p) in &dirs {
            out.push((r, SphericalPoint { theta: T::lit(t), phi: T::lit(p) }));
        }
    }
    out
}

/// Energies, channel constants and diagnostics for `k = 1..=kmax`.
pub fn spectrum_table<T: Real>(
    pp: &PhysParams<T>,
    bd: &BoundaryData<T>,
    kmax: u32,
    opts: SolveOptions,
) -> Vec<SpectrumRow<T>> {
    (1..=kmax)
        .map(|k| {
            let sweep = solve_channels(pp, k, bd, opts);
            let max_boundary_residual = sweep
                .channels
                .iter()
                .fold(T::zero(), |acc, c| acc.max(c.boundary_residual));
            let degenerate_channels = sweep
                .channels
                .iter()
                .filter(|c| c.status == ChannelStatus::Degenerate)
                .map(|c| c.qn)
                .collect();
            let collapsed_channels = sweep
                .channels
                .iter()
                .filter(|c| c.status == ChannelStatus::Collapsed)
                .count();
            let built = build_eigenpair(pp, k, bd, opts);
            let (max_pde_residual, outcome) = match built {
                Ok(ep) => {
                    let mut worst = T::zero();
                    let mut failure = None;
                    for (r, pt) in residual_sample_points(pp, k) {
                        match pde_residual(&ep, r, pt) {
                            Ok(v) => worst = worst.max(v),
                            Err(e) => failure = Some(e.to_string()),
                        }
                    }
                    match failure {
                        None => (Some(worst), Ok(())),
                        Some(e) => (None, Err(e)),
                    }
                }
                Err(e) => (None, Err(e.to_string())),
            };
            SpectrumRow {
                k,
                energy: energy(pp, k),
                channels: sweep.channels,
                max_boundary_residual,
                max_pde_residual,
                degenerate_channels,
                collapsed_channels,
                outcome,
            }
        })
        .collect()
}

/// Formats a number with 17 significant digits.
pub fn fmt17<T: Real>(x: T) -> String {
    format!("{:.16e}", x.as_f64())
}

/// CSV with columns `k, energy, max_boundary_residual, max_pde_residual,
/// degenerate_channels, collapsed_channels, status`.
///
/// Degenerate channels are listed as `l:m` separated by `;`. The residual of
/// a level without an eigenfunction is left blank and `status` gives the
/// reason.
pub fn spectrum_csv<T: Real>(rows: &[SpectrumRow<T>]) -> String {
    let mut out = String::from(
        "k,energy,max_boundary_residual,max_pde_residual,degenerate_channels,collapsed_channels,status\n",
    );
    for row in rows {
        let degenerate = row
            .degenerate_channels
            .iter()
            .map(|q| format!("{}:{}", q.l, q.m))
            .collect::<Vec<_>>()
            .join(";");
        let status = match &row.outcome {
            Ok(()) => "ok".to_string(),
            Err(e) => csv_quote(e),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            row.k,
            fmt17(row.energy),
            fmt17(row.max_boundary_residual),
            row.max_pde_residual.map(fmt17).unwrap_or_default(),
            degenerate,
            row.collapsed_channels,
            status
        );
    }
    out
}

/// JSON array with one object per level, including per-channel constants.
pub fn spectrum_json<T: Real>(pp: &PhysParams<T>, opts: &SolveOptions, rows: &[SpectrumRow<T>]) -> serde_json::Value {
    let levels: Vec<serde_json::Value> = rows
        .iter()
        .map(|row| {
            serde_json::json!({
                "k": row.k,
                "energy": row.energy.as_f64(),
                "max_boundary_residual": row.max_boundary_residual.as_f64(),
                "max_pde_residual": row.max_pde_residual.map(|v| v.as_f64()),
                "degenerate_channels": row.degenerate_channels.iter().map(|q| [q.l as i64, q.m as i64]).collect::<Vec<_>>(),
                "collapsed_channels": row.collapsed_channels,
                "status": match &row.outcome { Ok(()) => "ok".to_string(), Err(e) => e.clone() },
                "channels": row.channels.iter().map(|c| serde_json::json!({
                    "l": c.qn.l, "m": c.qn.m, "c1": c.c1.as_f64(), "c2": c.c2.as_f64(),
                    "boundary_residual": c.boundary_residual.as_f64(), "status": c.status,
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    serde_json::json!({ "params": params_json(pp, opts), "levels": levels })
}

/// `R_{k,l}(r) = Ĉ (C₁ Φ-part + C₂ Ψ-part)` for each distinct `l` at the
/// radii `rs`, as `(l, r, R)` rows. Channels sharing `l` have equal constants
/// for zonal data, so `m = 0` represents them.
pub fn radial_profile<T: Real>(ep: &Eigenpair<T>, rs: &[T]) -> Result<Vec<(u32, T, T)>, BvpError> {
    let mut out = Vec::new();
    for ch in ep.channels.iter().filter(|c| c.qn.m == 0) {
        for &r in rs {
            if r < ep.phys.r0 {
                return Err(BvpError::DomainError(format!("r={r} is inside the ball r0={}", ep.phys.r0)));
            }
            let (v, _) = ep.channel_radial(ch, r)?;
            out.push((ch.qn.l, r, v * ep.norm_constant));
        }
    }
    Ok(out)
}

/// `|ψ|²` on the half-plane `φ = phi` as `(r, θ, density)` rows.
pub fn density_slice<T: Real>(ep: &Eigenpair<T>, rs: &[T], thetas: &[T], phi: T) -> Result<Vec<(T, T, T)>, BvpError> {
    let mut out = Vec::with_capacity(rs.len() * thetas.len());
    for &r in rs {
        for &theta in thetas {
            let pt = SphericalPoint::wrapped(theta, phi).map_err(RadialError::from)?;
            out.push((r, theta, eval_psi(ep, r, pt)?.norm_sqr()));
        }
    }
    Ok(out)
}

pub(crate) fn csv_quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
