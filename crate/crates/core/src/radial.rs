//! Separated radial problem.
//!
//! Each channel `(l, m)` satisfies
//! `R'' + (2/r) R' + R (-l(l+1)/r² + 2MZe²/(ℏ² r) + 2ME/ℏ²) = 0`.
//! With `n = sqrt(-2ME)/ℏ`, `ρ = 2 n r` and `R = ρ^l e^{-ρ/2} w(ρ)` this
//! becomes Kummer's equation `ρ w'' + (2l + 2 - ρ) w' - (l + 1 - ν) w = 0`
//! with `ν = MZe²/(ℏ² n)`. Decay of the Φ solution forces
//! `a = l + 1 - ν = -(k - l - 1)` to be a non-positive integer, hence
//! `ν = k`, `n = MZe²/(ℏ² k)` and `E_k = -MZ²e⁴/(2ℏ²k²)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Real;
use crate::specfun::{kummer_phi, kummer_phi_dz, tricomi_psi, tricomi_psi_dz, HypergeomParams, SpecfunError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RadialError {
    #[error("invalid physical parameters: {0}")]
    InvalidParams(String),
    #[error("inadmissible quantum numbers: {0}")]
    Inadmissible(String),
    #[error("radius r={0} must be positive")]
    NonPositiveRadius(f64),
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
}

/// Physical constants, nuclear charge and nucleus radius.
///
/// Default unit system is `M = e = ℏ = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysParams<T> {
    /// Nuclear charge number `Z`.
    pub charge_number: T,
    /// Nucleus radius `r0`.
    pub r0: T,
    pub mass: T,
    pub charge: T,
    pub hbar: T,
}

impl<T: Real> PhysParams<T> {
    pub fn new(charge_number: T, r0: T) -> Result<Self, RadialError> {
        Self::with_units(charge_number, r0, T::one(), T::one(), T::one())
    }

    pub fn with_units(charge_number: T, r0: T, mass: T, charge: T, hbar: T) -> Result<Self, RadialError> {
        let fields = [
            ("Z", charge_number),
            ("r0", r0),
            ("mass", mass),
            ("charge", charge),
            ("hbar", hbar),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v > T::zero()) {
                return Err(RadialError::InvalidParams(format!("{name}={v} must be positive and finite")));
            }
        }
        Ok(PhysParams {
            charge_number,
            r0,
            mass,
            charge,
            hbar,
        })
    }

    /// `2M/ℏ²`, the factor multiplying `(Ze²/r + E)` in the equation.
    pub fn kinetic_factor(&self) -> T {
        T::lit(2.0) * self.mass / (self.hbar * self.hbar)
    }

    /// `2MZe²/ℏ²`, the coefficient of `1/r`.
    pub fn coulomb_coefficient(&self) -> T {
        self.kinetic_factor() * self.charge_number * self.charge * self.charge
    }
}

/// Largest admissible `l` for a given principal quantum number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum LPolicy {
    /// `l <= k - 1`, what the hypergeometric reduction allows.
    #[default]
    Standard,
    /// `l <= k + 1`, the looser range `k >= l - 1`.
    Paper,
}

impl LPolicy {
    pub fn l_max(self, k: u32) -> u32 {
        match self {
            LPolicy::Standard => k - 1,
            LPolicy::Paper => k + 1,
        }
    }
}

/// Which hypergeometric parameters build the radial basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Convention {
    /// `Φ(l+1-k, 2l+2, ρ)` and `Ψ(l+1-k, 2l+2, ρ)` with prefactor `ρ^l e^{-ρ/2}`.
    #[default]
    Standard,
    /// `Φ(l-k-1, 2l+2, ρ)` with prefactor `ρ^l e^{-ρ/2}` and
    /// `ρ^{-l-1} e^{-ρ/2} Ψ(-l-k-2, -2l, ρ)`, as printed. These do not solve the
    /// radial equation; the residual tests show it.
    PaperLiteral,
}

/// Principal, orbital and magnetic quantum numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuantumNumbers {
    pub k: u32,
    pub l: u32,
    pub m: i32,
}

impl QuantumNumbers {
    pub fn new(k: u32, l: u32, m: i32, policy: LPolicy) -> Result<Self, RadialError> {
        if k == 0 {
            return Err(RadialError::Inadmissible("k must be >= 1".into()));
        }
        if m.unsigned_abs() > l {
            return Err(RadialError::Inadmissible(format!("|m|={} exceeds l={l}", m.unsigned_abs())));
        }
        if l > policy.l_max(k) {
            return Err(RadialError::Inadmissible(format!(
                "l={l} exceeds l_max={} for k={k} ({policy:?})",
                policy.l_max(k)
            )));
        }
        Ok(QuantumNumbers { k, l, m })
    }

    /// All admissible `(l, m)` for `k`, ordered by `l` then `m`.
    pub fn channels(k: u32, policy: LPolicy) -> Vec<QuantumNumbers> {
        if k == 0 {
            return Vec::new();
        }
        (0..=policy.l_max(k))
            .flat_map(|l| (-(l as i32)..=l as i32).map(move |m| QuantumNumbers { k, l, m }))
            .collect()
    }
}

/// Bound-state energy `E_k = -M Z² e⁴ / (2 ℏ² k²)`.
pub fn energy<T: Real>(pp: &PhysParams<T>, k: u32) -> T {
    let e2 = pp.charge * pp.charge;
    let z = pp.charge_number;
    let kk = T::from_usize_lossy(k as usize);
    -pp.mass * z * z * e2 * e2 / (T::lit(2.0) * pp.hbar * pp.hbar * kk * kk)
}

/// Decay rate `n = M Z e² / (ℏ² k)`, so that `n² = -2 M E_k / ℏ²`.
pub fn scale_n<T: Real>(pp: &PhysParams<T>, k: u32) -> T {
    let kk = T::from_usize_lossy(k as usize);
    pp.mass * pp.charge_number * pp.charge * pp.charge / (pp.hbar * pp.hbar * kk)
}

/// The two radial solutions of a channel and their r-derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialEval<T> {
    pub value_phi_part: T,
    pub value_psi_part: T,
    pub deriv_phi_part: T,
    pub deriv_psi_part: T,
}

impl<T: Real> RadialEval<T> {
    /// Value of `c1 · Φ-part + c2 · Ψ-part`.
    pub fn combine(&self, c1: T, c2: T) -> T {
        c1 * self.value_phi_part + c2 * self.value_psi_part
    }

    /// r-derivative of `c1 · Φ-part + c2 · Ψ-part`.
    pub fn combine_deriv(&self, c1: T, c2: T) -> T {
        c1 * self.deriv_phi_part + c2 * self.deriv_psi_part
    }
}

/// Hypergeometric parameters `(a, b)` and power `s` of `ρ^s e^{-ρ/2} F(a, b, ρ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartShape<T> {
    pub a: T,
    pub b: T,
    pub power: T,
}

/// Shapes of the Φ-part and Ψ-part for a channel.
pub fn part_shapes<T: Real>(qn: QuantumNumbers, conv: Convention) -> (PartShape<T>, PartShape<T>) {
    let k = T::from_int(qn.k as i64);
    let l = T::from_int(qn.l as i64);
    let one = T::one();
    let two = T::lit(2.0);
    match conv {
        Convention::Standard => {
            let shape = PartShape {
                a: l + one - k,
                b: two * l + two,
                power: l,
            };
            (shape, shape)
        }
        Convention::PaperLiteral => (
            PartShape {
                a: l - k - one,
                b: two * l + two,
                power: l,
            },
            PartShape {
                a: -l - k - two,
                b: -two * l,
                power: -l - one,
            },
        ),
    }
}

/// Evaluates both basis functions at `r > 0`. When `strip_exp` is set the
/// common factor `e^{-ρ/2}` is omitted from values and derivatives.
pub(crate) fn basis_at<T: Real>(
    pp: &PhysParams<T>,
    qn: QuantumNumbers,
    r: T,
    conv: Convention,
    strip_exp: bool,
) -> Result<RadialEval<T>, RadialError> {
    if !(r > T::zero()) || !r.is_finite() {
        return Err(RadialError::NonPositiveRadius(r.as_f64()));
    }
    let n = scale_n(pp, qn.k);
    let rho = T::lit(2.0) * n * r;
    let (phi_shape, psi_shape) = part_shapes::<T>(qn, conv);
    let decay = if strip_exp { T::one() } else { (-rho / T::lit(2.0)).exp() };
    let half = T::lit(0.5);

    let part = |shape: PartShape<T>, f: fn(HypergeomParams<T>) -> Result<T, SpecfunError>, df: fn(HypergeomParams<T>) -> Result<T, SpecfunError>| -> Result<(T, T), RadialError> {
        let hp = HypergeomParams::new(shape.a, shape.b, rho)?;
        let w = f(hp)?;
        let dw = df(hp)?;
        let pre = rho.powf(shape.power) * decay;
        let value = pre * w;
        // d/dr = 2n d/dρ
        let deriv = T::lit(2.0) * n * pre * ((shape.power / rho - half) * w + dw);
        Ok((value, deriv))
    };
    let (vphi, dphi) = part(phi_shape, kummer_phi, kummer_phi_dz)?;
    let (vpsi, dpsi) = part(psi_shape, tricomi_psi, tricomi_psi_dz)?;
    Ok(RadialEval {
        value_phi_part: vphi,
        value_psi_part: vpsi,
        deriv_phi_part: dphi,
        deriv_psi_part: dpsi,
    })
}

/// Both radial solutions of channel `qn` at radius `r`, with r-derivatives.
///
/// The solutions are analytic for every `r > 0`; the physical domain is
/// `r >= r0`.
pub fn radial_basis<T: Real>(
    pp: &PhysParams<T>,
    qn: QuantumNumbers,
    r: T,
    conv: Convention,
) -> Result<RadialEval<T>, RadialError> {
    basis_at(pp, qn, r, conv, false)
}

/// Normalized residual of the radial equation for a trial function `radial`
/// at energy `energy`, using 5-point central differences with `h = 1e-4 r`.
///
/// Returns `|R'' + 2R'/r + V R| / max(|R''|, |2R'/r|, |V R|)` (0 when all
/// three vanish).
pub fn radial_ode_residual<T: Real, F: Fn(T) -> T>(
    pp: &PhysParams<T>,
    l: u32,
    energy: T,
    radial: F,
    r: T,
) -> T {
    let h = T::lit(1e-4) * r;
    let (p2, p1, c, m1, m2) = (
        radial(r + h + h),
        radial(r + h),
        radial(r),
        radial(r - h),
        radial(r - h - h),
    );
    let twelve = T::lit(12.0);
    let d1 = (-p2 + T::lit(8.0) * p1 - T::lit(8.0) * m1 + m2) / (twelve * h);
    let d2 = (-p2 + T::lit(16.0) * p1 - T::lit(30.0) * c + T::lit(16.0) * m1 - m2) / (twelve * h * h);
    let t1 = d2;
    let t2 = T::lit(2.0) / r * d1;
    let t3 = c * effective_coefficient(pp, l, energy, r);
    normalized_sum(&[t1, t2, t3])
}

/// `-l(l+1)/r² + 2MZe²/(ℏ² r) + 2ME/ℏ²`.
pub fn effective_coefficient<T: Real>(pp: &PhysParams<T>, l: u32, energy: T, r: T) -> T {
    let ll = T::from_int(l as i64);
    -ll * (ll + T::one()) / (r * r) + pp.coulomb_coefficient() / r + pp.kinetic_factor() * energy
}

pub(crate) fn normalized_sum<T: Real>(terms: &[T]) -> T {
    let scale = terms.iter().fold(T::zero(), |acc, t| acc.max(t.abs()));
    if scale == T::zero() {
        return T::zero();
    }
    terms.iter().copied().sum::<T>().abs() / scale
}
