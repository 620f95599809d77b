//! Confluent hypergeometric functions of the first (Kummer Φ = ₁F₁) and
//! second (Tricomi Ψ = U) kind on the non-negative real axis.
//!
//! Both solve `z y'' + (b - z) y' - a y = 0`.
//!
//! Ψ is evaluated by, in order of preference:
//! 1. its terminating expansion, when `a` or `a - b + 1` is a non-positive
//!    integer (the expansion `Σ (-1)^p (a)_p (a-b+1)_p z^{-a-p} / p!` is then a
//!    finite sum and exact);
//! 2. the large-`z` asymptotic expansion truncated at its smallest term, for
//!    `z >= PSI_ASYMPTOTIC_SPLIT`;
//! 3. the Γ connection formula through two Φ evaluations, for non-integer `b`
//!    when the two terms do not cancel badly;
//! 4. otherwise, Taylor-series continuation of the ODE inward from a point
//!    where the asymptotic expansion is accurate. Inward integration is stable
//!    because Ψ dominates Φ as `z` decreases.

use super::gamma::rgamma;
use super::SpecfunError;
use crate::scalar::{is_integer, nonpositive_integer, Real};

/// Relative tolerance of the Φ series.
pub const PHI_SERIES_TOL: f64 = 1e-14;
/// Hard cap on Φ series terms.
pub const PHI_MAX_TERMS: usize = 10_000;
/// Ψ switches to its asymptotic expansion at and above this argument.
pub const PSI_ASYMPTOTIC_SPLIT: f64 = 30.0;

/// Off the terminating path, |a| and |b| must stay below this.
pub const PSI_MAX_PARAM: f64 = 1e3;

/// Largest accepted cancellation factor in the connection formula.
const CONNECTION_MAX_CANCELLATION: f64 = 1e3;
const ASYMPTOTIC_TOL: f64 = 1e-15;
const TAYLOR_MAX_STEP: f64 = 2.0;
const TAYLOR_MAX_TERMS: usize = 600;

/// Parameters `(a, b)` and argument `z` of a confluent hypergeometric function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypergeomParams<T> {
    pub a: T,
    pub b: T,
    pub z: T,
}

impl<T: Real> HypergeomParams<T> {
    /// Checks that `z` is finite and non-negative.
    pub fn new(a: T, b: T, z: T) -> Result<Self, SpecfunError> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(SpecfunError::InvalidParams(format!(
                "non-finite parameters a={a}, b={b}"
            )));
        }
        if !z.is_finite() || z < T::zero() {
            return Err(SpecfunError::InvalidParams(format!(
                "argument z={z} must be finite and non-negative"
            )));
        }
        Ok(HypergeomParams { a, b, z })
    }

    fn shifted(self) -> Self {
        HypergeomParams {
            a: self.a + T::one(),
            b: self.b + T::one(),
            z: self.z,
        }
    }
}

/// Kummer's function Φ(a, b, z) = Σ (a)_j / (b)_j · z^j / j!.
pub fn kummer_phi<T: Real>(p: HypergeomParams<T>) -> Result<T, SpecfunError> {
    let HypergeomParams { a, b, z } = p;
    let poly_degree = nonpositive_integer(a);
    if let Some(nb) = nonpositive_integer(b) {
        match poly_degree {
            Some(na) if na < nb => {}
            _ => {
                return Err(SpecfunError::InvalidParams(format!(
                    "Φ({a}, {b}, z): b is a non-positive integer and the series does not terminate first"
                )))
            }
        }
    }
    if let Some(n) = poly_degree {
        let mut term = T::one();
        let mut sum = T::one();
        for j in 0..n {
            let jf = T::from_int(j as i64);
            term = term * (a + jf) / (b + jf) * z / (jf + T::one());
            sum = sum + term;
        }
        return Ok(sum);
    }
    if z == T::zero() {
        return Ok(T::one());
    }

    let tol = T::tol(PHI_SERIES_TOL);
    let mut term = T::one();
    let mut sum = T::one();
    let mut small_run = 0;
    for j in 0..PHI_MAX_TERMS {
        let jf = T::from_usize_lossy(j);
        term = term * (a + jf) / (b + jf) * z / (jf + T::one());
        sum = sum + term;
        if !sum.is_finite() {
            break;
        }
        if term.abs() <= tol * sum.abs() {
            small_run += 1;
            if small_run == 3 {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
    }
    Err(SpecfunError::NonConvergent {
        function: "kummer_phi",
        detail: format!("a={a}, b={b}, z={z} after {PHI_MAX_TERMS} terms"),
    })
}

/// dΦ/dz = (a/b) Φ(a+1, b+1, z).
pub fn kummer_phi_dz<T: Real>(p: HypergeomParams<T>) -> Result<T, SpecfunError> {
    if p.a == T::zero() {
        // still validate b
        kummer_phi(p)?;
        return Ok(T::zero());
    }
    Ok(p.a / p.b * kummer_phi(p.shifted())?)
}

/// Tricomi's function Ψ(a, b, z) (DLMF's `U(a, b, z)`).
pub fn tricomi_psi<T: Real>(p: HypergeomParams<T>) -> Result<T, SpecfunError> {
    let HypergeomParams { a, b, z } = p;
    if let Some(v) = terminating_psi(a, b, z) {
        return Ok(v);
    }
    if a.abs() > T::lit(PSI_MAX_PARAM) || b.abs() > T::lit(PSI_MAX_PARAM) {
        return Err(SpecfunError::UnsupportedParams(format!(
            "Ψ({a}, {b}, z): parameters beyond {PSI_MAX_PARAM}"
        )));
    }
    if z <= T::zero() {
        return Err(SpecfunError::InvalidParams(format!(
            "Ψ({a}, {b}, z) needs z > 0 off the terminating path, got {z}"
        )));
    }
    if z >= T::lit(PSI_ASYMPTOTIC_SPLIT) {
        if let Some(v) = asymptotic_psi(a, b, z) {
            return Ok(v);
        }
    } else if !is_integer(b) {
        if let Some(v) = connection_psi(a, b, z)? {
            return Ok(v);
        }
    }
    continued_psi(a, b, z)
}

/// dΨ/dz = -a Ψ(a+1, b+1, z).
pub fn tricomi_psi_dz<T: Real>(p: HypergeomParams<T>) -> Result<T, SpecfunError> {
    if p.a == T::zero() {
        return Ok(T::zero());
    }
    Ok(-p.a * tricomi_psi(p.shifted())?)
}

/// Finite sum when `a` or `a - b + 1` is a non-positive integer.
fn terminating_psi<T: Real>(a: T, b: T, z: T) -> Option<T> {
    let c = a - b + T::one();
    if let Some(n) = nonpositive_integer(a) {
        // z^n Σ_{p<=n} (-1)^p (a)_p (c)_p / p! z^{-p}, evaluated as a polynomial in z
        let mut coef = T::one();
        let mut coefs = Vec::with_capacity(n as usize + 1);
        coefs.push(coef);
        for p in 0..n {
            let pf = T::from_int(p as i64);
            coef = -coef * (a + pf) * (c + pf) / (pf + T::one());
            coefs.push(coef);
        }
        // coefs[p] multiplies z^{n-p}
        let v = coefs.iter().fold(T::zero(), |acc, &cp| acc * z + cp);
        return Some(v);
    }
    if let Some(n) = nonpositive_integer(c) {
        if z <= T::zero() {
            return None;
        }
        let mut term = T::one();
        let mut sum = T::one();
        for p in 0..n {
            let pf = T::from_int(p as i64);
            term = -term * (a + pf) * (c + pf) / ((pf + T::one()) * z);
            sum = sum + term;
        }
        return Some(z.powf(-a) * sum);
    }
    None
}

/// Large-z expansion truncated before its smallest term. `None` when the
/// smallest term is not negligible.
fn asymptotic_psi<T: Real>(a: T, b: T, z: T) -> Option<T> {
    let c = a - b + T::one();
    let tol = T::tol(ASYMPTOTIC_TOL);
    let mut term = T::one();
    let mut sum = T::one();
    for p in 0..TAYLOR_MAX_TERMS {
        let pf = T::from_usize_lossy(p);
        let next = -term * (a + pf) * (c + pf) / ((pf + T::one()) * z);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum = sum + term;
        if term.abs() <= tol * sum.abs() {
            return Some(z.powf(-a) * sum);
        }
    }
    None
}

/// Γ connection formula; `None` when the two terms cancel too strongly.
fn connection_psi<T: Real>(a: T, b: T, z: T) -> Result<Option<T>, SpecfunError> {
    let one = T::one();
    let c = a - b + one;
    let first = gamma_ratio(one - b, c) * kummer_phi(HypergeomParams { a, b, z })?;
    let second = gamma_ratio(b - one, a)
        * z.powf(one - b)
        * kummer_phi(HypergeomParams {
            a: c,
            b: T::lit(2.0) - b,
            z,
        })?;
    let total = first + second;
    let scale = first.abs() + second.abs();
    if total.is_finite() && scale <= T::lit(CONNECTION_MAX_CANCELLATION) * total.abs() {
        Ok(Some(total))
    } else {
        Ok(None)
    }
}

fn gamma_ratio<T: Real>(num: T, den: T) -> T {
    super::gamma::gamma(num) * rgamma(den)
}

/// Taylor continuation of Kummer's ODE from an asymptotic starting point.
fn continued_psi<T: Real>(a: T, b: T, z: T) -> Result<T, SpecfunError> {
    continued_psi_from(a, b, z, T::lit(PSI_ASYMPTOTIC_SPLIT))
}

fn continued_psi_from<T: Real>(a: T, b: T, z: T, min_start: T) -> Result<T, SpecfunError> {
    let mut start = min_start.max(z);
    let growth = (a.abs() + (a - b + T::one()).abs()) * T::lit(4.0);
    start = start.max(growth);
    let (mut y, mut dy) = loop {
        let y = asymptotic_psi(a, b, start);
        let dy = asymptotic_psi(a + T::one(), b + T::one(), start).map(|v| -a * v);
        match (y, dy) {
            (Some(y), Some(dy)) => break (y, dy),
            _ if start < T::lit(1e4) => start = start * T::lit(2.0),
            _ => {
                return Err(SpecfunError::NonConvergent {
                    function: "tricomi_psi",
                    detail: format!("asymptotic start not found for a={a}, b={b}"),
                })
            }
        }
    };

    let eps = T::epsilon();
    let half = T::lit(0.5);
    let mut z0 = start;
    while z0 > z {
        let step = T::lit(TAYLOR_MAX_STEP).min(half * z0).min(z0 - z);
        let t = -step;
        // coefficients c_j of y(z0 + t) = Σ c_j t^j
        let (mut cm1, mut c0) = (y, dy);
        let mut y_new = y + dy * t;
        let mut dy_new = dy;
        let mut tpow = t; // t^{j-1} for the derivative of term j+1
        let mut small_run = 0;
        let mut converged = false;
        for j in 0..TAYLOR_MAX_TERMS {
            let jf = T::from_usize_lossy(j);
            // c_{j+2} from c_j (cm1) and c_{j+1} (c0)
            let c2 = ((jf + a) * cm1 - (jf + T::one()) * (jf + b - z0) * c0)
                / (z0 * (jf + T::one()) * (jf + T::lit(2.0)));
            let term_d = (jf + T::lit(2.0)) * c2 * tpow;
            tpow = tpow * t;
            let term = c2 * tpow;
            y_new = y_new + term;
            dy_new = dy_new + term_d;
            cm1 = c0;
            c0 = c2;
            if term.abs() <= eps * y_new.abs() && term_d.abs() <= eps * dy_new.abs() {
                small_run += 1;
                if small_run == 3 {
                    converged = true;
                    break;
                }
            } else {
                small_run = 0;
            }
        }
        if !converged || !y_new.is_finite() {
            return Err(SpecfunError::NonConvergent {
                function: "tricomi_psi",
                detail: format!("Taylor continuation stalled at z={z0} (a={a}, b={b})"),
            });
        }
        y = y_new;
        dy = dy_new;
        z0 = z0 - step;
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hp(a: f64, b: f64, z: f64) -> HypergeomParams<f64> {
        HypergeomParams::new(a, b, z).unwrap()
    }

    /// Plain partial sums, the way one would do it by hand.
    fn brute_phi(a: f64, b: f64, z: f64, terms: usize) -> f64 {
        let mut total = 0.0;
        for j in 0..terms {
            let mut num = 1.0;
            let mut den = 1.0;
            let mut fact = 1.0;
            for i in 0..j {
                num *= a + i as f64;
                den *= b + i as f64;
                fact *= (i + 1) as f64;
            }
            total += num / den * z.powi(j as i32) / fact;
        }
        total
    }

    #[test]
    fn phi_examples() {
        assert_eq!(kummer_phi(hp(0.0, 2.0, 5.0)).unwrap(), 1.0);
        assert_eq!(kummer_phi(hp(-1.0, 2.0, 3.0)).unwrap(), -0.5);
        let e = kummer_phi(hp(1.0, 1.0, 1.0)).unwrap();
        assert!((e - 1f64.exp()).abs() < 1e-15);
        let oracle = brute_phi(-2.0, 4.0, 2.0, 3);
        assert!((oracle - 0.2).abs() < 1e-15);
        assert!((kummer_phi(hp(-2.0, 4.0, 2.0)).unwrap() - oracle).abs() < 1e-15);
    }

    #[test]
    fn phi_generic_matches_brute_force() {
        for &(a, b, z) in &[(0.3, 1.7, 2.5), (-1.4, 2.2, 4.0), (2.5, 0.6, 0.7)] {
            let v = kummer_phi(hp(a, b, z)).unwrap();
            let oracle = brute_phi(a, b, z, 80);
            assert!((v - oracle).abs() < 1e-13 * oracle.abs().max(1.0), "{a} {b} {z}");
        }
    }

    #[test]
    fn phi_rejects_bad_b() {
        assert!(matches!(
            kummer_phi(hp(0.5, -2.0, 1.0)),
            Err(SpecfunError::InvalidParams(_))
        ));
        assert!(matches!(
            kummer_phi(hp(-3.0, -2.0, 1.0)),
            Err(SpecfunError::InvalidParams(_))
        ));
        // terminates before hitting the zero denominator
        let v = kummer_phi(hp(-1.0, -2.0, 1.0)).unwrap();
        assert!((v - 1.5).abs() < 1e-15);
        assert!(HypergeomParams::new(1.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn phi_derivative_examples() {
        assert_eq!(kummer_phi_dz(hp(0.0, 2.0, 7.0)).unwrap(), 0.0);
        assert!((kummer_phi_dz(hp(1.0, 1.0, 1.0)).unwrap() - 1f64.exp()).abs() < 1e-15);
        assert_eq!(kummer_phi_dz(hp(-1.0, 2.0, 3.0)).unwrap(), -0.5);
    }

    #[test]
    fn psi_examples() {
        assert_eq!(tricomi_psi(hp(0.0, 2.0, 4.0)).unwrap(), 1.0);
        // Ψ(-1, b, z) = z - b, written out from the finite expansion
        let oracle = 5.0 - (-2.0);
        assert_eq!(tricomi_psi(hp(-1.0, -2.0, 5.0)).unwrap(), oracle);
        assert_eq!(tricomi_psi_dz(hp(0.0, 2.0, 3.0)).unwrap(), 0.0);
    }

    #[test]
    fn psi_polynomial_leading_behavior() {
        // Ψ(-3, -4, z) = z^3 + 6 z^2 + 18 z + 24
        let exact = |z: f64| z.powi(3) + 6.0 * z * z + 18.0 * z + 24.0;
        for &z in &[0.5, 3.0, 50.0, 500.0] {
            let v = tricomi_psi(hp(-3.0, -4.0, z)).unwrap();
            assert!((v - exact(z)).abs() < 1e-14 * exact(z));
        }
        let ratio = tricomi_psi(hp(-3.0, -4.0, 500.0)).unwrap() / 500f64.powi(3);
        assert!((ratio - 1.0).abs() < 0.02);
    }

    #[test]
    fn psi_is_a_multiple_of_phi_on_the_polynomial_path() {
        // U(-N, b, z) = (-1)^N (b)_N M(-N, b, z)
        for n in 0..6u64 {
            for &b in &[2.0, 4.0, 6.5] {
                for &z in &[0.2, 1.0, 7.5] {
                    let a = -(n as f64);
                    let factor = (if n % 2 == 0 { 1.0 } else { -1.0 })
                        * super::super::gamma::pochhammer(b, n);
                    let u = tricomi_psi(hp(a, b, z)).unwrap();
                    let m = kummer_phi(hp(a, b, z)).unwrap();
                    assert!((u - factor * m).abs() <= 1e-12 * u.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn psi_known_closed_forms() {
        // U(a, a+1, z) = z^{-a}
        for &(a, z) in &[(0.7, 0.3), (1.3, 5.0), (2.2, 45.0), (0.5, 12.0)] {
            let v = tricomi_psi(hp(a, a + 1.0, z)).unwrap();
            assert!((v - z.powf(-a)).abs() < 1e-13 * z.powf(-a), "a={a} z={z}");
        }
        // U(1/2, 1/2, z) = sqrt(pi) e^z erfc(sqrt z); use U(1, 1, z) = e^z E1(z) at z=1
        let e1_at_1 = 0.219_383_934_395_520_3;
        let v = tricomi_psi(hp(1.0, 1.0, 1.0)).unwrap();
        assert!((v - 1f64.exp() * e1_at_1).abs() < 1e-13);
    }

    #[test]
    fn psi_paths_agree_across_the_split() {
        for &(a, b) in &[(0.4f64, 1.3f64), (1.7, 2.6), (-0.6, 0.3)] {
            for z in [29.99, 30.0, 31.0] {
                let direct = tricomi_psi(hp(a, b, z)).unwrap();
                let far = continued_psi_from(a, b, z, 90.0).unwrap();
                assert!((direct - far).abs() < 1e-13 * far.abs(), "{direct} vs {far}");
            }
        }
    }

    #[test]
    fn connection_and_continuation_agree() {
        for &(a, b, z) in &[(0.4f64, 1.3f64, 0.5f64), (1.7, 2.6, 3.0), (-0.6, 0.3, 1.2)] {
            let conn = connection_psi(a, b, z).unwrap().expect("well conditioned");
            let cont = continued_psi(a, b, z).unwrap();
            assert!((conn - cont).abs() < 1e-11 * cont.abs(), "a={a} b={b} z={z}: {conn} {cont}");
        }
    }

    #[test]
    fn f32_evaluation() {
        let p = HypergeomParams::new(1.0_f32, 1.0, 1.0).unwrap();
        assert!((kummer_phi(p).unwrap() - std::f32::consts::E).abs() < 1e-6);
        let q = HypergeomParams::new(-2.0_f32, 4.0, 2.0).unwrap();
        assert!((kummer_phi(q).unwrap() - 0.2).abs() < 1e-6);
    }
}
