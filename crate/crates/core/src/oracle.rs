//! Finite-difference Sturm–Liouville solver for one angular channel.
//!
//! Works in atomic units (`M = e = ℏ = 1`) on the Liouville form `u = r R`:
//!
//! `-½ u'' + (l(l+1)/(2r²) - Z/r) u = E u`, `r_min < r < r_max`,
//!
//! with the Robin condition `α u/r + β d(u/r)/dr = 0` at `r_min` and `u = 0`
//! at `r_max`. It does not use the quantization rule or any special function,
//! so it serves as an independent check on both.
//!
//! The mesh is `r_j = r_min + (r_max - r_min)(j/N)^g`, `j = 0..=N`. The
//! three-point stencil for `u''` on a non-uniform mesh gives a tridiagonal
//! matrix with negative off-diagonals. Their pairwise products are positive,
//! so a diagonal similarity makes it symmetric and Sturm-sequence bisection
//! gives the lowest eigenvalues. A dense nonsymmetric path (nalgebra Schur)
//! is kept as a cross-check on small meshes and reports complex pairs.

use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex;
use serde::Serialize;
use thiserror::Error;

use crate::scalar::Real;

/// Imaginary parts above this are reported as complex pairs by the dense path.
pub const COMPLEX_TOL: f64 = 1e-8;
/// Largest mesh accepted by the dense path.
pub const DENSE_MAX_POINTS: usize = 1500;
/// Default grading exponent.
pub const DEFAULT_GRADING: f64 = 2.0;
/// Inner radius used for the whole-space surrogate.
pub const WHOLE_SPACE_RMIN: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("invalid channel problem: {0}")]
    InvalidProblem(String),
    #[error("eigenvalue #{index}: Richardson estimate {estimate:e} exceeds tolerance {tolerance:e}")]
    DiscretizationTooCoarse {
        index: usize,
        estimate: f64,
        tolerance: f64,
    },
}

/// One radial channel on a truncated interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelProblem<T> {
    pub l: u32,
    pub z: T,
    pub r_min: T,
    pub r_max: T,
    /// `(α, β)` of `α R + β R' = 0` at `r_min`.
    pub robin: (T, T),
    pub n_points: usize,
    pub grading: T,
}

impl<T: Real> ChannelProblem<T> {
    pub fn new(
        l: u32,
        z: T,
        r_min: T,
        r_max: T,
        robin: (T, T),
        n_points: usize,
        grading: T,
    ) -> Result<Self, OracleError> {
        let cp = ChannelProblem {
            l,
            z,
            r_min,
            r_max,
            robin,
            n_points,
            grading,
        };
        cp.validate()?;
        Ok(cp)
    }

    /// `r_min = 1e-5`, `u(r_min) = 0`: stands in for the problem on all of ℝ³.
    pub fn whole_space(l: u32, z: T, r_max: T, n_points: usize) -> Result<Self, OracleError> {
        Self::new(
            l,
            z,
            T::lit(WHOLE_SPACE_RMIN),
            r_max,
            (T::one(), T::zero()),
            n_points,
            T::lit(DEFAULT_GRADING),
        )
    }

    fn validate(&self) -> Result<(), OracleError> {
        let bad = |m: String| Err(OracleError::InvalidProblem(m));
        if !(self.z > T::zero() && self.z.is_finite()) {
            return bad(format!("Z must be positive, got {}", self.z));
        }
        if !(self.r_min > T::zero() && self.r_min < self.r_max && self.r_max.is_finite()) {
            return bad(format!("need 0 < r_min < r_max, got {} and {}", self.r_min, self.r_max));
        }
        if self.n_points < 100 {
            return bad(format!("n_points must be >= 100, got {}", self.n_points));
        }
        if !(self.grading >= T::one()) {
            return bad(format!("grading exponent must be >= 1, got {}", self.grading));
        }
        let (a, b) = self.robin;
        if !(a.is_finite() && b.is_finite()) || (a == T::zero() && b == T::zero()) {
            return bad(format!("Robin pair ({a}, {b}) must be finite and not both zero"));
        }
        Ok(())
    }

    /// Same problem on a mesh of `n_points` intervals.
    pub fn with_points(&self, n_points: usize) -> Self {
        ChannelProblem { n_points, ..*self }
    }

    /// Mesh nodes `r_0..=r_N`.
    pub fn mesh(&self) -> Vec<T> {
        let n = T::from_usize_lossy(self.n_points);
        let len = self.r_max - self.r_min;
        (0..=self.n_points)
            .map(|j| self.r_min + len * (T::from_usize_lossy(j) / n).powf(self.grading))
            .collect()
    }
}

/// Truncation radius `max(150, 40 kmax²/Z)`.
pub fn default_r_max<T: Real>(kmax: u32, z: T) -> T {
    let k = T::lit(kmax as f64);
    T::lit(150.0).max(T::lit(40.0) * k * k / z)
}

/// Lowest negative eigenvalues of a channel.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChannelEigs<T> {
    pub l: u32,
    /// Ascending, all `< 0`.
    pub eigenvalues: Vec<T>,
    /// Signed error estimate of each eigenvalue, `(E_{N/2} - E_N) / 3`.
    pub convergence_estimate: Vec<T>,
    /// Eigenvalues with `|Im| > 1e-8` (dense path only; the symmetrized path has none).
    pub complex_pairs: Vec<Complex<T>>,
}

/// Solver backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EigenMethod {
    /// Symmetrize, then Sturm bisection. O(N) per eigenvalue.
    #[default]
    Sturm,
    /// Dense nonsymmetric QR via nalgebra; `N <= 1500`.
    Dense,
}

/// The discretized operator: unknowns `u_j` for `j = first..N-1`.
#[derive(Debug, Clone)]
struct Tridiagonal<T> {
    diag: Vec<T>,
    lower: Vec<T>,
    upper: Vec<T>,
}

fn assemble<T: Real>(cp: &ChannelProblem<T>) -> Tridiagonal<T> {
    let r = cp.mesh();
    let n = cp.n_points;
    let half = T::lit(0.5);
    let ll = T::lit((cp.l as f64) * (cp.l as f64 + 1.0));
    let potential = |x: T| half * ll / (x * x) - cp.z / x;
    let (alpha, beta) = cp.robin;
    let first = if beta == T::zero() { 1 } else { 0 };

    let mut diag = Vec::with_capacity(n - first);
    let mut lower = Vec::with_capacity(n - first);
    let mut upper = Vec::with_capacity(n - first);
    for j in first..n {
        let h_right = r[j + 1] - r[j];
        if j == 0 {
            // ghost node at r_0 - h_0 eliminated with u' = κ u
            let kappa = r[0].recip() - alpha / beta;
            let h2 = h_right * h_right;
            diag.push((T::one() + h_right * kappa) / h2 + potential(r[0]));
            lower.push(T::zero());
            upper.push(-h2.recip());
        } else {
            let h_left = r[j] - r[j - 1];
            let sum = h_left + h_right;
            diag.push((h_left * h_right).recip() + potential(r[j]));
            lower.push(-(h_left * sum).recip());
            upper.push(-(h_right * sum).recip());
        }
    }
    Tridiagonal { diag, lower, upper }
}

impl<T: Real> Tridiagonal<T> {
    fn len(&self) -> usize {
        self.diag.len()
    }

    /// Off-diagonal of the symmetrized matrix.
    fn symmetric_offdiag(&self) -> Vec<T> {
        (0..self.len() - 1)
            .map(|i| (self.upper[i] * self.lower[i + 1]).sqrt())
            .collect()
    }
}

/// Number of eigenvalues below `x` of the symmetric tridiagonal `(d, e)`.
fn sturm_count<T: Real>(d: &[T], e2: &[T], x: T) -> usize {
    let tiny = T::min_positive_value().sqrt();
    let mut count = 0;
    let mut q = d[0] - x;
    if q < T::zero() {
        count += 1;
    }
    for i in 1..d.len() {
        if q == T::zero() {
            q = tiny;
        }
        q = d[i] - x - e2[i - 1] / q;
        if q < T::zero() {
            count += 1;
        }
    }
    count
}

fn lowest_negative_sturm<T: Real>(t: &Tridiagonal<T>, n_eigs: usize) -> Vec<T> {
    let e = t.symmetric_offdiag();
    let e2: Vec<T> = e.iter().map(|&v| v * v).collect();
    let mut lo_bound = T::zero();
    for i in 0..t.len() {
        let left = if i > 0 { e[i - 1].abs() } else { T::zero() };
        let right = if i + 1 < t.len() { e[i].abs() } else { T::zero() };
        lo_bound = lo_bound.min(t.diag[i] - left - right);
    }
    let available = sturm_count(&t.diag, &e2, T::zero()).min(n_eigs);
    let eps = T::epsilon();
    (0..available)
        .map(|j| {
            let (mut lo, mut hi) = (lo_bound, T::zero());
            for _ in 0..300 {
                let mid = lo + (hi - lo) * T::lit(0.5);
                if mid <= lo || mid >= hi || hi - lo <= T::lit(4.0) * eps * lo.abs().max(hi.abs()) {
                    break;
                }
                if sturm_count(&t.diag, &e2, mid) > j {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            lo + (hi - lo) * T::lit(0.5)
        })
        .collect()
}

fn lowest_negative_dense<T: Real>(t: &Tridiagonal<T>, n_eigs: usize) -> (Vec<T>, Vec<Complex<T>>) {
    let n = t.len();
    let mut m = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = t.diag[i].as_f64();
        if i > 0 {
            m[(i, i - 1)] = t.lower[i].as_f64();
        }
        if i + 1 < n {
            m[(i, i + 1)] = t.upper[i].as_f64();
        }
    }
    let mut real = Vec::new();
    let mut complex = Vec::new();
    for ev in m.complex_eigenvalues().iter() {
        if ev.im.abs() > COMPLEX_TOL {
            complex.push(Complex::new(T::lit(ev.re), T::lit(ev.im)));
        } else if ev.re < 0.0 {
            real.push(T::lit(ev.re));
        }
    }
    real.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    real.truncate(n_eigs);
    complex.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).expect("finite eigenvalues"));
    (real, complex)
}

fn solve_once<T: Real>(cp: &ChannelProblem<T>, n_eigs: usize, method: EigenMethod) -> (Vec<T>, Vec<Complex<T>>) {
    let t = assemble(cp);
    match method {
        EigenMethod::Sturm => (lowest_negative_sturm(&t, n_eigs), Vec::new()),
        EigenMethod::Dense => lowest_negative_dense(&t, n_eigs),
    }
}

/// Lowest `n_eigs` negative eigenvalues, with a Richardson error estimate
/// from a second solve on `N/2` intervals.
///
/// `tolerance`, if given, bounds the relative estimate `|est / E|`;
/// exceeding it is [`OracleError::DiscretizationTooCoarse`].
pub fn fd_channel_eigs<T: Real>(
    cp: &ChannelProblem<T>,
    n_eigs: usize,
    tolerance: Option<T>,
) -> Result<ChannelEigs<T>, OracleError> {
    fd_channel_eigs_with(cp, n_eigs, tolerance, EigenMethod::Sturm)
}

pub fn fd_channel_eigs_with<T: Real>(
    cp: &ChannelProblem<T>,
    n_eigs: usize,
    tolerance: Option<T>,
    method: EigenMethod,
) -> Result<ChannelEigs<T>, OracleError> {
    cp.validate()?;
    if method == EigenMethod::Dense && cp.n_points > DENSE_MAX_POINTS {
        return Err(OracleError::InvalidProblem(format!(
            "dense path limited to {DENSE_MAX_POINTS} points, got {}",
            cp.n_points
        )));
    }
    let (fine, complex_pairs) = solve_once(cp, n_eigs, method);
    let (coarse, _) = solve_once(&cp.with_points(cp.n_points / 2), n_eigs, method);
    let three = T::lit(3.0);
    let convergence_estimate: Vec<T> = fine
        .iter()
        .enumerate()
        .map(|(i, &e)| match coarse.get(i) {
            Some(&c) => (c - e) / three,
            // the level is not bound on the coarse mesh
            None => T::infinity(),
        })
        .collect();
    if let Some(tol) = tolerance {
        for (index, (&e, &est)) in fine.iter().zip(&convergence_estimate).enumerate() {
            if !((est / e).abs() <= tol) {
                return Err(OracleError::DiscretizationTooCoarse {
                    index,
                    estimate: (est / e).abs().as_f64(),
                    tolerance: tol.as_f64(),
                });
            }
        }
    }
    Ok(ChannelEigs {
        l: cp.l,
        eigenvalues: fine,
        convergence_estimate,
        complex_pairs,
    })
}

/// Discrete eigenvector at an eigenvalue estimate, by inverse iteration.
/// Returns the mesh and `u` on it (boundary values included), with
/// `max |u| = 1`.
pub fn fd_channel_eigvec<T: Real>(cp: &ChannelProblem<T>, energy: T) -> Result<(Vec<T>, Vec<T>), OracleError> {
    cp.validate()?;
    let t = assemble(cp);
    let n = t.len();
    // shift slightly off the eigenvalue so the solve is well posed
    let shift = energy - T::lit(1e-10) * energy.abs().max(T::one());
    let mut v = vec![T::one(); n];
    for _ in 0..4 {
        v = thomas(&t, shift, &v);
        let scale = v.iter().fold(T::zero(), |m, x| m.max(x.abs()));
        v.iter_mut().for_each(|x| *x = *x / scale);
    }
    let mesh = cp.mesh();
    let mut u = Vec::with_capacity(mesh.len());
    if n < cp.n_points {
        u.push(T::zero());
    }
    u.extend(v);
    u.push(T::zero());
    Ok((mesh, u))
}

/// Solves `(A - shift) x = rhs` for tridiagonal `A`.
fn thomas<T: Real>(t: &Tridiagonal<T>, shift: T, rhs: &[T]) -> Vec<T> {
    let n = t.len();
    let mut c = vec![T::zero(); n];
    let mut d = vec![T::zero(); n];
    let mut denom = t.diag[0] - shift;
    c[0] = t.upper[0] / denom;
    d[0] = rhs[0] / denom;
    for i in 1..n {
        denom = t.diag[i] - shift - t.lower[i] * c[i - 1];
        c[i] = if i + 1 < n { t.upper[i] / denom } else { T::zero() };
        d[i] = (rhs[i] - t.lower[i] * d[i - 1]) / denom;
    }
    let mut x = d;
    for i in (0..n - 1).rev() {
        x[i] = x[i] - c[i] * x[i + 1];
    }
    x
}

/// Outcome of [`compare_spectra`]; no pass/fail is attached.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumComparison<T> {
    /// `(paper index, oracle index, relative difference)`.
    pub matched: Vec<(usize, usize, T)>,
    pub unmatched_paper: Vec<usize>,
    pub unmatched_oracle: Vec<usize>,
}

impl<T> SpectrumComparison<T> {
    pub fn full_match(&self) -> bool {
        self.unmatched_paper.is_empty() && self.unmatched_oracle.is_empty()
    }

    /// Paper index matched to an oracle entry, if any.
    pub fn paper_match_of(&self, oracle_index: usize) -> Option<usize> {
        self.matched.iter().find(|m| m.1 == oracle_index).map(|m| m.0)
    }
}

/// Pairs entries whose relative difference is within `tol`, closest pairs
/// first; every entry is used at most once.
pub fn compare_spectra<T: Real>(paper: &[T], oracle: &[T], tol: T) -> SpectrumComparison<T> {
    let mut candidates: Vec<(T, usize, usize)> = Vec::new();
    for (i, &p) in paper.iter().enumerate() {
        for (j, &o) in oracle.iter().enumerate() {
            let rel = (o - p).abs() / p.abs().max(o.abs()).max(T::min_positive_value());
            if rel <= tol {
                candidates.push((rel, i, j));
            }
        }
    }
    candidates.sort_by(|a, b| a.partial_cmp(b).expect("finite differences"));
    let mut used_p = vec![false; paper.len()];
    let mut used_o = vec![false; oracle.len()];
    let mut matched = Vec::new();
    for (rel, i, j) in candidates {
        if !used_p[i] && !used_o[j] {
            used_p[i] = true;
            used_o[j] = true;
            matched.push((i, j, rel));
        }
    }
    matched.sort_by_key(|m| m.0);
    SpectrumComparison {
        matched,
        unmatched_paper: (0..paper.len()).filter(|&i| !used_p[i]).collect(),
        unmatched_oracle: (0..oracle.len()).filter(|&j| !used_o[j]).collect(),
    }
}

/// One line of the oracle report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleRow<T> {
    pub l: u32,
    pub index: usize,
    pub eigenvalue: T,
    pub convergence_estimate: T,
    pub matched_k: Option<u32>,
}

/// Rows for one channel; `levels` are the `(k, E_k)` candidates to match against.
pub fn oracle_rows<T: Real>(eigs: &ChannelEigs<T>, levels: &[(u32, T)], tol: T) -> Vec<OracleRow<T>> {
    let energies: Vec<T> = levels.iter().map(|&(_, e)| e).collect();
    let cmp = compare_spectra(&energies, &eigs.eigenvalues, tol);
    eigs.eigenvalues
        .iter()
        .zip(&eigs.convergence_estimate)
        .enumerate()
        .map(|(index, (&eigenvalue, &convergence_estimate))| OracleRow {
            l: eigs.l,
            index,
            eigenvalue,
            convergence_estimate,
            matched_k: cmp.paper_match_of(index).map(|p| levels[p].0),
        })
        .collect()
}

/// CSV with columns `l, index, eigenvalue, convergence_estimate, matched_k`.
pub fn oracle_csv<T: Real>(rows: &[OracleRow<T>]) -> String {
    let mut out = String::from("l,index,eigenvalue,convergence_estimate,matched_k\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{},{},{:.16e},{:.16e},{}",
            row.l,
            row.index,
            row.eigenvalue.as_f64(),
            row.convergence_estimate.as_f64(),
            row.matched_k.map(|k| k.to_string()).unwrap_or_default()
        );
    }
    out
}

/// Which channel problem [`survey`] solves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleMode {
    /// `r_min = 1e-5`, Dirichlet: the hydrogen problem on all of space.
    WholeSpace,
    /// `r_min = r0` with the channel's Robin pair from the boundary data.
    Exterior,
}

/// Oracle solve of one channel next to the closed-form levels it admits.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChannelSurvey<T> {
    pub l: u32,
    /// `(k, E_k)` with `l` admissible for `k <= kmax`.
    pub levels: Vec<(u32, T)>,
    pub eigs: ChannelEigs<T>,
    pub comparison: SpectrumComparison<T>,
}

/// Settings for [`survey`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurveyOptions<T> {
    pub mode: OracleMode,
    pub kmax: u32,
    pub policy: crate::radial::LPolicy,
    pub r_max: T,
    pub n_points: usize,
    /// Relative matching tolerance.
    pub tol: T,
}

/// Solves every channel `l <= l_max(kmax)` (in parallel) and compares the
/// lowest eigenvalues with `E_k`. Atomic units; only `Z` and `r0` are read
/// from `pp`.
pub fn survey<T: Real>(
    pp: &crate::radial::PhysParams<T>,
    bd: &crate::bvp::BoundaryData<T>,
    opts: SurveyOptions<T>,
) -> Result<Vec<ChannelSurvey<T>>, OracleError> {
    use rayon::prelude::*;
    let lmax = opts.policy.l_max(opts.kmax);
    (0..=lmax)
        .into_par_iter()
        .map(|l| {
            let levels: Vec<(u32, T)> = (1..=opts.kmax)
                .filter(|&k| l <= opts.policy.l_max(k))
                .map(|k| (k, crate::radial::energy(pp, k)))
                .collect();
            let cp = match opts.mode {
                OracleMode::WholeSpace => ChannelProblem::whole_space(l, pp.charge_number, opts.r_max, opts.n_points)?,
                OracleMode::Exterior => {
                    let robin = bd.channel(l).unwrap_or((T::one(), T::zero()));
                    ChannelProblem::new(
                        l,
                        pp.charge_number,
                        pp.r0,
                        opts.r_max,
                        robin,
                        opts.n_points,
                        T::lit(DEFAULT_GRADING),
                    )?
                }
            };
            let eigs = fd_channel_eigs(&cp, levels.len().max(1), None)?;
            let energies: Vec<T> = levels.iter().map(|&(_, e)| e).collect();
            let comparison = compare_spectra(&energies, &eigs.eigenvalues, opts.tol);
            Ok(ChannelSurvey {
                l,
                levels,
                eigs,
                comparison,
            })
        })
        .collect()
}

/// Oracle report rows for a survey.
pub fn survey_rows<T: Real>(surveys: &[ChannelSurvey<T>]) -> Vec<OracleRow<T>> {
    surveys
        .iter()
        .flat_map(|s| {
            s.eigs
                .eigenvalues
                .iter()
                .zip(&s.eigs.convergence_estimate)
                .enumerate()
                .map(|(index, (&eigenvalue, &convergence_estimate))| OracleRow {
                    l: s.l,
                    index,
                    eigenvalue,
                    convergence_estimate,
                    matched_k: s.comparison.paper_match_of(index).map(|p| s.levels[p].0),
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

/// CSV with one line per closed-form level and per unmatched oracle
/// eigenvalue: `l, k, paper_energy, oracle_index, oracle_energy, relative_difference`.
pub fn comparison_csv<T: Real>(surveys: &[ChannelSurvey<T>]) -> String {
    let mut out = String::from("l,k,paper_energy,oracle_index,oracle_energy,relative_difference\n");
    for s in surveys {
        for (p, &(k, e)) in s.levels.iter().enumerate() {
            match s.comparison.matched.iter().find(|m| m.0 == p) {
                Some(&(_, j, rel)) => {
                    let _ = writeln!(
                        out,
                        "{},{k},{:.16e},{j},{:.16e},{:.16e}",
                        s.l,
                        e.as_f64(),
                        s.eigs.eigenvalues[j].as_f64(),
                        rel.as_f64()
                    );
                }
                None => {
                    let _ = writeln!(out, "{},{k},{:.16e},,,", s.l, e.as_f64());
                }
            }
        }
        for &j in &s.comparison.unmatched_oracle {
            let _ = writeln!(out, "{},,,{j},{:.16e},", s.l, s.eigs.eigenvalues[j].as_f64());
        }
    }
    out
}

/// Summary object: per-channel matches plus an overall `full_match` flag.
pub fn comparison_json<T: Real>(mode: OracleMode, tol: T, surveys: &[ChannelSurvey<T>]) -> serde_json::Value {
    let channels: Vec<serde_json::Value> = surveys
        .iter()
        .map(|s| {
            serde_json::json!({
                "l": s.l,
                "paper": s.levels.iter().map(|&(k, e)| serde_json::json!({"k": k, "energy": e.as_f64()})).collect::<Vec<_>>(),
                "oracle": s.eigs.eigenvalues.iter().zip(&s.eigs.convergence_estimate)
                    .map(|(e, c)| serde_json::json!({"energy": e.as_f64(), "convergence_estimate": c.as_f64()}))
                    .collect::<Vec<_>>(),
                "matched": s.comparison.matched.iter()
                    .map(|&(p, j, rel)| serde_json::json!({"k": s.levels[p].0, "oracle_index": j, "relative_difference": rel.as_f64()}))
                    .collect::<Vec<_>>(),
                "unmatched_paper_k": s.comparison.unmatched_paper.iter().map(|&p| s.levels[p].0).collect::<Vec<_>>(),
                "unmatched_oracle_index": s.comparison.unmatched_oracle,
                "complex_pairs": s.eigs.complex_pairs.iter().map(|c| [c.re.as_f64(), c.im.as_f64()]).collect::<Vec<_>>(),
            })
        })
        .collect();
    serde_json::json!({
        "mode": mode,
        "tolerance": tol.as_f64(),
        "full_match": surveys.iter().all(|s| s.comparison.full_match()),
        "channels": channels,
    })
}
