//! Steady-state second moments of a linear system driven by white noise.
//!
//! For du/dt = A·u + N with ⟨N(s)Nᵀ(s′)⟩ = C·δ(s − s′) the symmetrized
//! covariance V obeys A·V + V·Aᵀ = −Q with Q = ½(C + Cᵀ) once A is stable.
//! Note the plain transpose: V holds ⟨u_i u_j⟩ moments of operators, not a
//! Hermitian covariance.

mod ode;

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::model::{
    build_drift_matrix, build_noise_matrix, ConfigError, DriftMatrix, SteadyAmplitudes,
    SystemConfig,
};

pub use ode::{integrate_covariance, IntegratorOptions};

/// Default margin for the stability test: stable iff max Re λ < −margin.
pub const STABILITY_MARGIN: f64 = 1e-9;
/// Accepted solves satisfy ‖AV + VAᵀ + Q‖_max ≤ this · max(1, ‖Q‖_max).
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;
/// Largest imaginary part tolerated on an extracted occupation.
pub const OCCUPATION_IMAG_TOLERANCE: f64 = 1e-6;
/// Occupations below −this signal a broken solve.
pub const OCCUPATION_FLOOR: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum LyapunovError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("eigenvalue computation failed")]
    EigenFailure,
    #[error("dimension mismatch: {0}")]
    Dimension(&'static str),
    #[error("drift matrix is not stable (max Re λ = {max_real_part:e})")]
    Unstable { max_real_part: f64 },
    #[error("Lyapunov system is singular (marginal stability)")]
    Singular,
    #[error("Lyapunov residual {residual:e} exceeds bound {bound:e}")]
    Residual { residual: f64, bound: f64 },
    #[error("integration horizon must be positive and finite")]
    InvalidHorizon,
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("occupation of mode {mode} has imaginary part {imag:e}")]
    ImaginaryOccupation { mode: usize, imag: f64 },
    #[error("occupation of mode {mode} is negative ({value:e})")]
    NegativeOccupation { mode: usize, value: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct StabilityReport {
    pub eigenvalues: Vec<Complex64>,
    pub max_real_part: f64,
    pub stable: bool,
}

fn all_finite(a: &DMatrix<Complex64>) -> bool {
    a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Eigenvalue sign test on the drift matrix (the Routh–Hurwitz conditions
/// are equivalent to every eigenvalue having negative real part).
pub fn stability(a: &DMatrix<Complex64>, margin: f64) -> Result<StabilityReport, LyapunovError> {
    if !a.is_square() {
        return Err(LyapunovError::Dimension("drift matrix must be square"));
    }
    if !all_finite(a) {
        return Err(LyapunovError::NonFinite);
    }
    let eigenvalues: Vec<Complex64> = if a.nrows() == 0 {
        Vec::new()
    } else {
        a.clone()
            .try_schur(f64::EPSILON, 0)
            .and_then(|s| s.eigenvalues())
            .ok_or(LyapunovError::EigenFailure)?
            .iter()
            .copied()
            .collect()
    };
    let max_real_part = eigenvalues
        .iter()
        .map(|z| z.re)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(StabilityReport {
        stable: max_real_part < -margin,
        eigenvalues,
        max_real_part,
    })
}

/// Symmetrized steady-state covariance.
#[derive(Clone, Debug, PartialEq)]
pub struct CovarianceMatrix {
    entries: DMatrix<Complex64>,
}

impl CovarianceMatrix {
    pub fn new(entries: DMatrix<Complex64>) -> Self {
        CovarianceMatrix { entries }
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<Complex64> {
        self.entries
    }

    pub fn dimension(&self) -> usize {
        self.entries.nrows()
    }

    fn symmetrize(mut self) -> Self {
        let t = self.entries.transpose();
        self.entries = (&self.entries + t) * Complex64::new(0.5, 0.0);
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum LyapunovMethod {
    /// Dense solve of (I⊗A + A⊗I)·vec V = −vec Q.
    #[default]
    Vectorized,
    /// Complex Schur form followed by column back-substitution.
    BartelsStewart,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LyapunovOptions {
    pub method: LyapunovMethod,
    pub stability_margin: f64,
    pub residual_tolerance: f64,
}

impl Default for LyapunovOptions {
    fn default() -> Self {
        LyapunovOptions {
            method: LyapunovMethod::Vectorized,
            stability_margin: STABILITY_MARGIN,
            residual_tolerance: RESIDUAL_TOLERANCE,
        }
    }
}

/// ‖A·V + V·Aᵀ + Q‖_max.
pub fn lyapunov_residual(
    a: &DMatrix<Complex64>,
    v: &DMatrix<Complex64>,
    q: &DMatrix<Complex64>,
) -> f64 {
    let r = a * v + v * a.transpose() + q;
    r.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

/// Solves A·V + V·Aᵀ = −Q with the default options.
pub fn solve_lyapunov(
    a: &DMatrix<Complex64>,
    q: &DMatrix<Complex64>,
) -> Result<CovarianceMatrix, LyapunovError> {
    solve_lyapunov_with(a, q, &LyapunovOptions::default())
}

pub fn solve_lyapunov_with(
    a: &DMatrix<Complex64>,
    q: &DMatrix<Complex64>,
    options: &LyapunovOptions,
) -> Result<CovarianceMatrix, LyapunovError> {
    if !a.is_square() || !q.is_square() || a.nrows() != q.nrows() {
        return Err(LyapunovError::Dimension(
            "A and Q must be square and equal size",
        ));
    }
    if !all_finite(q) {
        return Err(LyapunovError::NonFinite);
    }
    let report = stability(a, options.stability_margin)?;
    if !report.stable {
        return Err(LyapunovError::Unstable {
            max_real_part: report.max_real_part,
        });
    }
    let v = match options.method {
        LyapunovMethod::Vectorized => vectorized(a, q)?,
        LyapunovMethod::BartelsStewart => bartels_stewart(a, q)?,
    };
    let v = CovarianceMatrix::new(v).symmetrize();

    let q_max = q.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
    let bound = options.residual_tolerance * q_max.max(1.0);
    let residual = lyapunov_residual(a, v.entries(), q);
    if !(residual <= bound) {
        return Err(LyapunovError::Residual { residual, bound });
    }
    Ok(v)
}

fn vectorized(
    a: &DMatrix<Complex64>,
    q: &DMatrix<Complex64>,
) -> Result<DMatrix<Complex64>, LyapunovError> {
    let n = a.nrows();
    let nn = n * n;
    // Column-major vec: vec(A·V) = (I⊗A)·vec V, vec(V·Aᵀ) = (A⊗I)·vec V.
    let mut l = DMatrix::<Complex64>::zeros(nn, nn);
    for j in 0..n {
        for i in 0..n {
            let row = i + n * j;
            for k in 0..n {
                l[(row, k + n * j)] += a[(i, k)];
                l[(row, i + n * k)] += a[(j, k)];
            }
        }
    }
    let rhs = DVector::from_iterator(nn, q.iter().map(|z| -*z));
    let x = l.lu().solve(&rhs).ok_or(LyapunovError::Singular)?;
    Ok(DMatrix::from_column_slice(n, n, x.as_slice()))
}

fn bartels_stewart(
    a: &DMatrix<Complex64>,
    q: &DMatrix<Complex64>,
) -> Result<DMatrix<Complex64>, LyapunovError> {
    let n = a.nrows();
    let (u, t) = a
        .clone()
        .try_schur(f64::EPSILON, 0)
        .ok_or(LyapunovError::EigenFailure)?
        .unpack();
    // With A = U·T·Uᴴ, W = Uᴴ·V·conj(U) solves T·W + W·Tᵀ = −Uᴴ·Q·conj(U).
    let u_conj = u.map(|z| z.conj());
    let r = -(u.adjoint() * q * &u_conj);
    let mut w = DMatrix::<Complex64>::zeros(n, n);
    for j in (0..n).rev() {
        let mut rhs = r.column(j).into_owned();
        for k in (j + 1)..n {
            let tjk = t[(j, k)];
            if tjk != Complex64::new(0.0, 0.0) {
                rhs -= w.column(k) * tjk;
            }
        }
        // Upper-triangular (T + t_jj·I) back substitution.
        let shift = t[(j, j)];
        for i in (0..n).rev() {
            let mut s = rhs[i];
            for k in (i + 1)..n {
                s -= t[(i, k)] * w[(k, j)];
            }
            let d = t[(i, i)] + shift;
            if d.norm() == 0.0 {
                return Err(LyapunovError::Singular);
            }
            w[(i, j)] = s / d;
        }
    }
    Ok(&u * w * u.transpose())
}

/// Uncoupled thermal state: cavities in vacuum, mechanical modes at their
/// bath occupation.
pub fn thermal_covariance(config: &SystemConfig) -> CovarianceMatrix {
    let m = config.mode_count();
    let c = config.cavities.len();
    let mut v = DMatrix::<Complex64>::zeros(2 * m, 2 * m);
    for j in 0..c {
        v[(j, m + j)] = Complex64::new(0.5, 0.0);
        v[(m + j, j)] = Complex64::new(0.5, 0.0);
    }
    for (l, mech) in config.mechanicals.iter().enumerate() {
        let k = c + l;
        let x = Complex64::new(mech.thermal_occupation + 0.5, 0.0);
        v[(k, m + k)] = x;
        v[(m + k, k)] = x;
    }
    CovarianceMatrix::new(v)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhononReport {
    /// Final mean phonon number per mechanical mode, clamped at zero.
    pub mechanical: Vec<f64>,
    pub mechanical_raw: Vec<f64>,
    /// Photon-fluctuation occupation per cavity (diagnostic), clamped at zero.
    pub cavity: Vec<f64>,
    pub cavity_raw: Vec<f64>,
}

fn occupation(
    v: &DMatrix<Complex64>,
    m: usize,
    k: usize,
    mode: usize,
) -> Result<f64, LyapunovError> {
    // ⟨δo†δo⟩ = V(o†, o) − ½
    let z = v[(m + k, k)];
    if z.im.abs() > OCCUPATION_IMAG_TOLERANCE {
        return Err(LyapunovError::ImaginaryOccupation { mode, imag: z.im });
    }
    let n = z.re - 0.5;
    if n < -OCCUPATION_FLOOR {
        return Err(LyapunovError::NegativeOccupation { mode, value: n });
    }
    Ok(n)
}

pub fn phonon_numbers(
    v: &CovarianceMatrix,
    config: &SystemConfig,
) -> Result<PhononReport, LyapunovError> {
    let m = config.mode_count();
    let c = config.cavities.len();
    if v.dimension() != 2 * m {
        return Err(LyapunovError::Dimension(
            "covariance does not match configuration",
        ));
    }
    let v = v.entries();
    let mechanical_raw = (0..config.mechanicals.len())
        .map(|l| occupation(v, m, c + l, c + l))
        .collect::<Result<Vec<_>, _>>()?;
    let cavity_raw = (0..c)
        .map(|j| occupation(v, m, j, j))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PhononReport {
        mechanical: mechanical_raw.iter().map(|x| x.max(0.0)).collect(),
        mechanical_raw,
        cavity: cavity_raw.iter().map(|x| x.max(0.0)).collect(),
        cavity_raw,
    })
}

/// Result of the full config → occupations pipeline.
#[derive(Clone, Debug)]
pub struct SteadyState {
    pub drift: DriftMatrix,
    pub stability: StabilityReport,
    pub covariance: CovarianceMatrix,
    pub phonons: PhononReport,
}

/// Drift and noise assembly, stability check, Lyapunov solve and phonon
/// extraction in one call. `amplitudes` is required in physical mode.
pub fn steady_state(
    config: &SystemConfig,
    amplitudes: Option<&SteadyAmplitudes>,
) -> Result<SteadyState, LyapunovError> {
    let drift = build_drift_matrix(config, amplitudes)?;
    let q = build_noise_matrix(config)?.to_complex();
    let stability = stability(drift.entries(), STABILITY_MARGIN)?;
    if !stability.stable {
        return Err(LyapunovError::Unstable {
            max_real_part: stability.max_real_part,
        });
    }
    let covariance = solve_lyapunov(drift.entries(), &q)?;
    let phonons = phonon_numbers(&covariance, config)?;
    Ok(SteadyState {
        drift,
        stability,
        covariance,
        phonons,
    })
}
