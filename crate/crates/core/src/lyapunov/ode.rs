//! Time-domain evolution of the covariance, dV/dt = A·V + V·Aᵀ + Q.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{CovarianceMatrix, LyapunovError};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorOptions {
    pub rtol: f64,
    pub atol: f64,
    /// Steps shorter than this abort the run.
    pub h_min: f64,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        IntegratorOptions {
            rtol: 1e-10,
            atol: 1e-12,
            h_min: 1e-14,
        }
    }
}

// Dormand–Prince 5(4) tableau. The right-hand side is autonomous, so the
// stage times are not needed.
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

type M = DMatrix<Complex64>;

fn rhs(a: &M, at: &M, q: &M, v: &M) -> M {
    a * v + v * at + q
}

fn combo(base: &M, h: f64, terms: &[(f64, &M)]) -> M {
    let mut out = base.clone();
    for (w, k) in terms {
        if *w != 0.0 {
            out += *k * Complex64::new(h * w, 0.0);
        }
    }
    out
}

/// Integrates the covariance from `v0` at t = 0 to `t_end` with adaptive
/// Dormand–Prince steps (FSAL).
pub fn integrate_covariance(
    a: &DMatrix<Complex64>,
    q: &DMatrix<Complex64>,
    v0: &CovarianceMatrix,
    t_end: f64,
    options: &IntegratorOptions,
) -> Result<CovarianceMatrix, LyapunovError> {
    let n = a.nrows();
    if !a.is_square() || q.shape() != (n, n) || v0.entries().shape() != (n, n) {
        return Err(LyapunovError::Dimension(
            "A, Q and V0 must share a square shape",
        ));
    }
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(LyapunovError::InvalidHorizon);
    }
    let at = a.transpose();
    let mut v = v0.entries().clone();
    let mut t = 0.0;
    let mut k1 = rhs(a, &at, q, &v);

    let scale = a.iter().fold(0.0f64, |m, z| m.max(z.norm())).max(1e-12);
    let mut h = (0.01 / scale).min(t_end);

    while t < t_end {
        if t + h > t_end {
            h = t_end - t;
        }
        let k2 = rhs(a, &at, q, &combo(&v, h, &[(A21, &k1)]));
        let k3 = rhs(a, &at, q, &combo(&v, h, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs(
            a,
            &at,
            q,
            &combo(&v, h, &[(A41, &k1), (A42, &k2), (A43, &k3)]),
        );
        let k5 = rhs(
            a,
            &at,
            q,
            &combo(&v, h, &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)]),
        );
        let k6 = rhs(
            a,
            &at,
            q,
            &combo(
                &v,
                h,
                &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
            ),
        );
        let v_new = combo(
            &v,
            h,
            &[(B1, &k1), (B3, &k3), (B4, &k4), (B5, &k5), (B6, &k6)],
        );
        let k7 = rhs(a, &at, q, &v_new);
        let zero = M::zeros(n, n);
        let err = combo(
            &zero,
            h,
            &[
                (E1, &k1),
                (E3, &k3),
                (E4, &k4),
                (E5, &k5),
                (E6, &k6),
                (E7, &k7),
            ],
        );

        let mut err_norm = 0.0f64;
        for ((e, x), y) in err.iter().zip(v.iter()).zip(v_new.iter()) {
            let sc = options.atol + options.rtol * x.norm().max(y.norm());
            err_norm = err_norm.max(e.norm() / sc);
        }
        if !err_norm.is_finite() {
            return Err(LyapunovError::NonFinite);
        }

        if err_norm <= 1.0 {
            t += h;
            v = v_new;
            k1 = k7;
        }
        let factor = if err_norm == 0.0 {
            5.0
        } else {
            (0.9 * libm::pow(err_norm, -0.2)).clamp(0.2, 5.0)
        };
        let factor = if err_norm > 1.0 {
            factor.min(1.0)
        } else {
            factor
        };
        h *= factor;
        if t < t_end && h < options.h_min {
            return Err(LyapunovError::StepUnderflow { t });
        }
    }
    Ok(CovarianceMatrix::new(v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(x: f64) -> M {
        DMatrix::from_element(1, 1, Complex64::new(x, 0.0))
    }

    #[test]
    fn scalar_relaxation() {
        let v = integrate_covariance(
            &scalar(-1.0),
            &scalar(2.0),
            &CovarianceMatrix::new(scalar(0.0)),
            1.5,
            &IntegratorOptions::default(),
        )
        .unwrap();
        let exact = 1.0 - libm::exp(-3.0);
        assert!((v.entries()[(0, 0)].re - exact).abs() < 1e-9);
    }

    #[test]
    fn zero_noise_from_zero_stays_zero() {
        let a = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(-0.1, 1.0),
                Complex64::new(0.0, -0.2),
                Complex64::new(0.0, -0.2),
                Complex64::new(-0.3, -1.0),
            ],
        );
        let z = M::zeros(2, 2);
        let v = integrate_covariance(
            &a,
            &z,
            &CovarianceMatrix::new(z.clone()),
            10.0,
            &IntegratorOptions::default(),
        )
        .unwrap();
        assert!(v.entries().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn horizon_validated() {
        let r = integrate_covariance(
            &scalar(-1.0),
            &scalar(1.0),
            &CovarianceMatrix::new(scalar(0.0)),
            f64::NAN,
            &IntegratorOptions::default(),
        );
        assert_eq!(r, Err(LyapunovError::InvalidHorizon));
    }
}
