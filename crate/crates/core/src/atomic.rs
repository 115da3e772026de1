//! Dark states of driven three- and four-level atoms.
//!
//! In the interaction picture at resonance the Λ system {e, f, g} has
//! V = Ω₂·[[0,1,ξ],[1,0,0],[ξ,0,0]] with ξ = Ω₁/Ω₂, and always carries a
//! zero-energy state with no |e⟩ component. Adding a level |d⟩ coupled to
//! |f⟩ with ratio ξ′ removes it.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Excited-state probability below which an eigenstate counts as dark.
pub const DARK_STATE_EPSILON: f64 = 1e-12;
/// Eigenvalues closer than this (relative to the spectral radius) are
/// treated as one degenerate cluster.
pub const DEGENERACY_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum AtomicError {
    #[error("reference Rabi frequency must be positive, got {0}")]
    NonPositiveRabi(f64),
    #[error("non-finite parameter")]
    NonFinite,
    #[error("level count must be 3 or 4, got {0}")]
    LevelCount(usize),
    #[error("{0} list has the wrong length")]
    ParameterCount(&'static str),
}

/// Driven atom in the rotating frame. Level order is e, f, g and then d.
///
/// Three levels: |e⟩↔|f⟩ with Ω₂ and |e⟩↔|g⟩ with Ω₁.
/// Four levels: additionally |f⟩↔|d⟩ with Ω₃.
/// `detunings` holds Δ₁ (on |g⟩) and, for four levels, Δ₃ (on |d⟩); the
/// |f⟩ level is the frame reference.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelSystem {
    pub level_count: usize,
    pub amplitudes: Vec<f64>,
    pub detunings: Vec<f64>,
}

impl LevelSystem {
    pub fn three_level(omega1: f64, omega2: f64) -> Self {
        LevelSystem {
            level_count: 3,
            amplitudes: vec![omega1, omega2],
            detunings: vec![0.0],
        }
    }

    pub fn four_level(omega1: f64, omega2: f64, omega3: f64) -> Self {
        LevelSystem {
            level_count: 4,
            amplitudes: vec![omega1, omega2, omega3],
            detunings: vec![0.0, 0.0],
        }
    }

    pub fn check(&self) -> Result<(), AtomicError> {
        let (na, nd) = match self.level_count {
            3 => (2, 1),
            4 => (3, 2),
            n => return Err(AtomicError::LevelCount(n)),
        };
        if self.amplitudes.len() != na {
            return Err(AtomicError::ParameterCount("amplitude"));
        }
        if self.detunings.len() != nd {
            return Err(AtomicError::ParameterCount("detuning"));
        }
        if self
            .amplitudes
            .iter()
            .chain(&self.detunings)
            .any(|x| !x.is_finite())
        {
            return Err(AtomicError::NonFinite);
        }
        if !(self.amplitudes[1] > 0.0) {
            return Err(AtomicError::NonPositiveRabi(self.amplitudes[1]));
        }
        Ok(())
    }

    pub fn hamiltonian(&self) -> DMatrix<f64> {
        let n = self.level_count;
        let mut h = DMatrix::zeros(n, n);
        let (o1, o2) = (self.amplitudes[0], self.amplitudes[1]);
        h[(0, 1)] = o2;
        h[(1, 0)] = o2;
        h[(0, 2)] = o1;
        h[(2, 0)] = o1;
        h[(2, 2)] = self.detunings[0];
        if n == 4 {
            let o3 = self.amplitudes[2];
            h[(1, 3)] = o3;
            h[(3, 1)] = o3;
            h[(3, 3)] = self.detunings[1];
        }
        h
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AtomicEigenReport {
    /// Ordered by |λ| with the negative member of each ± pair first, so
    /// index 0 is the zero-energy state when one exists.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors in the level basis, aligned with
    /// `eigenvalues`.
    pub eigenstates: Vec<DVector<f64>>,
    /// |⟨e|λ_s⟩|², spread evenly over degenerate clusters.
    pub excited_probabilities: Vec<f64>,
    pub dark_states: Vec<usize>,
}

impl AtomicEigenReport {
    pub fn orthonormality_defect(&self) -> f64 {
        let n = self.eigenstates.len();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                let d = self.eigenstates[i].dot(&self.eigenstates[j]);
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((d - target).abs());
            }
        }
        worst
    }
}

/// Numerical eigenanalysis of any valid level system.
pub fn eigensystem(system: &LevelSystem) -> Result<AtomicEigenReport, AtomicError> {
    system.check()?;
    let eig = SymmetricEigen::new(system.hamiltonian());
    let n = system.level_count;
    let radius = eig.eigenvalues.amax().max(f64::MIN_POSITIVE);
    let tol = DEGENERACY_TOLERANCE * radius;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        let (x, y) = (eig.eigenvalues[a], eig.eigenvalues[b]);
        if (x.abs() - y.abs()).abs() <= tol {
            x.total_cmp(&y)
        } else {
            x.abs().total_cmp(&y.abs())
        }
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let eigenstates: Vec<DVector<f64>> = order
        .iter()
        .map(|&i| {
            let v = eig.eigenvectors.column(i).into_owned();
            let pivot = v
                .iter()
                .copied()
                .fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
            if pivot < 0.0 {
                -v
            } else {
                v
            }
        })
        .collect();

    let mut excited_probabilities = vec![0.0; n];
    let mut s = 0;
    while s < n {
        let mut e = s + 1;
        while e < n && (eigenvalues[e] - eigenvalues[s]).abs() <= tol {
            e += 1;
        }
        let weight: f64 = (s..e).map(|i| eigenstates[i][0] * eigenstates[i][0]).sum();
        for p in &mut excited_probabilities[s..e] {
            *p = weight / (e - s) as f64;
        }
        s = e;
    }
    let dark_states = excited_probabilities
        .iter()
        .enumerate()
        .filter(|(_, p)| **p < DARK_STATE_EPSILON)
        .map(|(i, _)| i)
        .collect();
    Ok(AtomicEigenReport {
        eigenvalues,
        eigenstates,
        excited_probabilities,
        dark_states,
    })
}

/// Resonant Λ system with Ω₁ = ξ·Ω₂.
pub fn three_level_eigensystem(xi: f64, omega2: f64) -> Result<AtomicEigenReport, AtomicError> {
    eigensystem(&LevelSystem::three_level(xi * omega2, omega2))
}

/// Resonant four-level system with Ω₁ = Ω₂ = Ω′ and Ω₃ = ξ′·Ω′.
pub fn four_level_eigensystem(
    xi_prime: f64,
    omega_prime: f64,
) -> Result<AtomicEigenReport, AtomicError> {
    eigensystem(&LevelSystem::four_level(
        omega_prime,
        omega_prime,
        xi_prime * omega_prime,
    ))
}

/// 0, −Ω₂√(1+ξ²), +Ω₂√(1+ξ²).
pub fn three_level_closed_form(xi: f64, omega2: f64) -> [f64; 3] {
    let r = omega2 * libm::sqrt(1.0 + xi * xi);
    [0.0, -r, r]
}

/// ±Ω′·√((2+ξ′² ± √((2+ξ′²)² − 4ξ′²))/2), ascending.
pub fn four_level_closed_form(xi_prime: f64, omega_prime: f64) -> [f64; 4] {
    let s = 2.0 + xi_prime * xi_prime;
    let disc = libm::sqrt(s * s - 4.0 * xi_prime * xi_prime);
    let big = omega_prime * libm::sqrt((s + disc) / 2.0);
    // (s − disc)/2 = ξ′²/((s + disc)/2) avoids cancellation for small ξ′.
    let small = omega_prime * libm::sqrt(xi_prime * xi_prime / ((s + disc) / 2.0));
    [-big, -small, small, big]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_has_dark_state() {
        for xi in [0.0, 0.3, 1.0, 7.5] {
            let r = three_level_eigensystem(xi, 1.3).unwrap();
            assert!(r.eigenvalues[0].abs() < 1e-14);
            assert!(r.excited_probabilities[0] < 1e-28);
            assert_eq!(r.dark_states, vec![0]);
        }
    }

    #[test]
    fn lambda_unit_ratio() {
        let r = three_level_eigensystem(1.0, 1.0).unwrap();
        let s2 = libm::sqrt(2.0);
        assert!((r.eigenvalues[1] + s2).abs() < 1e-14);
        assert!((r.eigenvalues[2] - s2).abs() < 1e-14);
        assert!((r.excited_probabilities[1] - 0.5).abs() < 1e-14);
        assert!((r.excited_probabilities[2] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn lambda_dark_state_at_zero_ratio_is_g() {
        let r = three_level_eigensystem(0.0, 1.0).unwrap();
        let d = &r.eigenstates[0];
        assert!(d[0].abs() < 1e-15 && d[1].abs() < 1e-15);
        assert!((d[2].abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn lambda_dark_state_shape() {
        let xi = 2.0;
        let r = three_level_eigensystem(xi, 1.0).unwrap();
        let n = libm::sqrt(1.0 + xi * xi);
        let expect = DVector::from_vec(vec![0.0, -xi / n, 1.0 / n]);
        let d = &r.eigenstates[0];
        assert!((d.dot(&expect).abs() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn four_level_degenerate_point() {
        let r = four_level_eigensystem(0.0, 1.0).unwrap();
        assert!(r.eigenvalues[0].abs() < 1e-14 && r.eigenvalues[1].abs() < 1e-14);
        let s2 = libm::sqrt(2.0);
        assert!((r.eigenvalues[2] + s2).abs() < 1e-14 && (r.eigenvalues[3] - s2).abs() < 1e-14);
        assert_eq!(r.dark_states, vec![0, 1]);
        assert!((r.excited_probabilities[2] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn four_level_breaks_dark_state() {
        for xp in [0.1, 1.0, 5.0] {
            let r = four_level_eigensystem(xp, 1.0).unwrap();
            assert!(r.dark_states.is_empty());
            assert!(r.excited_probabilities.iter().all(|p| *p > 0.0));
        }
    }

    #[test]
    fn closed_form_unit_ratio() {
        let [a, b, c, d] = four_level_closed_form(1.0, 1.0);
        let big = libm::sqrt((3.0 + libm::sqrt(5.0)) / 2.0);
        let small = libm::sqrt((3.0 - libm::sqrt(5.0)) / 2.0);
        assert!((d - big).abs() < 1e-15 && (a + big).abs() < 1e-15);
        assert!((c - small).abs() < 1e-15 && (b + small).abs() < 1e-15);
    }

    #[test]
    fn probabilities_complete() {
        let r = four_level_eigensystem(0.7, 2.0).unwrap();
        let sum: f64 = r.excited_probabilities.iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
        assert!(r.orthonormality_defect() < 1e-12);
    }

    #[test]
    fn invalid_inputs() {
        assert_eq!(
            three_level_eigensystem(1.0, 0.0),
            Err(AtomicError::NonPositiveRabi(0.0))
        );
        assert_eq!(
            four_level_eigensystem(1.0, -1.0),
            Err(AtomicError::NonPositiveRabi(-1.0))
        );
        assert_eq!(
            three_level_eigensystem(f64::NAN, 1.0),
            Err(AtomicError::NonFinite)
        );
        let mut s = LevelSystem::three_level(1.0, 1.0);
        s.level_count = 5;
        assert_eq!(eigensystem(&s), Err(AtomicError::LevelCount(5)));
    }

    #[test]
    fn detuned_system_still_solves() {
        let mut s = LevelSystem::three_level(0.5, 1.0);
        s.detunings[0] = 0.2;
        let r = eigensystem(&s).unwrap();
        assert!(r.orthonormality_defect() < 1e-12);
        let trace: f64 = r.eigenvalues.iter().sum();
        assert!((trace - 0.2).abs() < 1e-12);
    }
}
