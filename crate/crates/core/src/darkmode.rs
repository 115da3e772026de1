//! Hybrid mechanical modes and dark-mode detection.
//!
//! For two resonators sharing an intermediate cavity the rotation
//! B₊ = (G₁b₁ + G₂b₂)/G₊, B₋ = (G₂b₁ − G₁b₂)/G₊ leaves only B₊ coupled to
//! that cavity. B₋ stays dark unless the phonon frame mixes it back in
//! (ζ̃ ≠ 0) or the auxiliary cavity reaches it (G̃s₋ ≠ 0). Hopping between
//! the cavities (J) never enters.

use alloc::vec::Vec;
use core::fmt;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::model::{CouplingKind, ModeRef, ParameterMode, SystemConfig, Topology};

/// Relative threshold below which a dark-mode residual counts as zero.
pub const DARK_EPSILON: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum DarkModeError {
    #[error("both intermediate-cavity couplings are zero")]
    NoIntermediateCoupling,
    #[error("{0} coupling is complex; hybrid modes need real couplings")]
    ComplexCoupling(&'static str),
    #[error("non-finite input")]
    NonFinite,
    #[error("dark-mode analysis needs an n_type or network4 layout, found {0}")]
    WrongTopology(Topology),
    #[error("dark-mode analysis needs effective-mode parameters")]
    PhysicalMode,
    #[error("{0} channel is not present in the base configuration")]
    MissingChannel(Channel),
    #[error("chain needs at least two mechanical modes, got {0}")]
    ChainTooShort(usize),
    #[error("configuration is not a chain")]
    NotChain,
    #[error("eigen decomposition failed")]
    EigenFailure,
}

/// Transformed-frame quantities for a pair of resonators.
#[derive(Clone, Debug, PartialEq)]
pub struct HybridModes {
    pub omega_plus: f64,
    pub omega_minus: f64,
    pub zeta: f64,
    pub g_plus: f64,
    pub gs_plus: f64,
    pub gs_minus: f64,
    /// Rows give B₊ and B₋ in terms of (b₁, b₂).
    pub transform: [[f64; 2]; 2],
}

#[allow(clippy::too_many_arguments)]
pub fn hybridize(
    g1: f64,
    g2: f64,
    omega1: f64,
    omega2: f64,
    eta: f64,
    gs1: f64,
    gs2: f64,
) -> Result<HybridModes, DarkModeError> {
    if ![g1, g2, omega1, omega2, eta, gs1, gs2]
        .iter()
        .all(|x| x.is_finite())
    {
        return Err(DarkModeError::NonFinite);
    }
    let gp2 = g1 * g1 + g2 * g2;
    if gp2 == 0.0 {
        return Err(DarkModeError::NoIntermediateCoupling);
    }
    let g_plus = libm::sqrt(gp2);
    let (c, s) = (g1 / g_plus, g2 / g_plus);
    Ok(HybridModes {
        omega_plus: (omega1 * g1 * g1 + omega2 * g2 * g2 + 2.0 * eta * g1 * g2) / gp2,
        omega_minus: (omega1 * g2 * g2 + omega2 * g1 * g1 - 2.0 * eta * g1 * g2) / gp2,
        zeta: ((omega1 - omega2) * g1 * g2 + eta * (g2 * g2 - g1 * g1)) / gp2,
        g_plus,
        gs_plus: (gs1 * g1 + gs2 * g2) / g_plus,
        gs_minus: (gs1 * g2 - gs2 * g1) / g_plus,
        transform: [[c, s], [s, -c]],
    })
}

/// Why a dark mode is absent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BreakingChannel {
    /// ζ̃ ≠ 0: frequency mismatch or phonon hopping mixes B₋ into B₊.
    FrequencyMismatch,
    /// G̃s₋ ≠ 0: the auxiliary cavity couples to B₋ directly.
    AsymmetricAuxiliary,
}

impl fmt::Display for BreakingChannel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BreakingChannel::FrequencyMismatch => {
                "hybrid-mode coupling zeta is nonzero (frequency mismatch or phonon hopping)"
            }
            BreakingChannel::AsymmetricAuxiliary => {
                "auxiliary cavity couples to the dark hybrid mode (asymmetric auxiliary coupling)"
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DarkModeReport {
    pub dark_present: bool,
    pub zeta_residual: f64,
    pub gs_minus_residual: f64,
    pub breaking_channels: Vec<BreakingChannel>,
    pub hybrid: HybridModes,
}

fn real_part(z: num_complex::Complex64, what: &'static str) -> Result<f64, DarkModeError> {
    if z.im != 0.0 {
        return Err(DarkModeError::ComplexCoupling(what));
    }
    Ok(z.re)
}

struct FourModeParams {
    g1: f64,
    g2: f64,
    gs1: f64,
    gs2: f64,
    eta: f64,
    omega1: f64,
    omega2: f64,
}

fn four_mode_params(config: &SystemConfig) -> Result<FourModeParams, DarkModeError> {
    let topology = config.topology();
    if !matches!(topology, Topology::NType | Topology::Network4) {
        return Err(DarkModeError::WrongTopology(topology));
    }
    if config.cavities.len() != 2 || config.mechanicals.len() != 2 {
        return Err(DarkModeError::WrongTopology(Topology::Generic));
    }
    if config.parameter_mode != ParameterMode::Effective {
        return Err(DarkModeError::PhysicalMode);
    }
    let om = CouplingKind::Optomechanical;
    let (a, s) = (ModeRef::Cavity(0), ModeRef::Cavity(1));
    let (b1, b2) = (ModeRef::Mechanical(0), ModeRef::Mechanical(1));
    Ok(FourModeParams {
        g1: real_part(config.strength(om, a, b1), "G1")?,
        g2: real_part(config.strength(om, a, b2), "G2")?,
        gs1: real_part(config.strength(om, s, b1), "Gs1")?,
        gs2: real_part(config.strength(om, s, b2), "Gs2")?,
        eta: real_part(config.strength(CouplingKind::PhononHop, b1, b2), "eta")?,
        omega1: config.mechanicals[0].frequency,
        omega2: config.mechanicals[1].frequency,
    })
}

/// Evaluates the dark-mode conditions of a two-resonator, two-cavity
/// system. Cavity 0 is the intermediate cavity, cavity 1 the auxiliary one.
pub fn dark_mode_condition(config: &SystemConfig) -> Result<DarkModeReport, DarkModeError> {
    let p = four_mode_params(config)?;
    let hybrid = hybridize(p.g1, p.g2, p.omega1, p.omega2, p.eta, p.gs1, p.gs2)?;
    let zeta_residual = hybrid.zeta.abs();
    let gs_minus_residual = hybrid.gs_minus.abs();
    let zeta_scale = p.omega1.abs().max(p.omega2.abs()).max(p.eta.abs());
    let gs_scale = hybrid.g_plus.max(p.gs1.abs()).max(p.gs2.abs());

    let mut breaking_channels = Vec::new();
    if !(zeta_residual < DARK_EPSILON * zeta_scale) {
        breaking_channels.push(BreakingChannel::FrequencyMismatch);
    }
    if !(gs_minus_residual < DARK_EPSILON * gs_scale) {
        breaking_channels.push(BreakingChannel::AsymmetricAuxiliary);
    }
    Ok(DarkModeReport {
        dark_present: breaking_channels.is_empty(),
        zeta_residual,
        gs_minus_residual,
        breaking_channels,
        hybrid,
    })
}

/// Optional coupling channels of the network-coupled four-mode system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Channel {
    /// Photon hopping J between the cavities.
    J,
    /// Phonon hopping η between the resonators.
    Eta,
    /// Auxiliary cavity to resonator 1.
    Gs1,
    /// Auxiliary cavity to resonator 2.
    Gs2,
}

impl Channel {
    pub const ALL: [Channel; 4] = [Channel::J, Channel::Eta, Channel::Gs1, Channel::Gs2];

    pub fn as_str(self) -> &'static str {
        match self {
            Channel::J => "J",
            Channel::Eta => "eta",
            Channel::Gs1 => "Gs1",
            Channel::Gs2 => "Gs2",
        }
    }

    fn endpoints(self) -> (CouplingKind, ModeRef, ModeRef) {
        match self {
            Channel::J => (
                CouplingKind::PhotonHop,
                ModeRef::Cavity(0),
                ModeRef::Cavity(1),
            ),
            Channel::Eta => (
                CouplingKind::PhononHop,
                ModeRef::Mechanical(0),
                ModeRef::Mechanical(1),
            ),
            Channel::Gs1 => (
                CouplingKind::Optomechanical,
                ModeRef::Cavity(1),
                ModeRef::Mechanical(0),
            ),
            Channel::Gs2 => (
                CouplingKind::Optomechanical,
                ModeRef::Cavity(1),
                ModeRef::Mechanical(1),
            ),
        }
    }

    pub fn find(self, config: &SystemConfig) -> Option<usize> {
        let (kind, a, b) = self.endpoints();
        config.find_edge(kind, a, b)
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Copy of `config` with the given channels switched off. Edges are kept
/// at zero strength so the layout, and with it the topology, is unchanged.
pub fn close_channels(
    config: &SystemConfig,
    closed: &[Channel],
) -> Result<SystemConfig, DarkModeError> {
    let mut out = config.clone();
    for &ch in closed {
        let i = ch.find(config).ok_or(DarkModeError::MissingChannel(ch))?;
        out.edges[i].strength = Default::default();
    }
    Ok(out)
}

/// Every way to close one to three of the four optional channels, ordered
/// by subset size and then by channel order.
pub fn closed_channel_sets() -> Vec<Vec<Channel>> {
    let mut sets = Vec::with_capacity(14);
    for size in 1..=3 {
        for mask in 0u8..16 {
            if mask.count_ones() == size {
                sets.push(
                    Channel::ALL
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask & (1 << i) != 0)
                        .map(|(_, c)| *c)
                        .collect(),
                );
            }
        }
    }
    sets.sort_by(|a: &Vec<Channel>, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    sets
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassifiedConfiguration {
    pub closed: Vec<Channel>,
    pub config: SystemConfig,
    pub report: DarkModeReport,
}

pub fn classify_configurations(
    base: &SystemConfig,
) -> Result<Vec<ClassifiedConfiguration>, DarkModeError> {
    let topology = base.topology();
    if topology != Topology::Network4 {
        return Err(DarkModeError::WrongTopology(topology));
    }
    for ch in Channel::ALL {
        if ch.find(base).is_none() {
            return Err(DarkModeError::MissingChannel(ch));
        }
    }
    closed_channel_sets()
        .into_iter()
        .map(|closed| {
            let config = close_channels(base, &closed)?;
            let report = dark_mode_condition(&config)?;
            Ok(ClassifiedConfiguration {
                closed,
                config,
                report,
            })
        })
        .collect()
}

/// Normal modes of a resonator chain coupled to an intermediate cavity
/// (all resonators) and an auxiliary cavity (first resonator only).
#[derive(Clone, Debug, PartialEq)]
pub struct ChainModes {
    pub n: usize,
    /// Ω_k for k = 1..N.
    pub frequencies: Vec<f64>,
    /// Column k holds resonator amplitudes of mode k; b_l = Σ_k T[l,k]·B_k.
    pub transform: DMatrix<f64>,
    pub cavity_couplings: Vec<f64>,
    pub aux_couplings: Vec<f64>,
    /// Modes decoupled from the intermediate cavity.
    pub cavity_dark: Vec<bool>,
}

impl ChainModes {
    /// Max |TᵀT − I|.
    pub fn orthogonality_defect(&self) -> f64 {
        let t = &self.transform;
        let p = t.transpose() * t;
        let id = DMatrix::<f64>::identity(self.n, self.n);
        (p - id).amax()
    }
}

/// Σ_{l=1}^{N} sin(lkπ/(N+1)).
pub fn chain_parity_sum(n: usize, k: usize) -> f64 {
    let w = core::f64::consts::PI / (n as f64 + 1.0);
    (1..=n).map(|l| libm::sin((l * k) as f64 * w)).sum()
}

fn cavity_dark_flags(couplings: &[f64], scale: f64) -> Vec<bool> {
    couplings
        .iter()
        .map(|c| c.abs() < 1e-12 * scale.max(f64::MIN_POSITIVE))
        .collect()
}

/// Closed-form chain modes for uniform ω_m, η, G.
pub fn chain_modes(
    n: usize,
    omega_m: f64,
    eta: f64,
    g: f64,
    gs: f64,
) -> Result<ChainModes, DarkModeError> {
    if n < 2 {
        return Err(DarkModeError::ChainTooShort(n));
    }
    if ![omega_m, eta, g, gs].iter().all(|x| x.is_finite()) {
        return Err(DarkModeError::NonFinite);
    }
    let w = core::f64::consts::PI / (n as f64 + 1.0);
    let d = libm::sqrt((n as f64 + 1.0) / 2.0);
    let transform = DMatrix::from_fn(n, n, |l, k| libm::sin(((l + 1) * (k + 1)) as f64 * w) / d);
    let frequencies = (1..=n)
        .map(|k| omega_m + 2.0 * eta * libm::cos(k as f64 * w))
        .collect();
    let cavity_couplings: Vec<f64> = (1..=n).map(|k| g / d * chain_parity_sum(n, k)).collect();
    let aux_couplings = (1..=n).map(|k| gs * libm::sin(k as f64 * w) / d).collect();
    Ok(ChainModes {
        n,
        frequencies,
        transform,
        cavity_dark: cavity_dark_flags(&cavity_couplings, g.abs()),
        cavity_couplings,
        aux_couplings,
    })
}

/// Chain modes of a validated chain configuration. Uniform chains use the
/// sine transform; others diagonalize the resonator block numerically,
/// ordering modes by descending frequency.
pub fn chain_modes_of(config: &SystemConfig) -> Result<ChainModes, DarkModeError> {
    if config.topology() != Topology::Chain {
        return Err(DarkModeError::NotChain);
    }
    if config.parameter_mode != ParameterMode::Effective {
        return Err(DarkModeError::PhysicalMode);
    }
    let n = config.mechanicals.len();
    let om = CouplingKind::Optomechanical;
    let ph = CouplingKind::PhononHop;
    let g: Vec<f64> = (0..n)
        .map(|l| {
            real_part(
                config.strength(om, ModeRef::Cavity(0), ModeRef::Mechanical(l)),
                "G",
            )
        })
        .collect::<Result<_, _>>()?;
    let gs = if config.cavities.len() > 1 {
        real_part(
            config.strength(om, ModeRef::Cavity(1), ModeRef::Mechanical(0)),
            "Gs",
        )?
    } else {
        0.0
    };
    let hops: Vec<f64> = (0..n - 1)
        .map(|l| {
            real_part(
                config.strength(ph, ModeRef::Mechanical(l), ModeRef::Mechanical(l + 1)),
                "eta",
            )
        })
        .collect::<Result<_, _>>()?;
    let omegas: Vec<f64> = config.mechanicals.iter().map(|m| m.frequency).collect();

    let uniform = omegas.iter().all(|w| *w == omegas[0])
        && hops.iter().all(|h| *h == hops[0])
        && g.iter().all(|x| *x == g[0]);
    if uniform {
        return chain_modes(n, omegas[0], hops[0], g[0], gs);
    }

    let k = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            omegas[i]
        } else if i + 1 == j {
            hops[i]
        } else if j + 1 == i {
            hops[j]
        } else {
            0.0
        }
    });
    if k.iter().any(|x| !x.is_finite()) {
        return Err(DarkModeError::NonFinite);
    }
    let eig = SymmetricEigen::new(k);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let mut transform = DMatrix::<f64>::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        let mut v = eig.eigenvectors.column(src).into_owned();
        if let Some(first) = v.iter().find(|x| x.abs() > 1e-14) {
            if *first < 0.0 {
                v = -v;
            }
        }
        transform.set_column(col, &v);
    }
    let frequencies = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let cavity_couplings: Vec<f64> = (0..n)
        .map(|kk| (0..n).map(|l| transform[(l, kk)] * g[l]).sum())
        .collect();
    let aux_couplings = (0..n).map(|kk| gs * transform[(0, kk)]).collect();
    let gmax = g.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    Ok(ChainModes {
        n,
        frequencies,
        transform,
        cavity_dark: cavity_dark_flags(&cavity_couplings, gmax),
        cavity_couplings,
        aux_couplings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CavityMode, CouplingEdge, MechanicalMode};
    use alloc::vec;

    fn network4(g1: f64, g2: f64, gs1: f64, gs2: f64, j: f64, eta: f64, w2: f64) -> SystemConfig {
        SystemConfig::new(
            vec![CavityMode::new(1.0, 0.1), CavityMode::new(1.0, 0.1)],
            vec![
                MechanicalMode::new(1.0, 1e-5, 1000.0),
                MechanicalMode::new(w2, 1e-5, 1000.0),
            ],
        )
        .with_edge(CouplingEdge::optomechanical(0, 0, g1))
        .with_edge(CouplingEdge::optomechanical(0, 1, g2))
        .with_edge(CouplingEdge::optomechanical(1, 0, gs1))
        .with_edge(CouplingEdge::optomechanical(1, 1, gs2))
        .with_edge(CouplingEdge::photon_hop(0, 1, j))
        .with_edge(CouplingEdge::phonon_hop(0, 1, eta))
        .validate()
        .unwrap()
    }

    #[test]
    fn symmetric_reduction() {
        let h = hybridize(0.05, 0.05, 1.0, 1.0, 0.0, 0.08, 0.0).unwrap();
        assert_eq!(h.zeta, 0.0);
        assert!((h.omega_plus - 1.0).abs() < 1e-15 && (h.omega_minus - 1.0).abs() < 1e-15);
        assert!((h.g_plus - 0.05 * libm::sqrt(2.0)).abs() < 1e-15);
        let half = 0.08 / libm::sqrt(2.0);
        assert!((h.gs_plus - half).abs() < 1e-15 && (h.gs_minus - half).abs() < 1e-15);
    }

    #[test]
    fn detuned_pair_zeta() {
        let h = hybridize(0.05, 0.05, 1.0, 1.1, 0.0, 0.0, 0.0).unwrap();
        assert!((h.zeta + 0.05).abs() < 1e-14);
    }

    #[test]
    fn zero_couplings_rejected() {
        assert_eq!(
            hybridize(0.0, 0.0, 1.0, 1.0, 0.0, 0.1, 0.1),
            Err(DarkModeError::NoIntermediateCoupling)
        );
    }

    #[test]
    fn network_defaults_are_dark() {
        let r = dark_mode_condition(&network4(0.05, 0.05, 0.08, 0.08, 0.03, 0.03, 1.0)).unwrap();
        assert!(r.dark_present);
        assert_eq!(r.zeta_residual, 0.0);
        assert_eq!(r.gs_minus_residual, 0.0);
    }

    #[test]
    fn proportional_aux_is_dark() {
        let r = dark_mode_condition(&network4(0.04, 0.06, 0.02, 0.03, 0.1, 0.0, 1.0)).unwrap();
        assert!(r.dark_present, "{r:?}");
    }

    #[test]
    fn asymmetric_aux_breaks() {
        let r = dark_mode_condition(&network4(0.05, 0.05, 0.08, 0.02, 0.0, 0.03, 1.0)).unwrap();
        assert!(!r.dark_present);
        assert_eq!(
            r.breaking_channels,
            vec![BreakingChannel::AsymmetricAuxiliary]
        );
    }

    #[test]
    fn unequal_couplings_with_hopping_break() {
        let r = dark_mode_condition(&network4(0.04, 0.06, 0.0, 0.0, 0.0, 0.03, 1.0)).unwrap();
        assert!(!r.dark_present);
        assert!(r
            .breaking_channels
            .contains(&BreakingChannel::FrequencyMismatch));
    }

    #[test]
    fn photon_hop_is_irrelevant() {
        let a = dark_mode_condition(&network4(0.05, 0.05, 0.08, 0.03, 0.0, 0.0, 1.0)).unwrap();
        let b = dark_mode_condition(&network4(0.05, 0.05, 0.08, 0.03, 0.7, 0.0, 1.0)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn complex_coupling_rejected() {
        let mut cfg = network4(0.05, 0.05, 0.08, 0.08, 0.03, 0.03, 1.0);
        cfg.edges[0].strength = num_complex::Complex64::new(0.05, 0.01);
        assert_eq!(
            dark_mode_condition(&cfg),
            Err(DarkModeError::ComplexCoupling("G1"))
        );
    }

    #[test]
    fn chain_topology_rejected() {
        let cfg = SystemConfig::new(
            vec![CavityMode::new(1.0, 0.1)],
            vec![MechanicalMode::new(1.0, 1e-5, 1.0); 3],
        )
        .with_edge(CouplingEdge::optomechanical(0, 0, 0.1))
        .with_edge(CouplingEdge::optomechanical(0, 1, 0.1))
        .with_edge(CouplingEdge::optomechanical(0, 2, 0.1))
        .validate()
        .unwrap();
        assert!(matches!(
            dark_mode_condition(&cfg),
            Err(DarkModeError::WrongTopology(_))
        ));
    }

    #[test]
    fn fourteen_sets() {
        let sets = closed_channel_sets();
        assert_eq!(sets.len(), 14);
        assert_eq!(sets[0], vec![Channel::J]);
        assert_eq!(sets[13], vec![Channel::Eta, Channel::Gs1, Channel::Gs2]);
        let mut dedup = sets.clone();
        dedup.dedup();
        assert_eq!(dedup.len(), 14);
    }

    #[test]
    fn taxonomy_of_symmetric_defaults() {
        use Channel::*;
        let rows =
            classify_configurations(&network4(0.05, 0.05, 0.08, 0.08, 0.03, 0.03, 1.0)).unwrap();
        let dark: Vec<Vec<Channel>> = rows
            .iter()
            .filter(|r| r.report.dark_present)
            .map(|r| r.closed.clone())
            .collect();
        assert_eq!(
            dark,
            vec![
                vec![J],
                vec![Eta],
                vec![J, Eta],
                vec![Gs1, Gs2],
                vec![J, Gs1, Gs2],
                vec![Eta, Gs1, Gs2],
            ]
        );
    }

    #[test]
    fn taxonomy_unequal_g_with_eta() {
        let rows =
            classify_configurations(&network4(0.04, 0.06, 0.08, 0.08, 0.03, 0.03, 1.0)).unwrap();
        for r in rows.iter().filter(|r| !r.closed.contains(&Channel::Eta)) {
            assert!(!r.report.dark_present, "{:?}", r.closed);
        }
    }

    #[test]
    fn taxonomy_needs_every_channel() {
        let mut cfg = network4(0.05, 0.05, 0.08, 0.08, 0.03, 0.03, 1.0);
        cfg.edges.remove(4);
        cfg.topology = None;
        let cfg = cfg.validate().unwrap();
        assert_eq!(
            classify_configurations(&cfg),
            Err(DarkModeError::MissingChannel(Channel::J))
        );
    }

    #[test]
    fn chain_two() {
        let c = chain_modes(2, 1.0, 0.06, 0.05, 0.1).unwrap();
        assert!((c.frequencies[0] - 1.06).abs() < 1e-15);
        assert!((c.frequencies[1] - 0.94).abs() < 1e-15);
        assert!((c.cavity_couplings[0] - libm::sqrt(2.0) * 0.05).abs() < 1e-15);
        assert!(c.cavity_couplings[1].abs() < 1e-15);
        assert_eq!(c.cavity_dark, vec![false, true]);
    }

    #[test]
    fn chain_three() {
        let c = chain_modes(3, 1.0, 0.06, 0.05, 0.1).unwrap();
        assert!((c.frequencies[1] - 1.0).abs() < 1e-15);
        assert!(c.cavity_couplings[1].abs() < 1e-15);
        let expect = 0.05 / libm::sqrt(2.0) * (1.0 + libm::sqrt(2.0));
        assert!((c.cavity_couplings[0] - expect).abs() < 1e-15);
        assert!(c.aux_couplings.iter().all(|x| x.abs() > 0.0));
        assert!(c.orthogonality_defect() < 1e-14);
    }

    #[test]
    fn chain_too_short() {
        assert_eq!(
            chain_modes(1, 1.0, 0.0, 0.1, 0.1),
            Err(DarkModeError::ChainTooShort(1))
        );
    }

    fn chain_config(omegas: &[f64], eta: f64, g: f64, gs: f64) -> SystemConfig {
        let mut cfg = SystemConfig::new(
            vec![CavityMode::new(1.0, 0.1), CavityMode::new(1.0, 0.1)],
            omegas
                .iter()
                .map(|w| MechanicalMode::new(*w, 1e-5, 1000.0))
                .collect(),
        );
        for l in 0..omegas.len() {
            cfg = cfg.with_edge(CouplingEdge::optomechanical(0, l, g));
        }
        cfg = cfg.with_edge(CouplingEdge::optomechanical(1, 0, gs));
        for l in 0..omegas.len() - 1 {
            cfg = cfg.with_edge(CouplingEdge::phonon_hop(l, l + 1, eta));
        }
        cfg.validate().unwrap()
    }

    #[test]
    fn config_chain_matches_closed_form() {
        let cfg = chain_config(&[1.0; 4], 0.06, 0.05, 0.1);
        assert_eq!(cfg.topology(), Topology::Chain);
        let a = chain_modes_of(&cfg).unwrap();
        let b = chain_modes(4, 1.0, 0.06, 0.05, 0.1).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn nonuniform_chain_diagonalizes() {
        let cfg = chain_config(&[1.0, 1.02, 0.97], 0.06, 0.05, 0.1);
        let c = chain_modes_of(&cfg).unwrap();
        assert!(c.orthogonality_defect() < 1e-12);
        let sum: f64 = c.frequencies.iter().sum();
        assert!((sum - 2.99).abs() < 1e-12);
        assert!(c.frequencies.windows(2).all(|w| w[0] >= w[1]));
    }
}
