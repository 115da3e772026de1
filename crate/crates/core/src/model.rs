//! Mode graphs, steady-state coherent amplitudes and the drift/noise
//! matrices of the linearized quantum Langevin equations.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Whether cavity detunings and optomechanical strengths are the
/// linearized (effective) quantities or the bare single-photon ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParameterMode {
    /// Detunings are Δ′ and optomechanical strengths are G = g·α.
    Effective,
    /// Detunings are bare Δ, strengths are single-photon g, drives are used.
    Physical,
}

/// Layout tag. Advisory for reporting and presets; validation checks that a
/// declared tag matches the edge structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Topology {
    /// Intermediate cavity coupled to two resonators, auxiliary cavity to the first.
    NType,
    /// Two cavities and two resonators with every two-node coupling allowed.
    Network4,
    /// Intermediate cavity coupled to N resonators with nearest-neighbour
    /// phonon hopping and an auxiliary cavity on the first resonator.
    Chain,
    Generic,
}

impl Topology {
    pub fn as_str(self) -> &'static str {
        match self {
            Topology::NType => "n_type",
            Topology::Network4 => "network4",
            Topology::Chain => "chain",
            Topology::Generic => "generic",
        }
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CavityMode {
    /// Δ′ in effective mode, bare Δ in physical mode.
    pub detuning: f64,
    pub decay: f64,
    /// Drive amplitude Ω; only read in physical mode.
    pub drive: Complex64,
}

impl CavityMode {
    pub fn new(detuning: f64, decay: f64) -> Self {
        CavityMode {
            detuning,
            decay,
            drive: Complex64::new(0.0, 0.0),
        }
    }

    pub fn driven(detuning: f64, decay: f64, drive: Complex64) -> Self {
        CavityMode {
            detuning,
            decay,
            drive,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MechanicalMode {
    pub frequency: f64,
    pub damping: f64,
    pub thermal_occupation: f64,
}

impl MechanicalMode {
    pub fn new(frequency: f64, damping: f64, thermal_occupation: f64) -> Self {
        MechanicalMode {
            frequency,
            damping,
            thermal_occupation,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CouplingKind {
    Optomechanical,
    PhotonHop,
    PhononHop,
}

impl CouplingKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CouplingKind::Optomechanical => "optomechanical",
            CouplingKind::PhotonHop => "photon_hop",
            CouplingKind::PhononHop => "phonon_hop",
        }
    }
}

impl fmt::Display for CouplingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Index of a mode within its own list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ModeRef {
    Cavity(usize),
    Mechanical(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CouplingEdge {
    pub kind: CouplingKind,
    pub from: ModeRef,
    pub to: ModeRef,
    /// G (effective) or g (physical) for optomechanical edges; J and η are
    /// always taken as given.
    pub strength: Complex64,
}

impl CouplingEdge {
    pub fn optomechanical(cavity: usize, mechanical: usize, strength: f64) -> Self {
        CouplingEdge {
            kind: CouplingKind::Optomechanical,
            from: ModeRef::Cavity(cavity),
            to: ModeRef::Mechanical(mechanical),
            strength: Complex64::new(strength, 0.0),
        }
    }

    pub fn photon_hop(a: usize, b: usize, strength: f64) -> Self {
        CouplingEdge {
            kind: CouplingKind::PhotonHop,
            from: ModeRef::Cavity(a),
            to: ModeRef::Cavity(b),
            strength: Complex64::new(strength, 0.0),
        }
    }

    pub fn phonon_hop(a: usize, b: usize, strength: f64) -> Self {
        CouplingEdge {
            kind: CouplingKind::PhononHop,
            from: ModeRef::Mechanical(a),
            to: ModeRef::Mechanical(b),
            strength: Complex64::new(strength, 0.0),
        }
    }

    fn unordered_key(&self) -> (CouplingKind, ModeRef, ModeRef) {
        let (a, b) = (self.from, self.to);
        let ka = mode_sort_key(a);
        let kb = mode_sort_key(b);
        if ka <= kb {
            (self.kind, a, b)
        } else {
            (self.kind, b, a)
        }
    }
}

fn mode_sort_key(m: ModeRef) -> (u8, usize) {
    match m {
        ModeRef::Cavity(i) => (0, i),
        ModeRef::Mechanical(i) => (1, i),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SystemConfig {
    pub cavities: Vec<CavityMode>,
    pub mechanicals: Vec<MechanicalMode>,
    pub edges: Vec<CouplingEdge>,
    pub parameter_mode: ParameterMode,
    /// `None` asks validation to infer the layout.
    pub topology: Option<Topology>,
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("empty mode list: at least one {0} mode is required")]
    EmptyModeList(&'static str),
    #[error("edge {edge}: endpoint refers to a mode that does not exist")]
    DanglingEndpoint { edge: usize },
    #[error("edge {edge}: endpoints do not match edge kind {kind}")]
    KindMismatch { edge: usize, kind: CouplingKind },
    #[error("edge {edge}: self-loop")]
    SelfLoop { edge: usize },
    #[error("edge {edge}: duplicates edge {previous}")]
    DuplicateEdge { edge: usize, previous: usize },
    #[error("{field}[{index}] = {value}: {reason}")]
    InvalidParameter {
        field: &'static str,
        index: usize,
        value: f64,
        reason: &'static str,
    },
    #[error("declared topology {0} does not match the mode graph")]
    TopologyMismatch(Topology),
    #[error("physical-mode configurations need steady-state amplitudes")]
    MissingAmplitudes,
    #[error("steady-state amplitudes do not match the configuration")]
    AmplitudeMismatch,
}

impl SystemConfig {
    /// Effective-mode configuration with no edges.
    pub fn new(cavities: Vec<CavityMode>, mechanicals: Vec<MechanicalMode>) -> Self {
        SystemConfig {
            cavities,
            mechanicals,
            edges: Vec::new(),
            parameter_mode: ParameterMode::Effective,
            topology: None,
        }
    }

    pub fn with_edge(mut self, edge: CouplingEdge) -> Self {
        self.edges.push(edge);
        self
    }

    pub fn with_topology(mut self, topology: Topology) -> Self {
        self.topology = Some(topology);
        self
    }

    /// M = #cavities + #mechanicals.
    pub fn mode_count(&self) -> usize {
        self.cavities.len() + self.mechanicals.len()
    }

    /// Canonical index of a mode in the annihilation half of the ordering.
    pub fn index_of(&self, mode: ModeRef) -> usize {
        match mode {
            ModeRef::Cavity(i) => i,
            ModeRef::Mechanical(l) => self.cavities.len() + l,
        }
    }

    /// Resolved topology; `Generic` until validated with an inferrable layout.
    pub fn topology(&self) -> Topology {
        self.topology.unwrap_or_else(|| infer_topology(self))
    }

    pub fn validate(self) -> Result<SystemConfig, ConfigError> {
        validate_config(self)
    }

    pub fn check(&self) -> Result<(), ConfigError> {
        check_modes(self)?;
        check_edges(self)?;
        if let Some(t) = self.topology {
            if !topology_matches(self, t) {
                return Err(ConfigError::TopologyMismatch(t));
            }
        }
        Ok(())
    }

    /// Edge index for the given kind and unordered endpoints.
    pub fn find_edge(&self, kind: CouplingKind, a: ModeRef, b: ModeRef) -> Option<usize> {
        self.edges.iter().position(|e| {
            e.kind == kind && ((e.from == a && e.to == b) || (e.from == b && e.to == a))
        })
    }

    /// Strength of the edge, or zero when the channel is absent.
    pub fn strength(&self, kind: CouplingKind, a: ModeRef, b: ModeRef) -> Complex64 {
        self.find_edge(kind, a, b)
            .map(|i| self.edges[i].strength)
            .unwrap_or_default()
    }

    /// Replaces bare parameters by the linearized ones implied by `amplitudes`.
    pub fn to_effective(&self, amplitudes: &SteadyAmplitudes) -> Result<SystemConfig, ConfigError> {
        if self.parameter_mode == ParameterMode::Effective {
            return Ok(self.clone());
        }
        amplitudes.check_shape(self)?;
        let mut out = self.clone();
        out.parameter_mode = ParameterMode::Effective;
        for (cav, det) in out.cavities.iter_mut().zip(&amplitudes.effective_detunings) {
            cav.detuning = *det;
            cav.drive = Complex64::new(0.0, 0.0);
        }
        for (edge, g) in out.edges.iter_mut().zip(&amplitudes.linearized_couplings) {
            edge.strength = *g;
        }
        Ok(out)
    }
}

/// Checks every structural and numerical invariant and resolves the topology.
pub fn validate_config(mut config: SystemConfig) -> Result<SystemConfig, ConfigError> {
    config.check()?;
    if config.topology.is_none() {
        config.topology = Some(infer_topology(&config));
    }
    Ok(config)
}

fn check_modes(config: &SystemConfig) -> Result<(), ConfigError> {
    if config.cavities.is_empty() {
        return Err(ConfigError::EmptyModeList("cavity"));
    }
    if config.mechanicals.is_empty() {
        return Err(ConfigError::EmptyModeList("mechanical"));
    }
    let bad = |field, index, value, reason| ConfigError::InvalidParameter {
        field,
        index,
        value,
        reason,
    };
    for (i, c) in config.cavities.iter().enumerate() {
        if !c.detuning.is_finite() {
            return Err(bad("cavity.detuning", i, c.detuning, "must be finite"));
        }
        if !(c.decay >= 0.0) || !c.decay.is_finite() {
            return Err(bad("cavity.decay", i, c.decay, "must be finite and >= 0"));
        }
        if !c.drive.re.is_finite() || !c.drive.im.is_finite() {
            return Err(bad("cavity.drive", i, c.drive.norm(), "must be finite"));
        }
    }
    for (l, m) in config.mechanicals.iter().enumerate() {
        if !(m.frequency > 0.0) || !m.frequency.is_finite() {
            return Err(bad(
                "mechanical.frequency",
                l,
                m.frequency,
                "must be finite and > 0",
            ));
        }
        if !(m.damping >= 0.0) || !m.damping.is_finite() {
            return Err(bad(
                "mechanical.damping",
                l,
                m.damping,
                "must be finite and >= 0",
            ));
        }
        if !(m.thermal_occupation >= 0.0) || !m.thermal_occupation.is_finite() {
            return Err(bad(
                "mechanical.thermal_occupation",
                l,
                m.thermal_occupation,
                "must be finite and >= 0",
            ));
        }
    }
    Ok(())
}

fn check_edges(config: &SystemConfig) -> Result<(), ConfigError> {
    let exists = |m: ModeRef| match m {
        ModeRef::Cavity(i) => i < config.cavities.len(),
        ModeRef::Mechanical(l) => l < config.mechanicals.len(),
    };
    let mut seen: Vec<(CouplingKind, ModeRef, ModeRef)> = Vec::with_capacity(config.edges.len());
    for (i, e) in config.edges.iter().enumerate() {
        if !exists(e.from) || !exists(e.to) {
            return Err(ConfigError::DanglingEndpoint { edge: i });
        }
        let kind_ok = match e.kind {
            CouplingKind::Optomechanical => {
                matches!((e.from, e.to), (ModeRef::Cavity(_), ModeRef::Mechanical(_)))
            }
            CouplingKind::PhotonHop => {
                matches!((e.from, e.to), (ModeRef::Cavity(_), ModeRef::Cavity(_)))
            }
            CouplingKind::PhononHop => {
                matches!(
                    (e.from, e.to),
                    (ModeRef::Mechanical(_), ModeRef::Mechanical(_))
                )
            }
        };
        if !kind_ok {
            return Err(ConfigError::KindMismatch {
                edge: i,
                kind: e.kind,
            });
        }
        if e.from == e.to {
            return Err(ConfigError::SelfLoop { edge: i });
        }
        if !e.strength.re.is_finite() || !e.strength.im.is_finite() {
            return Err(ConfigError::InvalidParameter {
                field: "edge.strength",
                index: i,
                value: e.strength.norm(),
                reason: "must be finite",
            });
        }
        if config.parameter_mode == ParameterMode::Physical
            && e.kind == CouplingKind::Optomechanical
            && e.strength.im != 0.0
        {
            return Err(ConfigError::InvalidParameter {
                field: "edge.strength",
                index: i,
                value: e.strength.im,
                reason: "single-photon optomechanical coupling must be real",
            });
        }
        let key = e.unordered_key();
        if let Some(previous) = seen.iter().position(|k| *k == key) {
            return Err(ConfigError::DuplicateEdge { edge: i, previous });
        }
        seen.push(key);
    }
    Ok(())
}

fn is_n_type(config: &SystemConfig) -> bool {
    config.cavities.len() == 2
        && config.mechanicals.len() == 2
        && config.edges.iter().all(|e| {
            e.kind == CouplingKind::Optomechanical
                && matches!(
                    (e.from, e.to),
                    (ModeRef::Cavity(0), _) | (ModeRef::Cavity(1), ModeRef::Mechanical(0))
                )
        })
}

fn is_chain(config: &SystemConfig) -> bool {
    config.cavities.len() == 2
        && config.mechanicals.len() >= 2
        && config.edges.iter().all(|e| match e.kind {
            CouplingKind::Optomechanical => matches!(
                (e.from, e.to),
                (ModeRef::Cavity(0), _) | (ModeRef::Cavity(1), ModeRef::Mechanical(0))
            ),
            CouplingKind::PhononHop => match (e.from, e.to) {
                (ModeRef::Mechanical(a), ModeRef::Mechanical(b)) => a.abs_diff(b) == 1,
                _ => false,
            },
            CouplingKind::PhotonHop => false,
        })
}

fn topology_matches(config: &SystemConfig, t: Topology) -> bool {
    match t {
        Topology::NType => is_n_type(config),
        Topology::Network4 => config.cavities.len() == 2 && config.mechanicals.len() == 2,
        Topology::Chain => is_chain(config),
        Topology::Generic => true,
    }
}

fn infer_topology(config: &SystemConfig) -> Topology {
    if is_n_type(config) {
        Topology::NType
    } else if config.cavities.len() == 2 && config.mechanicals.len() == 2 {
        Topology::Network4
    } else if config.mechanicals.len() >= 3 && is_chain(config) {
        Topology::Chain
    } else {
        Topology::Generic
    }
}

/// Coherent steady state of a driven configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct SteadyAmplitudes {
    /// α per cavity.
    pub cavity_amplitudes: Vec<Complex64>,
    /// β per mechanical mode.
    pub mechanical_displacements: Vec<Complex64>,
    /// Δ′ per cavity.
    pub effective_detunings: Vec<f64>,
    /// Aligned with `SystemConfig::edges`: g·α for optomechanical edges,
    /// the unchanged strength for hopping edges.
    pub linearized_couplings: Vec<Complex64>,
    /// arg α per cavity: rotating cavity j by e^{-i·phase} makes its
    /// linearized couplings real and nonnegative.
    pub cavity_phases: Vec<f64>,
    pub converged: bool,
    pub iterations: usize,
    /// Max-norm of F(x) − x at the returned point.
    pub residual: f64,
}

impl SteadyAmplitudes {
    fn check_shape(&self, config: &SystemConfig) -> Result<(), ConfigError> {
        if self.cavity_amplitudes.len() != config.cavities.len()
            || self.effective_detunings.len() != config.cavities.len()
            || self.mechanical_displacements.len() != config.mechanicals.len()
            || self.linearized_couplings.len() != config.edges.len()
        {
            return Err(ConfigError::AmplitudeMismatch);
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum SteadyStateError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("steady-state amplitudes are only defined for physical-mode configurations")]
    NotPhysical,
    #[error("tolerance must be positive and finite")]
    InvalidTolerance,
    #[error("fixed-point iteration did not converge after {iterations} iterations (residual {residual:e}); the drive may be in a bistable or unstable regime")]
    NonConvergence { iterations: usize, residual: f64 },
}

pub const STEADY_TOLERANCE: f64 = 1e-12;
pub const STEADY_MAX_ITER: usize = 10_000;
const PICARD_DAMPING: f64 = 0.5;

struct SteadyMap<'a> {
    config: &'a SystemConfig,
    c: usize,
}

impl SteadyMap<'_> {
    fn detunings(&self, beta: &[Complex64]) -> Vec<f64> {
        let mut det: Vec<f64> = self.config.cavities.iter().map(|c| c.detuning).collect();
        for e in &self.config.edges {
            if let (CouplingKind::Optomechanical, ModeRef::Cavity(j), ModeRef::Mechanical(l)) =
                (e.kind, e.from, e.to)
            {
                det[j] += 2.0 * e.strength.re * beta[l].re;
            }
        }
        det
    }

    /// One application of the coupled algebraic steady-state equations.
    fn apply(&self, x: &[Complex64], out: &mut [Complex64]) {
        let cfg = self.config;
        let (alpha, beta) = x.split_at(self.c);
        let det = self.detunings(beta);
        let mut cav_src: Vec<Complex64> = cfg.cavities.iter().map(|c| c.drive).collect();
        let mut mech_src = vec![Complex64::new(0.0, 0.0); cfg.mechanicals.len()];
        for e in &cfg.edges {
            match (e.kind, e.from, e.to) {
                (CouplingKind::PhotonHop, ModeRef::Cavity(a), ModeRef::Cavity(b)) => {
                    cav_src[a] += e.strength * alpha[b];
                    cav_src[b] += e.strength.conj() * alpha[a];
                }
                (CouplingKind::PhononHop, ModeRef::Mechanical(a), ModeRef::Mechanical(b)) => {
                    mech_src[a] += e.strength * beta[b];
                    mech_src[b] += e.strength.conj() * beta[a];
                }
                (CouplingKind::Optomechanical, ModeRef::Cavity(j), ModeRef::Mechanical(l)) => {
                    mech_src[l] += e.strength * alpha[j].norm_sqr();
                }
                _ => unreachable!("validated edge"),
            }
        }
        for (j, c) in cfg.cavities.iter().enumerate() {
            out[j] = -I * cav_src[j] / Complex64::new(c.decay, det[j]);
        }
        for (l, m) in cfg.mechanicals.iter().enumerate() {
            out[self.c + l] = -I * mech_src[l] / Complex64::new(m.damping, m.frequency);
        }
    }
}

fn max_abs(v: &[Complex64]) -> f64 {
    v.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

/// Damped Picard iteration on the steady-state amplitude equations.
///
/// Converged when ‖F(x) − x‖_max ≤ tol·max(1, ‖x‖_max). Several fixed points
/// can coexist in the bistable regime; no branch is chosen, a failure to
/// settle is reported as `NonConvergence`.
pub fn solve_steady_amplitudes(
    config: &SystemConfig,
    tol: f64,
    max_iter: usize,
) -> Result<SteadyAmplitudes, SteadyStateError> {
    config.check()?;
    if config.parameter_mode != ParameterMode::Physical {
        return Err(SteadyStateError::NotPhysical);
    }
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(SteadyStateError::InvalidTolerance);
    }
    let c = config.cavities.len();
    let n = c + config.mechanicals.len();
    let map = SteadyMap { config, c };
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    let mut fx = x.clone();
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    while iterations <= max_iter {
        map.apply(&x, &mut fx);
        residual = x
            .iter()
            .zip(&fx)
            .fold(0.0f64, |acc, (a, b)| acc.max((a - b).norm()));
        let scale = max_abs(&x).max(max_abs(&fx)).max(1.0);
        if residual.is_finite() && residual <= tol * scale {
            let (alpha, beta) = x.split_at(c);
            return Ok(finish(config, alpha, beta, iterations, residual));
        }
        if !residual.is_finite() || iterations == max_iter {
            break;
        }
        for (xi, fi) in x.iter_mut().zip(&fx) {
            *xi += PICARD_DAMPING * (fi - *xi);
        }
        iterations += 1;
    }
    Err(SteadyStateError::NonConvergence {
        iterations,
        residual,
    })
}

fn finish(
    config: &SystemConfig,
    alpha: &[Complex64],
    beta: &[Complex64],
    iterations: usize,
    residual: f64,
) -> SteadyAmplitudes {
    let map = SteadyMap {
        config,
        c: alpha.len(),
    };
    let effective_detunings = map.detunings(beta);
    let linearized_couplings = config
        .edges
        .iter()
        .map(|e| match (e.kind, e.from) {
            (CouplingKind::Optomechanical, ModeRef::Cavity(j)) => e.strength * alpha[j],
            _ => e.strength,
        })
        .collect();
    let cavity_phases = alpha
        .iter()
        .map(|a| if a.norm() == 0.0 { 0.0 } else { a.arg() })
        .collect();
    SteadyAmplitudes {
        cavity_amplitudes: alpha.to_vec(),
        mechanical_displacements: beta.to_vec(),
        effective_detunings,
        linearized_couplings,
        cavity_phases,
        converged: true,
        iterations,
        residual,
    }
}

/// Coefficient matrix of the linearized Langevin equations,
/// A = [[E, F], [F*, E*]] in canonical ordering.
#[derive(Clone, Debug, PartialEq)]
pub struct DriftMatrix {
    modes: usize,
    entries: DMatrix<Complex64>,
}

impl DriftMatrix {
    pub fn dimension(&self) -> usize {
        2 * self.modes
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<Complex64> {
        self.entries
    }

    pub fn e_block(&self) -> DMatrix<Complex64> {
        self.entries
            .view((0, 0), (self.modes, self.modes))
            .into_owned()
    }

    pub fn f_block(&self) -> DMatrix<Complex64> {
        self.entries
            .view((0, self.modes), (self.modes, self.modes))
            .into_owned()
    }

    /// Largest element-wise deviation from the [[E, F], [F*, E*]] structure.
    pub fn block_conjugation_defect(&self) -> f64 {
        let m = self.modes;
        let mut worst = 0.0f64;
        for i in 0..m {
            for j in 0..m {
                let a = &self.entries;
                worst = worst
                    .max((a[(m + i, m + j)] - a[(i, j)].conj()).norm())
                    .max((a[(m + i, j)] - a[(i, m + j)].conj()).norm());
            }
        }
        worst
    }
}

/// Assembles A from a validated configuration.
///
/// Effective mode uses detunings and strengths as given. Physical mode needs
/// the steady state: Δ′ replaces Δ and g·α replaces g.
pub fn build_drift_matrix(
    config: &SystemConfig,
    amplitudes: Option<&SteadyAmplitudes>,
) -> Result<DriftMatrix, ConfigError> {
    config.check()?;
    let (detunings, strengths): (Vec<f64>, Vec<Complex64>) = match config.parameter_mode {
        ParameterMode::Effective => (
            config.cavities.iter().map(|c| c.detuning).collect(),
            config.edges.iter().map(|e| e.strength).collect(),
        ),
        ParameterMode::Physical => {
            let amps = amplitudes.ok_or(ConfigError::MissingAmplitudes)?;
            amps.check_shape(config)?;
            (
                amps.effective_detunings.clone(),
                amps.linearized_couplings.clone(),
            )
        }
    };

    let m = config.mode_count();
    let c = config.cavities.len();
    let mut e = DMatrix::<Complex64>::zeros(m, m);
    let mut f = DMatrix::<Complex64>::zeros(m, m);
    for (j, cav) in config.cavities.iter().enumerate() {
        e[(j, j)] = -Complex64::new(cav.decay, detunings[j]);
    }
    for (l, mech) in config.mechanicals.iter().enumerate() {
        e[(c + l, c + l)] = -Complex64::new(mech.damping, mech.frequency);
    }
    for (edge, &s) in config.edges.iter().zip(&strengths) {
        let p = config.index_of(edge.from);
        let q = config.index_of(edge.to);
        match edge.kind {
            CouplingKind::Optomechanical => {
                // δa ← −iG(δb + δb†);  δb ← −iG*δa − iGδa†
                e[(p, q)] = -I * s;
                e[(q, p)] = -I * s.conj();
                f[(p, q)] = -I * s;
                f[(q, p)] = -I * s;
            }
            CouplingKind::PhotonHop | CouplingKind::PhononHop => {
                e[(p, q)] = -I * s;
                e[(q, p)] = -I * s.conj();
            }
        }
    }

    let mut a = DMatrix::<Complex64>::zeros(2 * m, 2 * m);
    for i in 0..m {
        for j in 0..m {
            a[(i, j)] = e[(i, j)];
            a[(i, m + j)] = f[(i, j)];
            a[(m + i, j)] = f[(i, j)].conj();
            a[(m + i, m + j)] = e[(i, j)].conj();
        }
    }
    Ok(DriftMatrix {
        modes: m,
        entries: a,
    })
}

/// Symmetrized noise-correlation matrix Q = ½(C + Cᵀ).
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseMatrix {
    entries: DMatrix<f64>,
}

impl NoiseMatrix {
    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn dimension(&self) -> usize {
        self.entries.nrows()
    }

    pub fn to_complex(&self) -> DMatrix<Complex64> {
        self.entries.map(|x| Complex64::new(x, 0.0))
    }
}

/// Markovian input noise: vacuum baths on cavities, thermal baths on the
/// mechanical modes.
pub fn build_noise_matrix(config: &SystemConfig) -> Result<NoiseMatrix, ConfigError> {
    config.check()?;
    let m = config.mode_count();
    let c = config.cavities.len();
    let mut corr = DMatrix::<f64>::zeros(2 * m, 2 * m);
    for (j, cav) in config.cavities.iter().enumerate() {
        corr[(j, m + j)] = 2.0 * cav.decay;
    }
    for (l, mech) in config.mechanicals.iter().enumerate() {
        let k = c + l;
        corr[(k, m + k)] = 2.0 * mech.damping * (mech.thermal_occupation + 1.0);
        corr[(m + k, k)] = 2.0 * mech.damping * mech.thermal_occupation;
    }
    let entries = (&corr + corr.transpose()) * 0.5;
    Ok(NoiseMatrix { entries })
}
