//! Grid sweeps over document parameters.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use omcool_core::darkmode::{dark_mode_condition, DarkModeReport};
use omcool_core::lyapunov::{
    phonon_numbers, solve_lyapunov, stability, LyapunovError, STABILITY_MARGIN,
};
use omcool_core::model::{
    build_drift_matrix, build_noise_matrix, solve_steady_amplitudes, ParameterMode,
    SteadyStateError, SystemConfig, Topology, STEADY_MAX_ITER, STEADY_TOLERANCE,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{ConfigFileError, Document, PathError};
use crate::table::{Cell, ResultTable};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scale {
    #[default]
    Linear,
    Log,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub path: String,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    #[serde(default, skip_serializing_if = "is_linear")]
    pub scale: Scale,
}

fn is_linear(s: &Scale) -> bool {
    *s == Scale::Linear
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum AxisError {
    #[error("axis `{0}`: expected PATH:MIN:MAX:POINTS[:log]")]
    Syntax(String),
    #[error("axis `{0}`: need points >= 2 with min < max, or a single point with min == max")]
    Range(String),
    #[error("axis `{0}`: log scale needs min > 0")]
    LogDomain(String),
}

impl Axis {
    pub fn linear(path: &str, min: f64, max: f64, points: usize) -> Axis {
        Axis {
            path: path.to_string(),
            min,
            max,
            points,
            scale: Scale::Linear,
        }
    }

    pub fn check(&self) -> Result<(), AxisError> {
        let ok = self.min.is_finite()
            && self.max.is_finite()
            && match self.points {
                0 => false,
                1 => self.min == self.max,
                _ => self.min < self.max,
            };
        if !ok {
            return Err(AxisError::Range(self.path.clone()));
        }
        if self.scale == Scale::Log && !(self.min > 0.0) {
            return Err(AxisError::LogDomain(self.path.clone()));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.min];
        }
        let n = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i == 0 {
                    return self.min;
                }
                if i + 1 == self.points {
                    return self.max;
                }
                let t = i as f64 / n;
                match self.scale {
                    Scale::Linear => self.min + t * (self.max - self.min),
                    Scale::Log => (self.min.ln() + t * (self.max.ln() - self.min.ln())).exp(),
                }
            })
            .collect()
    }
}

impl FromStr for Axis {
    type Err = AxisError;

    fn from_str(s: &str) -> Result<Axis, AxisError> {
        let bad = || AxisError::Syntax(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        let scale = match parts.get(4) {
            None => Scale::Linear,
            Some(&"log") => Scale::Log,
            Some(&"linear") => Scale::Linear,
            Some(_) => return Err(bad()),
        };
        if !(4..=5).contains(&parts.len()) || parts[0].is_empty() {
            return Err(bad());
        }
        let axis = Axis {
            path: parts[0].to_string(),
            min: parts[1].parse().map_err(|_| bad())?,
            max: parts[2].parse().map_err(|_| bad())?,
            points: parts[3].parse().map_err(|_| bad())?,
            scale,
        };
        axis.check()?;
        Ok(axis)
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}:{}", self.path, self.min, self.max, self.points)?;
        if self.scale == Scale::Log {
            f.write_str(":log")?;
        }
        Ok(())
    }
}

/// Labeled set of parameter overrides applied before the grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Case {
    pub label: String,
    pub set: BTreeMap<String, f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub base: Document,
    pub axes: Vec<Axis>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cases: Vec<Case>,
}

#[derive(Debug, thiserror::Error)]
pub enum SpecError {
    #[error("a sweep needs one or two axes, got {0}")]
    AxisCount(usize),
    #[error(transparent)]
    Axis(#[from] AxisError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error("duplicate case label `{0}`")]
    DuplicateCase(String),
    #[error(transparent)]
    Config(#[from] ConfigFileError),
}

/// Case index, axis values and the resolved document.
type GridPoint = (Option<usize>, Vec<f64>, Document);

impl SweepSpec {
    pub fn check(&self) -> Result<(), SpecError> {
        if !(1..=2).contains(&self.axes.len()) {
            return Err(SpecError::AxisCount(self.axes.len()));
        }
        self.base.to_config()?;
        for a in &self.axes {
            a.check()?;
            self.base.get(&a.path)?;
        }
        let mut seen = std::collections::HashSet::new();
        for c in &self.cases {
            if !seen.insert(c.label.as_str()) {
                return Err(SpecError::DuplicateCase(c.label.clone()));
            }
            for p in c.set.keys() {
                self.base.get(p)?;
            }
        }
        Ok(())
    }

    pub fn point_count(&self) -> usize {
        self.axes.iter().map(|a| a.points).product::<usize>() * self.cases.len().max(1)
    }

    /// Documents in row order: cases outermost, then the first axis, then
    /// the second.
    fn points(&self) -> Result<Vec<GridPoint>, SpecError> {
        let grids: Vec<Vec<f64>> = self.axes.iter().map(Axis::values).collect();
        let mut combos: Vec<Vec<f64>> = vec![vec![]];
        for g in &grids {
            combos = combos
                .into_iter()
                .flat_map(|prefix| {
                    g.iter().map(move |v| {
                        let mut p = prefix.clone();
                        p.push(*v);
                        p
                    })
                })
                .collect();
        }
        let case_ids: Vec<Option<usize>> = if self.cases.is_empty() {
            vec![None]
        } else {
            (0..self.cases.len()).map(Some).collect()
        };
        let mut out = Vec::with_capacity(self.point_count());
        for cid in case_ids {
            let mut base = self.base.clone();
            if let Some(i) = cid {
                for (p, v) in &self.cases[i].set {
                    base.set(p, *v)?;
                }
            }
            for values in &combos {
                let mut doc = base.clone();
                for (a, v) in self.axes.iter().zip(values) {
                    doc.set(&a.path, *v)?;
                }
                out.push((cid, values.clone(), doc));
            }
        }
        Ok(out)
    }

    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("spec serializes");
        digest(&json)
    }
}

pub(crate) fn digest(text: &str) -> String {
    let d = Sha256::digest(text.as_bytes());
    d.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

/// Everything computed at one parameter point.
#[derive(Clone, Debug)]
pub struct PointResult {
    pub stable: bool,
    pub max_real_part: f64,
    /// Final occupations; `None` when the point is unstable.
    pub phonons: Option<Vec<f64>>,
    pub dark: Option<DarkModeReport>,
}

#[derive(Debug, thiserror::Error)]
pub enum PointError {
    #[error(transparent)]
    Config(#[from] ConfigFileError),
    #[error("steady-state amplitudes: {0}")]
    Amplitudes(#[from] SteadyStateError),
    #[error("{0}")]
    Lyapunov(#[from] LyapunovError),
}

impl PointError {
    pub fn is_validation(&self) -> bool {
        matches!(self, PointError::Config(_))
            || matches!(
                self,
                PointError::Lyapunov(LyapunovError::Config(_))
                    | PointError::Amplitudes(SteadyStateError::Config(_))
            )
    }
}

/// Stability, occupations and dark-mode report for a validated config.
pub fn evaluate_config(config: &SystemConfig) -> Result<PointResult, PointError> {
    let effective = if config.parameter_mode == ParameterMode::Physical {
        let amps = solve_steady_amplitudes(config, STEADY_TOLERANCE, STEADY_MAX_ITER)?;
        config
            .to_effective(&amps)
            .map_err(|e| PointError::Lyapunov(e.into()))?
    } else {
        config.clone()
    };
    let drift = build_drift_matrix(&effective, None).map_err(LyapunovError::from)?;
    let st = stability(drift.entries(), STABILITY_MARGIN)?;
    let dark = match effective.topology() {
        Topology::NType | Topology::Network4 => dark_mode_condition(&effective).ok(),
        _ => None,
    };
    if !st.stable {
        return Ok(PointResult {
            stable: false,
            max_real_part: st.max_real_part,
            phonons: None,
            dark,
        });
    }
    let q = build_noise_matrix(&effective)
        .map_err(LyapunovError::from)?
        .to_complex();
    let v = solve_lyapunov(drift.entries(), &q)?;
    let n = phonon_numbers(&v, &effective)?;
    Ok(PointResult {
        stable: true,
        max_real_part: st.max_real_part,
        phonons: Some(n.mechanical),
        dark,
    })
}

pub fn evaluate(doc: &Document) -> Result<PointResult, PointError> {
    evaluate_config(&doc.to_config()?)
}

pub fn output_columns(mechanicals: usize) -> Vec<String> {
    let mut cols: Vec<String> = (1..=mechanicals).map(|l| format!("n_f_{l}")).collect();
    cols.extend(
        ["stable", "dark", "zeta_residual", "gs_minus_residual"]
            .iter()
            .map(|s| s.to_string()),
    );
    cols
}

pub fn output_cells(result: &PointResult, mechanicals: usize) -> Vec<Cell> {
    let mut cells: Vec<Cell> = match &result.phonons {
        Some(n) => n.iter().map(|x| Cell::Num(*x)).collect(),
        None => vec![Cell::Empty; mechanicals],
    };
    cells.push(result.stable.into());
    let d = result.dark.as_ref();
    cells.push(d.map(|r| r.dark_present).into());
    cells.push(d.map(|r| r.zeta_residual).into());
    cells.push(d.map(|r| r.gs_minus_residual).into());
    cells
}

/// Sweep stopped by a point that could not be solved. `partial` holds the
/// rows that precede it.
#[derive(Debug, thiserror::Error)]
#[error("sweep point {index} failed: {error}")]
pub struct SweepFailure {
    pub partial: ResultTable,
    pub index: usize,
    pub error: PointError,
}

#[derive(Debug, thiserror::Error)]
pub enum SweepError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Point(#[from] Box<SweepFailure>),
    #[error("cannot start worker pool: {0}")]
    Pool(String),
}

/// Runs every grid point on a pool of `jobs` workers. Row order and values
/// do not depend on `jobs`.
pub fn run_sweep(spec: &SweepSpec, jobs: usize) -> Result<ResultTable, SweepError> {
    spec.check()?;
    let mechanicals = spec.base.mechanicals.len();
    let points = spec.points()?;

    let mut columns = Vec::new();
    if !spec.cases.is_empty() {
        columns.push("case".to_string());
    }
    columns.extend(spec.axes.iter().map(|a| a.path.clone()));
    columns.extend(output_columns(mechanicals));
    let axes_meta: Vec<String> = spec.axes.iter().map(|a| a.to_string()).collect();
    let mut table = ResultTable::new(columns)
        .with_meta("version", concat!("omcool ", env!("CARGO_PKG_VERSION")))
        .with_meta("config_hash", spec.hash())
        .with_meta("axes", axes_meta.join(" "));
    if !spec.cases.is_empty() {
        table.set_meta("case_column", "case");
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| SweepError::Pool(e.to_string()))?;
    let results: Vec<Result<PointResult, PointError>> =
        pool.install(|| points.par_iter().map(|(_, _, doc)| evaluate(doc)).collect());

    for (index, ((cid, values, _), res)) in points.iter().zip(results).enumerate() {
        match res {
            Ok(r) => {
                let mut row = Vec::new();
                if let Some(i) = cid {
                    row.push(Cell::Text(spec.cases[*i].label.clone()));
                }
                row.extend(values.iter().map(|v| Cell::Num(*v)));
                row.extend(output_cells(&r, mechanicals));
                table.push(row);
            }
            Err(error) => {
                return Err(SweepError::Point(Box::new(SweepFailure {
                    partial: table,
                    index,
                    error,
                })))
            }
        }
    }
    Ok(table)
}
