//! Single-shot runs that produce result tables.

use omcool_core::atomic::{eigensystem, AtomicError, LevelSystem};
use omcool_core::darkmode::{classify_configurations, DarkModeError};

use crate::config::Document;
use crate::preset::{AtomicSpec, Job, Preset};
use crate::sweep::{
    digest, evaluate_config, output_cells, output_columns, run_sweep, Axis, PointError,
    PointResult, SweepError,
};
use crate::table::{Cell, ResultTable};

fn header(doc_json: &str) -> ResultTable {
    ResultTable::new(Vec::new())
        .with_meta("version", concat!("omcool ", env!("CARGO_PKG_VERSION")))
        .with_meta("config_hash", digest(doc_json))
}

/// One-row table for a single configuration. The point result is returned
/// alongside so callers can act on instability.
pub fn run_solve(doc: &Document) -> Result<(ResultTable, PointResult), PointError> {
    let config = doc.to_config()?;
    let result = evaluate_config(&config)?;
    let m = config.mechanicals.len();
    let mut table = header(&doc.to_json());
    table.columns = output_columns(m);
    table.columns.push("max_re_eigenvalue".into());
    let mut row = output_cells(&result, m);
    row.push(result.max_real_part.into());
    table.push(row);
    Ok((table, result))
}

#[derive(Debug, thiserror::Error)]
pub enum TaxonomyError {
    #[error(transparent)]
    Point(#[from] PointError),
    #[error(transparent)]
    DarkMode(#[from] DarkModeError),
    #[error("kappa axis: {0}")]
    Axis(String),
}

/// Fourteen closed-channel variants of a network base, evaluated at the
/// base decay rate or along an optional axis over the intermediate-cavity
/// decay.
pub fn run_taxonomy(doc: &Document, kappa: Option<&Axis>) -> Result<ResultTable, TaxonomyError> {
    let base = doc.to_config().map_err(PointError::from)?;
    let rows = classify_configurations(&base)?;
    if let Some(a) = kappa {
        a.check().map_err(|e| TaxonomyError::Axis(e.to_string()))?;
    }
    let kappas: Vec<Option<f64>> = match kappa {
        Some(a) => a.values().into_iter().map(Some).collect(),
        None => vec![None],
    };
    let m = base.mechanicals.len();
    let mut table = header(&doc.to_json());
    table.columns.push("closed".into());
    if let Some(a) = kappa {
        table.columns.push("kappa".into());
        table.set_meta("axes", a.to_string());
    }
    table.columns.extend(output_columns(m));
    table.set_meta("case_column", "closed");

    let work: Vec<(usize, Option<f64>)> = (0..rows.len())
        .flat_map(|i| kappas.iter().map(move |k| (i, *k)))
        .collect();
    use rayon::prelude::*;
    let results: Vec<Result<PointResult, PointError>> = work
        .par_iter()
        .map(|(i, k)| {
            let mut cfg = rows[*i].config.clone();
            if let Some(k) = k {
                cfg.cavities[0].decay = *k;
            }
            evaluate_config(&cfg)
        })
        .collect();
    for ((i, k), res) in work.iter().zip(results) {
        let res = res?;
        let label: Vec<&str> = rows[*i].closed.iter().map(|c| c.as_str()).collect();
        let mut row = vec![Cell::Text(format!("{}=0", label.join("=")))];
        if let Some(k) = k {
            row.push((*k).into());
        }
        row.extend(output_cells(&res, m));
        table.push(row);
    }
    Ok(table)
}

/// Eigenvalues and excited-state weights along a coupling-ratio grid.
/// Three levels vary Ω₁/Ω₂; four levels vary Ω₃/Ω₂ with Ω₁ = Ω₂.
pub fn run_atomic(spec: &AtomicSpec) -> Result<ResultTable, AtomicError> {
    let n = spec.levels;
    if n != 3 && n != 4 {
        return Err(AtomicError::LevelCount(n));
    }
    let mut table = header(&serde_json::to_string(spec).expect("spec serializes"))
        .with_meta("axes", spec.ratio.to_string());
    table.columns.push("ratio".into());
    table.columns.extend((1..=n).map(|s| format!("lambda_{s}")));
    table.columns.extend((1..=n).map(|s| format!("p_e_{s}")));
    table.columns.push("dark_states".into());
    for x in spec.ratio.values() {
        let system = if n == 3 {
            LevelSystem::three_level(x, 1.0)
        } else {
            LevelSystem::four_level(1.0, 1.0, x)
        };
        let r = eigensystem(&system)?;
        let mut row = vec![Cell::Num(x)];
        row.extend(r.eigenvalues.iter().map(|v| Cell::Num(*v)));
        row.extend(r.excited_probabilities.iter().map(|p| Cell::Num(*p)));
        row.push(Cell::Num(r.dark_states.len() as f64));
        table.push(row);
    }
    Ok(table)
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Point(#[from] PointError),
    #[error(transparent)]
    Sweep(#[from] SweepError),
    #[error(transparent)]
    Atomic(#[from] AtomicError),
}

pub fn run_preset(preset: &Preset, jobs: usize) -> Result<ResultTable, RunError> {
    let mut table = match &preset.job {
        Job::Solve(doc) => run_solve(doc)?.0,
        Job::Sweep(spec) => run_sweep(spec, jobs)?,
        Job::Atomic(spec) => run_atomic(spec)?,
    };
    table
        .metadata
        .insert(0, ("preset".into(), preset.name.clone()));
    if let Some(p) = &preset.plot {
        table.set_meta("plot", p.clone());
    }
    Ok(table)
}
