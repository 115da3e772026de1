//! Files, presets and batch runs on top of `omcool-core`.
//!
//! System documents are JSON ([`config`]), results are CSV tables with
//! `#` metadata lines ([`table`]), and sweeps run grid points on a bounded
//! worker pool while keeping row order fixed ([`sweep`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod preset;
pub mod run;
pub mod svg;
pub mod sweep;
pub mod table;

pub use config::Document;
pub use preset::Preset;
pub use sweep::{run_sweep, Axis, SweepSpec};
pub use table::ResultTable;
