use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use omcool::config::{ConfigFileError, Document};
use omcool::preset::{self, AtomicSpec};
use omcool::run::{run_atomic, run_preset, run_solve, run_taxonomy, RunError, TaxonomyError};
use omcool::svg;
use omcool::sweep::{run_sweep, Axis, PointError, SpecError, SweepError, SweepSpec};
use omcool::table::ResultTable;

#[derive(Parser)]
#[command(
    name = "omcool",
    version,
    about = "Multimode optomechanical cooling and dark-mode analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one configuration.
    Solve {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep one or two parameters over a grid.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// PATH:MIN:MAX:POINTS[:log], e.g. cavities.a.decay:0.05:1:50
        #[arg(long = "axis", required = true)]
        axes: Vec<Axis>,
        #[arg(long, env = "OMCOOL_JOBS", default_value_t = default_jobs())]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dark-mode classification of the fourteen closed-channel variants.
    Taxonomy {
        #[arg(long)]
        config: PathBuf,
        /// Optional intermediate-cavity decay axis MIN:MAX:POINTS[:log].
        #[arg(long)]
        kappa: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Eigenstructure of the three- or four-level atom.
    Atomic {
        #[arg(long, value_parser = clap::value_parser!(u8).range(3..=4))]
        levels: u8,
        /// MIN:MAX:POINTS
        #[arg(long)]
        ratio: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print or run a named preset.
    Preset {
        name: String,
        #[arg(long, conflicts_with = "run")]
        dump: bool,
        #[arg(long)]
        run: bool,
        /// Points per axis.
        #[arg(long)]
        points: Option<usize>,
        #[arg(long, env = "OMCOOL_JOBS", default_value_t = default_jobs())]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-emit a result table as CSV or SVG.
    Emit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        format: Format,
        /// Column to plot (SVG only).
        #[arg(long)]
        column: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Svg,
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Failure classes with their exit codes.
#[derive(Debug)]
enum Failure {
    Io(String),
    Parse(String),
    Validation(String),
    Unstable(String),
    Solver(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Parse(_) => 3,
            Failure::Validation(_) => 4,
            Failure::Unstable(_) => 5,
            Failure::Solver(_) => 6,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Io(m)
            | Failure::Parse(m)
            | Failure::Validation(m)
            | Failure::Unstable(m)
            | Failure::Solver(m) => m,
        }
    }
}

impl From<ConfigFileError> for Failure {
    fn from(e: ConfigFileError) -> Self {
        match e {
            ConfigFileError::Io { .. } => Failure::Io(e.to_string()),
            ConfigFileError::Parse(_) => Failure::Parse(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

impl From<PointError> for Failure {
    fn from(e: PointError) -> Self {
        match e {
            PointError::Config(c) => c.into(),
            e if e.is_validation() => Failure::Validation(e.to_string()),
            e => Failure::Solver(e.to_string()),
        }
    }
}

impl From<SpecError> for Failure {
    fn from(e: SpecError) -> Self {
        match e {
            SpecError::Config(c) => c.into(),
            e => Failure::Validation(e.to_string()),
        }
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(e.to_string())),
    }
}

fn write_table(path: Option<&Path>, table: &ResultTable) -> Result<(), Failure> {
    write_output(path, &table.to_csv_string())
}

fn sweep_result(
    result: Result<ResultTable, SweepError>,
    out: Option<&Path>,
) -> Result<(), Failure> {
    match result {
        Ok(t) => write_table(out, &t),
        Err(SweepError::Spec(e)) => Err(e.into()),
        Err(SweepError::Point(f)) => {
            write_table(out, &f.partial)?;
            let msg = f.to_string();
            Err(match Failure::from(f.error) {
                Failure::Solver(_) => Failure::Solver(msg),
                other => other,
            })
        }
        Err(e @ SweepError::Pool(_)) => Err(Failure::Io(e.to_string())),
    }
}

fn parse_range(name: &str, text: &str) -> Result<Axis, Failure> {
    format!("{name}:{text}")
        .parse()
        .map_err(|e: omcool::sweep::AxisError| Failure::Validation(e.to_string()))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve { config, out } => {
            let doc = Document::load(&config)?;
            let (table, result) = run_solve(&doc)?;
            write_table(out.as_deref(), &table)?;
            if !result.stable {
                return Err(Failure::Unstable(format!(
                    "system is unstable (max Re λ = {:e})",
                    result.max_real_part
                )));
            }
            Ok(())
        }
        Command::Sweep {
            config,
            axes,
            jobs,
            out,
        } => {
            let spec = SweepSpec {
                base: Document::load(&config)?,
                axes,
                cases: Vec::new(),
            };
            sweep_result(run_sweep(&spec, jobs), out.as_deref())
        }
        Command::Taxonomy { config, kappa, out } => {
            let doc = Document::load(&config)?;
            let axis = kappa.map(|k| parse_range("kappa", &k)).transpose()?;
            let table = run_taxonomy(&doc, axis.as_ref()).map_err(|e| match e {
                TaxonomyError::Point(p) => p.into(),
                e => Failure::Validation(e.to_string()),
            })?;
            write_table(out.as_deref(), &table)
        }
        Command::Atomic { levels, ratio, out } => {
            let spec = AtomicSpec {
                levels: levels as usize,
                ratio: parse_range("ratio", &ratio)?,
            };
            let table = run_atomic(&spec).map_err(|e| Failure::Validation(e.to_string()))?;
            write_table(out.as_deref(), &table)
        }
        Command::Preset {
            name,
            dump,
            run,
            points,
            jobs,
            out,
        } => {
            let mut p = preset::load(&name).map_err(|e| Failure::Validation(e.to_string()))?;
            if let Some(n) = points {
                p = p.with_points(n);
            }
            if run && !dump {
                match run_preset(&p, jobs) {
                    Ok(t) => write_table(out.as_deref(), &t),
                    Err(RunError::Point(e)) => Err(e.into()),
                    Err(RunError::Sweep(e)) => sweep_result(Err(e), out.as_deref()),
                    Err(RunError::Atomic(e)) => Err(Failure::Validation(e.to_string())),
                }
            } else {
                write_output(out.as_deref(), &(p.to_json() + "\n"))
            }
        }
        Command::Emit {
            input,
            format,
            column,
            out,
        } => {
            let text = fs::read_to_string(&input)
                .map_err(|e| Failure::Io(format!("{}: {e}", input.display())))?;
            let table = ResultTable::from_csv(&text).map_err(|e| Failure::Parse(e.to_string()))?;
            match format {
                Format::Csv => write_table(out.as_deref(), &table),
                Format::Svg => {
                    let svg = svg::render(&table, column.as_deref())
                        .map_err(|e| Failure::Validation(e.to_string()))?;
                    write_output(out.as_deref(), &svg)
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("omcool: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
