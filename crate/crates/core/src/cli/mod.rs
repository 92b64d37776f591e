//! `abssep` command-line front end.
//!
//! Every subcommand writes its records as CSV (`--out`, default
//! `<command>.csv`) and a JSON manifest (`--manifest`, default
//! `<out stem>.manifest.json`). Exit status is 0 on success, 2 for argument
//! or input errors and 1 for numerical or I/O failures.

pub mod input;
pub mod output;

use std::f64::consts::PI;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

use crate::criteria::Tolerances;
use crate::error::Error;
use crate::experiments::{
    bd_alpha_random, bd_alpha_scan, bd_geometry_scan, higher_dim_scan, random_unitary_scatter,
    state_record, switch_record, violating_fraction, werner_eigen_scan, werner_violation_surface,
    Evaluation, ExperimentId, GridSpec, InitialInfo, ScanRecord, ScatterMode,
};
use crate::states::WernerParams;
use crate::switch::Branch;
use crate::unitaries::RngSeed;
use input::{StateArgs, UnitarySpec};
use output::{fmt_num, write_csv_file, RunManifest};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Numerical(Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn usage(e: Error) -> Self {
        CliError::Usage(e.to_string())
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::ParamOutOfRange { .. }
            | Error::InvalidProbs { .. }
            | Error::InvalidState { .. }
            | Error::InvalidGrid { .. }
            | Error::InvalidControl { .. } => CliError::Usage(e.to_string()),
            other => CliError::Numerical(other),
        }
    }
}

#[derive(Debug, Parser, Serialize)]
#[command(
    name = "abssep",
    version,
    about = "Quantum-switch action on absolutely separable states"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// CSV output path (default: <command>.csv).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// JSON manifest path (default: <out stem>.manifest.json).
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,

    /// Eigenvalues above this count towards the rank.
    #[arg(long, global = true, default_value_t = crate::linalg::RANK_TOL)]
    pub tol_rank: f64,

    /// |violation| at or below this is reported as the AS boundary.
    #[arg(long, global = true, default_value_t = crate::criteria::BOUNDARY_TOL)]
    pub tol_boundary: f64,
}

#[derive(Debug, Subcommand, Serialize)]
pub enum Command {
    /// Spectrum, AS verdict and PPT classification of one state.
    Classify {
        #[command(flatten)]
        state: StateArgs,
    },
    /// Switch one state through two unitaries and classify the result.
    Switch {
        #[command(flatten)]
        state: StateArgs,
        /// cnot | identity | utheta:<θ> | haar:<seed> | file:<path>
        #[arg(long, default_value = "cnot")]
        u1: UnitarySpec,
        #[arg(long, default_value = "utheta:0")]
        u2: UnitarySpec,
        /// plus | minus
        #[arg(long, default_value = "plus")]
        branch: Branch,
    },
    /// Final spectrum of switch(CNOT, U(θ)) on a modified Werner state over θ.
    WernerScan {
        #[arg(long, default_value_t = 0.15)]
        p: f64,
        #[arg(long, default_value_t = PI / 4.0)]
        gamma: f64,
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
        /// min:max:count
        #[arg(long, default_value_t = GridSpec::default_theta())]
        theta: GridSpec,
    },
    /// Violation of switch(CNOT, U(θ)) on modified Werner states over (p, θ).
    WernerSurface {
        #[arg(long, default_value_t = GridSpec::default_p())]
        p: GridSpec,
        #[arg(long, default_value_t = GridSpec::default_theta())]
        theta: GridSpec,
        #[arg(long, default_value_t = PI / 4.0)]
        gamma: f64,
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
    },
    /// Switch a state through Haar-random unitaries.
    RandomScatter {
        #[command(flatten)]
        state: StateArgs,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// cnot-plus-random | random-pair
        #[arg(long, default_value = "cnot-plus-random")]
        mode: ScatterMode,
    },
    /// Bell-diagonal AS points that survive switch(CNOT, U(θ)).
    BdGeometry {
        #[arg(long, default_value_t = PI / 6.0)]
        theta: f64,
        /// Grid points per correlation axis on [-1, 1].
        #[arg(long, default_value_t = 41)]
        resolution: usize,
    },
    /// One-parameter Bell-diagonal family: violation over an α grid, or with
    /// `--alpha` and `--samples`, switched with CNOT and Haar unitaries.
    BdAlpha {
        #[arg(long, default_value_t = GridSpec::default_alpha())]
        alpha_grid: GridSpec,
        #[arg(long, requires = "samples")]
        alpha: Option<f64>,
        #[arg(long, requires = "alpha")]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Maximally mixed 2⊗dB state switched through two Haar unitaries.
    HigherDim {
        #[arg(long, default_value_t = 3)]
        db: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify { .. } => "classify",
            Command::Switch { .. } => "switch",
            Command::WernerScan { .. } => "werner-scan",
            Command::WernerSurface { .. } => "werner-surface",
            Command::RandomScatter { .. } => "random-scatter",
            Command::BdGeometry { .. } => "bd-geometry",
            Command::BdAlpha { .. } => "bd-alpha",
            Command::HigherDim { .. } => "higher-dim",
        }
    }

    fn seed(&self) -> u64 {
        match self {
            Command::RandomScatter { seed, .. }
            | Command::BdAlpha { seed, .. }
            | Command::HigherDim { seed, .. } => *seed,
            _ => 0,
        }
    }
}

/// Records plus a human-readable summary.
struct Outcome {
    records: Vec<ScanRecord>,
    summary: Vec<String>,
}

fn execute(command: &Command, tol: &Tolerances) -> Result<Outcome, CliError> {
    let mut summary = Vec::new();
    let records = match command {
        Command::Classify { state } => {
            let (rho, params) = state.build()?;
            let rec = state_record(ExperimentId::Classify, 0, params, &rho, tol)?;
            let e = rec
                .evaluation
                .as_ref()
                .expect("state records are evaluated");
            summary.push(format!("dims: {}", rho.dims()));
            summary.extend(describe(e, rho.dims().d_b));
            vec![rec]
        }
        Command::Switch {
            state,
            u1,
            u2,
            branch,
        } => {
            let (rho, mut params) = state.build()?;
            let a = u1.build(rho.dim())?;
            let b = u2.build(rho.dim())?;
            params.theta = u2.theta().or(u1.theta());
            params.branch = Some(*branch);
            let initial = InitialInfo::from(&Evaluation::of(&rho, tol)?);
            let rec = switch_record(
                ExperimentId::Switch,
                0,
                params,
                &a,
                &b,
                &rho,
                Some(initial),
                *branch,
                tol,
            )?;
            summary.push(format!("initial as_lhs: {}", fmt_num(initial.as_lhs)));
            match &rec.evaluation {
                Some(e) => {
                    let prob = match branch {
                        Branch::Plus => rec.prob_plus.unwrap_or(f64::NAN),
                        Branch::Minus => 1.0 - rec.prob_plus.unwrap_or(f64::NAN),
                    };
                    summary.push(format!("branch: {branch} (probability {})", fmt_num(prob)));
                    summary.extend(describe(e, rho.dims().d_b));
                }
                None => {
                    return Err(CliError::Numerical(Error::ZeroProbabilityBranch {
                        probability: match branch {
                            Branch::Plus => rec.prob_plus.unwrap_or(0.0),
                            Branch::Minus => 1.0 - rec.prob_plus.unwrap_or(1.0),
                        },
                    }))
                }
            }
            vec![rec]
        }
        Command::WernerScan {
            p,
            gamma,
            phi,
            theta,
        } => {
            let params = WernerParams {
                p: *p,
                gamma: *gamma,
                phi: *phi,
            };
            werner_eigen_scan(params, theta, tol)?
        }
        Command::WernerSurface {
            p,
            theta,
            gamma,
            phi,
        } => werner_violation_surface(p, theta, *gamma, *phi, tol)?,
        Command::RandomScatter {
            state,
            samples,
            seed,
            mode,
        } => {
            let (rho, params) = state.build()?;
            let mut recs = random_unitary_scatter(&rho, *samples, RngSeed(*seed), *mode, tol)?;
            for r in &mut recs {
                r.params.p = params.p;
                r.params.gamma = params.gamma;
                r.params.phi = params.phi;
                r.params.alpha = params.alpha;
                r.params.c1 = params.c1;
                r.params.c2 = params.c2;
                r.params.c3 = params.c3;
            }
            recs
        }
        Command::BdGeometry { theta, resolution } => {
            let g = bd_geometry_scan(*theta, *resolution, tol)?;
            summary.push(format!("valid grid points: {}", g.records.len()));
            summary.push(format!("invalid grid points skipped: {}", g.invalid_points));
            summary.push(format!("initially AS: {}", g.initial_as_count()));
            summary.push(format!("AS after switch: {}", g.surviving_as_count()));
            g.records
        }
        Command::BdAlpha {
            alpha_grid,
            alpha,
            samples,
            seed,
        } => match (alpha, samples) {
            (Some(a), Some(n)) => bd_alpha_random(*a, *n, RngSeed(*seed), tol)?,
            _ => bd_alpha_scan(alpha_grid, tol)?,
        },
        Command::HigherDim { db, samples, seed } => {
            higher_dim_scan(*db, *samples, RngSeed(*seed), tol)?
        }
    };
    if records.len() > 1 {
        summary.push(format!("records: {}", records.len()));
        summary.push(format!(
            "skipped: {}",
            records.iter().filter(|r| r.skipped).count()
        ));
        summary.push(format!(
            "violating fraction: {}",
            fmt_num(violating_fraction(&records))
        ));
    }
    Ok(Outcome { records, summary })
}

fn describe(e: &Evaluation, d_b: usize) -> Vec<String> {
    let eigs: Vec<String> = e.eigenvalues.iter().map(|&x| fmt_num(x)).collect();
    vec![
        format!("eigenvalues: {}", eigs.join(" ")),
        format!("as_lhs: {}", fmt_num(e.as_lhs)),
        format!("verdict: {}", e.verdict),
        format!("min_pt_eig: {}", fmt_num(e.min_pt_eigenvalue)),
        format!("classification: {}", e.classification.label(d_b)),
        format!("rank: {}", e.rank),
    ]
}

fn default_manifest_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("run");
    out.with_file_name(format!("{stem}.manifest.json"))
}

/// Parses `args` (including the program name), runs the command and writes
/// outputs. Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(stdout, "{text}")
            } else {
                write!(stderr, "{text}")
            };
            return code;
        }
    };
    let argv: Vec<String> = argv
        .iter()
        .map(|s| s.to_string_lossy().into_owned())
        .collect();
    match run_parsed(&cli, argv, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn run_parsed(cli: &Cli, argv: Vec<String>, stdout: &mut dyn Write) -> Result<(), CliError> {
    if !(cli.tol_rank > 0.0) || !(cli.tol_boundary >= 0.0) {
        return Err(CliError::Usage(
            "--tol-rank must be positive and --tol-boundary non-negative".into(),
        ));
    }
    let tol = Tolerances {
        rank: cli.tol_rank,
        boundary: cli.tol_boundary,
    };
    let name = cli.command.name();
    let outcome = execute(&cli.command, &tol)?;

    let out = cli
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{name}.csv")));
    let manifest_path = cli
        .manifest
        .clone()
        .unwrap_or_else(|| default_manifest_path(&out));
    write_csv_file(&out, &outcome.records)?;
    let parameters =
        serde_json::to_value(&cli.command).map_err(|e| std::io::Error::other(e.to_string()))?;
    let manifest = RunManifest::new(
        name,
        parameters,
        cli.command.seed(),
        argv,
        tol,
        &out,
        &outcome.records,
    );
    manifest.write(&manifest_path)?;

    for line in &outcome.summary {
        writeln!(stdout, "{line}")?;
    }
    writeln!(stdout, "csv: {}", out.display())?;
    writeln!(stdout, "manifest: {}", manifest_path.display())?;
    Ok(())
}
