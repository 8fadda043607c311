//! Command line front end: loads a scene, runs one computation, and prints
//! `key,value` lines or CSV tables.
//!
//! Floats are always printed in Rust's shortest round-trip form, so equal
//! results give byte-identical output.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
pub mod scene;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use topokin_core::kinematics::{MeasureMode, NetOptions};
use topokin_core::measure::MeasureOptions;

pub use scene::{load_scene, parse_scene, Scene, SceneError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Scene(#[from] SceneError),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    NonConvergence(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::NonConvergence(_) => EXIT_NONCONVERGENCE,
            CliError::Usage(_) | CliError::Scene(_) | CliError::Io(_) => EXIT_USAGE,
        }
    }
}

impl From<topokin_core::Error> for CliError {
    fn from(e: topokin_core::Error) -> Self {
        match e {
            topokin_core::Error::QuadratureNonConvergence { .. } => CliError::NonConvergence(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "topokin", version, about = "Measure-based kinematics of curves on surfaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check surface containment and smoothness of the trajectory.
    Validate {
        #[command(flatten)]
        common: Common,
    },
    /// Traversal length, image measure, or quadrature length.
    Arclength {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Quantity::Traversal)]
        quantity: Quantity,
    },
    /// Image measure over the length of the time domain.
    Avgspeed {
        #[command(flatten)]
        common: Common,
    },
    /// Instantaneous speed at one time.
    Speed {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        point: Point,
    },
    /// Magnitude of the acceleration at one time.
    Accel {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        point: Point,
    },
    /// Newton force `m·ζ″` at one time.
    Force {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_negative_numbers = true)]
        at: f64,
    },
    /// Instantaneous speed at equally spaced times, as CSV.
    Profile {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Worker threads; 0 uses all available cores.
        #[arg(long, default_value_t = 0)]
        jobs: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Quantity {
    Traversal,
    Image,
    Quadrature,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Set,
    Traversal,
}

impl From<Mode> for MeasureMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Set => MeasureMode::Set,
            Mode::Traversal => MeasureMode::Traversal,
        }
    }
}

#[derive(Debug, Args)]
struct Common {
    /// Scene file.
    scene: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Set)]
    measure: Mode,
    #[arg(long)]
    eps0: Option<f64>,
    #[arg(long, default_value_t = 0.5)]
    ratio: f64,
    #[arg(long, default_value_t = 30)]
    max_rungs: usize,
    #[arg(long, default_value_t = 1e-4)]
    conv_tol: f64,
    #[arg(long, default_value_t = 1e-8)]
    rel_tol: f64,
    #[arg(long)]
    skip_validate: bool,
    /// Surface containment tolerance.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
}

#[derive(Debug, Args)]
struct Point {
    #[arg(long, allow_negative_numbers = true)]
    at: f64,
    /// Also print the ladder of ball radii and speeds.
    #[arg(long)]
    rungs: bool,
}

impl Common {
    fn measure_options(&self) -> Result<MeasureOptions, CliError> {
        let opts = MeasureOptions {
            rel_tol: self.rel_tol,
            ..MeasureOptions::default()
        };
        opts.validate()?;
        Ok(opts)
    }

    fn net_options(&self) -> Result<NetOptions, CliError> {
        let net = NetOptions {
            eps0: self.eps0,
            ratio: self.ratio,
            max_rungs: self.max_rungs,
            conv_tol: self.conv_tol,
            ..NetOptions::default()
        };
        net.validate()?;
        Ok(net)
    }

    fn validation_tol(&self) -> Result<f64, CliError> {
        if self.tol.is_finite() && self.tol > 0.0 {
            Ok(self.tol)
        } else {
            Err(CliError::Usage(format!("--tol must be positive (got {})", self.tol)))
        }
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// code. Results go to `out`, diagnostics to `err` as a single line.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let rendered = e.to_string();
            let line = rendered
                .lines()
                .map(str::trim)
                .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more information"))
                .filter(|l| !l.is_empty())
                .collect::<Vec<_>>()
                .join(" ");
            let _ = writeln!(err, "{line}");
            return EXIT_USAGE;
        }
    };
    match commands::dispatch(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            let _ = writeln!(err, "error: {msg}");
            e.exit_code()
        }
    }
}
