//! Command-line flags and their per-command resolution into a [`RunConfig`].

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use cocycle_lab::lyapunov::{golden_alpha, MIN_ITERATIONS};
use cocycle_lab::quadrature::MIN_NODES;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Single-matrix rotation average against log((s + 1/s) / 2).
    VerifyProp3,
    /// Word rotation average against the sums of log_avg_norm and J_k.
    VerifyTheorem3,
    /// Involution identities and the change of variables.
    VerifyInvolution,
    /// Lyapunov exponent along a rotation orbit.
    Lyap,
    /// Rotation-family average against the Herman integral.
    Family,
    /// Branch table and elliptic-set measure.
    Regions,
    /// Preimage sums of the Haar-preserving map.
    HaarCheck,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "cocycle-lab",
    version,
    about = "Numerical checks for rotation families of SL(2,R) cocycles"
)]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,

    /// Word file: {"word": [[a, b, c, d], ...]}. Random seeded input when absent.
    #[arg(long = "word", value_name = "PATH")]
    pub word_path: Option<PathBuf>,

    /// Quadrature nodes (theta nodes for `family`, p nodes for `regions`).
    #[arg(long)]
    pub nodes: Option<usize>,

    /// Orbit length for `lyap` and `family`.
    #[arg(long)]
    pub iterations: Option<usize>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Herman example parameter: A(x) = R_x diag(c, 1/c).
    #[arg(long, default_value_t = 2.0)]
    pub c: f64,

    /// Base rotation angle in radians, or `golden`.
    #[arg(long, default_value = "golden", value_parser = parse_alpha)]
    pub alpha: f64,

    /// Number of random samples (matrices, triples, table bins).
    #[arg(long)]
    pub count: Option<usize>,

    /// Length of the random word when no word file is given.
    #[arg(long)]
    pub length: Option<usize>,

    /// Write the report here instead of stdout.
    #[arg(long = "out", value_name = "PATH")]
    pub out_path: Option<PathBuf>,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

fn parse_alpha(s: &str) -> Result<f64, String> {
    if s.eq_ignore_ascii_case("golden") {
        return Ok(golden_alpha());
    }
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(format!("expected a finite number or `golden`, got `{s}`")),
    }
}

/// Fully resolved inputs, echoed into every report.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: Command,
    pub word_path: Option<PathBuf>,
    pub nodes: usize,
    pub iterations: usize,
    pub seed: u64,
    pub c: f64,
    pub alpha: f64,
    pub count: usize,
    pub length: usize,
    pub format: Format,
    #[serde(skip)]
    pub out_path: Option<PathBuf>,
}

pub const REGIONS_MIN_NODES: usize = 64;

impl RunConfig {
    /// Applies per-command defaults and validates before any computation.
    pub fn resolve(cli: Cli) -> Result<RunConfig, String> {
        use Command::*;
        let (nodes, iterations, count, length) = match cli.command {
            VerifyProp3 => (1 << 16, 0, 100, 1),
            VerifyTheorem3 => (1 << 16, 0, 1, 3),
            VerifyInvolution => (1 << 16, 0, 200, 1),
            Lyap => (0, 1_000_000, 1, 1),
            Family => (64, 100_000, 4, 4),
            Regions => (256, 0, 1, 2),
            HaarCheck => (0, 0, 50, 4),
        };
        let cfg = RunConfig {
            command: cli.command,
            word_path: cli.word_path,
            nodes: cli.nodes.unwrap_or(nodes),
            iterations: cli.iterations.unwrap_or(iterations),
            seed: cli.seed,
            c: cli.c,
            alpha: cli.alpha,
            count: cli.count.unwrap_or(count),
            length: cli.length.unwrap_or(length),
            format: cli.format,
            out_path: cli.out_path,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<(), String> {
        use Command::*;
        let quadrature = matches!(
            self.command,
            VerifyProp3 | VerifyTheorem3 | VerifyInvolution | Family
        );
        if quadrature && (self.nodes < MIN_NODES || !self.nodes.is_multiple_of(2)) {
            return Err(format!(
                "--nodes must be even and at least {MIN_NODES}, got {}",
                self.nodes
            ));
        }
        if self.command == Regions && self.nodes < REGIONS_MIN_NODES {
            return Err(format!(
                "--nodes must be at least {REGIONS_MIN_NODES} for regions, got {}",
                self.nodes
            ));
        }
        if matches!(self.command, Lyap | Family) && self.iterations < MIN_ITERATIONS {
            return Err(format!(
                "--iterations must be at least {MIN_ITERATIONS}, got {}",
                self.iterations
            ));
        }
        if self.command == Lyap
            && self.word_path.is_none()
            && !(self.c.is_finite() && self.c != 0.0)
        {
            return Err(format!("--c must be finite and nonzero, got {}", self.c));
        }
        if self.count == 0 || self.length == 0 {
            return Err("--count and --length must be positive".into());
        }
        if let Some(path) = &self.word_path {
            if !path.is_file() {
                return Err(format!("word file {} does not exist", path.display()));
            }
        }
        Ok(())
    }
}
