use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};

/// Environment variable naming the directory for reports when `--out` is absent.
pub const REPORT_DIR_ENV: &str = "BERGMAN_BLOCH_REPORT_DIR";

#[derive(Debug, Clone, Parser, Serialize)]
#[command(
    name = "bergman-bloch",
    version,
    about = "Verification campaigns for Bloch-type densities on the unit ball"
)]
pub struct CampaignConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Complex dimension.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Master seed; workers use counter-mode substreams of it.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Relative slack for the estimated prenorm.
    #[arg(long, default_value_t = 1e-6)]
    pub sup_tol: f64,
    /// Tolerance on the asserted inequality.
    #[arg(long, default_value_t = 1e-9)]
    pub assert_tol: f64,
    /// Quasi-random samples per prenorm estimate.
    #[arg(long, default_value_t = 4096)]
    pub prenorm_samples: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Output {
    /// JSON report path (default: `<command>.json` in `$BERGMAN_BLOCH_REPORT_DIR` or the working directory).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CSV file of per-sample rows.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Print the full JSON report on stdout.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
pub enum Command {
    /// Curve length along automorphism geodesics against the closed-form distance.
    Geometry {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 100)]
        pairs: usize,
        /// Pairs also minimized over spline curves.
        #[arg(long, default_value_t = 0)]
        variational: usize,
        /// Absolute quadrature tolerance.
        #[arg(long, default_value_t = 1e-10)]
        quad_tol: f64,
        /// Allowed relative deviation of the geodesic length.
        #[arg(long, default_value_t = 1e-8)]
        metric_tol: f64,
        /// Allowed relative excess of the minimized length.
        #[arg(long, default_value_t = 1e-4)]
        variational_tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Lipschitz bound on a normalized battery.
    Thm1 {
        #[command(flatten)]
        common: Common,
        /// `random:<count>:deg<k>` or a map file.
        #[arg(long, default_value = "random:10:deg3")]
        battery: String,
        #[arg(long, default_value_t = 10_000)]
        pairs: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Ratio reached by the extremal maps.
    Sharpness {
        #[command(flatten)]
        common: Common,
        /// One or more values, comma separated.
        #[arg(long, value_delimiter = ',', default_value = "0.1")]
        eps: Vec<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// Disk estimates for the density gradient and `f″`.
    Thm2 {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "random:10:deg4")]
        battery: String,
        #[arg(long, default_value_t = 2500)]
        grid: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Distortion bounds for `det f′`.
    #[command(name = "thmD")]
    ThmD {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[arg(long, value_delimiter = ',', default_value = "0.25,0.5,0.75,1")]
        lambdas: Vec<f64>,
        /// Optional battery; without it only the extremal maps are checked.
        #[arg(long)]
        battery: Option<String>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Lower bound for a composition operator.
    Thm3 {
        #[command(flatten)]
        common: Common,
        /// Symbol: a map file, or the map in text form.
        #[arg(long)]
        phi: String,
        #[arg(long, default_value_t = 0.1)]
        r: f64,
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
        #[arg(long, default_value = "random:10:deg3")]
        battery: String,
        #[arg(long, default_value_t = 400)]
        wgrid: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Sharp constant, profile maximizer and related numbers.
    Constants {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1.0)]
        alpha: f64,
        #[command(flatten)]
        output: Output,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Geometry { .. } => "geometry",
            Command::Thm1 { .. } => "thm1",
            Command::Sharpness { .. } => "sharpness",
            Command::Thm2 { .. } => "thm2",
            Command::ThmD { .. } => "thmD",
            Command::Thm3 { .. } => "thm3",
            Command::Constants { .. } => "constants",
        }
    }

    pub fn common(&self) -> &Common {
        match self {
            Command::Geometry { common, .. }
            | Command::Thm1 { common, .. }
            | Command::Sharpness { common, .. }
            | Command::Thm2 { common, .. }
            | Command::ThmD { common, .. }
            | Command::Thm3 { common, .. }
            | Command::Constants { common, .. } => common,
        }
    }

    pub fn output(&self) -> &Output {
        match self {
            Command::Geometry { output, .. }
            | Command::Thm1 { output, .. }
            | Command::Sharpness { output, .. }
            | Command::Thm2 { output, .. }
            | Command::ThmD { output, .. }
            | Command::Thm3 { output, .. }
            | Command::Constants { output, .. } => output,
        }
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, format!("must be positive, got {v}")))
    }
}

fn count(name: &'static str, v: usize) -> Result<()> {
    if v > 0 {
        Ok(())
    } else {
        Err(Error::param(name, "must be positive"))
    }
}

impl CampaignConfig {
    /// Counts and tolerances positive, dimensions at least one.
    pub fn validate(&self) -> Result<()> {
        let c = self.command.common();
        count("n", c.n)?;
        count("prenorm-samples", c.prenorm_samples)?;
        positive("sup-tol", c.sup_tol)?;
        positive("assert-tol", c.assert_tol)?;
        match &self.command {
            Command::Geometry {
                pairs,
                quad_tol,
                metric_tol,
                variational_tol,
                ..
            } => {
                count("pairs", *pairs)?;
                positive("quad-tol", *quad_tol)?;
                positive("metric-tol", *metric_tol)?;
                positive("variational-tol", *variational_tol)
            }
            Command::Thm1 { pairs, .. } => count("pairs", *pairs),
            Command::Sharpness { eps, .. } => {
                count("eps", eps.len())?;
                eps.iter().try_for_each(|&e| positive("eps", e))
            }
            Command::Thm2 { grid, .. } => {
                if c.n != 1 {
                    return Err(Error::param("n", "the disk estimates need n = 1"));
                }
                count("grid", *grid)
            }
            Command::ThmD { alpha, samples, .. } => {
                positive("alpha", *alpha)?;
                count("samples", *samples)
            }
            Command::Thm3 { r, eps, wgrid, .. } => {
                positive("r", *r)?;
                positive("eps", *eps)?;
                count("wgrid", *wgrid)
            }
            Command::Constants { alpha, .. } => positive("alpha", *alpha),
        }
    }
}
