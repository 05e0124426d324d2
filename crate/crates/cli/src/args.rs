use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use soliton_core::Point;

#[derive(Debug, Parser)]
#[command(name = "soliton", version, about = "Jenkins-Serrin translating soliton graphs: geodesics, existence checks, capped solves")]
pub struct Cli {
    /// Worker threads for assembly and post-processing. Runs are
    /// bit-reproducible only with 1.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
    pub threads: u16,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Shoot or connect f-geodesics; writes an x,t CSV.
    #[command(subcommand)]
    Geodesic(GeodesicCmd),
    /// f-length of a curve file, or of every edge of a configured domain.
    Flength(FlengthArgs),
    /// Validate the domain and check the structural existence conditions.
    Check(ConfigArgs),
    /// Run the capped solve and write fields, flux and divergence reports.
    Solve(SolveArgs),
    /// Run the capped solve and print flux reports (and an optional curve flux).
    Flux(FluxArgs),
    /// Print a ready-made experiment config, or list them.
    Example(ExampleArgs),
}

#[derive(Debug, Args)]
pub struct MetricArgs {
    /// Metric model: r3 or h2xr.
    #[arg(long)]
    pub metric: String,
    /// Translation speed c.
    #[arg(long, allow_hyphen_values = true)]
    pub c: f64,
}

#[derive(Debug, Subcommand)]
pub enum GeodesicCmd {
    /// Integrate the f-geodesic from a point with a given initial angle.
    Shoot {
        #[command(flatten)]
        metric: MetricArgs,
        /// Start point "x,t".
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        from: Point,
        /// Initial tangent angle in radians.
        #[arg(long, allow_hyphen_values = true)]
        angle: f64,
        /// Maximal flat arclength.
        #[arg(long)]
        len: f64,
        /// Flat distance between output samples.
        #[arg(long)]
        spacing: Option<f64>,
        /// Integrator tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve the two-point problem by angle scan and bisection.
    Connect {
        #[command(flatten)]
        metric: MetricArgs,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        from: Point,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        to: Point,
        /// Scanned angle window "lo,hi" in radians.
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        window: Option<(f64, f64)>,
        /// Scan step in degrees.
        #[arg(long)]
        scan_step: Option<f64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct FlengthArgs {
    /// Experiment config; prints the f-length of each domain edge.
    #[arg(long, conflicts_with_all = ["metric", "c", "curve"])]
    pub config: Option<PathBuf>,
    #[arg(long, requires_all = ["c", "curve"])]
    pub metric: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    /// Two-column x,t CSV.
    #[arg(long)]
    pub curve: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    pub config: PathBuf,
}

#[derive(Debug, Args, Clone)]
pub struct Overrides {
    /// Cap levels, overriding the config, e.g. "2,4,8,16".
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub caps: Option<Vec<f64>>,
    /// Target mesh size, overriding the config.
    #[arg(long)]
    pub h: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub config: PathBuf,
    #[command(flatten)]
    pub overrides: Overrides,
    /// Output directory, overriding the config.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

#[derive(Debug, Args)]
pub struct FluxArgs {
    pub config: PathBuf,
    #[command(flatten)]
    pub overrides: Overrides,
    /// Additional path (x,t CSV) to integrate the flux across.
    #[arg(long)]
    pub curve: Option<PathBuf>,
    /// Side of the path the conormal points to.
    #[arg(long, value_enum, default_value = "right")]
    pub side: SideArg,
}

#[derive(Debug, Args)]
pub struct ExampleArgs {
    pub name: Option<String>,
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected \"a,b\", got \"{s}\""))?;
    let a: f64 = a.trim().parse().map_err(|e| format!("{a}: {e}"))?;
    let b: f64 = b.trim().parse().map_err(|e| format!("{b}: {e}"))?;
    if a.is_finite() && b.is_finite() {
        Ok((a, b))
    } else {
        Err("values must be finite".into())
    }
}

fn parse_point(s: &str) -> Result<Point, String> {
    parse_pair(s).map(|(x, t)| Point::new(x, t))
}
