//! `chirp-af` command-line front end.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use chirp_af::{Axis, NodePlacement, Position};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "chirp-af", version, about = "Near-field ambiguity functions, spatial-chirp spectra and aliasing loci")]
pub struct Cli {
    /// Scenario description (JSON).
    #[arg(long, global = true)]
    pub scenario: Option<PathBuf>,
    /// Output prefix; files are written as `<prefix>.<ext>`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (0 = all cores). CHIRP_AF_THREADS takes precedence.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Antenna placement, overriding the scenario file.
    #[arg(long, global = true, value_parser = parse_placement)]
    pub placement: Option<NodePlacement>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    F32,
    Both,
}

impl Format {
    pub fn csv(self) -> bool {
        self != Self::F32
    }

    pub fn f32(self) -> bool {
        self != Self::Csv
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the AF over a Cartesian or polar lattice of tentative positions.
    AfGrid(AfGridArgs),
    /// Spatial spectrum G(k_tau) of the pair-product signal.
    Spectrum(SpectrumArgs),
    /// Chirp, measured and closed-form band limits for one tentative position.
    Bandlimit(BandlimitArgs),
    /// Predicted alias fronts as polylines.
    AliasLocus(AliasLocusArgs),
    /// Circular-array closed forms and the Bessel-series AF along a ray.
    CaAnalyze(CaAnalyzeArgs),
    /// ULA Fresnel closed forms for one tentative position.
    UlaAnalyze(UlaAnalyzeArgs),
    /// Run the acceptance criteria and report pass/fail per criterion.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AxesKind {
    Cartesian,
    Polar,
}

#[derive(Debug, Args, Serialize)]
pub struct AfGridArgs {
    #[arg(long, value_enum, default_value_t = AxesKind::Cartesian)]
    pub axes: AxesKind,
    /// Cartesian x axis `min:max:count`.
    #[arg(long, value_parser = parse_axis, allow_hyphen_values = true)]
    pub x: Option<Axis>,
    /// Cartesian y axis `min:max:count`.
    #[arg(long, value_parser = parse_axis, allow_hyphen_values = true)]
    pub y: Option<Axis>,
    /// Polar radius axis `min:max:count`.
    #[arg(long, value_parser = parse_axis, allow_hyphen_values = true)]
    pub radius: Option<Axis>,
    /// Polar angle axis `min:max:count` (rad).
    #[arg(long, value_parser = parse_axis, allow_hyphen_values = true)]
    pub angle: Option<Axis>,
    /// Polar centre `x,y`; defaults to the source.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub center: Option<Position>,
    /// Discrete array with N antennas (defaults to the scenario's N).
    #[arg(long, conflicts_with = "continuous")]
    pub discrete: Option<usize>,
    /// Continuous aperture.
    #[arg(long)]
    pub continuous: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct SpectrumArgs {
    /// Tentative position `x,y`.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub tentative: Position,
    /// Half-width of the k_tau axis; widened automatically when omitted.
    #[arg(long)]
    pub k_max: Option<f64>,
    /// Number of k_tau bins (odd).
    #[arg(long, default_value_t = 1025)]
    pub bins: usize,
    #[arg(long, default_value_t = chirp_af::spectrum::DEFAULT_EPS_REL)]
    pub eps: f64,
    /// Antenna count for the aliasing verdict (defaults to the scenario's N).
    #[arg(long)]
    pub discrete: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct BandlimitArgs {
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub tentative: Position,
    #[arg(long, default_value_t = chirp_af::spectrum::DEFAULT_EPS_REL)]
    pub eps: f64,
    #[arg(long, default_value_t = 1025)]
    pub bins: usize,
    #[arg(long, default_value_t = chirp_af::spectrum::DEFAULT_SEARCH_POINTS)]
    pub search_points: usize,
    /// Skip the numerical spectrum.
    #[arg(long)]
    pub no_measured: bool,
    #[arg(long)]
    pub discrete: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct AliasLocusArgs {
    /// Directions per polyline.
    #[arg(long, default_value_t = 360)]
    pub angles: usize,
    /// Largest separation from the source to trace.
    #[arg(long)]
    pub window: Option<f64>,
    /// Radial scan steps per direction (ULA).
    #[arg(long, default_value_t = 4000)]
    pub steps: usize,
    #[arg(long)]
    pub discrete: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct CaAnalyzeArgs {
    /// Ray direction theta_ss~ (rad).
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta: f64,
    /// Largest separation sampled along the ray.
    #[arg(long)]
    pub window: Option<f64>,
    #[arg(long, default_value_t = 201)]
    pub samples: usize,
    /// Separation at which K_ca is reported (defaults to the window).
    #[arg(long)]
    pub radius: Option<f64>,
    /// Far-source guard eta.
    #[arg(long, default_value_t = chirp_af::circular::DEFAULT_GUARD)]
    pub guard: f64,
    #[arg(long)]
    pub discrete: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct UlaAnalyzeArgs {
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
    pub tentative: Position,
    #[arg(long)]
    pub discrete: Option<usize>,
    /// Fresnel guard gamma.
    #[arg(long, default_value_t = chirp_af::ula::DEFAULT_FRESNEL_GUARD)]
    pub guard: f64,
}

#[derive(Debug, Args, Serialize)]
pub struct ValidateArgs {
    /// Coarser scans and fewer random draws.
    #[arg(long)]
    pub quick: bool,
    /// Run only these criteria (repeatable).
    #[arg(long = "criterion")]
    pub criteria: Vec<u8>,
}

fn parse_placement(s: &str) -> Result<NodePlacement, String> {
    s.parse().map_err(|e: chirp_af::Error| e.to_string())
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

fn parse_point(s: &str) -> Result<Position, String> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [x, y] => Ok(Position::new(parse_f64(x)?, parse_f64(y)?)),
        _ => Err(format!("expected 'x,y', got '{s}'")),
    }
}

fn parse_axis(s: &str) -> Result<Axis, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [min, max, count] => {
            let count = count
                .trim()
                .parse()
                .map_err(|_| format!("axis count '{count}' is not a non-negative integer"))?;
            Axis::new(parse_f64(min)?, parse_f64(max)?, count).map_err(|e| e.to_string())
        }
        _ => Err(format!("expected 'min:max:count', got '{s}'")),
    }
}

/// Exit status classes.
#[derive(Debug)]
pub enum Failure {
    /// Bad scenario or arguments: exit 2.
    Input(String),
    /// Numerical failure: exit 3.
    Numeric(String),
    /// Some acceptance criterion failed: exit 1.
    Rejected,
    Other(anyhow::Error),
}

impl From<chirp_af::Error> for Failure {
    fn from(e: chirp_af::Error) -> Self {
        use chirp_af::Error as E;
        match e {
            E::Range(_) | E::Convergence { .. } => Self::Numeric(e.to_string()),
            E::Domain { .. } | E::Singularity { .. } | E::ApproximationDomain(_) | E::InvalidInput(_) => {
                Self::Input(e.to_string())
            }
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Self::Other(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Self::Other(e.into())
    }
}

fn configure_threads(flag: Option<usize>) -> Result<(), Failure> {
    let threads = match std::env::var("CHIRP_AF_THREADS") {
        Ok(v) => Some(
            v.trim()
                .parse::<usize>()
                .map_err(|_| Failure::Input(format!("CHIRP_AF_THREADS='{v}' is not a thread count")))?,
        ),
        Err(_) => flag,
    };
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Other(e.into()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads(cli.threads).and_then(|()| commands::run(&cli));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numeric(msg)) => {
            eprintln!("numeric failure: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Rejected) => ExitCode::from(1),
        Err(Failure::Other(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_points_and_axes() {
        assert_eq!(parse_point("1.5,-2").unwrap(), Position::new(1.5, -2.0));
        assert!(parse_point("1").is_err());
        assert!(parse_point("nan,0").is_err());
        let a = parse_axis("-10:10:21").unwrap();
        assert_eq!((a.min, a.max, a.count), (-10.0, 10.0, 21));
        assert!(parse_axis("1:0:5").is_err());
        assert!(parse_axis("0:1").is_err());
    }

    #[test]
    fn argument_definitions_are_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn library_errors_map_to_exit_classes() {
        assert!(matches!(Failure::from(chirp_af::Error::Range("x".into())), Failure::Numeric(_)));
        assert!(matches!(Failure::from(chirp_af::Error::InvalidInput("x".into())), Failure::Input(_)));
    }
}
