use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Compute Willmore energies, conservation-law residues and their
/// verification suite on catalogue surfaces.
#[derive(Parser, Debug, Clone)]
#[command(name = "wrl", version)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,

    /// Worker threads for the numerical kernels. Results do not depend on it.
    #[arg(long, global = true, env = "WRL_THREADS")]
    pub threads: Option<usize>,

    /// Report format (default: csv for `sweep`, json otherwise).
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Willmore energy and area, with a half-resolution error estimate.
    Energy(SurfaceArgs),
    /// Residues c, c0, c1 on one coordinate circle.
    Residues {
        #[command(flatten)]
        surface: SurfaceArgs,
        /// Contour radius (default: middle of the chart).
        #[arg(long)]
        radius: Option<f64>,
        /// Also integrate the potentials L, S, R and check their identities.
        #[arg(long)]
        potentials: bool,
    },
    /// Residues on several circles and their spread.
    Sweep {
        #[command(flatten)]
        surface: SurfaceArgs,
        #[arg(long, value_delimiter = ',', required = true, num_args = 1..)]
        radii: Vec<f64>,
    },
    /// Run the invariant suite.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Exit with status 3 when a check fails.
        #[arg(long)]
        strict: bool,
    },
    /// Integrate an elastica and its horizontal Hopf lift.
    Elastica(ElasticaArgs),
    /// Lorentz norms of a step function, or the inverse-radius tables.
    Lorentz(LorentzArgs),
    /// Metric and curvature of the hyperbolic collar of a short geodesic.
    Collar(CollarArgs),
}

#[derive(Args, Debug, Clone)]
pub struct SurfaceArgs {
    /// Surface spec or sampled grid, as a JSON file or an inline JSON object.
    #[arg(long)]
    pub surface: String,
    /// Override the spec resolution: `NU` or `NUxNV`.
    #[arg(long)]
    pub resolution: Option<Resolution>,
}

#[derive(Args, Debug, Clone)]
pub struct ElasticaArgs {
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub k0: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub dk0: f64,
    #[arg(long, default_value_t = std::f64::consts::PI)]
    pub length: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub ds: f64,
}

#[derive(Args, Debug, Clone)]
pub struct LorentzArgs {
    #[arg(long, default_value_t = 2.0)]
    pub p: f64,
    /// Second index; `inf` gives the weak norm.
    #[arg(long, default_value_t = 1.0)]
    pub q: f64,
    /// `{"values": [...], "weights": [...]}` as a file or inline JSON.
    #[arg(long)]
    pub sample: Option<String>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.01, 0.001])]
    pub radii: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_values_t = [128usize, 256, 512])]
    pub resolutions: Vec<usize>,
}

#[derive(Args, Debug, Clone)]
pub struct CollarArgs {
    /// Length of the closed geodesic.
    #[arg(long)]
    pub l: f64,
    /// Interior nodes for the curvature check.
    #[arg(long, default_value_t = 801)]
    pub n: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Algebra,
    Energy,
    Residues,
    Hopf,
    Elastica,
    Lorentz,
    Collar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resolution(pub [usize; 2]);

impl FromStr for Resolution {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |x: &str| {
            x.trim()
                .parse::<usize>()
                .map_err(|e| format!("bad resolution '{s}': {e}"))
        };
        match s.split_once(['x', 'X', ',']) {
            Some((a, b)) => Ok(Resolution([parse(a)?, parse(b)?])),
            None => {
                let n = parse(s)?;
                Ok(Resolution([n, n]))
            }
        }
    }
}
