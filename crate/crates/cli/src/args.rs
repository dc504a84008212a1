use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hypgas_core::manifolds::GapPolicy;
use hypgas_core::{Dimension, SolverOptions};

#[derive(Debug, Parser)]
#[command(name = "hypgas", version, about = "Scattering lengths, energy bounds and condensation certificates on hyperbolic manifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Scattering length, flux constant, energy and profile of a potential
    Scatter(ScatterArgs),
    /// Diluteness, energy upper bounds and condensate fraction for a gas density
    Bound(BoundArgs),
    /// Condensation certificate for N particles on a manifold model
    Certify(CertifyArgs),
    /// Grid of bound evaluations over one or two parameters
    Sweep(SweepArgs),
    /// Run the independent oracles and inequality checks
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write the report here instead of stdout
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Local error tolerance of the radial integrator
    #[arg(long, default_value_t = SolverOptions::default().tol)]
    pub tol: f64,
    /// Uniform cells of the radial output grid
    #[arg(long, default_value_t = SolverOptions::default().cells)]
    pub cells: usize,
}

impl SolverArgs {
    pub fn options(&self) -> SolverOptions {
        SolverOptions {
            tol: self.tol,
            cells: self.cells,
            ..SolverOptions::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct PotentialArgs {
    /// Potential file: {"kind": "hardcore"|"piecewise"|"sampled", "r0": ..., "pieces": [[r, v], ...]}
    #[arg(long, value_name = "FILE")]
    pub potential: PathBuf,
    #[arg(long, default_value_t = 1.0)]
    pub mu: f64,
}

fn parse_dimension(s: &str) -> Result<Dimension, String> {
    let d: u32 = s.parse().map_err(|_| format!("`{s}` is not an integer"))?;
    Dimension::new(d).map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
pub struct ScatterArgs {
    #[command(flatten)]
    pub potential: PotentialArgs,
    #[arg(long = "d", value_parser = parse_dimension)]
    pub d: Dimension,
    /// Radius of the minimizer; defaults to max(R0, a + 1)
    #[arg(long = "R")]
    pub radius: Option<f64>,
    /// Number of uniformly spaced profile samples in the report
    #[arg(long, default_value_t = 101)]
    pub profile_points: usize,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub potential: PotentialArgs,
    #[arg(long = "d", value_parser = parse_dimension)]
    pub d: Dimension,
    /// Particle density N / vol
    #[arg(long)]
    pub rho: f64,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    /// Spectral gap; defaults to 975/4096 in d = 2 and 3/4 in d = 3
    #[arg(long)]
    pub gap: Option<f64>,
    /// Radius of the minimizer; defaults to max(R0, a + 1)
    #[arg(long = "R")]
    pub radius: Option<f64>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    /// Principal congruence quotient of the modular surface (needs --L)
    Modular,
    /// Congruence quotient of H^3 (needs --L, --index, --vol-x1)
    Congruence3,
    /// Random compact surface (needs --g, --alpha)
    Random,
    /// Any manifold given by dimension, volume and gap (needs --d, --volume, --gap)
    Custom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    KimSarnak,
    #[value(name = "selberg_3_16", alias = "selberg-3-16")]
    Selberg316,
    Dim3Standard,
    #[value(name = "random_3_16_minus_alpha", alias = "random-3-16-minus-alpha")]
    Random316MinusAlpha,
    Mirzakhani,
    Custom,
}

impl From<PolicyArg> for GapPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::KimSarnak => GapPolicy::KimSarnak,
            PolicyArg::Selberg316 => GapPolicy::Selberg316,
            PolicyArg::Dim3Standard => GapPolicy::Dim3Standard,
            PolicyArg::Random316MinusAlpha => GapPolicy::Random316MinusAlpha,
            PolicyArg::Mirzakhani => GapPolicy::Mirzakhani,
            PolicyArg::Custom => GapPolicy::Custom,
        }
    }
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub potential: PotentialArgs,
    #[arg(long, value_enum)]
    pub model: ModelKind,
    /// Number of particles
    #[arg(long = "N")]
    pub n: u64,
    #[arg(long = "L")]
    pub level: Option<u64>,
    #[arg(long)]
    pub index: Option<u64>,
    #[arg(long = "vol-x1")]
    pub vol_x1: Option<f64>,
    #[arg(long = "g")]
    pub genus: Option<u64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long = "d", value_parser = parse_dimension)]
    pub d: Option<Dimension>,
    #[arg(long)]
    pub volume: Option<f64>,
    #[arg(long)]
    pub gap: Option<f64>,
    /// Defaults to the strongest policy available for the model
    #[arg(long, value_enum)]
    pub gap_policy: Option<PolicyArg>,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Parameters a sweep can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum AxisParam {
    #[serde(rename = "rho")]
    Rho,
    #[serde(rename = "mu")]
    Mu,
    #[serde(rename = "eps")]
    Eps,
    #[serde(rename = "gap")]
    Gap,
    #[serde(rename = "R")]
    Radius,
}

impl AxisParam {
    pub fn name(self) -> &'static str {
        match self {
            AxisParam::Rho => "rho",
            AxisParam::Mu => "mu",
            AxisParam::Eps => "eps",
            AxisParam::Gap => "gap",
            AxisParam::Radius => "R",
        }
    }
}

/// `name:min:max:count[:log]`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Axis {
    pub param: AxisParam,
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub log: bool,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.min];
        }
        let last = self.count - 1;
        (0..self.count)
            .map(|i| {
                let t = i as f64 / last as f64;
                match (i, self.log) {
                    (0, _) => self.min,
                    (i, _) if i == last => self.max,
                    (_, true) => (self.min.ln() + t * (self.max.ln() - self.min.ln())).exp(),
                    (_, false) => self.min + t * (self.max - self.min),
                }
            })
            .collect()
    }
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if !(4..=5).contains(&parts.len()) {
            return Err(format!("axis `{s}` must look like name:min:max:count[:log]"));
        }
        let param = match parts[0] {
            "rho" => AxisParam::Rho,
            "mu" => AxisParam::Mu,
            "eps" => AxisParam::Eps,
            "gap" => AxisParam::Gap,
            "R" => AxisParam::Radius,
            other => return Err(format!("unknown sweep parameter `{other}` (rho, mu, eps, gap, R)")),
        };
        let num = |t: &str| t.parse::<f64>().map_err(|_| format!("`{t}` is not a number"));
        let (min, max) = (num(parts[1])?, num(parts[2])?);
        let count: usize = parts[3]
            .parse()
            .map_err(|_| format!("`{}` is not a count", parts[3]))?;
        let log = match parts.get(4) {
            None | Some(&"lin") | Some(&"linear") => false,
            Some(&"log") => true,
            Some(other) => return Err(format!("unknown spacing `{other}` (lin or log)")),
        };
        if count == 0 {
            return Err("axis count must be at least 1".into());
        }
        if !(min.is_finite() && max.is_finite()) || min > max {
            return Err(format!("axis range [{min}, {max}] is invalid"));
        }
        if log && !(min > 0.0) {
            return Err("log spacing needs a positive range".into());
        }
        Ok(Axis {
            param,
            min,
            max,
            count,
            log,
        })
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub potential: PotentialArgs,
    #[arg(long = "d", value_parser = parse_dimension)]
    pub d: Dimension,
    /// Axis `name:min:max:count[:log]` over rho, mu, eps, gap or R; at most two
    #[arg(long = "axis", required = true)]
    pub axes: Vec<Axis>,
    #[arg(long, default_value_t = 1e-3)]
    pub rho: f64,
    #[arg(long, default_value_t = 0.1)]
    pub eps: f64,
    /// Spectral gap; defaults to 975/4096 in d = 2 and 3/4 in d = 3
    #[arg(long)]
    pub gap: Option<f64>,
    /// Radius of the minimizer; defaults to max(R0, a + 1)
    #[arg(long = "R")]
    pub radius: Option<f64>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Coarsest oracle spacing for the energy comparison
    #[arg(long, default_value_t = 1e-3)]
    pub h: f64,
    /// Oracle spacing for the profile comparison
    #[arg(long, default_value_t = 1e-4)]
    pub profile_h: f64,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}
