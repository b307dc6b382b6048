use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "brownloop", version, about = "Heat kernels, relativized semigroups and the infinite Brownian loop on hyperbolic spaces")]
pub struct Cli {
    /// Flat `key = value` file; flags given on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// h2 or h3; `structure` also takes hN and a2.
    #[arg(long, default_value = "h3")]
    pub model: String,
    /// Output directory.
    #[arg(long, env = "BROWNLOOP_OUT", default_value = ".")]
    pub out: PathBuf,
    /// Also write a gnuplot script next to report.csv.
    #[arg(long)]
    pub plot: bool,
    /// Gauss–Legendre nodes per panel.
    #[arg(long, default_value_t = 32)]
    pub nodes: usize,
    /// Quadrature tolerance.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Exponent γ of ε(t) = scale·t^{−γ}.
    #[arg(long, default_value_t = 0.25)]
    pub eps_gamma: f64,
    #[arg(long, default_value_t = 1.0)]
    pub eps_scale: f64,
    /// Worker threads; also the number of Monte Carlo streams.
    #[arg(long, default_value_t = 4)]
    pub workers: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Root datum dimensions and region radii.
    Structure(StructureArgs),
    /// Heat kernel with its two-sided envelope.
    Kernel(KernelArgs),
    /// Grid sup of the kernel ratio gap.
    Ratiogap(RatiogapArgs),
    /// Relativized kernel and the weight of the relativized measure.
    Relativized(RelativizedArgs),
    /// Normalization, generator, semigroup and geometry checks.
    Checks(ChecksArgs),
    /// Long-time convergence experiment.
    Converge(ConvergeArgs),
    /// Mass function at given points.
    Mass(MassArgs),
    /// Concentration of the loop law outside the critical annulus.
    Region(RegionArgs),
    /// Monte Carlo of the loop's radial part.
    Mcloop(McloopArgs),
    /// Gap between bridge and loop radial laws.
    Bridge(BridgeArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Structure(_) => "structure",
            Command::Kernel(_) => "kernel",
            Command::Ratiogap(_) => "ratiogap",
            Command::Relativized(_) => "relativized",
            Command::Checks(_) => "checks",
            Command::Converge(_) => "converge",
            Command::Mass(_) => "mass",
            Command::Region(_) => "region",
            Command::Mcloop(_) => "mcloop",
            Command::Bridge(_) => "bridge",
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct StructureArgs {
    #[command(flatten)]
    pub common: Common,
    /// Times for the region radii.
    #[arg(long, value_delimiter = ',', default_value = "1,10,100")]
    pub t: Vec<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct KernelArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub t: Vec<f64>,
    /// Largest radius; defaults to 4√t + 1.
    #[arg(long)]
    pub rmax: Option<f64>,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
    /// closed (h3 only) or spectral.
    #[arg(long)]
    pub path: Option<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct RatiogapArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_delimiter = ',', default_value = "100,1000,10000")]
    pub t: Vec<f64>,
    /// Radius bound for y.
    #[arg(long, default_value_t = 1.0)]
    pub xi: f64,
    /// Radius bound for g is `rg_scale·√t`.
    #[arg(long, default_value_t = 1.0)]
    pub rg_scale: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct RelativizedArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub t: Vec<f64>,
    /// Largest radius; defaults to 4√t + 1.
    #[arg(long)]
    pub rmax: Option<f64>,
    #[arg(long, default_value_t = 101)]
    pub points: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct ChecksArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_delimiter = ',', default_value = "1,10,100")]
    pub t: Vec<f64>,
    /// Points for the Iwasawa–Cartan inequality.
    #[arg(long, default_value_t = 1000)]
    pub ic_points: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct ConvergeArgs {
    #[command(flatten)]
    pub common: Common,
    /// radial, offcenter or decaying.
    #[arg(long, default_value = "offcenter")]
    pub data: String,
    #[arg(long, value_delimiter = ',', default_value = "10,100,1000")]
    pub tgrid: Vec<f64>,
    /// Exponents of the L^p distances.
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub p: Vec<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct MassArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value = "offcenter")]
    pub data: String,
    /// `r,theta[,phi]`; repeatable.
    #[arg(long, value_parser = parse_point, default_value = "0,0,0")]
    pub at: Vec<[f64; 3]>,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct RegionArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, value_delimiter = ',', default_value = "100,10000")]
    pub t: Vec<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct McloopArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 100_000)]
    pub paths: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub dt: f64,
    #[arg(long, default_value_t = 1.0)]
    pub t_end: f64,
    #[arg(long, default_value_t = 0.0)]
    pub r0: f64,
    #[arg(long, default_value_t = 0x5eed)]
    pub seed: u64,
    /// Histogram cells in report.csv.
    #[arg(long, default_value_t = 60)]
    pub bins: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
#[command(allow_negative_numbers = true)]
pub struct BridgeArgs {
    #[command(flatten)]
    pub common: Common,
    /// Bridge lengths.
    #[arg(long = "L", value_delimiter = ',', default_value = "10,50,250")]
    pub lengths: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    /// Radius bound of the sup; defaults to 5 + 4√t.
    #[arg(long)]
    pub rmax: Option<f64>,
}

fn parse_point(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if !(2..=3).contains(&parts.len()) {
        return Err(format!("expected r,theta[,phi], got '{s}'"));
    }
    let mut out = [0.0; 3];
    for (o, p) in out.iter_mut().zip(&parts) {
        *o = p.parse().map_err(|_| format!("'{p}' is not a number"))?;
    }
    Ok(out)
}
