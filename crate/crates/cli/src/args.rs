use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use fpc_core::{Algorithm, CarpetSpec, Sector};
use serde::{Deserialize, Serialize};

use crate::fail::{Failure, Outcome};

#[derive(Parser, Debug)]
#[command(name = "fpc-lab", version, about = "Fractal product codes, their Ising sectors and duals")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Command {
    /// Build the carpet graph and write it as JSON.
    BuildGraph(BuildGraphArgs),
    /// Qubit and logical counts of FPC(b, c, l).
    CodeParams(CodeParamsArgs),
    /// Run the invariant checks on a built or stored code.
    Verify(VerifyArgs),
    /// Merlini–Gruber dual of a model file.
    Dualize(DualizeArgs),
    /// Classical Ising model of one sector of FPC(b, c, l).
    Sector(SectorArgs),
    /// Monte Carlo over an inverse-temperature grid.
    Simulate(SimulateArgs),
    /// Energy barrier of the carpet toric code.
    Barrier(BarrierArgs),
    /// Binder-cumulant crossing of two simulation outputs.
    Crossing(CrossingArgs),
    /// Re-run a command from its manifest and compare output digests.
    Replay(ReplayArgs),
}

#[derive(Args, Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CarpetArgs {
    #[arg(long)]
    pub b: u32,
    #[arg(long)]
    pub c: u32,
    #[arg(long, short = 'l', default_value_t = 1)]
    pub level: u32,
}

impl CarpetArgs {
    pub fn spec(&self) -> Outcome<CarpetSpec> {
        Ok(CarpetSpec::new(self.b, self.c, self.level)?)
    }
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BuildGraphArgs {
    #[command(flatten)]
    pub carpet: CarpetArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeParamsArgs {
    #[command(flatten)]
    pub carpet: CarpetArgs,
    /// Only evaluate the closed forms.
    #[arg(long)]
    pub formula_only: bool,
    /// Build the code even above the size gate.
    #[arg(long)]
    pub force: bool,
    /// Directory to write code.json, hx.txt and hz.txt into.
    #[arg(long)]
    pub export_matrix: Option<PathBuf>,
    /// Report JSON path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyArgs {
    #[arg(long, required_unless_present = "code_dir")]
    pub b: Option<u32>,
    #[arg(long, required_unless_present = "code_dir")]
    pub c: Option<u32>,
    #[arg(long, short = 'l', default_value_t = 1)]
    pub level: u32,
    /// Check a stored code directory instead of building one.
    #[arg(long, conflicts_with_all = ["b", "c"])]
    pub code_dir: Option<PathBuf>,
    #[arg(long)]
    pub force: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualizeArgs {
    /// Model JSON, optionally with a `constraints` list of interaction sets.
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SectorArg {
    X,
    Z,
}

impl From<SectorArg> for Sector {
    fn from(s: SectorArg) -> Sector {
        match s {
            SectorArg::X => Sector::X,
            SectorArg::Z => Sector::Z,
        }
    }
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectorArgs {
    #[command(flatten)]
    pub carpet: CarpetArgs,
    #[arg(long, value_enum, default_value_t = SectorArg::Z)]
    pub sector: SectorArg,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long)]
    pub force: bool,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgorithmArg {
    Metropolis,
    Wolff,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Algorithm {
        match a {
            AlgorithmArg::Metropolis => Algorithm::Metropolis,
            AlgorithmArg::Wolff => Algorithm::Wolff,
        }
    }
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
#[group(id = "source", required = true, multiple = false)]
pub struct SourceArgs {
    /// Model JSON file.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Carpet Ising model, as `b,c,l`.
    #[arg(long, value_parser = parse_triple::<u32>)]
    pub carpet: Option<(u32, u32, u32)>,
    /// Periodic L×L square lattice.
    #[arg(long)]
    pub square: Option<u32>,
    /// Perforated square lattice, as `size,alpha,beta`.
    #[arg(long, value_parser = parse_perforated)]
    pub perforated: Option<(usize, f64, f64)>,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Comma-separated inverse temperatures, overriding the range flags.
    #[arg(long, value_delimiter = ',')]
    pub betas: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0.2)]
    pub beta_min: f64,
    #[arg(long, default_value_t = 1.2)]
    pub beta_max: f64,
    #[arg(long, default_value_t = 26)]
    pub points: usize,
    #[arg(long, default_value_t = 100_000)]
    pub sweeps: usize,
    #[arg(long, default_value_t = 10_000)]
    pub burn_in: usize,
    #[arg(long, default_value_t = 1)]
    pub stride: usize,
    #[arg(long, default_value_t = 1)]
    pub replicas: usize,
    #[arg(long, default_value_t = 32)]
    pub blocks: usize,
    /// Defaults to Wolff for 2-body models and Metropolis otherwise.
    #[arg(long, value_enum)]
    pub algorithm: Option<AlgorithmArg>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Aggregated CSV; replica `r` goes to `<stem>.r<r>.csv` beside it.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BarrierArgs {
    #[command(flatten)]
    pub carpet: CarpetArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossingArgs {
    #[arg(long)]
    pub small: PathBuf,
    #[arg(long)]
    pub large: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReplayArgs {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Directory for the regenerated outputs. Defaults to `replay/` beside
    /// the manifest.
    #[arg(long)]
    pub into: Option<PathBuf>,
}

fn parse_triple<T: std::str::FromStr>(s: &str) -> Result<(T, T, T), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, b, c] = parts[..] else {
        return Err(format!("expected three comma-separated values, got `{s}`"));
    };
    let p = |t: &str| t.parse::<T>().map_err(|_| format!("bad value `{t}`"));
    Ok((p(a)?, p(b)?, p(c)?))
}

fn parse_perforated(s: &str) -> Result<(usize, f64, f64), String> {
    let (size, alpha, beta) = parse_triple::<f64>(s)?;
    if size.fract() != 0.0 || size < 1.0 {
        return Err(format!("size must be a positive integer, got {size}"));
    }
    Ok((size as usize, alpha, beta))
}

fn absolute(p: &Path) -> Outcome<PathBuf> {
    if p.is_absolute() {
        return Ok(p.to_path_buf());
    }
    Ok(std::env::current_dir()?.join(p))
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::BuildGraph(_) => "build-graph",
            Command::CodeParams(_) => "code-params",
            Command::Verify(_) => "verify",
            Command::Dualize(_) => "dualize",
            Command::Sector(_) => "sector",
            Command::Simulate(_) => "simulate",
            Command::Barrier(_) => "barrier",
            Command::Crossing(_) => "crossing",
            Command::Replay(_) => "replay",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            Command::Simulate(a) => Some(a.seed),
            _ => None,
        }
    }

    fn paths_mut(&mut self) -> Vec<&mut PathBuf> {
        let mut v: Vec<&mut PathBuf> = Vec::new();
        match self {
            Command::BuildGraph(a) => v.push(&mut a.out),
            Command::CodeParams(a) => v.extend(a.export_matrix.as_mut().into_iter().chain(a.out.as_mut())),
            Command::Verify(a) => v.extend(a.code_dir.as_mut().into_iter().chain(a.out.as_mut())),
            Command::Dualize(a) => v.extend([&mut a.model, &mut a.out]),
            Command::Sector(a) => v.push(&mut a.out),
            Command::Simulate(a) => v.extend(a.source.model.as_mut().into_iter().chain([&mut a.out])),
            Command::Barrier(a) => v.extend(a.out.as_mut()),
            Command::Crossing(a) => v.extend([&mut a.small, &mut a.large].into_iter().chain(a.out.as_mut())),
            Command::Replay(a) => v.extend(std::iter::once(&mut a.manifest).chain(a.into.as_mut())),
        }
        v
    }

    /// Rewrites every path as an absolute one, so a manifest replays from
    /// any working directory.
    pub fn absolutize(&mut self) -> Outcome<()> {
        for p in self.paths_mut() {
            *p = absolute(p)?;
        }
        Ok(())
    }

    /// Moves every output into `dir`, keeping file names.
    pub fn retarget(&mut self, dir: &Path) -> Outcome<()> {
        let outputs: Vec<&mut PathBuf> = match self {
            Command::BuildGraph(a) => vec![&mut a.out],
            Command::CodeParams(a) => a.export_matrix.as_mut().into_iter().chain(a.out.as_mut()).collect(),
            Command::Verify(a) => a.out.as_mut().into_iter().collect(),
            Command::Dualize(a) => vec![&mut a.out],
            Command::Sector(a) => vec![&mut a.out],
            Command::Simulate(a) => vec![&mut a.out],
            Command::Barrier(a) => a.out.as_mut().into_iter().collect(),
            Command::Crossing(a) => a.out.as_mut().into_iter().collect(),
            Command::Replay(_) => return Err(Failure::args("a replay cannot be replayed")),
        };
        for p in outputs {
            let name = p
                .file_name()
                .ok_or_else(|| Failure::args(format!("output path {} has no file name", p.display())))?;
            *p = dir.join(name);
        }
        Ok(())
    }

    /// The path the manifest is written beside, if the command writes files.
    pub fn primary_output(&self) -> Option<&Path> {
        match self {
            Command::BuildGraph(a) => Some(&a.out),
            Command::CodeParams(a) => a.out.as_deref().or(a.export_matrix.as_deref()),
            Command::Verify(a) => a.out.as_deref(),
            Command::Dualize(a) => Some(&a.out),
            Command::Sector(a) => Some(&a.out),
            Command::Simulate(a) => Some(&a.out),
            Command::Barrier(a) => a.out.as_deref(),
            Command::Crossing(a) => a.out.as_deref(),
            Command::Replay(_) => None,
        }
    }
}
