//! Argument grammar. Every leaf struct doubles as the resolved run
//! configuration embedded in JSON records, so field names are also the keys
//! accepted in `--config` files.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use landau1d::eigensolve::{GridPolicy, SolverKind, SolverOptions, DEFAULT_TOL};
use landau1d::model::{ModelParams, PotentialSampling, StencilOrder};
use landau1d::specfun::PotentialKind;

#[derive(Debug, Parser)]
#[command(name = "landau1d", version, about = "One-dimensional model atoms in a strong magnetic field")]
pub struct Cli {
    /// JSON file with default values for any flag (keys are flag names such
    /// as "Z" or "max-matvecs", optionally grouped under a section named
    /// after the subcommand); flags on the command line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Seed for quasi-random scans and solver start vectors.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate a one-dimensional potential (CSV: x,value).
    Potential(PotentialArgs),
    /// Tabulate the two-electron surface W(x, y) (CSV: x,y,w).
    Surface(SurfaceArgs),
    /// Lowest eigenvalues on one grid (JSON).
    Spectrum(SpectrumArgs),
    /// Binding report for two electrons (JSON).
    Bind(BindArgs),
    /// Critical charge for binding at a given field (JSON).
    Zc(ZcArgs),
    /// Regime analysis of the two-electron surface.
    #[command(subcommand)]
    Landscape(LandscapeCommand),
    /// Numerical checks of the inequalities behind the ionization bound.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Ionization bound threshold (JSON).
    Bound(BoundArgs),
    /// Compare the ionization bound with two-electron solves on a lattice (JSON).
    Consistency(ConsistencyArgs),
}

#[derive(Debug, Subcommand)]
pub enum LandscapeCommand {
    /// Sections W(x,-x) and W(x,0) for several charges (CSV).
    Profiles(ProfilesArgs),
    /// Critical points of W in a square (CSV).
    CriticalPoints(CriticalPointsArgs),
    /// Regime classification, with the boundary charges (JSON).
    Regime(RegimeArgs),
}

#[derive(Debug, Subcommand)]
pub enum VerifyCommand {
    /// g_3 < V_0 < g_4 and g_pi < V_0 on quasi-random points (CSV).
    Envelope(EnvelopeArgs),
    /// Finite-difference residuals of the ODEs for V_0 and 1/V_0 (CSV).
    Odes(OdesArgs),
    /// Pair inequality on quasi-random points of a square (CSV).
    PairInequality(PairArgs),
    /// Midpoint convexity chain for 1/V_0 (CSV).
    ConvexityChain(ChainArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Tabulated {
    /// V_0 at unit field.
    V0,
    /// V_m^B (uses --m and --B).
    Regularized,
    Cutoff,
    Coulomb,
    /// Lower envelope g_k (uses --k).
    GLower,
    /// Upper envelope g_k (uses --k).
    GUpper,
    /// Pair interaction 2^{-1/2} V_0^B(|s|/sqrt 2) (uses --B).
    Pair,
    /// 1/V_0.
    Nu,
    /// Localization error nu (nu - |x|)^2.
    LocalizationError,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    V0,
    Cutoff,
}

impl Shape {
    pub fn kind(self) -> PotentialKind<f64> {
        match self {
            Shape::V0 => PotentialKind::v0(),
            Shape::Cutoff => PotentialKind::Cutoff,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stencil {
    Second,
    Fourth,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sampling {
    Nodal,
    CellAveraged,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    Auto,
    Lanczos,
    Lobpcg,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct PotentialArgs {
    #[arg(long, value_enum, default_value_t = Tabulated::V0)]
    pub kind: Tabulated,
    #[arg(long, default_value_t = 0)]
    pub m: u32,
    #[arg(long = "B", default_value_t = 1.0)]
    pub b: f64,
    #[arg(long, default_value_t = 3.0)]
    pub k: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub xmin: f64,
    #[arg(long, default_value_t = 6.0, allow_negative_numbers = true)]
    pub xmax: f64,
    /// Number of intervals; `steps + 1` rows are written.
    #[arg(long, default_value_t = 600)]
    pub steps: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write a JSON run record here.
    #[arg(long)]
    pub record: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SurfaceArgs {
    #[arg(long = "Z")]
    pub z: Option<f64>,
    #[arg(long = "B", default_value_t = 1.0)]
    pub b: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = Shape::V0)]
    pub attraction: Shape,
    /// Half width of the square.
    #[arg(long, default_value_t = 6.0)]
    pub extent: f64,
    #[arg(long, default_value_t = 120)]
    pub steps: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub record: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ModelArgs {
    #[arg(long = "N", default_value_t = 2)]
    pub n: usize,
    #[arg(long = "Z")]
    pub z: Option<f64>,
    #[arg(long = "B", default_value_t = 1.0)]
    pub b: f64,
    /// Coupling of the electron-electron repulsion.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = Shape::V0)]
    pub attraction: Shape,
}

impl ModelArgs {
    pub fn params(&self) -> Result<ModelParams<f64>, String> {
        let z = required(self.z, "Z")?;
        Ok(ModelParams::new(self.n, z, self.b).with_alpha(self.alpha).with_attraction(self.attraction.kind()))
    }
}

/// Flags that may come from either the command line or the config file.
pub fn required<T>(v: Option<T>, flag: &str) -> Result<T, String> {
    v.ok_or_else(|| format!("--{flag} is required (on the command line or in the config file)"))
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SolverArgs {
    #[arg(long, value_enum, default_value_t = Solver::Auto)]
    pub solver: Solver,
    /// Residual target of the eigensolver, relative to `1 + |lambda|`.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub solver_tol: f64,
    #[arg(long)]
    pub max_matvecs: Option<usize>,
}

impl SolverArgs {
    pub fn options(&self, seed: u64) -> SolverOptions<f64> {
        let kind = match self.solver {
            Solver::Auto => SolverKind::Auto,
            Solver::Lanczos => SolverKind::Lanczos,
            Solver::Lobpcg => SolverKind::Lobpcg,
        };
        SolverOptions { max_matvecs: self.max_matvecs, seed, ..SolverOptions::default().with_tol(self.solver_tol).with_kind(kind) }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct DiscretizationArgs {
    #[arg(long, value_enum, default_value_t = Stencil::Second)]
    pub stencil: Stencil,
    #[arg(long, value_enum, default_value_t = Sampling::CellAveraged)]
    pub sampling: Sampling,
}

impl DiscretizationArgs {
    pub fn stencil(&self) -> StencilOrder {
        match self.stencil {
            Stencil::Second => StencilOrder::Second,
            Stencil::Fourth => StencilOrder::Fourth,
        }
    }

    pub fn sampling(&self) -> PotentialSampling {
        match self.sampling {
            Sampling::Nodal => PotentialSampling::Nodal,
            Sampling::CellAveraged => PotentialSampling::CellAveraged,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct LadderArgs {
    /// Primary half width; defaults to 25 estimated decay lengths.
    #[arg(long = "L")]
    pub half_width: Option<f64>,
    /// Coarsest spacing; defaults to the largest accepted one.
    #[arg(long = "h")]
    pub spacing: Option<f64>,
    #[arg(long, default_value_t = 3)]
    pub levels: usize,
    #[arg(long, default_value_t = 1.5)]
    pub outer_factor: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub discretization: DiscretizationArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub solver: SolverArgs,
}

impl LadderArgs {
    pub fn policy(&self, seed: u64) -> GridPolicy<f64> {
        GridPolicy {
            half_width: self.half_width,
            base_spacing: self.spacing,
            levels: self.levels,
            outer_factor: self.outer_factor,
            stencil: self.discretization.stencil(),
            sampling: self.discretization.sampling(),
            solver: self.solver.options(seed).without_vectors(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct SpectrumArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub model: ModelArgs,
    #[arg(long = "L")]
    pub half_width: Option<f64>,
    /// Interior points per axis; defaults to the coarsest accepted grid.
    #[arg(long)]
    pub points: Option<usize>,
    /// Number of eigenpairs.
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    #[command(flatten)]
    #[serde(flatten)]
    pub discretization: DiscretizationArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub solver: SolverArgs,
    /// Include eigenvectors in the output.
    #[arg(long, default_value_t = false)]
    pub vectors: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct BindArgs {
    #[arg(long = "Z")]
    pub z: Option<f64>,
    #[arg(long = "B", default_value_t = 1.0)]
    pub b: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = Shape::V0)]
    pub attraction: Shape,
    #[command(flatten)]
    #[serde(flatten)]
    pub ladder: LadderArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ZcArgs {
    #[arg(long = "B")]
    pub b: Option<f64>,
    /// Width of the final bracket.
    #[arg(long, default_value_t = 1e-2)]
    pub tol: f64,
    #[command(flatten)]
    #[serde(flatten)]
    pub ladder: LadderArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the margin trace as CSV (z,margin,error).
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ProfilesArgs {
    #[arg(long = "Z", value_delimiter = ',', default_values_t = [0.25, 0.3, 0.35, 0.4, 0.5, 0.6, 0.7, 0.8])]
    pub z: Vec<f64>,
    #[arg(long = "B", default_value_t = 1.0)]
    pub b: f64,
    #[arg(long, default_value_t = -6.0, allow_negative_numbers = true)]
    pub xmin: f64,
    #[arg(long, default_value_t = 6.0, allow_negative_numbers = true)]
    pub xmax: f64,
    #[arg(long, default_value_t = 600)]
    pub steps: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub record: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct CriticalPointsArgs {
    #[arg(long = "Z")]
    pub z: Option<f64>,
    #[arg(long = "B", default_value_t = 1.0)]
    pub b: f64,
    /// Half width of the search square; defaults to 20 magnetic lengths.
    #[arg(long)]
    pub extent: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub record: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct RegimeArgs {
    #[arg(long = "Z")]
    pub z: Option<f64>,
    #[arg(long = "B", default_value_t = 1.0)]
    pub b: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct EnvelopeArgs {
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 50.0)]
    pub xmax: f64,
    /// Write only failing samples.
    #[arg(long, default_value_t = false)]
    pub failures_only: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub record: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct OdesArgs {
    #[arg(long, default_value_t = 10_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 30.0)]
    pub xmax: f64,
    /// Central-difference step.
    #[arg(long, default_value_t = 1e-5)]
    pub step: f64,
    #[arg(long, default_value_t = 1e-7)]
    pub tol: f64,
    #[arg(long, default_value_t = false)]
    pub failures_only: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub record: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct PairArgs {
    #[arg(long, value_enum, default_value_t = Shape::V0)]
    pub kind: Shape,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 50.0)]
    pub range: f64,
    #[arg(long, default_value_t = false)]
    pub failures_only: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub record: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ChainArgs {
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 50.0)]
    pub range: f64,
    #[arg(long, default_value_t = false)]
    pub failures_only: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub record: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct BoundArgs {
    #[arg(long = "Z")]
    pub z: Option<f64>,
    #[arg(long = "B")]
    pub b: Option<f64>,
    #[arg(long, value_enum, default_value_t = Shape::V0)]
    pub kind: Shape,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
pub struct ConsistencyArgs {
    #[arg(long = "Z", value_delimiter = ',', default_values_t = [0.1, 0.2, 0.3])]
    pub z: Vec<f64>,
    #[arg(long = "B", value_delimiter = ',', default_values_t = [0.01, 0.04])]
    pub b: Vec<f64>,
    #[command(flatten)]
    #[serde(flatten)]
    pub ladder: LadderArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
