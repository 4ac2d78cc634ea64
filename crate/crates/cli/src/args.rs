use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use probe_core::ProfileFamily;

#[derive(Debug, Parser)]
#[command(
    name = "probe",
    version,
    about = "QFI, overlaps and Schwarzschild-radius error bounds for Gaussian light probes"
)]
pub struct Cli {
    /// Flat `key = value` file; keys are long flag names, flags on the command line win.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Directory for CSV and SVG output.
    #[arg(long, global = true, value_name = "PATH", default_value = ".")]
    pub outdir: PathBuf,

    /// Label echoed into output metadata.
    #[arg(long, global = true, default_value = "default")]
    pub scenario: String,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form and Bures finite-difference QFI for one channel.
    Qfi(QfiArgs),
    /// Redshift and detector overlap for one geometry.
    Overlap(OverlapArgs),
    /// Relative-error bound on the Schwarzschild radius.
    Bound(BoundArgs),
    /// One-dimensional sweep written as CSV and SVG.
    Sweep(SweepArgs),
    /// Regenerate the data behind a figure.
    Figure(FigureArgs),
    /// Supported figure ids.
    ListFigures,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StencilArg {
    Central,
    Forward,
}

#[derive(Debug, Clone, Args)]
pub struct ProbeArgs {
    /// Coherent amplitude |α|.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Squeezing parameter r.
    #[arg(long)]
    pub r: Option<f64>,
    /// Squeezing angle in radians.
    #[arg(long)]
    pub phase: Option<f64>,
    /// Mean photon number, split by --y.
    #[arg(long)]
    pub nbar: Option<f64>,
    /// Squeezing fraction sinh²r/n̄.
    #[arg(long)]
    pub y: Option<f64>,
    /// Coherent photon number |α|², squeezed further by --db.
    #[arg(long)]
    pub coherent: Option<f64>,
    /// Amplitude squeezing in dB below shot noise.
    #[arg(long)]
    pub db: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct QfiArgs {
    /// Channel transmission amplitude.
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    /// Beamsplitter parameter being estimated.
    #[arg(long, default_value_t = 0.999)]
    pub theta: f64,
    /// Thermal occupation of the loss port.
    #[arg(long, default_value_t = 0.0)]
    pub nth: f64,
    #[command(flatten)]
    pub probe: ProbeArgs,
    /// Initial finite-difference step.
    #[arg(long, default_value_t = 1e-6)]
    pub step: f64,
    /// Maximum number of step halvings.
    #[arg(long, default_value_t = 10)]
    pub halvings: u32,
    #[arg(long, value_enum, default_value_t = StencilArg::Central)]
    pub stencil: StencilArg,
}

#[derive(Debug, Clone, Args)]
pub struct GeoArgs {
    /// Alice's radius in metres.
    #[arg(long, default_value_t = 6.37e6)]
    pub r_a: f64,
    /// Bob's radius in metres.
    #[arg(long, default_value_t = 42.0e6)]
    pub r_b: f64,
    /// Schwarzschild radius in metres.
    #[arg(long, default_value_t = 8.87e-3)]
    pub r_s: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ProfileArgs {
    #[arg(long, default_value = "gaussian")]
    pub profile: ProfileFamily,
    /// Centre frequency ω₀ in Hz.
    #[arg(long, default_value_t = 7.0e14)]
    pub omega0: f64,
    /// Spectral width σ in Hz.
    #[arg(long, default_value_t = 2000.0)]
    pub sigma: f64,
    /// Edge smoothing Δ of the tanh profile.
    #[arg(long, default_value_t = 0.01)]
    pub delta_smooth: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EpsMode {
    Optimal,
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    Bures,
    Unscaled,
}

#[derive(Debug, Clone, Args)]
pub struct DetectorArgs {
    /// Detector detuning ε.
    #[arg(long, allow_negative_numbers = true)]
    pub eps: Option<f64>,
    /// Detuning given as (δ - ε)·ω₀ in Hz.
    #[arg(long, allow_negative_numbers = true)]
    pub shift: Option<f64>,
    /// Detuning chosen so that the overlap equals this value.
    #[arg(long)]
    pub theta_target: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct OverlapArgs {
    #[command(flatten)]
    pub geo: GeoArgs,
    #[command(flatten)]
    pub profile: ProfileArgs,
    #[command(flatten)]
    pub detector: DetectorArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub geo: GeoArgs,
    #[command(flatten)]
    pub profile: ProfileArgs,
    #[command(flatten)]
    pub probe: ProbeArgs,
    #[command(flatten)]
    pub detector: DetectorArgs,
    /// Defaults to optimal unless a detuning flag is given.
    #[arg(long, value_enum)]
    pub eps_mode: Option<EpsMode>,
    /// Channel transmission amplitude.
    #[arg(long, default_value_t = 1.0)]
    pub t: f64,
    /// Number of measurements; defaults to σ/10.
    #[arg(long)]
    pub n_meas: Option<u64>,
    /// Normalization used for the quoted Gaussian closed-form optimum.
    #[arg(long, value_enum, default_value_t = ConventionArg::Bures)]
    pub convention: ConventionArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepVar {
    T,
    Y,
    Nbar,
    Db,
    Shift,
    Theta,
    Distance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    Bound,
    Qfi,
    Overlap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    Linear,
    Log,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub bound: BoundArgs,
    /// Overlap used by `--quantity qfi`.
    #[arg(long, default_value_t = 0.999)]
    pub theta: f64,
    #[arg(long, value_enum)]
    pub var: SweepVar,
    #[arg(long, allow_negative_numbers = true)]
    pub min: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub max: f64,
    #[arg(long, default_value_t = 21)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = Scale::Linear)]
    pub scale: Scale,
    #[arg(long, value_enum, default_value_t = Quantity::Bound)]
    pub quantity: Quantity,
    /// Rayleigh length for `--var distance`.
    #[arg(long, default_value_t = 1000.0)]
    pub z_r: f64,
    /// Transmission at the Rayleigh length.
    #[arg(long, default_value_t = 1.0)]
    pub t0: f64,
    /// Output file stem.
    #[arg(long, default_value = "sweep")]
    pub name: String,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    pub id: u32,
}
