//! Command-line front end: reproducible experiment runs with map snapshots,
//! CSV traces, energy reports, and re-runnable manifests.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub mod artifacts;
pub mod cmd;
pub mod config;

/// Command failures carrying their process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Bad flag, config key, or parameter value (exit 2).
    #[error("{0}")]
    Config(String),
    /// Unreadable, unwritable, or undecodable file (exit 3).
    #[error("{0}")]
    Io(String),
    /// A calibration search could not meet its target (exit 4).
    #[error("{0}")]
    Calibration(String),
    /// An iterative computation did not settle (exit 5).
    #[error("{0}")]
    Convergence(String),
}

impl CliError {
    /// Process exit code for this failure class.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
            CliError::Calibration(_) => 4,
            CliError::Convergence(_) => 5,
        }
    }
}

impl From<antedge_core::Error> for CliError {
    fn from(e: antedge_core::Error) -> Self {
        let msg = e.to_string();
        match e {
            antedge_core::Error::Argument(_) => CliError::Config(msg),
            antedge_core::Error::Format(_) => CliError::Io(msg),
            antedge_core::Error::Calibration(_) => CliError::Calibration(msg),
            antedge_core::Error::Convergence(_) => CliError::Convergence(msg),
        }
    }
}

/// Ant-colony edge detection and its memristive-array simulator.
#[derive(Debug, Parser)]
#[command(name = "antedge", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Top-level subcommands.
#[derive(Debug, Subcommand)]
pub enum Command {
    /// Software ant-colony edge detection on an image
    Aco(AcoArgs),
    /// Behavioral memristive pixel-array pipeline with energy accounting
    Hw(HwArgs),
    /// Two-path update dynamics: swarm model vs device network
    Twopath(TwopathArgs),
    /// Single-device current-voltage sweep
    Device(DeviceArgs),
    /// Noise-robustness sweep of a detection pipeline
    Noise(NoiseArgs),
}

/// Options shared by every subcommand.
#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// Key=value config file; explicit flags override its entries
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory [default: out]
    #[arg(long)]
    pub out: Option<String>,
}

/// Flags of the `aco` subcommand. Numeric flags are parsed after config-file
/// merging, so they stay strings here.
#[derive(Debug, Args, Default)]
pub struct AcoArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Input image (PGM)
    #[arg(long)]
    pub image: Option<String>,
    /// Generate an N or WxH synthetic scene instead of reading an image
    #[arg(long)]
    pub synth: Option<String>,
    /// Ground-truth edge mask (PGM, nonzero = edge) for scoring
    #[arg(long)]
    pub truth: Option<String>,
    /// Steps per ant walk [default: 4]
    #[arg(long = "L")]
    pub walk_len: Option<String>,
    /// Pheromone exponent [default: 1]
    #[arg(long)]
    pub alpha: Option<String>,
    /// Length exponent [default: 1]
    #[arg(long)]
    pub beta: Option<String>,
    /// Evaporation rate [default: 0.001]
    #[arg(long)]
    pub rho: Option<String>,
    /// Deposit scale [default: 1]
    #[arg(long)]
    pub nu: Option<String>,
    /// Deposit quantity [default: 1]
    #[arg(long)]
    pub q: Option<String>,
    /// Initial pheromone [default: 0.01]
    #[arg(long)]
    pub tau0: Option<String>,
    /// Heuristic floor in path lengths [default: 0.01]
    #[arg(long = "eta-floor")]
    pub eta_floor: Option<String>,
    /// Main-loop iterations [default: 10]
    #[arg(long)]
    pub iters: Option<String>,
    /// Move pattern: full | hv-only [default: full]
    #[arg(long)]
    pub pattern: Option<String>,
    /// Update mode: stochastic | fluid [default: stochastic]
    #[arg(long)]
    pub mode: Option<String>,
    /// Evaporation scope: updated | global [default: updated]
    #[arg(long)]
    pub evaporation: Option<String>,
    /// Include the origin node in pheromone products
    #[arg(long)]
    pub include_origin: bool,
    /// Border handling: clamp | shrink [default: clamp]
    #[arg(long)]
    pub border: Option<String>,
    /// Random seed [default: 0]
    #[arg(long)]
    pub seed: Option<String>,
    /// Edge threshold: otsu or a fixed value [default: otsu]
    #[arg(long)]
    pub threshold: Option<String>,
    /// Comma-separated iteration indices to snapshot
    #[arg(long)]
    pub snapshots: Option<String>,
}

/// Flags of the `hw` subcommand.
#[derive(Debug, Args, Default)]
pub struct HwArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Input image (PGM)
    #[arg(long)]
    pub image: Option<String>,
    /// Generate an N or WxH synthetic scene instead of reading an image
    #[arg(long)]
    pub synth: Option<String>,
    /// Ground-truth edge mask (PGM, nonzero = edge) for scoring
    #[arg(long)]
    pub truth: Option<String>,
    /// Update-group span [default: 3]
    #[arg(long = "L")]
    pub span: Option<String>,
    /// Traversal iterations [default: 10]
    #[arg(long)]
    pub iters: Option<String>,
    /// Switch on-resistance (ohm) [default: 1000]
    #[arg(long = "r-ds")]
    pub r_ds: Option<String>,
    /// Supply rail (V) [default: 1.05]
    #[arg(long = "v-dd")]
    pub v_dd: Option<String>,
    /// Contrast encoding: inverse | direct [default: inverse]
    #[arg(long)]
    pub encoding: Option<String>,
    /// Group wiring: symmetric | chained [default: symmetric]
    #[arg(long)]
    pub topology: Option<String>,
    /// Border handling for the contrast heuristic: clamp | shrink [default: clamp]
    #[arg(long)]
    pub border: Option<String>,
    /// Low edge of the programming band (ohm) [default: 12500]
    #[arg(long = "band-low")]
    pub band_low: Option<String>,
    /// High edge of the programming band (ohm) [default: 150000]
    #[arg(long = "band-high")]
    pub band_high: Option<String>,
    /// Programming pulse width (s) [default: 2e-6]
    #[arg(long = "init-pulse")]
    pub init_pulse: Option<String>,
    /// Programming pulses per scan direction [default: 2]
    #[arg(long = "init-pulses")]
    pub init_pulses: Option<String>,
    /// Update current (A) [default: 6e-6]
    #[arg(long = "i-update")]
    pub i_update: Option<String>,
    /// Update pulse width (s) [default: 1e-6]
    #[arg(long = "t-pulse")]
    pub t_pulse: Option<String>,
    /// Per-pulse control overhead (J) [default: 6e-12]
    #[arg(long = "ctrl-energy")]
    pub ctrl_energy: Option<String>,
    /// Euler sub-step cap for programming and pulses (s) [default: 1e-8]
    #[arg(long = "dt-max")]
    pub dt_max: Option<String>,
    /// Device-side read voltage (V) [default: 0.05]
    #[arg(long = "read-voltage")]
    pub read_voltage: Option<String>,
    /// Read pulse width (s) [default: 5e-9]
    #[arg(long = "read-duration")]
    pub read_duration: Option<String>,
    /// Per-pixel sense overhead (J) [default: 5e-15]
    #[arg(long = "sense-energy")]
    pub sense_energy: Option<String>,
    /// Reverse supply for the erase (V) [default: 1.05]
    #[arg(long = "reset-voltage")]
    pub reset_voltage: Option<String>,
    /// Erase pulse width (s) [default: 1.32e-4]
    #[arg(long = "reset-duration")]
    pub reset_duration: Option<String>,
    /// Euler sub-step cap for the erase (s) [default: 1e-7]
    #[arg(long = "reset-dt")]
    pub reset_dt: Option<String>,
    /// Edge threshold on the resistance map: otsu or a fixed value [default: otsu]
    #[arg(long)]
    pub threshold: Option<String>,
    /// Mark low-resistance pixels as edges instead of high-resistance ones
    #[arg(long)]
    pub invert: bool,
    /// Comma-separated phase counts to snapshot
    #[arg(long)]
    pub snapshots: Option<String>,
}

/// Flags of the `twopath` subcommand.
#[derive(Debug, Args, Default)]
pub struct TwopathArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Parameter preset: example | swapped [default: example]
    #[arg(long)]
    pub preset: Option<String>,
    /// First path length (overrides the preset together with --le2)
    #[arg(long)]
    pub le1: Option<String>,
    /// Second path length
    #[arg(long)]
    pub le2: Option<String>,
    /// Integration horizon (s) [default: 3]
    #[arg(long = "t-end")]
    pub t_end: Option<String>,
    /// Euler step of the swarm system [default: 1e-4]
    #[arg(long = "dt-aco")]
    pub dt_aco: Option<String>,
    /// Euler step of the device system [default: 1e-5]
    #[arg(long = "dt-mem")]
    pub dt_mem: Option<String>,
}

/// Flags of the `device` subcommand.
#[derive(Debug, Args, Default)]
pub struct DeviceArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Sweep amplitude (V) [default: 0.2]
    #[arg(long)]
    pub amplitude: Option<String>,
    /// Sweep rate (V/s) [default: 100]
    #[arg(long)]
    pub rate: Option<String>,
    /// Trace sample spacing (s) [default: 1e-5]
    #[arg(long = "sample-dt")]
    pub sample_dt: Option<String>,
    /// Euler sub-step cap (s) [default: 1e-7]
    #[arg(long = "dt-max")]
    pub dt_max: Option<String>,
    /// Resistance at x = 1 (ohm) [default: 400]
    #[arg(long = "r-on")]
    pub r_on: Option<String>,
    /// Resistance at x = 0 (ohm) [default: 1e6]
    #[arg(long = "r-off")]
    pub r_off: Option<String>,
    /// Positive threshold (V) [default: 0.08]
    #[arg(long = "v-tp")]
    pub v_tp: Option<String>,
    /// Negative threshold (V) [default: -0.035]
    #[arg(long = "v-tn")]
    pub v_tn: Option<String>,
    /// Rate gain above threshold (1/(V*s)) [default: 19600]
    #[arg(long = "beta-p")]
    pub beta_p: Option<String>,
    /// Rate gain below threshold (1/(V*s)) [default: 17500]
    #[arg(long = "beta-n")]
    pub beta_n: Option<String>,
    /// Below-threshold branch: lowering | raising [default: lowering]
    #[arg(long = "negative-branch")]
    pub negative_branch: Option<String>,
}

/// Flags of the `noise` subcommand.
#[derive(Debug, Args, Default)]
pub struct NoiseArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Input image (PGM); needs --truth for scoring
    #[arg(long)]
    pub image: Option<String>,
    /// Generate an N or WxH synthetic scene [default: 32]
    #[arg(long)]
    pub synth: Option<String>,
    /// Ground-truth edge mask (PGM, nonzero = edge)
    #[arg(long)]
    pub truth: Option<String>,
    /// Detection pipeline: aco | hw [default: aco]
    #[arg(long)]
    pub pipeline: Option<String>,
    /// Comma-separated noise levels [default: 0,0.1,0.2,0.3]
    #[arg(long)]
    pub levels: Option<String>,
    /// Steps per walk (aco) or group span (hw) [default: 4 | 3]
    #[arg(long = "L")]
    pub walk_len: Option<String>,
    /// Evaporation rate (aco) [default: 0.001]
    #[arg(long)]
    pub rho: Option<String>,
    /// Pheromone exponent (aco) [default: 1]
    #[arg(long)]
    pub alpha: Option<String>,
    /// Length exponent (aco) [default: 1]
    #[arg(long)]
    pub beta: Option<String>,
    /// Pipeline iterations [default: 10]
    #[arg(long)]
    pub iters: Option<String>,
    /// Update mode (aco): stochastic | fluid [default: stochastic]
    #[arg(long)]
    pub mode: Option<String>,
    /// Move pattern (aco): full | hv-only [default: full]
    #[arg(long)]
    pub pattern: Option<String>,
    /// Edge threshold: otsu or a fixed value [default: otsu]
    #[arg(long)]
    pub threshold: Option<String>,
    /// Random seed (noise placement and stochastic mode) [default: 0]
    #[arg(long)]
    pub seed: Option<String>,
}

/// Runs one parsed command to completion.
pub fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Aco(args) => cmd::aco::run(args),
        Command::Hw(args) => cmd::hw::run(args),
        Command::Twopath(args) => cmd::twopath::run(args),
        Command::Device(args) => cmd::device::run(args),
        Command::Noise(args) => cmd::noise::run(args),
    }
}
