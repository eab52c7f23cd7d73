use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kmask::mask::default_negative_offset;
use kmask::phantom::{PhantomKind, PhaseModel};
use kmask::MaskSpec;

/// Equispaced, irregular-width and random k-space masks: generation, aliasing
/// simulation, conjugate-symmetry analysis and verification.
#[derive(Debug, Parser)]
#[command(name = "kmask", version, about, long_about = None)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a mask and write it as JSON (stdout by default), CSV or a PGM strip.
    Mask(MaskCmd),
    /// Write a synthetic phantom as raw complex binary plus sidecar.
    Phantom(PhantomCmd),
    /// Mask a signal's spectrum and compare the aliased image with its analytic prediction.
    Simulate(SimulateCmd),
    /// Conjugacy classes, real degrees of freedom and measurement rank of a mask.
    Analyze(AnalyzeCmd),
    /// Monte-Carlo least-squares reconstruction error per mask.
    Recon(ReconCmd),
    /// Run the invariant battery; exits with 3 if any check fails.
    Verify(VerifyCmd),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Equispaced,
    Irregular,
    Random,
}

#[derive(Debug, Clone, Args)]
pub struct MaskArgs {
    /// Acceleration factor R; roughly one line in R is kept.
    #[arg(long, default_value_t = 4)]
    pub accel: usize,
    #[arg(long, value_enum, default_value_t = KindArg::Equispaced)]
    pub kind: KindArg,
    /// Residue kept by an equispaced mask; positive-half offset of an irregular one.
    #[arg(long, default_value_t = 1)]
    pub offset: usize,
    /// Irregular masks: positive-half offset (overrides --offset).
    #[arg(long)]
    pub offset_pos: Option<usize>,
    /// Irregular masks: negative-half offset [default: (R - 2) mod R].
    #[arg(long)]
    pub offset_neg: Option<usize>,
    /// Fully sampled low-frequency lines, split between DC upward and the top end.
    #[arg(long, default_value_t = 0)]
    pub center: usize,
}

impl MaskArgs {
    pub fn spec(&self, n: usize, seed: u64) -> MaskSpec {
        let spec = match self.kind {
            KindArg::Equispaced => MaskSpec::equispaced(n, self.accel, self.offset),
            KindArg::Irregular => MaskSpec::irregular(
                n,
                self.accel,
                self.offset_pos.unwrap_or(self.offset),
                self.offset_neg.unwrap_or_else(|| default_negative_offset(self.accel.max(1))),
            ),
            KindArg::Random => MaskSpec::random(n, self.accel, seed),
        };
        spec.with_center_lines(self.center)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PhantomArg {
    Box,
    SmoothBumps,
    RandomSmooth,
}

impl From<PhantomArg> for PhantomKind {
    fn from(p: PhantomArg) -> Self {
        match p {
            PhantomArg::Box => PhantomKind::Box,
            PhantomArg::SmoothBumps => PhantomKind::SmoothBumps,
            PhantomArg::RandomSmooth => PhantomKind::RandomSmooth,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PhaseArg {
    None,
    Constant,
    Ramp,
    RandomSmooth,
}

#[derive(Debug, Clone, Args)]
pub struct PhantomArgs {
    #[arg(long, value_enum, default_value_t = PhantomArg::Box)]
    pub phantom: PhantomArg,
    /// Support width as a fraction of N.
    #[arg(long, default_value_t = 0.5)]
    pub support: f64,
    /// First pixel of the support window (wraps around).
    #[arg(long, default_value_t = 0)]
    pub start: usize,
    #[arg(long, value_enum, default_value_t = PhaseArg::None)]
    pub phase: PhaseArg,
    /// Angle for constant phase, slope for a ramp, peak amplitude for random-smooth phase.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phase_value: f64,
    /// Standard deviation of complex Gaussian noise per real component.
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
}

impl PhantomArgs {
    pub fn spec(&self, n: usize, seed: u64) -> kmask::PhantomSpec {
        let phase = match self.phase {
            PhaseArg::None => PhaseModel::None,
            PhaseArg::Constant => PhaseModel::Constant { theta: self.phase_value },
            PhaseArg::Ramp => PhaseModel::Ramp { slope: self.phase_value },
            PhaseArg::RandomSmooth => PhaseModel::RandomSmooth { amplitude: self.phase_value },
        };
        kmask::PhantomSpec {
            n,
            kind: self.phantom.into(),
            support_fraction: self.support,
            start: self.start,
            phase,
            noise_sigma: self.noise,
            seed,
        }
    }
}

#[derive(Debug, Args)]
pub struct MaskCmd {
    /// Mask width N.
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub mask: MaskArgs,
    /// Seed for random masks.
    #[arg(long, env = "KMASK_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Store the fftshifted layout.
    #[arg(long)]
    pub shifted: bool,
    /// JSON output path; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// PGM rendering: N columns, --rows rows, sampled lines white.
    #[arg(long)]
    pub pgm: Option<PathBuf>,
    #[arg(long, default_value_t = 16)]
    pub rows: usize,
}

#[derive(Debug, Args)]
pub struct PhantomCmd {
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    #[command(flatten)]
    pub phantom: PhantomArgs,
    #[arg(long, env = "KMASK_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Image rows; more than one writes an [h, N] image of independent rows.
    #[arg(long, default_value_t = 1)]
    pub height: usize,
    /// Writes `<dir>/phantom.bin`, `phantom.json`, `phantom_spec.json` and PGMs.
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Height of the PGM strip for 1D signals.
    #[arg(long, default_value_t = 16)]
    pub rows: usize,
}

#[derive(Debug, Args)]
pub struct SimulateCmd {
    /// Raw complex input (`.bin` with a `.json` sidecar); replaces the phantom flags.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Phantom width when no input file is given.
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    #[command(flatten)]
    pub phantom: PhantomArgs,
    /// Mask file (JSON or CSV); replaces the mask flags.
    #[arg(long)]
    pub mask: Option<PathBuf>,
    #[command(flatten)]
    pub mask_args: MaskArgs,
    #[arg(long, env = "KMASK_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Fail with exit code 3 unless the alias identity holds to --tol · max|x|.
    #[arg(long)]
    pub verify: bool,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Reconstruct by R · max(Re y, 0) and report its MSE.
    #[arg(long)]
    pub clamp: bool,
    /// Height of the PGM strip for 1D signals.
    #[arg(long, default_value_t = 16)]
    pub rows: usize,
}

#[derive(Debug, Args)]
pub struct AnalyzeCmd {
    /// Mask file (JSON or CSV); replaces --n and the mask flags.
    #[arg(long)]
    pub mask: Option<PathBuf>,
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    pub mask_args: MaskArgs,
    #[arg(long, env = "KMASK_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Relative singular-value cutoff for the rank.
    #[arg(long, default_value_t = kmask::symmetry::DEFAULT_SVD_TOL)]
    pub svd_tol: f64,
    /// Write the report JSON here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Print JSON instead of the table.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Args)]
pub struct ReconCmd {
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    #[arg(long, default_value_t = 4)]
    pub accel: usize,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, env = "KMASK_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Equispaced offsets to compare.
    #[arg(long, value_delimiter = ',', default_value = "0,1")]
    pub offsets: Vec<usize>,
    /// Leave out the random-mask arm.
    #[arg(long)]
    pub no_random: bool,
    #[arg(long, default_value_t = 0)]
    pub center: usize,
    #[arg(long, value_enum, default_value_t = PhantomArg::RandomSmooth)]
    pub phantom: PhantomArg,
    #[arg(long, default_value_t = 0.5)]
    pub support: f64,
    #[arg(long, default_value_t = 0.0)]
    pub noise: f64,
    /// Peak random-smooth phase amplitudes (radians) to sweep; 0 is a real phantom.
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub phase_sweep: Vec<f64>,
    #[arg(long, default_value_t = kmask::symmetry::DEFAULT_SVD_TOL)]
    pub svd_tol: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyCmd {
    /// Alias identity bound relative to max|x|.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 1e-11)]
    pub dft_tol: f64,
    #[arg(long, default_value_t = 1e-9)]
    pub clamp_tol: f64,
    #[arg(long, default_value_t = kmask::symmetry::DEFAULT_SVD_TOL)]
    pub svd_tol: f64,
    /// Use this negative-half offset in the irregular-mask check (fault injection).
    #[arg(long)]
    pub neg_offset: Option<usize>,
    #[arg(long, env = "KMASK_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Include wall-clock seconds per check in the JSON.
    #[arg(long)]
    pub timings: bool,
}
