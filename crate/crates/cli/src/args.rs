use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "tfq", version, about = "Time-frequency distributions and interference diagnostics")]
pub struct Cli {
    /// Output path (signal, grid, image or JSON report).
    #[arg(short = 'o', long = "out", global = true)]
    pub out: Option<PathBuf>,

    /// Seed for noise components.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Suppress progress messages on stderr.
    #[arg(long, global = true)]
    pub quiet: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize a test signal.
    #[command(subcommand)]
    Synth(SynthCommand),
    /// Compute a time-frequency representation of a signal file.
    Tfr(TfrArgs),
    /// Run identity and interference checks on a signal file.
    Compare(CompareArgs),
    /// Fit directional decay slopes of one or two grids.
    Probe(ProbeArgs),
    /// Dilation slope experiments on Gaussians.
    Slope(SlopeArgs),
    /// Render a grid as an 8-bit PGM image.
    Render(RenderArgs),
}

#[derive(Debug, Clone, Args)]
pub struct TimebaseArgs {
    /// Number of samples.
    #[arg(short = 'n', long = "samples", default_value_t = 256)]
    pub n: usize,
    /// Sample spacing in seconds.
    #[arg(long, default_value_t = 0.0625)]
    pub dt: f64,
    /// Time of the first sample; the window is centred on 0 by default.
    #[arg(long, allow_negative_numbers = true)]
    pub start: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum SynthCommand {
    /// A single Gabor atom.
    Gabor(GaborArgs),
    /// A linear chirp, optionally in white noise.
    Chirp(ChirpArgs),
    /// Sum of the components listed in a JSON spec file.
    Sum(SumArgs),
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct GaborArgs {
    /// Centre time.
    #[arg(long = "t0", default_value_t = 0.0)]
    pub t0: f64,
    /// Centre frequency.
    #[arg(long = "f0", default_value_t = 0.0)]
    pub f0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub spread: f64,
    #[arg(long, default_value_t = 1.0)]
    pub amplitude: f64,
    #[command(flatten)]
    pub timebase: TimebaseArgs,
}

#[derive(Debug, Args)]
#[command(allow_negative_numbers = true)]
pub struct ChirpArgs {
    #[arg(long, default_value_t = 0.0)]
    pub f_start: f64,
    #[arg(long, default_value_t = 2.0)]
    pub f_end: f64,
    #[arg(long, default_value_t = 1.0)]
    pub amplitude: f64,
    /// Standard deviation of added complex white noise.
    #[arg(long, default_value_t = 0.0)]
    pub noise_sigma: f64,
    #[command(flatten)]
    pub timebase: TimebaseArgs,
}

#[derive(Debug, Args)]
pub struct SumArgs {
    /// JSON file `{"n", "dt", "t0"?, "components": [...]}`.
    #[arg(long)]
    pub spec: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Gaussian- or Hann-window spectrogram.
    Spec,
    Wigner,
    /// Born-Jordan.
    Bj,
    /// Choi-Williams.
    Cw,
    /// Product kernel from a tabulated Phi.
    Product,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelName {
    Wigner,
    Bj,
    Cw,
    Product,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WindowArg {
    Gaussian,
    Hann,
}

#[derive(Debug, Clone, Args)]
pub struct KernelArgs {
    /// Choi-Williams scale.
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    /// Phi table for product kernels: JSON `{"u": [...], "phi": [...]}` or
    /// CSV rows `u,phi`.
    #[arg(long)]
    pub phi_table: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TfrArgs {
    /// Input signal file.
    pub input: PathBuf,
    #[arg(long, value_enum)]
    pub method: Method,
    #[command(flatten)]
    pub kernel: KernelArgs,
    /// Spectrogram window width in seconds.
    #[arg(long, default_value_t = 1.0)]
    pub window_width: f64,
    #[arg(long, value_enum, default_value_t = WindowArg::Gaussian)]
    pub window: WindowArg,
    /// Spectrogram hop in samples.
    #[arg(long, default_value_t = 1)]
    pub hop: usize,
    /// Centre of the alias-free frequency band of quadratic distributions;
    /// chosen from the signal's spectrum when omitted.
    #[arg(long, allow_negative_numbers = true)]
    pub band_center: Option<f64>,
    /// Compute quadratic distributions even when the signal has substantial
    /// energy outside the alias-free band.
    #[arg(long)]
    pub no_alias_guard: bool,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Input signal file.
    pub input: PathBuf,
    /// Cross-term attenuation for every pair of Gabor atoms.
    #[arg(long)]
    pub pairs: bool,
    /// Moyal identity.
    #[arg(long)]
    pub moyal: bool,
    /// Time and frequency marginals of every kernel.
    #[arg(long)]
    pub marginals: bool,
    /// Mixed time-frequency derivative ratios (Born-Jordan).
    #[arg(long)]
    pub mixed_derivative: bool,
    /// Second signal with twice the frequency extent, for the growth check.
    #[arg(long, requires = "mixed_derivative")]
    pub doubled: Option<PathBuf>,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [KernelName::Wigner, KernelName::Bj])]
    pub kernels: Vec<KernelName>,
    #[command(flatten)]
    pub kernel: KernelArgs,
    /// Frequency exponent of the modulation-norm proxy.
    #[arg(long, default_value = "2")]
    pub q: String,
    /// Component list; defaults to the `<input>.components.json` sidecar.
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    /// Reference grid, optionally followed by the grid to compare with it.
    #[arg(required = true, num_args = 1..=2)]
    pub grids: Vec<PathBuf>,
    /// `midpoint` (first oblique atom pair) or `t,f`.
    #[arg(long, default_value = "midpoint", allow_hyphen_values = true)]
    pub at: String,
    /// Cone direction `a,b` in dual-lattice steps.
    #[arg(long, default_value = "1,1", allow_hyphen_values = true)]
    pub dir: String,
    #[arg(long, default_value = "2")]
    pub q: String,
    /// Cone half-angle in radians.
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_8)]
    pub half_angle: f64,
    /// Radius of the raised-cosine cutoff, physical units.
    #[arg(long, default_value_t = 3.0)]
    pub width: f64,
    /// Component list used by `--at midpoint`; defaults to the sidecar of
    /// the signal the grid was computed from.
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SlopeArgs {
    #[arg(long, default_value = "2")]
    pub p: String,
    #[arg(long, default_value = "2")]
    pub q: String,
    #[arg(long, value_delimiter = ',', default_values_t = [1.0, 2.0, 4.0, 8.0])]
    pub lambdas: Vec<f64>,
    #[arg(long, value_enum, default_value_t = KernelName::Bj)]
    pub kernel: KernelName,
    #[command(flatten)]
    pub kernel_args: KernelArgs,
    /// Slope of the 2-D Gaussian's proxy norm instead of the distributions.
    #[arg(long)]
    pub dilation: bool,
}

#[derive(Debug, Args)]
pub struct RenderArgs {
    pub grid: PathBuf,
    /// Log-compression strength.
    #[arg(long, default_value_t = crate::render::DEFAULT_BETA)]
    pub beta: f64,
}
