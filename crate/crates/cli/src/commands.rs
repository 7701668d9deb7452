use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use std::fs;
use std::path::{Path, PathBuf};

use tfq_core::analysis::{
    directional_decay, dilation_slope, interference_report, kernel_label, marginal_report, mixed_derivative_check,
    mixed_derivative_growth, moyal_check, pair_geometry, scaling_slope_experiment, ConeSpec, Metric, Report, Tolerance,
};
use tfq_core::distributions::{cohen_from_wigner, spectrogram, wigner_at, CohenKernel, PhiTable, WindowShape, WindowSpec};
use tfq_core::signals::{read_signal, synthesize, write_signal, ComponentSpec, Signal, Timebase};
use tfq_core::spectral::{dft_1d, Direction, Grid2D};

use crate::args::*;
use crate::error::{CliError, CliResult};
use crate::gridfile::{read_grid, write_grid};
use crate::render::render_pgm;

/// Largest share of spectral energy tolerated outside the alias-free band
/// `|w| < 1/(4 dt)` of the discrete Wigner distribution.
pub const ALIAS_GUARD: f64 = 0.25;

/// What a successful run produced.
#[derive(Debug)]
pub enum Outcome {
    /// A file was written.
    Written(PathBuf),
    /// A report; the exit code follows its pass flags.
    Report(Report),
}

/// Timebase plus component list, as read by `synth sum --spec` and written
/// next to every synthesized signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalSpec {
    pub n: usize,
    pub dt: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,
    pub components: Vec<ComponentSpec>,
}

impl SignalSpec {
    pub fn timebase(&self) -> CliResult<Timebase> {
        Ok(match self.t0 {
            Some(t0) => Timebase::new(self.n, self.dt, t0)?,
            None => Timebase::centered(self.n, self.dt)?,
        })
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
    }
}

/// `<signal>.components.json`.
pub fn components_sidecar(signal: &Path) -> PathBuf {
    let mut s = signal.as_os_str().to_owned();
    s.push(".components.json");
    PathBuf::from(s)
}

pub struct Context {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub quiet: bool,
}

impl Context {
    fn note(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }

    fn require_out(&self, what: &str) -> CliResult<&Path> {
        self.out.as_deref().ok_or_else(|| CliError::usage(format!("{what} needs an output path (-o)")))
    }
}

pub fn run(cli: Cli) -> CliResult<Outcome> {
    let ctx = Context { out: cli.out, seed: cli.seed, quiet: cli.quiet };
    match cli.command {
        Command::Synth(c) => synth(&ctx, c),
        Command::Tfr(a) => tfr(&ctx, a),
        Command::Compare(a) => compare(&ctx, a).map(Outcome::Report),
        Command::Probe(a) => probe(&ctx, a).map(Outcome::Report),
        Command::Slope(a) => slope(&ctx, a).map(Outcome::Report),
        Command::Render(a) => render(&ctx, a),
    }
}

fn timebase(a: &TimebaseArgs) -> CliResult<Timebase> {
    Ok(match a.start {
        Some(t0) => Timebase::new(a.n, a.dt, t0)?,
        None => Timebase::centered(a.n, a.dt)?,
    })
}

fn synth(ctx: &Context, cmd: SynthCommand) -> CliResult<Outcome> {
    let out = ctx.require_out("synth")?.to_path_buf();
    let (tb, components) = match cmd {
        SynthCommand::Gabor(a) => {
            (timebase(&a.timebase)?, vec![ComponentSpec::gabor(a.t0, a.f0, a.spread, a.amplitude)])
        }
        SynthCommand::Chirp(a) => {
            let mut comps = vec![ComponentSpec::Chirp {
                f_start: a.f_start,
                f_end: a.f_end,
                amplitude: a.amplitude.into(),
            }];
            if a.noise_sigma != 0.0 {
                comps.push(ComponentSpec::Noise { sigma: a.noise_sigma, seed: ctx.seed.unwrap_or(0) });
            }
            (timebase(&a.timebase)?, comps)
        }
        SynthCommand::Sum(a) => {
            let spec = SignalSpec::load(&a.spec)?;
            let mut comps = spec.components.clone();
            if let Some(seed) = ctx.seed {
                for c in &mut comps {
                    if let ComponentSpec::Noise { seed: s, .. } = c {
                        *s = seed;
                    }
                }
            }
            (spec.timebase()?, comps)
        }
    };
    let f = synthesize(&tb, &components)?;
    write_signal(&f, &out)?;
    let spec = SignalSpec { n: tb.n, dt: tb.dt, t0: Some(tb.t0), components };
    fs::write(components_sidecar(&out), serde_json::to_string_pretty(&spec)?)?;
    ctx.note(format!(
        "synth: wrote {} (n={}, dt={}, t0={}, {} component(s), energy {:.6})",
        out.display(),
        tb.n,
        tb.dt,
        tb.t0,
        spec.components.len(),
        f.energy()
    ));
    Ok(Outcome::Written(out))
}

pub fn load_phi_table(path: &Path) -> CliResult<PhiTable> {
    let text = fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let (u, phi) = if is_json {
        #[derive(Deserialize)]
        struct Table {
            u: Vec<f64>,
            phi: Vec<f64>,
        }
        let t: Table = serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        (t.u, t.phi)
    } else {
        let mut u = Vec::new();
        let mut phi = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = || CliError::input(format!("{}: line {}: expected u,phi", path.display(), ln + 1));
            let (a, b) = line.split_once(',').ok_or_else(bad)?;
            u.push(a.trim().parse().map_err(|_| bad())?);
            phi.push(b.trim().parse().map_err(|_| bad())?);
        }
        (u, phi)
    };
    Ok(PhiTable::new(u, phi)?)
}

pub fn build_kernel(name: KernelName, args: &KernelArgs) -> CliResult<CohenKernel> {
    Ok(match name {
        KernelName::Wigner => CohenKernel::Wigner,
        KernelName::Bj => CohenKernel::BornJordan,
        KernelName::Cw => CohenKernel::choi_williams(args.sigma)?,
        KernelName::Product => {
            let path = args.phi_table.as_ref().ok_or_else(|| CliError::usage("the product kernel needs --phi-table"))?;
            CohenKernel::Product(load_phi_table(path)?)
        }
    })
}

/// Share of the signal's spectral energy outside the band of width
/// `1/(2 dt)` centred at `center` (the alias-free band of the discrete
/// Wigner grid).
pub fn out_of_band_fraction(f: &Signal, center: f64) -> CliResult<f64> {
    let spec = dft_1d(f.samples(), Direction::Forward)?;
    let n = spec.len();
    let period = 1.0 / f.dt();
    let total: f64 = spec.iter().map(|v| v.norm_sqr()).sum();
    if total == 0.0 {
        return Ok(0.0);
    }
    let outside: f64 = spec
        .iter()
        .enumerate()
        .filter(|(k, _)| {
            let nu = *k as f64 * period / n as f64;
            let d = (nu - center).rem_euclid(period);
            let d = if d >= 0.5 * period { d - period } else { d };
            d.abs() >= 0.25 * period
        })
        .map(|(_, v)| v.norm_sqr())
        .sum();
    Ok(outside / total)
}

/// Frequency band for the Wigner grid: centred on 0 when that band holds
/// enough of the energy, otherwise on the spectral centroid (circular mean
/// over the sampling period) rounded to the Wigner frequency lattice, if
/// that captures more.
pub fn band_center(f: &Signal) -> CliResult<f64> {
    if out_of_band_fraction(f, 0.0)? <= ALIAS_GUARD {
        return Ok(0.0);
    }
    let spec = dft_1d(f.samples(), Direction::Forward)?;
    let n = spec.len();
    let z: num_complex::Complex64 = spec
        .iter()
        .enumerate()
        .map(|(k, v)| num_complex::Complex64::from_polar(v.norm_sqr(), 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .sum();
    if z.norm() == 0.0 {
        return Ok(0.0);
    }
    let padded = n + n % 2;
    let dw = 1.0 / (2.0 * padded as f64 * f.dt());
    let centroid = z.arg() / (2.0 * std::f64::consts::PI * f.dt());
    let snapped = (centroid / dw).round() * dw;
    Ok(if out_of_band_fraction(f, snapped)? < out_of_band_fraction(f, 0.0)? { snapped } else { 0.0 })
}

fn read_input(path: &Path) -> CliResult<Signal> {
    read_signal(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn tfr(ctx: &Context, a: TfrArgs) -> CliResult<Outcome> {
    let out = ctx.require_out("tfr")?.to_path_buf();
    let f = read_input(&a.input)?;
    let mut generator = Map::new();
    let signal_path = fs::canonicalize(&a.input).unwrap_or_else(|_| a.input.clone());
    generator.insert("signal".into(), json!(signal_path.to_string_lossy()));
    generator.insert("n".into(), json!(f.len()));
    generator.insert("dt".into(), json!(f.dt()));

    let grid = if a.method == Method::Spec {
        let shape = match a.window {
            WindowArg::Gaussian => WindowShape::Gaussian,
            WindowArg::Hann => WindowShape::Hann,
        };
        let w = WindowSpec { shape, width: a.window_width, hop: a.hop };
        generator.insert("method".into(), json!("spec"));
        generator.insert("window".into(), serde_json::to_value(w)?);
        spectrogram(&f, &w)?
    } else {
        let name = match a.method {
            Method::Wigner => KernelName::Wigner,
            Method::Bj => KernelName::Bj,
            Method::Cw => KernelName::Cw,
            Method::Product => KernelName::Product,
            Method::Spec => unreachable!("handled above"),
        };
        let kernel = build_kernel(name, &a.kernel)?;
        let center = match a.band_center {
            Some(c) => c,
            None => band_center(&f)?,
        };
        let frac = out_of_band_fraction(&f, center)?;
        if frac > ALIAS_GUARD && !a.no_alias_guard {
            return Err(CliError::input(format!(
                "{:.1}% of the signal energy lies outside the alias-free band {} +- {}; the Wigner grid would alias. \
                 Resample with a smaller dt or pass --no-alias-guard",
                100.0 * frac,
                center,
                0.25 / f.dt()
            )));
        }
        generator.insert("method".into(), json!(kernel_label(&kernel)));
        generator.insert("kernel".into(), serde_json::to_value(&kernel)?);
        generator.insert("band_center".into(), json!(center));
        generator.insert("out_of_band_fraction".into(), json!(frac));
        let w = wigner_at(&f, center)?;
        if kernel == CohenKernel::Wigner {
            w
        } else {
            cohen_from_wigner(&w, |x, y| kernel.phi(x * y))?
        }
    };
    write_grid(&out, &grid, generator)?;
    let [n1, n2] = grid.shape();
    ctx.note(format!("tfr: wrote {} ({n1}x{n2}, {})", out.display(), grid.kind().as_str()));
    Ok(Outcome::Written(out))
}

fn parse_exponent(name: &str, s: &str) -> CliResult<f64> {
    let v: f64 = match s.trim() {
        "inf" | "infinity" | "∞" => f64::INFINITY,
        t => t.parse().map_err(|_| CliError::usage(format!("--{name}: not a number: {s:?}")))?,
    };
    if !(v >= 1.0) {
        return Err(CliError::usage(format!("--{name} must lie in [1, inf], got {s}")));
    }
    Ok(v)
}

fn parse_pair(name: &str, s: &str) -> CliResult<(f64, f64)> {
    let bad = || CliError::usage(format!("--{name}: expected two comma-separated numbers, got {s:?}"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(bad());
    }
    Ok((a, b))
}

fn components_for(spec: Option<&Path>, signal: &Path) -> CliResult<Vec<ComponentSpec>> {
    let path = match spec {
        Some(p) => p.to_path_buf(),
        None => components_sidecar(signal),
    };
    if !path.exists() {
        return Err(CliError::input(format!(
            "no component list: {} does not exist (pass --spec)",
            path.display()
        )));
    }
    Ok(SignalSpec::load(&path)?.components)
}

fn compare(ctx: &Context, a: CompareArgs) -> CliResult<Report> {
    if !(a.pairs || a.moyal || a.marginals || a.mixed_derivative) {
        return Err(CliError::usage("compare: select at least one of --pairs, --moyal, --marginals, --mixed-derivative"));
    }
    let f = read_input(&a.input)?;
    let kernels = a.kernels.iter().map(|k| build_kernel(*k, &a.kernel)).collect::<CliResult<Vec<_>>>()?;
    let q = parse_exponent("q", &a.q)?;
    let mut report = Report::new();
    if a.pairs {
        let comps = components_for(a.spec.as_deref(), &a.input)?;
        let r = interference_report(&f.timebase(), &comps, &kernels)?;
        if r.is_empty() {
            ctx.note("compare: fewer than two Gabor atoms, no pairs to compare");
        }
        for w in r.warnings() {
            ctx.note(format!("warning: {w}"));
        }
        report.merge("", r);
    }
    if a.moyal {
        report.merge("", moyal_check(&f)?);
    }
    if a.marginals {
        report.merge("", marginal_report(&f, &kernels)?);
    }
    if a.mixed_derivative {
        let bj = CohenKernel::BornJordan;
        match &a.doubled {
            Some(p) => report.merge("", mixed_derivative_growth(&f, &read_input(p)?, &bj, q)?),
            None => report.merge("", mixed_derivative_check(&f, &bj, q)?),
        }
    }
    Ok(report)
}

fn signal_of(grid_generator: &Map<String, Value>) -> Option<PathBuf> {
    grid_generator.get("signal").and_then(Value::as_str).map(PathBuf::from)
}

fn probe(ctx: &Context, a: ProbeArgs) -> CliResult<Report> {
    let q = parse_exponent("q", &a.q)?;
    let dir = parse_pair("dir", &a.dir)?;
    if dir == (0.0, 0.0) {
        return Err(CliError::usage("--dir must be nonzero"));
    }
    let files = a.grids.iter().map(|p| read_grid(p)).collect::<CliResult<Vec<_>>>()?;
    let base = &files[0].grid;
    if let Some(other) = files.get(1) {
        if !other.grid.same_lattice(base) {
            return Err(CliError::input("probe: the two grids are on different lattices"));
        }
    }

    let at = if a.at.trim() == "midpoint" {
        let signal = signal_of(&files[0].generator);
        let comps = match (&a.spec, &signal) {
            (Some(s), _) => SignalSpec::load(s)?.components,
            (None, Some(sig)) => components_for(None, sig)?,
            (None, None) => return Err(CliError::input("--at midpoint needs --spec: the grid does not name its signal")),
        };
        let step = base.step();
        pair_geometry(&comps, (step[0], step[1]))
            .into_iter()
            .find(|p| p.oblique)
            .map(|p| p.midpoint)
            .ok_or_else(|| CliError::input("--at midpoint: the component list has no oblique atom pair"))?
    } else {
        parse_pair("at", &a.at)?
    };

    let dyadic = ConeSpec::dyadic(base, at, dir)?;
    let cone = ConeSpec::new(at, dir, a.half_angle, dyadic.shells)?;
    let fits = files
        .iter()
        .map(|g| directional_decay(&g.grid, &cone, a.width, q))
        .collect::<tfq_core::Result<Vec<_>>>()?;

    let tag = |m: Metric| {
        m.param("at", vec![at.0, at.1])
            .param("dir", vec![cone.direction.0, cone.direction.1])
            .param("q", q)
            .param("half_angle", cone.half_angle)
            .param("width", a.width)
            .param("shells", cone.shells.clone())
    };
    let mut report = Report::new();
    let names = ["reference", "candidate"];
    for ((name, fit), path) in names.iter().zip(&fits).zip(&a.grids) {
        report.insert(
            format!("probe.{name}.slope"),
            tag(Metric::info(fit.exponent))
                .param("residual", fit.residual)
                .param("grid", path.to_string_lossy().into_owned()),
        );
    }
    if fits.len() == 2 {
        // two-derivative gain across oblique directions, none along the axes
        let oblique = dir.0 != 0.0 && dir.1 != 0.0;
        let target = if oblique { 2.0 } else { 0.0 };
        report.insert(
            "probe.slope_gap",
            tag(Metric::checked(fits[0].exponent - fits[1].exponent, Tolerance::within(target, 0.5)))
                .param("class", if oblique { "oblique" } else { "axis" }),
        );
    }
    ctx.note(format!("probe: cone at ({}, {}) along ({}, {}), {} shells", at.0, at.1, dir.0, dir.1, cone.shells.len()));
    Ok(report)
}

fn slope(ctx: &Context, a: SlopeArgs) -> CliResult<Report> {
    let p = parse_exponent("p", &a.p)?;
    let q = parse_exponent("q", &a.q)?;
    let r = if a.dilation {
        dilation_slope(p, q, &a.lambdas)?
    } else {
        let kernel = build_kernel(a.kernel, &a.kernel_args)?;
        scaling_slope_experiment(p, q, &a.lambdas, &kernel)?
    };
    ctx.note(format!("slope: p={}, q={}, {} dilations", a.p, a.q, a.lambdas.len()));
    Ok(r)
}

fn render(ctx: &Context, a: RenderArgs) -> CliResult<Outcome> {
    let out = ctx.require_out("render")?.to_path_buf();
    if !(a.beta > 0.0 && a.beta.is_finite()) {
        return Err(CliError::usage(format!("--beta must be positive, got {}", a.beta)));
    }
    let g: Grid2D = read_grid(&a.grid)?.grid;
    fs::write(&out, render_pgm(&g, a.beta))?;
    ctx.note(format!("render: wrote {}", out.display()));
    Ok(Outcome::Written(out))
}

/// Writes a report to `out` or stdout and lists failing metrics on stderr.
/// Returns the exit code: 0 when every checked metric passes, 1 otherwise.
pub fn emit_report(report: &Report, out: Option<&Path>) -> CliResult<i32> {
    let text = report.to_json_string();
    match out {
        Some(p) => fs::write(p, text + "\n")?,
        None => println!("{text}"),
    }
    let failures = report.failures();
    if failures.is_empty() {
        Ok(0)
    } else {
        eprintln!("tolerance failures:");
        for name in failures {
            let m = report.get(name).expect("listed metric exists");
            eprintln!("  {name} = {} ({})", m.value, serde_json::to_string(&m.tolerance)?);
        }
        Ok(1)
    }
}
