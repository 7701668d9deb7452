//! Test-signal synthesis (Gabor atoms, linear chirps, complex white noise)
//! and signal file I/O.

mod io;

pub use io::{read_signal, write_signal};

use num_complex::Complex64;
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::f64::consts::PI;

use crate::error::{invalid, Result};
use crate::spectral::{dft_1d, Direction};

/// Sample positions `t_n = t0 + n dt`, `n = 0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Timebase {
    pub n: usize,
    pub dt: f64,
    pub t0: f64,
}

impl Timebase {
    pub fn new(n: usize, dt: f64, t0: f64) -> Result<Self> {
        let tb = Timebase { n, dt, t0 };
        tb.validate()?;
        Ok(tb)
    }

    /// Window symmetric about zero: `t0 = -(n/2) dt`.
    pub fn centered(n: usize, dt: f64) -> Result<Self> {
        Timebase::new(n, dt, -((n / 2) as f64) * dt)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(invalid(format!("signal length must be at least 2, got {}", self.n)));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(invalid(format!("dt must be positive, got {}", self.dt)));
        }
        if !self.t0.is_finite() {
            return Err(invalid("t0 must be finite"));
        }
        Ok(())
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    pub fn t_end(&self) -> f64 {
        self.time(self.n - 1)
    }

    pub fn nyquist(&self) -> f64 {
        0.5 / self.dt
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    samples: Vec<Complex64>,
    dt: f64,
    t0: f64,
}

impl Signal {
    pub fn new(samples: Vec<Complex64>, dt: f64, t0: f64) -> Result<Self> {
        Timebase::new(samples.len(), dt, t0)?;
        if samples.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(invalid("signal samples must be finite"));
        }
        Ok(Signal { samples, dt, t0 })
    }

    pub fn zeros(tb: &Timebase) -> Result<Self> {
        Signal::new(vec![Complex64::new(0.0, 0.0); tb.n], tb.dt, tb.t0)
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn timebase(&self) -> Timebase {
        Timebase { n: self.len(), dt: self.dt, t0: self.t0 }
    }

    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    /// `sum |f|^2 dt`.
    pub fn energy(&self) -> f64 {
        self.samples.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.dt
    }

    pub fn scaled(&self, c: Complex64) -> Signal {
        Signal { samples: self.samples.iter().map(|v| v * c).collect(), ..self.clone() }
    }

    /// Continuous-normalised spectrum `dt * sum f[n] exp(-2 pi i t_n w)`
    /// evaluated by direct summation at the given frequencies.
    pub fn spectrum_at(&self, freqs: &[f64]) -> Vec<Complex64> {
        freqs
            .iter()
            .map(|&w| {
                self.samples
                    .iter()
                    .enumerate()
                    .map(|(i, v)| v * crate::spectral::cis_neg(self.time(i) * w))
                    .sum::<Complex64>()
                    * self.dt
            })
            .collect()
    }
}

/// Complex amplitude that reads either a bare number or `[re, im]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Amplitude(pub Complex64);

impl Default for Amplitude {
    fn default() -> Self {
        Amplitude(Complex64::new(1.0, 0.0))
    }
}

impl From<f64> for Amplitude {
    fn from(a: f64) -> Self {
        Amplitude(Complex64::new(a, 0.0))
    }
}

impl Serialize for Amplitude {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.0.re, self.0.im].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Amplitude {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Real(f64),
            Pair([f64; 2]),
        }
        Ok(match Repr::deserialize(d)? {
            Repr::Real(a) => Amplitude(Complex64::new(a, 0.0)),
            Repr::Pair([re, im]) => Amplitude(Complex64::new(re, im)),
        })
    }
}

/// One component of a synthetic test signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ComponentSpec {
    /// `a exp(2 pi i fc (t - tc)) exp(-pi ((t - tc)/s)^2)`, centred at
    /// `center = (tc, fc)` with spread `s`.
    Gabor {
        center: (f64, f64),
        spread: f64,
        #[serde(default)]
        amplitude: Amplitude,
    },
    Chirp {
        f_start: f64,
        f_end: f64,
        #[serde(default)]
        amplitude: Amplitude,
    },
    Noise { sigma: f64, seed: u64 },
}

impl ComponentSpec {
    pub fn gabor(tc: f64, fc: f64, spread: f64, amplitude: f64) -> Self {
        ComponentSpec::Gabor { center: (tc, fc), spread, amplitude: amplitude.into() }
    }

    pub fn synthesize(&self, tb: &Timebase) -> Result<Signal> {
        match *self {
            ComponentSpec::Gabor { .. } => synth_gabor(tb, self),
            ComponentSpec::Chirp { f_start, f_end, amplitude } => {
                synth_chirp(tb, f_start, f_end, amplitude.0)
            }
            ComponentSpec::Noise { sigma, seed } => synth_noise(tb, sigma, seed),
        }
    }

    pub fn with_amplitude_scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        match &mut out {
            ComponentSpec::Gabor { amplitude, .. } | ComponentSpec::Chirp { amplitude, .. } => {
                amplitude.0 *= c
            }
            ComponentSpec::Noise { sigma, .. } => *sigma *= c.abs(),
        }
        out
    }
}

/// Four equal Gabor atoms at the corners of the rectangle
/// `[tc - half_t, tc + half_t] x [fc - half_f, fc + half_f]`, listed
/// counter-clockwise from the lower-left corner.
pub fn rectangle_atoms(center: (f64, f64), half_t: f64, half_f: f64, spread: f64) -> Vec<ComponentSpec> {
    let (tc, fc) = center;
    vec![
        ComponentSpec::gabor(tc - half_t, fc - half_f, spread, 1.0),
        ComponentSpec::gabor(tc + half_t, fc - half_f, spread, 1.0),
        ComponentSpec::gabor(tc + half_t, fc + half_f, spread, 1.0),
        ComponentSpec::gabor(tc - half_t, fc + half_f, spread, 1.0),
    ]
}

pub fn synth_gabor(tb: &Timebase, spec: &ComponentSpec) -> Result<Signal> {
    tb.validate()?;
    let ComponentSpec::Gabor { center: (tc, fc), spread, amplitude } = *spec else {
        return Err(invalid("synth_gabor needs a gabor component"));
    };
    if !(spread.is_finite() && spread > 0.0) {
        return Err(invalid(format!("spread must be positive, got {spread}")));
    }
    if !(tc >= tb.t0 && tc <= tb.t_end()) {
        return Err(invalid(format!(
            "atom centre t = {tc} lies outside the window [{}, {}]",
            tb.t0,
            tb.t_end()
        )));
    }
    if fc.abs() > tb.nyquist() {
        return Err(invalid(format!(
            "atom centre f = {fc} exceeds the Nyquist frequency {}",
            tb.nyquist()
        )));
    }
    let samples = (0..tb.n)
        .map(|i| {
            let u = tb.time(i) - tc;
            amplitude.0 * crate::spectral::cis_neg(-fc * u) * (-PI * (u / spread).powi(2)).exp()
        })
        .collect();
    Signal::new(samples, tb.dt, tb.t0)
}

/// Linear chirp with phase `f_start (t - t0) + k (t - t0)^2 / 2`,
/// `k = (f_end - f_start) / (n dt)`.
pub fn synth_chirp(tb: &Timebase, f_start: f64, f_end: f64, amplitude: Complex64) -> Result<Signal> {
    tb.validate()?;
    let k = (f_end - f_start) / (tb.n as f64 * tb.dt);
    let samples = (0..tb.n)
        .map(|i| {
            let u = i as f64 * tb.dt;
            amplitude * crate::spectral::cis_neg(-(f_start * u + 0.5 * k * u * u))
        })
        .collect();
    Signal::new(samples, tb.dt, tb.t0)
}

/// Circular complex white noise with `E|f|^2 = sigma^2`, drawn with
/// xoshiro256++ and the Box-Muller transform.
pub fn synth_noise(tb: &Timebase, sigma: f64, seed: u64) -> Result<Signal> {
    tb.validate()?;
    if !(sigma.is_finite() && sigma >= 0.0) {
        return Err(invalid(format!("sigma must be non-negative, got {sigma}")));
    }
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    let scale = sigma / std::f64::consts::SQRT_2;
    let samples = (0..tb.n)
        .map(|_| {
            // u1 in (0, 1] keeps the logarithm finite
            let u1 = ((rng.next_u64() >> 11) + 1) as f64 / (1u64 << 53) as f64;
            let u2 = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
            let r = (-2.0 * u1.ln()).sqrt();
            let a = 2.0 * PI * u2;
            Complex64::new(scale * r * a.cos(), scale * r * a.sin())
        })
        .collect();
    Signal::new(samples, tb.dt, tb.t0)
}

/// Pointwise sum, accumulated left to right.
pub fn combine(parts: &[Signal]) -> Result<Signal> {
    let first = parts.first().ok_or_else(|| invalid("combine needs at least one signal"))?;
    for p in &parts[1..] {
        if p.len() != first.len() || p.dt != first.dt || p.t0 != first.t0 {
            return Err(invalid(format!(
                "signal metadata mismatch: (n={}, dt={}, t0={}) vs (n={}, dt={}, t0={})",
                first.len(),
                first.dt,
                first.t0,
                p.len(),
                p.dt,
                p.t0
            )));
        }
    }
    let mut acc = first.samples.clone();
    for p in &parts[1..] {
        for (a, b) in acc.iter_mut().zip(&p.samples) {
            *a += b;
        }
    }
    Signal::new(acc, first.dt, first.t0)
}

/// Synthesises every component on `tb` and sums them.
pub fn synthesize(tb: &Timebase, components: &[ComponentSpec]) -> Result<Signal> {
    if components.is_empty() {
        return Err(invalid("no components to synthesise"));
    }
    let parts = components.iter().map(|c| c.synthesize(tb)).collect::<Result<Vec<_>>>()?;
    combine(&parts)
}

/// Frequency of the largest forward-DFT bin, mapped to `(-1/(2dt), 1/(2dt)]`.
pub fn peak_frequency(s: &Signal) -> Result<f64> {
    let spec = dft_1d(s.samples(), Direction::Forward)?;
    let n = s.len();
    let (k, _) = spec
        .iter()
        .enumerate()
        .fold((0, -1.0), |best, (k, v)| if v.norm() > best.1 { (k, v.norm()) } else { best });
    let k = if k > n / 2 { k as f64 - n as f64 } else { k as f64 };
    Ok(k / (n as f64 * s.dt()))
}
