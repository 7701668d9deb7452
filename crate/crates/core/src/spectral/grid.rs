use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// What the two axes of a [`Grid2D`] mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridKind {
    /// Axis 0 is time `x`, axis 1 is frequency `omega`.
    TimeFrequency,
    /// Axis 0 is delay `zeta1`, axis 1 is Doppler `zeta2`.
    DelayDoppler,
    Generic,
}

impl GridKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GridKind::TimeFrequency => "time-frequency",
            GridKind::DelayDoppler => "delay-doppler",
            GridKind::Generic => "generic",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "time-frequency" => Some(GridKind::TimeFrequency),
            "delay-doppler" => Some(GridKind::DelayDoppler),
            "generic" => Some(GridKind::Generic),
            _ => None,
        }
    }

    /// Kind of the lattice produced by a symplectic transform.
    pub fn symplectic_dual(self) -> Self {
        match self {
            GridKind::TimeFrequency => GridKind::DelayDoppler,
            GridKind::DelayDoppler => GridKind::TimeFrequency,
            GridKind::Generic => GridKind::Generic,
        }
    }
}

/// Origin of the DC-centred lattice with `n` points and spacing `step`.
pub fn centered_origin(n: usize, step: f64) -> f64 {
    -((n / 2) as f64) * step
}

/// Complex samples on a uniform rectangular lattice, stored row-major
/// (axis 0 is the slow index).
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2D {
    shape: [usize; 2],
    origin: [f64; 2],
    step: [f64; 2],
    kind: GridKind,
    data: Vec<Complex64>,
}

impl Grid2D {
    pub fn new(
        shape: [usize; 2],
        origin: [f64; 2],
        step: [f64; 2],
        kind: GridKind,
        data: Vec<Complex64>,
    ) -> Result<Self> {
        if shape[0] < 2 || shape[1] < 2 {
            return Err(invalid(format!("grid needs at least 2 points per axis, got {shape:?}")));
        }
        if !step.iter().all(|s| s.is_finite() && *s > 0.0) {
            return Err(invalid(format!("grid steps must be positive, got {step:?}")));
        }
        if !origin.iter().all(|o| o.is_finite()) {
            return Err(invalid("grid origin must be finite"));
        }
        if data.len() != shape[0] * shape[1] {
            return Err(invalid(format!(
                "grid data has {} values, shape {:?} needs {}",
                data.len(),
                shape,
                shape[0] * shape[1]
            )));
        }
        Ok(Grid2D { shape, origin, step, kind, data })
    }

    pub fn zeros(shape: [usize; 2], origin: [f64; 2], step: [f64; 2], kind: GridKind) -> Result<Self> {
        let data = vec![Complex64::new(0.0, 0.0); shape[0].saturating_mul(shape[1])];
        Grid2D::new(shape, origin, step, kind, data)
    }

    /// Samples `f(x, y)` at every lattice point.
    pub fn from_fn(
        shape: [usize; 2],
        origin: [f64; 2],
        step: [f64; 2],
        kind: GridKind,
        f: impl Fn(f64, f64) -> Complex64,
    ) -> Result<Self> {
        let mut g = Grid2D::zeros(shape, origin, step, kind)?;
        for i in 0..shape[0] {
            let x = g.coord(0, i);
            for j in 0..shape[1] {
                let y = g.coord(1, j);
                g.data[i * shape[1] + j] = f(x, y);
            }
        }
        Ok(g)
    }

    /// Same lattice, new values.
    pub fn with_data(&self, data: Vec<Complex64>) -> Result<Self> {
        Grid2D::new(self.shape, self.origin, self.step, self.kind, data)
    }

    pub fn shape(&self) -> [usize; 2] {
        self.shape
    }

    pub fn origin(&self) -> [f64; 2] {
        self.origin
    }

    pub fn step(&self) -> [f64; 2] {
        self.step
    }

    pub fn kind(&self) -> GridKind {
        self.kind
    }

    pub fn set_kind(&mut self, kind: GridKind) {
        self.kind = kind;
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        let n1 = self.shape[1];
        &self.data[i * n1..(i + 1) * n1]
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.shape[1] + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        let n1 = self.shape[1];
        self.data[i * n1 + j] = v;
    }

    /// Physical coordinate of index `i` along `axis`.
    pub fn coord(&self, axis: usize, i: usize) -> f64 {
        self.origin[axis] + i as f64 * self.step[axis]
    }

    pub fn coords(&self, axis: usize) -> Vec<f64> {
        (0..self.shape[axis]).map(|i| self.coord(axis, i)).collect()
    }

    /// Nearest lattice index to the physical coordinate `x`, if inside.
    pub fn index_of(&self, axis: usize, x: f64) -> Option<usize> {
        let r = ((x - self.origin[axis]) / self.step[axis]).round();
        if r >= 0.0 && (r as usize) < self.shape[axis] {
            Some(r as usize)
        } else {
            None
        }
    }

    pub fn cell_area(&self) -> f64 {
        self.step[0] * self.step[1]
    }

    /// Spacing of the DFT-dual lattice along each axis.
    pub fn dual_steps(&self) -> [f64; 2] {
        [
            1.0 / (self.shape[0] as f64 * self.step[0]),
            1.0 / (self.shape[1] as f64 * self.step[1]),
        ]
    }

    /// Same shape, and origin and steps equal up to round-off (1e-12 of the
    /// step).
    pub fn same_lattice(&self, other: &Grid2D) -> bool {
        let close = |a: f64, b: f64, scale: f64| (a - b).abs() <= 1e-12 * scale;
        self.shape == other.shape
            && (0..2).all(|i| {
                let h = self.step[i];
                close(self.step[i], other.step[i], h) && close(self.origin[i], other.origin[i], h * self.shape[i] as f64)
            })
    }

    /// Physical L2 norm, `(sum |G|^2 dx dy)^(1/2)`.
    pub fn l2_norm(&self) -> f64 {
        (self.data.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.cell_area()).sqrt()
    }

    /// Physical L1 norm, `sum |G| dx dy`.
    pub fn l1_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).sum::<f64>() * self.cell_area()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest |imaginary part| relative to the largest modulus.
    pub fn max_imag_ratio(&self) -> f64 {
        let m = self.max_abs();
        if m == 0.0 {
            return 0.0;
        }
        self.data.iter().map(|v| v.im.abs()).fold(0.0, f64::max) / m
    }

    pub fn scaled(&self, c: Complex64) -> Grid2D {
        let mut g = self.clone();
        for v in g.data.iter_mut() {
            *v *= c;
        }
        g
    }

    /// Largest pointwise difference relative to the larger of the two maxima.
    pub fn rel_max_diff(&self, other: &Grid2D) -> f64 {
        let scale = self.max_abs().max(other.max_abs());
        let d = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if scale == 0.0 {
            d
        } else {
            d / scale
        }
    }
}
