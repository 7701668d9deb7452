//! One-dimensional DFT engine.
//!
//! Power-of-two lengths use an iterative radix-2 transform, other lengths up
//! to [`DIRECT_MAX`] are summed directly, and everything else goes through
//! Bluestein's chirp-z convolution on a power-of-two buffer.

use num_complex::Complex64;
use std::f64::consts::PI;

/// Largest non-power-of-two length evaluated by direct summation.
pub const DIRECT_MAX: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

#[derive(Debug, Clone)]
enum Kind {
    Trivial,
    Direct { table: Vec<Complex64> },
    Radix2 { twiddles: Vec<Complex64>, bitrev: Vec<usize> },
    Bluestein { chirp: Vec<Complex64>, kernel_hat: Vec<Complex64>, inner: Box<FftPlan> },
}

/// Reusable plan for the unnormalised forward DFT
/// `X[k] = sum_j x[j] exp(-2 pi i j k / n)`.
#[derive(Debug, Clone)]
pub struct FftPlan {
    n: usize,
    kind: Kind,
}

/// `exp(-2 pi i num / den)` with the numerator reduced first so large index
/// products keep full accuracy.
pub(crate) fn unit_root(num: u128, den: u128) -> Complex64 {
    let r = (num % den) as f64 / den as f64;
    let a = -2.0 * PI * r;
    Complex64::new(a.cos(), a.sin())
}

impl FftPlan {
    pub fn new(n: usize) -> Self {
        let kind = if n <= 1 {
            Kind::Trivial
        } else if n.is_power_of_two() {
            let twiddles = (0..n / 2).map(|k| unit_root(k as u128, n as u128)).collect();
            let bits = n.trailing_zeros();
            let bitrev = (0..n).map(|i| i.reverse_bits() >> (usize::BITS - bits)).collect();
            Kind::Radix2 { twiddles, bitrev }
        } else if n <= DIRECT_MAX {
            let table = (0..n).map(|k| unit_root(k as u128, n as u128)).collect();
            Kind::Direct { table }
        } else {
            let m = (2 * n - 1).next_power_of_two();
            // w_k = exp(-i pi k^2 / n), with k^2 reduced mod 2n
            let chirp: Vec<Complex64> = (0..n)
                .map(|k| unit_root((k as u128 * k as u128) % (2 * n as u128), 2 * n as u128))
                .collect();
            let mut kernel = vec![Complex64::new(0.0, 0.0); m];
            kernel[0] = chirp[0].conj();
            for k in 1..n {
                kernel[k] = chirp[k].conj();
                kernel[m - k] = chirp[k].conj();
            }
            let inner = FftPlan::new(m);
            inner.forward(&mut kernel);
            Kind::Bluestein { chirp, kernel_hat: kernel, inner: Box::new(inner) }
        };
        FftPlan { n, kind }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// In-place unnormalised forward transform.
    pub fn forward(&self, buf: &mut [Complex64]) {
        assert_eq!(buf.len(), self.n, "buffer length does not match plan");
        match &self.kind {
            Kind::Trivial => {}
            Kind::Direct { table } => {
                let n = self.n;
                let out: Vec<Complex64> = (0..n)
                    .map(|k| {
                        let mut acc = Complex64::new(0.0, 0.0);
                        let mut idx = 0usize;
                        for x in buf.iter() {
                            acc += x * table[idx];
                            idx += k;
                            if idx >= n {
                                idx -= n;
                            }
                        }
                        acc
                    })
                    .collect();
                buf.copy_from_slice(&out);
            }
            Kind::Radix2 { twiddles, bitrev } => radix2(buf, twiddles, bitrev),
            Kind::Bluestein { chirp, kernel_hat, inner } => {
                let m = kernel_hat.len();
                let mut a = vec![Complex64::new(0.0, 0.0); m];
                for (k, x) in buf.iter().enumerate() {
                    a[k] = x * chirp[k];
                }
                inner.forward(&mut a);
                for (ak, bk) in a.iter_mut().zip(kernel_hat) {
                    *ak *= bk;
                }
                inner.inverse_unscaled(&mut a);
                let scale = 1.0 / m as f64;
                for (k, out) in buf.iter_mut().enumerate() {
                    *out = a[k] * chirp[k] * scale;
                }
            }
        }
    }

    /// In-place inverse transform including the `1/n` factor.
    pub fn inverse(&self, buf: &mut [Complex64]) {
        self.inverse_unscaled(buf);
        let scale = 1.0 / self.n.max(1) as f64;
        for x in buf.iter_mut() {
            *x *= scale;
        }
    }

    fn inverse_unscaled(&self, buf: &mut [Complex64]) {
        for x in buf.iter_mut() {
            *x = x.conj();
        }
        self.forward(buf);
        for x in buf.iter_mut() {
            *x = x.conj();
        }
    }

    pub fn process(&self, buf: &mut [Complex64], dir: Direction) {
        match dir {
            Direction::Forward => self.forward(buf),
            Direction::Inverse => self.inverse(buf),
        }
    }
}

fn radix2(buf: &mut [Complex64], twiddles: &[Complex64], bitrev: &[usize]) {
    let n = buf.len();
    for i in 0..n {
        let j = bitrev[i];
        if i < j {
            buf.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let stride = n / len;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let w = twiddles[k * stride];
                let u = buf[start + k];
                let v = buf[start + k + half] * w;
                buf[start + k] = u + v;
                buf[start + k + half] = u - v;
            }
        }
        len <<= 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(x: &[Complex64]) -> Vec<Complex64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                x.iter()
                    .enumerate()
                    .map(|(j, v)| v * unit_root((j * k) as u128, n as u128))
                    .sum()
            })
            .collect()
    }

    fn sample(n: usize) -> Vec<Complex64> {
        (0..n)
            .map(|j| Complex64::new((j as f64 * 0.37).sin(), (j as f64 * 1.1).cos() - 0.2))
            .collect()
    }

    #[test]
    fn all_paths_match_naive_sum() {
        for n in [1, 2, 3, 7, 16, 31, 32, 33, 50, 64, 97, 100, 128] {
            let x = sample(n);
            let mut y = x.clone();
            FftPlan::new(n).forward(&mut y);
            let z = naive(&x);
            let scale: f64 = z.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1.0);
            for (a, b) in y.iter().zip(&z) {
                assert!((a - b).norm() / scale < 1e-12, "n = {n}");
            }
        }
    }

    #[test]
    fn inverse_undoes_forward() {
        for n in [5, 8, 45, 256] {
            let x = sample(n);
            let plan = FftPlan::new(n);
            let mut y = x.clone();
            plan.forward(&mut y);
            plan.inverse(&mut y);
            for (a, b) in y.iter().zip(&x) {
                assert!((a - b).norm() < 1e-12);
            }
        }
    }
}
