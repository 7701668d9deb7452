//! Time-frequency distributions: STFT, Wigner, ambiguity, and Cohen-class
//! distributions obtained by weighting the ambiguity function with a kernel
//! `Theta(z1, z2) = Phi(z1 z2)`.

mod kernel;
mod stft;
mod wigner;

pub use kernel::{kernel_eval, sin_pi, sinc, CohenKernel, PhiTable};
pub use stft::{spectrogram, stft, stft_2d, stft_2d_many, Window2D, WindowShape, WindowSpec};
pub use wigner::{ambiguity, ambiguity_direct, cohen, cohen_from_wigner, cohen_with, wigner, wigner_at};

#[cfg(test)]
mod tests;
