//! Time-frequency distributions of Cohen's class with an emphasis on the
//! Born-Jordan distribution, plus the numerical machinery used to measure
//! how its kernel suppresses interferences.

pub mod analysis;
pub mod distributions;
pub mod error;
pub mod signals;
pub mod spectral;

pub use error::{Result, TfqError};
