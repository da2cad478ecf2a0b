//! Simulation of an adaptive scheme that discovers the unknown
//! amplitude-and-phase spectro-temporal mode of an ultrashort single photon.
//!
//! A genetic algorithm shapes a simulated local oscillator (through a
//! pixelated spectral mask in a 4f line) against a noisy homodyne-efficiency
//! fitness; the recovered mode is then characterized the way a lab would:
//! SHG-FROG synthesis and retrieval, spectrometry, interferometric
//! autocorrelation, Wigner-function tomography, and spectral-qubit phase
//! scans.
//!
//! Start from the `examples/` directory (one runnable example per
//! capability) or from [`harness::run_scenario`] with one of the bundled
//! scenario files.

pub mod error;
mod fft;
pub mod evolve;
pub mod frog;
pub mod harness;
pub mod io;
pub mod measurement;
pub mod mode;
pub mod seeds;
pub mod shaping;
pub mod tomography;

pub use error::{Error, Result};
