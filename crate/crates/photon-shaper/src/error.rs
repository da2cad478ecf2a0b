//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid: {0}")]
    Grid(String),
    #[error("mode clipped by grid edge: edge/peak intensity ratio {ratio:.3e} exceeds {limit:.0e}")]
    ModeClipped { ratio: f64, limit: f64 },
    #[error("operands live on different frequency grids")]
    GridMismatch,
    #[error("mode amplitude has zero norm")]
    ZeroNorm,
    #[error("amplitude contains non-finite entries")]
    NonFinite,
    #[error("profile has no positive values")]
    EmptyProfile,
    #[error("unknown material `{0}`")]
    UnknownMaterial(String),
    #[error("negative delay {0} fs")]
    NegativeDelay(f64),
    #[error("modulation destroys the mode (residual norm {0:.3e})")]
    DestructiveModulation(f64),
    #[error("gene count {got} does not match encoding (expected {expected})")]
    GeneCount { expected: usize, got: usize },
    #[error("genes must lie in [0, 1]; gene {index} is {value}")]
    GeneRange { index: usize, value: f64 },
    #[error("mask with {n_pixels} pixels cannot map onto a {n_points}-point grid")]
    MaskTooFine { n_pixels: usize, n_points: usize },
    #[error("pixel counts differ: {0} vs {1}")]
    PixelMismatch(usize, usize),
    #[error("mask blocks all light (throughput {0:.3e})")]
    ZeroThroughput(f64),
    #[error("efficiency {0} outside [0, 1]")]
    EtaRange(f64),
    #[error("batch of {got} samples is below the minimum {min}")]
    BatchTooSmall { got: usize, min: usize },
    #[error("EM reconstruction did not converge after {iterations} iterations")]
    EmStalled { iterations: usize },
    #[error("invalid GA parameters: {0}")]
    GaParams(String),
    #[error("field not contained in its time window: edge/peak intensity ratio {0:.3e}")]
    FieldClipped(f64),
    #[error("invalid FROG trace: {0}")]
    Trace(String),
    #[error("phase scan needs a resolved double-peak spectrum: {0}")]
    ScanNotApplicable(String),
    #[error("comb has {found} resolvable teeth, need at least {need}")]
    TooFewTeeth { found: usize, need: usize },
    #[error("scenario: {0}")]
    Scenario(String),
    #[error("parse: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by invalid input (configs, files, preconditions),
    /// as opposed to runtime failures. The CLI maps these to exit code 2.
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::DestructiveModulation(_)
                | Error::ZeroThroughput(_)
                | Error::EmStalled { .. }
                | Error::Io(_)
        )
    }
}
