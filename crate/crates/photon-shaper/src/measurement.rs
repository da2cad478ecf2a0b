//! Balanced homodyne detection of the single-photon/vacuum mixture and the
//! efficiency fitness estimated from quadrature batches.
//!
//! Quadrature convention: vacuum variance 1/2, so ⟨x²⟩ of Fock state n is
//! n + 1/2 and the moment estimator η̂ = ⟨x²⟩ - 1/2 is maximally simple.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mode::{overlap, SpectralMode};

/// Minimum batch size accepted by the estimator.
pub const MIN_BATCH: usize = 100;

/// Lumped detection channel: everything between the ideal mode overlap and
/// the measured efficiency (detector efficiency, optical loss, spatial
/// mismatch, electronic noise) folded into one systematic factor.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DetectionChannel {
    pub eta_sys: f64,
    /// LO phase θ in rad. The single-photon/vacuum mixture is
    /// phase-invariant, so the sampler ignores it; it is carried so that
    /// phase-tagged records stay uniform across the toolchain.
    pub lo_phase: f64,
    pub seed: u64,
}

impl DetectionChannel {
    pub fn new(eta_sys: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta_sys) {
            return Err(Error::EtaRange(eta_sys));
        }
        Ok(Self { eta_sys, lo_phase: 0.0, seed: 0 })
    }
}

/// Homodyne efficiency η = eta_sys · |⟨LO, signal⟩|².
pub fn efficiency(lo: &SpectralMode, sig: &SpectralMode, ch: &DetectionChannel) -> Result<f64> {
    if !(0.0..=1.0).contains(&ch.eta_sys) {
        return Err(Error::EtaRange(ch.eta_sys));
    }
    let c = overlap(lo, sig)?;
    Ok((ch.eta_sys * c.norm_sqr()).clamp(0.0, 1.0))
}

/// Quadrature samples drawn from the mixture η|1⟩⟨1| + (1-η)|0⟩⟨0|.
#[derive(Clone, Debug)]
pub struct QuadratureBatch {
    samples: Vec<f64>,
    theta: f64,
    seed: u64,
    /// Ground truth of the simulation, carried for test harnesses and
    /// oracle columns only; absent for batches read from measurement files.
    true_eta: Option<f64>,
}

impl QuadratureBatch {
    pub fn from_samples(
        samples: Vec<f64>,
        theta: f64,
        seed: u64,
        true_eta: Option<f64>,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::BatchTooSmall { got: 0, min: 1 });
        }
        if samples.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { samples, theta, seed, true_eta })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn true_eta(&self) -> Option<f64> {
        self.true_eta
    }
}

/// Draw `n` i.i.d. quadratures from p(x) = (1-η)·g(x) + η·2x²g(x) with
/// g(x) = e^{-x²}/√π. With probability 1-η the sample is vacuum (centered
/// Gaussian, variance 1/2); otherwise x² is Gamma(3/2, 1)-distributed
/// (drawn as z²/2 + Exp(1)) with a uniform random sign. Deterministic
/// given `seed`.
pub fn sample_quadratures(eta: f64, n: usize, seed: u64) -> Result<QuadratureBatch> {
    sample_quadratures_tagged(eta, n, seed, 0.0)
}

/// Same as [`sample_quadratures`] with an LO-phase tag recorded in the batch.
pub fn sample_quadratures_tagged(
    eta: f64,
    n: usize,
    seed: u64,
    theta: f64,
) -> Result<QuadratureBatch> {
    if !(0.0..=1.0).contains(&eta) || !eta.is_finite() {
        return Err(Error::EtaRange(eta));
    }
    if n == 0 {
        return Err(Error::BatchTooSmall { got: 0, min: 1 });
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let samples = (0..n)
        .map(|_| {
            if rng.random::<f64>() >= eta {
                let z: f64 = rng.sample(StandardNormal);
                z * std::f64::consts::FRAC_1_SQRT_2
            } else {
                let z: f64 = rng.sample(StandardNormal);
                let e: f64 = rng.sample(Exp1);
                let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
                sign * (0.5 * z * z + e).sqrt()
            }
        })
        .collect();
    QuadratureBatch::from_samples(samples, theta, seed, Some(eta))
}

/// Moment estimate of η from a batch.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct EtaEstimate {
    /// η̂ clamped to [0, 1].
    pub eta: f64,
    /// Unclamped value, kept for diagnostics.
    pub eta_raw: f64,
    /// √(Var̂(x²)/n) with the sample variance of x².
    pub stderr: f64,
}

/// η̂ = mean(x²) - 1/2 with its standard error.
pub fn estimate_eta(b: &QuadratureBatch) -> Result<EtaEstimate> {
    let n = b.len();
    if n < MIN_BATCH {
        return Err(Error::BatchTooSmall { got: n, min: MIN_BATCH });
    }
    let mean_sq = b.samples.iter().map(|x| x * x).sum::<f64>() / n as f64;
    let var_sq = b
        .samples
        .iter()
        .map(|x| {
            let d = x * x - mean_sq;
            d * d
        })
        .sum::<f64>()
        / (n - 1) as f64;
    let eta_raw = mean_sq - 0.5;
    Ok(EtaEstimate {
        eta: eta_raw.clamp(0.0, 1.0),
        eta_raw,
        stderr: (var_sq / n as f64).sqrt(),
    })
}

/// Closed-form Var(x²) = 1/2 + 2η - η² of the mixture, for calibration
/// checks against the empirical estimator variance.
pub fn quadrature_square_variance(eta: f64) -> f64 {
    0.5 + 2.0 * eta - eta * eta
}

/// Peak-normalized intensity spectrum on a wavelength axis, in increasing nm.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub lambda_nm: Vec<f64>,
    pub intensity: Vec<f64>,
}

/// What a spectrometer shows: |Ψ(ω)|² re-axed to nm and peak-normalized.
pub fn spectrometer(m: &SpectralMode) -> Spectrum {
    let g = m.grid();
    let n = g.n_points();
    let mut lambda_nm: Vec<f64> = (0..n).map(|k| g.lambda_nm(k)).collect();
    let mut intensity = m.intensity();
    lambda_nm.reverse();
    intensity.reverse();
    let peak = intensity.iter().cloned().fold(0.0, f64::max);
    if peak > 0.0 {
        for v in &mut intensity {
            *v /= peak;
        }
    }
    Spectrum { lambda_nm, intensity }
}
