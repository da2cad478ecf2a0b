//! Complex spectro-temporal field envelopes: uniform frequency grids,
//! normalization, overlaps, Fourier duality, and width metrics.
//!
//! Conventions used throughout the crate:
//! - angular frequency in rad/fs, time in fs, wavelength in nm;
//! - the carrier is factored out: arrays store envelopes relative to the
//!   grid center, and the carrier enters only wavelength labeling and
//!   second-harmonic bookkeeping;
//! - a spectral mode is normalized so that Σ |Ψ_k|² Δω = 1;
//! - the ω→t transform uses the exp(-iωt) kernel, so a spectral phase
//!   exp(+iωτ) delays the envelope by τ.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;

/// Speed of light in nm/fs.
pub const C_NM_PER_FS: f64 = 299.792458;

/// Relative intensity allowed at a grid or window edge before a mode or
/// field counts as clipped.
pub const EDGE_INTENSITY_LIMIT: f64 = 1e-8;

const TWO_PI: f64 = std::f64::consts::TAU;

fn is_power_of_two(n: usize) -> bool {
    n != 0 && n & (n - 1) == 0
}

/// Uniform angular-frequency grid around a carrier.
///
/// Index `k` of a length-`n` array maps to `center_omega + (k - n/2)·Δω`
/// with `Δω = span / n`, which makes the spacing uniform by construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FrequencyGrid {
    center_omega: f64,
    span: f64,
    n_points: usize,
}

impl FrequencyGrid {
    /// Grid centered on the carrier of `center_wavelength_nm`.
    pub fn new(center_wavelength_nm: f64, span: f64, n_points: usize) -> Result<Self> {
        if !(center_wavelength_nm > 100.0 && center_wavelength_nm < 10_000.0) {
            return Err(Error::Grid(format!(
                "center wavelength {center_wavelength_nm} nm outside (100, 10000) nm"
            )));
        }
        Self::from_center_omega(TWO_PI * C_NM_PER_FS / center_wavelength_nm, span, n_points)
    }

    /// Grid centered directly on an angular frequency in rad/fs.
    pub fn from_center_omega(center_omega: f64, span: f64, n_points: usize) -> Result<Self> {
        if !span.is_finite() || span <= 0.0 {
            return Err(Error::Grid(format!("span {span} rad/fs must be positive")));
        }
        if !is_power_of_two(n_points) || n_points < 64 {
            return Err(Error::Grid(format!(
                "n_points {n_points} must be a power of two ≥ 64"
            )));
        }
        if !center_omega.is_finite() || span >= 2.0 * center_omega {
            return Err(Error::Grid(format!(
                "span {span} rad/fs does not fit around center {center_omega} rad/fs"
            )));
        }
        Ok(Self { center_omega, span, n_points })
    }

    /// Default grid of the artifact: 1024 points spanning 0.30 rad/fs
    /// around 800 nm.
    pub fn default_800nm() -> Self {
        Self::new(800.0, 0.30, 1024).expect("default grid parameters are valid")
    }

    pub fn center_omega(&self) -> f64 {
        self.center_omega
    }

    pub fn span(&self) -> f64 {
        self.span
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn delta_omega(&self) -> f64 {
        self.span / self.n_points as f64
    }

    /// Time step of the conjugate window, 2π/span.
    pub fn delta_t(&self) -> f64 {
        TWO_PI / self.span
    }

    /// Offset from the grid center at index `k`.
    pub fn detuning(&self, k: usize) -> f64 {
        (k as f64 - (self.n_points / 2) as f64) * self.delta_omega()
    }

    pub fn omega(&self, k: usize) -> f64 {
        self.center_omega + self.detuning(k)
    }

    /// Wavelength view of index `k` in nm.
    pub fn lambda_nm(&self, k: usize) -> f64 {
        TWO_PI * C_NM_PER_FS / self.omega(k)
    }

    pub fn center_wavelength_nm(&self) -> f64 {
        TWO_PI * C_NM_PER_FS / self.center_omega
    }

    /// Time coordinate of index `k` in the conjugate window.
    pub fn time(&self, k: usize) -> f64 {
        (k as f64 - (self.n_points / 2) as f64) * self.delta_t()
    }

    pub fn detunings(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(|k| self.detuning(k))
    }
}

/// Complex spectral amplitude Ψ(ω) on a [`FrequencyGrid`], normalized to
/// Σ |Ψ_k|² Δω = 1.
#[derive(Clone, Debug)]
pub struct SpectralMode {
    grid: FrequencyGrid,
    amplitude: Vec<Complex64>,
}

impl SpectralMode {
    /// Wrap and normalize an amplitude array.
    pub fn new(grid: FrequencyGrid, mut amplitude: Vec<Complex64>) -> Result<Self> {
        if amplitude.len() != grid.n_points() {
            return Err(Error::Grid(format!(
                "amplitude length {} does not match grid ({} points)",
                amplitude.len(),
                grid.n_points()
            )));
        }
        if amplitude.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm_sq: f64 = amplitude.iter().map(|a| a.norm_sqr()).sum::<f64>() * grid.delta_omega();
        if norm_sq <= 0.0 {
            return Err(Error::ZeroNorm);
        }
        let inv = 1.0 / norm_sq.sqrt();
        for a in &mut amplitude {
            *a *= inv;
        }
        Ok(Self { grid, amplitude })
    }

    /// Wrap an amplitude array that is already normalized, without rescaling
    /// it. Keeps serialized modes bit-exact through read/write round trips.
    pub fn from_raw_normalized(grid: FrequencyGrid, amplitude: Vec<Complex64>) -> Result<Self> {
        if amplitude.len() != grid.n_points() {
            return Err(Error::Grid(format!(
                "amplitude length {} does not match grid ({} points)",
                amplitude.len(),
                grid.n_points()
            )));
        }
        if amplitude.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm_sq: f64 = amplitude.iter().map(|a| a.norm_sqr()).sum::<f64>() * grid.delta_omega();
        if (norm_sq - 1.0).abs() > 1e-6 {
            return Err(Error::Grid(format!(
                "amplitude is not normalized (Σ|Ψ|²Δω = {norm_sq})"
            )));
        }
        Ok(Self { grid, amplitude })
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn amplitude(&self) -> &[Complex64] {
        &self.amplitude
    }

    /// Intensity samples |Ψ_k|².
    pub fn intensity(&self) -> Vec<f64> {
        self.amplitude.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Largest edge-sample intensity relative to the peak intensity.
    pub fn edge_intensity_ratio(&self) -> f64 {
        let peak = self
            .amplitude
            .iter()
            .map(|a| a.norm_sqr())
            .fold(0.0_f64, f64::max);
        if peak <= 0.0 {
            return 0.0;
        }
        let n = self.amplitude.len();
        self.amplitude[0].norm_sqr().max(self.amplitude[n - 1].norm_sqr()) / peak
    }
}

/// Gaussian intensity profile with the stated intensity FWHM (given in nm of
/// wavelength at the grid center), flat spectral phase, centered at
/// `center_offset` rad/fs from the grid center.
pub fn gaussian_mode(
    grid: &FrequencyGrid,
    center_offset: f64,
    fwhm_lambda_nm: f64,
) -> Result<SpectralMode> {
    if !fwhm_lambda_nm.is_finite() || fwhm_lambda_nm <= 0.0 || !center_offset.is_finite() {
        return Err(Error::Grid(format!(
            "invalid gaussian parameters: offset {center_offset}, fwhm {fwhm_lambda_nm} nm"
        )));
    }
    let lambda0 = grid.center_wavelength_nm();
    let fwhm_omega = TWO_PI * C_NM_PER_FS * fwhm_lambda_nm / (lambda0 * lambda0);
    let sigma = fwhm_omega / (8.0 * std::f64::consts::LN_2).sqrt();
    if sigma > grid.span() / 6.0 {
        return Err(Error::ModeClipped {
            ratio: 1.0,
            limit: EDGE_INTENSITY_LIMIT,
        });
    }
    // Analytic edge check of the intensity profile against the worse edge.
    let near = grid.span() / 2.0 - center_offset.abs();
    let edge_ratio = (-near * near / (2.0 * sigma * sigma)).exp();
    if edge_ratio.is_nan() || edge_ratio >= EDGE_INTENSITY_LIMIT {
        return Err(Error::ModeClipped {
            ratio: edge_ratio,
            limit: EDGE_INTENSITY_LIMIT,
        });
    }
    let amplitude = grid
        .detunings()
        .map(|nu| {
            let d = nu - center_offset;
            Complex64::new((-d * d / (4.0 * sigma * sigma)).exp(), 0.0)
        })
        .collect();
    SpectralMode::new(*grid, amplitude)
}

/// Intensity-FWHM-to-σ conversion used by [`gaussian_mode`], exposed for
/// callers that need the width in rad/fs.
pub fn gaussian_sigma_omega(grid: &FrequencyGrid, fwhm_lambda_nm: f64) -> f64 {
    let lambda0 = grid.center_wavelength_nm();
    let fwhm_omega = TWO_PI * C_NM_PER_FS * fwhm_lambda_nm / (lambda0 * lambda0);
    fwhm_omega / (8.0 * std::f64::consts::LN_2).sqrt()
}

/// Inner product Σ conj(Ψa)·Ψb·Δω of two modes on the same grid.
pub fn overlap(a: &SpectralMode, b: &SpectralMode) -> Result<Complex64> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch);
    }
    let sum: Complex64 = a
        .amplitude
        .iter()
        .zip(&b.amplitude)
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok(sum * a.grid.delta_omega())
}

/// Time-domain envelope E(t) on the window conjugate to a [`FrequencyGrid`].
///
/// `t_k = (k - n/2)·Δt` with `Δt = 2π/span`; the carrier frequency is the
/// grid center and is not included in the envelope.
#[derive(Clone, Debug)]
pub struct TemporalField {
    grid: FrequencyGrid,
    envelope: Vec<Complex64>,
}

impl TemporalField {
    pub fn from_envelope(grid: FrequencyGrid, envelope: Vec<Complex64>) -> Result<Self> {
        if envelope.len() != grid.n_points() {
            return Err(Error::Grid(format!(
                "envelope length {} does not match grid ({} points)",
                envelope.len(),
                grid.n_points()
            )));
        }
        if envelope.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { grid, envelope })
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn envelope(&self) -> &[Complex64] {
        &self.envelope
    }

    pub fn carrier_omega(&self) -> f64 {
        self.grid.center_omega()
    }

    pub fn delta_t(&self) -> f64 {
        self.grid.delta_t()
    }

    pub fn time(&self, k: usize) -> f64 {
        self.grid.time(k)
    }

    pub fn times(&self) -> Vec<f64> {
        (0..self.envelope.len()).map(|k| self.time(k)).collect()
    }

    pub fn intensity(&self) -> Vec<f64> {
        self.envelope.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Σ |E_k|² Δt.
    pub fn norm_sq(&self) -> f64 {
        self.envelope.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.delta_t()
    }

    /// Largest edge-sample intensity relative to the peak intensity.
    pub fn edge_intensity_ratio(&self) -> f64 {
        let peak = self
            .envelope
            .iter()
            .map(|a| a.norm_sqr())
            .fold(0.0_f64, f64::max);
        if peak <= 0.0 {
            return 0.0;
        }
        let n = self.envelope.len();
        self.envelope[0].norm_sqr().max(self.envelope[n - 1].norm_sqr()) / peak
    }
}

/// ω→t transform: E(t_j) = Δω/√(2π) · Σ_k Ψ_k exp(-i ν_k t_j).
pub fn to_time(m: &SpectralMode) -> TemporalField {
    let mut buf = m.amplitude.clone();
    fft::centered_forward(&mut buf);
    let scale = m.grid.delta_omega() / TWO_PI.sqrt();
    for a in &mut buf {
        *a *= scale;
    }
    TemporalField { grid: m.grid, envelope: buf }
}

/// t→ω transform, exact inverse of [`to_time`] on the same grid.
pub fn from_time(f: &TemporalField) -> Result<SpectralMode> {
    let mut buf = f.envelope.clone();
    fft::centered_inverse(&mut buf);
    let scale = f.delta_t() / TWO_PI.sqrt();
    for a in &mut buf {
        *a *= scale;
    }
    SpectralMode::new(f.grid, buf)
}

/// Full width at half maximum of a sampled nonnegative curve, using the
/// outermost crossings of half the global maximum with linear interpolation.
///
/// The outermost convention means a two-peaked curve is quoted by the width
/// spanning both peaks, like a lab spectrometer reading of a structured
/// pulse. The axis may run in either direction.
pub fn fwhm(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::EmptyProfile);
    }
    let peak = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if peak.is_nan() || peak <= 0.0 {
        return Err(Error::EmptyProfile);
    }
    let half = peak / 2.0;
    let n = y.len();

    let mut lo = x[0];
    for i in 1..n {
        if y[i - 1] < half && y[i] >= half {
            let t = (half - y[i - 1]) / (y[i] - y[i - 1]);
            lo = x[i - 1] + t * (x[i] - x[i - 1]);
            break;
        }
        if y[i - 1] >= half {
            lo = x[i - 1];
            break;
        }
    }
    let mut hi = x[n - 1];
    for i in (1..n).rev() {
        if y[i] < half && y[i - 1] >= half {
            let t = (half - y[i]) / (y[i - 1] - y[i]);
            hi = x[i] - t * (x[i] - x[i - 1]);
            break;
        }
        if y[i] >= half {
            hi = x[i];
            break;
        }
    }
    Ok((hi - lo).abs())
}
