//! Spectral-domain transforms applied to modes: material dispersion,
//! Michelson pump modulation inherited by the heralded photon, and the
//! pixelated SLM mask with its GA gene encodings.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::mode::{FrequencyGrid, SpectralMode, C_NM_PER_FS};

const TWO_PI: f64 = std::f64::consts::TAU;

/// Quantization levels per pixel value, standing in for SLM voltage
/// discretization. Transmission steps are 1/4096; phase steps are 2π/4096.
pub const PIXEL_LEVELS: f64 = 4096.0;

/// Gene-to-coefficient half-ranges for the polynomial encodings:
/// c1 in ±500 fs, c2 in ±10⁴ fs², c3 in ±10⁵ fs³, c4 in ±10⁶ fs⁴.
/// The c2 range brackets the 10 cm BK7 GDD (≈ 4.5·10³ fs²) with ~2× margin.
pub const POLY_GENE_SPANS: [f64; 4] = [500.0, 1e4, 1e5, 1e6];

/// Spectral phase φ(ω) = Σ_n c_n (ω-ω₀)ⁿ/n! up to fourth order.
///
/// Units of `c_n`: rad, fs, fs², fs³, fs⁴.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhasePolynomial {
    pub c0_rad: f64,
    pub c1_fs: f64,
    pub c2_fs2: f64,
    pub c3_fs3: f64,
    pub c4_fs4: f64,
}

impl PhasePolynomial {
    pub fn new(c: [f64; 5]) -> Result<Self> {
        if c.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { c0_rad: c[0], c1_fs: c[1], c2_fs2: c[2], c3_fs3: c[3], c4_fs4: c[4] })
    }

    pub fn zero() -> Self {
        Self { c0_rad: 0.0, c1_fs: 0.0, c2_fs2: 0.0, c3_fs3: 0.0, c4_fs4: 0.0 }
    }

    pub fn coefficients(&self) -> [f64; 5] {
        [self.c0_rad, self.c1_fs, self.c2_fs2, self.c3_fs3, self.c4_fs4]
    }

    /// Phase at detuning ν = ω - ω₀.
    pub fn phi_at(&self, nu: f64) -> f64 {
        self.c0_rad
            + nu * (self.c1_fs
                + nu * (self.c2_fs2 / 2.0
                    + nu * (self.c3_fs3 / 6.0 + nu * self.c4_fs4 / 24.0)))
    }
}

impl std::ops::Neg for PhasePolynomial {
    type Output = PhasePolynomial;
    fn neg(self) -> PhasePolynomial {
        PhasePolynomial {
            c0_rad: -self.c0_rad,
            c1_fs: -self.c1_fs,
            c2_fs2: -self.c2_fs2,
            c3_fs3: -self.c3_fs3,
            c4_fs4: -self.c4_fs4,
        }
    }
}

/// Dispersive materials with known Sellmeier coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Material {
    Bk7,
}

impl FromStr for Material {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bk7" => Ok(Material::Bk7),
            other => Err(Error::UnknownMaterial(other.to_string())),
        }
    }
}

// BK7 Sellmeier coefficients, λ in µm.
const BK7_B: [f64; 3] = [1.039_612_12, 0.231_792_344, 1.010_469_45];
const BK7_C: [f64; 3] = [0.006_000_698_67, 0.020_017_914_4, 103.560_653];

/// Refractive index of a material at angular frequency ω (rad/fs).
pub fn refractive_index(material: Material, omega: f64) -> f64 {
    let Material::Bk7 = material;
    let lam_um = TWO_PI * (C_NM_PER_FS / 1000.0) / omega;
    let u = lam_um * lam_um;
    let mut f = 1.0;
    for (b, c) in BK7_B.iter().zip(&BK7_C) {
        f += b * u / (u - c);
    }
    f.sqrt()
}

/// First three ω-derivatives of n(ω), via the chain rule through
/// u = λ² = (2πc/ω)².
fn index_derivatives(material: Material, omega: f64) -> (f64, f64, f64, f64) {
    let Material::Bk7 = material;
    let k = TWO_PI * (C_NM_PER_FS / 1000.0);
    let u = (k / omega).powi(2);
    let du1 = -2.0 * k * k / omega.powi(3);
    let du2 = 6.0 * k * k / omega.powi(4);
    let du3 = -24.0 * k * k / omega.powi(5);

    let mut f = 1.0;
    let (mut fu1, mut fu2, mut fu3) = (0.0, 0.0, 0.0);
    for (b, c) in BK7_B.iter().zip(&BK7_C) {
        let d = u - c;
        f += b * u / d;
        fu1 += -b * c / (d * d);
        fu2 += 2.0 * b * c / (d * d * d);
        fu3 += -6.0 * b * c / (d * d * d * d);
    }
    // f as a function of ω (Faà di Bruno through u)
    let f1 = fu1 * du1;
    let f2 = fu2 * du1 * du1 + fu1 * du2;
    let f3 = fu3 * du1.powi(3) + 3.0 * fu2 * du1 * du2 + fu1 * du3;
    // n = sqrt(f)
    let n = f.sqrt();
    let n1 = f1 / (2.0 * n);
    let n2 = (f2 - 2.0 * n1 * n1) / (2.0 * n);
    let n3 = (f3 - 6.0 * n1 * n2) / (2.0 * n);
    (n, n1, n2, n3)
}

/// Spectral phase acquired by propagating through `length_mm` of material,
/// evaluated at the grid center: returns the GDD (c2) and TOD (c3) of
/// φ(ω) = n(ω)·ω·L/c. Absolute delay and constant phase are irrelevant to
/// the mode shape and left at zero.
pub fn material_phase(
    material: Material,
    length_mm: f64,
    grid: &FrequencyGrid,
) -> Result<PhasePolynomial> {
    if !length_mm.is_finite() || length_mm <= 0.0 {
        return Err(Error::Grid(format!("material length {length_mm} mm must be positive")));
    }
    let omega = grid.center_omega();
    let (_, n1, n2, n3) = index_derivatives(material, omega);
    let c_mm_per_fs = C_NM_PER_FS * 1e-6;
    let scale = length_mm / c_mm_per_fs;
    let c2 = scale * (2.0 * n1 + omega * n2);
    let c3 = scale * (3.0 * n2 + omega * n3);
    PhasePolynomial::new([0.0, 0.0, c2, c3, 0.0])
}

/// Multiply a mode by exp(i φ(ν)); the intensity spectrum is untouched.
pub fn apply_phase(m: &SpectralMode, p: &PhasePolynomial) -> SpectralMode {
    let grid = *m.grid();
    let amplitude = m
        .amplitude()
        .iter()
        .zip(grid.detunings())
        .map(|(a, nu)| a * Complex64::from_polar(1.0, p.phi_at(nu)))
        .collect();
    SpectralMode::new(grid, amplitude).expect("phase modulation preserves norm")
}

/// Michelson modulation: Ψ'(ν) ∝ Ψ(ν)·(1 + exp(i(ν·delay + phi)))/2,
/// renormalized.
///
/// Models the heralded photon inheriting the pump's interferometric
/// modulation: the sinusoidal spectral amplitude has period 2π/delay, and
/// `phi` places its peak (0) or valley (π) at the spectrum center.
pub fn michelson_modulate(m: &SpectralMode, delay_fs: f64, phi: f64) -> Result<SpectralMode> {
    if !delay_fs.is_finite() || delay_fs < 0.0 {
        return Err(Error::NegativeDelay(delay_fs));
    }
    let grid = *m.grid();
    let amplitude: Vec<Complex64> = m
        .amplitude()
        .iter()
        .zip(grid.detunings())
        .map(|(a, nu)| {
            let arm = Complex64::from_polar(1.0, nu * delay_fs + phi);
            a * (Complex64::new(1.0, 0.0) + arm) * 0.5
        })
        .collect();
    let residual: f64 =
        amplitude.iter().map(|a| a.norm_sqr()).sum::<f64>() * grid.delta_omega();
    if residual < 1e-12 {
        return Err(Error::DestructiveModulation(residual));
    }
    SpectralMode::new(grid, amplitude)
}

fn quantize_transmission(t: f64) -> f64 {
    (t.clamp(0.0, 1.0) * PIXEL_LEVELS).round() / PIXEL_LEVELS
}

fn wrap_phase(phi: f64) -> f64 {
    let w = phi.rem_euclid(TWO_PI);
    if w >= TWO_PI {
        0.0
    } else {
        w
    }
}

fn quantize_phase(phi: f64) -> f64 {
    let step = TWO_PI / PIXEL_LEVELS;
    let k = (wrap_phase(phi) / step).round();
    if k >= PIXEL_LEVELS {
        0.0
    } else {
        k * step
    }
}

/// Per-pixel amplitude and phase modulation in the Fourier plane.
///
/// Pixels cover a contiguous block of `n_points / n_pixels` frequency
/// samples each, centered on the grid; samples outside the mapped window are
/// passed through unmodified (t = 1, φ = 0).
#[derive(Clone, Debug, PartialEq)]
pub struct SlmMask {
    transmission: Vec<f64>,
    phase: Vec<f64>,
}

impl SlmMask {
    pub fn new(transmission: Vec<f64>, phase: Vec<f64>) -> Result<Self> {
        if transmission.len() != phase.len() || transmission.is_empty() {
            return Err(Error::PixelMismatch(transmission.len(), phase.len()));
        }
        if transmission.iter().any(|t| !(0.0..=1.0).contains(t))
            || phase.iter().any(|p| !p.is_finite())
        {
            return Err(Error::NonFinite);
        }
        let phase = phase.into_iter().map(wrap_phase).collect();
        Ok(Self { transmission, phase })
    }

    /// All-pass mask.
    pub fn identity(n_pixels: usize) -> Self {
        Self { transmission: vec![1.0; n_pixels], phase: vec![0.0; n_pixels] }
    }

    pub fn n_pixels(&self) -> usize {
        self.transmission.len()
    }

    pub fn transmission(&self) -> &[f64] {
        &self.transmission
    }

    pub fn phase(&self) -> &[f64] {
        &self.phase
    }

    /// Sequential application of `self` then `other`: transmissions multiply,
    /// phases add.
    pub fn compose(&self, other: &SlmMask) -> Result<SlmMask> {
        if self.n_pixels() != other.n_pixels() {
            return Err(Error::PixelMismatch(self.n_pixels(), other.n_pixels()));
        }
        let transmission = self
            .transmission
            .iter()
            .zip(&other.transmission)
            .map(|(a, b)| a * b)
            .collect();
        let phase = self
            .phase
            .iter()
            .zip(&other.phase)
            .map(|(a, b)| wrap_phase(a + b))
            .collect();
        Ok(SlmMask { transmission, phase })
    }

    /// New mask with per-pixel phase offsets added (wrapped and quantized,
    /// as the device would hold them).
    pub fn with_added_phase(&self, added: &[f64]) -> Result<SlmMask> {
        if added.len() != self.n_pixels() {
            return Err(Error::PixelMismatch(self.n_pixels(), added.len()));
        }
        let phase = self
            .phase
            .iter()
            .zip(added)
            .map(|(p, d)| quantize_phase(p + d))
            .collect();
        Ok(SlmMask { transmission: self.transmission.clone(), phase })
    }

    /// Gene vector whose decoding reproduces this mask (PixelAmpPhase
    /// encoding). Exact for masks already on the quantization lattice.
    pub fn to_gene_vector(&self) -> GeneVector {
        let n = self.n_pixels();
        let mut genes = Vec::with_capacity(2 * n);
        genes.extend(self.transmission.iter().copied());
        genes.extend(self.phase.iter().map(|p| p / TWO_PI));
        GeneVector::new(Encoding::PixelAmpPhase, n, genes)
            .expect("mask values are valid genes")
    }
}

/// Mapping of mask pixels onto a frequency grid.
#[derive(Clone, Copy, Debug)]
pub struct PixelWindow {
    pub start: usize,
    pub block_len: usize,
    pub n_pixels: usize,
}

impl PixelWindow {
    pub fn new(grid: &FrequencyGrid, n_pixels: usize) -> Result<Self> {
        let n = grid.n_points();
        if n_pixels == 0 || n_pixels > n {
            return Err(Error::MaskTooFine { n_pixels, n_points: n });
        }
        let block_len = n / n_pixels;
        let start = (n - block_len * n_pixels) / 2;
        Ok(Self { start, block_len, n_pixels })
    }

    /// Pixel index covering grid sample `k`, if inside the window.
    pub fn pixel_of(&self, k: usize) -> Option<usize> {
        if k < self.start {
            return None;
        }
        let p = (k - self.start) / self.block_len;
        (p < self.n_pixels).then_some(p)
    }

    /// Detuning of the center of pixel `p`.
    pub fn pixel_center(&self, grid: &FrequencyGrid, p: usize) -> f64 {
        let first = self.start + p * self.block_len;
        let last = first + self.block_len - 1;
        0.5 * (grid.detuning(first) + grid.detuning(last))
    }
}

/// Apply a mask to a mode. Returns the renormalized mode together with the
/// pre-normalization throughput Σ|Ψ'|²Δω — amplitude shaping costs LO power,
/// not mode validity.
pub fn slm_apply(m: &SpectralMode, mask: &SlmMask) -> Result<(SpectralMode, f64)> {
    let grid = *m.grid();
    let window = PixelWindow::new(&grid, mask.n_pixels())?;
    let amplitude: Vec<Complex64> = m
        .amplitude()
        .iter()
        .enumerate()
        .map(|(k, a)| match window.pixel_of(k) {
            Some(p) => {
                a * mask.transmission[p] * Complex64::from_polar(1.0, mask.phase[p])
            }
            None => *a,
        })
        .collect();
    let throughput: f64 =
        amplitude.iter().map(|a| a.norm_sqr()).sum::<f64>() * grid.delta_omega();
    if throughput < 1e-12 {
        return Err(Error::ZeroThroughput(throughput));
    }
    Ok((SpectralMode::new(grid, amplitude)?, throughput))
}

/// GA-evolvable encodings of an [`SlmMask`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Encoding {
    /// One phase gene per pixel; full transmission.
    PixelPhase,
    /// One transmission gene and one phase gene per pixel.
    PixelAmpPhase,
    /// Five genes mapped to polynomial phase coefficients; the first slot
    /// aligns positionally with c0, which is pinned to zero (a constant
    /// phase never affects the efficiency).
    PolyPhase,
    /// Polynomial phase genes plus one transmission gene per pixel.
    PolyPlusAmpPixels,
}

impl Encoding {
    pub fn gene_count(&self, n_pixels: usize) -> usize {
        match self {
            Encoding::PixelPhase => n_pixels,
            Encoding::PixelAmpPhase => 2 * n_pixels,
            Encoding::PolyPhase => 5,
            Encoding::PolyPlusAmpPixels => 5 + n_pixels,
        }
    }
}

/// Raw genes in [0, 1] with their decoding recipe.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneVector {
    encoding: Encoding,
    n_pixels: usize,
    genes: Vec<f64>,
}

impl GeneVector {
    pub fn new(encoding: Encoding, n_pixels: usize, genes: Vec<f64>) -> Result<Self> {
        let expected = encoding.gene_count(n_pixels);
        if genes.len() != expected {
            return Err(Error::GeneCount { expected, got: genes.len() });
        }
        for (i, g) in genes.iter().enumerate() {
            if !(0.0..=1.0).contains(g) {
                return Err(Error::GeneRange { index: i, value: *g });
            }
        }
        Ok(Self { encoding, n_pixels, genes })
    }

    pub fn encoding(&self) -> Encoding {
        self.encoding
    }

    pub fn n_pixels(&self) -> usize {
        self.n_pixels
    }

    pub fn genes(&self) -> &[f64] {
        &self.genes
    }

    /// Polynomial decoded from five [0,1] genes: midpoint 0.5 maps to zero
    /// for every coefficient.
    fn poly_from_genes(genes: &[f64]) -> PhasePolynomial {
        debug_assert_eq!(genes.len(), 5);
        let mut c = [0.0; 5];
        for (i, span) in POLY_GENE_SPANS.iter().enumerate() {
            c[i + 1] = (2.0 * genes[i + 1] - 1.0) * span;
        }
        PhasePolynomial::new(c).expect("genes in [0,1] give finite coefficients")
    }

    /// Deterministic decoding to a quantized mask on `grid`.
    pub fn decode(&self, grid: &FrequencyGrid) -> Result<SlmMask> {
        let n = self.n_pixels;
        let window = PixelWindow::new(grid, n)?;
        let (transmission, phase): (Vec<f64>, Vec<f64>) = match self.encoding {
            Encoding::PixelPhase => (
                vec![1.0; n],
                self.genes.iter().map(|g| quantize_phase(TWO_PI * g)).collect(),
            ),
            Encoding::PixelAmpPhase => (
                self.genes[..n].iter().map(|g| quantize_transmission(*g)).collect(),
                self.genes[n..].iter().map(|g| quantize_phase(TWO_PI * g)).collect(),
            ),
            Encoding::PolyPhase => {
                let poly = Self::poly_from_genes(&self.genes);
                let phase = (0..n)
                    .map(|p| quantize_phase(poly.phi_at(window.pixel_center(grid, p))))
                    .collect();
                (vec![1.0; n], phase)
            }
            Encoding::PolyPlusAmpPixels => {
                let poly = Self::poly_from_genes(&self.genes[..5]);
                let phase = (0..n)
                    .map(|p| quantize_phase(poly.phi_at(window.pixel_center(grid, p))))
                    .collect();
                let transmission =
                    self.genes[5..].iter().map(|g| quantize_transmission(*g)).collect();
                (transmission, phase)
            }
        };
        SlmMask::new(transmission, phase)
    }
}

/// Convenience wrapper matching the operation vocabulary: decode genes
/// against a grid.
pub fn decode_genes(g: &GeneVector, grid: &FrequencyGrid) -> Result<SlmMask> {
    g.decode(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mode::{fwhm, gaussian_mode, gaussian_sigma_omega, overlap, to_time};

    fn grid() -> FrequencyGrid {
        FrequencyGrid::default_800nm()
    }

    // Finite-difference oracle for the material phase: central stencils on
    // φ(ω) = n(ω)·ω·L/c, independent of the analytic derivative path.
    fn fd_material_phase(length_mm: f64, omega: f64) -> (f64, f64) {
        let c_mm_per_fs = C_NM_PER_FS * 1e-6;
        let phi = |w: f64| refractive_index(Material::Bk7, w) * w * length_mm / c_mm_per_fs;
        let h = 5e-3;
        let c2 = (-phi(omega + 2.0 * h) + 16.0 * phi(omega + h) - 30.0 * phi(omega)
            + 16.0 * phi(omega - h)
            - phi(omega - 2.0 * h))
            / (12.0 * h * h);
        let c3 = (phi(omega + 2.0 * h) - 2.0 * phi(omega + h) + 2.0 * phi(omega - h)
            - phi(omega - 2.0 * h))
            / (2.0 * h * h * h);
        (c2, c3)
    }

    #[test]
    fn bk7_dispersion_matches_finite_difference_oracle_and_golden_values() {
        let g = grid();
        let p = material_phase(Material::Bk7, 100.0, &g).unwrap();
        let (c2_fd, c3_fd) = fd_material_phase(100.0, g.center_omega());
        assert!((p.c2_fs2 - c2_fd).abs() / c2_fd.abs() < 1e-6, "c2 {} vs {}", p.c2_fs2, c2_fd);
        assert!((p.c3_fs3 - c3_fd).abs() / c3_fd.abs() < 1e-4, "c3 {} vs {}", p.c3_fs3, c3_fd);
        // Frozen pre-build oracle values for 100 mm BK7 on the 800 nm grid.
        assert!((p.c2_fs2 - 4465.1797).abs() < 0.5, "c2 = {}", p.c2_fs2);
        assert!((p.c3_fs3 - 3210.16).abs() < 1.0, "c3 = {}", p.c3_fs3);
        assert_eq!(p.c0_rad, 0.0);
        assert_eq!(p.c1_fs, 0.0);
        assert_eq!(p.c4_fs4, 0.0);
        // Known index at 800 nm as a sanity anchor.
        assert!((refractive_index(Material::Bk7, g.center_omega()) - 1.5108).abs() < 1e-3);
    }

    #[test]
    fn material_phase_is_linear_in_length() {
        let g = grid();
        let p100 = material_phase(Material::Bk7, 100.0, &g).unwrap();
        let p200 = material_phase(Material::Bk7, 200.0, &g).unwrap();
        assert_eq!(p200.c2_fs2, 2.0 * p100.c2_fs2);
        assert_eq!(p200.c3_fs3, 2.0 * p100.c3_fs3);
        let p_tiny = material_phase(Material::Bk7, 1e-6, &g).unwrap();
        assert!((p_tiny.c2_fs2 - 1e-8 * p100.c2_fs2).abs() < 1e-12);
        assert!(material_phase(Material::Bk7, 0.0, &g).is_err());
    }

    #[test]
    fn unknown_material_is_rejected() {
        assert!(matches!("BK7".parse::<Material>(), Ok(Material::Bk7)));
        assert!(matches!(
            "sf11".parse::<Material>(),
            Err(Error::UnknownMaterial(_))
        ));
    }

    #[test]
    fn zero_polynomial_is_the_identity() {
        let m = gaussian_mode(&grid(), 0.0, 9.4).unwrap();
        let out = apply_phase(&m, &PhasePolynomial::zero());
        for (a, b) in m.amplitude().iter().zip(out.amplitude()) {
            assert!((a - b).norm() < 1e-15);
        }
    }

    #[test]
    fn chirp_stretches_duration_by_the_analytic_factor() {
        let g = FrequencyGrid::new(800.0, 1.2, 1024).unwrap();
        let m = gaussian_mode(&g, 0.0, 9.4).unwrap();
        let sigma = gaussian_sigma_omega(&g, 9.4);
        let c2 = 4400.0;
        let p = PhasePolynomial::new([0.0, 0.0, c2, 0.0, 0.0]).unwrap();
        let chirped = apply_phase(&m, &p);
        let f0 = to_time(&m);
        let f1 = to_time(&chirped);
        let w0 = fwhm(&f0.times(), &f0.intensity()).unwrap();
        let w1 = fwhm(&f1.times(), &f1.intensity()).unwrap();
        let expected = (1.0 + (2.0 * c2 * sigma * sigma).powi(2)).sqrt();
        assert!(
            (w1 / w0 - expected).abs() / expected < 2e-3,
            "stretch {} vs {}",
            w1 / w0,
            expected
        );
    }

    #[test]
    fn phase_then_inverse_phase_round_trips() {
        let m = gaussian_mode(&grid(), 0.0, 9.4).unwrap();
        let p = PhasePolynomial::new([0.3, 12.0, 4400.0, 2.0e4, 1.0e5]).unwrap();
        let back = apply_phase(&apply_phase(&m, &p), &-p);
        for (a, b) in m.amplitude().iter().zip(back.amplitude()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn michelson_pi_digs_a_hole_and_leaves_two_symmetric_peaks() {
        let g = grid();
        let m = gaussian_mode(&g, 0.0, 9.4).unwrap();
        let out = michelson_modulate(&m, 150.0, std::f64::consts::PI).unwrap();
        let center = g.n_points() / 2;
        assert!(out.amplitude()[center].norm() < 1e-12);
        let intensity = out.intensity();
        let peak = intensity.iter().cloned().fold(0.0, f64::max);
        let mut maxima = Vec::new();
        for k in 1..intensity.len() - 1 {
            if intensity[k] > intensity[k - 1]
                && intensity[k] > intensity[k + 1]
                && intensity[k] > 0.1 * peak
            {
                maxima.push(k as i64 - center as i64);
            }
        }
        assert_eq!(maxima.len(), 2, "maxima at {maxima:?}");
        assert_eq!(maxima[0], -maxima[1]);
    }

    #[test]
    fn michelson_zero_delay_zero_phase_is_identity() {
        let m = gaussian_mode(&grid(), 0.0, 9.4).unwrap();
        let out = michelson_modulate(&m, 0.0, 0.0).unwrap();
        for (a, b) in m.amplitude().iter().zip(out.amplitude()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn michelson_zero_phase_narrows_the_spectrum() {
        let g = grid();
        let m = gaussian_mode(&g, 0.0, 9.4).unwrap();
        let out = michelson_modulate(&m, 150.0, 0.0).unwrap();
        let nus: Vec<f64> = g.detunings().collect();
        let w_in = fwhm(&nus, &m.intensity()).unwrap();
        let w_out = fwhm(&nus, &out.intensity()).unwrap();
        assert!(w_out < w_in, "{w_out} !< {w_in}");
        // single-peaked: the center stays the global maximum
        let center = g.n_points() / 2;
        let peak = out.intensity().iter().cloned().fold(0.0, f64::max);
        assert!((out.intensity()[center] - peak).abs() < 1e-12);
    }

    #[test]
    fn fully_destructive_modulation_is_an_error() {
        let m = gaussian_mode(&grid(), 0.0, 9.4).unwrap();
        assert!(matches!(
            michelson_modulate(&m, 0.0, std::f64::consts::PI),
            Err(Error::DestructiveModulation(_))
        ));
        assert!(matches!(
            michelson_modulate(&m, -1.0, 0.0),
            Err(Error::NegativeDelay(_))
        ));
    }

    #[test]
    fn all_half_pixel_phase_genes_give_a_uniform_pi_mask() {
        let g = GeneVector::new(Encoding::PixelPhase, 128, vec![0.5; 128]).unwrap();
        let mask = g.decode(&grid()).unwrap();
        for p in 0..128 {
            assert_eq!(mask.transmission()[p], 1.0);
            assert_eq!(mask.phase()[p], std::f64::consts::PI);
        }
    }

    #[test]
    fn midpoint_poly_genes_decode_to_the_identity_mask() {
        let g = GeneVector::new(Encoding::PolyPhase, 128, vec![0.5; 5]).unwrap();
        let mask = g.decode(&grid()).unwrap();
        assert_eq!(mask, SlmMask::identity(128));
    }

    #[test]
    fn pixel_amp_phase_decoding_stays_on_the_quantization_lattice() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(99);
        let g = grid();
        for _ in 0..1000 {
            let genes: Vec<f64> = (0..256).map(|_| rng.random::<f64>()).collect();
            let gv = GeneVector::new(Encoding::PixelAmpPhase, 128, genes).unwrap();
            let mask = gv.decode(&g).unwrap();
            for p in 0..128 {
                let t = mask.transmission()[p];
                let phi = mask.phase()[p];
                assert!((0.0..=1.0).contains(&t));
                assert!((0.0..TWO_PI).contains(&phi));
                assert!((t * PIXEL_LEVELS - (t * PIXEL_LEVELS).round()).abs() < 1e-9);
                let steps = phi / (TWO_PI / PIXEL_LEVELS);
                assert!((steps - steps.round()).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn poly_plus_amp_pixels_decodes_both_parts() {
        let g = grid();
        let mut genes = vec![0.5; 5 + 128];
        for (p, slot) in genes.iter_mut().skip(5).enumerate() {
            *slot = p as f64 / 127.0;
        }
        let gv = GeneVector::new(Encoding::PolyPlusAmpPixels, 128, genes.clone()).unwrap();
        let mask = gv.decode(&g).unwrap();
        // midpoint poly genes give a flat phase; transmissions follow the
        // pixel genes on the quantization lattice
        for p in 0..128 {
            assert_eq!(mask.phase()[p], 0.0);
            let want = quantize_transmission(p as f64 / 127.0);
            assert_eq!(mask.transmission()[p], want);
        }
        // a non-midpoint chirp gene bends the pixel phases quadratically
        genes[2] = 0.75;
        let gv = GeneVector::new(Encoding::PolyPlusAmpPixels, 128, genes).unwrap();
        let mask = gv.decode(&g).unwrap();
        let window = PixelWindow::new(&g, 128).unwrap();
        let c2 = 0.5 * POLY_GENE_SPANS[1];
        for p in [10usize, 64, 100] {
            let nu = window.pixel_center(&g, p);
            let want = quantize_phase(0.5 * c2 * nu * nu);
            assert!((mask.phase()[p] - want).abs() < 1e-12);
        }
    }

    #[test]
    fn gene_count_and_range_are_enforced() {
        assert!(matches!(
            GeneVector::new(Encoding::PixelPhase, 128, vec![0.5; 64]),
            Err(Error::GeneCount { expected: 128, got: 64 })
        ));
        assert!(matches!(
            GeneVector::new(Encoding::PolyPhase, 128, vec![0.5, 0.5, 1.5, 0.5, 0.5]),
            Err(Error::GeneRange { index: 2, .. })
        ));
    }

    #[test]
    fn identity_mask_passes_the_mode_through() {
        let m = gaussian_mode(&grid(), 0.0, 9.4).unwrap();
        let (out, throughput) = slm_apply(&m, &SlmMask::identity(128)).unwrap();
        assert!((throughput - 1.0).abs() < 1e-12);
        for (a, b) in m.amplitude().iter().zip(out.amplitude()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn pi_step_on_half_of_a_symmetric_double_peak_orthogonalizes() {
        let g = grid();
        let m = michelson_modulate(
            &gaussian_mode(&g, 0.0, 9.4).unwrap(),
            150.0,
            std::f64::consts::PI,
        )
        .unwrap();
        let mut phase = vec![0.0; 128];
        for p in phase.iter_mut().skip(64) {
            *p = std::f64::consts::PI;
        }
        let mask = SlmMask::new(vec![1.0; 128], phase).unwrap();
        let (out, _) = slm_apply(&m, &mask).unwrap();
        let c = overlap(&m, &out).unwrap();
        assert!(c.norm() < 1e-6, "overlap {}", c.norm());
    }

    #[test]
    fn checkerboard_amplitude_mask_halves_the_throughput() {
        let g = grid();
        let flat = SpectralMode::new(
            g,
            vec![Complex64::new(1.0, 0.0); g.n_points()],
        )
        .unwrap();
        let transmission: Vec<f64> =
            (0..128).map(|p| if p % 2 == 0 { 1.0 } else { 0.0 }).collect();
        let mask = SlmMask::new(transmission, vec![0.0; 128]).unwrap();
        let (_, throughput) = slm_apply(&flat, &mask).unwrap();
        assert!((throughput - 0.5).abs() < 1.0 / 128.0, "throughput {throughput}");
    }

    #[test]
    fn all_blocking_mask_is_a_throughput_error() {
        let m = gaussian_mode(&grid(), 0.0, 9.4).unwrap();
        let mask = SlmMask::new(vec![0.0; 128], vec![0.0; 128]).unwrap();
        assert!(matches!(slm_apply(&m, &mask), Err(Error::ZeroThroughput(_))));
    }

    #[test]
    fn mask_composition_matches_sequential_application() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(5);
        let g = grid();
        let m = gaussian_mode(&g, 0.0, 9.4).unwrap();
        for _ in 0..20 {
            let a = SlmMask::new(
                (0..128).map(|_| 0.2 + 0.8 * rng.random::<f64>()).collect(),
                (0..128).map(|_| TWO_PI * rng.random::<f64>()).collect(),
            )
            .unwrap();
            let b = SlmMask::new(
                (0..128).map(|_| 0.2 + 0.8 * rng.random::<f64>()).collect(),
                (0..128).map(|_| TWO_PI * rng.random::<f64>()).collect(),
            )
            .unwrap();
            let (seq, _) = slm_apply(&slm_apply(&m, &a).unwrap().0, &b).unwrap();
            let (com, _) = slm_apply(&m, &a.compose(&b).unwrap()).unwrap();
            for (x, y) in seq.amplitude().iter().zip(com.amplitude()) {
                assert!((x - y).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn decode_of_encode_reproduces_representable_masks() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(11);
        let g = grid();
        let genes: Vec<f64> = (0..256).map(|_| rng.random::<f64>()).collect();
        let gv = GeneVector::new(Encoding::PixelAmpPhase, 128, genes).unwrap();
        let mask = gv.decode(&g).unwrap();
        let back = mask.to_gene_vector().decode(&g).unwrap();
        assert_eq!(mask, back);
    }
}
