//! Scenario configuration: JSON schema with strict validation, bundled
//! configurations, and resolution into concrete modes.

use serde::{Deserialize, Serialize};
use std::path::Path;

use crate::error::{Error, Result};
use crate::evolve::GaParams;
use crate::measurement::MIN_BATCH;
use crate::mode::{gaussian_mode, FrequencyGrid, SpectralMode};
use crate::shaping::{
    apply_phase, material_phase, michelson_modulate, Encoding, Material, PhasePolynomial,
};
use crate::tomography::WignerGridSpec;

/// Pixel count used when a scenario runs without a GA stage.
pub const DEFAULT_N_PIXELS: usize = 128;

fn d_wavelength() -> f64 {
    800.0
}
fn d_span() -> f64 {
    0.30
}
fn d_points() -> usize {
    1024
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default = "d_wavelength")]
    pub center_wavelength_nm: f64,
    #[serde(default = "d_span")]
    pub span_rad_per_fs: f64,
    #[serde(default = "d_points")]
    pub n_points: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            center_wavelength_nm: d_wavelength(),
            span_rad_per_fs: d_span(),
            n_points: d_points(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MichelsonSpec {
    pub delay_fs: f64,
    pub phi_rad: f64,
}

/// Recipe for a photon or LO mode: base Gaussian plus optional shaping
/// stages (all multiplicative in the spectral domain, so their order is
/// immaterial).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeRecipe {
    pub fwhm_nm: f64,
    #[serde(default)]
    pub center_offset_rad_per_fs: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bk7_mm: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub michelson: Option<MichelsonSpec>,
    /// Extra quadratic phase on top of everything else, in fs².
    #[serde(default)]
    pub extra_gdd_fs2: f64,
}

impl ModeRecipe {
    pub fn gaussian(fwhm_nm: f64) -> Self {
        Self {
            fwhm_nm,
            center_offset_rad_per_fs: 0.0,
            bk7_mm: None,
            michelson: None,
            extra_gdd_fs2: 0.0,
        }
    }

    pub fn build(&self, grid: &FrequencyGrid) -> Result<SpectralMode> {
        let mut m = gaussian_mode(grid, self.center_offset_rad_per_fs, self.fwhm_nm)?;
        if let Some(mi) = &self.michelson {
            m = michelson_modulate(&m, mi.delay_fs, mi.phi_rad)?;
        }
        if let Some(length) = self.bk7_mm {
            m = apply_phase(&m, &material_phase(Material::Bk7, length, grid)?);
        }
        if self.extra_gdd_fs2 != 0.0 {
            let p = PhasePolynomial::new([0.0, 0.0, self.extra_gdd_fs2, 0.0, 0.0])?;
            m = apply_phase(&m, &p);
        }
        Ok(m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSpec {
    pub eta_sys: f64,
    /// Optional extra entropy folded into every measurement substream.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

fn d_n_pixels() -> usize {
    DEFAULT_N_PIXELS
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaSpec {
    pub encoding: Encoding,
    #[serde(default = "d_n_pixels")]
    pub n_pixels: usize,
    #[serde(default)]
    pub params: GaParams,
}

fn d_samples() -> usize {
    100_000
}
fn d_n_max() -> usize {
    crate::tomography::DEFAULT_N_MAX
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TomoSpec {
    #[serde(default = "d_samples")]
    pub samples: usize,
    #[serde(default = "d_n_max")]
    pub n_max: usize,
    #[serde(default)]
    pub wigner: WignerGridSpec,
}

fn d_trace() -> usize {
    128
}
fn d_max_iter() -> usize {
    600
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrogSpec {
    #[serde(default = "d_trace")]
    pub n_trace: usize,
    #[serde(default = "d_max_iter")]
    pub max_iterations: usize,
}

fn d_steps() -> usize {
    16
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseScanSpec {
    /// Number of equally spaced φ_LO points over [0, 2π).
    #[serde(default = "d_steps")]
    pub steps: usize,
    /// Explicit φ_LO list overriding `steps`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phis_rad: Option<Vec<f64>>,
    #[serde(default = "d_samples")]
    pub samples: usize,
}

impl Default for PhaseScanSpec {
    fn default() -> Self {
        Self { steps: d_steps(), phis_rad: None, samples: d_samples() }
    }
}

fn d_min_teeth() -> usize {
    3
}
fn d_tooth_cut() -> f64 {
    0.1
}
fn d_comb_samples() -> usize {
    20_000
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CombSpec {
    #[serde(default = "d_min_teeth")]
    pub min_teeth: usize,
    /// Teeth count relative to the strongest tooth's peak.
    #[serde(default = "d_tooth_cut")]
    pub tooth_threshold: f64,
    /// Samples per point of the adjacent-tooth phase scans.
    #[serde(default = "d_comb_samples")]
    pub scan_samples: usize,
}

impl Default for CombSpec {
    fn default() -> Self {
        Self {
            min_teeth: d_min_teeth(),
            tooth_threshold: d_tooth_cut(),
            scan_samples: d_comb_samples(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalysisSpec {
    /// Fresh-batch size for the final η̂ at the optimum.
    pub final_samples: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tomography: Option<TomoSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frog: Option<FrogSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase_scan: Option<PhaseScanSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comb: Option<CombSpec>,
}

impl Default for AnalysisSpec {
    fn default() -> Self {
        Self {
            final_samples: d_samples(),
            tomography: None,
            frog: None,
            phase_scan: None,
            comb: None,
        }
    }
}

/// One experiment configuration: what the photon is, what the LO starts as,
/// how it is detected, whether and how the GA runs, and which analyses
/// follow.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub notes: Option<String>,
    #[serde(default)]
    pub grid: GridSpec,
    pub signal: ModeRecipe,
    pub base_lo: ModeRecipe,
    pub channel: ChannelSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ga: Option<GaSpec>,
    #[serde(default)]
    pub analysis: AnalysisSpec,
}

/// Scenario together with its resolved modes.
#[derive(Clone, Debug)]
pub struct ResolvedScenario {
    pub grid: FrequencyGrid,
    pub signal: SpectralMode,
    pub base_lo: SpectralMode,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Scenario> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let scenario: Scenario = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::Scenario(format!("at `{path}`: {}", e.inner()))
        })?;
        scenario.validate()?;
        Ok(scenario)
    }

    /// Resolve and check everything that can fail before a run starts.
    pub fn validate(&self) -> Result<()> {
        self.resolve()?;
        Ok(())
    }

    pub fn resolve(&self) -> Result<ResolvedScenario> {
        let grid = FrequencyGrid::new(
            self.grid.center_wavelength_nm,
            self.grid.span_rad_per_fs,
            self.grid.n_points,
        )?;
        let signal = self
            .signal
            .build(&grid)
            .map_err(|e| Error::Scenario(format!("{}: signal: {e}", self.name)))?;
        let base_lo = self
            .base_lo
            .build(&grid)
            .map_err(|e| Error::Scenario(format!("{}: base_lo: {e}", self.name)))?;
        if !(0.0..=1.0).contains(&self.channel.eta_sys) {
            return Err(Error::Scenario(format!(
                "{}: channel.eta_sys {} outside [0, 1]",
                self.name, self.channel.eta_sys
            )));
        }
        if let Some(ga) = &self.ga {
            ga.params
                .validate()
                .map_err(|e| Error::Scenario(format!("{}: ga: {e}", self.name)))?;
            if ga.n_pixels == 0 || ga.n_pixels > grid.n_points() {
                return Err(Error::Scenario(format!(
                    "{}: ga.n_pixels {} does not map onto the grid",
                    self.name, ga.n_pixels
                )));
            }
        }
        let a = &self.analysis;
        if a.final_samples < MIN_BATCH {
            return Err(Error::Scenario(format!(
                "{}: analysis.final_samples {} below minimum {MIN_BATCH}",
                self.name, a.final_samples
            )));
        }
        if let Some(t) = &a.tomography {
            if t.samples < 1000 {
                return Err(Error::Scenario(format!(
                    "{}: tomography.samples {} below minimum 1000",
                    self.name, t.samples
                )));
            }
            if t.wigner.n_points < 3 || t.wigner.n_points % 2 == 0 || t.wigner.half_extent <= 0.0 {
                return Err(Error::Scenario(format!(
                    "{}: wigner grid must be odd-sized and positive",
                    self.name
                )));
            }
        }
        if let Some(f) = &a.frog {
            if !f.n_trace.is_power_of_two() || f.n_trace < 64 || f.n_trace > grid.n_points() {
                return Err(Error::Scenario(format!(
                    "{}: frog.n_trace {} must be a power of two in [64, {}]",
                    self.name,
                    f.n_trace,
                    grid.n_points()
                )));
            }
            if f.max_iterations == 0 {
                return Err(Error::Scenario(format!(
                    "{}: frog.max_iterations must be positive",
                    self.name
                )));
            }
        }
        if let Some(s) = &a.phase_scan {
            let count = s.phis_rad.as_ref().map_or(s.steps, |p| p.len());
            if count < 4 {
                return Err(Error::Scenario(format!(
                    "{}: phase scan needs at least 4 points, got {count}",
                    self.name
                )));
            }
            if s.samples < MIN_BATCH {
                return Err(Error::Scenario(format!(
                    "{}: phase_scan.samples {} below minimum {MIN_BATCH}",
                    self.name, s.samples
                )));
            }
        }
        if let Some(c) = &a.comb {
            if c.min_teeth < 3 {
                return Err(Error::Scenario(format!(
                    "{}: comb.min_teeth must be at least 3",
                    self.name
                )));
            }
            if !(0.0 < c.tooth_threshold && c.tooth_threshold < 1.0) {
                return Err(Error::Scenario(format!(
                    "{}: comb.tooth_threshold must be in (0, 1)",
                    self.name
                )));
            }
        }
        Ok(ResolvedScenario { grid, signal, base_lo })
    }

    /// φ_LO points of the phase scan.
    pub fn scan_phis(spec: &PhaseScanSpec) -> Vec<f64> {
        match &spec.phis_rad {
            Some(p) => p.clone(),
            None => (0..spec.steps)
                .map(|j| std::f64::consts::TAU * j as f64 / spec.steps as f64)
                .collect(),
        }
    }
}

/// Load and validate a scenario file, reporting schema violations with
/// field paths.
pub fn load_scenario(path: &Path) -> Result<Scenario> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Scenario(format!("{}: {e}", path.display())))?;
    Scenario::from_json(&text)
        .map_err(|e| Error::Scenario(format!("{}: {e}", path.display())))
}

/// Bundled configurations mirroring the five experimental arrangements plus
/// the spectral-comb extension.
pub const BUNDLED_NAMES: [&str; 6] = [
    "fig3_phase_only",
    "fig3_full",
    "fig4_phi0",
    "fig4_phi_pi",
    "fig5_qubit",
    "comb_qudit",
];

/// Fetch a bundled scenario by name (with or without the `.json` suffix).
pub fn bundled(name: &str) -> Result<Scenario> {
    let stem = name.strip_suffix(".json").unwrap_or(name);
    let text = match stem {
        "fig3_phase_only" => include_str!("../../scenarios/fig3_phase_only.json"),
        "fig3_full" => include_str!("../../scenarios/fig3_full.json"),
        "fig4_phi0" => include_str!("../../scenarios/fig4_phi0.json"),
        "fig4_phi_pi" => include_str!("../../scenarios/fig4_phi_pi.json"),
        "fig5_qubit" => include_str!("../../scenarios/fig5_qubit.json"),
        "comb_qudit" => include_str!("../../scenarios/comb_qudit.json"),
        other => {
            return Err(Error::Scenario(format!(
                "no bundled scenario `{other}` (available: {})",
                BUNDLED_NAMES.join(", ")
            )))
        }
    };
    Scenario::from_json(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_scenarios_validate() {
        for name in BUNDLED_NAMES {
            let s = bundled(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(s.name, name);
        }
        assert!(bundled("fig5_qubit.json").is_ok());
        assert!(bundled("nonexistent").is_err());
    }

    #[test]
    fn fig3_is_the_dispersed_photon_with_polynomial_genes() {
        let s = bundled("fig3_phase_only").unwrap();
        assert_eq!(s.signal.bk7_mm, Some(100.0));
        assert!(s.signal.michelson.is_none());
        let ga = s.ga.as_ref().unwrap();
        assert_eq!(ga.encoding, Encoding::PolyPhase);
        let full = bundled("fig3_full").unwrap();
        assert_eq!(full.ga.as_ref().unwrap().encoding, Encoding::PixelAmpPhase);
    }

    #[test]
    fn fig5_is_the_qubit_scan() {
        let s = bundled("fig5_qubit").unwrap();
        let mi = s.signal.michelson.as_ref().unwrap();
        assert_eq!(mi.delay_fs, 150.0);
        assert!((mi.phi_rad - std::f64::consts::PI).abs() < 1e-12);
        let scan = s.analysis.phase_scan.as_ref().unwrap();
        assert_eq!(Scenario::scan_phis(scan).len(), 16);
    }

    #[test]
    fn unknown_keys_are_rejected_with_their_path() {
        let text = r#"{
            "name": "typo",
            "signal": {"fwhm_nm": 9.4},
            "base_lo": {"fwhm_nm": 9.4},
            "channel": {"eta_sys": 0.6},
            "ga": {"encoding": "poly_phase", "params": {"mutationrate": 0.1}}
        }"#;
        let err = Scenario::from_json(text).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("mutationrate"), "message: {msg}");
        assert!(msg.contains("ga.params"), "message: {msg}");
    }

    #[test]
    fn invalid_physics_is_rejected_at_load_time() {
        // mode clipped by the grid
        let text = r#"{
            "name": "wide",
            "signal": {"fwhm_nm": 90.0},
            "base_lo": {"fwhm_nm": 9.4},
            "channel": {"eta_sys": 0.6}
        }"#;
        assert!(Scenario::from_json(text).is_err());
        // eta_sys out of range
        let text = r#"{
            "name": "bad_eta",
            "signal": {"fwhm_nm": 9.4},
            "base_lo": {"fwhm_nm": 9.4},
            "channel": {"eta_sys": 1.4}
        }"#;
        assert!(Scenario::from_json(text).is_err());
    }
}
