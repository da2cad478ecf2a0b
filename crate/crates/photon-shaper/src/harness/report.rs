//! Run reports: summaries of every executed stage with simulator-internal
//! ground truth namespaced under `oracle_` keys, plus provenance.

use serde::{Deserialize, Serialize};

use crate::evolve::{GenerationStats, StopReason};
use crate::io::ScanPoint;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GaSummary {
    pub stop_reason: StopReason,
    pub generations_run: usize,
    pub total_evaluations: usize,
    pub best_eta: f64,
    pub best_stderr: f64,
    pub oracle_best_overlap_sq: f64,
    pub history: Vec<GenerationStats>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FinalMeasurement {
    pub eta_hat: f64,
    pub eta_raw: f64,
    pub stderr: f64,
    pub samples: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TomoSummary {
    pub rho_diagonal: Vec<f64>,
    pub em_iterations: usize,
    pub log_likelihood: f64,
    pub w_origin: f64,
    pub w_min: f64,
    pub wigner_integral: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FrogSummary {
    pub g_error: f64,
    pub iterations: usize,
    pub converged: bool,
    pub temporal_fwhm_fs: f64,
    pub spectral_fwhm_nm: f64,
    /// Phase jump between spectral lobes when the retrieved mode is
    /// double-peaked.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase_step_rad: Option<f64>,
    /// Energy fraction outside the instrument's delay window, discarded
    /// before synthesis (pixelated masks scatter weak replicas far out in
    /// time).
    #[serde(default)]
    pub gated_energy_fraction: f64,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CosineFit {
    /// A in η(φ) = A·cos²((φ-φ0)/2) + B.
    pub amplitude: f64,
    pub floor: f64,
    pub phi0_rad: f64,
    pub residual_rms: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScanSummary {
    pub points: Vec<ScanPoint>,
    pub fit: CosineFit,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Tooth {
    pub center_offset_rad_per_fs: f64,
    pub center_lambda_nm: f64,
    /// |⟨LO, tooth⟩|² measured against the optimized LO.
    pub oracle_weight: f64,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct PairScan {
    pub lower_tooth: usize,
    pub fit: CosineFit,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CombSummary {
    pub teeth: Vec<Tooth>,
    /// Σ_k |⟨LO, tooth_k⟩|² (≤ 1 since the teeth are orthogonal).
    pub oracle_total_weight: f64,
    pub pair_scans: Vec<PairScan>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Provenance {
    /// FNV-1a hash of the canonical scenario JSON.
    pub config_hash: String,
    pub master_seed: u64,
    pub version: String,
}

/// Everything a run produced, minus the bulk arrays (those go to their own
/// artifact files listed in `artifacts`).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub scenario_name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ga: Option<GaSummary>,
    pub final_measurement: FinalMeasurement,
    pub oracle_final_overlap_sq: f64,
    pub oracle_final_eta: f64,
    /// Pre-normalization LO power throughput of the best mask.
    pub mask_throughput: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tomography: Option<TomoSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub frog: Option<FrogSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phase_scan: Option<ScanSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub comb: Option<CombSummary>,
    pub artifacts: Vec<String>,
    pub provenance: Provenance,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> crate::error::Result<Report> {
        serde_json::from_str(text).map_err(|e| crate::error::Error::Parse(e.to_string()))
    }
}

/// FNV-1a over the canonical (compact) scenario JSON.
pub fn config_hash(canonical_json: &str) -> String {
    let mut h: u64 = 0xCBF2_9CE4_8422_2325;
    for b in canonical_json.as_bytes() {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    format!("{h:016x}")
}
