//! File formats for every artifact the toolchain exchanges.
//!
//! CSV numbers are written with Rust's shortest round-trip formatting, so a
//! read-back reproduces the original f64 bits exactly. Grid-shaped files
//! carry their metadata in a leading `#` header line; larger sidecars are
//! JSON files next to the CSV (`<name>.meta.json`).

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::evolve::{GaParams, GaResult, GenerationStats, StopReason};
use crate::frog::FrogTrace;
use crate::measurement::QuadratureBatch;
use crate::mode::{FrequencyGrid, SpectralMode};
use crate::shaping::{PhasePolynomial, SlmMask};
use crate::tomography::{FockDiagonal, WignerGrid};

fn parse_f64(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Parse(format!("bad {what}: `{s}`")))
}

fn parse_usize(s: &str, what: &str) -> Result<usize> {
    s.trim()
        .parse::<usize>()
        .map_err(|_| Error::Parse(format!("bad {what}: `{s}`")))
}

fn header_fields(line: &str) -> Result<std::collections::HashMap<String, String>> {
    let line = line
        .strip_prefix('#')
        .ok_or_else(|| Error::Parse("missing `#` metadata header".into()))?;
    let mut out = std::collections::HashMap::new();
    for token in line.split_whitespace() {
        let (k, v) = token
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad header token `{token}`")))?;
        out.insert(k.to_string(), v.to_string());
    }
    Ok(out)
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("meta.json")
}

// ---------------------------------------------------------------- modes ---

/// CSV with columns (omega_rad_per_fs, lambda_nm, re, im) and a header line
/// carrying the grid metadata; bit-exact round trip at full precision.
pub fn mode_to_csv(m: &SpectralMode) -> String {
    let g = m.grid();
    let mut s = String::new();
    let _ = writeln!(
        s,
        "# center_omega_rad_per_fs={} span_rad_per_fs={} n_points={}",
        g.center_omega(),
        g.span(),
        g.n_points()
    );
    s.push_str("omega_rad_per_fs,lambda_nm,re,im\n");
    for (k, a) in m.amplitude().iter().enumerate() {
        let _ = writeln!(s, "{},{},{},{}", g.omega(k), g.lambda_nm(k), a.re, a.im);
    }
    s
}

pub fn mode_from_csv(text: &str) -> Result<SpectralMode> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty mode file".into()))?;
    let meta = header_fields(header)?;
    let center = parse_f64(
        meta.get("center_omega_rad_per_fs")
            .ok_or_else(|| Error::Parse("missing center_omega_rad_per_fs".into()))?,
        "center_omega_rad_per_fs",
    )?;
    let span = parse_f64(
        meta.get("span_rad_per_fs")
            .ok_or_else(|| Error::Parse("missing span_rad_per_fs".into()))?,
        "span_rad_per_fs",
    )?;
    let n = parse_usize(
        meta.get("n_points").ok_or_else(|| Error::Parse("missing n_points".into()))?,
        "n_points",
    )?;
    let grid = FrequencyGrid::from_center_omega(center, span, n)?;
    let mut amplitude = Vec::with_capacity(n);
    for line in lines {
        if line.starts_with("omega") || line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 4 {
            return Err(Error::Parse(format!("expected 4 columns, got {}", cols.len())));
        }
        amplitude.push(Complex64::new(parse_f64(cols[2], "re")?, parse_f64(cols[3], "im")?));
    }
    SpectralMode::from_raw_normalized(grid, amplitude)
}

pub fn write_mode(path: &Path, m: &SpectralMode) -> Result<()> {
    fs::write(path, mode_to_csv(m)).map_err(Error::from)
}

pub fn read_mode(path: &Path) -> Result<SpectralMode> {
    mode_from_csv(&fs::read_to_string(path)?)
}

// ---------------------------------------------------------------- masks ---

/// CSV with columns (pixel_index, transmission, phase_rad).
pub fn mask_to_csv(mask: &SlmMask) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# n_pixels={}", mask.n_pixels());
    s.push_str("pixel_index,transmission,phase_rad\n");
    for p in 0..mask.n_pixels() {
        let _ = writeln!(s, "{},{},{}", p, mask.transmission()[p], mask.phase()[p]);
    }
    s
}

pub fn mask_from_csv(text: &str) -> Result<SlmMask> {
    let mut transmission = Vec::new();
    let mut phase = Vec::new();
    for line in text.lines() {
        if line.starts_with('#') || line.starts_with("pixel_index") || line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 3 {
            return Err(Error::Parse(format!("expected 3 columns, got {}", cols.len())));
        }
        transmission.push(parse_f64(cols[1], "transmission")?);
        phase.push(parse_f64(cols[2], "phase_rad")?);
    }
    SlmMask::new(transmission, phase)
}

pub fn write_mask(path: &Path, mask: &SlmMask) -> Result<()> {
    fs::write(path, mask_to_csv(mask)).map_err(Error::from)
}

pub fn read_mask(path: &Path) -> Result<SlmMask> {
    mask_from_csv(&fs::read_to_string(path)?)
}

// ----------------------------------------------------------- polynomial ---

/// JSON object with named, unit-suffixed coefficients.
pub fn write_polynomial(path: &Path, p: &PhasePolynomial) -> Result<()> {
    let text = serde_json::to_string_pretty(p)
        .map_err(|e| Error::Parse(e.to_string()))?;
    fs::write(path, text).map_err(Error::from)
}

pub fn read_polynomial(path: &Path) -> Result<PhasePolynomial> {
    serde_json::from_str(&fs::read_to_string(path)?).map_err(|e| Error::Parse(e.to_string()))
}

// -------------------------------------------------------------- batches ---

#[derive(Serialize, Deserialize)]
struct BatchMeta {
    n: usize,
    seed: u64,
    theta_rad: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eta_true: Option<f64>,
}

/// CSV (index, x, theta_rad) plus a JSON sidecar (n, seed, eta_true when the
/// batch is simulation-internal).
pub fn write_batch(path: &Path, b: &QuadratureBatch) -> Result<()> {
    let mut s = String::from("index,x,theta_rad\n");
    for (i, x) in b.samples().iter().enumerate() {
        let _ = writeln!(s, "{},{},{}", i, x, b.theta());
    }
    fs::write(path, s)?;
    let meta = BatchMeta {
        n: b.len(),
        seed: b.seed(),
        theta_rad: b.theta(),
        eta_true: b.true_eta(),
    };
    fs::write(
        sidecar_path(path),
        serde_json::to_string_pretty(&meta).map_err(|e| Error::Parse(e.to_string()))?,
    )
    .map_err(Error::from)
}

pub fn read_batch(path: &Path) -> Result<QuadratureBatch> {
    let text = fs::read_to_string(path)?;
    let mut samples = Vec::new();
    let mut theta = 0.0;
    for line in text.lines() {
        if line.starts_with('#') || line.starts_with("index") || line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 3 {
            return Err(Error::Parse(format!("expected 3 columns, got {}", cols.len())));
        }
        samples.push(parse_f64(cols[1], "x")?);
        theta = parse_f64(cols[2], "theta_rad")?;
    }
    let meta_path = sidecar_path(path);
    let (seed, eta_true) = if meta_path.exists() {
        let meta: BatchMeta = serde_json::from_str(&fs::read_to_string(&meta_path)?)
            .map_err(|e| Error::Parse(e.to_string()))?;
        (meta.seed, meta.eta_true)
    } else {
        (0, None)
    };
    QuadratureBatch::from_samples(samples, theta, seed, eta_true)
}

// ------------------------------------------------------------- GA output ---

/// History CSV with the simulator-internal ground-truth column clearly
/// labeled.
pub fn ga_history_to_csv(history: &[GenerationStats]) -> String {
    let mut s = String::from("generation,best_eta,mean_eta,best_overlap_sq_true\n");
    for g in history {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            g.generation, g.best_eta, g.mean_eta, g.best_overlap_sq_true
        );
    }
    s
}

pub fn write_ga_history(path: &Path, history: &[GenerationStats]) -> Result<()> {
    fs::write(path, ga_history_to_csv(history)).map_err(Error::from)
}

#[derive(Serialize)]
struct GaResultJson<'a> {
    params: &'a GaParams,
    stop_reason: StopReason,
    total_evaluations: usize,
    best_eta: f64,
    best_stderr: f64,
    oracle_best_overlap_sq: f64,
    generations: &'a [GenerationStats],
}

pub fn write_ga_result(path: &Path, params: &GaParams, result: &GaResult) -> Result<()> {
    let doc = GaResultJson {
        params,
        stop_reason: result.stop,
        total_evaluations: result.total_evaluations,
        best_eta: result.best_eta,
        best_stderr: result.best_stderr,
        oracle_best_overlap_sq: result.best_overlap_sq_true,
        generations: &result.history,
    };
    fs::write(
        path,
        serde_json::to_string_pretty(&doc).map_err(|e| Error::Parse(e.to_string()))?,
    )
    .map_err(Error::from)
}

// --------------------------------------------------------------- wigner ---

#[derive(Serialize, Deserialize)]
pub struct WignerSummary {
    pub w_origin: f64,
    pub w_min: f64,
    pub integral: f64,
    pub half_extent: f64,
    pub n_points: usize,
    pub rho_diagonal: Vec<f64>,
}

/// CSV (x, p, w) plus a JSON summary with the origin value, minimum, and the
/// fitted diagonal.
pub fn write_wigner(path: &Path, w: &WignerGrid, diag: &FockDiagonal) -> Result<()> {
    let n = w.n_points();
    let mut s = String::from("x,p,w\n");
    for ix in 0..n {
        for ip in 0..n {
            let _ = writeln!(s, "{},{},{}", w.coord(ix), w.coord(ip), w.value(ix, ip));
        }
    }
    fs::write(path, s)?;
    let summary = WignerSummary {
        w_origin: w.at_origin(),
        w_min: w.min_value(),
        integral: w.integral(),
        half_extent: w.spec().half_extent,
        n_points: n,
        rho_diagonal: diag.populations.clone(),
    };
    fs::write(
        sidecar_path(path),
        serde_json::to_string_pretty(&summary).map_err(|e| Error::Parse(e.to_string()))?,
    )
    .map_err(Error::from)
}

// ---------------------------------------------------------------- traces ---

#[derive(Serialize, Deserialize)]
struct TraceMeta {
    n: usize,
    delta_tau_fs: f64,
    delta_omega_rad_per_fs: f64,
    doubled_center_omega_rad_per_fs: f64,
    peak_intensity: f64,
    normalization: String,
}

/// CSV grid (omega_offset, tau, intensity) with a JSON sidecar carrying the
/// axes and normalization; retrieval reads the same format.
pub fn write_trace(path: &Path, t: &FrogTrace) -> Result<()> {
    let n = t.n();
    let mut s = String::from("omega_offset_rad_per_fs,tau_fs,intensity\n");
    for m in 0..n {
        for j in 0..n {
            let _ = writeln!(s, "{},{},{}", t.omega_offset(m), t.tau(j), t.value(m, j));
        }
    }
    fs::write(path, s)?;
    let meta = TraceMeta {
        n,
        delta_tau_fs: t.delta_tau(),
        delta_omega_rad_per_fs: t.delta_omega(),
        doubled_center_omega_rad_per_fs: t.doubled_center_omega(),
        peak_intensity: t.peak(),
        normalization: "peak".into(),
    };
    fs::write(
        sidecar_path(path),
        serde_json::to_string_pretty(&meta).map_err(|e| Error::Parse(e.to_string()))?,
    )
    .map_err(Error::from)
}

pub fn read_trace(path: &Path) -> Result<FrogTrace> {
    let meta_path = sidecar_path(path);
    if !meta_path.exists() {
        return Err(Error::Trace(format!(
            "missing trace sidecar {}",
            meta_path.display()
        )));
    }
    let meta: TraceMeta = serde_json::from_str(&fs::read_to_string(&meta_path)?)
        .map_err(|e| Error::Parse(e.to_string()))?;
    let text = fs::read_to_string(path)?;
    let mut values = Vec::with_capacity(meta.n * meta.n);
    for line in text.lines() {
        if line.starts_with('#') || line.starts_with("omega") || line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        if cols.len() != 3 {
            return Err(Error::Parse(format!("expected 3 columns, got {}", cols.len())));
        }
        values.push(parse_f64(cols[2], "intensity")?);
    }
    FrogTrace::from_parts(
        meta.n,
        meta.delta_tau_fs,
        meta.delta_omega_rad_per_fs,
        meta.doubled_center_omega_rad_per_fs,
        values,
        meta.peak_intensity,
    )
}

// ------------------------------------------------------------ phase scan ---

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ScanPoint {
    pub phi_rad: f64,
    pub eta_hat: f64,
    pub stderr: f64,
    pub oracle_eta: f64,
}

pub fn phase_scan_to_csv(points: &[ScanPoint]) -> String {
    let mut s = String::from("phi_rad,eta_hat,stderr,oracle_eta\n");
    for p in points {
        let _ = writeln!(s, "{},{},{},{}", p.phi_rad, p.eta_hat, p.stderr, p.oracle_eta);
    }
    s
}

pub fn write_phase_scan(path: &Path, points: &[ScanPoint]) -> Result<()> {
    fs::write(path, phase_scan_to_csv(points)).map_err(Error::from)
}
