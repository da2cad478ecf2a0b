//! Scenario execution: GA optimization, final measurement, analyses, and
//! artifact writing. Fully deterministic given (scenario, master seed).

use std::path::Path;

use crate::error::{Error, Result};
use crate::evolve::{run_ga, GaResult, GaSetup};
use crate::frog::{frog_retrieve, frog_trace, spectral_phase_step, FrogTrace, RetrievalResult};
use crate::io::{self, ScanPoint};
use crate::measurement::{
    efficiency, estimate_eta, sample_quadratures_tagged, spectrometer, DetectionChannel,
};
use crate::mode::{from_time, fwhm, overlap, to_time, SpectralMode};
use crate::seeds;
use crate::shaping::{slm_apply, PixelWindow, SlmMask};
use crate::tomography::{fit_diagonal, wigner, FockDiagonal, WignerGrid};

use super::report::{
    config_hash, CombSummary, CosineFit, FinalMeasurement, FrogSummary, GaSummary, PairScan,
    Provenance, Report, ScanSummary, TomoSummary, Tooth,
};
use super::scenario::{CombSpec, ModeRecipe, Scenario, DEFAULT_N_PIXELS};

const RUN_STREAM: u64 = 0x52;
const GA_STREAM: u64 = 0x47;
const FINAL_STREAM: u64 = 0x46;
const TOMO_STREAM: u64 = 0x54;
const SCAN_STREAM: u64 = 0x53;
const COMB_STREAM: u64 = 0x43;
const FROG_STREAM: u64 = 0x66;

/// Everything a run produced, including the bulk arrays behind the report.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub scenario: Scenario,
    pub master_seed: u64,
    pub report: Report,
    pub ga_result: Option<GaResult>,
    pub best_mask: SlmMask,
    pub best_mode: SpectralMode,
    pub tomo: Option<(FockDiagonal, WignerGrid)>,
    pub frog: Option<(FrogTrace, RetrievalResult, f64)>,
}

/// Zero the field outside the central `n_trace`/2 samples (the part a
/// finite-range FROG can see) and renormalize. Returns the gated field and
/// the energy fraction that was cut away.
fn gate_to_window(
    field: &crate::mode::TemporalField,
    n_trace: usize,
) -> Result<(crate::mode::TemporalField, f64)> {
    let n = field.envelope().len();
    let half = (n_trace / 4).min(n / 2);
    let lo = n / 2 - half;
    let hi = n / 2 + half;
    let mut env = field.envelope().to_vec();
    let total: f64 = env.iter().map(|a| a.norm_sqr()).sum();
    let mut outside = 0.0;
    for (i, a) in env.iter_mut().enumerate() {
        if i < lo || i >= hi {
            outside += a.norm_sqr();
            *a = num_complex::Complex64::default();
        }
    }
    if total <= 0.0 || outside >= total {
        return Err(Error::ZeroNorm);
    }
    let scale = (1.0 / (1.0 - outside / total)).sqrt();
    for a in &mut env {
        *a *= scale;
    }
    Ok((
        crate::mode::TemporalField::from_envelope(*field.grid(), env)?,
        outside / total,
    ))
}

fn fit_cosine(phis: &[f64], etas: &[f64]) -> CosineFit {
    // linear least squares for η = p + q·cosφ + r·sinφ
    let n = phis.len() as f64;
    let (mut sc, mut ss, mut scc, mut sss, mut scs) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let (mut sy, mut syc, mut sys) = (0.0, 0.0, 0.0);
    for (&phi, &y) in phis.iter().zip(etas) {
        let c = phi.cos();
        let s = phi.sin();
        sc += c;
        ss += s;
        scc += c * c;
        sss += s * s;
        scs += c * s;
        sy += y;
        syc += y * c;
        sys += y * s;
    }
    // normal equations: [n sc ss; sc scc scs; ss scs sss]·[p q r] = [sy syc sys]
    let mut a = [[n, sc, ss, sy], [sc, scc, scs, syc], [ss, scs, sss, sys]];
    #[allow(clippy::needless_range_loop)]
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        a.swap(col, pivot);
        for row in 0..3 {
            if row != col {
                let f = a[row][col] / a[col][col];
                for k in col..4 {
                    a[row][k] -= f * a[col][k];
                }
            }
        }
    }
    let p = a[0][3] / a[0][0];
    let q = a[1][3] / a[1][1];
    let r = a[2][3] / a[2][2];
    let amplitude = 2.0 * (q * q + r * r).sqrt();
    let floor = p - amplitude / 2.0;
    let phi0 = r.atan2(q);
    let residual_rms = (phis
        .iter()
        .zip(etas)
        .map(|(&phi, &y)| {
            let model = p + q * phi.cos() + r * phi.sin();
            (y - model) * (y - model)
        })
        .sum::<f64>()
        / n)
        .sqrt();
    CosineFit { amplitude, floor, phi0_rad: phi0, residual_rms }
}

/// Check that a mode is a resolved double peak with a node at the center.
fn require_double_peak(sig: &SpectralMode) -> Result<(usize, usize)> {
    let intensity = sig.intensity();
    let n = intensity.len();
    let peak = intensity.iter().cloned().fold(0.0, f64::max);
    if intensity[n / 2] > 0.1 * peak {
        return Err(Error::ScanNotApplicable("no node at the spectrum center".into()));
    }
    let argmax = |lo: usize, hi: usize| {
        (lo..hi)
            .max_by(|&a, &b| intensity[a].partial_cmp(&intensity[b]).unwrap())
            .unwrap()
    };
    let k1 = argmax(0, n / 2);
    let k2 = argmax(n / 2, n);
    if intensity[k1] < 0.1 * peak || intensity[k2] < 0.1 * peak {
        return Err(Error::ScanNotApplicable("lobes are not both resolved".into()));
    }
    Ok((k1, k2))
}

/// Measure η̂ for the base LO shaped by `mask` with an extra per-pixel phase
/// pattern, against `sig`.
struct ScanContext<'a> {
    base_lo: &'a SpectralMode,
    sig: &'a SpectralMode,
    channel: &'a DetectionChannel,
    mask: &'a SlmMask,
}

impl ScanContext<'_> {
    fn point(&self, added: &[f64], phi: f64, samples: usize, seed: u64) -> Result<ScanPoint> {
        let mask_phi = self.mask.with_added_phase(added)?;
        let (lo, _) = slm_apply(self.base_lo, &mask_phi)?;
        let eta = efficiency(&lo, self.sig, self.channel)?;
        let batch = sample_quadratures_tagged(eta, samples, seed, phi)?;
        let est = estimate_eta(&batch)?;
        Ok(ScanPoint { phi_rad: phi, eta_hat: est.eta, stderr: est.stderr, oracle_eta: eta })
    }
}

/// φ_LO scan of a double-peaked scenario: add a constant phase to all pixels
/// of the upper spectral peak, measure η̂ per point, and fit
/// η(φ) = A·cos²((φ-φ0)/2) + B.
pub fn phase_scan(
    sig: &SpectralMode,
    base_lo: &SpectralMode,
    channel: &DetectionChannel,
    mask: &SlmMask,
    phis: &[f64],
    samples: usize,
    seed_root: u64,
) -> Result<ScanSummary> {
    require_double_peak(sig)?;
    let grid = sig.grid();
    let window = PixelWindow::new(grid, mask.n_pixels())?;
    let ctx = ScanContext { base_lo, sig, channel, mask };
    let mut points = Vec::with_capacity(phis.len());
    for (j, &phi) in phis.iter().enumerate() {
        let added: Vec<f64> = (0..mask.n_pixels())
            .map(|p| if window.pixel_center(grid, p) > 0.0 { phi } else { 0.0 })
            .collect();
        let seed = seeds::derive(seed_root, &[SCAN_STREAM, j as u64]);
        points.push(ctx.point(&added, phi, samples, seed)?);
    }
    let phi_list: Vec<f64> = points.iter().map(|p| p.phi_rad).collect();
    let eta_list: Vec<f64> = points.iter().map(|p| p.eta_hat).collect();
    let fit = fit_cosine(&phi_list, &eta_list);
    Ok(ScanSummary { points, fit })
}

/// One comb tooth: contiguous sample window around an intensity maximum.
struct ToothWindow {
    peak_index: usize,
    lo: usize,
    hi: usize,
}

/// Locate the comb teeth of a spectrum: local maxima above
/// `threshold × global peak`, with windows split at the minima between them.
fn find_teeth(sig: &SpectralMode, threshold: f64) -> Vec<ToothWindow> {
    let intensity = sig.intensity();
    let n = intensity.len();
    let peak = intensity.iter().cloned().fold(0.0, f64::max);
    let mut peaks = Vec::new();
    for k in 1..n - 1 {
        if intensity[k] > intensity[k - 1]
            && intensity[k] >= intensity[k + 1]
            && intensity[k] >= threshold * peak
        {
            peaks.push(k);
        }
    }
    let mut teeth = Vec::with_capacity(peaks.len());
    for (i, &pk) in peaks.iter().enumerate() {
        let lo = if i == 0 {
            0
        } else {
            let prev = peaks[i - 1];
            (prev..pk)
                .min_by(|&a, &b| intensity[a].partial_cmp(&intensity[b]).unwrap())
                .unwrap()
        };
        let hi = if i + 1 == peaks.len() {
            n
        } else {
            let next = peaks[i + 1];
            (pk..next)
                .min_by(|&a, &b| intensity[a].partial_cmp(&intensity[b]).unwrap())
                .unwrap()
        };
        teeth.push(ToothWindow { peak_index: pk, lo, hi });
    }
    teeth
}

/// Normalized single-tooth mode: the spectrum restricted to one tooth window.
fn tooth_mode(sig: &SpectralMode, tooth: &ToothWindow) -> Result<SpectralMode> {
    let grid = *sig.grid();
    let amplitude = sig
        .amplitude()
        .iter()
        .enumerate()
        .map(|(k, a)| {
            if k >= tooth.lo && k < tooth.hi {
                *a
            } else {
                num_complex::Complex64::default()
            }
        })
        .collect();
    SpectralMode::new(grid, amplitude)
}

/// Qudit analysis of a comb scenario: per-tooth projections of the LO and
/// adjacent-tooth phase scans.
pub fn comb_analysis(
    sig: &SpectralMode,
    base_lo: &SpectralMode,
    lo: &SpectralMode,
    channel: &DetectionChannel,
    mask: &SlmMask,
    spec: &CombSpec,
    seed_root: u64,
) -> Result<CombSummary> {
    let windows = find_teeth(sig, spec.tooth_threshold);
    if windows.len() < spec.min_teeth {
        return Err(Error::TooFewTeeth { found: windows.len(), need: spec.min_teeth });
    }
    let grid = sig.grid();
    let mut teeth = Vec::with_capacity(windows.len());
    let mut total = 0.0;
    for w in &windows {
        let mode = tooth_mode(sig, w)?;
        let weight = overlap(lo, &mode)?.norm_sqr();
        total += weight;
        teeth.push(Tooth {
            center_offset_rad_per_fs: grid.detuning(w.peak_index),
            center_lambda_nm: grid.lambda_nm(w.peak_index),
            oracle_weight: weight,
        });
    }

    let pixel_window = PixelWindow::new(grid, mask.n_pixels())?;
    let ctx = ScanContext { base_lo, sig, channel, mask };
    let phis: Vec<f64> = (0..16).map(|j| std::f64::consts::TAU * j as f64 / 16.0).collect();
    let mut pair_scans = Vec::new();
    for pair in 0..windows.len() - 1 {
        let upper = &windows[pair + 1];
        let lo_nu = grid.detuning(upper.lo);
        let hi_nu = grid.detuning(upper.hi.min(grid.n_points() - 1));
        let mut etas = Vec::with_capacity(phis.len());
        for (j, &phi) in phis.iter().enumerate() {
            let added: Vec<f64> = (0..mask.n_pixels())
                .map(|p| {
                    let c = pixel_window.pixel_center(grid, p);
                    if c >= lo_nu && c < hi_nu {
                        phi
                    } else {
                        0.0
                    }
                })
                .collect();
            let seed = seeds::derive(seed_root, &[COMB_STREAM, pair as u64, j as u64]);
            let point = ctx.point(&added, phi, spec.scan_samples, seed)?;
            etas.push(point.eta_hat);
        }
        pair_scans.push(PairScan { lower_tooth: pair, fit: fit_cosine(&phis, &etas) });
    }
    Ok(CombSummary { teeth, oracle_total_weight: total, pair_scans })
}

/// Build a comb scenario with the Michelson delay set for a target number of
/// teeth, and verify the teeth actually resolve.
pub fn comb_scenario(delay_fs: f64, n_teeth: usize) -> Result<Scenario> {
    let recipe = ModeRecipe {
        michelson: Some(super::scenario::MichelsonSpec { delay_fs, phi_rad: 0.0 }),
        ..ModeRecipe::gaussian(9.4)
    };
    let scenario = Scenario {
        name: format!("comb_{delay_fs:.0}fs"),
        notes: None,
        grid: Default::default(),
        signal: recipe.clone(),
        base_lo: recipe,
        channel: super::scenario::ChannelSpec { eta_sys: 0.6, seed: None },
        ga: None,
        analysis: super::scenario::AnalysisSpec {
            comb: Some(CombSpec { min_teeth: n_teeth.max(3), ..CombSpec::default() }),
            ..Default::default()
        },
    };
    let resolved = scenario.resolve()?;
    let found = find_teeth(&resolved.signal, CombSpec::default().tooth_threshold).len();
    let need = n_teeth.max(3);
    if found < need {
        return Err(Error::TooFewTeeth { found, need });
    }
    Ok(scenario)
}

/// Execute a scenario end to end.
pub fn run_scenario(s: &Scenario, master_seed: u64) -> Result<RunOutput> {
    let resolved = s.resolve()?;
    let channel = DetectionChannel {
        eta_sys: s.channel.eta_sys,
        lo_phase: 0.0,
        seed: s.channel.seed.unwrap_or(0),
    };
    let root = seeds::derive(master_seed, &[RUN_STREAM, channel.seed]);

    // optimization stage
    let (ga_result, best_mask, best_mode, throughput) = match &s.ga {
        Some(ga) => {
            let setup = GaSetup {
                signal: resolved.signal.clone(),
                base_lo: resolved.base_lo.clone(),
                channel,
                encoding: ga.encoding,
                n_pixels: ga.n_pixels,
            };
            let result = run_ga(&setup, &ga.params, seeds::derive(root, &[GA_STREAM]))?;
            let (lo, throughput) = slm_apply(&resolved.base_lo, &result.best_mask)?;
            let mask = result.best_mask.clone();
            (Some(result), mask, lo, throughput)
        }
        None => (
            None,
            SlmMask::identity(DEFAULT_N_PIXELS),
            resolved.base_lo.clone(),
            1.0,
        ),
    };

    // fresh measurement at the optimum
    let oracle_overlap_sq = overlap(&best_mode, &resolved.signal)?.norm_sqr();
    let oracle_eta = efficiency(&best_mode, &resolved.signal, &channel)?;
    let final_batch = sample_quadratures_tagged(
        oracle_eta,
        s.analysis.final_samples,
        seeds::derive(root, &[FINAL_STREAM]),
        0.0,
    )?;
    let final_est = estimate_eta(&final_batch)?;

    // analyses
    let tomo = match &s.analysis.tomography {
        Some(t) => {
            let batch = sample_quadratures_tagged(
                oracle_eta,
                t.samples,
                seeds::derive(root, &[TOMO_STREAM]),
                0.0,
            )?;
            let diag = fit_diagonal(&batch, t.n_max)?;
            let grid = wigner(&diag, &t.wigner);
            Some((diag, grid))
        }
        None => None,
    };
    let frog = match &s.analysis.frog {
        Some(f) => {
            // A pixelated mask scatters a small energy fraction into
            // temporal replicas picoseconds away; a real FROG never sees
            // them. Model the instrument's finite delay range by gating the
            // field to the trace window and reporting the discarded energy.
            let (field, gated_fraction) = gate_to_window(&to_time(&best_mode), f.n_trace)?;
            let trace = frog_trace(&field, f.n_trace)?;
            let retrieval = frog_retrieve(
                &trace,
                f.max_iterations,
                seeds::derive(root, &[FROG_STREAM]),
            )?;
            Some((trace, retrieval, gated_fraction))
        }
        None => None,
    };
    let scan = match &s.analysis.phase_scan {
        Some(spec) => Some(phase_scan(
            &resolved.signal,
            &resolved.base_lo,
            &channel,
            &best_mask,
            &Scenario::scan_phis(spec),
            spec.samples,
            root,
        )?),
        None => None,
    };
    let comb = match &s.analysis.comb {
        Some(spec) => Some(comb_analysis(
            &resolved.signal,
            &resolved.base_lo,
            &best_mode,
            &channel,
            &best_mask,
            spec,
            root,
        )?),
        None => None,
    };

    // report assembly
    let ga_summary = ga_result.as_ref().map(|r| GaSummary {
        stop_reason: r.stop,
        generations_run: r.history.len(),
        total_evaluations: r.total_evaluations,
        best_eta: r.best_eta,
        best_stderr: r.best_stderr,
        oracle_best_overlap_sq: r.best_overlap_sq_true,
        history: r.history.clone(),
    });
    let tomo_summary = tomo.as_ref().map(|(diag, grid)| TomoSummary {
        rho_diagonal: diag.populations.clone(),
        em_iterations: diag.iterations,
        log_likelihood: diag.log_likelihood,
        w_origin: grid.at_origin(),
        w_min: grid.min_value(),
        wigner_integral: grid.integral(),
    });
    let frog_summary = match &frog {
        Some((_, r, gated_fraction)) => {
            let retrieved = from_time(&r.field)?;
            let spectrum = spectrometer(&retrieved);
            let spectral_fwhm_nm = fwhm(&spectrum.lambda_nm, &spectrum.intensity)?;
            let temporal_fwhm_fs = fwhm(&r.field.times(), &r.field.intensity())?;
            Some(FrogSummary {
                g_error: r.g_error,
                iterations: r.iterations,
                converged: r.converged,
                temporal_fwhm_fs,
                spectral_fwhm_nm,
                phase_step_rad: spectral_phase_step(&retrieved).ok(),
                gated_energy_fraction: *gated_fraction,
            })
        }
        None => None,
    };

    let mut artifacts = vec![
        "report.json".to_string(),
        "best_mask.csv".to_string(),
        "best_mode.csv".to_string(),
    ];
    if ga_result.is_some() {
        artifacts.push("ga_history.csv".to_string());
        artifacts.push("ga_result.json".to_string());
    }
    if tomo.is_some() {
        artifacts.push("wigner.csv".to_string());
        artifacts.push("wigner.meta.json".to_string());
    }
    if frog.is_some() {
        artifacts.push("frog_trace.csv".to_string());
        artifacts.push("frog_trace.meta.json".to_string());
        artifacts.push("retrieved_mode.csv".to_string());
    }
    if scan.is_some() {
        artifacts.push("phase_scan.csv".to_string());
    }

    let canonical = serde_json::to_string(s).map_err(|e| Error::Parse(e.to_string()))?;
    let report = Report {
        scenario_name: s.name.clone(),
        ga: ga_summary,
        final_measurement: FinalMeasurement {
            eta_hat: final_est.eta,
            eta_raw: final_est.eta_raw,
            stderr: final_est.stderr,
            samples: s.analysis.final_samples,
        },
        oracle_final_overlap_sq: oracle_overlap_sq,
        oracle_final_eta: oracle_eta,
        mask_throughput: throughput,
        tomography: tomo_summary,
        frog: frog_summary,
        phase_scan: scan,
        comb,
        artifacts,
        provenance: Provenance {
            config_hash: config_hash(&canonical),
            master_seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
        },
    };

    Ok(RunOutput {
        scenario: s.clone(),
        master_seed,
        report,
        ga_result,
        best_mask,
        best_mode,
        tomo,
        frog,
    })
}

/// Write every artifact named in the report under `dir` (created if absent),
/// the report itself last.
pub fn write_outputs(out: &RunOutput, dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    io::write_mask(&dir.join("best_mask.csv"), &out.best_mask)?;
    io::write_mode(&dir.join("best_mode.csv"), &out.best_mode)?;
    if let Some(r) = &out.ga_result {
        io::write_ga_history(&dir.join("ga_history.csv"), &r.history)?;
        let params = out
            .scenario
            .ga
            .as_ref()
            .map(|g| g.params.clone())
            .unwrap_or_default();
        io::write_ga_result(&dir.join("ga_result.json"), &params, r)?;
    }
    if let Some((diag, grid)) = &out.tomo {
        io::write_wigner(&dir.join("wigner.csv"), grid, diag)?;
    }
    if let Some((trace, retrieval, _)) = &out.frog {
        io::write_trace(&dir.join("frog_trace.csv"), trace)?;
        io::write_mode(&dir.join("retrieved_mode.csv"), &from_time(&retrieval.field)?)?;
    }
    if let Some(scan) = &out.report.phase_scan {
        io::write_phase_scan(&dir.join("phase_scan.csv"), &scan.points)?;
    }
    std::fs::write(dir.join("report.json"), out.report.to_json())?;
    Ok(())
}
