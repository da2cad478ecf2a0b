//! Cross-module invariants: property tests over random modes, masks, and
//! batches, plus the statistical sanity bounds that don't fit a single
//! module's unit tests.

use num_complex::Complex64;
use proptest::prelude::*;

use photon_shaper::evolve::{run_ga, GaParams, GaSetup};
use photon_shaper::harness::{bundled, run_scenario};
use photon_shaper::measurement::{
    efficiency, sample_quadratures, DetectionChannel,
};
use photon_shaper::mode::{from_time, gaussian_mode, overlap, to_time, FrequencyGrid, SpectralMode};
use photon_shaper::shaping::{
    apply_phase, michelson_modulate, slm_apply, Encoding, PhasePolynomial, SlmMask,
};

fn small_grid() -> FrequencyGrid {
    FrequencyGrid::new(800.0, 0.30, 128).unwrap()
}

fn mode_from_values(grid: FrequencyGrid, values: &[(f64, f64)]) -> Option<SpectralMode> {
    let amp: Vec<Complex64> = values.iter().map(|(re, im)| Complex64::new(*re, *im)).collect();
    SpectralMode::new(grid, amp).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn overlap_is_cauchy_schwarz_and_conjugate_symmetric(
        a in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 128),
        b in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 128),
    ) {
        let grid = small_grid();
        let (Some(ma), Some(mb)) = (mode_from_values(grid, &a), mode_from_values(grid, &b))
        else { return Ok(()); };
        let cab = overlap(&ma, &mb).unwrap();
        let cba = overlap(&mb, &ma).unwrap();
        prop_assert!(cab.norm() <= 1.0 + 1e-9);
        prop_assert!((cab - cba.conj()).norm() < 1e-12);
    }

    #[test]
    fn fourier_round_trip_preserves_norm_and_samples(
        a in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 128),
    ) {
        let grid = small_grid();
        let Some(m) = mode_from_values(grid, &a) else { return Ok(()); };
        let f = to_time(&m);
        prop_assert!((f.norm_sq() - 1.0).abs() < 1e-9);
        let back = from_time(&f).unwrap();
        for (x, y) in m.amplitude().iter().zip(back.amplitude()) {
            prop_assert!((x - y).norm() < 1e-10);
        }
    }

    #[test]
    fn constant_phase_never_changes_overlap_magnitude(
        a in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 128),
        b in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 128),
        theta in 0.0f64..std::f64::consts::TAU,
    ) {
        let grid = small_grid();
        let (Some(ma), Some(mb)) = (mode_from_values(grid, &a), mode_from_values(grid, &b))
        else { return Ok(()); };
        let rotated: Vec<Complex64> = mb
            .amplitude()
            .iter()
            .map(|z| z * Complex64::from_polar(1.0, theta))
            .collect();
        let mb_rot = SpectralMode::new(grid, rotated).unwrap();
        let c0 = overlap(&ma, &mb).unwrap().norm();
        let c1 = overlap(&ma, &mb_rot).unwrap().norm();
        prop_assert!((c0 - c1).abs() < 1e-12);
    }

    #[test]
    fn phase_shaping_preserves_the_intensity_spectrum(
        c1 in -200.0f64..200.0,
        c2 in -8000.0f64..8000.0,
        c3 in -5e4f64..5e4,
    ) {
        let grid = FrequencyGrid::default_800nm();
        let m = gaussian_mode(&grid, 0.0, 9.4).unwrap();
        let p = PhasePolynomial::new([0.0, c1, c2, c3, 0.0]).unwrap();
        let shaped = apply_phase(&m, &p);
        for (a, b) in m.intensity().iter().zip(shaped.intensity()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn unit_transmission_masks_preserve_the_intensity_spectrum(
        phases in prop::collection::vec(0.0f64..std::f64::consts::TAU, 128),
    ) {
        let grid = FrequencyGrid::default_800nm();
        let m = gaussian_mode(&grid, 0.0, 9.4).unwrap();
        let mask = SlmMask::new(vec![1.0; 128], phases).unwrap();
        let (shaped, throughput) = slm_apply(&m, &mask).unwrap();
        prop_assert!((throughput - 1.0).abs() < 1e-9);
        for (a, b) in m.intensity().iter().zip(shaped.intensity()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}

#[test]
fn michelson_prenorm_matches_direct_quadrature() {
    let grid = FrequencyGrid::default_800nm();
    let m = gaussian_mode(&grid, 0.0, 9.4).unwrap();
    for (delay, phi) in [(150.0, 0.0), (150.0, std::f64::consts::PI), (83.0, 1.1)] {
        let out = michelson_modulate(&m, delay, phi).unwrap();
        // renormalized output: invariant Σ|Ψ'|²Δω = 1
        let norm: f64 =
            out.intensity().iter().sum::<f64>() * grid.delta_omega();
        assert!((norm - 1.0).abs() < 1e-9);
        // pre-normalization norm equals Σ|Ψ|²cos²((ντ+φ)/2)Δω
        let direct: f64 = m
            .amplitude()
            .iter()
            .zip(grid.detunings())
            .map(|(a, nu)| a.norm_sqr() * ((nu * delay + phi) / 2.0).cos().powi(2))
            .sum::<f64>()
            * grid.delta_omega();
        let prenorm: f64 = m
            .amplitude()
            .iter()
            .zip(grid.detunings())
            .map(|(a, nu)| {
                let arm = Complex64::from_polar(1.0, nu * delay + phi);
                (a * (Complex64::new(1.0, 0.0) + arm) * 0.5).norm_sqr()
            })
            .sum::<f64>()
            * grid.delta_omega();
        assert!(
            (prenorm - direct).abs() < 1e-12,
            "delay {delay}, phi {phi}: {prenorm} vs {direct}"
        );
    }
}

#[test]
fn quadrature_distribution_is_symmetric() {
    for (eta, seed) in [(0.0, 1u64), (0.3, 2), (0.6, 3), (1.0, 4)] {
        let n = 50_000;
        let b = sample_quadratures(eta, n, seed).unwrap();
        let mean = b.samples().iter().sum::<f64>() / n as f64;
        let m2 = b.samples().iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
        let m3 = b.samples().iter().map(|x| (x - mean).powi(3)).sum::<f64>() / n as f64;
        let skew = m3 / m2.powf(1.5);
        let bound = 5.0 / (n as f64).sqrt();
        assert!(skew.abs() < bound, "η = {eta}: skew {skew:.4} vs bound {bound:.4}");
    }
}

#[test]
fn efficiency_is_monotone_in_overlap_and_linear_in_eta_sys() {
    let grid = FrequencyGrid::default_800nm();
    let m = gaussian_mode(&grid, 0.0, 9.4).unwrap();
    // a family of LOs with decreasing overlap: increasing chirp
    let mut last = f64::INFINITY;
    for c2 in [0.0, 1000.0, 2000.0, 4000.0, 8000.0] {
        let p = PhasePolynomial::new([0.0, 0.0, c2, 0.0, 0.0]).unwrap();
        let lo = apply_phase(&m, &p);
        let ch1 = DetectionChannel::new(0.6).unwrap();
        let eta1 = efficiency(&lo, &m, &ch1).unwrap();
        assert!(eta1 <= last);
        last = eta1;
        // exact linearity in eta_sys
        let ch2 = DetectionChannel::new(0.3).unwrap();
        let eta2 = efficiency(&lo, &m, &ch2).unwrap();
        assert!((eta1 * 0.5 - eta2).abs() < 1e-15);
    }
}

/// Noisy-fitness sanity: with elites re-measured every generation, the
/// recorded best fitness stays within 4σ of that individual's true η in
/// ≥ 99% of generations.
#[test]
fn elite_fitness_stays_within_four_sigma_of_truth() {
    let grid = FrequencyGrid::default_800nm();
    let base = gaussian_mode(&grid, 0.0, 9.4).unwrap();
    let p = PhasePolynomial::new([0.0, 0.0, 4465.0, 0.0, 0.0]).unwrap();
    let setup = GaSetup {
        signal: apply_phase(&base, &p),
        base_lo: base,
        channel: DetectionChannel::new(0.6).unwrap(),
        encoding: Encoding::PolyPhase,
        n_pixels: 128,
    };
    let params = GaParams { stall_generations: 80, ..GaParams::default() };
    let mut total = 0;
    let mut inside = 0;
    for seed in 0..4u64 {
        let r = run_ga(&setup, &params, seed).unwrap();
        for h in &r.history {
            let true_eta = 0.6 * h.best_overlap_sq_true;
            total += 1;
            if (h.best_eta - true_eta).abs() <= 4.0 * h.best_stderr {
                inside += 1;
            }
        }
    }
    assert!(
        inside * 100 >= total * 99,
        "only {inside}/{total} generations within 4σ"
    );
}

/// Phase-scan fit quality on the ideal double-peak scenario: residual RMS at
/// most twice the mean standard error of the scanned points.
#[test]
fn phase_scan_fit_residual_is_noise_limited() {
    let s = bundled("fig5_qubit").unwrap();
    let run = run_scenario(&s, 17).unwrap();
    let scan = run.report.phase_scan.unwrap();
    let mean_stderr =
        scan.points.iter().map(|p| p.stderr).sum::<f64>() / scan.points.len() as f64;
    assert!(
        scan.fit.residual_rms <= 2.0 * mean_stderr,
        "residual {:.2e} vs mean stderr {:.2e}",
        scan.fit.residual_rms,
        mean_stderr
    );
    // the φ_LO = 0 point repeats the unscanned optimum within 3σ
    let zero = &scan.points[0];
    assert_eq!(zero.phi_rad, 0.0);
    let m = &run.report.final_measurement;
    let sigma = (zero.stderr.powi(2) + m.stderr.powi(2)).sqrt();
    assert!(
        (zero.eta_hat - m.eta_hat).abs() <= 3.0 * sigma,
        "scan zero {} vs optimum {}",
        zero.eta_hat,
        m.eta_hat
    );
}
