//! SHG-FROG characterization: trace synthesis I(ω,τ) = |∫E(t)E(t-τ)e^{iωt}dt|²,
//! iterative retrieval by principal-components generalized projections, and
//! interferometric autocorrelation.
//!
//! The trace lives on an N×N grid tied to the field grid: delays are integer
//! multiples of the field's time step and the frequency axis is the N-point
//! conjugate grid, so synthesis and retrieval share one exact forward model
//! (circular in the delay index; fields must keep their support inside the
//! central half window, which is checked).
//!
//! SHG ambiguities — constant phase, time translation, and time reversal
//! with conjugation — leave the trace invariant; [`align_to_reference`]
//! resolves them against a reference field for fidelity checks.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::fft;
use crate::mode::{from_time, fwhm, overlap, FrequencyGrid, SpectralMode, TemporalField,
    EDGE_INTENSITY_LIMIT};

const TWO_PI: f64 = std::f64::consts::TAU;

/// Retrieval G-error at or below which a result counts as converged for
/// noiseless synthetic traces.
pub const G_TARGET: f64 = 1e-3;
/// Early-exit threshold, one order under the contract.
const G_GOAL: f64 = 1e-4;
/// Iterations without relative improvement before the search restarts from a
/// fresh initial guess.
const STALL_WINDOW: usize = 40;

/// N×N SHG-FROG intensity map over (doubled-frequency offset, delay),
/// peak-normalized.
#[derive(Clone, Debug)]
pub struct FrogTrace {
    n: usize,
    delta_tau: f64,
    delta_omega: f64,
    /// The trace frequency axis is offset from twice the field carrier.
    doubled_center_omega: f64,
    /// Row-major [frequency][delay], peak value 1.
    values: Vec<f64>,
    /// Pre-normalization peak intensity, kept so energy functionals can be
    /// undone.
    peak: f64,
}

impl FrogTrace {
    pub fn from_parts(
        n: usize,
        delta_tau: f64,
        delta_omega: f64,
        doubled_center_omega: f64,
        values: Vec<f64>,
        peak: f64,
    ) -> Result<Self> {
        if !n.is_power_of_two() || n < 64 {
            return Err(Error::Trace(format!("trace size {n} must be a power of two ≥ 64")));
        }
        if values.len() != n * n {
            return Err(Error::Trace(format!(
                "expected {} values for a {n}×{n} trace, got {}",
                n * n,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Trace("trace intensities must be finite and nonnegative".into()));
        }
        let axis_ok = |v: f64| v.is_finite() && v > 0.0;
        if !axis_ok(delta_tau) || !axis_ok(delta_omega) || !axis_ok(peak) {
            return Err(Error::Trace("trace axes and peak must be positive".into()));
        }
        Ok(Self { n, delta_tau, delta_omega, doubled_center_omega, values, peak })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta_tau(&self) -> f64 {
        self.delta_tau
    }

    pub fn delta_omega(&self) -> f64 {
        self.delta_omega
    }

    pub fn doubled_center_omega(&self) -> f64 {
        self.doubled_center_omega
    }

    pub fn peak(&self) -> f64 {
        self.peak
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Intensity at frequency row `m`, delay column `j`.
    pub fn value(&self, m: usize, j: usize) -> f64 {
        self.values[m * self.n + j]
    }

    /// Delay of column `j` in fs.
    pub fn tau(&self, j: usize) -> f64 {
        (j as f64 - (self.n / 2) as f64) * self.delta_tau
    }

    /// Frequency offset of row `m` from the doubled carrier, rad/fs.
    pub fn omega_offset(&self, m: usize) -> f64 {
        (m as f64 - (self.n / 2) as f64) * self.delta_omega
    }

    /// Frequency-integrated delay marginal Σ_ω I·Δω.
    pub fn delay_marginal(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n];
        for row in self.values.chunks(self.n) {
            for (acc, v) in out.iter_mut().zip(row) {
                *acc += v;
            }
        }
        for v in &mut out {
            *v *= self.delta_omega;
        }
        out
    }

    /// Grid of the field this trace characterizes.
    pub fn field_grid(&self) -> Result<FrequencyGrid> {
        FrequencyGrid::from_center_omega(
            self.doubled_center_omega / 2.0,
            TWO_PI / self.delta_tau,
            self.n,
        )
    }
}

/// Crop the central `n` samples of a field, requiring the support to sit in
/// the central half of the crop so circular delays cannot wrap it.
fn crop_field(f: &TemporalField, n: usize) -> Result<Vec<Complex64>> {
    let total = f.envelope().len();
    if !n.is_power_of_two() || n < 64 || n > total {
        return Err(Error::Trace(format!(
            "crop size {n} must be a power of two in [64, {total}]"
        )));
    }
    let intensity: Vec<f64> = f.envelope().iter().map(|a| a.norm_sqr()).collect();
    let peak = intensity.iter().cloned().fold(0.0, f64::max);
    if peak <= 0.0 {
        return Err(Error::ZeroNorm);
    }
    // support must fit in the central n/2 window
    let lo = total / 2 - n / 4;
    let hi = total / 2 + n / 4;
    let outside = intensity
        .iter()
        .enumerate()
        .filter(|(i, _)| *i < lo || *i >= hi)
        .map(|(_, v)| *v)
        .fold(0.0, f64::max);
    let ratio = outside / peak;
    if ratio >= EDGE_INTENSITY_LIMIT {
        return Err(Error::FieldClipped(ratio));
    }
    let offset = (total - n) / 2;
    Ok(f.envelope()[offset..offset + n].to_vec())
}

/// FFT pair for one trace size, reused across columns and iterations.
struct Dft {
    fwd: std::sync::Arc<dyn rustfft::Fft<f64>>,
    inv: std::sync::Arc<dyn rustfft::Fft<f64>>,
    scratch: Vec<Complex64>,
    n: usize,
}

impl Dft {
    fn new(n: usize) -> Self {
        let mut planner = rustfft::FftPlanner::new();
        let fwd = planner.plan_fft_forward(n);
        let inv = planner.plan_fft_inverse(n);
        let scratch = vec![Complex64::default(); fwd.get_inplace_scratch_len().max(inv.get_inplace_scratch_len())];
        Self { fwd, inv, scratch, n }
    }

    /// Centered t→ω transform (kernel e^{+iωt}) of each column of a
    /// column-major N×N matrix.
    fn columns_to_freq(&mut self, mat: &mut [Complex64]) {
        for col in mat.chunks_mut(self.n) {
            fft::half_rotate(col);
        }
        self.inv.process_with_scratch(mat, &mut self.scratch);
        for col in mat.chunks_mut(self.n) {
            fft::half_rotate(col);
        }
    }

    /// Inverse of [`Self::columns_to_freq`] up to the factor N.
    fn columns_to_time(&mut self, mat: &mut [Complex64]) {
        for col in mat.chunks_mut(self.n) {
            fft::half_rotate(col);
        }
        self.fwd.process_with_scratch(mat, &mut self.scratch);
        for col in mat.chunks_mut(self.n) {
            fft::half_rotate(col);
        }
    }
}

/// Signal matrix in column-major layout: column j holds
/// S(t_i, τ_j) = e[i]·e[(i - s_j) mod N] with s_j = j - N/2.
fn signal_matrix(e: &[Complex64], out: &mut [Complex64]) {
    let n = e.len();
    for j in 0..n {
        let shift = j as isize - (n / 2) as isize;
        let col = &mut out[j * n..(j + 1) * n];
        for (i, slot) in col.iter_mut().enumerate() {
            let k = (i as isize - shift).rem_euclid(n as isize) as usize;
            *slot = e[i] * e[k];
        }
    }
}

/// Peak-normalized trace intensities (row-major) from a field, plus the peak.
fn synth_values(e: &[Complex64], dft: &mut Dft, scale: f64) -> (Vec<f64>, f64) {
    let n = e.len();
    let mut mat = vec![Complex64::default(); n * n];
    signal_matrix(e, &mut mat);
    dft.columns_to_freq(&mut mat);
    let mut values = vec![0.0; n * n];
    let s2 = scale * scale;
    for j in 0..n {
        for m in 0..n {
            values[m * n + j] = mat[j * n + m].norm_sqr() * s2;
        }
    }
    let peak = values.iter().cloned().fold(0.0, f64::max);
    if peak > 0.0 {
        for v in &mut values {
            *v /= peak;
        }
    }
    (values, peak)
}

/// Synthesize the SHG-FROG trace of a field on an `n_delay`-point grid.
pub fn frog_trace(f: &TemporalField, n_delay: usize) -> Result<FrogTrace> {
    let e = crop_field(f, n_delay)?;
    let mut dft = Dft::new(n_delay);
    let scale = f.delta_t() / TWO_PI.sqrt();
    let (values, peak) = synth_values(&e, &mut dft, scale);
    FrogTrace::from_parts(
        n_delay,
        f.delta_t(),
        TWO_PI / (n_delay as f64 * f.delta_t()),
        2.0 * f.carrier_omega(),
        values,
        peak,
    )
}

/// Outcome of a PCGP retrieval.
#[derive(Clone, Debug)]
pub struct RetrievalResult {
    pub field: TemporalField,
    /// Peak-normalized RMS trace mismatch of `field` against the input.
    pub g_error: f64,
    pub iterations: usize,
    /// Whether `g_error` reached the noiseless synthetic target.
    pub converged: bool,
    /// Raw per-iteration G of the running iterate.
    pub g_history: Vec<f64>,
}

fn g_error(meas: &[f64], calc: &[f64]) -> f64 {
    let num: f64 = meas.iter().zip(calc).map(|(a, b)| a * b).sum();
    let den: f64 = calc.iter().map(|b| b * b).sum();
    let mu = if den > 0.0 { num / den } else { 1.0 };
    let mse: f64 = meas
        .iter()
        .zip(calc)
        .map(|(a, b)| {
            let d = a - mu * b;
            d * d
        })
        .sum::<f64>()
        / meas.len() as f64;
    mse.sqrt()
}

fn normalize(e: &mut [Complex64]) {
    let norm = e.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if norm > 0.0 {
        for a in e.iter_mut() {
            *a /= norm;
        }
    }
}

fn initial_guess(trace: &FrogTrace, attempt: usize, rng: &mut ChaCha12Rng) -> Vec<Complex64> {
    let n = trace.n();
    let marginal = trace.delay_marginal();
    let taus: Vec<f64> = (0..n).map(|j| trace.tau(j)).collect();
    let sigma_t = fwhm(&taus, &marginal)
        .map(|w| w / std::f64::consts::SQRT_2 / (8.0 * std::f64::consts::LN_2).sqrt())
        .unwrap_or(n as f64 / 16.0 * trace.delta_tau());
    (0..n)
        .map(|i| {
            let t = (i as f64 - (n / 2) as f64) * trace.delta_tau();
            let env = (-t * t / (4.0 * sigma_t * sigma_t)).exp();
            if attempt == 0 {
                let amp = 1.0 + 0.2 * (rng.random::<f64>() - 0.5);
                let phi = 0.4 * (rng.random::<f64>() - 0.5);
                Complex64::from_polar(env * amp, phi)
            } else {
                Complex64::from_polar(env, TWO_PI * rng.random::<f64>())
            }
        })
        .collect()
}

/// Principal-components generalized-projections retrieval: alternate the
/// data projection (replace signal-field magnitudes with the measured √I)
/// with a rank-1 extraction of the field from the outer-product form via one
/// power-method step. Deterministic given the seed; restarts from fresh
/// guesses when progress stalls, and returns the best field seen.
pub fn frog_retrieve(trace: &FrogTrace, max_iter: usize, seed: u64) -> Result<RetrievalResult> {
    let n = trace.n();
    if max_iter == 0 {
        return Err(Error::Trace("max_iter must be positive".into()));
    }
    let peak = trace.values.iter().cloned().fold(0.0, f64::max);
    if peak <= 0.0 {
        return Err(Error::Trace("trace is identically zero".into()));
    }
    // τ-symmetry sanity on the input (loose: measured traces carry noise)
    let mut asym: f64 = 0.0;
    for m in 0..n {
        for j in 1..n {
            asym = asym.max((trace.value(m, j) - trace.value(m, n - j)).abs());
        }
    }
    if asym > 0.05 * peak {
        return Err(Error::Trace(format!(
            "trace is not delay-symmetric (max asymmetry {asym:.3e} of peak {peak:.3e})"
        )));
    }

    let amp_meas: Vec<f64> = trace.values.iter().map(|v| v.sqrt()).collect();
    let mut dft = Dft::new(n);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);

    let mut e = initial_guess(trace, 0, &mut rng);
    normalize(&mut e);
    let mut best_e = e.clone();
    let mut best_g = f64::INFINITY;
    let mut g_history = Vec::with_capacity(max_iter);
    let mut since_improvement = 0;
    let mut attempt = 0;
    let mut iterations = 0;

    let mut mat = vec![Complex64::default(); n * n];
    for iter in 0..max_iter {
        iterations = iter + 1;
        // forward model
        signal_matrix(&e, &mut mat);
        dft.columns_to_freq(&mut mat);
        // current G from this amplitude set
        let mut calc = vec![0.0; n * n];
        for j in 0..n {
            for m in 0..n {
                calc[m * n + j] = mat[j * n + m].norm_sqr();
            }
        }
        let cpeak = calc.iter().cloned().fold(0.0, f64::max);
        if cpeak > 0.0 {
            for v in &mut calc {
                *v /= cpeak;
            }
        }
        let g = g_error(&trace.values, &calc);
        g_history.push(g);
        if g < best_g * (1.0 - 1e-6) {
            best_g = g;
            best_e = e.clone();
            since_improvement = 0;
        } else {
            since_improvement += 1;
        }
        if best_g <= G_GOAL {
            break;
        }
        if since_improvement >= STALL_WINDOW {
            attempt += 1;
            e = initial_guess(trace, attempt, &mut rng);
            normalize(&mut e);
            since_improvement = 0;
            continue;
        }
        // data projection: keep phases, impose measured magnitudes
        for j in 0..n {
            for m in 0..n {
                let z = mat[j * n + m];
                let a = amp_meas[m * n + j];
                let r = z.norm();
                mat[j * n + m] = if r > 0.0 {
                    z * (a / r)
                } else {
                    Complex64::new(a, 0.0)
                };
            }
        }
        dft.columns_to_time(&mut mat);
        // back to outer-product form: O[i][k] = S'[i][j] with k = (i - s_j) mod N
        let mut outer = vec![Complex64::default(); n * n];
        for j in 0..n {
            let shift = j as isize - (n / 2) as isize;
            for i in 0..n {
                let k = (i as isize - shift).rem_euclid(n as isize) as usize;
                outer[i * n + k] = mat[j * n + i];
            }
        }
        // SHG symmetry projection, then one power step of the Takagi
        // factorization: e ← sym(O)·conj(e)
        let mut next = vec![Complex64::default(); n];
        for i in 0..n {
            let mut acc = Complex64::default();
            for k in 0..n {
                let sym = 0.5 * (outer[i * n + k] + outer[k * n + i]);
                acc += sym * e[k].conj();
            }
            next[i] = acc;
        }
        normalize(&mut next);
        e = next;
    }

    // The sampled model has one extra exact symmetry beyond the physical
    // SHG ambiguities: multiplying the envelope by (-1)^i shifts the
    // spectrum by half the frequency window and changes no trace value.
    // Canonicalize to the branch whose spectrum sits in the central band,
    // where every physical field on this grid lives.
    let mut spec = best_e.clone();
    fft::centered_inverse(&mut spec);
    let central: f64 = spec[n / 4..3 * n / 4].iter().map(|a| a.norm_sqr()).sum();
    let total: f64 = spec.iter().map(|a| a.norm_sqr()).sum();
    if central < 0.5 * total {
        for (i, a) in best_e.iter_mut().enumerate() {
            if i % 2 == 1 {
                *a = -*a;
            }
        }
    }

    let grid = trace.field_grid()?;
    let norm = best_e.iter().map(|a| a.norm_sqr()).sum::<f64>() * grid.delta_t();
    let scale = if norm > 0.0 { norm.sqrt().recip() } else { 1.0 };
    for a in &mut best_e {
        *a *= scale;
    }
    let field = TemporalField::from_envelope(grid, best_e)?;
    Ok(RetrievalResult {
        field,
        g_error: best_g,
        iterations,
        converged: best_g <= G_TARGET,
        g_history,
    })
}

/// Apply the time-reversal-with-conjugation ambiguity.
pub fn reverse_conjugate(f: &TemporalField) -> TemporalField {
    let n = f.envelope().len();
    let env: Vec<Complex64> = (0..n)
        .map(|i| f.envelope()[(n - i) % n].conj())
        .collect();
    TemporalField::from_envelope(*f.grid(), env).expect("reversal preserves validity")
}

/// Align `candidate` onto `reference` across the SHG ambiguity classes
/// (constant phase, time translation with sub-sample refinement, optional
/// time reversal with conjugation). Returns the aligned field and the
/// magnitude of the resulting mode overlap.
pub fn align_to_reference(
    candidate: &TemporalField,
    reference: &TemporalField,
) -> Result<(TemporalField, f64)> {
    if candidate.grid() != reference.grid() {
        return Err(Error::GridMismatch);
    }
    let psi_ref = from_time(reference)?;
    let mut best: Option<(TemporalField, f64)> = None;
    for reversed in [false, true] {
        let cand = if reversed { reverse_conjugate(candidate) } else { candidate.clone() };
        let psi = from_time(&cand)?;
        let delta = best_shift(&psi_ref, &psi)?;
        let grid = *psi.grid();
        let shifted: Vec<Complex64> = psi
            .amplitude()
            .iter()
            .zip(grid.detunings())
            .map(|(a, nu)| a * Complex64::from_polar(1.0, nu * delta))
            .collect();
        let shifted = SpectralMode::new(grid, shifted)?;
        let c = overlap(&psi_ref, &shifted)?;
        let rotated: Vec<Complex64> = shifted
            .amplitude()
            .iter()
            .map(|a| a * Complex64::from_polar(1.0, -c.arg()))
            .collect();
        let aligned = crate::mode::to_time(&SpectralMode::new(grid, rotated)?);
        let score = c.norm();
        if best.as_ref().is_none_or(|(_, s)| score > *s) {
            best = Some((aligned, score));
        }
    }
    Ok(best.expect("both orientations evaluated"))
}

/// Delay maximizing |Σ conj(Ψref)·Ψ·e^{iνδ}|, via an 8× zero-padded
/// correlation with parabolic refinement.
fn best_shift(psi_ref: &SpectralMode, psi: &SpectralMode) -> Result<f64> {
    let grid = psi.grid();
    let n = grid.n_points();
    let pad = 8 * n;
    let mut buf = vec![Complex64::default(); pad];
    for k in 0..n {
        // place ν index (k - n/2) at padded index (k - n/2 + pad/2)
        buf[k + (pad - n) / 2] = psi_ref.amplitude()[k].conj() * psi.amplitude()[k];
    }
    fft::centered_inverse(&mut buf);
    let (jmax, _) = buf
        .iter()
        .enumerate()
        .map(|(j, v)| (j, v.norm_sqr()))
        .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
        .ok_or(Error::ZeroNorm)?;
    let fine_dt = grid.delta_t() / 8.0;
    let center = (jmax as f64 - (pad / 2) as f64) * fine_dt;
    // parabolic refinement on |F|² around the peak
    if jmax == 0 || jmax == pad - 1 {
        return Ok(center);
    }
    let ym = buf[jmax - 1].norm_sqr();
    let y0 = buf[jmax].norm_sqr();
    let yp = buf[jmax + 1].norm_sqr();
    let denom = ym - 2.0 * y0 + yp;
    let frac = if denom.abs() > 0.0 { 0.5 * (ym - yp) / denom } else { 0.0 };
    Ok(center + frac.clamp(-0.5, 0.5) * fine_dt)
}

/// Phase jump between the two lobes of a double-peaked spectrum, measured at
/// the spectrum center.
///
/// The spectral phase inside each lobe is fit linearly (intensity-weighted,
/// after unwrapping outward from the lobe peak) and extrapolated to the
/// center, which cancels any common group delay; the returned value is the
/// intercept difference wrapped to [0, 2π).
pub fn spectral_phase_step(m: &SpectralMode) -> Result<f64> {
    let intensity = m.intensity();
    let n = intensity.len();
    let grid = m.grid();
    let peak = intensity.iter().cloned().fold(0.0, f64::max);
    if intensity[n / 2] > 0.1 * peak {
        return Err(Error::ScanNotApplicable(
            "no node at the spectrum center".into(),
        ));
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

    // intensity-weighted linear fit of the unwrapped phase across one lobe,
    // extrapolated to ν = 0
    let lobe_intercept = |k_peak: usize| {
        let cut = 0.2 * intensity[k_peak];
        let mut lo = k_peak;
        while lo > 0 && intensity[lo - 1] >= cut {
            lo -= 1;
        }
        let mut hi = k_peak;
        while hi + 1 < n && intensity[hi + 1] >= cut {
            hi += 1;
        }
        let mut phases = vec![0.0; hi - lo + 1];
        phases[k_peak - lo] = m.amplitude()[k_peak].arg();
        for k in (k_peak + 1)..=hi {
            let prev = phases[k - 1 - lo];
            let mut p = m.amplitude()[k].arg();
            while p - prev > std::f64::consts::PI {
                p -= TWO_PI;
            }
            while prev - p > std::f64::consts::PI {
                p += TWO_PI;
            }
            phases[k - lo] = p;
        }
        for k in (lo..k_peak).rev() {
            let next = phases[k + 1 - lo];
            let mut p = m.amplitude()[k].arg();
            while p - next > std::f64::consts::PI {
                p -= TWO_PI;
            }
            while next - p > std::f64::consts::PI {
                p += TWO_PI;
            }
            phases[k - lo] = p;
        }
        let (mut sw, mut swx, mut swy, mut swxx, mut swxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for k in lo..=hi {
            let w = intensity[k];
            let x = grid.detuning(k);
            let y = phases[k - lo];
            sw += w;
            swx += w * x;
            swy += w * y;
            swxx += w * x * x;
            swxy += w * x * y;
        }
        let denom = sw * swxx - swx * swx;
        (swxx * swy - swx * swxy) / denom
    };
    Ok((lobe_intercept(k2) - lobe_intercept(k1)).rem_euclid(TWO_PI))
}

/// Interferometric autocorrelation
/// IAC(τ) = ∫|(E(t) + e^{iω₀τ}E(t-τ))²|² dt, normalized to background 1.
/// The carrier phase e^{iω₀τ} carries the fringes; the classic 8:1
/// peak-to-background ratio holds for any field.
pub fn autocorrelation(f: &TemporalField, delays: &[f64]) -> Result<Vec<f64>> {
    if f.edge_intensity_ratio() >= EDGE_INTENSITY_LIMIT {
        return Err(Error::FieldClipped(f.edge_intensity_ratio()));
    }
    let e = f.envelope();
    let n = e.len();
    let grid = f.grid();
    // spectrum once; each delayed copy is a linear spectral phase away
    let mut spec = e.to_vec();
    fft::centered_inverse(&mut spec);
    let background: f64 =
        2.0 * e.iter().map(|a| a.norm_sqr().powi(2)).sum::<f64>() * f.delta_t();
    if background <= 0.0 {
        return Err(Error::ZeroNorm);
    }
    let omega0 = f.carrier_omega();
    let mut out = Vec::with_capacity(delays.len());
    let mut buf = vec![Complex64::default(); n];
    for &tau in delays {
        for (k, b) in buf.iter_mut().enumerate() {
            let nu = grid.detuning(k);
            *b = spec[k] * Complex64::from_polar(1.0 / n as f64, nu * tau);
        }
        fft::centered_forward(&mut buf);
        let carrier = Complex64::from_polar(1.0, omega0 * tau);
        let integral: f64 = e
            .iter()
            .zip(&buf)
            .map(|(a, d)| {
                let sum = a + carrier * d;
                sum.norm_sqr().powi(2)
            })
            .sum::<f64>()
            * f.delta_t();
        out.push(integral / background);
    }
    Ok(out)
}
