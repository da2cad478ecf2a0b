//! Command-line front end. All logic lives in the library; this binary
//! parses arguments, resolves seeds, and prints summaries.
//!
//! Exit codes: 0 success, 2 validation error (bad config, bad file, bad
//! arguments), 1 runtime error.

use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use photon_shaper::error::{Error, Result};
use photon_shaper::frog::{frog_retrieve, frog_trace};
use photon_shaper::harness::{self, Scenario};
use photon_shaper::io;
use photon_shaper::measurement::sample_quadratures;
use photon_shaper::mode::{from_time, overlap, to_time};
use photon_shaper::tomography::{reconstruct_state, WignerGridSpec};

/// Environment variable consulted when `--seed` is absent.
const SEED_ENV: &str = "PHOTON_SHAPER_SEED";
const DEFAULT_SEED: u64 = 2012;

#[derive(Parser)]
#[command(name = "photon-shaper", version, about = "Adaptive spectro-temporal mode discovery for ultrashort single photons, simulated end to end")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a scenario end to end and write all artifacts.
    Run {
        /// Path to a scenario JSON file, or the name of a bundled scenario.
        scenario: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "run_out")]
        out: PathBuf,
    },
    /// Run a scenario with the qubit phase scan forced on.
    Scan {
        scenario: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "scan_out")]
        out: PathBuf,
        /// Number of φ_LO points over [0, 2π).
        #[arg(long)]
        steps: Option<usize>,
    },
    /// Synthesize a FROG trace from a serialized mode and/or retrieve a
    /// field from a trace.
    Frog {
        /// Mode CSV to synthesize from.
        #[arg(long)]
        mode: Option<PathBuf>,
        /// Trace CSV to retrieve from (synthesized first when --mode is
        /// also given).
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "frog_out")]
        out: PathBuf,
        #[arg(long, default_value_t = 128)]
        n_trace: usize,
        #[arg(long, default_value_t = 600)]
        max_iter: usize,
    },
    /// Reconstruct Fock populations and a Wigner function from quadratures.
    Tomo {
        /// Quadrature CSV to reconstruct from.
        #[arg(long)]
        batch: Option<PathBuf>,
        /// Simulate a fresh batch at this efficiency instead.
        #[arg(long)]
        eta: Option<f64>,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "tomo_out")]
        out: PathBuf,
        #[arg(long, default_value_t = 5)]
        n_max: usize,
    },
    /// Operations on serialized modes.
    Modes {
        #[command(subcommand)]
        cmd: ModesCmd,
    },
}

#[derive(Subcommand)]
enum ModesCmd {
    /// Overlap between two serialized modes.
    Diff { a: PathBuf, b: PathBuf },
}

/// `--seed` beats the PHOTON_SHAPER_SEED environment variable, which beats
/// the built-in default.
fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(text) => text
            .trim()
            .parse::<u64>()
            .map_err(|_| Error::Parse(format!("{SEED_ENV}=`{text}` is not a u64"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

/// A scenario argument is a file path first, a bundled name second.
fn resolve_scenario(arg: &str) -> Result<Scenario> {
    let path = Path::new(arg);
    if path.exists() {
        return harness::load_scenario(path);
    }
    harness::bundled(arg)
}

fn cmd_run(scenario: &str, seed: Option<u64>, out: &Path) -> Result<()> {
    let s = resolve_scenario(scenario)?;
    let seed = resolve_seed(seed)?;
    let run = harness::run_scenario(&s, seed)?;
    harness::write_outputs(&run, out)?;
    let r = &run.report;
    println!("scenario {} (seed {seed})", r.scenario_name);
    if let Some(ga) = &r.ga {
        println!(
            "  GA: {} generations, stop {:?}, best η̂ = {:.4} ± {:.4}",
            ga.generations_run, ga.stop_reason, ga.best_eta, ga.best_stderr
        );
    }
    println!(
        "  final η̂ = {:.4} ± {:.4}  (oracle η = {:.4}, overlap² = {:.4})",
        r.final_measurement.eta_hat,
        r.final_measurement.stderr,
        r.oracle_final_eta,
        r.oracle_final_overlap_sq
    );
    if let Some(t) = &r.tomography {
        println!("  tomography: W(0,0) = {:.4}, ρ11 = {:.4}", t.w_origin, t.rho_diagonal[1]);
    }
    if let Some(f) = &r.frog {
        println!(
            "  FROG: G = {:.2e}, temporal FWHM {:.1} fs, spectral FWHM {:.2} nm",
            f.g_error, f.temporal_fwhm_fs, f.spectral_fwhm_nm
        );
    }
    if let Some(scan) = &r.phase_scan {
        println!(
            "  phase scan: A = {:.4}, B = {:.4}, φ0 = {:.4} rad",
            scan.fit.amplitude, scan.fit.floor, scan.fit.phi0_rad
        );
    }
    if let Some(comb) = &r.comb {
        println!(
            "  comb: {} teeth, Σ weights = {:.4}",
            comb.teeth.len(),
            comb.oracle_total_weight
        );
    }
    println!("  artifacts in {}", out.display());
    Ok(())
}

fn cmd_scan(scenario: &str, seed: Option<u64>, out: &Path, steps: Option<usize>) -> Result<()> {
    let mut s = resolve_scenario(scenario)?;
    let mut spec = s.analysis.phase_scan.clone().unwrap_or_default();
    if let Some(steps) = steps {
        spec.steps = steps;
        spec.phis_rad = None;
    }
    s.analysis.phase_scan = Some(spec);
    s.validate()?;
    let seed = resolve_seed(seed)?;
    let run = harness::run_scenario(&s, seed)?;
    harness::write_outputs(&run, out)?;
    if let Some(scan) = &run.report.phase_scan {
        println!(
            "phase scan of {}: A = {:.4}, B = {:.4}, φ0 = {:.4} rad, residual {:.2e}",
            s.name, scan.fit.amplitude, scan.fit.floor, scan.fit.phi0_rad, scan.fit.residual_rms
        );
        for p in &scan.points {
            println!("  φ = {:6.4}  η̂ = {:.4} ± {:.4}", p.phi_rad, p.eta_hat, p.stderr);
        }
    }
    println!("artifacts in {}", out.display());
    Ok(())
}

fn cmd_frog(
    mode: Option<&Path>,
    trace_path: Option<&Path>,
    seed: Option<u64>,
    out: &Path,
    n_trace: usize,
    max_iter: usize,
) -> Result<()> {
    std::fs::create_dir_all(out)?;
    let seed = resolve_seed(seed)?;
    let trace = match (mode, trace_path) {
        (Some(mode_path), _) => {
            let m = io::read_mode(mode_path)?;
            let t = frog_trace(&to_time(&m), n_trace)?;
            io::write_trace(&out.join("frog_trace.csv"), &t)?;
            println!("synthesized {}×{} trace from {}", t.n(), t.n(), mode_path.display());
            t
        }
        (None, Some(trace_path)) => io::read_trace(trace_path)?,
        (None, None) => {
            return Err(Error::Scenario("frog needs --mode and/or --trace".into()))
        }
    };
    let r = frog_retrieve(&trace, max_iter, seed)?;
    let retrieved = from_time(&r.field)?;
    io::write_mode(&out.join("retrieved_mode.csv"), &retrieved)?;
    println!(
        "retrieval: G = {:.3e} after {} iterations ({})",
        r.g_error,
        r.iterations,
        if r.converged { "converged" } else { "not converged" }
    );
    println!("artifacts in {}", out.display());
    Ok(())
}

fn cmd_tomo(
    batch: Option<&Path>,
    eta: Option<f64>,
    samples: usize,
    seed: Option<u64>,
    out: &Path,
    n_max: usize,
) -> Result<()> {
    std::fs::create_dir_all(out)?;
    let b = match (batch, eta) {
        (Some(path), _) => io::read_batch(path)?,
        (None, Some(eta)) => {
            let seed = resolve_seed(seed)?;
            let b = sample_quadratures(eta, samples, seed)?;
            io::write_batch(&out.join("quadratures.csv"), &b)?;
            b
        }
        (None, None) => {
            return Err(Error::Scenario("tomo needs --batch or --eta".into()))
        }
    };
    let (diag, grid) = reconstruct_state(&b, n_max, &WignerGridSpec::default())?;
    io::write_wigner(&out.join("wigner.csv"), &grid, &diag)?;
    println!("ρ diagonal: {:?}", diag.populations);
    println!(
        "W(0,0) = {:.4}, min W = {:.4}, EM iterations = {}",
        grid.at_origin(),
        grid.min_value(),
        diag.iterations
    );
    println!("artifacts in {}", out.display());
    Ok(())
}

fn cmd_modes_diff(a: &Path, b: &Path) -> Result<()> {
    let ma = io::read_mode(a)?;
    let mb = io::read_mode(b)?;
    let c = overlap(&ma, &mb)?;
    println!("|overlap|  = {:.9}", c.norm());
    println!("|overlap|² = {:.9}", c.norm_sqr());
    println!("arg        = {:.9} rad", c.arg());
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Run { scenario, seed, out } => cmd_run(&scenario, seed, &out),
        Cmd::Scan { scenario, seed, out, steps } => cmd_scan(&scenario, seed, &out, steps),
        Cmd::Frog { mode, trace, seed, out, n_trace, max_iter } => cmd_frog(
            mode.as_deref(),
            trace.as_deref(),
            seed,
            &out,
            n_trace,
            max_iter,
        ),
        Cmd::Tomo { batch, eta, samples, seed, out, n_max } => {
            cmd_tomo(batch.as_deref(), eta, samples, seed, &out, n_max)
        }
        Cmd::Modes { cmd: ModesCmd::Diff { a, b } } => cmd_modes_diff(&a, &b),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 2 } else { 1 })
        }
    }
}
