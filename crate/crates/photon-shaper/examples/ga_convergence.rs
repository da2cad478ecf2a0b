//! Evolve a shaped local oscillator against the noisy homodyne-efficiency
//! fitness and watch the fitness curve converge.
//!
//! The photon is a Gaussian pulse stretched by 10 cm of BK7; the genes are
//! the coefficients of a polynomial spectral phase. Typical runs plateau
//! after a few tens of generations.
//!
//! ```bash
//! cargo run --release --example ga_convergence
//! ```

use photon_shaper::evolve::{run_ga, GaSetup};
use photon_shaper::harness::bundled;
use photon_shaper::measurement::DetectionChannel;

fn main() {
    let scenario = bundled("fig3_phase_only").unwrap();
    let resolved = scenario.resolve().unwrap();
    let ga = scenario.ga.as_ref().unwrap();
    let setup = GaSetup {
        signal: resolved.signal,
        base_lo: resolved.base_lo,
        channel: DetectionChannel::new(scenario.channel.eta_sys).unwrap(),
        encoding: ga.encoding,
        n_pixels: ga.n_pixels,
    };

    let master_seed = 7;
    let result = run_ga(&setup, &ga.params, master_seed).unwrap();

    println!("gen   best η̂   mean η̂   true overlap²");
    for h in &result.history {
        println!(
            "{:3}   {:.4}   {:.4}   {:.4}",
            h.generation, h.best_eta, h.mean_eta, h.best_overlap_sq_true
        );
    }
    println!();
    println!(
        "stopped after {} generations ({:?}), {} fitness evaluations",
        result.history.len(),
        result.stop,
        result.total_evaluations
    );
    println!(
        "best individual: η̂ = {:.4} ± {:.4}, true overlap² = {:.4}",
        result.best_eta, result.best_stderr, result.best_overlap_sq_true
    );
    if let Some(h) = result.history.iter().find(|h| h.best_overlap_sq_true >= 0.95) {
        println!("reached overlap² ≥ 0.95 at generation {}", h.generation);
    }
}
