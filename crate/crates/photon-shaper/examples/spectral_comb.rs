//! Qudit extension: with a large Michelson delay the photon spectrum breaks
//! into a comb of equidistant teeth. Each tooth is an orthogonal spectral
//! mode; the analysis projects the LO onto every tooth and scans the
//! relative phase between adjacent teeth.
//!
//! ```bash
//! cargo run --release --example spectral_comb
//! ```

use photon_shaper::harness::{comb_scenario, run_scenario};

fn main() {
    let scenario = comb_scenario(600.0, 4).unwrap();
    println!("scenario `{}`: Michelson delay 600 fs on a 9.4 nm photon", scenario.name);
    println!("expected tooth spacing 2π/600 fs ≈ 0.0105 rad/fs ≈ 3.5 nm\n");

    let run = run_scenario(&scenario, 7).unwrap();
    let comb = run.report.comb.as_ref().unwrap();

    println!("tooth   center (rad/fs)   center (nm)   |⟨LO, tooth⟩|²");
    for (k, t) in comb.teeth.iter().enumerate() {
        println!(
            "{k:4}    {:+13.5}    {:10.2}   {:.4}",
            t.center_offset_rad_per_fs, t.center_lambda_nm, t.oracle_weight
        );
    }
    println!(
        "\nqudit amplitude distribution sums to {:.4} (Bessel bound ≤ 1)",
        comb.oracle_total_weight
    );

    println!("\nadjacent-tooth phase scans (fit η = A·cos²((φ−φ0)/2) + B):");
    for p in &comb.pair_scans {
        println!(
            "  teeth {}-{}: A = {:.4}, B = {:.4}, φ0 = {:+.4} rad",
            p.lower_tooth,
            p.lower_tooth + 1,
            p.fit.amplitude,
            p.fit.floor,
            p.fit.phi0_rad
        );
    }
}
