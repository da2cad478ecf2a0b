//! Adaptive genetic algorithm: evolve SLM gene vectors shaping the LO until
//! the homodyne-efficiency fitness converges.
//!
//! Every stochastic step draws from a substream seeded by a pure function of
//! (master seed, generation, individual index), so serial and parallel
//! evaluation orders produce identical batches and the whole run is
//! reproducible bit-for-bit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measurement::{
    efficiency, estimate_eta, sample_quadratures, DetectionChannel, MIN_BATCH,
};
use crate::mode::{overlap, SpectralMode};
use crate::seeds;
use crate::shaping::{slm_apply, Encoding, GeneVector, SlmMask};

const INIT_STREAM: u64 = u64::MAX;
const BREED_STREAM: u64 = u64::MAX - 1;
const EVAL_STREAM: u64 = u64::MAX - 2;

/// Genetic-algorithm knobs. The defaults are the artifact's reference
/// configuration; every scenario may override them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GaParams {
    pub population_size: usize,
    pub elite_count: usize,
    pub tournament_size: usize,
    /// Probability of two-point crossover (otherwise the child is a parent
    /// clone).
    pub crossover_rate: f64,
    /// Per-gene mutation probability.
    pub mutation_rate: f64,
    /// Gaussian mutation width in gene units; results are clipped to [0, 1].
    pub mutation_sigma: f64,
    pub max_generations: usize,
    /// Stop when the best fitness improves by less than 2× the pooled
    /// standard error over this many generations.
    pub stall_generations: usize,
    pub samples_per_eval: usize,
    /// Re-measure elites each generation so a lucky noise spike cannot lock
    /// in a mediocre individual.
    pub reevaluate_elites: bool,
    /// Bypass quadrature sampling and use the exact efficiency as fitness
    /// (for algorithm diagnostics).
    pub exact_fitness: bool,
}

impl Default for GaParams {
    fn default() -> Self {
        Self {
            population_size: 30,
            elite_count: 2,
            tournament_size: 3,
            crossover_rate: 0.9,
            mutation_rate: 0.03,
            mutation_sigma: 0.08,
            max_generations: 80,
            stall_generations: 15,
            samples_per_eval: 10_000,
            reevaluate_elites: true,
            exact_fitness: false,
        }
    }
}

impl GaParams {
    pub fn validate(&self) -> Result<()> {
        if self.population_size < 4 {
            return Err(Error::GaParams(format!(
                "population_size {} must be at least 4",
                self.population_size
            )));
        }
        if self.elite_count >= self.population_size {
            return Err(Error::GaParams(format!(
                "elite_count {} must be below population_size {}",
                self.elite_count, self.population_size
            )));
        }
        if self.tournament_size == 0 {
            return Err(Error::GaParams("tournament_size must be positive".into()));
        }
        for (name, rate) in [
            ("crossover_rate", self.crossover_rate),
            ("mutation_rate", self.mutation_rate),
        ] {
            if !(0.0..=1.0).contains(&rate) {
                return Err(Error::GaParams(format!("{name} {rate} outside [0, 1]")));
            }
        }
        if !self.mutation_sigma.is_finite() || self.mutation_sigma < 0.0 {
            return Err(Error::GaParams("mutation_sigma must be nonnegative".into()));
        }
        if self.max_generations == 0 || self.stall_generations == 0 {
            return Err(Error::GaParams("generation counts must be positive".into()));
        }
        if !self.exact_fitness && self.samples_per_eval < MIN_BATCH {
            return Err(Error::GaParams(format!(
                "samples_per_eval {} is below the estimator minimum {MIN_BATCH}",
                self.samples_per_eval
            )));
        }
        Ok(())
    }
}

/// Everything the fitness function needs: what the photon is, what the
/// unshaped LO is, and how it is detected.
#[derive(Clone, Debug)]
pub struct GaSetup {
    pub signal: SpectralMode,
    pub base_lo: SpectralMode,
    pub channel: DetectionChannel,
    pub encoding: Encoding,
    pub n_pixels: usize,
}

/// Measured fitness of one individual.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Fitness {
    pub eta_hat: f64,
    pub stderr: f64,
    /// Set when the individual could not be measured at all (an all-blocking
    /// amplitude mask is a legal but worthless individual).
    pub failed: bool,
    /// Simulator-internal ground truth |⟨LO, signal⟩|².
    pub overlap_sq_true: f64,
}

#[derive(Clone, Debug)]
pub struct Member {
    pub genes: GeneVector,
    pub fitness: Option<Fitness>,
}

/// One generation of gene vectors with their fitness values.
#[derive(Clone, Debug)]
pub struct Population {
    pub generation: usize,
    /// Seed descriptor: evaluation substreams are derived from the run's
    /// master seed, this generation index, and the member index.
    pub master_seed: u64,
    pub members: Vec<Member>,
}

impl Population {
    pub fn is_evaluated(&self) -> bool {
        self.members.iter().all(|m| m.fitness.is_some())
    }

    /// Index of the best evaluated member (highest η̂, first on ties).
    pub fn best_index(&self) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for (i, m) in self.members.iter().enumerate() {
            let eta = m.fitness.as_ref()?.eta_hat;
            if best.is_none_or(|(_, b)| eta > b) {
                best = Some((i, eta));
            }
        }
        best.map(|(i, _)| i)
    }
}

/// Initial population of uniform random gene vectors; deterministic given
/// the seed, fitness unset.
pub fn init_population(
    encoding: Encoding,
    n_pixels: usize,
    params: &GaParams,
    seed: u64,
) -> Result<Population> {
    params.validate()?;
    let gene_count = encoding.gene_count(n_pixels);
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let members = (0..params.population_size)
        .map(|_| {
            let genes: Vec<f64> = (0..gene_count).map(|_| rng.random::<f64>()).collect();
            Ok(Member {
                genes: GeneVector::new(encoding, n_pixels, genes)?,
                fitness: None,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Population { generation: 0, master_seed: seed, members })
}

/// Measure one gene vector: decode, shape the LO, detect, estimate.
fn measure(setup: &GaSetup, genes: &GeneVector, samples: usize, exact: bool, seed: u64) -> Fitness {
    let shaped = genes
        .decode(setup.signal.grid())
        .and_then(|mask| slm_apply(&setup.base_lo, &mask));
    let lo = match shaped {
        Ok((lo, _throughput)) => lo,
        Err(_) => {
            return Fitness { eta_hat: 0.0, stderr: 0.0, failed: true, overlap_sq_true: 0.0 }
        }
    };
    let overlap_sq = match overlap(&lo, &setup.signal) {
        Ok(c) => c.norm_sqr(),
        Err(_) => {
            return Fitness { eta_hat: 0.0, stderr: 0.0, failed: true, overlap_sq_true: 0.0 }
        }
    };
    let eta = match efficiency(&lo, &setup.signal, &setup.channel) {
        Ok(eta) => eta,
        Err(_) => {
            return Fitness { eta_hat: 0.0, stderr: 0.0, failed: true, overlap_sq_true: 0.0 }
        }
    };
    if exact {
        return Fitness { eta_hat: eta, stderr: 0.0, failed: false, overlap_sq_true: overlap_sq };
    }
    match sample_quadratures(eta, samples, seed).and_then(|b| estimate_eta(&b)) {
        Ok(est) => Fitness {
            eta_hat: est.eta,
            stderr: est.stderr,
            failed: false,
            overlap_sq_true: overlap_sq,
        },
        Err(_) => Fitness { eta_hat: 0.0, stderr: 0.0, failed: true, overlap_sq_true: overlap_sq },
    }
}

/// Evaluation substream seed for (master, generation, index) — the
/// parallelism-proof determinism contract.
pub fn substream_seed(master: u64, generation: usize, index: usize) -> u64 {
    seeds::derive(master, &[EVAL_STREAM, generation as u64, index as u64])
}

/// Fill in fitness for every unevaluated member. Members that already carry
/// a fitness (elites under `reevaluate_elites = false`) keep it.
pub fn evaluate(pop: &mut Population, setup: &GaSetup, params: &GaParams, master: u64) -> usize {
    let generation = pop.generation;
    let fresh: Vec<(usize, Fitness)> = pop
        .members
        .par_iter()
        .enumerate()
        .filter(|(_, m)| m.fitness.is_none())
        .map(|(i, m)| {
            let seed = substream_seed(master, generation, i);
            (
                i,
                measure(setup, &m.genes, params.samples_per_eval, params.exact_fitness, seed),
            )
        })
        .collect();
    let count = fresh.len();
    for (i, f) in fresh {
        pop.members[i].fitness = Some(f);
    }
    count
}

fn tournament(rng: &mut ChaCha12Rng, pop: &Population, size: usize) -> usize {
    let n = pop.members.len();
    let mut best = rng.random_range(0..n);
    let mut best_eta = pop.members[best].fitness.as_ref().map_or(0.0, |f| f.eta_hat);
    for _ in 1..size {
        let k = rng.random_range(0..n);
        let eta = pop.members[k].fitness.as_ref().map_or(0.0, |f| f.eta_hat);
        if eta > best_eta {
            best = k;
            best_eta = eta;
        }
    }
    best
}

/// Breed the next generation: elites cloned unchanged, the rest filled by
/// tournament selection, two-point crossover, and clipped Gaussian mutation.
/// Deterministic given the seed.
pub fn next_generation(pop: &Population, params: &GaParams, seed: u64) -> Result<Population> {
    if !pop.is_evaluated() {
        return Err(Error::GaParams("cannot breed from an unevaluated population".into()));
    }
    let mut order: Vec<usize> = (0..pop.members.len()).collect();
    order.sort_by(|&a, &b| {
        let fa = pop.members[a].fitness.as_ref().unwrap().eta_hat;
        let fb = pop.members[b].fitness.as_ref().unwrap().eta_hat;
        fb.partial_cmp(&fa).unwrap().then(a.cmp(&b))
    });

    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut members = Vec::with_capacity(params.population_size);
    for &i in order.iter().take(params.elite_count) {
        members.push(Member {
            genes: pop.members[i].genes.clone(),
            fitness: if params.reevaluate_elites {
                None
            } else {
                pop.members[i].fitness
            },
        });
    }
    let encoding = pop.members[0].genes.encoding();
    let n_pixels = pop.members[0].genes.n_pixels();
    let gene_count = encoding.gene_count(n_pixels);
    while members.len() < params.population_size {
        let p1 = tournament(&mut rng, pop, params.tournament_size);
        let p2 = tournament(&mut rng, pop, params.tournament_size);
        let mut genes: Vec<f64> = if rng.random::<f64>() < params.crossover_rate {
            let mut a = rng.random_range(0..=gene_count);
            let mut b = rng.random_range(0..=gene_count);
            if a > b {
                std::mem::swap(&mut a, &mut b);
            }
            let g1 = pop.members[p1].genes.genes();
            let g2 = pop.members[p2].genes.genes();
            (0..gene_count)
                .map(|k| if k >= a && k < b { g2[k] } else { g1[k] })
                .collect()
        } else {
            pop.members[p1].genes.genes().to_vec()
        };
        for g in &mut genes {
            if rng.random::<f64>() < params.mutation_rate {
                let kick: f64 = rng.sample(StandardNormal);
                *g = (*g + params.mutation_sigma * kick).clamp(0.0, 1.0);
            }
        }
        members.push(Member {
            genes: GeneVector::new(encoding, n_pixels, genes)
                .expect("bred genes stay in [0, 1]"),
            fitness: None,
        });
    }
    Ok(Population { generation: pop.generation + 1, master_seed: pop.master_seed, members })
}

/// Why a GA run stopped.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// Best fitness settled within measurement noise over the stall window.
    Converged,
    /// Best fitness drifted downward over the stall window.
    Stalled,
    /// Ran out of generations.
    Budget,
}

/// Per-generation record of a run.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct GenerationStats {
    pub generation: usize,
    pub best_eta: f64,
    pub mean_eta: f64,
    pub best_stderr: f64,
    /// Simulator-internal ground truth of the generation's best individual.
    pub best_overlap_sq_true: f64,
}

/// Outcome of [`run_ga`].
#[derive(Clone, Debug)]
pub struct GaResult {
    pub best_genes: GeneVector,
    pub best_mask: SlmMask,
    pub best_eta: f64,
    pub best_stderr: f64,
    pub best_overlap_sq_true: f64,
    pub history: Vec<GenerationStats>,
    pub total_evaluations: usize,
    pub stop: StopReason,
}

/// Evaluate → record → breed until the budget runs out or the best fitness
/// stops improving relative to its own error bars.
pub fn run_ga(setup: &GaSetup, params: &GaParams, master_seed: u64) -> Result<GaResult> {
    params.validate()?;
    let mut pop = init_population(
        setup.encoding,
        setup.n_pixels,
        params,
        seeds::derive(master_seed, &[INIT_STREAM]),
    )?;
    pop.master_seed = master_seed;

    let mut history: Vec<GenerationStats> = Vec::new();
    let mut total_evaluations = 0;
    let mut stop = StopReason::Budget;

    for generation in 0..params.max_generations {
        total_evaluations += evaluate(&mut pop, setup, params, master_seed);
        let best_i = pop.best_index().expect("population evaluated");
        let best = pop.members[best_i].fitness.unwrap();
        let mean_eta = pop
            .members
            .iter()
            .map(|m| m.fitness.unwrap().eta_hat)
            .sum::<f64>()
            / pop.members.len() as f64;
        history.push(GenerationStats {
            generation,
            best_eta: best.eta_hat,
            mean_eta,
            best_stderr: best.stderr,
            best_overlap_sq_true: best.overlap_sq_true,
        });

        if generation >= params.stall_generations {
            let now = history[generation];
            let then = history[generation - params.stall_generations];
            let pooled =
                ((now.best_stderr.powi(2) + then.best_stderr.powi(2)) / 2.0).sqrt();
            let improvement = now.best_eta - then.best_eta;
            if improvement < 2.0 * pooled {
                stop = if improvement >= 0.0 {
                    StopReason::Converged
                } else {
                    StopReason::Stalled
                };
                break;
            }
        }

        if generation + 1 < params.max_generations {
            pop = next_generation(&pop, params, seeds::derive(master_seed, &[BREED_STREAM, generation as u64]))?;
        }
    }

    let best_i = pop.best_index().expect("population evaluated");
    let best_member = &pop.members[best_i];
    let best = best_member.fitness.unwrap();
    let best_mask = best_member.genes.decode(setup.signal.grid())?;
    Ok(GaResult {
        best_genes: best_member.genes.clone(),
        best_mask,
        best_eta: best.eta_hat,
        best_stderr: best.stderr,
        best_overlap_sq_true: best.overlap_sq_true,
        history,
        total_evaluations,
        stop,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mode::{gaussian_mode, FrequencyGrid};
    use crate::shaping::{apply_phase, michelson_modulate, PhasePolynomial};

    fn identity_setup(eta_sys: f64, encoding: Encoding) -> GaSetup {
        let g = FrequencyGrid::default_800nm();
        let m = gaussian_mode(&g, 0.0, 9.4).unwrap();
        GaSetup {
            signal: m.clone(),
            base_lo: m,
            channel: DetectionChannel::new(eta_sys).unwrap(),
            encoding,
            n_pixels: 128,
        }
    }

    #[test]
    fn init_population_is_reproducible_with_the_right_arity() {
        let params = GaParams::default();
        let a = init_population(Encoding::PixelPhase, 128, &params, 7).unwrap();
        let b = init_population(Encoding::PixelPhase, 128, &params, 7).unwrap();
        assert_eq!(a.members.len(), 30);
        for (x, y) in a.members.iter().zip(&b.members) {
            assert_eq!(x.genes.genes(), y.genes.genes());
            assert_eq!(x.genes.genes().len(), 128);
        }
        let p = init_population(Encoding::PolyPhase, 128, &params, 7).unwrap();
        assert!(p.members.iter().all(|m| m.genes.genes().len() == 5));
        let c = init_population(Encoding::PixelPhase, 128, &params, 8).unwrap();
        assert!(a
            .members
            .iter()
            .zip(&c.members)
            .any(|(x, y)| x.genes.genes() != y.genes.genes()));
    }

    #[test]
    fn identity_individual_measures_eta_sys() {
        let setup = identity_setup(0.6, Encoding::PolyPhase);
        let genes = GeneVector::new(Encoding::PolyPhase, 128, vec![0.5; 5]).unwrap();
        let f = measure(&setup, &genes, 10_000, false, 123);
        assert!(!f.failed);
        assert!((f.eta_hat - 0.6).abs() < 0.033, "η̂ = {}", f.eta_hat); // 3σ at n = 10⁴
        assert!((f.overlap_sq_true - 1.0).abs() < 1e-9);
    }

    #[test]
    fn orthogonalizing_mask_scores_near_zero() {
        let g = FrequencyGrid::default_800nm();
        let m = michelson_modulate(
            &gaussian_mode(&g, 0.0, 9.4).unwrap(),
            150.0,
            std::f64::consts::PI,
        )
        .unwrap();
        let setup = GaSetup {
            signal: m.clone(),
            base_lo: m,
            channel: DetectionChannel::new(0.6).unwrap(),
            encoding: Encoding::PixelPhase,
            n_pixels: 128,
        };
        let mut genes = vec![0.0; 128];
        for g in genes.iter_mut().take(128).skip(64) {
            *g = 0.5; // φ = π on the upper half
        }
        let gv = GeneVector::new(Encoding::PixelPhase, 128, genes).unwrap();
        let f = measure(&setup, &gv, 10_000, false, 5);
        assert!(f.eta_hat <= 0.02, "η̂ = {}", f.eta_hat);
    }

    #[test]
    fn substream_seeds_make_evaluation_order_irrelevant() {
        let setup = identity_setup(0.6, Encoding::PolyPhase);
        let params = GaParams::default();
        let mut a = init_population(Encoding::PolyPhase, 128, &params, 3).unwrap();
        let mut b = a.clone();
        evaluate(&mut a, &setup, &params, 99);
        evaluate(&mut b, &setup, &params, 99);
        for (x, y) in a.members.iter().zip(&b.members) {
            assert_eq!(x.fitness.unwrap().eta_hat, y.fitness.unwrap().eta_hat);
        }
        // direct recomputation from the substream contract
        let f = measure(
            &setup,
            &a.members[4].genes,
            params.samples_per_eval,
            false,
            substream_seed(99, 0, 4),
        );
        assert_eq!(f.eta_hat, a.members[4].fitness.unwrap().eta_hat);
    }

    #[test]
    fn degenerate_operators_reduce_to_cloning() {
        let setup = identity_setup(0.6, Encoding::PolyPhase);
        let params = GaParams {
            mutation_rate: 0.0,
            crossover_rate: 0.0,
            ..GaParams::default()
        };
        let mut pop = init_population(Encoding::PolyPhase, 128, &params, 3).unwrap();
        evaluate(&mut pop, &setup, &params, 11);
        let next = next_generation(&pop, &params, 17).unwrap();
        for child in &next.members {
            assert!(
                pop.members.iter().any(|p| p.genes.genes() == child.genes.genes()),
                "child genes are not a parent clone"
            );
        }
    }

    #[test]
    fn elites_keep_their_genes() {
        let setup = identity_setup(0.6, Encoding::PolyPhase);
        let params = GaParams::default();
        let mut pop = init_population(Encoding::PolyPhase, 128, &params, 3).unwrap();
        evaluate(&mut pop, &setup, &params, 11);
        let best = pop.best_index().unwrap();
        let elite_genes = pop.members[best].genes.clone();
        let next = next_generation(&pop, &params, 17).unwrap();
        assert_eq!(next.members[0].genes.genes(), elite_genes.genes());
        assert!(next.members[0].fitness.is_none()); // fresh measurement next round
        let keep = GaParams { reevaluate_elites: false, ..params };
        let kept = next_generation(&pop, &keep, 17).unwrap();
        assert!(kept.members[0].fitness.is_some());
    }

    #[test]
    fn tournament_is_uniform_under_equal_fitness() {
        let params = GaParams::default();
        let mut pop = init_population(Encoding::PolyPhase, 128, &params, 3).unwrap();
        for m in &mut pop.members {
            m.fitness =
                Some(Fitness { eta_hat: 0.5, stderr: 0.0, failed: false, overlap_sq_true: 0.5 });
        }
        let mut rng = ChaCha12Rng::seed_from_u64(1234);
        let draws = 10_000;
        let mut counts = vec![0usize; pop.members.len()];
        for _ in 0..draws {
            counts[tournament(&mut rng, &pop, 3)] += 1;
        }
        let expected = draws as f64 / counts.len() as f64;
        let chi2: f64 = counts
            .iter()
            .map(|&c| {
                let d = c as f64 - expected;
                d * d / expected
            })
            .sum();
        // df = 29; χ² above 60 would reject uniformity at far below the 1e-3 level
        assert!(chi2 < 60.0, "χ² = {chi2}, counts {counts:?}");
    }

    #[test]
    fn noiseless_elitism_is_monotone() {
        let g = FrequencyGrid::default_800nm();
        let base = gaussian_mode(&g, 0.0, 9.4).unwrap();
        let p = PhasePolynomial::new([0.0, 0.0, 3000.0, 0.0, 0.0]).unwrap();
        let setup = GaSetup {
            signal: apply_phase(&base, &p),
            base_lo: base,
            channel: DetectionChannel::new(0.6).unwrap(),
            encoding: Encoding::PolyPhase,
            n_pixels: 128,
        };
        let params = GaParams {
            exact_fitness: true,
            max_generations: 25,
            population_size: 16,
            ..GaParams::default()
        };
        let result = run_ga(&setup, &params, 21).unwrap();
        for w in result.history.windows(2) {
            assert!(
                w[1].best_eta >= w[0].best_eta,
                "best fitness decreased: {} -> {}",
                w[0].best_eta,
                w[1].best_eta
            );
        }
        assert_eq!(result.history.len(), 25);
        assert_eq!(result.stop, StopReason::Budget);
    }

    #[test]
    fn identity_scenario_converges_to_eta_sys() {
        let setup = identity_setup(0.6, Encoding::PolyPhase);
        let params = GaParams::default();
        let result = run_ga(&setup, &params, 2).unwrap();
        assert!(
            result.best_overlap_sq_true >= 0.9,
            "final true overlap² {} after {} generations ({:?})",
            result.best_overlap_sq_true,
            result.history.len(),
            result.stop
        );
        assert!(
            (result.best_eta - 0.6).abs() < 0.05,
            "final η̂ {} far from 0.6",
            result.best_eta
        );
        // once found, elites keep the best fitness near the optimum
        let last = result.history.last().unwrap();
        assert!((last.best_eta - 0.6).abs() < 0.06, "late best {}", last.best_eta);
    }

    #[test]
    fn runs_are_bit_reproducible() {
        let setup = identity_setup(0.6, Encoding::PolyPhase);
        let params = GaParams { max_generations: 8, ..GaParams::default() };
        let a = run_ga(&setup, &params, 33).unwrap();
        let b = run_ga(&setup, &params, 33).unwrap();
        assert_eq!(a.history.len(), b.history.len());
        for (x, y) in a.history.iter().zip(&b.history) {
            assert_eq!(x.best_eta, y.best_eta);
            assert_eq!(x.mean_eta, y.mean_eta);
        }
        assert_eq!(a.best_genes.genes(), b.best_genes.genes());
        assert_eq!(a.total_evaluations, b.total_evaluations);
    }

    #[test]
    fn gene_domain_stays_closed_under_breeding() {
        let setup = identity_setup(0.6, Encoding::PixelAmpPhase);
        let params = GaParams {
            mutation_rate: 0.5,
            mutation_sigma: 0.5,
            ..GaParams::default()
        };
        let mut pop = init_population(Encoding::PixelAmpPhase, 128, &params, 3).unwrap();
        for _ in 0..5 {
            evaluate(&mut pop, &setup, &params, 11);
            pop = next_generation(&pop, &params, 17).unwrap();
            for m in &pop.members {
                assert!(m.genes.genes().iter().all(|g| (0.0..=1.0).contains(g)));
            }
        }
    }

    #[test]
    fn params_are_validated() {
        let bad = GaParams { population_size: 2, ..GaParams::default() };
        assert!(bad.validate().is_err());
        let bad = GaParams { elite_count: 30, ..GaParams::default() };
        assert!(bad.validate().is_err());
        let bad = GaParams { crossover_rate: 1.5, ..GaParams::default() };
        assert!(bad.validate().is_err());
        let bad = GaParams { samples_per_eval: 10, ..GaParams::default() };
        assert!(bad.validate().is_err());
    }
}
