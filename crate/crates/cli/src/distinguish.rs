//! Distinguishability trials: pick one graph of a gadget pair at random, hand
//! the decision procedure an oracle with a hard query budget, and record how
//! often the guess is right. The decision rule is deliberately simple (run
//! the relevant estimator, threshold at the midpoint of the two true sizes):
//! the experiments illustrate the lower-bound regimes, they do not prove
//! them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use graphsize::estimators::{edge_sampling, katzir_estimate, SampleBatch};
use graphsize::generators::GadgetPair;
use graphsize::graph::Graph;
use graphsize::oracle::{Budgeted, GraphOracle, Oracle, OracleConfig, OracleKind, Sensible};

use crate::{derive_seed, CliError, CliResult};

#[derive(Debug, Clone, PartialEq)]
pub enum DistinguishPolicy {
    /// Spend the whole budget on stationary samples, estimate by collisions;
    /// a collision-free transcript reads as "large".
    KatzirMidpoint,
    /// Systematic breadth-first disclosure under the budget; the node count
    /// seen is the estimate.
    BfsCount,
    /// EdgeSampling with the given parameters, cut off by the budget.
    EdgeSampling { phi: f64, ell: u32 },
}

#[derive(Debug, Clone, Copy)]
pub struct DistinguishOutcome {
    pub trials: u32,
    pub correct: u32,
    pub accuracy: f64,
    /// 95% Wilson score interval for the accuracy.
    pub ci_low: f64,
    pub ci_high: f64,
}

fn wilson_interval(successes: u32, trials: u32) -> (f64, f64) {
    let n = trials as f64;
    let p = successes as f64 / n;
    let z = 1.959964;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

fn katzir_under_budget(oracle: &mut impl GraphOracle, budget: u64) -> f64 {
    let mut samples = Vec::new();
    for _ in 0..budget {
        match oracle.stationary_sample() {
            Ok(resp) => match resp.node() {
                Some(info) => samples.push((info.label, info.degrees.forward_degree())),
                None => break, // budget exhausted
            },
            Err(_) => break,
        }
    }
    let Ok(batch) = SampleBatch::new(samples) else {
        return f64::INFINITY;
    };
    katzir_estimate(&batch).unwrap_or(f64::INFINITY)
}

fn bfs_count_under_budget<O: GraphOracle>(oracle: &mut O) -> f64 {
    let mut o = Sensible::new(oracle);
    let Ok(init) = o.init() else { return 0.0 };
    let Some(start) = init.node().copied() else {
        return 0.0;
    };
    let etype = o.kind().forward_etype();
    let mut degrees = vec![start.degrees.forward_degree()];
    let mut next = 1u32;
    while (next as usize) <= degrees.len() {
        let deg = degrees[next as usize - 1];
        for i in 1..=deg {
            if let Some(info) = o.query(next, i, etype).node() {
                if info.label as usize > degrees.len() {
                    degrees.push(info.degrees.forward_degree());
                }
            }
        }
        next += 1;
    }
    degrees.len() as f64
}

fn decide(
    policy: &DistinguishPolicy,
    graph: &Graph,
    pi: Option<&graphsize::Distribution>,
    kind: OracleKind,
    budget: u64,
    oracle_seed: u64,
    est_seed: u64,
) -> CliResult<f64> {
    let config = OracleConfig::seeded(oracle_seed);
    let inner = match pi {
        Some(pi) => Oracle::with_stationary(graph, pi.clone(), kind, config)?,
        None => Oracle::new(graph, kind, config)?,
    };
    let mut oracle = Budgeted::new(inner, budget);
    let estimate = match policy {
        DistinguishPolicy::KatzirMidpoint => katzir_under_budget(&mut oracle, budget),
        DistinguishPolicy::BfsCount => bfs_count_under_budget(&mut oracle),
        DistinguishPolicy::EdgeSampling { phi, ell } => {
            let mut rng = ChaCha12Rng::seed_from_u64(est_seed);
            edge_sampling(&mut oracle, *ell, *phi, &mut rng)?.estimate as f64
        }
    };
    assert!(
        oracle.queries_used() <= budget,
        "budget breached: {}",
        oracle.queries_used()
    );
    Ok(estimate)
}

/// Runs `trials` independent distinguishing attempts between the two graphs
/// of `pair` and reports the empirical accuracy with a 95% interval. Panics
/// if any trial's oracle counter exceeded the budget (hard enforcement).
pub fn run_distinguish(
    pair: &GadgetPair,
    kind: OracleKind,
    policy: &DistinguishPolicy,
    budget: u64,
    trials: u32,
    master_seed: u64,
) -> CliResult<DistinguishOutcome> {
    if budget < 1 {
        return Err(CliError::Validation("budget must be at least 1".into()));
    }
    if trials < 1 {
        return Err(CliError::Validation("trials must be at least 1".into()));
    }
    let midpoint = (pair.n_true.0 + pair.n_true.1) as f64 / 2.0;
    // the stationary distributions are trial-invariant; compute them once
    let pis = if kind == OracleKind::Stationary {
        Some((
            graphsize::stationary_distribution(&pair.g, 1e-12).map_err(CliError::from)?,
            graphsize::stationary_distribution(&pair.g_prime, 1e-12).map_err(CliError::from)?,
        ))
    } else {
        None
    };
    let results: Vec<CliResult<bool>> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let trial_seed = derive_seed(master_seed, trial as u64);
            let mut pick_rng = ChaCha12Rng::seed_from_u64(trial_seed);
            let use_prime: bool = pick_rng.gen();
            let graph = if use_prime { &pair.g_prime } else { &pair.g };
            let pi = pis.as_ref().map(|(a, b)| if use_prime { b } else { a });
            let estimate = decide(
                policy,
                graph,
                pi,
                kind,
                budget,
                derive_seed(trial_seed, 1),
                derive_seed(trial_seed, 2),
            )?;
            let guess_prime = estimate >= midpoint;
            Ok(guess_prime == use_prime)
        })
        .collect();

    let mut correct = 0u32;
    for r in results {
        if r? {
            correct += 1;
        }
    }
    let accuracy = correct as f64 / trials as f64;
    let (ci_low, ci_high) = wilson_interval(correct, trials);
    Ok(DistinguishOutcome {
        trials,
        correct,
        accuracy,
        ci_low,
        ci_high,
    })
}
