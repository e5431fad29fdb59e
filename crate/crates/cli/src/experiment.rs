//! Seeded experiment runs: one CSV row per trial, trials independently
//! re-runnable via stable per-trial seeds, output byte-identical for a fixed
//! (spec, master_seed).

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;

use graphsize::estimators;
use graphsize::graph::Graph;
use graphsize::oracle::{GraphOracle, Oracle, OracleConfig, OracleKind, SeedPolicy, Sensible};
use graphsize::walk::{mixing_time_empirical, stationary_distribution};

use crate::report::{EstimateReport, CSV_HEADER};
use crate::specfile::{EstimatorSpec, ExperimentSpec};
use crate::{derive_seed, CliError, CliResult};

/// Seed-stream indices within a trial.
const STREAM_GRAPH: u64 = 1;
const STREAM_ORACLE: u64 = 2;
const STREAM_ESTIMATOR: u64 = 3;

pub struct TrialOutput {
    pub report: EstimateReport,
    pub transcript: Option<String>,
}

/// Runs one trial of an estimator against a graph. Used by both the
/// experiment runner and the `estimate` subcommand.
pub fn run_estimator(
    estimator: &EstimatorSpec,
    graph: &Graph,
    kind: OracleKind,
    seed_policy: SeedPolicy,
    oracle_seed: u64,
    estimator_seed: u64,
    record_transcript: bool,
) -> CliResult<(f64, u64, Option<String>)> {
    let config = OracleConfig {
        seed: oracle_seed,
        seed_policy,
        record_transcript,
        ..Default::default()
    };
    let mut rng = ChaCha12Rng::seed_from_u64(estimator_seed);
    match estimator {
        EstimatorSpec::Katzir { r, epsilon, delta } => {
            let r = match (r, epsilon, delta) {
                (Some(r), _, _) => *r,
                (None, Some(e), Some(d)) => {
                    let pi = stationary_distribution(graph, 1e-12)?;
                    estimators::katzir_sample_size(*e, *d, pi.l2_norm(), graph.d_avg())?
                }
                _ => unreachable!("validated at parse time"),
            };
            let mut oracle = Oracle::new(graph, kind, config)?;
            let batch = estimators::stationary_batch(&mut oracle, r as usize)?;
            let estimate = estimators::katzir_estimate(&batch)?;
            let transcript = oracle.transcript().map(|t| t.render());
            Ok((estimate, oracle.queries_used(), transcript))
        }
        EstimatorSpec::KatzirWalks {
            t_mix,
            epsilon,
            delta,
        } => {
            let t = match t_mix {
                Some(t) => *t,
                None => mixing_time_empirical(graph)?,
            };
            let oracle = Oracle::new(graph, kind, config)?;
            let mut sensible = Sensible::new(oracle);
            let est =
                estimators::estimate_n_via_walks(&mut sensible, t, *epsilon, *delta, &mut rng)?;
            let transcript = sensible.inner().transcript().map(|t| t.render());
            Ok((est.estimate, est.queries, transcript))
        }
        EstimatorSpec::EdgeSampling { phi, ell } => {
            let mut oracle = Oracle::new(graph, kind, config)?;
            let run = estimators::edge_sampling(&mut oracle, *ell, *phi, &mut rng)?;
            let transcript = oracle.transcript().map(|t| t.render());
            Ok((run.estimate as f64, run.queries_used, transcript))
        }
        EstimatorSpec::EdgeSamplingCentered { phi, ell, epsilon } => {
            let mut oracle = Oracle::new(graph, kind, config)?;
            let (centered, run) =
                estimators::edge_sampling_centered(&mut oracle, *ell, *phi, *epsilon, &mut rng)?;
            let transcript = oracle.transcript().map(|t| t.render());
            Ok((centered, run.queries_used, transcript))
        }
    }
}

pub fn run_trial(
    spec: &ExperimentSpec,
    trial: u32,
    record_transcript: bool,
) -> CliResult<TrialOutput> {
    let trial_seed = derive_seed(spec.master_seed, trial as u64);
    let mut graph_rng = ChaCha12Rng::seed_from_u64(derive_seed(trial_seed, STREAM_GRAPH));
    let graph = spec.generator.build(&mut graph_rng)?;
    let (estimate, queries, transcript) = run_estimator(
        &spec.estimator,
        &graph,
        spec.oracle_kind,
        spec.seed_policy,
        derive_seed(trial_seed, STREAM_ORACLE),
        derive_seed(trial_seed, STREAM_ESTIMATOR),
        record_transcript,
    )?;
    Ok(TrialOutput {
        report: EstimateReport {
            estimator: spec.estimator.name().to_string(),
            graph_id: spec.generator.id(),
            seed: trial_seed,
            params: spec.estimator.params_id(),
            estimate,
            queries,
            // kept at zero so experiment output is reproducible byte-for-byte
            wall_ms: 0,
        },
        transcript,
    })
}

/// Runs every trial (in parallel, merged in trial order) and renders the CSV.
pub fn run_experiment(
    spec: &ExperimentSpec,
    transcript_dir: Option<&std::path::Path>,
) -> CliResult<String> {
    let outputs: Vec<CliResult<TrialOutput>> = (0..spec.trials)
        .into_par_iter()
        .map(|trial| run_trial(spec, trial, transcript_dir.is_some()))
        .collect();

    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    for (trial, out) in outputs.into_iter().enumerate() {
        let out = out.map_err(|e| match e {
            CliError::Validation(m) => CliError::Validation(format!("trial {trial}: {m}")),
            CliError::Runtime(m) => CliError::Runtime(format!("trial {trial}: {m}")),
        })?;
        csv.push_str(&out.report.to_csv_row());
        csv.push('\n');
        if let (Some(dir), Some(text)) = (transcript_dir, out.transcript) {
            std::fs::create_dir_all(dir).map_err(|e| CliError::Runtime(e.to_string()))?;
            std::fs::write(dir.join(format!("trial_{trial}.log")), text)
                .map_err(|e| CliError::Runtime(e.to_string()))?;
        }
    }
    Ok(csv)
}
