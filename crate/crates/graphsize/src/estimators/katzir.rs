//! Collision-based node-count estimation from stationary samples:
//! `n_hat = (Psi_1 * Psi_{-1} - r) / C` over a batch of `r` (label, degree)
//! samples, where `Psi_1` sums degrees, `Psi_{-1}` sums inverse degrees and
//! `C` counts ordered label collisions.

use std::collections::HashMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::oracle::{GraphOracle, Label, Sensible};

#[derive(Debug, Clone)]
pub struct SampleBatch {
    samples: Vec<(Label, usize)>,
}

impl SampleBatch {
    pub fn new(samples: Vec<(Label, usize)>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidParameter(
                "sample batch must be non-empty".into(),
            ));
        }
        if let Some(&(l, d)) = samples.iter().find(|&&(_, d)| d == 0) {
            return Err(Error::InvalidParameter(format!(
                "sample (label {l}) has degree {d}; degrees must be positive"
            )));
        }
        Ok(SampleBatch { samples })
    }

    pub fn r(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> &[(Label, usize)] {
        &self.samples
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KatzirStats {
    pub r: usize,
    pub psi1: f64,
    pub psi_minus1: f64,
    /// Ordered collision pairs `(i, j)`, `i != j`, with equal labels; always
    /// even by symmetry.
    pub collisions: u64,
}

impl KatzirStats {
    pub fn from_batch(batch: &SampleBatch) -> Self {
        let mut psi1 = 0.0;
        let mut psi_minus1 = 0.0;
        let mut counts: HashMap<Label, u64> = HashMap::new();
        for &(label, degree) in batch.samples() {
            psi1 += degree as f64;
            psi_minus1 += 1.0 / degree as f64;
            *counts.entry(label).or_insert(0) += 1;
        }
        let collisions = counts.values().map(|&c| c * (c - 1)).sum();
        KatzirStats {
            r: batch.r(),
            psi1,
            psi_minus1,
            collisions,
        }
    }

    pub fn estimate(&self) -> Result<f64> {
        if self.collisions == 0 {
            return Err(Error::NoCollision { r: self.r });
        }
        Ok((self.psi1 * self.psi_minus1 - self.r as f64) / self.collisions as f64)
    }
}

pub fn katzir_estimate(batch: &SampleBatch) -> Result<f64> {
    KatzirStats::from_batch(batch).estimate()
}

/// Sample-size rule: `ceil(1 + 32/(eps^2 delta) * max(1/||pi||_2, d_avg))`.
/// `eps` and `delta` live in `(0, 1]`; the value 1 is admitted as a
/// degenerate probe of the formula.
pub fn katzir_sample_size(eps: f64, delta: f64, pi_two_norm: f64, d_avg: f64) -> Result<u64> {
    if !(0.0 < eps && eps <= 1.0) || !(0.0 < delta && delta <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "eps and delta must be in (0,1], got eps={eps}, delta={delta}"
        )));
    }
    if pi_two_norm <= 0.0 || d_avg <= 0.0 {
        return Err(Error::InvalidParameter(
            "pi_two_norm and d_avg must be positive".into(),
        ));
    }
    let lead = 32.0 / (eps * eps * delta);
    Ok((1.0 + lead * (1.0 / pi_two_norm).max(d_avg)).ceil() as u64)
}

/// Draws `r` i.i.d. samples from a stationary oracle.
pub fn stationary_batch(oracle: &mut impl GraphOracle, r: usize) -> Result<SampleBatch> {
    let mut samples = Vec::with_capacity(r);
    for _ in 0..r {
        let response = oracle.stationary_sample()?;
        let info = response.node().expect("stationary samples are never null");
        samples.push((info.label, info.degrees.forward_degree()));
    }
    SampleBatch::new(samples)
}

/// Walk length per sample: `ceil(T * ln(max(s, 2)) * 2)` lazy steps, which
/// pushes each endpoint within total variation `s^-2` of stationary when `T`
/// bounds the mixing time.
pub fn walk_length(t_mix_bound: usize, s: usize) -> usize {
    ((t_mix_bound as f64) * (s.max(2) as f64).ln() * 2.0).ceil() as usize
}

/// Approximates stationary sampling through a neighbour oracle: `s`
/// independent lazy walks from the init node, each of [`walk_length`] steps.
/// The oracle should be wrapped in [`Sensible`] so revisited positions stay
/// free.
pub fn rw_stationary_batch<O: GraphOracle>(
    oracle: &mut Sensible<O>,
    t_mix_bound: usize,
    s: usize,
    rng: &mut impl Rng,
) -> Result<SampleBatch> {
    if t_mix_bound < 1 {
        return Err(Error::InvalidParameter(
            "mixing-time bound must be at least 1".into(),
        ));
    }
    let etype = oracle.kind().forward_etype();
    let start = *oracle.init()?.node().expect("init discloses a node");
    let steps = walk_length(t_mix_bound, s);
    let mut samples = Vec::with_capacity(s);
    for _ in 0..s {
        let mut cur = start;
        for _ in 0..steps {
            if rng.gen::<bool>() {
                continue; // lazy half-step
            }
            let deg = cur.degrees.forward_degree();
            if deg == 0 {
                return Err(Error::DisconnectedWalk);
            }
            let i = rng.gen_range(1..=deg);
            match oracle.query(cur.label, i, etype).node() {
                Some(info) => cur = *info,
                None => {
                    return Err(Error::InvalidParameter(
                        "oracle returned null for an in-range query".into(),
                    ))
                }
            }
        }
        samples.push((cur.label, cur.degrees.forward_degree()));
    }
    SampleBatch::new(samples)
}

#[derive(Debug, Clone, Copy)]
pub struct WalkEstimate {
    pub estimate: f64,
    /// Inner-oracle queries across pilot and main batches.
    pub queries: u64,
    pub sample_size: usize,
}

const PILOT_SIZE: usize = 100;

/// End-to-end neighbour-query estimator: a pilot batch supplies plug-in
/// values for `||pi||_2` (via the collision rate) and `d_avg` (via the
/// harmonic degree mean), the sample-size rule picks `r`, and the main batch
/// feeds the collision estimator. On a collision-free batch the sample size
/// is doubled once before giving up.
pub fn estimate_n_via_walks<O: GraphOracle>(
    oracle: &mut Sensible<O>,
    t_mix_bound: usize,
    eps: f64,
    delta: f64,
    rng: &mut impl Rng,
) -> Result<WalkEstimate> {
    let pilot = rw_stationary_batch(oracle, t_mix_bound, PILOT_SIZE, rng)?;
    let stats = KatzirStats::from_batch(&pilot);
    let d_avg_hat = stats.r as f64 / stats.psi_minus1;
    let pi_norm_hat = if stats.collisions > 0 {
        (stats.collisions as f64 / (stats.r as f64 * (stats.r as f64 - 1.0))).sqrt()
    } else {
        // no collision in r samples: act as if 1/||pi|| were about r
        1.0 / stats.r as f64
    };
    let r = katzir_sample_size(eps, delta, pi_norm_hat, d_avg_hat)? as usize;

    let mut attempt_r = r;
    for attempt in 0..2 {
        let batch = rw_stationary_batch(oracle, t_mix_bound, attempt_r, rng)?;
        match katzir_estimate(&batch) {
            Ok(estimate) => {
                return Ok(WalkEstimate {
                    estimate,
                    queries: oracle.inner_queries(),
                    sample_size: attempt_r,
                })
            }
            Err(Error::NoCollision { .. }) if attempt == 0 => attempt_r *= 2,
            Err(e) => return Err(e),
        }
    }
    Err(Error::NoCollision { r: attempt_r })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::oracle::{Oracle, OracleConfig, OracleKind};
    use crate::walk::mixing_time_empirical;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn batch(samples: &[(Label, usize)]) -> SampleBatch {
        SampleBatch::new(samples.to_vec()).unwrap()
    }

    #[test]
    fn formula_examples() {
        let b = batch(&[(1, 2), (2, 2), (1, 2)]);
        let s = KatzirStats::from_batch(&b);
        assert_eq!((s.psi1, s.psi_minus1, s.collisions), (6.0, 1.5, 2));
        assert!((katzir_estimate(&b).unwrap() - 3.0).abs() < 1e-12);

        // all samples from one node: the estimate collapses to 1
        let one = batch(&[(1, 4); 10]);
        assert!((katzir_estimate(&one).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn no_collision_is_an_error() {
        let b = batch(&[(1, 2), (2, 2), (3, 2)]);
        assert!(matches!(
            katzir_estimate(&b),
            Err(Error::NoCollision { r: 3 })
        ));
    }

    #[test]
    fn estimate_identity_rearranges() {
        let b = batch(&[(1, 3), (2, 1), (1, 3), (3, 2), (2, 1), (1, 3)]);
        let s = KatzirStats::from_batch(&b);
        let n_hat = s.estimate().unwrap();
        assert!((n_hat * s.collisions as f64 - (s.psi1 * s.psi_minus1 - s.r as f64)).abs() < 1e-9);
    }

    #[test]
    fn sample_size_examples() {
        assert_eq!(katzir_sample_size(1.0, 1.0, 1.0, 1.0).unwrap(), 33);
        // K8: ||pi|| = 1/sqrt(8), d_avg = 7
        let r = katzir_sample_size(0.5, 0.5, 1.0 / 8f64.sqrt(), 7.0).unwrap();
        assert_eq!(r, 1793);
        assert!(katzir_sample_size(0.0, 0.5, 0.5, 1.0).is_err());
        assert!(katzir_sample_size(0.5, 1.5, 0.5, 1.0).is_err());
        // shrinking eps never shrinks r
        let mut last = 0;
        for eps in [1.0, 0.8, 0.5, 0.3, 0.1] {
            let r = katzir_sample_size(eps, 0.5, 0.25, 3.0).unwrap();
            assert!(r >= last);
            last = r;
        }
    }

    #[test]
    fn exact_sampling_on_k8_is_roughly_unbiased() {
        let g = generators::complete(8).unwrap();
        let mut total = 0.0;
        let trials = 500;
        for seed in 0..trials {
            let mut o =
                Oracle::new(&g, OracleKind::Stationary, OracleConfig::seeded(seed)).unwrap();
            let b = stationary_batch(&mut o, 200).unwrap();
            total += katzir_estimate(&b).unwrap();
        }
        let mean = total / trials as f64;
        assert!((mean - 8.0).abs() < 0.8, "mean {mean}");
    }

    #[test]
    fn k2_walk_endpoints_are_balanced() {
        let g = generators::complete(2).unwrap();
        let inner = Oracle::new(&g, OracleKind::Undirected, OracleConfig::seeded(1)).unwrap();
        let mut o = Sensible::new(inner);
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let s = 100;
        let b = rw_stationary_batch(&mut o, 5, s, &mut rng).unwrap();
        let ones = b.samples().iter().filter(|&&(l, _)| l == 1).count();
        let sigma = (0.25 * s as f64).sqrt();
        assert!(
            (ones as f64 - s as f64 / 2.0).abs() <= 3.0 * sigma,
            "{ones}"
        );
        // per-step accounting bound on caller-side calls
        let bound = 2 * (s as u64) * walk_length(5, s) as u64 + s as u64;
        assert!(o.outer_queries() <= bound);
        assert!(o.inner_queries() <= o.outer_queries());
    }

    #[test]
    fn walk_endpoint_distribution_approaches_pi_on_c8() {
        let g = generators::cycle(8).unwrap();
        let t = mixing_time_empirical(&g).unwrap();
        let inner = Oracle::new(&g, OracleKind::Undirected, OracleConfig::seeded(3)).unwrap();
        let mut o = Sensible::new(inner);
        let mut rng = ChaCha12Rng::seed_from_u64(4);
        let s = 10_000;
        let b = rw_stationary_batch(&mut o, t, s, &mut rng).unwrap();
        let mut freq = [0.0f64; 8];
        for &(l, _) in b.samples() {
            freq[l as usize - 1] += 1.0 / s as f64;
        }
        let tv = 0.5 * freq.iter().map(|f| (f - 0.125).abs()).sum::<f64>();
        assert!(tv <= 0.05, "tv {tv}");
    }

    #[test]
    fn walks_error_on_disconnected_graphs() {
        let g = crate::graph::Graph::undirected(3, vec![(0, 1)]).unwrap();
        let inner = Oracle::new(&g, OracleKind::Undirected, OracleConfig::seeded(9)).unwrap();
        let mut o = Sensible::new(inner);
        let mut rng = ChaCha12Rng::seed_from_u64(10);
        // the walk itself cannot leave {0,1}; degree-0 nodes only error if hit,
        // so force the issue by starting at the isolated node
        let cfg = OracleConfig {
            seed_policy: crate::oracle::SeedPolicy::Fixed(2),
            ..OracleConfig::seeded(9)
        };
        let inner2 = Oracle::new(&g, OracleKind::Undirected, cfg).unwrap();
        let mut o2 = Sensible::new(inner2);
        assert!(matches!(
            rw_stationary_batch(&mut o2, 3, 10, &mut rng),
            Err(Error::DisconnectedWalk)
        ));
        let _ = rw_stationary_batch(&mut o, 3, 10, &mut rng).unwrap();
    }

    #[test]
    fn walk_estimator_is_deterministic_under_seed() {
        let g = generators::sun(8).unwrap();
        let run = || {
            let inner = Oracle::new(&g, OracleKind::Undirected, OracleConfig::seeded(11)).unwrap();
            let mut o = Sensible::new(inner);
            let mut rng = ChaCha12Rng::seed_from_u64(12);
            estimate_n_via_walks(&mut o, 6, 0.5, 0.5, &mut rng).unwrap()
        };
        let (a, b) = (run(), run());
        assert_eq!(a.estimate, b.estimate);
        assert_eq!(a.queries, b.queries);
        assert_eq!(a.sample_size, b.sample_size);
    }

    #[test]
    fn walk_estimator_hits_30_percent_on_sun40() {
        let g = generators::sun(40).unwrap(); // 80 nodes
        let t = mixing_time_empirical(&g).unwrap();
        let trials = 100;
        let mut within = 0;
        for seed in 0..trials {
            let inner = Oracle::new(
                &g,
                OracleKind::Undirected,
                OracleConfig::seeded(7000 + seed),
            )
            .unwrap();
            let mut o = Sensible::new(inner);
            let mut rng = ChaCha12Rng::seed_from_u64(8000 + seed);
            let est = estimate_n_via_walks(&mut o, t, 0.3, 0.3, &mut rng).unwrap();
            if (est.estimate - 80.0).abs() <= 24.0 {
                within += 1;
            }
        }
        assert!(within >= 70, "{within}/{trials} within 0.3n");
    }

    #[test]
    fn walk_estimator_lands_near_truth_on_a_sun() {
        let g = generators::sun(16).unwrap(); // 32 nodes
        let t = mixing_time_empirical(&g).unwrap();
        let mut within = 0;
        let trials = 30;
        for seed in 0..trials {
            let inner =
                Oracle::new(&g, OracleKind::Undirected, OracleConfig::seeded(100 + seed)).unwrap();
            let mut o = Sensible::new(inner);
            let mut rng = ChaCha12Rng::seed_from_u64(200 + seed);
            let est = estimate_n_via_walks(&mut o, t, 0.3, 0.3, &mut rng).unwrap();
            if (est.estimate - 32.0).abs() <= 0.3 * 32.0 {
                within += 1;
            }
        }
        // the guarantee is 70%; anything clearly above chance confirms wiring
        assert!(within * 10 >= trials * 7, "{within}/{trials} within 30%");
    }
}
