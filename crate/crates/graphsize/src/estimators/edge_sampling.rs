//! EdgeSampling: node counting through uniform undisclosed-edge sampling.
//!
//! The algorithm keeps a pool of disclosed-but-unqueried edge positions and a
//! surplus counter `Y`. Queries proceed in blocks of `ceil(2/phi)` draws
//! without replacement; a block that discovers a new node ends early and
//! decrements `Y`, a full block without discovery increments it. The run ends
//! when `Y` reaches the confidence parameter `ell` or the pool empties. With
//! `phi <= phi_eps(G)` the output `|S|` is at least `(1 - eps) n` with
//! probability `1 - 2^-ell`; it never exceeds `n`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::oracle::{GraphOracle, Label, OracleKind};

#[derive(Debug, Clone)]
pub struct EdgeSamplingRun {
    /// `|S|`: number of disclosed nodes at termination.
    pub estimate: usize,
    /// Neighbour queries spent by the run; the single `init` call is not
    /// included, matching the `min(2(2n + ell)/phi, m)` accounting.
    pub queries_used: u64,
    /// Counter value after every block.
    pub counter_trace: Vec<i64>,
    /// All labels disclosed, in label order (1..=estimate).
    pub disclosed: Vec<Label>,
    /// True when the run ended by exhausting the edge pool.
    pub pool_exhausted: bool,
    /// True when the oracle stopped answering (a hard query budget); a bare
    /// oracle never nulls a pooled edge.
    pub budget_cut: bool,
}

pub fn edge_sampling<O: GraphOracle>(
    oracle: &mut O,
    ell: u32,
    phi: f64,
    rng: &mut impl Rng,
) -> Result<EdgeSamplingRun> {
    if ell < 1 {
        return Err(Error::InvalidParameter("ell must be at least 1".into()));
    }
    if !(phi > 0.0 && phi <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "phi must be in (0,1], got {phi}"
        )));
    }
    if oracle.kind() == OracleKind::Stationary {
        return Err(Error::WrongOracleKind {
            expected: "neighbour oracle",
            got: "stationary",
        });
    }
    let etype = oracle.kind().forward_etype();
    let block_len = (2.0 / phi).ceil() as usize;

    let init = oracle.init()?;
    let Some(start) = init.node().copied() else {
        // a zero-budget oracle nulls even the init
        return Ok(EdgeSamplingRun {
            estimate: 0,
            queries_used: 0,
            counter_trace: Vec::new(),
            disclosed: Vec::new(),
            pool_exhausted: false,
            budget_cut: true,
        });
    };
    let queries_at_start = oracle.queries_used();
    let mut max_label = start.label;
    let mut pool: Vec<(Label, usize)> = (1..=start.degrees.forward_degree())
        .map(|i| (start.label, i))
        .collect();
    let mut y: i64 = 0;
    let mut trace = Vec::new();
    let mut pool_exhausted = false;
    let mut budget_cut = false;

    'outer: while y < ell as i64 {
        if pool.is_empty() {
            pool_exhausted = true;
            break;
        }
        let mut found_new = false;
        for _ in 0..block_len {
            if pool.is_empty() {
                break;
            }
            let idx = rng.gen_range(0..pool.len());
            let (label, i) = pool.swap_remove(idx);
            let info = match oracle.query(label, i, etype).node() {
                Some(info) => *info,
                None => {
                    // pooled positions are always in range, so a null means
                    // the oracle went silent; stop with what we have
                    budget_cut = true;
                    break 'outer;
                }
            };
            if info.label > max_label {
                max_label = info.label;
                pool.extend((1..=info.degrees.forward_degree()).map(|j| (info.label, j)));
                found_new = true;
                break;
            }
        }
        y += if found_new { -1 } else { 1 };
        trace.push(y);
        if pool.is_empty() && !found_new && y < ell as i64 {
            // the final partial block neither found a node nor left work
            pool_exhausted = true;
            break 'outer;
        }
    }

    Ok(EdgeSamplingRun {
        estimate: max_label as usize,
        queries_used: oracle.queries_used() - queries_at_start,
        counter_trace: trace,
        disclosed: (1..=max_label).collect(),
        pool_exhausted,
        budget_cut,
    })
}

/// Two-sided variant: scales the count by `1 + eps/(2 - eps)`, trading the
/// one-sided guarantee for additive error `eps/(2 - eps) * n`.
pub fn edge_sampling_centered<O: GraphOracle>(
    oracle: &mut O,
    ell: u32,
    phi: f64,
    eps: f64,
    rng: &mut impl Rng,
) -> Result<(f64, EdgeSamplingRun)> {
    if !(0.0 < eps && eps < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "eps must be in (0,1), got {eps}"
        )));
    }
    let run = edge_sampling(oracle, ell, phi, rng)?;
    let centered = run.estimate as f64 * (1.0 + eps / (2.0 - eps));
    Ok((centered, run))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conductance::general_conductance;
    use crate::generators;
    use crate::oracle::{Oracle, OracleConfig, OracleKind};
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn directed_five_cycle_discloses_everything() {
        let g = generators::directed_cycle(5).unwrap();
        let mut o = Oracle::new(&g, OracleKind::OutOnly, OracleConfig::seeded(1)).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        let run = edge_sampling(&mut o, 1, 1.0, &mut rng).unwrap();
        assert_eq!(run.estimate, 5);
        assert!(run.queries_used <= 5);
        assert!(run.pool_exhausted);
    }

    #[test]
    fn counter_moves_by_exactly_one_per_block() {
        let g = generators::comet(20, 4).unwrap();
        let mut o = Oracle::new(&g, OracleKind::OutOnly, OracleConfig::seeded(3)).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(4);
        let run = edge_sampling(&mut o, 5, 0.3, &mut rng).unwrap();
        let mut prev = 0i64;
        for &y in &run.counter_trace {
            assert_eq!((y - prev).abs(), 1);
            prev = y;
        }
    }

    #[test]
    fn estimate_never_exceeds_n_and_queries_stay_bounded() {
        let g = generators::comet(20, 4).unwrap();
        let phi = general_conductance(&g, 0.25).unwrap().phi;
        let ell = 10;
        for seed in 0..50 {
            let mut o = Oracle::new(&g, OracleKind::OutOnly, OracleConfig::seeded(seed)).unwrap();
            let mut rng = ChaCha12Rng::seed_from_u64(1000 + seed);
            let run = edge_sampling(&mut o, ell, phi, &mut rng).unwrap();
            assert!(run.estimate <= 20);
            assert!(run.estimate >= 15, "guarantee floor (1-eps)n");
            let bound = (2.0 * (2.0 * 20.0 + ell as f64) / phi).min(g.m() as f64);
            assert!(run.queries_used as f64 <= bound);
        }
    }

    #[test]
    fn centered_boundary_cases() {
        // |S| = n: n_hat = (4/3) n at eps = 1/2, error exactly (eps/(2-eps)) n
        let n = 20.0f64;
        let eps = 0.5;
        let factor = 1.0 + eps / (2.0 - eps);
        assert!((n * factor - n - eps / (2.0 - eps) * n).abs() < 1e-12);
        // |S| = (1-eps) n: error sits exactly at the bound from below
        let low = (1.0 - eps) * n * factor;
        assert!((low - (2.0 - 2.0 * eps) / (2.0 - eps) * n).abs() < 1e-12);
        assert!((n - low).abs() <= eps / (2.0 - eps) * n + 1e-12);
        // a (2/3) n count at eps = 1/2 scales to (8/9) n, inside the bound
        let mid = 2.0 / 3.0 * n * factor;
        assert!((mid - 8.0 / 9.0 * n).abs() < 1e-9);
        assert!((n - mid).abs() <= eps / (2.0 - eps) * n + 1e-12);
    }

    #[test]
    fn centered_run_on_comet() {
        let g = generators::comet(20, 4).unwrap();
        let eps = 0.25;
        let phi = general_conductance(&g, eps).unwrap().phi;
        let mut ok = 0;
        let trials = 50;
        for seed in 0..trials {
            let mut o = Oracle::new(&g, OracleKind::OutOnly, OracleConfig::seeded(seed)).unwrap();
            let mut rng = ChaCha12Rng::seed_from_u64(7000 + seed);
            let (centered, _) = edge_sampling_centered(&mut o, 10, phi, eps, &mut rng).unwrap();
            if (20.0 - centered).abs() <= eps / (2.0 - eps) * 20.0 + 1e-9 {
                ok += 1;
            }
        }
        assert_eq!(ok, trials);
    }

    #[test]
    fn no_pool_position_is_queried_twice() {
        use crate::oracle::Request;
        let g = generators::comet(20, 4).unwrap();
        for seed in 0..10 {
            let config = OracleConfig {
                record_transcript: true,
                ..OracleConfig::seeded(seed)
            };
            let mut o = Oracle::new(&g, OracleKind::OutOnly, config).unwrap();
            let mut rng = ChaCha12Rng::seed_from_u64(900 + seed);
            edge_sampling(&mut o, 6, 0.2, &mut rng).unwrap();
            let mut seen = std::collections::HashSet::new();
            for entry in o.transcript().unwrap().entries() {
                if let Request::Query { label, index, .. } = entry.request {
                    assert!(
                        seen.insert((label, index)),
                        "position ({label},{index}) repeated"
                    );
                }
            }
        }
    }

    #[test]
    fn hidden_component_rarely_found_under_starved_budget() {
        use crate::oracle::Budgeted;
        let mut pair_rng = ChaCha12Rng::seed_from_u64(0x9AD);
        let pair = generators::conductance_gadget(20, 0.4, 0.5, 0.2, &mut pair_rng).unwrap();
        let phi = crate::conductance::general_conductance(&pair.g_prime, 0.5)
            .unwrap()
            .phi;
        let visible = pair.n_true.0; // hidden expander occupies indices n1..n
        let trials = 300;
        let budget = 6u64; // far below n/phi ~ 260
        let mut found = 0;
        for seed in 0..trials {
            let inner = Oracle::new(
                &pair.g_prime,
                OracleKind::Undirected,
                OracleConfig::seeded(seed),
            )
            .unwrap();
            let mut o = Budgeted::new(inner, budget);
            let mut rng = ChaCha12Rng::seed_from_u64(5000 + seed);
            let run = edge_sampling(&mut o, 10, phi, &mut rng).unwrap();
            let hit = (1..=run.estimate as u32).any(|l| {
                o.inner()
                    .node_of_label(l)
                    .is_some_and(|node| node >= visible)
            });
            if hit {
                found += 1;
            }
        }
        assert!(
            found * 3 <= trials,
            "hidden part found in {found}/{trials} starved runs"
        );
    }

    #[test]
    fn rejects_bad_parameters_and_kinds() {
        let g = generators::comet(8, 2).unwrap();
        let mut rng = ChaCha12Rng::seed_from_u64(0);
        let mut o = Oracle::new(&g, OracleKind::OutOnly, OracleConfig::seeded(1)).unwrap();
        assert!(edge_sampling(&mut o, 0, 0.5, &mut rng).is_err());
        assert!(edge_sampling(&mut o, 1, 0.0, &mut rng).is_err());
        assert!(edge_sampling(&mut o, 1, 1.5, &mut rng).is_err());
        let u = generators::cycle(8).unwrap();
        let mut s = Oracle::new(&u, OracleKind::Stationary, OracleConfig::seeded(1)).unwrap();
        assert!(matches!(
            edge_sampling(&mut s, 1, 0.5, &mut rng),
            Err(Error::WrongOracleKind { .. })
        ));
    }

    #[test]
    fn budgeted_oracle_cuts_the_run_short() {
        use crate::oracle::Budgeted;
        let g = generators::comet(20, 4).unwrap();
        let inner = Oracle::new(&g, OracleKind::OutOnly, OracleConfig::seeded(2)).unwrap();
        let mut o = Budgeted::new(inner, 4);
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let run = edge_sampling(&mut o, 10, 0.1, &mut rng).unwrap();
        assert!(run.budget_cut);
        assert!(run.estimate <= 4, "at most budget-many disclosures");
        assert_eq!(o.queries_used(), 4);
    }

    #[test]
    fn works_under_the_undirected_oracle() {
        let g = generators::sun(6).unwrap();
        let eps = 0.5;
        let phi = general_conductance(&g, eps).unwrap().phi;
        for seed in 0..20 {
            let mut o =
                Oracle::new(&g, OracleKind::Undirected, OracleConfig::seeded(seed)).unwrap();
            let mut rng = ChaCha12Rng::seed_from_u64(300 + seed);
            let run = edge_sampling(&mut o, 8, phi, &mut rng).unwrap();
            assert!(run.estimate <= 12);
            assert!(run.estimate >= 6);
        }
    }
}
