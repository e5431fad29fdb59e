//! Lazy random walk: single steps, stationary distribution by power
//! iteration, and empirical mixing time by exact distribution propagation.

use rand::Rng;

use crate::distribution::{tv_distance_slices, Distribution};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Iteration cap for power iteration.
const MAX_POWER_ITERATIONS: u64 = 10_000_000;

/// Default node-count cap for exact distribution propagation.
pub const MIXING_PROPAGATION_CAP: usize = 5000;

/// Mixing-time threshold from the usual definition.
pub fn default_mixing_threshold() -> f64 {
    (-1.0f64).exp()
}

/// One step of the lazy walk from `u`: stay with probability 1/2, otherwise
/// move to a uniformly random (out-)neighbour. A node without out-edges keeps
/// the walk in place, so the operator is total even off the strongly
/// connected case.
pub fn lazy_step(g: &Graph, u: usize, rng: &mut impl Rng) -> Result<usize> {
    g.check_node(u)?;
    if rng.gen::<bool>() {
        return Ok(u);
    }
    let neigh = g.out_neighbors(u);
    if neigh.is_empty() {
        return Ok(u);
    }
    Ok(neigh[rng.gen_range(0..neigh.len())])
}

/// Applies the lazy transition operator once: `next = cur * P`.
pub fn propagate(g: &Graph, cur: &[f64], next: &mut [f64]) {
    next.fill(0.0);
    for u in 0..g.n() {
        let mass = cur[u];
        if mass == 0.0 {
            continue;
        }
        let neigh = g.out_neighbors(u);
        if neigh.is_empty() {
            next[u] += mass;
            continue;
        }
        next[u] += 0.5 * mass;
        let share = 0.5 * mass / neigh.len() as f64;
        for &v in neigh {
            next[v] += share;
        }
    }
}

/// Stationary distribution of the lazy walk by power iteration, accurate to
/// `||pi P - pi||_1 <= tol`. Works for directed (non-reversible) chains;
/// requires strong connectivity.
pub fn stationary_distribution(g: &Graph, tol: f64) -> Result<Distribution> {
    g.check_strongly_connected()?;
    if tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tol must be positive, got {tol}"
        )));
    }
    let n = g.n();
    let mut cur = vec![1.0 / n as f64; n];
    let mut next = vec![0.0; n];
    // converge on the residual itself, one decade below the contract
    let target = tol / 10.0;
    for _ in 0..MAX_POWER_ITERATIONS {
        propagate(g, &cur, &mut next);
        let residual: f64 = cur.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut cur, &mut next);
        if residual <= target {
            let sum: f64 = cur.iter().sum();
            for p in &mut cur {
                *p /= sum;
            }
            return Distribution::new(cur);
        }
    }
    Err(Error::NoConvergence(MAX_POWER_ITERATIONS))
}

/// Closed form for connected undirected graphs: `pi(u) = deg(u) / (2|E|)`,
/// where `2|E|` is the degree sum (multi-edges and self-loop stubs included).
pub fn stationary_undirected_closed_form(g: &Graph) -> Result<Distribution> {
    if g.is_directed() {
        return Err(Error::InvalidParameter(
            "closed form needs an undirected graph".into(),
        ));
    }
    g.check_strongly_connected()?;
    let total = g.degree_sum() as f64;
    Distribution::new((0..g.n()).map(|u| g.degree(u) as f64 / total).collect())
}

/// Empirical mixing time with the standard `e^{-1}` threshold and the default
/// propagation cap.
pub fn mixing_time_empirical(g: &Graph) -> Result<usize> {
    mixing_time_empirical_with(g, default_mixing_threshold(), MIXING_PROPAGATION_CAP)
}

/// `max_u min { t >= 1 : tv(p^t(u, .), pi) <= threshold }` by exact dense
/// propagation from every start. No sampling is involved.
pub fn mixing_time_empirical_with(g: &Graph, threshold: f64, cap: usize) -> Result<usize> {
    g.check_strongly_connected()?;
    if !(0.0 < threshold && threshold < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "mixing threshold must be in (0,1), got {threshold}"
        )));
    }
    if g.n() > cap {
        return Err(Error::CapExceeded {
            n: g.n(),
            cap,
            what: "exact mixing-time propagation",
        });
    }
    let pi = stationary_distribution(g, (threshold * 1e-6).min(1e-12))?;
    let n = g.n();
    let mut worst = 1;
    let step_cap: usize = 10_000_000 / n.max(1) + 16;
    for start in 0..n {
        let mut cur = vec![0.0; n];
        cur[start] = 1.0;
        let mut next = vec![0.0; n];
        let mut prev_tv = f64::INFINITY;
        let mut t = 0;
        loop {
            t += 1;
            if t > step_cap {
                return Err(Error::NoConvergence(step_cap as u64));
            }
            propagate(g, &cur, &mut next);
            std::mem::swap(&mut cur, &mut next);
            let tv = tv_distance_slices(&cur, pi.probs())?;
            // TV to stationarity never increases along the chain
            debug_assert!(tv <= prev_tv + 1e-12, "TV increased: {prev_tv} -> {tv}");
            prev_tv = tv;
            if tv <= threshold {
                break;
            }
        }
        worst = worst.max(t);
    }
    Ok(worst)
}
