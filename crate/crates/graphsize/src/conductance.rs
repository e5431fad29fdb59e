//! General conductance `phi_eps(G) = min phi(S)` over non-empty sets of at
//! most `(1 - eps) n` nodes, where `phi(S) = |cut(S)| / outdeg(S)`.
//!
//! Undirected edges are treated as arc pairs, so `outdeg(S)` is the sum of
//! adjacency-list lengths over `S` and a cut edge is counted once per
//! direction that leaves `S`. Self-loops never cross a cut.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Exhaustive search is capped here; `2^24` subsets with incremental updates
/// is the practical limit for a test oracle.
pub const BRUTE_FORCE_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct ConductanceResult {
    pub phi: f64,
    pub witness_set: Vec<usize>,
    pub epsilon: f64,
    /// False when produced by the sampling heuristic, which only upper-bounds
    /// the minimum.
    pub exact: bool,
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be in [0,1), got {epsilon}"
        )));
    }
    Ok(())
}

fn max_set_size(n: usize, epsilon: f64) -> usize {
    (((1.0 - epsilon) * n as f64).floor() as usize).min(n - 1)
}

/// `phi(S)` for an explicit subset. A set with no out-going stubs at all is
/// maximally bottlenecked and scores 0.
pub fn phi_of_set(g: &Graph, members: &[bool]) -> f64 {
    let mut cut = 0usize;
    let mut deg = 0usize;
    for u in 0..g.n() {
        if !members[u] {
            continue;
        }
        for &v in g.out_neighbors(u) {
            deg += 1;
            if !members[v] {
                cut += 1;
            }
        }
    }
    if deg == 0 {
        0.0
    } else {
        cut as f64 / deg as f64
    }
}

/// Exact minimum of `phi(S)` over `1 <= |S| <= (1 - eps) n`, by Gray-code
/// subset enumeration with incremental cut/degree updates. Errors above
/// [`BRUTE_FORCE_CAP`] nodes.
pub fn general_conductance(g: &Graph, epsilon: f64) -> Result<ConductanceResult> {
    check_epsilon(epsilon)?;
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "conductance needs at least 2 nodes".into(),
        ));
    }
    if n > BRUTE_FORCE_CAP {
        return Err(Error::CapExceeded {
            n,
            cap: BRUTE_FORCE_CAP,
            what: "exhaustive conductance (try general_conductance_heuristic)",
        });
    }
    let max_size = max_set_size(n, epsilon);

    let mut members = vec![false; n];
    let mut size = 0usize;
    let mut cut = 0i64;
    let mut deg = 0i64;
    let mut best: Option<(f64, u64)> = None;
    let mut mask: u64 = 0;

    // standard reflected Gray code: step i flips bit trailing_zeros(i)
    for i in 1u64..(1u64 << n) {
        let bit = i.trailing_zeros() as usize;
        if members[bit] {
            // remove `bit`
            members[bit] = false;
            deg -= g.out_degree(bit) as i64;
            for &w in g.out_neighbors(bit) {
                if w != bit && !members[w] {
                    cut -= 1;
                }
            }
            for &u in g.in_neighbors(bit) {
                if u != bit && members[u] {
                    cut += 1;
                }
            }
            size -= 1;
            mask &= !(1 << bit);
        } else {
            members[bit] = true;
            deg += g.out_degree(bit) as i64;
            for &w in g.out_neighbors(bit) {
                if w != bit && !members[w] {
                    cut += 1;
                }
            }
            for &u in g.in_neighbors(bit) {
                if u != bit && members[u] {
                    cut -= 1;
                }
            }
            size += 1;
            mask |= 1 << bit;
        }
        debug_assert!(cut >= 0 && deg >= 0);
        if size == 0 || size > max_size {
            continue;
        }
        let phi = if deg == 0 {
            0.0
        } else {
            cut as f64 / deg as f64
        };
        if best.is_none_or(|(b, _)| phi < b) {
            best = Some((phi, mask));
        }
    }

    let (phi, mask) = best.ok_or_else(|| {
        Error::InvalidParameter(format!(
            "no admissible subset: (1-eps)n < 1 for n={n}, eps={epsilon}"
        ))
    })?;
    Ok(ConductanceResult {
        phi,
        witness_set: (0..n).filter(|&u| mask >> u & 1 == 1).collect(),
        epsilon,
        exact: true,
    })
}

/// Sampling heuristic for graphs above the brute-force cap. Tries singletons,
/// BFS balls around every node, and random subsets; the result only
/// upper-bounds `phi_eps` and is flagged `exact: false`.
pub fn general_conductance_heuristic(
    g: &Graph,
    epsilon: f64,
    rng: &mut impl rand::Rng,
) -> Result<ConductanceResult> {
    check_epsilon(epsilon)?;
    let n = g.n();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "conductance needs at least 2 nodes".into(),
        ));
    }
    let max_size = max_set_size(n, epsilon);
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut consider = |members: &[bool]| {
        let size = members.iter().filter(|&&b| b).count();
        if size == 0 || size > max_size {
            return;
        }
        let phi = phi_of_set(g, members);
        if best.as_ref().is_none_or(|(b, _)| phi < *b) {
            let set = (0..n).filter(|&u| members[u]).collect();
            best = Some((phi, set));
        }
    };

    let mut members = vec![false; n];
    for u in 0..n {
        members[u] = true;
        consider(&members);
        members[u] = false;
    }
    // growing BFS balls, every prefix is a candidate
    for start in 0..n {
        members.fill(false);
        let order = {
            let mut seen = vec![false; n];
            let mut q = std::collections::VecDeque::from([start]);
            seen[start] = true;
            let mut order = Vec::with_capacity(n);
            while let Some(u) = q.pop_front() {
                order.push(u);
                for &v in g.out_neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        q.push_back(v);
                    }
                }
            }
            order
        };
        for &u in order.iter().take(max_size) {
            members[u] = true;
            consider(&members);
        }
    }
    for _ in 0..200 {
        members.fill(false);
        let size = rng.gen_range(1..=max_size);
        let mut picked = 0;
        while picked < size {
            let u = rng.gen_range(0..n);
            if !members[u] {
                members[u] = true;
                picked += 1;
            }
        }
        consider(&members);
    }

    let (phi, witness_set) = best.expect("at least singletons were considered");
    Ok(ConductanceResult {
        phi,
        witness_set,
        epsilon,
        exact: false,
    })
}

/// Exact `phi_eps` for `Comet(n, k)` at any size, using the graph's symmetry.
///
/// Leaves of a star are exchangeable, and a leaf's only out-edge points to the
/// first centre, so a minimizing set is determined by its centre subset `C`,
/// the number of leaves it contains, and how many of those sit in stars whose
/// centre is in `C` (filling those first can only shrink the cut). The
/// remaining search space is `2^k * O(n)`, enumerated exhaustively. Validated
/// against the Gray-code brute force for every comet with at most
/// [`BRUTE_FORCE_CAP`] nodes.
pub fn comet_general_conductance(n: usize, k: usize, epsilon: f64) -> Result<ConductanceResult> {
    check_epsilon(epsilon)?;
    crate::generators::check_comet_params(n, k)?;
    let d = n / k;
    let leaves_per_star = d - 1;
    let total_leaves = n - k;
    let max_size = max_set_size(n, epsilon);
    if max_size == 0 {
        return Err(Error::InvalidParameter(format!(
            "no admissible subset: (1-eps)n < 1 for n={n}, eps={epsilon}"
        )));
    }

    let mut best: Option<(f64, u64, usize)> = None; // (phi, centre mask, leaves)
    for cmask in 0u64..(1u64 << k) {
        let c_count = cmask.count_ones() as usize;
        if c_count > max_size {
            continue;
        }
        // cycle arcs leaving C
        let mut cycle_cut = 0usize;
        for l in 0..k {
            let next = (l + 1) % k;
            if cmask >> l & 1 == 1 && cmask >> next & 1 == 0 {
                cycle_cut += 1;
            }
        }
        let own_capacity = c_count * leaves_per_star;
        let v1_in = cmask & 1 == 1;
        let max_leaves = total_leaves.min(max_size - c_count);
        for leaves in 0..=max_leaves {
            if c_count + leaves == 0 {
                continue;
            }
            // leaves placed in own stars first; the shortfall is star edges cut
            let own_uncovered = own_capacity.saturating_sub(leaves);
            // every chosen leaf's out-edge crosses unless v1 is inside
            let leaf_cut = if v1_in { 0 } else { leaves };
            let cut = cycle_cut + own_uncovered + leaf_cut;
            let deg = c_count * d + leaves;
            let phi = if deg == 0 {
                0.0
            } else {
                cut as f64 / deg as f64
            };
            if best.is_none_or(|(b, _, _)| phi < b) {
                best = Some((phi, cmask, leaves));
            }
        }
    }

    let (phi, cmask, leaves) = best.expect("k >= 1 guarantees candidates");
    // materialize one witness: centres in C, then own-star leaves, then others
    let mut witness: Vec<usize> = (0..k).filter(|&l| cmask >> l & 1 == 1).collect();
    let mut remaining = leaves;
    let leaf_index = |l: usize, j: usize| k + l * leaves_per_star + j;
    for l in 0..k {
        if cmask >> l & 1 == 1 {
            for j in 0..leaves_per_star {
                if remaining == 0 {
                    break;
                }
                witness.push(leaf_index(l, j));
                remaining -= 1;
            }
        }
    }
    for l in 0..k {
        if cmask >> l & 1 == 0 {
            for j in 0..leaves_per_star {
                if remaining == 0 {
                    break;
                }
                witness.push(leaf_index(l, j));
                remaining -= 1;
            }
        }
    }
    witness.sort_unstable();
    Ok(ConductanceResult {
        phi,
        witness_set: witness,
        epsilon,
        exact: true,
    })
}
