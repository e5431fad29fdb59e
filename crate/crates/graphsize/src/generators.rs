//! Constructors for every graph family used by the estimators and the
//! lower-bound experiments: configuration model, Comet/DoubleComet, sun and
//! bright sun, the directed line, G(n,p) with pendants, degree-preserving
//! doubled graphs, and the clique-expander conductance gadget.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::degrees::DegreeSequence;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Attempt cap for rejection-sampled simple regular graphs.
pub const REGULAR_ATTEMPTS: usize = 100;

/// Two graphs engineered to be hard to tell apart under a query budget.
#[derive(Debug, Clone)]
pub struct GadgetPair {
    pub g: Graph,
    pub g_prime: Graph,
    /// Edges removed from the shared structure while building `g_prime`.
    pub removed_edges: Vec<(usize, usize)>,
    /// Edges added while building `g_prime`.
    pub added_edges: Vec<(usize, usize)>,
    /// Node counts `(|V(g)|, |V(g_prime)|)`.
    pub n_true: (usize, usize),
}

pub fn path(n: usize) -> Result<Graph> {
    if n < 1 {
        return Err(Error::InvalidParameter("path needs n >= 1".into()));
    }
    Graph::undirected(n, (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect())
}

pub fn cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParameter("cycle needs n >= 3".into()));
    }
    Graph::undirected(n, (0..n).map(|i| (i, (i + 1) % n)).collect())
}

pub fn directed_cycle(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidParameter(
            "directed cycle needs n >= 2".into(),
        ));
    }
    Graph::directed(n, (0..n).map(|i| (i, (i + 1) % n)).collect())
}

pub fn complete(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidParameter(
            "complete graph needs n >= 2".into(),
        ));
    }
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            edges.push((i, j));
        }
    }
    Graph::undirected(n, edges)
}

/// Directed line `v_1 -> v_2 -> ... -> v_n`. Not strongly connected, so it is
/// only suitable for reachability and oracle experiments.
pub fn line(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidParameter("line needs n >= 2".into()));
    }
    Graph::directed(n, (0..n - 1).map(|i| (i, i + 1)).collect())
}

pub(crate) fn check_comet_params(n: usize, k: usize) -> Result<()> {
    if k < 1 || !n.is_multiple_of(k) || n / k < 2 {
        return Err(Error::InvalidParameter(format!(
            "comet needs k >= 1, k | n and n/k >= 2; got n={n}, k={k}"
        )));
    }
    Ok(())
}

/// `Comet(n, k)`: a directed cycle on centres `v_1..v_k` (node 0 is `v_1`),
/// each centre the head of a star with `n/k - 1` leaves, and every leaf
/// pointing back at `v_1`. Centres occupy indices `0..k`; leaf `j` of the
/// star at centre `l` (0-based) is `k + l*(n/k - 1) + j`.
pub fn comet(n: usize, k: usize) -> Result<Graph> {
    check_comet_params(n, k)?;
    let d = n / k;
    let leaves = d - 1;
    let leaf = |l: usize, j: usize| k + l * leaves + j;
    let mut edges = Vec::with_capacity(2 * n - k);
    for l in 0..k {
        edges.push((l, (l + 1) % k));
    }
    for l in 0..k {
        for j in 0..leaves {
            edges.push((l, leaf(l, j)));
        }
    }
    for l in 0..k {
        for j in 0..leaves {
            edges.push((leaf(l, j), 0));
        }
    }
    // k = 1 closes the centre cycle with a self-loop
    Graph::new(true, n, k == 1, edges)
}

/// `DoubleComet(2n, 2k)` from two `Comet(n, k)` copies: the second copy's
/// first centre loses its original out-edges, the first copy's closing cycle
/// edge `(v_k, v_1)` is removed, and `(v_k, v_{k+1})`, `(v_{k+1}, v_{k+2})`,
/// `(v_{k+1}, v_1)` are added. The orphaned star leaves of `v_{k+1}` are
/// re-attached under `v_{k+2}` so the node count stays `2n`; their own
/// out-edges (to `v_{k+1}`) are untouched.
pub fn double_comet(n2: usize, k2: usize) -> Result<Graph> {
    if !n2.is_multiple_of(2) || !k2.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "double comet needs even n and k; got n={n2}, k={k2}"
        )));
    }
    let (n, k) = (n2 / 2, k2 / 2);
    if k < 2 {
        // the junction rewires (v_{k+1}, v_{k+2}), which needs two centres
        return Err(Error::InvalidParameter("double comet needs k >= 4".into()));
    }
    check_comet_params(n, k)?;
    let d = n / k;
    let leaves = d - 1;
    // copy A occupies 0..n (centres 0..k), copy B occupies n..2n (centres n..n+k)
    let leaf_a = |l: usize, j: usize| k + l * leaves + j;
    let leaf_b = |l: usize, j: usize| n + k + l * leaves + j;
    let b = |i: usize| n + i;

    let mut edges = Vec::new();
    for l in 0..k - 1 {
        edges.push((l, l + 1)); // copy A cycle, minus (v_k, v_1)
    }
    edges.push((k - 1, b(0))); // v_k -> v_{k+1}
    edges.push((b(0), b(1 % k))); // v_{k+1} -> v_{k+2}
    edges.push((b(0), 0)); // v_{k+1} -> v_1
    for i in 1..k {
        edges.push((b(i), b((i + 1) % k))); // rest of copy B cycle
    }
    for l in 0..k {
        for j in 0..leaves {
            edges.push((l, leaf_a(l, j)));
        }
    }
    for j in 0..leaves {
        edges.push((b(1 % k), leaf_b(0, j))); // adopted leaves
    }
    for l in 1..k {
        for j in 0..leaves {
            edges.push((b(l), leaf_b(l, j)));
        }
    }
    for l in 0..k {
        for j in 0..leaves {
            edges.push((leaf_a(l, j), 0));
        }
    }
    for l in 0..k {
        for j in 0..leaves {
            edges.push((leaf_b(l, j), b(0)));
        }
    }
    Graph::directed(2 * n, edges)
}

/// Sun graph: `K_n` with one pendant neighbour per clique vertex (2n nodes).
pub fn sun(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParameter("sun needs n >= 3".into()));
    }
    let mut edges = complete(n)?.edges().to_vec();
    for i in 0..n {
        edges.push((i, n + i));
    }
    Graph::undirected(2 * n, edges)
}

/// Bright sun: `K_n` with a 2-edge path hanging off each clique vertex
/// (3n nodes).
pub fn bright_sun(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidParameter("bright sun needs n >= 3".into()));
    }
    let mut edges = complete(n)?.edges().to_vec();
    for i in 0..n {
        edges.push((i, n + i));
        edges.push((n + i, 2 * n + i));
    }
    Graph::undirected(3 * n, edges)
}

fn gnp_edges(n: usize, p: f64, offset: usize, rng: &mut impl Rng) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen::<f64>() < p {
                edges.push((offset + i, offset + j));
            }
        }
    }
    edges
}

/// `G(n, p)` with a pendant neighbour for every core node. With
/// `with_extra_copy`, one uniformly chosen core node trades its pendant for a
/// single bridge edge into a fresh `G(n, p)` copy, giving `3n - 1` nodes.
pub fn gnp_pendant(n: usize, p: f64, with_extra_copy: bool, rng: &mut impl Rng) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidParameter("gnp_pendant needs n >= 2".into()));
    }
    if !(0.0 < p && p < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "p must be in (0,1), got {p}"
        )));
    }
    let mut edges = gnp_edges(n, p, 0, rng);
    if !with_extra_copy {
        for i in 0..n {
            edges.push((i, n + i));
        }
        return Graph::undirected(2 * n, edges);
    }
    let special = rng.gen_range(0..n);
    let mut pendant = n;
    for i in 0..n {
        if i != special {
            edges.push((i, pendant));
            pendant += 1;
        }
    }
    let copy_base = 2 * n - 1;
    edges.extend(gnp_edges(n, p, copy_base, rng));
    let w = rng.gen_range(0..n);
    edges.push((special, copy_base + w));
    Graph::undirected(3 * n - 1, edges)
}

/// Configuration model: a uniform random perfect matching over degree stubs.
/// Multi-edges and self-loops are retained; node `i` always ends up with
/// degree exactly `d_i`.
pub fn configuration_model(seq: &DegreeSequence, rng: &mut impl Rng) -> Result<Graph> {
    let total = seq.stub_count();
    if !total.is_multiple_of(2) {
        return Err(Error::OddDegreeSum(total));
    }
    let mut stubs: Vec<usize> = Vec::with_capacity(total);
    for (node, &d) in seq.degrees().iter().enumerate() {
        stubs.extend(std::iter::repeat_n(node, d));
    }
    stubs.shuffle(rng);
    let edges = stubs
        .chunks_exact(2)
        .map(|pair| (pair[0], pair[1]))
        .collect();
    Graph::new(false, seq.len(), true, edges)
}

/// Uniform random connected d-regular simple graph by configuration-model
/// rejection: resample until the draw is simple and connected, giving up
/// after [`REGULAR_ATTEMPTS`] tries. Practical for small d only.
pub fn random_regular(n: usize, d: usize, rng: &mut impl Rng) -> Result<Graph> {
    if d < 1 || d >= n || !(n * d).is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "d-regular needs 1 <= d < n and even n*d; got n={n}, d={d}"
        )));
    }
    let seq = DegreeSequence::regular(n, d)?;
    for _ in 0..REGULAR_ATTEMPTS {
        let g = configuration_model(&seq, rng)?;
        let simple = g.edges().iter().all(|&(u, v)| u != v) && {
            let mut seen = std::collections::HashSet::new();
            g.edges()
                .iter()
                .all(|&(u, v)| seen.insert((u.min(v), u.max(v))))
        };
        if !simple {
            continue;
        }
        let g = Graph::undirected(n, g.edges().to_vec())?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::GenerationFailed(REGULAR_ATTEMPTS))
}

/// Edge indices whose removal keeps the graph connected.
fn removable_edges(g: &Graph) -> Vec<usize> {
    (0..g.m())
        .filter(|&e| {
            let mut edges = g.edges().to_vec();
            edges.remove(e);
            Graph::new(false, g.n(), true, edges)
                .map(|h| h.is_connected())
                .unwrap_or(false)
        })
        .collect()
}

fn pick_removable(g: &Graph, rng: &mut impl Rng) -> Result<usize> {
    if !g.is_connected() {
        return Err(Error::InvalidParameter(
            "input graph must be connected".into(),
        ));
    }
    if g.m() < g.n() {
        return Err(Error::TreeInput);
    }
    let candidates = removable_edges(g);
    // m >= n on a connected graph guarantees a cycle edge
    Ok(candidates[rng.gen_range(0..candidates.len())])
}

/// Doubles a graph without touching its degree sequence: take two copies,
/// remove a cycle edge `{i, j}` and its twin `{i', j'}`, and cross-link
/// `{i, j'}`, `{i', j}`.
pub fn doubled_copy(g: &Graph, rng: &mut impl Rng) -> Result<GadgetPair> {
    if g.is_directed() {
        return Err(Error::InvalidParameter(
            "doubled_copy needs an undirected graph".into(),
        ));
    }
    let n = g.n();
    let e = pick_removable(g, rng)?;
    let (i, j) = g.edges()[e];
    let mut edges = Vec::with_capacity(2 * g.m());
    for (idx, &(u, v)) in g.edges().iter().enumerate() {
        if idx != e {
            edges.push((u, v));
        }
    }
    for (idx, &(u, v)) in g.edges().iter().enumerate() {
        if idx != e {
            edges.push((u + n, v + n));
        }
    }
    edges.push((i, j + n));
    edges.push((i + n, j));
    let tilde = Graph::new(false, 2 * n, g.allows_multi(), edges)?;
    Ok(GadgetPair {
        g: g.clone(),
        g_prime: tilde,
        removed_edges: vec![(i, j), (i + n, j + n)],
        added_edges: vec![(i, j + n), (i + n, j)],
        n_true: (n, 2 * n),
    })
}

/// Joins `g` to a random 3-regular graph by the same degree-preserving swap.
/// The companion gets `n` nodes, or `n + 1` when `n` is odd.
pub fn expander_augmented(g: &Graph, rng: &mut impl Rng) -> Result<GadgetPair> {
    if g.is_directed() {
        return Err(Error::InvalidParameter(
            "expander_augmented needs an undirected graph".into(),
        ));
    }
    let n = g.n();
    if n < 4 {
        return Err(Error::InvalidParameter(
            "expander_augmented needs n >= 4".into(),
        ));
    }
    let e = pick_removable(g, rng)?;
    let n_new = if n.is_multiple_of(2) { n } else { n + 1 };
    let expander = random_regular(n_new, 3, rng)?;
    let f = pick_removable(&expander, rng)?;
    let (i, j) = g.edges()[e];
    let (a, b) = expander.edges()[f];
    let mut edges = Vec::new();
    for (idx, &(u, v)) in g.edges().iter().enumerate() {
        if idx != e {
            edges.push((u, v));
        }
    }
    for (idx, &(u, v)) in expander.edges().iter().enumerate() {
        if idx != f {
            edges.push((u + n, v + n));
        }
    }
    edges.push((i, b + n));
    edges.push((a + n, j));
    let bar = Graph::new(false, n + n_new, g.allows_multi(), edges)?;
    Ok(GadgetPair {
        g: g.clone(),
        g_prime: bar,
        removed_edges: vec![(i, j), (a + n, b + n)],
        added_edges: vec![(i, b + n), (a + n, j)],
        n_true: (n, n + n_new),
    })
}

/// Conductance lower-bound gadget. `g` is a `d`-regular expander
/// (`d = ceil(1/phi)`) with every node blown up into a `K_d` clique, on
/// `n1 = n(1 - eps + delta/2)` nodes. `g_prime` additionally hides a
/// 3-regular expander on the remaining `n - n1` nodes behind a random
/// intra-clique edge: that edge `{u, v}` is replaced by `{u, w}`, `{v, w}`
/// for a uniformly chosen node `w` of the hidden part.
pub fn conductance_gadget(
    n: usize,
    phi: f64,
    epsilon: f64,
    delta: f64,
    rng: &mut impl Rng,
) -> Result<GadgetPair> {
    if !(0.0 < phi && phi <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "phi must be in (0,1], got {phi}"
        )));
    }
    if !(0.0 < epsilon && epsilon <= 0.5) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be in (0, 1/2], got {epsilon}"
        )));
    }
    if !(0.0 < delta && delta < epsilon / 2.0) {
        return Err(Error::InvalidParameter(format!(
            "delta must be in (0, epsilon/2), got {delta}"
        )));
    }
    let d = (1.0 / phi).ceil() as usize;
    if d < 2 {
        return Err(Error::InvalidParameter(
            "need ceil(1/phi) >= 2; lower phi".into(),
        ));
    }
    let n1_exact = n as f64 * (1.0 - epsilon + delta / 2.0);
    let n1 = n1_exact.round() as usize;
    if (n1 as f64 - n1_exact).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "n(1 - eps + delta/2) = {n1_exact} is not an integer"
        )));
    }
    if !n1.is_multiple_of(d) {
        return Err(Error::InvalidParameter(format!(
            "d = {d} must divide n1 = {n1}"
        )));
    }
    let n_star = n1 / d;
    let hidden = n - n1;
    if hidden < 4 || !hidden.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!(
            "hidden part needs an even node count >= 4, got {hidden}"
        )));
    }

    let base = random_regular(n_star, d, rng)?;
    // blow node r up into clique r*d .. (r+1)*d; expander edge slots are
    // handed out one per clique member in edge-list order
    let mut edges = Vec::new();
    let mut intra = Vec::new();
    for r in 0..n_star {
        for x in 0..d {
            for y in (x + 1)..d {
                edges.push((r * d + x, r * d + y));
                intra.push(edges.len() - 1);
            }
        }
    }
    let mut slot = vec![0usize; n_star];
    for &(r, s) in base.edges() {
        let u = r * d + slot[r];
        slot[r] += 1;
        let v = s * d + slot[s];
        slot[s] += 1;
        edges.push((u, v));
    }
    let g = Graph::undirected(n1, edges.clone())?;

    let hidden_graph = random_regular(hidden, 3, rng)?;
    let cut_idx = intra[rng.gen_range(0..intra.len())];
    let (u, v) = edges[cut_idx];
    let w = n1 + rng.gen_range(0..hidden);
    let mut prime_edges = Vec::with_capacity(edges.len() + hidden_graph.m() + 1);
    for (idx, &edge) in edges.iter().enumerate() {
        if idx != cut_idx {
            prime_edges.push(edge);
        }
    }
    for &(a, b) in hidden_graph.edges() {
        prime_edges.push((a + n1, b + n1));
    }
    prime_edges.push((u, w));
    prime_edges.push((v, w));
    let g_prime = Graph::undirected(n, prime_edges)?;

    Ok(GadgetPair {
        g,
        g_prime,
        removed_edges: vec![(u, v)],
        added_edges: vec![(u, w), (v, w)],
        n_true: (n1, n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    #[test]
    fn comet_counts_and_degrees() {
        let g = comet(20, 4).unwrap();
        assert_eq!(g.n(), 20);
        assert_eq!(g.m(), 36); // 2n - k
        for l in 0..4 {
            assert_eq!(g.out_degree(l), 5, "centre out-degree is n/k");
        }
        for leaf in 4..20 {
            assert_eq!(g.out_degree(leaf), 1);
            assert_eq!(g.in_degree(leaf), 1);
        }
        assert_eq!(g.in_degree(0), 17); // cycle edge + 16 leaf back-edges
        assert!(g.is_strongly_connected());
    }

    #[test]
    fn comet_distances() {
        for (n, k) in [(8, 2), (20, 4), (60, 3), (24, 6)] {
            let g = comet(n, k).unwrap();
            // from the first centre the farthest node is the last star's leaf
            assert_eq!(g.eccentricity(0), Some(k), "comet({n},{k})");
            // leaf-to-last-leaf routes through v_1, one step longer
            assert_eq!(g.diameter(), Some(k + 1), "comet({n},{k})");
        }
    }

    #[test]
    fn comet_rejects_bad_params() {
        assert!(comet(20, 3).is_err());
        assert!(comet(4, 4).is_err());
    }

    #[test]
    fn family_counts_match_closed_forms_up_to_200() {
        for n in (6..=200).step_by(2) {
            for k in 1..=n / 2 {
                if n % k != 0 {
                    continue;
                }
                let g = comet(n, k).unwrap();
                assert_eq!((g.n(), g.m()), (n, 2 * n - k), "comet({n},{k})");
                if k % 2 == 0 && k >= 4 && (n / 2) % (k / 2) == 0 && n / k >= 2 {
                    let d = double_comet(n, k).unwrap();
                    // two comets, one star re-homed, net one extra edge
                    assert_eq!((d.n(), d.m()), (n, 2 * n - k + 1), "double_comet({n},{k})");
                }
            }
        }
        for n in 3..=66 {
            let s = sun(n).unwrap();
            assert_eq!((s.n(), s.m()), (2 * n, n * (n - 1) / 2 + n), "sun({n})");
            let b = bright_sun(n).unwrap();
            assert_eq!(
                (b.n(), b.m()),
                (3 * n, n * (n - 1) / 2 + 2 * n),
                "bright_sun({n})"
            );
        }
    }

    #[test]
    fn double_comet_structure() {
        let g = double_comet(40, 8).unwrap();
        assert_eq!(g.n(), 40);
        assert!(g.is_strongly_connected());
        assert_eq!(g.eccentricity(0), Some(8));
        // the first k centres look exactly like Comet(20, 4) centres
        let c = comet(20, 4).unwrap();
        for l in 0..4 {
            assert_eq!(g.out_degree(l), c.out_degree(l), "centre {l}");
            assert_eq!(g.in_degree(l), c.in_degree(l), "centre {l}");
        }
        assert!(double_comet(40, 6).is_err());
        assert!(double_comet(39, 8).is_err());
    }

    #[test]
    fn sun_and_bright_sun_counts() {
        let s = sun(5).unwrap();
        assert_eq!((s.n(), s.m()), (10, 15));
        let b = bright_sun(5).unwrap();
        assert_eq!(b.n(), 15);
        assert_eq!(b.degree_sum(), 40); // 5*5 + 5*2 + 5*1
        assert!((b.d_avg() - 8.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn line_is_a_directed_path() {
        let g = line(6).unwrap();
        assert!(!g.is_strongly_connected());
        assert_eq!(g.eccentricity(0), Some(5));
    }

    #[test]
    fn configuration_model_forced_cases() {
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        let g = configuration_model(&DegreeSequence::new(vec![1, 1]).unwrap(), &mut rng).unwrap();
        assert_eq!(g.edges(), &[(0usize, 1usize)][..]);

        let seq = DegreeSequence::new(vec![3, 3, 3, 3]).unwrap();
        for _ in 0..200 {
            let g = configuration_model(&seq, &mut rng).unwrap();
            for u in 0..4 {
                assert_eq!(g.degree(u), 3);
            }
        }
        assert!(matches!(
            configuration_model(&DegreeSequence::new(vec![1, 1, 1]).unwrap(), &mut rng),
            Err(Error::OddDegreeSum(3))
        ));
    }

    #[test]
    fn configuration_model_two_two_outcomes() {
        // stubs of (2,2) admit 3 matchings: double edge twice, self-loops once
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        let seq = DegreeSequence::new(vec![2, 2]).unwrap();
        let trials = 30_000;
        let mut double_edge = 0usize;
        for _ in 0..trials {
            let g = configuration_model(&seq, &mut rng).unwrap();
            let loops = g.edges().iter().filter(|&&(u, v)| u == v).count();
            match loops {
                0 => double_edge += 1,
                2 => {}
                other => panic!("impossible outcome with {other} self-loops"),
            }
            assert_eq!(g.degree(0), 2);
            assert_eq!(g.degree(1), 2);
        }
        let p = double_edge as f64 / trials as f64;
        let sigma = (2.0 / 3.0 * (1.0 / 3.0) / trials as f64).sqrt();
        assert!((p - 2.0 / 3.0).abs() < 3.0 * sigma, "p = {p}");
    }

    /// 99% chi-square quantiles: exact for df 1 and 2, Wilson-Hilferty above.
    fn chi2_crit_99(df: usize) -> f64 {
        match df {
            1 => 6.635,
            2 => 9.210,
            df => {
                let df = df as f64;
                let z = 2.3263478740;
                df * (1.0 - 2.0 / (9.0 * df) + z * (2.0 / (9.0 * df)).sqrt()).powi(3)
            }
        }
    }

    /// Exact outcome distribution (canonical edge multiset -> probability)
    /// over all perfect matchings of the stub set.
    fn enumerate_outcomes(d: &[usize]) -> std::collections::HashMap<Vec<(usize, usize)>, f64> {
        let mut stubs = Vec::new();
        for (node, &deg) in d.iter().enumerate() {
            for _ in 0..deg {
                stubs.push(node);
            }
        }
        let mut outcomes = std::collections::HashMap::new();
        fn recurse(
            stubs: &[usize],
            used: &mut Vec<bool>,
            edges: &mut Vec<(usize, usize)>,
            count: &mut usize,
            outcomes: &mut std::collections::HashMap<Vec<(usize, usize)>, f64>,
        ) {
            let Some(first) = used.iter().position(|&u| !u) else {
                let mut key = edges.clone();
                key.sort_unstable();
                *outcomes.entry(key).or_insert(0.0) += 1.0;
                *count += 1;
                return;
            };
            used[first] = true;
            for second in first + 1..stubs.len() {
                if used[second] {
                    continue;
                }
                used[second] = true;
                let (a, b) = (stubs[first], stubs[second]);
                edges.push((a.min(b), a.max(b)));
                recurse(stubs, used, edges, count, outcomes);
                edges.pop();
                used[second] = false;
            }
            used[first] = false;
        }
        let mut count = 0;
        recurse(
            &stubs,
            &mut vec![false; stubs.len()],
            &mut Vec::new(),
            &mut count,
            &mut outcomes,
        );
        for p in outcomes.values_mut() {
            *p /= count as f64;
        }
        outcomes
    }

    #[test]
    fn configuration_model_matches_enumeration_chi_square() {
        let mut rng = ChaCha12Rng::seed_from_u64(0xC4159);
        for d in [
            vec![2usize, 2],
            vec![3, 2, 2, 1],
            vec![2, 2, 2, 2],
            vec![1, 1, 1, 1],
        ] {
            let expected = enumerate_outcomes(&d);
            let seq = DegreeSequence::new(d.clone()).unwrap();
            let trials = 100_000usize;
            let mut observed: std::collections::HashMap<Vec<(usize, usize)>, usize> =
                std::collections::HashMap::new();
            for _ in 0..trials {
                let g = configuration_model(&seq, &mut rng).unwrap();
                let mut key: Vec<(usize, usize)> = g
                    .edges()
                    .iter()
                    .map(|&(u, v)| (u.min(v), u.max(v)))
                    .collect();
                key.sort_unstable();
                *observed.entry(key).or_insert(0) += 1;
            }
            for key in observed.keys() {
                assert!(
                    expected.contains_key(key),
                    "{d:?}: impossible outcome {key:?}"
                );
            }
            let chi2: f64 = expected
                .iter()
                .map(|(key, p)| {
                    let exp = p * trials as f64;
                    let obs = *observed.get(key).unwrap_or(&0) as f64;
                    (obs - exp) * (obs - exp) / exp
                })
                .sum();
            let crit = chi2_crit_99(expected.len() - 1);
            assert!(
                chi2 <= crit,
                "{d:?}: chi2 {chi2} above 99% critical value {crit}"
            );
        }
    }

    #[test]
    fn random_regular_is_simple_and_connected() {
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let g = random_regular(10, 3, &mut rng).unwrap();
        assert!(!g.allows_multi());
        assert!(g.is_connected());
        assert!((0..10).all(|u| g.degree(u) == 3));
    }

    #[test]
    fn gnp_pendant_shapes() {
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let g = gnp_pendant(20, 0.4, false, &mut rng).unwrap();
        assert_eq!(g.n(), 40);
        assert!((20..40).all(|u| g.degree(u) == 1));
        let h = gnp_pendant(20, 0.4, true, &mut rng).unwrap();
        assert_eq!(h.n(), 59);
    }

    #[test]
    fn gnp_pendant_connected_with_high_probability() {
        let n = 200;
        let p = 2.0 * (n as f64).ln() / n as f64;
        let mut connected = 0;
        for seed in 0..100u64 {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            if gnp_pendant(n, p, false, &mut rng).unwrap().is_connected() {
                connected += 1;
            }
        }
        assert!(connected >= 95, "{connected}/100 connected");
    }

    #[test]
    fn doubled_copy_of_c4_is_two_regular_connected() {
        for seed in 0..20u64 {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let pair = doubled_copy(&cycle(4).unwrap(), &mut rng).unwrap();
            let t = &pair.g_prime;
            assert_eq!(t.n(), 8);
            assert!(t.is_connected());
            assert!((0..8).all(|u| t.degree(u) == 2));
        }
    }

    #[test]
    fn doubled_copy_preserves_degrees() {
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        for _ in 0..30 {
            let g = gnp_pendant(8, 0.5, false, &mut rng)
                .ok()
                .filter(|g| g.is_connected() && g.m() >= g.n());
            let Some(g) = g else { continue };
            let pair = doubled_copy(&g, &mut rng).unwrap();
            assert!(pair.g_prime.is_connected());
            for u in 0..g.n() {
                assert_eq!(pair.g_prime.degree(u), g.degree(u));
                assert_eq!(pair.g_prime.degree(u + g.n()), g.degree(u));
            }
        }
    }

    #[test]
    fn doubled_copy_rejects_trees() {
        let mut rng = ChaCha12Rng::seed_from_u64(2);
        assert!(matches!(
            doubled_copy(&path(5).unwrap(), &mut rng),
            Err(Error::TreeInput)
        ));
    }

    #[test]
    fn expander_augmented_degrees_and_mass() {
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let g = cycle(9).unwrap();
        let pair = expander_augmented(&g, &mut rng).unwrap();
        let bar = &pair.g_prime;
        assert_eq!(bar.n(), 19); // odd n gets an (n+1)-node companion
        assert!(bar.is_connected());
        for u in 0..9 {
            assert_eq!(bar.degree(u), 2);
        }
        for u in 9..19 {
            assert_eq!(bar.degree(u), 3);
        }
        // stationary mass of the new nodes is 3n' / (2|E| + 3n')
        let pi = crate::walk::stationary_undirected_closed_form(bar).unwrap();
        let mass: f64 = (9..19).map(|u| pi.prob(u)).sum();
        let expect = 30.0 / (2.0 * 9.0 + 30.0);
        assert!((mass - expect).abs() < 1e-12);
    }

    #[test]
    fn conductance_gadget_structure() {
        let mut rng = ChaCha12Rng::seed_from_u64(9);
        let pair = conductance_gadget(20, 0.4, 0.5, 0.2, &mut rng).unwrap();
        assert_eq!(pair.n_true, (12, 20));
        assert_eq!(pair.g.n(), 12);
        assert_eq!(pair.g_prime.n(), 20);
        assert!(pair.g.is_connected());
        assert!(pair.g_prime.is_connected());
        // every clique node of g has degree d
        assert!((0..12).all(|u| pair.g.degree(u) == 3));
        assert_eq!(pair.removed_edges.len(), 1);
        assert_eq!(pair.added_edges.len(), 2);
        // g' = g minus the cut edge, plus the 3-regular hidden part (12 edges)
        // and the two bridge edges
        assert_eq!(pair.g_prime.m(), pair.g.m() - 1 + 12 + 2);
    }

    #[test]
    fn conductance_gadget_is_theta_of_phi() {
        let mut rng = ChaCha12Rng::seed_from_u64(13);
        let phi = 0.4;
        let pair = conductance_gadget(20, phi, 0.5, 0.2, &mut rng).unwrap();
        for g in [&pair.g, &pair.g_prime] {
            let res = crate::conductance::general_conductance(g, 0.5).unwrap();
            let ratio = res.phi / phi;
            assert!(
                (0.1..=10.0).contains(&ratio),
                "phi_eps = {} vs phi = {phi} (ratio {ratio})",
                res.phi
            );
        }
    }

    #[test]
    fn conductance_gadget_validates_params() {
        let mut rng = ChaCha12Rng::seed_from_u64(0);
        assert!(conductance_gadget(20, 0.4, 0.5, 0.4, &mut rng).is_err()); // delta >= eps/2
        assert!(conductance_gadget(21, 0.4, 0.5, 0.2, &mut rng).is_err()); // n1 not integral
        assert!(conductance_gadget(20, 0.2, 0.5, 0.2, &mut rng).is_err()); // d = 5 does not divide n1 = 12
    }
}
