//! Degree sequences: graphicality testing and simple realizations.

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeSequence {
    degrees: Vec<usize>,
}

impl DegreeSequence {
    pub fn new(degrees: Vec<usize>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::InvalidParameter(
                "degree sequence must be non-empty".into(),
            ));
        }
        if degrees.contains(&0) {
            return Err(Error::InvalidParameter("degrees must be positive".into()));
        }
        Ok(DegreeSequence { degrees })
    }

    pub fn regular(n: usize, d: usize) -> Result<Self> {
        Self::new(vec![d; n])
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    /// Total number of stubs, `D = sum d_i`.
    pub fn stub_count(&self) -> usize {
        self.degrees.iter().sum()
    }
}

/// Erdos-Gallai test: a simple graph with these degrees exists iff the sum is
/// even and for every k,
/// `sum_{i<=k} d_i <= k(k-1) + sum_{i>k} min(d_i, k)` (degrees sorted
/// non-increasing).
pub fn is_graphical(seq: &DegreeSequence) -> bool {
    let mut d: Vec<usize> = seq.degrees().to_vec();
    if d.iter().sum::<usize>() % 2 != 0 {
        return false;
    }
    d.sort_unstable_by(|a, b| b.cmp(a));
    let n = d.len();
    let mut prefix = 0usize;
    for k in 1..=n {
        prefix += d[k - 1];
        let tail: usize = d[k..].iter().map(|&x| x.min(k)).sum();
        if prefix > k * (k - 1) + tail {
            return false;
        }
    }
    true
}

/// Simple-graph realization: Havel-Hakimi construction followed by
/// `ceil(n ln n)` randomizing double-edge swaps. Each swap replaces
/// `{a,b},{c,d}` with `{a,d},{c,b}` when that keeps the graph simple; degrees
/// are untouched.
pub fn simple_realization(seq: &DegreeSequence, rng: &mut impl Rng) -> Result<Graph> {
    if !is_graphical(seq) {
        return Err(Error::NotGraphical);
    }
    let n = seq.len();
    let mut residual: Vec<(usize, usize)> = seq.degrees().iter().copied().zip(0..n).collect();
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(seq.stub_count() / 2);
    loop {
        residual.sort_unstable_by(|a, b| b.cmp(a));
        let (d, u) = residual[0];
        if d == 0 {
            break;
        }
        if d >= residual.len() {
            return Err(Error::NotGraphical);
        }
        residual[0].0 = 0;
        for slot in residual.iter_mut().skip(1).take(d) {
            if slot.0 == 0 {
                return Err(Error::NotGraphical);
            }
            slot.0 -= 1;
            edges.push((u.min(slot.1), u.max(slot.1)));
        }
    }

    let mut present: std::collections::HashSet<(usize, usize)> = edges.iter().copied().collect();
    let attempts = ((n as f64) * (n as f64).ln()).ceil() as usize;
    for _ in 0..attempts {
        if edges.len() < 2 {
            break;
        }
        let i = rng.gen_range(0..edges.len());
        let j = rng.gen_range(0..edges.len());
        if i == j {
            continue;
        }
        let (a, b) = edges[i];
        let (mut c, mut d) = edges[j];
        if rng.gen::<bool>() {
            std::mem::swap(&mut c, &mut d);
        }
        // propose {a,d}, {c,b}
        let e1 = (a.min(d), a.max(d));
        let e2 = (c.min(b), c.max(b));
        if a == d || c == b || present.contains(&e1) || present.contains(&e2) || e1 == e2 {
            continue;
        }
        present.remove(&edges[i]);
        present.remove(&(c.min(d), c.max(d)));
        present.insert(e1);
        present.insert(e2);
        edges[i] = e1;
        edges[j] = e2;
    }
    Graph::new(false, n, false, edges)
}

/// Simple connected realization, retrying with fresh swaps up to `attempts`
/// times.
pub fn simple_connected_realization(
    seq: &DegreeSequence,
    rng: &mut impl Rng,
    attempts: usize,
) -> Result<Graph> {
    for _ in 0..attempts {
        let g = simple_realization(seq, rng)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::GenerationFailed(attempts))
}
