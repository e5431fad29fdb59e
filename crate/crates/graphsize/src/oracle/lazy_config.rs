//! Configuration-model oracle that realizes the uniform stub matching on the
//! fly. Each query `(l, i)` resolves stub `i` of the node labelled `l`: if
//! the stub is still unmatched, a partner is drawn uniformly among all other
//! unmatched stubs, and the response carries the partner's label, degree and
//! stub position (the side information). Queries whose stub is already
//! matched are answered from the existing matching without fresh randomness,
//! so the oracle stays total for non-sensible callers.

use std::collections::HashMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use super::transcript::{Request, Transcript, TranscriptEntry};
use super::{
    DegreeInfo, Direction, GraphOracle, Label, NodeInfo, OracleKind, Response, SeedPolicy,
};
use crate::degrees::DegreeSequence;
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Stub: `(node, slot)` with slots 0-based internally; queries use 1-based
/// adjacency positions.
pub type Stub = (usize, usize);

#[derive(Clone)]
pub struct LazyConfigOracle {
    degrees: Vec<usize>,
    rng: ChaCha12Rng,
    seed_policy: SeedPolicy,
    matching: HashMap<Stub, Stub>,
    unmatched: Vec<Stub>,
    unmatched_pos: HashMap<Stub, usize>,
    label_of: HashMap<usize, Label>,
    node_of: Vec<usize>,
    /// Matched-stub count per node; `sum = 2 * (disclosed edges)`.
    delta: Vec<usize>,
    queries: u64,
    initialized: bool,
    transcript: Option<Transcript>,
}

impl LazyConfigOracle {
    /// `seed_policy` defaults to the stationary draw (degree-proportional,
    /// `pi(u) = d_u / D`), which needs no realization.
    pub fn new(seq: &DegreeSequence, seed: u64, seed_policy: SeedPolicy) -> Result<Self> {
        let total = seq.stub_count();
        if !total.is_multiple_of(2) {
            return Err(Error::OddDegreeSum(total));
        }
        if let SeedPolicy::Fixed(v) = seed_policy {
            if v >= seq.len() {
                return Err(Error::InvalidNode(v, seq.len()));
            }
        }
        let mut unmatched = Vec::with_capacity(total);
        for (node, &d) in seq.degrees().iter().enumerate() {
            for slot in 0..d {
                unmatched.push((node, slot));
            }
        }
        let unmatched_pos = unmatched
            .iter()
            .enumerate()
            .map(|(idx, &s)| (s, idx))
            .collect();
        Ok(LazyConfigOracle {
            degrees: seq.degrees().to_vec(),
            rng: ChaCha12Rng::seed_from_u64(seed),
            seed_policy,
            matching: HashMap::new(),
            unmatched,
            unmatched_pos,
            label_of: HashMap::new(),
            node_of: Vec::new(),
            delta: vec![0; seq.len()],
            queries: 0,
            initialized: false,
            transcript: None,
        })
    }

    pub fn with_transcript(mut self) -> Self {
        self.transcript = Some(Transcript::default());
        self
    }

    pub fn transcript(&self) -> Option<&Transcript> {
        self.transcript.as_ref()
    }

    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    pub fn disclosed_count(&self) -> usize {
        self.node_of.len()
    }

    pub fn node_of_label(&self, label: Label) -> Option<usize> {
        self.node_of.get((label as usize).checked_sub(1)?).copied()
    }

    /// Per-node count of already-matched stubs (`delta_u` bookkeeping).
    pub fn delta(&self) -> &[usize] {
        &self.delta
    }

    fn disclose(&mut self, node: usize) -> Label {
        if let Some(&l) = self.label_of.get(&node) {
            return l;
        }
        let label = self.node_of.len() as Label + 1;
        self.label_of.insert(node, label);
        self.node_of.push(node);
        label
    }

    fn record(&mut self, request: Request, response: Response) {
        let (t, inner) = (self.queries, self.queries);
        if let Some(tr) = self.transcript.as_mut() {
            tr.push(TranscriptEntry {
                t,
                kind: OracleKind::LazyConfig.name(),
                request,
                response,
                inner_count: inner,
            });
        }
    }

    /// Deterministic seed disclosure; the enumeration entry point.
    pub fn init_at(&mut self, node: usize) -> Result<Response> {
        if self.initialized {
            return Err(Error::DoubleInit);
        }
        if node >= self.n() {
            return Err(Error::InvalidNode(node, self.n()));
        }
        self.initialized = true;
        self.queries += 1;
        let label = self.disclose(node);
        let response = Response::Node(NodeInfo {
            label,
            degrees: DegreeInfo::Undirected(self.degrees[node]),
            side_index: None,
        });
        self.record(Request::Init, response);
        Ok(response)
    }

    /// The stub a query `(l, i)` addresses, if it is a valid position.
    fn stub_for(&self, label: Label, index: usize) -> Option<Stub> {
        let node = self
            .node_of
            .get((label as usize).checked_sub(1)?)
            .copied()?;
        if index == 0 || index > self.degrees[node] {
            return None;
        }
        Some((node, index - 1))
    }

    /// Candidate partners for an unmatched stub, in internal order: every
    /// unmatched stub except the queried one. `query` draws uniformly from
    /// exactly this list, so enumerating it reproduces the oracle's
    /// distribution. Returns `None` when the query would be null or is
    /// already matched.
    pub fn candidate_partners(&self, label: Label, index: usize) -> Option<Vec<Stub>> {
        if !self.initialized {
            return None;
        }
        let stub = self.stub_for(label, index)?;
        if self.matching.contains_key(&stub) {
            return None;
        }
        Some(
            self.unmatched
                .iter()
                .copied()
                .filter(|&s| s != stub)
                .collect(),
        )
    }

    fn remove_unmatched(&mut self, stub: Stub) {
        let pos = self.unmatched_pos.remove(&stub).expect("stub present");
        let last = self.unmatched.len() - 1;
        self.unmatched.swap(pos, last);
        self.unmatched.pop();
        if pos <= last {
            if let Some(&moved) = self.unmatched.get(pos) {
                self.unmatched_pos.insert(moved, pos);
            }
        }
    }

    fn respond_from_matching(&mut self, stub: Stub) -> Response {
        let (pnode, pslot) = self.matching[&stub];
        let label = self.disclose(pnode);
        Response::Node(NodeInfo {
            label,
            degrees: DegreeInfo::Undirected(self.degrees[pnode]),
            side_index: Some(pslot + 1),
        })
    }

    /// Resolves `(l, i)` against a chosen partner; the deterministic core of
    /// `query`, exposed so exact-enumeration tests can walk the probability
    /// tree. Counts one query like any other call.
    pub fn resolve_with(&mut self, label: Label, index: usize, partner: Stub) -> Response {
        self.queries += 1;
        let response = match self.stub_for(label, index) {
            None => Response::Null,
            Some(stub) => {
                debug_assert!(!self.matching.contains_key(&stub), "stub already matched");
                debug_assert!(self.unmatched_pos.contains_key(&partner) && partner != stub);
                self.matching.insert(stub, partner);
                self.matching.insert(partner, stub);
                self.remove_unmatched(stub);
                self.remove_unmatched(partner);
                self.delta[stub.0] += 1;
                self.delta[partner.0] += 1;
                self.respond_from_matching(stub)
            }
        };
        self.record(
            Request::Query {
                label,
                index,
                etype: None,
            },
            response,
        );
        response
    }

    /// Matches every remaining stub uniformly; used to audit the realized
    /// multigraph after a crawl.
    pub fn complete_matching(&mut self) {
        use rand::seq::SliceRandom;
        let mut rest = std::mem::take(&mut self.unmatched);
        self.unmatched_pos.clear();
        rest.shuffle(&mut self.rng);
        for pair in rest.chunks_exact(2) {
            self.matching.insert(pair[0], pair[1]);
            self.matching.insert(pair[1], pair[0]);
            self.delta[pair[0].0] += 1;
            self.delta[pair[1].0] += 1;
        }
    }

    /// The multigraph realized by the matching; only complete matchings
    /// correspond to a graph.
    pub fn realized_graph(&self) -> Result<Graph> {
        if !self.unmatched.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "{} stubs still unmatched; call complete_matching first",
                self.unmatched.len()
            )));
        }
        let mut edges = Vec::with_capacity(self.matching.len() / 2);
        let mut stubs: Vec<&Stub> = self.matching.keys().collect();
        stubs.sort_unstable();
        for &stub in stubs {
            let partner = self.matching[&stub];
            if stub <= partner {
                edges.push((stub.0, partner.0));
            }
        }
        Graph::new(false, self.n(), true, edges)
    }
}

impl GraphOracle for LazyConfigOracle {
    fn kind(&self) -> OracleKind {
        OracleKind::LazyConfig
    }

    fn init(&mut self) -> Result<Response> {
        let node = match self.seed_policy {
            SeedPolicy::Fixed(v) => v,
            SeedPolicy::Uniform => self.rng.gen_range(0..self.n()),
            SeedPolicy::Stationary => {
                // pi(u) = d_u / D for every realization of the sequence
                let total: usize = self.degrees.iter().sum();
                let mut x = self.rng.gen_range(0..total);
                let mut chosen = self.n() - 1;
                for (node, &d) in self.degrees.iter().enumerate() {
                    if x < d {
                        chosen = node;
                        break;
                    }
                    x -= d;
                }
                chosen
            }
        };
        self.init_at(node)
    }

    fn query(&mut self, label: Label, index: usize, etype: Option<Direction>) -> Response {
        if etype.is_some() {
            self.queries += 1;
            self.record(
                Request::Query {
                    label,
                    index,
                    etype,
                },
                Response::Null,
            );
            return Response::Null;
        }
        if !self.initialized {
            self.queries += 1;
            self.record(
                Request::Query {
                    label,
                    index,
                    etype,
                },
                Response::Null,
            );
            return Response::Null;
        }
        match self.stub_for(label, index) {
            None => {
                self.queries += 1;
                self.record(
                    Request::Query {
                        label,
                        index,
                        etype,
                    },
                    Response::Null,
                );
                Response::Null
            }
            Some(stub) if self.matching.contains_key(&stub) => {
                // non-sensible repeat: replay the matching deterministically
                self.queries += 1;
                let response = self.respond_from_matching(stub);
                self.record(
                    Request::Query {
                        label,
                        index,
                        etype,
                    },
                    response,
                );
                response
            }
            Some(stub) => {
                // uniform over all unmatched stubs other than the queried one
                let pos = self.unmatched_pos[&stub];
                let choices = self.unmatched.len() - 1;
                let raw = self.rng.gen_range(0..choices);
                let idx = if raw < pos { raw } else { raw + 1 };
                let partner = self.unmatched[idx];
                self.resolve_with(label, index, partner)
            }
        }
    }

    fn stationary_sample(&mut self) -> Result<Response> {
        Err(Error::WrongOracleKind {
            expected: "stationary",
            got: OracleKind::LazyConfig.name(),
        })
    }

    fn queries_used(&self) -> u64 {
        self.queries
    }
}
