//! Query oracles over hidden graphs.
//!
//! An oracle owns the only view of its graph an algorithm gets: an `init`
//! call disclosing a seed node, and positional neighbour queries
//! `(label, i[, direction])`. Nodes are named by a consecutive labelling
//! function (1, 2, 3, ... in disclosure order), adjacency positions are
//! shuffled behind a hidden per-node permutation so callers cannot exploit
//! storage order, and every call — including ones answered `null` — costs one
//! query unit.
//!
//! The oracle kinds mirror the access patterns of real networks:
//!
//! - [`OracleKind::Undirected`]: undirected neighbour access (`O`);
//! - [`OracleKind::OutOnly`]: out-neighbours only, out-degrees only (the
//!   web-crawl model, `O->`);
//! - [`OracleKind::OutInDegree`]: out-neighbour queries that also reveal
//!   in-degrees (`O->(1)`);
//! - [`OracleKind::Bidirectional`]: both edge directions queryable
//!   (`O->(2)`);
//! - [`OracleKind::Stationary`]: i.i.d. nodes from the walk's stationary
//!   distribution (`O^pi`), no neighbour access.
//!
//! [`lazy_config::LazyConfigOracle`] additionally realizes a configuration-
//! model graph on the fly, stub by stub, answering with side information.

use std::collections::HashMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::walk::stationary_distribution;

mod budget;
pub mod lazy_config;
mod sensible;
pub mod transcript;

pub use budget::Budgeted;
pub use lazy_config::LazyConfigOracle;
pub use sensible::Sensible;
pub use transcript::{Request, Transcript, TranscriptEntry};

pub type Label = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    In,
    Out,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleKind {
    Undirected,
    OutOnly,
    OutInDegree,
    Bidirectional,
    Stationary,
    LazyConfig,
}

impl OracleKind {
    pub fn name(&self) -> &'static str {
        match self {
            OracleKind::Undirected => "undirected",
            OracleKind::OutOnly => "out-only",
            OracleKind::OutInDegree => "out+indeg",
            OracleKind::Bidirectional => "bidirectional",
            OracleKind::Stationary => "stationary",
            OracleKind::LazyConfig => "lazy-config",
        }
    }

    /// Edge-type argument an algorithm should pass when walking forward.
    pub fn forward_etype(&self) -> Option<Direction> {
        match self {
            OracleKind::Undirected | OracleKind::LazyConfig => None,
            _ => Some(Direction::Out),
        }
    }
}

/// Degree fields disclosed with a node, matching the oracle kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegreeInfo {
    Undirected(usize),
    Out(usize),
    OutIn { out: usize, inc: usize },
}

impl DegreeInfo {
    /// Degree along the walking direction.
    pub fn forward_degree(&self) -> usize {
        match *self {
            DegreeInfo::Undirected(d) => d,
            DegreeInfo::Out(d) => d,
            DegreeInfo::OutIn { out, .. } => out,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeInfo {
    pub label: Label,
    pub degrees: DegreeInfo,
    /// Adjacency position of the reverse edge, disclosed only by
    /// side-information oracles.
    pub side_index: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Response {
    Null,
    Node(NodeInfo),
}

impl Response {
    pub fn node(&self) -> Option<&NodeInfo> {
        match self {
            Response::Null => None,
            Response::Node(info) => Some(info),
        }
    }

    pub fn is_null(&self) -> bool {
        matches!(self, Response::Null)
    }
}

impl std::fmt::Display for Response {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Response::Null => write!(f, "null"),
            Response::Node(NodeInfo {
                label,
                degrees,
                side_index,
            }) => {
                write!(f, "({label}")?;
                match degrees {
                    DegreeInfo::Undirected(d) => write!(f, ",deg={d}")?,
                    DegreeInfo::Out(d) => write!(f, ",deg+={d}")?,
                    DegreeInfo::OutIn { out, inc } => write!(f, ",deg+={out},deg-={inc}")?,
                }
                if let Some(j) = side_index {
                    write!(f, ",side={j}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// How the seed node for `init` is picked.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SeedPolicy {
    Fixed(usize),
    Uniform,
    /// Draw the seed from the stationary distribution.
    Stationary,
}

#[derive(Debug, Clone)]
pub struct OracleConfig {
    pub seed: u64,
    pub seed_policy: SeedPolicy,
    /// Hide stored adjacency order behind a random permutation. Disabled only
    /// by tests that need to reason about positions directly.
    pub randomize_adjacency: bool,
    pub record_transcript: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            seed: 0,
            seed_policy: SeedPolicy::Fixed(0),
            randomize_adjacency: true,
            record_transcript: false,
        }
    }
}

impl OracleConfig {
    pub fn seeded(seed: u64) -> Self {
        OracleConfig {
            seed,
            ..Default::default()
        }
    }
}

/// Common surface shared by the graph-backed oracle, the lazy
/// configuration-model oracle, and the wrappers.
pub trait GraphOracle {
    fn kind(&self) -> OracleKind;

    /// Discloses the seed node. Errors on a second call.
    fn init(&mut self) -> Result<Response>;

    /// Positional neighbour query. Protocol violations answer `null`; every
    /// call costs one query unit.
    fn query(&mut self, label: Label, index: usize, etype: Option<Direction>) -> Response;

    /// One stationary sample; only the stationary kind supports it.
    fn stationary_sample(&mut self) -> Result<Response>;

    /// Oracle-side query counter: number of calls served, nulls included.
    fn queries_used(&self) -> u64;
}

impl<O: GraphOracle + ?Sized> GraphOracle for &mut O {
    fn kind(&self) -> OracleKind {
        (**self).kind()
    }

    fn init(&mut self) -> Result<Response> {
        (**self).init()
    }

    fn query(&mut self, label: Label, index: usize, etype: Option<Direction>) -> Response {
        (**self).query(label, index, etype)
    }

    fn stationary_sample(&mut self) -> Result<Response> {
        (**self).stationary_sample()
    }

    fn queries_used(&self) -> u64 {
        (**self).queries_used()
    }
}

/// Stateful oracle over a concrete graph.
pub struct Oracle<'g> {
    graph: &'g Graph,
    kind: OracleKind,
    seed_policy: SeedPolicy,
    rng: ChaCha12Rng,
    out_perm: Vec<Vec<usize>>,
    in_perm: Vec<Vec<usize>>,
    label_of: HashMap<usize, Label>,
    node_of: Vec<usize>,
    queries: u64,
    initialized: bool,
    pi: Option<Distribution>,
    transcript: Option<Transcript>,
}

impl<'g> Oracle<'g> {
    pub fn new(graph: &'g Graph, kind: OracleKind, config: OracleConfig) -> Result<Self> {
        Self::build(graph, kind, config, None)
    }

    /// Like [`Self::new`] but reuses a precomputed stationary distribution,
    /// which harness code amortizes across many trials on one graph.
    pub fn with_stationary(
        graph: &'g Graph,
        pi: Distribution,
        kind: OracleKind,
        config: OracleConfig,
    ) -> Result<Self> {
        if pi.len() != graph.n() {
            return Err(Error::LengthMismatch(pi.len(), graph.n()));
        }
        Self::build(graph, kind, config, Some(pi))
    }

    fn build(
        graph: &'g Graph,
        kind: OracleKind,
        config: OracleConfig,
        pi: Option<Distribution>,
    ) -> Result<Self> {
        match kind {
            OracleKind::Undirected if graph.is_directed() => {
                return Err(Error::InvalidParameter(
                    "undirected oracle over a directed graph".into(),
                ));
            }
            OracleKind::OutOnly | OracleKind::OutInDegree | OracleKind::Bidirectional
                if !graph.is_directed() =>
            {
                return Err(Error::InvalidParameter(
                    "directed oracle kinds need a directed graph".into(),
                ));
            }
            OracleKind::LazyConfig => {
                return Err(Error::InvalidParameter(
                    "use LazyConfigOracle for the lazy configuration-model kind".into(),
                ));
            }
            _ => {}
        }
        if let SeedPolicy::Fixed(v) = config.seed_policy {
            graph.check_node(v)?;
        }
        let needs_pi =
            kind == OracleKind::Stationary || config.seed_policy == SeedPolicy::Stationary;
        let pi = match (needs_pi, pi) {
            (true, Some(pi)) => Some(pi),
            (true, None) => Some(stationary_distribution(graph, 1e-12)?),
            (false, _) => None,
        };

        let mut rng = ChaCha12Rng::seed_from_u64(config.seed);
        let identity = |len: usize| (0..len).collect::<Vec<_>>();
        let mut perm_for = |len: usize| {
            let mut p = identity(len);
            if config.randomize_adjacency {
                use rand::seq::SliceRandom;
                p.shuffle(&mut rng);
            }
            p
        };
        let out_perm: Vec<Vec<usize>> = (0..graph.n())
            .map(|u| perm_for(graph.out_neighbors(u).len()))
            .collect();
        let in_perm: Vec<Vec<usize>> = if graph.is_directed() {
            (0..graph.n())
                .map(|u| perm_for(graph.in_neighbors(u).len()))
                .collect()
        } else {
            Vec::new()
        };

        Ok(Oracle {
            graph,
            kind,
            seed_policy: config.seed_policy,
            rng,
            out_perm,
            in_perm,
            label_of: HashMap::new(),
            node_of: Vec::new(),
            queries: 0,
            initialized: false,
            pi,
            transcript: config.record_transcript.then(Transcript::default),
        })
    }

    pub fn graph(&self) -> &Graph {
        self.graph
    }

    pub fn transcript(&self) -> Option<&Transcript> {
        self.transcript.as_ref()
    }

    /// Number of distinct nodes disclosed so far.
    pub fn disclosed_count(&self) -> usize {
        self.node_of.len()
    }

    /// The node currently bound to a label; audit access for tests and
    /// harness checks, not part of the query protocol.
    pub fn node_of_label(&self, label: Label) -> Option<usize> {
        self.node_of.get((label as usize).checked_sub(1)?).copied()
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

    fn degree_info(&self, node: usize) -> DegreeInfo {
        match self.kind {
            OracleKind::Undirected => DegreeInfo::Undirected(self.graph.degree(node)),
            OracleKind::OutOnly => DegreeInfo::Out(self.graph.out_degree(node)),
            OracleKind::OutInDegree | OracleKind::Bidirectional => DegreeInfo::OutIn {
                out: self.graph.out_degree(node),
                inc: self.graph.in_degree(node),
            },
            OracleKind::Stationary => {
                if self.graph.is_directed() {
                    DegreeInfo::Out(self.graph.out_degree(node))
                } else {
                    DegreeInfo::Undirected(self.graph.degree(node))
                }
            }
            OracleKind::LazyConfig => unreachable!(),
        }
    }

    fn record(&mut self, request: Request, response: Response) {
        let (t, kind, inner) = (self.queries, self.kind.name(), self.queries);
        if let Some(tr) = self.transcript.as_mut() {
            tr.push(TranscriptEntry {
                t,
                kind,
                request,
                response,
                inner_count: inner,
            });
        }
    }

    fn answer(&mut self, label: Label, index: usize, etype: Option<Direction>) -> Response {
        if !self.initialized {
            return Response::Null;
        }
        let Some(&node) = self.node_of.get((label as usize).wrapping_sub(1)) else {
            return Response::Null;
        };
        // the (kind, etype) case analysis; everything else is null
        let list: &[usize] = match (self.kind, etype) {
            (OracleKind::Undirected, None) => self.graph.out_neighbors(node),
            (OracleKind::OutOnly, Some(Direction::Out))
            | (OracleKind::OutInDegree, Some(Direction::Out))
            | (OracleKind::Bidirectional, Some(Direction::Out)) => self.graph.out_neighbors(node),
            (OracleKind::Bidirectional, Some(Direction::In)) => self.graph.in_neighbors(node),
            _ => return Response::Null,
        };
        if index == 0 || index > list.len() {
            return Response::Null;
        }
        let perm = match etype {
            Some(Direction::In) => &self.in_perm[node],
            _ => &self.out_perm[node],
        };
        let target = list[perm[index - 1]];
        let label = self.disclose(target);
        Response::Node(NodeInfo {
            label,
            degrees: self.degree_info(target),
            side_index: None,
        })
    }
}

impl GraphOracle for Oracle<'_> {
    fn kind(&self) -> OracleKind {
        self.kind
    }

    fn init(&mut self) -> Result<Response> {
        if self.initialized {
            return Err(Error::DoubleInit);
        }
        let node = match self.seed_policy {
            SeedPolicy::Fixed(v) => v,
            SeedPolicy::Uniform => self.rng.gen_range(0..self.graph.n()),
            SeedPolicy::Stationary => {
                let pi = self.pi.as_ref().expect("pi computed at construction");
                pi.sample(&mut self.rng)
            }
        };
        self.initialized = true;
        self.queries += 1;
        let label = self.disclose(node);
        let response = Response::Node(NodeInfo {
            label,
            degrees: self.degree_info(node),
            side_index: None,
        });
        self.record(Request::Init, response);
        Ok(response)
    }

    fn query(&mut self, label: Label, index: usize, etype: Option<Direction>) -> Response {
        self.queries += 1;
        let response = self.answer(label, index, etype);
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

    fn stationary_sample(&mut self) -> Result<Response> {
        if self.kind != OracleKind::Stationary {
            return Err(Error::WrongOracleKind {
                expected: "stationary",
                got: self.kind.name(),
            });
        }
        self.queries += 1;
        let pi = self.pi.as_ref().expect("pi computed at construction");
        let node = pi.sample(&mut self.rng);
        let label = self.disclose(node);
        let response = Response::Node(NodeInfo {
            label,
            degrees: self.degree_info(node),
            side_index: None,
        });
        self.record(Request::Sample, response);
        Ok(response)
    }

    fn queries_used(&self) -> u64 {
        self.queries
    }
}
