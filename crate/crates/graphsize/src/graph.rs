//! Graph representation with ordered adjacency lists.
//!
//! The edge list is the ground truth: adjacency lists are derived from it in
//! insertion order, which is also the file order of the on-disk format. The
//! order is semantically meaningful because query oracles expose neighbours by
//! position.
//!
//! Conventions for multigraphs: an undirected self-loop `{u, u}` occupies two
//! positions in `adj(u)` (it consumes two stubs, so it adds 2 to the degree),
//! while a directed self-loop `(u, u)` appears once in `out_adj(u)` and once
//! in `in_adj(u)`.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    directed: bool,
    allows_multi: bool,
    n: usize,
    edges: Vec<(usize, usize)>,
    out_adj: Vec<Vec<usize>>,
    in_adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge list. For undirected graphs each pair is a
    /// single edge `{u, v}`; for directed graphs it is the arc `(u, v)`.
    pub fn new(
        directed: bool,
        n: usize,
        allows_multi: bool,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self> {
        let mut out_adj = vec![Vec::new(); n];
        let mut in_adj = if directed {
            vec![Vec::new(); n]
        } else {
            Vec::new()
        };
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(Error::InvalidEdge(u, v, n));
            }
            if !allows_multi && u == v {
                return Err(Error::SelfLoop(u));
            }
            if directed {
                out_adj[u].push(v);
                in_adj[v].push(u);
            } else if u == v {
                // two stubs of the same node
                out_adj[u].push(u);
                out_adj[u].push(u);
            } else {
                out_adj[u].push(v);
                out_adj[v].push(u);
            }
        }
        let g = Graph {
            directed,
            allows_multi,
            n,
            edges,
            out_adj,
            in_adj,
        };
        if !allows_multi {
            g.check_simple()?;
        }
        Ok(g)
    }

    pub fn undirected(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::new(false, n, false, edges)
    }

    pub fn directed(n: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        Self::new(true, n, false, edges)
    }

    fn check_simple(&self) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in &self.edges {
            let key = if self.directed || u <= v {
                (u, v)
            } else {
                (v, u)
            };
            if !seen.insert(key) {
                return Err(Error::RepeatedEdge(u, v));
            }
        }
        Ok(())
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn allows_multi(&self) -> bool {
        self.allows_multi
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges as stored (undirected edges count once).
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn check_node(&self, u: usize) -> Result<()> {
        if u < self.n {
            Ok(())
        } else {
            Err(Error::InvalidNode(u, self.n))
        }
    }

    /// Out-neighbours of `u` in adjacency order. For undirected graphs this is
    /// the single adjacency list.
    pub fn out_neighbors(&self, u: usize) -> &[usize] {
        &self.out_adj[u]
    }

    /// In-neighbours of `u`. For undirected graphs this is the same list as
    /// [`Self::out_neighbors`].
    pub fn in_neighbors(&self, u: usize) -> &[usize] {
        if self.directed {
            &self.in_adj[u]
        } else {
            &self.out_adj[u]
        }
    }

    pub fn out_degree(&self, u: usize) -> usize {
        self.out_adj[u].len()
    }

    pub fn in_degree(&self, u: usize) -> usize {
        self.in_neighbors(u).len()
    }

    /// Degree of `u`: adjacency-list length (undirected), out-degree (directed).
    pub fn degree(&self, u: usize) -> usize {
        self.out_adj[u].len()
    }

    pub fn degree_sum(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).sum()
    }

    /// Average degree: `2m/n` for undirected graphs, `m/n` for directed.
    pub fn d_avg(&self) -> f64 {
        self.degree_sum() as f64 / self.n as f64
    }

    /// BFS distances along out-edges; `None` for unreachable nodes.
    pub fn bfs_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[source] = Some(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &v in &self.out_adj[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Maximum distance from `source`; `None` if some node is unreachable.
    pub fn eccentricity(&self, source: usize) -> Option<usize> {
        let dist = self.bfs_distances(source);
        let mut ecc = 0;
        for d in dist {
            ecc = ecc.max(d?);
        }
        Some(ecc)
    }

    /// Directed diameter: max shortest-path distance over ordered pairs.
    /// `None` if any pair is unreachable.
    pub fn diameter(&self) -> Option<usize> {
        let mut diam = 0;
        for u in 0..self.n {
            diam = diam.max(self.eccentricity(u)?);
        }
        Some(diam)
    }

    fn reverse_reachable_from(&self, source: usize) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        seen[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            for &v in self.in_neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        seen
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        if self.directed {
            return self.is_strongly_connected();
        }
        self.bfs_distances(0).iter().all(|d| d.is_some())
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.check_strongly_connected().is_ok()
    }

    /// Verifies strong connectivity, reporting a violating node pair on failure.
    pub fn check_strongly_connected(&self) -> Result<()> {
        if self.n == 0 {
            return Ok(());
        }
        let fwd = self.bfs_distances(0);
        if let Some(v) = fwd.iter().position(|d| d.is_none()) {
            return Err(Error::NotStronglyConnected { from: 0, to: v });
        }
        let bwd = self.reverse_reachable_from(0);
        if let Some(v) = bwd.iter().position(|r| !r) {
            return Err(Error::NotStronglyConnected { from: v, to: 0 });
        }
        Ok(())
    }

    /// Serializes to the line-oriented text format:
    /// `graph <directed|undirected> <n> <m> <multi|simple>` then one `u v`
    /// line per edge in stored order.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "graph {} {} {} {}",
            if self.directed {
                "directed"
            } else {
                "undirected"
            },
            self.n,
            self.edges.len(),
            if self.allows_multi { "multi" } else { "simple" },
        );
        for &(u, v) in &self.edges {
            let _ = writeln!(s, "{u} {v}");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| Error::ParseGraph {
            line: 1,
            msg: "empty file".into(),
        })?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let bad_header = |msg: &str| Error::ParseGraph {
            line: 1,
            msg: msg.into(),
        };
        if fields.len() != 5 || fields[0] != "graph" {
            return Err(bad_header(
                "expected `graph <directed|undirected> <n> <m> <multi|simple>`",
            ));
        }
        let directed = match fields[1] {
            "directed" => true,
            "undirected" => false,
            other => return Err(bad_header(&format!("unknown orientation `{other}`"))),
        };
        let n: usize = fields[2]
            .parse()
            .map_err(|_| bad_header("bad node count"))?;
        let m: usize = fields[3]
            .parse()
            .map_err(|_| bad_header("bad edge count"))?;
        let allows_multi = match fields[4] {
            "multi" => true,
            "simple" => false,
            other => return Err(bad_header(&format!("unknown multiplicity flag `{other}`"))),
        };
        let mut edges = Vec::with_capacity(m);
        for (idx, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<usize> {
                tok.ok_or_else(|| Error::ParseGraph {
                    line: idx + 1,
                    msg: "expected `u v`".into(),
                })?
                .parse()
                .map_err(|_| Error::ParseGraph {
                    line: idx + 1,
                    msg: "bad node index".into(),
                })
            };
            let u = parse(it.next())?;
            let v = parse(it.next())?;
            if it.next().is_some() {
                return Err(Error::ParseGraph {
                    line: idx + 1,
                    msg: "trailing tokens".into(),
                });
            }
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::ParseGraph {
                line: 1,
                msg: format!("header declares {m} edges, file has {}", edges.len()),
            });
        }
        Self::new(directed, n, allows_multi, edges)
    }

    pub fn write_file(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn read_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_text(&text)
    }
}
