//! Memoizing wrapper that turns any caller into a sensible one: queries whose
//! answers are already determined by past responses are served locally and
//! never reach the inner oracle.

use std::collections::HashMap;

use super::{DegreeInfo, Direction, GraphOracle, Label, OracleKind, Response};
use crate::error::Result;

fn etype_code(etype: Option<Direction>) -> u8 {
    match etype {
        None => 0,
        Some(Direction::Out) => 1,
        Some(Direction::In) => 2,
    }
}

pub struct Sensible<O> {
    inner: O,
    outer: u64,
    init_memo: Option<Response>,
    answers: HashMap<(Label, usize, u8), Response>,
    degrees: HashMap<Label, DegreeInfo>,
    max_label: Label,
}

impl<O: GraphOracle> Sensible<O> {
    pub fn new(inner: O) -> Self {
        Sensible {
            inner,
            outer: 0,
            init_memo: None,
            answers: HashMap::new(),
            degrees: HashMap::new(),
            max_label: 0,
        }
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }

    pub fn into_inner(self) -> O {
        self.inner
    }

    /// Calls made by the algorithm, locally answered ones included.
    pub fn outer_queries(&self) -> u64 {
        self.outer
    }

    /// Queries that actually reached the inner oracle.
    pub fn inner_queries(&self) -> u64 {
        self.inner.queries_used()
    }

    fn learn(&mut self, response: Response) {
        if let Some(info) = response.node() {
            self.degrees.insert(info.label, info.degrees);
            self.max_label = self.max_label.max(info.label);
        }
    }

    /// Whether the memo already proves this query answers `null`.
    fn provably_null(&self, label: Label, index: usize, etype: Option<Direction>) -> bool {
        let kind = self.inner.kind();
        let valid_etype = matches!(
            (kind, etype),
            (OracleKind::Undirected | OracleKind::LazyConfig, None)
                | (
                    OracleKind::OutOnly | OracleKind::OutInDegree | OracleKind::Bidirectional,
                    Some(Direction::Out),
                )
                | (OracleKind::Bidirectional, Some(Direction::In))
        );
        if !valid_etype || self.init_memo.is_none() {
            return true;
        }
        if label == 0 || label > self.max_label || index == 0 {
            return true;
        }
        match (self.degrees.get(&label), etype) {
            (Some(DegreeInfo::Undirected(d)), None) => index > *d,
            (Some(DegreeInfo::Out(d)), Some(Direction::Out)) => index > *d,
            (Some(DegreeInfo::OutIn { out, .. }), Some(Direction::Out)) => index > *out,
            (Some(DegreeInfo::OutIn { inc, .. }), Some(Direction::In)) => index > *inc,
            _ => false,
        }
    }
}

impl<O: GraphOracle> GraphOracle for Sensible<O> {
    fn kind(&self) -> OracleKind {
        self.inner.kind()
    }

    fn init(&mut self) -> Result<Response> {
        self.outer += 1;
        if let Some(memo) = self.init_memo {
            return Ok(memo);
        }
        let response = self.inner.init()?;
        self.learn(response);
        self.init_memo = Some(response);
        Ok(response)
    }

    fn query(&mut self, label: Label, index: usize, etype: Option<Direction>) -> Response {
        self.outer += 1;
        let key = (label, index, etype_code(etype));
        if let Some(&memo) = self.answers.get(&key) {
            return memo;
        }
        if self.provably_null(label, index, etype) {
            return Response::Null;
        }
        let response = self.inner.query(label, index, etype);
        self.learn(response);
        self.answers.insert(key, response);
        if let Some(info) = response.node() {
            // side information resolves the partner's reverse position too
            if let (Some(j), Some(&deg)) = (info.side_index, self.degrees.get(&label)) {
                let reverse = super::NodeInfo {
                    label,
                    degrees: deg,
                    side_index: Some(index),
                };
                self.answers
                    .entry((info.label, j, etype_code(etype)))
                    .or_insert(Response::Node(reverse));
            }
        }
        response
    }

    fn stationary_sample(&mut self) -> Result<Response> {
        self.outer += 1;
        let response = self.inner.stationary_sample()?;
        self.learn(response);
        Ok(response)
    }

    fn queries_used(&self) -> u64 {
        self.inner.queries_used()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::oracle::{Oracle, OracleConfig};

    #[test]
    fn repeats_are_served_locally() {
        let g = generators::complete(3).unwrap();
        let inner = Oracle::new(&g, OracleKind::Undirected, OracleConfig::seeded(1)).unwrap();
        let mut o = Sensible::new(inner);
        o.init().unwrap();
        let first = o.query(1, 1, None);
        let before = o.inner_queries();
        assert_eq!(o.query(1, 1, None), first);
        assert_eq!(o.inner_queries(), before, "repeat must not consume budget");
        assert_eq!(o.outer_queries(), 3);
    }

    #[test]
    fn out_of_range_and_unknown_labels_are_free_nulls() {
        let g = generators::complete(3).unwrap();
        let inner = Oracle::new(&g, OracleKind::Undirected, OracleConfig::seeded(2)).unwrap();
        let mut o = Sensible::new(inner);
        o.init().unwrap();
        assert!(
            o.query(1, 3, None).is_null(),
            "degree 2 is known after init"
        );
        assert!(o.query(9, 1, None).is_null(), "label 9 was never issued");
        assert_eq!(o.inner_queries(), 1, "only init reached the oracle");
    }

    #[test]
    fn fresh_queries_pass_through_and_both_counters_move() {
        let g = generators::comet(8, 2).unwrap();
        let inner = Oracle::new(&g, OracleKind::OutOnly, OracleConfig::seeded(3)).unwrap();
        let mut o = Sensible::new(inner);
        o.init().unwrap();
        let r = o.query(1, 2, Some(Direction::Out));
        assert!(!r.is_null());
        assert_eq!(o.outer_queries(), 2);
        assert_eq!(o.inner_queries(), 2);
        // in-queries on an out-only oracle are known nulls
        assert!(o.query(1, 1, Some(Direction::In)).is_null());
        assert_eq!(o.inner_queries(), 2);
    }

    #[test]
    fn double_init_returns_the_memo() {
        let g = generators::complete(3).unwrap();
        let inner = Oracle::new(&g, OracleKind::Undirected, OracleConfig::seeded(4)).unwrap();
        let mut o = Sensible::new(inner);
        let a = o.init().unwrap();
        let b = o.init().unwrap();
        assert_eq!(a, b);
        assert_eq!(o.inner_queries(), 1);
    }
}
