//! Hard query budgets for lower-bound experiments: once the inner counter
//! reaches the budget, every further call is answered `null` locally and the
//! inner oracle is never touched again.

use super::{Direction, GraphOracle, Label, OracleKind, Response};
use crate::error::Result;

pub struct Budgeted<O> {
    inner: O,
    budget: u64,
}

impl<O: GraphOracle> Budgeted<O> {
    pub fn new(inner: O, budget: u64) -> Self {
        Budgeted { inner, budget }
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn exhausted(&self) -> bool {
        self.inner.queries_used() >= self.budget
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }
}

impl<O: GraphOracle> GraphOracle for Budgeted<O> {
    fn kind(&self) -> OracleKind {
        self.inner.kind()
    }

    fn init(&mut self) -> Result<Response> {
        if self.exhausted() {
            return Ok(Response::Null);
        }
        self.inner.init()
    }

    fn query(&mut self, label: Label, index: usize, etype: Option<Direction>) -> Response {
        if self.exhausted() {
            return Response::Null;
        }
        self.inner.query(label, index, etype)
    }

    fn stationary_sample(&mut self) -> Result<Response> {
        if self.exhausted() {
            return Ok(Response::Null);
        }
        self.inner.stationary_sample()
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
    fn zero_budget_nulls_even_the_init() {
        let g = generators::complete(3).unwrap();
        let inner = Oracle::new(&g, OracleKind::Undirected, OracleConfig::seeded(2)).unwrap();
        let mut o = Budgeted::new(inner, 0);
        assert!(o.init().unwrap().is_null());
        assert_eq!(o.queries_used(), 0);
    }

    #[test]
    fn budget_is_enforced_exactly() {
        let g = generators::complete(4).unwrap();
        let inner = Oracle::new(&g, OracleKind::Undirected, OracleConfig::seeded(1)).unwrap();
        let mut o = Budgeted::new(inner, 2);
        o.init().unwrap();
        assert!(!o.query(1, 1, None).is_null());
        assert!(
            o.query(1, 2, None).is_null(),
            "third call exceeds the budget"
        );
        assert_eq!(o.queries_used(), 2);
    }
}
