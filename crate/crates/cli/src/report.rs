//! Estimate reports as CSV rows with RFC-4180 quoting.

use crate::fmt_f64;

/// Documented, stable schema. In `experiment` output `wall_ms` is written as
/// 0 so reruns of the same spec and master seed are byte-identical; the
/// single-run `estimate` subcommand fills real timings.
pub const CSV_HEADER: &str = "estimator,graph_id,seed,params,estimate,queries,wall_ms";

#[derive(Debug, Clone)]
pub struct EstimateReport {
    pub estimator: String,
    pub graph_id: String,
    pub seed: u64,
    pub params: String,
    pub estimate: f64,
    pub queries: u64,
    pub wall_ms: u64,
}

/// Quotes a field when it contains a comma, quote or newline.
pub fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl EstimateReport {
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            csv_field(&self.estimator),
            csv_field(&self.graph_id),
            self.seed,
            csv_field(&self.params),
            fmt_f64(self.estimate),
            self.queries,
            self.wall_ms
        )
    }
}
