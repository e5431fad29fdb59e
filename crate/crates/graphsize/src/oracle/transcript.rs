//! Call transcripts: one line per oracle call, `t kind request response
//! inner_count`, deterministic under (graph seed, oracle seed, script).

use std::fmt;

use super::{Direction, Response};

#[derive(Debug, Clone)]
pub enum Request {
    Init,
    Query {
        label: u32,
        index: usize,
        etype: Option<Direction>,
    },
    Sample,
}

impl fmt::Display for Request {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Request::Init => write!(f, "init"),
            Request::Query {
                label,
                index,
                etype: None,
            } => write!(f, "({label},{index})"),
            Request::Query {
                label,
                index,
                etype: Some(Direction::Out),
            } => {
                write!(f, "({label},{index},out)")
            }
            Request::Query {
                label,
                index,
                etype: Some(Direction::In),
            } => {
                write!(f, "({label},{index},in)")
            }
            Request::Sample => write!(f, "sample"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TranscriptEntry {
    /// Call ordinal as seen by the caller, 1-based.
    pub t: u64,
    pub kind: &'static str,
    pub request: Request,
    pub response: Response,
    /// Oracle-side query counter after the call.
    pub inner_count: u64,
}

impl fmt::Display for TranscriptEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} {} {} {}",
            self.t, self.kind, self.request, self.response, self.inner_count
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct Transcript {
    entries: Vec<TranscriptEntry>,
}

impl Transcript {
    pub fn push(&mut self, entry: TranscriptEntry) {
        self.entries.push(entry);
    }

    pub fn entries(&self) -> &[TranscriptEntry] {
        &self.entries
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }
}
