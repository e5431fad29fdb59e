//! Experiment spec files: a line-oriented `key = value` format,
//! order-insensitive, `#` comments. Validation reports every violated field
//! at once rather than stopping at the first.
//!
//! ```text
//! name = comet-edge-sampling
//! generator = comet
//! generator.n = 20
//! generator.k = 4
//! oracle = out-only
//! oracle.seed_policy = fixed:0
//! estimator = edge-sampling
//! estimator.phi = 0.05
//! estimator.ell = 10
//! trials = 50
//! master_seed = 7
//! output = runs.csv
//! ```

use std::collections::HashMap;

use rand::Rng;

use graphsize::degrees::DegreeSequence;
use graphsize::generators;
use graphsize::graph::Graph;
use graphsize::oracle::{OracleKind, SeedPolicy};

use crate::{CliError, CliResult};

pub const GENERATOR_NAMES: &[&str] = &[
    "comet",
    "double-comet",
    "sun",
    "bright-sun",
    "line",
    "path",
    "cycle",
    "directed-cycle",
    "complete",
    "gnp-pendant",
    "config-model",
    "regular",
];

pub const ESTIMATOR_NAMES: &[&str] = &[
    "katzir",
    "katzir-walks",
    "edge-sampling",
    "edge-sampling-centered",
];

#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    Comet { n: usize, k: usize },
    DoubleComet { n: usize, k: usize },
    Sun { n: usize },
    BrightSun { n: usize },
    Line { n: usize },
    Path { n: usize },
    Cycle { n: usize },
    DirectedCycle { n: usize },
    Complete { n: usize },
    GnpPendant { n: usize, p: f64, extra_copy: bool },
    ConfigModel { degrees: Vec<usize> },
    Regular { n: usize, d: usize },
}

impl GeneratorSpec {
    pub fn directed(&self) -> bool {
        matches!(
            self,
            GeneratorSpec::Comet { .. }
                | GeneratorSpec::DoubleComet { .. }
                | GeneratorSpec::Line { .. }
                | GeneratorSpec::DirectedCycle { .. }
        )
    }

    pub fn id(&self) -> String {
        match self {
            GeneratorSpec::Comet { n, k } => format!("comet(n={n},k={k})"),
            GeneratorSpec::DoubleComet { n, k } => format!("double-comet(n={n},k={k})"),
            GeneratorSpec::Sun { n } => format!("sun(n={n})"),
            GeneratorSpec::BrightSun { n } => format!("bright-sun(n={n})"),
            GeneratorSpec::Line { n } => format!("line(n={n})"),
            GeneratorSpec::Path { n } => format!("path(n={n})"),
            GeneratorSpec::Cycle { n } => format!("cycle(n={n})"),
            GeneratorSpec::DirectedCycle { n } => format!("directed-cycle(n={n})"),
            GeneratorSpec::Complete { n } => format!("complete(n={n})"),
            GeneratorSpec::GnpPendant { n, p, extra_copy } => {
                format!(
                    "gnp-pendant(n={n},p={},extra={extra_copy})",
                    crate::fmt_f64(*p)
                )
            }
            GeneratorSpec::ConfigModel { degrees } => {
                let ds: Vec<String> = degrees.iter().map(|d| d.to_string()).collect();
                format!("config-model(degrees={})", ds.join("-"))
            }
            GeneratorSpec::Regular { n, d } => format!("regular(n={n},d={d})"),
        }
    }

    pub fn build(&self, rng: &mut impl Rng) -> CliResult<Graph> {
        let g = match *self {
            GeneratorSpec::Comet { n, k } => generators::comet(n, k)?,
            GeneratorSpec::DoubleComet { n, k } => generators::double_comet(n, k)?,
            GeneratorSpec::Sun { n } => generators::sun(n)?,
            GeneratorSpec::BrightSun { n } => generators::bright_sun(n)?,
            GeneratorSpec::Line { n } => generators::line(n)?,
            GeneratorSpec::Path { n } => generators::path(n)?,
            GeneratorSpec::Cycle { n } => generators::cycle(n)?,
            GeneratorSpec::DirectedCycle { n } => generators::directed_cycle(n)?,
            GeneratorSpec::Complete { n } => generators::complete(n)?,
            GeneratorSpec::GnpPendant { n, p, extra_copy } => {
                generators::gnp_pendant(n, p, extra_copy, rng)?
            }
            GeneratorSpec::ConfigModel { ref degrees } => {
                let seq = DegreeSequence::new(degrees.clone())?;
                generators::configuration_model(&seq, rng)?
            }
            GeneratorSpec::Regular { n, d } => generators::random_regular(n, d, rng)?,
        };
        Ok(g)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EstimatorSpec {
    /// Collision estimator over exact stationary samples; `r` explicit or
    /// derived from `(epsilon, delta)` and the true graph statistics.
    Katzir {
        r: Option<u64>,
        epsilon: Option<f64>,
        delta: Option<f64>,
    },
    /// Collision estimator over random-walk samples through a neighbour
    /// oracle; `t_mix` explicit or measured by exact propagation.
    KatzirWalks {
        t_mix: Option<usize>,
        epsilon: f64,
        delta: f64,
    },
    EdgeSampling {
        phi: f64,
        ell: u32,
    },
    EdgeSamplingCentered {
        phi: f64,
        ell: u32,
        epsilon: f64,
    },
}

impl EstimatorSpec {
    pub fn name(&self) -> &'static str {
        match self {
            EstimatorSpec::Katzir { .. } => "katzir",
            EstimatorSpec::KatzirWalks { .. } => "katzir-walks",
            EstimatorSpec::EdgeSampling { .. } => "edge-sampling",
            EstimatorSpec::EdgeSamplingCentered { .. } => "edge-sampling-centered",
        }
    }

    pub fn params_id(&self) -> String {
        match self {
            EstimatorSpec::Katzir { r, epsilon, delta } => {
                let mut parts = Vec::new();
                if let Some(r) = r {
                    parts.push(format!("r={r}"));
                }
                if let (Some(e), Some(d)) = (epsilon, delta) {
                    parts.push(format!(
                        "eps={};delta={}",
                        crate::fmt_f64(*e),
                        crate::fmt_f64(*d)
                    ));
                }
                parts.join(";")
            }
            EstimatorSpec::KatzirWalks {
                t_mix,
                epsilon,
                delta,
            } => {
                let t = t_mix.map_or("auto".to_string(), |t| t.to_string());
                format!(
                    "t_mix={t};eps={};delta={}",
                    crate::fmt_f64(*epsilon),
                    crate::fmt_f64(*delta)
                )
            }
            EstimatorSpec::EdgeSampling { phi, ell } => {
                format!("phi={};ell={ell}", crate::fmt_f64(*phi))
            }
            EstimatorSpec::EdgeSamplingCentered { phi, ell, epsilon } => {
                format!(
                    "phi={};ell={ell};eps={}",
                    crate::fmt_f64(*phi),
                    crate::fmt_f64(*epsilon)
                )
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub name: String,
    pub generator: GeneratorSpec,
    pub oracle_kind: OracleKind,
    pub seed_policy: SeedPolicy,
    pub estimator: EstimatorSpec,
    pub trials: u32,
    pub master_seed: u64,
    pub output: Option<String>,
}

pub fn parse_oracle_kind(s: &str) -> Option<OracleKind> {
    match s {
        "undirected" => Some(OracleKind::Undirected),
        "out-only" => Some(OracleKind::OutOnly),
        "out+indeg" => Some(OracleKind::OutInDegree),
        "bidirectional" => Some(OracleKind::Bidirectional),
        "stationary" => Some(OracleKind::Stationary),
        _ => None,
    }
}

pub fn parse_seed_policy(s: &str) -> Option<SeedPolicy> {
    if let Some(idx) = s.strip_prefix("fixed:") {
        return idx.parse().ok().map(SeedPolicy::Fixed);
    }
    match s {
        "uniform" => Some(SeedPolicy::Uniform),
        "stationary" => Some(SeedPolicy::Stationary),
        _ => None,
    }
}

struct Fields {
    map: HashMap<String, String>,
    errors: Vec<String>,
}

impl Fields {
    fn require(&mut self, key: &str) -> Option<String> {
        match self.map.remove(key) {
            Some(v) => Some(v),
            None => {
                self.errors.push(format!("missing field `{key}`"));
                None
            }
        }
    }

    fn optional(&mut self, key: &str) -> Option<String> {
        self.map.remove(key)
    }

    fn parse<T: std::str::FromStr>(&mut self, key: &str, value: &str) -> Option<T> {
        match value.parse() {
            Ok(v) => Some(v),
            Err(_) => {
                self.errors
                    .push(format!("field `{key}`: cannot parse `{value}`"));
                None
            }
        }
    }

    fn require_parse<T: std::str::FromStr>(&mut self, key: &str) -> Option<T> {
        let v = self.require(key)?;
        self.parse(key, &v)
    }

    fn optional_parse<T: std::str::FromStr>(&mut self, key: &str) -> Option<T> {
        let v = self.optional(key)?;
        self.parse(key, &v)
    }
}

fn parse_generator(fields: &mut Fields) -> Option<GeneratorSpec> {
    let name = fields.require("generator")?;
    match name.as_str() {
        "comet" => Some(GeneratorSpec::Comet {
            n: fields.require_parse("generator.n")?,
            k: fields.require_parse("generator.k")?,
        }),
        "double-comet" => Some(GeneratorSpec::DoubleComet {
            n: fields.require_parse("generator.n")?,
            k: fields.require_parse("generator.k")?,
        }),
        "sun" => Some(GeneratorSpec::Sun {
            n: fields.require_parse("generator.n")?,
        }),
        "bright-sun" => Some(GeneratorSpec::BrightSun {
            n: fields.require_parse("generator.n")?,
        }),
        "line" => Some(GeneratorSpec::Line {
            n: fields.require_parse("generator.n")?,
        }),
        "path" => Some(GeneratorSpec::Path {
            n: fields.require_parse("generator.n")?,
        }),
        "cycle" => Some(GeneratorSpec::Cycle {
            n: fields.require_parse("generator.n")?,
        }),
        "directed-cycle" => Some(GeneratorSpec::DirectedCycle {
            n: fields.require_parse("generator.n")?,
        }),
        "complete" => Some(GeneratorSpec::Complete {
            n: fields.require_parse("generator.n")?,
        }),
        "gnp-pendant" => Some(GeneratorSpec::GnpPendant {
            n: fields.require_parse("generator.n")?,
            p: fields.require_parse("generator.p")?,
            extra_copy: fields
                .optional_parse("generator.extra_copy")
                .unwrap_or(false),
        }),
        "config-model" => {
            let raw = fields.require("generator.degrees")?;
            let mut degrees = Vec::new();
            for tok in raw.split(',') {
                degrees.push(fields.parse::<usize>("generator.degrees", tok.trim())?);
            }
            Some(GeneratorSpec::ConfigModel { degrees })
        }
        "regular" => Some(GeneratorSpec::Regular {
            n: fields.require_parse("generator.n")?,
            d: fields.require_parse("generator.d")?,
        }),
        other => {
            fields.errors.push(format!(
                "unknown generator `{other}`; available: {}",
                GENERATOR_NAMES.join(", ")
            ));
            None
        }
    }
}

fn parse_estimator(fields: &mut Fields) -> Option<EstimatorSpec> {
    let name = fields.require("estimator")?;
    match name.as_str() {
        "katzir" => {
            let r = fields.optional_parse("estimator.r");
            let epsilon = fields.optional_parse("estimator.epsilon");
            let delta = fields.optional_parse("estimator.delta");
            if r.is_none() && (epsilon.is_none() || delta.is_none()) {
                fields.errors.push(
                    "katzir needs estimator.r or both estimator.epsilon and estimator.delta".into(),
                );
                return None;
            }
            Some(EstimatorSpec::Katzir { r, epsilon, delta })
        }
        "katzir-walks" => Some(EstimatorSpec::KatzirWalks {
            t_mix: fields.optional_parse("estimator.t_mix"),
            epsilon: fields.require_parse("estimator.epsilon")?,
            delta: fields.require_parse("estimator.delta")?,
        }),
        "edge-sampling" => Some(EstimatorSpec::EdgeSampling {
            phi: fields.require_parse("estimator.phi")?,
            ell: fields.require_parse("estimator.ell")?,
        }),
        "edge-sampling-centered" => Some(EstimatorSpec::EdgeSamplingCentered {
            phi: fields.require_parse("estimator.phi")?,
            ell: fields.require_parse("estimator.ell")?,
            epsilon: fields.require_parse("estimator.epsilon")?,
        }),
        other => {
            fields.errors.push(format!(
                "unknown estimator `{other}`; available: {}",
                ESTIMATOR_NAMES.join(", ")
            ));
            None
        }
    }
}

/// Cross-field compatibility rules, checked after individual parses.
fn validate_combination(spec: &ExperimentSpec, errors: &mut Vec<String>) {
    let stationary = spec.oracle_kind == OracleKind::Stationary;
    match spec.estimator {
        EstimatorSpec::Katzir { .. } if !stationary => {
            errors.push("estimator katzir needs oracle = stationary".into());
        }
        EstimatorSpec::KatzirWalks { .. } if stationary => {
            errors.push("estimator katzir-walks needs a neighbour oracle".into());
        }
        EstimatorSpec::EdgeSampling { .. } | EstimatorSpec::EdgeSamplingCentered { .. }
            if stationary =>
        {
            errors.push("edge-sampling needs a neighbour oracle".into());
        }
        _ => {}
    }
    let need_directed = matches!(
        spec.oracle_kind,
        OracleKind::OutOnly | OracleKind::OutInDegree | OracleKind::Bidirectional
    );
    if need_directed && !spec.generator.directed() {
        errors.push(format!(
            "oracle `{}` needs a directed graph but generator `{}` is undirected",
            spec.oracle_kind.name(),
            spec.generator.id()
        ));
    }
    if spec.oracle_kind == OracleKind::Undirected && spec.generator.directed() {
        errors.push(format!(
            "oracle `undirected` cannot serve directed generator `{}`",
            spec.generator.id()
        ));
    }
}

pub fn parse_spec(text: &str) -> CliResult<ExperimentSpec> {
    let mut map = HashMap::new();
    let mut errors = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        match line.split_once('=') {
            Some((k, v)) => {
                let key = k.trim().to_string();
                if map.insert(key.clone(), v.trim().to_string()).is_some() {
                    errors.push(format!("line {}: duplicate field `{key}`", idx + 1));
                }
            }
            None => errors.push(format!("line {}: expected `key = value`", idx + 1)),
        }
    }
    let mut fields = Fields { map, errors };

    let name = fields.require("name");
    let generator = parse_generator(&mut fields);
    let oracle_kind = fields.require("oracle").and_then(|v| match parse_oracle_kind(&v) {
        Some(k) => Some(k),
        None => {
            fields.errors.push(format!(
                "field `oracle`: unknown kind `{v}` (undirected, out-only, out+indeg, bidirectional, stationary)"
            ));
            None
        }
    });
    let seed_policy = match fields.optional("oracle.seed_policy") {
        None => Some(SeedPolicy::Fixed(0)),
        Some(v) => match parse_seed_policy(&v) {
            Some(p) => Some(p),
            None => {
                fields.errors.push(format!(
                    "field `oracle.seed_policy`: expected fixed:<idx>, uniform or stationary, got `{v}`"
                ));
                None
            }
        },
    };
    let estimator = parse_estimator(&mut fields);
    let trials: Option<u32> = fields.require_parse("trials");
    if let Some(0) = trials {
        fields
            .errors
            .push("field `trials`: must be at least 1".into());
    }
    let master_seed: Option<u64> = fields.require_parse("master_seed");
    let output = fields.optional("output");

    for key in fields.map.keys() {
        fields.errors.push(format!("unknown field `{key}`"));
    }

    let mut errors = fields.errors;
    if let (
        Some(name),
        Some(generator),
        Some(oracle_kind),
        Some(seed_policy),
        Some(estimator),
        Some(trials),
        Some(master_seed),
    ) = (
        name,
        generator,
        oracle_kind,
        seed_policy,
        estimator,
        trials,
        master_seed,
    ) {
        if trials >= 1 {
            let spec = ExperimentSpec {
                name,
                generator,
                oracle_kind,
                seed_policy,
                estimator,
                trials,
                master_seed,
                output,
            };
            validate_combination(&spec, &mut errors);
            if errors.is_empty() {
                return Ok(spec);
            }
        }
    }
    Err(CliError::Validation(format!(
        "invalid experiment spec:\n  {}",
        errors.join("\n  ")
    )))
}
