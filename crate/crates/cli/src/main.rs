use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use graphsize::conductance::{general_conductance, general_conductance_heuristic, BRUTE_FORCE_CAP};
use graphsize::degrees::DegreeSequence;
use graphsize::generators;
use graphsize::graph::Graph;
use graphsize::oracle::OracleKind;
use graphsize::walk::{mixing_time_empirical, stationary_distribution, MIXING_PROPAGATION_CAP};

use graphsize_cli::report::{EstimateReport, CSV_HEADER};
use graphsize_cli::specfile::{self, EstimatorSpec, ExperimentSpec};
use graphsize_cli::{distinguish, experiment, fmt_f64, CliError, CliResult};

#[derive(Parser)]
#[command(
    name = "graphsize",
    about = "Graph-size estimation under local query models: generators, oracles, estimators, experiments",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated graph (or gadget pair) to the line-oriented format
    Generate(GenerateArgs),
    /// Print structural and walk statistics of a graph file
    Analyze(AnalyzeArgs),
    /// Run one estimator against a graph file
    Estimate(EstimateArgs),
    /// Run an experiment spec file and emit CSV rows
    Experiment(ExperimentArgs),
    /// Run distinguishability trials on a gadget pair under a query budget
    Distinguish(DistinguishArgs),
}

#[derive(Args)]
struct GenerateArgs {
    /// Family: comet, double-comet, sun, bright-sun, line, path, cycle,
    /// directed-cycle, complete, gnp-pendant, config-model, regular,
    /// doubled-copy, expander-augmented, conductance-gadget
    family: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    /// Comma-separated degree sequence (config-model)
    #[arg(long)]
    degrees: Option<String>,
    /// Replace one pendant by a bridge to a fresh G(n,p) copy (gnp-pendant)
    #[arg(long, default_value_t = false)]
    extra_copy: bool,
    #[arg(long)]
    phi: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    /// Base graph file for doubled-copy / expander-augmented
    #[arg(long)]
    of: Option<PathBuf>,
    #[arg(short, long)]
    out: PathBuf,
    /// Second output file, required for pair families
    #[arg(long)]
    out_prime: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct AnalyzeArgs {
    file: PathBuf,
    /// Epsilon for the general conductance
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    /// Skip the conductance computation
    #[arg(long, default_value_t = false)]
    skip_phi: bool,
    /// Node cap for exact mixing-time propagation
    #[arg(long, default_value_t = MIXING_PROPAGATION_CAP)]
    mixing_cap: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct EstimateArgs {
    file: PathBuf,
    /// katzir, katzir-walks, edge-sampling, edge-sampling-centered
    #[arg(long)]
    estimator: String,
    #[arg(long)]
    r: Option<u64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    t_mix: Option<usize>,
    #[arg(long)]
    phi: Option<f64>,
    #[arg(long)]
    ell: Option<u32>,
    /// Oracle kind; default: stationary for katzir, else matches the graph
    #[arg(long)]
    oracle: Option<String>,
    /// Seed policy: `fixed:<idx>`, uniform, stationary
    #[arg(long, default_value = "fixed:0")]
    seed_policy: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Append the run as a CSV row (header written if the file is new)
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Write the oracle transcript to this directory
    #[arg(long)]
    log_transcripts: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    spec: PathBuf,
    /// Override the spec's output path
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Write per-trial oracle transcripts into this directory
    #[arg(long)]
    log_transcripts: Option<PathBuf>,
}

#[derive(Args)]
struct DistinguishArgs {
    /// Pair: doubled-cycle, expander-cycle, comet-double, conductance-gadget
    pair: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    phi: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    budget: u64,
    #[arg(long, default_value_t = 100)]
    trials: u32,
    /// katzir, bfs or edge-sampling (defaults per pair)
    #[arg(long)]
    policy: Option<String>,
    #[arg(long)]
    oracle: Option<String>,
    #[arg(long)]
    ell: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

fn require<T: Copy>(v: Option<T>, flag: &str, family: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::Validation(format!("{family} needs --{flag}")))
}

fn cmd_generate(args: GenerateArgs) -> CliResult<()> {
    let mut rng = ChaCha12Rng::seed_from_u64(args.seed);
    let family = args.family.as_str();
    let single = |g: Graph| -> CliResult<Option<Graph>> { Ok(Some(g)) };
    let (g, g_prime): (Option<Graph>, Option<Graph>) = match family {
        "comet" => (
            single(generators::comet(require(args.n, "n", family)?, require(args.k, "k", family)?)?)?,
            None,
        ),
        "double-comet" => (
            single(generators::double_comet(
                require(args.n, "n", family)?,
                require(args.k, "k", family)?,
            )?)?,
            None,
        ),
        "sun" => (single(generators::sun(require(args.n, "n", family)?)?)?, None),
        "bright-sun" => (single(generators::bright_sun(require(args.n, "n", family)?)?)?, None),
        "line" => (single(generators::line(require(args.n, "n", family)?)?)?, None),
        "path" => (single(generators::path(require(args.n, "n", family)?)?)?, None),
        "cycle" => (single(generators::cycle(require(args.n, "n", family)?)?)?, None),
        "directed-cycle" => {
            (single(generators::directed_cycle(require(args.n, "n", family)?)?)?, None)
        }
        "complete" => (single(generators::complete(require(args.n, "n", family)?)?)?, None),
        "gnp-pendant" => (
            single(generators::gnp_pendant(
                require(args.n, "n", family)?,
                require(args.p, "p", family)?,
                args.extra_copy,
                &mut rng,
            )?)?,
            None,
        ),
        "config-model" => {
            let raw = args
                .degrees
                .as_deref()
                .ok_or_else(|| CliError::Validation("config-model needs --degrees".into()))?;
            let mut degrees = Vec::new();
            for tok in raw.split(',') {
                degrees.push(tok.trim().parse::<usize>().map_err(|_| {
                    CliError::Validation(format!("--degrees: cannot parse `{tok}`"))
                })?);
            }
            (single(generators::configuration_model(&DegreeSequence::new(degrees)?, &mut rng)?)?, None)
        }
        "regular" => (
            single(generators::random_regular(
                require(args.n, "n", family)?,
                require(args.d, "d", family)?,
                &mut rng,
            )?)?,
            None,
        ),
        "doubled-copy" | "expander-augmented" => {
            let base_path = args
                .of
                .as_ref()
                .ok_or_else(|| CliError::Validation(format!("{family} needs --of <graph file>")))?;
            let base = Graph::read_file(base_path)?;
            let pair = if family == "doubled-copy" {
                generators::doubled_copy(&base, &mut rng)?
            } else {
                generators::expander_augmented(&base, &mut rng)?
            };
            (Some(pair.g), Some(pair.g_prime))
        }
        "conductance-gadget" => {
            let pair = generators::conductance_gadget(
                require(args.n, "n", family)?,
                require(args.phi, "phi", family)?,
                require(args.epsilon, "epsilon", family)?,
                require(args.delta, "delta", family)?,
                &mut rng,
            )?;
            (Some(pair.g), Some(pair.g_prime))
        }
        other => {
            return Err(CliError::Validation(format!(
                "unknown family `{other}`; available: {}, doubled-copy, expander-augmented, conductance-gadget",
                specfile::GENERATOR_NAMES.join(", ")
            )))
        }
    };

    let g = g.expect("every family builds a primary graph");
    g.write_file(&args.out)?;
    println!("wrote {} (n={}, m={})", args.out.display(), g.n(), g.m());
    if let Some(prime) = g_prime {
        let path = args.out_prime.ok_or_else(|| {
            CliError::Validation(format!("{family} produces a pair; add --out-prime"))
        })?;
        prime.write_file(&path)?;
        println!(
            "wrote {} (n={}, m={})",
            path.display(),
            prime.n(),
            prime.m()
        );
    } else if args.out_prime.is_some() {
        return Err(CliError::Validation(format!(
            "{family} produces a single graph"
        )));
    }
    Ok(())
}

fn cmd_analyze(args: AnalyzeArgs) -> CliResult<()> {
    let g = Graph::read_file(&args.file)?;
    println!("n = {}", g.n());
    println!("m = {}", g.m());
    println!("directed = {}", g.is_directed());
    println!("multi = {}", g.allows_multi());
    println!("d_avg = {}", fmt_f64(g.d_avg()));
    let strongly_connected = g.is_strongly_connected();
    println!("strongly_connected = {strongly_connected}");
    match g.diameter() {
        Some(d) => println!("diameter = {d}"),
        None => println!("diameter = unreachable-pairs"),
    }
    if let Some(e) = g.eccentricity(0) {
        println!("seed_eccentricity = {e}");
    }
    if strongly_connected {
        let pi = stationary_distribution(&g, 1e-12)?;
        println!("pi_l2_norm = {}", fmt_f64(pi.l2_norm()));
        if g.n() <= args.mixing_cap {
            println!("t_mix = {}", mixing_time_empirical(&g)?);
        } else {
            println!("t_mix = skipped (n > {})", args.mixing_cap);
        }
        if g.n() <= 32 {
            let probs: Vec<String> = pi.probs().iter().map(|&p| fmt_f64(p)).collect();
            println!("pi = [{}]", probs.join(", "));
        }
    }
    if !args.skip_phi {
        if g.n() <= BRUTE_FORCE_CAP {
            let res = general_conductance(&g, args.epsilon)?;
            println!(
                "phi_eps({}) = {} [exact]",
                fmt_f64(args.epsilon),
                fmt_f64(res.phi)
            );
        } else {
            let mut rng = ChaCha12Rng::seed_from_u64(args.seed);
            let res = general_conductance_heuristic(&g, args.epsilon, &mut rng)?;
            println!(
                "phi_eps({}) <= {} [heuristic upper bound]",
                fmt_f64(args.epsilon),
                fmt_f64(res.phi)
            );
        }
    }
    Ok(())
}

fn parse_estimator_flags(args: &EstimateArgs) -> CliResult<EstimatorSpec> {
    match args.estimator.as_str() {
        "katzir" => {
            if args.r.is_none() && (args.epsilon.is_none() || args.delta.is_none()) {
                return Err(CliError::Validation(
                    "katzir needs --r or both --epsilon and --delta".into(),
                ));
            }
            Ok(EstimatorSpec::Katzir {
                r: args.r,
                epsilon: args.epsilon,
                delta: args.delta,
            })
        }
        "katzir-walks" => Ok(EstimatorSpec::KatzirWalks {
            t_mix: args.t_mix,
            epsilon: args
                .epsilon
                .ok_or_else(|| CliError::Validation("katzir-walks needs --epsilon".into()))?,
            delta: args
                .delta
                .ok_or_else(|| CliError::Validation("katzir-walks needs --delta".into()))?,
        }),
        "edge-sampling" => Ok(EstimatorSpec::EdgeSampling {
            phi: args
                .phi
                .ok_or_else(|| CliError::Validation("edge-sampling needs --phi".into()))?,
            ell: args
                .ell
                .ok_or_else(|| CliError::Validation("edge-sampling needs --ell".into()))?,
        }),
        "edge-sampling-centered" => Ok(EstimatorSpec::EdgeSamplingCentered {
            phi: args
                .phi
                .ok_or_else(|| CliError::Validation("edge-sampling needs --phi".into()))?,
            ell: args
                .ell
                .ok_or_else(|| CliError::Validation("edge-sampling needs --ell".into()))?,
            epsilon: args
                .epsilon
                .ok_or_else(|| CliError::Validation("centered variant needs --epsilon".into()))?,
        }),
        other => Err(CliError::Validation(format!(
            "unknown estimator `{other}`; available: {}",
            specfile::ESTIMATOR_NAMES.join(", ")
        ))),
    }
}

fn cmd_estimate(args: EstimateArgs) -> CliResult<()> {
    let g = Graph::read_file(&args.file)?;
    let estimator = parse_estimator_flags(&args)?;
    let kind = match args.oracle.as_deref() {
        Some(name) => specfile::parse_oracle_kind(name)
            .ok_or_else(|| CliError::Validation(format!("unknown oracle kind `{name}`")))?,
        None => match estimator {
            EstimatorSpec::Katzir { .. } => OracleKind::Stationary,
            _ if g.is_directed() => OracleKind::OutOnly,
            _ => OracleKind::Undirected,
        },
    };
    let policy = specfile::parse_seed_policy(&args.seed_policy)
        .ok_or_else(|| CliError::Validation(format!("bad --seed-policy `{}`", args.seed_policy)))?;

    let started = Instant::now();
    let (estimate, queries, transcript) = experiment::run_estimator(
        &estimator,
        &g,
        kind,
        policy,
        graphsize_cli::derive_seed(args.seed, 1),
        graphsize_cli::derive_seed(args.seed, 2),
        args.log_transcripts.is_some(),
    )?;
    let wall_ms = started.elapsed().as_millis() as u64;

    println!("estimator = {}", estimator.name());
    println!("oracle = {}", kind.name());
    println!("estimate = {}", fmt_f64(estimate));
    println!("queries = {queries}");
    println!("wall_ms = {wall_ms}");

    if let (Some(dir), Some(text)) = (args.log_transcripts.as_ref(), transcript) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::Runtime(e.to_string()))?;
        let path = dir.join("trial_0.log");
        std::fs::write(&path, text).map_err(|e| CliError::Runtime(e.to_string()))?;
        println!("transcript = {}", path.display());
    }

    if let Some(out) = args.out {
        let report = EstimateReport {
            estimator: estimator.name().to_string(),
            graph_id: args.file.display().to_string(),
            seed: args.seed,
            params: estimator.params_id(),
            estimate,
            queries,
            wall_ms,
        };
        let mut text = String::new();
        if !out.exists() {
            text.push_str(CSV_HEADER);
            text.push('\n');
        }
        text.push_str(&report.to_csv_row());
        text.push('\n');
        use std::io::Write;
        let mut f = std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(&out)
            .map_err(|e| CliError::Runtime(e.to_string()))?;
        f.write_all(text.as_bytes())
            .map_err(|e| CliError::Runtime(e.to_string()))?;
    }
    Ok(())
}

fn cmd_experiment(args: ExperimentArgs) -> CliResult<()> {
    let text = std::fs::read_to_string(&args.spec)
        .map_err(|e| CliError::Validation(format!("cannot read spec: {e}")))?;
    let spec: ExperimentSpec = specfile::parse_spec(&text)?;
    let csv = experiment::run_experiment(&spec, args.log_transcripts.as_deref())?;
    let out = args
        .out
        .or_else(|| spec.output.as_ref().map(PathBuf::from))
        .ok_or_else(|| CliError::Validation("no output path: set `output =` or pass -o".into()))?;
    std::fs::write(&out, &csv).map_err(|e| CliError::Runtime(e.to_string()))?;
    println!("wrote {} ({} trials)", out.display(), spec.trials);
    Ok(())
}

fn cmd_distinguish(args: DistinguishArgs) -> CliResult<()> {
    let mut rng = ChaCha12Rng::seed_from_u64(graphsize_cli::derive_seed(args.seed, 0xFA1));
    let (pair, default_kind, default_policy) = match args.pair.as_str() {
        "doubled-cycle" => {
            let n = require(args.n, "n", "doubled-cycle")?;
            let pair = generators::doubled_copy(&generators::cycle(n)?, &mut rng)?;
            (pair, OracleKind::Stationary, distinguish::DistinguishPolicy::KatzirMidpoint)
        }
        "expander-cycle" => {
            let n = require(args.n, "n", "expander-cycle")?;
            let pair = generators::expander_augmented(&generators::cycle(n)?, &mut rng)?;
            (pair, OracleKind::Stationary, distinguish::DistinguishPolicy::KatzirMidpoint)
        }
        "comet-double" => {
            let n = require(args.n, "n", "comet-double")?;
            let k = require(args.k, "k", "comet-double")?;
            let pair = generators::GadgetPair {
                g: generators::comet(n, k)?,
                g_prime: generators::double_comet(2 * n, 2 * k)?,
                removed_edges: vec![],
                added_edges: vec![],
                n_true: (n, 2 * n),
            };
            (pair, OracleKind::OutInDegree, distinguish::DistinguishPolicy::BfsCount)
        }
        "conductance-gadget" => {
            let pair = generators::conductance_gadget(
                require(args.n, "n", "conductance-gadget")?,
                require(args.phi, "phi", "conductance-gadget")?,
                require(args.epsilon, "epsilon", "conductance-gadget")?,
                require(args.delta, "delta", "conductance-gadget")?,
                &mut rng,
            )?;
            let policy = distinguish::DistinguishPolicy::EdgeSampling {
                phi: args.phi.unwrap(),
                ell: args.ell.unwrap_or(10),
            };
            (pair, OracleKind::Undirected, policy)
        }
        other => {
            return Err(CliError::Validation(format!(
                "unknown pair `{other}`; available: doubled-cycle, expander-cycle, comet-double, conductance-gadget"
            )))
        }
    };
    let kind = match args.oracle.as_deref() {
        Some(name) => specfile::parse_oracle_kind(name)
            .ok_or_else(|| CliError::Validation(format!("unknown oracle kind `{name}`")))?,
        None => default_kind,
    };
    let policy = match args.policy.as_deref() {
        None => default_policy,
        Some("katzir") => distinguish::DistinguishPolicy::KatzirMidpoint,
        Some("bfs") => distinguish::DistinguishPolicy::BfsCount,
        Some("edge-sampling") => distinguish::DistinguishPolicy::EdgeSampling {
            phi: require(args.phi, "phi", "edge-sampling policy")?,
            ell: args.ell.unwrap_or(10),
        },
        Some(other) => {
            return Err(CliError::Validation(format!(
                "unknown policy `{other}`; available: katzir, bfs, edge-sampling"
            )))
        }
    };
    let out =
        distinguish::run_distinguish(&pair, kind, &policy, args.budget, args.trials, args.seed)?;
    println!(
        "pair = {} (n = {} vs {})",
        args.pair, pair.n_true.0, pair.n_true.1
    );
    println!("oracle = {}", kind.name());
    println!("budget = {}", args.budget);
    println!("trials = {}", out.trials);
    println!("correct = {}", out.correct);
    println!("accuracy = {}", fmt_f64(out.accuracy));
    println!("ci95 = [{}, {}]", fmt_f64(out.ci_low), fmt_f64(out.ci_high));
    Ok(())
}

fn run() -> CliResult<()> {
    let cli = Cli::try_parse().map_err(|e| {
        use clap::error::ErrorKind;
        match e.kind() {
            ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                print!("{e}");
                std::process::exit(0);
            }
            _ => CliError::Validation(e.to_string()),
        }
    })?;
    match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Estimate(args) => cmd_estimate(args),
        Command::Experiment(args) => cmd_experiment(args),
        Command::Distinguish(args) => cmd_distinguish(args),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
