use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use techcx::corpus::{parse_corpus, CsvSchema};
use techcx::evaluate::{self, AgeMode, EvaluationOptions};
use techcx::netgen::{self, NetKind, NetSpec, SyntheticCorpusSpec};
use techcx::pipeline::{self, RunConfig};
use techcx::{Error, Measure, Result, ScoreTable};

#[derive(Parser)]
#[command(name = "techcx", version, about = "Technological complexity measures from patent records")]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "TECHCX_WORKERS")]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a patent CSV into a corpus cache; prints the parse report.
    Ingest {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value = "corpus.bin")]
        out: PathBuf,
    },
    /// Generate synthetic networks or corpora.
    #[command(subcommand)]
    Synth(Synth),
    /// Compute complexity scores into `<out>/scores.csv`.
    Compute(ComputeArgs),
    /// Evaluate a score table against its corpus.
    Report {
        #[arg(long)]
        scores: PathBuf,
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 5)]
        width: i32,
        /// Use age in years (`t - year`) instead of the mean application year.
        #[arg(long)]
        age_in_years: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Star,
    Tree,
    SmallWorld,
    Complete,
    Random,
}

#[derive(Subcommand)]
enum Synth {
    /// Write an edge list, one `u v` pair per line.
    Network {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long, default_value_t = 6)]
        k: usize,
        #[arg(long, default_value_t = 0.05)]
        beta: f64,
        #[arg(long, default_value_t = 3)]
        branching: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a patent CSV from a JSON corpus spec.
    Corpus {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct ComputeArgs {
    /// JSON run configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Comma-separated measures, or `all`.
    #[arg(long, value_delimiter = ',', value_parser = parse_measure)]
    measure: Option<Vec<MeasureArg>>,
    #[arg(long, conflicts_with = "years")]
    window_year: Option<i32>,
    /// Comma-separated anchor years.
    #[arg(long, value_delimiter = ',')]
    years: Option<Vec<i32>>,
    #[arg(long)]
    width: Option<i32>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples_small: Option<usize>,
    #[arg(long)]
    samples_large: Option<usize>,
    #[arg(long)]
    walk_steps: Option<usize>,
    #[arg(long)]
    subnet: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone)]
enum MeasureArg {
    All,
    One(Measure),
}

fn parse_measure(s: &str) -> std::result::Result<MeasureArg, String> {
    if s == "all" {
        return Ok(MeasureArg::All);
    }
    s.parse().map(MeasureArg::One).map_err(|_| format!("valid measures: all, {}", Measure::valid_names()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    }
    match cli.command {
        Command::Ingest { input, out } => ingest(&input, &out),
        Command::Synth(Synth::Network { kind, n, p, k, beta, branching, seed, out }) => {
            let kind = match kind {
                Kind::Star => NetKind::Star,
                Kind::Tree => NetKind::Tree { branching },
                Kind::SmallWorld => NetKind::SmallWorld { k, beta },
                Kind::Complete => NetKind::Complete,
                Kind::Random => NetKind::Random { p: p.unwrap_or_else(|| netgen::matched_probability(n, k as f64)) },
            };
            let g = netgen::generate_network(&NetSpec { kind, n, seed })?;
            let mut w = BufWriter::new(File::create(out)?);
            netgen::write_edge_list(&g, &mut w)?;
            w.flush()?;
            Ok(())
        }
        Command::Synth(Synth::Corpus { spec, out }) => {
            let text = std::fs::read_to_string(&spec)?;
            let spec: SyntheticCorpusSpec =
                serde_json::from_str(&text).map_err(|e| Error::InvalidSpec(format!("{}: {e}", spec.display())))?;
            let corpus = netgen::generate_corpus(&spec)?;
            netgen::write_corpus_csv(&corpus, BufWriter::new(File::create(out)?))
        }
        Command::Compute(args) => compute(args, cli.workers),
        Command::Report { scores, corpus, out, width, age_in_years } => {
            let rows = ScoreTable::read_csv(BufReader::new(File::open(scores)?))?;
            let corpus = pipeline::load_corpus(&corpus)?;
            let table = pipeline::attach_covariates(rows, &corpus, width)?;
            let age = if age_in_years { AgeMode::YearsBeforeWindow } else { AgeMode::MeanYear };
            let report = evaluate::stylized_facts(&table, &EvaluationOptions { age })?;
            evaluate::write_report(&report, &out)
        }
    }
}

fn ingest(input: &Path, out: &Path) -> Result<()> {
    let (corpus, report) = parse_corpus(BufReader::new(File::open(input)?), &CsvSchema::default())?;
    let mut w = BufWriter::new(File::create(out)?);
    corpus.write_cache(&mut w)?;
    w.flush()?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}

fn compute(args: ComputeArgs, workers: Option<usize>) -> Result<()> {
    let mut cfg = match &args.config {
        Some(p) => RunConfig::from_json_file(p)?,
        None => RunConfig::default(),
    };
    if let Some(c) = args.corpus {
        cfg.corpus = Some(c);
    }
    if let Some(ms) = args.measure {
        cfg.measures = if ms.iter().any(|m| matches!(m, MeasureArg::All)) {
            Measure::ALL.to_vec()
        } else {
            ms.into_iter().filter_map(|m| if let MeasureArg::One(m) = m { Some(m) } else { None }).collect()
        };
    }
    if let Some(y) = args.window_year {
        cfg.years = vec![y];
    }
    if let Some(ys) = args.years {
        cfg.years = ys;
    }
    if let Some(w) = args.width {
        cfg.width = w;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if let Some(v) = args.samples_small {
        cfg.sampling.node_sample_small = v;
    }
    if let Some(v) = args.samples_large {
        cfg.sampling.node_sample_large = v;
    }
    if let Some(v) = args.walk_steps {
        cfg.sampling.walk_steps = v;
    }
    if let Some(v) = args.subnet {
        cfg.sampling.subnet_nodes = v;
    }
    if let Some(o) = args.out {
        cfg.out = o;
    }
    if workers.is_some() {
        cfg.workers = workers;
    }

    let path = cfg.corpus.clone().ok_or_else(|| Error::Config("no corpus given (--corpus or config)".into()))?;
    let corpus = pipeline::load_corpus(&path)?;
    let cfg = cfg.resolve(&corpus)?;
    let output = pipeline::run(&corpus, &cfg)?;

    std::fs::create_dir_all(&cfg.out)?;
    pipeline::merge_scores(&cfg.out.join("scores.csv"), &output.table.rows)?;
    write_json(&cfg.out.join("skipped.json"), &output.skipped)?;
    write_json(&cfg.out.join("config.json"), &cfg)?;
    Ok(())
}

fn write_json<T: serde::Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n")?;
    w.flush()?;
    Ok(())
}
