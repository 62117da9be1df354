use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wordsim::harness::{
    run_experiment, save_csv, save_json, save_scatter, write_csv, write_scatter, FeatureTable, OutputFormat,
    WorkbenchConfig,
};
use wordsim::taxonomy::{compute_ic, load_counts_csv, load_taxonomy, word_similarities, TaxonomyFormat};
use wordsim::vsm::{
    build_dtm, read_corpus, train_lsa, train_sgns, write_vec_file, LsaConfig, Segmentation, SgnsConfig, SgnsMode,
    Weighting,
};
use wordsim::{Error, Metric, Pos, Result};

#[derive(Parser)]
#[command(name = "wordsim", version, about = "Word-similarity modeling workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Score a word pair with the taxonomy metrics.
    TaxonomySim(TaxonomySim),
    /// Train LSA vectors and write them as a vector file.
    TrainLsa(TrainLsa),
    /// Train skip-gram (or CBOW) vectors and write them as a vector file.
    TrainSgns(TrainSgns),
    /// Write every available pair feature of a config's dataset as CSV.
    Features(Features),
    /// Run the experiment described by a config file.
    Run(Run),
    /// Re-render a saved JSON report.
    Report(Report),
}

#[derive(Args)]
struct TaxonomySim {
    /// Taxonomy file (tsv) or WordNet dict/ directory (wndb).
    #[arg(long)]
    taxonomy: PathBuf,
    #[arg(long, value_enum, default_value_t = TaxFormat::Tsv)]
    format: TaxFormat,
    /// `lemma,count` CSV; enables res, jcn and lin.
    #[arg(long)]
    counts: Option<PathBuf>,
    /// Metrics to report, e.g. `path,lch`; defaults to all available.
    #[arg(long, value_delimiter = ',')]
    metric: Vec<String>,
    #[arg(long, default_value = "n")]
    pos: String,
    word1: String,
    word2: String,
}

#[derive(Clone, Copy, ValueEnum)]
enum TaxFormat {
    Tsv,
    Wndb,
}

#[derive(Clone, Copy, ValueEnum)]
enum Segment {
    Blocks,
    Lines,
    PerFile,
}

impl From<Segment> for Segmentation {
    fn from(s: Segment) -> Self {
        match s {
            Segment::Blocks => Segmentation::Blocks,
            Segment::Lines => Segmentation::Lines,
            Segment::PerFile => Segmentation::PerFile,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Weight {
    Raw,
    TfIdf,
    LogEntropy,
}

#[derive(Args)]
struct TrainLsa {
    /// Text file or directory of text files.
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    min_count: usize,
    #[arg(long, value_enum, default_value_t = Weight::Raw)]
    weighting: Weight,
    #[arg(long, value_enum, default_value_t = Segment::Blocks)]
    segmentation: Segment,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Skipgram,
    Cbow,
}

#[derive(Args)]
struct TrainSgns {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 100)]
    dim: usize,
    #[arg(long, default_value_t = 5)]
    window: usize,
    #[arg(long, default_value_t = 5)]
    negatives: usize,
    #[arg(long, default_value_t = 5)]
    epochs: usize,
    #[arg(long, default_value_t = 0.025)]
    learning_rate: f64,
    #[arg(long, default_value_t = 5)]
    min_count: usize,
    #[arg(long, value_enum, default_value_t = Mode::Skipgram)]
    mode: Mode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Segment::Lines)]
    segmentation: Segment,
}

#[derive(Args)]
struct Features {
    #[arg(long)]
    config: PathBuf,
    /// Output CSV; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct Run {
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config's output directory.
    #[arg(long)]
    out_dir: Option<PathBuf>,
    /// Overrides the config's iteration count.
    #[arg(long)]
    iterations: Option<usize>,
}

#[derive(Args)]
struct Report {
    /// A JSON report written by `run`.
    input: PathBuf,
    /// Emit `predicted,observed` rows for this model instead of the summary.
    #[arg(long)]
    scatter: Option<u32>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::TaxonomySim(a) => taxonomy_sim(a),
        Command::TrainLsa(a) => train_lsa_cmd(a),
        Command::TrainSgns(a) => train_sgns_cmd(a),
        Command::Features(a) => features(a),
        Command::Run(a) => run(a),
        Command::Report(a) => report(a),
    }
}

fn taxonomy_sim(a: TaxonomySim) -> Result<()> {
    let format = match a.format {
        TaxFormat::Tsv => TaxonomyFormat::Tsv,
        TaxFormat::Wndb => TaxonomyFormat::Wndb,
    };
    let t = load_taxonomy(&a.taxonomy, format)?;
    let ic = a.counts.map(|c| load_counts_csv(c).and_then(|c| compute_ic(&t, &c))).transpose()?;
    let metrics: Vec<Metric> = if a.metric.is_empty() {
        Metric::ALL
            .into_iter()
            .filter(|m| !m.needs_ic() || ic.is_some())
            .collect()
    } else {
        a.metric.iter().map(|m| m.parse()).collect::<Result<_>>()?
    };
    let pos: Pos = a.pos.parse()?;
    let scores = word_similarities(&metrics, &t, &a.word1, &a.word2, pos, ic.as_ref())?;
    let mut out = io::stdout().lock();
    for s in scores {
        writeln!(out, "{}\t{}", s.metric, s.value).map_err(|e| Error::io("<stdout>", e))?;
    }
    Ok(())
}

fn train_lsa_cmd(a: TrainLsa) -> Result<()> {
    let docs = read_corpus(&a.corpus, a.segmentation.into())?;
    let dtm = build_dtm(&docs, a.min_count)?;
    let mut config = LsaConfig::new(a.dim, a.seed);
    config.weighting = match a.weighting {
        Weight::Raw => Weighting::Raw,
        Weight::TfIdf => Weighting::TfIdf,
        Weight::LogEntropy => Weighting::LogEntropy,
    };
    let model = train_lsa(&dtm, &config)?;
    write_vec_file(&model.space, &a.out)?;
    log::info!("{} words × {} dimensions written to {}", model.space.len(), a.dim, a.out.display());
    Ok(())
}

fn train_sgns_cmd(a: TrainSgns) -> Result<()> {
    let corpus = read_corpus(&a.corpus, a.segmentation.into())?;
    let mut config = SgnsConfig::new(a.seed);
    config.dim = a.dim;
    config.window = a.window;
    config.negatives = a.negatives;
    config.epochs = a.epochs;
    config.learning_rate = a.learning_rate;
    config.min_count = a.min_count;
    config.mode = match a.mode {
        Mode::Skipgram => SgnsMode::Skipgram,
        Mode::Cbow => SgnsMode::Cbow,
    };
    let space = train_sgns(&corpus, &config)?;
    write_vec_file(&space, &a.out)?;
    log::info!("{} words written to {}", space.len(), a.out.display());
    Ok(())
}

fn with_output(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let mut buf = Vec::new();
            f(&mut buf)?;
            std::fs::write(p, buf).map_err(|e| Error::io(p, e))
        }
        None => f(&mut io::stdout().lock()),
    }
}

fn features(a: Features) -> Result<()> {
    let config = WorkbenchConfig::load(&a.config)?;
    let dataset = config.load_dataset()?;
    let providers = config.load_providers(&dataset)?;
    let table = FeatureTable::compute(&dataset, &providers, config.difference);
    with_output(a.out.as_deref(), |w| table.write_csv(&dataset, w))
}

fn run(a: Run) -> Result<()> {
    let mut config = WorkbenchConfig::load(&a.config)?;
    if let Some(dir) = a.out_dir {
        config.output.dir = dir;
    }
    if let Some(n) = a.iterations {
        config.experiment.iterations = n;
    }
    let dataset = config.load_dataset()?;
    let providers = config.load_providers(&dataset)?;
    let specs = config.model_specs(&providers.availability())?;
    let table = FeatureTable::compute(&dataset, &providers, config.difference);
    let mut report = run_experiment(&table, &specs, &config.experiment)?;
    report.dataset = config
        .dataset
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();

    let dir = &config.output.dir;
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for format in &config.output.formats {
        let path = match format {
            OutputFormat::Csv => {
                let p = dir.join("report.csv");
                save_csv(&report, &p)?;
                p
            }
            OutputFormat::Json => {
                let p = dir.join("report.json");
                save_json(&report, &p)?;
                p
            }
        };
        eprintln!("wrote {}", path.display());
    }
    for &id in &config.output.scatter {
        let p = dir.join(format!("scatter_{id}.csv"));
        match save_scatter(&report, id, &p) {
            Ok(()) => eprintln!("wrote {}", p.display()),
            Err(e) => log::warn!("scatter for model {id}: {e}"),
        }
    }
    let ok = report.models.iter().filter(|m| m.status.label() == "ok").count();
    eprintln!("{ok} of {} models evaluated", report.models.len());
    Ok(())
}

fn report(a: Report) -> Result<()> {
    let report = wordsim::harness::load_json(&a.input)?;
    with_output(a.out.as_deref(), |w| match a.scatter {
        Some(id) => write_scatter(&report, id, w),
        None => write_csv(&report, w),
    })
}
