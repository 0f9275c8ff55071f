use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use ahprank::bench::{
    run_active_experiment, run_measure_audit, run_passive_cv, DataSource, ExperimentConfig, Mode, Workload,
};
use ahprank::mining::{mine_frequent_bounded, write_rules_csv};
use ahprank::{
    generate_rules, EmulatorSpec, MeasureId, MinedRule, PatternCollection, QueryStrategy, RuleConfig, ScalingMode,
    TransactionDb,
};
use ahprank_session::AppState;
use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "ahprank", version, about = "Learn a personal pattern ranking from preference feedback")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mine association rules from a FIMI file and write them with their measures.
    Mine(MineArgs),
    /// Correlation of each measure alone with an emulated user.
    Audit(ExperimentArgs),
    /// Cross-validated learning from one complete ranking per fold.
    Passive(ExperimentArgs),
    /// Active learning runs with per-iteration curves.
    Active(ExperimentArgs),
    /// Serve interactive sessions over HTTP.
    Serve(ServeArgs),
}

#[derive(Args)]
struct MiningArgs {
    /// Absolute support when ≥ 1, otherwise a fraction of transactions.
    #[arg(long, default_value_t = 0.05)]
    minsup: f64,
    #[arg(long, default_value_t = 0.0)]
    minconf: f64,
    #[arg(long)]
    max_itemset: Option<usize>,
    #[arg(long, default_value_t = 2)]
    max_head: usize,
    /// Comma-separated measure names; all seven by default.
    #[arg(long, value_delimiter = ',')]
    measures: Option<Vec<MeasureId>>,
    #[arg(long, value_enum, default_value_t = Scaling::Minmax)]
    scaling: Scaling,
}

#[derive(Args)]
struct MineArgs {
    input: PathBuf,
    #[command(flatten)]
    mining: MiningArgs,
    /// Rules CSV; stdout when absent.
    #[arg(long)]
    rules: Option<PathBuf>,
    /// Per-rule measure CSV.
    #[arg(long)]
    measures_out: Option<PathBuf>,
    /// Write scaled rather than raw measure values.
    #[arg(long)]
    scaled: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scaling {
    Minmax,
    Identity,
}

impl From<Scaling> for ScalingMode {
    fn from(s: Scaling) -> Self {
        match s {
            Scaling::Minmax => ScalingMode::Minmax,
            Scaling::Identity => ScalingMode::Identity,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Emulator {
    Rand,
    Lex,
    Chi,
}

impl Emulator {
    fn spec(self, seed: u64) -> EmulatorSpec {
        match self {
            Emulator::Rand => EmulatorSpec::Rand { seed, weights: None },
            Emulator::Lex => EmulatorSpec::Lex { seed, order: None },
            Emulator::Chi => EmulatorSpec::Chi,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    Sbg,
    Random,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Base configuration as JSON; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: u64,
    /// FIMI transaction file.
    #[arg(long, conflicts_with = "synthetic")]
    dataset: Option<PathBuf>,
    /// Random measure table of this many patterns instead of a dataset.
    #[arg(long)]
    synthetic: Option<usize>,
    /// Measure count of the synthetic table.
    #[arg(long, default_value_t = 7)]
    synthetic_measures: usize,
    #[arg(long)]
    minsup: Option<f64>,
    #[arg(long)]
    minconf: Option<f64>,
    #[arg(long)]
    max_itemset: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    measures: Option<Vec<MeasureId>>,
    #[arg(long, value_enum)]
    scaling: Option<Scaling>,
    #[arg(long, value_enum)]
    emulator: Option<Emulator>,
    /// Seed of the emulated user's target.
    #[arg(long, default_value_t = 0)]
    emulator_seed: u64,
    #[arg(long)]
    folds: Option<usize>,
    #[arg(long)]
    train_fraction: Option<f64>,
    #[arg(long)]
    theta: Option<usize>,
    /// Query budget T.
    #[arg(long)]
    queries: Option<usize>,
    #[arg(long, value_enum)]
    strategy: Option<Strategy>,
    #[arg(long)]
    repeats: Option<usize>,
    /// Probability of a reversed answer.
    #[arg(long)]
    err: Option<f64>,
    /// Switch to `--swap-to` after this many answers.
    #[arg(long, requires = "swap_to")]
    swap_after: Option<usize>,
    #[arg(long, value_enum, requires = "swap_after")]
    swap_to: Option<Emulator>,
    /// Output file (audit, passive) or file stem (active).
    #[arg(long)]
    output: Option<PathBuf>,
}

impl ExperimentArgs {
    fn resolve(&self, mode: Mode) -> anyhow::Result<ExperimentConfig> {
        let data = match (&self.dataset, self.synthetic) {
            (Some(path), _) => Some(DataSource::Fimi { path: path.clone() }),
            (None, Some(patterns)) => Some(DataSource::SyntheticMeasures {
                patterns,
                measures: self.synthetic_measures,
            }),
            (None, None) => None,
        };
        let emulator = self.emulator.map(|e| e.spec(self.emulator_seed));
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                serde_json::from_str::<ExperimentConfig>(&text).with_context(|| format!("parsing {}", path.display()))?
            }
            None => {
                let Some(data) = data.clone() else {
                    bail!("give --config, --dataset or --synthetic");
                };
                ExperimentConfig::new(data, emulator.clone().unwrap_or(Emulator::Rand.spec(self.emulator_seed)), self.seed)
            }
        };
        cfg.seed = self.seed;
        cfg.mode = mode;
        if let Some(d) = data {
            cfg.data = d;
        }
        if let Some(e) = emulator {
            cfg.emulator = e;
        }
        macro_rules! set {
            ($($field:ident <- $value:expr),* $(,)?) => {
                $(if let Some(v) = $value { cfg.$field = v; })*
            };
        }
        set! {
            minsup <- self.minsup,
            minconf <- self.minconf,
            measures <- self.measures.clone(),
            scaling <- self.scaling.map(ScalingMode::from),
            folds <- self.folds,
            train_fraction <- self.train_fraction,
            theta <- self.theta,
            max_queries <- self.queries,
            repeats <- self.repeats,
            err <- self.err,
            strategy <- self.strategy.map(|s| match s {
                Strategy::Sbg => QueryStrategy::Sbg,
                Strategy::Random => QueryStrategy::Random,
            }),
        }
        if self.max_itemset.is_some() {
            cfg.max_itemset = self.max_itemset;
        }
        if let (Some(x), Some(to)) = (self.swap_after, self.swap_to) {
            cfg.swap_after = Some(x);
            cfg.swap_to = Some(to.spec(self.emulator_seed.wrapping_add(1)));
        }
        if self.output.is_some() {
            cfg.output = self.output.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Args)]
struct ServeArgs {
    /// FIMI transaction files; each becomes a dataset named after its file stem.
    #[arg(long = "dataset")]
    datasets: Vec<PathBuf>,
    /// Also offer a random measure table of this many patterns as "synthetic".
    #[arg(long)]
    synthetic: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    mining: MiningArgs,
    #[arg(long, default_value = "127.0.0.1:8080")]
    addr: SocketAddr,
    /// Directory of UI assets served at `/`.
    #[arg(long)]
    assets: Option<PathBuf>,
    /// Where finished sessions are saved as JSON.
    #[arg(long)]
    snapshots: Option<PathBuf>,
}

impl MiningArgs {
    fn absolute_minsup(&self, n: usize) -> usize {
        if self.minsup >= 1.0 {
            self.minsup.ceil() as usize
        } else {
            ((self.minsup * n as f64).ceil() as usize).max(1)
        }
    }

    fn rules(&self, db: &TransactionDb) -> anyhow::Result<(usize, Vec<MinedRule>)> {
        let minsup = self.absolute_minsup(db.len());
        let frequent = mine_frequent_bounded(db, minsup, self.max_itemset)?;
        let rules = generate_rules(
            &frequent,
            db,
            &RuleConfig {
                minconf: self.minconf,
                max_head: Some(self.max_head),
                allow_empty_body: false,
            },
        )?;
        eprintln!(
            "{} transactions, {} frequent itemsets, {} rules (minsup {minsup})",
            db.len(),
            frequent.len(),
            rules.len()
        );
        Ok((minsup, rules))
    }

    fn collection(&self, db: &TransactionDb, rules: &[MinedRule], minsup: usize) -> anyhow::Result<PatternCollection> {
        if rules.is_empty() {
            bail!("no rules at minsup {minsup} and minconf {}; lower the thresholds", self.minconf);
        }
        let measures = self.measures.clone().unwrap_or_else(|| MeasureId::ALL.to_vec());
        Ok(PatternCollection::from_rules(db, rules, &measures, self.scaling.into())?)
    }
}

fn create(path: &PathBuf) -> anyhow::Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).with_context(|| format!("creating {}", path.display()))?))
}

fn mine(args: MineArgs) -> anyhow::Result<()> {
    let db = TransactionDb::open(&args.input).with_context(|| format!("reading {}", args.input.display()))?;
    let (minsup, rules) = args.mining.rules(&db)?;
    match &args.rules {
        Some(path) => write_rules_csv(&rules, create(path)?)?,
        None => write_rules_csv(&rules, io::stdout().lock())?,
    }
    if let Some(path) = &args.measures_out {
        let c = args.mining.collection(&db, &rules, minsup)?;
        c.write_measures_csv(create(path)?, args.scaled)?;
    }
    Ok(())
}

fn write_json<T: serde::Serialize>(value: &T, path: Option<&PathBuf>) -> anyhow::Result<()> {
    match path {
        Some(p) => {
            let mut out = create(p)?;
            serde_json::to_writer_pretty(&mut out, value)?;
            out.flush()?;
        }
        None => println!("{}", serde_json::to_string_pretty(value)?),
    }
    Ok(())
}

fn main() -> anyhow::Result<()> {
    match Cli::parse().command {
        Command::Mine(args) => mine(args),
        Command::Audit(args) => {
            let cfg = args.resolve(Mode::Passive)?;
            let report = run_measure_audit(&cfg, &Workload::load(&cfg)?)?;
            for (name, rho) in report.measures.iter().zip(&report.rho) {
                eprintln!("{name:>16} {rho:+.4}");
            }
            eprintln!("{:>16} {:+.4}", "VBM", report.vbm);
            write_json(&report, cfg.output.as_ref())
        }
        Command::Passive(args) => {
            let cfg = args.resolve(Mode::Passive)?;
            let report = run_passive_cv(&cfg, &Workload::load(&cfg)?)?;
            eprintln!("mean rho {:.4} over {} folds", report.mean.rho, report.runs.len());
            write_json(&report, cfg.output.as_ref())
        }
        Command::Active(args) => {
            let cfg = args.resolve(Mode::Active)?;
            let report = run_active_experiment(&cfg, &Workload::load(&cfg)?)?;
            eprintln!(
                "mean rho {:.4} after {} queries, mean latency {:.3} ms",
                report.summary.mean.rho, cfg.max_queries, report.summary.mean.mean_latency_ms
            );
            match &cfg.output {
                Some(stem) => report.write(stem)?,
                None => write_json(&report.summary, None)?,
            }
            Ok(())
        }
        Command::Serve(args) => serve(args),
    }
}

#[tokio::main]
async fn serve(args: ServeArgs) -> anyhow::Result<()> {
    let mut app = AppState::new();
    for path in &args.datasets {
        let db = TransactionDb::open(path).with_context(|| format!("reading {}", path.display()))?;
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "dataset".into());
        let (minsup, rules) = args.mining.rules(&db)?;
        let collection = args.mining.collection(&db, &rules, minsup)?;
        eprintln!("{name}: {} rules", collection.len());
        app = app.with_dataset(name, collection);
    }
    if let Some(patterns) = args.synthetic {
        let data = DataSource::SyntheticMeasures { patterns, measures: 7 };
        let workload = Workload::load(&ExperimentConfig::new(data, Emulator::Rand.spec(0), args.seed))?;
        app = app.with_dataset("synthetic", workload.collection);
    }
    if args.datasets.is_empty() && args.synthetic.is_none() {
        bail!("give at least one --dataset or --synthetic");
    }
    if let Some(dir) = args.snapshots {
        app = app.with_snapshots(dir);
    }
    eprintln!("listening on http://{}", args.addr);
    ahprank_session::serve(args.addr, Arc::new(app), args.assets).await?;
    Ok(())
}
