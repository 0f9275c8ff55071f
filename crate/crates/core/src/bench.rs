//! Experiment harness: measure audit, passive cross-validation and active
//! learning runs against emulated users, with CSV curves and JSON summaries.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::ahp::WeightVector;
use crate::collection::{PatternCollection, ScalingMode};
use crate::dataset::TransactionDb;
use crate::error::{Error, Result};
use crate::learner::{rank_by_gw, run_passive, ActiveLearner, LearnerConfig, QueryStrategy};
use crate::measures::MeasureId;
use crate::mining::{generate_rules, mine_frequent_bounded, RuleConfig};
use crate::oracles::{EmulatorSpec, FeedbackOracle, WithMistakes, WithSwap};
use crate::ranking::{recall_at_percent, spearman, PatternId, RankAssignment};
use crate::synthetic::{self, DbConfig};

/// Where the patterns come from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DataSource {
    /// A FIMI transaction file, mined into rules.
    Fimi { path: PathBuf },
    /// A generated transaction database, mined into rules.
    SyntheticDb(DbConfig),
    /// Uniform random measure values; no rules, so no χ² emulator.
    SyntheticMeasures { patterns: usize, measures: usize },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Passive,
    #[default]
    Active,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub data: DataSource,
    /// Absolute count when ≥ 1, otherwise a fraction of the transactions
    /// (rounded up).
    #[serde(default = "default_minsup")]
    pub minsup: f64,
    #[serde(default)]
    pub minconf: f64,
    /// Longest frequent itemset to mine.
    #[serde(default)]
    pub max_itemset: Option<usize>,
    #[serde(default = "default_max_head")]
    pub max_head: Option<usize>,
    #[serde(default = "default_measures")]
    pub measures: Vec<MeasureId>,
    #[serde(default)]
    pub scaling: ScalingMode,
    #[serde(default)]
    pub mode: Mode,
    pub emulator: EmulatorSpec,
    #[serde(default = "default_folds")]
    pub folds: usize,
    /// Share of patterns used for training (passive) or as the query pool
    /// (active); the rest is held out for evaluation.
    #[serde(default = "default_train_fraction")]
    pub train_fraction: f64,
    #[serde(default = "default_theta")]
    pub theta: usize,
    #[serde(default = "default_queries")]
    pub max_queries: usize,
    #[serde(default)]
    pub strategy: QueryStrategy,
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    pub seed: u64,
    /// Probability of reversing each answer.
    #[serde(default)]
    pub err: f64,
    /// Switch to `swap_to` after this many answers.
    #[serde(default)]
    pub swap_after: Option<usize>,
    #[serde(default)]
    pub swap_to: Option<EmulatorSpec>,
    #[serde(default)]
    pub output: Option<PathBuf>,
}

fn default_minsup() -> f64 {
    0.05
}
fn default_max_head() -> Option<usize> {
    Some(2)
}
fn default_measures() -> Vec<MeasureId> {
    MeasureId::ALL.to_vec()
}
fn default_folds() -> usize {
    5
}
fn default_train_fraction() -> f64 {
    0.2
}
fn default_theta() -> usize {
    1000
}
fn default_queries() -> usize {
    20
}
fn default_repeats() -> usize {
    10
}

impl ExperimentConfig {
    /// Defaults for everything but the data, the emulator and the seed.
    pub fn new(data: DataSource, emulator: EmulatorSpec, seed: u64) -> Self {
        ExperimentConfig {
            data,
            minsup: default_minsup(),
            minconf: 0.0,
            max_itemset: None,
            max_head: default_max_head(),
            measures: default_measures(),
            scaling: ScalingMode::default(),
            mode: Mode::default(),
            emulator,
            folds: default_folds(),
            train_fraction: default_train_fraction(),
            theta: default_theta(),
            max_queries: default_queries(),
            strategy: QueryStrategy::default(),
            repeats: default_repeats(),
            seed,
            err: 0.0,
            swap_after: None,
            swap_to: None,
            output: None,
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_reader(File::open(path)?)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.minsup > 0.0 && self.minsup.is_finite()) {
            return Err(Error::arg("minsup must be positive"));
        }
        if !(0.0..=1.0).contains(&self.minconf) {
            return Err(Error::arg("minconf must lie in [0,1]"));
        }
        if self.measures.len() < 2 {
            return Err(Error::arg("at least two measures are required"));
        }
        if self.folds < 2 {
            return Err(Error::arg("folds must be at least 2"));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::arg("train_fraction must lie in (0,1)"));
        }
        if self.repeats < 1 {
            return Err(Error::arg("repeats must be at least 1"));
        }
        if !(0.0..=1.0).contains(&self.err) {
            return Err(Error::arg("err must lie in [0,1]"));
        }
        if self.swap_after.is_some() != self.swap_to.is_some() {
            return Err(Error::arg("swap_after and swap_to go together"));
        }
        LearnerConfig {
            theta: self.theta,
            max_queries: self.max_queries,
            seed: self.seed,
            strategy: self.strategy,
        }
        .validate()
    }

    /// Absolute support threshold for a database of `n` transactions.
    pub fn absolute_minsup(&self, n: usize) -> usize {
        if self.minsup >= 1.0 {
            self.minsup.ceil() as usize
        } else {
            ((self.minsup * n as f64).ceil() as usize).max(1)
        }
    }

    fn rule_config(&self) -> RuleConfig {
        RuleConfig {
            minconf: self.minconf,
            max_head: self.max_head,
            allow_empty_body: false,
        }
    }
}

/// A loaded pattern collection and, when mined, its database.
#[derive(Clone, Debug)]
pub struct Workload {
    pub db: Option<Arc<TransactionDb>>,
    pub collection: PatternCollection,
}

impl Workload {
    pub fn load(config: &ExperimentConfig) -> Result<Self> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let db = match &config.data {
            DataSource::Fimi { path } => TransactionDb::open(path)?,
            DataSource::SyntheticDb(c) => synthetic::transaction_db(c, &mut rng)?,
            DataSource::SyntheticMeasures { patterns, measures } => {
                return Ok(Workload {
                    db: None,
                    collection: synthetic::measure_collection(*patterns, *measures, &mut rng)?,
                });
            }
        };
        Self::mine(db, config)
    }

    pub fn mine(db: TransactionDb, config: &ExperimentConfig) -> Result<Self> {
        let minsup = config.absolute_minsup(db.len());
        let frequents = mine_frequent_bounded(&db, minsup, config.max_itemset)?;
        let rules = generate_rules(&frequents, &db, &config.rule_config())?;
        if rules.is_empty() {
            return Err(Error::arg(format!(
                "no rules at minsup {minsup} and minconf {}; lower the thresholds",
                config.minconf
            )));
        }
        let collection = PatternCollection::from_rules(&db, &rules, &config.measures, config.scaling)?;
        Ok(Workload {
            db: Some(Arc::new(db)),
            collection,
        })
    }

    fn oracle(&self, spec: &EmulatorSpec, offset: u64) -> Result<Box<dyn FeedbackOracle + Send>> {
        reseed(spec, offset).build(self.collection.measure_count(), self.db.clone())
    }
}

/// Shifts an emulator's seed so repeats draw different targets.
fn reseed(spec: &EmulatorSpec, offset: u64) -> EmulatorSpec {
    match spec.clone() {
        EmulatorSpec::Rand { seed, weights } => EmulatorSpec::Rand {
            seed: seed.wrapping_add(offset),
            weights,
        },
        EmulatorSpec::Lex { seed, order } => EmulatorSpec::Lex {
            seed: seed.wrapping_add(offset),
            order,
        },
        EmulatorSpec::Chi => EmulatorSpec::Chi,
    }
}

/// The emulator's full order over `ids`.
fn target_ranks(oracle: &mut dyn FeedbackOracle, collection: &PatternCollection, ids: &[PatternId]) -> Result<RankAssignment> {
    let ranking = oracle
        .rank(collection, ids)?
        .ok_or_else(|| Error::arg("emulator declined to rank the evaluation set"))?;
    Ok(ranking.to_ranks())
}

fn learned_ranks(collection: &PatternCollection, ids: &[PatternId], weights: &WeightVector) -> Result<RankAssignment> {
    let records = ids.iter().map(|id| collection.require(*id)).collect::<Result<Vec<_>>>()?;
    let scored = rank_by_gw(records, weights)?;
    RankAssignment::from_order(&scored.into_iter().map(|(id, _)| id).collect::<Vec<_>>())
}

/// Per-measure Spearman ρ against the emulator over every pattern, plus the
/// virtual best measure (their maximum).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub measures: Vec<String>,
    pub rho: Vec<f64>,
    pub vbm: f64,
    pub patterns: usize,
}

pub fn run_measure_audit(config: &ExperimentConfig, workload: &Workload) -> Result<AuditReport> {
    let c = &workload.collection;
    let ids = c.ids();
    let mut oracle = workload.oracle(&config.emulator, config.seed)?;
    let target = target_ranks(&mut *oracle, c, &ids)?;
    let rho = (0..c.measure_count())
        .map(|i| {
            let scores: Vec<(PatternId, f64)> = c.records().iter().map(|r| (r.id, r.measures[i])).collect();
            spearman(&RankAssignment::rank_by(&scores, true)?, &target)
        })
        .collect::<Result<Vec<_>>>()?;
    let vbm = rho.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(AuditReport {
        measures: c.measure_names().to_vec(),
        rho,
        vbm,
        patterns: c.len(),
    })
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub rho: f64,
    pub recall_10: f64,
    pub recall_1: f64,
    /// Learner-side time for the whole run.
    pub learn_ms: f64,
    pub mean_latency_ms: f64,
    pub max_latency_ms: f64,
}

impl RunMetrics {
    fn evaluate(learned: &RankAssignment, target: &RankAssignment) -> Result<Self> {
        Ok(RunMetrics {
            rho: spearman(learned, target)?,
            recall_10: recall_at_percent(learned, target, 10.0)?,
            recall_1: recall_at_percent(learned, target, 1.0)?,
            ..RunMetrics::default()
        })
    }

    fn with_timing(mut self, total: Duration, latencies: &[Duration]) -> Self {
        self.learn_ms = ms(total);
        if !latencies.is_empty() {
            self.mean_latency_ms = latencies.iter().map(|d| ms(*d)).sum::<f64>() / latencies.len() as f64;
            self.max_latency_ms = latencies.iter().map(|d| ms(*d)).fold(0.0, f64::max);
        }
        self
    }
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub runs: Vec<RunMetrics>,
    pub mean: RunMetrics,
}

impl MetricsReport {
    pub fn from_runs(runs: Vec<RunMetrics>) -> Self {
        let n = runs.len().max(1) as f64;
        let avg = |f: fn(&RunMetrics) -> f64| runs.iter().map(f).sum::<f64>() / n;
        let mean = RunMetrics {
            rho: avg(|r| r.rho),
            recall_10: avg(|r| r.recall_10),
            recall_1: avg(|r| r.recall_1),
            learn_ms: avg(|r| r.learn_ms),
            mean_latency_ms: avg(|r| r.mean_latency_ms),
            max_latency_ms: avg(|r| r.max_latency_ms),
        };
        MetricsReport { runs, mean }
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        serde_json::to_writer_pretty(&mut out, self)?;
        out.flush()?;
        Ok(())
    }
}

/// Random train/test split of the collection's ids.
fn split(ids: &[PatternId], train_fraction: f64, rng: &mut ChaCha8Rng) -> Result<(Vec<PatternId>, Vec<PatternId>)> {
    let mut shuffled = ids.to_vec();
    shuffled.shuffle(rng);
    let n_train = (train_fraction * ids.len() as f64).round() as usize;
    if n_train < 2 || ids.len() - n_train < 2 {
        return Err(Error::arg(format!(
            "{} patterns are too few for a {train_fraction} split",
            ids.len()
        )));
    }
    let test = shuffled.split_off(n_train);
    Ok((shuffled, test))
}

/// For each fold: a random `train_fraction` of the patterns is ranked by the
/// emulator as a single ranking, weights are learned from it, and the learned
/// order is scored against the emulator on the remaining patterns.
pub fn run_passive_cv(config: &ExperimentConfig, workload: &Workload) -> Result<MetricsReport> {
    config.validate()?;
    let c = &workload.collection;
    let ids = c.ids();
    let mut runs = Vec::with_capacity(config.folds);
    for fold in 0..config.folds as u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(fold));
        let (train, test) = split(&ids, config.train_fraction, &mut rng)?;
        let mut oracle = workload.oracle(&config.emulator, fold)?;
        let feedback = oracle
            .rank(c, &train)?
            .ok_or_else(|| Error::arg("emulator declined to rank the training set"))?;
        let started = Instant::now();
        let learned = run_passive(&[feedback], c)?;
        let elapsed = started.elapsed();
        let target = target_ranks(&mut *oracle, c, &test)?;
        let metrics = RunMetrics::evaluate(&learned_ranks(c, &test, &learned.weights)?, &target)?;
        runs.push(metrics.with_timing(elapsed, &[]));
    }
    Ok(MetricsReport::from_runs(runs))
}

/// Held-out metrics after `iteration` answers (0 = uniform weights).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub repeat: usize,
    pub iteration: usize,
    pub rho: f64,
    pub recall_10: f64,
    pub recall_1: f64,
    pub latency_ms: f64,
    pub weights: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ActiveReport {
    pub summary: MetricsReport,
    pub curves: Vec<CurvePoint>,
}

impl ActiveReport {
    /// Mean held-out ρ over repeats after `iteration` answers.
    pub fn mean_rho_at(&self, iteration: usize) -> Option<f64> {
        let pts: Vec<f64> = self
            .curves
            .iter()
            .filter(|p| p.iteration == iteration)
            .map(|p| p.rho)
            .collect();
        (!pts.is_empty()).then(|| pts.iter().sum::<f64>() / pts.len() as f64)
    }

    pub fn write_curves_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["repeat", "iteration", "rho", "recall_10", "recall_1", "latency_ms", "weights"])?;
        for p in &self.curves {
            let weights = p.weights.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("|");
            w.write_record([
                p.repeat.to_string(),
                p.iteration.to_string(),
                p.rho.to_string(),
                p.recall_10.to_string(),
                p.recall_1.to_string(),
                p.latency_ms.to_string(),
                weights,
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// `<stem>.json` summary and `<stem>.csv` curves.
    pub fn write(&self, stem: impl AsRef<Path>) -> Result<()> {
        let stem = stem.as_ref();
        self.summary.write_json(stem.with_extension("json"))?;
        self.write_curves_csv(BufWriter::new(File::create(stem.with_extension("csv"))?))
    }
}

/// Each repeat splits the patterns into a query pool and a held-out set,
/// runs the active learner on the pool against the configured emulator
/// (optionally with mistakes and a mid-run target switch) and records
/// held-out metrics after every answer. The evaluation target is the clean
/// emulator, or the post-switch one when a switch is configured.
pub fn run_active_experiment(config: &ExperimentConfig, workload: &Workload) -> Result<ActiveReport> {
    config.validate()?;
    let c = &workload.collection;
    let ids = c.ids();
    let mut runs = Vec::with_capacity(config.repeats);
    let mut curves = Vec::new();

    for repeat in 0..config.repeats {
        let run_seed = config.seed.wrapping_add(repeat as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(run_seed);
        let (pool_ids, test) = split(&ids, config.train_fraction, &mut rng)?;
        let pool = c.subset(&pool_ids)?;

        let first = workload.oracle(&config.emulator, run_seed)?;
        let (mut answerer, mut target_oracle): (Box<dyn FeedbackOracle>, Box<dyn FeedbackOracle>) =
            match (&config.swap_after, &config.swap_to) {
                (Some(x), Some(second)) => (
                    Box::new(WithSwap::new(first, workload.oracle(second, run_seed)?, *x)),
                    workload.oracle(second, run_seed)?,
                ),
                _ => (first, workload.oracle(&config.emulator, run_seed)?),
            };
        if config.err > 0.0 {
            answerer = Box::new(WithMistakes::new(answerer, config.err, run_seed ^ 0x5eed)?);
        }
        let target = target_ranks(&mut *target_oracle, c, &test)?;

        let mut learner = ActiveLearner::new(
            LearnerConfig {
                theta: config.theta,
                max_queries: config.max_queries,
                seed: run_seed,
                strategy: config.strategy,
            },
            c.measure_count(),
        )?;
        let mut point = |iteration: usize, weights: &WeightVector, latency: Duration| -> Result<RunMetrics> {
            let m = RunMetrics::evaluate(&learned_ranks(c, &test, weights)?, &target)?;
            curves.push(CurvePoint {
                repeat,
                iteration,
                rho: m.rho,
                recall_10: m.recall_10,
                recall_1: m.recall_1,
                latency_ms: ms(latency),
                weights: weights.as_slice().to_vec(),
            });
            Ok(m)
        };
        let mut last = point(0, learner.weights(), Duration::ZERO)?;
        let mut latencies = Vec::with_capacity(config.max_queries);
        loop {
            let started = Instant::now();
            let Some(query) = learner.next_query(&pool)? else {
                break;
            };
            let mut spent = started.elapsed();
            let Some(answer) = answerer.rank(&pool, &[query.0, query.1])? else {
                break;
            };
            let started = Instant::now();
            learner.answer(&pool, answer)?;
            spent += started.elapsed();
            latencies.push(spent);
            last = point(learner.iteration(), learner.weights(), spent)?;
        }
        let total = latencies.iter().sum();
        runs.push(last.with_timing(total, &latencies));
    }
    Ok(ActiveReport {
        summary: MetricsReport::from_runs(runs),
        curves,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn measures_config(emulator: EmulatorSpec) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new(
            DataSource::SyntheticMeasures { patterns: 600, measures: 4 },
            emulator,
            17,
        );
        cfg.repeats = 3;
        cfg.theta = 100;
        cfg.max_queries = 8;
        cfg
    }

    fn small_db_config() -> ExperimentConfig {
        let db = DbConfig {
            transactions: 400,
            items: 12,
            planted: 3,
            ..DbConfig::default()
        };
        let mut cfg = ExperimentConfig::new(DataSource::SyntheticDb(db), EmulatorSpec::Chi, 5);
        cfg.minsup = 0.05;
        cfg.max_itemset = Some(3);
        cfg.repeats = 2;
        cfg.theta = 50;
        cfg.max_queries = 5;
        cfg
    }

    #[test]
    fn config_json_round_trip() {
        let cfg = small_db_config();
        let text = serde_json::to_string(&cfg).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(cfg, back);

        let minimal = r#"{"data":{"kind":"fimi","path":"x.dat"},"emulator":{"kind":"rand","seed":1},"seed":3}"#;
        let cfg: ExperimentConfig = serde_json::from_str(minimal).unwrap();
        assert_eq!(cfg.folds, 5);
        assert_eq!(cfg.theta, 1000);
        assert!(cfg.validate().is_ok());
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"bogus":1}"#).is_err());
    }

    #[test]
    fn config_invariants() {
        let base = measures_config(EmulatorSpec::Rand { seed: 1, weights: None });
        for bad in [
            ExperimentConfig { folds: 1, ..base.clone() },
            ExperimentConfig { repeats: 0, ..base.clone() },
            ExperimentConfig { train_fraction: 1.0, ..base.clone() },
            ExperimentConfig { max_queries: 0, ..base.clone() },
            ExperimentConfig { swap_after: Some(3), ..base.clone() },
        ] {
            assert!(bad.validate().is_err());
        }
    }

    #[test]
    fn relative_minsup_rounds_up() {
        let mut cfg = small_db_config();
        cfg.minsup = 0.05;
        assert_eq!(cfg.absolute_minsup(410), 21);
        cfg.minsup = 7.0;
        assert_eq!(cfg.absolute_minsup(410), 7);
    }

    #[test]
    fn no_rules_is_an_error() {
        let mut cfg = small_db_config();
        cfg.minsup = 0.99;
        let err = Workload::load(&cfg).unwrap_err().to_string();
        assert!(err.contains("lower the thresholds"), "{err}");
    }

    #[test]
    fn one_hot_audit() {
        let cfg = measures_config(EmulatorSpec::Rand {
            seed: 0,
            weights: Some(vec![0.0, 0.0, 1.0, 0.0]),
        });
        let w = Workload::load(&cfg).unwrap();
        let report = run_measure_audit(&cfg, &w).unwrap();
        assert!((report.rho[2] - 1.0).abs() < 1e-12);
        assert!((report.vbm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn chi_audit_in_range() {
        let cfg = small_db_config();
        let w = Workload::load(&cfg).unwrap();
        let report = run_measure_audit(&cfg, &w).unwrap();
        assert_eq!(report.rho.len(), 7);
        for r in &report.rho {
            assert!(r.is_finite() && (-1.0..=1.0).contains(r));
            assert!(report.vbm >= *r);
        }
    }

    #[test]
    fn passive_cv_recovers_linear_target() {
        let mut cfg = measures_config(EmulatorSpec::Rand { seed: 2, weights: None });
        cfg.mode = Mode::Passive;
        let w = Workload::load(&cfg).unwrap();
        let report = run_passive_cv(&cfg, &w).unwrap();
        assert_eq!(report.runs.len(), 5);
        assert!(report.mean.rho > 0.8, "{}", report.mean.rho);
        let again = run_passive_cv(&cfg, &w).unwrap();
        assert_eq!(
            report.runs.iter().map(|r| r.rho).collect::<Vec<_>>(),
            again.runs.iter().map(|r| r.rho).collect::<Vec<_>>()
        );
        let mean: f64 = report.runs.iter().map(|r| r.recall_10).sum::<f64>() / 5.0;
        assert!((mean - report.mean.recall_10).abs() < 1e-12);
    }

    #[test]
    fn active_curves_and_determinism() {
        let cfg = measures_config(EmulatorSpec::Rand { seed: 3, weights: None });
        let w = Workload::load(&cfg).unwrap();
        let a = run_active_experiment(&cfg, &w).unwrap();
        let b = run_active_experiment(&cfg, &w).unwrap();
        assert_eq!(a.curves.len(), 3 * 9);
        let strip = |r: &ActiveReport| r.curves.iter().map(|p| (p.rho, p.weights.clone())).collect::<Vec<_>>();
        assert_eq!(strip(&a), strip(&b));
        for p in &a.curves {
            assert!((-1.0..=1.0).contains(&p.rho));
            assert!((0.0..=1.0).contains(&p.recall_10) && (0.0..=1.0).contains(&p.recall_1));
        }
        let final_mean = a.mean_rho_at(8).unwrap();
        assert!((final_mean - a.summary.mean.rho).abs() < 1e-12);

        let mut buf = Vec::new();
        a.write_curves_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 28);
    }

    #[test]
    fn active_with_mistakes_and_swap_runs() {
        let mut cfg = small_db_config();
        cfg.err = 0.3;
        cfg.swap_after = Some(2);
        cfg.swap_to = Some(EmulatorSpec::Rand { seed: 9, weights: None });
        let w = Workload::load(&cfg).unwrap();
        let report = run_active_experiment(&cfg, &w).unwrap();
        assert_eq!(report.summary.runs.len(), 2);
    }
}
