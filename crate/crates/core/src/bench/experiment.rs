//! Multi-seed training runs and the files they leave behind.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datagen::{generate, Dataset, DatasetSpec};
use crate::engine::{
    fit, EmptyClausePolicy, RealWeightRule, RtmModel, RtmParams, RunReport, Variant, WeightKind,
};
use crate::engine::{DEFAULT_ALPHA, DEFAULT_N_STATES, DEFAULT_SPECIFICITY};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tsetlin::TaInit;

use super::histogram::weight_histogram;
use super::model_file::save_model;
use super::report::clause_report;

fn default_name() -> String {
    "run".into()
}
fn default_s() -> f64 {
    DEFAULT_SPECIFICITY
}
fn default_n_states() -> u32 {
    DEFAULT_N_STATES
}
fn default_alpha() -> f64 {
    DEFAULT_ALPHA
}
fn default_epochs() -> usize {
    200
}
fn default_seeds() -> Vec<u64> {
    vec![0]
}

/// One experiment: a dataset, a machine configuration and a list of seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub dataset: DatasetSpec,
    pub variant: Variant,
    pub m: usize,
    /// Defaults to `m` for plain RTM and `100 m` for weighted variants.
    #[serde(rename = "T", default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<u64>,
    #[serde(default = "default_s")]
    pub s: f64,
    #[serde(rename = "N", default = "default_n_states")]
    pub n_states: u32,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_epochs")]
    pub epochs: usize,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub ta_init: TaInit,
    #[serde(default)]
    pub empty_clause: EmptyClausePolicy,
    #[serde(default)]
    pub decrement_requires_fire: bool,
    #[serde(default)]
    pub real_rule: RealWeightRule,
}

impl ExperimentConfig {
    pub fn new(dataset: DatasetSpec, variant: Variant, m: usize) -> Self {
        ExperimentConfig {
            name: default_name(),
            dataset,
            variant,
            m,
            resolution: None,
            s: default_s(),
            n_states: default_n_states(),
            alpha: default_alpha(),
            epochs: default_epochs(),
            seeds: default_seeds(),
            output_dir: None,
            ta_init: TaInit::default(),
            empty_clause: EmptyClausePolicy::default(),
            decrement_requires_fire: false,
            real_rule: RealWeightRule::default(),
        }
    }

    pub fn with_resolution(mut self, t: u64) -> Self {
        self.resolution = Some(t);
        self
    }

    pub fn with_s(mut self, s: f64) -> Self {
        self.s = s;
        self
    }

    pub fn with_epochs(mut self, epochs: usize) -> Self {
        self.epochs = epochs;
        self
    }

    pub fn with_seeds(mut self, seeds: impl IntoIterator<Item = u64>) -> Self {
        self.seeds = seeds.into_iter().collect();
        self
    }

    pub fn resolution(&self) -> u64 {
        self.resolution
            .unwrap_or_else(|| self.variant.default_resolution(self.m))
    }

    pub fn params<F: Scalar>(&self) -> RtmParams<F> {
        RtmParams {
            variant: self.variant,
            clauses: self.m,
            resolution: self.resolution(),
            specificity: F::from_f64_lossy(self.s),
            n_states: self.n_states,
            alpha: F::from_f64_lossy(self.alpha),
            ta_init: self.ta_init,
            empty_clause: self.empty_clause,
            decrement_requires_fire: self.decrement_requires_fire,
            real_rule: self.real_rule,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.seeds.is_empty() {
            return Err(Error::invalid("at least one seed is required"));
        }
        self.dataset.validate()?;
        self.params::<f64>().validate()
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// One seed's run.
#[derive(Debug, Clone)]
pub struct SeedRun<F: Scalar> {
    pub seed: u64,
    pub report: RunReport<F>,
    pub model: RtmModel<F>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aggregate<F> {
    pub mean_train_mae: F,
    pub mean_test_mae: F,
    pub min_train_mae: F,
    pub min_test_mae: F,
    /// Seed with the lowest final test MAE (ties: lower train MAE, then earlier seed).
    pub best_seed: u64,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome<F: Scalar> {
    pub config: ExperimentConfig,
    pub runs: Vec<SeedRun<F>>,
    pub aggregate: Aggregate<F>,
}

impl<F: Scalar> ExperimentOutcome<F> {
    pub fn best(&self) -> &SeedRun<F> {
        self.runs
            .iter()
            .find(|r| r.seed == self.aggregate.best_seed)
            .expect("best seed is one of the runs")
    }
}

/// Generates the configured dataset, then trains every seed.
pub fn run_experiment<F: Scalar>(cfg: &ExperimentConfig) -> Result<ExperimentOutcome<F>> {
    cfg.validate()?;
    let (train, test) = generate::<F>(&cfg.dataset)?;
    run_experiment_on(cfg, &train, &test)
}

/// Trains every seed of `cfg` on the given data. Seeds run in parallel; the
/// model and training stream of each depend only on its seed.
pub fn run_experiment_on<F: Scalar>(
    cfg: &ExperimentConfig,
    train: &Dataset<F>,
    test: &Dataset<F>,
) -> Result<ExperimentOutcome<F>> {
    cfg.validate()?;
    let params = cfg.params::<F>();
    let runs = cfg
        .seeds
        .par_iter()
        .map(|&seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut model =
                RtmModel::new(params.clone(), train.n_bits(), train.normalizer(), &mut rng)?;
            let report = fit(&mut model, train, test, cfg.epochs, &mut rng)?;
            Ok(SeedRun {
                seed,
                report,
                model,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let aggregate = aggregate(&runs);
    Ok(ExperimentOutcome {
        config: cfg.clone(),
        runs,
        aggregate,
    })
}

fn aggregate<F: Scalar>(runs: &[SeedRun<F>]) -> Aggregate<F> {
    let finals: Vec<_> = runs
        .iter()
        .map(|r| (r.seed, r.report.final_metrics()))
        .collect();
    let n = F::from_usize(finals.len()).expect("seed count fits a float");
    let best = finals
        .iter()
        .min_by(|a, b| {
            a.1.test_mae
                .partial_cmp(&b.1.test_mae)
                .unwrap_or(std::cmp::Ordering::Equal)
                .then(
                    a.1.train_mae
                        .partial_cmp(&b.1.train_mae)
                        .unwrap_or(std::cmp::Ordering::Equal),
                )
        })
        .expect("at least one run");
    Aggregate {
        mean_train_mae: finals.iter().map(|f| f.1.train_mae).sum::<F>() / n,
        mean_test_mae: finals.iter().map(|f| f.1.test_mae).sum::<F>() / n,
        min_train_mae: finals
            .iter()
            .map(|f| f.1.train_mae)
            .fold(F::infinity(), F::min),
        min_test_mae: finals
            .iter()
            .map(|f| f.1.test_mae)
            .fold(F::infinity(), F::min),
        best_seed: best.0,
    }
}

/// `seed,epoch,split,mae` for every seed, epoch 0 being the untrained model.
pub fn epoch_metrics_csv<F: Scalar>(outcome: &ExperimentOutcome<F>) -> String {
    let mut out = String::from("seed,epoch,split,mae\n");
    for run in &outcome.runs {
        for e in run.report.curve() {
            writeln!(out, "{},{},train,{}", run.seed, e.epoch, e.train_mae).unwrap();
            writeln!(out, "{},{},test,{}", run.seed, e.epoch, e.test_mae).unwrap();
        }
    }
    out
}

/// One row per seed plus an `aggregate` row holding means and minima.
pub fn final_summary_csv<F: Scalar>(outcome: &ExperimentOutcome<F>) -> String {
    let mut out = String::from("run,train_mae,test_mae,min_train_mae,min_test_mae\n");
    for run in &outcome.runs {
        let f = run.report.final_metrics();
        writeln!(out, "{},{},{},,", run.seed, f.train_mae, f.test_mae).unwrap();
    }
    let a = &outcome.aggregate;
    writeln!(
        out,
        "aggregate,{},{},{},{}",
        a.mean_train_mae, a.mean_test_mae, a.min_train_mae, a.min_test_mae
    )
    .unwrap();
    out
}

/// Writes `epoch_metrics.csv`, `final_summary.csv`, `config.json`, and for
/// the best seed `model.json`, `clauses.txt` and (weighted variants)
/// `weights_hist.csv` into `dir`.
pub fn write_artifacts<F: Scalar>(outcome: &ExperimentOutcome<F>, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let write = |name: &str, body: String| {
        let path = dir.join(name);
        fs::write(&path, body).map_err(|e| Error::io(path, e))
    };
    write("epoch_metrics.csv", epoch_metrics_csv(outcome))?;
    write("final_summary.csv", final_summary_csv(outcome))?;
    write(
        "config.json",
        serde_json::to_string_pretty(&outcome.config)? + "\n",
    )?;
    let best = &outcome.best().model;
    write("clauses.txt", clause_report(best))?;
    if best.weights().kind() != WeightKind::Unity {
        write("weights_hist.csv", weight_histogram(best, 1.0)?.to_csv())?;
    }
    save_model(best, dir.join("model.json"))
}
