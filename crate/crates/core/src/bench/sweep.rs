//! Grid sweeps over datasets, variants, clause counts, resolutions and
//! specificities.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::datagen::DatasetSpec;
use crate::engine::Variant;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::experiment::{run_experiment, write_artifacts, Aggregate, ExperimentConfig};

fn default_name() -> String {
    "sweep".into()
}
fn default_s() -> Vec<f64> {
    vec![crate::engine::DEFAULT_SPECIFICITY]
}
fn default_epochs() -> usize {
    200
}
fn default_seeds() -> Vec<u64> {
    vec![0]
}

/// The cartesian product of the listed values, each cell one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "default_name")]
    pub name: String,
    pub datasets: Vec<DatasetSpec>,
    pub variants: Vec<Variant>,
    pub m: Vec<usize>,
    /// Omitted: each cell uses its variant's default resolution.
    #[serde(rename = "T", default)]
    pub resolution: Vec<u64>,
    #[serde(default = "default_s")]
    pub s: Vec<f64>,
    #[serde(default = "default_epochs")]
    pub epochs: usize,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
}

impl GridConfig {
    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn cells(&self) -> Vec<ExperimentConfig> {
        let resolutions: Vec<Option<u64>> = if self.resolution.is_empty() {
            vec![None]
        } else {
            self.resolution.iter().copied().map(Some).collect()
        };
        let mut cells = Vec::new();
        for (d, dataset) in self.datasets.iter().enumerate() {
            for &variant in &self.variants {
                for &m in &self.m {
                    for &t in &resolutions {
                        for &s in &self.s {
                            let mut cfg = ExperimentConfig::new(dataset.clone(), variant, m)
                                .with_s(s)
                                .with_epochs(self.epochs)
                                .with_seeds(self.seeds.iter().copied());
                            cfg.resolution = t;
                            cfg.name = format!(
                                "d{d}_{}b{}_{variant}_m{m}_T{}_s{s}",
                                dataset.n_bits,
                                if dataset.noisy { "n" } else { "" },
                                cfg.resolution()
                            );
                            cells.push(cfg);
                        }
                    }
                }
            }
        }
        cells
    }
}

#[derive(Debug, Clone)]
pub struct SweepCell<F> {
    pub config: ExperimentConfig,
    pub aggregate: Aggregate<F>,
}

/// Runs every cell in parallel. With `out` set, each cell's artifacts go to
/// `out/<cell name>/` and the summary to `out/sweep_summary.csv`.
pub fn run_sweep<F: Scalar>(grid: &GridConfig, out: Option<&Path>) -> Result<Vec<SweepCell<F>>> {
    let cells = grid.cells();
    if cells.is_empty() {
        return Err(Error::invalid("grid has no cells"));
    }
    for cell in &cells {
        cell.validate()?;
    }
    let results = cells
        .into_par_iter()
        .map(|config| {
            let outcome = run_experiment::<F>(&config)?;
            if let Some(dir) = out {
                write_artifacts(&outcome, &dir.join(&config.name))?;
            }
            Ok(SweepCell {
                config,
                aggregate: outcome.aggregate,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if let Some(dir) = out {
        let path = dir.join("sweep_summary.csv");
        fs::write(&path, sweep_summary_csv(&results)).map_err(|e| Error::io(&path, e))?;
    }
    Ok(results)
}

pub fn sweep_summary_csv<F: Scalar>(cells: &[SweepCell<F>]) -> String {
    let mut out = String::from(
        "cell,n_bits,noisy,variant,m,T,s,mean_train_mae,mean_test_mae,min_train_mae,min_test_mae\n",
    );
    for c in cells {
        let (cfg, a) = (&c.config, &c.aggregate);
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            cfg.name,
            cfg.dataset.n_bits,
            cfg.dataset.noisy,
            cfg.variant,
            cfg.m,
            cfg.resolution(),
            cfg.s,
            a.mean_train_mae,
            a.mean_test_mae,
            a.min_train_mae,
            a.min_test_mae
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_expands_to_cartesian_product() {
        let grid: GridConfig = serde_json::from_str(
            r#"{
                "datasets": [{"n_bits": 2, "n_train": 100, "n_test": 20}],
                "variants": ["rtm", "rtm-iw"],
                "m": [3, 6],
                "s": [1.5, 3.0],
                "epochs": 2,
                "seeds": [1, 2]
            }"#,
        )
        .unwrap();
        let cells = grid.cells();
        assert_eq!(cells.len(), 8);
        assert_eq!(cells[0].resolution(), 3);
        assert_eq!(cells[2].resolution(), 6);
        assert_eq!(cells[4].resolution(), 300);

        let dir = tempfile::tempdir().unwrap();
        let results = run_sweep::<f64>(&grid, Some(dir.path())).unwrap();
        assert_eq!(results.len(), 8);
        let summary = fs::read_to_string(dir.path().join("sweep_summary.csv")).unwrap();
        assert_eq!(summary.lines().count(), 9);
        for cell in &cells {
            assert!(dir.path().join(&cell.name).join("model.json").exists());
        }
    }

    #[test]
    fn empty_grid_is_rejected() {
        let grid = GridConfig {
            name: "x".into(),
            datasets: vec![],
            variants: vec![Variant::Rtm],
            m: vec![3],
            resolution: vec![],
            s: default_s(),
            epochs: 1,
            seeds: vec![0],
            output_dir: None,
        };
        assert!(run_sweep::<f64>(&grid, None).is_err());
    }
}
