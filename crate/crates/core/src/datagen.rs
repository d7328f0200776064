//! Synthetic binary-input regression datasets and their CSV form.
//!
//! The noise-free target of an input is 100 times its value read as a
//! big-endian binary number, so `[1, 0]` maps to 200. Noisy variants perturb
//! the training targets with zero-mean Gaussian noise; test targets are never
//! perturbed.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Gaussian noise std (target units) used when a noisy spec leaves it unset.
pub const DEFAULT_NOISE_SIGMA: f64 = 7.0;

/// Affine map between target units and `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalizer<F> {
    min: F,
    max: F,
}

impl<F: Scalar> Normalizer<F> {
    pub fn new(min: F, max: F) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) || max <= min {
            return Err(Error::invalid(format!(
                "degenerate target range [{min}, {max}]"
            )));
        }
        Ok(Normalizer { min, max })
    }

    /// The noise-free output range `[0, 100 (2^o - 1)]` of an `o`-bit dataset.
    pub fn for_bits(n_bits: usize) -> Result<Self> {
        if n_bits == 0 || n_bits > 52 {
            return Err(Error::invalid(format!("unsupported bit width {n_bits}")));
        }
        Self::new(F::zero(), F::from_count(100 * ((1u64 << n_bits) - 1)))
    }

    pub fn min(&self) -> F {
        self.min
    }

    pub fn max(&self) -> F {
        self.max
    }

    pub fn range(&self) -> F {
        self.max - self.min
    }

    /// Maps into `[0, 1]`, clamping out-of-range (noisy) targets.
    pub fn normalize(&self, y: F) -> F {
        ((y - self.min) / self.range()).max(F::zero()).min(F::one())
    }

    pub fn denormalize(&self, y_norm: F) -> F {
        self.min + y_norm * self.range()
    }

    /// A target expressed in vote units `0..=T`, clamped.
    ///
    /// Computed as `(y - min) * T / range` so that targets on the output grid
    /// land on exact integers.
    pub fn to_votes(&self, y: F, resolution: F) -> F {
        ((y - self.min) * resolution / self.range())
            .max(F::zero())
            .min(resolution)
    }

    /// Inverse of [`Normalizer::to_votes`] for a vote sum already clamped to `0..=T`.
    pub fn from_votes(&self, votes: F, resolution: F) -> F {
        self.min + votes * self.range() / resolution
    }
}

/// One binary input and its target in original units.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample<F> {
    pub x: Vec<u8>,
    pub y: F,
}

/// Samples of a fixed bit width plus the normalizer shared by train and test.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<F> {
    n_bits: usize,
    samples: Vec<Sample<F>>,
    normalizer: Normalizer<F>,
}

impl<F: Scalar> Dataset<F> {
    pub fn new(n_bits: usize, samples: Vec<Sample<F>>, normalizer: Normalizer<F>) -> Result<Self> {
        for (i, s) in samples.iter().enumerate() {
            if s.x.len() != n_bits {
                return Err(Error::WidthMismatch {
                    expected: n_bits,
                    found: s.x.len(),
                });
            }
            if s.x.iter().any(|&b| b > 1) {
                return Err(Error::invalid(format!(
                    "sample {i} has a non-binary feature"
                )));
            }
            if !s.y.is_finite() {
                return Err(Error::invalid(format!(
                    "sample {i} has a non-finite target"
                )));
            }
        }
        Ok(Dataset {
            n_bits,
            samples,
            normalizer,
        })
    }

    pub fn n_bits(&self) -> usize {
        self.n_bits
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Sample<F>] {
        &self.samples
    }

    pub fn normalizer(&self) -> Normalizer<F> {
        self.normalizer
    }

    pub fn targets(&self) -> Vec<F> {
        self.samples.iter().map(|s| s.y).collect()
    }

    pub fn normalized_targets(&self) -> Vec<F> {
        self.samples
            .iter()
            .map(|s| self.normalizer.normalize(s.y))
            .collect()
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv_to(file).map_err(|e| match e {
            Error::Io { source, .. } => Error::io(path, source),
            other => other,
        })
    }

    /// Header `x1,...,xo,y` then one row per sample, targets in original units.
    pub fn write_csv_to<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header: Vec<String> = (1..=self.n_bits).map(|i| format!("x{i}")).collect();
        header.push("y".into());
        w.write_record(&header).map_err(csv_write_err)?;
        let mut row = Vec::with_capacity(self.n_bits + 1);
        for s in &self.samples {
            row.clear();
            row.extend(s.x.iter().map(|b| b.to_string()));
            row.push(s.y.to_string());
            w.write_record(&row).map_err(csv_write_err)?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }

    /// Reads a CSV written by [`Dataset::write_csv`]. The normalizer is the
    /// theoretical range for the file's bit width.
    pub fn read_csv(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read_csv_from(file, path)
    }

    pub fn read_csv_from<R: Read>(reader: R, origin: &Path) -> Result<Self> {
        let parse_err = |line: u64, msg: String| Error::Parse {
            path: origin.to_path_buf(),
            line,
            msg,
        };
        let mut r = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let header = r
            .headers()
            .map_err(|e| parse_err(1, e.to_string()))?
            .clone();
        if header.len() < 2 || header.iter().all(str::is_empty) {
            return Err(parse_err(1, "missing header `x1,...,xo,y`".into()));
        }
        let n_bits = header.len() - 1;
        let mut samples = Vec::new();
        for record in r.records() {
            let record = record.map_err(|e| {
                let line = e.position().map_or(0, |p| p.line());
                parse_err(line, e.to_string())
            })?;
            let line = record.position().map_or(0, |p| p.line());
            let mut x = Vec::with_capacity(n_bits);
            for (i, field) in record.iter().take(n_bits).enumerate() {
                match field {
                    "0" => x.push(0),
                    "1" => x.push(1),
                    other => {
                        return Err(parse_err(
                            line,
                            format!("feature x{} is `{other}`, expected 0 or 1", i + 1),
                        ))
                    }
                }
            }
            let y = F::parse(&record[n_bits])
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_err(line, format!("bad target `{}`", &record[n_bits])))?;
            samples.push(Sample { x, y });
        }
        if samples.is_empty() {
            return Err(parse_err(1, "no data rows".into()));
        }
        Dataset::new(n_bits, samples, Normalizer::for_bits(n_bits)?)
    }
}

fn csv_write_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io("<csv>", io),
        other => Error::invalid(format!("csv: {other:?}")),
    }
}

/// Noise-free target `100 * decimal(x)`, `x[0]` most significant.
pub fn target_value<F: Scalar>(x: &[u8]) -> F {
    let decimal = x.iter().fold(0u64, |acc, &b| (acc << 1) | u64::from(b));
    F::from_count(100 * decimal)
}

/// Parameters of one synthetic dataset pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetSpec {
    pub n_bits: usize,
    #[serde(default)]
    pub noisy: bool,
    #[serde(default = "default_n_train")]
    pub n_train: usize,
    #[serde(default = "default_n_test")]
    pub n_test: usize,
    /// Target-unit std of the training noise; [`DEFAULT_NOISE_SIGMA`] when unset.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_sigma: Option<f64>,
    #[serde(default)]
    pub seed: u64,
}

fn default_n_train() -> usize {
    8000
}

fn default_n_test() -> usize {
    2000
}

impl DatasetSpec {
    pub fn new(n_bits: usize, noisy: bool) -> Self {
        DatasetSpec {
            n_bits,
            noisy,
            n_train: default_n_train(),
            n_test: default_n_test(),
            noise_sigma: None,
            seed: 0,
        }
    }

    /// Datasets I to VI: 2, 3 and 4 bits, each noise-free then noisy.
    pub fn numbered(id: u8) -> Result<Self> {
        match id {
            1..=6 => Ok(Self::new(
                2 + usize::from((id - 1) / 2),
                id.is_multiple_of(2),
            )),
            _ => Err(Error::invalid(format!("dataset number {id} not in 1..=6"))),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_sizes(mut self, n_train: usize, n_test: usize) -> Self {
        self.n_train = n_train;
        self.n_test = n_test;
        self
    }

    pub fn effective_sigma(&self) -> f64 {
        if self.noisy {
            self.noise_sigma.unwrap_or(DEFAULT_NOISE_SIGMA)
        } else {
            0.0
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(1..=52).contains(&self.n_bits) {
            return Err(Error::invalid(format!(
                "n_bits {} not in 1..=52",
                self.n_bits
            )));
        }
        if self.n_train == 0 || self.n_test == 0 {
            return Err(Error::invalid("n_train and n_test must be at least 1"));
        }
        match self.noise_sigma {
            Some(s) if !s.is_finite() || s < 0.0 => Err(Error::invalid(format!(
                "noise sigma {s} must be finite and >= 0"
            ))),
            Some(s) if !self.noisy && s != 0.0 => {
                Err(Error::invalid("noise sigma set on a noise-free dataset"))
            }
            _ => Ok(()),
        }
    }
}

/// Generates `(train, test)` from the spec's own seed.
pub fn generate<F: Scalar>(spec: &DatasetSpec) -> Result<(Dataset<F>, Dataset<F>)> {
    generate_with(spec, &mut ChaCha8Rng::seed_from_u64(spec.seed))
}

pub fn generate_with<F: Scalar, R: Rng + ?Sized>(
    spec: &DatasetSpec,
    rng: &mut R,
) -> Result<(Dataset<F>, Dataset<F>)> {
    spec.validate()?;
    let normalizer = Normalizer::for_bits(spec.n_bits)?;
    let sigma = spec.effective_sigma();
    let noise = Normal::new(0.0, sigma).map_err(|e| Error::invalid(e.to_string()))?;

    let draw = |n: usize, noisy: bool, rng: &mut R| -> Vec<Sample<F>> {
        (0..n)
            .map(|_| {
                let x: Vec<u8> = (0..spec.n_bits)
                    .map(|_| rng.random_range(0..=1u8))
                    .collect();
                let mut y = target_value::<F>(&x);
                if noisy && sigma > 0.0 {
                    y += F::from_f64_lossy(noise.sample(rng));
                }
                Sample { x, y }
            })
            .collect()
    };
    let train = draw(spec.n_train, true, rng);
    let test = draw(spec.n_test, false, rng);
    Ok((
        Dataset::new(spec.n_bits, train, normalizer)?,
        Dataset::new(spec.n_bits, test, normalizer)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn target_examples() {
        assert_eq!(target_value::<f64>(&[1, 0]), 200.0);
        assert_eq!(target_value::<f64>(&[0, 0, 0, 0]), 0.0);
        assert_eq!(target_value::<f32>(&[1, 1, 1]), 700.0);
    }

    #[test]
    fn normalizer_examples() {
        let n = Normalizer::<f64>::for_bits(3).unwrap();
        assert_eq!(n.normalize(500.0), 5.0 / 7.0);
        assert_eq!(n.normalize(0.0), 0.0);
        assert_eq!(n.normalize(700.0), 1.0);
        assert_eq!(n.normalize(-3.0), 0.0);
        assert_eq!(n.normalize(712.5), 1.0);
        assert_eq!(n.to_votes(500.0, 7.0), 5.0);
        assert_eq!(n.from_votes(5.0, 7.0), 500.0);
        assert!(Normalizer::<f64>::new(1.0, 1.0).is_err());
        assert!(Normalizer::<f64>::new(2.0, 1.0).is_err());
    }

    #[test]
    fn normalize_round_trip() {
        let n = Normalizer::<f64>::for_bits(4).unwrap();
        for i in 0..=1500 {
            let y = i as f64;
            assert!((n.denormalize(n.normalize(y)) - y).abs() < 1e-9);
        }
    }

    #[test]
    fn numbered_specs() {
        let widths: Vec<_> = (1..=6)
            .map(|i| {
                let s = DatasetSpec::numbered(i).unwrap();
                (s.n_bits, s.noisy)
            })
            .collect();
        assert_eq!(
            widths,
            vec![
                (2, false),
                (2, true),
                (3, false),
                (3, true),
                (4, false),
                (4, true)
            ]
        );
        assert!(DatasetSpec::numbered(7).is_err());
    }

    #[test]
    fn spec_validation() {
        let mut s = DatasetSpec::new(3, false);
        s.noise_sigma = Some(1.0);
        assert!(s.validate().is_err());
        s.noisy = true;
        assert!(s.validate().is_ok());
        s.noise_sigma = Some(-1.0);
        assert!(s.validate().is_err());
        assert!(DatasetSpec::new(3, false)
            .with_sizes(0, 1)
            .validate()
            .is_err());
        let json: DatasetSpec = serde_json::from_str(r#"{"n_bits": 4, "noisy": true}"#).unwrap();
        assert_eq!((json.n_train, json.n_test), (8000, 2000));
        assert_eq!(json.effective_sigma(), DEFAULT_NOISE_SIGMA);
        assert!(serde_json::from_str::<DatasetSpec>(r#"{"n_bits": 4, "bogus": 1}"#).is_err());
    }

    #[test]
    fn noise_only_on_training_targets() {
        let spec = DatasetSpec::numbered(4).unwrap().with_seed(11);
        let (train, test) = generate::<f64>(&spec).unwrap();
        assert_eq!((train.len(), test.len()), (8000, 2000));
        assert!(test
            .samples()
            .iter()
            .all(|s| s.y == target_value::<f64>(&s.x)));
        let resid: Vec<f64> = train
            .samples()
            .iter()
            .map(|s| s.y - target_value::<f64>(&s.x))
            .collect();
        let mean = resid.iter().sum::<f64>() / resid.len() as f64;
        let sd =
            (resid.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / resid.len() as f64).sqrt();
        assert!(mean.abs() < 0.3, "noise mean {mean}");
        assert!((sd - DEFAULT_NOISE_SIGMA).abs() < 0.3, "noise sd {sd}");
    }

    #[test]
    fn bit_frequency_is_uniform() {
        for bits in 2..=4 {
            let spec = DatasetSpec::new(bits, false).with_seed(bits as u64);
            let (train, _) = generate::<f64>(&spec).unwrap();
            for i in 0..bits {
                let mean = train
                    .samples()
                    .iter()
                    .map(|s| f64::from(s.x[i]))
                    .sum::<f64>()
                    / train.len() as f64;
                assert!((mean - 0.5).abs() <= 0.02, "bit {i} mean {mean}");
            }
        }
    }

    #[test]
    fn same_mapping_across_seeds() {
        let a = generate::<f64>(&DatasetSpec::new(3, false).with_seed(1))
            .unwrap()
            .0;
        let b = generate::<f64>(&DatasetSpec::new(3, false).with_seed(2))
            .unwrap()
            .0;
        assert_ne!(a, b);
        for s in a.samples().iter().chain(b.samples()) {
            assert_eq!(s.y, target_value::<f64>(&s.x));
        }
    }

    #[test]
    fn csv_row_parses() {
        let ds =
            Dataset::<f64>::read_csv_from("x1,x2,y\n1,0,200\n".as_bytes(), Path::new("t")).unwrap();
        assert_eq!(
            ds.samples(),
            &[Sample {
                x: vec![1, 0],
                y: 200.0
            }]
        );
        assert_eq!(ds.normalizer().max(), 300.0);
    }

    #[test]
    fn csv_errors_carry_line_numbers() {
        let err = Dataset::<f64>::read_csv_from("".as_bytes(), Path::new("e")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");

        let err = Dataset::<f64>::read_csv_from("x1,y\n".as_bytes(), Path::new("e")).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));

        let bad = "x1,x2,y\n1,0,200\n1,2,300\n";
        let err = Dataset::<f64>::read_csv_from(bad.as_bytes(), Path::new("e")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");

        let short = "x1,x2,y\n1,0,200\n1,0\n";
        let err = Dataset::<f64>::read_csv_from(short.as_bytes(), Path::new("e")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");

        let nan = "x1,y\n1,abc\n";
        let err = Dataset::<f64>::read_csv_from(nan.as_bytes(), Path::new("e")).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn csv_round_trip_noisy() {
        let spec = DatasetSpec::new(3, true).with_sizes(100, 1).with_seed(5);
        let (train, _) = generate::<f64>(&spec).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.csv");
        train.write_csv(&path).unwrap();
        assert_eq!(Dataset::<f64>::read_csv(&path).unwrap(), train);

        let (train32, _) = generate::<f32>(&spec).unwrap();
        train32.write_csv(&path).unwrap();
        assert_eq!(Dataset::<f32>::read_csv(&path).unwrap(), train32);
    }
}
