//! Regression Tsetlin machines with unity, integer and real clause weights.
//!
//! The machine represents a regression function as a weighted sum of
//! conjunctive clauses over binary inputs and their negations, divided by a
//! resolution `T`. Clause composition is learned by teams of Tsetlin
//! automata; integer weights are learned by unit increments and decrements.
//!
//! Real-valued quantities are generic over [`Scalar`] (`f32` or `f64`); the
//! aliases below fix `f64`, which the CLI and benchmarks use.
//!
//! ```
//! use rtm_core::{datagen, engine, RtmModel, RtmParams, Variant};
//! use rand::SeedableRng;
//!
//! let spec = datagen::DatasetSpec::numbered(3).unwrap().with_sizes(800, 200);
//! let (train, test) = datagen::generate::<f64>(&spec).unwrap();
//! let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
//! let params = RtmParams::new(Variant::RtmIw, 3).with_resolution(7);
//! let mut model = RtmModel::new(params, 3, train.normalizer(), &mut rng).unwrap();
//! let report = engine::fit(&mut model, &train, &test, 5, &mut rng).unwrap();
//! assert!(report.final_metrics().test_mae < report.initial.test_mae);
//! ```

pub mod bench;
pub mod datagen;
pub mod engine;
mod error;
mod scalar;
pub mod spl;
pub mod tsetlin;

pub use engine::{RtmModel, RtmParams, Variant, WeightVector};
pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Model = engine::RtmModel<f64>;
pub type Model32 = engine::RtmModel<f32>;
pub type Params = engine::RtmParams<f64>;
pub type Dataset = datagen::Dataset<f64>;
pub type Dataset32 = datagen::Dataset<f32>;
pub type Sample = datagen::Sample<f64>;
pub type Normalizer = datagen::Normalizer<f64>;
pub type Report = engine::RunReport<f64>;
pub type SplEnvironment = spl::SplEnvironment<f64>;

/// Deterministic generator used for every seeded run.
pub type SeededRng = rand_chacha::ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    rand::SeedableRng::seed_from_u64(seed)
}
