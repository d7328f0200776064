//! `model.json`: hyper-parameters, target range, row-major automaton states
//! and clause weights.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::datagen::Normalizer;
use crate::engine::{
    EmptyClausePolicy, RealWeightRule, RtmModel, RtmParams, Variant, WeightVector,
};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::tsetlin::{TaInit, TaStateMatrix};

pub const MODEL_FORMAT: &str = "rtm-model/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub format: String,
    pub m: usize,
    pub o: usize,
    #[serde(rename = "N")]
    pub n_states: u32,
    #[serde(rename = "T")]
    pub resolution: u64,
    pub s: f64,
    pub variant: Variant,
    pub alpha: f64,
    pub ta_init: TaInit,
    pub empty_clause: EmptyClausePolicy,
    pub decrement_requires_fire: bool,
    pub real_rule: RealWeightRule,
    pub target_min: f64,
    pub target_max: f64,
    /// `m x 2o`, row-major.
    pub states: Vec<u32>,
    /// Absent for unity weights.
    pub weights: Option<Vec<f64>>,
}

impl ModelFile {
    pub fn from_model<F: Scalar>(model: &RtmModel<F>) -> Self {
        let p = model.params();
        let weights = match model.weights() {
            WeightVector::Unity { .. } => None,
            w => Some(w.to_vec().into_iter().map(Scalar::to_f64_lossy).collect()),
        };
        ModelFile {
            format: MODEL_FORMAT.into(),
            m: p.clauses,
            o: model.n_inputs(),
            n_states: p.n_states,
            resolution: p.resolution,
            s: p.specificity.to_f64_lossy(),
            variant: p.variant,
            alpha: p.alpha.to_f64_lossy(),
            ta_init: p.ta_init,
            empty_clause: p.empty_clause,
            decrement_requires_fire: p.decrement_requires_fire,
            real_rule: p.real_rule,
            target_min: model.normalizer().min().to_f64_lossy(),
            target_max: model.normalizer().max().to_f64_lossy(),
            states: model.automata().states().to_vec(),
            weights,
        }
    }

    pub fn into_model<F: Scalar>(self) -> Result<RtmModel<F>> {
        if self.format != MODEL_FORMAT {
            return Err(Error::ModelFormat(format!(
                "unsupported format `{}` (expected {MODEL_FORMAT})",
                self.format
            )));
        }
        let params = RtmParams {
            variant: self.variant,
            clauses: self.m,
            resolution: self.resolution,
            specificity: F::from_f64_lossy(self.s),
            n_states: self.n_states,
            alpha: F::from_f64_lossy(self.alpha),
            ta_init: self.ta_init,
            empty_clause: self.empty_clause,
            decrement_requires_fire: self.decrement_requires_fire,
            real_rule: self.real_rule,
        };
        let automata = TaStateMatrix::from_states(self.m, self.o, self.n_states, self.states)?;
        let weights = match (self.variant, self.weights) {
            (Variant::Rtm, None) => WeightVector::Unity { len: self.m },
            (Variant::RtmIw, Some(w)) => {
                let ints = w
                    .iter()
                    .map(|&v| {
                        if v >= 0.0 && v.fract() == 0.0 && v < 2f64.powi(53) {
                            Ok(v as u64)
                        } else {
                            Err(Error::ModelFormat(format!(
                                "integer weight expected, got {v}"
                            )))
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                WeightVector::Integer(ints)
            }
            (Variant::RtmRw, Some(w)) => {
                WeightVector::real(w.into_iter().map(F::from_f64_lossy).collect())?
            }
            (v, w) => {
                return Err(Error::ModelFormat(format!(
                    "variant {v} with {} weights",
                    if w.is_some() { "explicit" } else { "no" }
                )))
            }
        };
        let normalizer = Normalizer::new(
            F::from_f64_lossy(self.target_min),
            F::from_f64_lossy(self.target_max),
        )?;
        RtmModel::from_parts(params, automata, weights, normalizer)
    }
}

pub fn save_model<F: Scalar>(model: &RtmModel<F>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let json = serde_json::to_string_pretty(&ModelFile::from_model(model))?;
    fs::write(path, json + "\n").map_err(|e| Error::io(path, e))
}

pub fn load_model<F: Scalar>(path: impl AsRef<Path>) -> Result<RtmModel<F>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let file: ModelFile = serde_json::from_str(&text)?;
    file.into_model()
}
