use crate::engine::{RtmModel, WeightVector};
use crate::scalar::Scalar;

/// `x3`, or `¬x3` for a negated literal.
pub fn literal_name(k: usize, n_inputs: usize) -> String {
    if k < n_inputs {
        format!("x{}", k + 1)
    } else {
        format!("¬x{}", k - n_inputs + 1)
    }
}

/// One line per clause with positive weight: `x1 ∧ ¬x2 → w=4`.
/// A clause with nothing included is shown as `⊤`.
pub fn clause_lines<F: Scalar>(model: &RtmModel<F>) -> Vec<String> {
    let o = model.n_inputs();
    let weights = model.weights();
    (0..model.n_clauses())
        .filter(|&j| weights.get(j) > F::zero())
        .map(|j| {
            let include = model.include_set(j).expect("clause index in range");
            let body = if include.is_empty() {
                "⊤".to_string()
            } else {
                include
                    .iter()
                    .map(|&k| literal_name(k, o))
                    .collect::<Vec<_>>()
                    .join(" ∧ ")
            };
            let w = match weights {
                WeightVector::Integer(w) => w[j].to_string(),
                _ => weights.get(j).to_string(),
            };
            format!("{body} → w={w}")
        })
        .collect()
}

pub fn clause_report<F: Scalar>(model: &RtmModel<F>) -> String {
    let mut out = clause_lines(model).join("\n");
    if !out.is_empty() {
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::Normalizer;
    use crate::engine::{RtmParams, Variant};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn model(variant: Variant, m: usize) -> RtmModel<f64> {
        RtmModel::new(
            RtmParams::new(variant, m).with_resolution(7),
            3,
            Normalizer::for_bits(3).unwrap(),
            &mut ChaCha8Rng::seed_from_u64(0),
        )
        .unwrap()
    }

    #[test]
    fn table_one_model() {
        let mut m = model(Variant::RtmIw, 3);
        for j in 0..3 {
            m.set_state(j, j, 101).unwrap();
        }
        m.set_weights(WeightVector::Integer(vec![4, 2, 1])).unwrap();
        assert_eq!(clause_lines(&m), vec!["x1 → w=4", "x2 → w=2", "x3 → w=1"]);
    }

    #[test]
    fn zero_weights_list_nothing() {
        assert!(clause_lines(&model(Variant::RtmIw, 5)).is_empty());
        assert_eq!(clause_report(&model(Variant::RtmIw, 5)), "");
    }

    #[test]
    fn negated_literal_and_empty_clause() {
        let mut m = model(Variant::Rtm, 2);
        m.set_state(0, 3, 150).unwrap();
        m.set_state(0, 1, 150).unwrap();
        assert_eq!(clause_lines(&m), vec!["x2 ∧ ¬x1 → w=1", "⊤ → w=1"]);
        assert_eq!(literal_name(3, 3), "¬x1");
    }
}
