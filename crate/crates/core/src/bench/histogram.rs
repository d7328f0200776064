use std::collections::BTreeMap;
use std::fmt::Write;

use crate::engine::{RtmModel, WeightKind};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Clause counts per weight bin. Clauses with weight exactly 0 (switched off)
/// are counted separately from the bin `[0, width)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightHistogram {
    pub bin_width: f64,
    pub zero: usize,
    /// Bin index `i` covers `[i * width, (i + 1) * width)`.
    pub bins: BTreeMap<u64, usize>,
}

impl WeightHistogram {
    pub fn total(&self) -> usize {
        self.zero + self.bins.values().sum::<usize>()
    }

    /// `lower,upper,count`, starting with the zero-weight row `0,0,count`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lower,upper,count\n");
        writeln!(out, "0,0,{}", self.zero).unwrap();
        for (&i, &count) in &self.bins {
            let lo = i as f64 * self.bin_width;
            writeln!(out, "{},{},{}", lo, lo + self.bin_width, count).unwrap();
        }
        out
    }
}

pub fn weight_histogram<F: Scalar>(model: &RtmModel<F>, bin_width: f64) -> Result<WeightHistogram> {
    if model.weights().kind() == WeightKind::Unity {
        return Err(Error::invalid(
            "unity-weight model has no weight distribution",
        ));
    }
    if !(bin_width.is_finite() && bin_width > 0.0) {
        return Err(Error::invalid(format!(
            "bin width {bin_width} must be positive"
        )));
    }
    let mut hist = WeightHistogram {
        bin_width,
        zero: 0,
        bins: BTreeMap::new(),
    };
    for w in model.weights().to_vec() {
        let w = w.to_f64_lossy();
        if w == 0.0 {
            hist.zero += 1;
        } else {
            *hist.bins.entry((w / bin_width).floor() as u64).or_default() += 1;
        }
    }
    Ok(hist)
}
