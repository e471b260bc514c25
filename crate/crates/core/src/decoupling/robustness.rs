use std::collections::BTreeMap;

use crate::decoupling::AverageReport;
use crate::error::{Error, Result};

/// Euclidean distance `|s'_ideal − s'_actual|` per label.
pub fn robustness_distance(ideal: &AverageReport, actual: &AverageReport) -> Result<BTreeMap<String, f64>> {
    let lhs: Vec<&str> = ideal.entries.iter().map(|e| e.gamma.as_str()).collect();
    let rhs: Vec<&str> = actual.entries.iter().map(|e| e.gamma.as_str()).collect();
    let mut sorted_l = lhs.clone();
    let mut sorted_r = rhs.clone();
    sorted_l.sort_unstable();
    sorted_r.sort_unstable();
    if sorted_l != sorted_r {
        return Err(Error::LabelMismatch(format!("ideal has {lhs:?}, actual has {rhs:?}")));
    }
    let mut out = BTreeMap::new();
    for a in &ideal.entries {
        let b = actual.entry(&a.gamma).expect("label sets are equal");
        if a.average.len() != b.average.len() {
            return Err(Error::DimensionMismatch {
                expected: a.average.len(),
                found: b.average.len(),
            });
        }
        let d = a
            .average
            .iter()
            .zip(&b.average)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt();
        out.insert(a.gamma.clone(), d);
    }
    Ok(out)
}
