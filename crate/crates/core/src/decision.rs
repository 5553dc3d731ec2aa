//! Expected utility per class and the resulting prediction.

use crate::compact::CompactMass;

/// `U_c = bel({c}) − bel(Θ \ {c})` for every class.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilityVector(pub Vec<f64>);

impl UtilityVector {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionResult {
    pub predicted_class: usize,
    pub utilities: UtilityVector,
    /// More than one class shares the maximal singleton mass.
    pub tie: bool,
}

/// Closed form on the singleton+Θ family: `U_c = s_c − (S − s_c)` with
/// `S = Σ s`; Θ supports neither side.
pub fn expected_utilities(fused: &CompactMass) -> UtilityVector {
    let total = fused.singleton_total();
    UtilityVector(fused.singleton().iter().map(|&s| s - (total - s)).collect())
}

/// Argmax of the expected utilities, lowest class index on ties.
///
/// Because `U_c = 2·s_c − S` is increasing in `s_c`, the decision is taken
/// on the singleton masses themselves, where rounding cannot merge or
/// reorder classes. The chosen class always attains the maximal utility.
pub fn predict(fused: &CompactMass) -> DecisionResult {
    let (predicted_class, tie) = argmax_lowest(fused.singleton());
    DecisionResult {
        predicted_class,
        utilities: expected_utilities(fused),
        tie,
    }
}

/// Index of the first maximum and whether it is shared. `values` must be
/// non-empty and NaN-free.
pub fn argmax_lowest(values: &[f64]) -> (usize, bool) {
    let mut best = 0;
    let mut tie = false;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
            tie = false;
        } else if v == values[best] {
            tie = true;
        }
    }
    (best, tie)
}
