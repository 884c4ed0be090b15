use serde::{Deserialize, Serialize};

use crate::gf::FiniteField;

use super::{Mat, MatTuple};

/// Outcome of the compatibility test on a matrix tuple.
///
/// `verdict` holds when the matrices are linearly independent and no basis
/// index is dead. Dead indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompatReport {
    pub independent: bool,
    pub dead_indices: Vec<usize>,
    pub verdict: bool,
}

/// 1-based indices `i` whose row and column vanish in every matrix.
pub fn dead_indices(mats: &[Mat]) -> Vec<usize> {
    let Some(s) = mats.first().map(Mat::size) else {
        return Vec::new();
    };
    (0..s)
        .filter(|&i| {
            mats.iter().all(|m| (0..s).all(|j| m.get(i, j).is_zero() && m.get(j, i).is_zero()))
        })
        .map(|i| i + 1)
        .collect()
}

pub fn tuple_compatible(field: &FiniteField, tuple: &MatTuple) -> CompatReport {
    let independent = tuple.rank(field) == tuple.len();
    let dead = dead_indices(tuple.mats());
    CompatReport { independent, verdict: independent && dead.is_empty(), dead_indices: dead }
}
