use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FieldElement, FiniteField};
use crate::linalg;

use super::{Mat, MatTuple};

/// Canonical form of the span of a matrix tuple: the reduced row echelon
/// basis of its `t x s^2` coordinate matrix, as a flat list of element codes.
///
/// Keys of equal `s` and rank order lexicographically on `rref`, which is the
/// order used for canonical orbit representatives.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubspaceKey {
    pub s: usize,
    pub rank: usize,
    pub rref: Vec<u32>,
}

impl SubspaceKey {
    pub(crate) fn from_rows(s: usize, rows: &[linalg::Row]) -> Self {
        let rref = rows.iter().flat_map(|r| r.iter().map(|e| e.code())).collect();
        Self { s, rank: rows.len(), rref }
    }

    pub(crate) fn from_codes(s: usize, rref: Vec<u32>) -> Self {
        let n = s * s;
        let rank = if n == 0 { 0 } else { rref.len() / n };
        Self { s, rank, rref }
    }

    /// The basis matrices, one per RREF row.
    pub fn matrices(&self) -> Vec<Mat> {
        let n = self.s * self.s;
        self.rref
            .chunks(n.max(1))
            .map(|c| Mat::from_entries(self.s, c.iter().map(|&x| FieldElement::new(x)).collect()))
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        self.matrices().iter().all(Mat::is_symmetric)
    }
}

/// Canonical key of the span of `tuple`. Dependent tuples are accepted; the
/// key's `rank` then falls short of the tuple length.
pub fn subspace_key(field: &FiniteField, tuple: &MatTuple) -> SubspaceKey {
    let mut rows = tuple.coordinate_rows();
    linalg::rref(field, &mut rows);
    SubspaceKey::from_rows(tuple.size(), &rows)
}

/// Every `t`-dimensional subspace of `M_s(F)`, in ascending key order.
pub fn enumerate_subspaces(field: &FiniteField, s: usize, t: usize) -> Result<Vec<SubspaceKey>> {
    let n = s * s;
    if t < 1 || t > n {
        return Err(Error::RangeError(format!("t = {t} outside [1, {n}]")));
    }
    let q = field.q();
    let mut keys = Vec::new();
    let mut pivots: Vec<usize> = (0..t).collect();
    loop {
        // free coordinates: row i, column c > pivots[i], c not a pivot column
        let free: Vec<(usize, usize)> = (0..t)
            .flat_map(|i| {
                let piv = &pivots;
                (piv[i] + 1..n).filter(move |c| !piv.contains(c)).map(move |c| (i, c))
            })
            .collect();
        let mut base = vec![0u32; t * n];
        for (i, &pc) in pivots.iter().enumerate() {
            base[i * n + pc] = 1;
        }
        let mut digits = vec![0u32; free.len()];
        loop {
            let mut codes = base.clone();
            for (&(i, c), &d) in free.iter().zip(&digits) {
                codes[i * n + c] = d;
            }
            keys.push(SubspaceKey::from_codes(s, codes));
            // odometer increment
            let mut k = 0;
            while k < digits.len() {
                digits[k] += 1;
                if digits[k] < q {
                    break;
                }
                digits[k] = 0;
                k += 1;
            }
            if k == digits.len() {
                break;
            }
        }
        // next t-combination of 0..n
        let mut i = t;
        while i > 0 && pivots[i - 1] == n - t + i - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        pivots[i - 1] += 1;
        for j in i..t {
            pivots[j] = pivots[j - 1] + 1;
        }
    }
    keys.sort_unstable();
    Ok(keys)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;
    use crate::matspace::general_linear_group;

    /// Independent count: prod_{i<k} (q^n - q^i) / (q^k - q^i).
    fn gaussian_binomial_oracle(n: u32, k: u32, q: u128) -> u128 {
        let mut num = 1u128;
        let mut den = 1u128;
        for i in 0..k {
            num *= q.pow(n) - q.pow(i);
            den *= q.pow(k) - q.pow(i);
        }
        num / den
    }

    #[test]
    fn scaling_to_leading_one() {
        let f = FiniteField::new(3, 1).unwrap();
        let t = MatTuple::new(vec![Mat::from_rows(&f, &[[2, 0], [0, 0]]).unwrap()]).unwrap();
        let key = subspace_key(&f, &t);
        assert_eq!(key.rref, vec![1, 0, 0, 0]);
        assert_eq!(key.rank, 1);
    }

    #[test]
    fn order_independent_and_rank_deficient() {
        let f = FiniteField::new(2, 1).unwrap();
        let a = Mat::from_rows(&f, &[[1, 1], [0, 1]]).unwrap();
        let b = Mat::from_rows(&f, &[[0, 1], [1, 0]]).unwrap();
        let ab = subspace_key(&f, &MatTuple::new(vec![a.clone(), b.clone()]).unwrap());
        let ba = subspace_key(&f, &MatTuple::new(vec![b, a.clone()]).unwrap());
        assert_eq!(ab, ba);
        let aa = subspace_key(&f, &MatTuple::new(vec![a.clone(), a]).unwrap());
        assert_eq!(aa.rank, 1);
    }

    #[test]
    fn counts_match_gaussian_binomial() {
        for (p, s) in [(2u32, 2usize), (3, 2), (2, 3)] {
            let f = FiniteField::new(p, 1).unwrap();
            let n = (s * s) as u32;
            for t in 1..=n {
                if p == 2 && s == 3 && (3..=6).contains(&t) {
                    continue; // hundreds of thousands of keys; t = 2 and 7 cover the shape
                }
                let keys = enumerate_subspaces(&f, s, t as usize).unwrap();
                assert_eq!(keys.len() as u128, gaussian_binomial_oracle(n, t, p as u128), "q={p} s={s} t={t}");
                assert!(keys.windows(2).all(|w| w[0] < w[1]));
            }
        }
        let f4 = FiniteField::new(2, 2).unwrap();
        assert_eq!(enumerate_subspaces(&f4, 2, 2).unwrap().len() as u128, gaussian_binomial_oracle(4, 2, 4));
    }

    #[test]
    fn spec_counts() {
        let f2 = FiniteField::new(2, 1).unwrap();
        let f3 = FiniteField::new(3, 1).unwrap();
        assert_eq!(enumerate_subspaces(&f2, 2, 1).unwrap().len(), 15);
        assert_eq!(enumerate_subspaces(&f3, 2, 2).unwrap().len(), 130);
        assert_eq!(enumerate_subspaces(&f2, 3, 2).unwrap().len(), 43435);
        assert!(matches!(enumerate_subspaces(&f2, 2, 0), Err(Error::RangeError(_))));
        assert!(matches!(enumerate_subspaces(&f2, 2, 5), Err(Error::RangeError(_))));
    }

    #[test]
    fn enumerated_keys_are_fixed_points_of_canonicalization() {
        let f = FiniteField::new(3, 1).unwrap();
        for key in enumerate_subspaces(&f, 2, 2).unwrap() {
            let again = subspace_key(&f, &MatTuple::new(key.matrices()).unwrap());
            assert_eq!(again, key);
        }
    }

    #[test]
    fn key_invariant_under_recombination() {
        // every invertible recombination of a basis over F_2, t <= 3
        let f = FiniteField::new(2, 1).unwrap();
        let keys: Vec<_> = enumerate_subspaces(&f, 2, 3).unwrap().into_iter().step_by(3).collect();
        for t in 1..=3usize {
            let gl_t = general_linear_group(&f, t);
            let sample: BTreeSet<_> = enumerate_subspaces(&f, 2, t).unwrap().into_iter().step_by(5).collect();
            for key in sample.iter().chain(if t == 3 { keys.iter() } else { [].iter() }) {
                let basis = key.matrices();
                for b in &gl_t {
                    let mixed: Vec<Mat> = (0..t)
                        .map(|rho| {
                            (0..t).fold(Mat::zero(2), |acc, k| acc.add(&f, &basis[k].scale(&f, b.get(k, rho))))
                        })
                        .collect();
                    assert_eq!(&subspace_key(&f, &MatTuple::new(mixed).unwrap()), key);
                }
            }
        }
    }
}
