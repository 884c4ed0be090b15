//! Row reduction over a [`FiniteField`].

use crate::gf::{FieldElement, FiniteField};

pub type Row = Vec<FieldElement>;

/// Reduces `rows` to reduced row echelon form in place, dropping zero rows.
/// Returns the pivot column of each remaining row.
pub fn rref(field: &FiniteField, rows: &mut Vec<Row>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..ncols {
        if top == rows.len() {
            break;
        }
        let Some(found) = (top..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(top, found);
        let inv = field.inv_nonzero(rows[top][col]);
        if inv != FieldElement::ONE {
            for x in rows[top][col..].iter_mut() {
                *x = field.mul(*x, inv);
            }
        }
        let pivot_row = rows[top].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == top || row[col].is_zero() {
                continue;
            }
            let factor = row[col];
            for (x, &y) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                if !y.is_zero() {
                    *x = field.sub(*x, field.mul(factor, y));
                }
            }
        }
        pivots.push(col);
        top += 1;
    }
    rows.truncate(top);
    pivots
}

pub fn rank(field: &FiniteField, rows: &[Row]) -> usize {
    let mut rows = rows.to_vec();
    rref(field, &mut rows).len()
}

/// Basis of `{x : A x = 0}` for the `m x n` matrix given by its rows.
pub fn kernel(field: &FiniteField, rows: &[Row], ncols: usize) -> Vec<Row> {
    let mut rows = rows.to_vec();
    let pivots = rref(field, &mut rows);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![FieldElement::ZERO; ncols];
        v[free] = FieldElement::ONE;
        for (row, &pc) in rows.iter().zip(&pivots) {
            v[pc] = field.neg(row[free]);
        }
        basis.push(v);
    }
    basis
}

/// Expresses vectors in terms of a fixed list of independent vectors.
#[derive(Debug, Clone)]
pub struct SpanSolver {
    /// RREF of the basis; `transform[i]` writes `reduced[i]` in the original basis.
    reduced: Vec<Row>,
    transform: Vec<Row>,
    pivots: Vec<usize>,
    dim: usize,
}

impl SpanSolver {
    /// Returns `None` if the basis vectors are dependent.
    pub fn new(field: &FiniteField, basis: &[Row]) -> Option<Self> {
        let t = basis.len();
        let n = basis.first().map_or(0, |r| r.len());
        let mut aug: Vec<Row> = basis
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.extend((0..t).map(|j| if i == j { FieldElement::ONE } else { FieldElement::ZERO }));
                r
            })
            .collect();
        let pivots = rref(field, &mut aug);
        if pivots.len() < t || pivots.iter().any(|&c| c >= n) {
            return None;
        }
        let reduced = aug.iter().map(|r| r[..n].to_vec()).collect();
        let transform = aug.iter().map(|r| r[n..].to_vec()).collect();
        Some(Self { reduced, transform, pivots, dim: n })
    }

    /// Coefficients `c` with `v = sum_k c[k] basis[k]`, or `None` if `v`
    /// lies outside the span.
    pub fn coefficients(&self, field: &FiniteField, v: &[FieldElement]) -> Option<Row> {
        debug_assert_eq!(v.len(), self.dim);
        let t = self.transform.len();
        let mut residual = v.to_vec();
        let mut coeffs = vec![FieldElement::ZERO; t];
        for ((row, tr), &pc) in self.reduced.iter().zip(&self.transform).zip(&self.pivots) {
            let c = residual[pc];
            if c.is_zero() {
                continue;
            }
            for (x, &y) in residual.iter_mut().zip(row) {
                *x = field.sub(*x, field.mul(c, y));
            }
            for (x, &y) in coeffs.iter_mut().zip(tr) {
                *x = field.add(*x, field.mul(c, y));
            }
        }
        residual.iter().all(|x| x.is_zero()).then_some(coeffs)
    }
}
