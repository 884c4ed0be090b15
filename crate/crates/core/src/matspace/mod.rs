//! Square matrices over a finite field and spaces spanned by them.

mod action;
mod compat;
mod reps;
mod subspace;

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gf::{FieldAutomorphism, FieldElement, FiniteField};
use crate::linalg;

pub use action::{
    congruence_twist, general_linear_group, gl_generators, gl_order, gl_search_order, GroupElement,
};
pub use compat::{dead_indices, tuple_compatible, CompatReport};
pub use reps::{case_rep_list, irreducible_trace, newman_symmetric_reps, sign_coset_reps};
pub use subspace::{enumerate_subspaces, subspace_key, SubspaceKey};

/// An `s x s` matrix over a finite field, row-major.
///
/// Ordering is lexicographic on the row-major entry codes, which agrees with
/// the base-`q` integer code of [`Mat::code`] for matrices of equal size.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    s: usize,
    entries: Vec<FieldElement>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}

impl Mat {
    pub fn zero(s: usize) -> Self {
        Self { s, entries: vec![FieldElement::ZERO; s * s] }
    }

    pub fn identity(s: usize) -> Self {
        let mut m = Self::zero(s);
        for i in 0..s {
            m.set(i, i, FieldElement::ONE);
        }
        m
    }

    /// Entries are not checked against any field.
    pub fn from_entries(s: usize, entries: Vec<FieldElement>) -> Self {
        assert_eq!(entries.len(), s * s, "entry count must be s^2");
        Self { s, entries }
    }

    /// Builds a matrix from rows of element codes, validating each code.
    pub fn from_rows<R: AsRef<[u32]>>(field: &FiniteField, rows: &[R]) -> Result<Self> {
        let s = rows.len();
        let mut entries = Vec::with_capacity(s * s);
        for row in rows {
            let row = row.as_ref();
            if row.len() != s {
                return Err(Error::ShapeMismatch(format!("row of length {} in {s}x{s} matrix", row.len())));
            }
            for &c in row {
                entries.push(field.elem(c as u64)?);
            }
        }
        Ok(Self { s, entries })
    }

    /// Like [`Mat::from_rows`] but reduces signed integers into the prime field.
    pub fn from_ints<R: AsRef<[i64]>>(field: &FiniteField, rows: &[R]) -> Self {
        let s = rows.len();
        let entries = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.as_ref().len(), s);
                r.as_ref().iter().map(|&x| field.from_int(x))
            })
            .collect();
        Self { s, entries }
    }

    /// Decodes a base-`q` code, first entry most significant.
    pub fn from_code(field: &FiniteField, s: usize, mut code: u64) -> Self {
        let q = field.q() as u64;
        let mut entries = vec![FieldElement::ZERO; s * s];
        for slot in entries.iter_mut().rev() {
            *slot = FieldElement::new((code % q) as u32);
            code /= q;
        }
        Self { s, entries }
    }

    /// Base-`q` code with the first entry most significant, if it fits in `u64`.
    pub fn code(&self, field: &FiniteField) -> Option<u64> {
        let q = field.q() as u64;
        self.entries.iter().try_fold(0u64, |acc, e| acc.checked_mul(q)?.checked_add(e.code() as u64))
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.s
    }

    #[inline]
    pub fn entries(&self) -> &[FieldElement] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.entries[i * self.s + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        self.entries[i * self.s + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        self.entries.chunks(self.s.max(1)).map(|r| r.iter().map(|e| e.code()).collect()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.s).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zero(self.s);
        for i in 0..self.s {
            for j in 0..self.s {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, field: &FiniteField, other: &Self) -> Self {
        let s = self.s;
        debug_assert_eq!(s, other.s);
        let mut out = Self::zero(s);
        for i in 0..s {
            for k in 0..s {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..s {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * s + j;
                        out.entries[idx] = field.add(out.entries[idx], field.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, field: &FiniteField, other: &Self) -> Self {
        let entries = self.entries.iter().zip(&other.entries).map(|(&a, &b)| field.add(a, b)).collect();
        Self { s: self.s, entries }
    }

    pub fn scale(&self, field: &FiniteField, c: FieldElement) -> Self {
        Self { s: self.s, entries: self.entries.iter().map(|&a| field.mul(c, a)).collect() }
    }

    /// Entrywise application of a field automorphism.
    pub fn twist(&self, field: &FiniteField, e: FieldAutomorphism) -> Self {
        if e.is_identity() {
            return self.clone();
        }
        Self { s: self.s, entries: self.entries.iter().map(|&a| field.frobenius(e, a)).collect() }
    }

    fn as_rows(&self) -> Vec<linalg::Row> {
        self.entries.chunks(self.s.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn rank(&self, field: &FiniteField) -> usize {
        linalg::rank(field, &self.as_rows())
    }

    pub fn det(&self, field: &FiniteField) -> FieldElement {
        let s = self.s;
        let mut m = self.as_rows();
        let mut det = FieldElement::ONE;
        for col in 0..s {
            let Some(p) = (col..s).find(|&i| !m[i][col].is_zero()) else {
                return FieldElement::ZERO;
            };
            if p != col {
                m.swap(p, col);
                det = field.neg(det);
            }
            let pivot = m[col][col];
            det = field.mul(det, pivot);
            let inv = field.inv_nonzero(pivot);
            for i in col + 1..s {
                let factor = field.mul(m[i][col], inv);
                if factor.is_zero() {
                    continue;
                }
                for j in col..s {
                    let sub = field.mul(factor, m[col][j]);
                    m[i][j] = field.sub(m[i][j], sub);
                }
            }
        }
        det
    }

    pub fn is_invertible(&self, field: &FiniteField) -> bool {
        !self.det(field).is_zero()
    }

    pub fn inverse(&self, field: &FiniteField) -> Option<Self> {
        let s = self.s;
        let mut aug: Vec<linalg::Row> = self
            .as_rows()
            .into_iter()
            .enumerate()
            .map(|(i, mut r)| {
                r.extend((0..s).map(|j| if i == j { FieldElement::ONE } else { FieldElement::ZERO }));
                r
            })
            .collect();
        let pivots = linalg::rref(field, &mut aug);
        if pivots.len() < s || pivots.iter().any(|&c| c >= s) {
            return None;
        }
        let entries = aug.iter().flat_map(|r| r[s..].iter().copied()).collect();
        Some(Self { s, entries })
    }

    /// Block-diagonal sum `blocks[0] + blocks[1] + ..` padded with zeros to `s`.
    pub fn direct_sum(s: usize, blocks: &[Mat]) -> Self {
        let mut out = Self::zero(s);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.s {
                for j in 0..b.s {
                    out.set(off + i, off + j, b.get(i, j));
                }
            }
            off += b.s;
        }
        assert!(off <= s, "blocks exceed the target size");
        out
    }

    pub fn check_field(&self, field: &FiniteField) -> Result<()> {
        for e in &self.entries {
            field.elem(e.code() as u64)?;
        }
        Ok(())
    }
}

impl Serialize for Mat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<u32>>::deserialize(d)?;
        let s = rows.len();
        if rows.iter().any(|r| r.len() != s) {
            return Err(serde::de::Error::custom("matrix must be square"));
        }
        let entries = rows.into_iter().flatten().map(FieldElement::new).collect();
        Ok(Mat { s, entries })
    }
}

/// An ordered list of `t` matrices of a common size.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct MatTuple {
    mats: Vec<Mat>,
}

impl MatTuple {
    pub fn new(mats: Vec<Mat>) -> Result<Self> {
        let Some(first) = mats.first() else {
            return Err(Error::ShapeMismatch("empty matrix tuple".into()));
        };
        let s = first.size();
        if let Some(bad) = mats.iter().find(|m| m.size() != s) {
            return Err(Error::ShapeMismatch(format!("{}x{} matrix in tuple of {s}x{s}", bad.size(), bad.size())));
        }
        Ok(Self { mats })
    }

    pub fn size(&self) -> usize {
        self.mats[0].size()
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn mats(&self) -> &[Mat] {
        &self.mats
    }

    pub fn into_mats(self) -> Vec<Mat> {
        self.mats
    }

    /// Each matrix flattened row-major into one coordinate row.
    pub fn coordinate_rows(&self) -> Vec<linalg::Row> {
        self.mats.iter().map(|m| m.entries.clone()).collect()
    }

    pub fn rank(&self, field: &FiniteField) -> usize {
        linalg::rank(field, &self.coordinate_rows())
    }
}

impl<'de> Deserialize<'de> for MatTuple {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let mats = Vec::<Mat>::deserialize(d)?;
        MatTuple::new(mats).map_err(serde::de::Error::custom)
    }
}
