use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::gf::{FieldAutomorphism, FieldElement, FiniteField};
use crate::linalg;
use crate::matspace::{dead_indices, enumerate_subspaces, general_linear_group, gl_generators, gl_order, GroupElement, Mat};

/// Objects are encoded as flat code sequences; the order on keys is the
/// order used to pick canonical representatives.
pub type Key = Vec<u32>;

/// Per-object flags aggregated over an orbit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ObjectFlags {
    /// Nonzero, independent basis with no dead index.
    pub compatible: bool,
    /// Every element symmetric.
    pub symmetric: bool,
}

/// A finite set of objects with a group acting on it.
pub trait ActionSpace: Sync {
    fn field(&self) -> &FiniteField;
    /// Size of the square matrices making up an object.
    fn s(&self) -> usize;
    /// All objects in ascending key order.
    fn ground_set(&self) -> Result<Vec<Key>>;
    fn group_order(&self) -> u128;
    /// Every group element; materialized on first use.
    fn group_elements(&self) -> &[GroupElement];
    fn generators(&self) -> &[GroupElement];
    fn act(&self, g: &GroupElement, key: &[u32]) -> Key;
    fn flags(&self, key: &[u32]) -> ObjectFlags;
}

fn to_mats(s: usize, key: &[u32]) -> Vec<Mat> {
    key.chunks(s * s).map(|c| Mat::from_entries(s, c.iter().map(|&x| FieldElement::new(x)).collect())).collect()
}

fn flags_of(mats: &[Mat]) -> ObjectFlags {
    let nonzero = mats.iter().any(|m| !m.is_zero());
    ObjectFlags {
        compatible: nonzero && dead_indices(mats).is_empty(),
        symmetric: mats.iter().all(Mat::is_symmetric),
    }
}

/// Single matrices under `A -> C^T A C`.
pub struct MatrixSpace {
    field: FiniteField,
    s: usize,
    symmetric_only: bool,
    gens: Vec<GroupElement>,
    elements: OnceLock<Vec<GroupElement>>,
}

impl MatrixSpace {
    pub fn new(field: &FiniteField, s: usize, symmetric_only: bool) -> Result<Self> {
        if s == 0 {
            return Err(Error::RangeError("s must be at least 1".into()));
        }
        Ok(Self {
            field: field.clone(),
            s,
            symmetric_only,
            gens: gl_generators(field, s).into_iter().map(GroupElement::linear).collect(),
            elements: OnceLock::new(),
        })
    }
}

impl ActionSpace for MatrixSpace {
    fn field(&self) -> &FiniteField {
        &self.field
    }

    fn s(&self) -> usize {
        self.s
    }

    fn ground_set(&self) -> Result<Vec<Key>> {
        let total = (self.field.q() as u64)
            .checked_pow((self.s * self.s) as u32)
            .filter(|&n| n <= 1 << 32)
            .ok_or_else(|| Error::RangeError(format!("q^(s^2) too large for s = {}", self.s)))?;
        Ok((0..total)
            .map(|c| Mat::from_code(&self.field, self.s, c))
            .filter(|m| !self.symmetric_only || m.is_symmetric())
            .map(|m| m.entries().iter().map(|e| e.code()).collect())
            .collect())
    }

    fn group_order(&self) -> u128 {
        gl_order(self.field.q(), self.s)
    }

    fn group_elements(&self) -> &[GroupElement] {
        self.elements
            .get_or_init(|| general_linear_group(&self.field, self.s).into_iter().map(GroupElement::linear).collect())
    }

    fn generators(&self) -> &[GroupElement] {
        &self.gens
    }

    fn act(&self, g: &GroupElement, key: &[u32]) -> Key {
        let a = Mat::from_entries(self.s, key.iter().map(|&x| FieldElement::new(x)).collect());
        g.apply(&self.field, &a).entries().iter().map(|e| e.code()).collect()
    }

    fn flags(&self, key: &[u32]) -> ObjectFlags {
        flags_of(&to_mats(self.s, key))
    }
}

/// `t`-dimensional subspaces of `M_s(F)` under
/// `S -> span{C^T A^sigma C : A in S}`, keyed by RREF.
pub struct SubspaceSpace {
    field: FiniteField,
    s: usize,
    t: usize,
    use_frobenius: bool,
    gens: Vec<GroupElement>,
    elements: OnceLock<Vec<GroupElement>>,
}

impl SubspaceSpace {
    pub fn new(field: &FiniteField, s: usize, t: usize, use_frobenius: bool) -> Result<Self> {
        if s == 0 || t == 0 || t > s * s {
            return Err(Error::RangeError(format!("t = {t} outside [1, {}]", s * s)));
        }
        let mut gens: Vec<GroupElement> = gl_generators(field, s).into_iter().map(GroupElement::linear).collect();
        if use_frobenius && field.r() > 1 {
            gens.push(GroupElement::new(Mat::identity(s), FieldAutomorphism::new(field, 1)?));
        }
        Ok(Self { field: field.clone(), s, t, use_frobenius, gens, elements: OnceLock::new() })
    }

    fn automorphisms(&self) -> u32 {
        if self.use_frobenius {
            self.field.r()
        } else {
            1
        }
    }
}

impl ActionSpace for SubspaceSpace {
    fn field(&self) -> &FiniteField {
        &self.field
    }

    fn s(&self) -> usize {
        self.s
    }

    fn ground_set(&self) -> Result<Vec<Key>> {
        Ok(enumerate_subspaces(&self.field, self.s, self.t)?.into_iter().map(|k| k.rref).collect())
    }

    fn group_order(&self) -> u128 {
        gl_order(self.field.q(), self.s) * self.automorphisms() as u128
    }

    fn group_elements(&self) -> &[GroupElement] {
        self.elements.get_or_init(|| {
            let gl = general_linear_group(&self.field, self.s);
            (0..self.automorphisms())
                .flat_map(|e| gl.iter().map(move |c| GroupElement::new(c.clone(), FieldAutomorphism::new(&self.field, e).expect("e < r"))))
                .collect()
        })
    }

    fn generators(&self) -> &[GroupElement] {
        &self.gens
    }

    fn act(&self, g: &GroupElement, key: &[u32]) -> Key {
        let mut rows: Vec<linalg::Row> = to_mats(self.s, key).iter().map(|m| g.apply(&self.field, m).entries().to_vec()).collect();
        linalg::rref(&self.field, &mut rows);
        rows.iter().flat_map(|r| r.iter().map(|e| e.code())).collect()
    }

    fn flags(&self, key: &[u32]) -> ObjectFlags {
        flags_of(&to_mats(self.s, key))
    }
}
