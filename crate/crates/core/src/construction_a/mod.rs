//! Rings `R = F + U + V + W` built from a field, structural matrices and
//! field automorphisms attached to each basis vector of `U`, `W` and `V`.
//!
//! `V` is stored after `W`: indices `t .. t + lambda` of the `w` component
//! carry no structure constants.

mod axioms;
mod iso;
mod structure;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf::{FieldAutomorphism, FieldDesc, FieldElement, FiniteField};
use crate::matspace::{Mat, MatTuple};

pub use axioms::{ring_axioms_check, AxiomsMode, AxiomsReport, Counterexample, EXHAUSTIVE_TRIPLE_LIMIT};
pub use iso::{iso_mode, iso_modes, iso_test, transport_spec, verify_witness, IsoMode, IsoWitness};
pub use structure::{ring_structure, Invariants, RadicalDims, StructureReport};

/// Input data for a ring: dimensions, structural matrices `a_ij^k` and the
/// automorphisms `sigma_i` (on `U`) and `theta_k` (on `W`, then `V`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingSpec {
    pub field: FiniteField,
    pub s: usize,
    pub t: usize,
    pub lambda: usize,
    pub matrices: MatTuple,
    pub sigma: Vec<FieldAutomorphism>,
    pub theta: Vec<FieldAutomorphism>,
}

#[derive(Serialize, Deserialize)]
struct RingSpecJson {
    p: u32,
    r: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    modulus: Option<Vec<u32>>,
    s: usize,
    t: usize,
    lambda: usize,
    matrices: Vec<Mat>,
    sigma: Vec<u32>,
    theta: Vec<u32>,
}

impl RingSpec {
    /// A spec with every automorphism the identity.
    pub fn untwisted(field: &FiniteField, matrices: MatTuple, lambda: usize) -> Self {
        let (s, t) = (matrices.size(), matrices.len());
        Self {
            field: field.clone(),
            s,
            t,
            lambda,
            matrices,
            sigma: vec![FieldAutomorphism::IDENTITY; s],
            theta: vec![FieldAutomorphism::IDENTITY; t + lambda],
        }
    }

    /// `n = 1 + s + t + lambda`.
    pub fn n(&self) -> usize {
        1 + self.s + self.t + self.lambda
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: RingSpecJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let field = FiniteField::from_desc(&FieldDesc { p: raw.p, r: raw.r, modulus: raw.modulus })?;
        let matrices = MatTuple::new(raw.matrices)?;
        let auts = |v: Vec<u32>| v.into_iter().map(|e| FieldAutomorphism::new(&field, e)).collect::<Result<Vec<_>>>();
        let sigma = auts(raw.sigma)?;
        let theta = auts(raw.theta)?;
        Ok(Self { s: raw.s, t: raw.t, lambda: raw.lambda, matrices, sigma, theta, field })
    }

    pub fn to_json(&self) -> String {
        let desc = self.field.desc();
        let raw = RingSpecJson {
            p: desc.p,
            r: desc.r,
            modulus: desc.modulus,
            s: self.s,
            t: self.t,
            lambda: self.lambda,
            matrices: self.matrices.mats().to_vec(),
            sigma: self.sigma.iter().map(|e| e.exponent()).collect(),
            theta: self.theta.iter().map(|e| e.exponent()).collect(),
        };
        serde_json::to_string(&raw).expect("ring specs always serialize")
    }

    /// Structural checks shared by ring creation and isomorphism testing.
    fn validate(&self) -> Result<()> {
        let f = &self.field;
        if self.s == 0 || self.t == 0 {
            return Err(Error::ShapeMismatch("s and t must be at least 1".into()));
        }
        if self.matrices.len() != self.t {
            return Err(Error::ShapeMismatch(format!("{} matrices for t = {}", self.matrices.len(), self.t)));
        }
        if self.matrices.size() != self.s {
            return Err(Error::ShapeMismatch(format!("matrices are {0}x{0} but s = {1}", self.matrices.size(), self.s)));
        }
        if self.sigma.len() != self.s {
            return Err(Error::ShapeMismatch(format!("{} sigma entries for s = {}", self.sigma.len(), self.s)));
        }
        if self.theta.len() != self.t + self.lambda {
            return Err(Error::ShapeMismatch(format!(
                "{} theta entries for t + lambda = {}",
                self.theta.len(),
                self.t + self.lambda
            )));
        }
        for m in self.matrices.mats() {
            m.check_field(f)?;
        }
        for &e in self.sigma.iter().chain(&self.theta) {
            FieldAutomorphism::new(f, e.exponent())?;
        }
        for (k, a) in self.matrices.mats().iter().enumerate() {
            for i in 0..self.s {
                for j in 0..self.s {
                    if !a.get(i, j).is_zero() && self.theta[k] != self.sigma[i].compose(self.sigma[j], f) {
                        return Err(Error::AutomorphismConstraint { i: i + 1, j: j + 1, k: k + 1 });
                    }
                }
            }
        }
        let rank = self.matrices.rank(f);
        if rank < self.t {
            return Err(Error::DependentMatrices { rank, t: self.t });
        }
        Ok(())
    }
}

impl Serialize for RingSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: serde_json::Value = serde_json::from_str(&self.to_json()).map_err(serde::ser::Error::custom)?;
        v.serialize(s)
    }
}

/// An element `(alpha0, sum alpha_i u_i, sum gamma_k w_k)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingElement {
    pub alpha0: FieldElement,
    pub u: Vec<FieldElement>,
    pub w: Vec<FieldElement>,
}

/// A validated ring. Elements are also addressed by an integer code: the
/// base-`q` digits `(alpha0, u_1, .., u_s, w_1, .., w_(t+lambda))`, `alpha0`
/// most significant.
#[derive(Debug, Clone)]
pub struct Ring {
    spec: RingSpec,
    /// `(k, i, j, a_ij^k)` for the nonzero structure constants.
    terms: Vec<(usize, usize, usize, FieldElement)>,
}

/// Validates `spec` and builds the ring.
pub fn ring_create(spec: RingSpec) -> Result<Ring> {
    spec.validate()?;
    let mut terms = Vec::new();
    for (k, a) in spec.matrices.mats().iter().enumerate() {
        for i in 0..spec.s {
            for j in 0..spec.s {
                let c = a.get(i, j);
                if !c.is_zero() {
                    terms.push((k, i, j, c));
                }
            }
        }
    }
    Ok(Ring { spec, terms })
}

impl Ring {
    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    pub fn field(&self) -> &FiniteField {
        &self.spec.field
    }

    pub fn n(&self) -> usize {
        self.spec.n()
    }

    /// `|R| = q^n`, or `None` if that overflows `u128`.
    pub fn order(&self) -> Option<u128> {
        (self.field().q() as u128).checked_pow(self.n() as u32)
    }

    pub fn zero(&self) -> RingElement {
        RingElement {
            alpha0: FieldElement::ZERO,
            u: vec![FieldElement::ZERO; self.spec.s],
            w: vec![FieldElement::ZERO; self.spec.t + self.spec.lambda],
        }
    }

    pub fn one(&self) -> RingElement {
        RingElement { alpha0: FieldElement::ONE, ..self.zero() }
    }

    pub fn contains(&self, x: &RingElement) -> bool {
        let q = self.field().q();
        x.u.len() == self.spec.s
            && x.w.len() == self.spec.t + self.spec.lambda
            && std::iter::once(&x.alpha0).chain(&x.u).chain(&x.w).all(|e| e.code() < q)
    }

    pub fn element(&self, mut code: u128) -> RingElement {
        let q = self.field().q() as u128;
        let mut x = self.zero();
        for slot in (0..self.n()).rev() {
            let d = FieldElement::new((code % q) as u32);
            code /= q;
            *self.slot_mut(&mut x, slot) = d;
        }
        x
    }

    pub fn code(&self, x: &RingElement) -> u128 {
        let q = self.field().q() as u128;
        std::iter::once(&x.alpha0).chain(&x.u).chain(&x.w).fold(0, |acc, e| acc * q + e.code() as u128)
    }

    /// Component `slot` of `x`: 0 is `alpha0`, then `u`, then `w`.
    pub fn slot(&self, x: &RingElement, slot: usize) -> FieldElement {
        let s = self.spec.s;
        match slot {
            0 => x.alpha0,
            i if i <= s => x.u[i - 1],
            k => x.w[k - 1 - s],
        }
    }

    fn slot_mut<'a>(&self, x: &'a mut RingElement, slot: usize) -> &'a mut FieldElement {
        let s = self.spec.s;
        match slot {
            0 => &mut x.alpha0,
            i if i <= s => &mut x.u[i - 1],
            k => &mut x.w[k - 1 - s],
        }
    }

    /// The element with `c` in component `slot` and zeros elsewhere.
    pub fn unit_vector(&self, slot: usize, c: FieldElement) -> RingElement {
        let mut x = self.zero();
        *self.slot_mut(&mut x, slot) = c;
        x
    }

    /// Additive basis over the prime field: `x^d` in each component.
    pub fn prime_basis(&self) -> Vec<RingElement> {
        let f = self.field();
        let mut out = Vec::new();
        for slot in 0..self.n() {
            for d in 0..f.r() {
                out.push(self.unit_vector(slot, FieldElement::new(f.p().pow(d))));
            }
        }
        out
    }

    pub fn add(&self, x: &RingElement, y: &RingElement) -> RingElement {
        let f = self.field();
        let zip = |a: &[FieldElement], b: &[FieldElement]| a.iter().zip(b).map(|(&a, &b)| f.add(a, b)).collect();
        RingElement { alpha0: f.add(x.alpha0, y.alpha0), u: zip(&x.u, &y.u), w: zip(&x.w, &y.w) }
    }

    pub fn neg(&self, x: &RingElement) -> RingElement {
        let f = self.field();
        RingElement {
            alpha0: f.neg(x.alpha0),
            u: x.u.iter().map(|&a| f.neg(a)).collect(),
            w: x.w.iter().map(|&a| f.neg(a)).collect(),
        }
    }

    /// The product
    /// `(a0, a_i, c_k) (b0, b_i, d_k) = (a0 b0,
    ///   a0 b_i + a_i b0^sigma_i,
    ///   a0 d_k + c_k b0^theta_k + sum_ij a_ij^k a_i b_j^sigma_i)`.
    pub fn mul(&self, x: &RingElement, y: &RingElement) -> RingElement {
        let f = self.field();
        let spec = &self.spec;
        let alpha0 = f.mul(x.alpha0, y.alpha0);
        let u = (0..spec.s)
            .map(|i| f.add(f.mul(x.alpha0, y.u[i]), f.mul(x.u[i], f.frobenius(spec.sigma[i], y.alpha0))))
            .collect();
        let mut w: Vec<FieldElement> = (0..spec.t + spec.lambda)
            .map(|k| f.add(f.mul(x.alpha0, y.w[k]), f.mul(x.w[k], f.frobenius(spec.theta[k], y.alpha0))))
            .collect();
        for &(k, i, j, c) in &self.terms {
            if x.u[i].is_zero() || y.u[j].is_zero() {
                continue;
            }
            let term = f.mul(c, f.mul(x.u[i], f.frobenius(spec.sigma[i], y.u[j])));
            w[k] = f.add(w[k], term);
        }
        RingElement { alpha0, u, w }
    }

    /// Full multiplication table as element codes, `table[x][y] = code(x y)`.
    pub fn multiplication_table(&self, limit: u128) -> Result<Vec<Vec<u128>>> {
        let order = self.order().filter(|&o| o <= limit).ok_or(Error::TooLargeForExhaustive {
            order: self.order().unwrap_or(u128::MAX),
        })?;
        let elems: Vec<RingElement> = (0..order).map(|c| self.element(c)).collect();
        Ok(elems.iter().map(|x| elems.iter().map(|y| self.code(&self.mul(x, y))).collect()).collect())
    }
}

/// `x y` in `ring`.
pub fn ring_mul(ring: &Ring, x: &RingElement, y: &RingElement) -> RingElement {
    ring.mul(x, y)
}
