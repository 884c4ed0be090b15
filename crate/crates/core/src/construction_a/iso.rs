//! Isomorphism testing between two rings given by specs.
//!
//! A candidate isomorphism is `psi(a0, u, w) = (a0^s, E u^s, B' w_W^s, perm(w_V^s))`
//! for a field automorphism `s`, `E = C^-1` with `C` in GL(s, F), `B' = B^T`
//! with `B` in GL(t, F), and a permutation of the `V` indices. It is a ring
//! homomorphism exactly when
//! - `E[v][i] != 0` implies `sigma'_v = sigma_i`,
//! - `B'[rho][k] != 0` implies `theta'_rho = theta_k`, `perm` preserves theta on `V`,
//! - `sum_{v,m} d^rho_vm E[v][i] E[m][j]^(sigma'_v) = sum_k B'[rho][k] (a^k_ij)^s`.
//!
//! With every automorphism trivial the last line reads
//! `D_rho = sum_k B[k][rho] C^T A_k^s C`.

use std::collections::HashMap;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{FieldAutomorphism, FieldElement, FiniteField};
use crate::linalg::SpanSolver;
use crate::matspace::{gl_search_order, Mat, MatTuple};

use super::{ring_create, Ring, RingElement, RingSpec};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoWitness {
    pub sigma_global: FieldAutomorphism,
    #[serde(rename = "C")]
    pub c: Mat,
    #[serde(rename = "B")]
    pub b: Mat,
    /// `V` index `k` of the left ring maps to `V` index `v_perm[k]` of the right.
    pub v_perm: Vec<usize>,
}

/// A named isomorphism-testing mode.
pub trait IsoMode: Send + Sync {
    fn name(&self) -> &'static str;
    /// Rejects spec pairs outside the mode's scope.
    fn applicable(&self, left: &RingSpec, right: &RingSpec) -> Result<()>;
    /// First witness in search order, or `None` when the rings are not isomorphic.
    fn search(&self, left: &RingSpec, right: &RingSpec) -> Option<IsoWitness>;
}

struct Central;
struct GlobalTwist;
struct SingleGenerator;

impl IsoMode for Central {
    fn name(&self) -> &'static str {
        "central"
    }

    fn applicable(&self, left: &RingSpec, right: &RingSpec) -> Result<()> {
        let twisted = |s: &RingSpec| s.sigma.iter().chain(&s.theta).any(|e| !e.is_identity());
        if twisted(left) || twisted(right) {
            return Err(Error::ModeMismatch {
                mode: self.name().into(),
                reason: "every sigma and theta must be the identity".into(),
            });
        }
        Ok(())
    }

    fn search(&self, left: &RingSpec, right: &RingSpec) -> Option<IsoWitness> {
        general_search(left, right)
    }
}

impl IsoMode for GlobalTwist {
    fn name(&self) -> &'static str {
        "global_twist"
    }

    fn applicable(&self, _: &RingSpec, _: &RingSpec) -> Result<()> {
        Ok(())
    }

    fn search(&self, left: &RingSpec, right: &RingSpec) -> Option<IsoWitness> {
        general_search(left, right)
    }
}

impl IsoMode for SingleGenerator {
    fn name(&self) -> &'static str {
        "s1t1"
    }

    fn applicable(&self, left: &RingSpec, _: &RingSpec) -> Result<()> {
        if left.s != 1 || left.t != 1 {
            return Err(Error::ModeMismatch { mode: self.name().into(), reason: "requires s = t = 1".into() });
        }
        Ok(())
    }

    /// Here `d = g g^sigma_1 beta a^theta` always has the solution
    /// `g = 1`, trivial twist, `beta = d / a`, so only the automorphism data matter.
    fn search(&self, left: &RingSpec, right: &RingSpec) -> Option<IsoWitness> {
        let f = &left.field;
        if left.sigma != right.sigma || left.theta[0] != right.theta[0] {
            return None;
        }
        let v_perm = match_v(left, right)?;
        let a = left.matrices.mats()[0].get(0, 0);
        let d = right.matrices.mats()[0].get(0, 0);
        let beta = f.div(d, a).ok()?;
        Some(IsoWitness {
            sigma_global: FieldAutomorphism::IDENTITY,
            c: Mat::identity(1),
            b: Mat::from_entries(1, vec![beta]),
            v_perm,
        })
    }
}

fn registry() -> &'static HashMap<&'static str, Box<dyn IsoMode>> {
    static REG: OnceLock<HashMap<&'static str, Box<dyn IsoMode>>> = OnceLock::new();
    REG.get_or_init(|| {
        let modes: Vec<Box<dyn IsoMode>> = vec![Box::new(Central), Box::new(GlobalTwist), Box::new(SingleGenerator)];
        modes.into_iter().map(|m| (m.name(), m)).collect()
    })
}

/// Registered mode names, sorted.
pub fn iso_modes() -> Vec<&'static str> {
    let mut names: Vec<_> = registry().keys().copied().collect();
    names.sort_unstable();
    names
}

pub fn iso_mode(name: &str) -> Result<&'static dyn IsoMode> {
    registry().get(name).map(|m| m.as_ref()).ok_or_else(|| Error::UnknownStrategy(name.into()))
}

/// Decides whether the rings of `left` and `right` are isomorphic, returning
/// the first witness in search order: automorphism by ascending exponent,
/// then `C` with the identity first and the rest in ascending code order.
pub fn iso_test(left: &RingSpec, right: &RingSpec, mode: &str) -> Result<Option<IsoWitness>> {
    let mode = iso_mode(mode)?;
    left.validate()?;
    right.validate()?;
    let inv = |s: &RingSpec| (s.field.p(), s.n(), s.field.r(), s.s, s.t, s.lambda);
    if inv(left) != inv(right) {
        return Err(Error::InvariantMismatch(format!(
            "(p, n, r, s, t, lambda) = {:?} vs {:?}",
            inv(left),
            inv(right)
        )));
    }
    if left.field != right.field {
        return Err(Error::InvariantMismatch("fields use different moduli".into()));
    }
    mode.applicable(left, right)?;
    Ok(mode.search(left, right))
}

fn sorted(v: &[FieldAutomorphism]) -> Vec<FieldAutomorphism> {
    let mut v = v.to_vec();
    v.sort_unstable();
    v
}

/// Theta-preserving matching of `V` indices, smallest free index first.
fn match_v(left: &RingSpec, right: &RingSpec) -> Option<Vec<usize>> {
    let (lv, rv) = (&left.theta[left.t..], &right.theta[right.t..]);
    let mut used = vec![false; rv.len()];
    lv.iter()
        .map(|th| {
            let j = (0..rv.len()).find(|&j| !used[j] && rv[j] == *th)?;
            used[j] = true;
            Some(j)
        })
        .collect()
}

fn general_search(left: &RingSpec, right: &RingSpec) -> Option<IsoWitness> {
    if sorted(&left.sigma) != sorted(&right.sigma) || sorted(&left.theta[..left.t]) != sorted(&right.theta[..right.t]) {
        return None;
    }
    let v_perm = match_v(left, right)?;
    let f = &left.field;
    let (s, t) = (left.s, left.t);
    let d = right.matrices.mats();
    for sigma in FieldAutomorphism::all(f) {
        let twisted: Vec<_> = left.matrices.mats().iter().map(|a| a.entries().to_vec()).map(|row| {
            row.into_iter().map(|x| f.frobenius(sigma, x)).collect::<Vec<_>>()
        }).collect();
        let solver = SpanSolver::new(f, &twisted).expect("validated specs have independent matrices");
        'candidates: for c in gl_search_order(f, s) {
            let e = c.inverse(f).expect("search order yields invertible matrices");
            for v in 0..s {
                for i in 0..s {
                    if !e.get(v, i).is_zero() && right.sigma[v] != left.sigma[i] {
                        continue 'candidates;
                    }
                }
            }
            let mut bt = Vec::with_capacity(t);
            for (rho, d_rho) in d.iter().enumerate() {
                let m = pulled_back(f, d_rho, &e, &right.sigma);
                let Some(coeffs) = solver.coefficients(f, m.entries()) else {
                    continue 'candidates;
                };
                if coeffs.iter().enumerate().any(|(k, x)| !x.is_zero() && right.theta[rho] != left.theta[k]) {
                    continue 'candidates;
                }
                bt.push(coeffs);
            }
            let bprime = Mat::from_entries(t, bt.into_iter().flatten().collect());
            if !bprime.is_invertible(f) {
                continue;
            }
            return Some(IsoWitness { sigma_global: sigma, c, b: bprime.transpose(), v_perm });
        }
    }
    None
}

/// `M[i][j] = sum_{v,m} d[v][m] E[v][i] E[m][j]^(sigma'_v)`.
fn pulled_back(f: &FiniteField, d: &Mat, e: &Mat, sigma_right: &[FieldAutomorphism]) -> Mat {
    let s = d.size();
    let mut out = Mat::zero(s);
    for v in 0..s {
        for m in 0..s {
            let dvm = d.get(v, m);
            if dvm.is_zero() {
                continue;
            }
            for i in 0..s {
                let evi = e.get(v, i);
                if evi.is_zero() {
                    continue;
                }
                let lead = f.mul(dvm, evi);
                for j in 0..s {
                    let emj = f.frobenius(sigma_right[v], e.get(m, j));
                    if !emj.is_zero() {
                        out.set(i, j, f.add(out.get(i, j), f.mul(lead, emj)));
                    }
                }
            }
        }
    }
    out
}

/// The map `psi` described by `w`, from elements of `left` to elements of `right`.
fn psi(left: &RingSpec, w: &IsoWitness, e: &Mat, x: &RingElement) -> RingElement {
    let f = &left.field;
    let sg = |a: FieldElement| f.frobenius(w.sigma_global, a);
    let (s, t) = (left.s, left.t);
    let u = (0..s)
        .map(|v| (0..s).fold(FieldElement::ZERO, |acc, i| f.add(acc, f.mul(e.get(v, i), sg(x.u[i])))))
        .collect();
    let mut wv = vec![FieldElement::ZERO; t + left.lambda];
    for (rho, slot) in wv.iter_mut().enumerate().take(t) {
        *slot = (0..t).fold(FieldElement::ZERO, |acc, k| f.add(acc, f.mul(w.b.get(k, rho), sg(x.w[k]))));
    }
    for (k, &j) in w.v_perm.iter().enumerate() {
        wv[t + j] = sg(x.w[t + k]);
    }
    RingElement { alpha0: sg(x.alpha0), u, w: wv }
}

fn check_witness_shape(left: &RingSpec, right: &RingSpec, w: &IsoWitness) -> Result<Mat> {
    let f = &left.field;
    if w.c.size() != left.s || w.b.size() != left.t || w.v_perm.len() != left.lambda {
        return Err(Error::ShapeMismatch("witness does not match the spec dimensions".into()));
    }
    if w.sigma_global.exponent() >= f.r() {
        return Err(Error::BadAutomorphism { exponent: w.sigma_global.exponent(), r: f.r() });
    }
    let mut seen = vec![false; right.lambda];
    for &j in &w.v_perm {
        if j >= right.lambda || std::mem::replace(&mut seen[j], true) {
            return Err(Error::ShapeMismatch("v_perm is not a permutation".into()));
        }
    }
    if !w.b.is_invertible(f) {
        return Err(Error::ShapeMismatch("B is singular".into()));
    }
    w.c.inverse(f).ok_or(Error::SingularC)
}

/// Builds the element map of `w` and checks that it is a bijective ring
/// homomorphism `left -> right`: unit and products on every pair of
/// prime-field basis elements, bijectivity by rank, and additionally every
/// pair of elements when `|R| <= 729`.
pub fn verify_witness(left: &RingSpec, right: &RingSpec, w: &IsoWitness) -> Result<bool> {
    let e = check_witness_shape(left, right, w)?;
    let rl = ring_create(left.clone())?;
    let rr = ring_create(right.clone())?;
    let map = |x: &RingElement| psi(left, w, &e, x);
    if map(&rl.one()) != rr.one() {
        return Ok(false);
    }
    let basis = rl.prime_basis();
    for x in &basis {
        for y in &basis {
            if map(&rl.mul(x, y)) != rr.mul(&map(x), &map(y)) || map(&rl.add(x, y)) != rr.add(&map(x), &map(y)) {
                return Ok(false);
            }
        }
    }
    let fp = FiniteField::new(left.field.p(), 1).expect("p is prime");
    let images: Vec<Vec<FieldElement>> = basis
        .iter()
        .map(|x| {
            let y = map(x);
            (0..rr.n())
                .flat_map(|slot| left.field.digits(rr.slot(&y, slot)))
                .map(FieldElement::new)
                .collect()
        })
        .collect();
    if crate::linalg::rank(&fp, &images) != basis.len() {
        return Ok(false);
    }
    if rl.order().is_some_and(|o| o <= 729) {
        Ok(exhaustive_check(&rl, &rr, &map))
    } else {
        Ok(true)
    }
}

fn exhaustive_check(rl: &Ring, rr: &Ring, map: &dyn Fn(&RingElement) -> RingElement) -> bool {
    let order = rl.order().expect("small ring") as usize;
    let elems: Vec<RingElement> = (0..order as u128).map(|c| rl.element(c)).collect();
    let images: Vec<RingElement> = elems.iter().map(map).collect();
    let codes: Vec<u128> = images.iter().map(|y| rr.code(y)).collect();
    let mut seen = vec![false; order];
    for &c in &codes {
        if std::mem::replace(&mut seen[c as usize], true) {
            return false;
        }
    }
    for (x, fx) in elems.iter().zip(&images) {
        for (y, fy) in elems.iter().zip(&images) {
            if codes[rl.code(&rl.mul(x, y)) as usize] != rr.code(&rr.mul(fx, fy)) {
                return false;
            }
        }
    }
    true
}

/// The spec whose ring is the image of `spec`'s ring under the map described
/// by `w`. Automorphisms on the target side are read off the nonzero pattern
/// of `C^-1` and `B`; a pattern that mixes automorphism types is rejected.
pub fn transport_spec(spec: &RingSpec, w: &IsoWitness) -> Result<RingSpec> {
    let f = &spec.field;
    let (s, t, lambda) = (spec.s, spec.t, spec.lambda);
    let e = check_witness_shape(spec, spec, w)?;
    let inherit = |m: &Mat, src: &[FieldAutomorphism], rows: usize| -> Result<Vec<FieldAutomorphism>> {
        (0..rows)
            .map(|v| {
                let types: Vec<_> = (0..src.len()).filter(|&i| !m.get(v, i).is_zero()).map(|i| src[i]).collect();
                if types.windows(2).any(|p| p[0] != p[1]) {
                    return Err(Error::ShapeMismatch(format!("row {} mixes automorphism types", v + 1)));
                }
                Ok(types[0])
            })
            .collect()
    };
    let sigma = inherit(&e, &spec.sigma, s)?;
    let bprime = w.b.transpose();
    let mut theta = inherit(&bprime, &spec.theta[..t], t)?;
    let mut tail = vec![FieldAutomorphism::IDENTITY; lambda];
    for (k, &j) in w.v_perm.iter().enumerate() {
        tail[j] = spec.theta[t + k];
    }
    theta.extend(tail);

    let ring = ring_create(spec.clone())?;
    let inv_sigma = FieldAutomorphism::new(f, (f.r() - w.sigma_global.exponent()) % f.r())?;
    // preimage of the target basis vector u'_v has coordinates (C[i][v])^(sigma^-1)
    let pre: Vec<RingElement> = (0..s)
        .map(|v| {
            let mut x = ring.zero();
            for i in 0..s {
                x.u[i] = f.frobenius(inv_sigma, w.c.get(i, v));
            }
            x
        })
        .collect();
    let mut mats = vec![Mat::zero(s); t];
    for v in 0..s {
        for m in 0..s {
            let image = psi(spec, w, &e, &ring.mul(&pre[v], &pre[m]));
            for (rho, mat) in mats.iter_mut().enumerate() {
                mat.set(v, m, image.w[rho]);
            }
        }
    }
    let out = RingSpec { field: f.clone(), s, t, lambda, matrices: MatTuple::new(mats)?, sigma, theta };
    out.validate()?;
    Ok(out)
}
