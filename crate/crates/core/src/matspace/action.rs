use crate::error::{Error, Result};
use crate::gf::{FieldAutomorphism, FieldElement, FiniteField};

use super::Mat;

/// An element `(C, sigma)` of the semilinear group acting by
/// `A -> C^T A^sigma C`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    c: Mat,
    ct: Mat,
    e: FieldAutomorphism,
}

impl GroupElement {
    pub fn new(c: Mat, e: FieldAutomorphism) -> Self {
        let ct = c.transpose();
        Self { c, ct, e }
    }

    pub fn linear(c: Mat) -> Self {
        Self::new(c, FieldAutomorphism::IDENTITY)
    }

    pub fn matrix(&self) -> &Mat {
        &self.c
    }

    pub fn automorphism(&self) -> FieldAutomorphism {
        self.e
    }

    /// `C^T A^sigma C` without shape or invertibility checks.
    #[inline]
    pub fn apply(&self, field: &FiniteField, a: &Mat) -> Mat {
        let twisted;
        let a = if self.e.is_identity() {
            a
        } else {
            twisted = a.twist(field, self.e);
            &twisted
        };
        self.ct.mul(field, &a.mul(field, &self.c))
    }
}

/// `C^T A^sigma C`.
pub fn congruence_twist(field: &FiniteField, c: &Mat, e: FieldAutomorphism, a: &Mat) -> Result<Mat> {
    if c.size() != a.size() {
        return Err(Error::ShapeMismatch(format!(
            "C is {}x{} but A is {}x{}",
            c.size(),
            c.size(),
            a.size(),
            a.size()
        )));
    }
    if e.exponent() >= field.r() {
        return Err(Error::BadAutomorphism { exponent: e.exponent(), r: field.r() });
    }
    if !c.is_invertible(field) {
        return Err(Error::SingularC);
    }
    Ok(GroupElement::new(c.clone(), e).apply(field, a))
}

/// `|GL(s, q)| = prod_{i<s} (q^s - q^i)`.
pub fn gl_order(q: u32, s: usize) -> u128 {
    let q = q as u128;
    let qs = q.saturating_pow(s as u32);
    (0..s as u32).fold(1u128, |acc, i| acc.saturating_mul(qs - q.pow(i)))
}

/// Every invertible `s x s` matrix in ascending code order.
pub fn general_linear_group(field: &FiniteField, s: usize) -> Vec<Mat> {
    let total = (field.q() as u64).pow((s * s) as u32);
    (0..total)
        .map(|code| Mat::from_code(field, s, code))
        .filter(|m| m.is_invertible(field))
        .collect()
}

/// The identity followed by the rest of GL(s, q) in ascending code order.
/// Lazily generated, so a search that stops early never materializes the group.
pub fn gl_search_order(field: &FiniteField, s: usize) -> impl Iterator<Item = Mat> + '_ {
    let total = (field.q() as u64).pow((s * s) as u32);
    let id = Mat::identity(s);
    let id_code = id.code(field);
    std::iter::once(id).chain(
        (0..total)
            .filter(move |&c| Some(c) != id_code)
            .map(move |code| Mat::from_code(field, s, code))
            .filter(move |m| m.is_invertible(field)),
    )
}

/// Transvections `I + x^k E_ij` (`i != j`, `x^k` running over the power basis
/// of F over Z_p) together with `diag(g, 1, .., 1)` for the primitive `g`.
/// These generate GL(s, q).
pub fn gl_generators(field: &FiniteField, s: usize) -> Vec<Mat> {
    let mut gens = Vec::new();
    let basis: Vec<FieldElement> = (0..field.r()).map(|k| FieldElement::new(field.p().pow(k))).collect();
    for i in 0..s {
        for j in 0..s {
            if i == j {
                continue;
            }
            for &b in &basis {
                let mut m = Mat::identity(s);
                m.set(i, j, b);
                gens.push(m);
            }
        }
    }
    let g = field.primitive_element();
    if g != FieldElement::ONE {
        let mut d = Mat::identity(s);
        d.set(0, 0, g);
        gens.push(d);
    }
    gens
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeSet;

    use super::*;

    #[test]
    fn identity_action_is_trivial() {
        let f = FiniteField::new(3, 1).unwrap();
        for code in 0..81 {
            let a = Mat::from_code(&f, 2, code);
            assert_eq!(congruence_twist(&f, &Mat::identity(2), FieldAutomorphism::IDENTITY, &a).unwrap(), a);
        }
    }

    #[test]
    fn frobenius_twist_example_over_f4() {
        let f = FiniteField::new(2, 2).unwrap();
        let sigma = FieldAutomorphism::new(&f, 1).unwrap();
        let a = Mat::from_rows(&f, &[[1, 0], [2, 1]]).unwrap();
        let d = Mat::from_rows(&f, &[[1, 0], [3, 1]]).unwrap();
        assert_eq!(congruence_twist(&f, &Mat::identity(2), sigma, &a).unwrap(), d);
    }

    #[test]
    fn errors() {
        let f = FiniteField::new(3, 1).unwrap();
        let a = Mat::identity(2);
        let sing = Mat::from_rows(&f, &[[1, 1], [1, 1]]).unwrap();
        assert_eq!(congruence_twist(&f, &sing, FieldAutomorphism::IDENTITY, &a), Err(Error::SingularC));
        assert!(matches!(
            congruence_twist(&f, &Mat::identity(3), FieldAutomorphism::IDENTITY, &a),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn symmetry_and_rank_preserved() {
        for q in [2u32, 3] {
            let f = FiniteField::new(q, 1).unwrap();
            let gl = general_linear_group(&f, 2);
            for code in 0..(q as u64).pow(4) {
                let a = Mat::from_code(&f, 2, code);
                for c in &gl {
                    let b = GroupElement::linear(c.clone()).apply(&f, &a);
                    assert_eq!(b.rank(&f), a.rank(&f));
                    assert_eq!(b.is_symmetric(), a.is_symmetric());
                }
            }
        }
    }

    #[test]
    fn group_orders() {
        for (q, s) in [(2u32, 2usize), (3, 2), (2, 3), (5, 2), (4, 2)] {
            let f = FiniteField::new(if q == 4 { 2 } else { q }, if q == 4 { 2 } else { 1 }).unwrap();
            assert_eq!(general_linear_group(&f, s).len() as u128, gl_order(q, s));
        }
        assert_eq!(gl_order(7, 2), 2016);
        assert_eq!(gl_order(2, 3), 168);
    }

    #[test]
    fn search_order_starts_with_identity() {
        let f = FiniteField::new(3, 1).unwrap();
        let order: Vec<Mat> = gl_search_order(&f, 2).collect();
        assert_eq!(order[0], Mat::identity(2));
        assert_eq!(order.len(), 48);
        let set: BTreeSet<_> = order.iter().cloned().collect();
        assert_eq!(set.len(), 48);
        assert!(order[1..].windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn generators_generate() {
        for (p, r, s) in [(2, 1, 2), (3, 1, 2), (2, 2, 2), (2, 1, 3), (5, 1, 1), (3, 1, 3)] {
            let f = FiniteField::new(p, r).unwrap();
            let gens = gl_generators(&f, s);
            let mut seen = BTreeSet::from([Mat::identity(s)]);
            let mut frontier = vec![Mat::identity(s)];
            while let Some(m) = frontier.pop() {
                for g in &gens {
                    let n = m.mul(&f, g);
                    if seen.insert(n.clone()) {
                        frontier.push(n);
                    }
                }
            }
            assert_eq!(seen.len() as u128, gl_order(f.q(), s), "p={p} r={r} s={s}");
        }
    }

    #[test]
    fn action_composes() {
        use rand::{Rng, SeedableRng};
        use rand_chacha::ChaCha8Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, r) in [(2, 1), (3, 1), (2, 2)] {
            let f = FiniteField::new(p, r).unwrap();
            let gl = general_linear_group(&f, 2);
            for _ in 0..200 {
                let a = Mat::from_code(&f, 2, rng.gen_range(0..(f.q() as u64).pow(4)));
                let g1 = GroupElement::new(gl[rng.gen_range(0..gl.len())].clone(), FieldAutomorphism::new(&f, rng.gen_range(0..r)).unwrap());
                let g2 = GroupElement::new(gl[rng.gen_range(0..gl.len())].clone(), FieldAutomorphism::new(&f, rng.gen_range(0..r)).unwrap());
                let two_step = g2.apply(&f, &g1.apply(&f, &a));
                // (C1, s1) then (C2, s2) equals (C1^s2 C2, s1 s2)
                let composed = GroupElement::new(g1.c.twist(&f, g2.e).mul(&f, &g2.c), g1.e.compose(g2.e, &f));
                assert_eq!(composed.apply(&f, &a), two_step);
            }
        }
    }
}
