use serde::Serialize;

use crate::gf::{FieldElement, FiniteField};
use crate::linalg::{self, Row};

use super::{Ring, RingElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Invariants {
    pub p: u32,
    pub n: usize,
    pub r: u32,
    pub s: usize,
    pub t: usize,
    pub lambda: usize,
}

/// Dimensions over `F` of the radical `M`, of `M^2` and of `ann(M)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RadicalDims {
    pub m: usize,
    pub m2: usize,
    pub ann: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    /// `|R|` as a decimal string; it can exceed 64 bits.
    pub order: String,
    pub invariants: Invariants,
    pub radical_dims: RadicalDims,
    pub m_cubed_zero: bool,
    pub commutative: bool,
    /// Whether `F` commutes with every element.
    pub f_central: bool,
}

/// Structure of `R` computed over the prime field from an additive basis;
/// every property checked is biadditive, so basis pairs suffice.
pub fn ring_structure(ring: &Ring) -> StructureReport {
    let f = ring.field();
    let fp = FiniteField::new(f.p(), 1).expect("p is prime");
    let r = f.r() as usize;
    let basis = ring.prime_basis();
    let (field_part, radical) = basis.split_at(r);
    let coords = |x: &RingElement| prime_coords(ring, &fp, x);

    let products: Vec<Row> = radical.iter().flat_map(|x| radical.iter().map(move |y| ring.mul(x, y))).map(|z| coords(&z)).collect();
    let m2 = linalg::rank(&fp, &products);

    // x = sum c_i b_i annihilates M iff x b_j = b_j x = 0 for every j
    let dim = radical.len();
    let width = basis.len();
    let mut constraints: Vec<Row> = Vec::new();
    for b in radical {
        for side in [false, true] {
            let cols: Vec<Row> = radical
                .iter()
                .map(|x| coords(&if side { ring.mul(b, x) } else { ring.mul(x, b) }))
                .collect();
            for l in 0..width {
                constraints.push(cols.iter().map(|c| c[l]).collect());
            }
        }
    }
    let ann = linalg::kernel(&fp, &constraints, dim).len();

    let zero = ring.zero();
    let m_cubed_zero = radical.iter().all(|x| {
        radical.iter().all(|y| {
            let xy = ring.mul(x, y);
            radical.iter().all(|z| ring.mul(&xy, z) == zero)
        })
    });
    let commutes = |x: &RingElement, y: &RingElement| ring.mul(x, y) == ring.mul(y, x);
    let commutative = basis.iter().enumerate().all(|(i, x)| basis[i + 1..].iter().all(|y| commutes(x, y)));
    let f_central = field_part.iter().all(|x| basis.iter().all(|y| commutes(x, y)));

    let spec = ring.spec();
    StructureReport {
        order: (f.q() as u128)
            .checked_pow(ring.n() as u32)
            .map_or_else(|| format!("{}^{}", f.q(), ring.n()), |o| o.to_string()),
        invariants: Invariants { p: f.p(), n: ring.n(), r: f.r(), s: spec.s, t: spec.t, lambda: spec.lambda },
        radical_dims: RadicalDims { m: dim / r, m2: m2 / r, ann: ann / r },
        m_cubed_zero,
        commutative,
        f_central,
    }
}

fn prime_coords(ring: &Ring, fp: &FiniteField, x: &RingElement) -> Row {
    let f = ring.field();
    (0..ring.n())
        .flat_map(|slot| f.digits(ring.slot(x, slot)))
        .map(|d| fp.elem(d as u64).expect("digit below p"))
        .collect::<Vec<FieldElement>>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction_a::{ring_create, RingSpec};
    use crate::gf::FieldAutomorphism;
    use crate::matspace::{Mat, MatTuple};

    fn ring(f: &FiniteField, mats: Vec<Mat>, lambda: usize) -> Ring {
        ring_create(RingSpec::untwisted(f, MatTuple::new(mats).unwrap(), lambda)).unwrap()
    }

    #[test]
    fn order_eight() {
        let f = FiniteField::new(2, 1).unwrap();
        let rep = ring_structure(&ring(&f, vec![Mat::identity(1)], 0));
        assert_eq!(rep.order, "8");
        assert_eq!(rep.radical_dims, RadicalDims { m: 2, m2: 1, ann: 1 });
        assert!(rep.m_cubed_zero && rep.commutative && rep.f_central);
    }

    #[test]
    fn extra_annihilator_dimension_from_v() {
        for (p, r) in [(2, 1), (3, 1), (2, 2)] {
            let f = FiniteField::new(p, r).unwrap();
            let a = Mat::from_ints(&f, &[[1, 1], [0, 1]]);
            let b = Mat::from_ints(&f, &[[0, 1], [1, 0]]);
            let rep = ring_structure(&ring(&f, vec![a, b], 1));
            assert_eq!(rep.radical_dims, RadicalDims { m: 5, m2: 2, ann: 3 });
        }
    }

    #[test]
    fn skew_matrix_gives_noncommutative_ring() {
        let f = FiniteField::new(3, 1).unwrap();
        let a = Mat::from_ints(&f, &[[0, 1], [-1, 0]]);
        let rep = ring_structure(&ring(&f, vec![a], 0));
        assert!(!rep.commutative);
        assert!(rep.f_central);
    }

    #[test]
    fn twisted_field_action_is_not_central() {
        let f = FiniteField::new(2, 2).unwrap();
        let frob = FieldAutomorphism::new(&f, 1).unwrap();
        let spec = RingSpec {
            field: f.clone(),
            s: 1,
            t: 1,
            lambda: 0,
            matrices: MatTuple::new(vec![Mat::identity(1)]).unwrap(),
            sigma: vec![frob],
            theta: vec![FieldAutomorphism::IDENTITY],
        };
        let rep = ring_structure(&ring_create(spec).unwrap());
        assert!(!rep.f_central);
        assert!(!rep.commutative);
        assert_eq!(rep.radical_dims, RadicalDims { m: 2, m2: 1, ann: 1 });
    }

    #[test]
    fn dead_index_enlarges_annihilator() {
        let f = FiniteField::new(2, 1).unwrap();
        let a = Mat::from_ints(&f, &[[1, 0], [0, 0]]);
        let rep = ring_structure(&ring(&f, vec![a], 0));
        assert_eq!(rep.radical_dims, RadicalDims { m: 3, m2: 1, ann: 2 });
    }
}
