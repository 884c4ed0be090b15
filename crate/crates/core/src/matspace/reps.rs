use crate::error::{Error, Result};
use crate::gf::{FieldElement, FiniteField};

use super::Mat;

/// Least-code representatives of the cosets of `{1, -1}` in `F*`.
/// In characteristic 2 this is all of `F*`.
pub fn sign_coset_reps(field: &FiniteField) -> Vec<FieldElement> {
    let mut reps: Vec<FieldElement> = Vec::new();
    for x in field.nonzero_elements() {
        if !reps.contains(&field.neg(x)) {
            reps.push(x);
        }
    }
    reps
}

/// Least `a` (by code) such that `X^2 + aX + 1` is irreducible over `F`.
pub fn irreducible_trace(field: &FiniteField) -> FieldElement {
    field
        .elements()
        .find(|&a| field.elements().all(|x| !field.add(field.add(field.mul(x, x), field.mul(a, x)), FieldElement::ONE).is_zero()))
        .expect("every finite field has an irreducible quadratic of the form X^2 + aX + 1")
}

/// One representative per congruence class of nonzero symmetric `s x s`
/// matrices, ordered by rank.
///
/// Odd `p`: `I_r + 0` and `g I_1 + I_(r-1) + 0` with `g` the least nonsquare.
/// `p = 2`: `I_r + 0`, and additionally `(r/2) T + 0` for even `r`, where
/// `T = [[0,1],[1,0]]`.
pub fn newman_symmetric_reps(field: &FiniteField, s: usize) -> Vec<Mat> {
    let mut reps = Vec::new();
    let odd = field.p() != 2;
    for rank in 1..=s {
        let id = Mat::identity(rank);
        reps.push(Mat::direct_sum(s, std::slice::from_ref(&id)));
        if odd {
            let g = field.nonsquare().expect("odd characteristic has nonsquares");
            let mut m = Mat::direct_sum(s, &[id]);
            m.set(0, 0, g);
            reps.push(m);
        } else if rank % 2 == 0 {
            let t = Mat::from_entries(2, vec![FieldElement::ZERO, FieldElement::ONE, FieldElement::ONE, FieldElement::ZERO]);
            reps.push(Mat::direct_sum(s, &vec![t; rank / 2]));
        }
    }
    reps
}

fn m(s: usize, entries: &[FieldElement]) -> Mat {
    debug_assert_eq!(entries.len(), s * s);
    Mat::from_entries(s, entries.to_vec())
}

/// Congruence class representatives of all `s x s` matrices, `s` in {2, 3},
/// including the zero matrix. Totals: `q+7` / `q+4` for `s = 2` and
/// `3q+16` / `2q+8` for `s = 3` (odd / even characteristic).
///
/// For `s = 3` in characteristic 2 the commonly printed entry
/// `[[1,0,0],[0,0,0],[1,1,0]]` is congruent to `[[1,0,0],[0,0,0],[0,1,0]]`
/// and leaves one class uncovered; it is replaced by `[[1,0,0],[0,1,0],[1,1,0]]`.
pub fn case_rep_list(field: &FiniteField, s: usize) -> Result<Vec<Mat>> {
    let z = FieldElement::ZERO;
    let o = FieldElement::ONE;
    let gammas = sign_coset_reps(field);
    let odd = field.p() != 2;
    let mut out = Vec::new();
    match (s, odd) {
        (2, true) => {
            let g = field.nonsquare()?;
            let neg1 = field.neg(o);
            let g2 = field.add(g, g);
            out.extend([
                m(2, &[z, z, z, z]),
                m(2, &[z, o, neg1, z]),
                m(2, &[o, z, z, z]),
                m(2, &[o, z, o, z]),
                m(2, &[g, z, z, z]),
                m(2, &[g, z, g2, g]),
                m(2, &[o, z, z, o]),
                m(2, &[o, z, z, g]),
            ]);
            out.extend(gammas.iter().map(|&c| m(2, &[o, z, c, o])));
            out.extend(gammas.iter().map(|&c| m(2, &[o, z, c, g])));
        }
        (2, false) => {
            out.extend([
                m(2, &[z, z, z, z]),
                m(2, &[o, z, z, z]),
                m(2, &[o, z, z, o]),
                m(2, &[z, o, o, z]),
                m(2, &[o, z, o, z]),
            ]);
            out.extend(field.nonzero_elements().map(|a| m(2, &[o, z, a, o])));
        }
        (3, true) => {
            let e = field.nonsquare()?;
            let neg1 = field.neg(o);
            let e2 = field.add(e, e);
            out.extend([
                m(3, &[z, z, z, z, z, z, z, z, z]),
                m(3, &[o, z, z, z, z, z, z, z, z]),
                m(3, &[e, z, z, z, z, z, z, z, z]),
                m(3, &[o, z, z, z, o, z, z, z, z]),
                m(3, &[o, z, z, z, e, z, z, z, z]),
                m(3, &[o, z, z, z, o, z, z, z, o]),
                m(3, &[o, z, z, z, o, z, z, z, e]),
            ]);
            let mus = [z, o, e];
            out.extend(mus.iter().map(|&u| m(3, &[u, z, z, z, z, o, z, neg1, z])));
            out.extend(mus.iter().map(|&u| m(3, &[u, z, z, z, z, z, z, o, z])));
            out.extend(mus.iter().map(|&u| m(3, &[u, z, z, z, e, z, z, e2, e])));
            for &u in &mus {
                out.extend(gammas.iter().map(|&c| m(3, &[u, z, z, z, o, z, z, c, o])));
            }
            for &u in &mus {
                out.extend(gammas.iter().map(|&c| m(3, &[u, z, z, z, o, z, z, c, e])));
            }
            out.extend(mus.iter().map(|&u| m(3, &[u, z, z, z, z, o, o, o, z])));
        }
        (3, false) => {
            let a = irreducible_trace(field);
            out.extend([
                m(3, &[z, z, z, z, z, z, z, z, z]),
                m(3, &[o, z, z, z, z, z, z, z, z]),
                m(3, &[o, z, z, z, o, z, z, z, z]),
                m(3, &[o, z, z, z, o, z, z, z, o]),
                m(3, &[z, z, z, z, z, o, z, o, z]),
            ]);
            let mus = [z, o];
            out.extend(mus.iter().map(|&u| m(3, &[u, z, z, z, z, z, z, o, z])));
            for &u in &mus {
                out.extend(field.nonzero_elements().map(|c| m(3, &[u, z, z, z, o, z, z, c, o])));
            }
            out.extend([
                m(3, &[o, z, z, z, o, z, o, o, z]),
                m(3, &[o, z, z, z, z, o, o, o, z]),
                m(3, &[o, z, z, z, z, o, a, o, o]),
            ]);
        }
        _ => return Err(Error::UnsupportedS(s)),
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matspace::{gl_generators, GroupElement};

    /// Labels every `s x s` matrix with the index of its congruence class by
    /// closing each unvisited matrix under the GL generators.
    fn class_labels(f: &FiniteField, s: usize) -> Vec<u32> {
        let total = (f.q() as u64).pow((s * s) as u32) as usize;
        let gens: Vec<GroupElement> = gl_generators(f, s).into_iter().map(GroupElement::linear).collect();
        let mut label = vec![u32::MAX; total];
        let mut next = 0;
        for start in 0..total {
            if label[start] != u32::MAX {
                continue;
            }
            label[start] = next;
            let mut stack = vec![start as u64];
            while let Some(code) = stack.pop() {
                let a = Mat::from_code(f, s, code);
                for g in &gens {
                    let b = g.apply(f, &a).code(f).unwrap() as usize;
                    if label[b] == u32::MAX {
                        label[b] = next;
                        stack.push(b as u64);
                    }
                }
            }
            next += 1;
        }
        label
    }

    fn assert_complete_system(f: &FiniteField, s: usize, reps: &[Mat], symmetric_only: bool) {
        let labels = class_labels(f, s);
        let mut seen = std::collections::BTreeSet::new();
        for r in reps {
            let l = labels[r.code(f).unwrap() as usize];
            assert!(seen.insert(l), "q={} s={s}: {r:?} duplicates an earlier class", f.q());
        }
        let expected: std::collections::BTreeSet<u32> = (0..labels.len() as u64)
            .map(|c| Mat::from_code(f, s, c))
            .filter(|m| !symmetric_only || (m.is_symmetric() && !m.is_zero()))
            .map(|m| labels[m.code(f).unwrap() as usize])
            .collect();
        assert_eq!(seen, expected, "q={} s={s}: classes missed", f.q());
    }

    #[test]
    fn sign_cosets() {
        let f5 = FiniteField::new(5, 1).unwrap();
        assert_eq!(sign_coset_reps(&f5), vec![FieldElement::new(1), FieldElement::new(2)]);
        let f4 = FiniteField::new(2, 2).unwrap();
        assert_eq!(sign_coset_reps(&f4).len(), 3);
    }

    #[test]
    fn irreducible_quadratics() {
        let f2 = FiniteField::new(2, 1).unwrap();
        assert_eq!(irreducible_trace(&f2), FieldElement::ONE);
        let f4 = FiniteField::new(2, 2).unwrap();
        let a = irreducible_trace(&f4);
        assert!(f4.elements().all(|x| !f4.add(f4.add(f4.mul(x, x), f4.mul(a, x)), FieldElement::ONE).is_zero()));
    }

    #[test]
    fn newman_examples() {
        let f3 = FiniteField::new(3, 1).unwrap();
        let expect: Vec<Mat> = [[[1, 0], [0, 0]], [[2, 0], [0, 0]], [[1, 0], [0, 1]], [[2, 0], [0, 1]]]
            .iter()
            .map(|r| Mat::from_rows(&f3, r).unwrap())
            .collect();
        assert_eq!(newman_symmetric_reps(&f3, 2), expect);
        let f2 = FiniteField::new(2, 1).unwrap();
        let expect: Vec<Mat> = [[[1, 0], [0, 0]], [[1, 0], [0, 1]], [[0, 1], [1, 0]]]
            .iter()
            .map(|r| Mat::from_rows(&f2, r).unwrap())
            .collect();
        assert_eq!(newman_symmetric_reps(&f2, 2), expect);
        assert_eq!(newman_symmetric_reps(&f2, 3).len(), 4);
        for s in 1..=6 {
            let want = if s % 2 == 1 { (3 * s - 1) / 2 } else { 3 * s / 2 };
            assert_eq!(newman_symmetric_reps(&f2, s).len(), want);
            assert_eq!(newman_symmetric_reps(&f3, s).len(), 2 * s);
        }
    }

    #[test]
    fn newman_reps_classify_symmetric_matrices() {
        for (p, s) in [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)] {
            let f = FiniteField::new(p, 1).unwrap();
            assert_complete_system(&f, s, &newman_symmetric_reps(&f, s), true);
        }
    }

    #[test]
    fn case_list_counts() {
        for (p, r) in [(3, 1), (5, 1), (7, 1), (9, 0), (2, 1), (2, 2), (2, 3)] {
            let (p, r) = if p == 9 { (3, 2) } else { (p, r) };
            let f = FiniteField::new(p, r).unwrap();
            let q = f.q() as usize;
            let (c2, c3) = if p == 2 { (q + 4, 2 * q + 8) } else { (q + 7, 3 * q + 16) };
            assert_eq!(case_rep_list(&f, 2).unwrap().len(), c2);
            assert_eq!(case_rep_list(&f, 3).unwrap().len(), c3);
        }
        let f2 = FiniteField::new(2, 1).unwrap();
        assert_eq!(case_rep_list(&f2, 4), Err(Error::UnsupportedS(4)));
        assert_eq!(case_rep_list(&f2, 1), Err(Error::UnsupportedS(1)));
    }

    #[test]
    fn case_lists_are_complete_systems_s2() {
        for (p, r) in [(2, 1), (3, 1), (5, 1), (2, 2), (7, 1)] {
            let f = FiniteField::new(p, r).unwrap();
            assert_complete_system(&f, 2, &case_rep_list(&f, 2).unwrap(), false);
        }
    }

    #[test]
    fn case_lists_are_complete_systems_s3() {
        for (p, r) in [(2, 1), (3, 1), (2, 2)] {
            let f = FiniteField::new(p, r).unwrap();
            assert_complete_system(&f, 3, &case_rep_list(&f, 3).unwrap(), false);
        }
    }

    #[test]
    fn printed_even_characteristic_entry_collides() {
        let f = FiniteField::new(2, 1).unwrap();
        let labels = class_labels(&f, 3);
        let label = |rows: [[u32; 3]; 3]| labels[Mat::from_rows(&f, &rows).unwrap().code(&f).unwrap() as usize];
        assert_eq!(label([[1, 0, 0], [0, 0, 0], [1, 1, 0]]), label([[1, 0, 0], [0, 0, 0], [0, 1, 0]]));
        assert_eq!(label([[1, 0, 0], [0, 1, 0], [1, 1, 0]]), label([[0, 0, 0], [0, 0, 1], [1, 0, 0]]));
    }
}
