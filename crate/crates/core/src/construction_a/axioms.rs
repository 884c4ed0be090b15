use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

use super::Ring;

/// Largest `|R|^3` for which the exhaustive check is allowed.
pub const EXHAUSTIVE_TRIPLE_LIMIT: u128 = 1 << 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxiomsMode {
    Exhaustive,
    Sampled { seed: u64, count: u64 },
    /// Exhaustive when within the limit, otherwise sampled.
    Auto { seed: u64, count: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub law: &'static str,
    pub x: u128,
    pub y: u128,
    pub z: u128,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomsReport {
    pub exhaustive: bool,
    pub triples_checked: u64,
    pub passed: bool,
    pub counterexample: Option<Counterexample>,
}

/// Checks associativity, both distributive laws and `p x = 0`.
pub fn ring_axioms_check(ring: &Ring, mode: AxiomsMode) -> Result<AxiomsReport> {
    let order = ring.order();
    let small = order.and_then(|o| o.checked_pow(3)).is_some_and(|c| c <= EXHAUSTIVE_TRIPLE_LIMIT);
    match mode {
        AxiomsMode::Exhaustive if !small => Err(Error::TooLargeForExhaustive { order: order.unwrap_or(u128::MAX) }),
        AxiomsMode::Exhaustive => Ok(exhaustive(ring)),
        AxiomsMode::Auto { .. } if small => Ok(exhaustive(ring)),
        AxiomsMode::Sampled { seed, count } | AxiomsMode::Auto { seed, count } => Ok(sampled(ring, seed, count)),
    }
}

fn exhaustive(ring: &Ring) -> AxiomsReport {
    let n = ring.order().expect("checked by caller") as usize;
    let elems: Vec<_> = (0..n as u128).map(|c| ring.element(c)).collect();
    let mut mul = vec![0u32; n * n];
    let mut add = vec![0u32; n * n];
    for (i, x) in elems.iter().enumerate() {
        for (j, y) in elems.iter().enumerate() {
            mul[i * n + j] = ring.code(&ring.mul(x, y)) as u32;
            add[i * n + j] = ring.code(&ring.add(x, y)) as u32;
        }
    }
    let m = |a: u32, b: u32| mul[a as usize * n + b as usize];
    let a = |x: u32, y: u32| add[x as usize * n + y as usize];
    let report = |ce: Option<Counterexample>, checked: u64| AxiomsReport {
        exhaustive: true,
        triples_checked: checked,
        passed: ce.is_none(),
        counterexample: ce,
    };
    if let Some(x) = characteristic_failure(ring, &elems) {
        return report(Some(Counterexample { law: "characteristic", x, y: 0, z: 0 }), 0);
    }
    let mut checked = 0u64;
    for x in 0..n as u32 {
        for y in 0..n as u32 {
            let xy = m(x, y);
            for z in 0..n as u32 {
                let law = if m(xy, z) != m(x, m(y, z)) {
                    Some("associativity")
                } else if m(x, a(y, z)) != a(xy, m(x, z)) {
                    Some("left distributivity")
                } else if m(a(x, y), z) != a(m(x, z), m(y, z)) {
                    Some("right distributivity")
                } else {
                    None
                };
                checked += 1;
                if let Some(law) = law {
                    let ce = Counterexample { law, x: x as u128, y: y as u128, z: z as u128 };
                    return report(Some(ce), checked);
                }
            }
        }
    }
    report(None, checked)
}

/// First element code with `p x != 0`.
fn characteristic_failure(ring: &Ring, elems: &[super::RingElement]) -> Option<u128> {
    let p = ring.field().p();
    elems.iter().find_map(|x| {
        let mut acc = ring.zero();
        for _ in 0..p {
            acc = ring.add(&acc, x);
        }
        (acc != ring.zero()).then(|| ring.code(x))
    })
}

fn sampled(ring: &Ring, seed: u64, count: u64) -> AxiomsReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let order = ring.order();
    let q = ring.field().q();
    let n = ring.n();
    let draw = |rng: &mut ChaCha8Rng| match order {
        Some(o) => rng.gen_range(0..o),
        None => (0..n).fold(0u128, |acc, _| acc.wrapping_mul(q as u128).wrapping_add(rng.gen_range(0..q) as u128)),
    };
    let mut report = AxiomsReport { exhaustive: false, triples_checked: 0, passed: true, counterexample: None };
    for _ in 0..count {
        let (cx, cy, cz) = (draw(&mut rng), draw(&mut rng), draw(&mut rng));
        let (x, y, z) = (ring.element(cx), ring.element(cy), ring.element(cz));
        let xy = ring.mul(&x, &y);
        let law = if ring.mul(&xy, &z) != ring.mul(&x, &ring.mul(&y, &z)) {
            Some("associativity")
        } else if ring.mul(&x, &ring.add(&y, &z)) != ring.add(&xy, &ring.mul(&x, &z)) {
            Some("left distributivity")
        } else if ring.mul(&ring.add(&x, &y), &z) != ring.add(&ring.mul(&x, &z), &ring.mul(&y, &z)) {
            Some("right distributivity")
        } else if characteristic_failure(ring, std::slice::from_ref(&x)).is_some() {
            Some("characteristic")
        } else {
            None
        };
        report.triples_checked += 1;
        if let Some(law) = law {
            report.passed = false;
            report.counterexample = Some(Counterexample { law, x: cx, y: cy, z: cz });
            break;
        }
    }
    report
}
