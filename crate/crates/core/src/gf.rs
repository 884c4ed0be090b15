//! Arithmetic in GF(p^r).
//!
//! Elements are packed as integers: the coefficient vector `(c_0, .., c_{r-1})`
//! of `c_0 + c_1 x + .. + c_{r-1} x^{r-1}` (reduced modulo the field's modulus)
//! is read as base-`p` digits with `c_0` least significant. Code `0` is zero,
//! code `1` is one and, for `r > 1`, code `p` is the class of `x`.
//!
//! Multiplication goes through log/exp tables built from the least-coded
//! primitive element. Fields with `q <= 256` additionally carry dense
//! addition and multiplication tables.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;

const DENSE_TABLE_LIMIT: u32 = 256;

/// An element of a [`FiniteField`], stored as its integer code.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(transparent)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: Self = Self(0);
    pub const ONE: Self = Self(1);

    /// Wraps a code without checking it against a field. Use
    /// [`FiniteField::elem`] when the code comes from outside.
    #[inline]
    pub const fn new(code: u32) -> Self {
        Self(code)
    }

    #[inline]
    pub const fn code(self) -> u32 {
        self.0
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u32(self.0)
    }
}

impl<'de> Deserialize<'de> for FieldElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        u32::deserialize(d).map(FieldElement)
    }
}

/// The automorphism `x -> x^(p^e)` of GF(p^r), `0 <= e < r`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldAutomorphism(u32);

impl FieldAutomorphism {
    pub const IDENTITY: Self = Self(0);

    pub fn new(field: &FiniteField, exponent: u32) -> Result<Self> {
        if exponent >= field.r {
            return Err(Error::BadAutomorphism { exponent, r: field.r });
        }
        Ok(Self(exponent))
    }

    #[inline]
    pub const fn exponent(self) -> u32 {
        self.0
    }

    #[inline]
    pub const fn is_identity(self) -> bool {
        self.0 == 0
    }

    /// `self` followed by `other`; exponents add modulo `r`.
    #[inline]
    pub fn compose(self, other: Self, field: &FiniteField) -> Self {
        Self((self.0 + other.0) % field.r)
    }

    /// All `r` automorphisms in ascending exponent order.
    pub fn all(field: &FiniteField) -> impl Iterator<Item = Self> {
        (0..field.r).map(Self)
    }
}

/// Arithmetic operations exposed through [`FiniteField::arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Inv,
    Neg,
    Pow,
}

/// JSON shape of a field: `{"p": .., "r": .., "modulus": [c_0, .., c_r]}`.
///
/// The modulus lists coefficients from the constant term up to the leading 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDesc {
    pub p: u32,
    pub r: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

#[derive(Clone)]
pub struct FiniteField {
    p: u32,
    r: u32,
    q: u32,
    /// Coefficients `c_0 .. c_r`, with `c_r == 1`.
    modulus: Vec<u32>,
    primitive: u32,
    neg: Vec<u32>,
    inv: Vec<u32>,
    log: Vec<u32>,
    /// `exp[i] = g^i` for `i < 2(q-1)`.
    exp: Vec<u32>,
    add_tab: Option<Vec<u32>>,
    mul_tab: Option<Vec<u32>>,
    /// `frob[e][a] = a^(p^e)`.
    frob: Vec<Vec<u32>>,
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.r == other.r && self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteField")
            .field("p", &self.p)
            .field("r", &self.r)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl fmt::Display for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.r)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// Polynomials over Z_p, coefficients from low to high degree.

fn poly_trim(a: &mut Vec<u32>) {
    while a.len() > 1 && *a.last().unwrap() == 0 {
        a.pop();
    }
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    poly_trim(&mut a);
    let dm = m.len() - 1;
    let lead_inv = pow_mod(m[dm], p - 2, p);
    while a.len() > dm && !(a.len() == 1 && a[0] == 0) {
        let da = a.len() - 1;
        let factor = (a[da] as u64 * lead_inv as u64 % p as u64) as u32;
        if factor != 0 {
            let shift = da - dm;
            for (i, &c) in m.iter().enumerate() {
                let sub = (factor as u64 * c as u64 % p as u64) as u32;
                a[shift + i] = (a[shift + i] + p - sub) % p;
            }
        }
        a.pop();
        poly_trim(&mut a);
    }
    a.resize(dm.max(1), 0);
    a
}

fn pow_mod(b: u32, mut e: u32, p: u32) -> u32 {
    let p = p as u64;
    let mut acc = 1u64;
    let mut base = b as u64 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    (acc % p) as u32
}

/// Monic polynomial of degree `deg` whose non-leading coefficients are the
/// base-`p` digits of `code`.
fn monic_from_code(code: u32, deg: u32, p: u32) -> Vec<u32> {
    let mut c = code;
    let mut poly = Vec::with_capacity(deg as usize + 1);
    for _ in 0..deg {
        poly.push(c % p);
        c /= p;
    }
    poly.push(1);
    poly
}

fn is_irreducible(poly: &[u32], p: u32) -> bool {
    let deg = poly.len() as u32 - 1;
    if deg <= 1 {
        return deg == 1;
    }
    for d in 1..=deg / 2 {
        for code in 0..p.pow(d) {
            let divisor = monic_from_code(code, d, p);
            let rem = poly_rem(poly, &divisor, p);
            if rem.iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FiniteField {
    /// GF(p^r) with the least monic irreducible modulus, ordering candidates
    /// by the integer code of their non-leading coefficients.
    pub fn new(p: u32, r: u32) -> Result<Self> {
        Self::check_params(p, r)?;
        let modulus = (0..p.pow(r))
            .map(|code| monic_from_code(code, r, p))
            .find(|m| is_irreducible(m, p))
            .expect("an irreducible polynomial of every degree exists");
        Ok(Self::build(p, r, modulus))
    }

    /// GF(p^r) with a caller-supplied modulus (coefficients low to high,
    /// leading 1 included). The modulus is checked for irreducibility.
    pub fn with_modulus(p: u32, r: u32, modulus: &[u32]) -> Result<Self> {
        Self::check_params(p, r)?;
        if modulus.len() != r as usize + 1 {
            return Err(Error::InvalidModulus(format!(
                "expected {} coefficients, got {}",
                r + 1,
                modulus.len()
            )));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidModulus("coefficient not reduced mod p".into()));
        }
        if modulus[r as usize] != 1 {
            return Err(Error::InvalidModulus("not monic".into()));
        }
        if !is_irreducible(modulus, p) {
            return Err(Error::InvalidModulus("reducible over Z_p".into()));
        }
        Ok(Self::build(p, r, modulus.to_vec()))
    }

    pub fn from_desc(desc: &FieldDesc) -> Result<Self> {
        match &desc.modulus {
            Some(m) => Self::with_modulus(desc.p, desc.r, m),
            None => Self::new(desc.p, desc.r),
        }
    }

    /// A copy whose product of the largest element with itself is wrong.
    /// Only for exercising failure paths; fields above 256 elements are
    /// returned unchanged.
    #[doc(hidden)]
    pub fn with_seeded_fault(&self) -> Self {
        let mut f = self.clone();
        let q = f.q as usize;
        if let Some(t) = f.mul_tab.as_mut() {
            let i = (q - 1) * q + (q - 1);
            t[i] = (t[i] + 1) % f.q;
        }
        f
    }

    pub fn desc(&self) -> FieldDesc {
        FieldDesc { p: self.p, r: self.r, modulus: Some(self.modulus.clone()) }
    }

    fn check_params(p: u32, r: u32) -> Result<()> {
        if !is_prime(p as u64) {
            return Err(Error::NonPrimeP(p as u64));
        }
        if r < 1 {
            return Err(Error::DegreeZero);
        }
        let q = (p as u128).checked_pow(r).unwrap_or(u128::MAX);
        if q > MAX_ORDER as u128 {
            return Err(Error::FieldTooLarge(q));
        }
        Ok(())
    }

    fn build(p: u32, r: u32, modulus: Vec<u32>) -> Self {
        let q = p.pow(r);
        let ru = r as usize;

        let digits = |mut c: u32| -> Vec<u32> {
            let mut d = vec![0; ru];
            for slot in d.iter_mut() {
                *slot = c % p;
                c /= p;
            }
            d
        };
        let pack = |d: &[u32]| -> u32 { d.iter().rev().fold(0, |acc, &c| acc * p + c) };
        let slow_mul = |a: u32, b: u32| -> u32 {
            let (da, db) = (digits(a), digits(b));
            let mut prod = vec![0u32; 2 * ru - 1];
            for (i, &x) in da.iter().enumerate() {
                for (j, &y) in db.iter().enumerate() {
                    prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % p as u64) as u32;
                }
            }
            let rem = poly_rem(&prod, &modulus, p);
            pack(&rem[..ru])
        };

        let neg: Vec<u32> = (0..q)
            .map(|a| {
                let d: Vec<u32> = digits(a).iter().map(|&c| (p - c) % p).collect();
                pack(&d)
            })
            .collect();

        // least-coded primitive element
        let order = |g: u32| -> u32 {
            let mut x = g;
            let mut n = 1;
            while x != 1 {
                x = slow_mul(x, g);
                n += 1;
            }
            n
        };
        let primitive = (1..q).find(|&g| order(g) == q - 1).expect("F* is cyclic");

        let mut exp = Vec::with_capacity(2 * (q as usize - 1));
        let mut log = vec![0u32; q as usize];
        let mut x = 1u32;
        for i in 0..(q - 1) {
            exp.push(x);
            log[x as usize] = i;
            x = slow_mul(x, primitive);
        }
        for i in 0..(q as usize - 1) {
            exp.push(exp[i]);
        }

        let mut inv = vec![0u32; q as usize];
        for a in 1..q {
            let l = log[a as usize];
            inv[a as usize] = exp[((q - 1 - l) % (q - 1)) as usize];
        }

        let mut field = FiniteField {
            p,
            r,
            q,
            modulus,
            primitive,
            neg,
            inv,
            log,
            exp,
            add_tab: None,
            mul_tab: None,
            frob: Vec::new(),
        };

        field.frob = (0..r)
            .map(|e| {
                let n = (p as u64).pow(e);
                (0..q).map(|a| field.pow(FieldElement(a), n).0).collect()
            })
            .collect();

        if q <= DENSE_TABLE_LIMIT {
            let qs = q as usize;
            let mut add = vec![0u32; qs * qs];
            let mut mul = vec![0u32; qs * qs];
            for a in 0..q {
                for b in 0..q {
                    add[a as usize * qs + b as usize] = field.add_digits(a, b);
                    mul[a as usize * qs + b as usize] = field.mul_log(a, b);
                }
            }
            field.add_tab = Some(add);
            field.mul_tab = Some(mul);
        }
        field
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn r(&self) -> u32 {
        self.r
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Coefficients of the modulus, constant term first, leading 1 last.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The least-coded generator of the multiplicative group.
    pub fn primitive_element(&self) -> FieldElement {
        FieldElement(self.primitive)
    }

    /// Checked conversion from an external code.
    pub fn elem(&self, code: u64) -> Result<FieldElement> {
        if code >= self.q as u64 {
            return Err(Error::MixedFields { code, q: self.q });
        }
        Ok(FieldElement(code as u32))
    }

    /// Reduces an integer into the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q).map(FieldElement)
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElement> {
        (1..self.q).map(FieldElement)
    }

    fn add_digits(&self, a: u32, b: u32) -> u32 {
        if self.r == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..self.r {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    fn mul_log(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.add_tab {
            Some(t) => FieldElement(t[a.0 as usize * self.q as usize + b.0 as usize]),
            None => FieldElement(self.add_digits(a.0, b.0)),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        FieldElement(self.neg[a.0 as usize])
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        match &self.mul_tab {
            Some(t) => FieldElement(t[a.0 as usize * self.q as usize + b.0 as usize]),
            None => FieldElement(self.mul_log(a.0, b.0)),
        }
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.is_zero() {
            return Err(Error::ZeroInverse);
        }
        Ok(FieldElement(self.inv[a.0 as usize]))
    }

    /// Inverse of a value already known to be nonzero.
    #[inline]
    pub(crate) fn inv_nonzero(&self, a: FieldElement) -> FieldElement {
        debug_assert!(!a.is_zero());
        FieldElement(self.inv[a.0 as usize])
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^n`, with `0^0 = 1`.
    pub fn pow(&self, a: FieldElement, n: u64) -> FieldElement {
        if n == 0 {
            return FieldElement::ONE;
        }
        if a.is_zero() {
            return FieldElement::ZERO;
        }
        let l = self.log[a.0 as usize] as u64;
        let e = (l * (n % (self.q as u64 - 1))) % (self.q as u64 - 1);
        FieldElement(self.exp[e as usize])
    }

    /// Checked entry point for a single arithmetic operation on raw codes.
    /// For `Pow`, `b` is the exponent rather than a field element.
    pub fn arith(&self, op: ArithOp, a: u64, b: u64) -> Result<FieldElement> {
        let x = self.elem(a)?;
        match op {
            ArithOp::Add => Ok(self.add(x, self.elem(b)?)),
            ArithOp::Sub => Ok(self.sub(x, self.elem(b)?)),
            ArithOp::Mul => Ok(self.mul(x, self.elem(b)?)),
            ArithOp::Inv => self.inv(x),
            ArithOp::Neg => Ok(self.neg(x)),
            ArithOp::Pow => Ok(self.pow(x, b)),
        }
    }

    /// `a^(p^e)`.
    #[inline]
    pub fn frobenius(&self, e: FieldAutomorphism, a: FieldElement) -> FieldElement {
        FieldElement(self.frob[e.0 as usize][a.0 as usize])
    }

    pub fn is_square(&self, a: FieldElement) -> bool {
        if a.is_zero() || self.p == 2 {
            return true;
        }
        self.log[a.0 as usize].is_multiple_of(2)
    }

    /// The least-coded non-square of F*.
    pub fn nonsquare(&self) -> Result<FieldElement> {
        if self.p == 2 {
            return Err(Error::NoNonsquare);
        }
        Ok(self.nonzero_elements().find(|&a| !self.is_square(a)).expect("q odd has non-squares"))
    }

    /// Base-`p` digits of an element, constant coefficient first.
    pub fn digits(&self, a: FieldElement) -> Vec<u32> {
        let mut c = a.0;
        (0..self.r)
            .map(|_| {
                let d = c % self.p;
                c /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> FieldElement {
        FieldElement(digits.iter().rev().fold(0, |acc, &c| acc * self.p + c % self.p))
    }
}

impl Serialize for FiniteField {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.desc().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteField {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let desc = FieldDesc::deserialize(d)?;
        FiniteField::from_desc(&desc).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u32, r: u32) -> FiniteField {
        FiniteField::new(p, r).unwrap()
    }

    #[test]
    fn default_moduli() {
        assert_eq!(f(2, 1).modulus(), &[0, 1]);
        assert_eq!(f(2, 2).modulus(), &[1, 1, 1]);
        assert_eq!(f(3, 2).modulus(), &[1, 0, 1]);
        assert_eq!(f(2, 3).modulus(), &[1, 1, 0, 1]);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(FiniteField::new(4, 1).unwrap_err(), Error::NonPrimeP(4));
        assert_eq!(FiniteField::new(1, 1).unwrap_err(), Error::NonPrimeP(1));
        assert_eq!(FiniteField::new(3, 0).unwrap_err(), Error::DegreeZero);
        assert!(matches!(FiniteField::new(2, 17), Err(Error::FieldTooLarge(_))));
        assert!(FiniteField::new(2, 16).is_ok());
    }

    #[test]
    fn explicit_modulus_is_validated() {
        assert!(FiniteField::with_modulus(3, 2, &[1, 0, 1]).is_ok());
        // x^2 + 2 = (x+1)(x+2) over Z_3
        assert!(matches!(
            FiniteField::with_modulus(3, 2, &[2, 0, 1]),
            Err(Error::InvalidModulus(_))
        ));
        assert!(matches!(
            FiniteField::with_modulus(3, 2, &[1, 0, 2]),
            Err(Error::InvalidModulus(_))
        ));
        let alt = FiniteField::with_modulus(3, 2, &[2, 1, 1]).unwrap();
        assert_ne!(alt, f(3, 2));
    }

    #[test]
    fn arithmetic_examples() {
        let f3 = f(3, 1);
        assert_eq!(f3.arith(ArithOp::Add, 2, 2).unwrap(), FieldElement::new(1));
        let f4 = f(2, 2);
        // alpha = x has code 2, alpha + 1 has code 3
        assert_eq!(f4.arith(ArithOp::Mul, 2, 2).unwrap(), FieldElement::new(3));
        let f5 = f(5, 1);
        assert_eq!(f5.arith(ArithOp::Inv, 3, 0).unwrap(), FieldElement::new(2));
        assert_eq!(f5.arith(ArithOp::Inv, 0, 0).unwrap_err(), Error::ZeroInverse);
        assert_eq!(
            f5.arith(ArithOp::Add, 5, 1).unwrap_err(),
            Error::MixedFields { code: 5, q: 5 }
        );
        assert_eq!(f5.arith(ArithOp::Pow, 2, 4).unwrap(), FieldElement::ONE);
        assert_eq!(f5.arith(ArithOp::Neg, 2, 0).unwrap(), FieldElement::new(3));
        assert_eq!(f5.arith(ArithOp::Sub, 1, 3).unwrap(), FieldElement::new(3));
    }

    #[test]
    fn frobenius_examples() {
        let f4 = f(2, 2);
        let sigma = FieldAutomorphism::new(&f4, 1).unwrap();
        assert_eq!(f4.frobenius(sigma, FieldElement::new(2)), FieldElement::new(3));
        for a in f4.elements() {
            assert_eq!(f4.frobenius(FieldAutomorphism::IDENTITY, a), a);
        }
        let f2 = f(2, 1);
        assert_eq!(f2.frobenius(FieldAutomorphism::IDENTITY, FieldElement::ONE), FieldElement::ONE);
        assert!(FieldAutomorphism::new(&f2, 1).is_err());
    }

    #[test]
    fn nonsquares() {
        assert_eq!(f(3, 1).nonsquare().unwrap(), FieldElement::new(2));
        assert_eq!(f(5, 1).nonsquare().unwrap(), FieldElement::new(2));
        assert_eq!(f(7, 1).nonsquare().unwrap(), FieldElement::new(3));
        assert_eq!(f(2, 2).nonsquare().unwrap_err(), Error::NoNonsquare);
        for (p, r) in [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2)] {
            let fld = f(p, r);
            let squares: std::collections::BTreeSet<_> =
                fld.nonzero_elements().map(|a| fld.mul(a, a)).collect();
            let non = fld.nonzero_elements().filter(|a| !squares.contains(a)).count();
            assert_eq!(non as u32, (fld.q() - 1) / 2);
            assert_eq!(fld.nonsquare().unwrap(), fld.nonzero_elements().find(|a| !squares.contains(a)).unwrap());
        }
    }

    #[test]
    fn fermat_identities_exhaustive() {
        for (p, r) in [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (2, 4), (3, 3), (5, 2), (7, 2), (3, 4), (2, 6)] {
            let fld = f(p, r);
            let q = fld.q() as u64;
            if q > 81 {
                continue;
            }
            for a in fld.elements() {
                assert_eq!(fld.pow(a, q), a, "{fld} a={a}");
                if !a.is_zero() {
                    assert_eq!(fld.pow(a, q - 1), FieldElement::ONE);
                    assert_eq!(fld.mul(a, fld.inv(a).unwrap()), FieldElement::ONE);
                }
                assert!(fld.add(a, fld.neg(a)).is_zero());
            }
        }
    }

    #[test]
    fn frobenius_is_a_ring_automorphism() {
        for (p, r) in [(2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (7, 2)] {
            let fld = f(p, r);
            if fld.q() > 49 {
                continue;
            }
            for sigma in FieldAutomorphism::all(&fld) {
                for a in fld.elements() {
                    for b in fld.elements() {
                        let fa = fld.frobenius(sigma, a);
                        let fb = fld.frobenius(sigma, b);
                        assert_eq!(fld.frobenius(sigma, fld.add(a, b)), fld.add(fa, fb));
                        assert_eq!(fld.frobenius(sigma, fld.mul(a, b)), fld.mul(fa, fb));
                    }
                }
            }
        }
    }

    #[test]
    fn automorphisms_are_distinct_and_cyclic() {
        for (p, r) in [(2, 1), (2, 2), (2, 3), (3, 2), (2, 4), (3, 3), (3, 4), (2, 6)] {
            let fld = f(p, r);
            let maps: std::collections::BTreeSet<Vec<FieldElement>> = FieldAutomorphism::all(&fld)
                .map(|s| fld.elements().map(|a| fld.frobenius(s, a)).collect())
                .collect();
            assert_eq!(maps.len(), r as usize);
            let one = FieldAutomorphism::new(&fld, 1 % r).unwrap();
            for a in fld.elements() {
                let mut x = a;
                for _ in 0..r {
                    x = fld.frobenius(one, x);
                }
                assert_eq!(x, a);
            }
        }
    }

    #[test]
    fn deterministic_construction() {
        for (p, r) in [(2, 5), (3, 3), (5, 2), (7, 2), (13, 1)] {
            assert_eq!(f(p, r).modulus(), f(p, r).modulus());
        }
    }

    #[test]
    fn dense_and_log_paths_agree() {
        // q = 512 takes the log/exp path; cross-check against schoolbook products
        let big = f(2, 9);
        let small_ref = |a: u32, b: u32| -> u32 {
            let mut prod = vec![0u32; 17];
            for i in 0..9 {
                for j in 0..9 {
                    prod[i + j] ^= ((a >> i) & 1) & ((b >> j) & 1);
                }
            }
            let rem = poly_rem(&prod, big.modulus(), 2);
            rem.iter().rev().fold(0, |acc, &c| acc * 2 + c)
        };
        for a in (0..512).step_by(7) {
            for b in (0..512).step_by(11) {
                assert_eq!(big.mul(FieldElement::new(a), FieldElement::new(b)).code(), small_ref(a, b));
                assert_eq!(big.add(FieldElement::new(a), FieldElement::new(b)).code(), a ^ b);
            }
        }
    }

    #[test]
    fn json_round_trip_uses_desc() {
        let f9 = f(3, 2);
        let js = serde_json::to_string(&f9).unwrap();
        assert_eq!(js, r#"{"p":3,"r":2,"modulus":[1,0,1]}"#);
        let back: FiniteField = serde_json::from_str(r#"{"p":3,"r":2}"#).unwrap();
        assert_eq!(back, f9);
        assert!(serde_json::from_str::<FiniteField>(r#"{"p":3,"r":2,"modulus":[2,0,1]}"#).is_err());
    }
}
