use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// The prime field Z/pZ for an odd prime p below 2^16.
///
/// Entries fit in a `u16`, which keeps group elements compact; products of
/// two entries fit in a `u32` and short dot products in a `u64`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    p: u32,
}

pub(crate) fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3u32;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p == 2 || p >= 1 << 16 {
            return Err(Error::UnsupportedModulus(p));
        }
        Ok(PrimeField { p })
    }

    /// Field suitable for experiments with n×n matrices: p odd and p > n.
    pub fn for_dimension(p: u32, n: usize) -> Result<Self> {
        let f = Self::new(p)?;
        f.check_dimension(n)?;
        Ok(f)
    }

    pub fn check_dimension(&self, n: usize) -> Result<()> {
        if n < 2 || (self.p as usize) <= n {
            return Err(Error::FieldTooSmall { p: self.p, n });
        }
        Ok(())
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn elem(&self, v: u32) -> Fp {
        Fp { value: v % self.p, field: *self }
    }

    pub fn from_i64(&self, v: i64) -> Fp {
        self.elem(v.rem_euclid(self.p as i64) as u32)
    }

    #[inline]
    pub fn zero(&self) -> Fp {
        Fp { value: 0, field: *self }
    }

    #[inline]
    pub fn one(&self) -> Fp {
        Fp { value: 1, field: *self }
    }

    pub fn elements(&self) -> impl Iterator<Item = Fp> + '_ {
        (0..self.p).map(move |v| Fp { value: v, field: *self })
    }

    // Raw arithmetic on canonical representatives.

    #[inline]
    pub(crate) fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub(crate) fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub(crate) fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    pub(crate) fn pow(&self, mut base: u32, mut e: u64) -> u32 {
        let mut acc = 1u32;
        base %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Inverse of a nonzero element by Fermat's little theorem.
    pub(crate) fn inv(&self, a: u32) -> Option<u32> {
        if a.is_multiple_of(self.p) {
            None
        } else {
            Some(self.pow(a, self.p as u64 - 2))
        }
    }

    /// (-1)^k as a field element.
    pub(crate) fn sign(&self, k: usize) -> u32 {
        if k.is_multiple_of(2) {
            1
        } else {
            self.p - 1
        }
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

/// An element of Z/pZ, always held as its canonical representative in [0, p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp {
    value: u32,
    field: PrimeField,
}

impl Fp {
    #[inline]
    pub fn value(&self) -> u32 {
        self.value
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn inv(&self) -> Option<Fp> {
        self.field.inv(self.value).map(|v| Fp { value: v, field: self.field })
    }

    pub fn pow(&self, e: u64) -> Fp {
        Fp { value: self.field.pow(self.value, e), field: self.field }
    }

    #[inline]
    fn same_field(&self, other: &Fp) {
        assert_eq!(self.field, other.field, "mixed-field arithmetic");
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        self.same_field(&rhs);
        Fp { value: self.field.add(self.value, rhs.value), field: self.field }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        self.same_field(&rhs);
        Fp { value: self.field.sub(self.value, rhs.value), field: self.field }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        self.same_field(&rhs);
        Fp { value: self.field.mul(self.value, rhs.value), field: self.field }
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp { value: self.field.neg(self.value), field: self.field }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_composites_and_out_of_range() {
        assert_eq!(PrimeField::new(15), Err(Error::NotPrime(15)));
        assert_eq!(PrimeField::new(1), Err(Error::NotPrime(1)));
        assert_eq!(PrimeField::new(2), Err(Error::UnsupportedModulus(2)));
        assert_eq!(PrimeField::new(65537), Err(Error::UnsupportedModulus(65537)));
        assert!(PrimeField::new(65521).is_ok());
    }

    #[test]
    fn dimension_check() {
        assert!(PrimeField::for_dimension(5, 2).is_ok());
        assert_eq!(
            PrimeField::for_dimension(3, 3),
            Err(Error::FieldTooSmall { p: 3, n: 3 })
        );
    }

    #[test]
    fn inverses_in_f5() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.elem(2).inv().unwrap().value(), 3);
        assert_eq!(f.elem(3).inv().unwrap().value(), 2);
        assert_eq!(f.elem(4).inv().unwrap().value(), 4);
        assert!(f.zero().inv().is_none());
        assert_eq!(f.from_i64(-1).value(), 4);
    }

    #[test]
    fn every_nonzero_element_inverts() {
        let f = PrimeField::new(101).unwrap();
        for a in f.elements().filter(|a| !a.is_zero()) {
            assert_eq!((a * a.inv().unwrap()).value(), 1);
        }
    }
}
