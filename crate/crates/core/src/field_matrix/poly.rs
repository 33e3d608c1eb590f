//! Dense univariate polynomials over a prime field.
//!
//! Coefficients are stored lowest degree first and kept trimmed, so the
//! zero polynomial is the empty vector.

use super::field::PrimeField;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: PrimeField,
    coeffs: Vec<u32>,
}

impl Poly {
    pub fn new(field: PrimeField, coeffs: Vec<u32>) -> Self {
        let mut p = Poly {
            field,
            coeffs: coeffs.into_iter().map(|c| c % field.p()).collect(),
        };
        p.trim();
        p
    }

    pub fn zero(field: PrimeField) -> Self {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn one(field: PrimeField) -> Self {
        Poly { field, coeffs: vec![1] }
    }

    /// The monomial x.
    pub fn x(field: PrimeField) -> Self {
        Poly { field, coeffs: vec![0, 1] }
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> u32 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> u32 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.field.inv(self.lead()).expect("nonzero leading coefficient");
        self.scale(inv)
    }

    pub fn scale(&self, c: u32) -> Poly {
        let f = self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let f = self.field;
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly::new(f, (0..len).map(|k| f.add(self.coeff(k), other.coeff(k))).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let f = self.field;
        let len = self.coeffs.len().max(other.coeffs.len());
        Poly::new(f, (0..len).map(|k| f.sub(self.coeff(k), other.coeff(k))).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field);
        }
        let f = self.field;
        let mut out = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let f = self.field;
        let dd = divisor.degree().expect("division by zero polynomial");
        let inv_lead = f.inv(divisor.lead()).unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(f), self.clone());
        }
        let mut quot = vec![0u32; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = f.mul(rem[k], inv_lead);
            if c == 0 {
                continue;
            }
            quot[k - dd] = c;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                let idx = k - dd + j;
                rem[idx] = f.sub(rem[idx], f.mul(c, b));
            }
        }
        rem.truncate(dd);
        (Poly::new(f, quot), Poly::new(f, rem))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.div_rem(divisor).1
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        let f = self.field;
        Poly::new(
            f,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| f.mul(c, k as u32 % f.p()))
                .collect(),
        )
    }

    pub fn eval(&self, x: u32) -> u32 {
        let f = self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    /// `self^e mod modulus` by square-and-multiply.
    pub fn pow_mod(&self, mut e: u64, modulus: &Poly) -> Poly {
        let mut base = self.rem(modulus);
        let mut acc = Poly::one(self.field).rem(modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            e >>= 1;
        }
        acc
    }

    /// True iff the polynomial has no repeated factor, i.e. gcd(f, f') = 1.
    ///
    /// Only meaningful when the degree is below the characteristic, which is
    /// the case for every characteristic polynomial handled here.
    pub fn is_squarefree(&self) -> bool {
        !self.is_zero() && self.gcd(&self.derivative()).is_constant()
    }

    /// Roots in the base field, ascending, by exhaustive evaluation.
    pub fn roots(&self) -> Vec<u32> {
        (0..self.field.p()).filter(|&x| self.eval(x) == 0).collect()
    }

    /// Degrees of the irreducible factors of a squarefree polynomial, in
    /// ascending order (distinct-degree factorisation).
    pub fn factor_degrees(&self) -> Vec<usize> {
        let f = self.field;
        let mut rest = self.monic();
        let mut degrees = Vec::new();
        let x = Poly::x(f);
        let mut frob = x.clone();
        let mut d = 0usize;
        while rest.degree().unwrap_or(0) > 0 {
            d += 1;
            if 2 * d > rest.degree().unwrap() {
                degrees.push(rest.degree().unwrap());
                break;
            }
            frob = frob.pow_mod(f.p() as u64, &rest);
            let g = rest.gcd(&frob.sub(&x));
            let gd = g.degree().unwrap_or(0);
            if gd > 0 {
                degrees.extend(std::iter::repeat_n(d, gd / d));
                rest = rest.div_rem(&g).0;
                frob = frob.rem(&rest);
            }
        }
        degrees
    }
}
