use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;

use rand::Rng;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use super::field::{Fp, PrimeField};
use super::linalg;
use super::poly::Poly;
use crate::error::{Error, Result};

type Entries = SmallVec<[u16; 16]>;

/// An n×n matrix over F_p, stored row-major.
///
/// Equality, hashing and ordering all agree with the canonical byte
/// encoding: two matrices over the same (n, p) compare exactly as their
/// encodings do.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SquareMatrix {
    n: usize,
    field: PrimeField,
    entries: Entries,
}

/// Coarse conjugacy behaviour of a group element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SemisimplicityClass {
    RegularSemisimple,
    SemisimpleNotRegular,
    NotSemisimple,
}

impl SemisimplicityClass {
    pub fn is_semisimple(self) -> bool {
        self != SemisimplicityClass::NotSemisimple
    }

    pub fn is_regular(self) -> bool {
        self == SemisimplicityClass::RegularSemisimple
    }
}

/// The non-leading, non-constant coefficients (a_{n-1}, ..., a_1) of
/// det(λI - g) = λ^n + a_{n-1}λ^{n-1} + ... + a_1 λ + (-1)^n.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KappaVector {
    field: PrimeField,
    coeffs: SmallVec<[u32; 8]>,
}

impl KappaVector {
    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Coefficients in the order (a_{n-1}, a_{n-2}, ..., a_1).
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn get(&self, k: usize) -> Fp {
        self.field.elem(self.coeffs[k])
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient a_k of λ^k, for 1 ≤ k ≤ n-1.
    pub fn a(&self, k: usize) -> u32 {
        let n = self.coeffs.len() + 1;
        self.coeffs[n - 1 - k]
    }

    /// Hex rendering using the same per-entry width as matrix encodings.
    pub fn hex(&self) -> String {
        let width = entry_width(self.field);
        let mut bytes = Vec::with_capacity(self.coeffs.len() * width);
        for &c in &self.coeffs {
            push_entry(&mut bytes, c, width);
        }
        hex::encode(bytes)
    }
}

/// Bytes per entry in the canonical encoding: 1 for p < 256, 2 otherwise.
pub fn entry_width(field: PrimeField) -> usize {
    if field.p() < 256 {
        1
    } else {
        2
    }
}

fn push_entry(out: &mut Vec<u8>, v: u32, width: usize) {
    if width == 1 {
        out.push(v as u8);
    } else {
        out.extend_from_slice(&(v as u16).to_be_bytes());
    }
}

impl SquareMatrix {
    pub fn from_entries(n: usize, field: PrimeField, entries: &[u32]) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch(entries.len(), n * n));
        }
        if n == 0 {
            return Err(Error::Malformed("empty matrix".into()));
        }
        Ok(SquareMatrix {
            n,
            field,
            entries: entries.iter().map(|&v| (v % field.p()) as u16).collect(),
        })
    }

    /// Build from signed integer rows, reducing modulo p.
    pub fn from_rows(field: PrimeField, rows: &[&[i64]]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch(row.len(), n));
            }
            entries.extend(row.iter().map(|&v| field.from_i64(v).value()));
        }
        Self::from_entries(n, field, &entries)
    }

    pub fn identity(n: usize, field: PrimeField) -> Self {
        Self::scalar(n, field, 1)
    }

    pub fn scalar(n: usize, field: PrimeField, c: u32) -> Self {
        let mut entries: Entries = SmallVec::from_elem(0, n * n);
        for i in 0..n {
            entries[i * n + i] = (c % field.p()) as u16;
        }
        SquareMatrix { n, field, entries }
    }

    pub fn diagonal(field: PrimeField, diag: &[u32]) -> Self {
        let n = diag.len();
        let mut entries: Entries = SmallVec::from_elem(0, n * n);
        for (i, &d) in diag.iter().enumerate() {
            entries[i * n + i] = (d % field.p()) as u16;
        }
        SquareMatrix { n, field, entries }
    }

    /// Elementary transvection I + c·e_{ij}.
    pub fn transvection(n: usize, field: PrimeField, i: usize, j: usize, c: u32) -> Self {
        let mut m = Self::identity(n, field);
        m.entries[i * n + j] = (c % field.p()) as u16;
        m
    }

    /// The n-cycle with ones on the superdiagonal and (-1)^{n-1} in the
    /// bottom-left corner; it has determinant 1.
    pub fn signed_cycle(n: usize, field: PrimeField) -> Self {
        let mut entries: Entries = SmallVec::from_elem(0, n * n);
        for i in 0..n - 1 {
            entries[i * n + i + 1] = 1;
        }
        entries[(n - 1) * n] = field.sign(n - 1) as u16;
        SquareMatrix { n, field, entries }
    }

    /// A uniformly random element of SL_n(F_p): sample until nonsingular,
    /// then divide the first column by the determinant.
    pub fn random_sl<R: Rng + ?Sized>(n: usize, field: PrimeField, rng: &mut R) -> Self {
        loop {
            let entries: Vec<u32> = (0..n * n).map(|_| rng.gen_range(0..field.p())).collect();
            let mut m = Self::from_entries(n, field, &entries).unwrap();
            let d = m.det();
            if d == 0 {
                continue;
            }
            let dinv = field.inv(d).unwrap();
            for r in 0..n {
                let v = field.mul(m.get(r, 0), dinv);
                m.set(r, 0, v);
            }
            debug_assert_eq!(m.det(), 1);
            return m;
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.n + j] as u32
    }

    #[inline]
    fn set(&mut self, i: usize, j: usize, v: u32) {
        self.entries[i * self.n + j] = v as u16;
    }

    pub fn entries(&self) -> impl Iterator<Item = u32> + '_ {
        self.entries.iter().map(|&v| v as u32)
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j)).collect()).collect()
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == (i == j) as u32))
    }

    fn check_compatible(&self, other: &SquareMatrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch(self.n, other.n));
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.p(), other.field.p()));
        }
        Ok(())
    }

    /// Checked product; fails on dimension or field mismatch.
    pub fn try_mul(&self, other: &SquareMatrix) -> Result<SquareMatrix> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    #[inline]
    pub(crate) fn mul_unchecked(&self, other: &SquareMatrix) -> SquareMatrix {
        let n = self.n;
        let p = self.field.p() as u64;
        let mut entries: Entries = SmallVec::from_elem(0, n * n);
        for i in 0..n {
            let row = &self.entries[i * n..(i + 1) * n];
            for j in 0..n {
                let mut acc = 0u64;
                for k in 0..n {
                    acc += row[k] as u64 * other.entries[k * n + j] as u64;
                }
                entries[i * n + j] = (acc % p) as u16;
            }
        }
        SquareMatrix { n, field: self.field, entries }
    }

    pub fn add(&self, other: &SquareMatrix) -> SquareMatrix {
        let f = self.field;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| f.add(a as u32, b as u32) as u16)
            .collect();
        SquareMatrix { n: self.n, field: f, entries }
    }

    pub fn scale(&self, c: u32) -> SquareMatrix {
        let f = self.field;
        let entries = self.entries.iter().map(|&a| f.mul(a as u32, c) as u16).collect();
        SquareMatrix { n: self.n, field: f, entries }
    }

    pub fn pow(&self, mut e: u64) -> SquareMatrix {
        let mut acc = Self::identity(self.n, self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    pub fn trace(&self) -> u32 {
        (0..self.n).fold(0, |acc, i| self.field.add(acc, self.get(i, i)))
    }

    pub fn det(&self) -> u32 {
        linalg::det(self.field, self.rows())
    }

    pub fn is_special(&self) -> bool {
        self.det() == 1
    }

    pub fn commutes_with(&self, other: &SquareMatrix) -> bool {
        self.mul_unchecked(other) == other.mul_unchecked(self)
    }

    /// Inverse by Gauss–Jordan elimination.
    pub fn inverse(&self) -> Result<SquareMatrix> {
        let n = self.n;
        let f = self.field;
        let mut a = self.rows();
        let mut inv = Self::identity(n, f).rows();
        for col in 0..n {
            let piv = (col..n).find(|&r| a[r][col] != 0).ok_or(Error::SingularMatrix)?;
            a.swap(piv, col);
            inv.swap(piv, col);
            let pinv = f.inv(a[col][col]).unwrap();
            for c in 0..n {
                a[col][c] = f.mul(a[col][c], pinv);
                inv[col][c] = f.mul(inv[col][c], pinv);
            }
            for r in 0..n {
                if r == col || a[r][col] == 0 {
                    continue;
                }
                let factor = a[r][col];
                for c in 0..n {
                    a[r][c] = f.sub(a[r][c], f.mul(factor, a[col][c]));
                    inv[r][c] = f.sub(inv[r][c], f.mul(factor, inv[col][c]));
                }
            }
        }
        let flat: Vec<u32> = inv.into_iter().flatten().collect();
        Self::from_entries(n, f, &flat)
    }

    /// The full characteristic polynomial det(λI - g), via reduction to
    /// upper Hessenberg form followed by the Hessenberg determinant
    /// recurrence.
    pub fn char_poly_full(&self) -> Poly {
        let n = self.n;
        let f = self.field;
        let mut h = self.rows();
        for m in 1..n.saturating_sub(1) {
            let Some(piv) = (m..n).find(|&i| h[i][m - 1] != 0) else {
                continue;
            };
            if piv != m {
                h.swap(piv, m);
                for row in h.iter_mut() {
                    row.swap(piv, m);
                }
            }
            let pinv = f.inv(h[m][m - 1]).unwrap();
            for j in m + 1..n {
                let u = f.mul(h[j][m - 1], pinv);
                if u == 0 {
                    continue;
                }
                for c in 0..n {
                    h[j][c] = f.sub(h[j][c], f.mul(u, h[m][c]));
                }
                for row in h.iter_mut() {
                    row[m] = f.add(row[m], f.mul(u, row[j]));
                }
            }
        }
        let mut polys: Vec<Poly> = Vec::with_capacity(n + 1);
        polys.push(Poly::one(f));
        for m in 0..n {
            let lin = Poly::new(f, vec![f.neg(h[m][m]), 1]);
            let mut next = lin.mul(&polys[m]);
            let mut t = 1u32;
            for i in 1..=m {
                t = f.mul(t, h[m - i + 1][m - i]);
                let c = f.mul(t, h[m - i][m]);
                if c != 0 {
                    next = next.sub(&polys[m - i].scale(c));
                }
            }
            polys.push(next);
        }
        polys.pop().unwrap()
    }

    /// κ(g): the coefficient vector (a_{n-1}, ..., a_1). Fails unless
    /// det(g) = 1, since the constant term (-1)^n is implied, not stored.
    pub fn char_poly(&self) -> Result<KappaVector> {
        let cp = self.char_poly_full();
        let n = self.n;
        let constant = cp.coeff(0);
        if constant != self.field.sign(n) {
            // constant term is (-1)^n det(g)
            let det = self.field.mul(constant, self.field.sign(n));
            return Err(Error::NotInGroup(det));
        }
        Ok(KappaVector {
            field: self.field,
            coeffs: (1..n).rev().map(|k| cp.coeff(k)).collect(),
        })
    }

    /// Minimal polynomial: the first linear dependency among I, g, g², ...
    /// found by incremental elimination on the flattened powers.
    pub fn minimal_poly(&self) -> Poly {
        let n = self.n;
        let f = self.field;
        let dim = n * n;
        // Each stored row: (vector, pivot column, combination of powers).
        let mut basis: Vec<(Vec<u32>, usize, Vec<u32>)> = Vec::new();
        let mut power = Self::identity(n, f);
        for k in 0..=n {
            let mut v: Vec<u32> = power.entries().collect();
            let mut combo = vec![0u32; n + 1];
            combo[k] = 1;
            for (row, piv, rcombo) in &basis {
                let c = v[*piv];
                if c == 0 {
                    continue;
                }
                for idx in 0..dim {
                    v[idx] = f.sub(v[idx], f.mul(c, row[idx]));
                }
                for idx in 0..=n {
                    combo[idx] = f.sub(combo[idx], f.mul(c, rcombo[idx]));
                }
            }
            match v.iter().position(|&x| x != 0) {
                None => return Poly::new(f, combo),
                Some(piv) => {
                    let inv = f.inv(v[piv]).unwrap();
                    let v = v.into_iter().map(|x| f.mul(x, inv)).collect();
                    let combo = combo.into_iter().map(|x| f.mul(x, inv)).collect();
                    basis.push((v, piv, combo));
                }
            }
            power = power.mul_unchecked(self);
        }
        unreachable!("Cayley-Hamilton bounds the minimal polynomial degree by n")
    }

    /// Regular semisimple iff the characteristic polynomial is squarefree;
    /// semisimple iff the minimal polynomial is squarefree. Both criteria
    /// rely on p > n, which excludes inseparable factors.
    pub fn classify_semisimple(&self) -> SemisimplicityClass {
        if self.char_poly_full().is_squarefree() {
            SemisimplicityClass::RegularSemisimple
        } else if self.minimal_poly().is_squarefree() {
            SemisimplicityClass::SemisimpleNotRegular
        } else {
            SemisimplicityClass::NotSemisimple
        }
    }

    pub fn is_regular_semisimple(&self) -> bool {
        self.char_poly_full().is_squarefree()
    }

    /// Row-major bytes, one byte per entry for p < 256 and two big-endian
    /// bytes otherwise.
    pub fn encode(&self) -> Vec<u8> {
        let width = entry_width(self.field);
        let mut out = Vec::with_capacity(self.entries.len() * width);
        for &e in &self.entries {
            push_entry(&mut out, e as u32, width);
        }
        out
    }

    pub fn decode(bytes: &[u8], n: usize, field: PrimeField) -> Result<Self> {
        let width = entry_width(field);
        if bytes.len() != n * n * width {
            return Err(Error::Malformed(format!(
                "expected {} bytes, got {}",
                n * n * width,
                bytes.len()
            )));
        }
        let entries: Vec<u32> = bytes
            .chunks(width)
            .map(|c| if width == 1 { c[0] as u32 } else { u16::from_be_bytes([c[0], c[1]]) as u32 })
            .collect();
        if let Some(&bad) = entries.iter().find(|&&v| v >= field.p()) {
            return Err(Error::Malformed(format!("entry {bad} not reduced mod {}", field.p())));
        }
        Self::from_entries(n, field, &entries)
    }
}

impl Mul for &SquareMatrix {
    type Output = SquareMatrix;

    /// Panics on mismatched shapes or fields; use [`SquareMatrix::try_mul`]
    /// for a checked product.
    fn mul(self, rhs: &SquareMatrix) -> SquareMatrix {
        self.try_mul(rhs).expect("incompatible matrices")
    }
}

impl PartialOrd for SquareMatrix {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SquareMatrix {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n, self.field)
            .cmp(&(other.n, other.field))
            .then_with(|| self.entries.cmp(&other.entries))
    }
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}/F{}", self.rows(), self.field.p())
    }
}

/// Checked matrix product.
pub fn mat_mul(a: &SquareMatrix, b: &SquareMatrix) -> Result<SquareMatrix> {
    a.try_mul(b)
}

pub fn mat_inv(g: &SquareMatrix) -> Result<SquareMatrix> {
    g.inverse()
}

pub fn char_poly(g: &SquareMatrix) -> Result<KappaVector> {
    g.char_poly()
}

pub fn classify_semisimple(g: &SquareMatrix) -> SemisimplicityClass {
    g.classify_semisimple()
}

pub fn canonical_encode(g: &SquareMatrix) -> Vec<u8> {
    g.encode()
}
