//! Independent oracles shared by the integration tests. They use plain
//! u64 arithmetic and brute force rather than the crate's algorithms.

#![allow(dead_code)]

use std::collections::HashMap;

use slgrowth::field_matrix::linalg;
use slgrowth::{PrimeField, SemisimplicityClass, SquareMatrix};

pub fn field(p: u32) -> PrimeField {
    PrimeField::new(p).unwrap()
}

pub fn modpow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

pub fn modinv(a: u64, p: u64) -> u64 {
    modpow(a, p - 2, p)
}

fn shifted_rows(g: &SquareMatrix, lambda: u64) -> Vec<Vec<u32>> {
    let p = g.field().p() as u64;
    let n = g.n();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let d = if i == j { lambda } else { 0 };
                    ((d + p - g.get(i, j) as u64) % p) as u32
                })
                .collect()
        })
        .collect()
}

/// Coefficients c_0..c_n (low to high) of det(λI - g), by evaluating the
/// determinant at λ = 0..n and interpolating.
pub fn charpoly_by_interpolation(g: &SquareMatrix) -> Vec<u64> {
    let p = g.field().p() as u64;
    let n = g.n();
    let xs: Vec<u64> = (0..=n as u64).collect();
    let ys: Vec<u64> = xs.iter().map(|&x| linalg::det(g.field(), shifted_rows(g, x)) as u64).collect();
    let mut coeffs = vec![0u64; n + 1];
    for (k, &xk) in xs.iter().enumerate() {
        // basis polynomial ∏_{m≠k} (λ - x_m) / (x_k - x_m)
        let mut basis = vec![1u64];
        let mut denom = 1u64;
        for (m, &xm) in xs.iter().enumerate() {
            if m == k {
                continue;
            }
            let mut next = vec![0u64; basis.len() + 1];
            for (d, &c) in basis.iter().enumerate() {
                next[d + 1] = (next[d + 1] + c) % p;
                next[d] = (next[d] + c * ((p - xm % p) % p)) % p;
            }
            basis = next;
            denom = denom * ((xk + p - xm) % p) % p;
        }
        let scale = ys[k] * modinv(denom, p) % p;
        for (d, c) in basis.iter().enumerate() {
            coeffs[d] = (coeffs[d] + c * scale) % p;
        }
    }
    coeffs
}

/// κ from the interpolated characteristic polynomial: (a_{n-1}, ..., a_1).
pub fn kappa_oracle(g: &SquareMatrix) -> Vec<u32> {
    let c = charpoly_by_interpolation(g);
    (1..g.n()).rev().map(|k| c[k] as u32).collect()
}

fn mat_pow_rows(field: PrimeField, rows: &[Vec<u32>], e: usize) -> Vec<Vec<u32>> {
    let p = field.p() as u64;
    let n = rows.len();
    let mut acc: Vec<Vec<u32>> = (0..n).map(|i| (0..n).map(|j| (i == j) as u32).collect()).collect();
    for _ in 0..e {
        acc = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        ((0..n).map(|k| acc[i][k] as u64 * rows[k][j] as u64 % p).sum::<u64>() % p) as u32
                    })
                    .collect()
            })
            .collect();
    }
    acc
}

/// Classification from generalized and ordinary eigenspace dimensions at
/// rational eigenvalues. For n ≤ 3 every repeated eigenvalue is rational,
/// so irrational eigenvalues are simple and never affect the answer.
pub fn classify_oracle(g: &SquareMatrix) -> SemisimplicityClass {
    let n = g.n();
    assert!(n <= 3, "oracle only valid for n <= 3");
    let field = g.field();
    let mut regular = true;
    let mut semisimple = true;
    for lambda in 0..field.p() as u64 {
        let rows = shifted_rows(g, lambda);
        let geo = n - linalg::rank(field, rows.clone());
        let gen = n - linalg::rank(field, mat_pow_rows(field, &rows, n));
        if gen > 1 {
            regular = false;
        }
        if gen != geo {
            semisimple = false;
        }
    }
    match (regular, semisimple) {
        (true, _) => SemisimplicityClass::RegularSemisimple,
        (false, true) => SemisimplicityClass::SemisimpleNotRegular,
        (false, false) => SemisimplicityClass::NotSemisimple,
    }
}

/// e_m by summing all m-subset products.
pub fn elementary_symmetric_brute(s: &[u64], m: usize, p: u64) -> u64 {
    let n = s.len();
    (0u32..1 << n)
        .filter(|mask| mask.count_ones() as usize == m)
        .map(|mask| (0..n).filter(|&j| mask >> j & 1 == 1).fold(1u64, |acc, j| acc * s[j] % p))
        .fold(0, |acc, x| (acc + x) % p)
}

/// E_+(X, Y) counted as #{(a, b, a', b') : a + b' = a' + b}, i.e. Σ_s c(s)²
/// with c(s) the number of ways to write s = a + b.
pub fn energy_oracle(x: &[u32], y: &[u32], p: u32) -> u64 {
    let mut c: HashMap<u32, u64> = HashMap::new();
    for &a in x {
        for &b in y {
            *c.entry((a + b) % p).or_default() += 1;
        }
    }
    c.values().map(|v| v * v).sum()
}

/// Every element of SL_n(F_p) by brute force over all matrices (tiny cases only).
pub fn brute_force_sl(n: usize, p: u32) -> Vec<SquareMatrix> {
    let f = field(p);
    let total = (p as u64).pow((n * n) as u32);
    (0..total)
        .filter_map(|mut code| {
            let entries: Vec<u32> = (0..n * n)
                .map(|_| {
                    let e = (code % p as u64) as u32;
                    code /= p as u64;
                    e
                })
                .collect();
            let g = SquareMatrix::from_entries(n, f, &entries).unwrap();
            (g.det() == 1).then_some(g)
        })
        .collect()
}

pub fn odd_primes_between(lo: u32, hi: u32) -> Vec<u32> {
    (lo.max(3)..=hi).filter(|&q| (2..q).take_while(|d| d * d <= q).all(|d| q % d != 0)).collect()
}
