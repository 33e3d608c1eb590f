//! Elementary symmetric polynomials and generalized Vandermonde
//! determinants with one power column omitted.

use crate::error::{Error, Result};
use crate::field_matrix::{linalg, Fp, PrimeField};

fn field_of(s: &[Fp]) -> Result<PrimeField> {
    let field = s.first().map(|x| x.field()).ok_or_else(|| Error::Malformed("empty point".into()))?;
    if let Some(x) = s.iter().find(|x| x.field() != field) {
        return Err(Error::FieldMismatch(x.field().p(), field.p()));
    }
    Ok(field)
}

/// Coefficients c_0..c_n of ∏_j (x + s_j); c_{n-m} = e_m(s).
fn product_coefficients(field: PrimeField, s: &[Fp]) -> Vec<u32> {
    // coeffs[k] multiplies x^k
    let mut coeffs = vec![1u32];
    for x in s {
        let mut next = vec![0u32; coeffs.len() + 1];
        for (k, &c) in coeffs.iter().enumerate() {
            next[k + 1] = field.add(next[k + 1], c);
            next[k] = field.add(next[k], field.mul(c, x.value()));
        }
        coeffs = next;
    }
    coeffs
}

/// e_m(s), the sum of all square-free monomials of degree m.
pub fn elementary_symmetric(s: &[Fp], m: usize) -> Result<Fp> {
    if m > s.len() {
        return Err(Error::OutOfRange { index: m, max: s.len() });
    }
    let field = field_of(s)?;
    let coeffs = product_coefficients(field, s);
    Ok(field.elem(coeffs[s.len() - m]))
}

/// The n×n matrix whose rows are (1, s_j, ..., s_j^n) with the s_j^i column
/// removed.
pub fn generalized_vandermonde_matrix(s: &[Fp], i: usize) -> Result<Vec<Vec<u32>>> {
    let n = s.len();
    if i > n {
        return Err(Error::OutOfRange { index: i, max: n });
    }
    let field = field_of(s)?;
    Ok(s.iter()
        .map(|x| (0..=n).filter(|&k| k != i).map(|k| field.pow(x.value(), k as u64)).collect())
        .collect())
}

/// det of the generalized Vandermonde matrix, by exact elimination.
pub fn generalized_vandermonde_det(s: &[Fp], i: usize) -> Result<Fp> {
    let field = field_of(s)?;
    let rows = generalized_vandermonde_matrix(s, i)?;
    Ok(field.elem(linalg::det(field, rows)))
}

/// ∏_{j<k} (s_k - s_j).
pub fn vandermonde_product(s: &[Fp]) -> Result<Fp> {
    let field = field_of(s)?;
    let mut acc = field.one();
    for k in 0..s.len() {
        for j in 0..k {
            acc = acc * (s[k] - s[j]);
        }
    }
    Ok(acc)
}

/// det A_i = ∏_{j<k}(s_k - s_j) · e_{n-i}(s), checked exactly.
pub fn verify_vander_identity(s: &[Fp], i: usize) -> Result<bool> {
    let lhs = generalized_vandermonde_det(s, i)?;
    let rhs = vandermonde_product(s)? * elementary_symmetric(s, s.len() - i)?;
    Ok(lhs == rhs)
}

/// q_k = r_k · r_{k+1} ⋯ r_{k+l-1}, indices taken cyclically.
pub fn cyclic_product_coordinates(r: &[Fp], l: usize) -> Result<Vec<Fp>> {
    let n = r.len();
    let field = field_of(r)?;
    if l == 0 || l >= n {
        return Err(Error::OutOfRange { index: l, max: n.saturating_sub(1) });
    }
    let prod = r.iter().fold(field.one(), |acc, &x| acc * x);
    if prod != field.one() {
        return Err(Error::ProductNotOne(prod.value()));
    }
    Ok((0..n)
        .map(|k| (0..l).fold(field.one(), |acc, d| acc * r[(k + d) % n]))
        .collect())
}

/// The determinant |q_k^j| over 1 ≤ k ≤ n and j ∈ [0, n] \ {i}, where q
/// are the cyclic products of r of length l.
pub fn cyclic_vandermonde_det(r: &[Fp], l: usize, i: usize) -> Result<Fp> {
    let q = cyclic_product_coordinates(r, l)?;
    generalized_vandermonde_det(&q, i)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(p: u32, xs: &[u32]) -> Vec<Fp> {
        let f = PrimeField::new(p).unwrap();
        xs.iter().map(|&x| f.elem(x)).collect()
    }

    #[test]
    fn elementary_symmetric_examples() {
        let s = v(7, &[2, 3]);
        assert_eq!(elementary_symmetric(&s, 1).unwrap().value(), 5);
        assert_eq!(elementary_symmetric(&s, 2).unwrap().value(), 6);
        assert_eq!(elementary_symmetric(&s, 0).unwrap().value(), 1);
        assert_eq!(elementary_symmetric(&v(7, &[1, 2, 3]), 2).unwrap().value(), 4);
        assert_eq!(elementary_symmetric(&s, 3), Err(Error::OutOfRange { index: 3, max: 2 }));
    }

    #[test]
    fn generalized_det_examples() {
        let s = v(7, &[2, 3]);
        assert_eq!(generalized_vandermonde_det(&s, 1).unwrap().value(), 5);
        assert_eq!(generalized_vandermonde_det(&s, 0).unwrap().value(), 6);
        assert_eq!(generalized_vandermonde_det(&s, 2).unwrap().value(), 1);
        for i in 0..=2 {
            assert!(verify_vander_identity(&s, i).unwrap());
        }
        let rep = v(11, &[4, 4, 9]);
        for i in 0..=3 {
            assert!(generalized_vandermonde_det(&rep, i).unwrap().is_zero());
            assert!(verify_vander_identity(&rep, i).unwrap());
        }
        assert!(generalized_vandermonde_det(&s, 3).is_err());
    }

    #[test]
    fn classical_case_is_plain_vandermonde() {
        let s = v(101, &[3, 17, 40, 99]);
        assert_eq!(
            generalized_vandermonde_det(&s, 4).unwrap(),
            vandermonde_product(&s).unwrap()
        );
    }

    #[test]
    fn cyclic_products() {
        let r = v(17, &[2, 3, 3]);
        assert_eq!(cyclic_product_coordinates(&r, 1).unwrap(), r);
        assert_eq!(cyclic_product_coordinates(&r, 2).unwrap(), v(17, &[6, 9, 6]));
        let ones = v(17, &[1, 1, 1, 1]);
        for l in 1..4 {
            assert_eq!(cyclic_product_coordinates(&ones, l).unwrap(), ones);
        }
        assert_eq!(cyclic_product_coordinates(&v(17, &[2, 3, 4]), 1), Err(Error::ProductNotOne(7)));
        assert!(cyclic_product_coordinates(&r, 3).is_err());
    }
}
