//! Exact arithmetic over Z/pZ and over n×n matrices.

mod field;
pub mod linalg;
mod matrix;
mod poly;

pub use field::{Fp, PrimeField};
pub use matrix::{
    canonical_encode, char_poly, classify_semisimple, entry_width, mat_inv, mat_mul, KappaVector,
    SemisimplicityClass, SquareMatrix,
};
pub use poly::Poly;

/// |SL_n(F_p)| = p^{n(n-1)/2} ∏_{k=2}^{n} (p^k - 1).
pub fn sl_order(n: usize, p: u32) -> u128 {
    let p = p as u128;
    let mut order = p.pow((n * (n - 1) / 2) as u32);
    for k in 2..=n {
        order *= p.pow(k as u32) - 1;
    }
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_orders() {
        assert_eq!(sl_order(2, 5), 120);
        assert_eq!(sl_order(2, 7), 336);
        assert_eq!(sl_order(3, 7), 343 * 48 * 342);
    }
}
