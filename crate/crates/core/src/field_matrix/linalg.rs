//! Gaussian elimination on dense row-major matrices over F_p.

use super::field::PrimeField;

/// Determinant of a square matrix by elimination with row swaps.
pub fn det(field: PrimeField, mut rows: Vec<Vec<u32>>) -> u32 {
    let n = rows.len();
    let mut acc = 1u32;
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| rows[r][col] != 0) else {
            return 0;
        };
        if piv != col {
            rows.swap(piv, col);
            acc = field.neg(acc);
        }
        let pv = rows[col][col];
        acc = field.mul(acc, pv);
        let inv = field.inv(pv).unwrap();
        for r in col + 1..n {
            let factor = field.mul(rows[r][col], inv);
            if factor == 0 {
                continue;
            }
            for c in col..n {
                let sub = field.mul(factor, rows[col][c]);
                rows[r][c] = field.sub(rows[r][c], sub);
            }
        }
    }
    acc
}

/// Rank of an arbitrary rectangular matrix.
pub fn rank(field: PrimeField, mut rows: Vec<Vec<u32>>) -> usize {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(piv) = (r..nrows).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(piv, r);
        let inv = field.inv(rows[r][col]).unwrap();
        for i in r + 1..nrows {
            let factor = field.mul(rows[i][col], inv);
            if factor == 0 {
                continue;
            }
            for c in col..ncols {
                let sub = field.mul(factor, rows[r][c]);
                rows[i][c] = field.sub(rows[i][c], sub);
            }
        }
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_determinants() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(det(f, vec![vec![1, 4], vec![1, 2]]), 5);
        assert_eq!(det(f, vec![vec![0, 1], vec![1, 0]]), 6);
        assert_eq!(det(f, vec![vec![1, 2], vec![2, 4]]), 0);
    }

    #[test]
    fn rank_of_rectangular() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(rank(f, vec![vec![1, 1], vec![2, 3], vec![4, 2]]), 2);
        assert_eq!(rank(f, vec![vec![1, 2], vec![2, 4], vec![3, 6]]), 1);
        assert_eq!(rank(f, vec![vec![0, 0]]), 0);
    }
}
