//! Exact dense linear algebra: modular elimination and fraction-free
//! determinants over the integers.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::modp::PrimeField;

/// Determinant of a square matrix of residues mod `p`.
pub fn det_mod_p(field: &PrimeField, matrix: &[Vec<u64>]) -> u64 {
    let n = matrix.len();
    let mut m: Vec<Vec<u64>> = matrix.to_vec();
    let mut det = 1u64;
    for col in 0..n {
        // first nonzero entry at or below the diagonal
        let Some(piv) = (col..n).find(|&r| m[r][col] != 0) else {
            return 0;
        };
        if piv != col {
            m.swap(piv, col);
            det = field.neg(det);
        }
        let pv = m[col][col];
        det = field.mul(det, pv);
        let inv = field.inv(pv);
        for row in (col + 1)..n {
            if m[row][col] == 0 {
                continue;
            }
            let factor = field.mul(m[row][col], inv);
            for k in col..n {
                let t = field.mul(factor, m[col][k]);
                m[row][k] = field.sub(m[row][k], t);
            }
        }
    }
    det
}

/// Indices of the first linearly independent columns, scanned left to
/// right, until `limit` pivots are found or the columns run out.
pub fn pivot_columns_mod_p(field: &PrimeField, matrix: &[Vec<u64>], limit: usize) -> Vec<usize> {
    let rows = matrix.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = matrix[0].len();
    let mut m: Vec<Vec<u64>> = matrix.to_vec();
    let mut pivots = Vec::new();
    let mut next_row = 0;
    for col in 0..cols {
        if pivots.len() == limit || next_row == rows {
            break;
        }
        let Some(piv) = (next_row..rows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(piv, next_row);
        let inv = field.inv(m[next_row][col]);
        for row in (next_row + 1)..rows {
            if m[row][col] == 0 {
                continue;
            }
            let factor = field.mul(m[row][col], inv);
            for k in col..cols {
                let t = field.mul(factor, m[next_row][k]);
                m[row][k] = field.sub(m[row][k], t);
            }
        }
        pivots.push(col);
        next_row += 1;
    }
    pivots
}

/// Fraction-free (Bareiss) determinant over the integers.
pub fn bareiss_det(matrix: &[Vec<BigInt>]) -> BigInt {
    let n = matrix.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> = matrix.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = ((k + 1)..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Determinants of the leading principal submatrices, sizes `1..=n`.
pub fn leading_minors(matrix: &[Vec<BigInt>]) -> Vec<BigInt> {
    (1..=matrix.len())
        .map(|k| {
            let sub: Vec<Vec<BigInt>> = matrix[..k].iter().map(|row| row[..k].to_vec()).collect();
            bareiss_det(&sub)
        })
        .collect()
}

/// Sylvester's criterion on a symmetric integer matrix.
pub fn is_positive_definite(matrix: &[Vec<BigInt>]) -> bool {
    let n = matrix.len();
    let symmetric = (0..n).all(|i| matrix[i].len() == n && (0..i).all(|j| matrix[i][j] == matrix[j][i]));
    symmetric && leading_minors(matrix).iter().all(|m| m.is_positive())
}
