//! Dense linear algebra over the base field `K` (Gaussian elimination).

use crate::base::{BaseElem, BaseField};
use crate::error::{domain, Result};

pub type KMatrix = Vec<Vec<BaseElem>>;

/// Determinant of a square matrix over `K`.
pub fn det(k: &BaseField, m: &[Vec<BaseElem>]) -> BaseElem {
    let n = m.len();
    let mut a: KMatrix = m.to_vec();
    let mut acc = k.one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return k.zero();
        };
        if piv != col {
            a.swap(piv, col);
            acc = -acc;
        }
        let pinv = k.inv(&a[col][col]).expect("nonzero pivot");
        acc = k.mul(&acc, &a[col][col]);
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = k.mul(&a[r][col], &pinv);
            for c in col..n {
                let t = k.mul(&f, &a[col][c]);
                a[r][c] = &a[r][c] - &t;
            }
        }
    }
    acc
}

/// Coordinates of `v` in the basis given by the rows of `basis`:
/// the unique `c` with `sum_i c_i * basis[i] = v`.
pub fn coordinates(k: &BaseField, basis: &[Vec<BaseElem>], v: &[BaseElem]) -> Result<Vec<BaseElem>> {
    let n = basis.len();
    if n == 0 || basis.iter().any(|r| r.len() != n) || v.len() != n {
        return domain("coordinates: basis must be square and match the vector length");
    }
    // Solve B^T c = v by elimination on the augmented matrix.
    let mut a: KMatrix = (0..n)
        .map(|i| {
            let mut row: Vec<BaseElem> = (0..n).map(|j| basis[j][i].clone()).collect();
            row.push(v[i].clone());
            row
        })
        .collect();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return domain("coordinates: basis is singular");
        };
        a.swap(piv, col);
        let pinv = k.inv(&a[col][col]).expect("nonzero pivot");
        for c in col..=n {
            a[col][c] = k.mul(&a[col][c], &pinv);
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in col..=n {
                let t = k.mul(&f, &a[col][c]);
                a[r][c] = &a[r][c] - &t;
            }
        }
    }
    Ok(a.into_iter().map(|mut r| r.pop().expect("augmented")).collect())
}
