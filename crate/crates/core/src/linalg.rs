//! Exact linear algebra over the integers and rationals.
//!
//! Determinants use fraction-free Bareiss elimination so every intermediate
//! value stays integral; rational elimination is reserved for solving and
//! rank, where pivots are exact `BigRational`s.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Row-major integer matrix.
pub type IntMatrix = Vec<Vec<BigInt>>;
/// Row-major rational matrix.
pub type RatMatrix = Vec<Vec<BigRational>>;

/// True when `m` is square and equal to its transpose.
pub fn is_symmetric(m: &[Vec<BigInt>]) -> bool {
    let n = m.len();
    if m.iter().any(|row| row.len() != n) {
        return false;
    }
    (0..n).all(|i| (0..i).all(|j| m[i][j] == m[j][i]))
}

/// Determinant by Bareiss fraction-free elimination with row pivoting.
/// The empty matrix has determinant 1.
pub fn bareiss_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    debug_assert!(m.iter().all(|row| row.len() == n));
    let mut a: IntMatrix = m.to_vec();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                // Exact division: the Bareiss update is divisible by the
                // previous pivot.
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = std::mem::take(&mut a[n - 1][n - 1]);
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Determinant by cofactor expansion along the first row.  Exponential, so
/// only suitable as an independent cross-check on small matrices.
pub fn det_cofactor(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut det = BigInt::zero();
    for (j, entry) in m[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: IntMatrix = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, v)| v.clone())
                    .collect()
            })
            .collect();
        let term = entry * det_cofactor(&minor);
        if j % 2 == 0 {
            det += term;
        } else {
            det -= term;
        }
    }
    det
}

/// All leading principal minors `M_1, ..., M_n` in order.
///
/// A single fraction-free pass yields every minor as a pivot; if a zero
/// pivot interrupts the pass (meaning some minor vanishes), the remaining
/// minors are computed independently, so a zero never poisons its
/// successors.
pub fn leading_minors(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = m.len();
    debug_assert!(m.iter().all(|row| row.len() == n));
    let mut out = Vec::with_capacity(n);
    let mut a: IntMatrix = m.to_vec();
    let mut prev = BigInt::one();
    for k in 0..n {
        let pivot = a[k][k].clone();
        out.push(pivot.clone());
        if k + 1 == n {
            break;
        }
        if pivot.is_zero() {
            for size in k + 2..=n {
                let sub: IntMatrix = m[..size]
                    .iter()
                    .map(|row| row[..size].to_vec())
                    .collect();
                out.push(bareiss_det(&sub));
            }
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &pivot - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = pivot;
    }
    out
}

/// Solves the square system `a x = b` exactly.  Returns `None` when `a` is
/// singular.
#[allow(clippy::needless_range_loop)] // in-place row operations
pub fn solve_rational(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    debug_assert_eq!(b.len(), n);
    let mut m: RatMatrix = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for k in 0..n {
        let pivot_row = (k..n).find(|&i| !m[i][k].is_zero())?;
        m.swap(k, pivot_row);
        let pivot = m[k][k].clone();
        for j in k..=n {
            let v = m[k][j].clone() / &pivot;
            m[k][j] = v;
        }
        for i in 0..n {
            if i == k || m[i][k].is_zero() {
                continue;
            }
            let factor = m[i][k].clone();
            for j in k..=n {
                let v = m[i][j].clone() - &factor * &m[k][j];
                m[i][j] = v;
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

/// Rank of a rectangular rational matrix by exact Gaussian elimination.
#[allow(clippy::needless_range_loop)] // in-place row operations
pub fn rank_rational(m: &[Vec<BigRational>]) -> usize {
    if m.is_empty() {
        return 0;
    }
    let rows = m.len();
    let cols = m[0].len();
    let mut a: RatMatrix = m.to_vec();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pivot_row) = (rank..rows).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot_row);
        let pivot = a[rank][col].clone();
        for i in rank + 1..rows {
            if a[i][col].is_zero() {
                continue;
            }
            let factor = a[i][col].clone() / &pivot;
            for j in col..cols {
                let v = a[i][j].clone() - &factor * &a[rank][j];
                a[i][j] = v;
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Matrix-vector product over the rationals.
pub fn mat_vec(m: &[Vec<BigRational>], v: &[BigRational]) -> Vec<BigRational> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(v)
                .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
        })
        .collect()
}

/// Converts an integer matrix into a rational one.
pub fn to_rational(m: &[Vec<BigInt>]) -> RatMatrix {
    m.iter()
        .map(|row| {
            row.iter()
                .map(|v| BigRational::from_integer(v.clone()))
                .collect()
        })
        .collect()
}
