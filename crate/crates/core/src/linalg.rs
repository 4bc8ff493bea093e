//! Exact linear algebra over `BigRational`: row reduction, rank, solving,
//! kernels and row-space membership. Matrices are dense `Vec<Vec<Q>>`, one
//! inner vector per row.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_row(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| q(x)).collect()
}

pub fn q_matrix(m: &[Vec<i64>]) -> Vec<Vec<Q>> {
    m.iter().map(|r| q_row(r)).collect()
}

/// Returns the integer value of `x` if it is integral and fits in an `i64`.
pub fn to_i64(x: &Q) -> Option<i64> {
    if !x.is_integer() {
        return None;
    }
    i64::try_from(x.to_integer()).ok()
}

pub struct Rref {
    pub rows: Vec<Vec<Q>>,
    pub pivots: Vec<usize>,
}

pub fn rref(m: &[Vec<Q>], ncols: usize) -> Rref {
    let mut a: Vec<Vec<Q>> = m.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..ncols {
                    let t = &a[r][j] * &f;
                    a[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    Rref { rows: a, pivots }
}

pub fn rank(m: &[Vec<Q>], ncols: usize) -> usize {
    rref(m, ncols).pivots.len()
}

/// Some solution `x` of `sum_j a[i][j] x_j = b[i]`, or `None` if the system
/// is inconsistent. Free variables are set to zero.
pub fn solve(a: &[Vec<Q>], b: &[Q], ncols: usize) -> Option<Vec<Q>> {
    let aug: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let red = rref(&aug, ncols + 1);
    if red.pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Q::zero(); ncols];
    for (row, &p) in red.rows.iter().zip(&red.pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

/// Basis of `{x : a x = 0}`, one vector per free column, in column order.
pub fn kernel_basis(a: &[Vec<Q>], ncols: usize) -> Vec<Vec<Q>> {
    let red = rref(a, ncols);
    let mut basis = Vec::new();
    for f in (0..ncols).filter(|c| !red.pivots.contains(c)) {
        let mut v = vec![Q::zero(); ncols];
        v[f] = Q::one();
        for (row, &p) in red.rows.iter().zip(&red.pivots) {
            v[p] = -row[f].clone();
        }
        basis.push(v);
    }
    basis
}

pub fn in_row_space(a: &[Vec<Q>], v: &[Q], ncols: usize) -> bool {
    let mut ext = a.to_vec();
    ext.push(v.to_vec());
    rank(&ext, ncols) == rank(a, ncols)
}

/// Scales a rational vector to a primitive integer vector whose first
/// nonzero entry is positive.
pub fn primitive_integer(v: &[Q]) -> Vec<BigInt> {
    let den = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &den).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let sign = match ints.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    ints.into_iter().map(|x| x / &g * &sign).collect()
}

/// Rank and pivot columns of a small integer matrix, by fraction-free
/// elimination in `i128`.
pub fn int_echelon(rows: &[Vec<i64>], ncols: usize) -> (usize, Vec<usize>) {
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut prev = 1i128;
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..m.len() {
            for j in c + 1..ncols {
                m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) / prev;
            }
            m[i][c] = 0;
        }
        prev = m[r][c];
        pivots.push(c);
        r += 1;
    }
    (r, pivots)
}

pub fn int_rank(rows: &[Vec<i64>], ncols: usize) -> usize {
    int_echelon(rows, ncols).0
}

/// Solves `g x = b` for every right-hand side `b` in `rhs`, where `g` is a
/// small nonsingular square integer matrix. Returns the numerators of each
/// solution over the common denominator `det g`, or `None` if `g` is singular.
pub fn int_solve(g: &[Vec<i128>], rhs: &[Vec<i128>]) -> Option<(Vec<Vec<i128>>, i128)> {
    let k = g.len();
    let w = rhs.len();
    if k == 0 {
        return Some((vec![Vec::new(); w], 1));
    }
    let mut m: Vec<Vec<i128>> = (0..k)
        .map(|r| {
            let mut row = g[r].clone();
            row.extend(rhs.iter().map(|b| b[r]));
            row
        })
        .collect();
    let mut prev = 1i128;
    for c in 0..k {
        let p = (c..k).find(|&r| m[r][c] != 0)?;
        m.swap(c, p);
        for r in c + 1..k {
            for j in c + 1..k + w {
                m[r][j] = (m[c][c] * m[r][j] - m[r][c] * m[c][j]) / prev;
            }
            m[r][c] = 0;
        }
        prev = m[c][c];
    }
    let det = m[k - 1][k - 1];
    let mut sols = vec![vec![0i128; k]; w];
    for (t, sol) in sols.iter_mut().enumerate() {
        for r in (0..k).rev() {
            let mut s = m[r][k + t] * det;
            for j in r + 1..k {
                s -= m[r][j] * sol[j];
            }
            debug_assert_eq!(s % m[r][r], 0);
            sol[r] = s / m[r][r];
        }
    }
    Some((sols, det))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_elimination_matches_rational() {
        let m = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1], vec![1, 3, 4]];
        assert_eq!(int_rank(&m, 3), rank(&q_matrix(&m), 3));
        assert_eq!(int_echelon(&m, 3).1, vec![0, 1]);
        let g = vec![vec![2i128, 1], vec![1, 3]];
        let (x, det) = int_solve(&g, &[vec![3, 4]]).unwrap();
        assert_eq!(det, 5);
        assert_eq!(x[0], vec![5, 5]);
        assert!(int_solve(&[vec![1i128, 2], vec![2, 4]], &[vec![1, 1]]).is_none());
    }

    #[test]
    fn rank_and_kernel_of_small_system() {
        let a = q_matrix(&[vec![0, 1, 0], vec![1, 2, 1]]);
        assert_eq!(rank(&a, 3), 2);
        let k = kernel_basis(&a, 3);
        assert_eq!(k.len(), 1);
        let p = primitive_integer(&k[0]);
        assert_eq!(p, vec![BigInt::from(1), BigInt::from(0), BigInt::from(-1)]);
    }

    #[test]
    fn solve_detects_inconsistency() {
        let a = q_matrix(&[vec![1, 1], vec![2, 2]]);
        assert!(solve(&a, &[q(1), q(3)], 2).is_none());
        let x = solve(&a, &[q(1), q(2)], 2).unwrap();
        assert_eq!(x, vec![q(1), q(0)]);
    }

    #[test]
    fn row_space_membership() {
        let a = q_matrix(&[vec![0, 0, 1, 0], vec![1, 1, 3, 1]]);
        assert!(in_row_space(&a, &q_row(&[0, 0, 1, 0]), 4));
        assert!(!in_row_space(&a, &q_row(&[1, 0, 0, 0]), 4));
        assert!(in_row_space(&a, &q_row(&[1, 1, 0, 1]), 4));
    }
}
