//! Reconstruction of the parameter map `xi` from central scalars `c`.
//!
//! `xi_i = c_i * prod_{j<i} xi_j^(-R[i][j])`, inverse to the monomial
//! evaluation `c_i = prod_j xi_j^R[i][j]`. Scalars are exact rationals.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::linalg::Q;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReconstructError {
    #[error("c is zero at cascade position {position}, which is not a simple root")]
    Inadmissible { position: usize },
    #[error("weight {weight} divides by the zero value at position {base}")]
    Domain { weight: usize, base: usize },
    #[error("expected {expected} values, got {got}")]
    Length { expected: usize, got: usize },
    #[error("cannot parse {0:?} as a rational")]
    Parse(String),
}

/// Nonzero at every position whose cascade root is not simple.
pub fn is_admissible(c: &[Q], is_simple: &[bool]) -> bool {
    first_inadmissible(c, is_simple).is_none()
}

fn first_inadmissible(c: &[Q], is_simple: &[bool]) -> Option<usize> {
    c.iter().zip(is_simple).position(|(x, &s)| x.is_zero() && !s)
}

fn power(x: &Q, e: i64) -> Q {
    let p = num_traits::pow(x.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

/// `prod_j t_j^R[i][j]`. A zero base contributes 1 under exponent zero and
/// 0 under a positive one; a negative exponent on it is a domain error.
pub fn evaluate_xi(t: &[Q], r: &[Vec<i64>], i: usize) -> Result<Q, ReconstructError> {
    let mut v = Q::one();
    for (j, (x, &e)) in t.iter().zip(&r[i]).enumerate() {
        if e == 0 {
            continue;
        }
        if x.is_zero() {
            if e < 0 {
                return Err(ReconstructError::Domain { weight: i, base: j });
            }
            v = Q::zero();
            continue;
        }
        v *= power(x, e);
    }
    Ok(v)
}

pub fn xi_from_c(c: &[Q], r: &[Vec<i64>], is_simple: &[bool]) -> Result<Vec<Q>, ReconstructError> {
    let m = r.len();
    if c.len() != m {
        return Err(ReconstructError::Length { expected: m, got: c.len() });
    }
    if let Some(position) = first_inadmissible(c, is_simple) {
        return Err(ReconstructError::Inadmissible { position });
    }
    let mut xi: Vec<Q> = Vec::with_capacity(m);
    for i in 0..m {
        let mut v = c[i].clone();
        for (j, x) in xi.iter().enumerate() {
            let e = r[i][j];
            if e == 0 {
                continue;
            }
            if x.is_zero() {
                return Err(ReconstructError::Domain { weight: i, base: j });
            }
            v *= power(x, -e);
        }
        xi.push(v);
    }
    Ok(xi)
}

/// Whether evaluating the reconstructed `xi` gives back `c` exactly.
pub fn roundtrip_check(c: &[Q], r: &[Vec<i64>], is_simple: &[bool]) -> Result<bool, ReconstructError> {
    let xi = xi_from_c(c, r, is_simple)?;
    for (i, ci) in c.iter().enumerate() {
        if evaluate_xi(&xi, r, i)? != *ci {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every column of a simple cascade root is zero below the diagonal.
pub fn zero_exponent_columns(r: &[Vec<i64>], is_simple: &[bool]) -> bool {
    (0..r.len())
        .filter(|&j| is_simple[j])
        .all(|j| (0..r.len()).all(|i| i == j || r[i][j] == 0))
}

/// Parses `"p/q"` or an integer.
pub fn parse_rational(s: &str) -> Result<Q, ReconstructError> {
    let err = || ReconstructError::Parse(s.to_string());
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| err())?;
    let d: BigInt = d.parse().map_err(|_| err())?;
    if d.is_zero() {
        return Err(err());
    }
    Ok(Q::new(n, d))
}

/// Parses a comma-separated tuple of rationals.
pub fn parse_tuple(s: &str) -> Result<Vec<Q>, ReconstructError> {
    s.split(',').map(parse_rational).collect()
}
