//! Irreducible root systems over the integers.
//!
//! Positive roots are generated from the simple roots by height induction
//! with root strings. Canonical order: height ascending, ties broken by
//! lexicographically descending coefficient vectors, so the simple roots come
//! first as `a_1, ..., a_n`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::bits::BitSet;
use crate::dynkin;
use crate::linalg::{self, q, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RootSystemType {
    pub family: Family,
    pub rank: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RootSysError {
    #[error("illegal root system type {0}")]
    IllegalType(String),
    #[error("cannot parse root system type {0:?}")]
    BadTypeLabel(String),
    #[error("{0:?} is not a positive root of {1}")]
    NotARoot(String, RootSystemType),
    #[error("no euclidean realization for {0}")]
    NoRealization(RootSystemType),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl RootSystemType {
    pub fn new(family: Family, rank: usize) -> Result<Self, RootSysError> {
        let ok = match family {
            Family::A | Family::B | Family::C => rank >= 1,
            Family::D => rank >= 3,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        let ty = RootSystemType { family, rank };
        if ok {
            Ok(ty)
        } else {
            Err(RootSysError::IllegalType(ty.to_string()))
        }
    }

    pub fn is_exceptional(&self) -> bool {
        matches!(self.family, Family::E | Family::F | Family::G)
    }

    pub fn exceptional() -> Vec<RootSystemType> {
        ["E6", "E7", "E8", "F4", "G2"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect()
    }
}

impl fmt::Display for RootSystemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for RootSystemType {
    type Err = RootSysError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RootSysError::BadTypeLabel(s.to_string());
        let t = s.trim();
        let mut chars = t.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('E') => Family::E,
            Some('F') => Family::F,
            Some('G') => Family::G,
            _ => return Err(bad()),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| bad())?;
        RootSystemType::new(family, rank)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Root {
    pub coeffs: Vec<i64>,
    pub height: i64,
    pub index: usize,
}

/// Epsilon-coordinate realization of the simple roots.
#[derive(Clone, Debug)]
pub struct Euclid {
    pub dim: usize,
    pub simple_rows: Vec<Vec<Q>>,
    /// `gram = scale * (epsilon inner product)`.
    pub scale: Q,
}

#[derive(Clone, Debug)]
pub struct RootSystem {
    ty: RootSystemType,
    positives: Vec<Root>,
    gram: Vec<Vec<i64>>,
    euclid: Option<Euclid>,
    root_gram: Vec<i64>,
    orth: Vec<BitSet>,
    lookup: HashMap<Vec<i64>, usize>,
}

impl RootSystem {
    pub fn build(ty: RootSystemType) -> Result<RootSystem, RootSysError> {
        let ty = RootSystemType::new(ty.family, ty.rank)?;
        let gram = dynkin::gram_matrix(ty);
        let coeffs = generate_positive_roots(&gram);
        let mut roots: Vec<Vec<i64>> = coeffs;
        roots.sort_by(|a, b| {
            let ha: i64 = a.iter().sum();
            let hb: i64 = b.iter().sum();
            ha.cmp(&hb).then_with(|| b.cmp(a))
        });
        if roots.len() != dynkin::positive_count(ty) {
            return Err(RootSysError::Invariant(format!(
                "{ty}: generated {} positive roots, expected {}",
                roots.len(),
                dynkin::positive_count(ty)
            )));
        }
        let positives: Vec<Root> = roots
            .into_iter()
            .enumerate()
            .map(|(index, c)| Root {
                height: c.iter().sum(),
                coeffs: c,
                index,
            })
            .collect();
        let lookup = positives
            .iter()
            .map(|r| (r.coeffs.clone(), r.index))
            .collect();
        let n = positives.len();
        let mut root_gram = vec![0i64; n * n];
        for a in 0..n {
            for b in 0..n {
                root_gram[a * n + b] = bilinear(&gram, &positives[a].coeffs, &positives[b].coeffs);
            }
        }
        let orth = (0..n)
            .map(|a| {
                let mut s = BitSet::new(n);
                for b in 0..n {
                    if root_gram[a * n + b] == 0 {
                        s.insert(b);
                    }
                }
                s
            })
            .collect();
        let euclid = Some(build_euclid(ty, &gram)?);
        Ok(RootSystem {
            ty,
            positives,
            gram,
            euclid,
            root_gram,
            orth,
            lookup,
        })
    }

    pub fn ty(&self) -> RootSystemType {
        self.ty
    }

    pub fn rank(&self) -> usize {
        self.ty.rank
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn euclid(&self) -> Option<&Euclid> {
        self.euclid.as_ref()
    }

    pub fn positives(&self) -> &[Root] {
        &self.positives
    }

    pub fn num_positive(&self) -> usize {
        self.positives.len()
    }

    pub fn root(&self, i: usize) -> &Root {
        &self.positives[i]
    }

    pub fn simples(&self) -> &[Root] {
        &self.positives[..self.ty.rank]
    }

    /// Index of the highest root (last in canonical order).
    pub fn highest_root(&self) -> usize {
        self.positives.len() - 1
    }

    pub fn index_of(&self, coeffs: &[i64]) -> Option<usize> {
        self.lookup.get(coeffs).copied()
    }

    /// Inner product of two positive roots by index.
    #[inline]
    pub fn inner(&self, a: usize, b: usize) -> i64 {
        self.root_gram[a * self.positives.len() + b]
    }

    /// Inner product of arbitrary vectors in simple-root coordinates.
    pub fn inner_vec(&self, a: &[i64], b: &[i64]) -> i64 {
        bilinear(&self.gram, a, b)
    }

    pub fn orth_mask(&self, a: usize) -> &BitSet {
        &self.orth[a]
    }

    /// `b - a` is a nonzero nonnegative combination of simple roots.
    pub fn less(&self, a: usize, b: usize) -> bool {
        let (ra, rb) = (&self.positives[a], &self.positives[b]);
        a != b && ra.coeffs.iter().zip(&rb.coeffs).all(|(x, y)| y >= x)
    }

    /// `S(beta) = { a in positive roots : beta - a is a positive root }`.
    pub fn singular_set(&self, beta: usize) -> Vec<usize> {
        let b = &self.positives[beta].coeffs;
        (0..self.positives.len())
            .filter(|&a| {
                let d: Vec<i64> = b
                    .iter()
                    .zip(&self.positives[a].coeffs)
                    .map(|(x, y)| x - y)
                    .collect();
                self.lookup.contains_key(&d)
            })
            .collect()
    }

    /// Connected components of `subset` under non-orthogonality, each
    /// sorted by index, ordered by their smallest element.
    pub fn components(&self, subset: &[usize]) -> Vec<Vec<usize>> {
        let mut seen = vec![false; subset.len()];
        let mut out = Vec::new();
        for start in 0..subset.len() {
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut comp = vec![subset[start]];
            let mut stack = vec![start];
            while let Some(i) = stack.pop() {
                for j in 0..subset.len() {
                    if !seen[j] && self.inner(subset[i], subset[j]) != 0 {
                        seen[j] = true;
                        comp.push(subset[j]);
                        stack.push(j);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Epsilon coordinates of a vector given in simple-root coordinates.
    pub fn euclidean_coords(&self, coeffs: &[i64]) -> Result<Vec<Q>, RootSysError> {
        let e = self.euclid.as_ref().ok_or(RootSysError::NoRealization(self.ty))?;
        let mut v = vec![q(0); e.dim];
        for (c, row) in coeffs.iter().zip(&e.simple_rows) {
            if *c != 0 {
                let c = q(*c);
                for (x, y) in v.iter_mut().zip(row) {
                    *x += &c * y;
                }
            }
        }
        Ok(v)
    }

    /// Inverse of `euclidean_coords` on the span of the roots.
    pub fn simple_coords_of_euclidean(&self, v: &[Q]) -> Result<Option<Vec<Q>>, RootSysError> {
        let e = self.euclid.as_ref().ok_or(RootSysError::NoRealization(self.ty))?;
        let r = self.ty.rank;
        let a: Vec<Vec<Q>> = (0..e.dim)
            .map(|k| (0..r).map(|i| e.simple_rows[i][k].clone()).collect())
            .collect();
        Ok(linalg::solve(&a, v, r))
    }

    /// Parses the digit convention `m1 m2 ... mn` (one digit per coefficient).
    pub fn parse_root(&self, s: &str) -> Result<usize, RootSysError> {
        let coeffs: Option<Vec<i64>> = s
            .trim()
            .chars()
            .map(|c| c.to_digit(10).map(i64::from))
            .collect();
        match coeffs {
            Some(c) if c.len() == self.ty.rank => self
                .index_of(&c)
                .ok_or_else(|| RootSysError::NotARoot(s.to_string(), self.ty)),
            _ => Err(RootSysError::NotARoot(s.to_string(), self.ty)),
        }
    }

    pub fn digits(&self, i: usize) -> String {
        digit_string(&self.positives[i].coeffs)
    }

    /// SHA-256 over the type label, the canonical root list and the Gram matrix.
    pub fn datum_hash(&self) -> [u8; 32] {
        let mut h = Sha256::new();
        h.update(self.ty.to_string().as_bytes());
        for row in &self.gram {
            for x in row {
                h.update(x.to_le_bytes());
            }
        }
        for r in &self.positives {
            for x in &r.coeffs {
                h.update(x.to_le_bytes());
            }
        }
        h.finalize().into()
    }
}

pub fn digit_string(coeffs: &[i64]) -> String {
    coeffs
        .iter()
        .map(|c| {
            if (0..10).contains(c) {
                char::from(b'0' + *c as u8).to_string()
            } else {
                format!("[{c}]")
            }
        })
        .collect()
}

fn bilinear(g: &[Vec<i64>], a: &[i64], b: &[i64]) -> i64 {
    let mut s = 0;
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            s += x * y * g[i][j];
        }
    }
    s
}

/// Height induction: `beta + a_i` is a root iff `q > 0`, where `p` counts
/// how far the `a_i`-string extends below `beta` and `q = p - <beta, a_i^v>`.
fn generate_positive_roots(gram: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let r = gram.len();
    let mut all: Vec<Vec<i64>> = Vec::new();
    let mut known: std::collections::HashSet<Vec<i64>> = Default::default();
    let mut layer: Vec<Vec<i64>> = (0..r)
        .map(|i| {
            let mut v = vec![0; r];
            v[i] = 1;
            v
        })
        .collect();
    for v in &layer {
        known.insert(v.clone());
    }
    while !layer.is_empty() {
        let mut next = Vec::new();
        for beta in &layer {
            for i in 0..r {
                let mut p = 0;
                let mut down = beta.clone();
                loop {
                    down[i] -= 1;
                    if known.contains(&down) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let pair: i64 = (0..r).map(|j| beta[j] * gram[j][i]).sum::<i64>() * 2 / gram[i][i];
                if p - pair > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if known.insert(up.clone()) {
                        next.push(up);
                    }
                }
            }
        }
        all.append(&mut layer);
        layer = next;
    }
    all
}

fn build_euclid(ty: RootSystemType, gram: &[Vec<i64>]) -> Result<Euclid, RootSysError> {
    let rows = dynkin::epsilon_simple_roots(ty);
    let dot = |a: &[Q], b: &[Q]| a.iter().zip(b).fold(q(0), |acc, (x, y)| acc + x * y);
    let scale = q(gram[0][0]) / dot(&rows[0], &rows[0]);
    for i in 0..ty.rank {
        for j in 0..ty.rank {
            if q(gram[i][j]) != &scale * dot(&rows[i], &rows[j]) {
                return Err(RootSysError::Invariant(format!(
                    "{ty}: epsilon realization disagrees with the Gram matrix at ({i}, {j})"
                )));
            }
        }
    }
    Ok(Euclid {
        dim: rows[0].len(),
        simple_rows: rows,
        scale,
    })
}
