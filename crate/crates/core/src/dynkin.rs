//! Dynkin data for the irreducible types, Bourbaki numbering.
//!
//! `gram` is the symmetrized Cartan matrix with short roots of squared
//! length 2: `(a_i, a_i) = 2 d_i` and `(a_i, a_j) = -max(d_i, d_j)` for
//! adjacent nodes, where `d_i` is 1 for short roots, 2 for long roots of
//! B, C, F and 3 for the long root of G2.

use crate::linalg::{q, Q};
use crate::rootsys::{Family, RootSystemType};

pub struct DynkinData {
    pub lengths: Vec<i64>,
    pub edges: Vec<(usize, usize)>,
}

pub fn dynkin_data(ty: RootSystemType) -> DynkinData {
    let r = ty.rank;
    let chain = |n: usize| (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect::<Vec<_>>();
    match ty.family {
        Family::A => DynkinData {
            lengths: vec![1; r],
            edges: chain(r),
        },
        Family::B => {
            let mut lengths = vec![2; r];
            lengths[r - 1] = 1;
            if r == 1 {
                lengths[0] = 1;
            }
            DynkinData {
                lengths,
                edges: chain(r),
            }
        }
        Family::C => {
            let mut lengths = vec![1; r];
            if r > 1 {
                lengths[r - 1] = 2;
            }
            DynkinData {
                lengths,
                edges: chain(r),
            }
        }
        Family::D => {
            let mut edges = chain(r - 1);
            edges.push((r - 3, r - 1));
            DynkinData {
                lengths: vec![1; r],
                edges,
            }
        }
        Family::E => {
            let mut edges = vec![(0, 2), (1, 3)];
            edges.extend((2..r - 1).map(|i| (i, i + 1)));
            DynkinData {
                lengths: vec![1; r],
                edges,
            }
        }
        Family::F => DynkinData {
            lengths: vec![2, 2, 1, 1],
            edges: chain(4),
        },
        Family::G => DynkinData {
            lengths: vec![1, 3],
            edges: vec![(0, 1)],
        },
    }
}

pub fn gram_matrix(ty: RootSystemType) -> Vec<Vec<i64>> {
    let d = dynkin_data(ty);
    let r = ty.rank;
    let mut g = vec![vec![0i64; r]; r];
    for i in 0..r {
        g[i][i] = 2 * d.lengths[i];
    }
    for &(i, j) in &d.edges {
        let v = -d.lengths[i].max(d.lengths[j]);
        g[i][j] = v;
        g[j][i] = v;
    }
    g
}

/// `A_ij = 2 (a_i, a_j) / (a_j, a_j)`.
pub fn cartan_from_gram(g: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let r = g.len();
    (0..r)
        .map(|i| (0..r).map(|j| 2 * g[i][j] / g[j][j]).collect())
        .collect()
}

pub fn cartan_matrix(ty: RootSystemType) -> Vec<Vec<i64>> {
    cartan_from_gram(&gram_matrix(ty))
}

/// Number of positive roots.
pub fn positive_count(ty: RootSystemType) -> usize {
    let r = ty.rank;
    match ty.family {
        Family::A => r * (r + 1) / 2,
        Family::B | Family::C => r * r,
        Family::D => r * (r - 1),
        Family::E => match r {
            6 => 36,
            7 => 63,
            _ => 120,
        },
        Family::F => 24,
        Family::G => 6,
    }
}

/// Simple roots in epsilon coordinates, one row per simple root.
pub fn epsilon_simple_roots(ty: RootSystemType) -> Vec<Vec<Q>> {
    let r = ty.rank;
    let unit = |dim: usize, pairs: &[(usize, i64)]| {
        let mut v = vec![q(0); dim];
        for &(k, c) in pairs {
            v[k] += q(c);
        }
        v
    };
    let diff = |dim: usize, i: usize| unit(dim, &[(i, 1), (i + 1, -1)]);
    match ty.family {
        Family::A => (0..r).map(|i| diff(r + 1, i)).collect(),
        Family::B | Family::C | Family::D => {
            let mut rows: Vec<Vec<Q>> = (0..r - 1).map(|i| diff(r, i)).collect();
            rows.push(match ty.family {
                Family::B => unit(r, &[(r - 1, 1)]),
                Family::C => unit(r, &[(r - 1, 2)]),
                _ => unit(r, &[(r - 2, 1), (r - 1, 1)]),
            });
            rows
        }
        Family::E => {
            let half = Q::new(1.into(), 2.into());
            let mut a1 = vec![-half.clone(); 8];
            a1[0] = half.clone();
            a1[7] = half;
            let mut rows = vec![a1, unit(8, &[(0, 1), (1, 1)])];
            rows.extend((0..r - 2).map(|i| unit(8, &[(i + 1, 1), (i, -1)])));
            rows
        }
        Family::F => {
            let h = Q::new(1.into(), 2.into());
            vec![
                unit(4, &[(1, 1), (2, -1)]),
                unit(4, &[(2, 1), (3, -1)]),
                unit(4, &[(3, 1)]),
                vec![h.clone(), -h.clone(), -h.clone(), -h],
            ]
        }
        Family::G => vec![unit(3, &[(0, 1), (1, -1)]), unit(3, &[(0, -2), (1, 1), (2, 1)])],
    }
}
