//! Independent oracles shared by the integration tests.
//!
//! Everything here is transcribed or recomputed without going through the
//! library's own tables: epsilon forms of cascades and weights, the
//! simple-root and cascade-root expansions of the weights, a naive orthogonal
//! subset enumerator and a box-search representation counter.

#![allow(dead_code)]

use std::collections::BTreeSet;

use kcascade::cascade::Cascade;
use kcascade::linalg::Q;
use kcascade::{kostant_cascade, load_weights, Family, RootSystem, RootSystemType, WeightTable};
use num_bigint::BigInt;

pub struct Setup {
    pub sys: RootSystem,
    pub cascade: Cascade,
    pub weights: WeightTable,
}

impl Setup {
    pub fn new(label: &str) -> Setup {
        let sys = RootSystem::build(ty(label)).unwrap();
        let cascade = kostant_cascade(&sys).unwrap();
        let weights = load_weights(&sys, &cascade).unwrap();
        Setup { sys, cascade, weights }
    }

    pub fn ctx(&self) -> kcascade::witness::Context<'_> {
        kcascade::witness::Context::new(&self.sys, &self.cascade, &self.weights)
    }

    /// Canonical cascade positions of the epsilon-form cascade, in table order.
    pub fn table_positions(&self) -> Vec<usize> {
        epsilon_cascade(self.sys.ty())
            .iter()
            .map(|v| {
                let c = self.sys.simple_coords_of_euclidean(v).unwrap().expect("cascade root in span");
                let c: Vec<i64> = c.iter().map(|x| kcascade::linalg::to_i64(x).unwrap()).collect();
                let idx = self.sys.index_of(&c).expect("cascade root is a positive root");
                self.cascade.position(idx).expect("root is in the cascade")
            })
            .collect()
    }
}

pub fn ty(label: &str) -> RootSystemType {
    label.parse().unwrap()
}

pub fn rat(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Vector from doubled coordinates.
pub fn halves(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| rat(x, 2)).collect()
}

pub fn ints(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| rat(x, 1)).collect()
}

/// `sum_k c_k e_k` in dimension `n`, with 1-based indices.
pub fn eps(n: usize, terms: &[(usize, i64)]) -> Vec<Q> {
    let mut v = vec![0i64; n];
    for &(k, c) in terms {
        v[k - 1] += c;
    }
    ints(&v)
}

/// `e_a + ... + e_b` scaled by `c`, 1-based and inclusive.
fn run(v: &mut [i64], a: usize, b: usize, c: i64) {
    for k in a..=b {
        v[k - 1] += c;
    }
}

/// Dimension of the ambient epsilon space.
pub fn ambient(t: RootSystemType) -> usize {
    match t.family {
        Family::A => t.rank + 1,
        Family::E => 8,
        Family::G => 3,
        _ => t.rank,
    }
}

/// Cascade roots in epsilon form, in table order.
pub fn epsilon_cascade(t: RootSystemType) -> Vec<Vec<Q>> {
    let n = t.rank;
    match (t.family, n) {
        (Family::A, _) => {
            let n = n + 1;
            (1..=n / 2).map(|i| eps(n, &[(i, 1), (n - i + 1, -1)])).collect()
        }
        (Family::B, _) | (Family::D, _) => {
            let mut out = Vec::new();
            for i in 1..=n / 2 {
                out.push(eps(n, &[(2 * i - 1, 1), (2 * i, 1)]));
                out.push(eps(n, &[(2 * i - 1, 1), (2 * i, -1)]));
            }
            if t.family == Family::B && n % 2 == 1 {
                out.push(eps(n, &[(n, 1)]));
            }
            out
        }
        (Family::C, _) => (1..=n).map(|i| eps(n, &[(i, 2)])).collect(),
        (Family::E, 6) => vec![
            halves(&[1, 1, 1, 1, 1, -1, -1, 1]),
            halves(&[-1, -1, -1, -1, 1, -1, -1, 1]),
            eps(8, &[(1, -1), (4, 1)]),
            eps(8, &[(2, -1), (3, 1)]),
        ],
        (Family::E, 7) => vec![
            eps(8, &[(7, -1), (8, 1)]),
            eps(8, &[(5, 1), (6, 1)]),
            eps(8, &[(3, 1), (4, 1)]),
            eps(8, &[(5, -1), (6, 1)]),
            eps(8, &[(1, 1), (2, 1)]),
            eps(8, &[(1, -1), (2, 1)]),
            eps(8, &[(3, -1), (4, 1)]),
        ],
        (Family::E, 8) => vec![
            eps(8, &[(7, 1), (8, 1)]),
            eps(8, &[(7, -1), (8, 1)]),
            eps(8, &[(5, 1), (6, 1)]),
            eps(8, &[(3, 1), (4, 1)]),
            eps(8, &[(5, -1), (6, 1)]),
            eps(8, &[(1, 1), (2, 1)]),
            eps(8, &[(1, -1), (2, 1)]),
            eps(8, &[(3, -1), (4, 1)]),
        ],
        (Family::F, _) => vec![
            eps(4, &[(1, 1), (2, 1)]),
            eps(4, &[(1, 1), (2, -1)]),
            eps(4, &[(3, 1), (4, 1)]),
            eps(4, &[(3, 1), (4, -1)]),
        ],
        (Family::G, _) => vec![ints(&[-1, -1, 2]), ints(&[1, -1, 0])],
        _ => unreachable!(),
    }
}

/// Weights in epsilon form, in table order.
pub fn epsilon_weights(t: RootSystemType) -> Vec<Vec<Q>> {
    let n = t.rank;
    let classical = |f: &dyn Fn(usize, &mut Vec<i64>), m: usize, dim: usize| -> Vec<Vec<Q>> {
        (1..=m)
            .map(|i| {
                let mut v = vec![0; dim];
                f(i, &mut v);
                ints(&v)
            })
            .collect()
    };
    match (t.family, n) {
        (Family::A, _) => {
            let n = n + 1;
            classical(
                &|i, v| {
                    run(v, 1, i, 1);
                    run(v, n - i + 1, n, -1);
                },
                n / 2,
                n,
            )
        }
        (Family::B, _) => classical(
            &|i, v| match (i % 2, i == n) {
                (0, _) => run(v, 1, i - 1, 2),
                (_, false) => run(v, 1, i + 1, 1),
                (_, true) => run(v, 1, i, 1),
            },
            n,
            n,
        ),
        (Family::C, _) => classical(&|i, v| run(v, 1, i, 2), n, n),
        (Family::D, _) => classical(
            &|i, v| match (i % 2, i == n) {
                (0, false) => run(v, 1, i - 1, 2),
                (0, true) => {
                    run(v, 1, n - 1, 1);
                    v[n - 1] -= 1;
                }
                _ => run(v, 1, i + 1, 1),
            },
            2 * (n / 2),
            n,
        ),
        (Family::E, 6) => vec![
            halves(&[1, 1, 1, 1, 1, -1, -1, 1]),
            ints(&[0, 0, 0, 0, 1, -1, -1, 1]),
            halves(&[-1, 1, 1, 3, 3, -3, -3, 3]),
            ints(&[0, 0, 2, 2, 2, -2, -2, 2]),
        ],
        (Family::E, 7) => vec![
            ints(&[0, 0, 0, 0, 0, 0, -1, 1]),
            ints(&[0, 0, 0, 0, 1, 1, -1, 1]),
            ints(&[0, 0, 1, 1, 1, 1, -2, 2]),
            ints(&[0, 0, 0, 0, 0, 2, -1, 1]),
            ints(&[1, 1, 1, 1, 1, 1, -2, 2]),
            ints(&[-1, 1, 1, 1, 1, 1, -3, 3]),
            ints(&[0, 0, 0, 2, 2, 2, -3, 3]),
        ],
        (Family::E, 8) => vec![
            ints(&[0, 0, 0, 0, 0, 0, 1, 1]),
            ints(&[0, 0, 0, 0, 0, 0, 0, 2]),
            ints(&[0, 0, 0, 0, 1, 1, 1, 3]),
            ints(&[0, 0, 1, 1, 1, 1, 1, 5]),
            ints(&[0, 0, 0, 0, 0, 2, 2, 4]),
            ints(&[1, 1, 1, 1, 1, 1, 1, 5]),
            ints(&[-1, 1, 1, 1, 1, 1, 1, 7]),
            ints(&[0, 0, 0, 2, 2, 2, 2, 8]),
        ],
        (Family::F, _) => vec![
            ints(&[1, 1, 0, 0]),
            ints(&[2, 0, 0, 0]),
            ints(&[3, 1, 1, 1]),
            ints(&[4, 2, 2, 0]),
        ],
        (Family::G, _) => vec![ints(&[-1, -1, 2]), ints(&[0, -2, 2])],
        _ => unreachable!(),
    }
}

/// Weights over the simple roots for the exceptional types, in table order.
pub fn simple_weights_exceptional(t: RootSystemType) -> Vec<Vec<i64>> {
    let rows: &[&[i64]] = match (t.family, t.rank) {
        (Family::E, 6) => &[
            &[1, 2, 2, 3, 2, 1],
            &[2, 2, 3, 4, 3, 2],
            &[3, 4, 6, 8, 6, 3],
            &[4, 6, 8, 12, 8, 4],
        ],
        (Family::E, 7) => &[
            &[2, 2, 3, 4, 3, 2, 1],
            &[2, 3, 4, 6, 5, 4, 2],
            &[4, 6, 8, 12, 9, 6, 3],
            &[2, 3, 4, 6, 5, 4, 3],
            &[4, 7, 8, 12, 9, 6, 3],
            &[6, 8, 12, 16, 12, 8, 4],
            &[6, 9, 12, 18, 15, 10, 5],
        ],
        (Family::E, 8) => &[
            &[2, 3, 4, 6, 5, 4, 3, 2],
            &[4, 5, 7, 10, 8, 6, 4, 2],
            &[6, 9, 12, 18, 15, 12, 8, 4],
            &[10, 15, 20, 30, 24, 18, 12, 6],
            &[8, 12, 16, 24, 20, 16, 12, 6],
            &[10, 16, 20, 30, 24, 18, 12, 6],
            &[14, 20, 28, 40, 32, 24, 16, 8],
            &[16, 24, 32, 48, 40, 30, 20, 10],
        ],
        (Family::F, _) => &[&[2, 3, 4, 2], &[2, 4, 6, 4], &[4, 8, 12, 6], &[6, 12, 16, 8]],
        (Family::G, _) => &[&[3, 2], &[4, 2]],
        _ => unreachable!(),
    };
    rows.iter().map(|r| r.to_vec()).collect()
}

/// Weights over the simple roots for the classical types, as printed.
pub fn simple_weights_classical(t: RootSystemType) -> Vec<Vec<Q>> {
    let n = t.rank;
    let mut out = Vec::new();
    match t.family {
        Family::A => {
            let nn = n + 1;
            for i in 1..=nn / 2 {
                out.push(
                    (1..=n)
                        .map(|k| {
                            let c = if k < i {
                                k
                            } else if k <= nn - i {
                                i
                            } else {
                                nn - k
                            };
                            rat(c as i64, 1)
                        })
                        .collect(),
                );
            }
        }
        Family::B => {
            for i in 1..=n {
                out.push(
                    (1..=n)
                        .map(|k| {
                            let c = if i % 2 == 0 {
                                if k < i { 2 * k } else { 2 * (i - 1) }
                            } else if k <= i {
                                k
                            } else {
                                i + 1
                            };
                            rat(c as i64, 1)
                        })
                        .collect(),
                );
            }
        }
        Family::C => {
            for i in 1..=n {
                out.push(
                    (1..=n)
                        .map(|k| {
                            let c = if i < n {
                                if k <= i {
                                    2 * k
                                } else if k < n {
                                    2 * i
                                } else {
                                    i
                                }
                            } else if k < n {
                                2 * k
                            } else {
                                n
                            };
                            rat(c as i64, 1)
                        })
                        .collect(),
                );
            }
        }
        Family::D => {
            for i in 1..=2 * (n / 2) {
                let (i, n) = (i as i64, n as i64);
                out.push(
                    (1..=n)
                        .map(|k| {
                            if i % 2 == 0 && i < n {
                                if k < i {
                                    rat(2 * k, 1)
                                } else if k <= n - 2 {
                                    rat(2 * (i - 1), 1)
                                } else {
                                    rat(i, 1)
                                }
                            } else if i % 2 == 0 {
                                if k <= n - 2 {
                                    rat(k, 1)
                                } else if k == n - 1 {
                                    rat(n, 2)
                                } else {
                                    rat(n - 2, 2)
                                }
                            } else if i < n - 1 {
                                if k <= i {
                                    rat(k, 1)
                                } else if k <= n - 2 {
                                    rat(i + 1, 1)
                                } else {
                                    rat(i + 1, 2)
                                }
                            } else if k <= n - 2 {
                                rat(k, 1)
                            } else if k == n - 1 {
                                rat(n - 2, 2)
                            } else {
                                rat(n, 2)
                            }
                        })
                        .collect(),
                );
            }
        }
        _ => unreachable!(),
    }
    out
}

/// Coefficients of each weight over the cascade roots, both in table order.
/// `None` marks a row the printed table does not cover.
pub fn cascade_coefficients(t: RootSystemType) -> Vec<Option<Vec<i64>>> {
    let dense = |rows: &[&[i64]], m: usize| -> Vec<Option<Vec<i64>>> {
        rows.iter()
            .map(|r| {
                let mut v = r.to_vec();
                v.resize(m, 0);
                Some(v)
            })
            .collect()
    };
    let n = t.rank;
    match (t.family, n) {
        (Family::E, 6) => dense(&[&[1], &[1, 1], &[2, 1, 1], &[3, 1, 1, 1]], 4),
        (Family::E, 7) => dense(
            &[
                &[1],
                &[1, 1],
                &[2, 1, 1],
                &[1, 1, 0, 1],
                &[2, 1, 1, 0, 1],
                &[3, 1, 1, 0, 0, 1],
                &[3, 2, 1, 0, 0, 0, 1],
            ],
            7,
        ),
        (Family::E, 8) => dense(
            &[
                &[1],
                &[1, 1],
                &[2, 1, 1],
                &[3, 2, 1, 1],
                &[3, 1, 1, 0, 1],
                &[3, 2, 1, 1, 0, 1],
                &[4, 3, 1, 1, 0, 0, 1],
                &[5, 3, 2, 1, 0, 0, 0, 1],
            ],
            8,
        ),
        (Family::F, _) => dense(&[&[1], &[1, 1], &[2, 1, 1], &[3, 1, 1, 1]], 4),
        (Family::G, _) => dense(&[&[1], &[1, 1]], 2),
        (Family::A, _) | (Family::C, _) => {
            let m = if t.family == Family::A { (n + 1) / 2 } else { n };
            (1..=m).map(|i| Some((1..=m).map(|j| (j <= i) as i64).collect())).collect()
        }
        (Family::B, _) | (Family::D, _) => {
            let m = if t.family == Family::B { n } else { 2 * (n / 2) };
            (1..=m)
                .map(|i| {
                    let mut v = vec![0i64; m];
                    if i % 2 == 0 && (i < n || t.family == Family::B) {
                        for j in (1..i - 1).step_by(2) {
                            v[j - 1] = 2;
                        }
                        v[i - 2] = 1;
                        v[i - 1] = 1;
                    } else if i % 2 == 0 {
                        // D_n, i = n
                        for j in (1..n - 2).step_by(2) {
                            v[j - 1] = 1;
                        }
                        v[n - 1] = 1;
                    } else if t.family == Family::B && i == n {
                        return None;
                    } else {
                        for j in (1..=i).step_by(2) {
                            v[j - 1] = 1;
                        }
                    }
                    Some(v)
                })
                .collect()
        }
        _ => unreachable!(),
    }
}

/// Every orthogonal subset of size at most `max`, by plain recursion on
/// pairwise inner products.
pub fn naive_orthogonal_subsets(sys: &RootSystem, max: usize) -> BTreeSet<Vec<usize>> {
    fn go(sys: &RootSystem, cur: &mut Vec<usize>, from: usize, max: usize, out: &mut BTreeSet<Vec<usize>>) {
        for r in from..sys.num_positive() {
            if cur.iter().all(|&c| sys.inner(c, r) == 0) {
                cur.push(r);
                out.insert(cur.clone());
                if cur.len() < max {
                    go(sys, cur, r + 1, max, out);
                }
                cur.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    go(sys, &mut Vec::new(), 0, max, &mut out);
    out
}

/// Counts nonnegative integer vectors `a` with `sum a_k vs[k] = target` by
/// walking the whole box of admissible coefficients. Gives up (returns
/// `None`) when the box has more than `limit` points. With `degree`, only
/// vectors of that entry sum are counted.
pub fn box_count(vs: &[Vec<i64>], target: &[i64], degree: Option<i64>, limit: u64) -> Option<u64> {
    let bounds: Vec<i64> = vs
        .iter()
        .map(|v| {
            v.iter()
                .zip(target)
                .filter(|(x, _)| **x > 0)
                .map(|(x, t)| if *t < 0 { -1 } else { t / x })
                .min()
                .unwrap_or(0)
        })
        .collect();
    if bounds.iter().any(|&b| b < 0) {
        return Some(0);
    }
    let size = bounds.iter().try_fold(1u64, |acc, &b| acc.checked_mul(b as u64 + 1))?;
    if size > limit {
        return None;
    }
    let mut a = vec![0i64; vs.len()];
    let mut count = 0;
    loop {
        let mut sum = vec![0i64; target.len()];
        for (c, v) in a.iter().zip(vs) {
            for (s, x) in sum.iter_mut().zip(v) {
                *s += c * x;
            }
        }
        if sum == target && degree.map_or(true, |d| a.iter().sum::<i64>() == d) {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == a.len() {
                return Some(count);
            }
            if a[k] < bounds[k] {
                a[k] += 1;
                break;
            }
            a[k] = 0;
            k += 1;
        }
    }
}

/// Whether `v` or `-v` is a root.
pub fn is_root(sys: &RootSystem, v: &[i64]) -> bool {
    let neg: Vec<i64> = v.iter().map(|x| -x).collect();
    sys.index_of(v).is_some() || sys.index_of(&neg).is_some()
}

pub fn coeffs(sys: &RootSystem, i: usize) -> Vec<i64> {
    sys.root(i).coeffs.clone()
}

pub fn sum(a: &[i64], b: &[i64], sign: i64) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + sign * y).collect()
}

/// Types exercised by the classical oracles: ranks 2 to 8 (D from 3).
pub fn classical_types() -> Vec<RootSystemType> {
    let mut out = Vec::new();
    for f in ["A", "B", "C", "D"] {
        let lo = if f == "D" { 3 } else { 2 };
        for r in lo..=8 {
            out.push(ty(&format!("{f}{r}")));
        }
    }
    out
}

pub fn all_types() -> Vec<RootSystemType> {
    let mut v = classical_types();
    v.extend(RootSystemType::exceptional());
    v
}
