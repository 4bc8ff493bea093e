//! Canonical-generator weights `mu_beta` and the exponent matrix
//! `R[i][j] = (mu_i, beta_j) / (beta_j, beta_j)`.
//!
//! Exceptional weights come from the fixture files; classical ones from the
//! closed formulas in epsilon coordinates. Everything else (simple-root
//! coordinates for classical types, `R`, dominance, restriction) is derived.

use num_traits::Zero;
use thiserror::Error;

use crate::cascade::{kostant_cascade, Cascade, CascadeError};
use crate::fixtures::{FixtureError, Source};
use crate::linalg::{q, to_i64, Q};
use crate::rootsys::{digit_string, Family, RootSysError, RootSystem, RootSystemType};
use crate::subsystem::perp_subsystem;

#[derive(Debug, Error)]
pub enum WeightError {
    #[error("weight data: {0}")]
    Data(String),
    #[error(transparent)]
    Fixture(#[from] FixtureError),
    #[error(transparent)]
    Cascade(#[from] CascadeError),
    #[error(transparent)]
    RootSys(#[from] RootSysError),
}

#[derive(Clone, Debug)]
pub struct WeightTable {
    pub system: RootSystemType,
    /// Indexed by canonical cascade position.
    pub mu_simple: Vec<Vec<i64>>,
    pub mu_euclid: Vec<Vec<Q>>,
    pub r: Vec<Vec<i64>>,
    /// `table_order[i]` is the canonical position of the table's `beta_{i+1}`.
    pub table_order: Vec<usize>,
    pub search_order: Option<Vec<usize>>,
}

impl WeightTable {
    /// Converts a vector indexed by table order to canonical order.
    pub fn to_canonical<T: Clone>(&self, table: &[T]) -> Vec<T> {
        let mut out = table.to_vec();
        for (i, &p) in self.table_order.iter().enumerate() {
            out[p] = table[i].clone();
        }
        out
    }

    pub fn to_table<T: Clone>(&self, canonical: &[T]) -> Vec<T> {
        self.table_order.iter().map(|&p| canonical[p].clone()).collect()
    }
}

/// Weights and cascade in epsilon coordinates, in table order.
struct EpsilonData {
    cascade: Vec<Vec<Q>>,
    mu: Vec<Vec<Q>>,
    mu_simple: Option<Vec<Vec<i64>>>,
    permutation: Option<Vec<usize>>,
    search_order: Option<Vec<usize>>,
}

fn eps(dim: usize, terms: impl IntoIterator<Item = (usize, i64)>) -> Vec<Q> {
    let mut v = vec![q(0); dim];
    for (k, c) in terms {
        v[k - 1] += q(c);
    }
    v
}

/// Classical cascade and weights in epsilon form, table indices `1..=m`.
fn classical_data(ty: RootSystemType) -> EpsilonData {
    let r = ty.rank;
    let mut cascade = Vec::new();
    let mut mu = Vec::new();
    let ones = |from: usize, to: usize, c: i64| (from..=to).map(move |k| (k, c));
    match ty.family {
        Family::A => {
            let n = r + 1;
            for i in 1..=n / 2 {
                cascade.push(eps(n, [(i, 1), (n - i + 1, -1)]));
                mu.push(eps(n, ones(1, i, 1).chain(ones(n - i + 1, n, -1))));
            }
        }
        Family::C => {
            for i in 1..=r {
                cascade.push(eps(r, [(i, 2)]));
                mu.push(eps(r, ones(1, i, 2)));
            }
        }
        Family::B | Family::D => {
            let n = r;
            let m = if ty.family == Family::B { n } else { 2 * (n / 2) };
            for i in 1..=m {
                let b = if i % 2 == 1 && i == n {
                    eps(n, [(n, 1)])
                } else if i % 2 == 1 {
                    eps(n, [(i, 1), (i + 1, 1)])
                } else {
                    eps(n, [(i - 1, 1), (i, -1)])
                };
                let w = if i % 2 == 0 && i == n && ty.family == Family::D {
                    eps(n, ones(1, n - 1, 1).chain([(n, -1)]))
                } else if i % 2 == 0 {
                    eps(n, ones(1, i - 1, 2))
                } else if i == n {
                    eps(n, ones(1, n, 1))
                } else {
                    eps(n, ones(1, i + 1, 1))
                };
                cascade.push(b);
                mu.push(w);
            }
        }
        _ => unreachable!("classical families only"),
    }
    EpsilonData {
        cascade,
        mu,
        mu_simple: None,
        permutation: None,
        search_order: None,
    }
}

fn parse_rational(s: &str) -> Result<Q, WeightError> {
    let bad = || WeightError::Data(format!("bad rational {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: i64 = n.trim().parse().map_err(|_| bad())?;
    let d: i64 = d.trim().parse().map_err(|_| bad())?;
    if d == 0 {
        return Err(bad());
    }
    Ok(q(n) / q(d))
}

fn fixture_data(ty: RootSystemType, source: &Source) -> Result<EpsilonData, WeightError> {
    let f = source.weights(ty)?;
    let parse = |rows: &Vec<Vec<String>>| -> Result<Vec<Vec<Q>>, WeightError> {
        rows.iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect())
            .collect()
    };
    Ok(EpsilonData {
        cascade: parse(&f.cascade_euclid)?,
        mu: parse(&f.mu_euclid)?,
        mu_simple: Some(f.mu_simple),
        permutation: Some(f.table_order_permutation),
        search_order: f.search_order_permutation,
    })
}

fn to_simple(sys: &RootSystem, v: &[Q], what: &str) -> Result<Vec<i64>, WeightError> {
    let x = sys
        .simple_coords_of_euclidean(v)?
        .ok_or_else(|| WeightError::Data(format!("{what} is outside the root span")))?;
    if sys.euclidean_coords(&int_vec(&x, what)?)? != v {
        return Err(WeightError::Data(format!("{what} is outside the root span")));
    }
    int_vec(&x, what)
}

fn int_vec(x: &[Q], what: &str) -> Result<Vec<i64>, WeightError> {
    x.iter()
        .map(|c| to_i64(c).ok_or_else(|| WeightError::Data(format!("{what} has non-integer coordinate {c}"))))
        .collect()
}

pub fn load_weights(sys: &RootSystem, cascade: &Cascade) -> Result<WeightTable, WeightError> {
    load_weights_from(sys, cascade, &Source::Embedded)
}

pub fn load_weights_from(sys: &RootSystem, cascade: &Cascade, source: &Source) -> Result<WeightTable, WeightError> {
    let ty = sys.ty();
    let data = if ty.is_exceptional() {
        fixture_data(ty, source)?
    } else {
        classical_data(ty)
    };
    let m = cascade.len();
    if data.cascade.len() != m || data.mu.len() != m {
        return Err(WeightError::Data(format!(
            "{ty}: table has {} cascade roots, computed cascade has {m}",
            data.cascade.len()
        )));
    }
    let mut table_order = Vec::with_capacity(m);
    for (i, b) in data.cascade.iter().enumerate() {
        let coeffs = to_simple(sys, b, &format!("table cascade root {}", i + 1))?;
        let pos = sys
            .index_of(&coeffs)
            .and_then(|r| cascade.position(r))
            .ok_or_else(|| {
                WeightError::Data(format!(
                    "{ty}: table root beta_{} = {} is not in the computed cascade",
                    i + 1,
                    digit_string(&coeffs)
                ))
            })?;
        table_order.push(pos);
    }
    if let Some(p) = &data.permutation {
        if *p != table_order {
            return Err(WeightError::Data(format!(
                "{ty}: recorded permutation {p:?} disagrees with computed {table_order:?}"
            )));
        }
    }
    let mut mu_simple = vec![Vec::new(); m];
    let mut mu_euclid = vec![Vec::new(); m];
    for i in 0..m {
        let ms = match &data.mu_simple {
            Some(t) => t[i].clone(),
            None => to_simple(sys, &data.mu[i], &format!("weight mu_{}", i + 1))?,
        };
        if sys.euclidean_coords(&ms)? != data.mu[i] {
            return Err(WeightError::Data(format!(
                "{ty}: simple-root and epsilon forms of mu_{} disagree",
                i + 1
            )));
        }
        mu_simple[table_order[i]] = ms;
        mu_euclid[table_order[i]] = data.mu[i].clone();
    }
    let r = mu_simple
        .iter()
        .map(|mu| cascade_expansion(sys, cascade, mu))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(WeightTable {
        system: ty,
        mu_simple,
        mu_euclid,
        r,
        table_order,
        search_order: data.search_order,
    })
}

/// Coefficients of `mu` over the (orthogonal) cascade roots.
pub fn cascade_expansion(sys: &RootSystem, cascade: &Cascade, mu: &[i64]) -> Result<Vec<i64>, WeightError> {
    let mut out = Vec::with_capacity(cascade.len());
    let mut rebuilt = vec![0i64; sys.rank()];
    for &b in &cascade.roots {
        let beta = &sys.root(b).coeffs;
        let num = sys.inner_vec(mu, beta);
        let den = sys.inner(b, b);
        if num % den != 0 || num < 0 {
            return Err(WeightError::Data(format!(
                "ratio ({}, {})/({0}, {0}) = {num}/{den} is not a nonnegative integer",
                digit_string(mu),
                digit_string(beta)
            )));
        }
        let c = num / den;
        for (x, y) in rebuilt.iter_mut().zip(beta) {
            *x += c * y;
        }
        out.push(c);
    }
    if rebuilt != mu {
        return Err(WeightError::Data(format!(
            "{} is not in the span of the cascade",
            digit_string(mu)
        )));
    }
    Ok(out)
}

/// `2 (mu, a) / (a, a)` is a nonnegative integer for every simple root `a`.
pub fn verify_dominant(sys: &RootSystem, mu: &[i64]) -> bool {
    (0..sys.rank()).all(|i| {
        let num = 2 * sys.inner_vec(mu, &sys.root(i).coeffs);
        let den = sys.inner(i, i);
        num % den == 0 && num >= 0
    })
}

/// Lower unitriangular, nonnegative, and zero off the diagonal in every
/// column belonging to a simple cascade root.
pub fn check_exponent_matrix(table: &WeightTable, cascade: &Cascade) -> Result<(), String> {
    let m = table.r.len();
    for i in 0..m {
        for j in 0..m {
            let v = table.r[i][j];
            if v < 0 {
                return Err(format!("R[{i}][{j}] = {v} is negative"));
            }
            if i == j && v != 1 {
                return Err(format!("R[{i}][{i}] = {v}, expected 1"));
            }
            if j > i && v != 0 {
                return Err(format!("R[{i}][{j}] = {v} above the diagonal"));
            }
            if i != j && cascade.is_simple[j] && v != 0 {
                return Err(format!("R[{i}][{j}] = {v} in a simple-root column"));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct RestrictionRow {
    pub cascade_position: usize,
    pub restricted: Vec<i64>,
    pub subsystem_weight: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct RestrictionReport {
    pub subsystem: Vec<RootSystemType>,
    pub rows: Vec<RestrictionRow>,
    pub ok: bool,
}

/// Checks `mu_beta - R[beta][beta_1] beta_1` against the weight that the
/// subsystem orthogonal to the highest root attaches to `beta`.
pub fn restricted_weight_check(sys: &RootSystem) -> Result<RestrictionReport, WeightError> {
    let cascade = kostant_cascade(sys)?;
    let table = load_weights(sys, &cascade)?;
    let view = perp_subsystem(sys, sys.highest_root())?;
    let beta1 = &sys.root(cascade.roots[0]).coeffs;
    let mut rows = Vec::new();
    let mut covered = vec![false; cascade.len()];
    covered[0] = true;
    let mut ok = true;
    for (k, comp) in view.components.iter().enumerate() {
        let inner = RootSystem::build(comp.ty)?;
        let ic = kostant_cascade(&inner)?;
        let it = load_weights(&inner, &ic)?;
        for (j, &r) in ic.roots.iter().enumerate() {
            let image = view.to_parent(k, &inner.root(r).coeffs);
            let Some(pos) = sys.index_of(&image).and_then(|i| cascade.position(i)) else {
                ok = false;
                continue;
            };
            let restricted: Vec<i64> = table.mu_simple[pos]
                .iter()
                .zip(beta1)
                .map(|(m, b)| m - table.r[pos][0] * b)
                .collect();
            let subsystem_weight = view.to_parent(k, &it.mu_simple[j]);
            ok &= restricted == subsystem_weight && !covered[pos];
            covered[pos] = true;
            rows.push(RestrictionRow {
                cascade_position: pos,
                restricted,
                subsystem_weight,
            });
        }
    }
    ok &= covered.iter().all(|&c| c);
    Ok(RestrictionReport {
        subsystem: view.identified_types(),
        rows,
        ok,
    })
}

/// Weights in the epsilon basis are allowed to be zero vectors only in rank 0,
/// which never occurs; used as a cheap sanity filter.
pub fn is_nonzero(v: &[Q]) -> bool {
    v.iter().any(|x| !x.is_zero())
}
