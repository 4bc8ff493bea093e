//! Witnesses `(D, D')` for zero patterns of the central scalars.
//!
//! A pattern marks which cascade scalars are nonzero. A witness is a set `D`
//! of positive roots over which exactly the weights of the nonzero positions
//! are nonnegative integer combinations, together with the axes `D'` along
//! which the solution space of the coefficient system moves.

use std::cmp::Ordering;

use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bits::BitSet;
use crate::cascade::{descending_order, Cascade};
use crate::fixtures::{WitnessFile, WitnessRow};
use crate::rootsys::RootSysError;
use crate::linalg::{in_row_space, int_echelon, int_rank, int_solve, kernel_basis, primitive_integer, q, q_matrix, solve, to_i64, Q};
use crate::orthenum::OrthSubsetIndex;
use crate::rootsys::RootSystem;
use crate::weights::WeightTable;

#[derive(Debug, Error)]
pub enum WitnessError {
    #[error("roots {0:?} are linearly dependent")]
    Dependent(Vec<usize>),
}

/// How representations are counted outside the unique-solution fast path.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Counting {
    /// Every nonnegative integer vector.
    #[default]
    Exact,
    /// Only vectors whose entry sum equals the weight's cascade degree
    /// `sum_j R[i][j]`, the rule of the original search program.
    Graded,
}

/// Everything the witness checks need about one system.
pub struct Context<'a> {
    pub sys: &'a RootSystem,
    pub cascade: &'a Cascade,
    pub weights: &'a WeightTable,
    pub counting: Counting,
    degrees: Vec<i64>,
    /// `mu_dot[root][i] = (mu_i, root)`.
    mu_dot: Vec<Vec<i64>>,
    mu_norm: Vec<i64>,
}

impl<'a> Context<'a> {
    pub fn new(sys: &'a RootSystem, cascade: &'a Cascade, weights: &'a WeightTable) -> Self {
        Context {
            sys,
            cascade,
            weights,
            counting: Counting::Exact,
            degrees: weights.r.iter().map(|row| row.iter().sum()).collect(),
            mu_dot: sys
                .positives()
                .iter()
                .map(|r| weights.mu_simple.iter().map(|mu| sys.inner_vec(mu, &r.coeffs)).collect())
                .collect(),
            mu_norm: weights.mu_simple.iter().map(|mu| sys.inner_vec(mu, mu)).collect(),
        }
    }

    pub fn with_counting(mut self, counting: Counting) -> Self {
        self.counting = counting;
        self
    }

    pub fn m(&self) -> usize {
        self.cascade.len()
    }

    pub fn highest(&self) -> usize {
        self.cascade.roots[0]
    }

    pub fn mu(&self, i: usize) -> &[i64] {
        &self.weights.mu_simple[i]
    }

    /// Cascade degree of weight `i`.
    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    /// Representation count of weight `i` over `d` under the context's rule.
    pub fn count(&self, i: usize, d: &[usize], cap: Option<u64>) -> u64 {
        match self.counting {
            Counting::Exact => representation_count(self.sys, self.mu(i), d, cap),
            Counting::Graded => graded_count(self.sys, self.mu(i), d, self.degree(i), cap),
        }
    }

    /// The unique representation of weight `i` over independent `d`, if it
    /// counts under the context's rule.
    pub fn unique_representation(&self, i: usize, d: &[usize]) -> Option<Vec<i64>> {
        let a = representation(self.sys, self.mu(i), d).ok().flatten()?;
        match self.counting {
            Counting::Graded if a.iter().sum::<i64>() != self.degree(i) => None,
            _ => Some(a),
        }
    }

    /// At least one position outside the simple cascade roots is zero.
    pub fn admissible(&self, pattern: &[bool]) -> bool {
        pattern
            .iter()
            .zip(&self.cascade.is_simple)
            .any(|(&p, &s)| !p && !s)
    }

    /// All admissible patterns, ordered by their binary value with
    /// position 0 most significant, largest first.
    pub fn admissible_patterns(&self) -> Vec<Vec<bool>> {
        let m = self.m();
        (0..1u64 << m)
            .rev()
            .map(|bits| (0..m).map(|i| bits >> (m - 1 - i) & 1 == 1).collect::<Vec<_>>())
            .filter(|p| self.admissible(p))
            .collect()
    }
}

pub fn is_independent(sys: &RootSystem, d: &[usize]) -> bool {
    let rows: Vec<Vec<i64>> = d.iter().map(|&g| sys.root(g).coeffs.clone()).collect();
    int_rank(&rows, sys.rank()) == d.len()
}

fn pairwise_orthogonal(sys: &RootSystem, d: &[usize]) -> bool {
    d.iter()
        .enumerate()
        .all(|(a, &x)| d[a + 1..].iter().all(|&y| sys.inner(x, y) == 0))
}

fn combination(sys: &RootSystem, d: &[usize], a: &[i64]) -> Vec<i64> {
    let mut v = vec![0; sys.rank()];
    for (&g, &c) in d.iter().zip(a) {
        for (x, y) in v.iter_mut().zip(&sys.root(g).coeffs) {
            *x += c * y;
        }
    }
    v
}

/// The unique coefficients of `mu` over the independent set `d`, if they are
/// nonnegative integers.
pub fn representation(sys: &RootSystem, mu: &[i64], d: &[usize]) -> Result<Option<Vec<i64>>, WitnessError> {
    if !is_independent(sys, d) {
        return Err(WitnessError::Dependent(d.to_vec()));
    }
    let a = if pairwise_orthogonal(sys, d) {
        let mut a = Vec::with_capacity(d.len());
        for &g in d {
            let (num, den) = (sys.inner_vec(mu, &sys.root(g).coeffs), sys.inner(g, g));
            if num < 0 || num % den != 0 {
                return Ok(None);
            }
            a.push(num / den);
        }
        a
    } else {
        let gram: Vec<Vec<Q>> = d
            .iter()
            .map(|&x| d.iter().map(|&y| q(sys.inner(x, y))).collect())
            .collect();
        let rhs: Vec<Q> = d
            .iter()
            .map(|&x| q(sys.inner_vec(mu, &sys.root(x).coeffs)))
            .collect();
        let Some(x) = solve(&gram, &rhs, d.len()) else {
            return Ok(None);
        };
        let mut a = Vec::with_capacity(d.len());
        for v in &x {
            match to_i64(v) {
                Some(n) if n >= 0 => a.push(n),
                _ => return Ok(None),
            }
        }
        a
    };
    Ok((combination(sys, d, &a) == mu).then_some(a))
}

/// Integer solver for the part of a vector family that forms a basis of
/// its span.
struct BasisSolver {
    basis: Vec<Vec<i64>>,
    pivots: Vec<usize>,
    /// `den * inverse` of the pivot-row submatrix.
    num: Vec<Vec<i128>>,
    den: i128,
}

impl BasisSolver {
    fn new(basis: Vec<Vec<i64>>, n: usize) -> Self {
        let k = basis.len();
        let pivots = int_echelon(&basis, n).1;
        let square: Vec<Vec<i128>> = (0..k)
            .map(|r| (0..k).map(|c| basis[c][pivots[r]] as i128).collect())
            .collect();
        let unit: Vec<Vec<i128>> = (0..k)
            .map(|c| (0..k).map(|r| (r == c) as i128).collect())
            .collect();
        let (cols, mut den) = int_solve(&square, &unit).expect("basis submatrix is invertible");
        let sign = den.signum();
        den *= sign;
        let num = (0..k)
            .map(|r| (0..k).map(|c| cols[c][r] * sign).collect())
            .collect();
        BasisSolver {
            basis,
            pivots,
            num,
            den,
        }
    }

    fn solves_nonneg(&self, res: &[i64]) -> bool {
        let k = self.basis.len();
        let mut a = vec![0i64; k];
        for r in 0..k {
            let s: i128 = (0..k).map(|c| self.num[r][c] * res[self.pivots[c]] as i128).sum();
            if s % self.den != 0 || s < 0 {
                return false;
            }
            a[r] = (s / self.den) as i64;
        }
        (0..res.len()).all(|t| (0..k).map(|r| a[r] * self.basis[r][t]).sum::<i64>() == res[t])
    }
}

/// Number of nonnegative integer vectors `a` with `sum a_k vs[k] = target`.
/// Every vector must be nonzero with nonnegative entries. Counting stops
/// once it exceeds `cap`.
pub fn count_combinations(vs: &[Vec<i64>], target: &[i64], cap: Option<u64>) -> u64 {
    if target.iter().any(|&x| x < 0) {
        return 0;
    }
    let n = target.len();
    let mut basis: Vec<Vec<i64>> = Vec::new();
    let mut free: Vec<&[i64]> = Vec::new();
    for v in vs {
        let mut trial = basis.clone();
        trial.push(v.clone());
        if int_rank(&trial, n) == trial.len() {
            basis = trial;
        } else {
            free.push(v);
        }
    }
    let solver = BasisSolver::new(basis, n);
    fn go(free: &[&[i64]], res: &mut [i64], solver: &BasisSolver, count: &mut u64, cap: u64) {
        if *count > cap {
            return;
        }
        let Some((f, rest)) = free.split_first() else {
            if solver.solves_nonneg(res) {
                *count += 1;
            }
            return;
        };
        let saved = res.to_vec();
        loop {
            go(rest, res, solver, count, cap);
            for (x, y) in res.iter_mut().zip(f.iter()) {
                *x -= y;
            }
            if res.iter().any(|&x| x < 0) {
                break;
            }
        }
        res.copy_from_slice(&saved);
    }
    let mut count = 0;
    go(&free, &mut target.to_vec(), &solver, &mut count, cap.unwrap_or(u64::MAX));
    count
}

/// Number of nonnegative integer representations of `mu` over `d`. Works
/// for dependent `d`; every coefficient is bounded by the residual.
pub fn representation_count(sys: &RootSystem, mu: &[i64], d: &[usize], cap: Option<u64>) -> u64 {
    let vs: Vec<Vec<i64>> = d.iter().map(|&g| sys.root(g).coeffs.clone()).collect();
    count_combinations(&vs, mu, cap)
}

/// As [`representation_count`], keeping only vectors with entry sum `degree`.
pub fn graded_count(sys: &RootSystem, mu: &[i64], d: &[usize], degree: i64, cap: Option<u64>) -> u64 {
    let vs: Vec<Vec<i64>> = d
        .iter()
        .map(|&g| {
            let mut v = sys.root(g).coeffs.clone();
            v.push(1);
            v
        })
        .collect();
    let mut target = mu.to_vec();
    target.push(degree);
    count_combinations(&vs, &target, cap)
}

/// Representation counts of every cascade weight over `d`.
pub fn signature(ctx: &Context, d: &[usize]) -> Vec<u64> {
    if is_independent(ctx.sys, d) {
        let bit = pattern_bit(ctx);
        return independent_signature(ctx, d)
            .into_iter()
            .map(|b| (b & bit != 0) as u64)
            .collect();
    }
    (0..ctx.m()).map(|i| ctx.count(i, d, None)).collect()
}

/// Signature bit: an exact representation exists.
pub const SIG_EXACT: u8 = 1;
/// Signature bit: the representation also has the cascade degree.
pub const SIG_GRADED: u8 = 2;

/// Signature bits for pairwise orthogonal `d`, in plain integer arithmetic.
pub fn orthogonal_signature(ctx: &Context, d: &[usize], out: &mut [u8]) {
    let sys = ctx.sys;
    for (i, slot) in out.iter_mut().enumerate() {
        let mu = ctx.mu(i);
        let mut rebuilt = vec![0i64; sys.rank()];
        let mut total = 0;
        let mut ok = true;
        for &g in d {
            let (num, den) = (sys.inner_vec(mu, &sys.root(g).coeffs), sys.inner(g, g));
            if num < 0 || num % den != 0 {
                ok = false;
                break;
            }
            total += num / den;
            for (x, y) in rebuilt.iter_mut().zip(&sys.root(g).coeffs) {
                *x += num / den * y;
            }
        }
        *slot = 0;
        if ok && rebuilt == mu {
            *slot = SIG_EXACT | if total == ctx.degree(i) { SIG_GRADED } else { 0 };
        }
    }
}

/// Fills the index's signature table, in parallel over subsets.
pub fn fill_signatures(ctx: &Context, index: &mut OrthSubsetIndex) {
    let m = ctx.m();
    let sigs: Vec<u8> = index
        .subsets
        .par_iter()
        .flat_map_iter(|s| {
            let d: Vec<usize> = s.iter().map(|&x| x as usize).collect();
            let mut out = vec![0u8; m];
            orthogonal_signature(ctx, &d, &mut out);
            out
        })
        .collect();
    index.set_signatures(m, sigs);
}

/// No element of `d` is singular for another: `b - a` is never a positive root.
pub fn pairwise_nonsingular(sys: &RootSystem, d: &[usize]) -> bool {
    d.iter().all(|&a| {
        d.iter().all(|&b| {
            let diff: Vec<i64> = sys
                .root(b)
                .coeffs
                .iter()
                .zip(&sys.root(a).coeffs)
                .map(|(x, y)| x - y)
                .collect();
            a == b || sys.index_of(&diff).is_none()
        })
    })
}

/// Positions in `d` whose coordinate is not constant on the solution space
/// of `A y = const`.
pub fn dprime_max(a: &[Vec<i64>], ncols: usize) -> Vec<usize> {
    let rows = q_matrix(a);
    (0..ncols)
        .filter(|&g| {
            let mut e = vec![Q::zero(); ncols];
            e[g] = q(1);
            !in_row_space(&rows, &e, ncols)
        })
        .collect()
}

/// A simple root orthogonal to `d \ dprime` and not to all of `dprime`,
/// with `beta0` the first element of `dprime` in descending order that
/// pairs nontrivially with it. Simple roots are tried by index.
pub fn find_alpha0(sys: &RootSystem, d: &[usize], dprime: &[usize]) -> Option<(usize, usize)> {
    let mut ordered = dprime.to_vec();
    ordered.sort_by(|&a, &b| descending_order(sys, a, b));
    (0..sys.rank()).find_map(|alpha| {
        let fixed_ok = d
            .iter()
            .filter(|g| !dprime.contains(g))
            .all(|&g| sys.inner(alpha, g) == 0);
        if !fixed_ok {
            return None;
        }
        ordered
            .iter()
            .find(|&&b| sys.inner(alpha, b) != 0)
            .map(|&b| (alpha, b))
    })
}

/// Whether a given pair satisfies the orthogonality conditions on `alpha0`.
pub fn condition_iv(sys: &RootSystem, d: &[usize], dprime: &[usize], alpha0: usize, beta0: usize) -> bool {
    alpha0 < sys.rank()
        && dprime.contains(&beta0)
        && sys.inner(alpha0, beta0) != 0
        && d
            .iter()
            .filter(|g| !dprime.contains(g))
            .all(|&g| sys.inner(alpha0, g) == 0)
}

/// Signature of `d + {beta_1}` with counted enumeration, compared against
/// the pattern with position 0 forced on.
pub fn augmentation_signature(ctx: &Context, d: &[usize]) -> Vec<u64> {
    let mut d1 = d.to_vec();
    if !d1.contains(&ctx.highest()) {
        d1.push(ctx.highest());
    }
    (0..ctx.m())
        .map(|i| ctx.count(i, &d1, Some(1)))
        .collect()
}

pub fn augmentation_check(ctx: &Context, d: &[usize], pattern: &[bool]) -> bool {
    let sig = augmentation_signature(ctx, d);
    sig.iter()
        .enumerate()
        .all(|(i, &c)| c == (i == 0 || pattern[i]) as u64)
}

/// An integer kernel vector of `a` that is nonzero on every position of
/// `dprime`, or `None` if no such vector exists.
pub fn eta_direction(a: &[Vec<i64>], ncols: usize, dprime: &[usize]) -> Option<Vec<i64>> {
    if dprime.is_empty() {
        return Some(vec![0; ncols]);
    }
    let basis = kernel_basis(&q_matrix(a), ncols);
    if basis.is_empty() {
        return None;
    }
    // Each coordinate is a polynomial in t of degree < basis.len(); it can
    // vanish at fewer than that many t unless it is identically zero.
    let tries = dprime.len() * basis.len() + 1;
    for t in 1..=tries as i64 {
        let mut v = vec![Q::zero(); ncols];
        let mut w = q(1);
        for b in &basis {
            for (x, y) in v.iter_mut().zip(b) {
                *x += &w * y;
            }
            w *= q(t);
        }
        if dprime.iter().all(|&g| !v[g].is_zero()) {
            return primitive_integer(&v).iter().map(|x| x.to_i64()).collect();
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    LinearIndependence,
    PairwiseNonsingular,
    SignatureMatch,
    FixtureDprimeSubset,
    ConditionIv,
    Augmentation,
    EtaDirection,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::LinearIndependence => "linear independence",
            Check::PairwiseNonsingular => "pairwise non-singularity",
            Check::SignatureMatch => "signature match",
            Check::FixtureDprimeSubset => "fixture D' within maximal D'",
            Check::ConditionIv => "alpha0 exists",
            Check::Augmentation => "D1 augmentation",
            Check::EtaDirection => "eta direction",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub pattern: Vec<bool>,
    pub d: Vec<usize>,
    pub signature: Vec<u64>,
    /// Canonical cascade positions of the nonzero pattern entries.
    pub active: Vec<usize>,
    /// One row per active position: coefficients over `d`.
    pub coefficient_matrix: Option<Vec<Vec<i64>>>,
    pub dprime_max: Option<Vec<usize>>,
    pub dprime_fixture: Option<Vec<usize>>,
    pub alpha0: Option<usize>,
    pub beta0: Option<usize>,
    pub eta: Option<Vec<i64>>,
    pub checks: Vec<(Check, bool)>,
    pub notes: Vec<String>,
}

impl WitnessReport {
    pub fn valid(&self) -> bool {
        self.checks.iter().all(|&(_, ok)| ok)
    }

    pub fn check(&self, c: Check) -> Option<bool> {
        self.checks.iter().find(|(k, _)| *k == c).map(|&(_, ok)| ok)
    }

    pub fn failed(&self) -> Vec<Check> {
        self.checks.iter().filter(|(_, ok)| !ok).map(|&(c, _)| c).collect()
    }

    /// Valid, but the supplied `D'` is a proper subset of the maximal one.
    pub fn pass_with_note(&self) -> bool {
        self.valid() && !self.notes.is_empty()
    }

    /// The `D'` used for the alpha0 and eta checks.
    pub fn dprime_used(&self) -> Option<&[usize]> {
        self.dprime_fixture.as_deref().or(self.dprime_max.as_deref())
    }
}

/// Runs every check on `(pattern, d)`; failures are recorded, not raised.
pub fn validate_witness(ctx: &Context, pattern: &[bool], d: &[usize], fixture: Option<&[usize]>) -> WitnessReport {
    let sys = ctx.sys;
    let mut checks = Vec::new();
    let mut notes = Vec::new();
    let independent = is_independent(sys, d);
    checks.push((Check::LinearIndependence, independent));
    checks.push((Check::PairwiseNonsingular, pairwise_nonsingular(sys, d)));
    let sig = signature(ctx, d);
    let sig_ok = sig.iter().zip(pattern).all(|(&c, &p)| c == p as u64);
    checks.push((Check::SignatureMatch, sig_ok));
    let active: Vec<usize> = (0..ctx.m()).filter(|&i| pattern[i]).collect();

    let matrix: Option<Vec<Vec<i64>>> = if independent {
        active
            .iter()
            .map(|&i| ctx.unique_representation(i, d))
            .collect()
    } else {
        None
    };
    let dmax = matrix.as_ref().map(|a| {
        dprime_max(a, d.len())
            .into_iter()
            .map(|k| d[k])
            .collect::<Vec<usize>>()
    });
    let fixture = fixture.map(|f| f.to_vec());
    if let Some(f) = &fixture {
        let ok = match &dmax {
            Some(mx) => f.iter().all(|g| mx.contains(g)),
            None => false,
        };
        checks.push((Check::FixtureDprimeSubset, ok));
        if let (true, Some(mx)) = (ok, &dmax) {
            if mx.len() > f.len() {
                notes.push(format!(
                    "fixture D' has {} of the {} non-constant axes",
                    f.len(),
                    mx.len()
                ));
            }
        }
    }
    let used: Option<Vec<usize>> = fixture.clone().or_else(|| dmax.clone());
    let pair = used.as_ref().and_then(|u| find_alpha0(sys, d, u));
    checks.push((Check::ConditionIv, pair.is_some()));
    checks.push((Check::Augmentation, augmentation_check(ctx, d, pattern)));
    let eta = match (&matrix, &used) {
        (Some(a), Some(u)) => {
            let pos: Vec<usize> = u
                .iter()
                .filter_map(|g| d.iter().position(|x| x == g))
                .collect();
            eta_direction(a, d.len(), &pos)
        }
        _ => None,
    };
    checks.push((Check::EtaDirection, eta.is_some()));
    WitnessReport {
        pattern: pattern.to_vec(),
        d: d.to_vec(),
        signature: sig,
        active,
        coefficient_matrix: matrix,
        dprime_max: dmax,
        dprime_fixture: fixture,
        alpha0: pair.map(|p| p.0),
        beta0: pair.map(|p| p.1),
        eta,
        checks,
        notes,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchSpace {
    Orthogonal,
    /// Pairwise non-positive inner products, not all zero. Such sets of
    /// positive roots are automatically linearly independent.
    NonPositive,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepEntry {
    pub pattern: Vec<bool>,
    pub witness: Option<WitnessReport>,
    pub space: Option<SearchSpace>,
    /// Further valid witnesses of the same size and search space, when requested.
    pub alternatives: Vec<Vec<usize>>,
}

fn pattern_bit(ctx: &Context) -> u8 {
    match ctx.counting {
        Counting::Exact => SIG_EXACT,
        Counting::Graded => SIG_GRADED,
    }
}

fn matches(sig: &[u8], pattern: &[bool], bit: u8) -> bool {
    sig.iter().zip(pattern).all(|(&b, &p)| (b & bit != 0) == p)
}

/// Validates candidates in order; stops at the first valid one unless `all`,
/// in which case the rest of that size is collected as alternatives.
fn take_first(
    ctx: &Context,
    pattern: &[bool],
    candidates: impl Iterator<Item = Vec<usize>>,
    space: SearchSpace,
    all: bool,
    entry: &mut SweepEntry,
) {
    let mut size = None;
    for d in candidates {
        if size.is_some_and(|k| k != d.len()) {
            break;
        }
        let rep = validate_witness(ctx, pattern, &d, None);
        if !rep.valid() {
            continue;
        }
        if entry.witness.is_none() {
            size = Some(d.len());
            entry.witness = Some(rep);
            entry.space = Some(space);
            if !all {
                return;
            }
        } else {
            entry.alternatives.push(d);
        }
    }
}

fn min_size(pattern: &[bool]) -> usize {
    pattern.iter().filter(|&&p| p).count().max(1)
}

fn search_orthogonal(ctx: &Context, index: &OrthSubsetIndex, pattern: &[bool], all: bool) -> SweepEntry {
    let bit = pattern_bit(ctx);
    let mut entry = SweepEntry {
        pattern: pattern.to_vec(),
        witness: None,
        space: None,
        alternatives: Vec::new(),
    };
    let start = index.by_size.get(min_size(pattern) - 1).map_or(index.len(), |r| r.start);
    let candidates = (start..index.len())
        .filter(|&i| index.signature(i).is_some_and(|s| matches(s, pattern, bit)))
        .map(|i| index.subsets[i].iter().map(|&x| x as usize).collect::<Vec<_>>());
    take_first(ctx, pattern, candidates, SearchSpace::Orthogonal, all, &mut entry);
    entry
}

const SMALL_K: usize = 12;
const SMALL_W: usize = 12;

/// Signature bits for a linearly independent `d`, all weights at once.
///
/// Solves the Gram system `G a = ((mu_i, g))_g` by fraction-free elimination;
/// `mu_i` lies in the span of `d` exactly when `(mu_i, mu_i) = a . b`.
pub fn independent_signature(ctx: &Context, d: &[usize]) -> Vec<u8> {
    let (k, w) = (d.len(), ctx.m());
    let mut out = vec![0u8; w];
    if k == 0 || k > SMALL_K || w > SMALL_W {
        return independent_signature_slow(ctx, d);
    }
    let sys = ctx.sys;
    let mut m = [[0i128; SMALL_K + SMALL_W]; SMALL_K];
    for (r, &x) in d.iter().enumerate() {
        for (c, &y) in d.iter().enumerate() {
            m[r][c] = sys.inner(x, y) as i128;
        }
        for i in 0..w {
            m[r][k + i] = ctx.mu_dot[x][i] as i128;
        }
    }
    let b = m;
    let mut prev = 1i128;
    for c in 0..k {
        let Some(p) = (c..k).find(|&r| m[r][c] != 0) else {
            return out;
        };
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
    let mut sol = [0i128; SMALL_K];
    'weights: for (i, slot) in out.iter_mut().enumerate() {
        for r in (0..k).rev() {
            let mut s = m[r][k + i] * det;
            for j in r + 1..k {
                s -= m[r][j] * sol[j];
            }
            sol[r] = s / m[r][r];
            if sol[r] % det != 0 || sol[r] / det < 0 {
                continue 'weights;
            }
        }
        let proj: i128 = (0..k).map(|r| sol[r] / det * b[r][k + i]).sum();
        if proj != ctx.mu_norm[i] as i128 {
            continue;
        }
        *slot = SIG_EXACT;
        if (0..k).map(|r| sol[r] / det).sum::<i128>() == ctx.degree(i) as i128 {
            *slot |= SIG_GRADED;
        }
    }
    out
}

fn independent_signature_slow(ctx: &Context, d: &[usize]) -> Vec<u8> {
    (0..ctx.m())
        .map(|i| match representation(ctx.sys, ctx.mu(i), d) {
            Ok(Some(a)) if a.iter().sum::<i64>() == ctx.degree(i) => SIG_EXACT | SIG_GRADED,
            Ok(Some(_)) => SIG_EXACT,
            _ => 0,
        })
        .collect()
}

/// Visits every set of positive roots with pairwise non-positive inner
/// products and size at most `max_size`, whose smallest element is `first`,
/// in depth-first index order.
pub fn nonpositive_sets_from(sys: &RootSystem, masks: &[BitSet], first: usize, max_size: usize, visit: &mut dyn FnMut(&[usize])) {
    fn go(masks: &[BitSet], cand: &BitSet, stack: &mut Vec<usize>, max_size: usize, visit: &mut dyn FnMut(&[usize])) {
        visit(stack);
        if stack.len() == max_size {
            return;
        }
        let mut next = BitSet::new(masks.len());
        for i in cand.iter() {
            next.assign_and_above(cand, &masks[i], i);
            stack.push(i);
            go(masks, &next, stack, max_size, visit);
            stack.pop();
        }
    }
    let n = sys.num_positive();
    let mut cand = BitSet::new(n);
    cand.assign_and_above(&BitSet::full(n), &masks[first], first);
    go(masks, &cand, &mut vec![first], max_size, visit);
}

/// Adjacency of the "inner product at most zero" graph.
pub fn nonpositive_masks(sys: &RootSystem) -> Vec<BitSet> {
    let n = sys.num_positive();
    (0..n)
        .map(|i| {
            let mut b = BitSet::new(n);
            for j in (0..n).filter(|&j| j != i && sys.inner(i, j) <= 0) {
                b.insert(j);
            }
            b
        })
        .collect()
}

/// Second stage for patterns the orthogonal stage could not serve.
fn search_nonpositive(ctx: &Context, patterns: &[Vec<bool>], all: bool) -> Vec<SweepEntry> {
    let sys = ctx.sys;
    let bit = pattern_bit(ctx);
    let masks = nonpositive_masks(sys);
    let max = sys.rank();
    let per_first: Vec<Vec<Vec<Vec<usize>>>> = (0..sys.num_positive())
        .into_par_iter()
        .map(|first| {
            let mut found = vec![Vec::new(); patterns.len()];
            nonpositive_sets_from(sys, &masks, first, max, &mut |d| {
                if d.len() < 2 || pairwise_orthogonal(sys, d) {
                    return;
                }
                let sig = independent_signature(ctx, d);
                for (p, pattern) in patterns.iter().enumerate() {
                    if d.len() >= min_size(pattern) && matches(&sig, pattern, bit) {
                        found[p].push(d.to_vec());
                    }
                }
            });
            found
        })
        .collect();
    patterns
        .par_iter()
        .enumerate()
        .map(|(p, pattern)| {
            let mut cands: Vec<Vec<usize>> = per_first.iter().flat_map(|f| f[p].iter().cloned()).collect();
            cands.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
            let mut entry = SweepEntry {
                pattern: pattern.clone(),
                witness: None,
                space: None,
                alternatives: Vec::new(),
            };
            take_first(ctx, pattern, cands.into_iter(), SearchSpace::NonPositive, all, &mut entry);
            entry
        })
        .collect()
}

/// One entry per admissible pattern, in [`Context::admissible_patterns`]
/// order. Orthogonal subsets from the index are tried first (size
/// ascending, lexicographic within a size); patterns left without a witness
/// are retried over sets with pairwise non-positive inner products. The
/// index must carry signatures (see [`fill_signatures`]).
pub fn sweep(ctx: &Context, index: &OrthSubsetIndex, all: bool) -> Vec<SweepEntry> {
    let mut entries: Vec<SweepEntry> = ctx
        .admissible_patterns()
        .par_iter()
        .map(|p| search_orthogonal(ctx, index, p, all))
        .collect();
    let open: Vec<usize> = (0..entries.len()).filter(|&i| entries[i].witness.is_none()).collect();
    if !open.is_empty() {
        let patterns: Vec<Vec<bool>> = open.iter().map(|&i| entries[i].pattern.clone()).collect();
        for (i, e) in open.into_iter().zip(search_nonpositive(ctx, &patterns, all)) {
            entries[i] = e;
        }
    }
    entries
}

/// Weights whose exact and degree-graded counts over `d` differ, as
/// `(position, exact, graded)`.
pub fn counting_divergence(ctx: &Context, d: &[usize]) -> Vec<(usize, u64, u64)> {
    (0..ctx.m())
        .filter_map(|i| {
            let exact = representation_count(ctx.sys, ctx.mu(i), d, None);
            let graded = graded_count(ctx.sys, ctx.mu(i), d, ctx.degree(i), None);
            (exact != graded).then_some((i, exact, graded))
        })
        .collect()
}

/// Sort helper for reports: descending order on root indices.
pub fn sort_descending(sys: &RootSystem, v: &mut [usize]) {
    v.sort_by(|&a, &b| match descending_order(sys, a, b) {
        Ordering::Equal => a.cmp(&b),
        o => o,
    });
}

/// A fixture row in canonical coordinates.
#[derive(Clone, Debug)]
pub struct GoldenRow {
    pub case: u32,
    pub pattern: Vec<bool>,
    pub d: Vec<usize>,
    pub dprime: Vec<usize>,
}

pub fn golden_row(ctx: &Context, row: &WitnessRow) -> Result<GoldenRow, RootSysError> {
    let table: Vec<bool> = row.pattern.iter().map(|&b| b == 1).collect();
    let parse = |v: &[String]| v.iter().map(|s| ctx.sys.parse_root(s)).collect::<Result<Vec<_>, _>>();
    Ok(GoldenRow {
        case: row.case,
        pattern: ctx.weights.to_canonical(&table),
        d: parse(&row.d)?,
        dprime: parse(&row.dprime)?,
    })
}

/// Validates every fixture row against its own `D'`, in parallel.
pub fn validate_fixture_file(ctx: &Context, file: &WitnessFile) -> Result<Vec<(GoldenRow, WitnessReport)>, RootSysError> {
    let rows = file
        .rows
        .iter()
        .map(|r| golden_row(ctx, r))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(rows
        .into_par_iter()
        .map(|g| {
            let rep = validate_witness(ctx, &g.pattern, &g.d, Some(&g.dprime));
            (g, rep)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cascade::kostant_cascade;
    use crate::weights::load_weights;

    struct Setup {
        sys: RootSystem,
        cascade: Cascade,
        weights: WeightTable,
    }

    impl Setup {
        fn new(label: &str) -> Self {
            let sys = RootSystem::build(label.parse().unwrap()).unwrap();
            let cascade = kostant_cascade(&sys).unwrap();
            let weights = load_weights(&sys, &cascade).unwrap();
            Setup { sys, cascade, weights }
        }

        fn ctx(&self) -> Context<'_> {
            Context::new(&self.sys, &self.cascade, &self.weights)
        }

        fn roots(&self, v: &[&str]) -> Vec<usize> {
            v.iter().map(|s| self.sys.parse_root(s).unwrap()).collect()
        }
    }

    fn bits(v: &[u8]) -> Vec<bool> {
        v.iter().map(|&b| b == 1).collect()
    }

    const E6_CASE8: [&str; 4] = ["010000", "011210", "111211", "112221"];
    const E6_CASE10: [&str; 4] = ["001100", "000111", "122321", "101110"];
    const E6_CASE11: [&str; 3] = ["001111", "122321", "101110"];

    #[test]
    fn representations_over_independent_sets() {
        let s = Setup::new("E6");
        let c = s.ctx();
        let d8 = s.roots(&E6_CASE8);
        assert_eq!(representation(&s.sys, c.mu(2), &d8).unwrap(), Some(vec![0, 1, 1, 2]));
        assert_eq!(representation(&s.sys, c.mu(3), &d8).unwrap(), Some(vec![0, 2, 2, 2]));
        let d10 = s.roots(&E6_CASE10);
        assert_eq!(representation(&s.sys, c.mu(3), &d10).unwrap(), Some(vec![1, 1, 3, 1]));

        let g = Setup::new("G2");
        let d = g.roots(&["31"]);
        assert_eq!(representation(&g.sys, g.ctx().mu(0), &d).unwrap(), None);
        let dep = g.roots(&["10", "11", "21"]);
        assert!(representation(&g.sys, g.ctx().mu(0), &dep).is_err());
    }

    #[test]
    fn counted_enumeration_small_cases() {
        let g = Setup::new("G2");
        let d1 = g.roots(&["31", "32"]);
        let c = g.ctx();
        assert_eq!(representation_count(&g.sys, c.mu(0), &d1, None), 1);
        assert_eq!(representation_count(&g.sys, c.mu(1), &d1, None), 0);

        let s = Setup::new("E6");
        let d = s.roots(&["010000", "122321"]);
        assert_eq!(representation_count(&s.sys, s.ctx().mu(1), &d, None), 0);
        // 2 = 1 + 1 = 2 over {1, 1, 2} in one coordinate
        assert_eq!(count_combinations(&[vec![1], vec![1], vec![2]], &[2], None), 4);
        assert_eq!(count_combinations(&[vec![1], vec![1], vec![2]], &[2], Some(1)), 2);
    }

    #[test]
    fn signatures_of_table_rows() {
        let s = Setup::new("E6");
        assert_eq!(signature(&s.ctx(), &s.roots(&E6_CASE8)), vec![0, 1, 1, 1]);
        assert_eq!(signature(&s.ctx(), &s.roots(&E6_CASE11)), vec![1, 0, 1, 0]);
        let g = Setup::new("G2");
        assert_eq!(signature(&g.ctx(), &g.roots(&["31"])), vec![0, 0]);
    }

    #[test]
    fn singular_pairs() {
        let g = Setup::new("G2");
        assert!(!pairwise_nonsingular(&g.sys, &g.roots(&["10", "11"])));
        assert!(pairwise_nonsingular(&g.sys, &g.roots(&["31", "01"])));
        // 2342 - 1342 is the simple root 1000
        let f = Setup::new("F4");
        assert!(!pairwise_nonsingular(&f.sys, &f.roots(&["1121", "1342", "2342"])));
        let s = Setup::new("E6");
        assert!(pairwise_nonsingular(&s.sys, &s.roots(&E6_CASE8)));
    }

    #[test]
    fn non_constant_axes() {
        assert_eq!(dprime_max(&[vec![0, 1, 0], vec![1, 2, 1]], 3), vec![0, 2]);
        assert_eq!(dprime_max(&[vec![0, 0, 1, 0], vec![1, 1, 3, 1]], 4), vec![0, 1, 3]);
        assert_eq!(dprime_max(&[], 3), vec![0, 1, 2]);
        assert_eq!(dprime_max(&[vec![0, 0, 1, 0], vec![1, 1, 3, 1], vec![1, 0, 0, 0]], 4), vec![1, 3]);
    }

    #[test]
    fn alpha0_selection() {
        let g = Setup::new("G2");
        let d = g.roots(&["31"]);
        assert_eq!(find_alpha0(&g.sys, &d, &d), Some((0, d[0])));
        assert_eq!(find_alpha0(&g.sys, &d, &[]), None);

        let s = Setup::new("E6");
        let d = s.roots(&E6_CASE10);
        let dp = s.roots(&["001100", "000111"]);
        let (a0, b0) = find_alpha0(&s.sys, &d, &dp).unwrap();
        assert_eq!((a0, s.sys.digits(b0).as_str()), (2, "000111"));
        assert!(condition_iv(&s.sys, &d, &dp, 3, dp[0]));
        assert!(!condition_iv(&s.sys, &d, &dp, 0, dp[0]));
    }

    #[test]
    fn augmentation() {
        let s = Setup::new("E6");
        let c = s.ctx();
        let d = s.roots(&["010000"]);
        assert_eq!(augmentation_signature(&c, &d), vec![1, 0, 0, 0]);
        assert!(augmentation_check(&c, &d, &bits(&[0, 0, 0, 0])));

        let g = Setup::new("G2");
        assert_eq!(augmentation_signature(&g.ctx(), &g.roots(&["31"])), vec![1, 0]);
        assert_eq!(augmentation_signature(&g.ctx(), &g.roots(&["10"])), vec![1, 1]);
    }

    #[test]
    fn eta_directions() {
        let a11 = [vec![0, 1, 0], vec![1, 2, 1]];
        assert_eq!(eta_direction(&a11, 3, &[0, 2]), Some(vec![1, 0, -1]));
        let a10 = [vec![0, 0, 1, 0], vec![1, 1, 3, 1]];
        let v = eta_direction(&a10, 4, &[0, 1]).unwrap();
        assert!(v[0] != 0 && v[1] != 0);
        for row in &a10 {
            assert_eq!(row.iter().zip(&v).map(|(x, y)| x * y).sum::<i64>(), 0);
        }
        assert_eq!(eta_direction(&a11, 3, &[]), Some(vec![0, 0, 0]));
        assert_eq!(eta_direction(&a11, 3, &[1]), None);
    }

    #[test]
    fn g2_singletons() {
        let g = Setup::new("G2");
        let c = g.ctx();
        let zero = bits(&[0, 0]);
        assert!(validate_witness(&c, &zero, &g.roots(&["01"]), None).valid());
        assert!(validate_witness(&c, &zero, &g.roots(&["31"]), None).valid());
        let bad = validate_witness(&c, &zero, &g.roots(&["10"]), None);
        assert_eq!(bad.failed(), vec![Check::Augmentation]);
    }

    #[test]
    fn e6_case10_passes_with_note() {
        let s = Setup::new("E6");
        let d = s.roots(&E6_CASE10);
        let dp = s.roots(&["001100", "000111"]);
        let rep = validate_witness(&s.ctx(), &bits(&[1, 0, 0, 1]), &d, Some(&dp));
        assert!(rep.valid(), "{:?}", rep.failed());
        assert!(rep.pass_with_note());
        assert_eq!(rep.check(Check::FixtureDprimeSubset), Some(true));
        assert_eq!(rep.dprime_max.as_ref().unwrap().len(), 3);
    }

    #[test]
    fn degree_restriction_changes_augmentation() {
        let s = Setup::new("E6");
        let d = s.roots(&["011111", "111110", "112321"]);
        let pattern = bits(&[0, 0, 1, 0]);
        let exact = validate_witness(&s.ctx(), &pattern, &d, None);
        assert_eq!(exact.failed(), vec![Check::Augmentation]);
        let graded = validate_witness(&s.ctx().with_counting(Counting::Graded), &pattern, &d, None);
        assert!(graded.valid());
        let mut d1 = d.clone();
        d1.push(s.ctx().highest());
        assert!(counting_divergence(&s.ctx(), &d1).iter().any(|&(i, e, g)| i == 3 && e > 0 && g == 0));
    }

    #[test]
    fn admissible_pattern_counts() {
        assert_eq!(Setup::new("E6").ctx().admissible_patterns().len(), 14);
        assert_eq!(Setup::new("G2").ctx().admissible_patterns().len(), 2);
        assert_eq!(Setup::new("F4").ctx().admissible_patterns().len(), 14);
    }

    #[test]
    fn fast_signature_matches_rational_path() {
        let s = Setup::new("E6");
        let c = s.ctx().with_counting(Counting::Graded);
        let masks = nonpositive_masks(&s.sys);
        let mut seen = 0;
        for first in 0..s.sys.num_positive() {
            nonpositive_sets_from(&s.sys, &masks, first, 3, &mut |d| {
                assert_eq!(independent_signature(&c, d), independent_signature_slow(&c, d), "{d:?}");
                seen += 1;
            });
        }
        assert!(seen > 1000);
    }

    #[test]
    fn g2_sweep_covers_both_patterns() {
        let g = Setup::new("G2");
        let c = g.ctx();
        let mut index = crate::orthenum::build_index(&g.sys, 2, 1);
        fill_signatures(&c, &mut index);
        let entries = sweep(&c, &index, true);
        assert_eq!(entries.len(), 2);
        assert!(entries.iter().all(|e| e.witness.as_ref().is_some_and(|w| w.valid())));
    }
}
