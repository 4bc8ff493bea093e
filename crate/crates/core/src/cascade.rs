//! Kostant cascade: repeatedly take the highest root of every irreducible
//! component of the roots orthogonal to everything chosen so far.
//!
//! Order: layer by layer; inside a layer by height descending, ties broken
//! by lexicographically descending coefficient vectors.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::ops::Range;

use thiserror::Error;

use crate::rootsys::{RootSysError, RootSystem};
use crate::subsystem::perp_subsystem;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cascade {
    /// Positive-root indices in cascade order.
    pub roots: Vec<usize>,
    pub layers: Vec<Range<usize>>,
    pub is_simple: Vec<bool>,
}

#[derive(Debug, Error)]
pub enum CascadeError {
    #[error("component of size {size} has {count} roots of maximal height")]
    NonUniqueMaximum { size: usize, count: usize },
    #[error("maximal root {0} is not dominant on its component")]
    NotDominant(String),
    #[error("heisenberg pairing failed at root {0}")]
    Pairing(String),
    #[error(transparent)]
    RootSys(#[from] RootSysError),
}

impl Cascade {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn position(&self, root: usize) -> Option<usize> {
        self.roots.iter().position(|&r| r == root)
    }
}

/// The order used inside a cascade layer and for choosing `beta0`.
pub fn descending_order(sys: &RootSystem, a: usize, b: usize) -> Ordering {
    let (ra, rb) = (sys.root(a), sys.root(b));
    rb.height
        .cmp(&ra.height)
        .then_with(|| rb.coeffs.cmp(&ra.coeffs))
}

pub fn kostant_cascade(sys: &RootSystem) -> Result<Cascade, CascadeError> {
    let layers = cascade_layers(sys, (0..sys.num_positive()).collect())?;
    let mut roots = Vec::new();
    let mut ranges = Vec::new();
    for layer in layers {
        let start = roots.len();
        roots.extend(layer);
        ranges.push(start..roots.len());
    }
    let is_simple = roots.iter().map(|&r| sys.root(r).height == 1).collect();
    Ok(Cascade {
        roots,
        layers: ranges,
        is_simple,
    })
}

fn cascade_layers(sys: &RootSystem, mut current: Vec<usize>) -> Result<Vec<Vec<usize>>, CascadeError> {
    let mut layers = Vec::new();
    while !current.is_empty() {
        let mut layer = Vec::new();
        for comp in sys.components(&current) {
            let top = comp.iter().map(|&r| sys.root(r).height).max().unwrap_or(0);
            let tops: Vec<usize> = comp.iter().copied().filter(|&r| sys.root(r).height == top).collect();
            if tops.len() != 1 {
                return Err(CascadeError::NonUniqueMaximum {
                    size: comp.len(),
                    count: tops.len(),
                });
            }
            let beta = tops[0];
            if comp.iter().any(|&g| sys.inner(beta, g) < 0) {
                return Err(CascadeError::NotDominant(sys.digits(beta)));
            }
            layer.push(beta);
        }
        layer.sort_by(|&a, &b| descending_order(sys, a, b));
        current.retain(|&a| layer.iter().all(|&b| sys.inner(a, b) == 0));
        layers.push(layer);
    }
    Ok(layers)
}

/// Cascade roots of height one.
pub fn simple_cascade_roots(sys: &RootSystem, c: &Cascade) -> Vec<usize> {
    c.roots.iter().copied().filter(|&r| sys.root(r).height == 1).collect()
}

fn add(sys: &RootSystem, a: usize, b: usize, sign: i64) -> Vec<i64> {
    sys.root(a)
        .coeffs
        .iter()
        .zip(&sys.root(b).coeffs)
        .map(|(x, y)| x + sign * y)
        .collect()
}

/// Neither `a + b` nor `a - b` is a root.
pub fn strongly_orthogonal(sys: &RootSystem, a: usize, b: usize) -> bool {
    let is_root = |v: Vec<i64>| {
        let neg: Vec<i64> = v.iter().map(|x| -x).collect();
        sys.index_of(&v).is_some() || sys.index_of(&neg).is_some()
    };
    !is_root(add(sys, a, b, 1)) && !is_root(add(sys, a, b, -1))
}

pub fn check_strong_orthogonality(sys: &RootSystem, c: &Cascade) -> bool {
    c.roots.iter().enumerate().all(|(i, &a)| {
        c.roots[i + 1..]
            .iter()
            .all(|&b| sys.inner(a, b) == 0 && strongly_orthogonal(sys, a, b))
    })
}

/// No positive root outside the cascade is strongly orthogonal to all of it.
pub fn check_maximality(sys: &RootSystem, c: &Cascade) -> bool {
    (0..sys.num_positive())
        .filter(|r| !c.roots.contains(r))
        .all(|a| c.roots.iter().any(|&b| !strongly_orthogonal(sys, a, b)))
}

#[derive(Clone, Debug)]
pub struct HeisenbergPartition {
    pub center: usize,
    pub pairs: Vec<(usize, usize)>,
    pub s: usize,
}

/// Pairs `a` with `theta - a` over the positive roots not orthogonal to the
/// highest root `theta`.
pub fn heisenberg_partition(sys: &RootSystem) -> Result<HeisenbergPartition, CascadeError> {
    let theta = sys.highest_root();
    let outside: Vec<usize> = (0..sys.num_positive())
        .filter(|&a| a != theta && sys.inner(a, theta) != 0)
        .collect();
    let mut pairs = Vec::new();
    let mut used = BTreeSet::new();
    for &a in &outside {
        if sys.inner(a, theta) < 0 {
            return Err(CascadeError::Pairing(sys.digits(a)));
        }
        if used.contains(&a) {
            continue;
        }
        let partner = sys
            .index_of(&add(sys, theta, a, -1))
            .filter(|&b| b != a && sys.inner(b, theta) > 0 && !used.contains(&b))
            .ok_or_else(|| CascadeError::Pairing(sys.digits(a)))?;
        used.insert(a);
        used.insert(partner);
        pairs.push((a.min(partner), a.max(partner)));
    }
    let s = pairs.len();
    if 2 * s != outside.len() {
        return Err(CascadeError::Pairing("unpaired roots remain".into()));
    }
    Ok(HeisenbergPartition {
        center: theta,
        pairs,
        s,
    })
}

/// Compares the cascade minus its first root with the cascade of the
/// subsystem orthogonal to the highest root, computed inside that
/// subsystem's own catalog root system and mapped back.
pub fn cascade_restriction_check(sys: &RootSystem) -> Result<bool, CascadeError> {
    let c = kostant_cascade(sys)?;
    let view = perp_subsystem(sys, sys.highest_root())?;
    let mut mapped = BTreeSet::new();
    for (k, comp) in view.components.iter().enumerate() {
        let inner = RootSystem::build(comp.ty)?;
        let ic = kostant_cascade(&inner)?;
        for &r in &ic.roots {
            let v = view.to_parent(k, &inner.root(r).coeffs);
            match sys.index_of(&v) {
                Some(i) => {
                    mapped.insert(i);
                }
                None => return Ok(false),
            }
        }
    }
    let rest: BTreeSet<usize> = c.roots[1..].iter().copied().collect();
    Ok(mapped == rest)
}
