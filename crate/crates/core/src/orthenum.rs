//! Orthogonal subsets of the positive roots, enumerated as cliques of the
//! orthogonality graph.

use std::ops::Range;

use rayon::prelude::*;

use crate::bits::BitSet;
use crate::rootsys::{RootSystem, RootSystemType};

pub const CACHE_VERSION: &str = "kcascade-orth-1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthSubsetIndex {
    pub system: RootSystemType,
    pub datum_hash: [u8; 32],
    /// Grouped by size, lexicographic within a size.
    pub subsets: Vec<Vec<u16>>,
    /// `by_size[k]` holds the subsets of cardinality `k + 1`.
    pub by_size: Vec<Range<usize>>,
    /// Row-major, `signature_width` entries per subset.
    pub signatures: Option<Vec<u8>>,
    pub signature_width: usize,
    pub cache_version: String,
}

impl OrthSubsetIndex {
    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn counts_by_size(&self) -> Vec<usize> {
        self.by_size.iter().map(|r| r.len()).collect()
    }

    pub fn max_size(&self) -> usize {
        self.by_size.len()
    }

    pub fn of_size(&self, k: usize) -> &[Vec<u16>] {
        match k.checked_sub(1).and_then(|i| self.by_size.get(i)) {
            Some(r) => &self.subsets[r.clone()],
            None => &[],
        }
    }

    pub fn signature(&self, i: usize) -> Option<&[u8]> {
        let w = self.signature_width;
        self.signatures.as_ref().map(|s| &s[i * w..(i + 1) * w])
    }

    pub fn set_signatures(&mut self, width: usize, sigs: Vec<u8>) {
        assert_eq!(sigs.len(), width * self.subsets.len());
        self.signature_width = width;
        self.signatures = Some(sigs);
    }
}

fn dfs<F: FnMut(&[usize])>(
    sys: &RootSystem,
    cand: &BitSet,
    stack: &mut Vec<usize>,
    scratch: &mut Vec<BitSet>,
    max_size: usize,
    visit: &mut F,
) -> u64 {
    let mut n = 0;
    let depth = stack.len();
    for i in cand.iter() {
        stack.push(i);
        visit(stack);
        n += 1;
        if stack.len() < max_size {
            let mut next = std::mem::take(&mut scratch[depth]);
            next.assign_and_above(cand, sys.orth_mask(i), i);
            if !next.is_empty() {
                n += dfs(sys, &next, stack, scratch, max_size, visit);
            }
            scratch[depth] = next;
        }
        stack.pop();
    }
    n
}

/// Visits every nonempty orthogonal subset of size at most `max_size` once,
/// in depth-first, index-increasing order. Returns the number visited.
pub fn enumerate_orthogonal_subsets<F: FnMut(&[usize])>(sys: &RootSystem, max_size: usize, mut visit: F) -> u64 {
    let n = sys.num_positive();
    let mut total = 0;
    for first in 0..n {
        total += enumerate_from(sys, first, max_size, &mut visit);
    }
    total
}

/// The part of the enumeration whose smallest element is `first`.
pub fn enumerate_from<F: FnMut(&[usize])>(sys: &RootSystem, first: usize, max_size: usize, visit: &mut F) -> u64 {
    if max_size == 0 {
        return 0;
    }
    let n = sys.num_positive();
    let mut stack = vec![first];
    visit(&stack);
    if max_size == 1 {
        return 1;
    }
    let mut cand = BitSet::new(n);
    cand.assign_and_above(&BitSet::full(n), sys.orth_mask(first), first);
    let mut scratch = vec![BitSet::new(n); max_size];
    1 + dfs(sys, &cand, &mut stack, &mut scratch, max_size, visit)
}

fn collect_from(sys: &RootSystem, first: usize, max_size: usize) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    enumerate_from(sys, first, max_size, &mut |s: &[usize]| {
        out.push(s.iter().map(|&i| i as u16).collect())
    });
    out
}

/// Partitions by first element, runs the parts on `threads` workers (0 = rayon
/// default) and merges in first-element order, so the result equals the
/// sequential one.
pub fn build_index(sys: &RootSystem, max_size: usize, threads: usize) -> OrthSubsetIndex {
    let n = sys.num_positive();
    let parts: Vec<Vec<Vec<u16>>> = if threads == 1 {
        (0..n).map(|f| collect_from(sys, f, max_size)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("thread pool");
        pool.install(|| {
            (0..n)
                .into_par_iter()
                .map(|f| collect_from(sys, f, max_size))
                .collect()
        })
    };
    let sequential: Vec<Vec<u16>> = parts.into_iter().flatten().collect();
    from_dfs_order(sys, sequential)
}

fn from_dfs_order(sys: &RootSystem, dfs_order: Vec<Vec<u16>>) -> OrthSubsetIndex {
    let top = dfs_order.iter().map(|s| s.len()).max().unwrap_or(0);
    let mut buckets = vec![Vec::new(); top];
    for s in dfs_order {
        buckets[s.len() - 1].push(s);
    }
    let mut subsets = Vec::new();
    let mut by_size = Vec::with_capacity(top);
    for b in buckets {
        let start = subsets.len();
        subsets.extend(b);
        by_size.push(start..subsets.len());
    }
    OrthSubsetIndex {
        system: sys.ty(),
        datum_hash: sys.datum_hash(),
        subsets,
        by_size,
        signatures: None,
        signature_width: 0,
        cache_version: CACHE_VERSION.to_string(),
    }
}

/// Size of the largest orthogonal subset, by exhaustion.
pub fn max_orthogonal_size(sys: &RootSystem) -> usize {
    fn go(sys: &RootSystem, cand: &BitSet, depth: usize, best: &mut usize) {
        if depth + cand.count() <= *best {
            return;
        }
        let n = sys.num_positive();
        let mut next = BitSet::new(n);
        for i in cand.iter() {
            next.assign_and_above(cand, sys.orth_mask(i), i);
            *best = (*best).max(depth + 1);
            go(sys, &next, depth + 1, best);
        }
    }
    let n = sys.num_positive();
    let mut best = 0;
    go(sys, &BitSet::full(n), 0, &mut best);
    best
}

/// Checks the structural invariants of an index.
pub fn check_index(sys: &RootSystem, idx: &OrthSubsetIndex) -> Result<(), String> {
    let mut seen = std::collections::HashSet::new();
    let mut prev: Option<&Vec<u16>> = None;
    for (k, r) in idx.by_size.iter().enumerate() {
        for s in &idx.subsets[r.clone()] {
            if s.len() != k + 1 {
                return Err(format!("subset {s:?} filed under size {}", k + 1));
            }
            if s.windows(2).any(|w| w[0] >= w[1]) {
                return Err(format!("subset {s:?} is not strictly increasing"));
            }
            for (a, &x) in s.iter().enumerate() {
                if x as usize >= sys.num_positive() {
                    return Err(format!("index {x} out of range"));
                }
                for &y in &s[a + 1..] {
                    if sys.inner(x as usize, y as usize) != 0 {
                        return Err(format!("subset {s:?} is not orthogonal"));
                    }
                }
            }
            if let Some(p) = prev {
                if p.len() == s.len() && p >= s {
                    return Err(format!("subset {s:?} out of order"));
                }
            }
            if !seen.insert(s.clone()) {
                return Err(format!("subset {s:?} repeated"));
            }
            prev = Some(s);
        }
    }
    if idx.by_size.last().map_or(0, |r| r.end) != idx.subsets.len() {
        return Err("size ranges do not cover the subsets".into());
    }
    Ok(())
}
