//! Root subsystems cut out of a parent system, with their induced simple
//! roots and Dynkin classification.

use crate::dynkin;
use crate::rootsys::{Family, RootSysError, RootSystem, RootSystemType};

/// One irreducible component. `simples` is ordered so that its Cartan matrix
/// equals the catalog matrix of `ty` entry by entry.
#[derive(Clone, Debug)]
pub struct Component {
    pub ty: RootSystemType,
    pub roots: Vec<usize>,
    pub simples: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct SubsystemView<'a> {
    pub parent: &'a RootSystem,
    pub roots: Vec<usize>,
    pub induced_simples: Vec<usize>,
    pub components: Vec<Component>,
}

impl<'a> SubsystemView<'a> {
    /// Builds the view of a set of parent positive roots that is the positive
    /// part of a closed subsystem.
    pub fn new(parent: &'a RootSystem, mut roots: Vec<usize>) -> Result<Self, RootSysError> {
        roots.sort_unstable();
        roots.dedup();
        let induced_simples = indecomposables(parent, &roots);
        let mut components = Vec::new();
        for comp in parent.components(&roots) {
            let simples: Vec<usize> = induced_simples
                .iter()
                .copied()
                .filter(|s| comp.binary_search(s).is_ok())
                .collect();
            let (ty, ordered) = classify(parent, &simples, comp.len()).ok_or_else(|| {
                RootSysError::Invariant(format!(
                    "component with {} simple roots and {} positive roots matches no catalog type",
                    simples.len(),
                    comp.len()
                ))
            })?;
            components.push(Component {
                ty,
                roots: comp,
                simples: ordered,
            });
        }
        Ok(SubsystemView {
            parent,
            roots,
            induced_simples,
            components,
        })
    }

    pub fn identified_types(&self) -> Vec<RootSystemType> {
        self.components.iter().map(|c| c.ty).collect()
    }

    /// Maps a vector in the component's own simple-root coordinates to parent
    /// simple-root coordinates.
    pub fn to_parent(&self, comp: usize, coeffs: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.parent.rank()];
        for (c, &s) in coeffs.iter().zip(&self.components[comp].simples) {
            for (o, x) in out.iter_mut().zip(&self.parent.root(s).coeffs) {
                *o += c * x;
            }
        }
        out
    }
}

/// Positive roots orthogonal to `beta`.
pub fn perp_subsystem(sys: &RootSystem, beta: usize) -> Result<SubsystemView<'_>, RootSysError> {
    let roots = (0..sys.num_positive())
        .filter(|&a| sys.inner(a, beta) == 0)
        .collect();
    SubsystemView::new(sys, roots)
}

/// Elements of `roots` that are not the sum of two elements of `roots`.
pub fn indecomposables(sys: &RootSystem, roots: &[usize]) -> Vec<usize> {
    roots
        .iter()
        .copied()
        .filter(|&a| {
            !roots.iter().any(|&g| {
                let d: Vec<i64> = sys
                    .root(a)
                    .coeffs
                    .iter()
                    .zip(&sys.root(g).coeffs)
                    .map(|(x, y)| x - y)
                    .collect();
                sys.index_of(&d).is_some_and(|i| roots.binary_search(&i).is_ok())
            })
        })
        .collect()
}

fn catalog_candidates(rank: usize) -> Vec<RootSystemType> {
    let mut out = Vec::new();
    let mut push = |f, r| {
        if let Ok(t) = RootSystemType::new(f, r) {
            out.push(t)
        }
    };
    push(Family::A, rank);
    if rank >= 2 {
        push(Family::B, rank);
    }
    if rank >= 3 {
        push(Family::C, rank);
    }
    if rank >= 4 {
        push(Family::D, rank);
    }
    push(Family::E, rank);
    push(Family::F, rank);
    push(Family::G, rank);
    out
}

/// Finds a catalog type and an ordering of `simples` whose Cartan matrix
/// matches the catalog matrix exactly.
pub fn classify(
    sys: &RootSystem,
    simples: &[usize],
    positive_count: usize,
) -> Option<(RootSystemType, Vec<usize>)> {
    let k = simples.len();
    let cartan: Vec<Vec<i64>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| 2 * sys.inner(simples[i], simples[j]) / sys.inner(simples[j], simples[j]))
                .collect()
        })
        .collect();
    for ty in catalog_candidates(k) {
        if dynkin::positive_count(ty) != positive_count {
            continue;
        }
        let target = dynkin::cartan_matrix(ty);
        let mut assign = Vec::with_capacity(k);
        let mut used = vec![false; k];
        if match_nodes(&target, &cartan, &mut assign, &mut used) {
            return Some((ty, assign.iter().map(|&i| simples[i]).collect()));
        }
    }
    None
}

fn match_nodes(target: &[Vec<i64>], cartan: &[Vec<i64>], assign: &mut Vec<usize>, used: &mut [bool]) -> bool {
    let i = assign.len();
    if i == target.len() {
        return true;
    }
    for c in 0..cartan.len() {
        if used[c] {
            continue;
        }
        let ok = (0..i).all(|j| {
            target[i][j] == cartan[c][assign[j]] && target[j][i] == cartan[assign[j]][c]
        }) && target[i][i] == cartan[c][c];
        if ok {
            used[c] = true;
            assign.push(c);
            if match_nodes(target, cartan, assign, used) {
                return true;
            }
            assign.pop();
            used[c] = false;
        }
    }
    false
}
