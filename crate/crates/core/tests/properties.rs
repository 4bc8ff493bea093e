mod common;

use common::*;
use kcascade::cascade::heisenberg_partition;
use kcascade::linalg::{int_rank, q, q_matrix, rank, Q};
use kcascade::reconstruct::{evaluate_xi, is_admissible, roundtrip_check, xi_from_c};
use kcascade::witness::{
    dprime_max, graded_count, is_independent, orthogonal_signature, pairwise_nonsingular, representation,
    representation_count, SIG_EXACT, SIG_GRADED,
};
use kcascade::RootSystem;
use num_traits::Zero;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, cols), rows)
}

fn rational() -> impl Strategy<Value = Q> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| rat(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn integer_rank_matches_rational_rank(m in (1usize..6, 1usize..7).prop_flat_map(|(r, c)| matrix(r, c))) {
        let cols = m[0].len();
        prop_assert_eq!(int_rank(&m, cols), rank(&q_matrix(&m), cols));
    }

    #[test]
    fn more_equations_fix_more_axes(m in (2usize..6, 2usize..6).prop_flat_map(|(r, c)| matrix(r, c)), cut in 0usize..6) {
        let cols = m[0].len();
        let cut = cut % m.len();
        let small = dprime_max(&m[..cut], cols);
        let big = dprime_max(&m, cols);
        prop_assert!(big.iter().all(|g| small.contains(g)));
    }

    #[test]
    fn e6_reconstruction_inverts_evaluation(t in prop::collection::vec(rational(), 4)) {
        let s = Setup::new("E6");
        prop_assume!(t.iter().all(|x| !x.is_zero()));
        let c: Vec<Q> = (0..4).map(|i| evaluate_xi(&t, &s.weights.r, i).unwrap()).collect();
        prop_assert_eq!(xi_from_c(&c, &s.weights.r, &s.cascade.is_simple).unwrap(), t);
    }

    #[test]
    fn f4_roundtrip_with_simple_zeros(c in prop::collection::vec(rational(), 4)) {
        let s = Setup::new("F4");
        prop_assume!(is_admissible(&c, &s.cascade.is_simple));
        prop_assert!(roundtrip_check(&c, &s.weights.r, &s.cascade.is_simple).unwrap());
    }
}

/// Distinct admissible tuples give distinct parameters.
#[test]
fn reconstruction_is_injective() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for label in ["E6", "E7", "E8", "F4", "G2"] {
        let s = Setup::new(label);
        let m = s.cascade.len();
        let mut seen = std::collections::BTreeMap::new();
        for _ in 0..300 {
            let c: Vec<Q> = (0..m)
                .map(|i| {
                    let zero = s.cascade.is_simple[i] && rng.gen_bool(0.3);
                    if zero {
                        q(0)
                    } else {
                        rat(rng.gen_range(1..4) * if rng.gen_bool(0.5) { 1 } else { -1 }, rng.gen_range(1..3))
                    }
                })
                .collect();
            let xi = xi_from_c(&c, &s.weights.r, &s.cascade.is_simple).unwrap();
            if let Some(prev) = seen.insert(xi.clone(), c.clone()) {
                assert_eq!(prev, c, "{label}");
            }
        }
    }
}

#[test]
fn singularity_criterion_simply_laced() {
    let mut labels: Vec<String> = (2..=8).map(|r| format!("A{r}")).collect();
    labels.extend((4..=8).map(|r| format!("D{r}")));
    labels.extend(["E6", "E7", "E8"].map(String::from));
    for label in labels {
        let sys = RootSystem::build(ty(&label)).unwrap();
        for b in 0..sys.num_positive() {
            let sing = sys.singular_set(b);
            for a in 0..sys.num_positive() {
                if sys.less(a, b) {
                    assert_eq!(sing.contains(&a), sys.inner(a, b) > 0, "{label} {} {}", sys.digits(a), sys.digits(b));
                }
            }
        }
    }
}

#[test]
fn singular_sets_by_definition() {
    for t in all_types() {
        let sys = RootSystem::build(t).unwrap();
        for b in 0..sys.num_positive() {
            let by_def: Vec<usize> = (0..sys.num_positive())
                .filter(|&a| sys.index_of(&sum(&coeffs(&sys, b), &coeffs(&sys, a), -1)).is_some())
                .collect();
            assert_eq!(sys.singular_set(b), by_def, "{t}");
        }
    }
}

#[test]
fn orthogonal_sets_are_nonsingular_when_simply_laced() {
    for label in ["E6", "D5", "A5"] {
        let sys = RootSystem::build(ty(label)).unwrap();
        for s in naive_orthogonal_subsets(&sys, 3) {
            assert!(pairwise_nonsingular(&sys, &s), "{label} {s:?}");
        }
    }
}

#[test]
fn heisenberg_pairing_is_total() {
    for t in all_types() {
        let sys = RootSystem::build(t).unwrap();
        let h = sys.highest_root();
        let p = heisenberg_partition(&sys).unwrap();
        assert_eq!(p.center, h);
        let mut hit = vec![0usize; sys.num_positive()];
        for &(a, b) in &p.pairs {
            assert_eq!(sum(&coeffs(&sys, a), &coeffs(&sys, b), 1), coeffs(&sys, h), "{t}");
            hit[a] += 1;
            hit[b] += 1;
        }
        for a in 0..sys.num_positive() {
            let expected = (a != h && sys.inner(a, h) != 0) as usize;
            assert_eq!(hit[a], expected, "{t} {}", sys.digits(a));
        }
        let perp = (0..sys.num_positive()).filter(|&a| sys.inner(a, h) == 0).count();
        assert_eq!(2 * p.s + 1 + perp, sys.num_positive(), "{t}");
    }
}

#[test]
fn orthogonal_signature_bits_match_counts() {
    for label in ["E6", "F4", "G2"] {
        let s = Setup::new(label);
        let ctx = s.ctx();
        let mut out = vec![0u8; ctx.m()];
        for d in naive_orthogonal_subsets(&s.sys, s.sys.rank()) {
            orthogonal_signature(&ctx, &d, &mut out);
            for (i, &bits) in out.iter().enumerate() {
                let exact = representation_count(&s.sys, ctx.mu(i), &d, None);
                let graded = graded_count(&s.sys, ctx.mu(i), &d, ctx.degree(i), None);
                assert_eq!(bits & SIG_EXACT != 0, exact > 0, "{label} {d:?}");
                assert_eq!(bits & SIG_GRADED != 0, graded > 0, "{label} {d:?}");
            }
        }
    }
}

#[test]
fn representation_matches_count_e8_sample() {
    let s = Setup::new("E8");
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = s.sys.num_positive();
    let mut done = 0;
    while done < 2000 {
        let k = rng.gen_range(1..=8);
        let mut d: Vec<usize> = (0..k).map(|_| rng.gen_range(0..n)).collect();
        d.sort_unstable();
        d.dedup();
        if !is_independent(&s.sys, &d) {
            continue;
        }
        let i = rng.gen_range(0..s.cascade.len());
        let mu = &s.weights.mu_simple[i];
        let rep = representation(&s.sys, mu, &d).unwrap();
        assert_eq!(representation_count(&s.sys, mu, &d, None), rep.is_some() as u64);
        done += 1;
    }
}
