//! Independent oracles for the group layer: breadth-first word length,
//! exhaustive closure, Coxeter relations and reduced-word enumeration.

use std::collections::{BTreeSet, HashMap, VecDeque};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wstrata::weyl::{enumerate_group, final_elements};
use wstrata::{ExtElement, GroupContext, IndexSet, Side, SignedPermutation};

/// Word length of every element of `τ^k W_a` with length ≤ `radius`, by BFS
/// in the Cayley graph (no use of the length function).
fn bfs_word_lengths(ctx: &GroupContext, start: ExtElement, radius: u32) -> HashMap<ExtElement, u32> {
    let mut dist = HashMap::from([(start, 0u32)]);
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        if d == radius {
            continue;
        }
        for s in ctx.generators() {
            let y = x * *s;
            dist.entry(y).or_insert_with(|| {
                queue.push_back(y);
                d + 1
            });
        }
    }
    dist
}

#[test]
fn iwahori_matsumoto_matches_word_length() {
    for g in 1..=3 {
        let ctx = GroupContext::new(g).unwrap();
        for start in [ctx.identity(), *ctx.tau(), ctx.tau().pow(-1), ctx.tau().pow(2)] {
            let dist = bfs_word_lengths(&ctx, start, 5);
            for (x, d) in &dist {
                if *d <= 4 {
                    assert_eq!(x.length(), *d, "g={g} x={x:?}");
                }
            }
        }
    }
}

#[test]
fn word_length_oracle_for_t_mu() {
    // t^μ lies in the τ-coset; BFS from τ reaches it at distance g(g+1)/2.
    for g in 1..=3 {
        let ctx = GroupContext::new(g).unwrap();
        let dist = bfs_word_lengths(&ctx, *ctx.tau(), (g * (g + 1) / 2) as u32);
        assert_eq!(dist[&ctx.t_mu()] as usize, g * (g + 1) / 2);
    }
}

#[test]
fn finite_length_matches_bfs() {
    for g in 1..=3 {
        let ctx = GroupContext::new(g).unwrap();
        let finite_start = ctx.identity();
        let dist = bfs_word_lengths(&ctx, finite_start, 20);
        for u in enumerate_group(g).unwrap() {
            let x = ExtElement::finite(u);
            assert_eq!(u.length(), x.length());
            // BFS over the affine group with radius 20 covers W_g (max length g²).
            assert_eq!(dist[&x], u.length());
        }
    }
}

#[test]
fn descent_tests_agree_with_length() {
    for g in 1..=4 {
        let ctx = GroupContext::new(g).unwrap();
        let dist = bfs_word_lengths(&ctx, *ctx.tau(), 6);
        for x in dist.keys() {
            let l = x.length();
            for i in 0..=g {
                let left = x.mul_simple_left(i);
                let right = x.mul_simple_right(i);
                assert_eq!(left, *ctx.generator(i).unwrap() * *x);
                assert_eq!(right, *x * *ctx.generator(i).unwrap());
                assert_eq!(x.is_left_descent(i), left.length() < l);
                assert_eq!(x.is_right_descent(i), right.length() < l);
                assert_eq!(left.length().abs_diff(l), 1);
                assert_eq!(right.length().abs_diff(l), 1);
            }
        }
    }
}

#[test]
fn group_orders() {
    let mut fact = 1usize;
    for g in 1..=5 {
        fact *= g;
        assert_eq!(enumerate_group(g).unwrap().len(), (1 << g) * fact);
    }
}

fn order(x: ExtElement, max: usize) -> Option<usize> {
    let mut p = x;
    for k in 1..=max {
        if p.is_identity() {
            return Some(k);
        }
        p = p * x;
    }
    None
}

/// Coxeter matrix of the affine diagram 0 =4= 1 - 2 - ... - (g-1) =4= g.
fn affine_coxeter_entry(g: usize, i: usize, j: usize) -> Option<usize> {
    let (i, j) = (i.min(j), i.max(j));
    if i == j {
        return Some(1);
    }
    if g == 1 {
        return None;
    }
    if j != i + 1 {
        return Some(2);
    }
    if i == 0 || j == g {
        Some(4)
    } else {
        Some(3)
    }
}

#[test]
fn coxeter_relations() {
    for g in 1..=5 {
        let ctx = GroupContext::new(g).unwrap();
        for i in 0..=g {
            for j in 0..=g {
                let p = *ctx.generator(i).unwrap() * *ctx.generator(j).unwrap();
                assert_eq!(order(p, 12), affine_coxeter_entry(g, i, j), "g={g} i={i} j={j}");
            }
        }
    }
}

#[test]
fn final_elements_are_coset_minima() {
    for g in 1..=4 {
        let all = enumerate_group(g).unwrap();
        let s_g = IndexSet::finite(g).without(g);
        let mut minima: BTreeSet<SignedPermutation> = BTreeSet::new();
        // brute force: group elements by coset u S_g, take the shortest
        let mut cosets: HashMap<SignedPermutation, SignedPermutation> = HashMap::new();
        for u in &all {
            let key = wstrata::weyl::coset_min_rep(u, s_g, Side::Right);
            let e = cosets.entry(key).or_insert(*u);
            if u.length() < e.length() {
                *e = *u;
            }
        }
        for (_, u) in cosets {
            minima.insert(u);
        }
        let finals: BTreeSet<_> = final_elements(g).into_iter().collect();
        assert_eq!(finals, minima);
        let scan: BTreeSet<_> = all
            .iter()
            .filter(|u| (1..g).all(|i| u.mul_simple_right(i).length() > u.length()))
            .copied()
            .collect();
        assert_eq!(finals, scan);
    }
    for g in 1..=8 {
        assert_eq!(final_elements(g).len(), 1 << g);
    }
}

#[test]
fn embedding_maps_finals_to_finals() {
    for g in 1..=5 {
        let ctx = GroupContext::new(g).unwrap();
        for c in 1..=g {
            for w in final_elements(c) {
                let e = ctx.embed_subgroup(c, &w.reduced_word()).unwrap();
                assert_eq!(e, w.embed_into(g).unwrap());
                assert!(e.is_final(), "g={g} c={c} w={w}");
            }
            // homomorphism on products
            let all_c = enumerate_group(c).unwrap();
            for a in all_c.iter().step_by(5) {
                for b in all_c.iter().step_by(7) {
                    let lhs = (*a * *b).embed_into(g).unwrap();
                    let rhs = a.embed_into(g).unwrap() * b.embed_into(g).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}

/// All reduced words of `x`, by recursion on left descents.
fn all_reduced_words(x: &ExtElement, g: usize) -> Vec<Vec<usize>> {
    if x.length() == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for i in 0..=g {
        if x.is_left_descent(i) {
            for mut w in all_reduced_words(&x.mul_simple_left(i), g) {
                w.insert(0, i);
                out.push(w);
            }
        }
    }
    out
}

#[test]
fn reduced_word_support_and_sigma_well_defined() {
    for g in 1..=3 {
        let ctx = GroupContext::new(g).unwrap();
        let dist = bfs_word_lengths(&ctx, ctx.identity(), 5);
        for x in dist.keys() {
            let words = all_reduced_words(x, g);
            let supports: BTreeSet<BTreeSet<usize>> =
                words.iter().map(|w| w.iter().copied().collect()).collect();
            assert_eq!(supports.len(), 1);
            let sigmas: BTreeSet<ExtElement> = words
                .iter()
                .map(|w| {
                    let relabel: Vec<usize> = w.iter().map(|&i| g - i).collect();
                    ExtElement::from_letters(g, &relabel).unwrap()
                })
                .collect();
            assert_eq!(sigmas.len(), 1);
            assert_eq!(*sigmas.iter().next().unwrap(), ctx.diagram_sigma(x));
            assert_eq!(ctx.diagram_sigma(x), ctx.conj_by_tau(x));
        }
    }
}

#[test]
fn tau_found_by_exhaustive_search() {
    for g in 1..=5 {
        let ctx = GroupContext::new(g).unwrap();
        let hits: Vec<_> = enumerate_group(g)
            .unwrap()
            .into_iter()
            .filter(|u| (ctx.t_mu() * ExtElement::finite(*u)).length() == 0)
            .collect();
        assert_eq!(hits, vec![ctx.w_empty()]);
    }
    let ctx = GroupContext::new(1).unwrap();
    assert_eq!(ctx.w_empty(), SignedPermutation::simple(1, 1).unwrap());
}

#[test]
fn tau_conjugation() {
    for g in 1..=6 {
        let ctx = GroupContext::new(g).unwrap();
        for c in 0..=g {
            let conj = ctx.conj_by_tau(ctx.generator(c).unwrap());
            assert_eq!(conj, *ctx.generator(g - c).unwrap());
        }
        let moved = ctx.conj_by_tau(&ctx.t_mu());
        let expected = ExtElement::translation(
            wstrata::CoweightSim::mu(g).act_by(&ctx.w_empty()),
        );
        assert_eq!(moved, expected);
    }
}

fn random_element(rng: &mut ChaCha8Rng, ctx: &GroupContext) -> ExtElement {
    let g = ctx.rank();
    let mut x = ctx.tau().pow(rng.gen_range(-2..=2));
    for _ in 0..rng.gen_range(0..15) {
        x = x * *ctx.generator(rng.gen_range(0..=g)).unwrap();
    }
    x
}

#[test]
fn random_group_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for g in 1..=4 {
        let ctx = GroupContext::new(g).unwrap();
        for _ in 0..500 {
            let x = random_element(&mut rng, &ctx);
            assert!((x * x.inverse()).is_identity());
            let w = ctx.reduced_word(&x);
            assert_eq!(w.len() as u32, x.length());
            assert_eq!(ctx.from_reduced_word(&w).unwrap(), x);
        }
        for _ in 0..100 {
            let u = ExtElement::finite(*enumerate_group(g).unwrap().first().unwrap());
            let x = random_element(&mut rng, &ctx);
            assert_eq!(x * u, x);
        }
    }
}

proptest! {
    #[test]
    fn signed_permutation_identity_and_inverse(g in 1usize..=6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut u = SignedPermutation::identity(g);
        for _ in 0..20 {
            u = u.mul_simple_right(rng.gen_range(1..=g));
        }
        prop_assert_eq!(u * SignedPermutation::identity(g), u);
        prop_assert!((u * u.inverse()).is_identity());
        prop_assert_eq!(SignedPermutation::from_word(g, &u.reduced_word()).unwrap(), u);
    }

    #[test]
    fn length_changes_by_one(g in 1usize..=5, seed in any::<u64>(), i in 0usize..=5) {
        let ctx = GroupContext::new(g).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_element(&mut rng, &ctx);
        let i = i.min(g);
        prop_assert_eq!(x.mul_simple_right(i).length().abs_diff(x.length()), 1);
        prop_assert_eq!(ctx.conj_by_tau(&x).length(), x.length());
    }
}
