//! Exhaustive sweeps of the stratification layer.

use std::collections::BTreeSet;

use wstrata::admissible::in_wj_tau_coset;
use wstrata::strata::{
    canonical_filtration_type, canonical_type, classify_id, eo_kr_match, es_from_final, final_from_es,
    nonssp_witness, structural_lemmas, verify_existence_lemma, verify_ss_iff_ssp, ElementarySequence,
    SuperspecialLabels,
};
use wstrata::weyl::final_elements;
use wstrata::{AdmSet, ExtElement, GroupContext, IndexSet, ParahoricType};

fn set(xs: &[usize]) -> IndexSet {
    xs.iter().copied().collect()
}

#[test]
fn bijection_and_length_identity() {
    for g in 1..=6 {
        let ctx = GroupContext::new(g).unwrap();
        let mut images = BTreeSet::new();
        for psi in ElementarySequence::all(g) {
            let w = final_from_es(&ctx, &psi).unwrap();
            assert!(w.is_final());
            assert_eq!(w.length(), psi.sum(), "g={g} psi={psi:?}");
            assert_eq!(es_from_final(&ctx, &w).unwrap(), psi);
            images.insert(w);
        }
        let finals: BTreeSet<_> = final_elements(g).into_iter().collect();
        assert_eq!(images, finals);
    }
}

#[test]
fn final_support_is_a_suffix() {
    for g in 1..=6 {
        for w in final_elements(g) {
            let support = w.support();
            if w.is_identity() {
                continue;
            }
            let i = support.iter().min().unwrap();
            assert_eq!(support, (i..=g).collect::<IndexSet>(), "g={g} w={w}");
        }
    }
}

#[test]
fn canonical_type_contains_ends_and_is_symmetric() {
    for g in 1..=8 {
        for psi in ElementarySequence::all(g) {
            let t = canonical_filtration_type(&psi);
            assert!(t.j.nodes().contains(0) && t.j.nodes().contains(g));
            let mirrored: BTreeSet<usize> = t.full.iter().map(|d| 2 * g - d).collect();
            assert_eq!(mirrored, t.full.iter().copied().collect());
            let nu = psi.final_type();
            assert!(t.full.iter().all(|&d| t.full.contains(&nu.get(d))));
        }
    }
}

#[test]
fn canonical_type_formulas() {
    for g in 1..=6 {
        // a-number 1, p-rank f
        for f in 0..g {
            let psi: Vec<u32> = (0..=g).map(|i| if i <= f { i } else { i - 1 } as u32).collect();
            let psi = ElementarySequence::new(psi).unwrap();
            assert_eq!((psi.a_number(), psi.p_rank()), (1, f));
            let expected: Vec<usize> = [0].into_iter().chain(f..=2 * g - f).chain([2 * g]).collect::<BTreeSet<_>>().into_iter().collect();
            assert_eq!(canonical_filtration_type(&psi).full, expected, "g={g} f={f}");
        }
        // a-number a, p-rank g - a
        for a in 0..=g {
            let psi: Vec<u32> = (0..=g).map(|i| i.min(g - a) as u32).collect();
            let psi = ElementarySequence::new(psi).unwrap();
            assert_eq!((psi.a_number(), psi.p_rank()), (a, g - a));
            let expected: Vec<usize> = [0, g - a, g, g + a, 2 * g].into_iter().collect::<BTreeSet<_>>().into_iter().collect();
            assert_eq!(canonical_filtration_type(&psi).full, expected, "g={g} a={a}");
            let j: IndexSet = [0, g - a, g].into_iter().collect();
            assert_eq!(canonical_type(&psi).nodes(), j);
        }
    }
}

#[test]
fn lemmas_hold_exhaustively() {
    for g in 1..=3 {
        let ctx = GroupContext::new(g).unwrap();
        let adm = AdmSet::enumerate(&ctx).unwrap();
        let labels = SuperspecialLabels::compute(&adm);
        let e = verify_existence_lemma(&adm, &labels);
        assert!(e.passed, "g={g} {:?}", e.counterexamples);
        assert_eq!(e.subsets_checked, 1 << (g + 1));
        let t = verify_ss_iff_ssp(&adm, &labels);
        assert!(t.passed, "g={g} {:?}", t.counterexamples);
    }
}

#[test]
fn existence_sets_for_rank_three() {
    let ctx = GroupContext::new(3).unwrap();
    let adm = AdmSet::enumerate(&ctx).unwrap();
    let labels = SuperspecialLabels::compute(&adm);
    let j = ParahoricType::new(set(&[0, 3]));
    assert_eq!(wstrata::strata::c_superspecial_exists(&adm, &labels, j), set(&[0]));
    let j = ParahoricType::new(set(&[1, 2]));
    assert_eq!(wstrata::strata::c_superspecial_exists(&adm, &labels, j), set(&[1]));
}

#[test]
fn rank_two_supersingular_iwahori_blocks() {
    let ctx = GroupContext::new(2).unwrap();
    let adm = AdmSet::enumerate(&ctx).unwrap();
    let labels = SuperspecialLabels::compute(&adm);
    let report = verify_ss_iff_ssp(&adm, &labels);
    let iw = report.per_j.iter().find(|s| s.j == ParahoricType::iwahori(2)).unwrap();
    let tau = *ctx.tau();
    let g = |i: usize| *ctx.generator(i).unwrap();
    let expected: BTreeSet<usize> = [tau, g(1) * tau, g(0) * tau, g(2) * tau, g(0) * g(2) * tau]
        .iter()
        .map(|x| adm.id_of(x).unwrap())
        .collect();
    assert_eq!(iw.blocks.iter().copied().collect::<BTreeSet<_>>(), expected);

    // the same set, read straight off the cosets
    let direct: BTreeSet<usize> = (0..adm.len())
        .filter(|&id| (0..=1).any(|c| in_wj_tau_coset(&ctx, ParahoricType::superspecial(2, c), adm.element(id))))
        .collect();
    assert_eq!(direct, expected);

    let g1 = GroupContext::new(1).unwrap();
    let adm1 = AdmSet::enumerate(&g1).unwrap();
    assert!(verify_ss_iff_ssp(&adm1, &SuperspecialLabels::compute(&adm1)).passed);
}

#[test]
fn classification_constant_on_blocks() {
    for g in 2..=3 {
        let ctx = GroupContext::new(g).unwrap();
        let adm = AdmSet::enumerate(&ctx).unwrap();
        let labels = SuperspecialLabels::compute(&adm);
        for j in ParahoricType::all(g).step_by(3) {
            for block in adm.adm_j(j) {
                let first = classify_id(&adm, &labels, j, block.members[0]);
                for &m in &block.members {
                    assert_eq!(classify_id(&adm, &labels, j, m), first);
                }
            }
        }
    }
}

#[test]
fn witnesses_exist_for_every_nonsuperspecial_block() {
    for g in 1..=3 {
        let ctx = GroupContext::new(g).unwrap();
        let adm = AdmSet::enumerate(&ctx).unwrap();
        let labels = SuperspecialLabels::compute(&adm);
        for j in ParahoricType::all(g) {
            for block in adm.adm_j(j) {
                let r = classify_id(&adm, &labels, j, block.min_rep);
                let w = nonssp_witness(&adm, &labels, j, block.min_rep);
                if r.c_superspecial.is_empty() {
                    let w = w.unwrap();
                    assert_eq!(w.len(), g / 2 + 1);
                    for wit in w {
                        let below = *ctx.generator(wit.reflection).unwrap() * *ctx.tau();
                        assert!(adm.leq(adm.id_of(&below).unwrap(), wit.member));
                        assert!(block.members.contains(&wit.member));
                    }
                } else {
                    assert!(w.is_err());
                }
            }
        }
    }
}

#[test]
fn eo_minimum_is_unique() {
    for g in 1..=4 {
        let ctx = GroupContext::new(g).unwrap();
        let adm = AdmSet::enumerate(&ctx).unwrap();
        for w in final_elements(g) {
            let m = eo_kr_match(&adm, &w).unwrap();
            assert!(m.unique_min, "g={g} w={w}");
            assert!(m.all_above, "g={g} w={w}");
            assert_eq!(*adm.element(m.w_tau), ExtElement::finite(w) * *ctx.tau());
        }
    }
}

#[test]
fn structural_lemmas_up_to_rank_five() {
    for g in 1..=5 {
        let r = structural_lemmas(&GroupContext::new(g).unwrap());
        assert!(r.passed, "g={g} {:?}", r.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>());
        assert_eq!(r.checks.len(), g / 2 + 1);
    }
}
