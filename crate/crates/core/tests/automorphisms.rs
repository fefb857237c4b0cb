use std::collections::HashSet;

use rmcensus_core::aut::{
    apply_to_ske, automorphisms, is_closed_under_composition, GroupAutomorphism,
};
use rmcensus_core::epi::{enumerate_skes, mirror, Signature};
use rmcensus_core::grp::{relations, Gen, Relation, Word};
use rmcensus_core::{build_group, derive_params, Element, FamilyTag, GroupSpec, UvPair};

fn group(p: u64, f: FamilyTag) -> GroupSpec {
    build_group(&derive_params(p).unwrap(), f).unwrap()
}

fn uses(w: &Word, x: Gen) -> bool {
    match w {
        Word::Gen(y, _) => *y == x,
        Word::Seq(ws, _) => ws.iter().any(|s| uses(s, x)),
    }
}

/// Every generator assignment satisfying the relations and generating,
/// found by backtracking over all elements of the right orders.
fn brute_force_automorphisms(g: &GroupSpec) -> HashSet<Vec<Element>> {
    let rels = relations(&g.params, g.family).unwrap();
    let mut slots = vec![Gen::C, Gen::A];
    if g.b().is_some() {
        slots.push(Gen::B);
    }
    if g.d().is_some() {
        slots.push(Gen::D);
    }
    let source = |x: Gen| match x {
        Gen::A => g.a(),
        Gen::B => g.b().unwrap(),
        Gen::C => g.c(),
        Gen::D => g.d().unwrap(),
    };
    let candidates: Vec<Vec<Element>> = slots
        .iter()
        .map(|&x| g.elements_of_order(g.order(&source(x))))
        .collect();
    let mut by_depth: Vec<Vec<&Relation>> = vec![Vec::new(); slots.len()];
    for r in &rels {
        let d = slots
            .iter()
            .rposition(|&x| uses(&r.lhs, x) || uses(&r.rhs, x))
            .unwrap();
        by_depth[d].push(r);
    }
    let mut out = HashSet::new();
    let mut assigned = Vec::new();
    search(g, &slots, &candidates, &by_depth, &mut assigned, &mut out);
    out
}

fn search(
    g: &GroupSpec,
    slots: &[Gen],
    candidates: &[Vec<Element>],
    by_depth: &[Vec<&Relation>],
    assigned: &mut Vec<Element>,
    out: &mut HashSet<Vec<Element>>,
) {
    let depth = assigned.len();
    if depth == slots.len() {
        if g.closure(assigned).order == g.group_order() {
            // reorder to slot order a, [b], c, [d]
            let at = |x: Gen| assigned[slots.iter().position(|s| *s == x).unwrap()];
            let mut v = vec![at(Gen::A)];
            if g.b().is_some() {
                v.push(at(Gen::B));
            }
            v.push(at(Gen::C));
            if g.d().is_some() {
                v.push(at(Gen::D));
            }
            out.insert(v);
        }
        return;
    }
    for &x in &candidates[depth] {
        assigned.push(x);
        let img = |gen: Gen| {
            slots
                .iter()
                .position(|s| *s == gen)
                .and_then(|i| assigned.get(i).copied())
        };
        if by_depth[depth]
            .iter()
            .all(|r| r.holds(g, &img) == Some(true))
        {
            search(g, slots, candidates, by_depth, assigned, out);
        }
        assigned.pop();
    }
}

fn structured(g: &GroupSpec) -> HashSet<Vec<Element>> {
    automorphisms(g)
        .unwrap()
        .iter()
        .map(|a| a.images().to_vec())
        .collect()
}

#[test]
fn g1_matches_brute_force() {
    let g = group(11, FamilyTag::G1);
    let oracle = brute_force_automorphisms(&g);
    assert_eq!(oracle.len(), 11 * 11 * 11 * 10);
    assert_eq!(structured(&g), oracle);
}

#[test]
fn rank_two_families_match_brute_force() {
    for f in [FamilyTag::Guv(UvPair::SS2), FamilyTag::Guv(UvPair::SS4)] {
        let g = group(11, f);
        let oracle = brute_force_automorphisms(&g);
        assert_eq!(structured(&g), oracle, "{f}");
    }
}

#[test]
fn extension_families_match_brute_force() {
    for f in [FamilyTag::HatG1, FamilyTag::HatGss4] {
        let g = group(11, f);
        let oracle = brute_force_automorphisms(&g);
        assert_eq!(structured(&g), oracle, "{f}");
    }
}

#[test]
fn g0_count() {
    let p = 19u64;
    for f in [FamilyTag::G0, FamilyTag::HatG0] {
        let g = group(p, f);
        let auts = automorphisms(&g).unwrap();
        assert_eq!(auts.len() as u64, 2 * p * p * (p * p - 1), "{f}");
    }
}

#[test]
fn lists_are_groups() {
    for f in [
        FamilyTag::G1,
        FamilyTag::HatG1,
        FamilyTag::Guv(UvPair::SS2),
        FamilyTag::HatGss2,
        FamilyTag::HatGss4,
    ] {
        let g = group(11, f);
        assert!(
            is_closed_under_composition(&g, &automorphisms(&g).unwrap()),
            "{f}"
        );
    }
}

#[test]
fn dropping_an_element_breaks_closure() {
    let g = group(11, FamilyTag::Guv(UvPair::SS4));
    let mut auts = automorphisms(&g).unwrap();
    auts.remove(auts.len() / 2);
    assert!(!is_closed_under_composition(&g, &auts));
}

#[test]
fn automorphisms_are_bijective() {
    let g = group(11, FamilyTag::HatGss2);
    for phi in automorphisms(&g).unwrap().iter().step_by(1009) {
        let image: HashSet<Element> = g.elements().map(|x| phi.apply(&g, &x)).collect();
        assert_eq!(image.len() as u64, g.group_order());
        // homomorphism on a sample of pairs
        for (i, x) in g.elements().enumerate().step_by(37) {
            let y = g.from_index((i * 7 + 3) % g.group_order() as usize);
            assert_eq!(
                phi.apply(&g, &g.mul(&x, &y)),
                g.mul(&phi.apply(&g, &x), &phi.apply(&g, &y))
            );
        }
    }
}

#[test]
fn skes_closed_under_aut_and_mirror_commutes() {
    let g = group(11, FamilyTag::Guv(UvPair::SS4));
    let skes = enumerate_skes(&g, &Signature::triangle([5, 5, 5])).unwrap();
    let set: HashSet<_> = skes.iter().copied().collect();
    let auts = automorphisms(&g).unwrap();
    for (i, phi) in auts.iter().enumerate().step_by(211) {
        let k = &skes[(i * 31) % skes.len()];
        let img = apply_to_ske(&g, phi, k);
        assert!(set.contains(&img));
        assert_eq!(apply_to_ske(&g, phi, &mirror(&g, k)), mirror(&g, &img));
    }
}

#[test]
fn swap_rule_is_an_automorphism_of_g_s_s4() {
    let g = group(11, FamilyTag::Guv(UvPair::SS4));
    let phi =
        GroupAutomorphism::from_images(&g, vec![g.b().unwrap(), g.a(), g.pow(&g.c(), -1)]).unwrap();
    let rels = relations(&g.params, g.family).unwrap();
    assert!(phi.verify(&g, &rels));
    // and not of G_{s,s^2}
    let h = group(11, FamilyTag::Guv(UvPair::SS2));
    let psi =
        GroupAutomorphism::from_images(&h, vec![h.b().unwrap(), h.a(), h.pow(&h.c(), -1)]).unwrap();
    assert!(!psi.verify(&h, &relations(&h.params, h.family).unwrap()));
}
