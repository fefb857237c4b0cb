use super::presentation::{relations, Gen, Relation, Word};
use super::{Element, GroupSpec};
use crate::error::{Error, Result};

/// Largest group order `is_isomorphic` will search.
pub const ISOMORPHISM_BUDGET: u64 = 5000;

fn uses(w: &Word, x: Gen) -> bool {
    match w {
        Word::Gen(y, _) => *y == x,
        Word::Seq(ws, _) => ws.iter().any(|s| uses(s, x)),
    }
}

/// Decides `G ≅ H` by searching for generator images in `H` that satisfy
/// the defining relations of `G` and generate `H`.
///
/// The order census is compared first. The image of `G`'s `c` is taken
/// among powers of `H`'s `c`, which loses nothing because the Sylow
/// 5-subgroups are cyclic of order 5 and conjugate.
pub fn is_isomorphic(g: &GroupSpec, h: &GroupSpec) -> Result<bool> {
    if g.group_order() != h.group_order() {
        return Ok(false);
    }
    if g.group_order() > ISOMORPHISM_BUDGET {
        return Err(Error::OverBudget {
            order: g.group_order(),
            budget: ISOMORPHISM_BUDGET,
        });
    }
    if g.order_census() != h.order_census() {
        return Ok(false);
    }
    let rels = relations(&g.params, g.family)?;

    let mut slots = vec![(Gen::C, g.order(&g.c()))];
    slots.push((Gen::A, g.order(&g.a())));
    if let Some(b) = g.b() {
        slots.push((Gen::B, g.order(&b)));
    }
    if let Some(d) = g.d() {
        slots.push((Gen::D, g.order(&d)));
    }
    // relations grouped by the first search depth at which they are checkable
    let mut by_depth: Vec<Vec<&Relation>> = vec![Vec::new(); slots.len()];
    for r in &rels {
        let depth = slots
            .iter()
            .rposition(|(x, _)| uses(&r.lhs, *x) || uses(&r.rhs, *x))
            .unwrap_or(0);
        by_depth[depth].push(r);
    }
    let candidates: Vec<Vec<Element>> = slots
        .iter()
        .map(|&(x, n)| {
            if x == Gen::C {
                (1..5).map(|t| h.pow(&h.c(), t)).collect()
            } else {
                h.elements_of_order(n)
            }
        })
        .collect();

    let mut assigned: Vec<Element> = Vec::with_capacity(slots.len());
    Ok(search(h, &slots, &candidates, &by_depth, &mut assigned))
}

fn search(
    h: &GroupSpec,
    slots: &[(Gen, u64)],
    candidates: &[Vec<Element>],
    by_depth: &[Vec<&Relation>],
    assigned: &mut Vec<Element>,
) -> bool {
    let depth = assigned.len();
    if depth == slots.len() {
        return h.generates(assigned);
    }
    for &x in &candidates[depth] {
        assigned.push(x);
        let img = |gen: Gen| {
            slots
                .iter()
                .position(|(s, _)| *s == gen)
                .and_then(|i| assigned.get(i).copied())
        };
        let ok = by_depth[depth]
            .iter()
            .all(|r| r.holds(h, &img) == Some(true));
        if ok && search(h, slots, candidates, by_depth, assigned) {
            return true;
        }
        assigned.pop();
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::{build_group, FamilyTag, UvPair};
    use crate::modarith::derive_params;

    #[test]
    fn isomorphism_examples() {
        let params = derive_params(11).unwrap();
        let ss2 = build_group(&params, FamilyTag::Guv(UvPair::SS2)).unwrap();
        let ss4 = build_group(&params, FamilyTag::Guv(UvPair::SS4)).unwrap();
        let ss = build_group(&params, FamilyTag::Guv(UvPair::SS)).unwrap();
        let one_s = build_group(&params, FamilyTag::Guv(UvPair::OneS)).unwrap();
        assert!(is_isomorphic(&ss2, &ss2).unwrap());
        assert!(!is_isomorphic(&ss2, &ss4).unwrap());
        assert!(!is_isomorphic(&one_s, &ss).unwrap());
        // G_{1,s} has elements of order 5p, G_{s,s} does not
        assert_ne!(one_s.order_census(), ss.order_census());
        let g1 = build_group(&params, FamilyTag::G1).unwrap();
        assert!(!is_isomorphic(&g1, &ss2).unwrap());
    }

    #[test]
    fn hat_families_are_distinct() {
        let params = derive_params(11).unwrap();
        let a = build_group(&params, FamilyTag::HatGss2).unwrap();
        let b = build_group(&params, FamilyTag::HatGss4).unwrap();
        assert!(is_isomorphic(&a, &a).unwrap());
        assert!(!is_isomorphic(&a, &b).unwrap());
    }

    #[test]
    fn twisted_copy_is_isomorphic() {
        // Any twist v gives the same abstract group; only the relation dcd = vc moves.
        let params = derive_params(11).unwrap();
        let g = build_group(&params, FamilyTag::HatGss2).unwrap();
        let other = g.with_d_twist([0, 0]).unwrap();
        assert!(is_isomorphic(&g, &other).unwrap());
    }

    #[test]
    fn refuses_large_groups() {
        let params = derive_params(31).unwrap();
        let g = build_group(&params, FamilyTag::HatGss2).unwrap();
        assert!(matches!(
            is_isomorphic(&g, &g),
            Err(Error::OverBudget { .. })
        ));
    }
}
