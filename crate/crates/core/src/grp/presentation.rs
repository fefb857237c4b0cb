//! Defining presentations of the families, as relation words.
//!
//! Relations are built from the published presentations and the prime's
//! constants only; they never read the cached action or twist stored in a
//! [`GroupSpec`]. That keeps [`verify_presentation`] an independent check
//! of the rewriting rules in [`GroupSpec::mul`].

use serde::{Deserialize, Serialize};

use super::{Element, FamilyTag, GroupSpec, UvPair};
use crate::error::Result;
use crate::modarith::{pow_mod, PrimeParams};

/// Generator slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Gen {
    A,
    B,
    C,
    D,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Word {
    /// A generator raised to a power.
    Gen(Gen, i64),
    /// A product of subwords raised to a power.
    Seq(Vec<Word>, i64),
}

fn g(x: Gen) -> Word {
    Word::Gen(x, 1)
}

fn gp(x: Gen, e: i64) -> Word {
    Word::Gen(x, e)
}

fn seq(ws: Vec<Word>) -> Word {
    Word::Seq(ws, 1)
}

fn id() -> Word {
    Word::Seq(Vec::new(), 1)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    pub name: String,
    pub lhs: Word,
    pub rhs: Word,
}

fn rel(name: &str, lhs: Word, rhs: Word) -> Relation {
    Relation {
        name: name.to_string(),
        lhs,
        rhs,
    }
}

/// Evaluates `w` in `target` under the generator assignment `img`.
///
/// Returns `None` if the word uses an unassigned generator.
pub fn eval_word(
    target: &GroupSpec,
    w: &Word,
    img: &dyn Fn(Gen) -> Option<Element>,
) -> Option<Element> {
    match w {
        Word::Gen(x, e) => Some(target.pow(&img(*x)?, *e)),
        Word::Seq(ws, e) => {
            let mut acc = Element::IDENTITY;
            for sub in ws {
                acc = target.mul(&acc, &eval_word(target, sub, img)?);
            }
            Some(target.pow(&acc, *e))
        }
    }
}

impl Relation {
    /// `Some(true)` if the relation holds under `img`, `None` if some letter
    /// is unassigned.
    pub fn holds(&self, target: &GroupSpec, img: &dyn Fn(Gen) -> Option<Element>) -> Option<bool> {
        Some(eval_word(target, &self.lhs, img)? == eval_word(target, &self.rhs, img)?)
    }
}

/// Defining relations of `family` in slot lettering, named in the
/// family's published lettering.
pub fn relations(params: &PrimeParams, family: FamilyTag) -> Result<Vec<Relation>> {
    use Gen::*;
    let p = params.p as i64;
    let mut rels = Vec::new();
    let conj = |x: Gen, y: Gen| seq(vec![g(x), g(y), gp(x, -1)]);
    match family {
        FamilyTag::G1 | FamilyTag::HatG1 => {
            let k = params.k()? as i64;
            rels.push(rel("a^{p^2} = 1", gp(A, p * p), id()));
            rels.push(rel("b^5 = 1", gp(C, 5), id()));
            rels.push(rel("b a b^-1 = a^k", conj(C, A), gp(A, k)));
            if family == FamilyTag::HatG1 {
                rels.push(rel("c^2 = 1", gp(D, 2), id()));
                rels.push(rel("(ca)^2 = 1", Word::Seq(vec![g(D), g(A)], 2), id()));
                rels.push(rel(
                    "[c,b] = 1",
                    seq(vec![g(D), g(C), gp(D, -1), gp(C, -1)]),
                    id(),
                ));
            }
            return Ok(rels);
        }
        _ => {}
    }
    rels.push(rel("a^p = 1", gp(A, p), id()));
    rels.push(rel("b^p = 1", gp(B, p), id()));
    rels.push(rel("c^5 = 1", gp(C, 5), id()));
    rels.push(rel(
        "[a,b] = 1",
        seq(vec![g(A), g(B), gp(A, -1), gp(B, -1)]),
        id(),
    ));
    let pw = |e: u64| pow_mod(params.s.unwrap_or(0), e, params.p) as i64;
    match family {
        FamilyTag::Guv(_) | FamilyTag::HatGss2 | FamilyTag::HatGss4 => {
            let uv = match family {
                FamilyTag::Guv(uv) => uv,
                FamilyTag::HatGss2 => UvPair::SS2,
                _ => UvPair::SS4,
            };
            params.s()?;
            let (i, j) = uv.exponents();
            let (u, v) = (pw(i), pw(j));
            let name = |x: &str, e: u64| match e {
                0 => format!("c{x}c^-1 = {x}"),
                1 => format!("c{x}c^-1 = {x}^s"),
                e => format!("c{x}c^-1 = {x}^{{s^{e}}}"),
            };
            rels.push(rel(&name("a", i), conj(C, A), gp(A, u)));
            rels.push(rel(&name("b", j), conj(C, B), gp(B, v)));
            if family.is_hat() {
                rels.push(rel(
                    &format!("dcd = a^{{1-s}}b^{{1-s^{j}}}c"),
                    seq(vec![g(D), g(C), g(D)]),
                    seq(vec![gp(A, 1 - u), gp(B, 1 - v), g(C)]),
                ));
            }
        }
        FamilyTag::G0 | FamilyTag::HatG0 => {
            let (t1, t2) = params.golden()?;
            let (t1, t2) = (t1 as i64, t2 as i64);
            rels.push(rel("cac^-1 = b^{t2}", conj(C, A), gp(B, t2)));
            rels.push(rel(
                "cbc^-1 = (ab)^{t1}",
                conj(C, B),
                Word::Seq(vec![g(A), g(B)], t1),
            ));
            if family.is_hat() {
                rels.push(rel(
                    "dcd = a^{t1^2}b^2c",
                    seq(vec![g(D), g(C), g(D)]),
                    seq(vec![gp(A, t1 * t1), gp(B, 2), g(C)]),
                ));
            }
        }
        _ => unreachable!("rank-1 families handled above"),
    }
    if family.is_hat() {
        rels.push(rel("d^2 = 1", gp(D, 2), id()));
        rels.push(rel("(da)^2 = 1", Word::Seq(vec![g(D), g(A)], 2), id()));
        rels.push(rel("(db)^2 = 1", Word::Seq(vec![g(D), g(B)], 2), id()));
    }
    Ok(rels)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PresentationCheck {
    pub passed: bool,
    pub violated: Vec<String>,
    pub closure_order: u64,
    pub expected_order: u64,
}

/// Evaluates every defining relation on the group's own generators and
/// checks that they generate a group of the expected order.
pub fn verify_presentation(group: &GroupSpec) -> Result<PresentationCheck> {
    let rels = relations(&group.params, group.family)?;
    let img = |x: Gen| slot_image(group, x);
    let violated: Vec<String> = rels
        .iter()
        .filter(|r| r.holds(group, &img) != Some(true))
        .map(|r| r.name.clone())
        .collect();
    let closure_order = group.closure(&group.generators()).order;
    Ok(PresentationCheck {
        passed: violated.is_empty() && closure_order == group.expected_order,
        violated,
        closure_order,
        expected_order: group.expected_order,
    })
}

pub(crate) fn slot_image(group: &GroupSpec, x: Gen) -> Option<Element> {
    match x {
        Gen::A => Some(group.a()),
        Gen::B => group.b(),
        Gen::C => Some(group.c()),
        Gen::D => group.d(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::build_group;
    use crate::modarith::derive_params;

    #[test]
    fn every_family_satisfies_its_presentation() {
        for p in [11, 19, 29, 31] {
            let params = derive_params(p).unwrap();
            for f in FamilyTag::ALL {
                let Ok(g) = build_group(&params, f) else {
                    continue;
                };
                let check = verify_presentation(&g).unwrap();
                assert!(check.passed, "p={p} {f}: {check:?}");
            }
        }
    }

    #[test]
    fn corrupted_twist_is_caught() {
        let params = derive_params(19).unwrap();
        let g = build_group(&params, FamilyTag::HatG0).unwrap();
        let bad = g.with_d_twist([1, 0]).unwrap();
        let check = verify_presentation(&bad).unwrap();
        assert!(!check.passed);
        assert_eq!(check.violated, vec!["dcd = a^{t1^2}b^2c".to_string()]);

        let params = derive_params(11).unwrap();
        let g = build_group(&params, FamilyTag::HatGss2).unwrap();
        let bad = g.with_d_twist([0, 0]).unwrap();
        let check = verify_presentation(&bad).unwrap();
        assert_eq!(check.violated, vec!["dcd = a^{1-s}b^{1-s^2}c".to_string()]);
    }

    #[test]
    fn relation_names_follow_published_letters() {
        let params = derive_params(11).unwrap();
        let names: Vec<String> = relations(&params, FamilyTag::HatG1)
            .unwrap()
            .into_iter()
            .map(|r| r.name)
            .collect();
        assert!(names.contains(&"(ca)^2 = 1".to_string()));
        assert!(names.contains(&"[c,b] = 1".to_string()));
        let names: Vec<String> = relations(&params, FamilyTag::Guv(UvPair::OneS))
            .unwrap()
            .into_iter()
            .map(|r| r.name)
            .collect();
        assert!(names.contains(&"cac^-1 = a".to_string()));
    }
}
