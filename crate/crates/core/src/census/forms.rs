//! Closed-form generating triples for each family.
//!
//! These are the explicit representatives one reaches by hand; the census
//! locates each inside its computed class.

use crate::epi::Ske;
use crate::error::Result;
use crate::grp::{Element, FamilyTag, GroupSpec};
use crate::modarith::{inv_mod, pow_mod};

/// `(label, ske)` pairs; the ske is built entry by entry from its formula,
/// so its product is not assumed to be trivial.
pub fn closed_forms(g: &GroupSpec) -> Result<Vec<(String, Ske)>> {
    let mut out = Vec::new();
    match g.family {
        FamilyTag::G1 => {
            let k = g.params.k()?;
            let m = g.p_part_modulus;
            for (m1, m2, m3) in index_triples() {
                let g1 = g.element([-(pow_mod(k, m1, m) as i64), 0], m1 as i64, 0);
                let g2 = g.element([1, 0], m2 as i64, 0);
                let g3 = g.element([0, 0], m3 as i64, 0);
                out.push((
                    format!("theta_{{{m1},{m2},{m3}}}"),
                    triple(g1, g2, g3, [5, 5, 5]),
                ));
            }
        }
        FamilyTag::Guv(_) | FamilyTag::G0 => {
            for (n1, n2, n3) in index_triples() {
                let u = g
                    .p_action(&g.element([0, 0], n1 as i64, 0))
                    .apply([1, 1], g.p());
                let g1 = g.element([-(u[0] as i64), -(u[1] as i64)], n1 as i64, 0);
                let g2 = g.element([1, 1], n2 as i64, 0);
                let g3 = g.element([0, 0], n3 as i64, 0);
                out.push((
                    format!("theta_{{{n1},{n2},{n3}}}"),
                    triple(g1, g2, g3, [5, 5, 5]),
                ));
            }
        }
        FamilyTag::HatG1 => {
            let k = g.params.k()?;
            let m = g.p_part_modulus;
            let kinv = inv_mod(k, m)?;
            for t in 1..5u64 {
                let g1 = g.element([0, 0], 0, 1);
                let g2 = g.element([1, 0], t as i64, 0);
                let g3 = g.element([-(pow_mod(kinv, t, m) as i64), 0], -(t as i64), 1);
                out.push((format!("Theta_{{{t}}}"), triple(g1, g2, g3, [2, 5, 10])));
            }
        }
        FamilyTag::HatGss2 | FamilyTag::HatGss4 | FamilyTag::HatG0 => {
            for n1 in 1..5u64 {
                let n3 = (10 - 2 * n1) % 5;
                let d = g.element([0, 0], 0, 1);
                let y2 = g.element([1, 1], n1 as i64, 0);
                let y3 = g.inv(&g.mul(&d, &y2));
                out.push((
                    format!("Theta_{{{n1},{n1},{n3}}}"),
                    triple(d, y2, y3, [2, 5, 10]),
                ));
            }
        }
    }
    Ok(out)
}

fn triple(g1: Element, g2: Element, g3: Element, periods: [u64; 3]) -> Ske {
    Ske {
        triple: [g1, g2, g3],
        periods,
    }
}

/// `(n₁, n₂, n₃)` with each `nᵢ ∈ {1,…,4}` and `n₁ + n₂ + n₃ ≡ 0 mod 5`.
fn index_triples() -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    for n1 in 1..5 {
        for n2 in 1..5 {
            let n3 = (10 - n1 - n2) % 5;
            if n3 != 0 {
                out.push((n1, n2, n3));
            }
        }
    }
    out
}
