//! Surface-kernel epimorphisms from triangle groups.
//!
//! A ske onto `G` from `Δ(m₁, m₂, m₃)` is recorded as the images
//! `(g₁, g₂, g₃)` of the canonical generators: `g₁g₂g₃ = 1`, each `gᵢ` has
//! order exactly `mᵢ`, and `g₁, g₂` generate `G`.

use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aut::GroupAutomorphism;
use crate::error::{Error, Result};
use crate::grp::{Element, GroupSpec};

/// Fuchsian signature `(h; m₁, …, m_t)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Signature {
    pub orbit_genus: u64,
    pub periods: Vec<u64>,
}

impl Signature {
    pub fn triangle(periods: [u64; 3]) -> Self {
        Signature {
            orbit_genus: 0,
            periods: periods.to_vec(),
        }
    }

    pub fn as_triangle(&self) -> Option<[u64; 3]> {
        match self.periods[..] {
            [a, b, c] if self.orbit_genus == 0 => Some([a, b, c]),
            _ => None,
        }
    }

    /// `2h − 2 + Σ(1 − 1/mᵢ)` as a reduced fraction.
    fn area(&self) -> (i128, i128) {
        let l = self
            .periods
            .iter()
            .fold(1i128, |acc, &m| acc.lcm(&(m as i128)));
        let num = (2 * self.orbit_genus as i128 - 2) * l
            + self
                .periods
                .iter()
                .map(|&m| (m as i128 - 1) * (l / m as i128))
                .sum::<i128>();
        let g = num.gcd(&l).max(1);
        (num / g, l / g)
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.periods.iter().all(|&m| m >= 2) && self.area().0 > 0
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps: Vec<String> = self.periods.iter().map(u64::to_string).collect();
        write!(f, "({};{})", self.orbit_genus, ps.join(","))
    }
}

/// Result of the Riemann–Hurwitz computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GenusOutcome {
    Genus(u64),
    /// `2g − 2 = numerator / denominator` is not an even integer.
    NonIntegral {
        numerator: i128,
        denominator: i128,
    },
}

/// Genus `g` with `2g − 2 = |G| · (2h − 2 + Σ(1 − 1/mᵢ))`.
pub fn rh_genus(group_order: u64, sig: &Signature) -> Result<GenusOutcome> {
    if !sig.is_hyperbolic() {
        return Err(Error::Precondition(format!("{sig} is not hyperbolic")));
    }
    let (num, den) = sig.area();
    let num = num * group_order as i128;
    let g = num.gcd(&den);
    let (num, den) = (num / g, den / g);
    if den != 1 || num % 2 != 0 {
        return Ok(GenusOutcome::NonIntegral {
            numerator: num,
            denominator: den,
        });
    }
    Ok(GenusOutcome::Genus((num / 2 + 1) as u64))
}

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Every signature `(h; m₁ ≤ … ≤ m_t)` with `t ≥ 1`, periods dividing
/// `group_order` and at least `min_period`, satisfying Riemann–Hurwitz for
/// a free action of that order in the given genus.
pub fn admissible_signatures(group_order: u64, genus: u64, min_period: u64) -> Vec<Signature> {
    let n = group_order as i128;
    let target = 2 * genus as i128 - 2;
    let periods: Vec<u64> = divisors(group_order)
        .into_iter()
        .filter(|&d| d >= min_period.max(2))
        .collect();
    let mut out = Vec::new();
    let mut h = 0i128;
    while n * (2 * h - 2) < target {
        let rest = target - n * (2 * h - 2);
        let mut stack = Vec::new();
        fill_periods(n, &periods, 0, rest, &mut stack, &mut |ps| {
            out.push(Signature {
                orbit_genus: h as u64,
                periods: ps.to_vec(),
            })
        });
        h += 1;
    }
    out.sort();
    out
}

fn fill_periods(
    n: i128,
    periods: &[u64],
    from: usize,
    rest: i128,
    stack: &mut Vec<u64>,
    emit: &mut dyn FnMut(&[u64]),
) {
    if rest == 0 {
        if !stack.is_empty() {
            emit(stack);
        }
        return;
    }
    for (i, &m) in periods.iter().enumerate().skip(from) {
        let term = n - n / m as i128;
        if term > rest {
            continue;
        }
        stack.push(m);
        fill_periods(n, periods, i, rest - term, stack, emit);
        stack.pop();
    }
}

/// A generating triple for a triangle signature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Ske {
    pub triple: [Element; 3],
    pub periods: [u64; 3],
}

impl Ske {
    pub fn signature(&self) -> Signature {
        Signature::triangle(self.periods)
    }

    /// Builds `(g₁, g₂, (g₁g₂)⁻¹)`.
    pub fn from_pair(g: &GroupSpec, g1: Element, g2: Element, periods: [u64; 3]) -> Self {
        let g3 = g.inv(&g.mul(&g1, &g2));
        Ske {
            triple: [g1, g2, g3],
            periods,
        }
    }

    /// Checks the three ske invariants in `g`.
    pub fn validate(&self, g: &GroupSpec) -> Result<()> {
        let [g1, g2, g3] = self.triple;
        if !self.triple.iter().all(|x| g.contains(x)) {
            return Err(Error::Precondition(format!(
                "triple is not in {}",
                g.family
            )));
        }
        if g.mul_all(&[g1, g2, g3]) != Element::IDENTITY {
            return Err(Error::Precondition("g1·g2·g3 ≠ 1".into()));
        }
        for (x, &m) in self.triple.iter().zip(&self.periods) {
            if g.order(x) != m {
                return Err(Error::Precondition(format!(
                    "{} has order {}, expected {m}",
                    g.word(x),
                    g.order(x)
                )));
            }
        }
        if !g.generates(&[g1, g2]) {
            return Err(Error::Precondition(format!(
                "triple does not generate {}",
                g.family
            )));
        }
        Ok(())
    }

    pub fn render(&self, g: &GroupSpec) -> String {
        let w: Vec<String> = self.triple.iter().map(|x| g.word(x)).collect();
        format!("({})", w.join(", "))
    }
}

/// Every ske of `Δ(periods)` onto `g`, in lexicographic order of `(g₁, g₂)`.
pub fn enumerate_skes(g: &GroupSpec, sig: &Signature) -> Result<Vec<Ske>> {
    let periods = sig
        .as_triangle()
        .ok_or_else(|| Error::Precondition(format!("{sig} is not a triangle signature")))?;
    let orders: Vec<u64> = g.elements().map(|x| g.order(&x)).collect();
    let of_order = |m: u64| -> Vec<Element> {
        orders
            .iter()
            .enumerate()
            .filter(|(_, &o)| o == m)
            .map(|(i, _)| g.from_index(i))
            .collect()
    };
    let first = of_order(periods[0]);
    let second = of_order(periods[1]);
    let mut out: Vec<Ske> = first
        .par_iter()
        .flat_map_iter(|&g1| {
            let orders = &orders;
            second.iter().filter_map(move |&g2| {
                let g3 = g.inv(&g.mul(&g1, &g2));
                (orders[g.index(&g3)] == periods[2] && g.generates(&[g1, g2])).then_some(Ske {
                    triple: [g1, g2, g3],
                    periods,
                })
            })
        })
        .collect();
    out.par_sort_unstable();
    Ok(out)
}

/// The ske of the mirror image: `(g₁⁻¹, g₂⁻¹, g₂g₁)`.
pub fn mirror(g: &GroupSpec, k: &Ske) -> Ske {
    let [g1, g2, _] = k.triple;
    Ske {
        triple: [g.inv(&g1), g.inv(&g2), g.mul(&g2, &g1)],
        periods: k.periods,
    }
}

/// Embeddings `Δ(5,5,5) → Δ(2,5,10)`.
///
/// `Iota1`, `Iota2`, `Iota3` are the three cyclic rotations of
/// `(y₃⁻¹y₂y₃, y₂, y₃²)`. `Iota2Alt` is the transposed ordering
/// `(y₃⁻¹y₂y₃, y₃², y₂)` that appears as an alternative listing of `ι₂`;
/// [`restrict`] reports whether it is a valid embedding in the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Embedding {
    Iota1,
    Iota2,
    Iota3,
    Iota2Alt,
}

impl Embedding {
    pub const CYCLIC: [Embedding; 3] = [Embedding::Iota1, Embedding::Iota2, Embedding::Iota3];
}

impl fmt::Display for Embedding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Embedding::Iota1 => "iota1",
            Embedding::Iota2 => "iota2",
            Embedding::Iota3 => "iota3",
            Embedding::Iota2Alt => "iota2_alt",
        })
    }
}

/// Images of `x₁, x₂, x₃` under `which`, computed in `hat`.
pub fn embedding_images(hat: &GroupSpec, k: &Ske, which: Embedding) -> [Element; 3] {
    let [_, y2, y3] = k.triple;
    let conj = hat.mul_all(&[hat.inv(&y3), y2, y3]);
    let sq = hat.mul(&y3, &y3);
    match which {
        Embedding::Iota1 => [conj, y2, sq],
        Embedding::Iota2 => [y2, sq, conj],
        Embedding::Iota3 => [sq, conj, y2],
        Embedding::Iota2Alt => [conj, sq, y2],
    }
}

/// Restricts a `(2,5,10)`-ske on `hat` along `which` to a `(5,5,5)`-ske on
/// the index-2 subgroup `base`.
pub fn restrict(hat: &GroupSpec, base: &GroupSpec, k: &Ske, which: Embedding) -> Result<Ske> {
    if k.periods != [2, 5, 10] || !hat.d_present || hat.family.base() != base.family {
        return Err(Error::Precondition(format!(
            "restriction needs a (2,5,10)-ske on the extension of {}",
            base.family
        )));
    }
    let triple = embedding_images(hat, k, which);
    if hat.mul_all(&triple) != Element::IDENTITY {
        return Err(Error::InternalConsistency(format!(
            "{which}: restricted triple does not multiply to the identity"
        )));
    }
    if triple.iter().any(|x| x.d_exp != 0) {
        return Err(Error::InternalConsistency(format!(
            "{which}: image leaves the index-2 subgroup"
        )));
    }
    let ske = Ske {
        triple,
        periods: [5, 5, 5],
    };
    ske.validate(base)
        .map_err(|e| Error::InternalConsistency(format!("{which}: {e}")))?;
    Ok(ske)
}

/// A `(2,5,10)`-ske extending a `(5,5,5)`-ske.
#[derive(Debug, Clone)]
pub struct Extension {
    pub ske: Ske,
    /// Restricting `ske` along this embedding gives back the input.
    pub embedding: Embedding,
    /// The order-2 automorphism of the base swapping two entries of a
    /// rotation of the input.
    pub automorphism: GroupAutomorphism,
    /// Involution of `hat` inducing `automorphism` by conjugation.
    pub involution: Element,
}

/// Looks for an automorphism `Φ` of `base` with `Φ(h₁) = h₂`, `Φ(h₂) = h₁`
/// for some cyclic rotation `(h₁, h₂, h₃)` of the input, then for an
/// involution `δ ∈ hat` inducing `Φ`, and returns `(δ, h₂, (δh₂)⁻¹)`.
pub fn find_extension(
    base: &GroupSpec,
    hat: &GroupSpec,
    k: &Ske,
    auts: &[GroupAutomorphism],
) -> Result<Option<Extension>> {
    if hat.family.base() != base.family || !hat.d_present {
        return Err(Error::Precondition(format!(
            "{} is not the extension of {}",
            hat.family, base.family
        )));
    }
    if k.periods != [5, 5, 5] {
        return Err(Error::Precondition("input must be a (5,5,5)-ske".into()));
    }
    k.validate(base)?;
    let [g1, g2, g3] = k.triple;
    // rotation r: (h1, h2, h3), recovered from the extension by embedding e
    let rotations = [
        ([g1, g2, g3], Embedding::Iota1),
        ([g2, g3, g1], Embedding::Iota3),
        ([g3, g1, g2], Embedding::Iota2),
    ];
    let involutions: Vec<Element> = hat
        .elements()
        .filter(|x| x.d_exp == 1 && hat.order(x) == 2)
        .collect();
    for ([h1, h2, _], embedding) in rotations {
        let Some(phi) = auts
            .iter()
            .find(|phi| phi.apply(base, &h1) == h2 && phi.apply(base, &h2) == h1)
        else {
            continue;
        };
        let Some(&delta) = involutions
            .iter()
            .find(|d| hat.conj(d, &h1) == h2 && hat.conj(d, &h2) == h1)
        else {
            continue;
        };
        let ske = Ske::from_pair(hat, delta, h2, [2, 5, 10]);
        ske.validate(hat)
            .map_err(|e| Error::InternalConsistency(format!("extension: {e}")))?;
        return Ok(Some(Extension {
            ske,
            embedding,
            automorphism: phi.clone(),
            involution: delta,
        }));
    }
    Ok(None)
}
