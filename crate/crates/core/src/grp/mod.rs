//! The finite groups of order `5p²` and `10p²` as normal-form groups.
//!
//! Every family is normalised to the same generator roles: the normal Sylow
//! `p`-subgroup is generated by `a` (rank 1, cyclic of order `p²`) or by `a`
//! and `b` (rank 2, elementary abelian); an order-5 generator sits in the
//! `c` slot; and the optional involution sits in the `d` slot. An element is
//! stored as `u · c^n · d^e` with `u` an exponent vector on the `p`-part.
//!
//! Products are normalised by pushing `c` and `d` letters to the right:
//!
//! * `c · u = (C·u) · c` where `C` is the conjugation action of `c`;
//! * `d · u = (−u) · d`;
//! * `d · c = v · c · d` where `v` is the twist of the family.
//!
//! For `Ĝ₁` the involution of the published presentation is written `c`
//! and the order-5 generator `b`; [`FamilyTag::letters`] maps slots back to
//! that lettering for reports.

mod iso;
pub mod mat;
mod presentation;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::modarith::{mul_mod, pow_mod, PrimeParams};

pub use iso::{is_isomorphic, ISOMORPHISM_BUDGET};
pub use mat::Mat2;
pub use presentation::{
    eval_word, relations, verify_presentation, Gen, PresentationCheck, Relation, Word,
};

/// The four order-5 actions `diag(u, v)` on `ℤ_p²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UvPair {
    /// `(s, s)`
    SS,
    /// `(1, s)`
    OneS,
    /// `(s, s²)`
    SS2,
    /// `(s, s⁴)`
    SS4,
}

impl UvPair {
    /// Exponents `(i, j)` with `(u, v) = (sⁱ, sʲ)`.
    pub fn exponents(self) -> (u64, u64) {
        match self {
            UvPair::SS => (1, 1),
            UvPair::OneS => (0, 1),
            UvPair::SS2 => (1, 2),
            UvPair::SS4 => (1, 4),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FamilyTag {
    G1,
    Guv(UvPair),
    G0,
    HatG1,
    HatGss2,
    HatGss4,
    HatG0,
}

impl FamilyTag {
    pub const ALL: [FamilyTag; 10] = [
        FamilyTag::G1,
        FamilyTag::Guv(UvPair::SS),
        FamilyTag::Guv(UvPair::OneS),
        FamilyTag::Guv(UvPair::SS2),
        FamilyTag::Guv(UvPair::SS4),
        FamilyTag::G0,
        FamilyTag::HatG1,
        FamilyTag::HatGss2,
        FamilyTag::HatGss4,
        FamilyTag::HatG0,
    ];

    pub fn is_hat(self) -> bool {
        matches!(
            self,
            FamilyTag::HatG1 | FamilyTag::HatGss2 | FamilyTag::HatGss4 | FamilyTag::HatG0
        )
    }

    /// The index-2 family of a hat family.
    pub fn base(self) -> FamilyTag {
        match self {
            FamilyTag::HatG1 => FamilyTag::G1,
            FamilyTag::HatGss2 => FamilyTag::Guv(UvPair::SS2),
            FamilyTag::HatGss4 => FamilyTag::Guv(UvPair::SS4),
            FamilyTag::HatG0 => FamilyTag::G0,
            other => other,
        }
    }

    /// The order-`10p²` extension, where one exists.
    pub fn hat(self) -> Option<FamilyTag> {
        match self {
            FamilyTag::G1 => Some(FamilyTag::HatG1),
            FamilyTag::Guv(UvPair::SS2) => Some(FamilyTag::HatGss2),
            FamilyTag::Guv(UvPair::SS4) => Some(FamilyTag::HatGss4),
            FamilyTag::G0 => Some(FamilyTag::HatG0),
            _ => None,
        }
    }

    /// `p mod 5` required for the family to exist.
    pub fn required_residue(self) -> u64 {
        match self {
            FamilyTag::G0 | FamilyTag::HatG0 => 4,
            _ => 1,
        }
    }

    pub fn rank(self) -> usize {
        match self {
            FamilyTag::G1 | FamilyTag::HatG1 => 1,
            _ => 2,
        }
    }

    /// Published letters for the slots `a`, `b` (rank 2), `c`, `d` (hat).
    pub fn letters(self) -> &'static [&'static str] {
        match (self.rank(), self.is_hat()) {
            (1, false) => &["a", "b"],
            (1, true) => &["a", "b", "c"],
            (_, false) => &["a", "b", "c"],
            (_, true) => &["a", "b", "c", "d"],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FamilyTag::G1 => "G1",
            FamilyTag::Guv(UvPair::SS) => "G_s_s",
            FamilyTag::Guv(UvPair::OneS) => "G_1_s",
            FamilyTag::Guv(UvPair::SS2) => "G_s_s2",
            FamilyTag::Guv(UvPair::SS4) => "G_s_s4",
            FamilyTag::G0 => "G0",
            FamilyTag::HatG1 => "HatG1",
            FamilyTag::HatGss2 => "HatG_s_s2",
            FamilyTag::HatGss4 => "HatG_s_s4",
            FamilyTag::HatG0 => "HatG0",
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FamilyTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FamilyTag::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

impl Serialize for FamilyTag {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for FamilyTag {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Normal form `a^{pvec[0]} b^{pvec[1]} c^{c_exp} d^{d_exp}`.
///
/// The derived ordering is the lexicographic order on exponents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Element {
    pub pvec: [u32; 2],
    pub c_exp: u8,
    pub d_exp: u8,
}

impl Element {
    pub const IDENTITY: Element = Element {
        pvec: [0, 0],
        c_exp: 0,
        d_exp: 0,
    };

    pub fn new(pvec: [u64; 2], c_exp: u64, d_exp: u64) -> Self {
        Element {
            pvec: [pvec[0] as u32, pvec[1] as u32],
            c_exp: (c_exp % 5) as u8,
            d_exp: (d_exp % 2) as u8,
        }
    }

    pub fn in_p_part(&self) -> bool {
        self.c_exp == 0 && self.d_exp == 0
    }

    #[inline]
    pub fn p(&self) -> [u64; 2] {
        [self.pvec[0] as u64, self.pvec[1] as u64]
    }
}

/// Conjugation action of the `c`-slot generator on the `p`-part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CAction {
    Scalar(u64),
    Matrix(Mat2),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSpec {
    pub params: PrimeParams,
    pub family: FamilyTag,
    pub p_part_rank: usize,
    pub p_part_modulus: u64,
    pub c_action: CAction,
    pub d_present: bool,
    pub d_twist: [u64; 2],
    pub expected_order: u64,
    c_pows: [Mat2; 5],
    twist_sums: [[u64; 2]; 5],
}

pub fn build_group(params: &PrimeParams, family: FamilyTag) -> Result<GroupSpec> {
    let p = params.p;
    if params.residue != family.required_residue() {
        return Err(Error::InadmissibleFamily {
            family: family.to_string(),
            p,
            reason: if family.required_residue() == 1 {
                "requires p ≡ 1 mod 5"
            } else {
                "requires p ≡ −1 mod 5"
            },
        });
    }
    let neg = |x: u64| (p - x % p) % p;
    let (rank, modulus, c_action, d_twist) = match family {
        FamilyTag::G1 | FamilyTag::HatG1 => (1, p * p, CAction::Scalar(params.k()?), [0, 0]),
        FamilyTag::Guv(uv) => {
            let s = params.s()?;
            let (i, j) = uv.exponents();
            let c = Mat2::diag(pow_mod(s, i, p), pow_mod(s, j, p));
            (2, p, CAction::Matrix(c), [0, 0])
        }
        FamilyTag::HatGss2 | FamilyTag::HatGss4 => {
            let s = params.s()?;
            let j = if family == FamilyTag::HatGss2 { 2 } else { 4 };
            let sj = pow_mod(s, j, p);
            let twist = [(1 + neg(s)) % p, (1 + neg(sj)) % p];
            (2, p, CAction::Matrix(Mat2::diag(s, sj)), twist)
        }
        FamilyTag::G0 | FamilyTag::HatG0 => {
            let (t1, t2) = params.golden()?;
            // c a c⁻¹ = b^{t2}, c b c⁻¹ = (ab)^{t1}
            let c = Mat2::from_columns([0, t2], [t1, t1]);
            let twist = if family.is_hat() {
                [mul_mod(t1, t1, p), 2 % p]
            } else {
                [0, 0]
            };
            (2, p, CAction::Matrix(c), twist)
        }
    };
    GroupSpec::assemble(*params, family, rank, modulus, c_action, d_twist)
}

impl GroupSpec {
    fn assemble(
        params: PrimeParams,
        family: FamilyTag,
        rank: usize,
        modulus: u64,
        c_action: CAction,
        d_twist: [u64; 2],
    ) -> Result<Self> {
        let base = match c_action {
            CAction::Scalar(k) => Mat2::diag(k % modulus, 1),
            CAction::Matrix(m) => m,
        };
        let mut c_pows = [Mat2::IDENTITY; 5];
        for n in 1..5 {
            c_pows[n] = c_pows[n - 1].mul(&base, modulus);
        }
        if c_pows[4].mul(&base, modulus) != Mat2::IDENTITY {
            return Err(Error::InternalConsistency(format!(
                "{family}: c-action does not have order dividing 5"
            )));
        }
        let mut twist_sums = [[0u64; 2]; 6];
        for n in 1..6 {
            let prev = c_pows[(n - 1) % 5].apply(d_twist, modulus);
            twist_sums[n] = [
                (twist_sums[n - 1][0] + prev[0]) % modulus,
                (twist_sums[n - 1][1] + prev[1]) % modulus,
            ];
        }
        let d_present = family.is_hat();
        let order = modulus.pow(rank as u32) * 5 * if d_present { 2 } else { 1 };
        let spec = GroupSpec {
            params,
            family,
            p_part_rank: rank,
            p_part_modulus: modulus,
            c_action,
            d_present,
            d_twist,
            expected_order: order,
            c_pows,
            twist_sums: [
                twist_sums[0],
                twist_sums[1],
                twist_sums[2],
                twist_sums[3],
                twist_sums[4],
            ],
        };
        if d_present && twist_sums[5] != [0, 0] {
            return Err(Error::InternalConsistency(format!(
                "{family}: (d c d)^5 is not trivial for twist {d_twist:?}"
            )));
        }
        Ok(spec)
    }

    /// Copy of this group with the `d c d = v c` twist replaced.
    ///
    /// Used to build negative controls for presentation checks.
    pub fn with_d_twist(&self, v: [u64; 2]) -> Result<Self> {
        let m = self.p_part_modulus;
        GroupSpec::assemble(
            self.params,
            self.family,
            self.p_part_rank,
            m,
            self.c_action,
            [v[0] % m, v[1] % m],
        )
    }

    pub fn p(&self) -> u64 {
        self.params.p
    }

    pub fn group_order(&self) -> u64 {
        self.expected_order
    }

    /// `C^n` as a matrix (rank 1 actions act on the first coordinate).
    pub fn c_power(&self, n: u64) -> Mat2 {
        self.c_pows[(n % 5) as usize]
    }

    /// `Σ_{i<n} Cⁱ v`, the `p`-part picked up when `d` passes `c^n`.
    pub fn twist_sum(&self, n: u64) -> [u64; 2] {
        self.twist_sums[(n % 5) as usize]
    }

    fn d_count(&self) -> u64 {
        if self.d_present {
            2
        } else {
            1
        }
    }

    fn second_coord_range(&self) -> u64 {
        if self.p_part_rank == 2 {
            self.p_part_modulus
        } else {
            1
        }
    }

    /// Number of cosets of the `p`-part.
    pub fn quotient_order(&self) -> usize {
        5 * self.d_count() as usize
    }

    pub fn p_part_order(&self) -> u64 {
        self.p_part_modulus.pow(self.p_part_rank as u32)
    }

    // ---- element constructors ------------------------------------------

    pub fn identity(&self) -> Element {
        Element::IDENTITY
    }

    pub fn a(&self) -> Element {
        Element::new([1, 0], 0, 0)
    }

    /// `b` for rank-2 families.
    pub fn b(&self) -> Option<Element> {
        (self.p_part_rank == 2).then(|| Element::new([0, 1], 0, 0))
    }

    pub fn c(&self) -> Element {
        Element::new([0, 0], 1, 0)
    }

    pub fn d(&self) -> Option<Element> {
        self.d_present.then(|| Element::new([0, 0], 0, 1))
    }

    /// Generators in slot order `a, [b], c, [d]`.
    pub fn generators(&self) -> Vec<Element> {
        let mut g = vec![self.a()];
        g.extend(self.b());
        g.push(self.c());
        g.extend(self.d());
        g
    }

    /// Element with the given exponents; the `p`-part vector is reduced.
    pub fn element(&self, pvec: [i64; 2], c_exp: i64, d_exp: i64) -> Element {
        let m = self.p_part_modulus as i64;
        let second = if self.p_part_rank == 2 {
            pvec[1].rem_euclid(m)
        } else {
            0
        };
        let d = if self.d_present {
            d_exp.rem_euclid(2)
        } else {
            0
        };
        Element::new(
            [pvec[0].rem_euclid(m) as u64, second as u64],
            c_exp.rem_euclid(5) as u64,
            d as u64,
        )
    }

    pub fn p_element(&self, u: [u64; 2]) -> Element {
        Element::new(u, 0, 0)
    }

    pub fn contains(&self, x: &Element) -> bool {
        (x.pvec[0] as u64) < self.p_part_modulus
            && (x.pvec[1] as u64) < self.second_coord_range()
            && x.c_exp < 5
            && (x.d_exp as u64) < self.d_count()
    }

    // ---- indexing --------------------------------------------------------

    /// Dense index, monotone in the lexicographic element order.
    #[inline]
    pub fn index(&self, x: &Element) -> usize {
        let lin = x.pvec[0] as u64 * self.second_coord_range() + x.pvec[1] as u64;
        ((lin * 5 + x.c_exp as u64) * self.d_count() + x.d_exp as u64) as usize
    }

    pub fn from_index(&self, i: usize) -> Element {
        let nd = self.d_count() as usize;
        let d = i % nd;
        let rest = i / nd;
        let c = rest % 5;
        let lin = (rest / 5) as u64;
        let r2 = self.second_coord_range();
        Element::new([lin / r2, lin % r2], c as u64, d as u64)
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.expected_order as usize).map(|i| self.from_index(i))
    }

    // ---- arithmetic ------------------------------------------------------

    #[inline]
    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        let m = self.p_part_modulus;
        let mut u = y.p();
        if x.d_exp == 1 {
            let w = self.twist_sums[y.c_exp as usize];
            u = [(m - u[0] + w[0]) % m, (m - u[1] + w[1]) % m];
        }
        let cu = self.c_pows[x.c_exp as usize].apply(u, m);
        let r2 = self.second_coord_range();
        Element {
            pvec: [
                ((x.pvec[0] as u64 + cu[0]) % m) as u32,
                ((x.pvec[1] as u64 + cu[1]) % r2) as u32,
            ],
            c_exp: (x.c_exp + y.c_exp) % 5,
            d_exp: x.d_exp ^ y.d_exp,
        }
    }

    pub fn mul_all(&self, xs: &[Element]) -> Element {
        xs.iter()
            .fold(Element::IDENTITY, |acc, x| self.mul(&acc, x))
    }

    pub fn inv(&self, x: &Element) -> Element {
        let m = self.p_part_modulus;
        let d = Element::new([0, 0], 0, x.d_exp as u64);
        let c = Element::new([0, 0], (5 - x.c_exp as u64) % 5, 0);
        let u = x.p();
        let neg_u = Element::new([(m - u[0]) % m, (m - u[1]) % m], 0, 0);
        self.mul(&self.mul(&d, &c), &neg_u)
    }

    /// `x^n` for any integer `n`.
    pub fn pow(&self, x: &Element, n: i64) -> Element {
        let (mut base, mut e) = if n < 0 {
            (self.inv(x), n.unsigned_abs())
        } else {
            (*x, n as u64)
        };
        let mut acc = Element::IDENTITY;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn conj(&self, g: &Element, x: &Element) -> Element {
        self.mul(&self.mul(g, x), &self.inv(g))
    }

    pub fn commutator(&self, x: &Element, y: &Element) -> Element {
        self.mul(&self.mul(&self.mul(x, y), &self.inv(x)), &self.inv(y))
    }

    /// Multiplicative order, via the quotient by the `p`-part.
    #[inline]
    pub fn order(&self, x: &Element) -> u64 {
        let qo = match (x.c_exp != 0, x.d_exp != 0) {
            (false, false) => 1,
            (true, false) => 5,
            (false, true) => 2,
            (true, true) => 10,
        };
        let y = self.pow(x, qo as i64);
        debug_assert!(y.in_p_part());
        let p = self.params.p;
        let po = if y.pvec == [0, 0] {
            1
        } else if self.p_part_rank == 2 || (y.pvec[0] as u64).is_multiple_of(p) {
            p
        } else {
            p * p
        };
        qo * po
    }

    // ---- subgroups -------------------------------------------------------

    /// Breadth-first closure of `gens` under multiplication.
    pub fn closure(&self, gens: &[Element]) -> Subgroup {
        let mut seen = vec![false; self.expected_order as usize];
        let mut elements = vec![Element::IDENTITY];
        seen[self.index(&Element::IDENTITY)] = true;
        let mut head = 0;
        while head < elements.len() {
            let x = elements[head];
            head += 1;
            for g in gens {
                let y = self.mul(&x, g);
                let i = self.index(&y);
                if !seen[i] {
                    seen[i] = true;
                    elements.push(y);
                }
            }
        }
        elements.sort_unstable();
        Subgroup {
            order: elements.len() as u64,
            elements,
        }
    }

    /// Order of `⟨gens⟩` via Schreier generators of its intersection with
    /// the `p`-part.
    pub fn subgroup_order(&self, gens: &[Element]) -> u64 {
        let (cosets, span) = self.schreier(gens);
        cosets as u64 * span
    }

    /// Whether `gens` generate the whole group.
    #[inline]
    pub fn generates(&self, gens: &[Element]) -> bool {
        let (cosets, span) = self.schreier(gens);
        cosets == self.quotient_order() && span == self.p_part_order()
    }

    /// Returns (number of `p`-part cosets reached, order of `⟨gens⟩ ∩ P`).
    fn schreier(&self, gens: &[Element]) -> (usize, u64) {
        let key = |x: &Element| x.c_exp as usize * 2 + x.d_exp as usize;
        let mut reps: [Option<Element>; 10] = [None; 10];
        let mut queue = [Element::IDENTITY; 10];
        reps[0] = Some(Element::IDENTITY);
        let (mut head, mut tail) = (0, 1);
        let mut span = PSpan::new(self);
        while head < tail {
            let t = queue[head];
            head += 1;
            for g in gens {
                let tg = self.mul(&t, g);
                let k = key(&tg);
                match reps[k] {
                    None => {
                        reps[k] = Some(tg);
                        queue[tail] = tg;
                        tail += 1;
                    }
                    Some(r) => {
                        if !span.is_full() {
                            let s = self.mul(&tg, &self.inv(&r));
                            span.add(s.p());
                        }
                    }
                }
            }
        }
        (tail, span.order())
    }

    /// Elements commuting with every generator.
    pub fn center(&self) -> Vec<Element> {
        let gens = self.generators();
        self.elements()
            .filter(|x| gens.iter().all(|g| self.mul(x, g) == self.mul(g, x)))
            .collect()
    }

    pub fn elements_of_order(&self, n: u64) -> Vec<Element> {
        self.elements().filter(|x| self.order(x) == n).collect()
    }

    /// Map from element order to number of elements of that order.
    pub fn order_census(&self) -> BTreeMap<u64, u64> {
        let mut census = BTreeMap::new();
        for x in self.elements() {
            *census.entry(self.order(&x)).or_insert(0) += 1;
        }
        census
    }

    /// Conjugation action of `x`'s `c`-exponent on the `p`-part.
    pub fn p_action(&self, x: &Element) -> Mat2 {
        self.c_pows[x.c_exp as usize]
    }

    /// Renders an element as a word in the family's published letters.
    pub fn word(&self, x: &Element) -> String {
        let letters = self.family.letters();
        let exps = self.exponent_tuple(x);
        let mut out = String::new();
        for (l, e) in letters.iter().zip(&exps) {
            match e {
                0 => {}
                1 => out.push_str(l),
                e => out.push_str(&format!("{l}^{e}")),
            }
        }
        if out.is_empty() {
            out.push('1');
        }
        out
    }

    /// Exponents in slot order `a, [b], c, [d]`.
    pub fn exponent_tuple(&self, x: &Element) -> Vec<u64> {
        let mut v = vec![x.pvec[0] as u64];
        if self.p_part_rank == 2 {
            v.push(x.pvec[1] as u64);
        }
        v.push(x.c_exp as u64);
        if self.d_present {
            v.push(x.d_exp as u64);
        }
        v
    }

    pub fn from_exponent_tuple(&self, t: &[u64]) -> Result<Element> {
        let want = self.p_part_rank + 1 + usize::from(self.d_present);
        if t.len() != want {
            return Err(Error::Report(format!(
                "{}: expected {want} exponents, got {}",
                self.family,
                t.len()
            )));
        }
        let (pv, rest) = t.split_at(self.p_part_rank);
        let x = Element::new(
            [pv[0], pv.get(1).copied().unwrap_or(0)],
            rest[0],
            rest.get(1).copied().unwrap_or(0),
        );
        let in_range = pv.iter().all(|&e| e < self.p_part_modulus) && rest[0] < 5;
        if !in_range || !self.contains(&x) {
            return Err(Error::Report(format!(
                "{}: exponents {t:?} out of range",
                self.family
            )));
        }
        Ok(x)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    pub elements: Vec<Element>,
    pub order: u64,
}

/// Running span of vectors inside the `p`-part.
struct PSpan {
    p: u64,
    modulus: u64,
    rank: usize,
    basis: Vec<[u64; 2]>,
    /// Rank 1: smallest `p`-adic valuation seen (2 means nothing nonzero).
    valuation: u32,
}

impl PSpan {
    fn new(g: &GroupSpec) -> Self {
        PSpan {
            p: g.params.p,
            modulus: g.p_part_modulus,
            rank: g.p_part_rank,
            basis: Vec::with_capacity(2),
            valuation: 2,
        }
    }

    fn is_full(&self) -> bool {
        if self.rank == 1 {
            self.valuation == 0
        } else {
            self.basis.len() == 2
        }
    }

    fn add(&mut self, v: [u64; 2]) {
        if self.rank == 1 {
            let x = v[0] % self.modulus;
            let val = if x == 0 {
                2
            } else if x.is_multiple_of(self.p) {
                1
            } else {
                0
            };
            self.valuation = self.valuation.min(val);
            return;
        }
        if v == [0, 0] {
            return;
        }
        match self.basis.first() {
            None => self.basis.push(v),
            Some(&b) => {
                let det = Mat2::from_columns(b, v).det(self.p);
                if det != 0 {
                    self.basis.push(v);
                }
            }
        }
    }

    fn order(&self) -> u64 {
        if self.rank == 1 {
            self.p.pow(2 - self.valuation)
        } else {
            self.p.pow(self.basis.len() as u32)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modarith::derive_params;

    fn group(p: u64, f: FamilyTag) -> GroupSpec {
        build_group(&derive_params(p).unwrap(), f).unwrap()
    }

    #[test]
    fn build_examples() {
        let g = group(19, FamilyTag::G0);
        assert_eq!(g.c_action, CAction::Matrix(Mat2([[0, 4], [14, 4]])));
        assert_eq!(g.group_order(), 1805);

        let g = group(11, FamilyTag::HatGss2);
        assert_eq!(g.c_action, CAction::Matrix(Mat2::diag(3, 9)));
        // (1 − 3, 1 − 9) = (−2, −8)
        assert_eq!(g.d_twist, [9, 3]);
        assert_eq!(g.group_order(), 1210);

        let err = build_group(&derive_params(13).unwrap(), FamilyTag::G1).unwrap_err();
        assert!(matches!(err, Error::InadmissibleFamily { .. }));
        assert!(build_group(&derive_params(11).unwrap(), FamilyTag::G0).is_err());
        assert!(build_group(&derive_params(19).unwrap(), FamilyTag::HatGss4).is_err());
    }

    #[test]
    fn rewriting_examples() {
        let g = group(11, FamilyTag::HatGss2);
        let c = g.c();
        // c a c⁻¹ = a^s
        assert_eq!(g.conj(&c, &g.a()), g.pow(&g.a(), 3));

        let g = group(19, FamilyTag::HatG0);
        let d = g.d().unwrap();
        let dcd = g.mul_all(&[d, g.c(), d]);
        // t1² = 16 mod 19
        assert_eq!(dcd, g.element([16, 2], 1, 0));
        assert_eq!(g.mul(&g.identity(), &dcd), dcd);
    }

    #[test]
    fn index_roundtrip_and_order() {
        for (p, f) in [
            (11, FamilyTag::HatG1),
            (11, FamilyTag::Guv(UvPair::SS2)),
            (19, FamilyTag::HatG0),
        ] {
            let g = group(p, f);
            let mut prev = None;
            for (i, x) in g.elements().enumerate() {
                assert_eq!(g.index(&x), i);
                assert!(g.contains(&x));
                if let Some(q) = prev {
                    assert!(q < x);
                }
                prev = Some(x);
            }
        }
    }

    #[test]
    fn fast_order_matches_naive() {
        for (p, f) in [
            (11, FamilyTag::HatG1),
            (11, FamilyTag::Guv(UvPair::OneS)),
            (11, FamilyTag::HatGss4),
            (19, FamilyTag::HatG0),
        ] {
            let g = group(p, f);
            for x in g.elements() {
                let mut y = x;
                let mut n = 1;
                while y != Element::IDENTITY {
                    y = g.mul(&y, &x);
                    n += 1;
                }
                assert_eq!(g.order(&x), n, "{f} {x:?}");
                assert_eq!(g.group_order() % n, 0);
            }
        }
    }

    #[test]
    fn order_examples() {
        let g = group(11, FamilyTag::Guv(UvPair::SS2));
        assert_eq!(g.order(&g.identity()), 1);
        for x in g.elements().filter(|x| x.c_exp != 0) {
            assert_eq!(g.order(&x), 5);
        }
        for f in [FamilyTag::HatGss2, FamilyTag::HatGss4] {
            let g = group(11, f);
            for x in g.elements().filter(|x| x.c_exp == 0 && x.d_exp == 1) {
                assert_eq!(g.order(&x), 2);
            }
        }
    }

    #[test]
    fn closure_examples() {
        let g = group(11, FamilyTag::Guv(UvPair::SS2));
        assert_eq!(g.closure(&[g.a(), g.b().unwrap()]).order, 121);

        let g = group(11, FamilyTag::Guv(UvPair::SS));
        let ab = g.mul(&g.a(), &g.b().unwrap());
        assert_eq!(g.closure(&[ab, g.c()]).order, 55);
        assert_eq!(g.subgroup_order(&[ab, g.c()]), 55);
        assert!(!g.generates(&[ab, g.c()]));

        let g = group(19, FamilyTag::HatG0);
        assert_eq!(g.closure(&g.generators()).order, 3610);
        assert!(g.generates(&g.generators()));
    }

    #[test]
    fn schreier_order_matches_closure() {
        let g = group(11, FamilyTag::HatG1);
        let some: Vec<Element> = g.elements().step_by(97).collect();
        for x in &some {
            for y in &some {
                assert_eq!(g.subgroup_order(&[*x, *y]), g.closure(&[*x, *y]).order);
            }
        }
        let g = group(11, FamilyTag::HatGss4);
        let some: Vec<Element> = g.elements().step_by(83).collect();
        for x in &some {
            for y in &some {
                assert_eq!(g.subgroup_order(&[*x, *y]), g.closure(&[*x, *y]).order);
            }
        }
    }

    #[test]
    fn centers() {
        assert_eq!(
            group(11, FamilyTag::HatGss2).center(),
            vec![Element::IDENTITY]
        );
        assert_eq!(
            group(19, FamilyTag::HatG0).center(),
            vec![Element::IDENTITY]
        );
        // a^l is central in G1 iff k·l ≡ l mod p²; k − 1 is a unit, so only l = 0.
        let g = group(11, FamilyTag::G1);
        let k = g.params.k.unwrap();
        let oracle: Vec<Element> = (0..121u64)
            .filter(|l| (k * l) % 121 == *l)
            .map(|l| g.p_element([l, 0]))
            .collect();
        assert_eq!(g.center(), oracle);
    }

    #[test]
    fn order_counts() {
        let g = group(11, FamilyTag::Guv(UvPair::SS2));
        assert_eq!(g.elements_of_order(5).len(), 484);
        let g = group(11, FamilyTag::HatGss4);
        assert_eq!(g.elements_of_order(2).len(), 121);

        // Brute-force census in G_{1,s}: every order-5 element has zero a-exponent.
        let g = group(11, FamilyTag::Guv(UvPair::OneS));
        let order5 = g.elements_of_order(5);
        assert_eq!(order5.len(), 44);
        assert!(order5.iter().all(|x| x.pvec[0] == 0));
    }

    #[test]
    fn c_action_invariants() {
        for (p, f) in [
            (11, FamilyTag::HatGss2),
            (19, FamilyTag::G0),
            (29, FamilyTag::HatG0),
        ] {
            let g = group(p, f);
            assert_eq!(g.c_power(1).pow(5, g.p_part_modulus), Mat2::IDENTITY);
            assert_ne!(g.c_power(1), Mat2::IDENTITY);
        }
        for p in [19, 29, 59] {
            let g = group(p, FamilyTag::G0);
            let (t1, _) = g.params.golden().unwrap();
            let c = g.c_power(1);
            // characteristic polynomial λ² − t1 λ + 1
            assert_eq!(c.trace(p), t1);
            assert_eq!(c.det(p), 1);
        }
    }

    #[test]
    fn d_inverts_p_part() {
        for (p, f) in [
            (11, FamilyTag::HatG1),
            (11, FamilyTag::HatGss2),
            (19, FamilyTag::HatG0),
        ] {
            let g = group(p, f);
            let d = g.d().unwrap();
            for x in g.elements().filter(Element::in_p_part) {
                assert_eq!(g.conj(&d, &x), g.inv(&x));
            }
        }
    }

    #[test]
    fn words_use_published_letters() {
        let g = group(11, FamilyTag::HatG1);
        // slot c is the published b, slot d the published c
        assert_eq!(g.word(&g.element([1, 0], 2, 1)), "ab^2c");
        let g = group(11, FamilyTag::HatGss2);
        assert_eq!(g.word(&g.element([1, 1], 3, 0)), "abc^3");
        assert_eq!(g.word(&g.identity()), "1");
        let t = g.exponent_tuple(&g.element([4, 5], 3, 1));
        assert_eq!(t, vec![4, 5, 3, 1]);
        assert_eq!(g.from_exponent_tuple(&t).unwrap(), g.element([4, 5], 3, 1));
        assert!(g.from_exponent_tuple(&[11, 0, 0, 0]).is_err());
        assert!(g.from_exponent_tuple(&[1, 0, 0]).is_err());
    }

    #[test]
    fn tags_parse() {
        for t in FamilyTag::ALL {
            assert_eq!(t.as_str().parse::<FamilyTag>().unwrap(), t);
        }
        assert!("G7".parse::<FamilyTag>().is_err());
    }
}
