//! Automorphism groups, orbit classification of skes, chirality.

use std::collections::HashSet;

use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::epi::{mirror, Ske};
use crate::error::{Error, Result};
use crate::grp::mat::{nullspace_mod_p, Mat2};
use crate::grp::{relations, Gen, Relation};
use crate::grp::{CAction, Element, FamilyTag, GroupSpec};
use crate::modarith::{inv_mod, pow_mod};

/// Largest group order for which [`automorphisms`] materializes `Aut(G)`.
///
/// Large enough for every family at `p ≤ 31` (the extension of `G0` at
/// `p = 31` has order 9610).
pub const AUTOMORPHISM_BUDGET: u64 = 10_000;

/// An automorphism, stored by its generator images plus enough cached
/// data to apply it in constant time.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupAutomorphism {
    images: Vec<Element>,
    linear: Mat2,
    c_pows: [Element; 5],
    d_image: Option<Element>,
}

impl GroupAutomorphism {
    /// Builds the map from generator images in slot order `a, [b], c, [d]`.
    ///
    /// The images of `a` and `b` must lie in the `p`-part; the map is not
    /// checked to be an automorphism (see [`GroupAutomorphism::verify`]).
    pub fn from_images(g: &GroupSpec, images: Vec<Element>) -> Result<Self> {
        let want = g.generators().len();
        if images.len() != want || !images.iter().all(|x| g.contains(x)) {
            return Err(Error::Precondition(format!(
                "{}: need {want} generator images in the group",
                g.family
            )));
        }
        let rank = g.p_part_rank;
        if !images[..rank].iter().all(Element::in_p_part) {
            return Err(Error::Precondition(
                "p-part generators must map into the p-part".into(),
            ));
        }
        let linear = if rank == 2 {
            Mat2::from_columns(images[0].p(), images[1].p())
        } else {
            Mat2::from_columns(images[0].p(), [0, 0])
        };
        let c_img = images[rank];
        let c_pows = std::array::from_fn(|i| g.pow(&c_img, i as i64));
        let d_image = g.d_present.then(|| images[rank + 1]);
        Ok(GroupAutomorphism {
            images,
            linear,
            c_pows,
            d_image,
        })
    }

    pub fn identity(g: &GroupSpec) -> Self {
        Self::from_images(g, g.generators()).expect("generators are valid images")
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    /// The induced linear map on the `p`-part.
    pub fn linear(&self) -> Mat2 {
        self.linear
    }

    #[inline]
    pub fn apply(&self, g: &GroupSpec, x: &Element) -> Element {
        let u = self.linear.apply(x.p(), g.p_part_modulus);
        let mut y = g.mul(&g.p_element(u), &self.c_pows[x.c_exp as usize]);
        if x.d_exp == 1 {
            y = g.mul(&y, &self.d_image.expect("d-slot image"));
        }
        y
    }

    /// `self ∘ other`.
    pub fn compose(&self, g: &GroupSpec, other: &Self) -> Self {
        let images = other.images.iter().map(|y| self.apply(g, y)).collect();
        Self::from_images(g, images).expect("composition of valid maps")
    }

    /// Dense key: the indices of the generator images.
    pub fn key(&self, g: &GroupSpec) -> Vec<u32> {
        self.images.iter().map(|x| g.index(x) as u32).collect()
    }

    /// Checks every defining relation on the images and that they generate.
    pub fn verify(&self, g: &GroupSpec, rels: &[Relation]) -> bool {
        satisfies(g, rels, &self.images) && g.generates(&self.images)
    }
}

fn slot_of(g: &GroupSpec, x: Gen) -> Option<usize> {
    let r = g.p_part_rank;
    match x {
        Gen::A => Some(0),
        Gen::B => (r == 2).then_some(1),
        Gen::C => Some(r),
        Gen::D => g.d_present.then_some(r + 1),
    }
}

fn satisfies(g: &GroupSpec, rels: &[Relation], images: &[Element]) -> bool {
    let img = |x: Gen| slot_of(g, x).and_then(|i| images.get(i).copied());
    rels.iter().all(|r| r.holds(g, &img) == Some(true))
}

/// The full automorphism group of `g`, sorted by generator-image key.
///
/// The image of `c` runs over elements of order 5; with `C^t` its action on
/// the `p`-part, the linear part `M` solves `M·C = C^t·M`. When `d` is
/// present its image `u·d` is forced by `d c d = v c`, which is linear in
/// `u`. Every candidate is checked against the defining relations.
pub fn automorphisms(g: &GroupSpec) -> Result<Vec<GroupAutomorphism>> {
    automorphisms_with_budget(g, AUTOMORPHISM_BUDGET)
}

pub fn automorphisms_with_budget(g: &GroupSpec, budget: u64) -> Result<Vec<GroupAutomorphism>> {
    if g.group_order() > budget {
        return Err(Error::OverBudget {
            order: g.group_order(),
            budget,
        });
    }
    let rels = relations(&g.params, g.family)?;
    let c_images: Vec<Element> = g
        .elements()
        .filter(|x| x.d_exp == 0 && g.order(x) == 5)
        .collect();
    let mut out: Vec<GroupAutomorphism> = c_images
        .par_iter()
        .flat_map_iter(|cimg| {
            linear_parts(g, cimg)
                .into_iter()
                .filter_map(|m| candidate(g, &m, *cimg))
                .filter(|phi| phi.verify(g, &rels))
                .collect::<Vec<_>>()
        })
        .collect();
    out.par_sort_by_cached_key(|phi| phi.key(g));
    Ok(out)
}

/// Invertible `M` with `M·C = C^t·M`, where `C^t` is the action of `cimg`.
fn linear_parts(g: &GroupSpec, cimg: &Element) -> Vec<Mat2> {
    let p = g.p();
    match g.c_action {
        CAction::Scalar(k) => {
            let m = g.p_part_modulus;
            if pow_mod(k, cimg.c_exp as u64, m) != k {
                return Vec::new();
            }
            (1..m)
                .filter(|x| x % p != 0)
                .map(|x| Mat2::from_columns([x, 0], [0, 0]))
                .collect()
        }
        CAction::Matrix(c) => {
            let ct = g.p_action(cimg);
            // unknowns m00, m01, m10, m11; equation (i, j) of M·C − Cᵗ·M = 0
            let mut rows = Vec::with_capacity(4);
            for i in 0..2 {
                for j in 0..2 {
                    let mut row = vec![0u64; 4];
                    for r in 0..2 {
                        for s in 0..2 {
                            let mut coef = 0i64;
                            if r == i {
                                coef += c.0[s][j] as i64;
                            }
                            if s == j {
                                coef -= ct.0[i][r] as i64;
                            }
                            row[2 * r + s] = coef.rem_euclid(p as i64) as u64;
                        }
                    }
                    rows.push(row);
                }
            }
            let basis = nullspace_mod_p(rows, p);
            let total = p.pow(basis.len() as u32);
            let mut out = Vec::new();
            for mut code in 0..total {
                let mut m = [0u64; 4];
                for v in &basis {
                    let coef = code % p;
                    code /= p;
                    for (mi, vi) in m.iter_mut().zip(v) {
                        *mi = (*mi + coef * vi) % p;
                    }
                }
                let mat = Mat2([[m[0], m[1]], [m[2], m[3]]]);
                if mat.det(p) != 0 {
                    out.push(mat);
                }
            }
            out
        }
    }
}

/// Completes a linear part and `c`-image to a full generator assignment.
fn candidate(g: &GroupSpec, m: &Mat2, cimg: Element) -> Option<GroupAutomorphism> {
    let modulus = g.p_part_modulus;
    let mut images = vec![g.p_element(m.column(0))];
    if g.p_part_rank == 2 {
        images.push(g.p_element(m.column(1)));
    }
    images.push(cimg);
    if let Some(d) = g.d() {
        // want (u d) cimg (u d) = Φ(v) cimg, i.e. (I − Cᵗ) u = T − X₀ on the p-part
        let x0 = g.mul_all(&[d, cimg, d]);
        let t = g.mul(&g.p_element(m.apply(g.d_twist, modulus)), &cimg);
        if x0.c_exp != t.c_exp {
            return None;
        }
        let rhs = [
            (t.p()[0] + modulus - x0.p()[0]) % modulus,
            (t.p()[1] + modulus - x0.p()[1]) % modulus,
        ];
        let ct = g.p_action(&cimg);
        let u = match g.c_action {
            CAction::Scalar(_) => {
                let f = (1 + modulus - ct.0[0][0]) % modulus;
                [rhs[0] * inv_mod(f, modulus).ok()? % modulus, 0]
            }
            CAction::Matrix(_) => Mat2::IDENTITY
                .sub(&ct, modulus)
                .inverse(modulus)?
                .apply(rhs, modulus),
        };
        images.push(Element::new(u, 0, 1));
    }
    GroupAutomorphism::from_images(g, images).ok()
}

/// Greedy generating set of the group formed by `auts`.
pub fn generating_set(g: &GroupSpec, auts: &[GroupAutomorphism]) -> Vec<GroupAutomorphism> {
    let id = GroupAutomorphism::identity(g);
    let mut seen: HashSet<Vec<u32>> = HashSet::from([id.key(g)]);
    let mut members = vec![id];
    let mut gens: Vec<GroupAutomorphism> = Vec::new();
    for phi in auts {
        if seen.len() == auts.len() {
            break;
        }
        if seen.contains(&phi.key(g)) {
            continue;
        }
        gens.push(phi.clone());
        // old members were closed under the old generators; only the new
        // one needs applying to them, new members need all generators
        let old = members.len();
        let mut i = 0;
        while i < members.len() {
            let from = if i < old { gens.len() - 1 } else { 0 };
            for s in &gens[from..] {
                let y = s.compose(g, &members[i]);
                if seen.insert(y.key(g)) {
                    members.push(y);
                }
            }
            i += 1;
        }
    }
    gens
}

/// Checks that `auts` is a group: it contains the identity, `s ∘ φ` stays
/// in the list for every member `φ` and every `s` of a generating set, and
/// that generating set spans exactly `|auts|` elements.
pub fn is_closed_under_composition(g: &GroupSpec, auts: &[GroupAutomorphism]) -> bool {
    let keys: HashSet<Vec<u32>> = auts.iter().map(|a| a.key(g)).collect();
    if keys.len() != auts.len() || !keys.contains(&GroupAutomorphism::identity(g).key(g)) {
        return false;
    }
    let gens = generating_set(g, auts);
    let stable = auts.par_iter().all(|phi| {
        gens.iter()
            .all(|s| keys.contains(&s.compose(g, phi).key(g)))
    });
    if !stable {
        return false;
    }
    let id = GroupAutomorphism::identity(g);
    let mut seen: HashSet<Vec<u32>> = HashSet::from([id.key(g)]);
    let mut queue = vec![id];
    while let Some(x) = queue.pop() {
        for s in &gens {
            let y = s.compose(g, &x);
            if seen.insert(y.key(g)) {
                queue.push(y);
            }
        }
    }
    seen.len() == auts.len()
}

/// Dense lookup from `(g₁, g₂)` to a position in a sorted ske list.
#[derive(Debug, Clone)]
pub struct SkeIndex {
    first: Vec<u32>,
    second: Vec<u32>,
    width: usize,
    table: Vec<u32>,
}

impl SkeIndex {
    pub fn new(g: &GroupSpec, skes: &[Ske]) -> Self {
        let n = g.group_order() as usize;
        let mut first = vec![u32::MAX; n];
        let mut second = vec![u32::MAX; n];
        let (mut n1, mut n2) = (0u32, 0u32);
        for k in skes {
            let i = g.index(&k.triple[0]);
            if first[i] == u32::MAX {
                first[i] = n1;
                n1 += 1;
            }
            let j = g.index(&k.triple[1]);
            if second[j] == u32::MAX {
                second[j] = n2;
                n2 += 1;
            }
        }
        let width = n2 as usize;
        let mut table = vec![u32::MAX; n1 as usize * width];
        for (pos, k) in skes.iter().enumerate() {
            let a = first[g.index(&k.triple[0])] as usize;
            let b = second[g.index(&k.triple[1])] as usize;
            table[a * width + b] = pos as u32;
        }
        SkeIndex {
            first,
            second,
            width,
            table,
        }
    }

    pub fn lookup(&self, g: &GroupSpec, g1: &Element, g2: &Element) -> Option<usize> {
        let a = *self.first.get(g.index(g1))?;
        let b = *self.second.get(g.index(g2))?;
        if a == u32::MAX || b == u32::MAX {
            return None;
        }
        let pos = self.table[a as usize * self.width + b as usize];
        (pos != u32::MAX).then_some(pos as usize)
    }
}

/// Image of a ske under an automorphism.
pub fn apply_to_ske(g: &GroupSpec, phi: &GroupAutomorphism, k: &Ske) -> Ske {
    Ske {
        triple: k.triple.map(|x| phi.apply(g, &x)),
        periods: k.periods,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Chirality {
    Reflexive,
    Chiral { partner: usize },
}

/// One `Aut(G)`-orbit of skes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeClass {
    pub id: usize,
    pub family: FamilyTag,
    /// Lexicographically least triple of the orbit.
    pub representative: Ske,
    pub orbit_size: u64,
    pub chirality: Option<Chirality>,
    pub surface_id: Option<usize>,
}

/// Partition of a ske list into orbits.
#[derive(Debug, Clone)]
pub struct Classification {
    pub skes: Vec<Ske>,
    pub class_of: Vec<usize>,
    pub classes: Vec<SkeClass>,
    pub index: SkeIndex,
}

impl Classification {
    pub fn class_of_ske(&self, g: &GroupSpec, k: &Ske) -> Option<usize> {
        self.index
            .lookup(g, &k.triple[0], &k.triple[1])
            .map(|i| self.class_of[i])
    }
}

/// Orbits of `skes` (sorted, closed under `Aut(G)`) under the group generated
/// by `gens`, via union-find.
pub fn orbit_classify(
    g: &GroupSpec,
    skes: Vec<Ske>,
    gens: &[GroupAutomorphism],
) -> Result<Classification> {
    if !skes.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::Precondition(
            "ske list must be sorted and distinct".into(),
        ));
    }
    let index = SkeIndex::new(g, &skes);
    let mut uf = UnionFind::<usize>::new(skes.len());
    for (i, k) in skes.iter().enumerate() {
        for phi in gens {
            let img = apply_to_ske(g, phi, k);
            let j = index
                .lookup(g, &img.triple[0], &img.triple[1])
                .ok_or_else(|| {
                    Error::InternalConsistency(format!(
                        "{}: ske list not closed under automorphisms",
                        g.family
                    ))
                })?;
            uf.union(i, j);
        }
    }
    let labels = uf.into_labeling();
    // class ids in order of least member, which is the least triple
    let mut root_to_class = vec![usize::MAX; skes.len()];
    let mut classes: Vec<SkeClass> = Vec::new();
    let mut class_of = Vec::with_capacity(skes.len());
    for (i, &root) in labels.iter().enumerate() {
        if root_to_class[root] == usize::MAX {
            root_to_class[root] = classes.len();
            classes.push(SkeClass {
                id: classes.len(),
                family: g.family,
                representative: skes[i],
                orbit_size: 0,
                chirality: None,
                surface_id: None,
            });
        }
        let c = root_to_class[root];
        classes[c].orbit_size += 1;
        class_of.push(c);
    }
    Ok(Classification {
        skes,
        class_of,
        classes,
        index,
    })
}

/// Orbit data computed by applying every automorphism to one ske per orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitSweep {
    pub class_of: Vec<usize>,
    pub orbit_sizes: Vec<u64>,
    pub stabilizer_sizes: Vec<u64>,
}

/// Independent orbit computation over the full automorphism list.
pub fn orbit_sweep(g: &GroupSpec, skes: &[Ske], auts: &[GroupAutomorphism]) -> Result<OrbitSweep> {
    let index = SkeIndex::new(g, skes);
    let mut class_of = vec![usize::MAX; skes.len()];
    let mut orbit_sizes = Vec::new();
    let mut stabilizer_sizes = Vec::new();
    for i in 0..skes.len() {
        if class_of[i] != usize::MAX {
            continue;
        }
        let c = orbit_sizes.len();
        let mut size = 0u64;
        let mut stab = 0u64;
        for phi in auts {
            let img = apply_to_ske(g, phi, &skes[i]);
            let j = index
                .lookup(g, &img.triple[0], &img.triple[1])
                .ok_or_else(|| Error::InternalConsistency("image ske missing".into()))?;
            if j == i {
                stab += 1;
            }
            if class_of[j] == usize::MAX {
                class_of[j] = c;
                size += 1;
            }
        }
        orbit_sizes.push(size);
        stabilizer_sizes.push(stab);
    }
    Ok(OrbitSweep {
        class_of,
        orbit_sizes,
        stabilizer_sizes,
    })
}

/// Locates the class of `mirror(representative)`.
pub fn chirality(g: &GroupSpec, class: &SkeClass, cl: &Classification) -> Result<Chirality> {
    let m = mirror(g, &class.representative);
    let other = cl.class_of_ske(g, &m).ok_or_else(|| {
        Error::InternalConsistency(format!(
            "{}: mirror of class {} not found",
            g.family, class.id
        ))
    })?;
    Ok(if other == class.id {
        Chirality::Reflexive
    } else {
        Chirality::Chiral { partner: other }
    })
}

/// Fills in chirality for every class and checks the partnering is a
/// perfect matching.
pub fn assign_chirality(g: &GroupSpec, cl: &mut Classification) -> Result<()> {
    let verdicts: Vec<Chirality> = cl
        .classes
        .iter()
        .map(|c| chirality(g, c, cl))
        .collect::<Result<_>>()?;
    for (i, v) in verdicts.iter().enumerate() {
        if let Chirality::Chiral { partner } = *v {
            if verdicts[partner] != (Chirality::Chiral { partner: i }) {
                return Err(Error::InternalConsistency(format!(
                    "{}: mirror partnering of class {i} is not symmetric",
                    g.family
                )));
            }
        }
    }
    for (c, v) in cl.classes.iter_mut().zip(verdicts) {
        c.chirality = Some(v);
    }
    Ok(())
}

/// Constants used when reasoning about `(2,5,10)`-skes on an extension
/// family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalizationData {
    pub family: FamilyTag,
    pub p: u64,
    /// Inverse of 2 mod `p`.
    pub delta: u64,
    /// `(x_l, y_l) = δ · Σ_{i<l} Cⁱ v` for `l = 1..4`: the `p`-part `u` with
    /// `d·u c^l·d = u c^l`.
    pub fixed_points: [[u64; 2]; 4],
    /// `(t1, t2)` for the `G0` extension.
    pub golden: Option<(u64, u64)>,
}

impl CanonicalizationData {
    pub fn new(g: &GroupSpec) -> Result<Self> {
        if !g.d_present {
            return Err(Error::Precondition(format!(
                "{} has no d generator",
                g.family
            )));
        }
        let p = g.p();
        let delta = g.params.delta;
        let m = g.p_part_modulus;
        let d_mod = inv_mod(2, m)?;
        let fixed_points = std::array::from_fn(|i| {
            let w = g.twist_sum(i as u64 + 1);
            [w[0] * d_mod % m, w[1] * d_mod % m]
        });
        let golden = (g.family == FamilyTag::HatG0)
            .then(|| g.params.golden())
            .transpose()?;
        Ok(CanonicalizationData {
            family: g.family,
            p,
            delta,
            fixed_points,
            golden,
        })
    }

    /// The matrix `M_{α,β,l}` over `𝔽_p`, `l ∈ {1, 2}`.
    pub fn criterion_matrix(&self, alpha: u64, beta: u64, l: u64) -> Result<Mat2> {
        let (t1, t2) = self.golden.ok_or_else(|| {
            Error::Precondition("criterion matrices need the G0 extension".into())
        })?;
        let p = self.p as i64;
        let r = |x: i64| x.rem_euclid(p) as u64;
        let (a, b, d) = (alpha as i64, beta as i64, self.delta as i64);
        let (t1, t2) = (t1 as i64, t2 as i64);
        let dt1sq = d * t1 % p * t1 % p;
        let at2sq = a * t2 % p * t2 % p;
        match l {
            1 => Ok(Mat2([
                [r(a - dt1sq), r(b - 1)],
                [r(b - 1), r(-at2sq + b - d)],
            ])),
            2 => {
                let off = r(b - 1 - d * t1);
                Ok(Mat2([
                    [r(a - dt1sq - t1), off],
                    [off, r(b - at2sq - d - t2 - d * t1)],
                ]))
            }
            _ => Err(Error::Precondition(format!("l must be 1 or 2, got {l}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeterminantVerdict {
    pub alpha: u64,
    pub beta: u64,
    pub l: u64,
    pub det: u64,
    pub subgroup_order: u64,
    /// `det ≡ 0` implies `⟨a^α b^β c^l, d⟩` is proper.
    pub holds: bool,
}

/// Checks one instance of the determinant criterion on the `G0` extension.
pub fn determinant_check(
    g: &GroupSpec,
    data: &CanonicalizationData,
    alpha: u64,
    beta: u64,
    l: u64,
) -> Result<DeterminantVerdict> {
    if g.family != FamilyTag::HatG0 {
        return Err(Error::Precondition(format!(
            "determinant check applies to HatG0, not {}",
            g.family
        )));
    }
    let det = data.criterion_matrix(alpha, beta, l)?.det(g.p());
    let x = g.element([alpha as i64, beta as i64], l as i64, 0);
    let subgroup_order = g.closure(&[x, g.d().expect("HatG0 has d")]).order;
    Ok(DeterminantVerdict {
        alpha,
        beta,
        l,
        det,
        subgroup_order,
        holds: det != 0 || subgroup_order != g.group_order(),
    })
}

/// Every instance `(α, β, l)` with `l ∈ {1, 2}`.
pub fn determinant_sweep(g: &GroupSpec) -> Result<Vec<DeterminantVerdict>> {
    let data = CanonicalizationData::new(g)?;
    let p = g.p();
    let cases: Vec<(u64, u64, u64)> = (1..=2)
        .flat_map(|l| (0..p).flat_map(move |a| (0..p).map(move |b| (a, b, l))))
        .collect();
    cases
        .par_iter()
        .map(|&(a, b, l)| determinant_check(g, &data, a, b, l))
        .collect()
}
