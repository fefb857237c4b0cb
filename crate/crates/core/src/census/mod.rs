//! The full classification for one prime.

pub mod exclusions;
pub mod forms;
pub mod report;

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aut::{
    assign_chirality, automorphisms, determinant_sweep, generating_set, orbit_classify, Chirality,
    Classification, GroupAutomorphism,
};
use crate::epi::{
    admissible_signatures, embedding_images, enumerate_skes, find_extension, restrict, rh_genus,
    Embedding, GenusOutcome, Signature,
};
use crate::error::{Error, Result};
use crate::grp::{build_group, Element, FamilyTag, GroupSpec, UvPair};
use crate::modarith::derive_params;

pub use exclusions::{verify_signature_exclusions, ExclusionVerdict};
pub use forms::closed_forms;
pub use report::{
    emit_report, write_report, CensusReport, ChiralityLabel, FamilyReport, ReportFormat,
    TheoremCheck,
};

use report::{
    AlternateEmbeddingNote, ExtensionReport, HypermapBlock, HypermapClassReport, MapBlock,
    MapClassReport, TripleReport,
};

#[derive(Debug, Clone, Default)]
pub struct CensusOptions {
    /// Restrict to these families (extension families pull in their base).
    pub families: Option<Vec<FamilyTag>>,
    pub record_timing: bool,
}

/// Expected counts for one family: classes, and surfaces or reflexive maps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Expected {
    pub classes: usize,
    /// Surfaces for hypermap families, reflexive classes for map families.
    pub secondary: usize,
}

/// The classification the census must reproduce.
pub fn expected_counts(family: FamilyTag) -> Expected {
    let e = |classes, secondary| Expected { classes, secondary };
    match family {
        FamilyTag::G1 => e(12, 4),
        FamilyTag::Guv(UvPair::SS2) => e(12, 4),
        FamilyTag::Guv(UvPair::SS4) => e(6, 2),
        FamilyTag::Guv(_) => e(0, 0),
        FamilyTag::G0 => e(6, 2),
        FamilyTag::HatG1 => e(4, 0),
        FamilyTag::HatGss2 => e(4, 0),
        FamilyTag::HatGss4 => e(2, 2),
        FamilyTag::HatG0 => e(2, 2),
    }
}

/// Verdict of the central-involution test on an extension family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HyperellipticityVerdict {
    pub family: FamilyTag,
    pub central_involutions: usize,
    /// `[d, a]`, which is `a⁻²` and hence nontrivial.
    pub witness: String,
    pub non_hyperelliptic: bool,
}

pub fn hyperellipticity_check(g: &GroupSpec) -> Result<HyperellipticityVerdict> {
    let d = g
        .d()
        .ok_or_else(|| Error::Precondition(format!("{} has no involution generator", g.family)))?;
    let central_involutions = g.center().iter().filter(|z| g.order(z) == 2).count();
    let w = g.commutator(&d, &g.a());
    Ok(HyperellipticityVerdict {
        family: g.family,
        central_involutions,
        witness: g.word(&w),
        non_hyperelliptic: central_involutions == 0 && w == g.pow(&g.a(), -2),
    })
}

/// Everything computed for one family.
pub struct FamilyRun {
    pub group: GroupSpec,
    /// Empty when the family has no skes.
    pub auts: Vec<GroupAutomorphism>,
    pub classification: Classification,
    pub signature: Signature,
    pub seconds: f64,
}

pub fn run_family(g: GroupSpec) -> Result<FamilyRun> {
    let start = Instant::now();
    let signature = if g.d_present {
        Signature::triangle([2, 5, 10])
    } else {
        Signature::triangle([5, 5, 5])
    };
    let skes = enumerate_skes(&g, &signature)?;
    // with nothing to classify, skip Aut(G); for G_{s,s} it is all of GL₂(p) × P
    let auts = if skes.is_empty() {
        Vec::new()
    } else {
        automorphisms(&g)?
    };
    let gens = generating_set(&g, &auts);
    let mut classification = orbit_classify(&g, skes, &gens)?;
    if g.d_present {
        assign_chirality(&g, &mut classification)?;
    }
    Ok(FamilyRun {
        group: g,
        auts,
        classification,
        signature,
        seconds: start.elapsed().as_secs_f64(),
    })
}

fn words(g: &GroupSpec, x: &[Element; 3]) -> [String; 3] {
    x.map(|e| g.word(&e))
}

/// Classifies everything for the prime `p`.
pub fn run_census(p: u64, opts: &CensusOptions) -> Result<CensusReport> {
    let start = Instant::now();
    let params = derive_params(p)?;
    if p < 7 {
        return Err(Error::InvalidPrime(p));
    }
    let genus = 1 + p * p;
    let mut wanted: Vec<FamilyTag> = FamilyTag::ALL
        .into_iter()
        .filter(|f| f.required_residue() == params.residue)
        .filter(|f| opts.families.as_ref().is_none_or(|fs| fs.contains(f)))
        .collect();
    let extra: Vec<FamilyTag> = wanted
        .iter()
        .filter(|f| f.is_hat())
        .map(|f| f.base())
        .collect();
    wanted.extend(extra);
    wanted.sort_by_key(|f| FamilyTag::ALL.iter().position(|x| x == f));
    wanted.dedup();

    let groups: Vec<GroupSpec> = wanted
        .iter()
        .map(|&f| build_group(&params, f))
        .collect::<Result<_>>()?;
    let runs: Vec<FamilyRun> = groups
        .into_par_iter()
        .map(run_family)
        .collect::<Result<_>>()?;
    let by_tag: BTreeMap<usize, &FamilyRun> = runs
        .iter()
        .map(|r| {
            (
                FamilyTag::ALL
                    .iter()
                    .position(|x| *x == r.group.family)
                    .unwrap(),
                r,
            )
        })
        .collect();
    let run_of = |f: FamilyTag| {
        by_tag
            .get(&FamilyTag::ALL.iter().position(|x| *x == f).unwrap())
            .copied()
    };

    let mut checks: Vec<TheoremCheck> = Vec::new();
    let mut timing = BTreeMap::new();

    // surfaces: restrict every map class along the three embeddings
    let mut surface_of: BTreeMap<FamilyTag, Vec<Option<usize>>> = BTreeMap::new();
    let mut restrictions_of: BTreeMap<FamilyTag, Vec<Vec<Option<usize>>>> = BTreeMap::new();
    let mut alt = AlternateEmbeddingNote {
        tested_classes: 0,
        product_identity: 0,
        same_surface: 0,
    };
    for hat in runs.iter().filter(|r| r.group.d_present) {
        let Some(base) = run_of(hat.group.family.base()) else {
            continue;
        };
        let (hg, bg) = (&hat.group, &base.group);
        let mut surface = vec![None; base.classification.classes.len()];
        let mut conflict = false;
        let mut rows = Vec::new();
        for class in &hat.classification.classes {
            let mut row = Vec::new();
            for e in Embedding::CYCLIC {
                let r = restrict(hg, bg, &class.representative, e)?;
                let c = base.classification.class_of_ske(bg, &r);
                if let Some(c) = c {
                    conflict |= surface[c].is_some_and(|s| s != class.id);
                    surface[c] = Some(class.id);
                }
                row.push(c);
            }
            alt.tested_classes += 1;
            let t = embedding_images(hg, &class.representative, Embedding::Iota2Alt);
            if hg.mul_all(&t) == Element::IDENTITY {
                alt.product_identity += 1;
                if let Ok(r) = restrict(hg, bg, &class.representative, Embedding::Iota2Alt) {
                    let c = base.classification.class_of_ske(bg, &r);
                    if c.is_some_and(|c| surface[c] == Some(class.id)) {
                        alt.same_surface += 1;
                    }
                }
            }
            rows.push(row);
        }
        let distinct_per_surface = rows
            .iter()
            .all(|r| r.iter().flatten().collect::<BTreeSet<_>>().len() == 3);
        let covered = surface.iter().all(Option::is_some);
        checks.push(TheoremCheck::new(
            format!("restriction_partitions_hypermaps_{}", bg.family),
            true,
            !conflict && distinct_per_surface && covered,
        ));
        surface_of.insert(bg.family, surface);
        restrictions_of.insert(hg.family, rows);
    }

    // extensions of every (5,5,5)-class
    let mut extensions: BTreeMap<FamilyTag, Vec<Option<ExtensionReport>>> = BTreeMap::new();
    for base in runs.iter().filter(|r| !r.group.d_present) {
        let Some(hat_tag) = base.group.family.hat() else {
            continue;
        };
        let Some(hat) = run_of(hat_tag) else { continue };
        let t = Instant::now();
        let found: Vec<Option<ExtensionReport>> = base
            .classification
            .classes
            .par_iter()
            .map(|class| {
                let ext =
                    find_extension(&base.group, &hat.group, &class.representative, &base.auts)?;
                Ok(ext.map(|x| ExtensionReport {
                    family: hat_tag,
                    map_class: hat.classification.class_of_ske(&hat.group, &x.ske),
                    embedding: x.embedding,
                    representative: TripleReport::new(&hat.group, &x.ske),
                    words: words(&hat.group, &x.ske.triple),
                }))
            })
            .collect::<Result<_>>()?;
        timing.insert(
            format!("extensions_{}", base.group.family),
            t.elapsed().as_secs_f64(),
        );
        let surfaces = surface_of.get(&base.group.family);
        let consistent = found.iter().enumerate().all(|(i, e)| {
            e.as_ref().is_some_and(|e| {
                e.map_class.is_some() && surfaces.is_some_and(|s| s[i] == e.map_class)
            })
        });
        checks.push(TheoremCheck::new(
            format!("extension_found_{}", base.group.family),
            base.classification.classes.len(),
            found.iter().filter(|e| e.is_some()).count(),
        ));
        checks.push(TheoremCheck::new(
            format!("extension_matches_surface_{}", base.group.family),
            true,
            consistent,
        ));
        extensions.insert(base.group.family, found);
    }

    let mut families = Vec::new();
    for run in &runs {
        let g = &run.group;
        let f = g.family;
        let cl = &run.classification;
        timing.insert(format!("classify_{f}"), run.seconds);

        let forms = closed_forms(g)?;
        let mut labels: Vec<Vec<String>> = vec![Vec::new(); cl.classes.len()];
        let mut forms_valid = true;
        for (label, k) in &forms {
            if k.validate(g).is_err() {
                forms_valid = false;
                continue;
            }
            match cl.class_of_ske(g, k) {
                Some(c) => labels[c].push(label.clone()),
                None => forms_valid = false,
            }
        }
        let want = expected_counts(f);
        if want.classes > 0 {
            checks.push(TheoremCheck::new(
                format!("closed_forms_cover_{f}"),
                want.classes,
                if forms_valid {
                    labels.iter().filter(|l| !l.is_empty()).count()
                } else {
                    0
                },
            ));
        }
        let aut_order = (!run.auts.is_empty()).then_some(run.auts.len() as u64);
        if let Some(n) = aut_order {
            checks.push(TheoremCheck::new(
                format!("aut_acts_freely_{f}"),
                true,
                cl.classes.iter().all(|c| c.orbit_size == n),
            ));
        }

        let mut fam = FamilyReport {
            tag: f,
            order: g.group_order(),
            aut_order,
            signature: run.signature.to_string(),
            ske_count: cl.skes.len() as u64,
            hypermaps: None,
            maps: None,
        };
        if g.d_present {
            let rows = restrictions_of.get(&f);
            let classes: Vec<MapClassReport> = cl
                .classes
                .iter()
                .map(|c| {
                    let (chirality, partner_id) = match c.chirality {
                        Some(Chirality::Chiral { partner }) => {
                            (ChiralityLabel::Chiral, Some(partner))
                        }
                        _ => (ChiralityLabel::Reflexive, None),
                    };
                    MapClassReport {
                        id: c.id,
                        representative: TripleReport::new(g, &c.representative),
                        words: words(g, &c.representative.triple),
                        orbit_size: c.orbit_size,
                        chirality,
                        partner_id,
                        closed_forms: labels[c.id].clone(),
                        restrictions: rows.map_or_else(Vec::new, |r| r[c.id].clone()),
                    }
                })
                .collect();
            let reflexive = classes
                .iter()
                .filter(|c| c.chirality == ChiralityLabel::Reflexive)
                .count();
            let block = MapBlock {
                class_count: classes.len(),
                reflexive_count: reflexive,
                chiral_pair_count: (classes.len() - reflexive) / 2,
                classes,
            };
            checks.push(TheoremCheck::new(
                format!("maps_{f}"),
                want.classes,
                block.class_count,
            ));
            checks.push(TheoremCheck::new(
                format!("reflexive_maps_{f}"),
                want.secondary,
                block.reflexive_count,
            ));
            checks.push(TheoremCheck::new(
                format!("chiral_pairs_{f}"),
                (want.classes - want.secondary) / 2,
                block.chiral_pair_count,
            ));
            let hv = hyperellipticity_check(g)?;
            checks.push(TheoremCheck::new(
                format!("no_central_involution_{f}"),
                true,
                hv.non_hyperelliptic,
            ));
            fam.maps = Some(block);
        } else {
            let surfaces = surface_of.get(&f);
            let exts = extensions.get(&f);
            let classes: Vec<HypermapClassReport> = cl
                .classes
                .iter()
                .map(|c| HypermapClassReport {
                    id: c.id,
                    representative: TripleReport::new(g, &c.representative),
                    words: words(g, &c.representative.triple),
                    orbit_size: c.orbit_size,
                    surface_id: surfaces.and_then(|s| s[c.id]),
                    closed_forms: labels[c.id].clone(),
                    extension: exts.and_then(|e| e[c.id].clone()),
                })
                .collect();
            let surface_count = classes
                .iter()
                .filter_map(|c| c.surface_id)
                .collect::<BTreeSet<_>>()
                .len();
            let block = HypermapBlock {
                class_count: classes.len(),
                surface_count,
                classes,
            };
            if want.classes == 0 {
                checks.push(TheoremCheck::new(format!("no_skes_{f}"), 0, cl.skes.len()));
            } else {
                checks.push(TheoremCheck::new(
                    format!("hypermaps_{f}"),
                    want.classes,
                    block.class_count,
                ));
                checks.push(TheoremCheck::new(
                    format!("hypermap_surfaces_{f}"),
                    want.secondary,
                    block.surface_count,
                ));
            }
            fam.hypermaps = Some(block);
        }
        families.push(fam);
    }

    let full_set = opts.families.is_none();
    let map_blocks: Vec<&MapBlock> = families.iter().filter_map(|f| f.maps.as_ref()).collect();
    let (total_expected, reflexive_expected, pairs_expected) = match params.residue {
        1 => (10, 2, 4),
        4 => (2, 2, 0),
        _ => (0, 0, 0),
    };
    let total: usize = map_blocks.iter().map(|m| m.class_count).sum();
    let reflexive: usize = map_blocks.iter().map(|m| m.reflexive_count).sum();
    let pairs: usize = map_blocks.iter().map(|m| m.chiral_pair_count).sum();
    let mut global = Vec::new();
    global.push(TheoremCheck::new(
        "nonabelian_families_exist",
        params.residue == 1 || params.residue == 4,
        FamilyTag::ALL
            .iter()
            .any(|&f| build_group(&params, f).is_ok()),
    ));
    global.push(TheoremCheck::new(
        "signatures_order_5p2",
        "(0;5,5,5)",
        admissible_signatures(5 * p * p, genus, 5)
            .iter()
            .map(Signature::to_string)
            .collect::<Vec<_>>()
            .join(" "),
    ));
    for periods in [[5, 5, 5], [2, 5, 10]] {
        let sig = Signature::triangle(periods);
        let order = if periods[0] == 2 {
            10 * p * p
        } else {
            5 * p * p
        };
        let g = match rh_genus(order, &sig)? {
            GenusOutcome::Genus(g) => g,
            GenusOutcome::NonIntegral { .. } => 0,
        };
        global.push(TheoremCheck::new(format!("genus_{sig}"), genus, g));
    }
    if full_set {
        global.push(TheoremCheck::new(
            "maps_type_5_10_total",
            total_expected,
            total,
        ));
        global.push(TheoremCheck::new(
            "reflexive_maps_total",
            reflexive_expected,
            reflexive,
        ));
        global.push(TheoremCheck::new(
            "chiral_pairs_total",
            pairs_expected,
            pairs,
        ));
    }
    let missing_extension = extensions.values().flatten().any(Option::is_none);
    global.push(TheoremCheck::new(
        "exists_surface_with_full_group_order_5p2",
        false,
        missing_extension,
    ));
    let exclusions = verify_signature_exclusions(p);
    global.push(TheoremCheck::new(
        "signature_exclusions",
        true,
        exclusions.holds,
    ));
    if let Some(hat) = run_of(FamilyTag::HatG0) {
        let t = Instant::now();
        let sweep = determinant_sweep(&hat.group)?;
        timing.insert("determinant_sweep".into(), t.elapsed().as_secs_f64());
        global.push(TheoremCheck::new(
            "determinant_criterion_violations",
            0,
            sweep.iter().filter(|v| !v.holds).count(),
        ));
    }
    global.extend(checks);
    timing.insert("total".into(), start.elapsed().as_secs_f64());

    let verdict = if runs.is_empty() {
        format!(
            "no nonabelian group of order 5p^2 for p = {p} (p mod 5 = {})",
            params.residue
        )
    } else {
        format!("{total} orientably-regular maps of type {{5,10}} with 10p^2 orientation-preserving automorphisms")
    };
    Ok(CensusReport {
        prime: p,
        residue_mod5: params.residue,
        genus,
        euler_characteristic: 2 - 2 * genus as i64,
        verdict,
        duality_convention: "type {5,10} only; duals of type {10,5} are not counted separately"
            .into(),
        families,
        signature_exclusions: exclusions,
        alternate_iota2: (alt.tested_classes > 0).then_some(alt),
        theorem_checks: global,
        timing: opts.record_timing.then_some(timing),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_census_for_13() {
        let r = run_census(13, &CensusOptions::default()).unwrap();
        assert!(r.families.is_empty());
        assert!(r.all_pass(), "{:?}", r.failing());
        assert!(r.verdict.starts_with("no nonabelian group"));
    }

    #[test]
    fn rejects_non_primes() {
        assert!(run_census(21, &CensusOptions::default()).is_err());
        assert!(run_census(5, &CensusOptions::default()).is_err());
    }

    #[test]
    fn hyperellipticity_witness() {
        let params = derive_params(11).unwrap();
        let g = build_group(&params, FamilyTag::HatGss2).unwrap();
        let v = hyperellipticity_check(&g).unwrap();
        assert!(v.non_hyperelliptic);
        assert_eq!(v.witness, "a^9");
    }
}
