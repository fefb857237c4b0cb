use std::sync::OnceLock;

use rmcensus_core::census::{
    emit_report, run_census, CensusOptions, CensusReport, ChiralityLabel, ReportFormat,
};
use rmcensus_core::FamilyTag;

fn report_11() -> &'static CensusReport {
    static R: OnceLock<CensusReport> = OnceLock::new();
    R.get_or_init(|| run_census(11, &CensusOptions::default()).unwrap())
}

fn family(r: &CensusReport, tag: FamilyTag) -> &rmcensus_core::census::FamilyReport {
    r.families.iter().find(|f| f.tag == tag).unwrap()
}

#[test]
fn every_check_passes_at_11() {
    let r = report_11();
    assert!(r.all_pass(), "{:#?}", r.failing());
    assert_eq!(r.genus, 122);
    assert_eq!(r.euler_characteristic, -242);
    r.revalidate().unwrap();
}

#[test]
fn json_round_trips() {
    let r = report_11();
    let s = emit_report(r, ReportFormat::Json).unwrap();
    let back: CensusReport = serde_json::from_str(&s).unwrap();
    assert_eq!(&back, r);
    let v: serde_json::Value = serde_json::from_str(&s).unwrap();
    for key in [
        "prime",
        "residue_mod5",
        "genus",
        "euler_characteristic",
        "families",
        "theorem_checks",
    ] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert!(v.get("timing").is_none());
    let fam = &v["families"][0];
    for key in ["tag", "order", "hypermaps", "maps"] {
        assert!(fam.get(key).is_some(), "{key}");
    }
    let rep = &fam["hypermaps"]["classes"][0]["representative"];
    assert!(rep["g1"].is_array() && rep["g2"].is_array() && rep["g3"].is_array());
}

#[test]
fn text_has_total_row() {
    let s = emit_report(report_11(), ReportFormat::Text).unwrap();
    assert!(
        s.contains("maps_type_5_10_total: expected 10, actual 10, PASS"),
        "{s}"
    );
}

#[test]
fn csv_has_one_row_per_class() {
    let r = report_11();
    let s = emit_report(r, ReportFormat::Csv).unwrap();
    let mut rd = csv::Reader::from_reader(s.as_bytes());
    let headers = rd.headers().unwrap().clone();
    for col in [
        "family",
        "signature",
        "representative",
        "chirality",
        "surface_id",
    ] {
        assert!(headers.iter().any(|h| h == col), "{col}");
    }
    let classes: usize = r
        .families
        .iter()
        .map(|f| {
            f.hypermaps.as_ref().map_or(0, |h| h.class_count)
                + f.maps.as_ref().map_or(0, |m| m.class_count)
        })
        .sum();
    assert_eq!(rd.records().count(), classes);
    assert_eq!(classes, 12 + 12 + 6 + 10);
}

#[test]
fn chiral_partners_are_symmetric() {
    let r = report_11();
    for f in &r.families {
        let Some(m) = &f.maps else { continue };
        for c in &m.classes {
            if let Some(q) = c.partner_id {
                assert_eq!(c.chirality, ChiralityLabel::Chiral);
                assert_eq!(m.classes[q].partner_id, Some(c.id));
            }
        }
    }
    let hat1 = family(r, FamilyTag::HatG1).maps.as_ref().unwrap();
    assert_eq!(hat1.chiral_pair_count, 2);
}

#[test]
fn surfaces_carry_three_hypermaps() {
    let r = report_11();
    for tag in [FamilyTag::HatG1, FamilyTag::HatGss2, FamilyTag::HatGss4] {
        for c in &family(r, tag).maps.as_ref().unwrap().classes {
            let mut hit: Vec<usize> = c.restrictions.iter().map(|x| x.unwrap()).collect();
            hit.sort_unstable();
            hit.dedup();
            assert_eq!(hit.len(), 3, "{tag} class {}", c.id);
        }
    }
}

#[test]
fn alternate_listing_is_not_an_embedding() {
    let alt = report_11().alternate_iota2.as_ref().unwrap();
    assert_eq!(alt.tested_classes, 10);
    assert_eq!(alt.product_identity, 0);
}

#[test]
fn reruns_are_identical() {
    let again = run_census(11, &CensusOptions::default()).unwrap();
    assert_eq!(
        emit_report(&again, ReportFormat::Json).unwrap(),
        emit_report(report_11(), ReportFormat::Json).unwrap()
    );
}

#[test]
fn family_filter_pulls_in_base() {
    let opts = CensusOptions {
        families: Some(vec![FamilyTag::HatGss4]),
        record_timing: true,
    };
    let r = run_census(11, &opts).unwrap();
    let tags: Vec<FamilyTag> = r.families.iter().map(|f| f.tag).collect();
    assert_eq!(tags.len(), 2);
    assert!(tags.contains(&FamilyTag::HatGss4));
    assert!(r.all_pass(), "{:#?}", r.failing());
    assert!(r.timing.is_some());
    assert!(!r
        .theorem_checks
        .iter()
        .any(|c| c.name == "maps_type_5_10_total"));
}

#[test]
fn empty_residue_classes() {
    for p in [7, 13, 17, 23] {
        let r = run_census(p, &CensusOptions::default()).unwrap();
        assert!(r.families.is_empty());
        assert!(r.all_pass(), "p={p}: {:#?}", r.failing());
    }
}
