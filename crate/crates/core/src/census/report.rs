//! Census report types and their JSON, CSV and text renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::exclusions::ExclusionVerdict;
use crate::epi::{Embedding, Ske};
use crate::error::{Error, Result};
use crate::grp::{build_group, FamilyTag, GroupSpec};
use crate::modarith::derive_params;

/// Exponent tuples of a triple, in the family's slot order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleReport {
    pub g1: Vec<u64>,
    pub g2: Vec<u64>,
    pub g3: Vec<u64>,
}

impl TripleReport {
    pub fn new(g: &GroupSpec, k: &Ske) -> Self {
        let [a, b, c] = k.triple.map(|x| g.exponent_tuple(&x));
        TripleReport {
            g1: a,
            g2: b,
            g3: c,
        }
    }

    pub fn to_ske(&self, g: &GroupSpec, periods: [u64; 3]) -> Result<Ske> {
        Ok(Ske {
            triple: [
                g.from_exponent_tuple(&self.g1)?,
                g.from_exponent_tuple(&self.g2)?,
                g.from_exponent_tuple(&self.g3)?,
            ],
            periods,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionReport {
    pub family: FamilyTag,
    pub map_class: Option<usize>,
    pub embedding: Embedding,
    pub representative: TripleReport,
    pub words: [String; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypermapClassReport {
    pub id: usize,
    pub representative: TripleReport,
    pub words: [String; 3],
    pub orbit_size: u64,
    pub surface_id: Option<usize>,
    pub closed_forms: Vec<String>,
    pub extension: Option<ExtensionReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypermapBlock {
    pub class_count: usize,
    pub surface_count: usize,
    pub classes: Vec<HypermapClassReport>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChiralityLabel {
    Reflexive,
    Chiral,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapClassReport {
    pub id: usize,
    pub representative: TripleReport,
    pub words: [String; 3],
    pub orbit_size: u64,
    pub chirality: ChiralityLabel,
    pub partner_id: Option<usize>,
    pub closed_forms: Vec<String>,
    /// Hypermap classes of the base family reached along ι₁, ι₂, ι₃.
    pub restrictions: Vec<Option<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapBlock {
    pub class_count: usize,
    pub reflexive_count: usize,
    pub chiral_pair_count: usize,
    pub classes: Vec<MapClassReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub tag: FamilyTag,
    pub order: u64,
    /// Not computed for families without skes.
    pub aut_order: Option<u64>,
    pub signature: String,
    pub ske_count: u64,
    pub hypermaps: Option<HypermapBlock>,
    pub maps: Option<MapBlock>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremCheck {
    pub name: String,
    pub expected: Value,
    pub actual: Value,
    pub pass: bool,
}

impl TheoremCheck {
    pub fn new(
        name: impl Into<String>,
        expected: impl Into<Value>,
        actual: impl Into<Value>,
    ) -> Self {
        let (expected, actual) = (expected.into(), actual.into());
        TheoremCheck {
            name: name.into(),
            pass: expected == actual,
            expected,
            actual,
        }
    }
}

/// Ordering issue for the transposed ι₂ listing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlternateEmbeddingNote {
    pub tested_classes: usize,
    /// Classes whose transposed-ι₂ image multiplies to the identity.
    pub product_identity: usize,
    /// Of those, classes where it lands on the same surface as ι₁.
    pub same_surface: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CensusReport {
    pub prime: u64,
    pub residue_mod5: u64,
    pub genus: u64,
    pub euler_characteristic: i64,
    pub verdict: String,
    /// Maps are counted as type {5,10}; duals of type {10,5} are not listed.
    pub duality_convention: String,
    pub families: Vec<FamilyReport>,
    pub signature_exclusions: ExclusionVerdict,
    pub alternate_iota2: Option<AlternateEmbeddingNote>,
    pub theorem_checks: Vec<TheoremCheck>,
    /// Wall-clock seconds per stage; omitted unless requested so that
    /// reports stay byte-identical across runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing: Option<BTreeMap<String, f64>>,
}

impl CensusReport {
    pub fn all_pass(&self) -> bool {
        self.theorem_checks.iter().all(|c| c.pass)
    }

    pub fn failing(&self) -> Vec<&TheoremCheck> {
        self.theorem_checks.iter().filter(|c| !c.pass).collect()
    }

    /// Re-checks every listed representative as a ske on its group.
    pub fn revalidate(&self) -> Result<()> {
        if self.euler_characteristic != 2 - 2 * self.genus as i64 {
            return Err(Error::Report(
                "euler characteristic and genus disagree".into(),
            ));
        }
        let params = derive_params(self.prime)?;
        for fam in &self.families {
            let g = build_group(&params, fam.tag)?;
            let check = |t: &TripleReport, periods| -> Result<()> {
                t.to_ske(&g, periods)?
                    .validate(&g)
                    .map_err(|e| Error::Report(format!("{}: {e}", fam.tag)))
            };
            if let Some(h) = &fam.hypermaps {
                for c in &h.classes {
                    check(&c.representative, [5, 5, 5])?;
                }
            }
            if let Some(m) = &fam.maps {
                for c in &m.classes {
                    check(&c.representative, [2, 5, 10])?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Text,
}

impl FromStr for ReportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "text" => Ok(ReportFormat::Text),
            other => Err(Error::Report(format!("unknown format {other:?}"))),
        }
    }
}

/// Serializes the report deterministically.
pub fn emit_report(r: &CensusReport, format: ReportFormat) -> Result<String> {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(r)?;
            s.push('\n');
            Ok(s)
        }
        ReportFormat::Csv => emit_csv(r),
        ReportFormat::Text => Ok(emit_text(r)),
    }
}

pub fn write_report(r: &CensusReport, format: ReportFormat, path: &Path) -> Result<()> {
    let body = emit_report(r, format)?;
    std::fs::write(path, body).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Serialize)]
struct CsvRow<'a> {
    family: &'a str,
    signature: &'a str,
    class_id: usize,
    representative: String,
    chirality: &'a str,
    surface_id: String,
}

fn emit_csv(r: &CensusReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for fam in &r.families {
        let tag = fam.tag.as_str();
        if let Some(h) = &fam.hypermaps {
            for c in &h.classes {
                w.serialize(CsvRow {
                    family: tag,
                    signature: &fam.signature,
                    class_id: c.id,
                    representative: c.words.join(" "),
                    chirality: "",
                    surface_id: c.surface_id.map_or(String::new(), |s| s.to_string()),
                })?;
            }
        }
        if let Some(m) = &fam.maps {
            for c in &m.classes {
                w.serialize(CsvRow {
                    family: tag,
                    signature: &fam.signature,
                    class_id: c.id,
                    representative: c.words.join(" "),
                    chirality: match c.chirality {
                        ChiralityLabel::Reflexive => "reflexive",
                        ChiralityLabel::Chiral => "chiral",
                    },
                    surface_id: c.id.to_string(),
                })?;
            }
        }
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Report(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Report(format!("csv: {e}")))
}

fn show(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn emit_text(r: &CensusReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "p = {}  (p mod 5 = {})  genus {}  euler characteristic {}",
        r.prime, r.residue_mod5, r.genus, r.euler_characteristic
    );
    let _ = writeln!(s, "{}", r.verdict);
    for fam in &r.families {
        let _ = write!(
            s,
            "\n{} (order {}, |Aut| {}, {} skes of {})",
            fam.tag,
            fam.order,
            fam.aut_order.map_or("-".to_string(), |n| n.to_string()),
            fam.ske_count,
            fam.signature
        );
        if let Some(h) = &fam.hypermaps {
            let _ = writeln!(
                s,
                ": {} hypermap classes on {} surfaces",
                h.class_count, h.surface_count
            );
            for c in &h.classes {
                let surface = c.surface_id.map_or("-".to_string(), |x| x.to_string());
                let _ = writeln!(
                    s,
                    "  [{}] ({}) surface {} {}",
                    c.id,
                    c.words.join(", "),
                    surface,
                    c.closed_forms.join(" ")
                );
            }
        }
        if let Some(m) = &fam.maps {
            let _ = writeln!(
                s,
                ": {} map classes, {} reflexive, {} chiral pairs",
                m.class_count, m.reflexive_count, m.chiral_pair_count
            );
            for c in &m.classes {
                let chir = match (c.chirality, c.partner_id) {
                    (ChiralityLabel::Chiral, Some(q)) => format!("chiral with {q}"),
                    _ => "reflexive".to_string(),
                };
                let _ = writeln!(
                    s,
                    "  [{}] ({}) {} {}",
                    c.id,
                    c.words.join(", "),
                    chir,
                    c.closed_forms.join(" ")
                );
            }
        }
        if fam.hypermaps.is_none() && fam.maps.is_none() {
            s.push('\n');
        }
    }
    let _ = writeln!(s, "\ntheorem checks:");
    for c in &r.theorem_checks {
        let _ = writeln!(
            s,
            "{}: expected {}, actual {}, {}",
            c.name,
            show(&c.expected),
            show(&c.actual),
            if c.pass { "PASS" } else { "FAIL" }
        );
    }
    s
}
