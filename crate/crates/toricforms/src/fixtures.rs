//! Embedded datasets: the matrices, certificates and expected results the
//! tool is regressed against, with loaders and a self-verification pass.
//!
//! Each file in `data/` is a JSON object with a `schema_version` field and
//! one table. Matrices are arrays of rows of integers. Words such as
//! `g1^3g2` are over the generator names of the row's presentation.

use std::collections::BTreeMap;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cohom::{
    canonical_text, certificate_operators, verify_certificate, CertificateCheck, CertificateKind, ReducedGroup,
};
use crate::fan::Fan;
use crate::intlin::{is_unimodular, unimodular_inverse, IntegerMatrix};
use crate::symgrp::{
    generate_closure, identify_isomorphism_type, parse_word, FiniteGroup, GroupSpec, IsoType, PresentedGroup,
    DEFAULT_CLOSURE_CAP,
};

pub const SCHEMA_VERSION: u32 = 1;

pub type RawMatrix = Vec<Vec<i64>>;

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("fixture {file} is corrupt at {row}: {reason}")]
    FixtureCorrupt { file: String, row: String, reason: String },
    #[error("fixture {file} has schema version {found}, expected {SCHEMA_VERSION}")]
    SchemaVersion { file: String, found: u32 },
    #[error("cannot read fixture {file}: {reason}")]
    Io { file: String, reason: String },
}

fn corrupt(file: &str, row: &str, reason: impl Into<String>) -> FixtureError {
    FixtureError::FixtureCorrupt { file: file.into(), row: row.into(), reason: reason.into() }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Table1 {
    pub group: String,
    pub names: Vec<String>,
    pub classes: Vec<Table1Class>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Table1Class {
    pub label: String,
    pub generators: Vec<RawMatrix>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Table2 {
    pub matrices: BTreeMap<String, RawMatrix>,
    pub groups: Vec<Table2Group>,
}

/// Generators are words in the named matrices, `I` for the identity and a
/// leading `-` for negation.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Table2Group {
    pub name: String,
    pub order: usize,
    pub generators: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Presentation {
    pub generators: Vec<String>,
    pub relators: Vec<String>,
}

impl Presentation {
    pub fn build(&self) -> Result<PresentedGroup, crate::symgrp::GroupError> {
        PresentedGroup::from_spec(&GroupSpec::Presented {
            generators: self.generators.clone(),
            relators: self.relators.clone(),
        })
    }
}

/// A row of the induced-module certificate tables. When `family` is null
/// the family is rebuilt from the presentation, H, U and T.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CertificateRow {
    pub id: String,
    pub table: u8,
    pub group: String,
    pub class: Option<String>,
    pub kind: CertificateKind,
    pub presentation: Presentation,
    pub family: Option<Vec<RawMatrix>>,
    pub subgroup: Vec<String>,
    pub character: Vec<i8>,
    pub reps: Vec<String>,
    pub t: Option<RawMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilySource {
    Printed,
    Reconstructed,
}

/// A certificate row with its family in hand.
#[derive(Clone, Debug)]
pub struct ResolvedCertificate {
    pub id: String,
    pub source: FamilySource,
    pub check: CertificateCheck,
}

impl ResolvedCertificate {
    /// T_g for every family generator in the row's basis.
    pub fn induced_matrices(&self) -> Vec<IntegerMatrix> {
        let red = ReducedGroup::from_matrices(&self.check.family, &self.check.names).expect("resolved family");
        let ops = certificate_operators(
            &red.group,
            self.check.kind,
            &self.check.subgroup,
            &self.check.character,
            &self.check.reps,
        )
        .expect("resolved certificate");
        ops.generator_matrices(&red.group)
    }

    /// The family that T_g should be similar to: g itself, or the bordered
    /// matrix [[U(g), 0], [*, g]] read off through T.
    pub fn similarity_target(&self) -> Vec<IntegerMatrix> {
        match self.check.kind {
            CertificateKind::InducedIsomorphism => self.check.family.clone(),
            CertificateKind::InducedSummand => {
                let t = self.check.t.clone().unwrap_or_else(|| IntegerMatrix::identity(self.check.reps.len()));
                let tinv = unimodular_inverse(&t).expect("verified unimodular");
                self.induced_matrices().iter().map(|tg| tinv.mul(tg).mul(&t)).collect()
            }
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Table7Row {
    pub group: String,
    pub classes: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Thm46 {
    pub aut: String,
    pub images: Vec<String>,
    pub cells: Vec<Thm46Cell>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Thm46Cell {
    pub class: String,
    pub image: String,
    pub expected: String,
}

/// `representative` is `table1:<label>` or `certificates:<id>`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct A2Row {
    pub group: String,
    pub class: String,
    pub count: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representative: Option<String>,
    #[serde(default)]
    pub needs_external_rep: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AppendixBRow {
    pub id: String,
    pub lemma: String,
    pub group: String,
    pub names: Vec<String>,
    #[serde(default)]
    pub generators: Option<Vec<RawMatrix>>,
    #[serde(default)]
    pub class: Option<String>,
    pub expected: String,
    pub cocycle: Option<String>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct FanClaims {
    pub aut_class: String,
    pub aut_order: usize,
    #[serde(default)]
    pub real_total: Option<u64>,
    #[serde(default)]
    pub z4_trivial_total: Option<u64>,
    #[serde(default)]
    pub quadratic_total: Option<u64>,
    #[serde(default)]
    pub cubic_total: Option<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExampleFan {
    pub id: String,
    pub fan: Fan,
    pub claims: FanClaims,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct InlineCertificate {
    pub kind: CertificateKind,
    pub subgroup: Vec<String>,
    pub character: Vec<i8>,
    pub reps: Vec<String>,
    pub t: Option<RawMatrix>,
    /// The T as printed, when it differs from the one that verifies.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub printed_t: Option<RawMatrix>,
}

/// `expected` is the printed conclusion; `verified_expected`, when present,
/// is what independent checks support instead.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Section3Example {
    pub id: String,
    pub names: Vec<String>,
    pub generators: Vec<RawMatrix>,
    pub expected: String,
    #[serde(default)]
    pub verified_expected: Option<String>,
    pub certificate: Option<InlineCertificate>,
    pub cocycle: Option<String>,
    #[serde(default)]
    pub cocycle_literal_holds: Option<bool>,
}

impl Section3Example {
    pub fn supported_expected(&self) -> &str {
        self.verified_expected.as_deref().unwrap_or(&self.expected)
    }
}

#[derive(Clone, Debug)]
pub struct FixtureSet {
    pub table1_d6_classes: Table1,
    pub table2_gl2: Table2,
    pub tables3to6_certificates: Vec<CertificateRow>,
    pub table7_applicability: Vec<Table7Row>,
    pub thm46_expected: Thm46,
    pub appendix_a2_counts: Vec<A2Row>,
    pub appendix_b_expected: Vec<AppendixBRow>,
    pub example_fans: Vec<ExampleFan>,
    pub section3_examples: Vec<Section3Example>,
}

#[derive(Deserialize)]
struct Rows<T> {
    rows: Vec<T>,
}

#[derive(Deserialize)]
struct Examples {
    fans: Vec<ExampleFan>,
    section3: Vec<Section3Example>,
}

pub const FIXTURE_FILES: [&str; 8] = [
    "table1.json",
    "table2.json",
    "certificates.json",
    "table7.json",
    "thm46.json",
    "appendix_a2.json",
    "appendix_b.json",
    "examples.json",
];

const EMBEDDED: [&str; 8] = [
    include_str!("../data/table1.json"),
    include_str!("../data/table2.json"),
    include_str!("../data/certificates.json"),
    include_str!("../data/table7.json"),
    include_str!("../data/thm46.json"),
    include_str!("../data/appendix_a2.json"),
    include_str!("../data/appendix_b.json"),
    include_str!("../data/examples.json"),
];

fn parse<T: DeserializeOwned>(file: &str, text: &str) -> Result<T, FixtureError> {
    #[derive(Deserialize)]
    struct Version {
        schema_version: u32,
    }
    let v: Version = serde_json::from_str(text).map_err(|e| corrupt(file, "schema_version", e.to_string()))?;
    if v.schema_version != SCHEMA_VERSION {
        return Err(FixtureError::SchemaVersion { file: file.into(), found: v.schema_version });
    }
    serde_json::from_str(text).map_err(|e| corrupt(file, &format!("line {}", e.line()), e.to_string()))
}

fn from_texts(texts: &[&str]) -> Result<FixtureSet, FixtureError> {
    let f = &FIXTURE_FILES;
    let examples: Examples = parse(f[7], texts[7])?;
    Ok(FixtureSet {
        table1_d6_classes: parse(f[0], texts[0])?,
        table2_gl2: parse(f[1], texts[1])?,
        tables3to6_certificates: parse::<Rows<_>>(f[2], texts[2])?.rows,
        table7_applicability: parse::<Rows<_>>(f[3], texts[3])?.rows,
        thm46_expected: parse(f[4], texts[4])?,
        appendix_a2_counts: parse::<Rows<_>>(f[5], texts[5])?.rows,
        appendix_b_expected: parse::<Rows<_>>(f[6], texts[6])?.rows,
        example_fans: examples.fans,
        section3_examples: examples.section3,
    })
}

/// The datasets compiled into the crate.
pub fn load_fixtures() -> Result<FixtureSet, FixtureError> {
    from_texts(&EMBEDDED)
}

/// The same datasets read from a directory holding the files of
/// [`FIXTURE_FILES`].
pub fn load_fixtures_from(dir: &Path) -> Result<FixtureSet, FixtureError> {
    let mut texts = Vec::new();
    for name in FIXTURE_FILES {
        let p = dir.join(name);
        texts.push(
            std::fs::read_to_string(&p).map_err(|e| FixtureError::Io { file: name.into(), reason: e.to_string() })?,
        );
    }
    let refs: Vec<&str> = texts.iter().map(|s| s.as_str()).collect();
    from_texts(&refs)
}

/// Square integer matrix from rows, rejecting ragged input.
pub fn to_matrix(m: &RawMatrix) -> Result<IntegerMatrix, String> {
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) {
        return Err(format!("matrix is not square: {m:?}"));
    }
    Ok(IntegerMatrix::from_i64(m))
}

pub fn to_matrices(ms: &[RawMatrix]) -> Result<Vec<IntegerMatrix>, String> {
    let out: Vec<IntegerMatrix> = ms.iter().map(to_matrix).collect::<Result<_, _>>()?;
    if out.windows(2).any(|w| w[0].rows() != w[1].rows()) {
        return Err("generators have different sizes".into());
    }
    if let Some(i) = out.iter().position(|m| !is_unimodular(m)) {
        return Err(format!("generator {i} is not unimodular"));
    }
    Ok(out)
}

fn group_of(gens: &[IntegerMatrix]) -> Result<FiniteGroup, String> {
    Ok(generate_closure(gens, DEFAULT_CLOSURE_CAP).map_err(|e| e.to_string())?.group().clone())
}

impl FixtureSet {
    pub fn table1_family(&self, label: &str) -> Option<Vec<IntegerMatrix>> {
        let c = self.table1_d6_classes.classes.iter().find(|c| c.label == label)?;
        to_matrices(&c.generators).ok()
    }

    pub fn table1_labels(&self) -> Vec<String> {
        self.table1_d6_classes.classes.iter().map(|c| c.label.clone()).collect()
    }

    /// Generators of a named GL(2,Z) group as matrices.
    pub fn table2_generators(&self, name: &str) -> Result<Vec<IntegerMatrix>, FixtureError> {
        let t2 = &self.table2_gl2;
        let row = t2.groups.iter().find(|g| g.name == name).ok_or_else(|| corrupt("table2.json", name, "no such group"))?;
        let names: Vec<String> = t2.matrices.keys().cloned().collect();
        let mats: Vec<IntegerMatrix> = t2
            .matrices
            .values()
            .map(to_matrix)
            .collect::<Result<_, _>>()
            .map_err(|e| corrupt("table2.json", "matrices", e))?;
        let n = mats.first().map_or(2, |m| m.rows());
        row.generators
            .iter()
            .map(|w| {
                let (neg, body) = match w.strip_prefix('-') {
                    Some(b) => (true, b),
                    None => (false, w.as_str()),
                };
                let m = if body == "I" {
                    IntegerMatrix::identity(n)
                } else {
                    let word = parse_word(body, &names).map_err(|e| corrupt("table2.json", name, e.to_string()))?;
                    word.iter().fold(IntegerMatrix::identity(n), |acc, l| acc.mul(&mats[l.gen]))
                };
                Ok(if neg { m.neg() } else { m })
            })
            .collect()
    }

    pub fn certificate(&self, id: &str) -> Option<&CertificateRow> {
        self.tables3to6_certificates.iter().find(|r| r.id == id)
    }

    /// Matrices behind an A.2 `representative` reference.
    pub fn representative(&self, reference: &str) -> Result<Vec<IntegerMatrix>, FixtureError> {
        let bad = |why: &str| corrupt("appendix_a2.json", reference, why);
        match reference.split_once(':') {
            Some(("table1", label)) => self.table1_family(label).ok_or_else(|| bad("unknown D6 class")),
            Some(("certificates", id)) => {
                let row = self.certificate(id).ok_or_else(|| bad("unknown certificate row"))?;
                Ok(resolve_certificate(row)?.check.family)
            }
            _ => Err(bad("reference must be table1:<label> or certificates:<id>")),
        }
    }

    pub fn appendix_b_family(&self, row: &AppendixBRow) -> Result<Vec<IntegerMatrix>, FixtureError> {
        match (&row.generators, &row.class) {
            (Some(g), None) => to_matrices(g).map_err(|e| corrupt("appendix_b.json", &row.id, e)),
            (None, Some(c)) => {
                self.table1_family(c).ok_or_else(|| corrupt("appendix_b.json", &row.id, "unknown D6 class"))
            }
            _ => Err(corrupt("appendix_b.json", &row.id, "exactly one of generators and class is required")),
        }
    }

    pub fn example_fan(&self, id: &str) -> Option<&ExampleFan> {
        self.example_fans.iter().find(|f| f.id == id)
    }

    pub fn section3(&self, id: &str) -> Option<&Section3Example> {
        self.section3_examples.iter().find(|e| e.id == id)
    }

    /// Every order-2 matrix the fixtures print: the order-2 lemma rows, the
    /// reflections of the D6 classes and the involutions of the GL(2,Z) groups.
    pub fn involutions(&self) -> Vec<(String, IntegerMatrix)> {
        let mut out = Vec::new();
        for row in &self.appendix_b_expected {
            if let (Some(g), "Z2") = (&row.generators, row.group.as_str()) {
                if let Ok(m) = to_matrix(&g[0]) {
                    out.push((row.id.clone(), m));
                }
            }
        }
        for c in &self.table1_d6_classes.classes {
            if let Some(fam) = self.table1_family(&c.label) {
                let Ok(mg) = generate_closure(&fam, DEFAULT_CLOSURE_CAP) else { continue };
                for (i, m) in mg.elements.iter().enumerate() {
                    if mg.group().element_order(i) == 2 {
                        out.push((format!("{}#{i}", c.label), m.clone()));
                    }
                }
            }
        }
        let mut seen = std::collections::HashSet::new();
        for g in &self.table2_gl2.groups {
            let Ok(gens) = self.table2_generators(&g.name) else { continue };
            let Ok(mg) = generate_closure(&gens, DEFAULT_CLOSURE_CAP) else { continue };
            for (i, m) in mg.elements.iter().enumerate() {
                if mg.group().element_order(i) == 2 && seen.insert(m.clone()) {
                    out.push((format!("{}#{i}", g.name), m.clone()));
                }
            }
        }
        out
    }
}

/// Builds the row's family, printed or rebuilt, and checks it realizes the
/// presentation faithfully.
pub fn resolve_certificate(row: &CertificateRow) -> Result<ResolvedCertificate, FixtureError> {
    let file = "certificates.json";
    let bad = |why: String| corrupt(file, &row.id, why);
    let pres = row.presentation.build().map_err(|e| bad(e.to_string()))?;
    let g = pres.group();
    let t = row.t.as_ref().map(to_matrix).transpose().map_err(bad)?;
    let (family, source) = match &row.family {
        Some(f) => (to_matrices(f).map_err(bad)?, FamilySource::Printed),
        None => {
            let ops = certificate_operators(g, row.kind, &row.subgroup, &row.character, &row.reps)
                .map_err(|e| bad(e.to_string()))?;
            let dim = ops.dim();
            let t = t.clone().unwrap_or_else(|| IntegerMatrix::identity(dim));
            let tinv = unimodular_inverse(&t).map_err(|e| bad(format!("T: {e}")))?;
            let mut fam = Vec::new();
            for (i, tg) in ops.generator_matrices(g).iter().enumerate() {
                fam.push(match row.kind {
                    CertificateKind::InducedIsomorphism => t.mul(tg).mul(&tinv),
                    CertificateKind::InducedSummand => {
                        let m = tinv.mul(tg).mul(&t);
                        if !m.submatrix(0, 1, 1, dim).is_zero() {
                            return Err(bad(format!("T^-1 T_g T is not bordered for generator {}", i + 1)));
                        }
                        m.submatrix(1, dim, 1, dim)
                    }
                });
            }
            (fam, FamilySource::Reconstructed)
        }
    };
    if family.len() != pres.generator_names.len() {
        return Err(bad("one matrix per presentation generator".into()));
    }
    let images = crate::symgrp::GroupHom::into_generated(pres.clone(), family.clone())
        .map_err(|e| bad(format!("family does not satisfy the presentation: {e}")))?;
    if images.target.order() != g.order() {
        return Err(bad(format!("family generates {} elements, presentation has {}", images.target.order(), g.order())));
    }
    Ok(ResolvedCertificate {
        id: row.id.clone(),
        source,
        check: CertificateCheck {
            kind: row.kind,
            family,
            names: row.presentation.generators.clone(),
            subgroup: row.subgroup.clone(),
            character: row.character.clone(),
            reps: row.reps.clone(),
            t,
        },
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FixtureReport {
    pub table1_classes: usize,
    pub table2_groups: usize,
    pub certificates_printed: Vec<String>,
    pub certificates_reconstructed: Vec<String>,
    pub thm46_cells: usize,
    pub a2_rows_with_representative: usize,
    pub a2_rows_needing_external_rep: usize,
    pub appendix_b_rows: usize,
    pub section3_examples: usize,
}

fn iso_matches(g: &FiniteGroup, name: &str) -> bool {
    identify_isomorphism_type(g).matches_name(name)
}

fn is_class_label(s: &str) -> bool {
    s.strip_prefix('W').is_some_and(|d| !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()))
}

/// Re-derives group orders and types, certificate validity and the
/// well-formedness of every expected expression.
pub fn verify_fixtures(set: &FixtureSet) -> Result<FixtureReport, FixtureError> {
    let t1 = &set.table1_d6_classes;
    for c in &t1.classes {
        let bad = |why: String| corrupt("table1.json", &c.label, why);
        let fam = to_matrices(&c.generators).map_err(bad)?;
        let g = group_of(&fam).map_err(bad)?;
        if !iso_matches(&g, &t1.group) {
            return Err(bad(format!("generates {}, not {}", identify_isomorphism_type(&g), t1.group)));
        }
        let orders: Vec<usize> = g.generators().iter().map(|&x| g.element_order(x)).collect();
        if orders != [3, 2] {
            return Err(bad(format!("generator orders {orders:?}, expected rotation then reflection")));
        }
    }

    for row in &set.table2_gl2.groups {
        let bad = |why: String| corrupt("table2.json", &row.name, why);
        let gens = set.table2_generators(&row.name)?;
        let g = group_of(&gens).map_err(bad)?;
        if g.order() != row.order {
            return Err(bad(format!("generates {} elements, labeled {}", g.order(), row.order)));
        }
        if !iso_matches(&g, &row.name) {
            return Err(bad(format!("generates {}", identify_isomorphism_type(&g))));
        }
    }

    let mut printed = Vec::new();
    let mut rebuilt = Vec::new();
    for row in &set.tables3to6_certificates {
        let bad = |why: String| corrupt("certificates.json", &row.id, why);
        let res = resolve_certificate(row)?;
        let pres_order = row.presentation.build().map_err(|e| bad(e.to_string()))?.order;
        if IsoType::from_name(&row.group).is_none() {
            return Err(bad(format!("unknown group name {}", row.group)));
        }
        let g = group_of(&res.check.family).map_err(bad)?;
        if g.order() != pres_order || !iso_matches(&g, &row.group) {
            return Err(bad(format!("family generates {}, labeled {}", identify_isomorphism_type(&g), row.group)));
        }
        if !verify_certificate(&res.check).map_err(|e| bad(e.to_string()))? {
            return Err(bad("certificate relation does not hold".into()));
        }
        match res.source {
            FamilySource::Printed => printed.push(row.id.clone()),
            FamilySource::Reconstructed => rebuilt.push(row.id.clone()),
        }
    }

    for row in &set.table7_applicability {
        let bad = |why: String| corrupt("table7.json", &row.group, why);
        if IsoType::from_name(&row.group).is_none() {
            return Err(bad("unknown group name".into()));
        }
        if let Some(c) = row.classes.iter().find(|c| !is_class_label(c)) {
            return Err(bad(format!("bad class label {c}")));
        }
        if row.group == t1.group {
            if let Some(c) = row.classes.iter().find(|c| set.table1_family(c).is_none()) {
                return Err(bad(format!("{c} is not a D6 class")));
            }
        }
    }

    let thm = &set.thm46_expected;
    let mut seen = std::collections::BTreeSet::new();
    for cell in &thm.cells {
        let id = format!("{}/{}", cell.class, cell.image);
        let bad = |why: String| corrupt("thm46.json", &id, why);
        let fam = set.table1_family(&cell.class).ok_or_else(|| bad("unknown class".into()))?;
        let (gens, names) = image_generators(&fam, &cell.image).ok_or_else(|| bad("unknown image".into()))?;
        let red = ReducedGroup::from_matrices(&gens, &names).map_err(|e| bad(e.to_string()))?;
        canonical_text(&cell.expected, &red.group).map_err(|e| bad(e.to_string()))?;
        if !seen.insert(id.clone()) {
            return Err(bad("duplicate cell".into()));
        }
    }
    if seen.len() != t1.classes.len() * thm.images.len() {
        return Err(corrupt("thm46.json", "cells", format!("{} cells, expected a full grid", seen.len())));
    }

    let (mut with_rep, mut without) = (0, 0);
    for row in &set.appendix_a2_counts {
        let id = format!("{}/{}", row.group, row.class);
        let bad = |why: String| corrupt("appendix_a2.json", &id, why);
        if row.count == 0 || !is_class_label(&row.class) || IsoType::from_name(&row.group).is_none() {
            return Err(bad("malformed row".into()));
        }
        match (&row.representative, row.needs_external_rep) {
            (Some(r), false) => {
                let fam = set.representative(r)?;
                let g = group_of(&fam).map_err(bad)?;
                if !iso_matches(&g, &row.group) {
                    return Err(bad(format!("representative generates {}", identify_isomorphism_type(&g))));
                }
                with_rep += 1;
            }
            (None, true) => without += 1,
            _ => return Err(bad("give a representative or set needs_external_rep".into())),
        }
    }

    for row in &set.appendix_b_expected {
        let bad = |why: String| corrupt("appendix_b.json", &row.id, why);
        let fam = set.appendix_b_family(row)?;
        if fam.len() != row.names.len() {
            return Err(bad("one name per generator".into()));
        }
        let red = ReducedGroup::from_matrices(&fam, &row.names).map_err(|e| bad(e.to_string()))?;
        if !iso_matches(&red.group, &row.group) {
            return Err(bad(format!("generates {}", identify_isomorphism_type(&red.group))));
        }
        canonical_text(&row.expected, &red.group).map_err(|e| bad(e.to_string()))?;
    }

    for ex in &set.example_fans {
        let bad = |why: String| corrupt("examples.json", &ex.id, why);
        if ex.fan.rays.iter().any(|r| r.len() != ex.fan.dim) {
            return Err(bad("ray of the wrong dimension".into()));
        }
        if ex.fan.max_cones.iter().flatten().any(|&i| i >= ex.fan.rays.len()) {
            return Err(bad("cone refers to a missing ray".into()));
        }
        if set.table1_family(&ex.claims.aut_class).is_none() {
            return Err(bad("claimed class is not a D6 class".into()));
        }
    }

    for ex in &set.section3_examples {
        let bad = |why: String| corrupt("examples.json", &ex.id, why);
        let fam = to_matrices(&ex.generators).map_err(bad)?;
        let red = ReducedGroup::from_matrices(&fam, &ex.names).map_err(|e| bad(e.to_string()))?;
        canonical_text(&ex.expected, &red.group).map_err(|e| bad(e.to_string()))?;
        if let Some(v) = &ex.verified_expected {
            canonical_text(v, &red.group).map_err(|e| bad(e.to_string()))?;
        }
        if let Some(c) = &ex.certificate {
            let check = inline_check(ex, c).map_err(bad)?;
            if !verify_certificate(&check).map_err(|e| bad(e.to_string()))? {
                return Err(bad("certificate relation does not hold".into()));
            }
        }
    }

    Ok(FixtureReport {
        table1_classes: t1.classes.len(),
        table2_groups: set.table2_gl2.groups.len(),
        certificates_printed: printed,
        certificates_reconstructed: rebuilt,
        thm46_cells: seen.len(),
        a2_rows_with_representative: with_rep,
        a2_rows_needing_external_rep: without,
        appendix_b_rows: set.appendix_b_expected.len(),
        section3_examples: set.section3_examples.len(),
    })
}

/// The certificate of a worked example as a checkable row.
pub fn inline_check(ex: &Section3Example, c: &InlineCertificate) -> Result<CertificateCheck, String> {
    Ok(CertificateCheck {
        kind: c.kind,
        family: to_matrices(&ex.generators)?,
        names: ex.names.clone(),
        subgroup: c.subgroup.clone(),
        character: c.character.clone(),
        reps: c.reps.clone(),
        t: c.t.as_ref().map(to_matrix).transpose()?,
    })
}

/// Generators and names of an image subgroup of a D6 family (r, s):
/// `Z2` is ⟨s⟩, `Z3` is ⟨r⟩, `D6` is everything.
pub fn image_generators(fam: &[IntegerMatrix], image: &str) -> Option<(Vec<IntegerMatrix>, Vec<String>)> {
    let (r, s) = (fam.first()?.clone(), fam.get(1)?.clone());
    match image {
        "Z2" => Some((vec![s], vec!["s".into()])),
        "Z3" => Some((vec![r], vec!["r".into()])),
        "D6" => Some((vec![r, s], vec!["r".into(), "s".into()])),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set() -> FixtureSet {
        load_fixtures().unwrap()
    }

    #[test]
    fn embedded_fixtures_verify() {
        let report = verify_fixtures(&set()).unwrap();
        assert_eq!(report.table1_classes, 6);
        assert_eq!(report.table2_groups, 13);
        assert_eq!(report.thm46_cells, 18);
        assert_eq!(report.certificates_printed.len() + report.certificates_reconstructed.len(), 28);
    }

    #[test]
    fn w9_pair_generates_d6() {
        let fam = set().table1_family("W9").unwrap();
        let g = group_of(&fam).unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(identify_isomorphism_type(&g), IsoType::Dihedral(6));
    }

    #[test]
    fn z6_w4_certificate_is_valid() {
        let s = set();
        let res = resolve_certificate(s.certificate("t4-z6-w4").unwrap()).unwrap();
        assert_eq!(res.source, FamilySource::Reconstructed);
        assert!(verify_certificate(&res.check).unwrap());
        // g1^3 acts as -1
        let g1 = &res.check.family[0];
        assert_eq!(g1.mul(g1).mul(g1), IntegerMatrix::identity(3).neg());
    }

    #[test]
    fn d6_a2_counts() {
        let s = set();
        for row in s.appendix_a2_counts.iter().filter(|r| r.group == "D6") {
            let want = if ["W6", "W8", "W10"].contains(&row.class.as_str()) { 2 } else { 3 };
            assert_eq!(row.count, want, "{}", row.class);
            assert!(row.representative.is_some());
        }
    }

    #[test]
    fn a2_counts_on_every_representative() {
        let s = set();
        for row in &s.appendix_a2_counts {
            let Some(r) = &row.representative else { continue };
            let mg = generate_closure(&s.representative(r).unwrap(), DEFAULT_CLOSURE_CAP).unwrap();
            let got = crate::realforms::real_forms_of_group(&mg).total;
            assert_eq!(got, row.count, "{}/{}", row.group, row.class);
        }
    }

    #[test]
    fn rows_without_printed_matrices_are_flagged() {
        let s = set();
        let z2: Vec<&A2Row> = s.appendix_a2_counts.iter().filter(|r| r.group == "Z2").collect();
        assert_eq!(z2.len(), 5);
        assert!(z2.iter().all(|r| r.needs_external_rep));
    }

    #[test]
    fn edited_matrix_is_reported_with_its_row() {
        let mut s = set();
        s.table1_d6_classes.classes[2].generators[1][0][0] = 2;
        match verify_fixtures(&s) {
            Err(FixtureError::FixtureCorrupt { file, row, .. }) => {
                assert_eq!(file, "table1.json");
                assert_eq!(row, "W7");
            }
            other => panic!("expected corruption, got {other:?}"),
        }
    }

    #[test]
    fn edited_certificate_fails() {
        let mut s = set();
        let row = s.tables3to6_certificates.iter_mut().find(|r| r.id == "t6-d8-w11").unwrap();
        row.character = vec![1, 1];
        assert!(matches!(verify_fixtures(&s), Err(FixtureError::FixtureCorrupt { row, .. }) if row == "t6-d8-w11"));
    }

    #[test]
    fn schema_version_is_checked() {
        let text = EMBEDDED[3].replacen("\"schema_version\": 1", "\"schema_version\": 7", 1);
        let mut texts = EMBEDDED;
        texts[3] = &text;
        assert!(matches!(from_texts(&texts), Err(FixtureError::SchemaVersion { found: 7, .. })));
    }

    #[test]
    fn printed_klein_four_t_does_not_border() {
        let s = set();
        let ex = s.section3("induced-2").unwrap();
        let c = ex.certificate.as_ref().unwrap();
        assert!(verify_certificate(&inline_check(ex, c).unwrap()).unwrap());
        let printed = InlineCertificate { t: c.printed_t.clone(), ..c.clone() };
        assert!(!verify_certificate(&inline_check(ex, &printed).unwrap()).unwrap());
    }

    #[test]
    fn table2_words() {
        let s = set();
        let d6 = s.table2_generators("D6").unwrap();
        assert_eq!(d6[1], IntegerMatrix::from_i64(&[vec![1, 1], vec![0, -1]]));
        let c2 = s.table2_generators("C2").unwrap();
        assert_eq!(c2[0], IntegerMatrix::identity(2).neg());
    }

    #[test]
    fn involutions_cover_the_printed_sources() {
        let inv = set().involutions();
        assert!(inv.iter().any(|(id, _)| id == "b1-left-1"));
        assert!(inv.iter().any(|(id, _)| id.starts_with("W9#")));
        assert!(inv.iter().any(|(id, _)| id.starts_with("C2#")));
        assert!(inv.iter().all(|(_, m)| m.mul(m).is_identity() && !m.is_identity()));
    }
}
