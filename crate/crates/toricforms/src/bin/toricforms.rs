use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::json;

use toricforms::acceptance::{d6_grid, match_table1, run_all, AcceptanceOptions};
use toricforms::cohom::{compute_h1, compute_h1_family, verify_cocycle, CohomError, H1Report};
use toricforms::descent::{classify, ClassifyOptions, DescentError, FieldContext};
use toricforms::fan::{automorphism_group, has_torus_factor, is_quasiprojective, validate_fan, Fan, FanError};
use toricforms::fixtures::{load_fixtures, load_fixtures_from, verify_fixtures};
use toricforms::intlin::{unimodular_inverse, IntegerMatrix};
use toricforms::realforms::{real_forms, RealFormsError};
use toricforms::simsolve::{simultaneously_similar, SearchOptions, SimilarityResult};
use toricforms::symgrp::{builtin_group, identify_isomorphism_type, GroupError, GroupHom, GroupSpec, PresentedGroup};

#[derive(Parser)]
#[command(name = "toricforms", version, about = "Forms of split toric varieties from their fans")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Print a JSON document instead of a table.
    #[arg(long, global = true)]
    json: bool,
    /// Largest coefficient tried in the similarity sweep.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    bound: Option<u64>,
    /// Candidates examined by the similarity sweep before giving up.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    candidate_cap: Option<u64>,
}

impl Global {
    fn search(&self) -> SearchOptions {
        let mut o = SearchOptions::default();
        if let Some(b) = self.bound {
            o.bound = b as usize;
        }
        if let Some(c) = self.candidate_cap {
            o.candidate_cap = c as usize;
        }
        o
    }
}

#[derive(Subcommand)]
enum Command {
    /// Checks on a fan document.
    Fan {
        #[command(subcommand)]
        action: FanAction,
    },
    /// Forms of X_Σ over a Galois group: H¹ and orbit counts per class of φ.
    Classify {
        #[arg(long)]
        fan: PathBuf,
        /// Builtin name (Z2, D6, ...) or a group document.
        #[arg(long)]
        group: String,
        #[arg(long, value_parser = ["symbolic", "real", "trivial"])]
        context: String,
        /// Fail instead of warning when the hypotheses are not met.
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        assume_quasiprojective: bool,
    },
    /// ℂ/ℝ-forms counted from the lattice alone.
    Realforms {
        #[arg(long)]
        fan: PathBuf,
    },
    /// Simultaneous GL(n,ℤ)-similarity of two matrix families.
    Similar {
        #[arg(long = "family", num_args = 1, required = true)]
        families: Vec<PathBuf>,
    },
    /// H¹(G, T) for a family of matrices, optionally as images of a group.
    Cohomology {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        group: Option<String>,
    },
    /// Fixture self-check and the acceptance criteria.
    VerifyPaper {
        #[arg(long, default_value_t = AcceptanceOptions::default().seed)]
        seed: u64,
        /// Read fixtures from this directory instead of the embedded copy.
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum FanAction {
    Validate { fan: PathBuf },
    /// Aut_Σ, with its D6 class when it has one.
    Aut { fan: PathBuf },
    /// Quasi-projectivity.
    Qproj { fan: PathBuf },
}

enum Failure {
    Domain(String),
    Usage(String),
    Exhausted(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Domain(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Exhausted(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Domain(m) | Failure::Usage(m) | Failure::Exhausted(m) => m,
        }
    }
}

fn is_cap(e: &GroupError) -> bool {
    matches!(
        e,
        GroupError::ClosureExceedsCap(_)
            | GroupError::GroupTooLarge(..)
            | GroupError::CosetCapExceeded(_)
            | GroupError::SearchTooLarge(_)
    )
}

/// Errors in what the user typed rather than in the mathematics.
fn is_usage(e: &GroupError) -> bool {
    matches!(e, GroupError::ArityMismatch(..) | GroupError::BadWord(_) | GroupError::UnknownBuiltin(_))
}

/// The group error behind a library error, if any.
trait GroupCause {
    fn group_cause(&self) -> Option<&GroupError>;
}

impl GroupCause for GroupError {
    fn group_cause(&self) -> Option<&GroupError> {
        Some(self)
    }
}

impl GroupCause for FanError {
    fn group_cause(&self) -> Option<&GroupError> {
        match self {
            FanError::Group(g) => Some(g),
            _ => None,
        }
    }
}

impl GroupCause for CohomError {
    fn group_cause(&self) -> Option<&GroupError> {
        match self {
            CohomError::Group(g) => Some(g),
            _ => None,
        }
    }
}

impl GroupCause for RealFormsError {
    fn group_cause(&self) -> Option<&GroupError> {
        match self {
            RealFormsError::Fan(f) => f.group_cause(),
            _ => None,
        }
    }
}

impl GroupCause for DescentError {
    fn group_cause(&self) -> Option<&GroupError> {
        match self {
            DescentError::Fan(f) => f.group_cause(),
            DescentError::Group(g) => Some(g),
            DescentError::Cohom(c) => c.group_cause(),
            DescentError::RealForms(r) => r.group_cause(),
            DescentError::Hypothesis(_) => None,
        }
    }
}

macro_rules! failure_from {
    ($($t:ty),*) => {$(
        impl From<$t> for Failure {
            fn from(e: $t) -> Self {
                match e.group_cause() {
                    Some(g) if is_cap(g) => Failure::Exhausted(e.to_string()),
                    Some(g) if is_usage(g) => Failure::Usage(e.to_string()),
                    _ => Failure::Domain(e.to_string()),
                }
            }
        }
    )*};
}

failure_from!(FanError, GroupError, CohomError, DescentError, RealFormsError);

type Outcome = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_fan(path: &Path) -> Result<Fan, Failure> {
    Fan::from_json(&read(path)?).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// A family document: an array of matrices, or `{"names": [...],
/// "generators": [...]}`.
#[derive(Deserialize)]
#[serde(untagged)]
enum FamilyDoc {
    Bare(Vec<Vec<Vec<i64>>>),
    Named { names: Vec<String>, generators: Vec<Vec<Vec<i64>>> },
}

fn read_family(path: &Path) -> Result<(Vec<String>, Vec<IntegerMatrix>), Failure> {
    let bad = |why: String| Failure::Usage(format!("{}: {why}", path.display()));
    let doc: FamilyDoc = serde_json::from_str(&read(path)?).map_err(|e| bad(e.to_string()))?;
    let (names, raw) = match doc {
        FamilyDoc::Bare(m) => ((1..=m.len()).map(|i| format!("g{i}")).collect(), m),
        FamilyDoc::Named { names, generators } => (names, generators),
    };
    if raw.is_empty() || names.len() != raw.len() {
        return Err(bad("need one name per matrix and at least one matrix".into()));
    }
    let mats = toricforms::fixtures::to_matrices(&raw).map_err(bad)?;
    let n = mats[0].rows();
    if mats.iter().any(|m| m.rows() != n || m.cols() != n) {
        return Err(bad("matrices must be square of one size".into()));
    }
    Ok((names, mats))
}

fn read_group(spec: &str) -> Result<PresentedGroup, Failure> {
    let path = Path::new(spec);
    if path.exists() {
        let doc: GroupSpec = serde_json::from_str(&read(path)?)
            .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        return Ok(PresentedGroup::from_spec(&doc)?);
    }
    builtin_group(spec).map_err(|e| Failure::Usage(e.to_string()))
}

fn rows(m: &IntegerMatrix) -> Vec<Vec<i64>> {
    m.to_i64_rows().expect("entries fit in i64")
}

fn emit(json: bool, doc: serde_json::Value, human: impl FnOnce() -> String) {
    if json {
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
    } else {
        print!("{}", human());
    }
}

fn fan_validate(g: &Global, path: &Path) -> Outcome {
    let fan = read_fan(path)?;
    let report = validate_fan(&fan);
    let valid = report.is_valid();
    let torus = valid && has_torus_factor(&fan);
    emit(g.json, json!({ "valid": valid, "torus_factor": torus, "report": report }), || {
        if valid {
            format!("valid fan: {} rays, {} maximal cones, torus factor: {torus}\n", fan.rays.len(), fan.max_cones.len())
        } else {
            format!("invalid fan: {report}\n")
        }
    });
    Ok(if valid { 0 } else { 1 })
}

fn fan_aut(g: &Global, path: &Path) -> Outcome {
    let fan = read_fan(path)?;
    let aut = automorphism_group(&fan)?;
    let ty = identify_isomorphism_type(aut.group());
    let set = load_fixtures().map_err(|e| Failure::Domain(e.to_string()))?;
    let matched = match_table1(&set, &aut).map(|(label, t)| {
        let tinv = unimodular_inverse(&t).expect("witness is unimodular");
        let fam = set.table1_family(&label).expect("matched label exists");
        let gens: Vec<IntegerMatrix> = fam.iter().map(|h| t.mul(h).mul(&tinv)).collect();
        (label, t, gens)
    });
    let gens = match &matched {
        Some((_, _, gens)) => gens.clone(),
        None => aut.generators(),
    };
    let doc = json!({
        "order": aut.order(),
        "type": ty.to_string(),
        "generators": gens.iter().map(rows).collect::<Vec<_>>(),
        "table1_class": matched.as_ref().map(|(l, _, _)| l.clone()),
        "witness": matched.as_ref().map(|(_, t, _)| rows(t)),
    });
    emit(g.json, doc, || {
        let mut out = format!("Aut: {ty} of order {}\n", aut.order());
        if let Some((l, t, _)) = &matched {
            out += &format!("class {l} via T = {t}; generators T·r·T⁻¹, T·s·T⁻¹:\n");
        } else {
            out += "generators:\n";
        }
        for m in &gens {
            out += &format!("  {m}\n");
        }
        out
    });
    Ok(0)
}

fn fan_qproj(g: &Global, path: &Path) -> Outcome {
    let fan = read_fan(path)?;
    let qp = is_quasiprojective(&fan);
    emit(g.json, json!({ "quasiprojective": qp }), || format!("quasi-projective: {qp}\n"));
    Ok(0)
}

fn run_classify(
    g: &Global,
    fan: &Path,
    group: &str,
    context: &str,
    strict: bool,
    assume_quasiprojective: bool,
) -> Outcome {
    let fan = read_fan(fan)?;
    let p = read_group(group)?;
    let ctx: FieldContext = context.parse().map_err(Failure::Usage)?;
    let opts = ClassifyOptions { search: g.search(), strict, assume_quasiprojective };
    let report = classify(&fan, &p, ctx, &opts)?;
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    emit(g.json, serde_json::to_value(&report).expect("serializable"), || report.render());
    Ok(0)
}

fn run_realforms(g: &Global, fan: &Path) -> Outcome {
    let report = real_forms(&read_fan(fan)?)?;
    emit(g.json, serde_json::to_value(&report).expect("serializable"), || {
        let mut out = format!("Aut_Σ of order {}; {} real forms\n", report.aut_order, report.total);
        out += "  split form: 1\n";
        for e in &report.entries {
            out += &format!(
                "  involution {:?} (class of {}): H¹ of order {}, {} orbits\n",
                e.involution, e.class_size, e.h1_order, e.orbits
            );
        }
        out
    });
    Ok(0)
}

fn run_similar(g: &Global, families: &[PathBuf]) -> Outcome {
    if families.len() != 2 {
        return Err(Failure::Usage("similar takes exactly two --family arguments".into()));
    }
    let (_, a) = read_family(&families[0])?;
    let (_, b) = read_family(&families[1])?;
    if a.len() != b.len() || a[0].rows() != b[0].rows() {
        return Err(Failure::Usage("families differ in length or matrix size".into()));
    }
    let result = simultaneously_similar(&a, &b, g.search());
    let (doc, text, code) = match &result {
        SimilarityResult::Found(t) => (
            json!({ "result": "found", "witness": rows(t) }),
            format!("similar: T = {t} satisfies T⁻¹·A_i·T = B_i\n"),
            0,
        ),
        SimilarityResult::ProvablyDistinct(c) => (
            json!({ "result": "provably_distinct", "certificate": c }),
            format!("not similar: {c:?}\n"),
            0,
        ),
        SimilarityResult::NotFoundWithinBound(b) => (
            json!({ "result": "not_found_within_bound", "bound": b }),
            format!("undecided: no witness with coefficients up to {b}\n"),
            3,
        ),
    };
    emit(g.json, doc, || text);
    Ok(code)
}

#[derive(Serialize)]
struct CocycleOut {
    description: String,
    verified: bool,
}

fn h1_document(report: &H1Report) -> serde_json::Value {
    let g = &report.reduced.group;
    let cocycles: Vec<CocycleOut> = report
        .cocycles
        .iter()
        .map(|c| CocycleOut { description: c.describe(g), verified: verify_cocycle(c, g, &report.reduced.family.mats) })
        .collect();
    json!({
        "h1": report.text(),
        "galois_order": g.order(),
        "kernel_order": report.reduced.kernel.len(),
        "cocycles": cocycles,
        "trace": report.trace,
        "caveats": report.caveats,
    })
}

fn run_cohomology(g: &Global, family: &Path, group: Option<&str>) -> Outcome {
    let (names, mats) = read_family(family)?;
    let report = match group {
        Some(spec) => {
            let p = read_group(spec)?;
            compute_h1(&GroupHom::into_generated(p, mats)?, g.search())?
        }
        None => {
            let names: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
            compute_h1_family(&mats, &names, g.search())?
        }
    };
    for c in &report.caveats {
        eprintln!("caveat: {c}");
    }
    let doc = h1_document(&report);
    emit(g.json, doc.clone(), || {
        let mut out = format!("H¹ = {}\n", report.text());
        for c in doc["cocycles"].as_array().into_iter().flatten() {
            out += &format!("  cocycle {} (verified: {})\n", c["description"].as_str().unwrap_or(""), c["verified"]);
        }
        for t in &report.trace {
            out += &format!("  trace: {t}\n");
        }
        out
    });
    Ok(0)
}

fn verify_paper(g: &Global, seed: u64, dir: Option<&Path>) -> Outcome {
    let set = match dir {
        Some(d) => load_fixtures_from(d),
        None => load_fixtures(),
    }
    .map_err(|e| Failure::Domain(e.to_string()))?;
    let fixtures = verify_fixtures(&set).map_err(|e| Failure::Domain(e.to_string()))?;
    let opts = AcceptanceOptions { seed, ..Default::default() };
    let results = run_all(&set, &opts);
    let all = results.iter().all(|r| r.pass);
    let grid = d6_grid(&set);
    let doc = json!({ "fixtures": fixtures, "criteria": results, "d6_table": grid, "all_pass": all });
    emit(g.json, doc, || {
        let mut out = format!(
            "fixtures: ok ({} certificate rows, {} table cells, {} lemma rows)\n\n",
            fixtures.certificates_printed.len() + fixtures.certificates_reconstructed.len(),
            fixtures.thm46_cells,
            fixtures.appendix_b_rows
        );
        let w = grid.iter().flat_map(|(_, c)| c.iter().map(|s| s.chars().count())).max().unwrap_or(2).max(2);
        out += &format!("{:<5}| {:<w$} | {:<w$} | {:<w$}\n", "", "Z2", "Z3", "D6");
        for (class, cells) in &grid {
            out += &format!("{class:<5}| {:<w$} | {:<w$} | {:<w$}\n", cells[0], cells[1], cells[2]);
        }
        out += "\n";
        for r in &results {
            out += &r.line();
            out += "\n";
            for n in &r.notes {
                out += &format!("    {n}\n");
            }
        }
        out += &format!("\n{} of {} criteria pass\n", results.iter().filter(|r| r.pass).count(), results.len());
        out
    });
    Ok(if all { 0 } else { 1 })
}

fn run(cli: &Cli) -> Outcome {
    let g = &cli.global;
    match &cli.command {
        Command::Fan { action } => match action {
            FanAction::Validate { fan } => fan_validate(g, fan),
            FanAction::Aut { fan } => fan_aut(g, fan),
            FanAction::Qproj { fan } => fan_qproj(g, fan),
        },
        Command::Classify { fan, group, context, strict, assume_quasiprojective } => {
            run_classify(g, fan, group, context, *strict, *assume_quasiprojective)
        }
        Command::Realforms { fan } => run_realforms(g, fan),
        Command::Similar { families } => run_similar(g, families),
        Command::Cohomology { family, group } => run_cohomology(g, family, group.as_deref()),
        Command::VerifyPaper { seed, fixtures } => verify_paper(g, *seed, fixtures.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
