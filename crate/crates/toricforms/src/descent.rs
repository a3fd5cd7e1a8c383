//! Forms of X_Σ: enumerate φ: G → Aut_Σ up to conjugacy, compute H¹ for
//! each, and count centralizer orbits where the field context allows it.

use serde::Serialize;
use thiserror::Error;

use crate::cohom::{compute_h1, is_fixed_by, CohomError, CohomExpr, H1Report, SubgroupKind, SubgroupRef};
use crate::fan::{automorphism_group, has_torus_factor, is_quasiprojective, Fan, FanError, QuasiProjectivity};
use crate::intlin::IntegerMatrix;
use crate::realforms::{real_orbit_count, tate_h1_real, RealFormsError};
use crate::simsolve::SearchOptions;
use crate::symgrp::{
    enumerate_homs_up_to_conjugacy, identify_isomorphism_type, FiniteGroup, GroupError, GroupHom, MatrixGroup,
    PresentedGroup,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldContext {
    Symbolic,
    /// K = ℂ, k = ℝ.
    RealComplex,
    /// Every relative Brauer group vanishes (finite fields).
    AllTrivialBrauer,
}

impl std::str::FromStr for FieldContext {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "symbolic" => Ok(FieldContext::Symbolic),
            "real" => Ok(FieldContext::RealComplex),
            "trivial" => Ok(FieldContext::AllTrivialBrauer),
            other => Err(format!("unknown context {other:?}; expected symbolic, real or trivial")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Evaluation {
    Order(u64),
    Unevaluable(String),
}

#[derive(Debug, Error)]
pub enum DescentError {
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Cohom(#[from] CohomError),
    #[error(transparent)]
    RealForms(#[from] RealFormsError),
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
}

fn subgroup_order(s: &SubgroupRef, g: &FiniteGroup) -> Option<usize> {
    match s.kind {
        SubgroupKind::Full => Some(g.order()),
        SubgroupKind::Trivial => Some(1),
        SubgroupKind::Proper if !s.elements.is_empty() => Some(s.elements.len()),
        SubgroupKind::Proper => None,
    }
}

/// Order of H¹ described by `expr`, where `g` is the reduced Galois group.
pub fn evaluate_expression(expr: &CohomExpr, ctx: FieldContext, g: &FiniteGroup) -> Evaluation {
    match ctx {
        // Lang: H¹ of a connected group over a finite field vanishes.
        FieldContext::AllTrivialBrauer => Evaluation::Order(1),
        FieldContext::Symbolic => {
            if expr.is_trivial() {
                Evaluation::Order(1)
            } else {
                Evaluation::Unevaluable("symbolic context".into())
            }
        }
        FieldContext::RealComplex => {
            if g.order() > 2 {
                return Evaluation::Unevaluable(format!("Galois group of order {} is not Gal(C/R)", g.order()));
            }
            evaluate_real(expr, g)
        }
    }
}

fn evaluate_real(expr: &CohomExpr, g: &FiniteGroup) -> Evaluation {
    // With |Ḡ| ≤ 2 the only nontrivial relative Brauer group is Br(ℝ|ℂ).
    let br = |base: &SubgroupRef, top: &SubgroupRef| -> Option<u64> {
        let (b, t) = (subgroup_order(base, g)?, subgroup_order(top, g)?);
        Some(if b == 2 && t == 1 { 2 } else { 1 })
    };
    let fail = || Evaluation::Unevaluable("subgroup not resolved in the Galois group".into());
    match expr {
        CohomExpr::Trivial => Evaluation::Order(1),
        CohomExpr::BrauerRel { base, top } => br(base, top).map_or_else(fail, Evaluation::Order),
        CohomExpr::Sum(parts) => {
            let mut acc = 1;
            for p in parts {
                match evaluate_real(p, g) {
                    Evaluation::Order(k) => acc *= k,
                    u => return u,
                }
            }
            Evaluation::Order(acc)
        }
        // Needs a dihedral group of order 6.
        CohomExpr::MQuotient { .. } => Evaluation::Unevaluable("M(r,s) over a group of order at most 2".into()),
        CohomExpr::NormKernel { inner, outer } => {
            // The norm from K^H is the identity on k when H = Ḡ and the
            // source vanishes otherwise, so the kernel is trivial.
            match (br(&inner.0, &inner.1), br(&outer.0, &outer.1)) {
                (Some(_), Some(_)) => Evaluation::Order(1),
                _ => fail(),
            }
        }
        // k^x → Br(K^I | K^H) is onto when I = Ḡ, and the target is trivial otherwise.
        CohomExpr::NormCokernel { base, top } => br(base, top).map_or_else(fail, |_| Evaluation::Order(1)),
        CohomExpr::Unresolved(r) => Evaluation::Unevaluable(format!("unresolved: {r}")),
    }
}

/// Result of the symbolic orbit step.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitStep {
    /// The centralizer fixes every generating class, so H¹/H⁰ = H¹.
    FixesAll,
    /// Some generating class has no symbolic fixing witness.
    Undetermined(String),
}

/// Checks, for every centralizer generator z and every generating cocycle,
/// that z·c is cohomologous to c by a formal coboundary.
pub fn symbolic_orbit_step(report: &H1Report, centralizer: &[IntegerMatrix]) -> OrbitStep {
    if report.expr.has_unresolved() {
        return OrbitStep::Undetermined("expression has unresolved parts".into());
    }
    let g = &report.reduced.group;
    for (i, c) in report.cocycles.iter().enumerate() {
        for z in centralizer {
            if !is_fixed_by(c, g, &report.reduced.family.mats, z) {
                return OrbitStep::Undetermined(format!("no formal witness that {z} fixes generator {i}"));
            }
        }
    }
    OrbitStep::FixesAll
}

/// H¹/H⁰ as an expression when the orbit step determines it.
pub fn orbit_quotient_expression(report: &H1Report, centralizer: &[IntegerMatrix]) -> Option<CohomExpr> {
    match symbolic_orbit_step(report, centralizer) {
        OrbitStep::FixesAll => Some(report.expr.clone()),
        OrbitStep::Undetermined(_) => None,
    }
}

/// Orbits of the centralizer on H¹ in a mechanical context.
pub fn centralizer_orbit_count(
    phi_images: &[IntegerMatrix],
    reduced_order: usize,
    centralizer: &[IntegerMatrix],
    ctx: FieldContext,
) -> Result<Evaluation, DescentError> {
    match ctx {
        FieldContext::AllTrivialBrauer => Ok(Evaluation::Order(1)),
        FieldContext::Symbolic => Ok(Evaluation::Unevaluable("orbits are not counted symbolically".into())),
        FieldContext::RealComplex => match reduced_order {
            1 => Ok(Evaluation::Order(1)),
            2 => {
                let a = phi_images.iter().find(|m| !m.is_identity()).expect("nontrivial image");
                Ok(Evaluation::Order(real_orbit_count(a, centralizer)?))
            }
            k => Ok(Evaluation::Unevaluable(format!("Galois group of order {k} is not Gal(C/R)"))),
        },
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassEntry {
    /// Images of the presented generators.
    pub images: Vec<Vec<Vec<i64>>>,
    pub image_type: String,
    pub image_order: usize,
    pub kernel_order: usize,
    pub centralizer_generators: Vec<Vec<Vec<i64>>>,
    pub centralizer_order: usize,
    pub h1: String,
    pub generators: Vec<String>,
    pub trace: Vec<String>,
    pub caveats: Vec<String>,
    pub orbit_step: OrbitStep,
    /// H¹/H⁰ when the orbit step determines it.
    pub h1_mod_h0: Option<String>,
    pub h1_order: Evaluation,
    pub orbits: Evaluation,
    /// Under ℂ/ℝ, whether the symbolic order matches the lattice oracle.
    pub oracle_agrees: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub fan_rays: usize,
    pub fan_cones: usize,
    pub aut_order: usize,
    pub aut_type: String,
    pub galois_order: usize,
    pub context: FieldContext,
    pub quadratic: bool,
    pub quasiprojective: QuasiProjectivity,
    pub warnings: Vec<String>,
    pub entries: Vec<ClassEntry>,
    /// Present iff every entry's orbit count was evaluated.
    pub total: Option<u64>,
}

#[derive(Clone, Copy, Debug)]
#[derive(Default)]
pub struct ClassifyOptions {
    pub search: SearchOptions,
    /// Abort instead of warning when the coproduct hypothesis fails.
    pub strict: bool,
    pub assume_quasiprojective: bool,
}


fn rows(m: &IntegerMatrix) -> Vec<Vec<i64>> {
    m.to_i64_rows().expect("entries fit in i64")
}

fn class_entry(
    phi: &GroupHom,
    aut: &MatrixGroup,
    ctx: FieldContext,
    opts: &ClassifyOptions,
) -> Result<ClassEntry, DescentError> {
    let report = compute_h1(phi, opts.search)?;
    let reduced = &report.reduced.group;
    let ag = aut.group();
    let image: Vec<usize> =
        report.reduced.family.mats.iter().map(|m| aut.index_of(m).expect("image lies in Aut")).collect();
    let cent = ag.centralizer(&image);
    let cent_gens: Vec<IntegerMatrix> =
        ag.subgroup_generators(&cent).into_iter().map(|x| aut.elements[x].clone()).collect();
    let cent_all: Vec<IntegerMatrix> = cent.iter().map(|&x| aut.elements[x].clone()).collect();
    let orbit_step = symbolic_orbit_step(&report, &cent_gens);
    let h1_mod_h0 = match orbit_step {
        OrbitStep::FixesAll => Some(report.text()),
        OrbitStep::Undetermined(_) => None,
    };
    let h1_order = evaluate_expression(&report.expr, ctx, reduced);
    // A trivial H¹ is a single orbit in every context.
    let orbits = if ctx == FieldContext::Symbolic && report.expr.is_trivial() {
        Evaluation::Order(1)
    } else {
        centralizer_orbit_count(&report.reduced.family.mats, reduced.order(), &cent_all, ctx)?
    };
    let oracle_agrees = match (ctx, reduced.order()) {
        (FieldContext::RealComplex, 2) => {
            let a = report.reduced.family.mats.iter().find(|m| !m.is_identity()).expect("nontrivial");
            let oracle = tate_h1_real(a)?.order();
            Some(h1_order == Evaluation::Order(oracle))
        }
        (FieldContext::RealComplex, 1) => Some(h1_order == Evaluation::Order(1)),
        _ => None,
    };
    let generators = report.cocycles.iter().map(|c| c.describe(reduced)).collect();
    Ok(ClassEntry {
        images: phi.images.iter().map(rows).collect(),
        image_type: identify_isomorphism_type(reduced).to_string(),
        image_order: reduced.order(),
        kernel_order: report.reduced.kernel.len(),
        centralizer_generators: cent_gens.iter().map(rows).collect(),
        centralizer_order: cent.len(),
        h1: report.text(),
        generators,
        trace: report.trace.clone(),
        caveats: report.caveats.clone(),
        orbit_step,
        h1_mod_h0,
        h1_order,
        orbits,
        oracle_agrees,
    })
}

pub fn classify(
    fan: &Fan,
    p: &PresentedGroup,
    ctx: FieldContext,
    opts: &ClassifyOptions,
) -> Result<ClassificationReport, DescentError> {
    if has_torus_factor(fan) {
        return Err(FanError::TorusFactor.into());
    }
    let aut = automorphism_group(fan)?;
    let galois_order = p.group().order();
    let quadratic = galois_order == 2;
    let qp = if opts.assume_quasiprojective { QuasiProjectivity::Yes } else { is_quasiprojective(fan) };
    let mut warnings = Vec::new();
    if !quadratic && qp != QuasiProjectivity::Yes {
        let msg = format!(
            "extension is not quadratic and quasi-projectivity is {qp}; the count of forms may not match H¹(G, Aut_Σ^T)"
        );
        if opts.strict {
            return Err(DescentError::Hypothesis(msg));
        }
        warnings.push(msg);
    }
    if ctx == FieldContext::RealComplex && !quadratic {
        warnings.push(format!("context real expects Gal(C/R) of order 2, got order {galois_order}"));
    }
    let homs = enumerate_homs_up_to_conjugacy(p, &aut)?;
    let entries =
        homs.iter().map(|phi| class_entry(phi, &aut, ctx, opts)).collect::<Result<Vec<_>, _>>()?;
    let total = entries
        .iter()
        .map(|e| match e.orbits {
            Evaluation::Order(k) => Some(k),
            Evaluation::Unevaluable(_) => None,
        })
        .sum::<Option<u64>>();
    let ag = aut.group();
    Ok(ClassificationReport {
        fan_rays: fan.rays.len(),
        fan_cones: fan.max_cones.len(),
        aut_order: aut.order(),
        aut_type: identify_isomorphism_type(ag).to_string(),
        galois_order,
        context: ctx,
        quadratic,
        quasiprojective: qp,
        warnings,
        entries,
        total,
    })
}

impl ClassificationReport {
    /// Plain-text table, one line per φ-class.
    pub fn render(&self) -> String {
        let mut out = format!(
            "Aut: {} (order {}), Galois group order {}, context {:?}\n",
            self.aut_type, self.aut_order, self.galois_order, self.context
        );
        for w in &self.warnings {
            out.push_str(&format!("warning: {w}\n"));
        }
        out.push_str("image      | kernel | |C| | H^1                              | H^1/H^0 | orbits\n");
        for e in &self.entries {
            let orbits = match &e.orbits {
                Evaluation::Order(k) => k.to_string(),
                Evaluation::Unevaluable(_) => "?".into(),
            };
            out.push_str(&format!(
                "{:<10} | {:>6} | {:>3} | {:<32} | {:<7} | {}\n",
                e.image_type,
                e.kernel_order,
                e.centralizer_order,
                e.h1,
                if e.h1_mod_h0.is_some() { "= H^1" } else { "?" },
                orbits
            ));
        }
        match self.total {
            Some(t) => out.push_str(&format!("total: {t}\n")),
            None => out.push_str("total: not evaluable in this context\n"),
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cohom::{compute_h1_family, parse_expr};
    use crate::intlin::ivec;
    use crate::symgrp::builtin_group;

    fn m(rows: &[&[i64]]) -> IntegerMatrix {
        IntegerMatrix::from_i64(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn ex48() -> Fan {
        Fan::face_fan(3, vec![ivec(&[1, 0, 1]), ivec(&[0, 1, 1]), ivec(&[1, 1, 0])])
    }

    #[test]
    fn evaluation_rules() {
        let p = builtin_group("Z2").unwrap();
        let g = p.group();
        let br = parse_expr("Br(k|L)").unwrap();
        assert_eq!(evaluate_expression(&br, FieldContext::RealComplex, g), Evaluation::Order(2));
        assert_eq!(evaluate_expression(&CohomExpr::Trivial, FieldContext::Symbolic, g), Evaluation::Order(1));
        assert!(matches!(evaluate_expression(&br, FieldContext::Symbolic, g), Evaluation::Unevaluable(_)));
        let d6 = builtin_group("D6").unwrap();
        let sum = parse_expr("Br(k|L^<s>) (+) Br(k|L^<r>)").unwrap();
        assert_eq!(evaluate_expression(&sum, FieldContext::AllTrivialBrauer, d6.group()), Evaluation::Order(1));
        assert!(matches!(evaluate_expression(&sum, FieldContext::RealComplex, d6.group()), Evaluation::Unevaluable(_)));
    }

    #[test]
    fn orbit_counts() {
        let s = m(&[&[0, 0, -1], &[0, -1, 0], &[-1, 0, 0]]);
        let cent = [IntegerMatrix::identity(3), s.clone()];
        assert_eq!(
            centralizer_orbit_count(&[IntegerMatrix::identity(3), s.clone()], 2, &cent, FieldContext::RealComplex)
                .unwrap(),
            Evaluation::Order(2)
        );
        assert_eq!(centralizer_orbit_count(&[], 2, &cent, FieldContext::AllTrivialBrauer).unwrap(), Evaluation::Order(1));
        let a = IntegerMatrix::identity(2).neg();
        assert_eq!(
            centralizer_orbit_count(&[IntegerMatrix::identity(2), a], 2, &[], FieldContext::RealComplex).unwrap(),
            Evaluation::Order(4)
        );
    }

    #[test]
    fn example_48_contexts() {
        let fan = ex48();
        for (group, total) in [("Z2", 2), ("Z3", 2)] {
            let p = builtin_group(group).unwrap();
            let rep = classify(&fan, &p, FieldContext::AllTrivialBrauer, &ClassifyOptions::default()).unwrap();
            assert_eq!(rep.total, Some(total), "{group}");
            assert_eq!(rep.entries.iter().filter(|e| e.image_order == 1).count(), 1);
        }
        let p = builtin_group("Z2").unwrap();
        let rep = classify(&fan, &p, FieldContext::RealComplex, &ClassifyOptions::default()).unwrap();
        assert_eq!(rep.total, Some(2));
        assert!(rep.entries.iter().all(|e| e.oracle_agrees == Some(true)));
    }

    #[test]
    fn symbolic_counts_trivial_classes() {
        for group in ["Z2", "Z3"] {
            let p = builtin_group(group).unwrap();
            let rep = classify(&ex48(), &p, FieldContext::Symbolic, &ClassifyOptions::default()).unwrap();
            assert!(rep.entries.iter().all(|e| e.h1 == "1"));
            assert_eq!(rep.total, Some(2), "{group}");
        }
    }

    #[test]
    fn torus_factor_is_an_error() {
        let fan = Fan::face_fan(3, vec![ivec(&[1, 0, -1]), ivec(&[0, -1, 1]), ivec(&[-1, 1, 0])]);
        let p = builtin_group("Z2").unwrap();
        assert!(classify(&fan, &p, FieldContext::RealComplex, &ClassifyOptions::default()).is_err());
    }

    #[test]
    fn orbit_step_on_reflection_classes() {
        // W_9 with image <s>: the centralizer <s> fixes the class.
        let s = m(&[&[0, 0, -1], &[0, -1, 0], &[-1, 0, 0]]);
        let rep = compute_h1_family(std::slice::from_ref(&s), &["s"], SearchOptions::default()).unwrap();
        assert_eq!(symbolic_orbit_step(&rep, &[s]), OrbitStep::FixesAll);
    }

    #[test]
    fn strict_mode_refuses_non_quadratic_without_quasiprojectivity() {
        let fan = Fan::rays_only(3, vec![ivec(&[1, 0, 1]), ivec(&[0, 1, 1]), ivec(&[1, 1, 0])]);
        let p = builtin_group("Z3").unwrap();
        let opts = ClassifyOptions { strict: true, ..Default::default() };
        let res = classify(&fan, &p, FieldContext::AllTrivialBrauer, &opts);
        match is_quasiprojective(&fan) {
            QuasiProjectivity::Yes => assert!(res.is_ok()),
            _ => assert!(matches!(res, Err(DescentError::Hypothesis(_)))),
        }
    }
}
