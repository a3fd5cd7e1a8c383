//! Symbolic H¹ of twisted tori: expressions in relative Brauer groups with
//! explicit generating cocycles.

pub mod cocycle;
pub mod expr;
pub mod induced;
pub mod tactics;

use thiserror::Error;

pub use cocycle::{is_fixed_by, verify_cocycle, CocycleSpec, SymbolParam};
pub use expr::{canonical_text, parse_expr, resolve_in, CohomExpr, ExprParseError, SubgroupKind, SubgroupRef};
pub use induced::{InducedError, InducedOperators};
pub use tactics::{Engine, Family, H1Part};

use crate::intlin::{is_unimodular, unimodular_inverse, IntegerMatrix};
use crate::simsolve::SearchOptions;
use crate::symgrp::{
    enumerate_characters, parse_word, Character, FiniteGroup, GroupError, GroupHom, DEFAULT_CLOSURE_CAP,
};

#[derive(Debug, Error)]
pub enum CohomError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Induced(#[from] InducedError),
    #[error("no character of {subgroup} takes the given values")]
    NoSuchCharacter { subgroup: String },
    #[error("certificate row is malformed: {0}")]
    Malformed(String),
}

/// The image of φ as an abstract group, with its matrices.
#[derive(Clone, Debug)]
pub struct ReducedGroup {
    pub group: FiniteGroup,
    pub family: Family,
    /// Kernel of φ, as elements of the presented group.
    pub kernel: Vec<usize>,
}

impl ReducedGroup {
    pub fn from_hom(phi: &GroupHom) -> Result<Self, GroupError> {
        let n = phi.target.n;
        let (group, mats) = FiniteGroup::from_generators(
            IntegerMatrix::identity(n),
            &phi.images,
            &phi.source.generator_names,
            |a, b| a.mul(b),
            DEFAULT_CLOSURE_CAP,
        )?;
        let kernel =
            phi.element_images().iter().enumerate().filter(|(_, m)| m.is_identity()).map(|(i, _)| i).collect();
        Ok(ReducedGroup { group, family: Family { n, mats }, kernel })
    }

    /// A faithful family given by generator matrices and names.
    pub fn from_matrices(gens: &[IntegerMatrix], names: &[String]) -> Result<Self, GroupError> {
        let n = gens.first().map_or(0, |m| m.rows());
        let (group, mats) =
            FiniteGroup::from_generators(IntegerMatrix::identity(n), gens, names, |a, b| a.mul(b), DEFAULT_CLOSURE_CAP)?;
        Ok(ReducedGroup { group, family: Family { n, mats }, kernel: vec![0] })
    }
}

#[derive(Clone, Debug)]
pub struct H1Report {
    pub reduced: ReducedGroup,
    pub expr: CohomExpr,
    pub cocycles: Vec<CocycleSpec>,
    pub trace: Vec<String>,
    pub caveats: Vec<String>,
}

impl H1Report {
    pub fn text(&self) -> String {
        self.expr.to_string()
    }
}

/// H¹ of the torus twisted by φ.
pub fn compute_h1(phi: &GroupHom, opts: SearchOptions) -> Result<H1Report, CohomError> {
    Ok(compute_h1_reduced(ReducedGroup::from_hom(phi)?, opts))
}

pub fn compute_h1_reduced(reduced: ReducedGroup, opts: SearchOptions) -> H1Report {
    let engine = Engine::new(&reduced.group, opts);
    let part = engine.h1(&reduced.family);
    let mut caveats = Vec::new();
    for (i, c) in part.cocycles.iter().enumerate() {
        if !verify_cocycle(c, &reduced.group, &reduced.family.mats) {
            caveats.push(format!("generator {i} failed the cocycle identity"));
        }
    }
    if part.expr.has_unresolved() {
        caveats.push("expression contains unresolved parts".into());
    }
    let expr = part.expr.canonicalize(&reduced.group);
    H1Report { expr, cocycles: part.cocycles, trace: part.trace, caveats, reduced }
}

/// H¹ for a faithful family given by generators.
pub fn compute_h1_family(gens: &[IntegerMatrix], names: &[&str], opts: SearchOptions) -> Result<H1Report, CohomError> {
    let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
    Ok(compute_h1_reduced(ReducedGroup::from_matrices(gens, &names)?, opts))
}

/// Which theorem a certificate row claims.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificateKind {
    /// T^{-1} g_i T = T_{g_i}.
    InducedIsomorphism,
    /// T^{-1} T_{g_i} T = [[U(g_i), 0], [*, g_i]].
    InducedSummand,
}

/// A certificate in terms of words in the family's generator names.
#[derive(Clone, Debug)]
pub struct CertificateCheck {
    pub kind: CertificateKind,
    pub family: Vec<IntegerMatrix>,
    pub names: Vec<String>,
    /// Generators of H, as words.
    pub subgroup: Vec<String>,
    /// Values of U: on the words of `subgroup` for the isomorphism case,
    /// on the family generators for the summand case.
    pub character: Vec<i8>,
    /// Coset representatives, as words.
    pub reps: Vec<String>,
    /// Identity when absent.
    pub t: Option<IntegerMatrix>,
}

pub(crate) fn word_element(g: &FiniteGroup, w: &str) -> Result<usize, CohomError> {
    Ok(g.eval(&parse_word(w, g.generator_names())?))
}

fn character_with_values(
    g: &FiniteGroup,
    sub: &[usize],
    at: &[usize],
    values: &[i8],
) -> Result<Character, CohomError> {
    enumerate_characters(g, sub)
        .into_iter()
        .find(|c| at.iter().zip(values).all(|(&x, &v)| c.value(x) == Some(v)))
        .ok_or_else(|| CohomError::NoSuchCharacter { subgroup: g.subgroup_name(sub) })
}

/// Induced operators for a certificate row: H from words, U from its values
/// (on the subgroup generators or on all of G, per `kind`), and the given
/// coset representatives.
pub fn certificate_operators(
    g: &FiniteGroup,
    kind: CertificateKind,
    subgroup: &[String],
    character: &[i8],
    reps: &[String],
) -> Result<InducedOperators, CohomError> {
    let hgens: Vec<usize> = subgroup.iter().map(|w| word_element(g, w)).collect::<Result<_, _>>()?;
    let h = g.closure(&hgens);
    let chi = match kind {
        CertificateKind::InducedIsomorphism => {
            if character.len() != hgens.len() {
                return Err(CohomError::Malformed("one character value per subgroup generator".into()));
            }
            character_with_values(g, &h, &hgens, character)?
        }
        CertificateKind::InducedSummand => {
            if character.len() != g.generators().len() {
                return Err(CohomError::Malformed("one character value per family generator".into()));
            }
            let all: Vec<usize> = g.elements().collect();
            character_with_values(g, &all, g.generators(), character)?.restrict(&h)
        }
    };
    let reps: Vec<usize> = reps.iter().map(|w| word_element(g, w)).collect::<Result<_, _>>()?;
    Ok(InducedOperators::with_reps(g, &chi, reps)?)
}

/// Rebuilds T_g from the row's subgroup, character and basis and checks
/// the relation the row claims.
pub fn verify_certificate(row: &CertificateCheck) -> Result<bool, CohomError> {
    let reduced = ReducedGroup::from_matrices(&row.family, &row.names)?;
    let g = &reduced.group;
    let ops = certificate_operators(g, row.kind, &row.subgroup, &row.character, &row.reps)?;
    let dim = ops.dim();
    let t = row.t.clone().unwrap_or_else(|| IntegerMatrix::identity(dim));
    if t.rows() != dim || !is_unimodular(&t) {
        return Ok(false);
    }
    let tinv = unimodular_inverse(&t).expect("checked unimodular");
    let n = reduced.family.n;
    for (i, &x) in g.generators().iter().enumerate() {
        let tg = ops.matrix(g, x);
        let gi = &row.family[i];
        let ok = match row.kind {
            CertificateKind::InducedIsomorphism => dim == n && tinv.mul(gi).mul(&t) == tg,
            CertificateKind::InducedSummand => {
                let m = tinv.mul(&tg).mul(&t);
                let u = row.character[i] as i64;
                dim == n + 1
                    && *m.get(0, 0) == u.into()
                    && m.submatrix(0, 1, 1, dim).is_zero()
                    && m.submatrix(1, dim, 1, dim) == *gi
            }
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests;
