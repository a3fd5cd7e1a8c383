//! Cohomology expressions: an AST over relative Brauer groups with a stable
//! text form, a parser for it, and canonicalization under conjugation.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::symgrp::{parse_word, FiniteGroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprParseError {
    #[error("cannot parse expression at {0:?}")]
    Syntax(String),
    #[error("unknown subgroup or element {0:?}")]
    Unknown(String),
}

/// A subgroup of the reduced Galois group, used through its fixed field.
/// Parsed expressions carry only the name; `elements` is then empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubgroupRef {
    pub elements: Vec<usize>,
    pub name: String,
    pub kind: SubgroupKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SubgroupKind {
    Full,
    Trivial,
    Proper,
}

impl SubgroupRef {
    pub fn new(g: &FiniteGroup, elements: &[usize]) -> Self {
        let mut e = elements.to_vec();
        e.sort_unstable();
        let kind = if e.len() == g.order() {
            SubgroupKind::Full
        } else if e.len() <= 1 {
            SubgroupKind::Trivial
        } else {
            SubgroupKind::Proper
        };
        SubgroupRef { name: g.subgroup_name(&e), elements: e, kind }
    }

    /// Fixed field text: `k`, `L`, or `L^<...>`.
    pub fn field(&self) -> String {
        match self.kind {
            SubgroupKind::Full => "k".into(),
            SubgroupKind::Trivial => "L".into(),
            SubgroupKind::Proper => format!("L^{}", self.name),
        }
    }

    fn same_subgroup(&self, other: &SubgroupRef) -> bool {
        if self.kind != other.kind {
            return false;
        }
        match self.kind {
            SubgroupKind::Proper => {
                if self.elements.is_empty() || other.elements.is_empty() {
                    self.name == other.name
                } else {
                    self.elements == other.elements
                }
            }
            _ => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CohomExpr {
    Trivial,
    /// Br(L^base | L^top), with top contained in base.
    BrauerRel { base: SubgroupRef, top: SubgroupRef },
    Sum(Vec<CohomExpr>),
    /// {a : r(a) = a, s(a) = a^-1} modulo norms, named by its elements.
    MQuotient { r: String, s: String, r_index: Option<usize>, s_index: Option<usize> },
    /// Kernel of the norm-induced map between two relative Brauer groups.
    NormKernel { inner: (SubgroupRef, SubgroupRef), outer: (SubgroupRef, SubgroupRef) },
    /// Cokernel of k^x -> Br(L^base | L^top).
    NormCokernel { base: SubgroupRef, top: SubgroupRef },
    Unresolved(String),
}

impl CohomExpr {
    pub fn brauer(base: SubgroupRef, top: SubgroupRef) -> Self {
        if base.same_subgroup(&top) {
            CohomExpr::Trivial
        } else {
            CohomExpr::BrauerRel { base, top }
        }
    }

    pub fn m_quotient(g: &FiniteGroup, r: usize, s: usize) -> Self {
        CohomExpr::MQuotient { r: g.element_name(r), s: g.element_name(s), r_index: Some(r), s_index: Some(s) }
    }

    /// Flattened, trivial summands dropped, sorted by text.
    pub fn sum(parts: Vec<CohomExpr>) -> Self {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                CohomExpr::Sum(inner) => flat.extend(inner),
                CohomExpr::Trivial => {}
                other => flat.push(other),
            }
        }
        flat.retain(|p| *p != CohomExpr::Trivial);
        flat.sort_by_key(|p| p.to_string());
        match flat.len() {
            0 => CohomExpr::Trivial,
            1 => flat.pop().unwrap(),
            _ => CohomExpr::Sum(flat),
        }
    }

    pub fn summands(&self) -> Vec<&CohomExpr> {
        match self {
            CohomExpr::Sum(v) => v.iter().collect(),
            CohomExpr::Trivial => vec![],
            other => vec![other],
        }
    }

    pub fn is_trivial(&self) -> bool {
        *self == CohomExpr::Trivial
    }

    pub fn has_unresolved(&self) -> bool {
        self.summands().iter().any(|s| matches!(s, CohomExpr::Unresolved(_)))
    }

    /// Replaces every node by its least conjugate (subgroups compared by
    /// sorted element lists, elements by index). Nodes parsed from text are
    /// left untouched.
    pub fn canonicalize(&self, g: &FiniteGroup) -> CohomExpr {
        let conj_sub = |x: usize, s: &SubgroupRef| -> Vec<usize> { g.conjugate_subgroup(x, &s.elements) };
        match self {
            CohomExpr::Sum(v) => CohomExpr::sum(v.iter().map(|e| e.canonicalize(g)).collect()),
            CohomExpr::BrauerRel { base, top } if !base.elements.is_empty() => {
                let best = g
                    .elements()
                    .map(|x| (conj_sub(x, base), conj_sub(x, top)))
                    .min()
                    .expect("nonempty group");
                CohomExpr::brauer(SubgroupRef::new(g, &best.0), SubgroupRef::new(g, &best.1))
            }
            CohomExpr::NormCokernel { base, top } if !base.elements.is_empty() => {
                let best = g
                    .elements()
                    .map(|x| (conj_sub(x, base), conj_sub(x, top)))
                    .min()
                    .expect("nonempty group");
                CohomExpr::NormCokernel { base: SubgroupRef::new(g, &best.0), top: SubgroupRef::new(g, &best.1) }
            }
            CohomExpr::NormKernel { inner, outer } if !inner.0.elements.is_empty() => {
                let best = g
                    .elements()
                    .map(|x| {
                        (conj_sub(x, &inner.0), conj_sub(x, &inner.1), conj_sub(x, &outer.0), conj_sub(x, &outer.1))
                    })
                    .min()
                    .expect("nonempty group");
                CohomExpr::NormKernel {
                    inner: (SubgroupRef::new(g, &best.0), SubgroupRef::new(g, &best.1)),
                    outer: (SubgroupRef::new(g, &best.2), SubgroupRef::new(g, &best.3)),
                }
            }
            CohomExpr::MQuotient { r_index: Some(r), s_index: Some(s), .. } => {
                // M only sees the subgroup generated by r
                let best = g
                    .elements()
                    .flat_map(|x| [(g.conj(x, *r), g.conj(x, *s)), (g.conj(x, g.inv(*r)), g.conj(x, *s))])
                    .min()
                    .expect("nonempty group");
                CohomExpr::m_quotient(g, best.0, best.1)
            }
            other => other.clone(),
        }
    }
}

impl fmt::Display for CohomExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CohomExpr::Trivial => write!(f, "1"),
            CohomExpr::BrauerRel { base, top } => write!(f, "Br({}|{})", base.field(), top.field()),
            CohomExpr::Sum(v) => {
                let parts: Vec<String> = v.iter().map(|e| e.to_string()).collect();
                write!(f, "{}", parts.join(" (+) "))
            }
            CohomExpr::MQuotient { r, s, .. } => write!(f, "M({r},{s})"),
            CohomExpr::NormKernel { inner, outer } => write!(
                f,
                "Ker(Br({}|{}) -> Br({}|{}))",
                inner.0.field(),
                inner.1.field(),
                outer.0.field(),
                outer.1.field()
            ),
            CohomExpr::NormCokernel { base, top } => write!(f, "Coker(k^x -> Br({}|{}))", base.field(), top.field()),
            CohomExpr::Unresolved(reason) => write!(f, "?({reason})"),
        }
    }
}

fn split_top_level(s: &str, sep: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    let bytes = s.as_bytes();
    let mut i = 0;
    while i < s.len() {
        let c = bytes[i] as char;
        if depth == 0 && s[i..].starts_with(sep) {
            out.push(std::mem::take(&mut cur));
            i += sep.len();
            continue;
        }
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            _ => {}
        }
        let ch = s[i..].chars().next().unwrap();
        cur.push(ch);
        i += ch.len_utf8();
    }
    out.push(cur);
    out
}

fn parse_field(text: &str) -> Result<SubgroupRef, ExprParseError> {
    let t = text.trim();
    let named = |kind, name: &str| SubgroupRef { elements: vec![], name: name.to_string(), kind };
    match t {
        "k" => Ok(named(SubgroupKind::Full, "")),
        "L" | "K" => Ok(named(SubgroupKind::Trivial, "1")),
        _ => {
            let rest = t
                .strip_prefix("L^")
                .or_else(|| t.strip_prefix("K^"))
                .ok_or_else(|| ExprParseError::Syntax(t.to_string()))?;
            let rest = rest.replace(['⟨'], "<").replace(['⟩'], ">");
            if !(rest.starts_with('<') && rest.ends_with('>')) {
                return Err(ExprParseError::Syntax(t.to_string()));
            }
            Ok(named(SubgroupKind::Proper, &rest))
        }
    }
}

fn parse_br(text: &str) -> Result<(SubgroupRef, SubgroupRef), ExprParseError> {
    let t = text.trim();
    let inner = t
        .strip_prefix("Br(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| ExprParseError::Syntax(t.to_string()))?;
    let (a, b) = inner.split_once('|').ok_or_else(|| ExprParseError::Syntax(t.to_string()))?;
    Ok((parse_field(a)?, parse_field(b)?))
}

fn parse_summand(text: &str) -> Result<CohomExpr, ExprParseError> {
    let t = text.trim();
    if t == "1" || t == "trivial" {
        return Ok(CohomExpr::Trivial);
    }
    if t.starts_with("Br(") {
        let (base, top) = parse_br(t)?;
        return Ok(CohomExpr::brauer(base, top));
    }
    if t == "M" {
        return Ok(CohomExpr::MQuotient { r: "r".into(), s: "s".into(), r_index: None, s_index: None });
    }
    if let Some(inner) = t.strip_prefix("M(").and_then(|r| r.strip_suffix(')')) {
        let (r, s) = inner.split_once(',').ok_or_else(|| ExprParseError::Syntax(t.to_string()))?;
        return Ok(CohomExpr::MQuotient { r: r.trim().into(), s: s.trim().into(), r_index: None, s_index: None });
    }
    if let Some(inner) = t.strip_prefix("Ker(").and_then(|r| r.strip_suffix(')')) {
        let (a, b) = inner.split_once("->").ok_or_else(|| ExprParseError::Syntax(t.to_string()))?;
        return Ok(CohomExpr::NormKernel { inner: parse_br(a)?, outer: parse_br(b)? });
    }
    if let Some(inner) = t.strip_prefix("Coker(").and_then(|r| r.strip_suffix(')')) {
        let (_, b) = inner.split_once("->").ok_or_else(|| ExprParseError::Syntax(t.to_string()))?;
        let (base, top) = parse_br(b)?;
        return Ok(CohomExpr::NormCokernel { base, top });
    }
    if let Some(inner) = t.strip_prefix("?(").and_then(|r| r.strip_suffix(')')) {
        return Ok(CohomExpr::Unresolved(inner.to_string()));
    }
    Err(ExprParseError::Syntax(t.to_string()))
}

/// Parses the canonical text form. `K` is accepted for `L`, `⊕` for `(+)`.
pub fn parse_expr(text: &str) -> Result<CohomExpr, ExprParseError> {
    let t = text.replace('⊕', "(+)");
    let parts = split_top_level(t.trim(), "(+)");
    let mut out = Vec::new();
    for p in parts {
        out.push(parse_summand(&p)?);
    }
    Ok(CohomExpr::sum(out))
}

fn resolve_subgroup(g: &FiniteGroup, s: &SubgroupRef) -> Result<SubgroupRef, ExprParseError> {
    match s.kind {
        SubgroupKind::Full => Ok(SubgroupRef::new(g, &g.elements().collect::<Vec<_>>())),
        SubgroupKind::Trivial => Ok(SubgroupRef::new(g, &[0])),
        SubgroupKind::Proper => {
            let inner = s.name.trim_start_matches('<').trim_end_matches('>');
            let mut gens = Vec::new();
            for w in inner.split(',') {
                gens.push(resolve_element(g, w)?);
            }
            Ok(SubgroupRef::new(g, &g.closure(&gens)))
        }
    }
}

fn resolve_element(g: &FiniteGroup, w: &str) -> Result<usize, ExprParseError> {
    let letters = parse_word(w.trim(), g.generator_names()).map_err(|_| ExprParseError::Unknown(w.to_string()))?;
    Ok(g.eval(&letters))
}

/// Binds the names of a parsed expression to subgroups of `g`.
pub fn resolve_in(expr: &CohomExpr, g: &FiniteGroup) -> Result<CohomExpr, ExprParseError> {
    Ok(match expr {
        CohomExpr::Sum(v) => CohomExpr::sum(v.iter().map(|e| resolve_in(e, g)).collect::<Result<_, _>>()?),
        CohomExpr::BrauerRel { base, top } => CohomExpr::brauer(resolve_subgroup(g, base)?, resolve_subgroup(g, top)?),
        CohomExpr::NormCokernel { base, top } => {
            CohomExpr::NormCokernel { base: resolve_subgroup(g, base)?, top: resolve_subgroup(g, top)? }
        }
        CohomExpr::NormKernel { inner, outer } => CohomExpr::NormKernel {
            inner: (resolve_subgroup(g, &inner.0)?, resolve_subgroup(g, &inner.1)?),
            outer: (resolve_subgroup(g, &outer.0)?, resolve_subgroup(g, &outer.1)?),
        },
        CohomExpr::MQuotient { r, s, .. } => CohomExpr::m_quotient(g, resolve_element(g, r)?, resolve_element(g, s)?),
        other => other.clone(),
    })
}

/// Canonical text of an expression written against the group `g`.
pub fn canonical_text(text: &str, g: &FiniteGroup) -> Result<String, ExprParseError> {
    Ok(resolve_in(&parse_expr(text)?, g)?.canonicalize(g).to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symgrp::builtin_group;

    #[test]
    fn render_parse_round_trip() {
        for t in [
            "1",
            "Br(k|L)",
            "Br(k|L^<r>) (+) Br(k|L^<s>)",
            "M(r,s)",
            "Ker(Br(L^<s>|L) -> Br(k|L^<r>))",
            "Coker(k^x -> Br(L^<r>|L))",
            "?(no tactic applies)",
        ] {
            assert_eq!(parse_expr(t).unwrap().to_string(), t);
        }
        // sums are order-independent
        assert_eq!(
            parse_expr("Br(k|K^<s>) ⊕ Br(k|K^<r>)").unwrap().to_string(),
            "Br(k|L^<r>) (+) Br(k|L^<s>)"
        );
        assert!(parse_expr("Br(k|").is_err());
    }

    #[test]
    fn conjugate_subgroups_canonicalize_together() {
        let p = builtin_group("D6").unwrap();
        let g = p.group();
        assert_eq!(canonical_text("Br(L^<sr>|L)", g).unwrap(), "Br(L^<s>|L)");
        assert_eq!(canonical_text("Br(L^<rs>|L)", g).unwrap(), "Br(L^<s>|L)");
        assert_eq!(canonical_text("Br(k|L^<r>) (+) M(r^2,rs)", g).unwrap(), "Br(k|L^<r>) (+) M(r,s)");
        assert_eq!(canonical_text("Br(L^<s>|L^<s>)", g).unwrap(), "1");
    }
}
