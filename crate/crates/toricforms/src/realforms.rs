//! Real forms from the lattice alone. For K = ℂ, k = ℝ write ℂ^× as a
//! uniquely divisible group times ℚ/ℤ, with conjugation acting on ℚ/ℤ by
//! negation. The divisible part is cohomologically trivial, so
//! H¹(Gal(ℂ/ℝ), T_A(ℂ)) ≅ Ĥ⁰(⟨−A⟩, L) ≅ ker(A + I) / (I − A)L.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::cohom::CohomExpr;
use crate::descent::{evaluate_expression, Evaluation, FieldContext};
use crate::fan::{automorphism_group, Fan, FanError};
use crate::intlin::{integer_kernel_basis, quotient_of_lattices, IntVec, IntegerMatrix, QuotientPresentation};
use crate::symgrp::{FiniteGroup, MatrixGroup};

#[derive(Debug, Error)]
pub enum RealFormsError {
    #[error("matrix does not square to the identity")]
    NotInvolution,
    #[error("centralizer element {0} does not commute with the involution")]
    NonCommuting(usize),
    #[error(transparent)]
    Fan(#[from] FanError),
}

/// ker(A + I) / (I − A)ℤⁿ.
#[derive(Clone, Debug)]
pub struct TateQuotient {
    pub a: IntegerMatrix,
    pub kernel_basis: Vec<IntVec>,
    pub image_generators: Vec<IntVec>,
    quotient: QuotientPresentation,
}

impl TateQuotient {
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.quotient.invariant_factors.clone()
    }

    pub fn order(&self) -> u64 {
        self.quotient.order().and_then(|o| o.to_u64()).expect("Tate quotient is a finite 2-group")
    }

    /// Residue key of a vector of ker(A + I).
    pub fn reduce(&self, v: &[BigInt]) -> Option<IntVec> {
        self.quotient.reduce(v)
    }

    /// Canonical representatives, one per class, as vectors of ℤⁿ.
    pub fn representatives(&self) -> Vec<IntVec> {
        self.keys().iter().map(|k| self.quotient.lift(k)).collect()
    }

    fn keys(&self) -> Vec<IntVec> {
        self.quotient.elements().expect("finite")
    }
}

pub fn tate_h1_real(a: &IntegerMatrix) -> Result<TateQuotient, RealFormsError> {
    let n = a.rows();
    let id = IntegerMatrix::identity(n);
    if !a.is_square() || !a.mul(a).is_identity() {
        return Err(RealFormsError::NotInvolution);
    }
    let kernel_basis = integer_kernel_basis(&a.add(&id));
    let image_generators = id.sub(a).columns();
    let quotient =
        quotient_of_lattices(&kernel_basis, &image_generators).expect("(I - A)L lies in ker(A + I) when A² = I");
    Ok(TateQuotient { a: a.clone(), kernel_basis, image_generators, quotient })
}

/// Orbits of v ↦ Tv on the Tate quotient.
pub fn real_orbit_count(a: &IntegerMatrix, centralizer: &[IntegerMatrix]) -> Result<u64, RealFormsError> {
    for (i, t) in centralizer.iter().enumerate() {
        if t.mul(a) != a.mul(t) {
            return Err(RealFormsError::NonCommuting(i));
        }
    }
    let tq = tate_h1_real(a)?;
    let keys = tq.keys();
    let reps = tq.representatives();
    let mut seen: HashSet<IntVec> = HashSet::new();
    let mut orbits = 0;
    for (k, v) in keys.iter().zip(&reps) {
        if seen.contains(k) {
            continue;
        }
        orbits += 1;
        let mut stack = vec![v.clone()];
        seen.insert(k.clone());
        while let Some(x) = stack.pop() {
            for t in centralizer {
                let y = t.mul_vec(&x);
                let ky = tq.reduce(&y).expect("centralizer preserves ker(A + I)");
                if seen.insert(ky) {
                    stack.push(y);
                }
            }
        }
    }
    Ok(orbits)
}

/// One entry per conjugacy class of involutions of Aut_Σ.
#[derive(Clone, Debug, Serialize)]
pub struct RealFormsEntry {
    pub involution: Vec<Vec<i64>>,
    pub class_size: usize,
    pub h1_order: u64,
    pub orbits: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct RealFormsReport {
    pub aut_order: usize,
    pub entries: Vec<RealFormsEntry>,
    /// The split form plus the orbits of every involution class.
    pub total: u64,
}

fn centralizer_matrices(g: &FiniteGroup, elems: &[IntegerMatrix], x: usize) -> Vec<IntegerMatrix> {
    g.centralizer(&[x]).into_iter().map(|c| elems[c].clone()).collect()
}

pub fn real_forms(fan: &Fan) -> Result<RealFormsReport, RealFormsError> {
    Ok(real_forms_of_group(&automorphism_group(fan)?))
}

/// The same count for a finite matrix group taken as Aut_Σ.
pub fn real_forms_of_group(aut: &MatrixGroup) -> RealFormsReport {
    let g = aut.group();
    let mut entries = Vec::new();
    for class in g.conjugacy_classes() {
        let x = class[0];
        if g.element_order(x) != 2 {
            continue;
        }
        let a = &aut.elements[x];
        let cent = centralizer_matrices(g, &aut.elements, x);
        entries.push(RealFormsEntry {
            involution: a.to_i64_rows().expect("small entries"),
            class_size: class.len(),
            h1_order: tate_h1_real(a).expect("order-2 element").order(),
            orbits: real_orbit_count(a, &cent).expect("centralizer commutes"),
        });
    }
    let total = 1 + entries.iter().map(|e| e.orbits).sum::<u64>();
    RealFormsReport { aut_order: aut.order(), entries, total }
}

pub fn real_forms_count(fan: &Fan) -> Result<u64, RealFormsError> {
    Ok(real_forms(fan)?.total)
}

/// Whether the evaluated order of `expr` under ℂ/ℝ equals the Tate
/// quotient's order. `group` is the reduced Galois group, of order ≤ 2.
pub fn crosscheck_symbolic(a: &IntegerMatrix, expr: &CohomExpr, group: &FiniteGroup) -> bool {
    let Ok(tq) = tate_h1_real(a) else { return false };
    matches!(evaluate_expression(expr, FieldContext::RealComplex, group), Evaluation::Order(k) if k == tq.order())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlin::ivec;

    fn m(rows: &[&[i64]]) -> IntegerMatrix {
        IntegerMatrix::from_i64(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    #[test]
    fn minus_one_has_order_two() {
        let tq = tate_h1_real(&m(&[&[-1]])).unwrap();
        assert_eq!(tq.order(), 2);
        assert_eq!(tq.representatives().len(), 2);
    }

    #[test]
    fn identity_is_trivial() {
        assert_eq!(tate_h1_real(&IntegerMatrix::identity(3)).unwrap().order(), 1);
    }

    #[test]
    fn w9_reflection_quotient() {
        let s = m(&[&[0, 0, -1], &[0, -1, 0], &[-1, 0, 0]]);
        let tq = tate_h1_real(&s).unwrap();
        assert_eq!(tq.order(), 2);
        // (0,1,0) is the nontrivial class; (1,0,1) is a boundary
        assert_ne!(tq.reduce(&ivec(&[0, 1, 0])), tq.reduce(&ivec(&[0, 0, 0])));
        assert_eq!(tq.reduce(&ivec(&[1, 0, 1])), tq.reduce(&ivec(&[0, 0, 0])));
        assert_eq!(real_orbit_count(&s, &[IntegerMatrix::identity(3), s.clone()]).unwrap(), 2);
    }

    #[test]
    fn swap_orbits_on_minus_identity() {
        let a = IntegerMatrix::identity(2).neg();
        let swap = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(real_orbit_count(&a, &[]).unwrap(), 4);
        assert_eq!(real_orbit_count(&a, &[swap]).unwrap(), 3);
    }

    #[test]
    fn errors() {
        assert!(matches!(tate_h1_real(&m(&[&[0, -1], &[1, -1]])), Err(RealFormsError::NotInvolution)));
        let a = m(&[&[-1, 0], &[0, 1]]);
        let swap = m(&[&[0, 1], &[1, 0]]);
        assert!(matches!(real_orbit_count(&a, &[swap]), Err(RealFormsError::NonCommuting(0))));
    }

    #[test]
    fn example_fans() {
        let ex48 = Fan::face_fan(3, vec![ivec(&[1, 0, 1]), ivec(&[0, 1, 1]), ivec(&[1, 1, 0])]);
        assert_eq!(real_forms_count(&ex48).unwrap(), 2);
        let ex47 = Fan::face_fan(3, vec![ivec(&[1, 0, -1]), ivec(&[0, -1, 1]), ivec(&[-1, 1, 0])]);
        assert!(real_forms_count(&ex47).is_err());
    }
}
