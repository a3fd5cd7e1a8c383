//! The H¹ decision procedure: reduce along the kernel of φ, then apply the
//! tactics in priority order (diagonal, split, collapse, induced
//! isomorphism, induced summand) recursively on the resulting blocks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::cocycle::{CocycleSpec, SymbolParam};
use super::expr::{CohomExpr, SubgroupRef};
use super::induced::InducedOperators;
use crate::intlin::{
    complete_to_unimodular, integer_kernel_basis, left_kernel_basis, snf, solve_integer_system, unimodular_inverse,
    IntVec, IntegerMatrix,
};
use crate::simsolve::{common_eigenlattice, sign_patterns, simultaneously_similar, SearchOptions, SimilarityResult};
use crate::symgrp::{enumerate_characters, identify_isomorphism_type, Character, FiniteGroup, IsoType};

/// Cap on candidate surjections tried per (H, U) in the summand tactic.
const SURJECTION_CANDIDATES: usize = 64;

/// A representation of the reduced group: one matrix per element.
#[derive(Clone, Debug)]
pub struct Family {
    pub n: usize,
    pub mats: Vec<IntegerMatrix>,
}

impl Family {
    /// Extends generator images along the group's shortlex words.
    pub fn from_generators(g: &FiniteGroup, n: usize, gens: &[IntegerMatrix]) -> Family {
        let mats = g
            .elements()
            .map(|x| g.word(x).iter().fold(IntegerMatrix::identity(n), |acc, &i| acc.mul(&gens[i])))
            .collect();
        Family { n, mats }
    }

    pub fn generators(&self, g: &FiniteGroup) -> Vec<IntegerMatrix> {
        g.generators().iter().map(|&x| self.mats[x].clone()).collect()
    }

    /// P^{-1} ρ(x) P for every element.
    pub fn conjugate(&self, p: &IntegerMatrix) -> Family {
        let pinv = unimodular_inverse(p).expect("basis change is unimodular");
        Family { n: self.n, mats: self.mats.iter().map(|m| pinv.mul(m).mul(p)).collect() }
    }

    /// The block on coordinates r0..r1.
    pub fn block(&self, r0: usize, r1: usize) -> Family {
        Family { n: r1 - r0, mats: self.mats.iter().map(|m| m.submatrix(r0, r1, r0, r1)).collect() }
    }

    pub fn is_diagonal(&self) -> bool {
        self.mats.iter().all(|m| m.is_diagonal())
    }

    /// The character on coordinate k of a family that fixes that line.
    pub fn coordinate_character(&self, g: &FiniteGroup, k: usize) -> Character {
        let all: Vec<usize> = g.elements().collect();
        let signs = self.mats.iter().map(|m| if m.get(k, k).is_negative() { -1 } else { 1 }).collect();
        Character { subgroup: all, signs }
    }
}

#[derive(Clone, Debug)]
pub struct H1Part {
    pub expr: CohomExpr,
    pub cocycles: Vec<CocycleSpec>,
    /// Tactics applied, outermost first.
    pub trace: Vec<String>,
}

impl H1Part {
    fn trivial(tactic: &str) -> Self {
        H1Part { expr: CohomExpr::Trivial, cocycles: vec![], trace: vec![tactic.to_string()] }
    }
}

pub struct Engine<'a> {
    pub group: &'a FiniteGroup,
    pub opts: SearchOptions,
    subgroups: Vec<Vec<usize>>,
}

impl<'a> Engine<'a> {
    pub fn new(group: &'a FiniteGroup, opts: SearchOptions) -> Self {
        let subgroups = group.subgroups_all(group.order().max(crate::symgrp::DEFAULT_SUBGROUP_CAP)).unwrap_or_default();
        Engine { group, opts, subgroups }
    }

    fn full(&self) -> Vec<usize> {
        self.group.elements().collect()
    }

    fn sub_ref(&self, s: &[usize]) -> SubgroupRef {
        SubgroupRef::new(self.group, s)
    }

    /// H¹ of a one-dimensional module: Br(k | L^{ker χ}), generated by
    /// c_g = a for g outside the kernel and 1 inside it, a in k^x.
    pub fn dim1(&self, chi: &Character) -> H1Part {
        let g = self.group;
        let expr = CohomExpr::brauer(self.sub_ref(&self.full()), self.sub_ref(&chi.kernel()));
        let mut cocycles = Vec::new();
        if !chi.is_trivial() {
            let values = g
                .elements()
                .map(|x| IntegerMatrix::from_i64(&[vec![if chi.value(x) == Some(1) { 0 } else { 1 }]]))
                .collect();
            cocycles.push(CocycleSpec { n: 1, params: vec![SymbolParam::new(g, &Character::trivial(&self.full()))], values });
        }
        H1Part { expr, cocycles, trace: vec!["dim1".into()] }
    }

    pub fn h1(&self, fam: &Family) -> H1Part {
        if fam.n == 0 {
            return H1Part::trivial("empty");
        }
        let tactics: [(&str, fn(&Self, &Family) -> Option<H1Part>); 5] = [
            ("diagonal", Self::diagonal_case),
            ("split", Self::block_split),
            ("collapse", Self::unipotent_collapse),
            ("induced-isomorphism", Self::induced_isomorphism),
            ("induced-summand", Self::induced_summand),
        ];
        for (name, t) in tactics {
            if let Some(mut part) = t(self, fam) {
                part.trace.insert(0, name.to_string());
                return part;
            }
        }
        let gens: Vec<String> = fam.generators(self.group).iter().map(|m| format!("{m}")).collect();
        H1Part {
            expr: CohomExpr::Unresolved(format!("no tactic applies to rank {} block {}", fam.n, gens.join(" "))),
            cocycles: vec![],
            trace: vec!["unresolved".into()],
        }
    }

    pub fn diagonal_case(&self, fam: &Family) -> Option<H1Part> {
        if !fam.is_diagonal() {
            return None;
        }
        let mut exprs = Vec::new();
        let mut cocycles = Vec::new();
        for k in 0..fam.n {
            let part = self.dim1(&fam.coordinate_character(self.group, k));
            exprs.push(part.expr);
            cocycles.extend(part.cocycles.into_iter().map(|c| c.pad(fam.n, k)));
        }
        Some(H1Part { expr: CohomExpr::sum(exprs), cocycles, trace: vec![] })
    }

    /// A unimodular P with P^{-1} ρ P = diag(χ, R), when a line splits off
    /// as a direct summand.
    pub fn split_line(&self, fam: &Family) -> Option<IntegerMatrix> {
        let n = fam.n;
        if n < 2 {
            return None;
        }
        let gens = fam.generators(self.group);
        let tgens: Vec<IntegerMatrix> = gens.iter().map(|m| m.transpose()).collect();
        for eps in sign_patterns(gens.len()) {
            let k = common_eigenlattice(&gens, &eps);
            if k.is_empty() {
                continue;
            }
            let w = common_eigenlattice(&tgens, &eps);
            if w.is_empty() {
                continue;
            }
            let kmat = IntegerMatrix::from_columns(n, &k);
            let wmat = IntegerMatrix::from_rows(n, &w);
            let q = wmat.mul(&kmat);
            let d = snf(&q);
            if !d.s.get(0, 0).abs().is_one() {
                continue;
            }
            let mut wrow = d.u.row(0).iter().zip(wmat.to_rows()).fold(vec![BigInt::zero(); n], |acc, (c, r)| {
                acc.iter().zip(&r).map(|(a, b)| a + c * b).collect()
            });
            let v = kmat.mul_vec(&d.v.col(0));
            if crate::intlin::dot(&wrow, &v).is_negative() {
                wrow = wrow.iter().map(|x| -x).collect();
            }
            let kernel = integer_kernel_basis(&IntegerMatrix::from_rows(n, &[wrow]));
            let mut cols = vec![v];
            cols.extend(kernel);
            let p = IntegerMatrix::from_columns(n, &cols);
            debug_assert!(crate::intlin::is_unimodular(&p));
            return Some(p);
        }
        None
    }

    pub fn block_split(&self, fam: &Family) -> Option<H1Part> {
        let p = self.split_line(fam)?;
        let n = fam.n;
        let conj = fam.conjugate(&p);
        let first = self.dim1(&conj.coordinate_character(self.group, 0));
        let rest = self.h1(&conj.block(1, n));
        let mut cocycles: Vec<CocycleSpec> = first.cocycles.iter().map(|c| c.pad(n, 0).transform(&p)).collect();
        cocycles.extend(rest.cocycles.iter().map(|c| c.pad(n, 1).transform(&p)));
        let mut trace = vec![];
        trace.extend(rest.trace.iter().map(|t| format!("block: {t}")));
        Some(H1Part { expr: CohomExpr::sum(vec![first.expr, rest.expr]), cocycles, trace })
    }

    /// Q with Q^{-1} ρ Q diagonal, found by peeling lines repeatedly.
    pub fn peel_to_diagonal(&self, fam: &Family) -> Option<IntegerMatrix> {
        if fam.is_diagonal() {
            return Some(IntegerMatrix::identity(fam.n));
        }
        let p = self.split_line(fam)?;
        let conj = fam.conjugate(&p);
        let q = self.peel_to_diagonal(&conj.block(1, fam.n))?;
        Some(p.mul(&IntegerMatrix::block_diag(&IntegerMatrix::identity(1), &q)))
    }

    /// Trivial quotient over an invariant sublattice S. H¹ is H¹(S) modulo
    /// the image of the connecting map from the invariants of the quotient;
    /// when S diagonalizes, that image is computed over GF(2).
    pub fn unipotent_collapse(&self, fam: &Family) -> Option<H1Part> {
        let n = fam.n;
        let g = self.group;
        let tgens: Vec<IntegerMatrix> = fam.generators(g).iter().map(|m| m.transpose()).collect();
        let inv = common_eigenlattice(&tgens, &vec![1; tgens.len()]);
        let t = inv.len();
        if t == 0 || t == n {
            return None;
        }
        let s = integer_kernel_basis(&IntegerMatrix::from_rows(n, &inv));
        let p0 = complete_to_unimodular(n, &s).ok()?;
        let mut cols: Vec<IntVec> = (n - t..n).map(|j| p0.col(j)).collect();
        cols.extend(s);
        let p = IntegerMatrix::from_columns(n, &cols);
        let conj = fam.conjugate(&p);
        let b = conj.block(t, n);
        let Some(q) = self.peel_to_diagonal(&b) else {
            let sub = self.h1(&b);
            return sub.expr.is_trivial().then(|| H1Part::trivial("quotient of trivial"));
        };
        let p2 = p.mul(&IntegerMatrix::block_diag(&IntegerMatrix::identity(t), &q));
        let conj2 = fam.conjugate(&p2);
        let chars: Vec<Character> = (0..n - t).map(|j| conj2.coordinate_character(g, t + j)).collect();
        let rows: Vec<usize> = (0..n - t).filter(|&j| !chars[j].is_trivial()).collect();
        if rows.len() > 63 {
            return None;
        }
        // column l of M over GF(2) as a bitmask over the nontrivial rows
        let mut columns: Vec<u64> = vec![0; t];
        for (ri, &j) in rows.iter().enumerate() {
            let g0 = g.elements().find(|&x| chars[j].value(x) == Some(-1)).expect("nontrivial character");
            for (l, col) in columns.iter_mut().enumerate() {
                if conj2.mats[g0].get(t + j, l).is_odd() {
                    *col |= 1 << ri;
                }
            }
        }
        let rank_v = gf2_rank(&columns);
        let killed: Vec<usize> = (0..rows.len())
            .filter(|&ri| {
                let mut with = columns.clone();
                with.push(1 << ri);
                gf2_rank(&with) == rank_v
            })
            .collect();
        if killed.len() != rank_v {
            return None;
        }
        let mut exprs = Vec::new();
        let mut cocycles = Vec::new();
        for (ri, &j) in rows.iter().enumerate() {
            if killed.contains(&ri) {
                continue;
            }
            let part = self.dim1(&chars[j]);
            exprs.push(part.expr);
            cocycles.extend(part.cocycles.iter().map(|c| c.pad(n, t + j).transform(&p2)));
        }
        Some(H1Part { expr: CohomExpr::sum(exprs), cocycles, trace: vec![] })
    }

    fn subgroups_of_index(&self, index: usize) -> Vec<Vec<usize>> {
        let order = self.group.order();
        self.subgroups.iter().filter(|s| s.len() * index == order).cloned().collect()
    }

    /// ρ ≅ Ind_H^G(U): H¹ = Br(L^H | L^{ker U}), generated per the coset
    /// integers b_i(g) carried through the witness.
    pub fn induced_isomorphism(&self, fam: &Family) -> Option<H1Part> {
        let g = self.group;
        let gens = fam.generators(g);
        for h in self.subgroups_of_index(fam.n) {
            for chi in enumerate_characters(g, &h) {
                let ops = InducedOperators::new(g, &chi);
                let tg = ops.generator_matrices(g);
                let SimilarityResult::Found(t) = simultaneously_similar(&gens, &tg, self.opts) else { continue };
                let expr = CohomExpr::brauer(self.sub_ref(&h), self.sub_ref(&chi.kernel()));
                let param = SymbolParam { subgroup: h.clone(), signs: vec![1; h.len()], reps: ops.reps.clone() };
                let values = g
                    .elements()
                    .map(|x| {
                        let b = ops.b_integers(g, x);
                        t.mul(&IntegerMatrix::diag_i64(&b))
                    })
                    .collect();
                let spec = CocycleSpec { n: fam.n, params: vec![param], values };
                let cocycles = if expr.is_trivial() { vec![] } else { vec![spec] };
                return Some(H1Part { expr, cocycles, trace: vec![format!("H={}", g.subgroup_name(&h))] });
            }
        }
        None
    }

    /// Primitive w with w T_g = U(g) w for every generator.
    fn equivariant_surjections(&self, tg: &[IntegerMatrix], u: &Character) -> Vec<IntVec> {
        let g = self.group;
        let m = tg[0].rows();
        let mut stacked: Option<IntegerMatrix> = None;
        for (i, t) in tg.iter().enumerate() {
            let x = g.generators()[i];
            let d = t.sub(&IntegerMatrix::identity(m).scale(&BigInt::from(u.value(x).unwrap_or(1))));
            stacked = Some(match stacked {
                None => d,
                Some(s) => s.hstack(&d),
            });
        }
        let basis = match stacked {
            None => IntegerMatrix::identity(m).to_rows(),
            Some(s) => left_kernel_basis(&s),
        };
        match basis.len() {
            0 => vec![],
            1 => basis,
            k => {
                let mut out: Vec<IntVec> = Vec::new();
                let mut coeffs = vec![-1i64; k];
                'outer: loop {
                    let w: IntVec = (0..m)
                        .map(|c| coeffs.iter().zip(&basis).map(|(a, b)| BigInt::from(*a) * &b[c]).sum())
                        .collect();
                    let first_nonzero = w.iter().find(|x| !x.is_zero());
                    if let Some(f) = first_nonzero {
                        if f.is_positive() && crate::intlin::is_primitive(&w) && !out.contains(&w) {
                            out.push(w);
                            if out.len() >= SURJECTION_CANDIDATES {
                                break;
                            }
                        }
                    }
                    for c in coeffs.iter_mut() {
                        *c += 1;
                        if *c <= 1 {
                            continue 'outer;
                        }
                        *c = -1;
                    }
                    break;
                }
                out.sort_by_key(|w| (w.iter().map(|x| x.abs()).sum::<BigInt>(), w.clone()));
                out
            }
        }
    }

    /// ρ ⊕ U ≅ Ind_H^G(U|_H) as a bordered extension: H¹ is read off the
    /// connecting map from H⁰ of the rank-one quotient.
    pub fn induced_summand(&self, fam: &Family) -> Option<H1Part> {
        let g = self.group;
        let n = fam.n;
        let gens = fam.generators(g);
        let full = self.full();
        let characters = enumerate_characters(g, &full);
        for h in self.subgroups_of_index(n + 1) {
            for u in &characters {
                let chi_h = u.restrict(&h);
                let ops = InducedOperators::new(g, &chi_h);
                let tg = ops.generator_matrices(g);
                for w in self.equivariant_surjections(&tg, u) {
                    let wm = IntegerMatrix::from_rows(n + 1, std::slice::from_ref(&w));
                    let Some(v1) = solve_integer_system(&wm, &[BigInt::one()]) else { continue };
                    let mut cols = vec![v1];
                    cols.extend(integer_kernel_basis(&wm));
                    let p = IntegerMatrix::from_columns(n + 1, &cols);
                    let bordered = Family { n: n + 1, mats: ops.all_matrices(g) }.conjugate(&p);
                    let r_gens: Vec<IntegerMatrix> =
                        g.generators().iter().map(|&x| bordered.mats[x].submatrix(1, n + 1, 1, n + 1)).collect();
                    let SimilarityResult::Found(s) = simultaneously_similar(&gens, &r_gens, self.opts) else {
                        continue;
                    };
                    let values = g
                        .elements()
                        .map(|x| {
                            let b = bordered.mats[x].submatrix(1, n + 1, 0, 1);
                            s.mul(&b.scale(&BigInt::from(u.value(x).expect("full character"))))
                        })
                        .collect();
                    let spec = CocycleSpec { n, params: vec![SymbolParam::new(g, u)], values };
                    let expr = self.summand_expression(&h, u);
                    let cocycles = if expr.is_trivial() { vec![] } else { vec![spec] };
                    return Some(H1Part { expr, cocycles, trace: vec![format!("H={}", g.subgroup_name(&h))] });
                }
            }
        }
        None
    }

    fn summand_expression(&self, h: &[usize], u: &Character) -> CohomExpr {
        let g = self.group;
        let i = u.kernel();
        let h_in_i = h.iter().all(|x| i.binary_search(x).is_ok());
        if h_in_i {
            return if u.is_trivial() {
                CohomExpr::brauer(self.sub_ref(&self.full()), self.sub_ref(h))
            } else {
                CohomExpr::NormCokernel { base: self.sub_ref(&i), top: self.sub_ref(h) }
            };
        }
        if identify_isomorphism_type(g) == IsoType::Dihedral(6) && h.len() == 2 && i.len() == 3 {
            let r = g.elements().find(|&x| g.element_order(x) == 3).expect("D6 has an element of order 3");
            let s = h[1];
            if g.closure(&[r]) == i {
                return CohomExpr::m_quotient(g, r, s);
            }
        }
        let hi: Vec<usize> = h.iter().copied().filter(|x| i.binary_search(x).is_ok()).collect();
        CohomExpr::sum(vec![
            CohomExpr::Unresolved(format!("M-part for H={}", g.subgroup_name(h))),
            CohomExpr::NormKernel {
                inner: (self.sub_ref(h), self.sub_ref(&hi)),
                outer: (self.sub_ref(&self.full()), self.sub_ref(&i)),
            },
        ])
    }
}

fn gf2_rank(vectors: &[u64]) -> usize {
    let mut basis: Vec<u64> = Vec::new();
    for &v in vectors {
        let mut x = v;
        for &b in &basis {
            x = x.min(x ^ b);
        }
        if x != 0 {
            basis.push(x);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}
