//! Simultaneous GL(n,Z)-conjugacy of matrix families, with bounded search
//! and machine-checkable non-existence certificates, plus invariant
//! sublattices with their adapted block forms.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::intlin::{
    complete_to_unimodular, integer_kernel_basis, is_unimodular, lll_reduce, unimodular_inverse, IntVec,
    IntegerMatrix,
};

pub const DEFAULT_BOUND: usize = 3;
pub const DEFAULT_CANDIDATE_CAP: usize = 2_000_000;
/// Cap on the pair group explored when looking for a rational obstruction.
pub const PAIR_GROUP_CAP: usize = 2000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Certificate {
    /// The i-th matrices have different characteristic polynomials.
    CharPolyMismatch(usize),
    /// The word (generator indices) evaluates to matrices with different
    /// characteristic polynomials, so the families are not conjugate over Q.
    RationalNonConjugate { word: Vec<usize> },
    IntertwinerRankZero,
    /// Every intertwiner is a multiple of one matrix whose determinant is
    /// not a unit.
    IntertwinerRankOneNonUnimodular { det: BigInt },
}

impl Certificate {
    /// Re-checks the certificate against the families.
    pub fn check(&self, g: &[IntegerMatrix], h: &[IntegerMatrix]) -> bool {
        match self {
            Certificate::CharPolyMismatch(i) => g[*i].charpoly() != h[*i].charpoly(),
            Certificate::RationalNonConjugate { word } => {
                let n = g[0].rows();
                let eval = |fam: &[IntegerMatrix]| {
                    word.iter().fold(IntegerMatrix::identity(n), |acc, &i| acc.mul(&fam[i]))
                };
                eval(g).charpoly() != eval(h).charpoly()
            }
            Certificate::IntertwinerRankZero => intertwiner_basis(g, h).basis.is_empty(),
            Certificate::IntertwinerRankOneNonUnimodular { det } => {
                let lat = intertwiner_basis(g, h);
                lat.basis.len() == 1 && lat.basis[0].det() == *det && !det.abs().is_one()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimilarityResult {
    Found(IntegerMatrix),
    NotFoundWithinBound(usize),
    ProvablyDistinct(Certificate),
}

impl SimilarityResult {
    /// Builds a `Found` after checking the witness.
    pub fn found(t: IntegerMatrix, g: &[IntegerMatrix], h: &[IntegerMatrix]) -> Self {
        assert!(is_witness(&t, g, h), "similarity witness failed verification");
        SimilarityResult::Found(t)
    }

    pub fn witness(&self) -> Option<&IntegerMatrix> {
        match self {
            SimilarityResult::Found(t) => Some(t),
            _ => None,
        }
    }
}

/// True when T is unimodular and T^{-1} g_i T = h_i for all i.
pub fn is_witness(t: &IntegerMatrix, g: &[IntegerMatrix], h: &[IntegerMatrix]) -> bool {
    is_unimodular(t) && g.iter().zip(h).all(|(a, b)| a.mul(t) == t.mul(b))
}

#[derive(Clone, Debug)]
pub struct IntertwinerLattice {
    pub g: Vec<IntegerMatrix>,
    pub h: Vec<IntegerMatrix>,
    /// Saturated basis of {X : g_i X = X h_i}.
    pub basis: Vec<IntegerMatrix>,
}

impl IntertwinerLattice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn combine(&self, coeffs: &[i64]) -> IntegerMatrix {
        let n = self.g.first().map(|m| m.rows()).unwrap_or(0);
        let mut t = IntegerMatrix::zeros(n, n);
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if *c != 0 {
                t = t.add(&b.scale(&BigInt::from(*c)));
            }
        }
        t
    }
}

/// Integer solution lattice of g_i X = X h_i, LLL-reduced.
pub fn intertwiner_basis(g: &[IntegerMatrix], h: &[IntegerMatrix]) -> IntertwinerLattice {
    assert_eq!(g.len(), h.len(), "families differ in length");
    let n = g.first().or(h.first()).map(|m| m.rows()).unwrap_or(0);
    let nn = n * n;
    let mut eqs: Vec<IntVec> = Vec::new();
    for (gi, hi) in g.iter().zip(h) {
        assert!(gi.rows() == n && gi.cols() == n && hi.rows() == n && hi.cols() == n);
        for a in 0..n {
            for b in 0..n {
                let mut row = vec![BigInt::zero(); nn];
                for c in 0..n {
                    row[c * n + b] += gi.get(a, c);
                    row[a * n + c] -= hi.get(c, b);
                }
                if row.iter().any(|x| !x.is_zero()) {
                    eqs.push(row);
                }
            }
        }
    }
    let kernel = if eqs.is_empty() {
        IntegerMatrix::identity(nn).to_rows()
    } else {
        integer_kernel_basis(&IntegerMatrix::from_rows(nn, &eqs))
    };
    let reduced = lll_reduce(&kernel);
    let basis = reduced.into_iter().map(|v| IntegerMatrix::new(n, n, v)).collect();
    IntertwinerLattice { g: g.to_vec(), h: h.to_vec(), basis }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Largest coefficient magnitude tried.
    pub bound: usize,
    /// Total candidates examined before giving up.
    pub candidate_cap: usize,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { bound: DEFAULT_BOUND, candidate_cap: DEFAULT_CANDIDATE_CAP }
    }
}

impl SearchOptions {
    pub fn with_bound(bound: usize) -> Self {
        SearchOptions { bound, ..Default::default() }
    }
}

/// Values of magnitude at most m in sweep order: 1, -1, 2, -2, ...
fn value_order(m: usize) -> Vec<i64> {
    (1..=m as i64).flat_map(|v| [v, -v]).collect()
}

/// Visits coefficient vectors in sweep order: by sup-norm, then support
/// size, then support positions, then values. Stops when `f` returns true
/// or the cap is hit; returns (hit, visited).
fn sweep<F: FnMut(&[i64]) -> bool>(k: usize, bound: usize, cap: usize, mut f: F) -> (bool, usize) {
    let mut visited = 0usize;
    let mut coeffs = vec![0i64; k];
    for m in 1..=bound {
        let vals = value_order(m);
        for s in 1..=k {
            let mut pos: Vec<usize> = (0..s).collect();
            loop {
                // all value assignments on pos with at least one |v| = m
                let mut idx = vec![0usize; s];
                loop {
                    if idx.iter().any(|&i| vals[i].unsigned_abs() as usize == m) {
                        coeffs.iter_mut().for_each(|c| *c = 0);
                        for (p, &i) in pos.iter().zip(&idx) {
                            coeffs[*p] = vals[i];
                        }
                        visited += 1;
                        if f(&coeffs) {
                            return (true, visited);
                        }
                        if visited >= cap {
                            return (false, visited);
                        }
                    }
                    let mut j = s;
                    loop {
                        if j == 0 {
                            break;
                        }
                        j -= 1;
                        idx[j] += 1;
                        if idx[j] < vals.len() {
                            break;
                        }
                        idx[j] = 0;
                        if j == 0 {
                            j = usize::MAX;
                            break;
                        }
                    }
                    if j == usize::MAX {
                        break;
                    }
                }
                // next combination
                let mut i = s;
                let mut advanced = false;
                while i > 0 {
                    i -= 1;
                    if pos[i] < k - s + i {
                        pos[i] += 1;
                        for t in i + 1..s {
                            pos[t] = pos[t - 1] + 1;
                        }
                        advanced = true;
                        break;
                    }
                }
                if !advanced {
                    break;
                }
            }
        }
    }
    (false, visited)
}

/// Fraction-free elimination in i128; None on overflow.
fn det_i128(mut a: Vec<Vec<i128>>) -> Option<i128> {
    let n = a.len();
    if n == 0 {
        return Some(1);
    }
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| a[i][k] != 0) else { return Some(0) };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let x = a[i][j].checked_mul(a[k][k])?.checked_sub(a[i][k].checked_mul(a[k][j])?)?;
                a[i][j] = x / prev;
            }
        }
        prev = a[k][k];
    }
    Some(sign * a[n - 1][n - 1])
}

fn is_unit_det(t: &IntegerMatrix) -> bool {
    let n = t.rows();
    let small: Option<Vec<Vec<i128>>> =
        (0..n).map(|i| (0..n).map(|j| t.get(i, j).to_i128()).collect()).collect();
    match small.and_then(det_i128) {
        Some(d) => d == 1 || d == -1,
        None => t.det().abs().is_one(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(IntegerMatrix),
    NotFoundWithinBound(usize),
}

/// First unimodular combination of the lattice basis in sweep order.
pub fn find_unimodular_combination(lat: &IntertwinerLattice, opts: SearchOptions) -> SearchOutcome {
    let k = lat.rank();
    if k == 0 {
        return SearchOutcome::NotFoundWithinBound(0);
    }
    let n = lat.basis[0].rows();
    let small: Option<Vec<Vec<i64>>> =
        lat.basis.iter().map(|b| b.entries().iter().map(|x| x.to_i64()).collect()).collect();
    let mut hit = None;
    match small {
        Some(basis) => {
            let mut buf = vec![0i128; n * n];
            sweep(k, opts.bound, opts.candidate_cap, |c| {
                buf.iter_mut().for_each(|x| *x = 0);
                for (ci, b) in c.iter().zip(&basis) {
                    if *ci != 0 {
                        for (x, y) in buf.iter_mut().zip(b) {
                            *x += (*ci as i128) * (*y as i128);
                        }
                    }
                }
                let rows: Vec<Vec<i128>> = buf.chunks(n).map(|r| r.to_vec()).collect();
                let unit = match det_i128(rows) {
                    Some(d) => d == 1 || d == -1,
                    None => is_unit_det(&lat.combine(c)),
                };
                if unit {
                    hit = Some(lat.combine(c));
                }
                unit
            });
        }
        None => {
            sweep(k, opts.bound, opts.candidate_cap, |c| {
                let t = lat.combine(c);
                let unit = is_unit_det(&t);
                if unit {
                    hit = Some(t);
                }
                unit
            });
        }
    }
    match hit {
        Some(t) => SearchOutcome::Found(t),
        None => SearchOutcome::NotFoundWithinBound(opts.bound),
    }
}

/// Looks for a word whose images in the two families have different
/// characteristic polynomials, exploring the group generated by the pairs.
pub fn rational_obstruction(g: &[IntegerMatrix], h: &[IntegerMatrix], cap: usize) -> Option<Vec<usize>> {
    let n = g.first()?.rows();
    let id = (IntegerMatrix::identity(n), IntegerMatrix::identity(n));
    let mut seen: HashMap<(IntegerMatrix, IntegerMatrix), ()> = HashMap::new();
    seen.insert(id.clone(), ());
    let mut queue = VecDeque::from([(id, Vec::<usize>::new())]);
    while let Some(((a, b), word)) = queue.pop_front() {
        for i in 0..g.len() {
            let next = (a.mul(&g[i]), b.mul(&h[i]));
            if seen.contains_key(&next) {
                continue;
            }
            let mut w = word.clone();
            w.push(i);
            if next.0.trace() != next.1.trace() || next.0.charpoly() != next.1.charpoly() {
                return Some(w);
            }
            if seen.len() >= cap {
                return None;
            }
            seen.insert(next.clone(), ());
            queue.push_back((next, w));
        }
    }
    None
}

/// Decides simultaneous similarity within the search bound.
pub fn simultaneously_similar(g: &[IntegerMatrix], h: &[IntegerMatrix], opts: SearchOptions) -> SimilarityResult {
    assert_eq!(g.len(), h.len(), "families differ in length");
    if let Some(i) = (0..g.len()).find(|&i| g[i].charpoly() != h[i].charpoly()) {
        return SimilarityResult::ProvablyDistinct(Certificate::CharPolyMismatch(i));
    }
    if let Some(word) = rational_obstruction(g, h, PAIR_GROUP_CAP) {
        return SimilarityResult::ProvablyDistinct(Certificate::RationalNonConjugate { word });
    }
    let lat = intertwiner_basis(g, h);
    match lat.rank() {
        0 => return SimilarityResult::ProvablyDistinct(Certificate::IntertwinerRankZero),
        1 => {
            let det = lat.basis[0].det();
            if !det.abs().is_one() {
                return SimilarityResult::ProvablyDistinct(Certificate::IntertwinerRankOneNonUnimodular { det });
            }
        }
        _ => {}
    }
    match find_unimodular_combination(&lat, opts) {
        SearchOutcome::Found(t) => SimilarityResult::found(t, g, h),
        SearchOutcome::NotFoundWithinBound(b) => SimilarityResult::NotFoundWithinBound(b),
    }
}

/// An invariant sublattice S with adapted basis P = [complement | S], in
/// which P^{-1} g_i P = [[A_i, 0], [C_i, B_i]].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantSublattice {
    /// Rank of S.
    pub rank: usize,
    /// Eigen-signs of the line (rank 1) or of the quotient (corank 1).
    pub signs: Vec<i8>,
    pub basis: IntegerMatrix,
    pub a: Vec<IntegerMatrix>,
    pub b: Vec<IntegerMatrix>,
    pub c: Vec<IntegerMatrix>,
}

impl InvariantSublattice {
    fn build(family: &[IntegerMatrix], p: IntegerMatrix, rank: usize, signs: Vec<i8>) -> Self {
        let n = p.rows();
        let q = n - rank;
        let pinv = unimodular_inverse(&p).expect("adapted basis is unimodular");
        let mut a = Vec::new();
        let mut b = Vec::new();
        let mut c = Vec::new();
        for g in family {
            let m = pinv.mul(g).mul(&p);
            debug_assert!(m.submatrix(0, q, q, n).is_zero());
            a.push(m.submatrix(0, q, 0, q));
            b.push(m.submatrix(q, n, q, n));
            c.push(m.submatrix(q, n, 0, q));
        }
        InvariantSublattice { rank, signs, basis: p, a, b, c }
    }

    /// Sublattice basis vectors (the last `rank` columns).
    pub fn sublattice(&self) -> Vec<IntVec> {
        let n = self.basis.rows();
        (n - self.rank..n).map(|j| self.basis.col(j)).collect()
    }

    /// Reassembles P^{-1} g_i P from the blocks.
    pub fn reassemble(&self, i: usize) -> IntegerMatrix {
        let q = self.a[i].rows();
        let top = self.a[i].hstack(&IntegerMatrix::zeros(q, self.rank));
        let bottom = self.c[i].hstack(&self.b[i]);
        top.vstack(&bottom)
    }
}

/// Sign patterns in lex order with + first.
pub fn sign_patterns(m: usize) -> impl Iterator<Item = Vec<i8>> {
    (0..1u64 << m).map(move |mask| (0..m).map(|i| if mask >> (m - 1 - i) & 1 == 1 { -1 } else { 1 }).collect())
}

/// Saturated basis of {v : g_i v = eps_i v for all i}.
pub fn common_eigenlattice(family: &[IntegerMatrix], signs: &[i8]) -> Vec<IntVec> {
    let n = family[0].rows();
    let mut stacked: Option<IntegerMatrix> = None;
    for (g, &e) in family.iter().zip(signs) {
        let d = g.sub(&IntegerMatrix::identity(n).scale(&BigInt::from(e)));
        stacked = Some(match stacked {
            None => d,
            Some(s) => s.vstack(&d),
        });
    }
    match stacked {
        None => IntegerMatrix::identity(n).to_rows(),
        Some(s) => integer_kernel_basis(&s),
    }
}

/// Invariant sublattices of the given corank found by the sign-pattern
/// tactics: lines spanned by common eigenvectors (corank n-1) and
/// annihilators of common left eigenvectors (corank 1).
pub fn invariant_sublattices(family: &[IntegerMatrix], corank: usize) -> Vec<InvariantSublattice> {
    let Some(first) = family.first() else { return Vec::new() };
    let n = first.rows();
    if corank == 0 || corank >= n {
        return Vec::new();
    }
    let mut out = Vec::new();
    if corank == n - 1 {
        for eps in sign_patterns(family.len()) {
            for v in common_eigenlattice(family, &eps) {
                let p0 = complete_to_unimodular(n, std::slice::from_ref(&v)).expect("kernel vectors are primitive");
                let mut cols: Vec<IntVec> = (1..n).map(|j| p0.col(j)).collect();
                cols.push(v);
                let p = IntegerMatrix::from_columns(n, &cols);
                out.push(InvariantSublattice::build(family, p, 1, eps.clone()));
            }
        }
    } else if corank == 1 {
        let transposed: Vec<IntegerMatrix> = family.iter().map(|g| g.transpose()).collect();
        for eps in sign_patterns(family.len()) {
            for w in common_eigenlattice(&transposed, &eps) {
                let s = integer_kernel_basis(&IntegerMatrix::from_rows(n, std::slice::from_ref(&w)));
                let p0 = complete_to_unimodular(n, &s).expect("annihilator is saturated");
                let mut cols = vec![p0.col(n - 1)];
                cols.extend(s);
                let p = IntegerMatrix::from_columns(n, &cols);
                out.push(InvariantSublattice::build(family, p, n - 1, eps.clone()));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intlin::solve_integer_system;

    fn m(rows: &[&[i64]]) -> IntegerMatrix {
        IntegerMatrix::from_i64(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn w9() -> Vec<IntegerMatrix> {
        vec![m(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]), m(&[&[0, 0, -1], &[0, -1, 0], &[-1, 0, 0]])]
    }

    fn w5() -> Vec<IntegerMatrix> {
        vec![m(&[&[1, 0, 0], &[0, 0, -1], &[0, 1, -1]]), m(&[&[-1, 0, 0], &[0, 0, -1], &[0, -1, 0]])]
    }

    #[test]
    fn identity_intertwiners_are_all_matrices() {
        let id = vec![IntegerMatrix::identity(3)];
        assert_eq!(intertwiner_basis(&id, &id).rank(), 9);
    }

    #[test]
    fn coprime_orders_have_no_intertwiner() {
        let g = vec![m(&[&[-1, 0], &[0, -1]])];
        let h = vec![m(&[&[0, -1], &[1, -1]])];
        assert_eq!(intertwiner_basis(&g, &h).rank(), 0);
    }

    #[test]
    fn induced_one_example_lattice_contains_printed_witness() {
        let g = w9();
        let h = vec![m(&[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]), m(&[&[-1, 0, 0], &[0, 0, -1], &[0, -1, 0]])];
        let t = m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        assert!(is_witness(&t, &g, &h));
        let lat = intertwiner_basis(&g, &h);
        let cols: Vec<IntVec> = lat.basis.iter().map(|b| b.entries().to_vec()).collect();
        let a = IntegerMatrix::from_columns(9, &cols);
        assert!(solve_integer_system(&a, t.entries()).is_some());
        let res = simultaneously_similar(&g, &h, SearchOptions::default());
        assert!(is_witness(res.witness().unwrap(), &g, &h));
    }

    #[test]
    fn full_lattice_sweep_finds_identity() {
        let id = vec![IntegerMatrix::identity(2)];
        match find_unimodular_combination(&intertwiner_basis(&id, &id), SearchOptions::with_bound(1)) {
            SearchOutcome::Found(t) => assert!(is_unimodular(&t)),
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn rank_zero_lattice_reports_bound_zero() {
        let g = vec![m(&[&[-1, 0], &[0, -1]])];
        let h = vec![m(&[&[0, -1], &[1, -1]])];
        assert_eq!(
            find_unimodular_combination(&intertwiner_basis(&g, &h), SearchOptions::default()),
            SearchOutcome::NotFoundWithinBound(0)
        );
    }

    #[test]
    fn family_is_similar_to_itself() {
        let g = w5();
        assert!(matches!(simultaneously_similar(&g, &g, SearchOptions::default()), SimilarityResult::Found(_)));
    }

    #[test]
    fn certificates() {
        let c = m(&[&[1, 0], &[0, -1]]);
        let j = m(&[&[0, 1], &[1, 0]]);
        let b = m(&[&[0, -1], &[1, 0]]);
        // charpoly
        let r = simultaneously_similar(std::slice::from_ref(&c), std::slice::from_ref(&b), SearchOptions::default());
        assert_eq!(r, SimilarityResult::ProvablyDistinct(Certificate::CharPolyMismatch(0)));
        // generators match individually, the product does not
        let g = vec![c.clone(), j.clone()];
        let h = vec![c.clone(), c.clone()];
        match simultaneously_similar(&g, &h, SearchOptions::default()) {
            SimilarityResult::ProvablyDistinct(cert) => {
                assert!(matches!(cert, Certificate::RationalNonConjugate { .. }));
                assert!(cert.check(&g, &h));
            }
            o => panic!("{o:?}"),
        }
        // conjugate over Q by I - B (det 2), commutant of rank one
        let g = vec![b.clone(), c.clone()];
        let h = vec![b.clone(), j.clone()];
        match simultaneously_similar(&g, &h, SearchOptions::default()) {
            SimilarityResult::ProvablyDistinct(cert) => {
                assert!(matches!(&cert, Certificate::IntertwinerRankOneNonUnimodular { det } if det.abs() == BigInt::from(2)));
                assert!(cert.check(&g, &h));
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn rationally_but_not_integrally_similar_is_not_found() {
        // diag(1,-1) and the swap: intertwiners [[a,a],[b,-b]] all have even det
        let c = m(&[&[1, 0], &[0, -1]]);
        let j = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(simultaneously_similar(&[c], &[j], SearchOptions::default()), SimilarityResult::NotFoundWithinBound(3));
    }

    #[test]
    fn round_trip_through_unimodular_conjugation() {
        let u = m(&[&[1, 2, 0], &[0, 1, -1], &[1, 1, 0]]);
        let uinv = unimodular_inverse(&u).unwrap();
        for fam in [w5(), w9()] {
            let h: Vec<_> = fam.iter().map(|g| uinv.mul(g).mul(&u)).collect();
            let r = simultaneously_similar(&fam, &h, SearchOptions::default());
            assert!(is_witness(r.witness().expect("found"), &fam, &h));
        }
    }

    #[test]
    fn w5_corank_one_quotient_signs() {
        let subs = invariant_sublattices(&w5(), 1);
        let hit = subs.iter().find(|s| s.signs == vec![1, -1]).expect("quotient line with signs (+,-)");
        assert_eq!(hit.a[0], IntegerMatrix::identity(1));
        assert_eq!(hit.a[1], IntegerMatrix::identity(1).neg());
        for s in &subs {
            for (i, g) in w5().iter().enumerate() {
                let pinv = unimodular_inverse(&s.basis).unwrap();
                assert_eq!(pinv.mul(g).mul(&s.basis), s.reassemble(i));
            }
        }
    }

    #[test]
    fn identity_family_has_coordinate_lines() {
        let subs = invariant_sublattices(&[IntegerMatrix::identity(3)], 2);
        let lines: Vec<IntVec> = subs.iter().map(|s| s.sublattice()[0].clone()).collect();
        assert_eq!(lines.len(), 3);
        for e in IntegerMatrix::identity(3).columns() {
            assert!(lines.contains(&e));
        }
    }

    #[test]
    fn w9_lines_match_brute_force() {
        let fam = w9();
        let subs = invariant_sublattices(&fam, 2);
        // brute force: primitive vectors in a box that are common eigenvectors, up to sign
        let mut brute = Vec::new();
        for x in -2i64..=2 {
            for y in -2i64..=2 {
                for z in -2i64..=2 {
                    let v = crate::intlin::ivec(&[x, y, z]);
                    if !crate::intlin::is_primitive(&v) {
                        continue;
                    }
                    let eig = fam.iter().all(|g| {
                        let gv = g.mul_vec(&v);
                        gv == v || gv == v.iter().map(|a| -a).collect::<Vec<_>>()
                    });
                    if eig && (x, y, z) > (0, 0, 0) {
                        brute.push(v);
                    }
                }
            }
        }
        assert_eq!(subs.len(), brute.len());
        for s in &subs {
            let v = s.sublattice()[0].clone();
            let neg: IntVec = v.iter().map(|a| -a).collect();
            assert!(brute.contains(&v) || brute.contains(&neg));
        }
    }
}
