//! Exact integer linear algebra: Smith and Hermite normal forms, integer
//! kernels, lattice quotients, unimodular inverses and matrix orders.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type IntVec = Vec<BigInt>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntLinError {
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("no k <= {0} with A^k = I")]
    OrderExceedsBound(usize),
    #[error("sub generator {0} has non-integer coordinates in the ambient basis")]
    MembershipError(usize),
    #[error("ambient basis vectors are linearly dependent")]
    DependentBasis,
    #[error("shape mismatch: {0}")]
    Shape(String),
}

/// Dense matrix of arbitrary-precision integers, row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        IntegerMatrix { rows, cols, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntegerMatrix { rows, cols, entries: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            entries.extend(row.iter().map(|&x| BigInt::from(x)));
        }
        IntegerMatrix { rows: r, cols: c, entries }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(n: usize, cols: &[IntVec]) -> Self {
        let mut m = Self::zeros(n, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), n);
            for i in 0..n {
                m.set(i, j, c[i].clone());
            }
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[IntVec]) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            entries.extend(r.iter().cloned());
        }
        IntegerMatrix { rows: rows.len(), cols, entries }
    }

    pub fn diag(d: &[BigInt]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n, n);
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    pub fn diag_i64(d: &[i64]) -> Self {
        Self::diag(&d.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> IntVec {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> IntVec {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<IntVec> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<IntVec> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_i64()).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> IntVec {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        IntegerMatrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect();
        IntegerMatrix { rows: self.rows, cols: self.cols, entries }
    }

    pub fn neg(&self) -> Self {
        self.scale(&BigInt::from(-1))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        IntegerMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|a| a * c).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    pub fn trace(&self) -> BigInt {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::identity(self.rows);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        let mut m = Self::zeros(r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                m.set(i - r0, j - c0, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                m.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        m
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        IntegerMatrix { rows: self.rows + other.rows, cols: self.cols, entries }
    }

    pub fn block_diag(a: &Self, b: &Self) -> Self {
        let mut m = Self::zeros(a.rows + b.rows, a.cols + b.cols);
        for i in 0..a.rows {
            for j in 0..a.cols {
                m.set(i, j, a.get(i, j).clone());
            }
        }
        for i in 0..b.rows {
            for j in 0..b.cols {
                m.set(a.rows + i, a.cols + j, b.get(i, j).clone());
            }
        }
        m
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }

    /// Characteristic polynomial det(xI - A), coefficients from x^n down to x^0.
    pub fn charpoly(&self) -> Vec<BigInt> {
        assert!(self.is_square());
        let n = self.rows;
        // Faddeev-LeVerrier; all divisions are exact for integer matrices.
        let mut coeffs = vec![BigInt::one()];
        let mut m = Self::zeros(n, n);
        let ident = Self::identity(n);
        for k in 1..=n {
            let ck_prev = coeffs[k - 1].clone();
            m = self.mul(&m).add(&ident.scale(&ck_prev));
            let am = self.mul(&m);
            let ck = -(am.trace()) / BigInt::from(k as i64);
            coeffs.push(ck);
        }
        coeffs
    }

    pub fn max_abs(&self) -> BigInt {
        self.entries.iter().map(|x| x.abs()).max().unwrap_or_default()
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

// Matrices serialize as arrays of rows. Entries that fit in i64 are JSON
// numbers; anything larger is written as a decimal string.
impl Serialize for IntegerMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<serde_json::Value>> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| bigint_to_json(self.get(i, j))).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntegerMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows: Vec<Vec<serde_json::Value>> = Vec::deserialize(d)?;
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut entries = Vec::with_capacity(r * c);
        for row in &rows {
            if row.len() != c {
                return Err(de::Error::custom("ragged matrix rows"));
            }
            for v in row {
                entries.push(json_to_bigint(v).map_err(de::Error::custom)?);
            }
        }
        Ok(IntegerMatrix { rows: r, cols: c, entries })
    }
}

pub fn bigint_to_json(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => serde_json::Value::from(v),
        None => serde_json::Value::String(x.to_string()),
    }
}

pub fn json_to_bigint(v: &serde_json::Value) -> Result<BigInt, String> {
    match v {
        serde_json::Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| format!("non-integer entry {n}")),
        serde_json::Value::String(s) => s.parse::<BigInt>().map_err(|e| e.to_string()),
        other => Err(format!("expected integer, found {other}")),
    }
}

pub fn ivec(xs: &[i64]) -> IntVec {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn vec_gcd(v: &[BigInt]) -> BigInt {
    v.iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

pub fn is_primitive(v: &[BigInt]) -> bool {
    vec_gcd(v).is_one()
}

/// Result of [`snf`]: `s == u * a * v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub s: IntegerMatrix,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
}

impl SmithDecomposition {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.s.rows().min(self.s.cols())).map(|i| self.s.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }

    /// Nonzero diagonal entries (the invariant factors, including 1s).
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|d| !d.is_zero()).collect()
    }
}

struct Work {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }
    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in self.a.iter_mut() {
            r.swap(i, j);
        }
        for r in self.v.iter_mut() {
            r.swap(i, j);
        }
    }
    // row_i -= q * row_j
    fn row_sub(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for k in 0..self.a[0].len() {
            let t = &self.a[j][k] * q;
            self.a[i][k] -= t;
        }
        for k in 0..self.u[0].len() {
            let t = &self.u[j][k] * q;
            self.u[i][k] -= t;
        }
    }
    // col_i -= q * col_j
    fn col_sub(&mut self, i: usize, j: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in self.a.iter_mut() {
            let t = &r[j] * q;
            r[i] -= t;
        }
        for r in self.v.iter_mut() {
            let t = &r[j] * q;
            r[i] -= t;
        }
    }
    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut() {
            *x = -x.clone();
        }
        for x in self.u[i].iter_mut() {
            *x = -x.clone();
        }
    }
}

fn rows_to_matrix(rows: Vec<Vec<BigInt>>, cols: usize) -> IntegerMatrix {
    let r = rows.len();
    IntegerMatrix::new(r, cols, rows.into_iter().flatten().collect())
}

/// Smith normal form with deterministic pivoting (least absolute value,
/// ties broken row-major).
pub fn snf(a: &IntegerMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut w = Work {
        a: a.to_rows(),
        u: IntegerMatrix::identity(m).to_rows(),
        v: IntegerMatrix::identity(n).to_rows(),
    };
    if m == 0 || n == 0 {
        return SmithDecomposition {
            s: a.clone(),
            u: IntegerMatrix::identity(m),
            v: IntegerMatrix::identity(n),
        };
    }
    let mut t = 0;
    while t < m.min(n) {
        // least nonzero |entry| in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                let x = &w.a[i][j];
                if x.is_zero() {
                    continue;
                }
                match best {
                    None => best = Some((i, j)),
                    Some((bi, bj)) => {
                        if x.abs() < w.a[bi][bj].abs() {
                            best = Some((i, j));
                        }
                    }
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if w.a[i][t].is_zero() {
                    continue;
                }
                let q = w.a[i][t].div_floor(&w.a[t][t]);
                w.row_sub(i, t, &q);
                if !w.a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if w.a[t][j].is_zero() {
                    continue;
                }
                let q = w.a[t][j].div_floor(&w.a[t][t]);
                w.col_sub(j, t, &q);
                if !w.a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // move the smallest remainder in row/column t to the pivot
                let mut bi = t;
                let mut bj = t;
                let mut bv = w.a[t][t].abs();
                for i in t + 1..m {
                    let x = w.a[i][t].abs();
                    if !x.is_zero() && x < bv {
                        bv = x;
                        bi = i;
                        bj = t;
                    }
                }
                for j in t + 1..n {
                    let x = w.a[t][j].abs();
                    if !x.is_zero() && x < bv {
                        bv = x;
                        bi = t;
                        bj = j;
                    }
                }
                w.swap_rows(t, bi);
                w.swap_cols(t, bj);
                continue;
            }
            // divisibility of the trailing block by the pivot
            let p = w.a[t][t].clone();
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(&w.a[i][j] % &p).is_zero()));
            match bad {
                Some(i) => {
                    // row_t += row_i, then re-clear
                    let minus_one = BigInt::from(-1);
                    w.row_sub(t, i, &minus_one);
                }
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t);
        }
        t += 1;
    }
    let s = rows_to_matrix(w.a, n);
    let u = rows_to_matrix(w.u, m);
    let v = rows_to_matrix(w.v, n);
    SmithDecomposition { s, u, v }
}

pub fn rank(a: &IntegerMatrix) -> usize {
    if a.rows() == 0 || a.cols() == 0 {
        return 0;
    }
    snf(a).rank()
}

/// Row-style Hermite normal form of the lattice spanned by `rows`.
/// Returns the nonzero rows: echelon, positive pivots, entries above each
/// pivot reduced into `[0, pivot)`.
pub fn hnf_rows(rows: &[IntVec], n: usize) -> Vec<IntVec> {
    let mut a: Vec<IntVec> = rows.to_vec();
    let mut out_rows = 0;
    for col in 0..n {
        if out_rows == a.len() {
            break;
        }
        // gcd elimination in column `col` among rows out_rows..
        loop {
            let mut piv: Option<usize> = None;
            for i in out_rows..a.len() {
                if a[i][col].is_zero() {
                    continue;
                }
                match piv {
                    None => piv = Some(i),
                    Some(p) => {
                        if a[i][col].abs() < a[p][col].abs() {
                            piv = Some(i)
                        }
                    }
                }
            }
            let Some(p) = piv else { break };
            a.swap(out_rows, p);
            let mut done = true;
            for i in out_rows + 1..a.len() {
                if a[i][col].is_zero() {
                    continue;
                }
                let q = a[i][col].div_floor(&a[out_rows][col]);
                for k in 0..n {
                    let t = &a[out_rows][k] * &q;
                    a[i][k] -= t;
                }
                if !a[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                if a[out_rows][col].is_negative() {
                    for x in a[out_rows].iter_mut() {
                        *x = -x.clone();
                    }
                }
                let p = a[out_rows][col].clone();
                for i in 0..out_rows {
                    let q = a[i][col].div_floor(&p);
                    if !q.is_zero() {
                        for k in 0..n {
                            let t = &a[out_rows][k] * &q;
                            a[i][k] -= t;
                        }
                    }
                }
                out_rows += 1;
                break;
            }
        }
    }
    a.truncate(out_rows);
    a
}

/// Saturated basis of the integer kernel {x : A x = 0}, in Hermite form.
pub fn integer_kernel_basis(a: &IntegerMatrix) -> Vec<IntVec> {
    let n = a.cols();
    if a.rows() == 0 {
        return IntegerMatrix::identity(n).to_rows();
    }
    let d = snf(a);
    let r = d.rank();
    let basis: Vec<IntVec> = (r..n).map(|j| d.v.col(j)).collect();
    hnf_rows(&basis, n)
}

/// Saturated basis of the left kernel {w : w A = 0}.
pub fn left_kernel_basis(a: &IntegerMatrix) -> Vec<IntVec> {
    integer_kernel_basis(&a.transpose())
}

/// One integer solution of `a x = b`, if any.
pub fn solve_integer_system(a: &IntegerMatrix, b: &[BigInt]) -> Option<IntVec> {
    assert_eq!(a.rows(), b.len());
    let n = a.cols();
    if a.rows() == 0 {
        return Some(vec![BigInt::zero(); n]);
    }
    let d = snf(a);
    let ub = d.u.mul_vec(b);
    let diag = d.diagonal();
    let mut y = vec![BigInt::zero(); n];
    for i in 0..ub.len() {
        let di = diag.get(i).cloned().unwrap_or_default();
        if di.is_zero() {
            if !ub[i].is_zero() {
                return None;
            }
        } else {
            let (q, r) = ub[i].div_rem(&di);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        }
    }
    Some(d.v.mul_vec(&y))
}

pub fn is_unimodular(a: &IntegerMatrix) -> bool {
    a.is_square() && a.det().abs().is_one()
}

pub fn unimodular_inverse(a: &IntegerMatrix) -> Result<IntegerMatrix, IntLinError> {
    if !a.is_square() {
        return Err(IntLinError::NotSquare(a.rows(), a.cols()));
    }
    if !is_unimodular(a) {
        return Err(IntLinError::NotUnimodular);
    }
    // S = U A V with S = I, so A^{-1} = V U.
    let d = snf(a);
    let inv = d.v.mul(&d.u);
    debug_assert!(a.mul(&inv).is_identity());
    Ok(inv)
}

pub const DEFAULT_ORDER_BOUND: usize = 12;

pub fn matrix_order(a: &IntegerMatrix, bound: usize) -> Result<usize, IntLinError> {
    if !a.is_square() {
        return Err(IntLinError::NotSquare(a.rows(), a.cols()));
    }
    let mut p = a.clone();
    for k in 1..=bound {
        if p.is_identity() {
            return Ok(k);
        }
        p = p.mul(a);
    }
    Err(IntLinError::OrderExceedsBound(bound))
}

/// Given vectors spanning a saturated sublattice, returns a unimodular
/// matrix whose first columns are exactly those vectors.
pub fn complete_to_unimodular(n: usize, basis: &[IntVec]) -> Result<IntegerMatrix, IntLinError> {
    let k = basis.len();
    if k == 0 {
        return Ok(IntegerMatrix::identity(n));
    }
    let b = IntegerMatrix::from_columns(n, basis);
    let d = snf(&b);
    if d.rank() != k || d.invariant_factors().iter().any(|x| !x.is_one()) {
        return Err(IntLinError::NotUnimodular);
    }
    let uinv = unimodular_inverse(&d.u)?;
    let mut cols: Vec<IntVec> = basis.to_vec();
    for j in k..n {
        cols.push(uinv.col(j));
    }
    let p = IntegerMatrix::from_columns(n, &cols);
    debug_assert!(is_unimodular(&p));
    Ok(p)
}

/// Finite abelian presentation of (ambient lattice) / (sublattice).
#[derive(Clone, Debug)]
pub struct QuotientPresentation {
    pub ambient_rank: usize,
    /// Nonzero diagonal entries of the Smith form, 1s included.
    pub invariant_factors: Vec<BigInt>,
    pub free_rank: usize,
    ambient: IntegerMatrix,
    coord_u: IntegerMatrix,
}

impl QuotientPresentation {
    /// Nontrivial finite invariant factors (those greater than 1).
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors.iter().filter(|d| !d.is_one()).cloned().collect()
    }

    /// Group order, or `None` when the quotient is infinite.
    pub fn order(&self) -> Option<BigInt> {
        if self.free_rank > 0 {
            return None;
        }
        Some(self.invariant_factors.iter().product())
    }

    /// Coordinates of an ambient-lattice vector in the ambient basis.
    pub fn coordinates(&self, x: &[BigInt]) -> Option<IntVec> {
        solve_exact(&self.ambient, x)
    }

    /// Canonical residue key of a vector of the ambient lattice: Smith
    /// coordinates, finite ones reduced into `[0, d)`.
    pub fn reduce(&self, x: &[BigInt]) -> Option<IntVec> {
        let c = self.coordinates(x)?;
        let mut z = self.coord_u.mul_vec(&c);
        for (i, d) in self.invariant_factors.iter().enumerate() {
            z[i] = z[i].mod_floor(d);
        }
        Some(z)
    }

    /// The ambient vector represented by a residue key.
    pub fn lift(&self, key: &[BigInt]) -> IntVec {
        let uinv = unimodular_inverse(&self.coord_u).expect("coordinate change is unimodular");
        self.ambient.mul_vec(&uinv.mul_vec(key))
    }

    /// All residue keys of a finite quotient, in lexicographic order.
    pub fn elements(&self) -> Option<Vec<IntVec>> {
        if self.free_rank > 0 {
            return None;
        }
        let mut out: Vec<IntVec> = vec![vec![]];
        for d in &self.invariant_factors {
            let dv = d.to_usize()?;
            let mut next = Vec::with_capacity(out.len() * dv);
            for v in &out {
                for r in 0..dv {
                    let mut w = v.clone();
                    w.push(BigInt::from(r));
                    next.push(w);
                }
            }
            out = next;
        }
        Some(out)
    }
}

/// Exact solve of `b c = x` for a full-column-rank integer matrix `b`.
fn solve_exact(b: &IntegerMatrix, x: &[BigInt]) -> Option<IntVec> {
    let sol = solve_integer_system(b, x)?;
    if b.mul_vec(&sol) == x {
        Some(sol)
    } else {
        None
    }
}

pub fn quotient_of_lattices(
    ambient_basis: &[IntVec],
    sub_generators: &[IntVec],
) -> Result<QuotientPresentation, IntLinError> {
    let r = ambient_basis.len();
    let n = ambient_basis.first().map(|v| v.len()).or(sub_generators.first().map(|v| v.len()));
    let Some(n) = n else {
        return Ok(QuotientPresentation {
            ambient_rank: 0,
            invariant_factors: vec![],
            free_rank: 0,
            ambient: IntegerMatrix::zeros(0, 0),
            coord_u: IntegerMatrix::identity(0),
        });
    };
    let b = IntegerMatrix::from_columns(n, ambient_basis);
    if r > 0 && rank(&b) != r {
        return Err(IntLinError::DependentBasis);
    }
    let mut coords = Vec::with_capacity(sub_generators.len());
    for (i, s) in sub_generators.iter().enumerate() {
        if r == 0 {
            if s.iter().any(|x| !x.is_zero()) {
                return Err(IntLinError::MembershipError(i));
            }
            continue;
        }
        coords.push(solve_exact(&b, s).ok_or(IntLinError::MembershipError(i))?);
    }
    if r == 0 {
        return Ok(QuotientPresentation {
            ambient_rank: 0,
            invariant_factors: vec![],
            free_rank: 0,
            ambient: b,
            coord_u: IntegerMatrix::identity(0),
        });
    }
    if coords.is_empty() {
        return Ok(QuotientPresentation {
            ambient_rank: r,
            invariant_factors: vec![],
            free_rank: r,
            ambient: b,
            coord_u: IntegerMatrix::identity(r),
        });
    }
    let c = IntegerMatrix::from_columns(r, &coords);
    let d = snf(&c);
    let inv = d.invariant_factors();
    Ok(QuotientPresentation {
        ambient_rank: r,
        free_rank: r - inv.len(),
        invariant_factors: inv,
        ambient: b,
        coord_u: d.u,
    })
}

/// LLL reduction (delta = 3/4) of linearly independent integer vectors.
pub fn lll_reduce(basis: &[IntVec]) -> Vec<IntVec> {
    let k = basis.len();
    if k <= 1 {
        return basis.to_vec();
    }
    let mut b: Vec<IntVec> = basis.to_vec();
    let q = |x: &BigInt| BigRational::from_integer(x.clone());
    let gso = |b: &[IntVec]| -> (Vec<Vec<BigRational>>, Vec<Vec<BigRational>>, Vec<BigRational>) {
        let k = b.len();
        let mut bstar: Vec<Vec<BigRational>> = Vec::with_capacity(k);
        let mut mu = vec![vec![BigRational::zero(); k]; k];
        let mut norms = Vec::with_capacity(k);
        for i in 0..k {
            let mut v: Vec<BigRational> = b[i].iter().map(q).collect();
            for j in 0..i {
                let num: BigRational = b[i].iter().zip(&bstar[j]).map(|(x, y)| q(x) * y).sum();
                let m = if norms[j] == BigRational::zero() { BigRational::zero() } else { num / &norms[j] };
                for (vt, yt) in v.iter_mut().zip(&bstar[j]) {
                    *vt -= &m * yt;
                }
                mu[i][j] = m;
            }
            let nn: BigRational = v.iter().map(|x| x * x).sum();
            norms.push(nn);
            bstar.push(v);
        }
        (bstar, mu, norms)
    };
    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut i = 1;
    let mut guard = 0usize;
    while i < k && guard < 100_000 {
        guard += 1;
        let (_, mut mu, norms) = gso(&b);
        for j in (0..i).rev() {
            if mu[i][j].abs() > half {
                let r = mu[i][j].round().to_integer();
                let bj = b[j].clone();
                for (x, y) in b[i].iter_mut().zip(&bj) {
                    *x -= &r * y;
                }
                let rq = q(&r);
                for l in 0..j {
                    let t = &rq * &mu[j][l];
                    mu[i][l] -= t;
                }
                mu[i][j] -= &rq;
            }
        }
        let rhs = (&delta - &mu[i][i - 1] * &mu[i][i - 1]) * &norms[i - 1];
        if norms[i] >= rhs {
            i += 1;
        } else {
            b.swap(i, i - 1);
            i = if i > 1 { i - 1 } else { 1 };
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntegerMatrix {
        IntegerMatrix::from_i64(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn check_snf(a: &IntegerMatrix) {
        let d = snf(a);
        assert_eq!(d.u.mul(a).mul(&d.v), d.s);
        assert!(is_unimodular(&d.u));
        assert!(is_unimodular(&d.v));
        assert!(d.s.is_diagonal());
        let diag = d.diagonal();
        for w in diag.windows(2) {
            assert!(!w[0].is_negative());
            if w[0].is_zero() {
                assert!(w[1].is_zero());
            } else {
                assert!((&w[1] % &w[0]).is_zero());
            }
        }
    }

    #[test]
    fn snf_identity() {
        let d = snf(&IntegerMatrix::identity(3));
        assert!(d.s.is_identity() && d.u.is_identity() && d.v.is_identity());
    }

    #[test]
    fn snf_diag_2_3() {
        let a = m(&[&[2, 0], &[0, 3]]);
        check_snf(&a);
        assert_eq!(snf(&a).diagonal(), ivec(&[1, 6]));
    }

    #[test]
    fn snf_zero() {
        let a = IntegerMatrix::zeros(2, 2);
        let d = snf(&a);
        assert!(d.s.is_zero());
        assert!(is_unimodular(&d.u) && is_unimodular(&d.v));
    }

    #[test]
    fn snf_rectangular() {
        check_snf(&m(&[&[4, 6, 8], &[6, 9, 12]]));
        check_snf(&m(&[&[0, 2], &[3, 0], &[5, 7]]));
    }

    #[test]
    fn kernel_of_row() {
        let k = integer_kernel_basis(&m(&[&[1, 1]]));
        assert_eq!(k.len(), 1);
        assert!(k[0] == ivec(&[1, -1]) || k[0] == ivec(&[-1, 1]));
    }

    #[test]
    fn kernel_w9_reflection() {
        let s = m(&[&[0, 0, -1], &[0, -1, 0], &[-1, 0, 0]]);
        let a = s.add(&IntegerMatrix::identity(3));
        let k = integer_kernel_basis(&a);
        assert_eq!(k, vec![ivec(&[1, 0, 1]), ivec(&[0, 1, 0])]);
    }

    #[test]
    fn kernel_invertible_is_empty() {
        assert!(integer_kernel_basis(&m(&[&[2, 1], &[1, 1]])).is_empty());
    }

    #[test]
    fn quotient_w9() {
        let s = m(&[&[0, 0, -1], &[0, -1, 0], &[-1, 0, 0]]);
        let amb = integer_kernel_basis(&s.add(&IntegerMatrix::identity(3)));
        let sub = IntegerMatrix::identity(3).sub(&s).columns();
        let q = quotient_of_lattices(&amb, &sub).unwrap();
        assert_eq!(q.torsion(), ivec(&[2]));
        assert_eq!(q.free_rank, 0);
        assert_eq!(q.order(), Some(BigInt::from(2)));
    }

    #[test]
    fn quotient_trivial_and_scaled() {
        let amb = IntegerMatrix::identity(2).columns();
        let q = quotient_of_lattices(&amb, &amb).unwrap();
        assert_eq!(q.order(), Some(BigInt::one()));
        let sub = IntegerMatrix::diag_i64(&[2, 2]).columns();
        let q = quotient_of_lattices(&amb, &sub).unwrap();
        assert_eq!(q.torsion(), ivec(&[2, 2]));
    }

    #[test]
    fn quotient_membership_error() {
        let amb = vec![ivec(&[2, 0])];
        let sub = vec![ivec(&[1, 0])];
        assert_eq!(quotient_of_lattices(&amb, &sub).unwrap_err(), IntLinError::MembershipError(0));
    }

    #[test]
    fn reduce_idempotent() {
        let amb = IntegerMatrix::identity(2).columns();
        let sub = vec![ivec(&[2, 0]), ivec(&[0, 4])];
        let q = quotient_of_lattices(&amb, &sub).unwrap();
        let x = ivec(&[7, -3]);
        let k1 = q.reduce(&x).unwrap();
        let k2 = q.reduce(&q.lift(&k1)).unwrap();
        assert_eq!(k1, k2);
        assert_eq!(q.elements().unwrap().len(), 8);
    }

    #[test]
    fn unimodular_checks() {
        let t = m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]]);
        assert!(is_unimodular(&t));
        assert_eq!(unimodular_inverse(&t).unwrap(), t);
        assert!(!is_unimodular(&m(&[&[2, 0], &[0, 1]])));
        assert_eq!(unimodular_inverse(&m(&[&[2, 0], &[0, 1]])).unwrap_err(), IntLinError::NotUnimodular);
        assert_eq!(unimodular_inverse(&IntegerMatrix::identity(3)).unwrap(), IntegerMatrix::identity(3));
    }

    #[test]
    fn orders() {
        assert_eq!(matrix_order(&m(&[&[0, -1], &[1, -1]]), 12).unwrap(), 3);
        assert_eq!(matrix_order(&IntegerMatrix::identity(2), 12).unwrap(), 1);
        assert_eq!(
            matrix_order(&m(&[&[1, 1], &[0, 1]]), 12).unwrap_err(),
            IntLinError::OrderExceedsBound(12)
        );
    }

    #[test]
    fn det_and_charpoly() {
        let a = m(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(a.det(), BigInt::from(18));
        // x^3 - 9x^2 + 24x - 18
        assert_eq!(a.charpoly(), ivec(&[1, -9, 24, -18]));
        let r = m(&[&[0, -1], &[1, -1]]);
        assert_eq!(r.charpoly(), ivec(&[1, 1, 1]));
    }

    #[test]
    fn solve_system() {
        let a = m(&[&[2, 0], &[0, 3]]);
        assert_eq!(solve_integer_system(&a, &ivec(&[4, 9])), Some(ivec(&[2, 3])));
        assert_eq!(solve_integer_system(&a, &ivec(&[1, 0])), None);
    }

    #[test]
    fn completion() {
        let p = complete_to_unimodular(3, &[ivec(&[1, 1, 1])]).unwrap();
        assert!(is_unimodular(&p));
        assert_eq!(p.col(0), ivec(&[1, 1, 1]));
        assert!(complete_to_unimodular(2, &[ivec(&[2, 0])]).is_err());
    }

    #[test]
    fn lll_shortens() {
        let b = vec![ivec(&[1, 0, 0]), ivec(&[5, 1, 0]), ivec(&[7, 3, 1])];
        let r = lll_reduce(&b);
        let mat = IntegerMatrix::from_rows(3, &r);
        assert!(mat.det().abs().is_one());
        assert!(r.iter().all(|v| v.iter().all(|x| x.abs() <= BigInt::from(1))));
    }

    #[test]
    fn serde_round_trip() {
        let a = m(&[&[1, -2], &[3, 4]]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, "[[1,-2],[3,4]]");
        let b: IntegerMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
    }
}
