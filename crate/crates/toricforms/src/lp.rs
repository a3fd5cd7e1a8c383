//! Exact two-phase simplex over the rationals with Bland's rule. Small
//! dense tableaus only; used for fan separation and convexity checks.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug)]
pub struct LinearProgram {
    num_vars: usize,
    free: Vec<bool>,
    rows: Vec<(Vec<BigRational>, Cmp, BigRational)>,
    objective: Vec<BigRational>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal { value: BigRational, x: Vec<BigRational> },
    Infeasible,
    Unbounded,
}

pub fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl LinearProgram {
    /// Variables are free unless marked nonnegative.
    pub fn new(num_vars: usize) -> Self {
        LinearProgram { num_vars, free: vec![true; num_vars], rows: Vec::new(), objective: vec![q(0); num_vars] }
    }

    pub fn set_nonnegative(&mut self, var: usize) {
        self.free[var] = false;
    }

    pub fn add(&mut self, coeffs: Vec<BigRational>, cmp: Cmp, rhs: BigRational) {
        assert_eq!(coeffs.len(), self.num_vars);
        self.rows.push((coeffs, cmp, rhs));
    }

    /// Sparse form: (variable, coefficient) pairs.
    pub fn add_sparse(&mut self, terms: &[(usize, BigRational)], cmp: Cmp, rhs: BigRational) {
        let mut c = vec![q(0); self.num_vars];
        for (v, a) in terms {
            c[*v] += a;
        }
        self.add(c, cmp, rhs);
    }

    pub fn maximize(&mut self, objective: Vec<BigRational>) {
        assert_eq!(objective.len(), self.num_vars);
        self.objective = objective;
    }

    pub fn solve(&self) -> LpOutcome {
        // column layout: for each variable a positive part, and a negative
        // part if free; then slack/surplus columns; then artificials
        let mut pos_col = Vec::new();
        let mut neg_col = Vec::new();
        let mut ncols = 0;
        for v in 0..self.num_vars {
            pos_col.push(ncols);
            ncols += 1;
            if self.free[v] {
                neg_col.push(Some(ncols));
                ncols += 1;
            } else {
                neg_col.push(None);
            }
        }
        let structural = ncols;
        let m = self.rows.len();
        let mut rows: Vec<(Vec<BigRational>, Cmp, BigRational)> = Vec::with_capacity(m);
        for (c, cmp, b) in &self.rows {
            let mut r = vec![q(0); structural];
            for v in 0..self.num_vars {
                r[pos_col[v]] = c[v].clone();
                if let Some(nc) = neg_col[v] {
                    r[nc] = -c[v].clone();
                }
            }
            let (mut r, mut cmp, mut b) = (r, *cmp, b.clone());
            if b.is_negative() {
                r.iter_mut().for_each(|x| *x = -x.clone());
                b = -b;
                cmp = match cmp {
                    Cmp::Le => Cmp::Ge,
                    Cmp::Ge => Cmp::Le,
                    Cmp::Eq => Cmp::Eq,
                };
            }
            rows.push((r, cmp, b));
        }
        let n_slack = rows.iter().filter(|r| r.1 != Cmp::Eq).count();
        let n_art = rows.iter().filter(|r| r.1 != Cmp::Le).count();
        let art_start = structural + n_slack;
        let total = art_start + n_art;
        let mut tab: Vec<Vec<BigRational>> = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let (mut si, mut ai) = (structural, art_start);
        for (r, cmp, b) in rows {
            let mut row = r;
            row.resize(total + 1, q(0));
            match cmp {
                Cmp::Le => {
                    row[si] = q(1);
                    basis.push(si);
                    si += 1;
                }
                Cmp::Ge => {
                    row[si] = q(-1);
                    si += 1;
                    row[ai] = q(1);
                    basis.push(ai);
                    ai += 1;
                }
                Cmp::Eq => {
                    row[ai] = q(1);
                    basis.push(ai);
                    ai += 1;
                }
            }
            row[total] = b;
            tab.push(row);
        }
        let mut t = Tableau { tab, basis, ncols: total, allowed: total };
        // phase 1: maximize -(sum of artificials)
        if n_art > 0 {
            let mut c1 = vec![q(0); total];
            for c in c1.iter_mut().skip(art_start) {
                *c = q(-1);
            }
            if !t.run(&c1) {
                unreachable!("phase one is bounded");
            }
            if t.value(&c1).is_negative() {
                return LpOutcome::Infeasible;
            }
            // drive artificials out of the basis
            let mut r = 0;
            while r < t.tab.len() {
                if t.basis[r] >= art_start {
                    if let Some(j) = (0..art_start).find(|&j| !t.tab[r][j].is_zero()) {
                        t.pivot(r, j);
                    } else {
                        t.tab.remove(r);
                        t.basis.remove(r);
                        continue;
                    }
                }
                r += 1;
            }
            t.allowed = art_start;
        }
        let mut c2 = vec![q(0); total];
        for v in 0..self.num_vars {
            c2[pos_col[v]] = self.objective[v].clone();
            if let Some(nc) = neg_col[v] {
                c2[nc] = -self.objective[v].clone();
            }
        }
        if !t.run(&c2) {
            return LpOutcome::Unbounded;
        }
        let sol = t.solution();
        let x = (0..self.num_vars)
            .map(|v| {
                let mut val = sol[pos_col[v]].clone();
                if let Some(nc) = neg_col[v] {
                    val -= &sol[nc];
                }
                val
            })
            .collect::<Vec<_>>();
        let value = x.iter().zip(&self.objective).fold(q(0), |acc, (a, b)| acc + a * b);
        LpOutcome::Optimal { value, x }
    }
}

struct Tableau {
    tab: Vec<Vec<BigRational>>,
    basis: Vec<usize>,
    ncols: usize,
    allowed: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.tab[r][c].clone();
        for x in self.tab[r].iter_mut() {
            *x = &*x / &p;
        }
        let prow = self.tab[r].clone();
        for (i, row) in self.tab.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&prow) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.basis[r] = c;
    }

    fn value(&self, c: &[BigRational]) -> BigRational {
        self.basis.iter().zip(&self.tab).fold(q(0), |acc, (&b, row)| acc + &c[b] * &row[self.ncols])
    }

    fn solution(&self) -> Vec<BigRational> {
        let mut x = vec![q(0); self.ncols];
        for (&b, row) in self.basis.iter().zip(&self.tab) {
            x[b] = row[self.ncols].clone();
        }
        x
    }

    /// Maximizes c; false when unbounded.
    fn run(&mut self, c: &[BigRational]) -> bool {
        loop {
            let entering = (0..self.allowed).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut red = c[j].clone();
                for (&b, row) in self.basis.iter().zip(&self.tab) {
                    if !row[j].is_zero() {
                        red -= &c[b] * &row[j];
                    }
                }
                red.is_positive()
            });
            let Some(j) = entering else { return true };
            let mut best: Option<(BigRational, usize, usize)> = None;
            for (i, row) in self.tab.iter().enumerate() {
                if row[j].is_positive() {
                    let ratio = &row[self.ncols] / &row[j];
                    let better = match &best {
                        None => true,
                        Some((r, _, b)) => ratio < *r || (ratio == *r && self.basis[i] < *b),
                    };
                    if better {
                        best = Some((ratio, i, self.basis[i]));
                    }
                }
            }
            let Some((_, r, _)) = best else { return false };
            self.pivot(r, j);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_max() {
        // max x + y s.t. x + 2y <= 4, 3x + y <= 6, x,y >= 0 -> (8/5, 6/5), 14/5
        let mut lp = LinearProgram::new(2);
        lp.set_nonnegative(0);
        lp.set_nonnegative(1);
        lp.add(vec![q(1), q(2)], Cmp::Le, q(4));
        lp.add(vec![q(3), q(1)], Cmp::Le, q(6));
        lp.maximize(vec![q(1), q(1)]);
        match lp.solve() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, BigRational::new(14.into(), 5.into())),
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn infeasible_and_unbounded() {
        let mut lp = LinearProgram::new(1);
        lp.add(vec![q(1)], Cmp::Ge, q(1));
        lp.add(vec![q(1)], Cmp::Le, q(-1));
        assert_eq!(lp.solve(), LpOutcome::Infeasible);
        let mut lp = LinearProgram::new(1);
        lp.add(vec![q(1)], Cmp::Ge, q(1));
        lp.maximize(vec![q(1)]);
        assert_eq!(lp.solve(), LpOutcome::Unbounded);
    }

    #[test]
    fn free_variables_and_equalities() {
        // max -x s.t. x - y = -3, y <= 1 (free) -> x = -2 gives 2... with y<=1, x = y-3 <= -2, -x >= 2 unbounded
        let mut lp = LinearProgram::new(2);
        lp.add(vec![q(1), q(-1)], Cmp::Eq, q(-3));
        lp.add(vec![q(0), q(1)], Cmp::Ge, q(-1));
        lp.maximize(vec![q(1), q(0)]);
        match lp.solve() {
            LpOutcome::Unbounded => {}
            o => panic!("{o:?}"),
        }
        let mut lp = LinearProgram::new(2);
        lp.add(vec![q(1), q(-1)], Cmp::Eq, q(-3));
        lp.add(vec![q(0), q(1)], Cmp::Le, q(1));
        lp.maximize(vec![q(1), q(0)]);
        match lp.solve() {
            LpOutcome::Optimal { value, x } => {
                assert_eq!(value, q(-2));
                assert_eq!(x, vec![q(-2), q(1)]);
            }
            o => panic!("{o:?}"),
        }
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example; Bland's rule terminates
        let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        let mut lp = LinearProgram::new(4);
        for v in 0..4 {
            lp.set_nonnegative(v);
        }
        lp.add(vec![r(1, 4), q(-60), r(-1, 25), q(9)], Cmp::Le, q(0));
        lp.add(vec![r(1, 2), q(-90), r(-1, 50), q(3)], Cmp::Le, q(0));
        lp.add(vec![q(0), q(0), q(1), q(0)], Cmp::Le, q(1));
        lp.maximize(vec![r(3, 4), q(-150), r(1, 50), q(-6)]);
        match lp.solve() {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, r(1, 20)),
            o => panic!("{o:?}"),
        }
    }
}
