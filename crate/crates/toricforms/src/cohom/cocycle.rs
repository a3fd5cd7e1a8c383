//! Formal cocycles. A value c_g is an n-tuple of Laurent monomials in
//! symbols t_1(a), ..., t_m(a) (Galois conjugates of parameters), stored
//! as an n×m exponent matrix E_g. The Galois group permutes the symbols
//! through P_g, and g acts on a value by E ↦ ρ(g) E P_gᵀ.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::induced::InducedOperators;
use crate::intlin::{solve_integer_system, IntVec, IntegerMatrix};
use crate::symgrp::{Character, FiniteGroup};

/// A parameter a with H = subgroup and h(a) = a^{χ(h)} for h in H; its
/// symbols are t_i(a) for the left coset representatives t_i of H.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolParam {
    pub subgroup: Vec<usize>,
    pub signs: Vec<i8>,
    pub reps: Vec<usize>,
}

impl SymbolParam {
    pub fn new(g: &FiniteGroup, character: &Character) -> Self {
        let reps = g.left_coset_reps(&character.subgroup);
        SymbolParam { subgroup: character.subgroup.clone(), signs: character.signs.clone(), reps }
    }

    pub fn character(&self) -> Character {
        Character { subgroup: self.subgroup.clone(), signs: self.signs.clone() }
    }

    /// Galois action on this parameter's symbols.
    pub fn action(&self, g: &FiniteGroup, x: usize) -> IntegerMatrix {
        InducedOperators { subgroup: self.subgroup.clone(), character: self.character(), reps: self.reps.clone() }
            .matrix(g, x)
    }

    /// Constraint on the parameter, e.g. `a in k^x`, `a fixed by <s>`,
    /// `r(a)=a, s(a)=a^-1`.
    pub fn constraint(&self, g: &FiniteGroup, name: &str) -> String {
        let full = self.subgroup.len() == g.order();
        let chi = self.character();
        if chi.is_trivial() {
            if full {
                format!("{name} in k^x")
            } else if self.subgroup.len() == 1 {
                format!("{name} in L^x")
            } else {
                format!("{name} fixed by {}", g.subgroup_name(&self.subgroup))
            }
        } else {
            let gens = g.subgroup_generators(&self.subgroup);
            let parts: Vec<String> = gens
                .iter()
                .map(|&h| {
                    let e = if chi.value(h) == Some(1) { name.to_string() } else { format!("{name}^-1") };
                    format!("{}({name})={e}", g.element_name(h))
                })
                .collect();
            parts.join(", ")
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CocycleSpec {
    pub n: usize,
    pub params: Vec<SymbolParam>,
    /// Exponent matrix for every element of the reduced group.
    pub values: Vec<IntegerMatrix>,
}

const PARAM_NAMES: [&str; 6] = ["a", "b", "c", "d", "e", "f"];

impl CocycleSpec {
    /// Extends values given on the generators along each element's word via
    /// c_{wx} = c_w + w·c_x. The result is a cocycle only if the generator
    /// values are compatible with the relations; check with [`verify_cocycle`].
    pub fn from_generator_values(
        g: &FiniteGroup,
        rho: &[IntegerMatrix],
        params: Vec<SymbolParam>,
        gen_values: &[IntegerMatrix],
    ) -> CocycleSpec {
        let n = rho[0].rows();
        let mut spec = CocycleSpec { n, params, values: Vec::new() };
        let m = spec.symbol_count();
        let mut values = Vec::with_capacity(g.order());
        for x in g.elements() {
            let mut acc = IntegerMatrix::zeros(n, m);
            let mut w = g.identity();
            for &letter in g.word(x) {
                let step = spec.act(g, &rho[w], w, &gen_values[letter]);
                acc = acc.add(&step);
                w = g.mul(w, g.generators()[letter]);
            }
            values.push(acc);
        }
        spec.values = values;
        spec
    }

    pub fn symbol_count(&self) -> usize {
        self.params.iter().map(|p| p.reps.len()).sum()
    }

    /// Block-diagonal action on all symbols.
    pub fn symbol_action(&self, g: &FiniteGroup, x: usize) -> IntegerMatrix {
        let mut acc = IntegerMatrix::zeros(0, 0);
        for p in &self.params {
            acc = IntegerMatrix::block_diag(&acc, &p.action(g, x));
        }
        acc
    }

    /// Exponents of g·c for a value c.
    pub fn act(&self, g: &FiniteGroup, rho: &IntegerMatrix, x: usize, e: &IntegerMatrix) -> IntegerMatrix {
        rho.mul(e).mul(&self.symbol_action(g, x).transpose())
    }

    /// Same cocycle in another basis of the torus: values become P·E.
    pub fn transform(&self, p: &IntegerMatrix) -> CocycleSpec {
        CocycleSpec { n: p.rows(), params: self.params.clone(), values: self.values.iter().map(|e| p.mul(e)).collect() }
    }

    /// Values embedded into a larger torus at the given row offset.
    pub fn pad(&self, n: usize, offset: usize) -> CocycleSpec {
        let m = self.symbol_count();
        let values = self
            .values
            .iter()
            .map(|e| {
                let mut big = IntegerMatrix::zeros(n, m);
                for i in 0..e.rows() {
                    for j in 0..m {
                        big.set(offset + i, j, e.get(i, j).clone());
                    }
                }
                big
            })
            .collect();
        CocycleSpec { n, params: self.params.clone(), values }
    }

    fn symbol_names(&self, g: &FiniteGroup) -> Vec<String> {
        let mut out = Vec::new();
        for (k, p) in self.params.iter().enumerate() {
            let a = PARAM_NAMES.get(k).map(|s| s.to_string()).unwrap_or_else(|| format!("a{k}"));
            for &t in &p.reps {
                if t == 0 {
                    out.push(a.clone());
                } else {
                    out.push(format!("{}({a})", g.element_name(t)));
                }
            }
        }
        out
    }

    /// Human-readable value of c_x, e.g. `(a,1,r(a)^-1)`.
    pub fn render_value(&self, g: &FiniteGroup, x: usize) -> String {
        let names = self.symbol_names(g);
        let e = &self.values[x];
        let coords: Vec<String> = (0..e.rows())
            .map(|i| {
                let mut factors = Vec::new();
                for (j, name) in names.iter().enumerate() {
                    let k = e.get(i, j);
                    if k.is_zero() {
                        continue;
                    }
                    if k.is_one() {
                        factors.push(name.clone());
                    } else {
                        factors.push(format!("{name}^{k}"));
                    }
                }
                if factors.is_empty() {
                    "1".to_string()
                } else {
                    factors.join("*")
                }
            })
            .collect();
        format!("({})", coords.join(","))
    }

    pub fn describe(&self, g: &FiniteGroup) -> String {
        let cons: Vec<String> = self
            .params
            .iter()
            .enumerate()
            .map(|(k, p)| p.constraint(g, PARAM_NAMES.get(k).copied().unwrap_or("a")))
            .collect();
        let vals: Vec<String> = g
            .generators()
            .iter()
            .enumerate()
            .map(|(i, &x)| format!("c_{} = {}", g.generator_names()[i], self.render_value(g, x)))
            .collect();
        format!("{}; {}", vals.join(", "), cons.join("; "))
    }
}

/// Checks c_1 = 1 and c_{gh} = c_g + g·c_h (additively on exponents) for
/// every pair of elements.
pub fn verify_cocycle(spec: &CocycleSpec, g: &FiniteGroup, rho: &[IntegerMatrix]) -> bool {
    let m = spec.symbol_count();
    if spec.values.len() != g.order() || spec.values.iter().any(|e| e.rows() != spec.n || e.cols() != m) {
        return false;
    }
    if !spec.values[0].is_zero() {
        return false;
    }
    let actions: Vec<IntegerMatrix> = g.elements().map(|x| spec.symbol_action(g, x).transpose()).collect();
    for a in g.elements() {
        for b in g.elements() {
            let rhs = spec.values[a].add(&rho[a].mul(&spec.values[b]).mul(&actions[a]));
            if spec.values[g.mul(a, b)] != rhs {
                return false;
            }
        }
    }
    true
}

/// Whether z·c - c is a formal coboundary g·B - B for some exponent matrix
/// B, checked on the generators. A true answer proves the class of c is
/// fixed by z; false means no symbolic witness exists.
pub fn is_fixed_by(spec: &CocycleSpec, g: &FiniteGroup, rho: &[IntegerMatrix], z: &IntegerMatrix) -> bool {
    let n = spec.n;
    let m = spec.symbol_count();
    if m == 0 {
        return true;
    }
    let nvars = n * m;
    let mut rows: Vec<IntVec> = Vec::new();
    let mut rhs: IntVec = Vec::new();
    for &x in g.generators() {
        let r = &rho[x];
        let pt = spec.symbol_action(g, x).transpose();
        let target = z.mul(&spec.values[x]).sub(&spec.values[x]);
        for i in 0..n {
            for j in 0..m {
                // (r B pt)[i][j] - B[i][j]
                let mut row = vec![BigInt::zero(); nvars];
                for k in 0..n {
                    for l in 0..m {
                        let c = r.get(i, k) * pt.get(l, j);
                        if !c.is_zero() {
                            row[k * m + l] += c;
                        }
                    }
                }
                row[i * m + j] -= 1;
                rows.push(row);
                rhs.push(target.get(i, j).clone());
            }
        }
    }
    let a = IntegerMatrix::from_rows(nvars, &rows);
    solve_integer_system(&a, &rhs).is_some()
}

/// Trivial when every value vanishes.
pub fn is_zero_cocycle(spec: &CocycleSpec) -> bool {
    spec.values.iter().all(|e| e.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symgrp::builtin_group;

    #[test]
    fn constant_one_cocycle_verifies() {
        let p = builtin_group("D6").unwrap();
        let g = p.group();
        let rho: Vec<IntegerMatrix> = g.elements().map(|_| IntegerMatrix::identity(2)).collect();
        let all: Vec<usize> = g.elements().collect();
        let spec = CocycleSpec {
            n: 2,
            params: vec![SymbolParam::new(g, &Character::trivial(&all))],
            values: vec![IntegerMatrix::zeros(2, 1); g.order()],
        };
        assert!(verify_cocycle(&spec, g, &rho));
        assert!(is_zero_cocycle(&spec));
    }
}
