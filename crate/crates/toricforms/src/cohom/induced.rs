//! Induced modules Ind_H^G(U): the operators T_g on the coset basis and
//! the integers b_i(g) used to write down generating cocycles.

use num_bigint::BigInt;
use thiserror::Error;

use crate::intlin::IntegerMatrix;
use crate::symgrp::{Character, FiniteGroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InducedError {
    #[error("index of the subgroup is {actual}, expected {expected}")]
    Index { expected: usize, actual: usize },
    #[error("{0} is not a set of left coset representatives")]
    BadReps(String),
    #[error("character is not defined on the subgroup")]
    BadCharacter,
}

/// T_g on the basis t_i ⊗ 1 of Ind_H^G(U): column j is the image of
/// t_j ⊗ 1, i.e. (T_g)_{ij} = U(t_i^{-1} g t_j) when that lies in H.
#[derive(Clone, Debug)]
pub struct InducedOperators {
    pub subgroup: Vec<usize>,
    pub character: Character,
    pub reps: Vec<usize>,
}

impl InducedOperators {
    /// Shortlex-least coset representatives.
    pub fn new(g: &FiniteGroup, character: &Character) -> Self {
        let reps = g.left_coset_reps(&character.subgroup);
        InducedOperators { subgroup: character.subgroup.clone(), character: character.clone(), reps }
    }

    pub fn with_index(g: &FiniteGroup, character: &Character, index: usize) -> Result<Self, InducedError> {
        let ops = Self::new(g, character);
        if ops.reps.len() != index {
            return Err(InducedError::Index { expected: index, actual: ops.reps.len() });
        }
        Ok(ops)
    }

    pub fn with_reps(g: &FiniteGroup, character: &Character, reps: Vec<usize>) -> Result<Self, InducedError> {
        let mut covered: Vec<usize> =
            reps.iter().flat_map(|&t| character.subgroup.iter().map(move |&h| g.mul(t, h))).collect();
        covered.sort_unstable();
        covered.dedup();
        if covered.len() != g.order() || reps.len() * character.subgroup.len() != g.order() {
            return Err(InducedError::BadReps(format!("{reps:?}")));
        }
        Ok(InducedOperators { subgroup: character.subgroup.clone(), character: character.clone(), reps })
    }

    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// For coset i, the unique j with t_i^{-1} g t_j in H, and that element.
    fn landing(&self, g: &FiniteGroup, x: usize, i: usize) -> (usize, usize) {
        let ti = g.inv(self.reps[i]);
        for (j, &tj) in self.reps.iter().enumerate() {
            let h = g.mul(g.mul(ti, x), tj);
            if self.subgroup.binary_search(&h).is_ok() {
                return (j, h);
            }
        }
        unreachable!("coset representatives cover the group")
    }

    pub fn matrix(&self, g: &FiniteGroup, x: usize) -> IntegerMatrix {
        let n = self.dim();
        let mut m = IntegerMatrix::zeros(n, n);
        for i in 0..n {
            let (j, h) = self.landing(g, x, i);
            m.set(i, j, BigInt::from(self.character.value(h).expect("h lies in H")));
        }
        m
    }

    pub fn generator_matrices(&self, g: &FiniteGroup) -> Vec<IntegerMatrix> {
        g.generators().iter().map(|&x| self.matrix(g, x)).collect()
    }

    pub fn all_matrices(&self, g: &FiniteGroup) -> Vec<IntegerMatrix> {
        g.elements().map(|x| self.matrix(g, x)).collect()
    }

    /// b_i(g) = 0 when t_i^{-1} g t_j lies in the kernel of U, else 1.
    pub fn b_integers(&self, g: &FiniteGroup, x: usize) -> Vec<i64> {
        (0..self.dim())
            .map(|i| {
                let (_, h) = self.landing(g, x, i);
                if self.character.value(h) == Some(1) {
                    0
                } else {
                    1
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symgrp::{builtin_group, parse_word};

    fn elem(g: &FiniteGroup, w: &str) -> usize {
        g.eval(&parse_word(w, g.generator_names()).unwrap())
    }

    #[test]
    fn w9_example_operators_and_b_values() {
        let p = builtin_group("D6").unwrap();
        let g = p.group();
        let s = elem(g, "s");
        let h = g.closure(&[s]);
        let chi = Character { subgroup: h.clone(), signs: h.iter().map(|&x| if x == 0 { 1 } else { -1 }).collect() };
        let ops = InducedOperators::with_index(g, &chi, 3).unwrap();
        let names: Vec<String> = ops.reps.iter().map(|&t| g.element_name(t)).collect();
        assert_eq!(names, vec!["1", "r", "r^2"]);
        let tr = ops.matrix(g, elem(g, "r"));
        let ts = ops.matrix(g, s);
        assert_eq!(tr, IntegerMatrix::from_i64(&[vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]));
        assert_eq!(ts, IntegerMatrix::from_i64(&[vec![-1, 0, 0], vec![0, 0, -1], vec![0, -1, 0]]));
        assert_eq!(ops.b_integers(g, s), vec![1, 1, 1]);
        assert_eq!(ops.b_integers(g, elem(g, "r")), vec![0, 0, 0]);
    }

    #[test]
    fn operators_form_a_representation() {
        let p = builtin_group("D8").unwrap();
        let g = p.group();
        for sub in g.subgroups_all(48).unwrap() {
            for chi in crate::symgrp::enumerate_characters(g, &sub) {
                let ops = InducedOperators::new(g, &chi);
                let mats = ops.all_matrices(g);
                for a in g.elements() {
                    for b in g.elements() {
                        assert_eq!(mats[a].mul(&mats[b]), mats[g.mul(a, b)]);
                    }
                }
            }
        }
    }

    #[test]
    fn full_subgroup_trivial_character_is_one() {
        let p = builtin_group("D6").unwrap();
        let g = p.group();
        let all: Vec<usize> = g.elements().collect();
        let ops = InducedOperators::with_index(g, &Character::trivial(&all), 1).unwrap();
        for x in g.elements() {
            assert!(ops.matrix(g, x).is_identity());
            assert_eq!(ops.b_integers(g, x), vec![0]);
        }
        assert!(InducedOperators::with_index(g, &Character::trivial(&all), 2).is_err());
    }
}
