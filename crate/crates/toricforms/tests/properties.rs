use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use toricforms::acceptance::{fixture_families, random_cone, random_unimodular};
use toricforms::cohom::{compute_h1, compute_h1_family, verify_cocycle};
use toricforms::descent::{evaluate_expression, Evaluation, FieldContext};
use toricforms::fan::{automorphism_group, codim2_ray_graph, Fan};
use toricforms::fixtures::{image_generators, load_fixtures, FixtureSet};
use toricforms::intlin::{unimodular_inverse, IntegerMatrix};
use toricforms::realforms::tate_h1_real;
use toricforms::simsolve::{is_witness, simultaneously_similar, SearchOptions, SimilarityResult};
use toricforms::symgrp::{builtin_group, identify_isomorphism_type, GroupHom, IsoType};

fn set() -> &'static FixtureSet {
    use std::sync::OnceLock;
    static SET: OnceLock<FixtureSet> = OnceLock::new();
    SET.get_or_init(|| load_fixtures().unwrap())
}

fn conjugate(family: &[IntegerMatrix], u: &IntegerMatrix) -> Vec<IntegerMatrix> {
    let uinv = unimodular_inverse(u).unwrap();
    family.iter().map(|m| u.mul(m).mul(&uinv)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn simsolve_recovers_conjugated_families(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pool = fixture_families(set());
        let g = pool.choose(&mut rng).unwrap();
        let t = random_unimodular(g[0].rows(), 3, &mut rng);
        let h = conjugate(g, &unimodular_inverse(&t).unwrap());
        match simultaneously_similar(g, &h, SearchOptions::default()) {
            SimilarityResult::Found(w) => prop_assert!(is_witness(&w, g, &h)),
            other => prop_assert!(false, "{other:?} for T = {t}"),
        }
    }

    #[test]
    fn emitted_cocycles_satisfy_the_identity(seed in any::<u64>(), class in 0usize..6, image in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let labels = set().table1_labels();
        let fam = set().table1_family(&labels[class]).unwrap();
        let (gens, names) = image_generators(&fam, ["Z2", "Z3", "D6"][image]).unwrap();
        let gens = conjugate(&gens, &random_unimodular(3, 4, &mut rng));
        let names: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        let report = compute_h1_family(&gens, &names, SearchOptions::default()).unwrap();
        for c in &report.cocycles {
            prop_assert!(verify_cocycle(c, &report.reduced.group, &report.reduced.family.mats));
        }
    }

    #[test]
    fn trivial_actions_have_trivial_h1(group in prop::sample::select(vec!["Z2", "Z3", "Z4", "Z2xZ2", "D6", "D8"]), n in 1usize..5) {
        let p = builtin_group(group).unwrap();
        let images = vec![IntegerMatrix::identity(n); p.generator_names.len()];
        let report = compute_h1(&GroupHom::into_generated(p, images).unwrap(), SearchOptions::default()).unwrap();
        prop_assert!(report.expr.is_trivial(), "{}", report.text());
    }

    #[test]
    fn minus_identity_gives_elementary_two_group(n in 1usize..8) {
        let f = tate_h1_real(&IntegerMatrix::identity(n).neg()).unwrap().invariant_factors();
        prop_assert_eq!(f, vec![2.into(); n]);
    }

    #[test]
    fn real_evaluation_matches_the_lattice_oracle(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let invs = set().involutions();
        let (_, a) = invs.choose(&mut rng).unwrap();
        let b = conjugate(std::slice::from_ref(a), &random_unimodular(a.rows(), 5, &mut rng)).remove(0);
        let report = compute_h1_family(std::slice::from_ref(&b), &["s"], SearchOptions::default()).unwrap();
        let eval = evaluate_expression(&report.expr, FieldContext::RealComplex, &report.reduced.group);
        prop_assert_eq!(eval, Evaluation::Order(tate_h1_real(&b).unwrap().order()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn single_cone_automorphisms_are_bounded(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let fan = random_cone(&mut rng);
        let aut = automorphism_group(&fan).unwrap();
        let t = codim2_ray_graph(&fan.cone(0)).unwrap().vertices.len();
        let ty = identify_isomorphism_type(aut.group());
        let allowed = ["Z2", "Z3", "Z4", "Z6", "D4", "D6", "D8", "D12"];
        prop_assert!(ty == IsoType::Trivial || allowed.iter().any(|n| ty.matches_name(n)), "{ty}");
        prop_assert_eq!((2 * t) % aut.order(), 0);
    }

    #[test]
    fn lattice_basis_cones_have_dihedral_six(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_unimodular(3, 5, &mut rng);
        let aut = automorphism_group(&Fan::face_fan(3, u.columns())).unwrap();
        prop_assert_eq!(identify_isomorphism_type(aut.group()), IsoType::Dihedral(6));
    }
}
