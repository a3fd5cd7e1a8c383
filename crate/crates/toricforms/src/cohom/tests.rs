use super::*;

fn m(rows: &[&[i64]]) -> IntegerMatrix {
    IntegerMatrix::from_i64(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
}

fn w_family(k: usize) -> (IntegerMatrix, IntegerMatrix) {
    let rot = m(&[&[1, 0, 0], &[0, 0, -1], &[0, 1, -1]]);
    match k {
        5 => (rot, m(&[&[-1, 0, 0], &[0, 0, -1], &[0, -1, 0]])),
        6 => (rot, m(&[&[1, 0, 0], &[0, 0, 1], &[0, 1, 0]])),
        7 => (rot, m(&[&[-1, 0, 0], &[0, 0, 1], &[0, 1, 0]])),
        8 => (rot, m(&[&[1, 0, 0], &[0, 0, -1], &[0, -1, 0]])),
        9 => (m(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]), m(&[&[0, 0, -1], &[0, -1, 0], &[-1, 0, 0]])),
        10 => (m(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]), m(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]])),
        _ => unreachable!(),
    }
}

fn h1(gens: &[IntegerMatrix], names: &[&str]) -> H1Report {
    compute_h1_family(gens, names, SearchOptions::default()).unwrap()
}

fn assert_expr(report: &H1Report, expected: &str) {
    let want = canonical_text(expected, &report.reduced.group).unwrap();
    assert_eq!(report.text(), want, "trace: {:?}", report.trace);
    assert!(report.caveats.is_empty(), "caveats: {:?}", report.caveats);
}

fn elem(g: &FiniteGroup, w: &str) -> usize {
    word_element(g, w).unwrap()
}

#[test]
fn d6_table_cells() {
    let table: [(usize, [&str; 3]); 6] = [
        (5, ["Br(k|L)", "Br(k|L)", "Br(k|L^<s>) (+) Br(k|L^<r>)"]),
        (6, ["1", "Br(k|L)", "M(r,s)"]),
        (7, ["Br(k|L)", "Br(k|L)", "M(r,s) (+) Br(k|L^<r>)"]),
        (8, ["1", "Br(k|L)", "Br(k|L^<s>)"]),
        (9, ["Br(k|L)", "1", "Br(L^<sr>|L)"]),
        (10, ["1", "1", "1"]),
    ];
    for (k, [z2, z3, d6]) in table {
        let (r, s) = w_family(k);
        assert_expr(&h1(std::slice::from_ref(&s), &["s"]), z2);
        assert_expr(&h1(std::slice::from_ref(&r), &["r"]), z3);
        assert_expr(&h1(&[r, s], &["r", "s"]), d6);
    }
}

#[test]
fn w9_generators_are_verified_cocycles() {
    let (r, s) = w_family(9);
    let report = h1(&[r, s], &["r", "s"]);
    assert_eq!(report.cocycles.len(), 1);
    let c = &report.cocycles[0];
    let g = &report.reduced.group;
    assert!(verify_cocycle(c, g, &report.reduced.family.mats));
    // the parameter is fixed by a reflection and c_r is trivial
    assert_eq!(c.params[0].subgroup.len(), 2);
    assert!(c.values[elem(g, "r")].is_zero());
    assert!(!c.values[elem(g, "s")].is_zero());
}

#[test]
fn constant_generator_value_on_w9_is_not_a_cocycle() {
    // c_r = (1,1,1), c_s = (a,a,a) for an s-fixed a, read literally
    let (r, s) = w_family(9);
    let red = ReducedGroup::from_matrices(&[r, s], &["r".into(), "s".into()]).unwrap();
    let g = &red.group;
    let h = g.closure(&[elem(g, "s")]);
    let param = SymbolParam::new(g, &Character::trivial(&h));
    let mut cs = IntegerMatrix::zeros(3, 3);
    for i in 0..3 {
        cs.set(i, 0, 1.into());
    }
    let spec = CocycleSpec::from_generator_values(g, &red.family.mats, vec![param], &[IntegerMatrix::zeros(3, 3), cs]);
    assert!(!verify_cocycle(&spec, g, &red.family.mats));
}

#[test]
fn klein_four_summand_example() {
    // Trivial H and U: the surjection is the augmentation, so the connecting
    // map is the full norm and the answer is Br(k|L), not Br(k|L^<sr>).
    let r = m(&[&[-1, 0, 0], &[0, 0, 1], &[0, 1, 0]]);
    let s = m(&[&[-1, 0, 0], &[1, 0, -1], &[-1, -1, 0]]);
    let report = h1(&[r, s], &["r", "s"]);
    assert_expr(&report, "Br(k|L)");
    assert_eq!(report.cocycles.len(), 1);
}

#[test]
fn dihedral_rank_two_is_the_m_quotient() {
    let r = m(&[&[0, -1], &[1, -1]]);
    let s = m(&[&[0, 1], &[1, 0]]);
    let report = h1(&[r, s], &["r", "s"]);
    assert_expr(&report, "M(r,s)");
    assert_eq!(report.cocycles.len(), 1);
    let p = &report.cocycles[0].params[0];
    assert_eq!(p.subgroup.len(), 6);
    assert!(!p.character().is_trivial());
}

#[test]
fn rank_four_unipotent_example_collapses() {
    // The connecting map from the trivial quotient kills both Brauer classes
    // of the diagonal block.
    let r = m(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[1, 1, -1, 0], &[0, 0, 0, 1]]);
    let s = m(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 1, 0, -1]]);
    assert_expr(&h1(&[r, s], &["r", "s"]), "1");
}

#[test]
fn w7_combines_a_line_and_the_m_quotient() {
    let (r, s) = w_family(7);
    let report = h1(&[r, s], &["r", "s"]);
    assert_expr(&report, "Br(k|L^<r>) (+) M(r,s)");
    assert_eq!(report.cocycles.len(), 2);
}

#[test]
fn order_two_lemma_cases() {
    let brauer = [
        m(&[&[-1, 0, 0], &[0, 0, -1], &[0, -1, 0]]),
        m(&[&[-1, 0, 0], &[0, 0, 1], &[0, 1, 0]]),
        m(&[&[0, 0, -1], &[0, -1, 0], &[-1, 0, 0]]),
    ];
    let trivial = [
        m(&[&[1, 0, 0], &[0, 0, 1], &[0, 1, 0]]),
        m(&[&[1, 0, 0], &[0, 0, -1], &[0, -1, 0]]),
        m(&[&[0, 0, 1], &[0, 1, 0], &[1, 0, 0]]),
    ];
    for a in brauer {
        assert_expr(&h1(&[a], &["s"]), "Br(k|L)");
    }
    for a in trivial {
        assert_expr(&h1(&[a], &["s"]), "1");
    }
}

#[test]
fn perturbed_cocycle_fails_verification() {
    let (r, s) = w_family(5);
    let report = h1(&[r, s], &["r", "s"]);
    let mut c = report.cocycles[0].clone();
    let g = &report.reduced.group;
    let x = elem(g, "r");
    let bumped = c.values[x].get(0, 0) + 1;
    c.values[x].set(0, 0, bumped);
    assert!(!verify_cocycle(&c, g, &report.reduced.family.mats));
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

#[test]
fn induced_isomorphism_certificate_for_w9() {
    let (r, s) = w_family(9);
    let row = CertificateCheck {
        kind: CertificateKind::InducedIsomorphism,
        family: vec![r, s],
        names: names(&["g1", "g2"]),
        subgroup: names(&["g2"]),
        character: vec![-1],
        reps: names(&["1", "g1", "g1^2"]),
        t: Some(m(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, 1]])),
    };
    assert!(verify_certificate(&row).unwrap());
    let identity = CertificateCheck { t: None, ..row };
    assert!(!verify_certificate(&identity).unwrap());
}

#[test]
fn induced_summand_certificate_for_d8() {
    let g1 = m(&[&[1, 0, 1], &[0, 0, -1], &[0, 1, 0]]);
    let g2 = m(&[&[-1, 0, -1], &[0, -1, 0], &[0, 0, 1]]);
    let row = CertificateCheck {
        kind: CertificateKind::InducedSummand,
        family: vec![g1, g2],
        names: names(&["g1", "g2"]),
        subgroup: names(&["g2g1"]),
        character: vec![-1, 1],
        reps: names(&["1", "g1", "g1^2", "g1^3"]),
        t: Some(m(&[&[1, 1, 0, 1], &[0, 1, 0, 0], &[0, 1, 1, 0], &[0, 1, 1, 1]])),
    };
    assert!(verify_certificate(&row).unwrap());
    let identity = CertificateCheck { t: None, ..row };
    assert!(!verify_certificate(&identity).unwrap());
}

#[test]
fn h1_through_a_homomorphism_with_kernel() {
    use crate::symgrp::builtin_group;
    let (_, s) = w_family(9);
    let p = builtin_group("Z4").unwrap();
    let phi = GroupHom::into_generated(p, vec![s]).unwrap();
    let report = compute_h1(&phi, SearchOptions::default()).unwrap();
    assert_eq!(report.reduced.group.order(), 2);
    assert_eq!(report.reduced.kernel.len(), 2);
    assert_eq!(report.text(), "Br(k|L)");
}
