use std::collections::BTreeMap;

use num_complex::Complex64;

use super::*;
use crate::chain::{BasedComplex, ChainHomotopy, ChainMap, Generator};
use crate::group_algebra::{GroupSpec, RingElement, RingMatrix};
use crate::moves::{Move, MoveScript};

fn z(n: usize) -> GroupSpec {
    GroupSpec::cyclic(n).unwrap()
}

fn p(g: &GroupSpec, s: &str) -> RingElement {
    RingElement::parse(g, s).unwrap()
}

fn zeta(n: usize, k: i64) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64)
}

/// `rows` in degree -1, `cols` in degree 0, entries given as text.
fn two_term(g: &GroupSpec, rows: &[&str], cols: &[&str], entries: &[(&str, &str, &str)]) -> BasedComplex {
    let mut gens: Vec<Generator> = rows.iter().map(|l| Generator::new(*l, -1)).collect();
    gens.extend(cols.iter().map(|l| Generator::new(*l, 0)));
    BasedComplex::new(g, gens, entries.iter().map(|(a, b, v)| (*a, *b, p(g, v)))).unwrap()
}

fn free(g: &GroupSpec, labels: &[&str], degree: i64) -> BasedComplex {
    BasedComplex::new(g, labels.iter().map(|l| Generator::new(*l, degree)).collect(), []).unwrap()
}

#[test]
fn cone_of_identity_is_an_expansion() {
    let g = z(3);
    let r = free(&g, &["x"], 0);
    let cone = mapping_cone(&ChainMap::identity(&r)).unwrap();
    let expected = two_term(&g, &["c.x"], &["d.x"], &[("c.x", "d.x", "1")]);
    assert_eq!(cone, expected);
    assert_eq!(cone.labels(), vec!["c.x", "d.x"]);
    assert!(cone.is_acyclic());
}

#[test]
fn cone_of_zero_map_is_a_direct_sum() {
    let g = z(2);
    let c = free(&g, &["x"], 0);
    let d = free(&g, &["y"], 0);
    let f = ChainMap::from_entries(c, d, []).unwrap();
    let cone = mapping_cone(&f).unwrap();
    assert_eq!(cone.differential().num_nonzero(), 0);
    assert_eq!(cone.degrees(), vec![-1, 0]);
    assert!(!cone.is_acyclic());
}

#[test]
fn cone_of_multiplication_by_t() {
    let g = z(5);
    let r = free(&g, &["x"], 0);
    let f = ChainMap::from_entries(r.clone(), r, [("x", "x", p(&g, "t"))]).unwrap();
    let cone = mapping_cone(&f).unwrap();
    assert!(cone.is_acyclic());
    let tv = TorsionVector::of(&cone).unwrap();
    for j in 1..5 {
        assert!((tv.get(j) - zeta(5, j as i64)).norm() < 1e-12);
        assert!(tv.logabs_at(j).abs() < 1e-12);
    }
}

#[test]
fn cone_shift_sign_and_order() {
    let g = z(3);
    let c = BasedComplex::new(
        &g,
        vec![Generator::new("a", -1), Generator::new("b", 0)],
        [("a", "b", p(&g, "1 + t"))],
    )
    .unwrap();
    let cone = mapping_cone(&ChainMap::identity(&c)).unwrap();
    assert_eq!(cone.labels(), vec!["c.a", "c.b", "d.a", "d.b"]);
    assert_eq!(cone.d_entry("c.a", "c.b").unwrap(), p(&g, "-1 - t"));
    assert_eq!(cone.generator("c.a").unwrap().degree, -2);
    assert!(cone.is_acyclic());
}

#[test]
fn expansion_has_unit_torsion() {
    let g = z(6);
    let c = two_term(&g, &["a"], &["b"], &[("a", "b", "1")]);
    for j in 0..6 {
        assert!((torsion_scalar(&c, j).unwrap() - 1.0).norm() < 1e-12);
    }
}

#[test]
fn multiplication_by_two() {
    let g = z(4);
    let c = two_term(&g, &["a"], &["b"], &[("a", "b", "2")]);
    let tv = TorsionVector::of(&c).unwrap();
    for j in 1..4 {
        assert!((tv.get(j) - 2.0).norm() < 1e-12);
        assert!((tv.logabs_at(j) - 2f64.ln()).abs() < 1e-12);
    }
}

#[test]
fn torsion_scalar_reports_failing_degree() {
    let g = z(5);
    let c = two_term(&g, &["a"], &["b"], &[("a", "b", "t - 1")]);
    assert_eq!(
        torsion_scalar(&c, 0),
        Err(TorsionError::NotAcyclic {
            degree: -1,
            character: Some(0)
        })
    );
    assert!(torsion_scalar(&c, 1).is_ok());
    assert!(matches!(torsion_scalar(&c, 5), Err(TorsionError::CharacterOutOfRange { .. })));
    assert_eq!(torsion_scalar(&c.shift(0).without_filtration(), 2).is_ok(), true);
}

#[test]
fn two_by_two_determinant() {
    // det [[1+t, 1], [t, 1]] = 1 over Z/3
    let g = z(3);
    let c = two_term(
        &g,
        &["a1", "a2"],
        &["b1", "b2"],
        &[("a1", "b1", "1 + t"), ("a1", "b2", "1"), ("a2", "b1", "t"), ("a2", "b2", "1")],
    );
    for j in 0..3 {
        // determinant up to the sign of the pivot permutation
        let expected = (zeta(3, j as i64) + 1.0) - zeta(3, j as i64);
        let tau = torsion_scalar(&c, j).unwrap();
        assert!((tau - expected).norm().min((tau + expected).norm()) < 1e-12);
    }
}

/// Regular representation determinant of `a` in Z[Z/n] by fraction-free
/// elimination.
fn circulant_det(coeffs: &[i64]) -> i128 {
    let n = coeffs.len();
    let mut m: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|k| coeffs[(k + n - i) % n] as i128).collect())
        .collect();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(r) = (k + 1..n).find(|&r| m[r][k] != 0) else {
                return 0;
            };
            m.swap(k, r);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

#[test]
fn cyclotomic_unit_is_nontrivial() {
    let g = z(5);
    assert_eq!(circulant_det(&[1, -1, 0, 0, -1]).abs(), 1);
    let c = two_term(&g, &["a"], &["b"], &[("a", "b", "1 - t - t^4")]);
    let Decision::NonTrivial { character, logabs } = is_trivial_torsion(&c).unwrap() else {
        panic!("expected a nontrivial verdict");
    };
    let direct = (1.0 - zeta(5, character as i64) - zeta(5, 4 * character as i64)).norm().ln();
    assert!((logabs - direct).abs() < 1e-9);
    assert!(logabs.abs() > 0.1);
    let recheck = torsion_scalar(&c, character).unwrap().norm().ln();
    assert!((recheck - logabs).abs() < 1e-12);
}

#[test]
fn cone_of_identity_decides_trivial_with_one_collapse() {
    let g = z(4);
    let r = free(&g, &["x"], 0);
    let cone = mapping_cone(&ChainMap::identity(&r)).unwrap();
    let Decision::Trivial { script } = is_trivial_torsion(&cone).unwrap() else {
        panic!("expected trivial");
    };
    assert_eq!(script.moves, vec![Move::collapse("c.x", "d.x")]);
    assert!(script.verify_trivial().unwrap());
}

#[test]
fn decide_rejects_non_acyclic() {
    let g = z(5);
    let c = two_term(&g, &["a"], &["b"], &[("a", "b", "t - 1")]);
    assert!(matches!(is_trivial_torsion(&c), Err(TorsionError::NotAcyclic { .. })));
}

#[test]
fn inverse_construction_is_trivial() {
    // A = [[1 + t - t^3, t], [?]] built as a product of elementary matrices
    let g = z(7);
    let a = p(&g, "1 + t^2");
    // E = [[1, a], [0, 1]], F = [[1, 0], [t, 1]]; A = E F, A^-1 = F^-1 E^-1
    let e = RingMatrix::from_entries(
        &g,
        vec!["r1".into(), "r2".into()],
        vec!["r1".into(), "r2".into()],
        [("r1", "r1", p(&g, "1")), ("r1", "r2", a.clone()), ("r2", "r2", p(&g, "1"))],
    )
    .unwrap();
    let f = RingMatrix::from_entries(
        &g,
        vec!["r1".into(), "r2".into()],
        vec!["r1".into(), "r2".into()],
        [("r1", "r1", p(&g, "1")), ("r2", "r1", p(&g, "t")), ("r2", "r2", p(&g, "1"))],
    )
    .unwrap();
    let prod = e.try_mul(&f).unwrap();
    let mut entries = Vec::new();
    for ((i, j), v) in prod.entries() {
        entries.push((format!("x{}", i + 1), format!("y{}", j + 1), v.to_string()));
    }
    // inverse: F^-1 E^-1 = [[1, 0], [-t, 1]] [[1, -a], [0, 1]]
    let inv = RingMatrix::from_entries(
        &g,
        vec!["r1".into(), "r2".into()],
        vec!["r1".into(), "r2".into()],
        [("r1", "r1", p(&g, "1")), ("r2", "r1", p(&g, "-t")), ("r2", "r2", p(&g, "1"))],
    )
    .unwrap()
    .try_mul(
        &RingMatrix::from_entries(
            &g,
            vec!["r1".into(), "r2".into()],
            vec!["r1".into(), "r2".into()],
            [("r1", "r1", p(&g, "1")), ("r1", "r2", -&a), ("r2", "r2", p(&g, "1"))],
        )
        .unwrap(),
    )
    .unwrap();
    assert!(prod.try_mul(&inv).unwrap().try_sub(&RingMatrix::identity(&g, vec!["r1".into(), "r2".into()]).unwrap()).unwrap().is_zero());
    for ((i, j), v) in inv.entries() {
        entries.push((format!("x{}", i + 3), format!("y{}", j + 3), v.to_string()));
    }
    let refs: Vec<(&str, &str, &str)> = entries.iter().map(|(a, b, v)| (a.as_str(), b.as_str(), v.as_str())).collect();
    let c = two_term(&g, &["x1", "x2", "x3", "x4"], &["y1", "y2", "y3", "y4"], &refs);
    let outcome = greedy_reduce(&c);
    assert!(outcome.is_emptied(), "{outcome:?}");
    assert!(outcome.script().verify_trivial().unwrap());
    assert!(matches!(is_trivial_torsion(&c).unwrap(), Decision::Trivial { .. }));
}

#[test]
fn greedy_on_empty_complex() {
    let c = BasedComplex::empty(&z(3));
    let ReductionOutcome::Emptied(s) = greedy_reduce(&c) else {
        panic!()
    };
    assert!(s.moves.is_empty());
}

#[test]
fn greedy_on_rank_three_identity_cone() {
    let g = z(3);
    let r = free(&g, &["x", "y", "z"], 0);
    let cone = mapping_cone(&ChainMap::identity(&r)).unwrap();
    let ReductionOutcome::Emptied(s) = greedy_reduce(&cone) else {
        panic!()
    };
    assert_eq!(s.moves.iter().filter(|m| matches!(m, Move::Collapse { .. })).count(), 3);
    assert!(s.verify_trivial().unwrap());
}

#[test]
fn greedy_on_upper_unitriangular() {
    let g = z(3);
    let c = two_term(&g, &["a1", "a2"], &["b1", "b2"], &[("a1", "b1", "1"), ("a1", "b2", "t"), ("a2", "b2", "1")]);
    let ReductionOutcome::Emptied(s) = greedy_reduce(&c) else {
        panic!()
    };
    assert!(s.verify_trivial().unwrap());
    // hand-written elimination: clear t by a column slide, then two collapses
    let hand = MoveScript::new(
        c.clone(),
        vec![Move::slide("b1", "b2", p(&g, "t")), Move::collapse("a1", "b1"), Move::collapse("a2", "b2")],
    );
    assert!(hand.verify_trivial().unwrap());
    assert_eq!(s.moves.iter().filter(|m| matches!(m, Move::Collapse { .. })).count(), 2);
}

#[test]
fn greedy_uses_euclid_over_integers() {
    // [[2, 3], [1, 2]] has determinant 1 over Z
    let g = GroupSpec::Trivial;
    let c = two_term(&g, &["a1", "a2"], &["b1", "b2"], &[("a1", "b1", "2"), ("a1", "b2", "3"), ("a2", "b1", "1"), ("a2", "b2", "2")]);
    assert!(greedy_reduce(&c).is_emptied());
    let c = two_term(&g, &["a1", "a2"], &["b1", "b2"], &[("a1", "b1", "5"), ("a1", "b2", "3"), ("a2", "b1", "3"), ("a2", "b2", "2")]);
    let Decision::Trivial { script } = is_trivial_torsion(&c).unwrap() else {
        panic!()
    };
    assert!(script.verify_trivial().unwrap());
}

#[test]
fn greedy_stops_two_term_on_nontrivial_unit() {
    let g = z(5);
    let c = two_term(&g, &["a"], &["b"], &[("a", "b", "1 - t - t^4")]);
    assert!(matches!(greedy_reduce(&c), ReductionOutcome::TwoTerm { .. }));
}

#[test]
fn greedy_script_replays_to_residual() {
    let g = z(5);
    let c = two_term(&g, &["a", "x"], &["b", "y"], &[("a", "b", "1 - t - t^4"), ("a", "y", "t"), ("x", "y", "-t^2")]);
    let ReductionOutcome::TwoTerm { matrix, script } = greedy_reduce(&c) else {
        panic!()
    };
    let end = script.run().unwrap();
    assert_eq!(end.len(), 2);
    assert_eq!(end.block(-1), matrix);
}

fn expansion_at(a: &str, b: &str, level: i64) -> Vec<Generator> {
    vec![Generator::filtered(a, -1, level), Generator::filtered(b, 0, level)]
}

#[test]
fn lift_single_level_keeps_moves() {
    let g = z(3);
    let c = BasedComplex::new(&g, expansion_at("a", "b", 0), [("a", "b", p(&g, "-t"))]).unwrap();
    let graded = associated_graded(&c, 0);
    let script = MoveScript::new(
        graded,
        vec![Move::base_change("a", crate::TrivialUnit::parse(&g, "-t^2").unwrap()), Move::collapse("a", "b")],
    );
    let lifted = lift_filtration_certificate(&c, &BTreeMap::from([(0, script.clone())])).unwrap();
    assert_eq!(lifted.moves, script.moves);
    assert!(lifted.verify_trivial().unwrap());
}

#[test]
fn lift_direct_sum_concatenates() {
    let g = z(3);
    let mut gens = expansion_at("a1", "b1", 1);
    gens.extend(expansion_at("a0", "b0", 0));
    let c = BasedComplex::new(&g, gens, [("a1", "b1", p(&g, "1")), ("a0", "b0", p(&g, "1"))]).unwrap();
    let s1 = MoveScript::new(associated_graded(&c, 1), vec![Move::collapse("a1", "b1")]);
    let s0 = MoveScript::new(associated_graded(&c, 0), vec![Move::collapse("a0", "b0")]);
    let lifted = lift_filtration_certificate(&c, &BTreeMap::from([(0, s0.clone()), (1, s1.clone())])).unwrap();
    let mut expected = s1.moves.clone();
    expected.extend(s0.moves);
    assert_eq!(lifted.moves, expected);
}

#[test]
fn lift_inserts_one_slide_for_a_cross_term() {
    let g = z(5);
    let mut gens = expansion_at("a1", "b1", 1);
    gens.extend(expansion_at("a0", "b0", 0));
    let c = BasedComplex::new(
        &g,
        gens,
        [("a1", "b1", p(&g, "1")), ("a1", "b0", p(&g, "2 + t")), ("a0", "b0", p(&g, "1"))],
    )
    .unwrap();
    let s1 = MoveScript::new(associated_graded(&c, 1), vec![Move::collapse("a1", "b1")]);
    let s0 = MoveScript::new(associated_graded(&c, 0), vec![Move::collapse("a0", "b0")]);
    let lifted = lift_filtration_certificate(&c, &BTreeMap::from([(0, s0), (1, s1)])).unwrap();
    assert_eq!(
        lifted.moves,
        vec![
            Move::slide("b1", "b0", p(&g, "2 + t")),
            Move::collapse("a1", "b1"),
            Move::collapse("a0", "b0"),
        ]
    );
    assert!(lifted.verify_trivial().unwrap());
}

#[test]
fn lift_reports_failing_level_and_move() {
    let g = z(3);
    let mut gens = expansion_at("a1", "b1", 1);
    gens.extend(expansion_at("a0", "b0", 0));
    let c = BasedComplex::new(&g, gens, [("a1", "b1", p(&g, "1")), ("a0", "b0", p(&g, "t"))]).unwrap();
    let s1 = MoveScript::new(associated_graded(&c, 1), vec![Move::collapse("a1", "b1")]);
    let s0 = MoveScript::new(associated_graded(&c, 0), vec![Move::collapse("a0", "b0")]);
    let err = lift_filtration_certificate(&c, &BTreeMap::from([(0, s0), (1, s1.clone())])).unwrap_err();
    assert!(matches!(err, TorsionError::LevelScript { level: 0, index: 0, .. }));
    let err = lift_filtration_certificate(&c, &BTreeMap::from([(1, s1)])).unwrap_err();
    assert_eq!(err, TorsionError::MissingLevel(0));
}

#[test]
fn lift_expansions_get_the_current_level() {
    let g = z(2);
    let c = BasedComplex::new(&g, expansion_at("a", "b", 4), [("a", "b", p(&g, "1"))]).unwrap();
    let script = MoveScript::new(
        associated_graded(&c, 4),
        vec![Move::expand("u", "v", 3), Move::collapse("u", "v"), Move::collapse("a", "b")],
    );
    let lifted = lift_filtration_certificate(&c, &BTreeMap::from([(4, script)])).unwrap();
    assert!(matches!(lifted.moves[0], Move::Expand { levels: Some((4, 4)), .. }));
    assert!(lifted.verify_trivial().unwrap());
}

fn filtered_free(g: &GroupSpec, labels: &[&str]) -> BasedComplex {
    let n = labels.len() as i64;
    BasedComplex::new(
        g,
        labels.iter().enumerate().map(|(i, l)| Generator::filtered(*l, 0, n - 1 - i as i64)).collect(),
        [],
    )
    .unwrap()
}

#[test]
fn unit_triangular_identity() {
    let g = z(3);
    let c = filtered_free(&g, &["x", "y", "z"]);
    let s = unit_triangular_certificate(&ChainMap::identity(&c)).unwrap();
    assert_eq!(s.moves.len(), 6);
    assert!(s.verify_trivial().unwrap());
}

#[test]
fn unit_triangular_with_off_diagonal_term() {
    let g = z(4);
    let c = filtered_free(&g, &["x", "y"]);
    let f = ChainMap::from_entries(
        c.clone(),
        c,
        [("x", "x", p(&g, "1")), ("x", "y", p(&g, "3 - t^3")), ("y", "y", p(&g, "1"))],
    )
    .unwrap();
    let s = unit_triangular_certificate(&f).unwrap();
    assert_eq!(s.moves.iter().filter(|m| matches!(m, Move::Slide { .. })).count(), 1);
    assert!(s.verify_trivial().unwrap());
}

#[test]
fn unit_triangular_over_z7() {
    let g = z(7);
    let c = filtered_free(&g, &["x", "y", "w"]);
    let f = ChainMap::from_entries(
        c.clone(),
        c,
        [
            ("x", "x", p(&g, "t")),
            ("y", "y", p(&g, "-t^2")),
            ("w", "w", p(&g, "1")),
            ("x", "y", p(&g, "2 - t^5")),
            ("x", "w", p(&g, "t^3 + 4*t^6")),
            ("y", "w", p(&g, "-3")),
        ],
    )
    .unwrap();
    let s = unit_triangular_certificate(&f).unwrap();
    assert!(s.verify_trivial().unwrap());
}

#[test]
fn unit_triangular_rejects_non_unit_diagonal() {
    let g = z(5);
    let c = filtered_free(&g, &["x"]);
    let f = ChainMap::from_entries(c.clone(), c, [("x", "x", p(&g, "1 - t - t^4"))]).unwrap();
    assert!(matches!(unit_triangular_certificate(&f), Err(TorsionError::NonUnitDiagonal { .. })));
}

/// `a -> b` in degrees -1, 0 with coefficient `1 + t`, plus a free `c` in degree 0.
fn small_complex(g: &GroupSpec) -> BasedComplex {
    BasedComplex::new(
        g,
        vec![Generator::new("a", -1), Generator::new("b", 0), Generator::new("c", 0)],
        [("a", "b", p(g, "1 + t")), ("a", "c", p(g, "t^2"))],
    )
    .unwrap()
}

#[test]
fn homotopy_with_zero_phi() {
    let g = z(5);
    let c = small_complex(&g);
    let f = ChainMap::identity(&c);
    let phi = RingMatrix::zeros(&g, c.labels(), c.labels()).unwrap();
    let h = ChainHomotopy::new(f.clone(), f, phi).unwrap();
    let ev = homotopy_equal_torsion(&h).unwrap();
    ev.check(&h).unwrap();
    assert_eq!(ev.torsions_agree(1e-9), Some(true));
}

#[test]
fn homotopy_with_nonzero_phi() {
    let g = z(5);
    let c = small_complex(&g);
    let f = ChainMap::identity(&c);
    let phi = RingMatrix::from_entries(&g, c.labels(), c.labels(), [("b", "a", p(&g, "2 - t^3")), ("c", "a", p(&g, "t"))]).unwrap();
    let dphi = ChainHomotopy::boundary(&c, &c, &phi).unwrap();
    let gmap = f.try_sub_matrix(&dphi).unwrap();
    let h = ChainHomotopy::new(f, gmap, phi).unwrap();
    let ev = homotopy_equal_torsion(&h).unwrap();
    ev.check(&h).unwrap();
    assert!(ev.max_logabs_diff().unwrap() < 1e-9);
    assert_eq!(ev.torsions_agree(1e-9), Some(true));
    assert!(ev.to_cone_g.moves.iter().any(|m| matches!(m, Move::BaseChange { .. })));
}

#[test]
fn sign_flip_of_cone() {
    let g = z(7);
    let c = small_complex(&g);
    let f = ChainMap::identity(&c);
    let plus = TorsionVector::of(&mapping_cone(&f).unwrap()).unwrap();
    let minus = TorsionVector::of(&mapping_cone(&f.neg()).unwrap()).unwrap();
    assert!(plus.equal_up_to_trivial_units(&minus, 1e-9));
}

#[test]
fn homotopy_rejects_wrong_phi() {
    let g = z(3);
    let c = small_complex(&g);
    let f = ChainMap::identity(&c);
    let phi = RingMatrix::from_entries(&g, c.labels(), c.labels(), [("b", "a", p(&g, "1"))]).unwrap();
    assert!(ChainHomotopy::new(f.clone(), f, phi).is_err());
}

#[test]
fn composition_with_identity() {
    let g = z(5);
    let r = free(&g, &["x"], 0);
    let f = ChainMap::from_entries(r.clone(), r.clone(), [("x", "x", p(&g, "1 - t - t^4"))]).unwrap();
    let report = torsion_of_composition(&f, &ChainMap::identity(&r)).unwrap();
    assert_eq!(report.tau_composite, report.tau_f);
    assert!(report.additive(1e-9));
}

#[test]
fn composition_of_unit_triangular_maps() {
    let g = z(5);
    let c = filtered_free(&g, &["x", "y"]);
    let f = ChainMap::from_entries(c.clone(), c.clone(), [("x", "x", p(&g, "-t")), ("x", "y", p(&g, "1 + t")), ("y", "y", p(&g, "1"))]).unwrap();
    let h = ChainMap::from_entries(c.clone(), c, [("x", "x", p(&g, "1")), ("x", "y", p(&g, "2")), ("y", "y", p(&g, "t^3"))]).unwrap();
    let report = torsion_of_composition(&f, &h).unwrap();
    for v in [&report.tau_f, &report.tau_g, &report.tau_composite] {
        assert!(v.max_abs_logabs() < 1e-12);
    }
}

#[test]
fn composition_of_nontrivial_units_adds() {
    let g = z(5);
    let r = free(&g, &["x"], 0);
    let f = ChainMap::from_entries(r.clone(), r.clone(), [("x", "x", p(&g, "1 - t - t^4"))]).unwrap();
    let h = ChainMap::from_entries(r.clone(), r, [("x", "x", p(&g, "1 - t - t^4"))]).unwrap();
    let report = torsion_of_composition(&f, &h).unwrap();
    assert!(report.additive(1e-9));
    assert!((report.tau_composite.logabs_at(1) - 2.0 * report.tau_f.logabs_at(1)).abs() < 1e-9);
}

#[test]
fn equality_up_to_trivial_units() {
    let a = TorsionVector::from_entries(5, (1..5).map(|j| zeta(5, 2 * j)).collect());
    let b = TorsionVector::from_entries(5, vec![Complex64::new(-1.0, 0.0); 4]);
    assert!(a.equal_up_to_trivial_units(&b, 1e-9));
    let c = TorsionVector::from_entries(5, (1..5).map(|j| zeta(10, j) * zeta(20, 1)).collect());
    assert!(!a.equal_up_to_trivial_units(&c, 1e-9));
}
