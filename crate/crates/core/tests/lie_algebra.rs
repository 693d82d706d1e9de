use cilab_core::lie_algebra::*;
use cilab_core::sampling::Exec;
use proptest::prelude::*;

fn elem(d: usize) -> impl Strategy<Value = LieElement> {
    prop::collection::vec(-3.0f64..3.0, d).prop_map(|v| LieElement::real(&v))
}

#[test]
fn built_in_algebras_are_valid() {
    for g in [make_su(2), make_so(3), make_so(5), make_su(3), make_so(4)] {
        let g = g.unwrap();
        assert!(g.residuals().ok(1e-12), "{}: {:?}", g.name, g.residuals());
    }
    assert_eq!(make_so(5).unwrap().dim, 10);
    assert_eq!(make_su(3).unwrap().dim, 8);
    assert!(make_so(1).is_err());
    assert!(make_su(1).is_err());
}

#[test]
fn so3_brackets_follow_levi_civita() {
    let g = make_so(3).unwrap();
    let e = |i| LieElement::basis(3, i);
    assert_eq!(g.br(&e(0), &e(1)), e(2));
    assert_eq!(g.br(&e(1), &e(2)), e(0));
    assert_eq!(g.br(&e(2), &e(0)), e(1));
    assert!((g.norm_sqr(&e(0)) - 2.0).abs() < 1e-14);
}

#[test]
fn so5_fiber_bracket_is_exact() {
    let g = make_so(5).unwrap();
    let e = |i| LieElement::basis(10, i);
    assert_eq!(g.br(&e(8), &e(9)), e(7));
    let sub = g.subalgebra("fiber", &[7, 8, 9]).unwrap();
    let so3 = make_so(3).unwrap();
    assert_eq!(sub.structure_constants, so3.structure_constants);
    assert!((sub.norm_sqr(&LieElement::basis(3, 0)) - 2.0).abs() < 1e-14);
}

#[test]
fn su2_structure() {
    let g = make_su(2).unwrap();
    let e = |i| LieElement::basis(3, i);
    // −iσ/2 basis: [e₁,e₂] = e₃.
    assert!((&g.br(&e(0), &e(1)) - &e(2)).max_abs() < 1e-14);
}

#[test]
fn structure_constant_input_is_validated() {
    let so3 = make_so(3).unwrap();
    let g = LieAlgebraSpec::from_structure_constants("custom", 3, so3.structure_constants.clone(), None).unwrap();
    assert_eq!(g, so3);
    let mut bad = so3.structure_constants.clone();
    bad[3 + 2] = 5.0; // c_{0,1,2} no longer antisymmetric
    assert!(LieAlgebraSpec::from_structure_constants("bad", 3, bad, None).is_err());
    assert!(LieAlgebraSpec::from_structure_constants("short", 3, vec![0.0; 5], None).is_err());
}

#[test]
fn abelian_has_zero_brackets() {
    let g = make_abelian(3).unwrap();
    assert!(g.is_abelian());
    let rep = bracket_norm_check_with(&g, 100, 1, Exec::Sequential);
    assert_eq!(
        rep.values.iter().find(|e| e.label == "max_ratio").map(|e| e.value.clone()),
        Some(cilab_core::report::Value::Num(0.0))
    );
}

#[test]
fn bracket_bound_holds() {
    for g in [make_su(2), make_so(3), make_so(5)] {
        let g = g.unwrap();
        let rep = bracket_norm_check_with(&g, 2000, 7, Exec::Parallel);
        assert!(rep.all_checks_pass(), "{}", g.name);
        assert_eq!(rep, bracket_norm_check_with(&g, 2000, 7, Exec::Sequential));
    }
}

proptest! {
    #[test]
    fn matrix_and_structure_brackets_agree(a in elem(10), b in elem(10)) {
        let g = make_so(5).unwrap();
        let d = &g.br(&a, &b) - &g.matrix_bracket(&a, &b).unwrap();
        prop_assert!(d.max_abs() < 1e-12);
    }

    #[test]
    fn killing_is_trace_form(a in elem(8), b in elem(8)) {
        let g = make_su(3).unwrap();
        let tr = (g.matrix_of(&a).unwrap() * g.matrix_of(&b).unwrap()).trace();
        // −K(a,b) = −2n Tr(ab) on su(n)
        prop_assert!((g.killing_inner(&a, &b) + tr * 6.0).norm() < 1e-10);
    }

    #[test]
    fn inner_product_is_ad_invariant(a in elem(3), b in elem(3), c in elem(3)) {
        let g = make_su(2).unwrap();
        let lhs = g.bilinear(&g.br(&a, &b), &c);
        let rhs = g.bilinear(&a, &g.br(&b, &c));
        prop_assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn jacobi(a in elem(10), b in elem(10), c in elem(10)) {
        let g = make_so(5).unwrap();
        let j = &(&g.br(&a, &g.br(&b, &c)) + &g.br(&b, &g.br(&c, &a))) + &g.br(&c, &g.br(&a, &b));
        prop_assert!(j.max_abs() < 1e-10);
    }
}
