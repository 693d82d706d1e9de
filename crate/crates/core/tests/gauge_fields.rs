use std::sync::Arc;

use cilab_core::flat_model::{model, KForm};
use cilab_core::form_decomposition::standard_bases;
use cilab_core::gauge_fields::*;
use cilab_core::lie_algebra::{make_so, make_su, LieElement};
use cilab_core::sampling::shard_rng;
use cilab_core::C64;
use proptest::prelude::*;

#[test]
fn classification_examples() {
    let m = model();
    let g = Arc::new(make_so(3).unwrap());
    let (w, v) = standard_bases();
    let a = LieElement::real(&[1.0, 0.5, -2.0]);
    let class = |f: &KForm| instanton_classify(&GValuedForm::decomposable(g.clone(), f, &a), &m, 1e-9).unwrap().class;
    for wi in &w {
        assert_eq!(class(wi), InstantonClass::Sd);
    }
    for vi in &v {
        assert_eq!(class(vi), InstantonClass::Asd);
    }
    assert_eq!(class(&m.omega), InstantonClass::LambdaMinus2);
    assert_eq!(class(&KForm::basis(&[1, 7])), InstantonClass::None);
    // complex multiple of an SD form fails reality
    let f = GValuedForm::decomposable(g.clone(), &w[0].scale(C64::new(0.0, 1.0)), &a);
    let d = instanton_classify(&f, &m, 1e-9).unwrap();
    assert_eq!(d.class, InstantonClass::None);
    assert!(d.eigen_path_sd);
}

#[test]
fn sd_diagnostics_agree() {
    let m = model();
    let g = Arc::new(make_su(2).unwrap());
    let mut rng = shard_rng(11, 0);
    for _ in 0..50 {
        let f = random_sd_curvature(&g, &mut rng);
        let d = instanton_classify(&f, &m, 1e-9).unwrap();
        assert_eq!(d.class, InstantonClass::Sd);
        assert!(d.eigen_path_sd && d.criteria_path_sd);
        assert!(d.eigen_residual_sd < 1e-12 * d.norm);
    }
}

#[test]
fn wedge_bracket_example() {
    let g = Arc::new(make_so(3).unwrap());
    let e = |i| LieElement::basis(3, i);
    let a = GValuedForm::decomposable(g.clone(), &KForm::e(1), &e(0));
    let b = GValuedForm::decomposable(g.clone(), &KForm::e(2), &e(1));
    let c = g_wedge_bracket(&a, &b).unwrap();
    let want = GValuedForm::decomposable(g.clone(), &KForm::basis(&[1, 2]), &e(2));
    assert!((&c - &want).norm() < 1e-15);
    let other = Arc::new(make_so(5).unwrap());
    let x = GValuedForm::zero(other, 1);
    assert!(g_wedge_bracket(&a, &x).is_err());
}

#[test]
fn split_inner_weight() {
    let m = model();
    assert!((omega_weight(&m) - 1.5).abs() < 1e-15);
}

#[test]
fn index_components_apply_signs() {
    let g = Arc::new(make_so(3).unwrap());
    let a = LieElement::basis(3, 0);
    let f = GValuedForm::from_index_components(g.clone(), 2, &[(vec![2, 1], a.clone())]).unwrap();
    let want = GValuedForm::decomposable(g.clone(), &KForm::basis(&[1, 2]), &a.scale_re(-1.0));
    assert!((&f - &want).norm() < 1e-15);
    assert!(GValuedForm::from_index_components(g, 2, &[(vec![1], a)]).is_err());
}

fn seed() -> impl Strategy<Value = u64> {
    any::<u64>()
}

proptest! {
    #[test]
    fn wedge_bracket_paths_agree(s in seed()) {
        let g = Arc::new(make_so(3).unwrap());
        let mut rng = shard_rng(s, 0);
        let a = random_real_two_form(&g, &mut rng);
        let b = random_sd_curvature(&g, &mut rng);
        let x = g_wedge_bracket(&a, &b).unwrap();
        let y = g_wedge_bracket_matrix(&a, &b).unwrap();
        prop_assert!((&x - &y).norm() < 1e-10 * (1.0 + a.norm() * b.norm()));
        // even degrees: [a∧b] = −[b∧a]
        let z = g_wedge_bracket(&b, &a).unwrap();
        prop_assert!((&x + &z).norm() < 1e-10 * (1.0 + a.norm() * b.norm()));
    }

    #[test]
    fn inner_is_hermitian(s in seed()) {
        let g = Arc::new(make_su(2).unwrap());
        let mut rng = shard_rng(s, 1);
        let a = random_real_two_form(&g, &mut rng).scale(C64::new(0.3, 1.1));
        let b = random_real_two_form(&g, &mut rng);
        let ab = g_inner(&a, &b).unwrap();
        let ba = g_inner(&b, &a).unwrap();
        prop_assert!((ab - ba.conj()).norm() < 1e-10 * (1.0 + ab.norm()));
        prop_assert!((g_inner(&a, &a).unwrap().re - a.norm_sqr()).abs() < 1e-10 * (1.0 + a.norm_sqr()));
    }

    #[test]
    fn sd_is_closed_under_real_combinations(s in seed(), t in -3.0f64..3.0) {
        let m = model();
        let g = Arc::new(make_so(3).unwrap());
        let mut rng = shard_rng(s, 2);
        let a = random_sd_curvature(&g, &mut rng);
        let b = random_sd_curvature(&g, &mut rng);
        let c = &a + &b.scale_re(t);
        prop_assert_eq!(instanton_classify(&c, &m, 1e-9).unwrap().class, InstantonClass::Sd);
    }
}
