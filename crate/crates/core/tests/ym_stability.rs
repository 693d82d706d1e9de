use std::f64::consts::SQRT_2;
use std::sync::Arc;

use cilab_core::flat_model::{model, KForm};
use cilab_core::gauge_fields::{random_real_two_form, random_sd_curvature, GValuedForm};
use cilab_core::lie_algebra::{make_abelian, make_so, make_su, LieElement};
use cilab_core::report::Verdict;
use cilab_core::sampling::shard_rng;
use cilab_core::ym_stability::*;

#[test]
fn zero_curvature_spectrum_is_ricci() {
    let g = Arc::new(make_su(2).unwrap());
    let f = GValuedForm::zero(g.clone(), 2);
    let sv = algebraic_second_variation(&f, &RicciTensor7::scalar(6.0)).unwrap();
    assert!(sv.spectrum.eigenvalues.iter().all(|&x| (x - 6.0).abs() < 1e-12));
    let ab = Arc::new(make_abelian(2).unwrap());
    let mut rng = shard_rng(1, 0);
    let f = random_real_two_form(&ab, &mut rng);
    let diag = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0];
    let sv = algebraic_second_variation(&f, &RicciTensor7::diagonal(diag)).unwrap();
    let mut expect: Vec<f64> = diag.iter().flat_map(|&x| [x, x]).collect();
    expect.sort_by(f64::total_cmp);
    for (a, b) in sv.spectrum.eigenvalues.iter().zip(&expect) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn decomposable_action_matches_double_sum() {
    // F = e¹²⊗a, B = e¹⊗b: (𝓡B)₂ = [F₁₂, B₁] = [a,b], (𝓡B)₁ = [F₂₁, B₂] = 0.
    let g = Arc::new(make_so(3).unwrap());
    let a = LieElement::basis(3, 0);
    let b = LieElement::basis(3, 1);
    let f = GValuedForm::decomposable(g.clone(), &KForm::basis(&[1, 2]), &a);
    let mut comps = vec![LieElement::zero(3); 7];
    comps[0] = b.clone();
    let bsec = OneFormSection::new(comps).unwrap();
    let out = apply_curvature_action(&f, &bsec);
    assert!((&out.components[1] - &g.br(&a, &b)).max_abs() < 1e-15);
    assert!(out.components[0].is_zero());
    let m = curvature_action_oneforms(&f).unwrap();
    let v = &m * bsec.to_vec();
    assert!((v - out.to_vec()).norm() < 1e-15);
}

#[test]
fn trace_rewrite_and_bound() {
    for g in [Arc::new(make_su(2).unwrap()), Arc::new(make_so(5).unwrap())] {
        let mut rng = shard_rng(2, 0);
        let mut worst = 0.0f64;
        for _ in 0..300 {
            let f = random_real_two_form(&g, &mut rng);
            let b = OneFormSection::random(&g, &mut rng);
            let direct = apply_curvature_action(&f, &b).inner(&b, &g);
            let rewrite = curvature_pairing_trace(&f, &b);
            assert!((direct - rewrite).norm() < 1e-12 * (1.0 + direct.norm()));
            worst = worst.max(direct.re.abs() / (f.norm() * b.norm_sqr(&g)));
        }
        assert!(worst <= SQRT_2, "{worst}");
    }
}

#[test]
fn stability_bound_trials() {
    let g = Arc::new(make_so(3).unwrap());
    let c = 6.0;
    let mut rng = shard_rng(3, 0);
    for _ in 0..50 {
        let f = random_curvature_with_norm(&g, 0.99 * c / (2.0 * SQRT_2), &mut rng);
        let sv = algebraic_second_variation(&f, &RicciTensor7::scalar(c)).unwrap();
        assert!(sv.spectrum.min > 0.0);
        assert!(sv.spectrum.min >= c - 2.0 * SQRT_2 * f.norm() - 1e-12);
        assert!(sv.spectrum.self_adjoint_residual < 1e-10);
    }
}

#[test]
fn stability_report_verdicts() {
    let g = Arc::new(make_so(3).unwrap());
    let m = model();
    let f0 = GValuedForm::zero(g.clone(), 2);
    let rep = stability_report(&f0, &RicciTensor7::scalar(6.0), &m, 1e-9).unwrap();
    assert_eq!(rep.verdict, Verdict::StableSufficient);
    let mut rng = shard_rng(4, 0);
    let f = random_curvature_with_norm(&g, 6.0, &mut rng);
    let rep = stability_report(&f, &RicciTensor7::scalar(6.0), &m, 1e-9).unwrap();
    assert_eq!(rep.verdict, Verdict::Inconclusive);
    let rep = stability_report(&f0, &RicciTensor7::scalar(-1.0), &m, 1e-9).unwrap();
    assert_eq!(rep.verdict, Verdict::Inconclusive);
}

#[test]
fn sd_curvature_has_no_torsion() {
    let g = Arc::new(make_su(2).unwrap());
    let m = model();
    let mut rng = shard_rng(5, 0);
    for _ in 0..50 {
        let f = random_sd_curvature(&g, &mut rng);
        assert!(torsion_residual(&f, &m).unwrap() < 1e-12 * f.norm());
    }
}
