use std::sync::Arc;

use cilab_core::flat_model::model;
use cilab_core::form_decomposition::standard_bases;
use cilab_core::gauge_fields::{random_sd_curvature, GValuedForm};
use cilab_core::lie_algebra::{make_abelian, make_so, make_su, random_element, LieAlgebraSpec, LieElement};
use cilab_core::report::Verdict;
use cilab_core::sampling::shard_rng;
use cilab_core::weitzenbock::*;
use cilab_core::C64;

fn so3() -> Arc<LieAlgebraSpec> {
    Arc::new(make_so(3).unwrap())
}

fn su2() -> Arc<LieAlgebraSpec> {
    Arc::new(make_su(2).unwrap())
}

fn close(a: &TwoZeroSection, b: &TwoZeroSection, tol: f64) -> bool {
    (a.to_vec() - b.to_vec()).norm() <= tol
}

#[test]
fn general_and_expanded_f_agree_on_sd_data() {
    for g in [su2(), so3()] {
        let mut rng = shard_rng(11, 0);
        for _ in 0..200 {
            let f = random_sd_curvature(&g, &mut rng);
            let fc = curvature_components(&f).unwrap();
            let phi = TwoZeroSection::random(&g, &mut rng);
            let a = f_action_general(&fc, &phi, &g);
            let b = f_action_expanded(&fc, &phi, &g);
            assert!(close(&a, &b, 1e-12), "{:?} vs {:?}", a, b);
        }
    }
}

#[test]
fn curvature_components_match_w_table() {
    let g = so3();
    let (w, _) = standard_bases();
    let a: Vec<LieElement> = (0..3).map(|i| LieElement::basis(3, i)).collect();
    // F = w1⊗a1 + w2⊗a2 + w7⊗a3 gives F12̄ = a1/2 + i a2/2, F11̄ = (i/2) a3.
    let f = GValuedForm::sum_of(
        g.clone(),
        &[(w[0].clone(), a[0].clone()), (w[1].clone(), a[1].clone()), (w[6].clone(), a[2].clone())],
    )
    .unwrap();
    let fc = curvature_components(&f).unwrap();
    let expect12 = &a[0].scale(C64::new(0.5, 0.0)) + &a[1].scale(C64::new(0.0, 0.5));
    assert!((&fc[0][1] - &expect12).max_abs() < 1e-14);
    let expect11 = a[2].scale(C64::new(0.0, 0.5));
    assert!((&fc[0][0] - &expect11).max_abs() < 1e-14);
    let expect33 = a[2].scale(C64::new(0.0, -0.5));
    assert!((&fc[2][2] - &expect33).max_abs() < 1e-14);
}

#[test]
fn quad_form_matches_operator_and_coefficient_form() {
    for g in [su2(), so3()] {
        let mut rng = shard_rng(12, 0);
        for _ in 0..200 {
            let f = random_sd_curvature(&g, &mut rng);
            let fop = build_f_operator(&f, &model(), SD_TOL).unwrap();
            let (phi, b) = TwoZeroSection::random_from_v(&g, &mut rng);
            let q = quad_form_f(&phi, &f, SD_TOL).unwrap();
            let qm = bilinear_quad(&fop, &phi);
            assert!((q - qm).abs() < 1e-12 * (1.0 + q.abs()), "{q} vs {qm}");
            let (a, res) = w_coefficients(&f).unwrap();
            assert!(res < 1e-12);
            let a: Vec<LieElement> = a.iter().map(LieElement::re).collect();
            let e = coefficient_form(&b, &a, &g).unwrap();
            assert!((COEFFICIENT_FORM_FACTOR * q - e).abs() < 1e-12 * (1.0 + e.abs()), "{q} vs {e}");
            // Real (𝔤-valued) sections: Hermitian pairing equals the bilinear one.
            let real = TwoZeroSection::new(phi.phi[0].re(), phi.phi[1].re(), phi.phi[2].re());
            let h = fop.pairing(&real, &real);
            assert!((h.re - bilinear_quad(&fop, &real)).abs() < 1e-12 * (1.0 + h.re.abs()));
        }
    }
}

#[test]
fn f_and_r_are_self_adjoint() {
    let g = su2();
    let mut rng = shard_rng(13, 0);
    for _ in 0..100 {
        let f = random_sd_curvature(&g, &mut rng);
        let fop = build_f_operator(&f, &model(), SD_TOL).unwrap();
        let r: [[C64; 3]; 3] = {
            let m: Vec<C64> = cilab_core::sampling::normal_c_vec(&mut rng, 9);
            let raw = |i: usize, j: usize| m[3 * i + j];
            std::array::from_fn(|i| std::array::from_fn(|j| (raw(i, j) + raw(j, i).conj()) * 0.5))
        };
        let ric = TransverseRicci::with_identity_metric(r).unwrap();
        let rop = build_r_operator(&ric, &g);
        let phi = TwoZeroSection::random(&g, &mut rng);
        let psi = TwoZeroSection::random(&g, &mut rng);
        for op in [&fop, &rop] {
            let lhs = op.pairing(&phi, &psi);
            let rhs = psi.inner(&op.apply(&phi), &g).conj();
            let rhs2 = phi.inner(&op.apply(&psi), &g);
            assert!((lhs - rhs2).norm() < 1e-10 * (1.0 + lhs.norm()), "{lhs} vs {rhs2} ({rhs})");
        }
    }
}

#[test]
fn einstein_ricci_gives_sixteen() {
    let g = so3();
    let rop = build_r_operator(&TransverseRicci::einstein(8.0), &g);
    let n = rop.matrix.nrows();
    let diff = &rop.matrix - nalgebra::DMatrix::<C64>::identity(n, n) * C64::new(16.0, 0.0);
    assert_eq!(diff.norm(), 0.0);
    let s = operator_spectrum(&rop);
    assert!(s.eigenvalues.iter().all(|&x| (x - 16.0).abs() < 1e-12));
}

#[test]
fn diagonal_ricci_blocks() {
    let g = su2();
    let rop = build_r_operator(&TransverseRicci::diagonal([1.0, 2.0, 3.0]), &g);
    let mut rng = shard_rng(14, 0);
    let phi = TwoZeroSection::random(&g, &mut rng);
    let img = rop.apply(&phi);
    for (k, factor) in [3.0, 4.0, 5.0].iter().enumerate() {
        assert!((&img.phi[k] - &phi.phi[k].scale_re(*factor)).max_abs() < 1e-14);
    }
    let q = rop.pairing(&phi, &phi).re;
    let expect: f64 = (0..3).map(|k| [3.0, 4.0, 5.0][k] * g.norm_sqr(&phi.phi[k])).sum();
    assert!((q - expect).abs() < 1e-12 * expect);
}

#[test]
fn abelian_f_vanishes_and_vanishing_verdict() {
    let g = Arc::new(make_abelian(2).unwrap());
    let mut rng = shard_rng(15, 0);
    let f = random_sd_curvature(&g, &mut rng);
    let fop = build_f_operator(&f, &model(), SD_TOL).unwrap();
    assert_eq!(fop.matrix.norm(), 0.0);
    let rep = vanishing_report(&f, &TransverseRicci::einstein(8.0), &model(), SD_TOL).unwrap();
    assert_eq!(rep.verdict, Verdict::Vanishes);
}

#[test]
fn non_sd_curvature_is_rejected() {
    let g = so3();
    let (_, v) = standard_bases();
    let f = GValuedForm::decomposable(g.clone(), &v[0], &LieElement::basis(3, 0));
    assert!(build_f_operator(&f, &model(), SD_TOL).is_err());
}

#[test]
fn estimate_suite_passes_on_random_sd() {
    let g = Arc::new(make_so(5).unwrap());
    let mut rng = shard_rng(16, 0);
    let f = random_sd_curvature(&g, &mut rng);
    let rep = estimate_bound_check(&f, 500, 3).unwrap();
    assert!(rep.all_checks_pass(), "{}", rep.to_json());
}

#[test]
fn scaling_covariance() {
    let g = su2();
    let mut rng = shard_rng(17, 0);
    let f = random_sd_curvature(&g, &mut rng);
    let a = build_f_operator_unchecked(&f).matrix * C64::new(2.5, 0.0);
    let b = build_f_operator_unchecked(&f.scale_re(2.5)).matrix;
    assert!((a - b).norm() < 1e-12);
    let r1 = build_r_operator(&TransverseRicci::diagonal([1.0, 2.0, 0.5]).scale(3.0), &g).matrix;
    let r2 = build_r_operator(&TransverseRicci::diagonal([1.0, 2.0, 0.5]), &g).matrix * C64::new(3.0, 0.0);
    assert!((r1 - r2).norm() < 1e-12);
    let _ = random_element(&g, &mut rng);
}

#[test]
fn r_spectrum_respects_transverse_metric() {
    let g = su2();
    // g^T = diag(2,1,1), Ric^T = 2·g^T: 𝓡 acts as 4·Id.
    let two = C64::new(2.0, 0.0);
    let one = C64::new(1.0, 0.0);
    let z = C64::default();
    let metric = [[two, z, z], [z, one, z], [z, z, one]];
    let r = [[C64::new(4.0, 0.0), z, z], [z, two, z], [z, z, two]];
    let ric = TransverseRicci::new(r, metric).unwrap();
    let s = r_operator_spectrum(&ric, &g).unwrap();
    assert!(s.self_adjoint_residual < 1e-12);
    assert!(s.eigenvalues.iter().all(|&x| (x - 4.0).abs() < 1e-12), "{:?}", s.eigenvalues);
    assert!(!ric.has_identity_metric());
    let f = GValuedForm::zero(g.clone(), 2);
    assert!(vanishing_report(&f, &ric, &model(), SD_TOL).is_err());

    let e = TransverseRicci::einstein(8.0);
    let a = r_operator_spectrum(&e, &g).unwrap();
    let b = operator_spectrum(&build_r_operator(&e, &g));
    assert_eq!(a.eigenvalues.len(), b.eigenvalues.len());
    for (x, y) in a.eigenvalues.iter().zip(&b.eigenvalues) {
        assert!((x - y).abs() < 1e-12);
    }
}
