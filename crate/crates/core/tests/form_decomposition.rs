use cilab_core::flat_model::*;
use cilab_core::form_decomposition::*;
use cilab_core::C64;
use proptest::prelude::*;

fn two_form() -> impl Strategy<Value = KForm> {
    prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 21)
        .prop_map(|v| KForm::from_coords(2, &v.into_iter().map(|(a, b)| C64::new(a, b)).collect::<Vec<_>>()))
}

#[test]
fn spectrum_and_ranks() {
    let d = Decomposer::new(&model()).unwrap();
    let mut expected = Vec::new();
    for &(l, k) in &T_ETA_SPECTRUM {
        expected.extend(std::iter::repeat_n(l, k));
    }
    for (a, b) in d.eigenvalues.iter().zip(&expected) {
        assert!((a - b).abs() < 1e-10);
    }
    let ranks: Vec<usize> = d.bases.iter().map(|b| b.ncols()).collect();
    assert_eq!(ranks, vec![1, 6, 8, 6]);
}

#[test]
fn lagrange_matches_eigen_projectors() {
    let d = Decomposer::new(&model()).unwrap();
    for (i, &l) in EIGEN_TARGETS.iter().enumerate() {
        assert!((lagrange_projector(&d.t, l) - &d.projectors[i]).norm() < 1e-10);
    }
}

#[test]
fn standard_bases_membership() {
    let m = model();
    let (w, v) = standard_bases();
    assert_eq!((w.len(), v.len()), (8, 6));
    assert_eq!(w[0], &KForm::basis(&[1, 3]) + &KForm::basis(&[2, 4]));
    assert_eq!(v[0], &KForm::basis(&[1, 3]) - &KForm::basis(&[2, 4]));
    for x in &w {
        assert_eq!(characterize(x, &m).unwrap(), Eigenspace::In8);
        assert!((&t_eta_apply(x, &m).unwrap() - x).norm() < 1e-12);
    }
    for x in &v {
        assert_eq!(characterize(x, &m).unwrap(), Eigenspace::In6);
        assert!((&t_eta_apply(x, &m).unwrap() + x).norm() < 1e-12);
    }
    assert_eq!(characterize(&m.omega, &m).unwrap(), Eigenspace::In1);
    assert_eq!(characterize(&KForm::basis(&[1, 7]), &m).unwrap(), Eigenspace::Mixed);
    assert_eq!(characterize(&KForm::zero(2), &m).unwrap(), Eigenspace::Mixed);
}

#[test]
fn project_examples() {
    let m = model();
    let s = project(&m.omega, &m).unwrap();
    assert!((s.part_1.norm() - m.omega.norm()).abs() < 1e-12);
    let a = dz(1).wedge(&dzbar(2)).unwrap();
    let s = project(&a, &m).unwrap();
    assert!((&s.part_8 - &a).norm() < 1e-12);
    let b = dz(1).wedge(&dz(2)).unwrap();
    assert!((&project(&b, &m).unwrap().part_6 - &b).norm() < 1e-12);
    assert!(project(&KForm::e(1), &m).is_err());
}

#[test]
fn complex_frame_bidegrees() {
    let a = dz(1).wedge(&dzbar(2)).unwrap().wedge(&eta()).unwrap();
    let s = bidegree_split(&a);
    assert!((s.vertical_part(1, 1) - &a).norm() < 1e-14);
    assert_eq!(frame_bidegree(0b100_1001), (1, 1, true));
    assert!((&from_complex_frame(&to_complex_frame(&a)) - &a).norm() < 1e-14);
}

#[test]
fn basis_coefficients_recover_input() {
    let (w, _) = standard_bases();
    let coeffs: Vec<C64> = (0..8).map(|i| C64::new(i as f64 - 3.5, 0.25 * i as f64)).collect();
    let mut a = KForm::zero(2);
    for (wi, &c) in w.iter().zip(&coeffs) {
        a += &wi.scale(c);
    }
    let (got, res) = basis_coefficients(&w, &a).unwrap();
    assert!(res < 1e-12);
    for (x, y) in got.iter().zip(&coeffs) {
        assert!((x - y).norm() < 1e-12);
    }
    let (_, res) = basis_coefficients(&w, &model().omega).unwrap();
    assert!((res - model().omega.norm()).abs() < 1e-12);
}

proptest! {
    #[test]
    fn projectors_split_every_form(a in two_form()) {
        let m = model();
        let d = Decomposer::new(&m).unwrap();
        let s = d.project(&a).unwrap();
        prop_assert!((&s.reconstruct() - &a).norm() < 1e-12 * (1.0 + a.norm()));
        let parts = s.parts();
        for i in 0..4 {
            let again = d.project(parts[i]).unwrap();
            prop_assert!((&again.parts()[i].clone() - parts[i]).norm() < 1e-12 * (1.0 + a.norm()));
            for j in (i + 1)..4 {
                prop_assert!(form_inner(parts[i], parts[j]).unwrap().norm() < 1e-10 * (1.0 + a.norm_sqr()));
            }
        }
    }

    #[test]
    fn projection_commutes_with_conjugation(a in two_form()) {
        let d = Decomposer::new(&model()).unwrap();
        let s = d.project(&a).unwrap();
        let sc = d.project(&a.conj()).unwrap();
        for (x, y) in s.parts().iter().zip(sc.parts()) {
            prop_assert!((&x.conj() - y).norm() < 1e-12 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn bidegree_split_reconstructs(a in two_form()) {
        let s = bidegree_split(&a);
        prop_assert!((&s.reconstruct() - &a).norm() < 1e-12 * (1.0 + a.norm()));
        // conjugation swaps (2,0) and (0,2)
        let sc = bidegree_split(&a.conj());
        prop_assert!((&s.part(2, 0).conj() - sc.part(0, 2)).norm() < 1e-12 * (1.0 + a.norm()));
    }
}
