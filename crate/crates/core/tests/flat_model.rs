use cilab_core::flat_model::*;
use cilab_core::C64;
use proptest::prelude::*;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn form_strategy(k: usize) -> impl Strategy<Value = KForm> {
    let n = binomial(DIM, k);
    prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), n)
        .prop_map(move |v| KForm::from_coords(k, &v.into_iter().map(|(a, b)| C64::new(a, b)).collect::<Vec<_>>()))
}

#[test]
fn calibration_is_unique() {
    let accepted: Vec<_> =
        candidate_conventions().into_iter().map(evaluate_candidate).filter(|o| o.accepted()).collect();
    assert_eq!(accepted.len(), 1);
    let c = accepted[0].convention;
    assert_eq!((c.orientation_sign, c.deta_scale, c.phi_sign), (1, -1.0, -1));
    let m = model();
    assert_eq!(m.omega, omega_std().scale_re(-1.0));
    assert!(m.invariant_residuals().ok());
    assert_eq!(m.metric_relation_factor(), Some(2.0));
}

#[test]
fn wedge_examples() {
    let e = KForm::e;
    let a = &e(1) + &e(2).scale(C64::new(0.0, 1.0));
    let b = &e(3) - &e(4).scale(C64::new(0.0, 1.0));
    let got = a.wedge(&b).unwrap();
    let i = C64::new(0.0, 1.0);
    let want = KForm::from_terms(2, [(0b0101, re(1.0)), (0b1001, -i), (0b0110, i), (0b1010, re(1.0))]);
    assert_eq!(got, want);
    assert!(e(1).wedge(&e(1)).unwrap().is_zero());
    assert_eq!(KForm::basis(&[2, 1]), KForm::basis(&[1, 2]).scale_re(-1.0));
    assert!(KForm::basis(&[1, 2, 3, 4]).wedge(&KForm::basis(&[5, 6, 7, 1])).is_err());
}

#[test]
fn hodge_examples() {
    let m = model();
    assert_eq!(m.hodge_star(&m.volume()), KForm::one());
    assert_eq!(m.hodge_star(&KForm::one()), m.volume());
    assert_eq!(m.hodge_star(&KForm::basis(&[1, 2, 3, 4, 7])), KForm::basis(&[5, 6]));
    assert_eq!(m.hodge_star(&KForm::e(7)), KForm::basis(&[1, 2, 3, 4, 5, 6]));
}

#[test]
fn transverse_star_signs_and_rejection() {
    let m = model();
    for k in 0..=6 {
        let expect = if k % 2 == 0 { 1.0 } else { -1.0 };
        assert_eq!(m.transverse_star_square_sign(k), Some(expect), "k = {k}");
    }
    assert!(m.transverse_star(&eta()).is_err());
    let st = m.transverse_star(&m.omega).unwrap();
    let ww = m.omega.wedge(&m.omega).unwrap();
    assert!((&st + &ww.scale_re(0.5)).norm() < 1e-15);
}

#[test]
fn reeb_contraction() {
    let m = model();
    let eo = eta().wedge(&m.omega).unwrap();
    assert_eq!(eo.contract_reeb(), m.omega);
    assert!(m.omega.is_transverse(0.0));
    assert_eq!(KForm::e(7).contract_reeb(), KForm::one());
}

#[test]
fn phi_pullback_on_dz() {
    let m = model();
    for j in 1..=3 {
        let got = m.phi_pullback(&dz(j)).unwrap();
        assert_eq!(got, dz(j).scale(C64::new(0.0, 1.0)));
    }
    assert!(m.phi_pullback(&KForm::basis(&[1, 2])).is_err());
}

#[test]
fn multi_index_tables() {
    for k in 0..=DIM {
        let list = multi_indices(k);
        assert_eq!(list.len(), binomial(DIM, k));
        for (p, &mk) in list.iter().enumerate() {
            assert_eq!(index_position(mk), p);
        }
    }
    assert_eq!(mask_indices(0b1000101), vec![1, 3, 7]);
}

proptest! {
    #[test]
    fn star_star_is_identity(a in (0usize..=7).prop_flat_map(form_strategy)) {
        let m = model();
        prop_assert!((&m.hodge_star(&m.hodge_star(&a)) - &a).norm() < 1e-12);
    }

    #[test]
    fn wedge_star_gives_inner_product(a in form_strategy(3), b in form_strategy(3)) {
        let m = model();
        let lhs = a.wedge(&m.hodge_star(&b.conj())).unwrap();
        let rhs = m.volume().scale(form_inner(&a, &b).unwrap());
        prop_assert!((&lhs - &rhs).norm() < 1e-10);
    }

    #[test]
    fn wedge_is_graded_commutative(a in form_strategy(2), b in form_strategy(3), c in form_strategy(1)) {
        let ab = a.wedge(&b).unwrap();
        let ba = b.wedge(&a).unwrap();
        prop_assert!((&ab - &ba).norm() < 1e-10);
        let bc = b.wedge(&c).unwrap();
        let cb = c.wedge(&b).unwrap();
        prop_assert!((&bc - &cb.scale_re(-1.0)).norm() < 1e-10);
        let left = a.wedge(&b).unwrap().wedge(&c).unwrap();
        let right = a.wedge(&b.wedge(&c).unwrap()).unwrap();
        prop_assert!((&left - &right).norm() < 1e-9);
    }

    #[test]
    fn contraction_is_antiderivation(a in form_strategy(2), b in form_strategy(2)) {
        // i_ξ(a∧b) = i_ξa∧b + a∧i_ξb for even a.
        let lhs = a.wedge(&b).unwrap().contract_reeb();
        let rhs = &a.contract_reeb().wedge(&b).unwrap() + &a.wedge(&b.contract_reeb()).unwrap();
        prop_assert!((&lhs - &rhs).norm() < 1e-10);
    }
}
