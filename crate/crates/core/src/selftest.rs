//! Oracle suites: every computed quantity checked against an independent path.
//!
//! Each suite returns a settled [`CriteriaReport`]; [`selftest`] runs them all.

use std::f64::consts::SQRT_2;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::deformation_symbols::{ideal_analysis, symbols_report};
use crate::error::Result;
use crate::flat_model::{
    candidate_conventions, evaluate_candidate, form_inner, model, multi_indices, ContactModel, KForm, DIM,
    T_ETA_SPECTRUM,
};
use crate::form_decomposition::{
    characterize, lagrange_projector, membership_from_split, standard_bases, t_eta_apply, Decomposer, Eigenspace,
    EIGEN_TARGETS,
};
use crate::gauge_fields::{
    g_inner, g_wedge_bracket, g_wedge_bracket_matrix, instanton_classify, random_sd_curvature, split_inner,
    GValuedForm, InstantonClass,
};
use crate::lie_algebra::{bracket_norm_check_with, make_so, make_su, random_element, LieAlgebraSpec, LieElement};
use crate::report::{Check, CriteriaReport, Relation, Value};
use crate::sampling::{normal, normal_c_vec, normal_vec, run_sharded, shard_rng, Exec};
use crate::stiefel::{stiefel_pipeline, StiefelSpec};
use crate::weitzenbock::{
    bilinear_quad, build_f_operator_unchecked, build_r_operator, coefficient_form, curvature_components,
    estimate_bound_check_with, f_action_expanded, f_action_general, induced_inner, quad_form_from_components,
    v_coefficients, w_coefficients, TransverseRicci, TwoZeroSection, COEFFICIENT_FORM_FACTOR, PAIRS,
};
use crate::ym_stability::{
    algebraic_second_variation, apply_curvature_action, curvature_pairing_trace, random_curvature_with_norm,
    torsion_residual, OneFormSection, RicciTensor7,
};
use crate::C64;

pub const EXACT_TOL: f64 = 1e-12;
pub const EIGEN_TOL: f64 = 1e-10;
pub const SELF_ADJOINT_TOL: f64 = 1e-10;

/// Sample counts used by [`selftest`] for a given `--samples` value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteSizes {
    pub projections: usize,
    pub dual_path: usize,
    pub self_adjoint: usize,
    pub estimates: usize,
    pub symbols: usize,
    pub stability: usize,
    pub stiefel: usize,
}

impl SuiteSizes {
    /// `n` drives the large suites; the heavier ones use n/10 and n/100.
    pub fn from_samples(n: usize) -> Self {
        let n = n.max(1);
        SuiteSizes {
            projections: n,
            dual_path: (n / 10).max(1),
            self_adjoint: (n / 10).max(1),
            estimates: n,
            symbols: (n / 100).max(1),
            stability: (n / 100).max(1),
            stiefel: (n / 10).max(1),
        }
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

fn fmax(xs: impl IntoIterator<Item = f64>) -> f64 {
    xs.into_iter().fold(0.0f64, f64::max)
}

fn algebra(name: &str) -> Arc<LieAlgebraSpec> {
    let g = match name {
        "su2" => make_su(2),
        "so3" => make_so(3),
        "so5" => make_so(5),
        "su3" => make_su(3),
        _ => unreachable!("suite algebras are fixed"),
    };
    Arc::new(g.expect("built-in algebra"))
}

/// Calibration, T_η spectrum, eigenspace membership of the standard bases,
/// Hodge identities.
pub fn model_suite() -> Result<CriteriaReport> {
    let mut rep = CriteriaReport::new("model");
    let outcomes: Vec<_> = candidate_conventions().into_iter().map(evaluate_candidate).collect();
    let accepted: Vec<_> = outcomes.iter().filter(|o| o.accepted()).collect();
    rep.num("candidates", outcomes.len() as f64).num("accepted", accepted.len() as f64);
    rep.check(Check::new("accepted_conventions_at_most_one", accepted.len() as f64, Relation::Le, 1.0));
    rep.check(Check::new("accepted_conventions_at_least_one", accepted.len() as f64, Relation::Ge, 1.0));
    let m = model();
    rep.num("orientation_sign", m.orientation_sign as f64)
        .num("deta_scale", m.deta_scale)
        .num("phi_sign", m.phi_sign as f64);

    let dec = Decomposer::new(&m)?;
    let expected: Vec<f64> = T_ETA_SPECTRUM.iter().flat_map(|&(l, k)| std::iter::repeat_n(l, k)).collect();
    let dev = fmax(dec.eigenvalues.iter().zip(&expected).map(|(a, b)| (a - b).abs()));
    rep.value("t_eta_eigenvalues", Value::List(dec.eigenvalues.clone()));
    rep.check(Check::new("t_eta_spectrum_deviation", dev, Relation::Lt, EIGEN_TOL));
    rep.check(Check::new("t_eta_asymmetry", (&dec.t - dec.t.transpose()).norm(), Relation::Lt, EXACT_TOL));

    let (w, v) = standard_bases();
    let eig_res = |forms: &[KForm], lambda: f64| -> Result<f64> {
        let mut worst = 0.0f64;
        for a in forms {
            worst = worst.max((&t_eta_apply(a, &m)? - &a.scale_re(lambda)).norm() / a.norm());
        }
        Ok(worst)
    };
    rep.check(Check::new("w_in_plus_one", eig_res(&w, 1.0)?, Relation::Lt, EIGEN_TOL));
    rep.check(Check::new("v_in_minus_one", eig_res(&v, -1.0)?, Relation::Lt, EIGEN_TOL));
    rep.check(Check::new(
        "omega_in_minus_two",
        eig_res(std::slice::from_ref(&m.omega), -2.0)?,
        Relation::Lt,
        EIGEN_TOL,
    ));

    let res = m.invariant_residuals();
    rep.check(Check::flag("structure_invariants", res.ok()));
    rep.num("transverse_metric_min_eig", res.transverse_metric_min_eig);
    match m.metric_relation_factor() {
        Some(c) => {
            rep.num("metric_relation_factor", c);
        }
        None => {
            rep.check(Check::flag("metric_relation_factor_defined", false));
        }
    }

    // ∗∗ = 1 and a∧∗b̄ = ⟨a,b⟩vol on every pair of basis k-forms.
    let vol = m.volume();
    let mut star_star = 0.0f64;
    let mut wedge_star = 0.0f64;
    for k in 0..=DIM {
        for &ma in multi_indices(k) {
            let a = KForm::from_mask(ma, C64::new(1.0, 0.0));
            star_star = star_star.max((&m.hodge_star(&m.hodge_star(&a)) - &a).norm());
            for &mb in multi_indices(k) {
                let b = KForm::from_mask(mb, C64::new(1.0, 0.0));
                let lhs = a.wedge(&m.hodge_star(&b.conj()))?;
                let rhs = vol.scale(form_inner(&a, &b)?);
                wedge_star = wedge_star.max((&lhs - &rhs).norm());
            }
        }
    }
    rep.check(Check::new("star_star_identity", star_star, Relation::Lt, EXACT_TOL));
    rep.check(Check::new("wedge_star_inner", wedge_star, Relation::Lt, EXACT_TOL));
    let e = KForm::e;
    let example = m.hodge_star(&e(1).wedge(&e(2))?.wedge(&e(3))?.wedge(&e(4))?.wedge(&e(7))?);
    let expect = e(5).wedge(&e(6))?.scale_re(m.orientation_sign as f64);
    rep.check(Check::new("star_e12347", (&example - &expect).norm(), Relation::Lt, EXACT_TOL));

    let mut sign_ok = true;
    for k in 0..=6 {
        let expect = if k % 2 == 0 { 1.0 } else { -1.0 };
        sign_ok &= m.transverse_star_square_sign(k) == Some(expect);
    }
    rep.check(Check::flag("transverse_star_square_sign", sign_ok));

    let ww = m.omega.wedge(&m.omega)?;
    let st = m.transverse_star(&m.omega)?;
    let c = form_inner(&st, &ww)?.re / ww.norm_sqr();
    rep.num("transverse_star_omega_over_omega_squared", c);
    rep.check(Check::new(
        "transverse_star_omega_proportional",
        (&st - &ww.scale_re(c)).norm(),
        Relation::Lt,
        EXACT_TOL,
    ));

    let eta_omega = crate::flat_model::eta().wedge(&m.omega)?;
    rep.check(Check::new("reeb_contraction", (&eta_omega.contract_reeb() - &m.omega).norm(), Relation::Lt, EXACT_TOL));
    Ok(rep.settle())
}

/// Random complex 2-form.
fn random_two_form<R: rand::Rng + ?Sized>(rng: &mut R) -> KForm {
    KForm::from_coords(2, &normal_c_vec(rng, 21))
}

/// Idempotence, orthogonality and completeness of the four projectors, at the
/// matrix level and on `samples` random forms; cross-check with Lagrange
/// interpolation and with the type-based characterization.
pub fn projection_suite(m: &ContactModel, samples: usize, seed: u64, exec: Exec) -> Result<CriteriaReport> {
    let mut rep = CriteriaReport::new("projections");
    let dec = Decomposer::new(m)?;
    let p = &dec.projectors;
    let id = DMatrix::<f64>::identity(21, 21);
    let mut idem = 0.0f64;
    let mut orth = 0.0f64;
    let mut lagrange = 0.0f64;
    let mut ranks = Vec::new();
    for i in 0..4 {
        idem = idem.max((&p[i] * &p[i] - &p[i]).norm());
        for j in 0..4 {
            if i != j {
                orth = orth.max((&p[i] * &p[j]).norm());
            }
        }
        ranks.push(p[i].trace().round());
        lagrange = lagrange.max((lagrange_projector(&dec.t, EIGEN_TARGETS[i]) - &p[i]).norm());
    }
    let complete = (p.iter().fold(DMatrix::zeros(21, 21), |acc, x| acc + x) - &id).norm();
    rep.value("ranks", Value::List(ranks.clone()));
    rep.check(Check::flag("ranks_1_6_8_6", ranks == vec![1.0, 6.0, 8.0, 6.0]));
    rep.check(Check::new("matrix_idempotence", idem, Relation::Lt, EXACT_TOL));
    rep.check(Check::new("matrix_orthogonality", orth, Relation::Lt, EXACT_TOL));
    rep.check(Check::new("matrix_completeness", complete, Relation::Lt, EXACT_TOL));
    rep.check(Check::new("lagrange_vs_eigen", lagrange, Relation::Lt, 1e-10));

    let n = samples.max(1);
    let rows = run_sharded(n, seed, exec, |rng, _| {
        let a = DVector::from_vec(normal_vec(rng, 21));
        let scale = a.norm().max(1.0);
        let parts: Vec<DVector<f64>> = p.iter().map(|pi| pi * &a).collect();
        let mut r_idem = 0.0f64;
        let mut r_orth = 0.0f64;
        for i in 0..4 {
            r_idem = r_idem.max((&p[i] * &parts[i] - &parts[i]).norm());
            for j in (i + 1)..4 {
                r_orth = r_orth.max(parts[i].dot(&parts[j]).abs());
            }
        }
        let sum = parts.iter().fold(DVector::zeros(21), |acc, x| acc + x);
        let r_comp = (sum - &a).norm();
        (r_idem / scale, r_orth / (scale * scale), r_comp / scale)
    });
    rep.num("samples", n as f64);
    rep.check(Check::new("sample_idempotence", fmax(rows.iter().map(|r| r.0)), Relation::Lt, EXACT_TOL));
    rep.check(Check::new("sample_orthogonality", fmax(rows.iter().map(|r| r.1)), Relation::Lt, EXACT_TOL));
    rep.check(Check::new("sample_completeness", fmax(rows.iter().map(|r| r.2)), Relation::Lt, EXACT_TOL));

    // Complex forms through the KForm path: split reconstructs the input.
    let recon = run_sharded(n.min(1000), seed ^ 0x5eed, exec, |rng, _| -> Result<f64> {
        let a = random_two_form(rng);
        Ok((&dec.project(&a)?.reconstruct() - &a).norm() / a.norm().max(1.0))
    });
    let recon = fmax(recon.into_iter().collect::<Result<Vec<_>>>()?);
    rep.check(Check::new("complex_reconstruction", recon, Relation::Lt, EXACT_TOL));

    // Random members of random single eigenspaces: both membership paths agree.
    let agree = run_sharded(n.min(1000), seed ^ 0xa9e, exec, |rng, _| -> Result<bool> {
        let slot = rng.gen_range(0..4usize);
        let basis = &dec.bases[slot];
        let c = DVector::from_vec(normal_vec(rng, basis.ncols()));
        let a = KForm::from_real_coords(2, (basis * c).as_slice());
        let via_projector = membership_from_split(&dec.project(&a)?, a.norm());
        let via_type = characterize(&a, m)?;
        let expected = [Eigenspace::In1, Eigenspace::In6, Eigenspace::In8, Eigenspace::Mixed][slot];
        Ok(via_projector == expected && via_type == expected)
    });
    let agree = agree.into_iter().collect::<Result<Vec<_>>>()?;
    let bad = agree.iter().filter(|&&x| !x).count();
    rep.check(Check::new("membership_disagreements", bad as f64, Relation::Le, 0.0));

    let (w, v) = standard_bases();
    let ok = w.iter().all(|x| characterize(x, m).ok() == Some(Eigenspace::In8))
        && v.iter().all(|x| characterize(x, m).ok() == Some(Eigenspace::In6))
        && characterize(&m.omega, m)? == Eigenspace::In1
        && characterize(&(&w[0] + &v[0]), m)? == Eigenspace::Mixed;
    rep.check(Check::flag("characterize_examples", ok));
    let split = dec.project(&m.omega)?;
    rep.check(Check::new("omega_part_1_fraction", split.part_1.norm() / m.omega.norm(), Relation::Ge, 1.0 - EXACT_TOL));
    Ok(rep.settle())
}

/// Structure-constant and matrix brackets, Killing form normalization,
/// defining identities, the bracket norm bound.
pub fn lie_suite(samples: usize, seed: u64, exec: Exec) -> Result<CriteriaReport> {
    let mut rep = CriteriaReport::new("lie");
    for name in ["su2", "so3", "so5", "su3"] {
        let g = algebra(name);
        let mut sec = CriteriaReport::new(name);
        let r = g.residuals();
        sec.check(Check::flag("defining_identities", r.ok(EXACT_TOL)));
        sec.num("inner_min_eigenvalue", r.inner_min_eigenvalue);
        let n = g.basis_matrices[0].nrows() as f64;
        let rows = run_sharded(samples.clamp(1, 1000), seed, exec, |rng, _| -> Result<(f64, f64)> {
            let a = random_element(&g, rng);
            let b = random_element(&g, rng);
            let sc = g.br(&a, &b);
            let mb = g.matrix_bracket(&a, &b)?;
            let scale = g.norm(&a) * g.norm(&b);
            let br_res = (&sc - &mb).max_abs() / scale.max(1.0);
            // −K(a,b) against −(n−2)Tr(ab) for so(n), −2n Tr(ab) for su(n).
            let tr = (g.matrix_of(&a)? * g.matrix_of(&b)?).trace();
            let factor = if name.starts_with("so") { n - 2.0 } else { 2.0 * n };
            let kil = (g.killing_inner(&a, &b) + tr * factor).norm() / scale.max(1.0);
            Ok((br_res, kil))
        });
        let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
        sec.check(Check::new("structure_vs_matrix_bracket", fmax(rows.iter().map(|r| r.0)), Relation::Lt, 1e-14));
        sec.check(Check::new("killing_vs_trace", fmax(rows.iter().map(|r| r.1)), Relation::Lt, EXACT_TOL));
        rep.section(sec.settle());
    }
    let so5 = algebra("so5");
    let e = |i: usize| LieElement::basis(10, i);
    let exact = so5.br(&e(8), &e(9)) == e(7);
    rep.check(Check::flag("so5_e9_e10_is_e8", exact));
    let so3 = algebra("so3");
    let eps_ok = (0..3).all(|i| {
        so3.br(&LieElement::basis(3, i), &LieElement::basis(3, (i + 1) % 3)) == LieElement::basis(3, (i + 2) % 3)
    });
    rep.check(Check::flag("so3_levi_civita", eps_ok));
    rep.num("so3_killing_e1_e1", so3.norm_sqr(&LieElement::basis(3, 0)));
    for name in ["su2", "so3", "so5"] {
        rep.section(bracket_norm_check_with(&algebra(name), samples, seed, exec));
    }
    Ok(rep.settle())
}

/// Wedge bracket through structure constants vs matrices, graded symmetry,
/// instanton classification examples, the split inner product.
pub fn gauge_suite(m: &ContactModel, samples: usize, seed: u64, exec: Exec) -> Result<CriteriaReport> {
    let mut rep = CriteriaReport::new("gauge");
    let g = algebra("so3");
    let rows = run_sharded(samples.clamp(1, 200), seed, exec, |rng, _| -> Result<(f64, f64)> {
        let degs = [(1usize, 1usize), (1, 2), (2, 2), (2, 3)][rng.gen_range(0..4)];
        let mk = |k: usize, rng: &mut rand_chacha::ChaCha8Rng| {
            let n = crate::flat_model::binomial(DIM, k);
            let parts = (0..g.dim).map(|_| KForm::from_real_coords(k, &normal_vec(rng, n))).collect();
            GValuedForm::from_parts(g.clone(), parts).expect("consistent parts")
        };
        let a = mk(degs.0, rng);
        let b = mk(degs.1, rng);
        let s = g_wedge_bracket(&a, &b)?;
        let mm = g_wedge_bracket_matrix(&a, &b)?;
        let scale = (a.norm() * b.norm()).max(1.0);
        // [a∧b] = −(−1)^{pq}[b∧a]
        let swapped = g_wedge_bracket(&b, &a)?;
        let sign = if (degs.0 * degs.1).is_multiple_of(2) { -1.0 } else { 1.0 };
        let graded = (&s - &swapped.scale_re(sign)).norm();
        Ok(((&s - &mm).norm() / scale, graded / scale))
    });
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    rep.check(Check::new("wedge_bracket_dual_path", fmax(rows.iter().map(|r| r.0)), Relation::Lt, EXACT_TOL));
    rep.check(Check::new("wedge_bracket_graded_symmetry", fmax(rows.iter().map(|r| r.1)), Relation::Lt, EXACT_TOL));

    let (w, v) = standard_bases();
    let a = LieElement::real(&[0.3, -1.2, 0.7]);
    let class = |form: &KForm| -> Result<InstantonClass> {
        Ok(instanton_classify(&GValuedForm::decomposable(g.clone(), form, &a), m, 1e-9)?.class)
    };
    rep.check(Check::flag("w1_is_sd", class(&w[0])? == InstantonClass::Sd));
    rep.check(Check::flag("v2_is_asd", class(&v[1])? == InstantonClass::Asd));
    rep.check(Check::flag("omega_is_lambda_minus_2", class(&m.omega)? == InstantonClass::LambdaMinus2));
    rep.check(Check::flag("w1_plus_v1_is_none", class(&(&w[0] + &v[0]))? == InstantonClass::None));

    // ⟨φ,φ⟩ for φ = φ^{2,0} + conj φ^{2,0} + ω⊗φ⁰ against the split formula.
    let mut rng = shard_rng(seed, u64::MAX);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let p20 = TwoZeroSection::random(&g, &mut rng).to_gform(&g)?;
        let p0 = random_element(&g, &mut rng);
        let full = &(&p20 + &crate::gauge_fields::conjugate_gform(&p20))
            + &GValuedForm::decomposable(g.clone(), &m.omega, &p0);
        let lhs = g_inner(&full, &full)?.re;
        let rhs = split_inner(&p20, &p0, &p20, &p0, m)?;
        worst = worst.max(rel(lhs, rhs));
    }
    rep.num("omega_weight", crate::gauge_fields::omega_weight(m));
    rep.check(Check::new("split_inner_product", worst, Relation::Lt, EXACT_TOL));
    Ok(rep.settle())
}

/// General 𝓕 formula vs the hand-expanded one, the quadratic form vs the
/// operator, and the coefficient form, on random SD curvatures.
pub fn dual_path_suite(samples: usize, seed: u64, exec: Exec) -> Result<CriteriaReport> {
    let mut rep = CriteriaReport::new("dual_path_F");
    for name in ["su2", "so3"] {
        let g = algebra(name);
        let rows = run_sharded(samples.max(1), seed, exec, |rng, _| -> Result<[f64; 4]> {
            let f = random_sd_curvature(&g, rng);
            let fc = curvature_components(&f)?;
            let (phi, b) = TwoZeroSection::random_from_v(&g, rng);
            let gen = f_action_general(&fc, &phi, &g);
            let exp = f_action_expanded(&fc, &phi, &g);
            let scale = (f.norm() * phi.norm_sqr(&g)).max(1.0);
            let action = (&gen.to_vec() - &exp.to_vec()).norm() / (f.norm() * phi.norm(&g)).max(1.0);
            let q = quad_form_from_components(&phi, &fc, &g);
            let op = bilinear_quad(&build_f_operator_unchecked(&f), &phi);
            let (a, fit) = w_coefficients(&f)?;
            let cf = coefficient_form(&b, &a, &g)?;
            Ok([action, (q - op).abs() / scale, (COEFFICIENT_FORM_FACTOR * q - cf).abs() / scale, fit])
        });
        let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
        let mut sec = CriteriaReport::new(name);
        sec.num("samples", rows.len() as f64);
        for (i, label) in ["general_vs_expanded", "quad_form_vs_operator", "coefficient_form", "w_fit_residual"]
            .into_iter()
            .enumerate()
        {
            sec.check(Check::new(label, fmax(rows.iter().map(|r| r[i])), Relation::Lt, EXACT_TOL));
        }
        rep.section(sec.settle());
    }
    rep.num("coefficient_form_factor", COEFFICIENT_FORM_FACTOR);
    Ok(rep.settle())
}

fn random_ricci<R: rand::Rng + ?Sized>(rng: &mut R) -> Result<TransverseRicci> {
    let h = DMatrix::from_fn(3, 3, |_, _| C64::new(normal(rng), normal(rng)));
    let herm = (&h + h.adjoint()) * C64::new(0.5, 0.0);
    let a = DMatrix::from_fn(3, 3, |_, _| C64::new(normal(rng), normal(rng)));
    let metric = &a * a.adjoint() + DMatrix::identity(3, 3);
    TransverseRicci::new(
        std::array::from_fn(|i| std::array::from_fn(|j| herm[(i, j)])),
        std::array::from_fn(|i| std::array::from_fn(|j| metric[(i, j)])),
    )
}

/// ⟨𝓕φ,ψ⟩ = ⟨φ,𝓕ψ⟩ and ⟨𝓡φ,ψ⟩ = ⟨φ,𝓡ψ⟩ on random pairs.
pub fn self_adjoint_suite(samples: usize, seed: u64, exec: Exec) -> Result<CriteriaReport> {
    let mut rep = CriteriaReport::new("self_adjoint");
    for name in ["su2", "so3", "so5"] {
        let g = algebra(name);
        let rows = run_sharded(samples.max(1), seed, exec, |rng, _| -> Result<(f64, f64)> {
            let f = random_sd_curvature(&g, rng);
            let fop = build_f_operator_unchecked(&f);
            let ric = if rng.gen_bool(0.5) {
                random_ricci(rng)?
            } else {
                TransverseRicci::with_identity_metric(random_ricci(rng)?.r)?
            };
            let rop = build_r_operator(&ric, &g);
            let phi = TwoZeroSection::random(&g, rng);
            let psi = TwoZeroSection::random(&g, rng);
            let d = |e: &crate::weitzenbock::TwoZeroEndo, ric: Option<&TransverseRicci>| {
                let prod = |x: &TwoZeroSection, y: &TwoZeroSection| match ric {
                    Some(r) => induced_inner(r, &g, x, y),
                    None => x.inner(y, &g),
                };
                let lhs = prod(&e.apply(&phi), &psi);
                let rhs = prod(&phi, &e.apply(&psi));
                (lhs - rhs).norm() / lhs.norm().max(1.0)
            };
            Ok((d(&fop, None), d(&rop, Some(&ric))))
        });
        let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
        let mut sec = CriteriaReport::new(name);
        sec.num("samples", rows.len() as f64);
        sec.check(Check::new("F_symmetry", fmax(rows.iter().map(|r| r.0)), Relation::Lt, SELF_ADJOINT_TOL));
        sec.check(Check::new("R_symmetry", fmax(rows.iter().map(|r| r.1)), Relation::Lt, SELF_ADJOINT_TOL));
        rep.section(sec.settle());
    }
    Ok(rep.settle())
}

/// 𝓡 = 16·Id for Ric^T = 8g^T; the diagonal-Ricci quadratic form.
pub fn einstein_suite(samples: usize, seed: u64, exec: Exec) -> Result<CriteriaReport> {
    let mut rep = CriteriaReport::new("einstein");
    for name in ["su2", "so3", "so5"] {
        let g = algebra(name);
        let r = build_r_operator(&TransverseRicci::einstein(8.0), &g);
        let n = r.matrix.nrows();
        let exact = r.matrix == DMatrix::identity(n, n) * C64::new(16.0, 0.0);
        rep.check(Check::flag(format!("R_is_16_id[{name}]"), exact));
    }
    let g = algebra("su2");
    let rows = run_sharded(samples.clamp(1, 1000), seed, exec, |rng, _| {
        let diag = [normal(rng), normal(rng), normal(rng)];
        let rop = build_r_operator(&TransverseRicci::diagonal(diag), &g);
        let phi = TwoZeroSection::random(&g, rng);
        let lhs = rop.pairing(&phi, &phi).re;
        let rhs: f64 = PAIRS.iter().map(|&(mu, nu)| (diag[mu] + diag[nu]) * g.norm_sqr(&phi.get(mu, nu))).sum();
        rel(lhs, rhs)
    });
    rep.check(Check::new("diagonal_ricci_quadratic_form", fmax(rows), Relation::Lt, EXACT_TOL));
    Ok(rep.settle())
}

/// |⟨𝓕φ,φ⟩| ≤ √2‖F‖‖φ‖² and ‖[a,b]‖ ≤ √2‖a‖‖b‖, with F and φ both resampled,
/// plus the fixed-F estimate reports.
pub fn estimate_suite(samples: usize, seed: u64, exec: Exec) -> Result<CriteriaReport> {
    let mut rep = CriteriaReport::new("estimates");
    for name in ["su2", "so3", "so5"] {
        let g = algebra(name);
        let rows = run_sharded(samples.max(1), seed, exec, |rng, _| -> Result<(f64, f64)> {
            let f = random_sd_curvature(&g, rng);
            let fc = curvature_components(&f)?;
            let (phi, _) = TwoZeroSection::random_from_v(&g, rng);
            let denom = f.norm() * phi.norm_sqr(&g);
            let q = quad_form_from_components(&phi, &fc, &g).abs() / denom;
            let a = random_element(&g, rng);
            let b = random_element(&g, rng);
            let br = g.norm(&g.br(&a, &b)) / (g.norm(&a) * g.norm(&b));
            Ok((q, br))
        });
        let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
        let mut sec = CriteriaReport::new(name);
        let max_q = fmax(rows.iter().map(|r| r.0));
        let max_b = fmax(rows.iter().map(|r| r.1));
        sec.num("samples", rows.len() as f64).num("max_ratio_F", max_q).num("max_ratio_bracket", max_b);
        sec.check(Check::new("max_ratio_F", max_q, Relation::Le, SQRT_2));
        sec.check(Check::new("max_ratio_bracket", max_b, Relation::Le, SQRT_2));
        let mut rng = shard_rng(seed, u64::MAX - 1);
        let f = random_sd_curvature(&g, &mut rng);
        sec.section(estimate_bound_check_with(&f, (samples / 10).max(1), seed, exec)?);
        rep.section(sec.settle());
    }
    Ok(rep.settle())
}

/// Exactness of the symbol sequences, and the degree-3 ideal.
pub fn symbol_suite(m: &ContactModel, samples: usize, seed: u64, exec: Exec) -> Result<CriteriaReport> {
    let mut rep = symbols_report(&[1, 3], samples, seed, m, exec)?;
    let ideal = ideal_analysis(m)?;
    let mut sec = CriteriaReport::new("degree_three_ideal");
    sec.num("ideal_rank", ideal.ideal_rank_3 as f64)
        .num("quotient_dim", ideal.quotient_dim_3 as f64)
        .num("l3_dim", ideal.l3_dim as f64);
    sec.check(Check::new("l3_orthogonal_to_ideal", ideal.l3_orthogonality_residual, Relation::Lt, EXACT_TOL));
    rep.section(sec.settle());
    Ok(rep.settle())
}

/// Second variation positivity below ‖F‖ = c/(2√2), the pointwise bound
/// behind it, and the torsion identity for SD curvatures.
pub fn stability_suite(m: &ContactModel, trials: usize, seed: u64, exec: Exec) -> Result<CriteriaReport> {
    let mut rep = CriteriaReport::new("stability");
    for name in ["su2", "so3", "so5"] {
        let g = algebra(name);
        let rows = run_sharded(trials.max(1), seed, exec, |rng, _| -> Result<[f64; 6]> {
            let c = rng.gen_range(1.0..10.0);
            let target = rng.gen_range(0.0..0.999) * c / (2.0 * SQRT_2);
            let f = random_curvature_with_norm(&g, target, rng);
            let sv = algebraic_second_variation(&f, &RicciTensor7::scalar(c))?;
            let lower = c - 2.0 * SQRT_2 * f.norm();
            let b = OneFormSection::random(&g, rng);
            let direct = apply_curvature_action(&f, &b).inner(&b, &g);
            let trace = curvature_pairing_trace(&f, &b);
            let ratio = direct.re.abs() / (f.norm() * b.norm_sqr(&g)).max(f64::MIN_POSITIVE);
            let sd = random_sd_curvature(&g, rng);
            let torsion = torsion_residual(&sd, m)? / sd.norm();
            Ok([
                sv.spectrum.min,
                sv.spectrum.min - lower,
                (direct - trace).norm() / direct.norm().max(1.0),
                ratio,
                torsion,
                sv.spectrum.self_adjoint_residual,
            ])
        });
        let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
        let mut sec = CriteriaReport::new(name);
        let positive = rows.iter().filter(|r| r[0] > 0.0).count();
        let min_gap = rows.iter().map(|r| r[1]).fold(f64::INFINITY, f64::min);
        sec.num("trials", rows.len() as f64).num("positive", positive as f64);
        sec.check(Check::new("positive_trials", positive as f64, Relation::Ge, rows.len() as f64));
        sec.check(Check::new("min_eig_minus_lower_bound", min_gap, Relation::Ge, -EXACT_TOL));
        sec.check(Check::new("trace_rewrite", fmax(rows.iter().map(|r| r[2])), Relation::Lt, EXACT_TOL));
        sec.check(Check::new("action_ratio", fmax(rows.iter().map(|r| r[3])), Relation::Le, SQRT_2));
        sec.check(Check::new("torsion_sd", fmax(rows.iter().map(|r| r[4])), Relation::Lt, EXACT_TOL));
        sec.check(Check::new("self_adjoint_residual", fmax(rows.iter().map(|r| r[5])), Relation::Lt, SELF_ADJOINT_TOL));
        rep.section(sec.settle());
    }
    Ok(rep.settle())
}

/// Cross-check of the v-coefficient reading used for witnesses.
fn v_roundtrip_suite(seed: u64) -> Result<CriteriaReport> {
    let mut rep = CriteriaReport::new("v_coefficients");
    let g = algebra("so3");
    let mut rng = shard_rng(seed, u64::MAX - 2);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let (phi, b) = TwoZeroSection::random_from_v(&g, &mut rng);
        let form = phi.to_gform(&g)?;
        let conj = crate::gauge_fields::conjugate_gform(&form);
        // φ + φ̄ = Σ vᵢ⊗bᵢ for real bᵢ.
        let (got, fit) = v_coefficients(&(&form + &conj))?;
        worst = worst.max(fit);
        for (x, y) in got.iter().zip(&b) {
            worst = worst.max((x - y).max_abs());
        }
    }
    rep.check(Check::new("v_roundtrip", worst, Relation::Lt, EXACT_TOL));
    Ok(rep.settle())
}

/// All oracle suites.
pub fn selftest(seed: u64, samples: usize, exec: Exec) -> Result<CriteriaReport> {
    let sizes = SuiteSizes::from_samples(samples);
    let m = model();
    let mut rep = CriteriaReport::new("selftest");
    rep.num("seed", seed as f64).num("samples", samples as f64);
    rep.section(model_suite()?);
    rep.section(projection_suite(&m, sizes.projections, seed, exec)?);
    rep.section(lie_suite(sizes.estimates, seed, exec)?);
    rep.section(gauge_suite(&m, sizes.dual_path, seed, exec)?);
    rep.section(dual_path_suite(sizes.dual_path, seed, exec)?);
    rep.section(self_adjoint_suite(sizes.self_adjoint, seed, exec)?);
    rep.section(einstein_suite(sizes.dual_path, seed, exec)?);
    rep.section(v_roundtrip_suite(seed)?);
    rep.section(estimate_suite(sizes.estimates, seed, exec)?);
    rep.section(symbol_suite(&m, sizes.symbols, seed, exec)?);
    rep.section(stability_suite(&m, sizes.stability, seed, exec)?);
    rep.section(stiefel_pipeline(&StiefelSpec::default(), &m, seed, sizes.stiefel, exec)?);
    Ok(rep.settle())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_scale() {
        let s = SuiteSizes::from_samples(10_000);
        assert_eq!((s.projections, s.dual_path, s.symbols), (10_000, 1000, 100));
        assert_eq!(SuiteSizes::from_samples(0).symbols, 1);
    }
}
