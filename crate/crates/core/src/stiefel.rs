//! The homogeneous SO(3)-bundle over the Stiefel manifold V^{5,2} = SO(5)/SO(3):
//! the curvature of the invariant connection, its self-duality, and
//! witnesses that 𝓕 takes both signs.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flat_model::{ContactModel, KForm};
use crate::form_decomposition::standard_bases;
use crate::gauge_fields::{instanton_classify, GValuedForm, InstantonClass, InstantonDiagnostics};
use crate::lie_algebra::{make_so, random_element, LieAlgebraSpec, LieElement};
use crate::report::{Check, CriteriaReport, Relation, Value, Verdict};
use crate::sampling::{run_sharded, Exec};
use crate::weitzenbock::{
    build_f_operator, coefficient_form, estimate_bound_check_with, operator_spectrum, quad_form_f, vanishing_report,
    w_coefficients, TransverseRicci, TwoZeroSection, COEFFICIENT_FORM_FACTOR, SD_TOL,
};
use crate::ym_stability::{stability_report, RicciTensor7};

/// The Sasaki–Einstein parameter point.
pub const EINSTEIN_Y: [f64; 3] = [9.0 / 16.0, 3.0 / 8.0, 3.0 / 8.0];
/// Ric^T = 8 g^T in dimension 7 (Sasaki–Einstein).
pub const EINSTEIN_TRANSVERSE_RICCI: f64 = 8.0;
/// Ric = 6 g in dimension 7 (Sasaki–Einstein).
pub const EINSTEIN_RICCI: f64 = 6.0;

/// 0-based so(5) indices of the reductive splitting.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Split {
    pub m1: Vec<usize>,
    pub m2: Vec<usize>,
    pub m3: Vec<usize>,
    /// so(3) = ⟨e₈, e₉, e₁₀⟩, the structure group of the bundle.
    pub fiber: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StiefelSpec {
    #[serde(skip)]
    pub algebra: Arc<LieAlgebraSpec>,
    #[serde(skip)]
    pub fiber_algebra: Arc<LieAlgebraSpec>,
    pub split: Split,
    pub y: [f64; 3],
    pub einstein: bool,
}

pub fn build_stiefel(y1: f64, y2: f64, y3: f64) -> Result<StiefelSpec> {
    let y = [y1, y2, y3];
    if y.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
        return Err(Error::Invalid(format!("metric parameters must be positive, got {y:?}")));
    }
    let algebra = Arc::new(make_so(5)?);
    let split = Split { m1: vec![0], m2: vec![1, 2, 3], m3: vec![4, 5, 6], fiber: vec![7, 8, 9] };
    let fiber_algebra = Arc::new(algebra.subalgebra("so3", &split.fiber)?);
    let einstein = y.iter().zip(EINSTEIN_Y).all(|(a, b)| (a - b).abs() < 1e-12);
    Ok(StiefelSpec { algebra, fiber_algebra, split, y, einstein })
}

impl Default for StiefelSpec {
    fn default() -> Self {
        build_stiefel(EINSTEIN_Y[0], EINSTEIN_Y[1], EINSTEIN_Y[2]).expect("positive parameters")
    }
}

impl StiefelSpec {
    /// All indices of the splitting, sorted; equals 0..10 when the split spans so(5).
    pub fn split_indices(&self) -> Vec<usize> {
        let s = &self.split;
        let mut all: Vec<usize> = s.m1.iter().chain(&s.m2).chain(&s.m3).chain(&s.fiber).copied().collect();
        all.sort_unstable();
        all
    }

    pub fn split_spans(&self) -> bool {
        self.split_indices() == (0..self.algebra.dim).collect::<Vec<_>>()
    }

    /// e₈, e₉, e₁₀ as elements of the fiber so(3).
    pub fn fiber_basis(&self) -> [LieElement; 3] {
        std::array::from_fn(|i| LieElement::basis(3, i))
    }
}

/// F_α = (1/y₂)(w₁⊗e₈ + w₃⊗e₉ + w₅⊗e₁₀), valued in the fiber so(3).
pub fn alpha_curvature(s: &StiefelSpec) -> GValuedForm {
    let (w, _) = standard_bases();
    let [e8, e9, e10] = s.fiber_basis();
    let k = 1.0 / s.y[1];
    let terms: Vec<(KForm, LieElement)> = vec![(w[0].scale_re(k), e8), (w[2].scale_re(k), e9), (w[4].scale_re(k), e10)];
    GValuedForm::sum_of(s.fiber_algebra.clone(), &terms).expect("consistent terms")
}

pub fn sdci_verify(s: &StiefelSpec, m: &ContactModel) -> Result<InstantonDiagnostics> {
    instanton_classify(&alpha_curvature(s), m, SD_TOL)
}

/// (1/y₂){⟨[b₃,b₅]+[b₆,b₄], e₈⟩ + ⟨[b₅,b₁]+[b₂,b₆], e₉⟩ + ⟨[b₁,b₃]+[b₄,b₂], e₁₀⟩}.
pub fn stiefel_coefficient_form(b: &[LieElement], s: &StiefelSpec) -> Result<f64> {
    if b.len() != 6 {
        return Err(Error::Dimension(format!("expected 6 coefficients, got {}", b.len())));
    }
    let g = &s.fiber_algebra;
    let [e8, e9, e10] = s.fiber_basis();
    let br = |i: usize, j: usize| g.br(&b[i - 1], &b[j - 1]);
    let t = g.bilinear(&(&br(3, 5) + &br(6, 4)), &e8)
        + g.bilinear(&(&br(5, 1) + &br(2, 6)), &e9)
        + g.bilinear(&(&br(1, 3) + &br(4, 2)), &e10);
    Ok(t.re / s.y[1])
}

/// A section φ = Σ vᵢ⊗bᵢ and the value 2·quad_form_F(φ).
#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub b: Vec<Vec<f64>>,
    pub phi: TwoZeroSection,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessPair {
    pub phi_plus: TwoZeroSection,
    pub phi_minus: TwoZeroSection,
    pub value_plus: f64,
    pub value_minus: f64,
    /// The coefficient form for the analytic witnesses.
    pub coefficient_form_plus: f64,
    pub coefficient_form_minus: f64,
    pub random_max: Option<Witness>,
    pub random_min: Option<Witness>,
    pub samples: usize,
}

impl WitnessPair {
    pub fn certified(&self) -> bool {
        self.value_plus > 0.0 && self.value_minus < 0.0
    }
}

fn witness_value(b: &[LieElement], f: &GValuedForm) -> Result<(TwoZeroSection, f64)> {
    let phi = TwoZeroSection::from_v_coefficients(b)?;
    let q = quad_form_f(&phi, f, SD_TOL)?;
    Ok((phi, 2.0 * q))
}

/// Analytic witnesses b₃ = e₉, b₅ = ±e₁₀ (others zero) plus the extreme
/// values over `samples` seeded random choices of b ∈ so(3)⁶.
pub fn indefiniteness_search(s: &StiefelSpec, seed: u64, samples: usize, exec: Exec) -> Result<WitnessPair> {
    let f = alpha_curvature(s);
    let g = s.fiber_algebra.clone();
    let [_, e9, e10] = s.fiber_basis();
    let analytic = |sign: f64| -> Vec<LieElement> {
        let mut b = vec![LieElement::zero(3); 6];
        b[2] = e9.clone();
        b[4] = e10.scale_re(sign);
        b
    };
    let bp = analytic(1.0);
    let bm = analytic(-1.0);
    let (phi_plus, value_plus) = witness_value(&bp, &f)?;
    let (phi_minus, value_minus) = witness_value(&bm, &f)?;
    let rows = run_sharded(samples, seed, exec, |rng, _| {
        let b: Vec<LieElement> = (0..6).map(|_| random_element(&g, rng)).collect();
        let v = witness_value(&b, &f).map(|(_, v)| v).unwrap_or(f64::NAN);
        (v, b)
    });
    let mut best_max: Option<(f64, Vec<LieElement>)> = None;
    let mut best_min: Option<(f64, Vec<LieElement>)> = None;
    for (v, b) in rows {
        if best_max.as_ref().is_none_or(|(x, _)| v > *x) {
            best_max = Some((v, b.clone()));
        }
        if best_min.as_ref().is_none_or(|(x, _)| v < *x) {
            best_min = Some((v, b));
        }
    }
    let to_witness = |o: Option<(f64, Vec<LieElement>)>| -> Result<Option<Witness>> {
        o.map(|(value, b)| {
            let phi = TwoZeroSection::from_v_coefficients(&b)?;
            Ok(Witness { b: b.iter().map(|x| x.coeffs.iter().map(|c| c.re).collect()).collect(), phi, value })
        })
        .transpose()
    };
    Ok(WitnessPair {
        phi_plus,
        phi_minus,
        value_plus,
        value_minus,
        coefficient_form_plus: stiefel_coefficient_form(&bp, s)?,
        coefficient_form_minus: stiefel_coefficient_form(&bm, s)?,
        random_max: to_witness(best_max)?,
        random_min: to_witness(best_min)?,
        samples,
    })
}

/// The whole example: splitting, brackets, self-duality, witnesses, spectra
/// and the vanishing/stability surrogates at Ric^T = 8g^T.
pub fn stiefel_pipeline(
    s: &StiefelSpec,
    m: &ContactModel,
    seed: u64,
    samples: usize,
    exec: Exec,
) -> Result<CriteriaReport> {
    let mut rep = CriteriaReport::new("stiefel");
    rep.value("y", Value::List(s.y.to_vec()))
        .value("einstein", Value::Bool(s.einstein))
        .num("seed", seed as f64)
        .num("samples", samples as f64);

    let mut algebra = CriteriaReport::new("algebra");
    let g5 = &s.algebra;
    let br = g5.br(&LieElement::basis(10, 8), &LieElement::basis(10, 9));
    let exact_e8 = br == LieElement::basis(10, 7);
    algebra.check(Check::flag("bracket_e9_e10_is_e8", exact_e8));
    algebra.check(Check::flag("split_spans_so5", s.split_spans()));
    algebra.value(
        "split_dims",
        Value::List([&s.split.m1, &s.split.m2, &s.split.m3, &s.split.fiber].iter().map(|v| v.len() as f64).collect()),
    );
    algebra.num("killing_e8_e8", s.fiber_algebra.killing_inner(&LieElement::basis(3, 0), &LieElement::basis(3, 0)).re);
    rep.section(algebra.settle());

    let f = alpha_curvature(s);
    let fnorm = f.norm();
    let diag = sdci_verify(s, m)?;
    let mut sd = CriteriaReport::new("sdci");
    sd.text("class", class_text(diag.class));
    sd.check(Check::flag("class_is_sd", diag.class == InstantonClass::Sd));
    for (label, v) in [
        ("eigen_residual_sd", diag.eigen_residual_sd),
        ("residual_20", diag.residual_20),
        ("residual_02", diag.residual_02),
        ("residual_vertical", diag.residual_vertical),
        ("omega_pairing", diag.omega_pairing),
        ("reality_residual", diag.reality_residual),
    ] {
        sd.check(Check::new(label, v, Relation::Lt, 1e-12));
    }
    sd.num("F_norm", fnorm).num("F_norm_expected", 12f64.sqrt() / s.y[1]);
    let (a, fit) = w_coefficients(&f)?;
    sd.check(Check::new("w_fit_residual", fit, Relation::Lt, 1e-12));
    rep.section(sd.settle());

    let wp = indefiniteness_search(s, seed, samples, exec)?;
    let mut wit = CriteriaReport::new("witnesses");
    wit.num("value_plus", wp.value_plus)
        .num("value_minus", wp.value_minus)
        .num("coefficient_form_plus", wp.coefficient_form_plus)
        .num("coefficient_form_minus", wp.coefficient_form_minus);
    if let (Some(hi), Some(lo)) = (&wp.random_max, &wp.random_min) {
        wit.num("random_max", hi.value).num("random_min", lo.value);
    }
    wit.check(Check::new("value_plus", wp.value_plus, Relation::Gt, 0.0));
    wit.check(Check::new("value_minus", wp.value_minus, Relation::Lt, 0.0));
    // 2·quad_form_F = coefficient form / 2 with the realized normalizations.
    let ratio_gap = (COEFFICIENT_FORM_FACTOR / 2.0 * wp.value_plus - wp.coefficient_form_plus).abs();
    wit.check(Check::new("coefficient_form_consistency", ratio_gap, Relation::Lt, 1e-12));
    let fop = build_f_operator(&f, m, SD_TOL)?;
    let a_re: Vec<LieElement> = a.iter().map(LieElement::re).collect();
    let mut b = vec![LieElement::zero(3); 6];
    b[2] = LieElement::basis(3, 1);
    b[4] = LieElement::basis(3, 2);
    let general = coefficient_form(&b, &a_re, &s.fiber_algebra)?;
    wit.check(Check::new("general_vs_stiefel_form", (general - wp.coefficient_form_plus).abs(), Relation::Lt, 1e-12));
    let op_value = 2.0 * fop.pairing(&wp.phi_plus, &wp.phi_plus).re;
    wit.check(Check::new("operator_vs_quad_form", (op_value - wp.value_plus).abs(), Relation::Lt, 1e-12));
    rep.section(wit.settle());

    let spec = operator_spectrum(&fop);
    let mut sp = CriteriaReport::new("spectrum_F");
    sp.value("eigenvalues", Value::List(spec.eigenvalues.clone())).num("min", spec.min).num("max", spec.max);
    sp.check(Check::flag("indefinite", spec.min < 0.0 && spec.max > 0.0));
    rep.section(sp.settle());

    let ric = TransverseRicci::einstein(EINSTEIN_TRANSVERSE_RICCI);
    rep.section(vanishing_report(&f, &ric, m, SD_TOL)?);
    rep.section(estimate_bound_check_with(&f, samples, seed, exec)?);
    rep.section(stability_report(&f, &RicciTensor7::scalar(EINSTEIN_RICCI), m, SD_TOL)?);

    let pass = rep.checks.iter().all(|c| c.pass) && rep.sections.iter().all(|sec| sec.verdict != Verdict::Fail);
    rep.text("SDCI", if diag.class == InstantonClass::Sd { "PASS" } else { "FAIL" })
        .text("F_indefinite", if spec.min < 0.0 && spec.max > 0.0 { "TRUE" } else { "FALSE" });
    rep.verdict = if pass { Verdict::Pass } else { Verdict::Fail };
    Ok(rep)
}

fn class_text(c: InstantonClass) -> String {
    serde_json::to_value(c).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}
