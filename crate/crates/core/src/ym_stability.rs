//! Zero-order part of the Yang–Mills second variation on 𝔤-valued 1-forms:
//! B ↦ B∘Ric + 2𝓡(B) with (𝓡B)(eᵢ) = Σⱼ [F_{ji}, B_j].

use std::f64::consts::SQRT_2;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flat_model::{ContactModel, KForm, DIM};
use crate::gauge_fields::{instanton_classify, GValuedForm, InstantonClass};
use crate::lie_algebra::{random_element, LieAlgebraSpec, LieElement};
use crate::report::{Check, CriteriaReport, Relation, Value, Verdict};
use crate::weitzenbock::{spectrum_in_metric, Spectrum};
use crate::C64;

/// B = Σⱼ eʲ ⊗ B_j.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OneFormSection {
    pub components: Vec<LieElement>,
}

impl OneFormSection {
    pub fn new(components: Vec<LieElement>) -> Result<Self> {
        if components.len() != DIM {
            return Err(Error::Dimension(format!("expected {DIM} components, got {}", components.len())));
        }
        Ok(OneFormSection { components })
    }

    pub fn random<R: Rng + ?Sized>(g: &LieAlgebraSpec, rng: &mut R) -> Self {
        OneFormSection { components: (0..DIM).map(|_| random_element(g, rng)).collect() }
    }

    pub fn to_vec(&self) -> DVector<C64> {
        let d = self.components[0].dim();
        DVector::from_iterator(DIM * d, self.components.iter().flat_map(|c| c.coeffs.iter().copied()))
    }

    pub fn from_vec(v: &DVector<C64>, d: usize) -> Result<Self> {
        if v.len() != DIM * d {
            return Err(Error::Dimension(format!("vector of length {} for {DIM}·{d}", v.len())));
        }
        Self::new((0..DIM).map(|j| LieElement::complex(v.rows(j * d, d).iter().copied().collect())).collect())
    }

    /// Σⱼ h(B_j, C_j).
    pub fn inner(&self, other: &OneFormSection, g: &LieAlgebraSpec) -> C64 {
        self.components.iter().zip(&other.components).map(|(a, b)| g.hermitian(a, b)).sum()
    }

    pub fn norm_sqr(&self, g: &LieAlgebraSpec) -> f64 {
        self.inner(self, g).re
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RicciTensor7 {
    pub m: [[f64; DIM]; DIM],
}

impl RicciTensor7 {
    pub fn new(m: [[f64; DIM]; DIM]) -> Result<Self> {
        let scale = m.iter().flatten().fold(1.0f64, |a, x| a.max(x.abs()));
        for i in 0..DIM {
            for j in 0..DIM {
                if (m[i][j] - m[j][i]).abs() > 1e-12 * scale {
                    return Err(Error::Invalid(format!("Ricci tensor not symmetric at ({}, {})", i + 1, j + 1)));
                }
            }
        }
        Ok(RicciTensor7 { m })
    }

    /// Ric = c·g.
    pub fn scalar(c: f64) -> Self {
        Self::diagonal([c; DIM])
    }

    pub fn diagonal(d: [f64; DIM]) -> Self {
        RicciTensor7 { m: std::array::from_fn(|i| std::array::from_fn(|j| if i == j { d[i] } else { 0.0 })) }
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(DIM, DIM, |i, j| self.m[i][j])
    }

    /// The constant c in Ric ≥ c·g.
    pub fn min_eigenvalue(&self) -> f64 {
        SymmetricEigen::new(self.matrix()).eigenvalues.min()
    }
}

/// F_{ij} (0-based) with F = Σ_{a<b} F_ab e^{ab} and F_ji = −F_ij.
pub fn real_component(f: &GValuedForm, i: usize, j: usize) -> LieElement {
    let d = f.algebra().dim;
    if i == j {
        return LieElement::zero(d);
    }
    let mask = (1u8 << i) | (1u8 << j);
    let c = f.component(mask);
    if i < j {
        c
    } else {
        c.scale_re(-1.0)
    }
}

/// (𝓡B)_i = Σⱼ [F_ji, B_j].
pub fn apply_curvature_action(f: &GValuedForm, b: &OneFormSection) -> OneFormSection {
    let g = f.algebra();
    let comps = (0..DIM)
        .map(|i| {
            (0..DIM).fold(LieElement::zero(g.dim), |acc, j| &acc + &g.br(&real_component(f, j, i), &b.components[j]))
        })
        .collect();
    OneFormSection { components: comps }
}

/// Matrix of 𝓡 on the 7·dim𝔤 coordinates of [`OneFormSection::to_vec`].
pub fn curvature_action_oneforms(f: &GValuedForm) -> Result<DMatrix<C64>> {
    if f.degree() != 2 {
        return Err(Error::DegreeMismatch { expected: 2, got: f.degree() });
    }
    let g = f.algebra();
    let d = g.dim;
    let n = DIM * d;
    let mut out = DMatrix::zeros(n, n);
    for i in 0..DIM {
        for j in 0..DIM {
            let fji = real_component(f, j, i);
            if fji.is_zero() {
                continue;
            }
            // block (i, j) = ad(F_ji)
            out.view_mut((i * d, j * d), (d, d)).copy_from(&g.ad(&fji));
        }
    }
    Ok(out)
}

/// Σ_{i,j} ⟨F_ji, [B_j, B_i]⟩ (bilinear), the ad-invariant rewrite of ⟨𝓡B, B⟩.
pub fn curvature_pairing_trace(f: &GValuedForm, b: &OneFormSection) -> C64 {
    let g = f.algebra();
    let mut acc = C64::default();
    for i in 0..DIM {
        for j in 0..DIM {
            acc += g.bilinear(&real_component(f, j, i), &g.br(&b.components[j], &b.components[i]));
        }
    }
    acc
}

#[derive(Clone, Debug)]
pub struct SecondVariation {
    pub matrix: DMatrix<C64>,
    pub spectrum: Spectrum,
}

/// B ↦ B∘Ric + 2𝓡(B) and its spectrum in the product metric I₇ ⊗ B.
pub fn algebraic_second_variation(f: &GValuedForm, ric: &RicciTensor7) -> Result<SecondVariation> {
    let g = f.algebra();
    let d = g.dim;
    let r = curvature_action_oneforms(f)?;
    let mut s = r * C64::new(2.0, 0.0);
    for i in 0..DIM {
        for j in 0..DIM {
            let c = ric.m[i][j];
            if c != 0.0 {
                for k in 0..d {
                    s[(i * d + k, j * d + k)] += C64::new(c, 0.0);
                }
            }
        }
    }
    let spectrum = spectrum_in_metric(&s, g.inner_factor(), DIM);
    Ok(SecondVariation { matrix: s, spectrum })
}

/// ‖F ∧ dη ∧ dη‖.
pub fn torsion_residual(f: &GValuedForm, m: &ContactModel) -> Result<f64> {
    let deta2: KForm = m.deta().wedge(m.deta())?;
    Ok(f.wedge_form_left(&deta2)?.norm())
}

/// Sufficient stability test ‖F‖ < c/(2√2), plus the sharper spectral
/// certificate of the zero-order operator.
pub fn stability_report(f: &GValuedForm, ric: &RicciTensor7, m: &ContactModel, tol: f64) -> Result<CriteriaReport> {
    let c = ric.min_eigenvalue();
    let fnorm = f.norm();
    let threshold = c / (2.0 * SQRT_2);
    let sv = algebraic_second_variation(f, ric)?;
    let mut rep = CriteriaReport::new("stability");
    rep.note("zero-order part only: the rough Laplacian term is nonnegative and omitted");
    rep.num("c", c)
        .num("F_norm", fnorm)
        .num("threshold", threshold)
        .num("min_eig_second_variation", sv.spectrum.min)
        .value("spectral_certificate", Value::Bool(sv.spectrum.positive));
    rep.check(Check::new(
        "self_adjoint_residual",
        sv.spectrum.self_adjoint_residual,
        Relation::Le,
        1e-10 * (1.0 + sv.spectrum.scale),
    ));

    let diag = instanton_classify(f, m, tol)?;
    let torsion = torsion_residual(f, m)?;
    rep.num("torsion_residual", torsion);
    rep.text(
        "instanton_class",
        serde_json::to_value(diag.class).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
    );
    if diag.class == InstantonClass::Sd {
        rep.check(Check::new("torsion_F_wedge_deta2", torsion, Relation::Le, 1e-12 * fnorm.max(1.0)));
    }
    if !rep.all_checks_pass() {
        rep.verdict = Verdict::Fail;
        return Ok(rep);
    }
    let reason = if c <= 0.0 {
        "Ric has no positive lower bound"
    } else if fnorm < threshold {
        "||F|| < c/(2 sqrt 2)"
    } else {
        "||F|| above c/(2 sqrt 2)"
    };
    rep.text("reason", reason);
    rep.verdict = if c > 0.0 && fnorm < threshold { Verdict::StableSufficient } else { Verdict::Inconclusive };
    Ok(rep)
}

/// Random real F rescaled to norm `target`.
pub fn random_curvature_with_norm<R: Rng + ?Sized>(
    g: &std::sync::Arc<LieAlgebraSpec>,
    target: f64,
    rng: &mut R,
) -> GValuedForm {
    let f = crate::gauge_fields::random_real_two_form(g, rng);
    let n = f.norm();
    if n == 0.0 {
        f
    } else {
        f.scale_re(target / n)
    }
}
