//! 𝔤-valued forms: graded bracket, inner products, conjugation and the
//! instanton classifier.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::flat_model::{form_inner, multi_indices, ContactModel, KForm, Mask};
use crate::form_decomposition::{bidegree_split, from_complex_frame, t_eta_apply, to_complex_frame};
use crate::lie_algebra::{LieAlgebraSpec, LieElement};
use crate::C64;

/// Σ_k α_k ⊗ e_k, stored as one scalar form per Lie basis element.
#[derive(Clone, Debug)]
pub struct GValuedForm {
    algebra: Arc<LieAlgebraSpec>,
    degree: usize,
    parts: Vec<KForm>,
}

impl GValuedForm {
    pub fn zero(algebra: Arc<LieAlgebraSpec>, degree: usize) -> Self {
        let parts = vec![KForm::zero(degree); algebra.dim];
        GValuedForm { algebra, degree, parts }
    }

    /// α ⊗ a.
    pub fn decomposable(algebra: Arc<LieAlgebraSpec>, form: &KForm, a: &LieElement) -> Self {
        assert_eq!(a.dim(), algebra.dim, "Lie element dimension mismatch");
        let parts = a.coeffs.iter().map(|&c| form.scale(c)).collect();
        GValuedForm { degree: form.degree(), algebra, parts }
    }

    /// Σ forms[i] ⊗ elements[i].
    pub fn sum_of(algebra: Arc<LieAlgebraSpec>, terms: &[(KForm, LieElement)]) -> Result<Self> {
        let degree = terms.first().map(|(f, _)| f.degree()).unwrap_or(0);
        let mut out = GValuedForm::zero(algebra.clone(), degree);
        for (f, a) in terms {
            if f.degree() != degree {
                return Err(Error::DegreeMismatch { expected: degree, got: f.degree() });
            }
            if a.dim() != algebra.dim {
                return Err(Error::Dimension(format!(
                    "element of length {} for algebra of dimension {}",
                    a.dim(),
                    algebra.dim
                )));
            }
            out = &out + &GValuedForm::decomposable(algebra.clone(), f, a);
        }
        Ok(out)
    }

    pub fn from_parts(algebra: Arc<LieAlgebraSpec>, parts: Vec<KForm>) -> Result<Self> {
        if parts.len() != algebra.dim {
            return Err(Error::Dimension(format!("{} parts for algebra of dimension {}", parts.len(), algebra.dim)));
        }
        let degree = parts.first().map(KForm::degree).unwrap_or(0);
        if let Some(p) = parts.iter().find(|p| p.degree() != degree) {
            return Err(Error::DegreeMismatch { expected: degree, got: p.degree() });
        }
        Ok(GValuedForm { algebra, degree, parts })
    }

    /// Builds from multi-index components; indices may be unsorted (sign applied).
    pub fn from_index_components(
        algebra: Arc<LieAlgebraSpec>,
        degree: usize,
        comps: &[(Vec<usize>, LieElement)],
    ) -> Result<Self> {
        let mut out = GValuedForm::zero(algebra.clone(), degree);
        for (idx, a) in comps {
            if idx.len() != degree {
                return Err(Error::DegreeMismatch { expected: degree, got: idx.len() });
            }
            if a.dim() != algebra.dim {
                return Err(Error::Dimension(format!(
                    "element of length {} for algebra of dimension {}",
                    a.dim(),
                    algebra.dim
                )));
            }
            out = &out + &GValuedForm::decomposable(algebra.clone(), &KForm::basis(idx), a);
        }
        Ok(out)
    }

    pub fn algebra(&self) -> &Arc<LieAlgebraSpec> {
        &self.algebra
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn parts(&self) -> &[KForm] {
        &self.parts
    }

    pub fn component(&self, mask: Mask) -> LieElement {
        LieElement::complex(self.parts.iter().map(|p| p.coeff(mask)).collect())
    }

    /// Nonzero components keyed by canonical multi-index.
    pub fn components(&self) -> BTreeMap<Mask, LieElement> {
        multi_indices(self.degree).iter().map(|&m| (m, self.component(m))).filter(|(_, a)| !a.is_zero()).collect()
    }

    /// Components in the complex frame (dz¹,dz²,dz³,dz̄¹,dz̄²,dz̄³,η); the
    /// coefficient at {μ, ν̄} is F_{μν̄} for F^{1,1} = Σ F_{μν̄} dz^μ∧dz̄^ν.
    pub fn complex_components(&self) -> BTreeMap<Mask, LieElement> {
        let framed: Vec<KForm> = self.parts.iter().map(to_complex_frame).collect();
        let mut masks: Vec<Mask> = framed.iter().flat_map(|f| f.terms().keys().copied()).collect();
        masks.sort_unstable();
        masks.dedup();
        masks
            .into_iter()
            .map(|m| (m, LieElement::complex(framed.iter().map(|f| f.coeff(m)).collect())))
            .filter(|(_, a)| !a.is_zero())
            .collect()
    }

    pub fn from_complex_components(
        algebra: Arc<LieAlgebraSpec>,
        degree: usize,
        comps: &BTreeMap<Mask, LieElement>,
    ) -> Result<Self> {
        let mut framed = vec![KForm::zero(degree); algebra.dim];
        for (&m, a) in comps {
            if m.count_ones() as usize != degree {
                return Err(Error::DegreeMismatch { expected: degree, got: m.count_ones() as usize });
            }
            if a.dim() != algebra.dim {
                return Err(Error::Dimension(format!(
                    "element of length {} for algebra of dimension {}",
                    a.dim(),
                    algebra.dim
                )));
            }
            for (k, &c) in a.coeffs.iter().enumerate() {
                framed[k].add_term(m, c);
            }
        }
        let parts = framed.iter().map(from_complex_frame).collect();
        Ok(GValuedForm { algebra, degree, parts })
    }

    pub fn map_forms(&self, f: impl Fn(&KForm) -> KForm) -> GValuedForm {
        let parts: Vec<KForm> = self.parts.iter().map(f).collect();
        let degree = parts.first().map(KForm::degree).unwrap_or(self.degree);
        GValuedForm { algebra: self.algebra.clone(), degree, parts }
    }

    pub fn try_map_forms(&self, f: impl Fn(&KForm) -> Result<KForm>) -> Result<GValuedForm> {
        let parts = self.parts.iter().map(f).collect::<Result<Vec<_>>>()?;
        let degree = parts.first().map(KForm::degree).unwrap_or(self.degree);
        Ok(GValuedForm { algebra: self.algebra.clone(), degree, parts })
    }

    pub fn scale(&self, c: C64) -> GValuedForm {
        self.map_forms(|p| p.scale(c))
    }

    pub fn scale_re(&self, x: f64) -> GValuedForm {
        self.scale(C64::new(x, 0.0))
    }

    /// Wedge with a scalar form on the left: β∧α ⊗ a.
    pub fn wedge_form_left(&self, beta: &KForm) -> Result<GValuedForm> {
        self.try_map_forms(|p| beta.wedge(p))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.algebra_sesquilinear(self).re
    }

    /// Pointwise norm ‖α‖ = √⟨α,α⟩ (form inner ⊗ Lie inner).
    pub fn norm(&self) -> f64 {
        self.norm_sqr().max(0.0).sqrt()
    }

    /// ‖F − conj F‖.
    pub fn reality_residual(&self) -> f64 {
        (self - &conjugate_gform(self)).norm()
    }

    fn algebra_sesquilinear(&self, other: &GValuedForm) -> C64 {
        let g = &self.algebra;
        let d = g.dim;
        let mut acc = C64::default();
        for i in 0..d {
            for j in 0..d {
                let bij = g.inner[(i, j)];
                if bij != 0.0 {
                    acc += form_inner(&self.parts[i], &other.parts[j]).expect("equal degrees") * bij;
                }
            }
        }
        acc
    }

    fn same_algebra(&self, other: &GValuedForm) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) || *self.algebra == *other.algebra
    }
}

impl std::ops::Add for &GValuedForm {
    type Output = GValuedForm;
    fn add(self, rhs: &GValuedForm) -> GValuedForm {
        assert!(self.same_algebra(rhs), "adding forms over different algebras");
        assert_eq!(self.degree, rhs.degree, "adding forms of different degree");
        let parts = self.parts.iter().zip(&rhs.parts).map(|(a, b)| a + b).collect();
        GValuedForm { algebra: self.algebra.clone(), degree: self.degree, parts }
    }
}

impl std::ops::Sub for &GValuedForm {
    type Output = GValuedForm;
    fn sub(self, rhs: &GValuedForm) -> GValuedForm {
        self + &rhs.scale_re(-1.0)
    }
}

/// [a∧b] = Σ (α_i∧β_j) ⊗ [e_i, e_j].
pub fn g_wedge_bracket(a: &GValuedForm, b: &GValuedForm) -> Result<GValuedForm> {
    if !a.same_algebra(b) {
        return Err(Error::AlgebraMismatch);
    }
    let g = &a.algebra;
    let d = g.dim;
    let mut parts = vec![KForm::zero(a.degree + b.degree); d];
    if a.degree + b.degree > crate::flat_model::DIM {
        return Err(Error::DegreeOverflow(a.degree, b.degree));
    }
    for i in 0..d {
        if a.parts[i].is_zero() {
            continue;
        }
        for j in 0..d {
            if b.parts[j].is_zero() {
                continue;
            }
            let w = a.parts[i].wedge(&b.parts[j])?;
            for (k, part) in parts.iter_mut().enumerate() {
                let c = g.c(i, j, k);
                if c != 0.0 {
                    *part += &w.scale_re(c);
                }
            }
        }
    }
    Ok(GValuedForm { algebra: a.algebra.clone(), degree: a.degree + b.degree, parts })
}

/// The same bracket through matrix-valued forms: φ∧ψ − (−1)^{pq} ψ∧φ.
pub fn g_wedge_bracket_matrix(a: &GValuedForm, b: &GValuedForm) -> Result<GValuedForm> {
    if !a.same_algebra(b) {
        return Err(Error::AlgebraMismatch);
    }
    let g = &a.algebra;
    let (p, q) = (a.degree, b.degree);
    if p + q > crate::flat_model::DIM {
        return Err(Error::DegreeOverflow(p, q));
    }
    let sign = if (p * q) % 2 == 0 { 1.0 } else { -1.0 };
    let mut acc: BTreeMap<Mask, nalgebra::DMatrix<C64>> = BTreeMap::new();
    let ca = a.components();
    let cb = b.components();
    for (&ma, ea) in &ca {
        let xa = g.matrix_of(ea)?;
        for (&mb, eb) in &cb {
            if ma & mb != 0 {
                continue;
            }
            let xb = g.matrix_of(eb)?;
            let ab = KForm::from_mask(ma, C64::new(1.0, 0.0)).wedge(&KForm::from_mask(mb, C64::new(1.0, 0.0)))?;
            let ba = KForm::from_mask(mb, C64::new(1.0, 0.0)).wedge(&KForm::from_mask(ma, C64::new(1.0, 0.0)))?;
            let m = ma | mb;
            let term = &xa * &xb * ab.coeff(m) - (&xb * &xa) * (ba.coeff(m) * sign);
            acc.entry(m).and_modify(|x| *x += &term).or_insert(term);
        }
    }
    let mut out = GValuedForm::zero(a.algebra.clone(), p + q);
    for (m, x) in acc {
        let e = g.element_of(&x)?;
        for (k, &c) in e.coeffs.iter().enumerate() {
            out.parts[k].add_term(m, c);
        }
    }
    Ok(out)
}

/// Pointwise Hermitian product ⟨a,b⟩ = Σ ⟨α_i, β_j⟩ B_ij.
pub fn g_inner(a: &GValuedForm, b: &GValuedForm) -> Result<C64> {
    if a.degree != b.degree {
        return Err(Error::DegreeMismatch { expected: a.degree, got: b.degree });
    }
    if !a.same_algebra(b) {
        return Err(Error::AlgebraMismatch);
    }
    Ok(a.algebra_sesquilinear(b))
}

/// Conjugation of the form part only.
pub fn conjugate_gform(a: &GValuedForm) -> GValuedForm {
    a.map_forms(KForm::conj)
}

/// Weight w in ⟨φ,φ⟩ = 2(‖φ^{2,0}‖² + w‖φ⁰‖²) for φ = φ^{2,0} + conj φ^{2,0} + ω⊗φ⁰;
/// equals ‖ω‖²/2 in the e-coframe.
pub fn omega_weight(m: &ContactModel) -> f64 {
    m.omega.norm_sqr() / 2.0
}

/// 2(Re⟨φ^{2,0},ψ^{2,0}⟩ + w·Re⟨φ⁰,ψ⁰⟩) with w = [`omega_weight`].
pub fn split_inner(
    phi20: &GValuedForm,
    phi0: &LieElement,
    psi20: &GValuedForm,
    psi0: &LieElement,
    m: &ContactModel,
) -> Result<f64> {
    let g = phi20.algebra();
    let block = g_inner(phi20, psi20)?.re;
    Ok(2.0 * (block + omega_weight(m) * g.hermitian(phi0, psi0).re))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum InstantonClass {
    #[serde(rename = "SD")]
    Sd,
    #[serde(rename = "ASD")]
    Asd,
    #[serde(rename = "LAMBDA_MINUS_2")]
    LambdaMinus2,
    #[serde(rename = "NONE")]
    None,
}

#[derive(Clone, Debug, Serialize)]
pub struct InstantonDiagnostics {
    pub class: InstantonClass,
    pub norm: f64,
    pub tol: f64,
    /// ‖T_η F − λF‖ for λ = 1, −1, −2.
    pub eigen_residual_sd: f64,
    pub eigen_residual_asd: f64,
    pub eigen_residual_minus2: f64,
    pub residual_20: f64,
    pub residual_02: f64,
    pub residual_vertical: f64,
    /// ‖⟨F,ω⟩‖/‖ω‖ as a Lie-algebra norm.
    pub omega_pairing: f64,
    pub reality_residual: f64,
    pub eigen_path_sd: bool,
    pub criteria_path_sd: bool,
}

/// Agreement slack between the two SD paths before declaring a bug.
const PATH_AGREEMENT_FACTOR: f64 = 100.0;

/// Classifies F by T_η eigenvalue and, independently, by the type-(1,1),
/// ⟨F,ω⟩ = 0 and reality criteria.
pub fn instanton_classify(f: &GValuedForm, m: &ContactModel, tol: f64) -> Result<InstantonDiagnostics> {
    if f.degree() != 2 {
        return Err(Error::DegreeMismatch { expected: 2, got: f.degree() });
    }
    let g = f.algebra().clone();
    let norm = f.norm();
    let tf = f.try_map_forms(|p| t_eta_apply(p, m))?;
    let res = |lambda: f64| (&tf - &f.scale_re(lambda)).norm();
    let (r_sd, r_asd, r_m2) = (res(1.0), res(-1.0), res(-2.0));

    let mut p20 = Vec::with_capacity(g.dim);
    let mut p02 = Vec::with_capacity(g.dim);
    let mut pv = Vec::with_capacity(g.dim);
    for part in f.parts() {
        let s = bidegree_split(part);
        p20.push(s.part(2, 0).clone());
        p02.push(s.part(0, 2).clone());
        pv.push(s.vertical_total());
    }
    let gnorm = |parts: Vec<KForm>| GValuedForm::from_parts(g.clone(), parts).map(|x| x.norm());
    let residual_20 = gnorm(p20)?;
    let residual_02 = gnorm(p02)?;
    let residual_vertical = gnorm(pv)?;
    let pairing = LieElement::complex(f.parts().iter().map(|p| form_inner(p, &m.omega)).collect::<Result<Vec<C64>>>()?);
    let omega_pairing = g.norm(&pairing) / m.omega.norm();
    let reality_residual = f.reality_residual();

    let thr = tol * norm;
    let eigen_path_sd = r_sd <= thr;
    let criteria_path_sd = residual_20 <= thr && residual_02 <= thr && residual_vertical <= thr && omega_pairing <= thr;
    let gross = PATH_AGREEMENT_FACTOR * thr;
    let criteria_worst = residual_20.max(residual_02).max(residual_vertical).max(omega_pairing);
    if (eigen_path_sd && criteria_worst > gross) || (criteria_path_sd && r_sd > gross) {
        return Err(Error::Consistency(format!(
            "T_η path and type criteria disagree: eigen residual {r_sd:.3e}, criteria residual {criteria_worst:.3e}"
        )));
    }
    let class = if eigen_path_sd {
        if reality_residual <= thr {
            InstantonClass::Sd
        } else {
            InstantonClass::None
        }
    } else if r_asd <= thr {
        InstantonClass::Asd
    } else if r_m2 <= thr {
        InstantonClass::LambdaMinus2
    } else {
        InstantonClass::None
    };
    Ok(InstantonDiagnostics {
        class,
        norm,
        tol,
        eigen_residual_sd: r_sd,
        eigen_residual_asd: r_asd,
        eigen_residual_minus2: r_m2,
        residual_20,
        residual_02,
        residual_vertical,
        omega_pairing,
        reality_residual,
        eigen_path_sd,
        criteria_path_sd,
    })
}

/// Random self-dual curvature Σ wᵢ ⊗ aᵢ with standard-normal real aᵢ.
pub fn random_sd_curvature<R: rand::Rng + ?Sized>(g: &Arc<LieAlgebraSpec>, rng: &mut R) -> GValuedForm {
    let (w, _) = crate::form_decomposition::standard_bases();
    let terms: Vec<(KForm, LieElement)> =
        w.into_iter().map(|wi| (wi, crate::lie_algebra::random_element(g, rng))).collect();
    GValuedForm::sum_of(g.clone(), &terms).expect("consistent degrees")
}

/// Random real 𝔤-valued 2-form with standard-normal components.
pub fn random_real_two_form<R: rand::Rng + ?Sized>(g: &Arc<LieAlgebraSpec>, rng: &mut R) -> GValuedForm {
    let parts = (0..g.dim).map(|_| KForm::from_real_coords(2, &crate::sampling::normal_vec(rng, 21))).collect();
    GValuedForm::from_parts(g.clone(), parts).expect("consistent parts")
}
