//! The zero-order Weitzenböck endomorphisms 𝓕 (gauge curvature) and 𝓡
//! (transverse Ricci) on Ω^{2,0} ⊗ 𝔤, their spectra and quadratic forms,
//! and the pointwise vanishing criteria.

use std::f64::consts::SQRT_2;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flat_model::{dz, ContactModel, KForm};
use crate::form_decomposition::{basis_coefficients, standard_bases};
use crate::gauge_fields::{instanton_classify, GValuedForm, InstantonClass};
use crate::lie_algebra::{random_element, LieAlgebraSpec, LieElement};
use crate::report::{Check, CriteriaReport, Relation, Value, Verdict};
use crate::sampling::{run_sharded, Exec};
use crate::C64;

/// Index pairs (μ,ν), μ<ν, in storage order.
pub const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// Default relative tolerance for the SD precondition of 𝓕.
pub const SD_TOL: f64 = 1e-9;
/// Relative positivity tolerance for operator spectra.
pub const POSITIVITY_TOL: f64 = 1e-10;

/// 4·quad_form_F(φ(b)) equals the coefficient expression in the b's.
pub const COEFFICIENT_FORM_FACTOR: f64 = 4.0;

fn pair_index(mu: usize, nu: usize) -> Option<(usize, f64)> {
    match (mu, nu) {
        (0, 1) => Some((0, 1.0)),
        (1, 0) => Some((0, -1.0)),
        (0, 2) => Some((1, 1.0)),
        (2, 0) => Some((1, -1.0)),
        (1, 2) => Some((2, 1.0)),
        (2, 1) => Some((2, -1.0)),
        _ => None,
    }
}

/// φ^{2,0} = Σ_{μ<ν} φ_μν dz^μ∧dz^ν with components (φ₁₂, φ₁₃, φ₂₃) in 𝔤⊗ℂ.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TwoZeroSection {
    pub phi: [LieElement; 3],
}

impl TwoZeroSection {
    pub fn new(phi12: LieElement, phi13: LieElement, phi23: LieElement) -> Self {
        assert!(phi12.dim() == phi13.dim() && phi13.dim() == phi23.dim(), "component dimensions differ");
        TwoZeroSection { phi: [phi12, phi13, phi23] }
    }

    pub fn zero(d: usize) -> Self {
        TwoZeroSection::new(LieElement::zero(d), LieElement::zero(d), LieElement::zero(d))
    }

    pub fn dim(&self) -> usize {
        self.phi[0].dim()
    }

    /// φ_μν for 0-based μ,ν with φ_νμ = −φ_μν and φ_μμ = 0.
    pub fn get(&self, mu: usize, nu: usize) -> LieElement {
        match pair_index(mu, nu) {
            Some((k, s)) => self.phi[k].scale_re(s),
            None => LieElement::zero(self.dim()),
        }
    }

    /// (2,0)-part of Σ vᵢ⊗bᵢ: φ₁₂ = (b₁ − ib₂)/2, φ₁₃ = (b₃ − ib₄)/2, φ₂₃ = (b₅ − ib₆)/2.
    pub fn from_v_coefficients(b: &[LieElement]) -> Result<Self> {
        if b.len() != 6 {
            return Err(Error::Dimension(format!("expected 6 v-coefficients, got {}", b.len())));
        }
        let half = C64::new(0.5, 0.0);
        let mhalf_i = C64::new(0.0, -0.5);
        let comp = |k: usize| &b[2 * k].scale(half) + &b[2 * k + 1].scale(mhalf_i);
        Ok(TwoZeroSection::new(comp(0), comp(1), comp(2)))
    }

    pub fn to_vec(&self) -> DVector<C64> {
        DVector::from_iterator(3 * self.dim(), self.phi.iter().flat_map(|p| p.coeffs.iter().copied()))
    }

    pub fn from_vec(v: &DVector<C64>, d: usize) -> Result<Self> {
        if v.len() != 3 * d {
            return Err(Error::Dimension(format!("vector of length {} for 3·{d}", v.len())));
        }
        let comp = |k: usize| LieElement::complex(v.rows(k * d, d).iter().copied().collect());
        Ok(TwoZeroSection::new(comp(0), comp(1), comp(2)))
    }

    /// Σ_{μ<ν} h(φ_μν, ψ_μν).
    pub fn inner(&self, other: &TwoZeroSection, g: &LieAlgebraSpec) -> C64 {
        self.phi.iter().zip(&other.phi).map(|(a, b)| g.hermitian(a, b)).sum()
    }

    pub fn norm_sqr(&self, g: &LieAlgebraSpec) -> f64 {
        self.inner(self, g).re
    }

    pub fn norm(&self, g: &LieAlgebraSpec) -> f64 {
        self.norm_sqr(g).max(0.0).sqrt()
    }

    pub fn scale(&self, c: C64) -> Self {
        TwoZeroSection { phi: self.phi.clone().map(|p| p.scale(c)) }
    }

    /// The section as a 𝔤-valued 2-form in the real coframe.
    pub fn to_gform(&self, g: &Arc<LieAlgebraSpec>) -> Result<GValuedForm> {
        let terms: Vec<(KForm, LieElement)> = PAIRS
            .iter()
            .zip(&self.phi)
            .map(|(&(mu, nu), p)| (dz(mu + 1).wedge(&dz(nu + 1)).expect("2-form"), p.clone()))
            .collect();
        GValuedForm::sum_of(g.clone(), &terms)
    }

    /// Complex section with standard-normal real and imaginary parts.
    pub fn random<R: Rng + ?Sized>(g: &LieAlgebraSpec, rng: &mut R) -> Self {
        let d = g.dim;
        let comp = |rng: &mut R| LieElement::complex(crate::sampling::normal_c_vec(rng, d));
        let a = comp(rng);
        let b = comp(rng);
        let c = comp(rng);
        TwoZeroSection::new(a, b, c)
    }

    /// Section built from random real v-coefficients b₁..b₆ ∈ 𝔤.
    pub fn random_from_v<R: Rng + ?Sized>(g: &LieAlgebraSpec, rng: &mut R) -> (Self, Vec<LieElement>) {
        let b: Vec<LieElement> = (0..6).map(|_| random_element(g, rng)).collect();
        (TwoZeroSection::from_v_coefficients(&b).expect("six coefficients"), b)
    }
}

/// F_μν̄ for 0-based μ,ν, read from F^{1,1} = Σ F_μν̄ dz^μ∧dz̄^ν.
pub fn curvature_components(f: &GValuedForm) -> Result<[[LieElement; 3]; 3]> {
    if f.degree() != 2 {
        return Err(Error::DegreeMismatch { expected: 2, got: f.degree() });
    }
    let d = f.algebra().dim;
    let comps = f.complex_components();
    Ok(std::array::from_fn(|mu| {
        std::array::from_fn(|nu| {
            let mask = (1u8 << mu) | (1u8 << (3 + nu));
            comps.get(&mask).cloned().unwrap_or_else(|| LieElement::zero(d))
        })
    }))
}

/// Transverse Ricci R_{β̄μ} (stored `r[β][μ]`) and metric g_{αβ̄} in a unitary frame.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransverseRicci {
    pub r: [[C64; 3]; 3],
    pub metric: [[C64; 3]; 3],
}

fn identity3() -> [[C64; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { C64::new(1.0, 0.0) } else { C64::default() }))
}

impl TransverseRicci {
    pub fn new(r: [[C64; 3]; 3], metric: [[C64; 3]; 3]) -> Result<Self> {
        let ric = TransverseRicci { r, metric };
        ric.validate()?;
        Ok(ric)
    }

    pub fn with_identity_metric(r: [[C64; 3]; 3]) -> Result<Self> {
        Self::new(r, identity3())
    }

    /// Ric^T = k·g^T.
    pub fn einstein(k: f64) -> Self {
        Self::diagonal([k, k, k])
    }

    pub fn diagonal(diag: [f64; 3]) -> Self {
        let r = std::array::from_fn(|i| {
            std::array::from_fn(|j| if i == j { C64::new(diag[i], 0.0) } else { C64::default() })
        });
        TransverseRicci { r, metric: identity3() }
    }

    fn validate(&self) -> Result<()> {
        let scale = self.r.iter().flatten().map(|c| c.norm()).fold(1.0f64, f64::max);
        for i in 0..3 {
            for j in 0..3 {
                if (self.r[i][j].conj() - self.r[j][i]).norm() > 1e-12 * scale {
                    return Err(Error::Invalid(format!("Ricci not Hermitian at ({}, {})", i + 1, j + 1)));
                }
                if (self.metric[i][j].conj() - self.metric[j][i]).norm() > 1e-12 {
                    return Err(Error::Invalid(format!("metric not Hermitian at ({}, {})", i + 1, j + 1)));
                }
            }
        }
        let g = DMatrix::from_fn(3, 3, |i, j| self.metric[i][j]);
        let min = SymmetricEigen::new(g).eigenvalues.min();
        if min <= 0.0 {
            return Err(Error::Invalid(format!("metric not positive definite (min eigenvalue {min:.3e})")));
        }
        Ok(())
    }

    /// g^{αβ̄} as a matrix indexed [α][β].
    pub fn inverse_metric(&self) -> DMatrix<C64> {
        let g = DMatrix::from_fn(3, 3, |i, j| self.metric[i][j]);
        g.try_inverse().expect("validated metric is invertible").transpose()
    }

    pub fn scale(&self, c: f64) -> Self {
        TransverseRicci { r: self.r.map(|row| row.map(|x| x * c)), metric: self.metric }
    }

    pub fn has_identity_metric(&self) -> bool {
        self.metric == identity3()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..3).all(|i| (0..3).all(|j| i == j || self.r[i][j] == C64::default()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EndoLabel {
    #[serde(rename = "F_OP")]
    F,
    #[serde(rename = "R_OP")]
    R,
    #[serde(rename = "SUM")]
    Sum,
}

/// Endomorphism of Ω^{2,0}⊗𝔤 in the coordinates of [`TwoZeroSection::to_vec`].
#[derive(Clone, Debug)]
pub struct TwoZeroEndo {
    pub label: EndoLabel,
    pub matrix: DMatrix<C64>,
    pub algebra: Arc<LieAlgebraSpec>,
}

impl TwoZeroEndo {
    pub fn apply(&self, phi: &TwoZeroSection) -> TwoZeroSection {
        let v = &self.matrix * phi.to_vec();
        TwoZeroSection::from_vec(&v, self.algebra.dim).expect("matching size")
    }

    pub fn sum(&self, other: &TwoZeroEndo) -> Result<TwoZeroEndo> {
        if self.matrix.shape() != other.matrix.shape() {
            return Err(Error::AlgebraMismatch);
        }
        Ok(TwoZeroEndo { label: EndoLabel::Sum, matrix: &self.matrix + &other.matrix, algebra: self.algebra.clone() })
    }

    /// ⟨Eφ, ψ⟩.
    pub fn pairing(&self, phi: &TwoZeroSection, psi: &TwoZeroSection) -> C64 {
        self.apply(phi).inner(psi, &self.algebra)
    }
}

/// (𝓕φ)_μν = Σ_α ([φ_αν, F_μᾱ] − [φ_αμ, F_νᾱ]) in normal coordinates.
pub fn f_action_general(fc: &[[LieElement; 3]; 3], phi: &TwoZeroSection, g: &LieAlgebraSpec) -> TwoZeroSection {
    let comp = |mu: usize, nu: usize| {
        let mut acc = LieElement::zero(g.dim);
        for alpha in 0..3 {
            acc = &acc + &g.br(&phi.get(alpha, nu), &fc[mu][alpha]);
            acc = &acc - &g.br(&phi.get(alpha, mu), &fc[nu][alpha]);
        }
        acc
    };
    TwoZeroSection::new(comp(0, 1), comp(0, 2), comp(1, 2))
}

/// Hand-expanded components, valid when F₁₁̄ + F₂₂̄ + F₃₃̄ = 0:
/// (𝓕φ)₁₂ = [φ₃₂,F₁₃̄] + [φ₁₃,F₂₃̄] + [φ₂₁,F₃₃̄], and cyclically.
pub fn f_action_expanded(fc: &[[LieElement; 3]; 3], phi: &TwoZeroSection, g: &LieAlgebraSpec) -> TwoZeroSection {
    let p = |a: usize, b: usize| phi.get(a - 1, b - 1);
    let f = |a: usize, b: usize| &fc[a - 1][b - 1];
    let sum3 = |x: LieElement, y: LieElement, z: LieElement| &(&x + &y) + &z;
    let c12 = sum3(g.br(&p(3, 2), f(1, 3)), g.br(&p(1, 3), f(2, 3)), g.br(&p(2, 1), f(3, 3)));
    let c13 = sum3(g.br(&p(2, 3), f(1, 2)), g.br(&p(3, 1), f(2, 2)), g.br(&p(1, 2), f(3, 2)));
    let c23 = sum3(g.br(&p(3, 2), f(1, 1)), g.br(&p(1, 3), f(2, 1)), g.br(&p(2, 1), f(3, 1)));
    TwoZeroSection::new(c12, c13, c23)
}

fn operator_from_action(
    g: &Arc<LieAlgebraSpec>,
    label: EndoLabel,
    action: impl Fn(&TwoZeroSection) -> TwoZeroSection,
) -> TwoZeroEndo {
    let d = g.dim;
    let n = 3 * d;
    let mut matrix = DMatrix::zeros(n, n);
    for col in 0..n {
        let mut e = DVector::zeros(n);
        e[col] = C64::new(1.0, 0.0);
        let img = action(&TwoZeroSection::from_vec(&e, d).expect("size")).to_vec();
        matrix.set_column(col, &img);
    }
    TwoZeroEndo { label, matrix, algebra: g.clone() }
}

/// 𝓕 for a self-dual F; rejects F that does not classify as SD at `tol`.
pub fn build_f_operator(f: &GValuedForm, m: &ContactModel, tol: f64) -> Result<TwoZeroEndo> {
    let diag = instanton_classify(f, m, tol)?;
    if diag.class != InstantonClass::Sd && diag.norm > 0.0 {
        return Err(Error::NotSelfDual(format!(
            "classified {:?} (T_η residual {:.3e}, reality residual {:.3e})",
            diag.class, diag.eigen_residual_sd, diag.reality_residual
        )));
    }
    Ok(build_f_operator_unchecked(f))
}

/// 𝓕 from the general formula without the SD precondition.
pub fn build_f_operator_unchecked(f: &GValuedForm) -> TwoZeroEndo {
    let fc = curvature_components(f).expect("2-form");
    let g = f.algebra().clone();
    let gg = g.clone();
    operator_from_action(&g, EndoLabel::F, move |phi| f_action_general(&fc, phi, &gg))
}

/// (𝓡φ)_μν = Σ g^{αβ̄}(R_{β̄μ} φ_αν − R_{β̄ν} φ_αμ), identity on the 𝔤 factor.
pub fn build_r_operator(ric: &TransverseRicci, g: &Arc<LieAlgebraSpec>) -> TwoZeroEndo {
    let ginv = ric.inverse_metric();
    let r = ric.r;
    let d = g.dim;
    operator_from_action(g, EndoLabel::R, move |phi| {
        let comp = |mu: usize, nu: usize| {
            let mut acc = LieElement::zero(d);
            for alpha in 0..3 {
                for beta in 0..3 {
                    let w = ginv[(alpha, beta)];
                    if w == C64::default() {
                        continue;
                    }
                    acc = &acc + &phi.get(alpha, nu).scale(w * r[beta][mu]);
                    acc = &acc - &phi.get(alpha, mu).scale(w * r[beta][nu]);
                }
            }
            acc
        };
        TwoZeroSection::new(comp(0, 1), comp(0, 2), comp(1, 2))
    })
}

/// The value 2{⟨[φ₁₃,φ₂₃],Re F₁₂̄⟩ + ⟨[φ₁₂,φ₂₃],Re F₃₁̄⟩ + ⟨[φ₁₂,φ₁₃],Re F₂₃̄⟩}
/// (bilinear ⟨,⟩, real part taken). Equals Re Σ_{μ<ν} B((𝓕φ)_μν, φ_μν).
pub fn quad_form_f(phi: &TwoZeroSection, f: &GValuedForm, tol: f64) -> Result<f64> {
    let residual = f.reality_residual();
    if residual > tol * f.norm().max(f64::MIN_POSITIVE) {
        return Err(Error::NotReal(residual));
    }
    Ok(quad_form_from_components(phi, &curvature_components(f)?, f.algebra()))
}

/// [`quad_form_f`] from precomputed F_μν̄, without the reality check.
pub fn quad_form_from_components(phi: &TwoZeroSection, fc: &[[LieElement; 3]; 3], g: &LieAlgebraSpec) -> f64 {
    let p = |a: usize, b: usize| phi.get(a - 1, b - 1);
    let re_f = |a: usize, b: usize| fc[a - 1][b - 1].re();
    let total = g.bilinear(&g.br(&p(1, 3), &p(2, 3)), &re_f(1, 2))
        + g.bilinear(&g.br(&p(1, 2), &p(2, 3)), &re_f(3, 1))
        + g.bilinear(&g.br(&p(1, 2), &p(1, 3)), &re_f(2, 3));
    2.0 * total.re
}

/// Re Σ_{μ<ν} B((Eφ)_μν, φ_μν) with the bilinear extension of B.
pub fn bilinear_quad(e: &TwoZeroEndo, phi: &TwoZeroSection) -> f64 {
    let img = e.apply(phi);
    img.phi.iter().zip(&phi.phi).map(|(a, b)| e.algebra.bilinear(a, b)).sum::<C64>().re
}

/// ⟨[b₃,b₅]−[b₄,b₆],a₁⟩ − ⟨[b₁,b₅]−[b₂,b₆],a₃⟩ + ⟨[b₁,b₃]−[b₂,b₄],a₅⟩ for
/// F = Σ wᵢ⊗aᵢ and φ = Σ vᵢ⊗bᵢ (1-based names, 0-based slices).
pub fn coefficient_form(b: &[LieElement], a: &[LieElement], g: &LieAlgebraSpec) -> Result<f64> {
    if b.len() != 6 || a.len() != 8 {
        return Err(Error::Dimension(format!("expected 6 b's and 8 a's, got {} and {}", b.len(), a.len())));
    }
    let br = |i: usize, j: usize| g.br(&b[i - 1], &b[j - 1]);
    let t1 = g.bilinear(&(&br(3, 5) - &br(4, 6)), &a[0]);
    let t2 = g.bilinear(&(&br(1, 5) - &br(2, 6)), &a[2]);
    let t3 = g.bilinear(&(&br(1, 3) - &br(2, 4)), &a[4]);
    Ok((t1 - t2 + t3).re)
}

/// aᵢ with F = Σ wᵢ⊗aᵢ, and the fit residual.
pub fn w_coefficients(f: &GValuedForm) -> Result<(Vec<LieElement>, f64)> {
    let (w, _) = standard_bases();
    per_basis_coefficients(&w, f)
}

/// bᵢ with φ = Σ vᵢ⊗bᵢ, and the fit residual.
pub fn v_coefficients(f: &GValuedForm) -> Result<(Vec<LieElement>, f64)> {
    let (_, v) = standard_bases();
    per_basis_coefficients(&v, f)
}

fn per_basis_coefficients(basis: &[KForm], f: &GValuedForm) -> Result<(Vec<LieElement>, f64)> {
    let d = f.algebra().dim;
    let mut coeffs = vec![vec![C64::default(); d]; basis.len()];
    let mut residual_sq = 0.0;
    for (k, part) in f.parts().iter().enumerate() {
        let (c, r) = basis_coefficients(basis, part)?;
        residual_sq += r * r;
        for (i, ci) in c.into_iter().enumerate() {
            coeffs[i][k] = ci;
        }
    }
    Ok((coeffs.into_iter().map(LieElement::complex).collect(), residual_sq.sqrt()))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    /// ‖N − N*‖ in an orthonormal frame of the Hermitian product.
    pub self_adjoint_residual: f64,
    pub scale: f64,
    pub min: f64,
    pub max: f64,
    pub positive: bool,
    pub nonnegative: bool,
}

/// Spectrum of an endomorphism of (ℂ^{blocks} ⊗ 𝔤, I ⊗ B): with B = LLᵀ
/// and C = I ⊗ Lᵀ, the Hermitian part of C M C⁻¹ is diagonalized.
pub fn spectrum_in_metric(m: &DMatrix<C64>, l: &DMatrix<f64>, blocks: usize) -> Spectrum {
    let d = l.nrows();
    let lt = l.transpose().map(|x| C64::new(x, 0.0));
    let lt_inv = l.clone().try_inverse().expect("Cholesky factor is invertible").transpose().map(|x| C64::new(x, 0.0));
    let c = block_diag(&lt, blocks);
    let c_inv = block_diag(&lt_inv, blocks);
    debug_assert_eq!(c.nrows(), blocks * d);
    hermitian_spectrum(&(&c * m * &c_inv))
}

fn hermitian_spectrum(n: &DMatrix<C64>) -> Spectrum {
    let self_adjoint_residual = (n - n.adjoint()).norm();
    let h = (n + n.adjoint()) * C64::new(0.5, 0.0);
    let mut eigenvalues: Vec<f64> = SymmetricEigen::new(h).eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(f64::total_cmp);
    let min = eigenvalues.first().copied().unwrap_or(0.0);
    let max = eigenvalues.last().copied().unwrap_or(0.0);
    let scale = min.abs().max(max.abs());
    Spectrum {
        self_adjoint_residual,
        scale,
        min,
        max,
        positive: min > POSITIVITY_TOL * scale && scale > 0.0,
        nonnegative: min >= -POSITIVITY_TOL * scale,
        eigenvalues,
    }
}

pub(crate) fn block_diag(b: &DMatrix<C64>, blocks: usize) -> DMatrix<C64> {
    let d = b.nrows();
    let mut out = DMatrix::zeros(blocks * d, blocks * d);
    for k in 0..blocks {
        out.view_mut((k * d, k * d), (d, d)).copy_from(b);
    }
    out
}

pub fn operator_spectrum(e: &TwoZeroEndo) -> Spectrum {
    spectrum_in_metric(&e.matrix, e.algebra.inner_factor(), 3)
}

/// Weights w_PQ = g^{μᾱ}g^{νβ̄} − g^{μβ̄}g^{να} for P = (μ,ν), Q = (α,β) in [`PAIRS`].
pub fn induced_pair_weights(ric: &TransverseRicci) -> DMatrix<C64> {
    let m = ric.inverse_metric();
    DMatrix::from_fn(3, 3, |p, q| {
        let ((mu, nu), (al, be)) = (PAIRS[p], PAIRS[q]);
        m[(mu, al)] * m[(nu, be)] - m[(mu, be)] * m[(nu, al)]
    })
}

/// Hermitian product on Ω^{2,0}⊗𝔤 induced by g^T: Σ w_PQ h(φ_P, ψ_Q).
pub fn induced_inner(ric: &TransverseRicci, g: &LieAlgebraSpec, x: &TwoZeroSection, y: &TwoZeroSection) -> C64 {
    let w = induced_pair_weights(ric);
    let mut acc = C64::default();
    for (p, &(mu, nu)) in PAIRS.iter().enumerate() {
        for (q, &(al, be)) in PAIRS.iter().enumerate() {
            if w[(p, q)] != C64::default() {
                acc += w[(p, q)] * g.hermitian(&x.get(mu, nu), &y.get(al, be));
            }
        }
    }
    acc
}

/// Spectrum of M in the product ⟨x,y⟩ = y^H P x: with P = KK^H the
/// Hermitian part of K^H M K^{-H} is diagonalized.
pub fn spectrum_in_gram(m: &DMatrix<C64>, p: &DMatrix<C64>) -> Result<Spectrum> {
    let k = p.clone().cholesky().ok_or_else(|| Error::Invalid("Gram matrix is not positive definite".into()))?.l();
    let kh = k.adjoint();
    let kh_inv = kh.clone().try_inverse().ok_or_else(|| Error::Invalid("singular Gram factor".into()))?;
    let n = &kh * m * &kh_inv;
    Ok(hermitian_spectrum(&n))
}

/// 𝓡 spectrum in the g^T-induced product (identity metric gives [`operator_spectrum`]).
pub fn r_operator_spectrum(ric: &TransverseRicci, g: &Arc<LieAlgebraSpec>) -> Result<Spectrum> {
    let w = induced_pair_weights(ric).transpose();
    let b = g.inner.map(|x| C64::new(x, 0.0));
    spectrum_in_gram(&build_r_operator(ric, g).matrix, &w.kronecker(&b))
}

/// λ_min(Ric^T ∧ I): the smallest eigenvalue of 𝓡.
pub fn ricci_wedge_min(ric: &TransverseRicci, g: &Arc<LieAlgebraSpec>) -> f64 {
    match r_operator_spectrum(ric, g) {
        Ok(s) => s.min,
        Err(_) => operator_spectrum(&build_r_operator(ric, g)).min,
    }
}

/// Pointwise surrogate of the vanishing criteria for H²_B.
pub fn vanishing_report(f: &GValuedForm, ric: &TransverseRicci, m: &ContactModel, tol: f64) -> Result<CriteriaReport> {
    if !ric.has_identity_metric() {
        return Err(Error::Invalid("vanishing analysis needs a unitary frame (identity g^T)".into()));
    }
    let g = f.algebra().clone();
    let fop = build_f_operator(f, m, tol)?;
    let rop = build_r_operator(ric, &g);
    let sum = fop.sum(&rop)?;
    let sf = operator_spectrum(&fop);
    let sr = operator_spectrum(&rop);
    let ss = operator_spectrum(&sum);
    let lambda = sr.min;
    let fnorm = f.norm();

    let theorem = sf.positive && sr.positive;
    let ricci = sr.positive && sf.nonnegative;
    let sum_positive = ss.positive;
    let energy_derived = lambda > 0.0 && fnorm < lambda / SQRT_2;
    let energy_stated = lambda > 0.0 && fnorm < SQRT_2 * lambda;

    let mut rep = CriteriaReport::new("vanishing");
    rep.note("pointwise surrogate: operator positivity at one point stands in for positivity of the integrals");
    rep.num("min_eig_F", sf.min)
        .num("max_eig_F", sf.max)
        .num("min_eig_R", sr.min)
        .num("min_eig_F_plus_R", ss.min)
        .num("F_norm", fnorm)
        .num("lambda_min_ricci_wedge", lambda)
        .num("threshold_stated_sqrt2_lambda", SQRT_2 * lambda)
        .num("threshold_derived_lambda_over_sqrt2", lambda / SQRT_2)
        .value("F_positive", Value::Bool(sf.positive))
        .value("F_nonnegative", Value::Bool(sf.nonnegative))
        .value("F_indefinite", Value::Bool(sf.min < -POSITIVITY_TOL * sf.scale && sf.max > POSITIVITY_TOL * sf.scale))
        .value("R_positive", Value::Bool(sr.positive))
        .value("sum_positive", Value::Bool(sum_positive))
        .value("theorem_surrogate", Value::Bool(theorem))
        .value("ricci_surrogate", Value::Bool(ricci))
        .value("energy_bound_derived", Value::Bool(energy_derived))
        .value("energy_bound_stated", Value::Bool(energy_stated))
        .value("spectrum_F", Value::List(sf.eigenvalues.clone()))
        .value("spectrum_R", Value::List(sr.eigenvalues.clone()));
    let sa_tol = 1e-10 * (1.0 + sf.scale.max(sr.scale));
    rep.check(Check::new("self_adjoint_residual_F", sf.self_adjoint_residual, Relation::Le, sa_tol));
    rep.check(Check::new("self_adjoint_residual_R", sr.self_adjoint_residual, Relation::Le, sa_tol));
    if !rep.all_checks_pass() {
        rep.verdict = Verdict::Fail;
        return Ok(rep);
    }
    let reason = if theorem {
        "F > 0 and R > 0"
    } else if ricci {
        "R > 0 and F >= 0"
    } else if energy_derived {
        "||F|| < lambda/sqrt(2)"
    } else {
        "no sufficient condition holds"
    };
    rep.text("reason", reason);
    rep.verdict = if theorem || ricci || energy_derived { Verdict::Vanishes } else { Verdict::Inconclusive };
    Ok(rep)
}

/// A = (‖φ_μν‖), B = (‖F_μν̄‖) as 3×3 matrices.
pub fn chain_matrices(
    phi: &TwoZeroSection,
    fc: &[[LieElement; 3]; 3],
    g: &LieAlgebraSpec,
) -> (DMatrix<f64>, DMatrix<f64>) {
    let a = DMatrix::from_fn(3, 3, |i, j| g.norm(&phi.get(i, j)));
    let b = DMatrix::from_fn(3, 3, |i, j| g.norm(&fc[i][j]));
    (a, b)
}

pub fn estimate_bound_check(f: &GValuedForm, samples: usize, seed: u64) -> Result<CriteriaReport> {
    estimate_bound_check_with(f, samples, seed, Exec::default())
}

/// Samples φ = Σ vᵢ⊗bᵢ and checks |quad_form_F| ≤ √2‖F‖‖φ‖², the same for
/// the Hermitian ⟨𝓕φ,φ⟩, and Tr(A²B) ≤ ‖A‖²‖B‖.
pub fn estimate_bound_check_with(f: &GValuedForm, samples: usize, seed: u64, exec: Exec) -> Result<CriteriaReport> {
    let g = f.algebra().clone();
    let fop = build_f_operator_unchecked(f);
    let fc = curvature_components(f)?;
    let fnorm = f.norm();
    let residual = f.reality_residual();
    if residual > SD_TOL * fnorm.max(f64::MIN_POSITIVE) {
        return Err(Error::NotReal(residual));
    }
    let samples = samples.max(1);
    let rows = run_sharded(samples, seed, exec, |rng, _| {
        let (phi, b) = TwoZeroSection::random_from_v(&g, rng);
        let n2 = phi.norm_sqr(&g);
        let q = quad_form_from_components(&phi, &fc, &g);
        let h = fop.pairing(&phi, &phi).re;
        let denom = fnorm * n2;
        let ratio = |x: f64| if denom > 0.0 { x.abs() / denom } else { 0.0 };
        let (a, bm) = chain_matrices(&phi, &fc, &g);
        let tr = (&a * &a * &bm).trace();
        let chain_denom = a.norm_squared() * bm.norm();
        let chain = if chain_denom > 0.0 { tr / chain_denom } else { 0.0 };
        (ratio(q), ratio(h), chain, b)
    });
    let mut max_q = 0.0f64;
    let mut max_h = 0.0f64;
    let mut max_chain = 0.0f64;
    let mut witness: Option<Vec<LieElement>> = None;
    for (q, h, c, b) in rows {
        if q > max_q {
            max_q = q;
            if q > SQRT_2 {
                witness = Some(b);
            }
        }
        max_h = max_h.max(h);
        max_chain = max_chain.max(c);
    }
    let mut rep = CriteriaReport::new(format!("estimate[{}]", g.name));
    rep.num("samples", samples as f64).num("F_norm", fnorm).num("bound", SQRT_2);
    rep.check(Check::new("max_ratio_quad_form", max_q, Relation::Le, SQRT_2));
    rep.check(Check::new("max_ratio_hermitian", max_h, Relation::Le, SQRT_2));
    rep.check(Check::new("max_ratio_trace_chain", max_chain, Relation::Le, 1.0));
    if let Some(b) = witness {
        for (i, bi) in b.iter().enumerate() {
            rep.value(format!("witness_b{}", i + 1), Value::List(bi.coeffs.iter().map(|c| c.re).collect()));
        }
    }
    Ok(rep.settle())
}
