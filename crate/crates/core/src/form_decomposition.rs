//! T_η = ∗(η∧dη∧·) on 2-forms, its eigenspace splitting
//! Λ² = Ω²₁ ⊕ Ω²₆ ⊕ Ω²₈ ⊕ Ω²_V, bidegree splitting and the standard bases.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flat_model::{dz, dzbar, eta, form_inner, multi_indices, ContactModel, KForm, Mask, DIM};
use crate::C64;

/// Eigenvalue targets in the order (Ω²₁, Ω²₆, Ω²₈, Ω²_V).
pub const EIGEN_TARGETS: [f64; 4] = [-2.0, -1.0, 1.0, 0.0];
pub const EIGEN_MATCH_TOL: f64 = 1e-8;
pub const MIXED_REL_TOL: f64 = 1e-10;

pub fn t_eta_apply(a: &KForm, m: &ContactModel) -> Result<KForm> {
    if a.degree() != 2 {
        return Err(Error::DegreeMismatch { expected: 2, got: a.degree() });
    }
    let pre = eta().wedge(m.deta())?.wedge(a)?;
    Ok(m.hodge_star(&pre))
}

/// Matrix of T_η in the orthonormal basis {e^{ij}} (canonical order).
pub fn t_eta_matrix(m: &ContactModel) -> DMatrix<f64> {
    let basis = multi_indices(2);
    let n = basis.len();
    let mut t = DMatrix::zeros(n, n);
    for (col, &mask) in basis.iter().enumerate() {
        let img = t_eta_apply(&KForm::from_mask(mask, C64::new(1.0, 0.0)), m).expect("degree 2");
        for (row, c) in img.coords().iter().enumerate() {
            t[(row, col)] = c.re;
        }
    }
    t
}

#[derive(Clone, Debug, Serialize)]
pub struct TwoFormSplit {
    pub part_1: KForm,
    pub part_6: KForm,
    pub part_8: KForm,
    pub part_v: KForm,
}

impl TwoFormSplit {
    pub fn parts(&self) -> [&KForm; 4] {
        [&self.part_1, &self.part_6, &self.part_8, &self.part_v]
    }

    pub fn reconstruct(&self) -> KForm {
        &(&(&self.part_1 + &self.part_6) + &self.part_8) + &self.part_v
    }
}

/// Spectral projectors of T_η, built once per model.
#[derive(Clone, Debug)]
pub struct Decomposer {
    pub model: ContactModel,
    pub t: DMatrix<f64>,
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvector columns per block (Ω²₁, Ω²₆, Ω²₈, Ω²_V).
    pub bases: [DMatrix<f64>; 4],
    pub projectors: [DMatrix<f64>; 4],
}

impl Decomposer {
    pub fn new(m: &ContactModel) -> Result<Self> {
        let t = t_eta_matrix(m);
        let eig = SymmetricEigen::new(t.clone());
        let mut cols: [Vec<DVector<f64>>; 4] = Default::default();
        for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
            let slot = EIGEN_TARGETS
                .iter()
                .position(|&target| (lambda - target).abs() < EIGEN_MATCH_TOL)
                .ok_or_else(|| Error::Calibration(format!("eigenvalue {lambda} matches no target")))?;
            cols[slot].push(eig.eigenvectors.column(i).into_owned());
        }
        let expected = [1usize, 6, 8, 6];
        for (k, c) in cols.iter().enumerate() {
            if c.len() != expected[k] {
                return Err(Error::Calibration(format!(
                    "eigenvalue {} has multiplicity {}, expected {}",
                    EIGEN_TARGETS[k],
                    c.len(),
                    expected[k]
                )));
            }
        }
        let bases = cols.map(|c| DMatrix::from_columns(&c));
        let projectors = bases.clone().map(|b| &b * b.transpose());
        let mut eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        eigenvalues.sort_by(f64::total_cmp);
        Ok(Decomposer { model: m.clone(), t, eigenvalues, bases, projectors })
    }

    pub fn project(&self, a: &KForm) -> Result<TwoFormSplit> {
        if a.degree() != 2 {
            return Err(Error::DegreeMismatch { expected: 2, got: a.degree() });
        }
        let re = DVector::from_vec(a.real_coords());
        let im = DVector::from_vec(a.imag_coords());
        let apply = |p: &DMatrix<f64>| {
            let r = p * &re;
            let i = p * &im;
            let c: Vec<C64> = r.iter().zip(i.iter()).map(|(&x, &y)| C64::new(x, y)).collect();
            KForm::from_coords(2, &c)
        };
        let [p1, p6, p8, pv] = &self.projectors;
        Ok(TwoFormSplit { part_1: apply(p1), part_6: apply(p6), part_8: apply(p8), part_v: apply(pv) })
    }
}

pub fn project(a: &KForm, m: &ContactModel) -> Result<TwoFormSplit> {
    Decomposer::new(m)?.project(a)
}

/// Spectral projector by Lagrange interpolation, P_λ = Π_{μ≠λ} (T − μ)/(λ − μ).
pub fn lagrange_projector(t: &DMatrix<f64>, lambda: f64) -> DMatrix<f64> {
    let n = t.nrows();
    let mut p = DMatrix::identity(n, n);
    for &mu in &EIGEN_TARGETS {
        if mu != lambda {
            let factor = (t - DMatrix::identity(n, n) * mu) / (lambda - mu);
            p *= factor;
        }
    }
    p
}

/// Complex frame letters: bits 0..2 ↔ dz¹..dz³, bits 3..5 ↔ dz̄¹..dz̄³, bit 6 ↔ η.
pub fn to_complex_frame(a: &KForm) -> KForm {
    let f = |bit: usize| KForm::from_mask(1 << bit, C64::new(1.0, 0.0));
    let half = C64::new(0.5, 0.0);
    let ihalf = C64::new(0.0, 0.5);
    let images: [KForm; DIM] = std::array::from_fn(|i| {
        if i == 6 {
            return f(6);
        }
        let j = i / 2;
        if i % 2 == 0 {
            (&f(j) + &f(j + 3)).scale(half)
        } else {
            (&f(j) - &f(j + 3)).scale(ihalf)
        }
    });
    a.substitute(&images)
}

/// Inverse of [`to_complex_frame`].
pub fn from_complex_frame(a: &KForm) -> KForm {
    let images: [KForm; DIM] = std::array::from_fn(|i| match i {
        0..=2 => dz(i + 1),
        3..=5 => dzbar(i - 2),
        _ => eta(),
    });
    a.substitute(&images)
}

pub fn frame_bidegree(mask: Mask) -> (usize, usize, bool) {
    ((mask & 0b000_0111).count_ones() as usize, (mask & 0b011_1000).count_ones() as usize, mask & 0b100_0000 != 0)
}

/// Splitting Ω^k = ⊕ Ω^{p,q} ⊕ η∧(⊕ Ω^{p,q}).
#[derive(Clone, Debug)]
pub struct BidegreeSplit {
    pub degree: usize,
    /// Horizontal parts keyed by (p,q), p+q = degree.
    pub horizontal: BTreeMap<(usize, usize), KForm>,
    /// Parts η∧β with β of type (p,q), p+q = degree−1.
    pub vertical: BTreeMap<(usize, usize), KForm>,
}

impl BidegreeSplit {
    pub fn part(&self, p: usize, q: usize) -> &KForm {
        &self.horizontal[&(p, q)]
    }

    pub fn vertical_part(&self, p: usize, q: usize) -> &KForm {
        &self.vertical[&(p, q)]
    }

    pub fn vertical_total(&self) -> KForm {
        self.vertical.values().fold(KForm::zero(self.degree), |acc, f| &acc + f)
    }

    pub fn reconstruct(&self) -> KForm {
        let mut out = KForm::zero(self.degree);
        for f in self.horizontal.values().chain(self.vertical.values()) {
            out += f;
        }
        out
    }
}

pub fn bidegree_split(a: &KForm) -> BidegreeSplit {
    let k = a.degree();
    let slots = |total: usize| -> BTreeMap<(usize, usize), KForm> {
        (0..=3usize)
            .filter_map(|p| total.checked_sub(p).filter(|&q| q <= 3).map(|q| ((p, q), KForm::zero(k))))
            .collect()
    };
    let mut hf = slots(k);
    let mut vf = if k >= 1 { slots(k - 1) } else { BTreeMap::new() };
    for (&mask, &c) in to_complex_frame(a).terms() {
        let (p, q, v) = frame_bidegree(mask);
        let target = if v { vf.get_mut(&(p, q)) } else { hf.get_mut(&(p, q)) };
        target.expect("bidegree within range").add_term(mask, c);
    }
    let back =
        |m: BTreeMap<(usize, usize), KForm>| m.into_iter().map(|(key, f)| (key, from_complex_frame(&f))).collect();
    BidegreeSplit { degree: k, horizontal: back(hf), vertical: back(vf) }
}

/// w₁..w₈ spanning Ω²₈ and v₁..v₆ spanning Ω²₆, in the real coframe.
pub fn standard_bases() -> (Vec<KForm>, Vec<KForm>) {
    let half = C64::new(0.5, 0.0);
    let ihalf = C64::new(0.0, 0.5);
    let wz = |a: usize, b: usize| dz(a).wedge(&dzbar(b)).expect("2-form");
    let zz = |a: usize, b: usize| dz(a).wedge(&dz(b)).expect("2-form");
    let zbzb = |a: usize, b: usize| dzbar(a).wedge(&dzbar(b)).expect("2-form");
    let mut w = Vec::with_capacity(8);
    let mut v = Vec::with_capacity(6);
    for &(a, b) in &[(1, 2), (1, 3), (2, 3)] {
        w.push((&wz(a, b) - &wz(b, a)).scale(half));
        w.push((&wz(a, b) + &wz(b, a)).scale(ihalf));
        v.push((&zz(a, b) + &zbzb(a, b)).scale(half));
        v.push((&zbzb(a, b) - &zz(a, b)).scale(ihalf));
    }
    w.push((&wz(1, 1) - &wz(3, 3)).scale(ihalf));
    w.push((&wz(2, 2) - &wz(3, 3)).scale(ihalf));
    (w, v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Eigenspace {
    #[serde(rename = "IN_8")]
    In8,
    #[serde(rename = "IN_6")]
    In6,
    #[serde(rename = "IN_1")]
    In1,
    #[serde(rename = "MIXED")]
    Mixed,
}

/// Bidegree/ω/conjugation diagnostics behind [`characterize`].
#[derive(Clone, Debug, Serialize)]
pub struct Characterization {
    pub class: Eigenspace,
    pub norm: f64,
    pub norm_20: f64,
    pub norm_02: f64,
    pub norm_11_primitive: f64,
    pub norm_omega_part: f64,
    pub norm_vertical: f64,
    /// ‖conj(a^{2,0}) − a^{0,2}‖; zero exactly when a is real.
    pub conjugation_residual: f64,
    pub is_real: bool,
}

pub fn characterize_detailed(a: &KForm, m: &ContactModel) -> Result<Characterization> {
    if a.degree() != 2 {
        return Err(Error::DegreeMismatch { expected: 2, got: a.degree() });
    }
    let norm = a.norm();
    let split = bidegree_split(a);
    let omega = &m.omega;
    let p11 = split.part(1, 1);
    let lambda = form_inner(p11, omega)? / omega.norm_sqr();
    let omega_part = omega.scale(lambda);
    let primitive = p11 - &omega_part;
    let norm_vertical = split.vertical_total().norm();
    let norm_20 = split.part(2, 0).norm();
    let norm_02 = split.part(0, 2).norm();
    let conjugation_residual = (&split.part(2, 0).conj() - split.part(0, 2)).norm();
    let thr = MIXED_REL_TOL * norm;
    let present_6 = norm_20 > thr || norm_02 > thr;
    let present_1 = omega_part.norm() > thr;
    let present_8 = primitive.norm() > thr;
    let present_v = norm_vertical > thr;
    let class = match (present_1, present_6, present_8, present_v) {
        (true, false, false, false) => Eigenspace::In1,
        (false, true, false, false) => Eigenspace::In6,
        (false, false, true, false) => Eigenspace::In8,
        _ => Eigenspace::Mixed,
    };
    Ok(Characterization {
        class,
        norm,
        norm_20,
        norm_02,
        norm_11_primitive: primitive.norm(),
        norm_omega_part: omega_part.norm(),
        norm_vertical,
        conjugation_residual,
        is_real: (a - &a.conj()).norm() <= thr,
    })
}

/// Eigenspace membership from bidegree, ⟨·,ω⟩ and conjugation tests.
/// Zero forms and forms with a vertical part are MIXED.
pub fn characterize(a: &KForm, m: &ContactModel) -> Result<Eigenspace> {
    Ok(characterize_detailed(a, m)?.class)
}

/// Eigenspace membership read off the projector path, for cross-validation.
pub fn membership_from_split(split: &TwoFormSplit, norm: f64) -> Eigenspace {
    let thr = MIXED_REL_TOL * norm;
    let present: Vec<bool> = split.parts().iter().map(|p| p.norm() > thr).collect();
    match present.as_slice() {
        [true, false, false, false] => Eigenspace::In1,
        [false, true, false, false] => Eigenspace::In6,
        [false, false, true, false] => Eigenspace::In8,
        _ => Eigenspace::Mixed,
    }
}

/// Coefficients cᵢ with a = Σ cᵢ basisᵢ (least squares through the Gram
/// matrix), plus the residual ‖a − Σ cᵢ basisᵢ‖.
pub fn basis_coefficients(basis: &[KForm], a: &KForm) -> Result<(Vec<C64>, f64)> {
    let n = basis.len();
    let gram = DMatrix::from_fn(n, n, |i, j| form_inner(&basis[j], &basis[i]).unwrap_or_default());
    let rhs = DVector::from_iterator(n, basis.iter().map(|b| form_inner(a, b).unwrap_or_default()));
    for b in basis {
        if b.degree() != a.degree() {
            return Err(Error::DegreeMismatch { expected: a.degree(), got: b.degree() });
        }
    }
    let c = gram.lu().solve(&rhs).ok_or_else(|| Error::Invalid("basis forms are linearly dependent".into()))?;
    let mut rebuilt = KForm::zero(a.degree());
    for (b, &ci) in basis.iter().zip(c.iter()) {
        rebuilt += &b.scale(ci);
    }
    Ok((c.iter().copied().collect(), (a - &rebuilt).norm()))
}
