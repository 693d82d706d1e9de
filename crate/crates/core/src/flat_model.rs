//! Flat pointwise model of a Sasakian 7-manifold.
//!
//! The tangent space is ℝ⁷ with orthonormal coframe e¹..e⁶ spanning the
//! horizontal dual H* and η = e⁷. Forms are stored sparsely by multi-index,
//! encoded as a 7-bit mask (bit i ↔ e^{i+1}).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::C64;

/// Multi-index as a bitmask over {1..7}.
pub type Mask = u8;

pub const DIM: usize = 7;
pub const REEB_BIT: Mask = 1 << 6;
pub const FULL_MASK: Mask = 0x7f;

/// Sorted index list of a mask, 1-based.
pub fn mask_indices(mask: Mask) -> Vec<usize> {
    (0..DIM).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect()
}

/// Sign of the permutation sorting the concatenation (a, b) of two disjoint
/// increasing multi-indices.
pub fn shuffle_sign(a: Mask, b: Mask) -> f64 {
    debug_assert_eq!(a & b, 0);
    let mut inversions = 0;
    for j in 0..DIM {
        if b & (1 << j) != 0 {
            inversions += (a >> (j + 1)).count_ones();
        }
    }
    if inversions % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

struct IndexTable {
    by_degree: Vec<Vec<Mask>>,
    position: [usize; 128],
}

fn table() -> &'static IndexTable {
    static TABLE: OnceLock<IndexTable> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut by_degree: Vec<Vec<Mask>> = vec![Vec::new(); DIM + 1];
        for m in 0u8..128 {
            by_degree[m.count_ones() as usize].push(m);
        }
        for list in by_degree.iter_mut() {
            list.sort_by_key(|&m| mask_indices(m));
        }
        let mut position = [0usize; 128];
        for list in &by_degree {
            for (p, &m) in list.iter().enumerate() {
                position[m as usize] = p;
            }
        }
        IndexTable { by_degree, position }
    })
}

/// Canonical (lexicographic) ordering of the degree-k multi-indices.
pub fn multi_indices(k: usize) -> &'static [Mask] {
    &table().by_degree[k]
}

/// Position of a mask within [`multi_indices`] of its degree.
pub fn index_position(mask: Mask) -> usize {
    table().position[mask as usize]
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Complex exterior form on ℝ⁷ in the orthonormal coframe.
#[derive(Clone, PartialEq, Serialize)]
pub struct KForm {
    degree: usize,
    terms: BTreeMap<Mask, C64>,
}

impl fmt::Debug for KForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "KForm<{}>{{", self.degree)?;
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            let idx: String = mask_indices(*m).iter().map(|i| i.to_string()).collect();
            write!(f, "e{}: {}{:+}i", idx, c.re, c.im)?;
        }
        write!(f, "}}")
    }
}

impl KForm {
    pub fn zero(degree: usize) -> Self {
        assert!(degree <= DIM, "degree {degree} exceeds 7");
        KForm { degree, terms: BTreeMap::new() }
    }

    /// The constant function 1.
    pub fn one() -> Self {
        KForm::scalar(C64::new(1.0, 0.0))
    }

    pub fn scalar(c: C64) -> Self {
        let mut f = KForm::zero(0);
        f.add_term(0, c);
        f
    }

    /// e^{i₁}∧…∧e^{i_k} for 1-based indices in any order; repeated indices give 0.
    pub fn basis(indices: &[usize]) -> Self {
        let mut out = KForm::one();
        for &i in indices {
            assert!((1..=DIM).contains(&i), "index {i} out of range 1..7");
            out = out.wedge(&KForm::e(i)).expect("basis degree within 7");
        }
        out
    }

    /// The coframe 1-form e^i (1-based).
    pub fn e(i: usize) -> Self {
        assert!((1..=DIM).contains(&i), "index {i} out of range 1..7");
        let mut f = KForm::zero(1);
        f.add_term(1 << (i - 1), C64::new(1.0, 0.0));
        f
    }

    pub fn from_mask(mask: Mask, c: C64) -> Self {
        let mut f = KForm::zero(mask.count_ones() as usize);
        f.add_term(mask, c);
        f
    }

    pub fn from_terms(degree: usize, terms: impl IntoIterator<Item = (Mask, C64)>) -> Self {
        let mut f = KForm::zero(degree);
        for (m, c) in terms {
            assert_eq!(m.count_ones() as usize, degree, "mask degree mismatch");
            f.add_term(m, c);
        }
        f
    }

    /// Builds a form from coordinates in the canonical basis order.
    pub fn from_coords(degree: usize, coords: &[C64]) -> Self {
        let idx = multi_indices(degree);
        assert_eq!(coords.len(), idx.len(), "coordinate length mismatch");
        KForm::from_terms(degree, idx.iter().copied().zip(coords.iter().copied()))
    }

    pub fn from_real_coords(degree: usize, coords: &[f64]) -> Self {
        let c: Vec<C64> = coords.iter().map(|&x| C64::new(x, 0.0)).collect();
        KForm::from_coords(degree, &c)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Mask, C64> {
        &self.terms
    }

    pub fn coeff(&self, mask: Mask) -> C64 {
        self.terms.get(&mask).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, mask: Mask, c: C64) {
        debug_assert_eq!(mask.count_ones() as usize, self.degree);
        if c == C64::default() {
            return;
        }
        let entry = self.terms.entry(mask).or_default();
        *entry += c;
        if *entry == C64::default() {
            self.terms.remove(&mask);
        }
    }

    pub fn coords(&self) -> Vec<C64> {
        multi_indices(self.degree).iter().map(|&m| self.coeff(m)).collect()
    }

    pub fn real_coords(&self) -> Vec<f64> {
        self.coords().iter().map(|c| c.re).collect()
    }

    pub fn imag_coords(&self) -> Vec<f64> {
        self.coords().iter().map(|c| c.im).collect()
    }

    pub fn wedge(&self, other: &KForm) -> Result<KForm> {
        if self.degree + other.degree > DIM {
            return Err(Error::DegreeOverflow(self.degree, other.degree));
        }
        let mut out = KForm::zero(self.degree + other.degree);
        for (&a, &ca) in &self.terms {
            for (&b, &cb) in &other.terms {
                if a & b == 0 {
                    out.add_term(a | b, ca * cb * shuffle_sign(a, b));
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: C64) -> KForm {
        KForm::from_terms(self.degree, self.terms.iter().map(|(&m, &v)| (m, v * c)))
    }

    pub fn scale_re(&self, x: f64) -> KForm {
        self.scale(C64::new(x, 0.0))
    }

    pub fn conj(&self) -> KForm {
        KForm::from_terms(self.degree, self.terms.iter().map(|(&m, &v)| (m, v.conj())))
    }

    pub fn re(&self) -> KForm {
        KForm::from_terms(self.degree, self.terms.iter().map(|(&m, &v)| (m, C64::new(v.re, 0.0))))
    }

    pub fn im(&self) -> KForm {
        KForm::from_terms(self.degree, self.terms.iter().map(|(&m, &v)| (m, C64::new(v.im, 0.0))))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Drops terms below `eps` in modulus.
    pub fn pruned(&self, eps: f64) -> KForm {
        KForm::from_terms(self.degree, self.terms.iter().filter(|(_, c)| c.norm() > eps).map(|(&m, &c)| (m, c)))
    }

    /// i_ξ with ξ the Reeb field dual to e⁷.
    pub fn contract_reeb(&self) -> KForm {
        if self.degree == 0 {
            return KForm::zero(0);
        }
        let mut out = KForm::zero(self.degree - 1);
        for (&m, &c) in &self.terms {
            if m & REEB_BIT != 0 {
                // e⁷ is the last factor, preceded by degree-1 others.
                let sign = if (self.degree - 1).is_multiple_of(2) { 1.0 } else { -1.0 };
                out.add_term(m & !REEB_BIT, c * sign);
            }
        }
        out
    }

    pub fn is_transverse(&self, tol: f64) -> bool {
        self.contract_reeb().norm() <= tol
    }

    /// Substitutes each coframe element e^{i+1} by the 1-form `images[i]`.
    pub fn substitute(&self, images: &[KForm; DIM]) -> KForm {
        let mut out = KForm::zero(self.degree);
        for (&m, &c) in &self.terms {
            let mut prod = KForm::scalar(c);
            for i in 0..DIM {
                if m & (1 << i) != 0 {
                    prod = prod.wedge(&images[i]).expect("substitution preserves degree");
                }
            }
            out += &prod;
        }
        out
    }
}

impl AddAssign<&KForm> for KForm {
    fn add_assign(&mut self, rhs: &KForm) {
        assert_eq!(self.degree, rhs.degree, "adding forms of different degree");
        for (&m, &c) in &rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl Add for &KForm {
    type Output = KForm;
    fn add(self, rhs: &KForm) -> KForm {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for KForm {
    type Output = KForm;
    fn add(mut self, rhs: KForm) -> KForm {
        self += &rhs;
        self
    }
}

impl Sub for &KForm {
    type Output = KForm;
    fn sub(self, rhs: &KForm) -> KForm {
        self + &(-rhs)
    }
}

impl Sub for KForm {
    type Output = KForm;
    fn sub(self, rhs: KForm) -> KForm {
        &self - &rhs
    }
}

impl Neg for &KForm {
    type Output = KForm;
    fn neg(self) -> KForm {
        self.scale_re(-1.0)
    }
}

impl Neg for KForm {
    type Output = KForm;
    fn neg(self) -> KForm {
        -&self
    }
}

impl Mul<C64> for &KForm {
    type Output = KForm;
    fn mul(self, c: C64) -> KForm {
        self.scale(c)
    }
}

impl Mul<f64> for &KForm {
    type Output = KForm;
    fn mul(self, x: f64) -> KForm {
        self.scale_re(x)
    }
}

impl Mul<C64> for KForm {
    type Output = KForm;
    fn mul(self, c: C64) -> KForm {
        self.scale(c)
    }
}

impl Mul<f64> for KForm {
    type Output = KForm;
    fn mul(self, x: f64) -> KForm {
        self.scale_re(x)
    }
}

/// Hermitian pairing Σ a_I conj(b_I) of equal-degree forms.
pub fn form_inner(a: &KForm, b: &KForm) -> Result<C64> {
    if a.degree != b.degree {
        return Err(Error::DegreeMismatch { expected: a.degree, got: b.degree });
    }
    Ok(a.terms.iter().map(|(m, &c)| c * b.coeff(*m).conj()).sum())
}

/// Complex coordinate 1-form dz^j = e^{2j−1} − i e^{2j}, j ∈ {1,2,3}.
pub fn dz(j: usize) -> KForm {
    assert!((1..=3).contains(&j));
    &KForm::e(2 * j - 1) + &KForm::e(2 * j).scale(C64::new(0.0, -1.0))
}

/// dz̄^j = e^{2j−1} + i e^{2j}.
pub fn dzbar(j: usize) -> KForm {
    dz(j).conj()
}

/// η = e⁷.
pub fn eta() -> KForm {
    KForm::e(7)
}

/// e¹²+e³⁴+e⁵⁶.
pub fn omega_std() -> KForm {
    &(&KForm::basis(&[1, 2]) + &KForm::basis(&[3, 4])) + &KForm::basis(&[5, 6])
}

/// Sign/scale conventions that distinguish the candidate models.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Convention {
    pub orientation_sign: i8,
    pub deta_scale: f64,
    pub phi_sign: i8,
}

/// Calibrated single-tangent-space model.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ContactModel {
    pub metric: [[f64; DIM]; DIM],
    pub eta: [f64; DIM],
    /// `phi[i][j]` = e^{i+1}(Φ e_{j+1}).
    pub phi: [[f64; DIM]; DIM],
    /// ω := dη at the model point.
    pub omega: KForm,
    pub orientation_sign: i8,
    pub deta_scale: f64,
    pub phi_sign: i8,
}

impl ContactModel {
    /// Model for a given convention: vol = s·e¹···⁷, dη = κ·ω_std,
    /// Φe_{2j−1} = σ e_{2j}, Φe_{2j} = −σ e_{2j−1}.
    pub fn with_convention(c: Convention) -> Self {
        let mut metric = [[0.0; DIM]; DIM];
        for (i, row) in metric.iter_mut().enumerate() {
            row[i] = 1.0;
        }
        let mut eta = [0.0; DIM];
        eta[6] = 1.0;
        let sigma = c.phi_sign as f64;
        let mut phi = [[0.0; DIM]; DIM];
        for j in 0..3 {
            phi[2 * j + 1][2 * j] = sigma;
            phi[2 * j][2 * j + 1] = -sigma;
        }
        ContactModel {
            metric,
            eta,
            phi,
            omega: omega_std().scale_re(c.deta_scale),
            orientation_sign: c.orientation_sign,
            deta_scale: c.deta_scale,
            phi_sign: c.phi_sign,
        }
    }

    pub fn convention(&self) -> Convention {
        Convention { orientation_sign: self.orientation_sign, deta_scale: self.deta_scale, phi_sign: self.phi_sign }
    }

    /// dη (identical to ω in this model).
    pub fn deta(&self) -> &KForm {
        &self.omega
    }

    pub fn volume(&self) -> KForm {
        KForm::from_mask(FULL_MASK, C64::new(self.orientation_sign as f64, 0.0))
    }

    pub fn hodge_star(&self, a: &KForm) -> KForm {
        let s = self.orientation_sign as f64;
        let mut out = KForm::zero(DIM - a.degree());
        for (&m, &c) in a.terms() {
            let comp = FULL_MASK & !m;
            out.add_term(comp, c * (s * shuffle_sign(m, comp)));
        }
        out
    }

    /// ∗_T α = (−1)^k i_ξ(∗α) on transverse k-forms.
    pub fn transverse_star(&self, a: &KForm) -> Result<KForm> {
        let leak = a.contract_reeb().norm();
        if leak > 0.0 {
            return Err(Error::NotTransverse(leak));
        }
        let sign = if a.degree().is_multiple_of(2) { 1.0 } else { -1.0 };
        Ok(self.hodge_star(a).contract_reeb().scale_re(sign))
    }

    pub fn form_inner(&self, a: &KForm, b: &KForm) -> Result<C64> {
        form_inner(a, b)
    }

    /// Pullback Φ*α = α∘Φ of a 1-form.
    pub fn phi_pullback(&self, a: &KForm) -> Result<KForm> {
        if a.degree() != 1 {
            return Err(Error::DegreeMismatch { expected: 1, got: a.degree() });
        }
        let mut out = KForm::zero(1);
        for (&m, &c) in a.terms() {
            let i = m.trailing_zeros() as usize;
            for j in 0..DIM {
                let x = self.phi[i][j];
                if x != 0.0 {
                    out.add_term(1 << j, c * x);
                }
            }
        }
        Ok(out)
    }

    /// dη(X, Y) for coordinate vectors.
    pub fn deta_eval(&self, x: &[f64; DIM], y: &[f64; DIM]) -> f64 {
        let mut acc = 0.0;
        for (&m, &c) in self.omega.terms() {
            let idx = mask_indices(m);
            let (a, b) = (idx[0] - 1, idx[1] - 1);
            acc += c.re * (x[a] * y[b] - x[b] * y[a]);
        }
        acc
    }

    pub fn phi_apply(&self, x: &[f64; DIM]) -> [f64; DIM] {
        let mut out = [0.0; DIM];
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..DIM).map(|j| self.phi[i][j] * x[j]).sum();
        }
        out
    }

    /// g^T(e_a, e_b) = ½·dη(e_a, Φe_b) on H, a,b ∈ 1..6.
    pub fn transverse_metric(&self) -> [[f64; 6]; 6] {
        let mut out = [[0.0; 6]; 6];
        for (a, row) in out.iter_mut().enumerate() {
            for (b, v) in row.iter_mut().enumerate() {
                let mut x = [0.0; DIM];
                let mut y = [0.0; DIM];
                x[a] = 1.0;
                y[b] = 1.0;
                *v = 0.5 * self.deta_eval(&x, &self.phi_apply(&y));
            }
        }
        out
    }

    /// Ratio c with g|_H = c·g^T, or None when g^T is not a multiple of g|_H.
    pub fn metric_relation_factor(&self) -> Option<f64> {
        let gt = self.transverse_metric();
        let c = gt[0][0];
        if c == 0.0 {
            return None;
        }
        for (a, row) in gt.iter().enumerate() {
            for (b, &v) in row.iter().enumerate() {
                let expect = if a == b { c } else { 0.0 };
                if (v - expect).abs() > 1e-14 {
                    return None;
                }
            }
        }
        Some(self.metric[0][0] / c)
    }

    /// Residuals of the structural invariants; all zero for a valid model.
    pub fn invariant_residuals(&self) -> ModelResiduals {
        let xi = [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0];
        let eta_xi = (self.eta.iter().zip(xi.iter()).map(|(a, b)| a * b).sum::<f64>() - 1.0).abs();
        let mut phi_sq = 0.0f64;
        for j in 0..6 {
            let mut x = [0.0; DIM];
            x[j] = 1.0;
            let y = self.phi_apply(&self.phi_apply(&x));
            for (i, &v) in y.iter().enumerate() {
                let expect = if i == j { -1.0 } else { 0.0 };
                phi_sq = phi_sq.max((v - expect).abs());
            }
        }
        let phi_xi = self.phi_apply(&xi).iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let gt = self.transverse_metric();
        let gt_min_eig = min_eigenvalue_6(&gt);
        let split = crate::form_decomposition::bidegree_split(&self.omega);
        let omega_non_11 = (&self.omega - split.part(1, 1)).norm();
        ModelResiduals { eta_xi, phi_squared: phi_sq, phi_xi, transverse_metric_min_eig: gt_min_eig, omega_non_11 }
    }

    /// Sign s_k with ∗_T∗_T = s_k on transverse k-forms, checked on the basis.
    pub fn transverse_star_square_sign(&self, k: usize) -> Option<f64> {
        let mut sign: Option<f64> = None;
        for &m in multi_indices(k) {
            if m & REEB_BIT != 0 {
                continue;
            }
            let a = KForm::from_mask(m, C64::new(1.0, 0.0));
            let twice = self.transverse_star(&self.transverse_star(&a).ok()?).ok()?;
            let s = twice.coeff(m).re;
            if (twice.norm() - 1.0).abs() > 1e-15 || s.abs() != 1.0 {
                return None;
            }
            match sign {
                None => sign = Some(s),
                Some(prev) if prev != s => return None,
                _ => {}
            }
        }
        sign
    }
}

fn min_eigenvalue_6(m: &[[f64; 6]; 6]) -> f64 {
    let mat = nalgebra::DMatrix::from_fn(6, 6, |i, j| m[i][j]);
    nalgebra::SymmetricEigen::new(mat).eigenvalues.iter().fold(f64::INFINITY, |a, &b| a.min(b))
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelResiduals {
    pub eta_xi: f64,
    pub phi_squared: f64,
    pub phi_xi: f64,
    pub transverse_metric_min_eig: f64,
    pub omega_non_11: f64,
}

impl ModelResiduals {
    pub fn ok(&self) -> bool {
        self.eta_xi == 0.0
            && self.phi_squared == 0.0
            && self.phi_xi == 0.0
            && self.transverse_metric_min_eig > 0.0
            && self.omega_non_11 < 1e-14
    }
}

/// Outcome of testing one candidate convention.
#[derive(Clone, Debug, Serialize)]
pub struct CandidateOutcome {
    pub convention: Convention,
    pub spectrum_ok: bool,
    pub transverse_metric_positive: bool,
    pub w_in_plus_one: bool,
    pub v_in_minus_one: bool,
    pub dz_holomorphic: bool,
    pub eigenvalues: Vec<f64>,
}

impl CandidateOutcome {
    pub fn accepted(&self) -> bool {
        self.spectrum_ok
            && self.transverse_metric_positive
            && self.w_in_plus_one
            && self.v_in_minus_one
            && self.dz_holomorphic
    }
}

/// Required (eigenvalue, multiplicity) pairs of T_η on Λ²ℝ⁷.
pub const T_ETA_SPECTRUM: [(f64, usize); 4] = [(-2.0, 1), (-1.0, 6), (0.0, 6), (1.0, 8)];

const ORIENTATIONS: [i8; 2] = [1, -1];
const DETA_SCALES: [f64; 6] = [-2.0, -1.0, -0.5, 0.5, 1.0, 2.0];
const PHI_SIGNS: [i8; 2] = [1, -1];

pub fn candidate_conventions() -> Vec<Convention> {
    let mut out = Vec::new();
    for &orientation_sign in &ORIENTATIONS {
        for &deta_scale in &DETA_SCALES {
            for &phi_sign in &PHI_SIGNS {
                out.push(Convention { orientation_sign, deta_scale, phi_sign });
            }
        }
    }
    out
}

pub fn evaluate_candidate(c: Convention) -> CandidateOutcome {
    use crate::form_decomposition::{standard_bases, t_eta_apply, t_eta_matrix};
    let m = ContactModel::with_convention(c);
    let t = t_eta_matrix(&m);
    let mut eigenvalues: Vec<f64> = nalgebra::SymmetricEigen::new(t).eigenvalues.iter().copied().collect();
    eigenvalues.sort_by(f64::total_cmp);
    let mut expected = Vec::new();
    for &(v, mult) in &T_ETA_SPECTRUM {
        expected.extend(std::iter::repeat_n(v, mult));
    }
    let spectrum_ok = eigenvalues.iter().zip(&expected).all(|(a, b)| (a - b).abs() < 1e-10);

    let gt = m.transverse_metric();
    let transverse_metric_positive = min_eigenvalue_6(&gt) > 0.0;

    let (w, v) = standard_bases();
    let eig_residual = |f: &KForm, lambda: f64| {
        let tf = t_eta_apply(f, &m).expect("degree 2");
        (&tf - &f.scale_re(lambda)).norm()
    };
    let w_in_plus_one = w.iter().all(|f| eig_residual(f, 1.0) < 1e-12);
    let v_in_minus_one = v.iter().all(|f| eig_residual(f, -1.0) < 1e-12);

    // dz^j = e^{2j−1} − iΦ*e^{2j−1}
    let dz_holomorphic = (1..=3).all(|j| {
        let e = KForm::e(2 * j - 1);
        let built = &e + &m.phi_pullback(&e).expect("1-form").scale(C64::new(0.0, -1.0));
        (&built - &dz(j)).norm() == 0.0
    });

    CandidateOutcome {
        convention: c,
        spectrum_ok,
        transverse_metric_positive,
        w_in_plus_one,
        v_in_minus_one,
        dz_holomorphic,
        eigenvalues,
    }
}

/// Searches the candidate conventions for the one matching the required
/// T_η spectrum, eigenbases and positivity. Exactly one must survive.
pub fn calibrate_model() -> Result<ContactModel> {
    static CALIBRATED: OnceLock<std::result::Result<ContactModel, Error>> = OnceLock::new();
    CALIBRATED
        .get_or_init(|| {
            let accepted: Vec<Convention> = candidate_conventions()
                .into_iter()
                .map(evaluate_candidate)
                .filter(|o| o.accepted())
                .map(|o| o.convention)
                .collect();
            match accepted.as_slice() {
                [c] => {
                    let m = ContactModel::with_convention(*c);
                    let r = m.invariant_residuals();
                    if r.ok() {
                        Ok(m)
                    } else {
                        Err(Error::Calibration(format!("accepted convention violates invariants: {r:?}")))
                    }
                }
                [] => Err(Error::Calibration("no candidate convention satisfies the constraints".into())),
                many => Err(Error::Calibration(format!("{} candidate conventions survive", many.len()))),
            }
        })
        .clone()
}

/// Calibrated model; panics only if calibration itself is broken.
pub fn model() -> ContactModel {
    calibrate_model().expect("calibration of the flat model")
}
