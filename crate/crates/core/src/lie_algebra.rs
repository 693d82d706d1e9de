//! Compact Lie algebras given by basis matrices: structure constants,
//! Killing form, Ad-invariant inner products and the commutator estimate.

use std::ops::{Add, Neg, Sub};

use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::report::{Check, CriteriaReport, Relation, Value};
use crate::sampling::{normal_vec, run_sharded, Exec};
use crate::C64;

/// Coefficients in the declared basis; complex for 𝔤⊗ℂ.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LieElement {
    pub coeffs: Vec<C64>,
}

impl LieElement {
    pub fn zero(dim: usize) -> Self {
        LieElement { coeffs: vec![C64::default(); dim] }
    }

    pub fn real(xs: &[f64]) -> Self {
        LieElement { coeffs: xs.iter().map(|&x| C64::new(x, 0.0)).collect() }
    }

    pub fn complex(xs: Vec<C64>) -> Self {
        LieElement { coeffs: xs }
    }

    /// The i-th basis element (0-based).
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut e = LieElement::zero(dim);
        e.coeffs[i] = C64::new(1.0, 0.0);
        e
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn scale(&self, c: C64) -> Self {
        LieElement { coeffs: self.coeffs.iter().map(|&x| x * c).collect() }
    }

    pub fn scale_re(&self, x: f64) -> Self {
        self.scale(C64::new(x, 0.0))
    }

    pub fn conj(&self) -> Self {
        LieElement { coeffs: self.coeffs.iter().map(|x| x.conj()).collect() }
    }

    pub fn re(&self) -> Self {
        LieElement { coeffs: self.coeffs.iter().map(|x| C64::new(x.re, 0.0)).collect() }
    }

    pub fn im(&self) -> Self {
        LieElement { coeffs: self.coeffs.iter().map(|x| C64::new(x.im, 0.0)).collect() }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |m, x| m.max(x.norm()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|x| *x == C64::default())
    }

    pub fn imag_max(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |m, x| m.max(x.im.abs()))
    }
}

impl Add for &LieElement {
    type Output = LieElement;
    fn add(self, rhs: &LieElement) -> LieElement {
        assert_eq!(self.dim(), rhs.dim(), "Lie element dimension mismatch");
        LieElement { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &LieElement {
    type Output = LieElement;
    fn sub(self, rhs: &LieElement) -> LieElement {
        assert_eq!(self.dim(), rhs.dim(), "Lie element dimension mismatch");
        LieElement { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &LieElement {
    type Output = LieElement;
    fn neg(self) -> LieElement {
        self.scale_re(-1.0)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgebraResiduals {
    pub antisymmetry: f64,
    pub jacobi: f64,
    pub ad_invariance: f64,
    pub inner_asymmetry: f64,
    pub inner_min_eigenvalue: f64,
}

impl AlgebraResiduals {
    pub fn ok(&self, tol: f64) -> bool {
        self.antisymmetry <= tol
            && self.jacobi <= tol
            && self.ad_invariance <= tol
            && self.inner_asymmetry <= tol
            && self.inner_min_eigenvalue > 0.0
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LieAlgebraSpec {
    pub name: String,
    pub dim: usize,
    #[serde(skip)]
    pub basis_matrices: Vec<DMatrix<C64>>,
    /// `structure_constants[(i*dim + j)*dim + k]` = c_ijk with [eᵢ,eⱼ] = Σ c_ijk e_k.
    pub structure_constants: Vec<f64>,
    #[serde(skip)]
    pub inner: DMatrix<f64>,
    #[serde(skip)]
    inner_factor: DMatrix<f64>,
}

impl PartialEq for LieAlgebraSpec {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.structure_constants == other.structure_constants && self.inner == other.inner
    }
}

const VALIDATION_TOL: f64 = 1e-10;

impl LieAlgebraSpec {
    /// Builds the algebra spanned by `mats`; structure constants come from
    /// commutators and `inner` defaults to the negative Killing form.
    pub fn from_matrices(name: &str, mats: Vec<DMatrix<C64>>, inner: Option<DMatrix<f64>>) -> Result<Self> {
        let dim = mats.len();
        if dim == 0 {
            return Err(Error::InvalidAlgebra("empty basis".into()));
        }
        let n = mats[0].nrows();
        if mats.iter().any(|m| m.nrows() != n || m.ncols() != n) {
            return Err(Error::InvalidAlgebra("basis matrices must be square of equal size".into()));
        }
        let solver = MatrixDecomposer::new(&mats)?;
        let mut c = vec![0.0; dim * dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                let comm = &mats[i] * &mats[j] - &mats[j] * &mats[i];
                let (coeffs, residual) = solver.decompose(&comm);
                if residual > 1e-9 * (1.0 + comm.norm()) {
                    return Err(Error::InvalidAlgebra(format!(
                        "span is not closed under commutator: [e{},e{}] leaves the span (residual {residual:.2e})",
                        i + 1,
                        j + 1
                    )));
                }
                for (k, x) in coeffs.iter().enumerate() {
                    if x.im.abs() > 1e-9 {
                        return Err(Error::InvalidAlgebra("structure constants are not real".into()));
                    }
                    c[(i * dim + j) * dim + k] = x.re;
                }
            }
        }
        let spec = Self::assemble(name, dim, mats, c, inner)?;
        spec.check_valid()?;
        Ok(spec)
    }

    /// Abstract algebra from structure constants; `inner` is required when
    /// the Killing form is degenerate.
    pub fn from_structure_constants(name: &str, dim: usize, c: Vec<f64>, inner: Option<DMatrix<f64>>) -> Result<Self> {
        if c.len() != dim * dim * dim {
            return Err(Error::InvalidAlgebra(format!(
                "expected {} structure constants, got {}",
                dim * dim * dim,
                c.len()
            )));
        }
        let spec = Self::assemble(name, dim, Vec::new(), c, inner)?;
        spec.check_valid()?;
        Ok(spec)
    }

    fn assemble(
        name: &str,
        dim: usize,
        basis_matrices: Vec<DMatrix<C64>>,
        structure_constants: Vec<f64>,
        inner: Option<DMatrix<f64>>,
    ) -> Result<Self> {
        let mut spec = LieAlgebraSpec {
            name: name.to_owned(),
            dim,
            basis_matrices,
            structure_constants,
            inner: DMatrix::zeros(dim, dim),
            inner_factor: DMatrix::zeros(dim, dim),
        };
        let inner = match inner {
            Some(b) => {
                if b.nrows() != dim || b.ncols() != dim {
                    return Err(Error::InvalidAlgebra("inner product has wrong shape".into()));
                }
                b
            }
            None => -spec.killing_matrix(),
        };
        let factor = Cholesky::new(inner.clone())
            .ok_or_else(|| {
                Error::InvalidAlgebra(
                    "inner product is not positive definite (supply an Ad-invariant inner product)".into(),
                )
            })?
            .l();
        spec.inner = inner;
        spec.inner_factor = factor;
        Ok(spec)
    }

    fn check_valid(&self) -> Result<()> {
        let r = self.residuals();
        if r.ok(VALIDATION_TOL * (1.0 + self.scale())) {
            Ok(())
        } else {
            Err(Error::InvalidAlgebra(format!("structural check failed: {r:?}")))
        }
    }

    fn scale(&self) -> f64 {
        self.structure_constants.iter().fold(0.0f64, |m, x| m.max(x.abs())).powi(2)
            + self.inner.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    pub fn c(&self, i: usize, j: usize, k: usize) -> f64 {
        self.structure_constants[(i * self.dim + j) * self.dim + k]
    }

    /// Lower-triangular L with inner = L Lᵀ.
    pub fn inner_factor(&self) -> &DMatrix<f64> {
        &self.inner_factor
    }

    pub fn killing_matrix(&self) -> DMatrix<f64> {
        let d = self.dim;
        DMatrix::from_fn(d, d, |i, j| {
            let mut acc = 0.0;
            for k in 0..d {
                for l in 0..d {
                    acc += self.c(i, l, k) * self.c(j, k, l);
                }
            }
            acc
        })
    }

    pub fn residuals(&self) -> AlgebraResiduals {
        let d = self.dim;
        let mut antisymmetry = 0.0f64;
        let mut jacobi = 0.0f64;
        let mut ad_invariance = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    antisymmetry = antisymmetry.max((self.c(i, j, k) + self.c(j, i, k)).abs());
                }
            }
        }
        for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    // [a,[b,c]] + [b,[c,a]] + [c,[a,b]]
                    for out in 0..d {
                        let mut acc = 0.0;
                        for m in 0..d {
                            acc += self.c(b, c, m) * self.c(a, m, out)
                                + self.c(c, a, m) * self.c(b, m, out)
                                + self.c(a, b, m) * self.c(c, m, out);
                        }
                        jacobi = jacobi.max(acc.abs());
                    }
                    // B([a,b],c) + B(b,[a,c])
                    let mut acc = 0.0;
                    for m in 0..d {
                        acc += self.c(a, b, m) * self.inner[(m, c)] + self.c(a, c, m) * self.inner[(b, m)];
                    }
                    ad_invariance = ad_invariance.max(acc.abs());
                }
            }
        }
        let inner_asymmetry = (&self.inner - self.inner.transpose()).amax();
        let inner_min_eigenvalue = SymmetricEigen::new(self.inner.clone()).eigenvalues.min();
        AlgebraResiduals { antisymmetry, jacobi, ad_invariance, inner_asymmetry, inner_min_eigenvalue }
    }

    fn check_dim(&self, a: &LieElement) -> Result<()> {
        if a.dim() != self.dim {
            return Err(Error::Dimension(format!(
                "element of length {} in algebra of dimension {}",
                a.dim(),
                self.dim
            )));
        }
        Ok(())
    }

    pub fn bracket(&self, a: &LieElement, b: &LieElement) -> Result<LieElement> {
        self.check_dim(a)?;
        self.check_dim(b)?;
        Ok(self.br(a, b))
    }

    /// Structure-constant bracket; panics on dimension mismatch.
    pub fn br(&self, a: &LieElement, b: &LieElement) -> LieElement {
        let d = self.dim;
        assert!(a.dim() == d && b.dim() == d, "Lie element dimension mismatch");
        let mut out = vec![C64::default(); d];
        for i in 0..d {
            if a.coeffs[i] == C64::default() {
                continue;
            }
            for j in 0..d {
                let ab = a.coeffs[i] * b.coeffs[j];
                if ab == C64::default() {
                    continue;
                }
                let base = (i * d + j) * d;
                for (k, o) in out.iter_mut().enumerate() {
                    let c = self.structure_constants[base + k];
                    if c != 0.0 {
                        *o += ab * c;
                    }
                }
            }
        }
        LieElement { coeffs: out }
    }

    /// ad(a) with ad(a)_{kj} = Σᵢ aᵢ c_ijk.
    pub fn ad(&self, a: &LieElement) -> DMatrix<C64> {
        let d = self.dim;
        DMatrix::from_fn(d, d, |k, j| (0..d).map(|i| a.coeffs[i] * self.c(i, j, k)).sum())
    }

    /// −Tr(ad a ∘ ad b), complex bilinear.
    pub fn killing_inner(&self, a: &LieElement, b: &LieElement) -> C64 {
        -(self.ad(a) * self.ad(b)).trace()
    }

    /// Σ aᵢ B_ij bⱼ, complex bilinear extension of the declared inner product.
    pub fn bilinear(&self, a: &LieElement, b: &LieElement) -> C64 {
        let d = self.dim;
        let mut acc = C64::default();
        for i in 0..d {
            for j in 0..d {
                let bij = self.inner[(i, j)];
                if bij != 0.0 {
                    acc += a.coeffs[i] * b.coeffs[j] * bij;
                }
            }
        }
        acc
    }

    /// ⟨a,b⟩ = B(a, conj b).
    pub fn hermitian(&self, a: &LieElement, b: &LieElement) -> C64 {
        self.bilinear(a, &b.conj())
    }

    pub fn norm_sqr(&self, a: &LieElement) -> f64 {
        self.hermitian(a, a).re
    }

    pub fn norm(&self, a: &LieElement) -> f64 {
        self.norm_sqr(a).max(0.0).sqrt()
    }

    pub fn matrix_of(&self, a: &LieElement) -> Result<DMatrix<C64>> {
        if self.basis_matrices.is_empty() {
            return Err(Error::InvalidAlgebra(format!("{} has no matrix realization", self.name)));
        }
        self.check_dim(a)?;
        let n = self.basis_matrices[0].nrows();
        let mut m = DMatrix::zeros(n, n);
        for (c, e) in a.coeffs.iter().zip(&self.basis_matrices) {
            m += e * *c;
        }
        Ok(m)
    }

    /// Coordinates of a matrix in the span of the basis matrices.
    pub fn element_of(&self, m: &DMatrix<C64>) -> Result<LieElement> {
        let solver = MatrixDecomposer::new(&self.basis_matrices)?;
        let (coeffs, residual) = solver.decompose(m);
        if residual > 1e-9 * (1.0 + m.norm()) {
            return Err(Error::InvalidAlgebra(format!("matrix not in the span (residual {residual:.2e})")));
        }
        Ok(LieElement { coeffs })
    }

    /// Bracket through the matrix commutator.
    pub fn matrix_bracket(&self, a: &LieElement, b: &LieElement) -> Result<LieElement> {
        let ma = self.matrix_of(a)?;
        let mb = self.matrix_of(b)?;
        self.element_of(&(&ma * &mb - &mb * &ma))
    }

    /// Subalgebra spanned by the given (0-based) basis elements, with its
    /// own negative Killing form.
    pub fn subalgebra(&self, name: &str, indices: &[usize]) -> Result<Self> {
        let mats = indices.iter().map(|&i| self.basis_matrices[i].clone()).collect();
        Self::from_matrices(name, mats, None)
    }

    pub fn is_abelian(&self) -> bool {
        self.structure_constants.iter().all(|&c| c == 0.0)
    }
}

/// Least-squares decomposition in the span of fixed matrices.
struct MatrixDecomposer {
    basis: DMatrix<C64>,
    gram_inv: DMatrix<C64>,
}

impl MatrixDecomposer {
    fn new(mats: &[DMatrix<C64>]) -> Result<Self> {
        if mats.is_empty() {
            return Err(Error::InvalidAlgebra("no basis matrices".into()));
        }
        let cols: Vec<DVector<C64>> = mats.iter().map(|m| DVector::from_iterator(m.len(), m.iter().copied())).collect();
        let basis = DMatrix::from_columns(&cols);
        let gram = basis.adjoint() * &basis;
        let gram_inv =
            gram.try_inverse().ok_or_else(|| Error::InvalidAlgebra("basis matrices are linearly dependent".into()))?;
        Ok(MatrixDecomposer { basis, gram_inv })
    }

    fn decompose(&self, m: &DMatrix<C64>) -> (Vec<C64>, f64) {
        let v = DVector::from_iterator(m.len(), m.iter().copied());
        let x = &self.gram_inv * (self.basis.adjoint() * &v);
        let residual = (&self.basis * &x - v).norm();
        (x.iter().copied().collect(), residual)
    }
}

fn unit(n: usize, i: usize, j: usize) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(n, n);
    m[(i, j)] = C64::new(1.0, 0.0);
    m
}

/// so(n) spanned by E_ij − E_ji (i<j, lexicographic). For n = 5 the last
/// generator is E₅₄ − E₄₅; for n = 3 the basis is E₃₂−E₂₃, E₁₃−E₃₁, E₂₁−E₁₂
/// so that [eᵢ,eⱼ] = ε_ijk e_k.
pub fn make_so(n: usize) -> Result<LieAlgebraSpec> {
    if n < 2 {
        return Err(Error::InvalidAlgebra(format!("so({n}) requires n ≥ 2")));
    }
    let gen = |i: usize, j: usize| unit(n, i, j) - unit(n, j, i);
    let mats = if n == 3 {
        vec![gen(2, 1), gen(0, 2), gen(1, 0)]
    } else {
        let mut mats = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                mats.push(gen(i, j));
            }
        }
        if n == 5 {
            let last = mats.len() - 1;
            mats[last] = gen(4, 3);
        }
        mats
    };
    LieAlgebraSpec::from_matrices(&format!("so{n}"), mats, None)
}

/// su(n): for n = 2 the basis −iσ_k/2; otherwise E_ij − E_ji, i(E_ij + E_ji)
/// for i<j followed by i(E_kk − E_{k+1,k+1}).
pub fn make_su(n: usize) -> Result<LieAlgebraSpec> {
    if n < 2 {
        return Err(Error::InvalidAlgebra(format!("su({n}) requires n ≥ 2")));
    }
    let i_ = C64::new(0.0, 1.0);
    let mats = if n == 2 {
        let h = C64::new(0.5, 0.0);
        let s1 = DMatrix::from_row_slice(2, 2, &[C64::default(), h, h, C64::default()]);
        let s2 = DMatrix::from_row_slice(2, 2, &[C64::default(), -i_ * h, i_ * h, C64::default()]);
        let s3 = DMatrix::from_row_slice(2, 2, &[h, C64::default(), C64::default(), -h]);
        [s1, s2, s3].into_iter().map(|s| s * (-i_)).collect()
    } else {
        let mut mats = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                mats.push(unit(n, a, b) - unit(n, b, a));
                mats.push((unit(n, a, b) + unit(n, b, a)) * i_);
            }
        }
        for k in 0..(n - 1) {
            mats.push((unit(n, k, k) - unit(n, k + 1, k + 1)) * i_);
        }
        mats
    };
    LieAlgebraSpec::from_matrices(&format!("su{n}"), mats, None)
}

/// u(1)ⁿ with the identity inner product (its Killing form vanishes).
pub fn make_abelian(n: usize) -> Result<LieAlgebraSpec> {
    if n < 1 {
        return Err(Error::InvalidAlgebra("abelian algebra requires n ≥ 1".into()));
    }
    let mats = (0..n).map(|k| unit(n, k, k) * C64::new(0.0, 1.0)).collect();
    LieAlgebraSpec::from_matrices(&format!("u1^{n}"), mats, Some(DMatrix::identity(n, n)))
}

pub fn random_element<R: rand::Rng + ?Sized>(g: &LieAlgebraSpec, rng: &mut R) -> LieElement {
    LieElement::real(&normal_vec(rng, g.dim))
}

pub const BRACKET_BOUND: f64 = std::f64::consts::SQRT_2;

pub fn bracket_norm_check(g: &LieAlgebraSpec, samples: usize, seed: u64) -> CriteriaReport {
    bracket_norm_check_with(g, samples, seed, Exec::default())
}

/// Samples ‖[a,b]‖ / (‖a‖‖b‖) over random real pairs against √2.
pub fn bracket_norm_check_with(g: &LieAlgebraSpec, samples: usize, seed: u64, exec: Exec) -> CriteriaReport {
    let ratios = run_sharded(samples.max(1), seed, exec, |rng, _| {
        let a = random_element(g, rng);
        let b = random_element(g, rng);
        let denom = g.norm(&a) * g.norm(&b);
        let ratio = if denom > 0.0 { g.norm(&g.br(&a, &b)) / denom } else { 0.0 };
        (ratio, a, b)
    });
    let (max_ratio, wa, wb) =
        ratios
            .into_iter()
            .fold((0.0, None, None), |acc, (r, a, b)| if r > acc.0 { (r, Some(a), Some(b)) } else { acc });
    let mut rep = CriteriaReport::new(format!("bracket_norm[{}]", g.name));
    rep.num("samples", samples.max(1) as f64).num("max_ratio", max_ratio).num("bound", BRACKET_BOUND);
    rep.check(Check::new("max_ratio", max_ratio, Relation::Le, BRACKET_BOUND));
    if max_ratio > BRACKET_BOUND {
        if let (Some(a), Some(b)) = (wa, wb) {
            rep.value("witness_a", Value::List(a.coeffs.iter().map(|c| c.re).collect()));
            rep.value("witness_b", Value::List(b.coeffs.iter().map(|c| c.re).collect()));
        }
    }
    rep.settle()
}
