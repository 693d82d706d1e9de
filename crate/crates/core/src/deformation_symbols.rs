//! Principal symbols of the deformation complexes at a covector ξ.
//!
//! Full complex: L⁰ = 𝔤, L¹ = Λ¹⊗𝔤, L² = (Ω²_{6⊕1} ⊕ η∧Λ¹_H)⊗𝔤,
//! L³ = η∧Ω²_{6⊕1}⊗𝔤; each map is ξ∧(·) followed by the orthogonal
//! projection onto the next space. Basic complex: Λ⁰ → Λ¹_H → Ω²_{6⊕1}.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::flat_model::{binomial, eta, multi_indices, ContactModel, KForm, DIM};
use crate::form_decomposition::Decomposer;
use crate::report::{Check, CriteriaReport, Relation, Value};
use crate::sampling::{normal_vec, run_sharded, Exec};
use crate::C64;

/// Singular values below this fraction of the largest count as zero.
pub const RANK_REL_TOL: f64 = 1e-9;

pub fn numerical_rank(m: &DMatrix<f64>) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.max();
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > RANK_REL_TOL * max).count()
}

/// Matrix of α ↦ ξ∧α from Λᵏ to Λᵏ⁺¹ in the canonical bases.
pub fn wedge_matrix(xi: &[f64; DIM], k: usize) -> DMatrix<f64> {
    let xf = KForm::from_real_coords(1, xi);
    let src = multi_indices(k);
    let mut m = DMatrix::zeros(binomial(DIM, k + 1), src.len());
    for (col, &mask) in src.iter().enumerate() {
        let img = xf.wedge(&KForm::from_mask(mask, C64::new(1.0, 0.0))).expect("degree ≤ 7");
        for (row, c) in img.real_coords().iter().enumerate() {
            m[(row, col)] = *c;
        }
    }
    m
}

pub fn kron_identity(m: &DMatrix<f64>, d: usize) -> DMatrix<f64> {
    m.kronecker(&DMatrix::identity(d, d))
}

#[derive(Clone, Debug)]
pub struct QuotientSpaces {
    pub d: usize,
    /// Orthonormal columns in Λ² spanning Ω²₁ ⊕ Ω²₆ ⊕ Ω²_V (13).
    pub l2_basis: DMatrix<f64>,
    /// Orthonormal columns in Λ² spanning Ω²₁ ⊕ Ω²₆ (7).
    pub l2_basic_basis: DMatrix<f64>,
    /// Orthonormal columns in Λ³ spanning η∧(Ω²₁ ⊕ Ω²₆) (7).
    pub l3_basis: DMatrix<f64>,
}

impl QuotientSpaces {
    /// dim Lᵏ for k = 0..3.
    pub fn dims(&self) -> [usize; 4] {
        [self.d, DIM * self.d, self.l2_basis.ncols() * self.d, self.l3_basis.ncols() * self.d]
    }

    pub fn alternating_sum(&self) -> i64 {
        let [a, b, c, e] = self.dims().map(|x| x as i64);
        a - b + c - e
    }

    /// Coordinates of the projection Λ²⊗𝔤 → L² (input as 21·d coordinates,
    /// form index major).
    pub fn project_l2(&self) -> DMatrix<f64> {
        kron_identity(&self.l2_basis.transpose(), self.d)
    }
}

pub fn build_quotient_spaces(d: usize, m: &ContactModel) -> Result<QuotientSpaces> {
    if d == 0 {
        return Err(Error::Invalid("algebra dimension must be positive".into()));
    }
    let dec = Decomposer::new(m)?;
    let [b1, b6, _b8, bv] = &dec.bases;
    let mut l2_cols = Vec::new();
    let mut basic_cols = Vec::new();
    for b in [b1, b6] {
        for c in b.column_iter() {
            l2_cols.push(c.into_owned());
            basic_cols.push(c.into_owned());
        }
    }
    for c in bv.column_iter() {
        l2_cols.push(c.into_owned());
    }
    let l2_basis = DMatrix::from_columns(&l2_cols);
    let l2_basic_basis = DMatrix::from_columns(&basic_cols);
    let e = eta();
    let l3_cols: Vec<_> = basic_cols
        .iter()
        .map(|c| {
            let form = KForm::from_real_coords(2, c.as_slice());
            nalgebra::DVector::from_vec(e.wedge(&form).expect("3-form").real_coords())
        })
        .collect();
    let l3_basis = DMatrix::from_columns(&l3_cols);
    Ok(QuotientSpaces { d, l2_basis, l2_basic_basis, l3_basis })
}

/// Dimensions of the ideal generated by Ω²₈ in Λ³ and its relation to L³.
#[derive(Clone, Debug, Serialize)]
pub struct IdealAnalysis {
    pub ideal_rank_3: usize,
    pub quotient_dim_3: usize,
    pub l3_dim: usize,
    /// ‖L3ᵀ · (Ω²₈∧Λ¹)‖: zero when the projection onto L³ kills the ideal.
    pub l3_orthogonality_residual: f64,
}

pub fn ideal_analysis(m: &ContactModel) -> Result<IdealAnalysis> {
    let dec = Decomposer::new(m)?;
    let q = build_quotient_spaces(1, m)?;
    let b8 = &dec.bases[2];
    let mut cols = Vec::new();
    for i in 0..DIM {
        let mut xi = [0.0; DIM];
        xi[i] = 1.0;
        let w = wedge_matrix(&xi, 2) * b8;
        cols.extend(w.column_iter().map(|c| c.into_owned()));
    }
    let ideal = DMatrix::from_columns(&cols);
    let rank = numerical_rank(&ideal);
    let residual = (q.l3_basis.transpose() * &ideal).norm();
    Ok(IdealAnalysis {
        ideal_rank_3: rank,
        quotient_dim_3: binomial(DIM, 3) - rank,
        l3_dim: q.l3_basis.ncols(),
        l3_orthogonality_residual: residual,
    })
}

#[derive(Clone, Debug)]
pub struct SymbolMaps {
    pub sigma: Vec<DMatrix<f64>>,
}

fn check_xi(xi: &[f64; DIM]) -> Result<()> {
    if xi.iter().all(|&x| x == 0.0) {
        return Err(Error::ZeroCovector);
    }
    Ok(())
}

/// (σD₀, σD₁, σD₂) of the full complex at ξ, already tensored with I_d.
pub fn symbol_maps(xi: &[f64; DIM], q: &QuotientSpaces) -> Result<SymbolMaps> {
    check_xi(xi)?;
    let s0 = DMatrix::from_column_slice(DIM, 1, xi);
    let s1 = q.l2_basis.transpose() * wedge_matrix(xi, 1);
    let s2 = q.l3_basis.transpose() * wedge_matrix(xi, 2) * &q.l2_basis;
    Ok(SymbolMaps { sigma: [s0, s1, s2].iter().map(|s| kron_identity(s, q.d)).collect() })
}

/// Symbols of the basic complex Λ⁰_H → Λ¹_H → Ω²_{6⊕1} at ξ_H.
pub fn basic_symbol_maps(xi: &[f64; DIM], q: &QuotientSpaces) -> Result<SymbolMaps> {
    check_xi(xi)?;
    let mut xh = *xi;
    xh[DIM - 1] = 0.0;
    let s0 = DMatrix::from_column_slice(DIM - 1, 1, &xh[..DIM - 1]);
    // Λ¹_H ↪ Λ¹ is the first six coordinates.
    let incl = DMatrix::from_fn(DIM, DIM - 1, |i, j| if i == j { 1.0 } else { 0.0 });
    let s1 = q.l2_basic_basis.transpose() * wedge_matrix(&xh, 1) * incl;
    Ok(SymbolMaps { sigma: [s0, s1].iter().map(|s| kron_identity(s, q.d)).collect() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ComplexKind {
    #[serde(rename = "FULL_C")]
    Full,
    #[serde(rename = "BASIC_B")]
    Basic,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymbolComplexReport {
    pub which: ComplexKind,
    pub xi: [f64; DIM],
    pub dims: Vec<usize>,
    pub ranks: Vec<usize>,
    pub kernel_dims: Vec<usize>,
    /// dim ker σ_k − rank σ_{k−1} at each space, the last entry being the cokernel.
    pub cohomology_dims: Vec<usize>,
    pub exact_at: Vec<bool>,
    pub composition_residuals: Vec<f64>,
    pub exact: bool,
    pub alternating_sum: i64,
}

pub fn exactness_report(xi: &[f64; DIM], q: &QuotientSpaces, which: ComplexKind) -> Result<SymbolComplexReport> {
    let (maps, dims) = match which {
        ComplexKind::Full => (symbol_maps(xi, q)?, q.dims().to_vec()),
        ComplexKind::Basic => (basic_symbol_maps(xi, q)?, vec![q.d, (DIM - 1) * q.d, q.l2_basic_basis.ncols() * q.d]),
    };
    let ranks: Vec<usize> = maps.sigma.iter().map(numerical_rank).collect();
    let kernel_dims: Vec<usize> = maps.sigma.iter().zip(&dims).map(|(s, &n)| n - numerical_rank(s)).collect();
    let mut cohomology_dims = Vec::with_capacity(dims.len());
    for k in 0..dims.len() {
        let ker = if k < kernel_dims.len() { kernel_dims[k] } else { dims[k] };
        let im = if k == 0 { 0 } else { ranks[k - 1] };
        cohomology_dims.push(ker - im);
    }
    let exact_at: Vec<bool> = cohomology_dims.iter().map(|&h| h == 0).collect();
    let composition_residuals = maps.sigma.windows(2).map(|w| (&w[1] * &w[0]).norm()).collect();
    let alternating_sum = dims.iter().enumerate().map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) }).sum();
    Ok(SymbolComplexReport {
        which,
        xi: *xi,
        exact: exact_at.iter().all(|&e| e),
        dims,
        ranks,
        kernel_dims,
        cohomology_dims,
        exact_at,
        composition_residuals,
        alternating_sum,
    })
}

/// `n` standard-normal covectors, deterministic in `seed`.
pub fn random_covectors(n: usize, seed: u64, exec: Exec) -> Vec<[f64; DIM]> {
    run_sharded(n, seed, exec, |rng, _| {
        let v = normal_vec(rng, DIM);
        std::array::from_fn(|i| v[i])
    })
}

pub fn symbol_batch(
    xis: &[[f64; DIM]],
    q: &QuotientSpaces,
    which: ComplexKind,
    exec: Exec,
) -> Result<Vec<SymbolComplexReport>> {
    crate::sampling::map_indexed(xis.len(), exec, |i| exactness_report(&xis[i], q, which)).into_iter().collect()
}

/// Full-complex exactness over random ξ for each algebra dimension, and the
/// basic complex at a vertical and a horizontal covector.
pub fn symbols_report(
    dims: &[usize],
    samples: usize,
    seed: u64,
    m: &ContactModel,
    exec: Exec,
) -> Result<CriteriaReport> {
    let mut rep = CriteriaReport::new("symbols");
    let xis = random_covectors(samples.max(1), seed, exec);
    for &d in dims {
        let q = build_quotient_spaces(d, m)?;
        let batch = symbol_batch(&xis, &q, ComplexKind::Full, exec)?;
        let mut sec = CriteriaReport::new(format!("full_d{d}"));
        let expected = vec![d, 6 * d, 7 * d];
        let exact = batch.iter().filter(|r| r.exact).count();
        let pattern = batch.iter().filter(|r| r.ranks == expected).count();
        let comp = batch.iter().flat_map(|r| r.composition_residuals.iter().copied()).fold(0.0f64, f64::max);
        sec.value("dims", Value::List(q.dims().iter().map(|&x| x as f64).collect()))
            .num("samples", batch.len() as f64)
            .num("alternating_sum", q.alternating_sum() as f64);
        sec.check(Check::new("exact_count", exact as f64, Relation::Ge, batch.len() as f64));
        sec.check(Check::new("rank_pattern_count", pattern as f64, Relation::Ge, batch.len() as f64));
        sec.check(Check::new("max_composition_residual", comp, Relation::Le, 1e-12));
        sec.check(Check::flag("alternating_sum_zero", q.alternating_sum() == 0));

        let mut vertical = [0.0; DIM];
        vertical[DIM - 1] = 1.0;
        let mut horizontal = [0.0; DIM];
        horizontal[0] = 1.0;
        let bv = exactness_report(&vertical, &q, ComplexKind::Basic)?;
        let bh = exactness_report(&horizontal, &q, ComplexKind::Basic)?;
        sec.value("basic_vertical_ranks", Value::List(bv.ranks.iter().map(|&x| x as f64).collect()));
        sec.value("basic_horizontal_cohomology", Value::List(bh.cohomology_dims.iter().map(|&x| x as f64).collect()));
        sec.check(Check::flag("basic_vertical_degenerate", !bv.exact && bv.ranks.iter().all(|&r| r == 0)));
        sec.check(Check::flag(
            "basic_horizontal_exact_0_1_cokernel_2d",
            bh.exact_at[0] && bh.exact_at[1] && bh.cohomology_dims[2] == 2 * d,
        ));
        rep.section(sec.settle());
    }
    Ok(rep.settle())
}
