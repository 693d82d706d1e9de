//! JSON input documents.
//!
//! Complex numbers are `[re, im]`; plain numbers are real. A 𝔤-valued
//! 2-form is `{"algebra", "basis", "components"}` where `components` maps a
//! basis label to a coefficient list of length dim 𝔤:
//!
//! * `"w"`: labels `w1`..`w8`, `v1`..`v6`, `omega`
//! * `"real"`: coframe indices, e.g. `"12"`, `"37"` (unsorted allowed, sign applied)
//! * `"complex"`: wedge words in `z1 z2 z3 zb1 zb2 zb3 eta`, e.g. `"z1^zb2"`

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use cilab_core::flat_model::{dz, dzbar, eta, ContactModel, KForm, DIM};
use cilab_core::form_decomposition::standard_bases;
use cilab_core::gauge_fields::GValuedForm;
use cilab_core::lie_algebra::{make_abelian, make_so, make_su, LieAlgebraSpec, LieElement};
use cilab_core::weitzenbock::TransverseRicci;
use cilab_core::ym_stability::RicciTensor7;
use cilab_core::C64;
use nalgebra::DMatrix;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::CliError;

#[derive(Clone, Copy, Debug, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum Num {
    Real(f64),
    Complex([f64; 2]),
}

impl Num {
    pub fn c(self) -> C64 {
        match self {
            Num::Real(x) => C64::new(x, 0.0),
            Num::Complex([re, im]) => C64::new(re, im),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    #[default]
    W,
    Real,
    Complex,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum AlgebraInput {
    Named(String),
    Custom(CustomAlgebra),
}

/// Structure constants as sparse `[i, j, k, c]` entries (1-based, i < j),
/// meaning [eᵢ,eⱼ] ∋ c·e_k; the j,i entry is filled by antisymmetry.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomAlgebra {
    #[serde(default)]
    pub name: Option<String>,
    pub dim: usize,
    #[serde(default)]
    pub structure_constants: Vec<(usize, usize, usize, f64)>,
    #[serde(default)]
    pub inner: Option<Vec<Vec<f64>>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldInput {
    pub algebra: AlgebraInput,
    #[serde(default)]
    pub basis: Basis,
    pub components: BTreeMap<String, Vec<Num>>,
    /// Transverse Ricci R_{β̄μ} in a unitary frame, rows β.
    #[serde(default)]
    pub ricci: Option<[[Num; 3]; 3]>,
    /// Ambient Ricci on ℝ⁷ in the orthonormal coframe.
    #[serde(default)]
    pub ricci7: Option<Vec<Vec<f64>>>,
    /// Ric = c·g on ℝ⁷.
    #[serde(default)]
    pub ricci_scalar: Option<f64>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormInput {
    #[serde(default)]
    pub basis: Basis,
    pub components: BTreeMap<String, Num>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolsInput {
    #[serde(default)]
    pub dims: Option<Vec<usize>>,
    #[serde(default)]
    pub covectors: Option<Vec<[f64; DIM]>>,
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StiefelInput {
    #[serde(default)]
    pub y: Option<[f64; 3]>,
}

/// Parses `text` into `T`, reporting the failing field path and line/column.
pub fn parse<T: DeserializeOwned>(text: &str, origin: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    match serde_path_to_error::deserialize(de) {
        Ok(v) => Ok(v),
        Err(e) => {
            let path = e.path().to_string();
            let inner = e.into_inner();
            Err(CliError::Input(format!("{origin}:{}:{}: field `{path}`: {inner}", inner.line(), inner.column())))
        }
    }
}

pub fn read_input<T: DeserializeOwned>(path: Option<&Path>) -> Result<Option<T>, CliError> {
    let Some(path) = path else { return Ok(None) };
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse(&text, &path.display().to_string()).map(Some)
}

pub fn require<T>(v: Option<T>, what: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Input(format!("this command needs --input with {what}")))
}

fn field_err(field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Input(format!("field `{field}`: {msg}"))
}

pub fn build_algebra(a: &AlgebraInput) -> Result<Arc<LieAlgebraSpec>, CliError> {
    let g = match a {
        AlgebraInput::Named(name) => {
            let lower = name.to_ascii_lowercase();
            let parse_n = |prefix: &str| lower.strip_prefix(prefix).and_then(|s| s.parse::<usize>().ok());
            if let Some(n) = parse_n("so") {
                make_so(n)
            } else if let Some(n) = parse_n("su") {
                make_su(n)
            } else if let Some(n) = parse_n("u1^") {
                make_abelian(n)
            } else {
                return Err(field_err(
                    "algebra",
                    format!("unknown algebra `{name}` (try so3, su2, so5, su3 or a custom object)"),
                ));
            }
        }
        AlgebraInput::Custom(c) => {
            let d = c.dim;
            if d == 0 {
                return Err(field_err("algebra.dim", "must be positive"));
            }
            let mut sc = vec![0.0; d * d * d];
            for (n, &(i, j, k, v)) in c.structure_constants.iter().enumerate() {
                let bad = |msg: &str| field_err(&format!("algebra.structure_constants[{n}]"), msg);
                if !(1..=d).contains(&i) || !(1..=d).contains(&j) || !(1..=d).contains(&k) {
                    return Err(bad("index out of range"));
                }
                if i >= j {
                    return Err(bad("entries must have i < j"));
                }
                let (i, j, k) = (i - 1, j - 1, k - 1);
                sc[(i * d + j) * d + k] += v;
                sc[(j * d + i) * d + k] -= v;
            }
            let inner = match &c.inner {
                None => None,
                Some(rows) => {
                    if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                        return Err(field_err("algebra.inner", format!("expected a {d}x{d} matrix")));
                    }
                    Some(DMatrix::from_fn(d, d, |i, j| rows[i][j]))
                }
            };
            let name = c.name.clone().unwrap_or_else(|| "custom".into());
            LieAlgebraSpec::from_structure_constants(&name, d, sc, inner)
        }
    };
    g.map(Arc::new).map_err(|e| field_err("algebra", e))
}

/// 1-form for a complex-frame letter.
fn frame_letter(s: &str) -> Option<KForm> {
    match s {
        "z1" => Some(dz(1)),
        "z2" => Some(dz(2)),
        "z3" => Some(dz(3)),
        "zb1" => Some(dzbar(1)),
        "zb2" => Some(dzbar(2)),
        "zb3" => Some(dzbar(3)),
        "eta" => Some(eta()),
        _ => None,
    }
}

/// Basis 2-form for a component label.
pub fn basis_form(basis: Basis, label: &str, m: &ContactModel, field: &str) -> Result<KForm, CliError> {
    match basis {
        Basis::W => {
            let (w, v) = standard_bases();
            let idx = |prefix: &str, n: usize| {
                label.strip_prefix(prefix).and_then(|s| s.parse::<usize>().ok()).filter(|&i| (1..=n).contains(&i))
            };
            if label == "omega" {
                Ok(m.omega.clone())
            } else if let Some(i) = idx("w", 8) {
                Ok(w[i - 1].clone())
            } else if let Some(i) = idx("v", 6) {
                Ok(v[i - 1].clone())
            } else {
                Err(field_err(field, "expected w1..w8, v1..v6 or omega"))
            }
        }
        Basis::Real => {
            let idx: Option<Vec<usize>> = label.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect();
            match idx {
                Some(idx) if idx.len() == 2 && idx.iter().all(|i| (1..=DIM).contains(i)) => Ok(KForm::basis(&idx)),
                _ => Err(field_err(field, "expected two coframe digits in 1..7, e.g. \"13\"")),
            }
        }
        Basis::Complex => {
            let mut out = KForm::one();
            let letters: Vec<&str> = label.split('^').map(str::trim).collect();
            if letters.len() != 2 {
                return Err(field_err(field, "expected a wedge of two letters, e.g. \"z1^zb2\""));
            }
            for l in letters {
                let f = frame_letter(l).ok_or_else(|| field_err(field, format!("unknown letter `{l}`")))?;
                out = out.wedge(&f).map_err(|e| field_err(field, e))?;
            }
            Ok(out)
        }
    }
}

pub fn build_field(input: &FieldInput, m: &ContactModel) -> Result<GValuedForm, CliError> {
    let g = build_algebra(&input.algebra)?;
    let mut terms = Vec::new();
    for (label, coeffs) in &input.components {
        let field = format!("components.{label}");
        if coeffs.len() != g.dim {
            return Err(field_err(&field, format!("expected {} coefficients, got {}", g.dim, coeffs.len())));
        }
        let form = basis_form(input.basis, label, m, &field)?;
        terms.push((form, LieElement::complex(coeffs.iter().map(|c| c.c()).collect())));
    }
    if terms.is_empty() {
        return Ok(GValuedForm::zero(g, 2));
    }
    GValuedForm::sum_of(g, &terms).map_err(|e| field_err("components", e))
}

pub fn build_form(input: &FormInput, m: &ContactModel) -> Result<KForm, CliError> {
    let mut out = KForm::zero(2);
    for (label, c) in &input.components {
        out += &basis_form(input.basis, label, m, &format!("components.{label}"))?.scale(c.c());
    }
    Ok(out)
}

pub fn transverse_ricci(r: &Option<[[Num; 3]; 3]>) -> Result<Option<TransverseRicci>, CliError> {
    let Some(r) = r else { return Ok(None) };
    let rc = r.map(|row| row.map(Num::c));
    TransverseRicci::with_identity_metric(rc).map(Some).map_err(|e| field_err("ricci", e))
}

pub fn ambient_ricci(input: &FieldInput) -> Result<Option<RicciTensor7>, CliError> {
    match (&input.ricci7, input.ricci_scalar) {
        (Some(_), Some(_)) => Err(field_err("ricci7", "give either ricci7 or ricci_scalar, not both")),
        (None, Some(c)) => Ok(Some(RicciTensor7::scalar(c))),
        (Some(rows), None) => {
            if rows.len() != DIM || rows.iter().any(|r| r.len() != DIM) {
                return Err(field_err("ricci7", "expected a 7x7 matrix"));
            }
            let m: [[f64; DIM]; DIM] = std::array::from_fn(|i| std::array::from_fn(|j| rows[i][j]));
            RicciTensor7::new(m).map(Some).map_err(|e| field_err("ricci7", e))
        }
        (None, None) => Ok(None),
    }
}
