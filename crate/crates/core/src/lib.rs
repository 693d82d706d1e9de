//! Pointwise computational lab for gauge theory on Sasakian 7-manifolds.
//!
//! Everything lives on a single tangent space: exterior algebra on ℝ⁷,
//! the T_η eigenspace splitting of 2-forms, Lie-algebra-valued forms, the
//! Weitzenböck endomorphisms 𝓕 and 𝓡, the Yang–Mills second variation,
//! deformation-complex symbols, and the Stiefel V^{5,2} example.

pub mod deformation_symbols;
pub mod error;
pub mod flat_model;
pub mod form_decomposition;
pub mod gauge_fields;
pub mod lie_algebra;
pub mod report;
pub mod sampling;
pub mod selftest;
pub mod stiefel;
pub mod weitzenbock;
pub mod ym_stability;

pub use error::{Error, Result};

pub type C64 = num_complex::Complex64;
