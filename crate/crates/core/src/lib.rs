//! Loop-group construction of Willmore surfaces in spheres.
//!
//! The crate follows the DPW recipe for conformal Gauss maps with values in
//! `SO+(1,n+3)/SO+(1,3)×SO(n)`:
//!
//! 1. a normalized potential `η = λ⁻¹ η₋₁ dz` ([`potentials`]) is integrated
//!    exactly into the meromorphic frame `F₋(z, λ)` ([`dpw::integrate_potential`]);
//! 2. `F₋` is split pointwise in `z` into a real twisted loop times a positive
//!    loop ([`dpw::iwasawa_split`]), for the non-compact real form or its
//!    compact dual;
//! 3. the real frame is projected to the surface `y(z, λ) ∈ Sⁿ⁺²`
//!    ([`dpw::build_surface`]).
//!
//! [`verify`] holds the closed-form reference surfaces and frames together with
//! finite-difference and quadrature checks used to validate the pipeline.

pub mod algebra;
pub mod error;
pub mod exec;
pub mod io;
pub mod loops;
pub mod potentials;
pub mod rational;

pub mod dpw;
pub mod verify;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix; houses elements of `SO(1,n+3)^ℂ` and its Lie algebra.
pub type CMat = nalgebra::DMatrix<C64>;

/// Which real form of the complexified group a computation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RealForm {
    /// `SO+(1,n+3)`: real matrices preserving the Minkowski form.
    Noncompact,
    /// `SO(n+4)`: the compact dual, realized as real orthogonal matrices in the
    /// basis obtained by conjugating with `diag(i,1,…,1)`.
    Compact,
}

impl std::str::FromStr for RealForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "noncompact" | "non-compact" => Ok(RealForm::Noncompact),
            "compact" => Ok(RealForm::Compact),
            other => Err(Error::Parse(format!("unknown real form `{other}`"))),
        }
    }
}

impl std::fmt::Display for RealForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RealForm::Noncompact => f.write_str("noncompact"),
            RealForm::Compact => f.write_str("compact"),
        }
    }
}
