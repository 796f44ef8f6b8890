//! Linearization of rational matrices given as `R(λ) = D(λ) + C(λ)A(λ)⁻¹B(λ)`
//! through block minimal basis pencils, with eigenvalue, minimal-basis and
//! structure-at-infinity recovery.
//!
//! The pipeline is
//! [`linbuild::build`] → [`eigsolve::classify`] / [`eigsolve::polynomial_nullspace`]
//! → [`recover`], with [`verify::run_all`] re-checking every identity the
//! construction relies on.

pub mod dense;
pub mod dualbases;
pub mod eigsolve;
pub mod json;
pub mod linbuild;
pub mod polymat;
pub mod recover;
pub mod sampler;
pub mod scalareq;
pub mod verify;

pub use dense::{CMatrix, C64};
pub use dualbases::DualBasisPair;
pub use eigsolve::{MinimalBasisResult, PencilEig, Side, SpectralReport};
pub use linbuild::{Realization, StructuredLinearization};
pub use polymat::{Basis, PolyMatrix};
pub use sampler::Sampler;

/// Default seed of every randomized procedure.
pub const DEFAULT_SEED: u64 = 0x5EED;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {lhs:?} vs {rhs:?}")]
    DimensionMismatch {
        op: &'static str,
        lhs: (usize, usize),
        rhs: (usize, usize),
    },
    #[error("basis mismatch in {0}")]
    BasisMismatch(&'static str),
    #[error("grade {grade} is below degree {degree}")]
    GradeTooSmall { grade: usize, degree: usize },
    #[error("state dimension n must be at least 1")]
    EmptyState,
    #[error("state matrix A is not regular")]
    IrregularState,
    #[error("A({0}) is singular: pole or state eigenvalue; use reversal/limits instead")]
    SingularState(C64),
    #[error("pencil is singular; use polynomial_nullspace instead")]
    SingularPencil,
    #[error("pencil is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("pencil is regular on the requested side; nothing to compute")]
    RegularPencil,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("degree sweep exceeded cap {0}")]
    SweepCapExceeded(usize),
    #[error("inconsistent structure at infinity: {t}+{u} orders exceed rank {r}")]
    InconsistentRank { t: usize, u: usize, r: usize },
    #[error("equation holds identically")]
    IdenticallyZero,
    #[error("c/a is reducible")]
    Reducible,
    #[error("fixture generation exhausted {0} attempts")]
    ResamplingExhausted(usize),
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("backend: {0}")]
    Backend(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// The shared tolerance knobs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Relative singular value cutoff; `None` means `max(rows, cols)·ε`.
    pub rank: Option<f64>,
    /// Eigenvalue coincidence: `|λ − μ| ≤ matching·max(1, |λ|)`.
    pub matching: f64,
    /// Relative residual bound for recovered eigenvectors.
    pub residual: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rank: None,
            matching: 1e-7,
            residual: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn matches(&self, a: C64, b: C64) -> bool {
        (a - b).norm() <= self.matching * a.norm().max(1.0)
    }
}
