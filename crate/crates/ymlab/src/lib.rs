//! Spectral-Galerkin laboratory for the linearized Yang-Mills equation on
//! ℝ×S¹ with a time-dependent background connection in temporal gauge.
//!
//! The crate builds, on a truncated Fourier⊗fiber basis:
//!
//! - the compact Lie algebra kernel (su(2) by default) with its ad-invariant
//!   product ([`lie`]);
//! - the covariant derivative/codifferential pair on the circle, the
//!   Laplacians `h_t`, `h_Σ` and the weight operators `ε = (h+C)^{1/2}`
//!   ([`spectral`], [`waveops`]);
//! - a constraint-satisfying background solution and its evolution
//!   ([`background`]);
//! - the approximate factorization `(∂_t + ib)(∂_t − ib) ≈ ∂_t² + a(t)` of the
//!   scalar and vector Klein-Gordon families, with infrared cutoffs
//!   ([`factor`]);
//! - the symplectic diagonalization `T`, the complementary charge projections
//!   `c±` and the Cauchy-surface two-point pair `λ±` ([`diag`]);
//! - the gauge projection `Π`, the right inverse `B` of `K_Σ`, the corrected
//!   projections `c̃±` and the gauge-invariant positive pair `λ̃±` ([`gauge`]);
//! - a reproducible pipeline with reports and convergence studies
//!   ([`harness`]).
//!
//! Everything is dense: the mode cutoff keeps dimensions at desk scale and the
//! pipeline needs eigendecompositions, inverses and square roots throughout.
//! "Smoothing" statements are operationalized as weighted-norm decay on
//! interior modes, see [`spectral::order_norm`].

pub mod background;
pub mod diag;
pub mod factor;
pub mod gauge;
pub mod harness;
pub mod lie;
pub mod linalg;
pub mod spectral;
pub mod tol;
pub mod waveops;

use thiserror::Error;

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix.
pub type CMat = ndarray::Array2<C64>;

/// Dense complex vector.
pub type CVec = ndarray::Array1<C64>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("linear algebra backend failure: {0}")]
    Backend(String),

    #[error("fixed-point iteration diverged: {0}")]
    Divergence(String),

    #[error("ODE accuracy failure: {0}")]
    OdeAccuracy(String),

    #[error("assembly failure: {0}")]
    Assembly(String),

    #[error("constraint violated: {0}")]
    ConstraintViolated(String),

    #[error("cutoff scale too small: {0}")]
    CutoffTooSmall(String),

    #[error("identity check failed: {0}")]
    IdentityFailed(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("config parse error: {0}")]
    Toml(#[from] toml::de::Error),

    #[error("report serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<ndarray_linalg::error::LinalgError> for Error {
    fn from(e: ndarray_linalg::error::LinalgError) -> Self {
        Error::Backend(e.to_string())
    }
}
