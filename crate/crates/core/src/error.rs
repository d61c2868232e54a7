use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("determinant {det} is not within {tol:e} of 1")]
    Determinant { det: f64, tol: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("ill-conditioned classification: {0}")]
    IllConditioned(String),

    #[error("elements are not conjugate: {0}")]
    NotConjugate(String),

    #[error("elliptic matrix has no real eigenvector")]
    NoRealEigenvector,

    #[error("invalid cover element: {0}")]
    InvalidElement(String),

    #[error("elliptic matrix has no canonical lift")]
    NoCanonicalLift,

    #[error("the identity does not generate a holonomy group")]
    NoGenerator,

    #[error("class {0} is not positive")]
    NotPositive(String),

    #[error("interval ({a}, {b}) is degenerate")]
    DegenerateInterval { a: f64, b: f64 },

    #[error("interval is unbounded")]
    Unbounded,

    #[error("winding numbers differ: {left} vs {right}")]
    WindingMismatch { left: String, right: String },

    #[error("[{a}, {b}) is not a fundamental domain")]
    NotFundamentalDomain { a: f64, b: f64 },

    #[error("element has no fixed points")]
    NoFixedPoints,

    #[error("homogeneous curve has no resonance points")]
    NoResonancePoints,

    #[error("step budget of {max_steps} exhausted at t = {t}")]
    StiffPotential { t: f64, max_steps: usize },

    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },

    #[error("derivative {0:e} too small, map is not an immersion")]
    NotImmersion(f64),

    #[error("not a diffeomorphism: {0}")]
    NotDiffeo(String),

    #[error("potential is not periodic: |F(t+1) - F(t)| = {defect:e} at t = {t}")]
    NotPeriodic { t: f64, defect: f64 },

    #[error("non-finite value: {0}")]
    NonFinite(String),
}
