use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },
    #[error("division by an interval containing zero")]
    DivisionByZero,
    #[error("square root of an interval with negative part")]
    NegativeSqrt,
    #[error("non-finite value in {0}")]
    NonFinite(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precision of {0} bits is outside the supported range")]
    InvalidPrecision(u32),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid weight parameters: {0}")]
    InvalidWeight(String),
    #[error("approximate inverse too poor: Z1 upper bound {z1} is not below 1")]
    InverseTooPoor { z1: f64 },
    #[error("radii polynomial is not negative at any probe (best r = {best_r:e}, p(r) <= {best_p:e})")]
    RadiiPolynomialFails { best_r: f64, best_p: f64 },
    #[error("eigenpair {index} could not be certified: {reason}")]
    EigenpairFailed { index: usize, reason: String },
    #[error("node enclosures {i} and {j} overlap")]
    NodesOverlap { i: usize, j: usize },
    #[error("node enclosure {0} is not inside (-1, 1)")]
    NodeOutside(usize),
    #[error("quadrature weight {0} is not certified positive")]
    WeightNotPositive(usize),
    #[error("degree {degree} exceeds exactness limit {limit} of the quadrature rule")]
    DegreeOverflow { degree: usize, limit: usize },
    #[error("scaling factor enclosure contains zero at degree {0}")]
    DegenerateScaling(usize),
    #[error("evaluation at degree {degree} lost all accuracy (radius {radius:e})")]
    ConditioningExceeded { degree: usize, radius: f64 },
    #[error("cannot pad a length-{from} vector down to {to}")]
    PadTooShort { from: usize, to: usize },
    #[error("no inverse transform for this configuration: {0}")]
    MissingInverse(String),
    #[error("grading mismatch: {0}")]
    GradingMismatch(String),
    #[error("operator not defined: {0}")]
    UnsupportedOperator(String),
    #[error("Newton iteration failed to converge; residual history {history:?}")]
    Divergence { history: Vec<f64> },
    #[error("singular Jacobian in the Galerkin system")]
    SingularJacobian,
    #[error("shooting for the seed profile failed: {0}")]
    Shooting(String),
    #[error("certificate rejected: {0}")]
    InvalidCertificate(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable machine readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInterval { .. } => "invalid_interval",
            Error::DivisionByZero => "division_by_zero",
            Error::NegativeSqrt => "negative_sqrt",
            Error::NonFinite(_) => "non_finite",
            Error::Domain(_) => "domain",
            Error::InvalidPrecision(_) => "invalid_precision",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::InvalidWeight(_) => "invalid_weight",
            Error::InverseTooPoor { .. } => "inverse_too_poor",
            Error::RadiiPolynomialFails { .. } => "radii_polynomial_fails",
            Error::EigenpairFailed { .. } => "eigenpair_failed",
            Error::NodesOverlap { .. } => "nodes_overlap",
            Error::NodeOutside(_) => "node_outside",
            Error::WeightNotPositive(_) => "weight_not_positive",
            Error::DegreeOverflow { .. } => "degree_overflow",
            Error::DegenerateScaling(_) => "degenerate_scaling",
            Error::ConditioningExceeded { .. } => "conditioning_exceeded",
            Error::PadTooShort { .. } => "pad_too_short",
            Error::MissingInverse(_) => "missing_inverse",
            Error::GradingMismatch(_) => "grading_mismatch",
            Error::UnsupportedOperator(_) => "unsupported_operator",
            Error::Divergence { .. } => "divergence",
            Error::SingularJacobian => "singular_jacobian",
            Error::Shooting(_) => "shooting",
            Error::InvalidCertificate(_) => "invalid_certificate",
            Error::Parse(_) => "parse",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
