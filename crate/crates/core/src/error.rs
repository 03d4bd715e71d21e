use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("eigenvalue {eigenvalue:.3e} is below the allowed tolerance")]
    NegativeEigenvalueBeyondTolerance { eigenvalue: f64 },

    #[error("operator is not a contraction (norm {norm:.12})")]
    NotContraction { norm: f64 },

    #[error("operator is not positive semidefinite: {reason}")]
    NotPsd { reason: String },

    #[error("vector lies outside the form domain (residual {residual:.3e})")]
    VectorOutsideFormDomain { residual: f64 },

    #[error("compression to the domain is not Hermitian (deviation {deviation:.3e})")]
    NotHermitianOnDomain { deviation: f64 },

    #[error("factorization K0 D_B0 = P_N B is inconsistent (residual {residual:.3e})")]
    InconsistentFactorization { residual: f64 },

    #[error("parameter is not a contraction (norm {norm:.12})")]
    ParameterNotContraction { norm: f64 },

    #[error("parameter acts on the wrong space: expected {expected}x{expected}, got {rows}x{cols}")]
    ParameterWrongSpace {
        expected: usize,
        rows: usize,
        cols: usize,
    },

    #[error("parameter is not a Hermitian contraction: {reason}")]
    ParameterNotHermitianContraction { reason: String },

    #[error("isometry infeasible: {reason}")]
    IsometryInfeasible { reason: String },

    #[error("infeasible in finite dimension: {diagnostic}")]
    InfeasibleInFiniteDim { diagnostic: String },

    #[error("resolvent is numerically singular at {point} (smallest singular value {sigma_min:.3e})")]
    ResolventSingular { point: String, sigma_min: f64 },

    #[error("order violated: B0 <= B1 fails (smallest eigenvalue of B1 - B0 is {eigenvalue:.3e})")]
    OrderViolated { eigenvalue: f64 },

    #[error("operator does not belong to any class C_H(alpha) with alpha < pi/2")]
    NotInClass,

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("bad dimensions: {0}")]
    BadDims(String),

    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),

    #[error("invalid evaluation point: {0}")]
    InvalidPoint(String),

    #[error("non-finite entry in matrix")]
    NonFinite,

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),

    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
