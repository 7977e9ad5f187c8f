use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: asymmetry norm {asymmetry:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { asymmetry: f64, tol: f64 },

    #[error("eigensolver failed: {detail}")]
    EigenSolver { detail: String },

    #[error("function `{function}` is not finite at eigenvalue {eigenvalue}")]
    FunctionDomain { function: String, eigenvalue: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("matrix dimension {dim} exceeds cap {cap}")]
    SizeCap { dim: usize, cap: usize },

    #[error("operator is not positive: psd margin {margin:.3e}")]
    NotPositive { margin: f64 },

    #[error("operator is not invertible ({detail})")]
    NotInvertible { detail: String },

    #[error("condition number {cond:.3e} exceeds cap {cap:.3e}")]
    IllConditioned { cond: f64, cap: f64 },

    #[error("quadrature failed to reach relative tolerance {requested:.3e}: achieved estimate {achieved:.3e}")]
    QuadratureTolerance { achieved: f64, requested: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("off-ladder index: radicand {radicand:.3e} is negative for (l, k) = ({l}, {k})")]
    OffLadder { l: String, k: String, radicand: f64 },

    #[error("internal consistency failure: reconstruction residual {residual:.3e} exceeds {tol:.3e}")]
    Reconstruction { residual: f64, tol: f64 },

    #[error("integer overflow in lattice arithmetic")]
    Overflow,

    #[error("determinism violation: config hash {config_hash} maps to conflicting values")]
    Determinism { config_hash: String },

    #[error("observable `{observable}` failed at parameter {parameter}: {detail}")]
    SweepObservable { observable: String, parameter: f64, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
