use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("boundary angles give sin(beta - alpha) = {0:e}; the free operator has a zero eigenvalue")]
    DegenerateBoundary(f64),

    #[error("zero potential")]
    ZeroPotential,

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("evaluation at sigma1 pole lambda = {0}")]
    PoleProximity(f64),

    #[error("lambda = {lambda} is not a root of the characteristic function (|delta| = {residual:e})")]
    NotARoot { lambda: f64, residual: f64 },

    #[error("trivial eigenfunction at lambda = {0}")]
    TrivialEigenfunction(f64),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("assembly/root mismatch: {0}")]
    AssemblyMismatch(String),

    #[error("product not converged: {0}")]
    ProductNotConverged(String),

    #[error("multiplicity-2 datum unsupported in residue recovery (double point at {0})")]
    DoublePoint(f64),

    #[error("residue routes disagree at k = {k}: product {product:e}, limit {limit:e}")]
    ResidueMismatch { k: i64, product: f64, limit: f64 },

    #[error("inconsistent spectral data: {0}")]
    InconsistentData(String),

    #[error("shift coefficient vanishes at k = {0}")]
    VanishingShift(i64),

    #[error("indeterminate sign: no shifted eigenvalues in either spectrum")]
    IndeterminateSign,

    #[error("characteristic function vanishes at the origin (|delta(0)| = {0:e}); shift the spectral variable")]
    ZeroAtOrigin(f64),

    #[error("spectral pairing failed: {0}")]
    Pairing(String),

    #[error("not realizable: {0}")]
    NotRealizable(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
