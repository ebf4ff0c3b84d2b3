use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("probabilities invalid: {0}")]
    BadProbabilities(String),
    #[error("increment law does not have zero mean: mean = ({0:.3e}, {1:.3e})")]
    NotZeroMean(f64, f64),
    #[error("increment law is not irreducible on Z^2: {0}")]
    NotIrreducible(String),
    #[error("argument outside domain: {0}")]
    Domain(String),
    #[error("singular arguments: {0}")]
    SingularArguments(String),
    #[error("point {0} lies on the slit [-1, 1]")]
    OnSlit(String),
    #[error("quadrature failed to reach tolerance: estimate {value:.6e}, error {error:.3e}")]
    QuadratureFailure { value: f64, error: f64 },
    #[error("linear system singular or ill-conditioned (condition estimate {0:.3e})")]
    SingularSystem(f64),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("tail budget infeasible: {0}")]
    BudgetInfeasible(String),
    #[error("operator series did not converge: {0}")]
    SeriesNotConverged(String),
    #[error("iteration did not converge: {0}")]
    NotConverged(String),
    #[error("operation requires the simple random walk, got '{0}'")]
    WrongWalk(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
