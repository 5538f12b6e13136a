use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConeError {
    #[error("quadrature stalled above tolerance {tol:.3e}: estimate {estimate:.9e}, error bound {error:.3e}")]
    ToleranceFailure {
        estimate: f64,
        error: f64,
        tol: f64,
    },
    #[error("mode kernel precondition violated: {0}")]
    BadModeArguments(String),
    #[error("grid touches the cone axis: smallest radius {0}")]
    AxisTouched(f64),
    #[error("grid is malformed: {0}")]
    BadGrid(String),
    #[error("derivative spec is malformed: {0}")]
    BadSpec(String),
    #[error("sample family is degenerate: {0}")]
    DegenerateFamily(String),
}
