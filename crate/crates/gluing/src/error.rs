use thiserror::Error;

#[derive(Debug, Error)]
pub enum GluingError {
    #[error("cutoff slope must lie strictly between 0 and 2, got {0}")]
    BadSlope(f64),
    #[error("parameter search exhausted while enforcing {inequality}: worst margin {margin:.3e} at x = {worst_x:.6}")]
    SearchExhausted {
        inequality: &'static str,
        worst_x: f64,
        margin: f64,
    },
    #[error("profile is malformed: {0}")]
    BadProfile(String),
    #[error("grid precondition violated: {0}")]
    GridPrecondition(String),
    #[error("potential difference must vanish to second order along the divisor, estimated order {0:.3}")]
    VanishingOrder(f64),
}
