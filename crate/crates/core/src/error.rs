use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("numerical breakdown in inertia factorization at shift {shift}")]
    NumericalBreakdown { shift: f64 },

    #[error("step size underflow at t = {t} (problem too stiff for the explicit integrator)")]
    Stiffness { t: f64 },

    #[error("no sign change on [{a}, {b}]: f(a) = {fa}, f(b) = {fb}")]
    Bracket { a: f64, b: f64, fa: f64, fb: f64 },

    #[error("Mathieu truncation did not converge for p = {p} (last cutoff K = {modes})")]
    Truncation { p: f64, modes: usize },

    #[error("potential is singular at ({x}, {y})")]
    Singularity { x: f64, y: f64 },

    #[error("shooting start radius {r0} exceeds the series-validity limit {limit}")]
    SeedAccuracy { r0: f64, limit: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
