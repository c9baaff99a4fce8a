use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid range: a = {a} must be smaller than b = {b}")]
    InvalidRange { a: f64, b: f64 },
    #[error("invalid count: {0} must be at least 1")]
    InvalidCount(&'static str),
    #[error("invalid polynomial degree {0}, expected k >= 1")]
    InvalidDegree(usize),
    #[error("forcing is not finite at ({x}, {y}), t = {t}")]
    NonFiniteForcing { x: f64, y: f64, t: f64 },
    #[error("data is not finite at ({x}, {y})")]
    NonFiniteData { x: f64, y: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("singular system: the space has no free nodes")]
    SingularSystem,
    #[error("solver did not converge in {iterations} iterations (relative residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("matrix is not positive definite (curvature {curvature:e} at iteration {iteration})")]
    NotSpd { iteration: usize, curvature: f64 },
    #[error("degenerate nonlocal coefficient: squared norm {energy:e} with gamma = {gamma}")]
    DegenerateCoefficient { energy: f64, gamma: f64 },
    #[error("identical inputs: the difference has zero norm")]
    IdenticalInputs,
    #[error("gamma = 0 has no separated solution of this family")]
    GammaZero,
    #[error("time {t} lies outside the domain of l(t) for gamma = {gamma}, C = {c}")]
    OutsideTimeDomain { gamma: f64, c: f64, t: f64 },
    #[error("alpha must be positive, got {0}")]
    NonpositiveAlpha(f64),
    #[error("lambda = {0} must lie in (0, 1)")]
    LambdaOutOfRange(f64),
    #[error("no sign change of alpha - G(alpha) over [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
    #[error("root finding did not converge in {0} iterations")]
    RootNoConvergence(usize),
    #[error("guard violation ({status}) at step {step}, t = {t}: coefficient {value:e}")]
    GuardAbort {
        step: usize,
        t: f64,
        value: f64,
        status: crate::nonlocal::GuardStatus,
    },
    #[error("step {step} (t = {t}): {source}")]
    Step {
        step: usize,
        t: f64,
        #[source]
        source: Box<Error>,
    },
    #[error("{0}")]
    Numerical(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("io error at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn at_step(self, step: usize, t: f64) -> Error {
        match self {
            e @ (Error::Step { .. } | Error::GuardAbort { .. }) => e,
            other => Error::Step {
                step,
                t,
                source: Box::new(other),
            },
        }
    }

    /// Process exit code for the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_)
            | Error::InvalidRange { .. }
            | Error::InvalidCount(_)
            | Error::InvalidDegree(_)
            | Error::LambdaOutOfRange(_)
            | Error::NonpositiveAlpha(_) => 2,
            Error::Io { .. } => 4,
            Error::Step { source, .. } => source.exit_code(),
            _ => 3,
        }
    }
}
