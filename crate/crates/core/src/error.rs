use alloc::string::String;
use alloc::vec::Vec;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("invalid integrator options: {0}")]
    InvalidOptions(String),

    #[error("integration exceeded {max_steps} steps (reached x = {x})")]
    StepLimitExceeded { max_steps: usize, x: f64 },

    #[error("step size underflow at x = {x}")]
    StepSizeUnderflow { x: f64 },

    #[error("non-finite state at x = {x}")]
    NonFiniteState { x: f64 },

    #[error("operation requires a piecewise-constant potential")]
    WrongKind,

    #[error("z = {re}{im:+}i is numerically a zero of s(1;z) (|s| = {s_abs:e})")]
    DirichletSingularity { re: f64, im: f64, s_abs: f64 },

    #[error("could not bracket {what}: {detail}")]
    BracketFailure {
        what: String,
        detail: String,
        /// `(λ, f(λ))` samples taken while scanning.
        scan: Vec<(f64, f64)>,
    },

    #[error("band structure invariant violated: {0}")]
    InvariantViolation(String),

    #[error("inconsistent gap classification at μ = {mu}: |Δ'| = {delta_p:e}, |c'(1)| = {c1p:e}")]
    InconsistentClassification { mu: f64, delta_p: f64, c1p: f64 },

    #[error("residue estimate unstable at {pole} (defect {defect:e})")]
    UnstableResidue { pole: f64, defect: f64 },

    #[error("Bloch truncation did not converge: eigenvalue moved by {shift:e} at K = {k}")]
    TruncationUnconverged { k: usize, shift: f64 },

    #[error("finite-difference mesh too coarse: Richardson defect {defect:e}")]
    MeshTooCoarse { defect: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
