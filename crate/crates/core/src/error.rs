use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("support overflow: index {index:?} outside box [-{bound}, {bound}]")]
    SupportOverflow { index: Vec<i32>, bound: i32 },
    #[error("context mismatch: operands belong to different torus contexts")]
    ContextMismatch,
    #[error("axis {axis} out of range for dimension {n}")]
    AxisOutOfRange { axis: usize, n: usize },
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("not self-adjoint: residual {residual:e}")]
    NotSelfAdjoint { residual: f64 },
    #[error("truncation budget exceeded: tail mass {tail:e} > budget {budget:e}")]
    TruncationBudget { tail: f64, budget: f64 },
    #[error("not invertible by Neumann series: {0}")]
    NotInvertible(String),
    #[error("metric inversion failed after {iterations} iterations (residual {residual:e})")]
    MetricInversionFailed { iterations: usize, residual: f64 },
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("not commutative: evaluation requires theta = 0")]
    NotCommutative,
    #[error("invalid representation: {0}")]
    InvalidRepresentation(String),
    #[error("theta mismatch: context theta {context} differs from representation {p}/{q}")]
    ThetaMismatch { context: f64, p: i64, q: i64 },
    #[error("malformed element data: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
