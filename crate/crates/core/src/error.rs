use thiserror::Error;

/// Coarse classification used by front ends to pick an exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed or out-of-range input.
    Input,
    /// A structural contract between two inputs failed (e.g. tree leaves vs graph).
    Contract,
    /// The instance exceeds a configured size cap.
    ResourceCap,
    /// An iterative procedure failed to converge or hit an internal limit.
    Numerical,
}

#[derive(Debug, Error)]
pub enum HcError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid generator spec: {0}")]
    InvalidGenerator(String),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid cost function: {0}")]
    InvalidCostFunction(String),

    #[error("tree leaves do not match graph vertices: {0}")]
    LeafMismatch(String),

    #[error("level {t} out of range [0, {max}]")]
    LevelOutOfRange { t: usize, max: usize },

    #[error("invalid cut: {0}")]
    InvalidCut(String),

    #[error("{what}: n = {n} exceeds cap {cap}")]
    OverCap { what: &'static str, n: usize, cap: usize },

    #[error("{0}")]
    TooSmall(String),

    #[error("eigenpair iteration did not reach tolerance {tol:e} within {iters} matvecs (residual {residual:e})")]
    EigenNoConvergence { tol: f64, iters: usize, residual: f64 },

    #[error("linear program: {0}")]
    Lp(String),

    #[error("constraint generation hit the round limit ({0} rounds)")]
    IterationLimit(usize),

    #[error("all distances are zero; no ball cut exists")]
    ZeroDiameter,

    #[error("ball cut bound violated: cut {cut} > bound {bound}")]
    BallBound { cut: f64, bound: f64 },

    #[error("assignment is missing {0} (pair, level) entries")]
    MissingEntries(usize),

    #[error("assignment failed validation: {0}")]
    Infeasible(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl HcError {
    pub fn kind(&self) -> ErrorKind {
        match self {
            HcError::Parse { .. }
            | HcError::InvalidGraph(_)
            | HcError::InvalidGenerator(_)
            | HcError::InvalidTree(_)
            | HcError::InvalidCostFunction(_)
            | HcError::LevelOutOfRange { .. }
            | HcError::InvalidCut(_)
            | HcError::TooSmall(_)
            | HcError::MissingEntries(_)
            | HcError::Io(_) => ErrorKind::Input,
            HcError::LeafMismatch(_) | HcError::Infeasible(_) | HcError::BallBound { .. } => {
                ErrorKind::Contract
            }
            HcError::OverCap { .. } => ErrorKind::ResourceCap,
            HcError::EigenNoConvergence { .. }
            | HcError::Lp(_)
            | HcError::IterationLimit(_)
            | HcError::ZeroDiameter => ErrorKind::Numerical,
        }
    }
}

pub type Result<T> = std::result::Result<T, HcError>;
