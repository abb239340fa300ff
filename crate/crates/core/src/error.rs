use thiserror::Error;

use crate::label::Label;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not Hermitian (deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("element `{label}` is not positive semidefinite (smallest eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { label: Label, min_eigenvalue: f64 },

    #[error("ensemble is not normalized: total trace {total}")]
    NotNormalized { total: f64 },

    #[error("effect `{label}` lies outside [0, 1] (spectrum [{min:.3e}, {max:.3e}])")]
    NotEffect { label: Label, min: f64, max: f64 },

    #[error("effects do not sum to the identity (max deviation {deviation:.3e})")]
    NotPovm { deviation: f64 },

    #[error("density operator invalid: {reason}")]
    NotState { reason: String },

    #[error("labels do not match: {0}")]
    LabelMismatch(String),

    #[error("duplicate label `{0}`")]
    DuplicateLabel(Label),

    #[error("invalid partition: {0}")]
    BadPartition(String),

    #[error("block {0} has zero weight")]
    EmptyBlock(usize),

    #[error("measurement outcomes are not {expected}-tuples")]
    NotProductOutcomes { expected: usize },

    #[error("eigensolver did not converge (off-diagonal residual {residual:.3e})")]
    EigenFailure { residual: f64 },

    #[error("closed-form optimum not applicable: {0}")]
    NotApplicable(String),

    #[error("optimality condition unavailable: the top eigenprojections do not sum to a multiple of the identity")]
    ConditionUnavailable,

    #[error("numeric solver did not converge (best value {best:.9}, certificate gap {gap:.3e})")]
    NoConvergence { best: f64, gap: f64 },

    #[error("product outcome set has {count} tuples, above the cap of {cap}")]
    SizeOverflow { count: u128, cap: usize },

    #[error("measurement outcomes do not form the product of the partition blocks")]
    OutcomeShapeMismatch,

    #[error("default guess `{label}` is not in block {block}")]
    BadDefault { block: usize, label: Label },

    #[error("blocks do not share a common outcome alphabet: {0}")]
    AlphabetMismatch(String),

    #[error("invalid noise distribution: {0}")]
    BadDistribution(String),

    #[error("invalid arguments: {0}")]
    BadArgs(String),

    #[error("prior is not uniform (max deviation {deviation:.3e})")]
    NonUniformPrior { deviation: f64 },

    #[error("wrong shape: {0}")]
    WrongShape(String),

    #[error("angle {0} is outside (0, pi)")]
    BadAngle(f64),

    #[error("invalid weights: {0}")]
    BadWeights(String),

    #[error("{path}: parse error at `{location}`: {message}")]
    Parse {
        path: String,
        location: String,
        message: String,
    },

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}
