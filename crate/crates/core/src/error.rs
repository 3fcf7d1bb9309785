use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("order is not antisymmetric: `{0}` <= `{1}` and `{1}` <= `{0}`")]
    Cycle(String, String),
    #[error("{count} elements exceeds the cap of {cap}")]
    TooManyElements { count: usize, cap: usize },
    #[error("`{0}` and `{1}` have no unique greatest lower bound")]
    NoMeet(String, String),
    #[error("`{0}` and `{1}` have no unique least upper bound")]
    NoJoin(String, String),

    #[error("hypothesis space needs at least one atom")]
    EmptySpace,
    #[error("duplicate atom `{0}`")]
    DuplicateAtom(String),
    #[error("invalid atom name `{0}`: atoms are single ASCII letters other than `v`")]
    InvalidAtom(String),
    #[error("{n} atoms exceeds the cap of {cap}")]
    TooManyAtoms { n: usize, cap: usize },
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("values belong to different hypothesis spaces")]
    SpaceMismatch,
    #[error("the absurd statement cannot generate a question")]
    AbsurdStatement,
    #[error("answer set is not downward closed")]
    NotDownwardClosed,
    #[error("the question has no answers")]
    VacuousQuestion,

    #[error("empty expression")]
    EmptyExpression,
    #[error("empty term at byte {0}")]
    EmptyTerm(usize),
    #[error("unexpected character `{ch}` at byte {pos}")]
    UnexpectedChar { ch: char, pos: usize },

    #[error("enumeration over {n} atoms requires the n = 6 override (default cap {cap})")]
    CapacityExceeded { n: usize, cap: usize },

    #[error("weight for `{0}` must be positive")]
    NonPositiveWeight(String),
    #[error("offset must be positive")]
    NonPositiveOffset,
    #[error("expected {expected} weights, got {got}")]
    WeightCount { expected: usize, got: usize },
    #[error("context `{0}` has zero measure")]
    ZeroMeasureContext(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}

impl Error {
    /// True for errors caused by a size cap rather than malformed input.
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::TooManyElements { .. } | Error::TooManyAtoms { .. } | Error::CapacityExceeded { .. })
    }
}
