use thiserror::Error;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("attempted to invert zero")]
    InverseOfZero,
    #[error("domain of size 2^{log_size} exceeds the field's two-adicity")]
    DomainTooLarge { log_size: u32 },
    #[error("expected {expected} values for the evaluation domain, got {actual}")]
    DomainSizeMismatch { expected: usize, actual: usize },
    #[error("polynomial is not divisible by the vanishing polynomial")]
    NotDivisibleByVanishing,
    #[error("{used} used rows plus {blinders} blinders do not fit in {size} rows")]
    NotEnoughBlindingRoom { used: usize, blinders: usize, size: usize },

    #[error("polynomial of degree {degree} exceeds bound {bound}")]
    DegreeBoundExceeded { degree: usize, bound: usize },
    #[error("claimed evaluation does not match the polynomial")]
    ClaimedValueWrong,
    #[error("malformed encoding: {0}")]
    ProofDecode(String),
    #[error("the trapdoor KZG scheme is only available in test builds")]
    TrapdoorSchemeForbidden,

    #[error("gate `{gate}` uses challenge {challenge} before it is issued")]
    ChallengeBeforeIssue { gate: String, challenge: usize },
    #[error("cell {0} already belongs to another cycle")]
    CycleOverlap(String),
    #[error("gate `{gate}` has degree {degree}, above the declared bound {bound}")]
    DegreeTooHigh { gate: String, degree: usize, bound: usize },
    #[error("gate `{gate}` uses rotation {rotation}, only -1..=1 is supported")]
    RotationOutOfRange { gate: String, rotation: i32 },
    #[error("cell {cell} is outside the {usable} usable rows")]
    RowOutOfRange { cell: String, usable: usize },
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("circuit needs {needed} commitment generators, key has {available}")]
    DegreeCapacityExceeded { needed: usize, available: usize },
    #[error("witness does not satisfy the circuit constraints")]
    UnsatisfiedConstraint,
    #[error("transcript message for phase {got} arrived while phase {current} is open")]
    TranscriptOutOfOrder { current: u8, got: u8 },
    #[error("assignment does not match the circuit shape: {0}")]
    ShapeMismatch(String),
    #[error("proof rejected: {0}")]
    VerificationFailed(String),

    #[error("Horner layout needs {needed} rows, only {available} are usable")]
    NoRoomForHornerRows { needed: usize, available: usize },
    #[error("witness layout mismatch: {0}")]
    LayoutMismatch(String),
    #[error("committed witness cells disagree with external commitment {0}")]
    WitnessCommitmentMismatch(usize),
    #[error("committed witness of {len} values does not fit in a column of {usable} usable rows")]
    WitnessTooLargeForColumn { len: usize, usable: usize },
    #[error("hash baseline needs {needed} rows, only {available} are usable")]
    NoRoomForHashRows { needed: usize, available: usize },

    #[error("model needs {needed} rows, domain offers {available} usable rows")]
    ModelTooLargeForDomain { needed: usize, available: usize },
    #[error("fixed-point value {0} overflows the supported range")]
    FixedPointOverflow(i128),
    #[error("invalid model: {0}")]
    InvalidModel(String),
}

pub type Result<T> = std::result::Result<T, Error>;
