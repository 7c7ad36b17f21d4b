use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix dimension {rows}x{cols} is not a power-of-two register size up to 16")]
    InvalidDimension { rows: usize, cols: usize },
    #[error("kronecker product dimension {0} exceeds 16")]
    DimensionOverflow(usize),
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),
    #[error("operator is not a +/-1 observable: {0}")]
    NotObservable(String),
    #[error("qubit index {qubit} out of range for a {n}-qubit register")]
    QubitOutOfRange { qubit: usize, n: usize },
    #[error("register of {0} qubits is not supported (expected 2..=4)")]
    UnsupportedRegister(usize),
    #[error("invalid qubit index set {0:?}")]
    InvalidQubitSet(Vec<usize>),
    #[error("state vector has zero norm")]
    ZeroVector,
    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),
    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("duplicate basis term |{0}>")]
    DuplicateTerm(String),
    #[error("inconsistent bitstring lengths: |{0}> vs {1} qubits")]
    InconsistentBits(String, usize),
    #[error("pair members share qubit {0}")]
    QubitCollision(usize),
    #[error("pair {0} / {1} is not an opposite-sex pair")]
    SameSexPair(String, String),
    #[error("roster needs at least one participant of each sex")]
    SingleSexRoster,
    #[error("participant {0} is not in the roster")]
    UnknownParticipant(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("chain lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("objective is not linear in the state; use a search routine")]
    NonlinearObjective,
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("unknown report format {0:?}")]
    UnknownFormat(String),
    #[error("unknown registry state {0:?}")]
    UnknownState(String),
    #[error("no records to report")]
    EmptyRecords,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}
