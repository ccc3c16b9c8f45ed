use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not unitary (deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("Kraus operators are not complete (deviation {deviation:.3e})")]
    IncompleteChannel { deviation: f64 },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("unknown qubit `{0}`")]
    UnknownQubit(String),

    #[error("qubit `{0}` listed more than once")]
    DuplicateQubit(String),

    #[error("empty qubit selection")]
    EmptySelection,

    #[error("{qubits} qubits exceed the density-matrix cap of {cap}; use the trajectory backend")]
    DensityCapExceeded { qubits: usize, cap: usize },

    #[error("{qubits} qubits exceed the trajectory cap of {cap}")]
    TrajectoryCapExceeded { qubits: usize, cap: usize },

    #[error("no readout entry for measured qubit `{0}`")]
    MissingReadout(String),

    #[error("invalid probability {name} = {value}")]
    InvalidProbability { name: &'static str, value: f64 },

    #[error("unphysical relaxation times: T2 = {t2} us exceeds 2*T1 = {}", 2.0 * t1)]
    Unphysical { t1: f64, t2: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("gate `{0}` has no unitary matrix")]
    NotUnitaryGate(String),

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("invalid device: {0}")]
    InvalidDevice(String),

    #[error("no path from `{from}` to `{to}`")]
    Unreachable { from: String, to: String },

    #[error("route does not fit the device: {0}")]
    RouteMismatch(String),

    #[error("invalid plan: {0}")]
    InvalidPlan(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("no accepted shots")]
    NoAcceptedShots,

    #[error("missing cell `{0}`")]
    MissingCell(String),

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("counts document: {0}")]
    Schema(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
