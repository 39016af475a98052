use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not a prime (or does not fit in a byte)")]
    NotPrime(u32),
    #[error("entry {value} out of range for modulus {modulus}")]
    EntryOutOfRange { value: u32, modulus: u8 },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("modulus mismatch: {0} vs {1}")]
    ModulusMismatch(u8, u8),
    #[error("invalid Pauli string: {0}")]
    InvalidPauli(String),
    #[error("invalid stabilizer group: {0}")]
    InvalidStabilizer(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("a group needs at least one site")]
    NoSites,
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("graph is not bipartite: odd cycle through vertex {}", .0 + 1)]
    NotBipartite(usize),
    #[error("invalid two-coloring: {0}")]
    InvalidColoring(String),
    #[error("the n-tangle is undefined for an odd number of qubits (n = {0})")]
    OddQubitCount(usize),
    #[error("invalid coefficient table: {0}")]
    InvalidCoefficients(String),
    #[error("state has zero norm")]
    ZeroNorm,
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("state with {amplitudes} amplitudes exceeds the oracle guard of {guard}")]
    GuardExceeded { amplitudes: u128, guard: usize },
    #[error("quotient of dimension {0} is too large to enumerate")]
    TooLarge(usize),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("operation requires qubits, got local dimension {0}")]
    UnsupportedDimension(u32),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}
