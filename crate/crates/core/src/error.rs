use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared by all modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus must be an odd integer >= 3, got {0}")]
    BadModulus(String),

    #[error("value is not a unit modulo n")]
    NotAUnit,

    #[error("ciphertext out of range for this key")]
    CiphertextRange,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("sampling gave up after {attempts} attempts: {what}")]
    SamplingExhausted { what: &'static str, attempts: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid hex string: {0}")]
    InvalidHex(String),

    #[error("circuit error: {0}")]
    Circuit(String),

    #[error("gate kind {kind} is not supported here")]
    UnsupportedGate { kind: &'static str },

    #[error("multiplicative depth {depth} exceeds capacity {capacity}")]
    DepthExceeded { depth: u32, capacity: u32 },

    #[error("plaintext is outside the scheme's plaintext space")]
    PlaintextRange,

    #[error("distribution error: {0}")]
    Distribution(String),

    #[error("morphism maps {0} outside the target support")]
    MorphismImage(String),

    #[error("fiber over an event of probability zero")]
    EmptyFiber,

    #[error("bridge error: {0}")]
    Bridge(String),

    #[error("game error: {0}")]
    Game(String),
}
