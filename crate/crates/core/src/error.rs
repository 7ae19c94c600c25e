use thiserror::Error;

use crate::ring::{Scheme, SecretId};

/// Errors raised by ring arithmetic, the simulated transport and the protocols.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid ring parameters: {0}")]
    InvalidRing(String),
    #[error("plaintext {value} does not fit in {bits} bits")]
    PlaintextOutOfRange { value: u128, bits: u32 },
    #[error("scheme mismatch: expected {expected:?}, found {found:?}")]
    SchemeMismatch { expected: Scheme, found: Scheme },
    #[error("ciphertext belongs to secret {ciphertext:?} but key belongs to {key:?}")]
    SecretMismatch { ciphertext: SecretId, key: SecretId },
    #[error("payload of {actual} bits exceeds declared width {declared}")]
    WidthMismatch { declared: u32, actual: u32 },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("domain error: {0}")]
    Domain(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
