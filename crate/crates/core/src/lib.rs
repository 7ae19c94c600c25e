//! Three-party secure computation in the key-holder / encrypted-value-holder /
//! helper model.
//!
//! A secret `a` is split into a ciphertext held by the encrypted value holder
//! (EVH) and a key held by the key holder (KH), using one of three linear
//! encryptions: purely additive (`a + K`), additive modulo `2^l`
//! (`(a + K) mod 2^l`) or XOR (`a ^ K`). A helper (HE) assists protocols but may
//! never hold a ciphertext together with its matching key.
//!
//! All parties run inside one process on top of [`transport::Network`], which
//! meters rounds and bits per party pair and records what every party has
//! seen so that [`transport::Network::assert_views_legal`] can check the
//! access rule after a run.
//!
//! Modules:
//!
//! * [`ring`]: ring parameters, the three schemes, keys, ciphertexts.
//! * [`transport`]: the simulated network, cost meter and party views.
//! * [`primitives`]: multiplication, AND gates, powers, re-encryption.
//! * [`conversions`]: switching between the three schemes.
//! * [`logic`]: Hamming distance, fan-in AND, equality and sign tests, carry bits.
//! * [`numeric`]: MSB index, division and logarithm, public-constant arithmetic,
//!   sine, cosine and tangent.
//! * [`oracle`]: plaintext reference semantics and exhaustive checkers.
//! * [`harness`]: runs any operation by name on sampled inputs (used by the
//!   oracle checker and the benchmark driver).

pub mod config;
pub mod conversions;
pub mod error;
pub mod harness;
pub mod logic;
pub mod numeric;
pub mod oracle;
pub mod primitives;
pub mod ring;
pub mod transport;

pub use config::{CarryMethod, FanInStrategy, Settings};
pub use error::{Error, Result};
pub use ring::{Ciphertext, KeyShare, RingParams, Scheme, SecretId, SharedSecret};
pub use transport::{CostMeter, Network, PartyId};
