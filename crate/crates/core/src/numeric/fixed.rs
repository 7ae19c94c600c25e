//! Fixed-point helpers.

use crate::error::{Error, Result};
use crate::ring::{mask, RingParams, Scheme, SharedSecret};
use crate::transport::Network;

/// Real number `raw / 2^frac`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FixedPoint {
    pub raw: i128,
    pub frac: u32,
}

impl FixedPoint {
    pub fn new(raw: i128, frac: u32) -> Self {
        Self { raw, frac }
    }

    /// Nearest grid point to `value`.
    pub fn from_f64(value: f64, frac: u32) -> Self {
        Self { raw: (value * scale(frac)).round() as i128, frac }
    }

    pub fn to_f64(self) -> f64 {
        self.raw as f64 / scale(self.frac)
    }
}

pub fn scale(frac: u32) -> f64 {
    2f64.powi(frac as i32)
}

/// Encrypts a signed fixed-point value additively without modulus.
///
/// The plaintext is stored in offset binary, `raw + 2^(l-1)`, so it is a
/// non-negative `l`-bit integer; `ring.frac` records the fraction bits.
pub fn encrypt_signed(net: &mut Network, value: FixedPoint, ring: RingParams) -> Result<SharedSecret> {
    let ring = RingParams { frac: value.frac, ..ring };
    ring.validate()?;
    let encoded = value.raw + offset(ring.l) as i128;
    if encoded < 0 || encoded as u128 > mask(ring.l) {
        return Err(Error::PlaintextOutOfRange { value: value.raw.unsigned_abs(), bits: ring.l - 1 });
    }
    net.input(encoded as u128, Scheme::PureAdditive, ring)
}

/// Offset of the offset-binary encoding in an `l`-bit ring.
pub fn offset(l: u32) -> u128 {
    1u128 << (l - 1)
}

/// Harness decryption of an offset-binary secret.
pub fn decrypt_signed_offset(net: &Network, x: &SharedSecret) -> FixedPoint {
    let raw = net.decrypt(x) as i128 - offset(x.bits()) as i128;
    FixedPoint { raw, frac: x.ring().frac }
}

/// Harness decryption of a two's-complement additive secret with `frac`
/// fraction bits.
pub fn decrypt_fixed(net: &Network, x: &SharedSecret, frac: u32) -> f64 {
    net.decrypt_signed(x) as f64 / scale(frac)
}
