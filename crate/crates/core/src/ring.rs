//! Ring parameters, the three linear encryption schemes and the shares that
//! make up a secret.
//!
//! Bits are indexed little-endian everywhere: bit 0 of `10` is 0, bit 1 is 1.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};

/// Largest supported plaintext width.
pub const MAX_BITS: u32 = 62;

/// Logical round index on the simulated network. Round 0 is "before any
/// communication".
pub type Round = u32;

/// Identity linking a ciphertext to its matching key. Assigned by the
/// harness; never part of a protocol payload.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SecretId(pub u64);

impl fmt::Display for SecretId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// The three linear encryptions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// `a + K` over the integers.
    PureAdditive,
    /// `(a + K) mod 2^l`.
    AdditiveMod,
    /// `a ^ K`.
    Xor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RingParams {
    /// Plaintext bit width.
    pub l: u32,
    /// Key bit width; only differs from `l` for purely additive encryption.
    pub b: u32,
    /// Sign bits assumed for two's-complement comparisons.
    pub n_s: u32,
    /// Fixed-point fractional bits (0 for integers).
    pub frac: u32,
}

impl RingParams {
    pub fn new(l: u32) -> Result<Self> {
        Self::with_key_bits(l, l)
    }

    pub fn with_key_bits(l: u32, b: u32) -> Result<Self> {
        let ring = Self { l, b, n_s: 1, frac: 0 };
        ring.validate()?;
        Ok(ring)
    }

    pub fn with_sign_bits(mut self, n_s: u32) -> Result<Self> {
        self.n_s = n_s;
        self.validate()?;
        Ok(self)
    }

    pub fn with_frac(mut self, frac: u32) -> Result<Self> {
        self.frac = frac;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if self.l == 0 || self.l > MAX_BITS {
            return Err(Error::InvalidRing(format!("l = {} outside [1, {MAX_BITS}]", self.l)));
        }
        if self.b < self.l || self.b > MAX_BITS {
            return Err(Error::InvalidRing(format!(
                "key width b = {} must satisfy l = {} <= b <= {MAX_BITS}",
                self.b, self.l
            )));
        }
        if self.n_s == 0 {
            return Err(Error::InvalidRing("n_s must be at least 1".into()));
        }
        if self.frac >= self.l {
            return Err(Error::InvalidRing(format!("frac = {} must be below l = {}", self.frac, self.l)));
        }
        Ok(())
    }

    /// Ring of a single bit.
    pub const fn bit() -> Self {
        Self { l: 1, b: 1, n_s: 1, frac: 0 }
    }

    /// `2^l - 1`.
    pub fn mask(&self) -> u128 {
        mask(self.l)
    }

    /// Exclusive upper bound of the key range for `scheme`.
    pub fn key_bound(&self, scheme: Scheme) -> u128 {
        match scheme {
            Scheme::PureAdditive => 1u128 << self.b,
            Scheme::AdditiveMod | Scheme::Xor => 1u128 << self.l,
        }
    }

    /// Width in bits of a ciphertext under `scheme` (`l_E`).
    pub fn ciphertext_bits(&self, scheme: Scheme) -> u32 {
        match scheme {
            Scheme::PureAdditive => self.b + 1,
            Scheme::AdditiveMod | Scheme::Xor => self.l,
        }
    }
}

/// `2^bits - 1`.
#[inline]
pub fn mask(bits: u32) -> u128 {
    if bits >= 128 {
        u128::MAX
    } else {
        (1u128 << bits) - 1
    }
}

#[inline]
pub fn bit(value: u128, i: u32) -> u128 {
    (value >> i) & 1
}

/// Interprets the low `bits` bits of `value` as a two's-complement integer.
#[inline]
pub fn to_signed(value: u128, bits: u32) -> i128 {
    let v = value & mask(bits);
    if bits > 0 && bit(v, bits - 1) == 1 {
        v as i128 - (1i128 << bits)
    } else {
        v as i128
    }
}

/// Reduces a signed integer into `[0, 2^bits)`.
#[inline]
pub fn from_signed(value: i128, bits: u32) -> u128 {
    (value as u128) & mask(bits)
}

/// Number of bits needed to write `v` (0 for 0).
#[inline]
pub fn bit_len(v: u128) -> u32 {
    128 - v.leading_zeros()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Ciphertext {
    pub value: u128,
    pub scheme: Scheme,
    pub ring: RingParams,
    pub secret_id: SecretId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KeyShare {
    pub value: u128,
    pub scheme: Scheme,
    pub ring: RingParams,
    pub secret_id: SecretId,
}

impl KeyShare {
    /// Uniform key on `[0, 2^b)` (purely additive) or `[0, 2^l)` (others).
    pub fn sample<R: Rng + ?Sized>(ring: RingParams, scheme: Scheme, secret_id: SecretId, rng: &mut R) -> Self {
        let value = rng.gen::<u128>() & (ring.key_bound(scheme) - 1);
        Self { value, scheme, ring, secret_id }
    }
}

/// Samples a key for a secret the harness has not named yet.
pub fn sample_key<R: Rng + ?Sized>(ring: RingParams, scheme: Scheme, rng: &mut R) -> KeyShare {
    KeyShare::sample(ring, scheme, SecretId(u64::MAX), rng)
}

pub fn encrypt(a: u128, key: &KeyShare) -> Result<Ciphertext> {
    let ring = key.ring;
    if a > ring.mask() {
        return Err(Error::PlaintextOutOfRange { value: a, bits: ring.l });
    }
    if key.value >= ring.key_bound(key.scheme) {
        return Err(Error::PlaintextOutOfRange { value: key.value, bits: ring.b });
    }
    let value = match key.scheme {
        Scheme::PureAdditive => a + key.value,
        Scheme::AdditiveMod => (a + key.value) & ring.mask(),
        Scheme::Xor => a ^ key.value,
    };
    Ok(Ciphertext { value, scheme: key.scheme, ring, secret_id: key.secret_id })
}

pub fn decrypt(ciphertext: &Ciphertext, key: &KeyShare) -> Result<u128> {
    if ciphertext.secret_id != key.secret_id {
        return Err(Error::SecretMismatch { ciphertext: ciphertext.secret_id, key: key.secret_id });
    }
    if ciphertext.scheme != key.scheme {
        return Err(Error::SchemeMismatch { expected: ciphertext.scheme, found: key.scheme });
    }
    Ok(raw_decrypt(ciphertext.scheme, ciphertext.ring, ciphertext.value, key.value))
}

pub(crate) fn raw_decrypt(scheme: Scheme, ring: RingParams, e: u128, k: u128) -> u128 {
    match scheme {
        // Wrapping keeps malformed shares (violated preconditions) observable
        // instead of panicking.
        Scheme::PureAdditive => e.wrapping_sub(k),
        Scheme::AdditiveMod => e.wrapping_sub(k) & ring.mask(),
        Scheme::Xor => (e ^ k) & ring.mask(),
    }
}

/// A secret split between the EVH (ciphertext) and the KH (key).
///
/// `ready` is the round after which both halves are available; protocols
/// use it to place their messages on the network clock.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SharedSecret {
    pub ciphertext: Ciphertext,
    pub key: KeyShare,
    pub ready: Round,
}

impl SharedSecret {
    pub fn id(&self) -> SecretId {
        self.ciphertext.secret_id
    }

    pub fn scheme(&self) -> Scheme {
        self.ciphertext.scheme
    }

    pub fn ring(&self) -> RingParams {
        self.ciphertext.ring
    }

    /// Ciphertext value (EVH side).
    pub fn e(&self) -> u128 {
        self.ciphertext.value
    }

    /// Key value (KH side).
    pub fn k(&self) -> u128 {
        self.key.value
    }

    pub fn bits(&self) -> u32 {
        self.ring().l
    }
}
