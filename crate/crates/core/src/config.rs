//! Run-wide switches shared by every protocol on a [`Network`](crate::Network).

use crate::error::{Error, Result};

/// How carry bits of `E = a + K` are obtained.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CarryMethod {
    /// Fan-in gate network over the bits of `E` and `K`. Deterministic.
    #[default]
    Boolean,
    /// One less-than-zero comparison of `E mod 2^i` against `K mod 2^i` per bit.
    Comparison,
}

/// Strategy for fan-in AND (and therefore for equality to zero).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FanInStrategy {
    /// Iterated Hamming weight reduction.
    Hamming,
    /// Tree of `base`-input table gates.
    Base,
    /// `depth` Hamming passes followed by a base tree.
    Both { depth: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Settings {
    /// Forces boolean carries wherever comparison carries would be used.
    pub deterministic_carry: bool,
    pub carry: CarryMethod,
    /// Fan-in of a single table gate.
    pub base: u32,
    /// Charge pre-shared randomness as communication.
    pub meter_preshared: bool,
    /// Keep every message in memory for inspection.
    pub record_messages: bool,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            deterministic_carry: false,
            carry: CarryMethod::Boolean,
            base: 6,
            meter_preshared: false,
            record_messages: false,
        }
    }
}

pub const MAX_BASE: u32 = 8;

impl Settings {
    pub fn validate(&self) -> Result<()> {
        validate_base(self.base)
    }

    /// Carry method after applying the deterministic override.
    pub fn effective_carry(&self) -> CarryMethod {
        if self.deterministic_carry {
            CarryMethod::Boolean
        } else {
            self.carry
        }
    }
}

pub fn validate_base(base: u32) -> Result<()> {
    if !(2..=MAX_BASE).contains(&base) {
        return Err(Error::Config(format!("base {base} outside [2, {MAX_BASE}]")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_flag_overrides_carry() {
        let s = Settings { carry: CarryMethod::Comparison, deterministic_carry: true, ..Default::default() };
        assert_eq!(s.effective_carry(), CarryMethod::Boolean);
    }

    #[test]
    fn base_range() {
        assert!(validate_base(1).is_err());
        assert!(validate_base(9).is_err());
        assert!(validate_base(6).is_ok());
    }
}
