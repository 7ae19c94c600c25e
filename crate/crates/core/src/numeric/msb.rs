//! Index of the most significant bit.

use crate::conversions::bits_to_additive;
use crate::error::{Error, Result};
use crate::logic::{less_zero, ComparisonConfig};
use crate::primitives;
use crate::ring::{Scheme, SharedSecret};
use crate::transport::Network;

/// Result of [`index_msb`].
#[derive(Clone, Debug)]
pub struct MsbIndex {
    /// `floor(log2 a)`, additive modulo `2^out_bits`.
    pub msb: SharedSecret,
    /// One-hot XOR bits of `2^msb`, positions `0..=l-3`.
    pub one_hot: Vec<SharedSecret>,
}

/// `floor(log2 a)` and `2^floor(log2 a)` for `0 < a < 2^(l-3)`.
///
/// Compares `a - 2^i < 0` for every `i` in `0..=l-3` in parallel. The count of
/// positive answers `s` gives `msb = l - 3 - s`, and neighbouring answers
/// XORed give the one-hot power. The count is taken modulo `2^out_bits`.
pub fn index_msb(net: &mut Network, x: &SharedSecret, cfg: &ComparisonConfig, out_bits: u32) -> Result<MsbIndex> {
    if x.scheme() != Scheme::AdditiveMod {
        return Err(Error::SchemeMismatch { expected: Scheme::AdditiveMod, found: x.scheme() });
    }
    let l = x.bits();
    if l < 4 {
        return Err(Error::InvalidRing(format!("MSB index needs at least 4 bits, got {l}")));
    }
    let top = l - 3;
    let below: Vec<SharedSecret> = (0..=top)
        .map(|i| {
            let shifted = primitives::add_public(net, x, (1u128 << i).wrapping_neg() & x.ring().mask())?;
            less_zero(net, &shifted, cfg)
        })
        .collect::<Result<_>>()?;

    let count = bits_to_additive(net, &below, out_bits, false)?;
    let negated = primitives::neg(net, &count)?;
    let msb = primitives::add_public(net, &negated, u128::from(top))?;

    // Past the top comparison a < 2^(l-2) always holds.
    let always = primitives::xor_bit(net, 1, 0, 0);
    let one_hot = (0..=top as usize)
        .map(|i| {
            let next = if i == top as usize { always } else { below[i + 1] };
            primitives::add(net, &below[i], &next)
        })
        .collect::<Result<_>>()?;
    Ok(MsbIndex { msb, one_hot })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Settings;
    use crate::ring::RingParams;

    #[test]
    fn msb_and_one_hot_exhaustive() {
        let l = 8;
        let cfg = ComparisonConfig { n_s: 3, ..Default::default() };
        for a in 1..(1u128 << (l - 3)) {
            let mut net = Network::new(a as u64, Settings { deterministic_carry: true, ..Settings::default() }).unwrap();
            let x = net.input(a, Scheme::AdditiveMod, RingParams::new(l).unwrap()).unwrap();
            let index = index_msb(&mut net, &x, &cfg, 16).unwrap();
            let msb = 127 - a.leading_zeros();
            assert_eq!(net.decrypt(&index.msb), u128::from(msb), "a={a}");
            let hot: Vec<u128> = index.one_hot.iter().map(|b| net.decrypt(b)).collect();
            let expected: Vec<u128> = (0..=l - 3).map(|i| u128::from(i == msb)).collect();
            assert_eq!(hot, expected, "a={a}");
            assert!(net.assert_views_legal().is_ok());
        }
    }

    #[test]
    fn rejects_narrow_rings() {
        let mut net = Network::with_seed(0);
        let x = net.input(1, Scheme::AdditiveMod, RingParams::new(3).unwrap()).unwrap();
        assert!(index_msb(&mut net, &x, &ComparisonConfig::default(), 8).is_err());
    }
}
