//! Switching a secret between the three encryptions.

use crate::error::{Error, Result};
use crate::logic;
use crate::primitives::ready_of;
use crate::ring::{bit, mask, RingParams, Scheme, SharedSecret};
use crate::transport::{Label, Network, Pair, PartyId};

/// Per-bit XOR shares, least significant bit first.
pub type BitShareVector = Vec<SharedSecret>;

/// Harness decryption of a bit vector into an integer.
pub fn decrypt_bits(net: &Network, bits: &[SharedSecret]) -> u128 {
    bits.iter().enumerate().fold(0, |acc, (i, b)| acc | (net.decrypt(b) & 1) << i)
}

fn require(x: &SharedSecret, scheme: Scheme) -> Result<()> {
    if x.scheme() != scheme {
        return Err(Error::SchemeMismatch { expected: scheme, found: x.scheme() });
    }
    Ok(())
}

/// Additive (with or without modulus) to per-bit XOR: `a_i = e_i ^ k_i ^ c_i`.
/// All communication happens inside the carry computation.
pub fn add_to_xor(net: &mut Network, x: &SharedSecret) -> Result<BitShareVector> {
    if x.scheme() == Scheme::Xor {
        return Err(Error::SchemeMismatch { expected: Scheme::AdditiveMod, found: Scheme::Xor });
    }
    let carries = logic::carry_bits(net, x)?;
    Ok(with_carries(net, x, &carries))
}

/// Local part of [`add_to_xor`]: XORs given carry shares into the bits of
/// `E` and `K`.
pub fn with_carries(net: &mut Network, x: &SharedSecret, carries: &[SharedSecret]) -> BitShareVector {
    carries
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let i = i as u32;
            let e = bit(x.e(), i) ^ c.e();
            let k = bit(x.k(), i) ^ c.k();
            net.share(e, k, Scheme::Xor, RingParams::bit(), c.ready.max(x.ready))
        })
        .collect()
}

/// Helper-assisted lift of XOR bits into one additive secret modulo
/// `2^out_bits`.
///
/// With `weighted`, bit `i` travels in the ring `2^(out_bits - i)` and counts
/// `2^i`, giving the integer the bits represent. Without it, every bit uses
/// the full ring and counts once, giving their sum.
///
/// The EVH sends each ciphertext bit blinded by a pad shared with the KH; the
/// KH sends its key bits to the HE, which negates where the key bit is set,
/// adds its own pads and returns one aggregate. Two rounds.
pub(crate) fn bits_to_additive(net: &mut Network, bits: &[SharedSecret], out_bits: u32, weighted: bool) -> Result<SharedSecret> {
    for b in bits {
        require(b, Scheme::Xor)?;
    }
    if weighted && bits.len() > out_bits as usize {
        return Err(Error::WidthMismatch { declared: out_bits, actual: bits.len() as u32 });
    }
    let out = RingParams::new(out_bits)?;
    let start = ready_of(bits);

    let mut blinded = Vec::with_capacity(bits.len());
    let mut key_bits = Vec::with_capacity(bits.len());
    let mut sum = 0u128;
    let mut key = 0u128;
    for (i, b) in bits.iter().enumerate() {
        let (width, weight) = if weighted { (out_bits - i as u32, 1u128 << i) } else { (out_bits, 1) };
        let m = mask(width);
        let evh_pad = net.preshared(Pair::KhEvh, width);
        let he_pad = net.preshared(Pair::KhHe, width);
        let v = (b.e() + evh_pad) & m;
        let k = b.k() & 1;
        // HE side: negate under a set key bit, re-blind with its own pad.
        let f = if k == 0 { v + he_pad } else { he_pad.wrapping_sub(v) } & m;
        // KH side: the matching key.
        let kf = if k == 0 { evh_pad + he_pad } else { he_pad.wrapping_sub(evh_pad).wrapping_sub(1) } & m;
        blinded.push((v, width));
        key_bits.push((k, 1));
        sum = sum.wrapping_add(f.wrapping_mul(weight));
        key = key.wrapping_add(kf.wrapping_mul(weight));
    }
    let r1 = net.send(PartyId::Evh, PartyId::He, start, &blinded, Label::Opaque)?;
    net.send(PartyId::Kh, PartyId::He, start, &key_bits, Label::Opaque)?;
    for b in bits {
        net.note(PartyId::He, Label::Key(b.id()));
    }
    let sum = sum & out.mask();
    let r2 = net.send(PartyId::He, PartyId::Evh, r1, &[(sum, out_bits)], Label::Opaque)?;
    Ok(net.share(sum, key & out.mask(), Scheme::AdditiveMod, out, r2))
}

/// Per-bit XOR to additive modulo `2^l`, `l = bits.len()`. Two rounds.
pub fn xor_to_add(net: &mut Network, bits: &[SharedSecret]) -> Result<SharedSecret> {
    if bits.is_empty() {
        return Err(Error::Config("no bits to convert".into()));
    }
    bits_to_additive(net, bits, bits.len() as u32, true)
}

/// Like [`xor_to_add`] but into a wider ring `2^out_bits`.
pub fn xor_to_add_in(net: &mut Network, bits: &[SharedSecret], out_bits: u32) -> Result<SharedSecret> {
    bits_to_additive(net, bits, out_bits, true)
}

/// Purely additive to additive modulo `2^l` by reducing both halves. Free.
pub fn add_to_addmod(net: &mut Network, x: &SharedSecret) -> Result<SharedSecret> {
    require(x, Scheme::PureAdditive)?;
    let ring = RingParams::new(x.bits())?;
    Ok(net.share(x.e() & ring.mask(), x.k() & ring.mask(), Scheme::AdditiveMod, ring, x.ready))
}

/// Additive modulo `2^l` to purely additive with an `l - 3`-bit key.
///
/// The KH picks `K'` below `2^(l-3)` and sends `K - K'`. Requires
/// `a < 2^(l-3)`; larger plaintexts give an unspecified result. One round,
/// `l` bits.
pub fn addmod_to_add_fast(net: &mut Network, x: &SharedSecret) -> Result<SharedSecret> {
    let fresh = net.local(PartyId::Kh, x.bits().saturating_sub(3));
    addmod_to_add_fast_with_key(net, x, fresh)
}

/// [`addmod_to_add_fast`] with a caller-chosen new key.
pub fn addmod_to_add_fast_with_key(net: &mut Network, x: &SharedSecret, fresh: u128) -> Result<SharedSecret> {
    require(x, Scheme::AdditiveMod)?;
    let l = x.bits();
    if l < 4 {
        return Err(Error::InvalidRing(format!("fast conversion needs at least 4 bits, got {l}")));
    }
    let out = RingParams::with_key_bits(l - 3, l - 3)?;
    if fresh > out.mask() {
        return Err(Error::PlaintextOutOfRange { value: fresh, bits: l - 3 });
    }
    let m = mask(l);
    let delta = x.k().wrapping_sub(fresh) & m;
    let round = net.send(PartyId::Kh, PartyId::Evh, x.ready, &[(delta, l)], Label::Opaque)?;
    let e = x.e().wrapping_sub(delta) & m;
    Ok(net.share(e, fresh, Scheme::PureAdditive, out, round))
}

/// Extra key bits of the wrap indicator in [`addmod_to_add_slow`].
pub const SLOW_CARRY_KEY_BITS: u32 = 8;

/// Additive modulo `2^l` to purely additive without a size assumption.
///
/// Computes the wrap bit `[E < K]` (which equals the carry out of `a + K`),
/// converts it to a purely additive secret and prepends it above the
/// ciphertext and key. The output key has `l + 8` bits.
pub fn addmod_to_add_slow(net: &mut Network, x: &SharedSecret) -> Result<SharedSecret> {
    require(x, Scheme::AdditiveMod)?;
    let wrap = logic::key_exceeds(net, x)?;
    prepend_carry(net, x, &wrap)
}

/// Second half of [`addmod_to_add_slow`], given the wrap bit as an XOR share.
pub fn prepend_carry(net: &mut Network, x: &SharedSecret, wrap: &SharedSecret) -> Result<SharedSecret> {
    require(x, Scheme::AdditiveMod)?;
    require(wrap, Scheme::Xor)?;
    let l = x.bits();
    let carry_ring_bits = SLOW_CARRY_KEY_BITS + 3;
    if l + carry_ring_bits - 2 > crate::ring::MAX_BITS {
        return Err(Error::InvalidRing(format!("{l} bits leave no room for the carry key")));
    }
    let additive = xor_to_add_in(net, std::slice::from_ref(wrap), carry_ring_bits)?;
    let pure = addmod_to_add_fast(net, &additive)?;
    let out = RingParams::with_key_bits(l, l + SLOW_CARRY_KEY_BITS)?;
    let e = (pure.e() << l) + x.e();
    let k = (pure.k() << l) + x.k();
    Ok(net.share(e, k, Scheme::PureAdditive, out, pure.ready.max(x.ready)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{CarryMethod, Settings};
    use crate::primitives::split_bits;
    use proptest::prelude::*;

    fn net_with(seed: u64, carry: CarryMethod) -> Network {
        Network::new(seed, Settings { carry, ..Settings::default() }).unwrap()
    }

    #[test]
    fn add_to_xor_exhaustive_both_carry_methods() {
        for carry in [CarryMethod::Boolean, CarryMethod::Comparison] {
            for seed in 0..8 {
                let mut net = net_with(seed, carry);
                for a in 0..32u128 {
                    let x = net.input(a, Scheme::AdditiveMod, RingParams::new(5).unwrap()).unwrap();
                    let bits = add_to_xor(&mut net, &x).unwrap();
                    assert_eq!(decrypt_bits(&net, &bits), a, "{carry:?}");
                }
                assert!(net.assert_views_legal().is_ok());
            }
        }
    }

    #[test]
    fn xor_to_add_exhaustive_and_costs() {
        let l = 5;
        for a in 0..32u128 {
            let mut net = Network::with_seed(a as u64);
            let x = net.input(a, Scheme::Xor, RingParams::new(l).unwrap()).unwrap();
            let bits = split_bits(&mut net, &x).unwrap();
            let z = xor_to_add(&mut net, &bits).unwrap();
            assert_eq!(net.decrypt(&z), a);
            assert_eq!(z.scheme(), Scheme::AdditiveMod);
            assert_eq!(net.meter().rounds, 2);
            // EVH: widths l, l-1, ..., 1; KH: one bit each; HE: l bits back.
            assert_eq!(net.meter().total_bits(), u64::from(l * (l + 1) / 2 + l + l));
        }
    }

    #[test]
    fn unweighted_lift_counts_bits() {
        let mut net = Network::with_seed(9);
        let bits: Vec<SharedSecret> = [1, 0, 1, 1, 1]
            .iter()
            .map(|&b| net.input(b, Scheme::Xor, RingParams::bit()).unwrap())
            .collect();
        let count = bits_to_additive(&mut net, &bits, 4, false).unwrap();
        assert_eq!(net.decrypt(&count), 4);
        assert!(xor_to_add_in(&mut net, &bits, 3).is_err());
    }

    #[test]
    fn fast_conversion_within_headroom() {
        let ring = RingParams::new(8).unwrap();
        for a in 0..32u128 {
            for seed in 0..8 {
                let mut net = Network::with_seed(seed);
                let x = net.input(a, Scheme::AdditiveMod, ring).unwrap();
                let y = addmod_to_add_fast(&mut net, &x).unwrap();
                assert_eq!(y.scheme(), Scheme::PureAdditive);
                assert!(y.k() < 32);
                assert_eq!(net.decrypt(&y), a);
                assert_eq!((net.meter().rounds, net.meter().total_bits()), (1, 8));
            }
        }
    }

    #[test]
    fn fast_conversion_rejects_oversized_key() {
        let mut net = Network::with_seed(1);
        let x = net.input(1, Scheme::AdditiveMod, RingParams::new(8).unwrap()).unwrap();
        assert!(addmod_to_add_fast_with_key(&mut net, &x, 32).is_err());
        let pure = net.input(1, Scheme::PureAdditive, RingParams::new(8).unwrap()).unwrap();
        assert!(addmod_to_add_fast(&mut net, &pure).is_err());
    }

    #[test]
    fn slow_conversion_exhaustive() {
        let ring = RingParams::new(5).unwrap();
        for seed in 0..8 {
            let mut net = Network::with_seed(seed);
            for a in 0..32u128 {
                let x = net.input(a, Scheme::AdditiveMod, ring).unwrap();
                let y = addmod_to_add_slow(&mut net, &x).unwrap();
                assert_eq!(y.scheme(), Scheme::PureAdditive);
                assert_eq!(y.ring().b, 5 + SLOW_CARRY_KEY_BITS);
                assert_eq!(net.decrypt(&y), a);
            }
            assert!(net.assert_views_legal().is_ok());
        }
    }

    #[test]
    fn pure_to_modular_is_free() {
        let mut net = Network::with_seed(2);
        let ring = RingParams::with_key_bits(6, 10).unwrap();
        let x = net.input(45, Scheme::PureAdditive, ring).unwrap();
        let y = add_to_addmod(&mut net, &x).unwrap();
        assert_eq!(net.decrypt(&y), 45);
        assert_eq!(net.meter().total_bits(), 0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn round_trip_through_bits(a: u32, seed: u64) {
            let mut net = Network::with_seed(seed);
            let x = net.input(u128::from(a), Scheme::AdditiveMod, RingParams::new(32).unwrap()).unwrap();
            let bits = add_to_xor(&mut net, &x).unwrap();
            let back = xor_to_add(&mut net, &bits).unwrap();
            prop_assert_eq!(net.decrypt(&back), u128::from(a));
            prop_assert!(net.assert_views_legal().is_ok());
        }
    }
}
