//! Building blocks: local linear operations, multiplication, AND gates,
//! helper-evaluated table gates, powers and re-encryption.
//!
//! Multiplication follows the usual helper-assisted pattern. The EVH and KH
//! share one-time blinds, send blinded ciphertexts and blinded keys to the HE,
//! and the HE returns the masked cross terms. Two rounds, `5l` bits.

use crate::config::{validate_base, MAX_BASE};
use crate::error::{Error, Result};
use crate::ring::{bit, bit_len, mask, RingParams, Round, Scheme, SharedSecret};
use crate::transport::{Label, Network, Pair, PartyId};

/// Latest readiness among `xs`.
pub fn ready_of<'a>(xs: impl IntoIterator<Item = &'a SharedSecret>) -> Round {
    xs.into_iter().map(|x| x.ready).max().unwrap_or(0)
}

fn same_ring(x: &SharedSecret, y: &SharedSecret) -> Result<()> {
    if x.scheme() != y.scheme() {
        return Err(Error::SchemeMismatch { expected: x.scheme(), found: y.scheme() });
    }
    if x.ring().l != y.ring().l {
        return Err(Error::InvalidRing(format!("operands in rings of {} and {} bits", x.bits(), y.bits())));
    }
    Ok(())
}

fn require(x: &SharedSecret, scheme: Scheme) -> Result<()> {
    if x.scheme() != scheme {
        return Err(Error::SchemeMismatch { expected: scheme, found: x.scheme() });
    }
    Ok(())
}

/// `x + y` (additive) or `x ^ y` (XOR). Local.
pub fn add(net: &mut Network, x: &SharedSecret, y: &SharedSecret) -> Result<SharedSecret> {
    same_ring(x, y)?;
    let ring = x.ring();
    let (e, k) = match x.scheme() {
        Scheme::AdditiveMod => ((x.e() + y.e()) & ring.mask(), (x.k() + y.k()) & ring.mask()),
        Scheme::Xor => (x.e() ^ y.e(), x.k() ^ y.k()),
        Scheme::PureAdditive => return Err(Error::SchemeMismatch { expected: Scheme::AdditiveMod, found: Scheme::PureAdditive }),
    };
    Ok(net.share(e, k, x.scheme(), ring, x.ready.max(y.ready)))
}

/// `x - y` modulo `2^l`. Local.
pub fn sub(net: &mut Network, x: &SharedSecret, y: &SharedSecret) -> Result<SharedSecret> {
    let minus_y = neg(net, y)?;
    add(net, x, &minus_y)
}

/// `-x` modulo `2^l`. Local.
pub fn neg(net: &mut Network, x: &SharedSecret) -> Result<SharedSecret> {
    require(x, Scheme::AdditiveMod)?;
    let m = x.ring().mask();
    Ok(net.share(x.e().wrapping_neg() & m, x.k().wrapping_neg() & m, Scheme::AdditiveMod, x.ring(), x.ready))
}

/// Adds (additive) or XORs a public constant into the ciphertext. Local.
pub fn add_public(net: &mut Network, x: &SharedSecret, c: u128) -> Result<SharedSecret> {
    let ring = x.ring();
    let e = match x.scheme() {
        Scheme::AdditiveMod => x.e().wrapping_add(c) & ring.mask(),
        Scheme::Xor => x.e() ^ (c & ring.mask()),
        Scheme::PureAdditive => return Err(Error::SchemeMismatch { expected: Scheme::AdditiveMod, found: Scheme::PureAdditive }),
    };
    Ok(net.share(e, x.k(), x.scheme(), ring, x.ready))
}

/// Multiplies both halves by a public constant modulo `2^l`. Local.
pub fn scale(net: &mut Network, x: &SharedSecret, c: u128) -> Result<SharedSecret> {
    require(x, Scheme::AdditiveMod)?;
    let m = x.ring().mask();
    let c = c & m;
    Ok(net.share(x.e().wrapping_mul(c) & m, x.k().wrapping_mul(c) & m, Scheme::AdditiveMod, x.ring(), x.ready))
}

/// Flips an XOR-shared bit (EVH side only). Local.
pub fn not_bit(net: &mut Network, x: &SharedSecret) -> Result<SharedSecret> {
    require(x, Scheme::Xor)?;
    Ok(net.share(x.e() ^ 1, x.k(), Scheme::Xor, x.ring(), x.ready))
}

/// Reduces an additive secret into the smaller ring `2^l`. Local.
pub fn reduce(net: &mut Network, x: &SharedSecret, l: u32) -> Result<SharedSecret> {
    require(x, Scheme::AdditiveMod)?;
    if l > x.bits() {
        return Err(Error::InvalidRing(format!("cannot reduce {} bits to {l}", x.bits())));
    }
    let ring = RingParams::new(l)?;
    Ok(net.share(x.e() & mask(l), x.k() & mask(l), Scheme::AdditiveMod, ring, x.ready))
}

/// Splits an XOR-shared word into single-bit shares, least significant first.
/// Local.
pub fn split_bits(net: &mut Network, x: &SharedSecret) -> Result<Vec<SharedSecret>> {
    require(x, Scheme::Xor)?;
    Ok((0..x.bits())
        .map(|i| net.share(bit(x.e(), i), bit(x.k(), i), Scheme::Xor, RingParams::bit(), x.ready))
        .collect())
}

/// A fresh XOR bit with the given halves.
pub(crate) fn xor_bit(net: &mut Network, e: u128, k: u128, ready: Round) -> SharedSecret {
    net.share(e & 1, k & 1, Scheme::Xor, RingParams::bit(), ready)
}

/// Secure product modulo `2^l`; two rounds, `5l` bits.
pub fn mul(net: &mut Network, x: &SharedSecret, y: &SharedSecret) -> Result<SharedSecret> {
    require(x, Scheme::AdditiveMod)?;
    same_ring(x, y)?;
    let ring = x.ring();
    let l = ring.l;
    let m = ring.mask();
    let start = x.ready.max(y.ready);

    let bx = net.preshared(Pair::KhEvh, l);
    let by = net.preshared(Pair::KhEvh, l);
    let cx = net.preshared(Pair::KhEvh, l);
    let cy = net.preshared(Pair::KhEvh, l);
    let z = net.preshared(Pair::KhHe, l);

    let (ex, ey, kx, ky) = (x.e(), y.e(), x.k(), y.k());
    let blinded_e = [((ex + bx) & m, l), ((ey + by) & m, l)];
    let blinded_k = [((kx + cx) & m, l), ((ky + cy) & m, l)];
    let r1 = net.send(PartyId::Evh, PartyId::He, start, &blinded_e, Label::Opaque)?;
    net.send(PartyId::Kh, PartyId::He, start, &blinded_k, Label::Opaque)?;

    let cross = blinded_e[0].0.wrapping_mul(blinded_k[1].0)
        .wrapping_add(blinded_e[1].0.wrapping_mul(blinded_k[0].0))
        .wrapping_add(z)
        & m;
    let r2 = net.send(PartyId::He, PartyId::Evh, r1, &[(cross, l)], Label::Opaque)?;

    let e = ex.wrapping_mul(ey)
        .wrapping_sub(cross)
        .wrapping_add(ex.wrapping_mul(cy))
        .wrapping_add(ey.wrapping_mul(cx))
        .wrapping_add(bx.wrapping_mul(cy))
        .wrapping_add(by.wrapping_mul(cx))
        & m;
    let k = kx.wrapping_mul(ky)
        .wrapping_add(z)
        .wrapping_add(bx.wrapping_mul(ky))
        .wrapping_add(by.wrapping_mul(kx))
        .wrapping_neg()
        & m;
    Ok(net.share(e, k, Scheme::AdditiveMod, ring, r2))
}

/// Many independent products in the same phases.
pub fn mul_many(net: &mut Network, pairs: &[(SharedSecret, SharedSecret)]) -> Result<Vec<SharedSecret>> {
    pairs.iter().map(|(x, y)| mul(net, x, y)).collect()
}

/// AND of two XOR bits; two rounds, 5 bits.
pub fn and2(net: &mut Network, x: &SharedSecret, y: &SharedSecret) -> Result<SharedSecret> {
    for v in [x, y] {
        require(v, Scheme::Xor)?;
        if v.bits() != 1 {
            return Err(Error::WidthMismatch { declared: 1, actual: v.bits() });
        }
    }
    let start = x.ready.max(y.ready);
    let bx = net.preshared(Pair::KhEvh, 1);
    let by = net.preshared(Pair::KhEvh, 1);
    let cx = net.preshared(Pair::KhEvh, 1);
    let cy = net.preshared(Pair::KhEvh, 1);
    let z = net.preshared(Pair::KhHe, 1);

    let (ex, ey, kx, ky) = (x.e(), y.e(), x.k(), y.k());
    let (bex, bey) = (ex ^ bx, ey ^ by);
    let (bkx, bky) = (kx ^ cx, ky ^ cy);
    let r1 = net.send(PartyId::Evh, PartyId::He, start, &[(bex, 1), (bey, 1)], Label::Opaque)?;
    net.send(PartyId::Kh, PartyId::He, start, &[(bkx, 1), (bky, 1)], Label::Opaque)?;
    let cross = (bex & bky) ^ (bey & bkx) ^ z;
    let r2 = net.send(PartyId::He, PartyId::Evh, r1, &[(cross, 1)], Label::Opaque)?;

    let e = (ex & ey) ^ cross ^ (ex & cy) ^ (ey & cx) ^ (bx & cy) ^ (by & cx);
    let k = (kx & ky) ^ z ^ (bx & ky) ^ (by & kx);
    Ok(xor_bit(net, e, k, r2))
}

/// Evaluates a KH-chosen predicate on a `width`-bit value held by the EVH and
/// returns the result as an XOR bit. The HE looks up a one-time padded table.
/// Two rounds; `width + 2^width + 1` bits.
///
/// `predicate` receives the EVH's value, so it may depend on the KH's keys but
/// must not depend on anything else the KH does not know.
pub fn table_gate<F>(net: &mut Network, evh_value: u128, width: u32, start: Round, predicate: F) -> Result<SharedSecret>
where
    F: Fn(u128) -> bool,
{
    if width > MAX_BASE {
        return Err(Error::Config(format!("table gate over {width} bits exceeds {MAX_BASE}")));
    }
    let size = 1usize << width;
    let input_mask = net.preshared(Pair::KhEvh, width);
    let pads = net.preshared_bits(Pair::KhEvh, size);
    let out_key = net.local(PartyId::Kh, 1);

    let blinded = (evh_value ^ input_mask) & mask(width);
    let r1 = net.send(PartyId::Evh, PartyId::He, start, &[(blinded, width)], Label::Opaque)?;

    let table: Vec<u128> = (0..size)
        .map(|j| (predicate(j as u128 ^ input_mask) as u128) ^ out_key ^ pads[j] as u128)
        .collect();
    let fields: Vec<(u128, u32)> = table.iter().map(|&t| (t, 1)).collect();
    net.send(PartyId::Kh, PartyId::He, start, &fields, Label::Opaque)?;

    let entry = table[blinded as usize];
    let r2 = net.send(PartyId::He, PartyId::Evh, r1, &[(entry, 1)], Label::Opaque)?;
    let e = entry ^ pads[blinded as usize] as u128;
    Ok(xor_bit(net, e, out_key, r2))
}

/// AND of up to `base` XOR bits with one table gate; two rounds.
pub fn fanin_and_base(net: &mut Network, bits: &[SharedSecret], base: u32) -> Result<SharedSecret> {
    validate_base(base)?;
    if bits.is_empty() || bits.len() > base as usize {
        return Err(Error::Config(format!("{} inputs for a base-{base} gate", bits.len())));
    }
    for b in bits {
        require(b, Scheme::Xor)?;
    }
    let width = bits.len() as u32;
    let evh = bits.iter().enumerate().fold(0u128, |acc, (i, b)| acc | (b.e() & 1) << i);
    let keys = bits.iter().enumerate().fold(0u128, |acc, (i, b)| acc | (b.k() & 1) << i);
    table_gate(net, evh, width, ready_of(bits), move |e| (e ^ keys) & mask(width) == mask(width))
}

/// Replaces the key with a fresh one: the KH sends the key difference to the
/// EVH. One round; `l` bits (`b + 1` for purely additive secrets).
pub fn reencrypt(net: &mut Network, x: &SharedSecret) -> Result<SharedSecret> {
    let ring = x.ring();
    let fresh = net.local(PartyId::Kh, 128) & (ring.key_bound(x.scheme()) - 1);
    let (delta, width) = match x.scheme() {
        Scheme::AdditiveMod => (fresh.wrapping_sub(x.k()) & ring.mask(), ring.l),
        Scheme::Xor => (fresh ^ x.k(), ring.l),
        Scheme::PureAdditive => (fresh.wrapping_sub(x.k()) & mask(ring.b + 1), ring.b + 1),
    };
    let round = net.send(PartyId::Kh, PartyId::Evh, x.ready, &[(delta, width)], Label::Opaque)?;
    let e = match x.scheme() {
        Scheme::AdditiveMod => x.e().wrapping_add(delta) & ring.mask(),
        Scheme::Xor => x.e() ^ delta,
        Scheme::PureAdditive => x.e().wrapping_add(delta) & mask(ring.b + 1),
    };
    Ok(net.share(e, fresh, x.scheme(), ring, round))
}

/// Divides a signed additive secret by `2^shift`, staying in the same ring.
///
/// Both parties drop the low bits locally (off by at most one unit), and the
/// result is lifted back into the full ring with one fast conversion.
/// Requires `|x| < 2^(l - 4)`. One round.
pub fn rescale(net: &mut Network, x: &SharedSecret, shift: u32) -> Result<SharedSecret> {
    require(x, Scheme::AdditiveMod)?;
    if shift == 0 {
        return Ok(*x);
    }
    let wide = x.ring();
    let narrow_bits = wide.l.checked_sub(shift).filter(|&n| n >= 5).ok_or_else(|| {
        Error::InvalidRing(format!("cannot rescale a {}-bit ring by {shift} bits", wide.l))
    })?;
    let narrow = RingParams::new(narrow_bits)?;
    let offset = 1u128 << (narrow_bits - 4);
    let e = ((x.e() >> shift) + offset) & narrow.mask();
    let k = (x.k() >> shift) & narrow.mask();
    let truncated = net.share(e, k, Scheme::AdditiveMod, narrow, x.ready);
    let pure = crate::conversions::addmod_to_add_fast(net, &truncated)?;
    let e = pure.e().wrapping_sub(offset) & wide.mask();
    Ok(net.share(e, pure.k() & wide.mask(), Scheme::AdditiveMod, wide, pure.ready))
}

fn split_exponent(k: u32) -> u32 {
    // Largest power of two strictly below k, so both factors sit one level lower.
    1 << (bit_len(u128::from(k - 1)) - 1)
}

/// Computes `x^k` for each requested `k >= 1`, reusing intermediate powers.
/// Powers in `(2^(j-1), 2^j]` are ready after `j` multiplication levels.
fn power_table<F>(net: &mut Network, x: &SharedSecret, wanted: &[u32], mut combine: F) -> Result<Vec<SharedSecret>>
where
    F: FnMut(&mut Network, &SharedSecret, &SharedSecret) -> Result<SharedSecret>,
{
    let top = wanted.iter().copied().max().unwrap_or(1) as usize;
    let mut needed = vec![false; top + 1];
    let mut stack: Vec<u32> = wanted.to_vec();
    while let Some(k) = stack.pop() {
        if needed[k as usize] {
            continue;
        }
        needed[k as usize] = true;
        if k > 1 {
            let hi = split_exponent(k);
            stack.extend([hi, k - hi]);
        }
    }
    let mut table: Vec<Option<SharedSecret>> = vec![None; top + 1];
    table[1] = Some(*x);
    for k in 2..=top {
        if needed[k] {
            let hi = split_exponent(k as u32) as usize;
            let (a, b) = (table[hi].expect("lower power"), table[k - hi].expect("lower power"));
            table[k] = Some(combine(net, &a, &b)?);
        }
    }
    wanted.iter().map(|&k| table[k as usize].ok_or_else(|| Error::Config("exponent 0".into()))).collect()
}

/// `x^1, ..., x^n` modulo `2^l`.
pub fn powers(net: &mut Network, x: &SharedSecret, n: u32) -> Result<Vec<SharedSecret>> {
    let wanted: Vec<u32> = (1..=n).collect();
    power_table(net, x, &wanted, mul)
}

/// `x^i` modulo `2^l`; at most `2 ceil(log2 i)` rounds.
pub fn pow(net: &mut Network, x: &SharedSecret, i: u32) -> Result<SharedSecret> {
    require(x, Scheme::AdditiveMod)?;
    if i == 0 {
        return Ok(net.constant(1, Scheme::AdditiveMod, x.ring()));
    }
    Ok(power_table(net, x, &[i], mul)?[0])
}

fn shift_of(s: u128) -> Result<u32> {
    if s == 0 || !s.is_power_of_two() {
        return Err(Error::Config(format!("scale {s} is not a power of two")));
    }
    Ok(s.trailing_zeros())
}

/// `x^k / s^(k-1)` for `k = 1..=n`, each within `k - 1` units when `|x| <= s`.
pub fn scaled_powers(net: &mut Network, x: &SharedSecret, n: u32, s: u128) -> Result<Vec<SharedSecret>> {
    require(x, Scheme::AdditiveMod)?;
    let shift = shift_of(s)?;
    let wanted: Vec<u32> = (1..=n).collect();
    power_table(net, x, &wanted, |net, a, b| {
        let product = mul(net, a, b)?;
        rescale(net, &product, shift)
    })
}

/// `x^i / s^(i-1)` within `i - 1` units when `|x| <= s`.
pub fn scaled_pow(net: &mut Network, x: &SharedSecret, i: u32, s: u128) -> Result<SharedSecret> {
    require(x, Scheme::AdditiveMod)?;
    let shift = shift_of(s)?;
    if i == 0 {
        return Ok(net.constant(s, Scheme::AdditiveMod, x.ring()));
    }
    Ok(power_table(net, x, &[i], |net, a, b| {
        let product = mul(net, a, b)?;
        rescale(net, &product, shift)
    })?[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Settings;
    use proptest::prelude::*;

    fn modular(l: u32) -> RingParams {
        RingParams::new(l).unwrap()
    }

    #[test]
    fn mul_exhaustive_three_bits() {
        for seed in 0..4 {
            let mut net = Network::with_seed(seed);
            for a in 0..8u128 {
                for b in 0..8u128 {
                    let x = net.input(a, Scheme::AdditiveMod, modular(3)).unwrap();
                    let y = net.input(b, Scheme::AdditiveMod, modular(3)).unwrap();
                    let z = mul(&mut net, &x, &y).unwrap();
                    assert_eq!(net.decrypt(&z), a * b % 8, "{a} * {b}");
                }
            }
            assert!(net.assert_views_legal().is_ok());
        }
    }

    #[test]
    fn mul_costs_two_rounds_and_five_l_bits() {
        let mut net = Network::with_seed(1);
        let x = net.input(123_456, Scheme::AdditiveMod, modular(32)).unwrap();
        let y = net.input(789, Scheme::AdditiveMod, modular(32)).unwrap();
        let z = mul(&mut net, &x, &y).unwrap();
        assert_eq!(net.decrypt(&z), 123_456 * 789);
        assert_eq!(net.meter().rounds, 2);
        assert_eq!(net.meter().total_bits(), 160);
        assert_eq!(net.meter().bits(PartyId::He, PartyId::Evh), 32);
    }

    #[test]
    fn metered_preshared_blinds_are_counted() {
        let settings = Settings { meter_preshared: true, ..Settings::default() };
        let mut net = Network::new(1, settings).unwrap();
        let x = net.input(5, Scheme::AdditiveMod, modular(32)).unwrap();
        mul(&mut net, &x, &x).unwrap();
        assert_eq!(net.meter().total_bits(), 160 + 5 * 32);
    }

    #[test]
    fn independent_products_share_rounds() {
        let mut net = Network::with_seed(2);
        let x = net.input(3, Scheme::AdditiveMod, modular(16)).unwrap();
        let y = net.input(4, Scheme::AdditiveMod, modular(16)).unwrap();
        let out = mul_many(&mut net, &[(x, y), (y, y), (x, x)]).unwrap();
        let plain: Vec<u128> = out.iter().map(|z| net.decrypt(z)).collect();
        assert_eq!(plain, vec![12, 16, 9]);
        assert_eq!(net.meter().rounds, 2);
    }

    #[test]
    fn and2_truth_table() {
        let mut net = Network::with_seed(3);
        for a in 0..2 {
            for b in 0..2 {
                let x = net.input(a, Scheme::Xor, RingParams::bit()).unwrap();
                let y = net.input(b, Scheme::Xor, RingParams::bit()).unwrap();
                let z = and2(&mut net, &x, &y).unwrap();
                assert_eq!(net.decrypt(&z), a & b);
            }
        }
        assert_eq!(net.meter().total_bits(), 4 * 5);
        assert_eq!(net.meter().rounds, 2);
    }

    #[test]
    fn table_gate_costs() {
        let mut net = Network::with_seed(4);
        let g = table_gate(&mut net, 5, 3, 0, |u| u == 5).unwrap();
        assert_eq!(net.decrypt(&g), 1);
        assert_eq!(net.meter().rounds, 2);
        assert_eq!(net.meter().total_bits(), 3 + 8 + 1);
        assert!(table_gate(&mut net, 0, MAX_BASE + 1, 0, |_| true).is_err());
    }

    #[test]
    fn fanin_and_base_all_inputs() {
        let mut net = Network::with_seed(5);
        for word in 0..16u128 {
            let bits: Vec<SharedSecret> = (0..4)
                .map(|i| net.input(bit(word, i), Scheme::Xor, RingParams::bit()).unwrap())
                .collect();
            let z = fanin_and_base(&mut net, &bits, 4).unwrap();
            assert_eq!(net.decrypt(&z), u128::from(word == 15));
        }
        assert!(fanin_and_base(&mut net, &[], 4).is_err());
    }

    #[test]
    fn reencrypt_keeps_plaintext_for_every_scheme() {
        let mut net = Network::with_seed(6);
        let cases = [
            (Scheme::AdditiveMod, modular(12)),
            (Scheme::Xor, modular(12)),
            (Scheme::PureAdditive, RingParams::with_key_bits(12, 20).unwrap()),
        ];
        for (scheme, ring) in cases {
            let x = net.input(1234, scheme, ring).unwrap();
            let y = reencrypt(&mut net, &x).unwrap();
            assert_eq!(net.decrypt(&y), 1234);
            assert_ne!(x.id(), y.id());
        }
        assert_eq!(net.meter().rounds, 1);
        assert_eq!(net.meter().total_bits(), 12 + 12 + 21);
    }

    #[test]
    fn linear_operations() {
        let mut net = Network::with_seed(7);
        let r = modular(8);
        let x = net.input(200, Scheme::AdditiveMod, r).unwrap();
        let y = net.input(100, Scheme::AdditiveMod, r).unwrap();
        let sum = add(&mut net, &x, &y).unwrap();
        let diff = sub(&mut net, &y, &x).unwrap();
        let neg_x = neg(&mut net, &x).unwrap();
        let shifted = add_public(&mut net, &x, 60).unwrap();
        let scaled = scale(&mut net, &y, 3).unwrap();
        let low = reduce(&mut net, &x, 4).unwrap();
        assert_eq!(net.decrypt(&sum), 44);
        assert_eq!(net.decrypt(&diff), 156);
        assert_eq!(net.decrypt(&neg_x), 56);
        assert_eq!(net.decrypt(&shifted), 4);
        assert_eq!(net.decrypt(&scaled), 44);
        assert_eq!(net.decrypt(&low), 8);
        assert_eq!(net.meter().total_bits(), 0);
    }

    #[test]
    fn pow_rounds_grow_logarithmically() {
        for i in 0..=9u32 {
            let mut net = Network::with_seed(8);
            let x = net.input(3, Scheme::AdditiveMod, modular(32)).unwrap();
            let z = pow(&mut net, &x, i).unwrap();
            assert_eq!(net.decrypt(&z), 3u128.pow(i));
            let levels = if i <= 1 { 0 } else { bit_len(u128::from(i - 1)) };
            assert_eq!(net.meter().rounds, 2 * levels, "x^{i}");
        }
    }

    #[test]
    fn scaled_pow_rejects_non_power_of_two_scale() {
        let mut net = Network::with_seed(9);
        let x = net.input(3, Scheme::AdditiveMod, modular(20)).unwrap();
        assert!(matches!(scaled_pow(&mut net, &x, 2, 6), Err(Error::Config(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn rescale_is_off_by_at_most_one(v in -(1i128 << 27)..(1i128 << 27), shift in 1u32..20, seed: u64) {
            let mut net = Network::with_seed(seed);
            let x = net.input(crate::ring::from_signed(v, 32), Scheme::AdditiveMod, modular(32)).unwrap();
            let y = rescale(&mut net, &x, shift).unwrap();
            let got = net.decrypt_signed(&y);
            let floor = v.div_euclid(1 << shift);
            prop_assert!(got == floor || got == floor + 1, "{v} >> {shift}: {got}");
            prop_assert_eq!(net.meter().rounds, 1);
        }

        #[test]
        fn scaled_pow_error_is_bounded(a in -256i128..=256, i in 1u32..6, seed: u64) {
            let mut net = Network::with_seed(seed);
            let x = net.input(crate::ring::from_signed(a, 40), Scheme::AdditiveMod, modular(40)).unwrap();
            let z = scaled_pow(&mut net, &x, i, 256).unwrap();
            let exact = (a as f64).powi(i as i32) / 256f64.powi(i as i32 - 1);
            prop_assert!((net.decrypt_signed(&z) as f64 - exact).abs() <= f64::from(i - 1));
        }

        #[test]
        fn mul_matches_wrapping_product(a: u32, b: u32, seed: u64) {
            let mut net = Network::with_seed(seed);
            let x = net.input(u128::from(a), Scheme::AdditiveMod, modular(32)).unwrap();
            let y = net.input(u128::from(b), Scheme::AdditiveMod, modular(32)).unwrap();
            let z = mul(&mut net, &x, &y).unwrap();
            prop_assert_eq!(net.decrypt(&z), u128::from(a.wrapping_mul(b)));
        }
    }
}
