//! Multiplication and division by public constants.

use crate::error::{Error, Result};
use crate::primitives;
use crate::ring::{bit_len, mask, RingParams, Scheme, SharedSecret, MAX_BITS};
use crate::transport::{Label, Network, PartyId};

/// `a * c`: both parties scale their half. No communication.
///
/// Modular secrets wrap; purely additive secrets grow by `bit_len(c)` bits.
pub fn mul_by_public(net: &mut Network, x: &SharedSecret, c: u128) -> Result<SharedSecret> {
    match x.scheme() {
        Scheme::AdditiveMod => primitives::scale(net, x, c),
        Scheme::PureAdditive => {
            let ring = x.ring();
            let grow = bit_len(c);
            if ring.b + grow > MAX_BITS {
                return Err(Error::InvalidRing(format!("product needs {} key bits", ring.b + grow)));
            }
            let out = RingParams { l: ring.l + grow, b: ring.b + grow, ..ring };
            Ok(net.share(x.e() * c, x.k() * c, Scheme::PureAdditive, out, x.ready))
        }
        Scheme::Xor => Err(Error::SchemeMismatch { expected: Scheme::AdditiveMod, found: Scheme::Xor }),
    }
}

/// `floor(a / c)` for a purely additive secret, exact when `2^(k-1) >= c`.
///
/// The EVH scales its ciphertext by `2^k` and divides; the KH does the same
/// with its key and sends `K'' - floor(2^k K / c)` where `K''` is a fresh key
/// with `k` zero low bits. Both then drop `k` bits. One round, `k + b + 2`
/// bits.
///
/// The EVH learns `floor(2^k E / c)`, whose low bits depend on `E mod c`;
/// as in the underlying scheme this is treated as part of its ciphertext view.
pub fn div_by_public(net: &mut Network, x: &SharedSecret, c: u128, k: u32) -> Result<SharedSecret> {
    let high = net.local(PartyId::Kh, x.ring().b);
    div_by_public_with_key(net, x, c, k, high)
}

/// [`div_by_public`] with the KH's fresh key given as its high part
/// (`K'' = 2^k * high`).
pub fn div_by_public_with_key(net: &mut Network, x: &SharedSecret, c: u128, k: u32, high: u128) -> Result<SharedSecret> {
    if x.scheme() != Scheme::PureAdditive {
        return Err(Error::SchemeMismatch { expected: Scheme::PureAdditive, found: x.scheme() });
    }
    if c == 0 {
        return Err(Error::Domain("division by zero".into()));
    }
    if k == 0 || (1u128 << (k - 1)) < c {
        return Err(Error::Domain(format!("scaling 2^{k} too small for divisor {c}: need 2^(k-1) >= c")));
    }
    let ring = x.ring();
    if ring.b + k + 2 > 127 - bit_len(c) || high > mask(ring.b) {
        return Err(Error::InvalidRing(format!("scaling by 2^{k} overflows a {}-bit key", ring.b)));
    }
    let fresh = high << k;
    let evh_scaled = (x.e() << k) / c;
    let kh_scaled = (x.k() << k) / c;
    let width = k + ring.b + 2;
    let delta = (fresh as i128 - kh_scaled as i128) as u128 & mask(width);
    let round = net.send(PartyId::Kh, PartyId::Evh, x.ready, &[(delta, width)], Label::Opaque)?;
    let shifted = evh_scaled.wrapping_add(delta) & mask(width);
    Ok(net.share(shifted >> k, high, Scheme::PureAdditive, ring, round))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_instance() {
        // a = 7, c = 3, K = 5, k = 3, K'' = 8: E'' = 27, result (3, 1).
        let mut net = Network::with_seed(0);
        let ring = RingParams::with_key_bits(4, 4).unwrap();
        let x = net.input_with_key(7, 5, Scheme::PureAdditive, ring).unwrap();
        let q = div_by_public_with_key(&mut net, &x, 3, 3, 1).unwrap();
        assert_eq!((q.e(), q.k()), (3, 1));
        assert_eq!(net.decrypt(&q), 2);
        assert_eq!(net.meter().rounds, 1);
    }

    #[test]
    fn rejects_bad_parameters() {
        let mut net = Network::with_seed(0);
        let ring = RingParams::with_key_bits(4, 8).unwrap();
        let x = net.input(7, Scheme::PureAdditive, ring).unwrap();
        assert!(matches!(div_by_public(&mut net, &x, 0, 3), Err(Error::Domain(_))));
        assert!(matches!(div_by_public(&mut net, &x, 5, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn multiplication_is_free() {
        let mut net = Network::with_seed(0);
        let ring = RingParams::with_key_bits(6, 8).unwrap();
        let x = net.input(5, Scheme::PureAdditive, ring).unwrap();
        let y = mul_by_public(&mut net, &x, 3).unwrap();
        assert_eq!(net.decrypt(&y), 15);
        assert_eq!((net.meter().rounds, net.meter().total_bits()), (0, 0));
    }
}
