//! Sine, cosine and tangent of fixed-point secrets.
//!
//! Inputs are purely additive, offset-binary encoded fixed-point secrets
//! (see [`encrypt_signed`](crate::numeric::fixed::encrypt_signed)); the key is
//! read as a fixed-point real with the same fraction bits.

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conversions::xor_to_add_in;
use crate::error::{Error, Result};
use crate::logic::exact_sign;
use crate::numeric::fixed::{offset, scale};
use crate::numeric::taylor::{reciprocal_parts, TaylorConfig};
use crate::primitives::{self, and2, mul, rescale, table_gate, xor_bit};
use crate::ring::{bit_len, mask, to_signed, RingParams, Round, Scheme, SharedSecret};
use crate::transport::{Label, Network, Pair, PartyId};

/// Widths of the sum-to-product protocols.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrigConfig {
    /// Fraction bits of the intermediate factors.
    pub internal_frac: u32,
    /// Ring of the product; the output ring is
    /// `product_bits - (2 internal_frac - c)` bits.
    pub product_bits: u32,
}

impl Default for TrigConfig {
    fn default() -> Self {
        Self { internal_frac: 12, product_bits: 31 }
    }
}

#[derive(Clone, Copy)]
enum Wave {
    Sine,
    Cosine,
}

fn require_fixed_input(x: &SharedSecret) -> Result<()> {
    if x.scheme() != Scheme::PureAdditive {
        return Err(Error::SchemeMismatch { expected: Scheme::PureAdditive, found: x.scheme() });
    }
    Ok(())
}

/// `sin(a) = 2 f((a + K) / 2) cos((a - K) / 2) - sin(K)` with
/// `f = sin` (or the cosine analogue). Five rounds.
fn sum_to_product(net: &mut Network, x: &SharedSecret, cfg: &TrigConfig, wave: Wave) -> Result<SharedSecret> {
    require_fixed_input(x)?;
    let ring = x.ring();
    let c = ring.frac;
    let wf = cfg.internal_frac;
    if 2 * wf < c || cfg.product_bits <= 2 * wf - c + 4 {
        return Err(Error::Config(format!("internal precision {wf} does not fit output precision {c}")));
    }
    let mask_bits = ring.b + 3;
    if mask_bits > crate::ring::MAX_BITS {
        return Err(Error::InvalidRing(format!("{}-bit keys leave no room for masking", ring.b)));
    }
    let product = RingParams::new(cfg.product_bits)?;
    let s = scale(c);
    let internal = scale(wf);
    let off = offset(ring.l) as i128;

    // KH: re-keys towards the helper.
    let helper_key = net.preshared(Pair::KhHe, mask_bits);
    let rekey = helper_key.wrapping_sub(x.k().wrapping_mul(2)) & mask(mask_bits);
    let r1 = net.send(PartyId::Kh, PartyId::Evh, x.ready, &[(rekey, mask_bits)], Label::Opaque)?;

    // EVH: local factor and the re-keyed value for the helper.
    let sum = (x.e() as i128 - off) as f64 / s;
    let outer = match wave {
        Wave::Sine => (sum / 2.0).sin(),
        Wave::Cosine => (sum / 2.0).cos(),
    };
    let t0 = (2.0 * outer * internal).round() as i128;
    let to_helper = x.e().wrapping_add(rekey) & mask(mask_bits);
    let r2 = net.send(PartyId::Evh, PartyId::He, r1, &[(to_helper, mask_bits)], Label::Opaque)?;

    // HE: learns a - K, returns its factor under a key shared with the KH.
    let difference = to_signed(to_helper.wrapping_sub(helper_key), mask_bits) - off;
    let t1 = ((difference as f64 / (2.0 * s)).cos() * internal).round() as i128;
    let factor_key = net.preshared(Pair::KhHe, product.l);
    let masked = (t1 as u128).wrapping_add(factor_key) & product.mask();
    let r3 = net.send(PartyId::He, PartyId::Evh, r2, &[(masked, product.l)], Label::Opaque)?;

    let left = net.share(t0 as u128 & product.mask(), 0, Scheme::AdditiveMod, product, r2);
    let right = net.share(masked, factor_key, Scheme::AdditiveMod, product, r3);
    let joint = mul(net, &left, &right)?;

    // Local truncation to c fraction bits, then the KH removes f(K).
    let shift = 2 * wf - c;
    let out = RingParams::new(product.l - shift)?.with_frac(c)?;
    let key_real = x.k() as f64 / s;
    let correction = match wave {
        Wave::Sine => key_real.sin(),
        Wave::Cosine => key_real.cos(),
    };
    let correction = ((correction * s).round() as i128) as u128;
    let e = (joint.e() >> shift) & out.mask();
    let k = ((joint.k() >> shift).wrapping_add(correction)) & out.mask();
    Ok(net.share(e, k, Scheme::AdditiveMod, out, joint.ready))
}

/// `sin(a)` with the input's fraction bits, additive modulo `2^(product_bits -
/// 2 internal_frac + c)`. Five rounds.
pub fn sine(net: &mut Network, x: &SharedSecret, cfg: &TrigConfig) -> Result<SharedSecret> {
    sum_to_product(net, x, cfg, Wave::Sine)
}

/// `cos(a)`, as [`sine`].
pub fn cosine(net: &mut Network, x: &SharedSecret, cfg: &TrigConfig) -> Result<SharedSecret> {
    sum_to_product(net, x, cfg, Wave::Cosine)
}

/// Parameters of the tangent protocol.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TangentConfig {
    /// Key pairs evaluated in parallel.
    pub n_p: u32,
    /// Small-value threshold; `k = 1 / sqrt(c2)`.
    pub c2: f64,
    /// Large-value threshold.
    pub c3: f64,
    /// Fraction bits of tangent values and of the output.
    pub frac: u32,
    /// Ring of the arithmetic.
    pub ring_bits: u32,
    /// Let the helper decrypt each denominator and return its inverse.
    /// Breaks the access rule; for comparison only.
    pub unsafe_reveal: bool,
}

impl Default for TangentConfig {
    fn default() -> Self {
        Self { n_p: 3, c2: 1e-4, c3: 100.0, frac: 16, ring_bits: 62, unsafe_reveal: false }
    }
}

/// Substitutes used by a party whose conditions fail.
pub const KEY_DUMMIES: (f64, f64) = (1.0, 2.0);
pub const CIPHERTEXT_DUMMIES: (f64, f64) = (3.0, 7.0);

/// Fraction bits of the public inverse count factors.
const AVERAGE_FRAC: u32 = 20;
/// Fraction bits of the helper's inverse in the revealing variant.
const REVEAL_FRAC: u32 = 20;

impl TangentConfig {
    pub fn k(&self) -> f64 {
        1.0 / self.c2.sqrt()
    }

    /// Conditions checked by the KH on `tan(K)` and `tan(K')`.
    pub fn keys_suitable(&self, t_key: f64, t_key2: f64) -> bool {
        let low = self.k() * self.c2;
        t_key.abs() >= low
            && t_key2.abs() >= low
            && (t_key - t_key2).abs() >= low
            && t_key.abs() < self.c3
            && t_key2.abs() < self.c3
    }

    /// Conditions checked by the EVH on `tan(a + K)` and `tan(a + K')`.
    pub fn ciphertexts_suitable(&self, t_sum: f64, t_sum2: f64) -> bool {
        let low = 1.0 / self.k();
        t_sum.abs() > low && t_sum2.abs() > low && t_sum.abs() < self.c3 && t_sum2.abs() < self.c3
    }

    /// Bits needed for the magnitude of a denominator in fixed point.
    fn denominator_bits(&self) -> u32 {
        bit_len((2.0 * self.c3 * self.c3 * scale(self.frac)).ceil() as u128)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_p == 0 || self.n_p > 100 {
            return Err(Error::Config(format!("n_p = {} outside [1, 100]", self.n_p)));
        }
        if !(self.c2 > 0.0 && self.c2 < 1.0) || self.c3.is_nan() || self.c3 <= 7.0 {
            return Err(Error::Config(format!("thresholds c2 = {}, c3 = {}", self.c2, self.c3)));
        }
        let numerator_bits = bit_len((4.0 * self.c3 * scale(self.frac)).ceil() as u128);
        if self.ring_bits > crate::ring::MAX_BITS || numerator_bits + self.denominator_bits() + 1 > self.ring_bits - 4 {
            return Err(Error::Config(format!("ring of {} bits too small for c3 = {}", self.ring_bits, self.c3)));
        }
        Ok(())
    }
}

/// Fractions of uniform draws passing the key conditions, and passing the key
/// and ciphertext conditions together. Keys and plaintexts are uniform on
/// `[-pi/2, pi/2]`.
pub fn suitability_rates(cfg: &TangentConfig, trials: u64, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut keys_ok, mut all_ok) = (0u64, 0u64);
    for _ in 0..trials {
        let (k1, k2, a) = (
            rng.gen_range(-FRAC_PI_2..FRAC_PI_2),
            rng.gen_range(-FRAC_PI_2..FRAC_PI_2),
            rng.gen_range(-FRAC_PI_2..FRAC_PI_2),
        );
        let keys = cfg.keys_suitable(k1.tan(), k2.tan());
        keys_ok += u64::from(keys);
        all_ok += u64::from(keys && cfg.ciphertexts_suitable((a + k1).tan(), (a + k2).tan()));
    }
    (keys_ok as f64 / trials as f64, all_ok as f64 / trials as f64)
}

/// Result of [`tangent`].
#[derive(Clone, Debug)]
pub struct TangentOutput {
    /// `tan(a)` with `frac` fraction bits, two's complement in the ring.
    pub value: SharedSecret,
    pub frac: u32,
    /// One iff at least one pair passed both parties' checks. When zero the
    /// value is zero and meaningless.
    pub any_valid: SharedSecret,
}

fn fixed(value: f64, frac: u32, ring: RingParams) -> u128 {
    ((value * scale(frac)).round() as i128) as u128 & ring.mask()
}

struct PairShares {
    numerator: SharedSecret,
    denominator: SharedSecret,
    weight: SharedSecret,
}

/// Per-pair numerator, denominator (both with `frac` fraction bits) and
/// validity weight.
fn pair_shares(net: &mut Network, x: &SharedSecret, cfg: &TangentConfig) -> Result<Vec<PairShares>> {
    let ring = x.ring();
    let c = ring.frac;
    let wide = RingParams::new(cfg.ring_bits)?;
    let key_range = (FRAC_PI_2 * scale(c)).floor() as i128;
    let width = ring.b + 2;
    let off = offset(ring.l) as i128;

    let mut keys = Vec::with_capacity(cfg.n_p as usize);
    let mut deltas = Vec::with_capacity(2 * cfg.n_p as usize);
    for _ in 0..cfg.n_p {
        let mut draw = || net.local_below(PartyId::Kh, (2 * key_range + 1) as u128) as i128 - key_range;
        let (k1, k2) = (draw(), draw());
        for k in [k1, k2] {
            deltas.push(((k - x.k() as i128) as u128 & mask(width), width));
        }
        keys.push((k1, k2));
    }
    let r1 = net.send(PartyId::Kh, PartyId::Evh, x.ready, &deltas, Label::Opaque)?;

    let mut pairs = Vec::with_capacity(keys.len());
    for (i, &(k1, k2)) in keys.iter().enumerate() {
        // EVH side.
        let shifted = |d: u128| (x.e() as i128 - off + to_signed(d, width)) as f64 / scale(c);
        let (t1, t2) = (shifted(deltas[2 * i].0).tan(), shifted(deltas[2 * i + 1].0).tan());
        let evh_ok = cfg.ciphertexts_suitable(t1, t2);
        let (t1, t2) = if evh_ok { (t1, t2) } else { CIPHERTEXT_DUMMIES };
        // KH side.
        let (u1, u2) = ((k1 as f64 / scale(c)).tan(), (k2 as f64 / scale(c)).tan());
        let kh_ok = cfg.keys_suitable(u1, u2);
        let (u1, u2) = if kh_ok { (u1, u2) } else { KEY_DUMMIES };

        let f = cfg.frac;
        let (e1, e2, q1, q2) = (fixed(t1, f, wide), fixed(t2, f, wide), fixed(u1, f, wide), fixed(u2, f, wide));
        // tan K - tan K' + tan(a + K') - tan(a + K)
        let numerator = net.share(e2.wrapping_sub(e1) & wide.mask(), q2.wrapping_sub(q1) & wide.mask(), Scheme::AdditiveMod, wide, r1);
        // tan(a + K') tan K' - tan(a + K) tan K
        let evh_first = net.share(e1, 0, Scheme::AdditiveMod, wide, r1);
        let evh_second = net.share(e2, 0, Scheme::AdditiveMod, wide, r1);
        let kh_first = net.share(0, q1.wrapping_neg() & wide.mask(), Scheme::AdditiveMod, wide, x.ready);
        let kh_second = net.share(0, q2.wrapping_neg() & wide.mask(), Scheme::AdditiveMod, wide, x.ready);
        let second = mul(net, &evh_second, &kh_second)?;
        let first = mul(net, &evh_first, &kh_first)?;
        let product = primitives::sub(net, &second, &first)?;
        let denominator = rescale(net, &product, f)?;

        let evh_bit = xor_bit(net, u128::from(evh_ok), 0, r1);
        let kh_bit = xor_bit(net, 0, u128::from(kh_ok), x.ready);
        let weight = and2(net, &evh_bit, &kh_bit)?;
        pairs.push(PairShares { numerator, denominator, weight });
    }
    Ok(pairs)
}

/// Smallest denominator magnitude a pair may have, as a power of two.
/// Pairs with `K' = -(a + K)` have a zero numerator and denominator and no
/// party can see it locally.
pub const MIN_DENOMINATOR_LOG2: i32 = -6;

/// `numerator / denominator` with `frac` fraction bits, without revealing
/// anything: exact sign, magnitude, series reciprocal. The second output is
/// one iff the denominator is large enough.
fn secure_quotient(net: &mut Network, pair: &PairShares, cfg: &TangentConfig) -> Result<(SharedSecret, SharedSecret)> {
    let h = cfg.denominator_bits();
    let narrow_bits = h + 4;
    let denominator = primitives::reduce(net, &pair.denominator, narrow_bits)?;
    let negative = exact_sign(net, &denominator)?;

    let sign_narrow = xor_to_add_in(net, std::slice::from_ref(&negative), narrow_bits)?;
    let flip = primitives::scale(net, &sign_narrow, 2u128.wrapping_neg())?;
    let flip = primitives::add_public(net, &flip, 1)?;
    let magnitude = mul(net, &denominator, &flip)?;
    let threshold = 1u128 << (cfg.frac as i32 + MIN_DENOMINATOR_LOG2);
    let margin = primitives::add_public(net, &magnitude, threshold.wrapping_neg() & magnitude.ring().mask())?;
    let tiny = exact_sign(net, &margin)?;
    let usable = primitives::not_bit(net, &tiny)?;

    let taylor = TaylorConfig { input_bits: h, ..TaylorConfig::for_ring(2 * h) };
    let parts = reciprocal_parts(net, &magnitude, &taylor)?;
    let partial = mul(net, &pair.numerator, &parts.scaled_inverse)?;
    let partial = rescale(net, &partial, taylor.frac_bits)?;
    let unsigned = mul(net, &partial, &parts.rev_pow)?;
    let unsigned = rescale(net, &unsigned, h - cfg.frac)?;

    let sign_wide = xor_to_add_in(net, std::slice::from_ref(&negative), cfg.ring_bits)?;
    let flip = primitives::scale(net, &sign_wide, 2u128.wrapping_neg())?;
    let flip = primitives::add_public(net, &flip, 1)?;
    Ok((mul(net, &unsigned, &flip)?, usable))
}

/// The helper decrypts the denominator and returns its inverse. Violates the
/// access rule by construction.
fn revealed_quotient(net: &mut Network, pair: &PairShares, cfg: &TangentConfig) -> Result<(SharedSecret, SharedSecret)> {
    let d = &pair.denominator;
    let wide = d.ring();
    let r1 = net.send(PartyId::Evh, PartyId::He, d.ready, &[(d.e(), wide.l)], Label::Ciphertext(d.id()))?;
    net.send(PartyId::Kh, PartyId::He, d.ready, &[(d.k(), wide.l)], Label::Key(d.id()))?;
    let plain = to_signed(d.e().wrapping_sub(d.k()), wide.l);
    let inverse = if plain == 0 { 0.0 } else { scale(cfg.frac + REVEAL_FRAC) / plain as f64 };
    let key = net.preshared(Pair::KhHe, wide.l);
    let masked = fixed(inverse, 0, wide).wrapping_add(key) & wide.mask();
    let usable_key = net.preshared(Pair::KhHe, 1);
    let usable = u128::from(plain.unsigned_abs() as f64 >= scale(cfg.frac) * 2f64.powi(MIN_DENOMINATOR_LOG2)) ^ usable_key;
    let r2 = net.send(PartyId::He, PartyId::Evh, r1, &[(masked, wide.l), (usable, 1)], Label::Opaque)?;
    let inverse = net.share(masked, key, Scheme::AdditiveMod, wide, r2);
    let usable = xor_bit(net, usable, usable_key, r2);
    let product = mul(net, &pair.numerator, &inverse)?;
    Ok((rescale(net, &product, REVEAL_FRAC)?, usable))
}

/// `tan(a)` as the average of the quotients of all pairs that passed both
/// parties' checks.
pub fn tangent(net: &mut Network, x: &SharedSecret, cfg: &TangentConfig) -> Result<TangentOutput> {
    require_fixed_input(x)?;
    cfg.validate()?;
    let wide = RingParams::new(cfg.ring_bits)?;
    let pairs = pair_shares(net, x, cfg)?;

    let mut total = net.constant(0, Scheme::AdditiveMod, wide);
    let mut count = net.constant(0, Scheme::AdditiveMod, wide);
    for pair in &pairs {
        let (quotient, usable) =
            if cfg.unsafe_reveal { revealed_quotient(net, pair, cfg)? } else { secure_quotient(net, pair, cfg)? };
        let weight = and2(net, &pair.weight, &usable)?;
        let weight = xor_to_add_in(net, std::slice::from_ref(&weight), cfg.ring_bits)?;
        let kept = mul(net, &quotient, &weight)?;
        total = primitives::add(net, &total, &kept)?;
        count = primitives::add(net, &count, &weight)?;
    }

    // One-hot decoding of the small count by table gates, then a public
    // inverse per possible count.
    let count_bits = bit_len(u128::from(cfg.n_p)) + 1;
    let small = primitives::reduce(net, &count, count_bits)?;
    let key = small.k();
    let count_is = |net: &mut Network, j: u128, start: Round| {
        table_gate(net, small.e(), count_bits, start, move |u| u.wrapping_sub(key) & mask(count_bits) == j)
    };
    let none = count_is(net, 0, small.ready)?;
    let any_valid = primitives::not_bit(net, &none)?;
    let mut average = net.constant(0, Scheme::AdditiveMod, wide);
    for j in 1..=u128::from(cfg.n_p) {
        let hit = count_is(net, j, small.ready)?;
        let hit = xor_to_add_in(net, std::slice::from_ref(&hit), cfg.ring_bits)?;
        let selected = mul(net, &total, &hit)?;
        let inverse = ((scale(AVERAGE_FRAC) / j as f64).round()) as u128;
        let term = primitives::scale(net, &selected, inverse)?;
        average = primitives::add(net, &average, &term)?;
    }
    let value = rescale(net, &average, AVERAGE_FRAC)?;
    Ok(TangentOutput { value, frac: cfg.frac, any_valid })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::fixed::{decrypt_fixed, encrypt_signed, FixedPoint};

    const C: u32 = 8;

    fn input(net: &mut Network, value: f64) -> SharedSecret {
        let ring = RingParams::with_key_bits(16, 16).unwrap();
        encrypt_signed(net, FixedPoint::from_f64(value, C), ring).unwrap()
    }

    #[test]
    fn plaintext_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let (a, k, k2): (f64, f64, f64) = (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(-1.5..1.5));
            let sine = 2.0 * ((a + k) / 2.0).sin() * ((a - k) / 2.0).cos() - k.sin();
            let cosine = 2.0 * ((a + k) / 2.0).cos() * ((a - k) / 2.0).cos() - k.cos();
            assert!((sine - a.sin()).abs() < 1e-12);
            assert!((cosine - a.cos()).abs() < 1e-12);
            let a = a / 3.0;
            let (t, t2, u, u2) = ((a + k2).tan(), (a + k2 / 2.0).tan(), k2.tan(), (k2 / 2.0).tan());
            let denominator = t2 * u2 - t * u;
            if denominator.abs() > 1e-3 && t.abs() < 1e3 && t2.abs() < 1e3 {
                let tangent = (u - u2 + t2 - t) / denominator;
                assert!((tangent - a.tan()).abs() < 1e-12 * (1.0 + t.abs() + t2.abs()).powi(2) / denominator.abs());
            }
        }
    }

    #[test]
    fn sine_and_cosine_costs_and_accuracy() {
        let cfg = TrigConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for i in 0..300 {
            let a: f64 = rng.gen_range(-100.0..100.0);
            let mut net = Network::with_seed(i);
            let x = input(&mut net, a);
            let a = decrypt_fixed_input(&net, &x);
            let s = sine(&mut net, &x, &cfg).unwrap();
            assert_eq!(net.meter().rounds, 5);
            assert!(net.meter().total_bits() <= 400);
            let c = cosine(&mut net, &x, &cfg).unwrap();
            let (s, c) = (decrypt_fixed(&net, &s, C), decrypt_fixed(&net, &c, C));
            let tolerance = 2f64.powi(2 - C as i32);
            assert!((s - a.sin()).abs() <= tolerance, "sin {a}: {s}");
            assert!((c - a.cos()).abs() <= tolerance, "cos {a}: {c}");
            assert!((s * s + c * c - 1.0).abs() <= 2.0 * tolerance);
            assert!(net.assert_views_legal().is_ok());
        }
    }

    fn decrypt_fixed_input(net: &Network, x: &SharedSecret) -> f64 {
        crate::numeric::fixed::decrypt_signed_offset(net, x).to_f64()
    }

    #[test]
    fn rejects_modular_inputs() {
        let mut net = Network::with_seed(0);
        let x = net.input(3, Scheme::AdditiveMod, RingParams::new(16).unwrap()).unwrap();
        assert!(sine(&mut net, &x, &TrigConfig::default()).is_err());
    }

    #[test]
    fn tangent_matches_on_sample_points() {
        let cfg = TangentConfig::default();
        for (i, a) in [-1.2, -0.7, -0.01, 0.0, 0.3, 1.0, 1.25].into_iter().enumerate() {
            let mut net = Network::with_seed(i as u64);
            let x = input(&mut net, a);
            let a = decrypt_fixed_input(&net, &x);
            let out = tangent(&mut net, &x, &cfg).unwrap();
            assert_eq!(net.decrypt(&out.any_valid), 1);
            let t = decrypt_fixed(&net, &out.value, out.frac);
            assert!((t - a.tan()).abs() <= 2f64.powi(2 - C as i32) * (1.0 + a.tan().powi(2)), "tan {a}: {t}");
            assert!(net.assert_views_legal().is_ok());
        }
    }

    #[test]
    fn revealing_variant_is_flagged() {
        let cfg = TangentConfig { unsafe_reveal: true, ..Default::default() };
        let mut net = Network::with_seed(5);
        let x = input(&mut net, 0.5);
        let out = tangent(&mut net, &x, &cfg).unwrap();
        let t = decrypt_fixed(&net, &out.value, out.frac);
        assert!((t - 0.5f64.tan()).abs() < 0.05, "{t}");
        let violations = net.assert_views_legal().unwrap_err();
        assert!(violations.iter().all(|v| v.party == PartyId::He));
    }

    #[test]
    fn suitability_rates_are_high() {
        let (keys, all) = suitability_rates(&TangentConfig::default(), 20_000, 3);
        assert!(keys > 0.95 && all > 0.9 && all <= keys, "{keys} {all}");
    }

    #[test]
    fn config_validation() {
        assert!(TangentConfig::default().validate().is_ok());
        assert!(TangentConfig { n_p: 0, ..Default::default() }.validate().is_err());
        assert!(TangentConfig { c3: 1e19, ..Default::default() }.validate().is_err());
    }
}
