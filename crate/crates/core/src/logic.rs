//! Hamming distance, fan-in AND, equality and sign tests, carry bits.
//!
//! Every result is a single XOR-shared bit unless stated otherwise.

use crate::config::{validate_base, CarryMethod, FanInStrategy};
use crate::conversions::{bits_to_additive, with_carries};
use crate::error::{Error, Result};
use crate::primitives::{self, and2, fanin_and_base, table_gate, xor_bit};
use crate::ring::{bit, bit_len, mask, Scheme, SharedSecret};
use crate::transport::{Label, Network, PartyId};

/// Parameters of the sign tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComparisonConfig {
    /// Sign bits assumed in the plaintext.
    pub n_s: u32,
    /// Independent repetitions for the majority test.
    pub n_e: u32,
    /// Sign bits of the majority stage; derived from `n_e` and `n_s` when unset.
    pub n_b: Option<u32>,
    pub base: u32,
    /// Fan-in strategy for the equality tests inside the comparison tree.
    pub equality: FanInStrategy,
    /// Re-encrypt under a key whose top `n_s` bits are mixed, making the sign
    /// test deterministic at the cost of a smaller key space.
    pub filtered_keys: bool,
}

impl Default for ComparisonConfig {
    fn default() -> Self {
        Self { n_s: 2, n_e: 1, n_b: None, base: 6, equality: FanInStrategy::Base, filtered_keys: false }
    }
}

impl ComparisonConfig {
    pub fn validate(&self) -> Result<()> {
        validate_base(self.base)?;
        if self.n_s < 2 {
            return Err(Error::Config(format!("n_s = {} but at least 2 sign bits are required", self.n_s)));
        }
        if self.n_e == 0 {
            return Err(Error::Config("n_e must be positive".into()));
        }
        Ok(())
    }

    /// Sign bits of the majority stage:
    /// `ceil(n_e (2^(n_s-1) - 1) / 6 * log2(e))`, at least 1.
    pub fn majority_sign_bits(&self) -> u32 {
        self.n_b.unwrap_or_else(|| {
            let exponent = f64::from(self.n_e) * ((1u64 << (self.n_s - 1).min(62)) as f64 - 1.0) / 6.0;
            ((exponent * std::f64::consts::LOG2_E).ceil() as u32).max(1)
        })
    }
}

fn require_bits(bits: &[SharedSecret]) -> Result<()> {
    if bits.is_empty() {
        return Err(Error::Config("empty bit vector".into()));
    }
    for b in bits {
        if b.scheme() != Scheme::Xor || b.bits() != 1 {
            return Err(Error::SchemeMismatch { expected: Scheme::Xor, found: b.scheme() });
        }
    }
    Ok(())
}

/// Ring width of a Hamming distance over `w` bits: `ceil(log2(w + 1)) + 1`.
pub fn hamming_ring_bits(w: u32) -> u32 {
    bit_len(u128::from(w)) + 1
}

/// Number of set plaintext bits, additive modulo `2^hamming_ring_bits(w)`.
/// Two rounds.
pub fn hamming(net: &mut Network, bits: &[SharedSecret]) -> Result<SharedSecret> {
    require_bits(bits)?;
    bits_to_additive(net, bits, hamming_ring_bits(bits.len() as u32), false)
}

/// Hamming distance between the EVH's and KH's halves of an XOR word.
pub fn hamming_distance(net: &mut Network, x: &SharedSecret) -> Result<SharedSecret> {
    let bits = primitives::split_bits(net, x)?;
    hamming(net, &bits)
}

fn negate_all(net: &mut Network, bits: &[SharedSecret]) -> Result<Vec<SharedSecret>> {
    bits.iter().map(|b| primitives::not_bit(net, b)).collect()
}

/// Largest popcount of any integer in `[0, bound]`.
fn max_popcount(bound: u128) -> u128 {
    let len = bit_len(bound);
    if len == 0 {
        return 0;
    }
    u128::from(bound.count_ones()).max(u128::from(len - 1))
}

/// Replaces `bits` by the XOR bits of their count. `count_bound` bounds the
/// count; the returned bound covers the count of the new bits.
fn count_step(net: &mut Network, bits: &[SharedSecret], count_bound: u128) -> Result<(Vec<SharedSecret>, u128)> {
    let count = hamming(net, bits)?;
    let carries = carry_bits_upto(net, &count, bit_len(count_bound))?;
    Ok((with_carries(net, &count, &carries), max_popcount(count_bound)))
}

/// `[all bits zero]` by repeated Hamming counts until one bit remains.
fn all_zero_by_hamming(net: &mut Network, bits: &[SharedSecret]) -> Result<SharedSecret> {
    let mut current = bits.to_vec();
    let mut count_bound = bits.len() as u128;
    while current.len() > 1 {
        (current, count_bound) = count_step(net, &current, count_bound)?;
    }
    primitives::not_bit(net, &current[0])
}

/// AND of `bits` by iterated Hamming weights; the EVH negates at the end.
pub fn fanin_hamming(net: &mut Network, bits: &[SharedSecret]) -> Result<SharedSecret> {
    require_bits(bits)?;
    if bits.len() == 1 {
        return Ok(bits[0]);
    }
    let negated = negate_all(net, bits)?;
    all_zero_by_hamming(net, &negated)
}

/// AND of `bits` with a tree of `base`-input table gates;
/// `2 ceil(log_base w)` rounds.
pub fn fanin_base(net: &mut Network, bits: &[SharedSecret], base: u32) -> Result<SharedSecret> {
    require_bits(bits)?;
    validate_base(base)?;
    let mut level = bits.to_vec();
    while level.len() > 1 {
        level = level
            .chunks(base as usize)
            .map(|group| if group.len() == 1 { Ok(group[0]) } else { fanin_and_base(net, group, base) })
            .collect::<Result<_>>()?;
    }
    Ok(level[0])
}

/// AND of `bits`: `depth` Hamming reductions, then a base tree over the
/// remaining count bits.
pub fn fanin_both(net: &mut Network, bits: &[SharedSecret], depth: u32, base: u32) -> Result<SharedSecret> {
    require_bits(bits)?;
    validate_base(base)?;
    if bits.len() == 1 {
        return Ok(bits[0]);
    }
    let mut current = negate_all(net, bits)?;
    let mut count_bound = bits.len() as u128;
    for _ in 0..depth.max(1) {
        if current.len() == 1 {
            break;
        }
        (current, count_bound) = count_step(net, &current, count_bound)?;
    }
    // `current` holds a count that is zero exactly when every input was one.
    let negated = negate_all(net, &current)?;
    fanin_base(net, &negated, base)
}

/// AND of `bits` with the chosen strategy.
pub fn fanin(net: &mut Network, bits: &[SharedSecret], strategy: FanInStrategy, base: u32) -> Result<SharedSecret> {
    match strategy {
        FanInStrategy::Hamming => fanin_hamming(net, bits),
        FanInStrategy::Base => fanin_base(net, bits, base),
        FanInStrategy::Both { depth } => fanin_both(net, bits, depth, base),
    }
}

/// `[a == 0]` for XOR bits of `a`.
pub fn equal_zero_bits(net: &mut Network, bits: &[SharedSecret], strategy: FanInStrategy, base: u32) -> Result<SharedSecret> {
    require_bits(bits)?;
    match strategy {
        FanInStrategy::Hamming if bits.len() > 1 => all_zero_by_hamming(net, bits),
        _ => {
            let negated = negate_all(net, bits)?;
            fanin(net, &negated, strategy, base)
        }
    }
}

/// `[a == 0]` for an XOR-encrypted word.
pub fn equal_zero(net: &mut Network, x: &SharedSecret, strategy: FanInStrategy, base: u32) -> Result<SharedSecret> {
    let bits = primitives::split_bits(net, x)?;
    equal_zero_bits(net, &bits, strategy, base)
}

/// `[E < K]` for the EVH's `e` and the KH's `k` read as `width`-bit unsigned
/// integers, by recursive halving.
///
/// The high half decides unless it is equal, in which case the low half
/// does: `high ^ ([E_hi == K_hi] & low)`. The three parts run in parallel.
fn less_than_key(
    net: &mut Network,
    e: u128,
    k: u128,
    width: u32,
    start: u32,
    equality: FanInStrategy,
    base: u32,
) -> Result<SharedSecret> {
    if width == 1 {
        let not_e = xor_bit(net, (e & 1) ^ 1, 0, start);
        let key = xor_bit(net, 0, k & 1, start);
        return and2(net, &not_e, &key);
    }
    let low_width = width / 2;
    let high_width = width - low_width;
    let (e_high, k_high) = (e >> low_width, k >> low_width);
    let high = less_than_key(net, e_high, k_high, high_width, start, equality, base)?;
    let low = less_than_key(net, e & mask(low_width), k & mask(low_width), low_width, start, equality, base)?;
    let difference: Vec<SharedSecret> =
        (0..high_width).map(|i| xor_bit(net, bit(e_high, i), bit(k_high, i), start)).collect();
    let same = equal_zero_bits(net, &difference, equality, base)?;
    let pick_low = and2(net, &same, &low)?;
    primitives::add(net, &high, &pick_low)
}

/// `[E < K]` over the full width of `x`, which for additive encryption is
/// the carry out of `a + K`.
pub fn key_exceeds(net: &mut Network, x: &SharedSecret) -> Result<SharedSecret> {
    let base = net.settings().base;
    less_than_key(net, x.e() & x.ring().mask(), x.k() & x.ring().mask(), x.bits(), x.ready, FanInStrategy::Base, base)
}

/// Carry into bit `i` of `E = a + K`: `[E mod 2^i < K mod 2^i]`.
pub fn carry_at(net: &mut Network, x: &SharedSecret, i: u32, method: CarryMethod) -> Result<SharedSecret> {
    let start = x.ready;
    if i == 0 {
        return Ok(xor_bit(net, 0, 0, start));
    }
    let (e, k) = (x.e() & mask(i), x.k() & mask(i));
    let base = net.settings().base;
    match method {
        CarryMethod::Comparison => less_than_key(net, e, k, i, start, FanInStrategy::Base, base),
        CarryMethod::Boolean if i <= base => table_gate(net, e, i, start, move |u| u < k),
        CarryMethod::Boolean => {
            // Exactly one position can be the highest differing one, so the
            // terms are disjoint and XOR acts as OR.
            let mut carry = xor_bit(net, 0, 0, start);
            for j in 0..i {
                let mut term = vec![xor_bit(net, bit(e, j) ^ 1, 0, start), xor_bit(net, 0, bit(k, j), start)];
                term.extend((j + 1..i).map(|m| xor_bit(net, bit(e, m) ^ 1, bit(k, m), start)));
                let t = fanin_base(net, &term, base)?;
                carry = primitives::add(net, &carry, &t)?;
            }
            Ok(carry)
        }
    }
}

/// Carries `c_0, ..., c_{n-1}` with the run's carry method.
pub fn carry_bits_upto(net: &mut Network, x: &SharedSecret, n: u32) -> Result<Vec<SharedSecret>> {
    let method = net.settings().effective_carry();
    (0..n).map(|i| carry_at(net, x, i, method)).collect()
}

/// Carries `c_0, ..., c_{l-1}` of an additive secret with the run's method.
pub fn carry_bits(net: &mut Network, x: &SharedSecret) -> Result<Vec<SharedSecret>> {
    carry_bits_upto(net, x, x.bits())
}

/// Carries with an explicit method.
pub fn carry_bits_with(net: &mut Network, x: &SharedSecret, method: CarryMethod) -> Result<Vec<SharedSecret>> {
    (0..x.bits()).map(|i| carry_at(net, x, i, method)).collect()
}

/// Exact sign bit `e_{l-1} ^ k_{l-1} ^ c_{l-1}`.
pub fn exact_sign(net: &mut Network, x: &SharedSecret) -> Result<SharedSecret> {
    let top = x.bits() - 1;
    let carry = carry_at(net, x, top, CarryMethod::Boolean)?;
    Ok(xor_bit(net, bit(x.e(), top) ^ carry.e(), bit(x.k(), top) ^ carry.k(), carry.ready.max(x.ready)))
}

/// Re-encrypts under a key whose top `n_s` bits are neither all zero nor all
/// one. One round.
pub fn reencrypt_filtered(net: &mut Network, x: &SharedSecret, n_s: u32) -> Result<SharedSecret> {
    let l = x.bits();
    if n_s < 2 || n_s > l {
        return Err(Error::Config(format!("cannot filter {n_s} top bits of a {l}-bit key")));
    }
    let top = |k: u128| k >> (l - n_s);
    let fresh = loop {
        let k = net.local(PartyId::Kh, l);
        if top(k) != 0 && top(k) != mask(n_s) {
            break k;
        }
    };
    let m = x.ring().mask();
    let delta = fresh.wrapping_sub(x.k()) & m;
    let round = net.send(PartyId::Kh, PartyId::Evh, x.ready, &[(delta, l)], Label::Opaque)?;
    Ok(net.share(x.e().wrapping_add(delta) & m, fresh, Scheme::AdditiveMod, x.ring(), round))
}

fn require_additive(x: &SharedSecret) -> Result<()> {
    if x.scheme() != Scheme::AdditiveMod {
        return Err(Error::SchemeMismatch { expected: Scheme::AdditiveMod, found: x.scheme() });
    }
    Ok(())
}

fn sign_test(net: &mut Network, x: &SharedSecret, cfg: &ComparisonConfig) -> Result<SharedSecret> {
    if net.settings().deterministic_carry {
        return exact_sign(net, x);
    }
    let x = if cfg.filtered_keys { reencrypt_filtered(net, x, cfg.n_s)? } else { *x };
    less_than_key(net, x.e(), x.k(), x.bits(), x.ready, cfg.equality, cfg.base)
}

/// `[a < 0]` for a two's-complement plaintext with `n_s` sign bits.
///
/// Returns `[E < K]`, which is wrong only when the top `n_s` key bits are all
/// one (for `a > 0`) or all zero (for `a < 0`): probability at most
/// `2^-n_s` under a uniform key, and never for `a = 0`. Exact in
/// deterministic-carry mode or with filtered keys.
pub fn less_zero(net: &mut Network, x: &SharedSecret, cfg: &ComparisonConfig) -> Result<SharedSecret> {
    cfg.validate()?;
    require_additive(x)?;
    sign_test(net, x, cfg)
}

/// Majority of `n_e` independent sign tests under fresh keys.
///
/// The repetition results are summed into a ring of
/// `1 + floor(log2 n_e) + n_b` bits and `floor(n_e / 2) - sum` is tested
/// for sign, so the output is one iff strictly more than half the tests
/// said negative.
pub fn multi_less_zero(net: &mut Network, x: &SharedSecret, cfg: &ComparisonConfig) -> Result<SharedSecret> {
    cfg.validate()?;
    require_additive(x)?;
    if cfg.n_e == 1 {
        return sign_test(net, x, cfg);
    }
    let votes: Vec<SharedSecret> = (0..cfg.n_e)
        .map(|_| {
            let copy = primitives::reencrypt(net, x)?;
            sign_test(net, &copy, cfg)
        })
        .collect::<Result<_>>()?;
    let count_bits = bit_len(u128::from(cfg.n_e));
    let n_b = cfg.majority_sign_bits().min(crate::ring::MAX_BITS - count_bits);
    let sum = bits_to_additive(net, &votes, count_bits + n_b, false)?;
    let negated = primitives::neg(net, &sum)?;
    let margin = primitives::add_public(net, &negated, u128::from(cfg.n_e / 2))?;
    let majority = ComparisonConfig { n_s: n_b.max(2), filtered_keys: false, ..*cfg };
    sign_test(net, &margin, &majority)
}
