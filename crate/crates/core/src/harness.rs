//! Runs one operation end to end: encrypt inputs, execute, decrypt, compare
//! with the plaintext reference.
//!
//! Inputs are given as signed plaintexts stored in `l`-bit two's complement.
//! Each op defines its own input domain, see [`bounds`].

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{FanInStrategy, Settings};
use crate::conversions::{self, decrypt_bits};
use crate::error::{Error, Result};
use crate::logic::{self, ComparisonConfig};
use crate::numeric::{self, FixedPoint, TangentConfig, TaylorConfig, TrigConfig};
use crate::oracle::{plain_eval, OracleResult, PlainValue};
use crate::primitives;
use crate::ring::{bit_len, from_signed, to_signed, RingParams, Scheme, SharedSecret};
use crate::transport::{CostMeter, Network, Violation};

macro_rules! ops {
    ($($variant:ident => $name:literal),* $(,)?) => {
        /// Operations the harness and the benchmark can run.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
        pub enum Op { $($variant),* }

        impl Op {
            pub const ALL: &'static [Op] = &[$(Op::$variant),*];

            pub fn name(self) -> &'static str {
                match self { $(Op::$variant => $name),* }
            }
        }

        impl FromStr for Op {
            type Err = Error;
            fn from_str(s: &str) -> Result<Self> {
                match s {
                    $($name => Ok(Op::$variant),)*
                    other => Err(Error::Config(format!("unknown op `{other}`"))),
                }
            }
        }
    };
}

ops! {
    Mul => "mul",
    And2 => "and2",
    Pow => "pow",
    ScaledPow => "scaled_pow",
    MulByPublic => "mul_by_public",
    DivByPublic => "div_by_public",
    Hamming => "hamming",
    FaninHamming => "fanin_hamming",
    FaninBase => "fanin_base",
    FaninBoth => "fanin_both",
    EqualZero => "equal_zero",
    CarryBits => "carry_bits",
    AddToXor => "add_to_xor",
    XorToAdd => "xor_to_add",
    AddToAddmod => "add_to_addmod",
    AddmodToAddFast => "addmod_to_add_fast",
    AddmodToAddSlow => "addmod_to_add_slow",
    Reencrypt => "reencrypt",
    LessZero => "less_zero",
    MultiLessZero => "multi_less_zero",
    IndexMsb => "index_msb",
    Inverse => "inv",
    Log2 => "log2",
    Sine => "sine",
    Cosine => "cosine",
    Tangent => "tangent",
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters shared by all operations; each op reads the ones it needs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OpParams {
    pub l: u32,
    /// Key bits of purely additive inputs; `l` when unset.
    pub key_bits: Option<u32>,
    pub base: u32,
    pub n_t: u32,
    pub n_e: u32,
    pub n_s: u32,
    pub n_p: u32,
    pub deterministic_carry: bool,
    pub unsafe_reveal: bool,
    pub meter_preshared: bool,
    /// Exponent of `pow` and `scaled_pow`.
    pub exponent: u32,
    /// Public constant of `mul_by_public` and `div_by_public`, scale of
    /// `scaled_pow`.
    pub public: u128,
    /// Fraction bits of trigonometric inputs.
    pub frac: u32,
    /// Fan-in strategy of `equal_zero`.
    pub strategy: FanInStrategy,
    /// Hamming reductions of `fanin_both`.
    pub depth: u32,
}

impl Default for OpParams {
    fn default() -> Self {
        Self {
            l: 32,
            key_bits: None,
            base: 6,
            n_t: 7,
            n_e: 1,
            n_s: 2,
            n_p: 3,
            deterministic_carry: false,
            unsafe_reveal: false,
            meter_preshared: false,
            exponent: 3,
            public: 3,
            frac: 8,
            strategy: FanInStrategy::Hamming,
            depth: 1,
        }
    }
}

impl OpParams {
    pub fn settings(&self) -> Settings {
        Settings {
            deterministic_carry: self.deterministic_carry,
            base: self.base,
            meter_preshared: self.meter_preshared,
            ..Settings::default()
        }
    }

    pub fn comparison(&self) -> ComparisonConfig {
        ComparisonConfig { n_s: self.n_s, n_e: self.n_e, base: self.base, ..Default::default() }
    }

    pub fn key_bits(&self) -> u32 {
        self.key_bits.unwrap_or(self.l)
    }

    fn trig_ring(&self) -> Result<RingParams> {
        RingParams::with_key_bits(self.l, self.key_bits())?.with_frac(self.frac)
    }

    fn tangent_config(&self) -> TangentConfig {
        TangentConfig { n_p: self.n_p, unsafe_reveal: self.unsafe_reveal, ..Default::default() }
    }

    /// Smallest `k` with `2^(k-1) >= public`.
    pub fn division_shift(&self) -> u32 {
        bit_len(self.public.saturating_sub(1)) + 1
    }
}

/// Half-open signed range `[lo, hi)` of each input of `op`.
pub fn bounds(op: Op, p: &OpParams) -> Result<Vec<(i128, i128)>> {
    let l = p.l;
    if l == 0 || l > crate::ring::MAX_BITS {
        return Err(Error::InvalidRing(format!("{l} bits")));
    }
    let full = (0, 1i128 << l);
    let below = |bits: u32| (0, 1i128 << bits);
    Ok(match op {
        Op::Mul => vec![full, full],
        Op::And2 => vec![(0, 2), (0, 2)],
        Op::ScaledPow => {
            let s = p.public as i128;
            vec![(-s, s + 1)]
        }
        Op::AddmodToAddFast => vec![below(l.saturating_sub(3))],
        Op::LessZero | Op::MultiLessZero => {
            let half = 1i128 << l.saturating_sub(p.n_s);
            vec![(-half, half)]
        }
        Op::IndexMsb => vec![(1, 1i128 << l.saturating_sub(3))],
        Op::Inverse | Op::Log2 => vec![(1, 1i128 << (l / 2))],
        Op::Sine | Op::Cosine => vec![(-(1i128 << (l - 1)), 1i128 << (l - 1))],
        Op::Tangent => {
            let edge = (TANGENT_INPUT_LIMIT * f64::from(1u32 << p.frac)).floor() as i128;
            vec![(-edge, edge + 1)]
        }
        _ => vec![full],
    })
}

/// Largest `|a|` fed to the tangent by [`bounds`].
pub const TANGENT_INPUT_LIMIT: f64 = 1.25;

/// Every input tuple of `op`, each stored as `l`-bit two's complement.
pub fn domain(op: Op, p: &OpParams) -> Result<Vec<Vec<u128>>> {
    let ranges = bounds(op, p)?;
    let mut tuples: Vec<Vec<u128>> = vec![Vec::new()];
    for (lo, hi) in ranges {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                (lo..hi).map(move |v| {
                    let mut next = t.clone();
                    next.push(from_signed(v, p.l));
                    next
                })
            })
            .collect();
    }
    Ok(tuples)
}

/// One uniform input tuple from the domain of `op`.
pub fn random_inputs<R: Rng>(op: Op, p: &OpParams, rng: &mut R) -> Result<Vec<u128>> {
    Ok(bounds(op, p)?.into_iter().map(|(lo, hi)| from_signed(rng.gen_range(lo..hi), p.l)).collect())
}

/// Outcome of one run.
#[derive(Clone, Debug)]
pub struct Trial {
    pub result: OracleResult,
    pub meter: CostMeter,
    pub violations: Vec<Violation>,
    /// Absolute deviation for real-valued ops, zero otherwise.
    pub deviation: f64,
}

impl Trial {
    pub fn correct(&self) -> bool {
        self.result.matched
    }
}

/// Runs `op` on a random input drawn from `seed`.
pub fn run_trial(op: Op, p: &OpParams, seed: u64) -> Result<Trial> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_1e55);
    let inputs = random_inputs(op, p, &mut rng)?;
    run_with_inputs(op, p, &inputs, seed)
}

enum Outcome {
    Exact { expected: PlainValue, actual: PlainValue },
    Approx { expected: f64, actual: f64, tolerance: f64 },
}

/// Runs `op` on `inputs` with every random choice derived from `seed`.
pub fn run_with_inputs(op: Op, p: &OpParams, inputs: &[u128], seed: u64) -> Result<Trial> {
    let ranges = bounds(op, p)?;
    if inputs.len() != ranges.len() {
        return Err(Error::Config(format!("{op} takes {} inputs, got {}", ranges.len(), inputs.len())));
    }
    // Unsigned domains read the stored bits as they are.
    let signed: Vec<i128> = inputs
        .iter()
        .zip(&ranges)
        .map(|(&v, &(lo, _))| if lo < 0 { to_signed(v, p.l) } else { v as i128 })
        .collect();
    for (&v, &(lo, hi)) in signed.iter().zip(&ranges) {
        if v < lo || v >= hi {
            return Err(Error::Domain(format!("{op} input {v} outside [{lo}, {hi})")));
        }
    }
    let mut net = Network::new(seed, p.settings())?;
    let mut keys = Vec::new();
    let outcome = execute(op, p, &signed, &mut net, &mut keys)?;
    let (expected, actual, matched, deviation) = match outcome {
        Outcome::Exact { expected, actual } => {
            let matched = expected == actual;
            (expected.to_string(), actual.to_string(), matched, 0.0)
        }
        Outcome::Approx { expected, actual, tolerance } => {
            let deviation = (actual - expected).abs();
            (format!("{expected:.9}"), format!("{actual:.9}"), deviation <= tolerance, deviation)
        }
    };
    Ok(Trial {
        result: OracleResult { op: op.name().into(), l: p.l, inputs: inputs.to_vec(), keys, seed, expected, actual, matched },
        meter: net.meter().clone(),
        violations: net.violations(),
        deviation,
    })
}

fn reference(op: &str, inputs: &[i128], p: &OpParams, extra: i128) -> Result<PlainValue> {
    plain_eval(op, inputs, p.l, extra)
}

fn int(net: &Network, x: &SharedSecret) -> PlainValue {
    PlainValue::Int(net.decrypt(x) as i128)
}

fn exact(expected: PlainValue, actual: PlainValue) -> Result<Outcome> {
    Ok(Outcome::Exact { expected, actual })
}

fn bits_of(v: u128, l: u32) -> Vec<u8> {
    (0..l).map(|i| ((v >> i) & 1) as u8).collect()
}

fn execute(op: Op, p: &OpParams, a: &[i128], net: &mut Network, keys: &mut Vec<u128>) -> Result<Outcome> {
    let l = p.l;
    let unsigned = |v: i128| from_signed(v, l);
    let mut input = |net: &mut Network, v: i128, scheme: Scheme, ring: RingParams| -> Result<SharedSecret> {
        let x = net.input(from_signed(v, ring.l), scheme, ring)?;
        keys.push(x.k());
        Ok(x)
    };
    let modular = RingParams::new(l)?;
    match op {
        Op::Mul => {
            let x = input(net, a[0], Scheme::AdditiveMod, modular)?;
            let y = input(net, a[1], Scheme::AdditiveMod, modular)?;
            let z = primitives::mul(net, &x, &y)?;
            exact(reference("mul", a, p, 0)?, int(net, &z))
        }
        Op::And2 => {
            let bit = RingParams::bit();
            let x = input(net, a[0], Scheme::Xor, bit)?;
            let y = input(net, a[1], Scheme::Xor, bit)?;
            let z = primitives::and2(net, &x, &y)?;
            exact(reference("and", a, p, 0)?, int(net, &z))
        }
        Op::Pow => {
            let x = input(net, a[0], Scheme::AdditiveMod, modular)?;
            let z = primitives::pow(net, &x, p.exponent)?;
            exact(reference("pow", a, p, i128::from(p.exponent))?, int(net, &z))
        }
        Op::ScaledPow => {
            let x = input(net, a[0], Scheme::AdditiveMod, modular)?;
            let z = primitives::scaled_pow(net, &x, p.exponent, p.public)?;
            let s = p.public as f64;
            let expected = (a[0] as f64).powi(p.exponent as i32) / s.powi(p.exponent as i32 - 1);
            let actual = net.decrypt_signed(&z) as f64;
            Ok(Outcome::Approx { expected, actual, tolerance: f64::from(p.exponent.saturating_sub(1)) })
        }
        Op::MulByPublic => {
            let x = input(net, a[0], Scheme::AdditiveMod, modular)?;
            let z = numeric::mul_by_public(net, &x, p.public)?;
            exact(reference("mul_by_public", a, p, p.public as i128)?, int(net, &z))
        }
        Op::DivByPublic => {
            let ring = RingParams::with_key_bits(l, p.key_bits())?;
            let x = input(net, a[0], Scheme::PureAdditive, ring)?;
            let z = numeric::div_by_public(net, &x, p.public, p.division_shift())?;
            exact(reference("div_by_public", a, p, p.public as i128)?, int(net, &z))
        }
        Op::Hamming => {
            let x = input(net, a[0], Scheme::Xor, modular)?;
            let z = logic::hamming_distance(net, &x)?;
            exact(reference("hamming", &[a[0], 0], p, 0)?, int(net, &z))
        }
        Op::FaninHamming | Op::FaninBase | Op::FaninBoth => {
            let x = input(net, a[0], Scheme::Xor, modular)?;
            let bits = primitives::split_bits(net, &x)?;
            let z = match op {
                Op::FaninHamming => logic::fanin_hamming(net, &bits)?,
                Op::FaninBase => logic::fanin_base(net, &bits, p.base)?,
                _ => logic::fanin_both(net, &bits, p.depth, p.base)?,
            };
            let plain: Vec<i128> = bits_of(unsigned(a[0]), l).into_iter().map(i128::from).collect();
            exact(reference("and", &plain, p, 0)?, int(net, &z))
        }
        Op::EqualZero => {
            let x = input(net, a[0], Scheme::Xor, modular)?;
            let z = logic::equal_zero(net, &x, p.strategy, p.base)?;
            exact(reference("equal_zero", a, p, 0)?, int(net, &z))
        }
        Op::CarryBits => {
            let x = input(net, a[0], Scheme::AdditiveMod, modular)?;
            let carries = logic::carry_bits(net, &x)?;
            let key = x.k() as i128;
            let actual = PlainValue::Bits(bits_of(decrypt_bits(net, &carries), l));
            exact(reference("carry_bits", &[unsigned(a[0]) as i128, key], p, 0)?, actual)
        }
        Op::AddToXor => {
            let x = input(net, a[0], Scheme::AdditiveMod, modular)?;
            let bits = conversions::add_to_xor(net, &x)?;
            exact(reference("identity", a, p, 0)?, PlainValue::Int(decrypt_bits(net, &bits) as i128))
        }
        Op::XorToAdd => {
            let x = input(net, a[0], Scheme::Xor, modular)?;
            let bits = primitives::split_bits(net, &x)?;
            let z = conversions::xor_to_add(net, &bits)?;
            exact(reference("identity", a, p, 0)?, int(net, &z))
        }
        Op::AddToAddmod => {
            let ring = RingParams::with_key_bits(l, p.key_bits())?;
            let x = input(net, a[0], Scheme::PureAdditive, ring)?;
            let z = conversions::add_to_addmod(net, &x)?;
            exact(reference("identity", a, p, 0)?, int(net, &z))
        }
        Op::AddmodToAddFast | Op::AddmodToAddSlow | Op::Reencrypt => {
            let x = input(net, a[0], Scheme::AdditiveMod, modular)?;
            let z = match op {
                Op::AddmodToAddFast => conversions::addmod_to_add_fast(net, &x)?,
                Op::AddmodToAddSlow => conversions::addmod_to_add_slow(net, &x)?,
                _ => primitives::reencrypt(net, &x)?,
            };
            exact(reference("identity", a, p, 0)?, int(net, &z))
        }
        Op::LessZero | Op::MultiLessZero => {
            let x = input(net, a[0], Scheme::AdditiveMod, modular)?;
            let cfg = p.comparison();
            let z = if op == Op::LessZero { logic::less_zero(net, &x, &cfg)? } else { logic::multi_less_zero(net, &x, &cfg)? };
            exact(reference("less_zero", a, p, 0)?, int(net, &z))
        }
        Op::IndexMsb => {
            let x = input(net, a[0], Scheme::AdditiveMod, modular)?;
            let cfg = ComparisonConfig { n_s: 3, ..p.comparison() };
            let index = numeric::index_msb(net, &x, &cfg, l)?;
            exact(reference("index_msb", a, p, 0)?, int(net, &index.msb))
        }
        Op::Inverse | Op::Log2 => {
            let x = input(net, a[0], Scheme::AdditiveMod, modular)?;
            let mut cfg = TaylorConfig::for_ring(l);
            cfg.n_t = p.n_t;
            cfg.comparison.base = p.base;
            let out = numeric::division_and_log(net, &x, &cfg)?;
            let half = f64::from(l / 2);
            if op == Op::Inverse {
                let expected = 1.0 / a[0] as f64;
                let actual = numeric::fixed::decrypt_fixed(net, &out.inv, out.inv_frac);
                let relative = 2f64.powi(-21) + 2f64.powf(-half + 2.0);
                Ok(Outcome::Approx { expected, actual, tolerance: relative * expected })
            } else {
                let expected = (a[0] as f64).log2();
                let actual = numeric::fixed::decrypt_fixed(net, &out.log, out.log_frac);
                Ok(Outcome::Approx { expected, actual, tolerance: 10.0 * 2f64.powf(-half) })
            }
        }
        Op::Sine | Op::Cosine | Op::Tangent => {
            let ring = p.trig_ring()?;
            let x = numeric::fixed::encrypt_signed(net, FixedPoint::new(a[0], p.frac), ring)?;
            keys.push(x.k());
            let angle = a[0] as f64 / numeric::fixed::scale(p.frac);
            match op {
                Op::Sine | Op::Cosine => {
                    let cfg = TrigConfig::default();
                    let (z, expected) = if op == Op::Sine {
                        (numeric::sine(net, &x, &cfg)?, angle.sin())
                    } else {
                        (numeric::cosine(net, &x, &cfg)?, angle.cos())
                    };
                    let actual = numeric::fixed::decrypt_fixed(net, &z, p.frac);
                    Ok(Outcome::Approx { expected, actual, tolerance: trig_tolerance(p.frac) })
                }
                _ => {
                    let cfg = p.tangent_config();
                    let out = numeric::tangent(net, &x, &cfg)?;
                    let expected = angle.tan();
                    let actual = if net.decrypt(&out.any_valid) == 1 {
                        numeric::fixed::decrypt_fixed(net, &out.value, out.frac)
                    } else {
                        f64::NAN
                    };
                    let tolerance = tangent_tolerance(p.frac, expected);
                    Ok(Outcome::Approx { expected, actual, tolerance })
                }
            }
        }
    }
}

/// Accuracy target of sine and cosine with `c` fraction bits: `2^(2-c)`.
pub fn trig_tolerance(c: u32) -> f64 {
    2f64.powi(2 - c as i32)
}

/// Accuracy target of the tangent: the sine target scaled by the slope
/// `1 + tan^2 a`.
pub fn tangent_tolerance(c: u32, tan: f64) -> f64 {
    trig_tolerance(c) * (1.0 + tan * tan)
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn op_names_round_trip() {
        for &op in Op::ALL {
            assert_eq!(op.name().parse::<Op>().unwrap(), op);
        }
        assert!("nonsense".parse::<Op>().is_err());
    }

    #[test]
    fn domain_sizes() {
        let p = OpParams { l: 4, ..Default::default() };
        assert_eq!(domain(Op::Mul, &p).unwrap().len(), 256);
        assert_eq!(domain(Op::And2, &p).unwrap().len(), 4);
        assert_eq!(domain(Op::LessZero, &p).unwrap().len(), 8);
    }

    #[test]
    fn rejects_out_of_domain_inputs() {
        let p = OpParams { l: 8, ..Default::default() };
        assert!(matches!(run_with_inputs(Op::IndexMsb, &p, &[0], 1), Err(Error::Domain(_))));
        assert!(run_with_inputs(Op::Mul, &p, &[1], 1).is_err());
    }

    #[test]
    fn trials_are_reproducible() {
        let p = OpParams { l: 8, ..Default::default() };
        let a = run_trial(Op::Mul, &p, 42).unwrap();
        let b = run_trial(Op::Mul, &p, 42).unwrap();
        assert_eq!(a.result, b.result);
        assert_eq!(a.meter, b.meter);
    }
}
