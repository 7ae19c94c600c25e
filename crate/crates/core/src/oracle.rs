//! Plaintext reference semantics and brute-force checkers.
//!
//! Nothing here calls protocol code except [`exhaustive_check`], which runs
//! protocols through the [`harness`](crate::harness) and compares their
//! decrypted outputs with these references.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::harness::{self, Op, OpParams};

/// Carries into each bit of `a + k` over `l` bits, by a ripple-carry adder.
pub fn ripple_carries(a: u128, k: u128, l: u32) -> Vec<u8> {
    let mut carries = Vec::with_capacity(l as usize);
    let mut carry = 0u8;
    for i in 0..l {
        carries.push(carry);
        let (x, y) = (((a >> i) & 1) as u8, ((k >> i) & 1) as u8);
        carry = (x & y) | (carry & (x ^ y));
    }
    carries
}

pub fn popcount(x: u128) -> u32 {
    let mut count = 0;
    let mut v = x;
    while v != 0 {
        count += (v & 1) as u32;
        v >>= 1;
    }
    count
}

pub fn hamming(x: u128, y: u128) -> u32 {
    popcount(x ^ y)
}

/// `floor(log2 a)`, `a >= 1`.
pub fn floor_log2(a: u128) -> u32 {
    assert!(a >= 1);
    let mut msb = 0;
    while a >> (msb + 1) != 0 {
        msb += 1;
    }
    msb
}

/// Reference value of an operation.
#[derive(Clone, Debug, PartialEq)]
pub enum PlainValue {
    Int(i128),
    Bits(Vec<u8>),
    Real(f64),
}

impl fmt::Display for PlainValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlainValue::Int(v) => write!(f, "{v}"),
            PlainValue::Bits(bits) => {
                let packed = bits.iter().enumerate().fold(0u128, |acc, (i, &b)| acc | u128::from(b) << i);
                write!(f, "0x{packed:x}")
            }
            PlainValue::Real(v) => write!(f, "{v:.9}"),
        }
    }
}

/// Reference semantics by operation name.
///
/// `inputs` are plaintext integers (two's complement reinterpretation is the
/// caller's business), `l` the ring width and `extra` the operation's public
/// parameter (divisor, exponent, scale or fraction bits).
pub fn plain_eval(op: &str, inputs: &[i128], l: u32, extra: i128) -> Result<PlainValue> {
    let arg = |i: usize| inputs.get(i).copied().ok_or_else(|| Error::Domain(format!("{op} needs {} inputs", i + 1)));
    let modulus = 1i128 << l;
    let wrap = |v: i128| v.rem_euclid(modulus);
    Ok(match op {
        "carry_bits" => PlainValue::Bits(ripple_carries(arg(0)? as u128, arg(1)? as u128, l)),
        "hamming" => PlainValue::Int(i128::from(hamming(arg(0)? as u128, arg(1)? as u128))),
        "and" => PlainValue::Int(inputs.iter().all(|&b| b == 1) as i128),
        "equal_zero" => PlainValue::Int((wrap(arg(0)?) == 0) as i128),
        "less_zero" => {
            let v = wrap(arg(0)?);
            PlainValue::Int((v >= modulus / 2) as i128)
        }
        "identity" => PlainValue::Int(wrap(arg(0)?)),
        "mul" => PlainValue::Int(wrap(arg(0)? * arg(1)?)),
        "pow" => {
            let mut acc = 1i128;
            for _ in 0..extra {
                acc = wrap(acc * arg(0)?);
            }
            PlainValue::Int(wrap(acc))
        }
        "scaled_pow" => {
            // floor(a^i / s^(i-1)) with i = inputs[1], s = extra.
            let (a, i) = (arg(0)?, arg(1)?);
            let num = a.pow(i as u32);
            let den = extra.pow((i - 1) as u32);
            PlainValue::Int(num.div_euclid(den))
        }
        "mul_by_public" => PlainValue::Int(wrap(arg(0)? * extra)),
        "div_by_public" => {
            if extra <= 0 {
                return Err(Error::Domain("divisor must be positive".into()));
            }
            PlainValue::Int(arg(0)?.div_euclid(extra))
        }
        "index_msb" => {
            let a = arg(0)?;
            if a < 1 {
                return Err(Error::Domain("MSB of a non-positive value".into()));
            }
            PlainValue::Int(i128::from(floor_log2(a as u128)))
        }
        "inv" => PlainValue::Real(1.0 / arg(0)? as f64),
        "log2" => PlainValue::Real((arg(0)? as f64).log2()),
        "sin" | "cos" | "tan" => {
            let x = arg(0)? as f64 / 2f64.powi(extra as i32);
            PlainValue::Real(match op {
                "sin" => x.sin(),
                "cos" => x.cos(),
                _ => x.tan(),
            })
        }
        other => return Err(Error::Domain(format!("no reference for {other}"))),
    })
}

/// One protocol run compared with its reference.
#[derive(Clone, Debug, PartialEq)]
pub struct OracleResult {
    pub op: String,
    pub l: u32,
    pub inputs: Vec<u128>,
    pub keys: Vec<u128>,
    pub seed: u64,
    pub expected: String,
    pub actual: String,
    pub matched: bool,
}

impl OracleResult {
    /// `op,l,a,keys,seed,expected,actual`; multi-valued fields are hex
    /// joined by `:`.
    pub fn dump_line(&self) -> String {
        let hex = |vs: &[u128]| vs.iter().map(|v| format!("0x{v:x}")).collect::<Vec<_>>().join(":");
        format!(
            "{},{},{},{},{},{},{}",
            self.op,
            self.l,
            hex(&self.inputs),
            hex(&self.keys),
            self.seed,
            self.expected,
            self.actual
        )
    }
}

/// Pass rate of an exhaustive (or sampled) check.
#[derive(Clone, Debug)]
pub struct CheckReport {
    pub runs: u64,
    pub failures: Vec<OracleResult>,
    /// Runs in which some party held both halves of a secret.
    pub runs_with_violations: u64,
}

impl CheckReport {
    pub fn pass_rate(&self) -> f64 {
        if self.runs == 0 {
            return 1.0;
        }
        1.0 - self.failures.len() as f64 / self.runs as f64
    }
}

/// Runs `op` on every plaintext of its domain at width `params.l` with
/// `key_samples` seeds each and compares every output with the reference.
/// Deterministic given `seed`; parallel over plaintexts.
pub fn exhaustive_check(op: Op, params: &OpParams, key_samples: u64, seed: u64) -> Result<CheckReport> {
    let domain = harness::domain(op, params)?;
    if domain.len() as u64 * key_samples > 10_000_000 {
        return Err(Error::Config(format!("{} plaintexts x {key_samples} keys exceeds 10^7 runs", domain.len())));
    }
    let results: Vec<Result<(Vec<OracleResult>, u64)>> = domain
        .par_iter()
        .enumerate()
        .map(|(index, inputs)| {
            let mut failures = Vec::new();
            let mut violations = 0;
            for j in 0..key_samples {
                let run_seed = seed ^ ((index as u64) << 20) ^ j.wrapping_mul(0x9e37_79b9_7f4a_7c15);
                let trial = harness::run_with_inputs(op, params, inputs, run_seed)?;
                violations += u64::from(!trial.violations.is_empty());
                if !trial.result.matched {
                    failures.push(trial.result);
                }
            }
            Ok((failures, violations))
        })
        .collect();
    let mut report = CheckReport { runs: domain.len() as u64 * key_samples, failures: Vec::new(), runs_with_violations: 0 };
    for r in results {
        let (failures, violations) = r?;
        report.failures.extend(failures);
        report.runs_with_violations += violations;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn carries_of_five_plus_three() {
        assert_eq!(ripple_carries(5, 3, 4), vec![0, 1, 1, 1]);
        assert_eq!(ripple_carries(9, 0, 4), vec![0, 0, 0, 0]);
    }

    #[test]
    fn hamming_example() {
        assert_eq!(hamming(0b1000, 0b0010), 2);
        assert_eq!(plain_eval("hamming", &[0b1000, 0b0010], 4, 0).unwrap(), PlainValue::Int(2));
    }

    #[test]
    fn real_references() {
        assert_eq!(plain_eval("inv", &[3], 8, 0).unwrap(), PlainValue::Real(1.0 / 3.0));
        assert_eq!(plain_eval("index_msb", &[10], 8, 0).unwrap(), PlainValue::Int(3));
        assert_eq!(plain_eval("div_by_public", &[7], 8, 3).unwrap(), PlainValue::Int(2));
        assert_eq!(plain_eval("scaled_pow", &[5, 3], 16, 4).unwrap(), PlainValue::Int(7));
    }

    #[test]
    fn dump_line_format() {
        let r = OracleResult {
            op: "mul".into(),
            l: 4,
            inputs: vec![13, 14],
            keys: vec![1, 2],
            seed: 9,
            expected: "6".into(),
            actual: "7".into(),
            matched: false,
        };
        assert_eq!(r.dump_line(), "mul,4,0xd:0xe,0x1:0x2,9,6,7");
    }
}
