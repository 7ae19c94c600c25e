//! Inverse and base-2 logarithm by a truncated series around a fixed point.
//!
//! The input `a in [1, 2^h)` is scaled by a secret power of two `RevPow`
//! into `a' = a * RevPow in [2^(h-1), 2^h)`, so one expansion point
//! `a_T = 0.75 * 2^h` serves every input. Writing `u = (a' - a_T) / 2^h`:
//!
//! * `2^h / a' = sum_i (-1)^i (4/3)^(i+1) u^i`
//! * `log2 a' = h + log2(0.75) + sum_{i>=1} (-1)^(i+1) (4/3)^i u^i / (i ln 2)`
//!
//! and `1/a = RevPow / a'`, `log2 a = msb + log2(1.5) + (series part)`.

use crate::conversions::{addmod_to_add_fast, xor_to_add_in};
use crate::error::{Error, Result};
use crate::logic::ComparisonConfig;
use crate::numeric::msb::index_msb;
use crate::primitives::{self, mul, rescale, scaled_powers};
use crate::ring::{RingParams, Scheme, SharedSecret};
use crate::transport::Network;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TaylorConfig {
    /// Series terms after the constant one.
    pub n_t: u32,
    /// Inputs lie in `[1, 2^input_bits)`.
    pub input_bits: u32,
    /// Fraction bits of the series variable and of the log output.
    pub frac_bits: u32,
    /// Fraction bits of the public coefficients.
    pub coeff_bits: u32,
    /// Ring of the series arithmetic.
    pub ring_bits: u32,
    pub comparison: ComparisonConfig,
}

impl TaylorConfig {
    /// Defaults for inputs in a ring of `l` bits: `input_bits = l / 2`.
    pub fn for_ring(l: u32) -> Self {
        Self {
            n_t: 7,
            input_bits: l / 2,
            frac_bits: 28,
            coeff_bits: 26,
            ring_bits: 62,
            comparison: ComparisonConfig { n_s: 3, ..Default::default() },
        }
    }

    pub fn validate(&self) -> Result<()> {
        let h = self.input_bits;
        if h < 2 || self.n_t == 0 {
            return Err(Error::Config(format!("input_bits = {h}, n_t = {}", self.n_t)));
        }
        let (p, q, w) = (self.frac_bits, self.coeff_bits, self.ring_bits);
        // Largest intermediates: the series sum (2^(p+q+1)), the rescaled
        // inverse times RevPow (2^(h+p)), and the lifted input.
        if p + q + 1 > w - 4 || h + p > w - 2 || w > crate::ring::MAX_BITS {
            return Err(Error::Config(format!("ring of {w} bits too small for h = {h}, P = {p}, Q = {q}")));
        }
        Ok(())
    }
}

/// Factorial-style closed-form bound on the truncation error of the inverse
/// series on the normalised interval: `1 / ((n_t + 2)! 2^(n_t + 1))`.
pub fn error_bound(n_t: u32) -> f64 {
    let factorial: f64 = (1..=n_t + 2).map(f64::from).product();
    1.0 / (factorial * 2f64.powi(n_t as i32 + 1))
}

/// `(-1)^i (4/3)^(i+1)` for `i = 0..=n_t`.
pub fn inverse_coefficients(n_t: u32) -> Vec<f64> {
    (0..=n_t).map(|i| (-1f64).powi(i as i32) * (4.0f64 / 3.0).powi(i as i32 + 1)).collect()
}

/// `(-1)^(i+1) (4/3)^i / (i ln 2)` for `i = 1..=n_t` (index 0 unused, zero).
pub fn log_coefficients(n_t: u32) -> Vec<f64> {
    std::iter::once(0.0)
        .chain((1..=n_t).map(|i| {
            (-1f64).powi(i as i32 + 1) * (4.0f64 / 3.0).powi(i as i32) / (f64::from(i) * std::f64::consts::LN_2)
        }))
        .collect()
}

fn to_ring(value: f64, frac: u32, ring: RingParams) -> u128 {
    ((value * 2f64.powi(frac as i32)).round() as i128) as u128 & ring.mask()
}

/// Intermediate values shared by the inverse, the logarithm and callers that
/// need a scaled reciprocal (the tangent).
#[derive(Clone, Debug)]
pub struct ReciprocalParts {
    /// `floor(log2 a)` in the series ring.
    pub msb: SharedSecret,
    /// `2^(h - 1 - msb)` in the series ring.
    pub rev_pow: SharedSecret,
    /// `a * RevPow`.
    pub scaled_input: SharedSecret,
    /// `u^i` for `i = 1..=n_t` with `frac_bits` fraction bits.
    pub powers: Vec<SharedSecret>,
    /// `2^(h + frac_bits) / a'`.
    pub scaled_inverse: SharedSecret,
}

/// Computes [`ReciprocalParts`] for `1 <= a < 2^input_bits`.
///
/// `x` must be additive modulo `2^l` with `l >= input_bits + 3`.
pub fn reciprocal_parts(net: &mut Network, x: &SharedSecret, cfg: &TaylorConfig) -> Result<ReciprocalParts> {
    cfg.validate()?;
    if x.scheme() != Scheme::AdditiveMod {
        return Err(Error::SchemeMismatch { expected: Scheme::AdditiveMod, found: x.scheme() });
    }
    let h = cfg.input_bits;
    if x.bits() < h + 3 {
        return Err(Error::InvalidRing(format!("{}-bit ring cannot hold {h}-bit inputs with 3 bits headroom", x.bits())));
    }
    let (p, q) = (cfg.frac_bits, cfg.coeff_bits);
    let wide = RingParams::new(cfg.ring_bits)?;

    let small = primitives::reduce(net, x, h + 3)?;
    let index = index_msb(net, &small, &cfg.comparison, cfg.ring_bits)?;

    let pure = addmod_to_add_fast(net, &small)?;
    let lifted = net.share(pure.e(), pure.k(), Scheme::AdditiveMod, wide, pure.ready);

    let reversed: Vec<SharedSecret> = (0..h).map(|j| index.one_hot[(h - 1 - j) as usize]).collect();
    let rev_pow = xor_to_add_in(net, &reversed, cfg.ring_bits)?;
    let scaled_input = mul(net, &lifted, &rev_pow)?;

    let centred = primitives::add_public(net, &scaled_input, (3u128 << (h - 2)).wrapping_neg() & wide.mask())?;
    let variable = if p >= h {
        primitives::scale(net, &centred, 1u128 << (p - h))?
    } else {
        rescale(net, &centred, h - p)?
    };
    let powers = scaled_powers(net, &variable, cfg.n_t, 1u128 << p)?;

    let coefficients = inverse_coefficients(cfg.n_t);
    let series = weighted_sum(net, &powers, &coefficients[1..], q, wide)?;
    let constant = to_ring(coefficients[0], p + q, wide);
    let series = primitives::add_public(net, &series, constant)?;
    let scaled_inverse = rescale(net, &series, q)?;

    Ok(ReciprocalParts { msb: index.msb, rev_pow, scaled_input, powers, scaled_inverse })
}

/// `sum_i round(c_i 2^q) * x_i`. Local.
fn weighted_sum(net: &mut Network, xs: &[SharedSecret], cs: &[f64], q: u32, ring: RingParams) -> Result<SharedSecret> {
    let mut acc = net.constant(0, Scheme::AdditiveMod, ring);
    for (x, &c) in xs.iter().zip(cs) {
        let term = primitives::scale(net, x, to_ring(c, q, ring))?;
        acc = primitives::add(net, &acc, &term)?;
    }
    Ok(acc)
}

/// Output of [`division_and_log`]: two's-complement fixed-point secrets in
/// the series ring.
#[derive(Clone, Debug)]
pub struct DivisionLog {
    /// `1 / a` with `inv_frac` fraction bits.
    pub inv: SharedSecret,
    pub inv_frac: u32,
    /// `log2 a` with `log_frac` fraction bits.
    pub log: SharedSecret,
    pub log_frac: u32,
    pub parts: ReciprocalParts,
}

/// `1 / a` and `log2 a` for `1 <= a < 2^input_bits`.
pub fn division_and_log(net: &mut Network, x: &SharedSecret, cfg: &TaylorConfig) -> Result<DivisionLog> {
    let parts = reciprocal_parts(net, x, cfg)?;
    let (h, p, q) = (cfg.input_bits, cfg.frac_bits, cfg.coeff_bits);
    let wide = RingParams::new(cfg.ring_bits)?;

    let inv = mul(net, &parts.scaled_inverse, &parts.rev_pow)?;

    let coefficients = log_coefficients(cfg.n_t);
    let series = weighted_sum(net, &parts.powers, &coefficients[1..], q, wide)?;
    let series = rescale(net, &series, q)?;
    let shifted = primitives::add_public(net, &series, to_ring(1.5f64.log2(), p, wide))?;
    let whole = primitives::scale(net, &parts.msb, 1u128 << p)?;
    let log = primitives::add(net, &shifted, &whole)?;

    Ok(DivisionLog { inv, inv_frac: h + p, log, log_frac: p, parts })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_values() {
        assert!(error_bound(7) < 2f64.powi(-21));
        assert!(error_bound(13) < 2f64.powi(-52));
    }

    #[test]
    fn coefficients_reproduce_the_functions() {
        let inv = inverse_coefficients(40);
        let log = log_coefficients(40);
        for u in [-0.25f64, -0.1, 0.0, 0.2, 0.2499] {
            let s: f64 = inv.iter().enumerate().map(|(i, c)| c * u.powi(i as i32)).sum();
            assert!((s - 1.0 / (0.75 + u)).abs() < 1e-9);
            let g: f64 = log.iter().enumerate().map(|(i, c)| c * u.powi(i as i32)).sum();
            assert!((g + 0.75f64.log2() - (0.75 + u).log2()).abs() < 1e-9);
        }
    }

    #[test]
    fn config_guards_ring_size() {
        let mut cfg = TaylorConfig::for_ring(24);
        assert!(cfg.validate().is_ok());
        cfg.ring_bits = 40;
        assert!(cfg.validate().is_err());
    }
}

#[cfg(test)]
mod protocol_tests {
    use super::*;
    use crate::config::Settings;
    use crate::numeric::fixed::decrypt_fixed;

    fn run(a: u128, l: u32) -> (f64, f64, u32) {
        let mut net = Network::new(a as u64, Settings { deterministic_carry: true, ..Settings::default() }).unwrap();
        let x = net.input(a, Scheme::AdditiveMod, RingParams::new(l).unwrap()).unwrap();
        let out = division_and_log(&mut net, &x, &TaylorConfig::for_ring(l)).unwrap();
        assert!(net.assert_views_legal().is_ok());
        (decrypt_fixed(&net, &out.inv, out.inv_frac), decrypt_fixed(&net, &out.log, out.log_frac), net.meter().rounds)
    }

    #[test]
    fn inverse_and_log_on_sample_points() {
        let l = 24;
        let relative = 2f64.powi(-21) + 2f64.powi(-(l as i32) / 2 + 2);
        for a in [1u128, 2, 3, 5, 7, 100, 511, 512, 1000, 1023, 4095] {
            let (inv, log, _) = run(a, l);
            let af = a as f64;
            assert!((inv * af - 1.0).abs() <= relative, "1/{a}: {inv}");
            assert!((log - af.log2()).abs() <= 10.0 * 2f64.powi(-(l as i32) / 2), "log2 {a}: {log}");
        }
    }

    #[test]
    fn scaled_input_lands_in_the_top_octave() {
        let l = 16;
        let cfg = TaylorConfig::for_ring(l);
        for a in [1u128, 9, 200] {
            let mut net = Network::new(1, Settings { deterministic_carry: true, ..Settings::default() }).unwrap();
            let x = net.input(a, Scheme::AdditiveMod, RingParams::new(l).unwrap()).unwrap();
            let parts = reciprocal_parts(&mut net, &x, &cfg).unwrap();
            let scaled = net.decrypt(&parts.scaled_input);
            assert!((1 << 7..1 << 8).contains(&scaled), "a={a}: {scaled}");
            assert_eq!(net.decrypt(&parts.rev_pow) * a, scaled);
        }
    }

    #[test]
    fn rejects_rings_without_headroom() {
        let mut net = Network::with_seed(0);
        let x = net.input(1, Scheme::AdditiveMod, RingParams::new(10).unwrap()).unwrap();
        let cfg = TaylorConfig { input_bits: 8, ..TaylorConfig::for_ring(16) };
        assert!(reciprocal_parts(&mut net, &x, &cfg).is_err());
    }
}
