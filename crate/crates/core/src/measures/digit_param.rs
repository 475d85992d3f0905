//! Sources parameterized by an infinite digit sequence.
//!
//! A parameter here is an infinite string of digits over {0, …, D−1}. Every
//! probability measure on infinite symbol sequences arises from one such
//! parameter by letting the conditional chain consume one series of digits
//! per (string, term) position: the multiplier attached to string z is
//! U(z) = Σ_k digit(φ(z, k))·D^−k, and the conditional of symbol s after a
//! prefix w is ∏_{m<s}(1 − U(w·m)) · U(w·s).
//!
//! The digit sequence of a sampled parameter is represented by a seeded
//! random-access stream, so factors are evaluated lazily without storing an
//! infinite tape. Exact values of U are unavailable; every query returns a
//! two-sided interval obtained by truncating the series to `precision`
//! terms, with the tail bounded by D^−precision. Intervals shrink as the
//! precision grows, and nested queries at higher precision refine earlier
//! ones.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::{Rational, Symbol};
use crate::error::{Error, Result};
use crate::rng::{hash_bytes, SplitMix64};

/// Deterministic random-access digit generator: position ↦ {0, …, D−1}.
#[derive(Debug, Clone)]
pub struct DigitStream {
    base: u32,
    kind: DigitStreamKind,
}

#[derive(Debug, Clone)]
enum DigitStreamKind {
    /// Digits are hashed from (seed, position): an iid-uniform parameter.
    Seeded(u64),
    /// Every digit equals the given value: a degenerate, computable
    /// parameter, useful for pinning boundary behavior.
    Constant(u32),
}

impl DigitStream {
    pub fn new(seed: u64, base: u32) -> Result<Self> {
        if base < 2 {
            return Err(Error::UnsupportedBase(base));
        }
        Ok(DigitStream {
            base,
            kind: DigitStreamKind::Seeded(seed),
        })
    }

    pub fn constant(digit: u32, base: u32) -> Result<Self> {
        if base < 2 {
            return Err(Error::UnsupportedBase(base));
        }
        if digit >= base {
            return Err(Error::InvalidConfig(format!(
                "digit {digit} outside base-{base} range"
            )));
        }
        Ok(DigitStream {
            base,
            kind: DigitStreamKind::Constant(digit),
        })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    /// The digit at an arbitrary-precision position.
    pub fn digit(&self, position: &BigUint) -> u32 {
        match self.kind {
            DigitStreamKind::Seeded(seed) => {
                let h = hash_bytes(seed, &position.to_bytes_le());
                (h % u64::from(self.base)) as u32
            }
            DigitStreamKind::Constant(d) => d,
        }
    }
}

/// Rank of a nonempty string over the positive naturals in the enumeration
/// ordered by total symbol sum, then by length, then lexicographically.
/// Zero-based; a bijection onto the naturals (strings of sum σ occupy ranks
/// 2^(σ−1) − 1 … 2^σ − 2).
pub fn string_rank(x: &[Symbol]) -> Result<BigUint> {
    if x.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut sum: u64 = 0;
    for &s in x {
        if s == 0 {
            return Err(Error::SymbolOutOfAlphabet(0));
        }
        sum = sum.checked_add(s).ok_or(Error::ValueOverflow)?;
    }
    let len = x.len() as u64;

    // strings with a smaller sum: 2^(sum-1) - 1 of them
    let mut rank = (BigUint::one() << (sum - 1) as usize) - BigUint::one();

    // strings with the same sum but a smaller length
    for j in 1..len {
        rank += binomial(sum - 1, j - 1);
    }

    // lexicographic rank among compositions of `sum` into `len` parts:
    // at position i, strings that put a smaller value v there and split the
    // remainder into the remaining parts; the inner sum telescopes to a
    // difference of two binomials
    let mut remaining = sum;
    for (i, &xi) in x.iter().enumerate() {
        let parts_after = len - 1 - i as u64;
        if parts_after > 0 && xi > 1 {
            rank += binomial(remaining - 1, parts_after) - binomial(remaining - xi, parts_after);
        }
        remaining -= xi;
    }
    Ok(rank)
}

/// Cantor pairing (a, b) ↦ (a+b)(a+b+1)/2 + b, a bijection ℕ×ℕ → ℕ.
pub fn cantor_pair(a: &BigUint, b: &BigUint) -> BigUint {
    let s = a + b;
    (&s * (&s + BigUint::one())) / BigUint::from(2u32) + b
}

/// C(n, k) with C(n, k) = 0 for k > n.
fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 1..=k {
        acc = acc * BigUint::from(n - k + i) / BigUint::from(i);
    }
    acc
}

/// A measure given by a seeded digit parameter, evaluated by interval
/// truncation. Not a [`super::SequentialMeasure`]: its conditionals are
/// two-sided brackets, not exact rationals, so it serves as a data
/// generator while its exact mixture ([`super::GeometricMixture`] under the
/// uniform digit prior) is the codable measure.
#[derive(Debug, Clone)]
pub struct DigitParamSource {
    digits: DigitStream,
    precision: u32,
    max_precision: u32,
}

/// Scan guard for the sampler: a position whose inverse-CDF scan passes this
/// many symbols without separating is treated as a failed refinement.
const SCAN_LIMIT: u64 = 1 << 16;

impl DigitParamSource {
    /// `precision` is the number of digit terms retained per factor.
    /// Refinement during sampling and bracket decisions may raise the
    /// working precision up to `max_precision`.
    pub fn new(digits: DigitStream, precision: u32, max_precision: u32) -> Result<Self> {
        if precision == 0 {
            return Err(Error::InvalidConfig("precision must be at least 1".into()));
        }
        Ok(DigitParamSource {
            digits,
            precision,
            max_precision: max_precision.max(precision),
        })
    }

    pub fn from_seed(seed: u64, base: u32, precision: u32) -> Result<Self> {
        let digits = DigitStream::new(seed, base)?;
        let max = precision.saturating_mul(8).max(512);
        Self::new(digits, precision, max)
    }

    pub fn base(&self) -> u32 {
        self.digits.base()
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn max_precision(&self) -> u32 {
        self.max_precision
    }

    pub fn digit_stream(&self) -> &DigitStream {
        &self.digits
    }

    /// The factor U(z) truncated to `prec` digit terms: returns [lo, hi]
    /// with hi − lo = D^−prec, bracketing the exact series value.
    pub fn factor_interval_at(&self, z: &[Symbol], prec: u32) -> Result<(Rational, Rational)> {
        let rank = string_rank(z)?;
        let d = BigUint::from(self.base());
        let mut acc = BigUint::zero();
        for k in 0..u64::from(prec) {
            let digit = self.digits.digit(&cantor_pair(&rank, &BigUint::from(k)));
            acc = acc * &d + BigUint::from(digit);
        }
        let den = BigInt::from(d.pow(prec));
        let lo = Rational::new(BigInt::from(acc.clone()), den.clone());
        let hi = Rational::new(BigInt::from(acc + BigUint::one()), den);
        Ok((lo, hi))
    }

    /// Bracket of P(s | prefix) = ∏_{m<s}(1 − U(prefix·m)) · U(prefix·s)
    /// with every factor truncated to `prec` terms, rounded outward.
    pub fn conditional_interval_at(
        &self,
        prefix: &[Symbol],
        s: Symbol,
        prec: u32,
    ) -> Result<(Rational, Rational)> {
        if s == 0 {
            return Err(Error::SymbolOutOfAlphabet(0));
        }
        let mut lo = Rational::one();
        let mut hi = Rational::one();
        let mut z: Vec<Symbol> = Vec::with_capacity(prefix.len() + 1);
        z.extend_from_slice(prefix);
        for m in 1..=s {
            z.push(m);
            let (f_lo, f_hi) = self.factor_interval_at(&z, prec)?;
            z.pop();
            if m == s {
                lo *= f_lo;
                hi *= f_hi;
            } else {
                lo *= Rational::one() - f_hi;
                hi *= Rational::one() - f_lo;
            }
        }
        Ok((lo, hi))
    }

    /// Bracket at the configured precision.
    pub fn conditional_interval(
        &self,
        prefix: &[Symbol],
        s: Symbol,
    ) -> Result<(Rational, Rational)> {
        self.conditional_interval_at(prefix, s, self.precision)
    }

    /// Draw a length-`n` string by inverse CDF, adaptively raising the
    /// working precision (and extending the sampling uniform) until each
    /// position's uniform is separated from the interval endpoints.
    pub fn sample_sequence(&self, n: usize, seed: u64) -> Result<Vec<Symbol>> {
        let mut rng = SplitMix64::new(seed);
        let mut x: Vec<Symbol> = Vec::with_capacity(n);
        // factor brackets are cached per (string, precision) because
        // refinement rescans the same slots
        let mut cache: HashMap<(Vec<Symbol>, u32), (Rational, Rational)> = HashMap::new();
        for _ in 0..n {
            let s = self.sample_symbol(&x, &mut rng, &mut cache)?;
            x.push(s);
            cache.clear();
        }
        Ok(x)
    }

    fn sample_symbol(
        &self,
        prefix: &[Symbol],
        rng: &mut SplitMix64,
        cache: &mut HashMap<(Vec<Symbol>, u32), (Rational, Rational)>,
    ) -> Result<Symbol> {
        let mut prec = self.precision;
        let mut u = DyadicDraw::new(rng, 64);
        loop {
            match self.scan_once(prefix, &u, prec, cache)? {
                Some(s) => return Ok(s),
                None => {
                    if prec >= self.max_precision {
                        return Err(Error::PrecisionExhausted {
                            max: self.max_precision,
                        });
                    }
                    prec = prec.saturating_mul(2).min(self.max_precision);
                    u.extend(rng, 16);
                }
            }
        }
    }

    /// One inverse-CDF scan at fixed precision. Returns the selected symbol,
    /// or None when the uniform is not yet separated from a slot boundary.
    fn scan_once(
        &self,
        prefix: &[Symbol],
        u: &DyadicDraw,
        prec: u32,
        cache: &mut HashMap<(Vec<Symbol>, u32), (Rational, Rational)>,
    ) -> Result<Option<Symbol>> {
        let (u_lo, u_hi) = u.bounds();
        // remaining-mass bracket R(s) = prod_{m<=s} (1 - U(prefix.m))
        let mut rem_lo = Rational::one();
        let mut rem_hi = Rational::one();
        let mut z: Vec<Symbol> = Vec::with_capacity(prefix.len() + 1);
        z.extend_from_slice(prefix);
        for s in 1..=SCAN_LIMIT {
            z.push(s);
            let key = (z.clone(), prec);
            let (f_lo, f_hi) = match cache.get(&key) {
                Some(pair) => pair.clone(),
                None => {
                    let pair = self.factor_interval_at(&z, prec)?;
                    cache.insert(key, pair.clone());
                    pair
                }
            };
            z.pop();
            let next_lo = &rem_lo * (Rational::one() - &f_hi);
            let next_hi = &rem_hi * (Rational::one() - &f_lo);
            // slot s spans [1 - rem_prev, 1 - rem_next)
            let before_hi = Rational::one() - &rem_lo;
            let after_lo = Rational::one() - &next_hi;
            if u_lo >= before_hi && u_hi <= after_lo {
                return Ok(Some(s));
            }
            let after_hi = Rational::one() - &next_lo;
            if u_lo >= after_hi {
                rem_lo = next_lo;
                rem_hi = next_hi;
                continue;
            }
            return Ok(None);
        }
        Err(Error::PrecisionExhausted {
            max: self.max_precision,
        })
    }
}

/// A dyadic uniform draw that can be extended bit by bit: after k bits the
/// value is known to lie in [acc/2^k, (acc+1)/2^k).
struct DyadicDraw {
    acc: BigUint,
    bits: u32,
}

impl DyadicDraw {
    fn new(rng: &mut SplitMix64, bits: u32) -> Self {
        let mut d = DyadicDraw {
            acc: BigUint::zero(),
            bits: 0,
        };
        d.extend(rng, bits);
        d
    }

    fn extend(&mut self, rng: &mut SplitMix64, bits: u32) {
        for _ in 0..bits {
            self.acc = (&self.acc << 1u8) + BigUint::from(u8::from(rng.next_bit()));
        }
        self.bits += bits;
    }

    fn bounds(&self) -> (Rational, Rational) {
        let den = BigInt::one() << self.bits as usize;
        let lo = Rational::new(BigInt::from(self.acc.clone()), den.clone());
        let hi = Rational::new(BigInt::from(&self.acc + BigUint::one()), den);
        (lo, hi)
    }
}

/// Running bracket of the marginal probability of a growing prefix under a
/// digit-parameterized source, with on-demand refinement.
pub struct MarginalBracket<'a> {
    source: &'a DigitParamSource,
    x: Vec<Symbol>,
    prec: u32,
    lo: Rational,
    hi: Rational,
}

impl<'a> MarginalBracket<'a> {
    pub fn new(source: &'a DigitParamSource) -> Self {
        MarginalBracket {
            source,
            x: Vec::new(),
            prec: source.precision(),
            lo: Rational::one(),
            hi: Rational::one(),
        }
    }

    /// Extend the prefix; returns the current bracket.
    pub fn push(&mut self, s: Symbol) -> Result<(Rational, Rational)> {
        let (c_lo, c_hi) = self.source.conditional_interval_at(&self.x, s, self.prec)?;
        self.x.push(s);
        self.lo *= c_lo;
        self.hi *= c_hi;
        Ok(self.bounds())
    }

    pub fn bounds(&self) -> (Rational, Rational) {
        (self.lo.clone(), self.hi.clone())
    }

    /// Double the working precision (up to the source cap) and recompute the
    /// bracket for the whole tracked prefix.
    pub fn refine(&mut self) -> Result<()> {
        let next = self.prec.saturating_mul(2).min(self.source.max_precision());
        if next == self.prec {
            return Err(Error::PrecisionExhausted {
                max: self.source.max_precision(),
            });
        }
        self.prec = next;
        let mut lo = Rational::one();
        let mut hi = Rational::one();
        for i in 0..self.x.len() {
            let (c_lo, c_hi) =
                self.source
                    .conditional_interval_at(&self.x[..i], self.x[i], self.prec)?;
            lo *= c_lo;
            hi *= c_hi;
        }
        self.lo = lo;
        self.hi = hi;
        Ok(())
    }
}
