//! Exact Shannon–Fano–Elias coding of fixed-length strings.
//!
//! For a string x of fixed length with marginal probability P(x) > 0 under a
//! sequential measure, the codeword is the first ⌈−log₂ P(x)⌉ + 1 binary
//! digits of the midpoint cumulative F(x⁻) + P(x)/2, where F(x⁻) is the
//! total mass of the length-|x| strings that precede x lexicographically.
//! Truncating at that length keeps the whole dyadic interval of the codeword
//! inside x's probability slot, which makes the code prefix-free within the
//! length class and lets the decoder walk symbol subintervals, pulling bits
//! only on demand.
//!
//! Everything runs on exact rationals; the length law
//! |codeword| = ⌈−log₂ P(x)⌉ + 1 is an exact equality, decided by integer
//! comparison, never by floating logs.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::bits::{BitCursor, BitString};
use crate::error::{Error, Result};
use crate::measures::{Rational, SequentialMeasure, Symbol};

/// Per-length code system: exact SFE coding against `measure`.
#[derive(Debug, Clone)]
pub struct FixedLengthCode<M> {
    measure: M,
}

/// Decoder scan guard against measures whose conditionals do not sum to 1.
const SCAN_LIMIT: u64 = 1 << 20;

impl<M: SequentialMeasure> FixedLengthCode<M> {
    pub fn new(measure: M) -> Self {
        FixedLengthCode { measure }
    }

    pub fn measure(&self) -> &M {
        &self.measure
    }

    /// ⌈−log₂ P(x)⌉ + 1, computed without constructing the codeword.
    pub fn codeword_len(&self, x: &[Symbol]) -> Result<u64> {
        let p = self.measure.marginal(x)?;
        if p.is_zero() {
            return Err(Error::ZeroProbability);
        }
        Ok(ceil_neg_log2(&p)? + 1)
    }

    /// The SFE codeword of `x`.
    pub fn encode(&self, x: &[Symbol]) -> Result<BitString> {
        let total = self.measure.marginal(x)?;
        if total.is_zero() {
            return Err(Error::ZeroProbability);
        }
        // refine [low, low + width) through the symbols of x
        let mut low = Rational::zero();
        let mut width = Rational::one();
        for (i, &s) in x.iter().enumerate() {
            let prefix = &x[..i];
            low += &width * self.measure.cumulative_before(prefix, s)?;
            width *= self.measure.conditional(prefix, s)?;
        }
        debug_assert_eq!(width, total);
        let len = ceil_neg_log2(&width)? + 1;
        let midpoint = low + width / Rational::from(BigInt::from(2));
        // emit the first `len` binary digits of the midpoint by integer
        // long division (gcd-free)
        let mut num = midpoint.numer().clone();
        let den = midpoint.denom();
        let mut out = BitString::with_capacity(len as usize);
        for _ in 0..len {
            num <<= 1;
            if num >= *den {
                out.push(true);
                num -= den;
            } else {
                out.push(false);
            }
        }
        Ok(out)
    }

    /// Decode a length-`n` string from the front of `bits`; returns the
    /// string and the number of bits consumed (the full codeword length).
    pub fn decode(&self, n: usize, bits: &BitString) -> Result<(Vec<Symbol>, usize)> {
        let mut cur = BitCursor::new(bits);
        let x = self.decode_from(n, &mut cur)?;
        Ok((x, cur.pos()))
    }

    /// Decode at a cursor, consuming exactly the codeword.
    pub fn decode_from(&self, n: usize, cur: &mut BitCursor<'_>) -> Result<Vec<Symbol>> {
        let alphabet = self.measure.alphabet();
        let mut low = Rational::zero();
        let mut width = Rational::one();
        let mut value = DyadicValue::new();
        let mut x: Vec<Symbol> = Vec::with_capacity(n);
        for _ in 0..n {
            let mut s = alphabet.first();
            let mut sub_lo = low.clone();
            let mut p = self.measure.conditional(&x, s)?;
            let mut sub_hi = &sub_lo + &width * &p;
            let mut scanned: u64 = 0;
            loop {
                if value.ge(&sub_hi) {
                    // move to the next symbol's subinterval
                    s += 1;
                    scanned += 1;
                    if !alphabet.contains(s) || scanned > SCAN_LIMIT {
                        return Err(Error::Malformed(
                            "value outside every subinterval at the promised length".into(),
                        ));
                    }
                    sub_lo = sub_hi;
                    p = self.measure.conditional(&x, s)?;
                    sub_hi = &sub_lo + &width * &p;
                } else if value.upper_le(&sub_hi) {
                    // the whole read interval sits inside this subinterval
                    break;
                } else {
                    // straddling a boundary: pull one more bit
                    value.read_bit(cur)?;
                }
            }
            x.push(s);
            low = sub_lo;
            width *= p;
        }
        // the codeword is exactly ceil(-log2 P) + 1 bits; consume the rest
        let len = ceil_neg_log2(&width)? + 1;
        debug_assert!(value.bits <= len);
        cur.skip((len - value.bits) as usize)?;
        Ok(x)
    }
}

/// The bit-stream value read so far: acc/2^bits, known to lie in
/// [acc/2^bits, (acc+1)/2^bits). Comparisons against rationals
/// cross-multiply integers, avoiding any gcd work on the per-bit path.
struct DyadicValue {
    acc: BigInt,
    bits: u64,
}

impl DyadicValue {
    fn new() -> Self {
        DyadicValue {
            acc: BigInt::zero(),
            bits: 0,
        }
    }

    fn read_bit(&mut self, cur: &mut BitCursor<'_>) -> Result<()> {
        let bit = cur.read_bit()?;
        self.acc <<= 1;
        if bit {
            self.acc += 1;
        }
        self.bits += 1;
        Ok(())
    }

    /// acc/2^bits ≥ r
    fn ge(&self, r: &Rational) -> bool {
        &self.acc * r.denom() >= (r.numer() << self.bits as usize)
    }

    /// (acc+1)/2^bits ≤ r
    fn upper_le(&self, r: &Rational) -> bool {
        (&self.acc + BigInt::one()) * r.denom() <= (r.numer() << self.bits as usize)
    }
}

/// Minimal k ≥ 0 with p ≥ 2^−k, i.e. ⌈−log₂ p⌉ for p ∈ (0, 1], decided by
/// exact integer comparison.
pub fn ceil_neg_log2(p: &Rational) -> Result<u64> {
    if !p.is_positive() {
        return Err(Error::ZeroProbability);
    }
    if p > &Rational::one() {
        return Err(Error::Internal(format!("probability {p} exceeds 1")));
    }
    let num = p.numer();
    let den = p.denom();
    if num.is_one() {
        // ceil(log2 den) straight from the bit pattern, no allocation
        let bits = den.bits();
        let pow2 = den.trailing_zeros() == Some(bits - 1);
        return Ok(if pow2 { bits - 1 } else { bits });
    }
    let start = den.bits().saturating_sub(num.bits()).saturating_sub(1);
    for k in start..=start + 2 {
        if num << k >= *den {
            return Ok(k);
        }
    }
    Err(Error::Internal(
        "ceil_neg_log2 candidate window missed".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{sample_sequence, BernoulliSource, GeometricMixture, LaplaceMixture};
    use crate::rng::SplitMix64;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    fn pow2_neg(k: u64) -> Rational {
        Rational::new(BigInt::one(), BigInt::one() << k as usize)
    }

    #[test]
    fn ceil_neg_log2_by_exact_comparison() {
        assert_eq!(ceil_neg_log2(&rat(1, 64)).unwrap(), 6);
        assert_eq!(ceil_neg_log2(&rat(1, 30)).unwrap(), 5);
        assert_eq!(ceil_neg_log2(&rat(1, 1)).unwrap(), 0);
        assert_eq!(ceil_neg_log2(&rat(1, 2)).unwrap(), 1);
        assert_eq!(ceil_neg_log2(&rat(3, 4)).unwrap(), 1);
        assert_eq!(ceil_neg_log2(&rat(513, 1024)).unwrap(), 1);
        assert_eq!(ceil_neg_log2(&rat(1, 3)).unwrap(), 2);
        assert!(ceil_neg_log2(&Rational::zero()).is_err());
    }

    #[test]
    fn codeword_lengths_from_length_law() {
        let geo = FixedLengthCode::new(GeometricMixture::new());
        // P = 1/2 -> 2 bits
        assert_eq!(geo.codeword_len(&[1]).unwrap(), 2);
        assert_eq!(geo.encode(&[1]).unwrap().to_string(), "01");

        let lap = FixedLengthCode::new(LaplaceMixture::new());
        // P = 1/30 -> 6 bits
        assert_eq!(lap.codeword_len(&[0, 1, 1, 0]).unwrap(), 6);
        let w = lap.encode(&[0, 1, 1, 0]).unwrap();
        assert_eq!(w.len(), 6);
        // midpoint cumulative of (0,1,1,0) is 13/30; its first six digits
        assert_eq!(w.to_string(), "011011");
    }

    #[test]
    fn uniform_three_bit_strings_get_four_bit_codewords() {
        let code = FixedLengthCode::new(BernoulliSource::from_parts(1, 2).unwrap());
        let mut words = Vec::new();
        for a in 0..2u64 {
            for b in 0..2u64 {
                for c in 0..2u64 {
                    let w = code.encode(&[a, b, c]).unwrap();
                    assert_eq!(w.len(), 4);
                    words.push(w);
                }
            }
        }
        for i in 0..words.len() {
            for j in 0..words.len() {
                if i != j {
                    assert_ne!(words[i], words[j]);
                    assert!(!words[i].is_proper_prefix_of(&words[j]));
                }
            }
        }
    }

    #[test]
    fn encode_length_always_matches_length_law() {
        let lap = FixedLengthCode::new(LaplaceMixture::new());
        let mut rng = SplitMix64::new(7);
        for _ in 0..1000 {
            let len = 1 + (rng.next_u64() % 32) as usize;
            let x: Vec<Symbol> = (0..len).map(|_| rng.next_u64() & 1).collect();
            assert_eq!(
                lap.encode(&x).unwrap().len() as u64,
                lap.codeword_len(&x).unwrap()
            );
        }
    }

    #[test]
    fn round_trip_over_each_measure() {
        let geo = FixedLengthCode::new(GeometricMixture::new());
        let lap = FixedLengthCode::new(LaplaceMixture::new());
        let ber = FixedLengthCode::new(BernoulliSource::from_parts(1, 3).unwrap());
        for seed in 0..200u64 {
            let n = 1 + (seed % 17) as usize;
            let xg = sample_sequence(geo.measure(), n, seed).unwrap();
            let w = geo.encode(&xg).unwrap();
            assert_eq!(geo.decode(n, &w).unwrap(), (xg, w.len()));

            let xl = sample_sequence(lap.measure(), n, seed).unwrap();
            let w = lap.encode(&xl).unwrap();
            assert_eq!(lap.decode(n, &w).unwrap(), (xl, w.len()));

            let xb = sample_sequence(ber.measure(), n, seed).unwrap();
            let w = ber.encode(&xb).unwrap();
            assert_eq!(ber.decode(n, &w).unwrap(), (xb, w.len()));
        }
    }

    #[test]
    fn decode_consumes_codeword_even_with_trailing_junk() {
        let geo = FixedLengthCode::new(GeometricMixture::new());
        let x = vec![2u64, 1, 3];
        let w = geo.encode(&x).unwrap();
        let mut stream = w.clone();
        for b in [true, false, true, true] {
            stream.push(b);
        }
        assert_eq!(geo.decode(3, &stream).unwrap(), (x, w.len()));
    }

    #[test]
    fn decode_truncated_codeword_errors() {
        let lap = FixedLengthCode::new(LaplaceMixture::new());
        let x = vec![0u64, 1, 1, 0];
        let w = lap.encode(&x).unwrap();
        let cut: BitString = w.iter().take(w.len() - 2).collect();
        assert_eq!(lap.decode(4, &cut), Err(Error::Truncated));
    }

    #[test]
    fn adversarial_all_ones_decodes_to_last_positive_string() {
        let lap = FixedLengthCode::new(LaplaceMixture::new());
        let bits: BitString = "111111".parse().unwrap();
        // P(11) = 1/3, codeword length 3, interval [2/3, 1)
        assert_eq!(lap.decode(2, &bits).unwrap(), (vec![1, 1], 3));
    }

    #[test]
    fn countable_scan_terminates_on_single_symbol() {
        let geo = FixedLengthCode::new(GeometricMixture::new());
        for s in 1..=10u64 {
            let w = geo.encode(&[s]).unwrap();
            assert_eq!(geo.decode(1, &w).unwrap(), (vec![s], w.len()));
        }
    }

    #[test]
    fn zero_probability_string_rejected() {
        let sure = FixedLengthCode::new(BernoulliSource::from_parts(1, 1).unwrap());
        assert_eq!(sure.encode(&[1, 0]), Err(Error::ZeroProbability));
        assert_eq!(sure.codeword_len(&[0]), Err(Error::ZeroProbability));
        // the certain string has P = 1: one-bit codeword
        assert_eq!(sure.codeword_len(&[1, 1, 1]).unwrap(), 1);
    }

    #[test]
    fn per_length_kraft_sums_binary_exhaustive() {
        let lap = FixedLengthCode::new(LaplaceMixture::new());
        let ber = FixedLengthCode::new(BernoulliSource::from_parts(1, 3).unwrap());
        for n in 1..=6usize {
            let mut sum_lap = Rational::zero();
            let mut sum_ber = Rational::zero();
            for pattern in 0..(1u64 << n) {
                let x: Vec<Symbol> = (0..n).map(|i| (pattern >> i) & 1).collect();
                sum_lap += pow2_neg(lap.codeword_len(&x).unwrap());
                sum_ber += pow2_neg(ber.codeword_len(&x).unwrap());
            }
            assert!(sum_lap <= Rational::one(), "laplace kraft n={n}: {sum_lap}");
            assert!(
                sum_ber <= Rational::one(),
                "bernoulli kraft n={n}: {sum_ber}"
            );
        }
    }

    #[test]
    fn geometric_codewords_prefix_free_within_length() {
        // sampled pairs per length class, symbols up to 8
        let geo = FixedLengthCode::new(GeometricMixture::new());
        let mut rng = SplitMix64::new(55);
        for n in 1..=4usize {
            let mut words: Vec<BitString> = Vec::new();
            for _ in 0..150 {
                let x: Vec<Symbol> = (0..n).map(|_| 1 + rng.next_u64() % 8).collect();
                words.push(geo.encode(&x).unwrap());
            }
            words.sort_by_key(|w| w.to_string());
            words.dedup();
            for i in 0..words.len() {
                for j in 0..words.len() {
                    if i != j {
                        assert!(!words[i].is_proper_prefix_of(&words[j]), "n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn binary_codewords_prefix_free_within_length_exhaustive() {
        let lap = FixedLengthCode::new(LaplaceMixture::new());
        for n in 1..=6usize {
            let words: Vec<BitString> = (0..(1u64 << n))
                .map(|pattern| {
                    let x: Vec<Symbol> = (0..n).map(|i| (pattern >> i) & 1).collect();
                    lap.encode(&x).unwrap()
                })
                .collect();
            for i in 0..words.len() {
                for j in 0..words.len() {
                    if i != j {
                        assert!(!words[i].is_proper_prefix_of(&words[j]), "n={n}");
                        assert_ne!(words[i], words[j], "n={n}");
                    }
                }
            }
        }
    }
}
