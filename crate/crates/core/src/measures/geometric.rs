//! The geometric mixture over the positive naturals.
//!
//! Each symbol k carries conditional mass 2^−k independently of the prefix,
//! so the marginal of a string is 2^−(sum of its symbols). This is the
//! closed form of the digit-parameterized family averaged under the uniform
//! digit prior (see [`super::DigitParamSource`]).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::{rational_raw, Alphabet, MarginalStepper, Rational, SequentialMeasure, Symbol};
use crate::error::{Error, Result};

/// Prefix-independent measure with P(k | anything) = 2^−k over k ≥ 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct GeometricMixture;

impl GeometricMixture {
    pub fn new() -> Self {
        GeometricMixture
    }

    /// Exact symbol sum, the negated base-2 log of the marginal.
    pub fn symbol_sum(x: &[Symbol]) -> Result<u64> {
        let mut sum: u64 = 0;
        for &s in x {
            if s == 0 {
                return Err(Error::SymbolOutOfAlphabet(0));
            }
            sum = sum.checked_add(s).ok_or(Error::ValueOverflow)?;
        }
        Ok(sum)
    }
}

fn pow2(k: u64) -> BigInt {
    BigInt::one() << usize::try_from(k).expect("shift fits usize")
}

impl SequentialMeasure for GeometricMixture {
    fn alphabet(&self) -> Alphabet {
        Alphabet::Positive
    }

    fn name(&self) -> String {
        "geometric".into()
    }

    fn conditional(&self, _prefix: &[Symbol], s: Symbol) -> Result<Rational> {
        self.alphabet().validate(s)?;
        Ok(rational_raw(BigInt::one(), pow2(s)))
    }

    fn marginal(&self, x: &[Symbol]) -> Result<Rational> {
        Ok(rational_raw(BigInt::one(), pow2(Self::symbol_sum(x)?)))
    }

    fn stepper(&self) -> Box<dyn MarginalStepper + '_> {
        Box::new(GeometricStepper { sum: 0 })
    }

    fn cumulative_before(&self, _prefix: &[Symbol], s: Symbol) -> Result<Rational> {
        self.alphabet().validate(s)?;
        // sum of 2^-y for y in 1..s, telescoped
        let den = pow2(s - 1);
        Ok(Rational::new(&den - BigInt::one(), den))
    }
}

struct GeometricStepper {
    sum: u64,
}

impl MarginalStepper for GeometricStepper {
    fn push(&mut self, s: Symbol) -> Result<BigRational> {
        if s == 0 {
            return Err(Error::SymbolOutOfAlphabet(0));
        }
        self.sum = self.sum.checked_add(s).ok_or(Error::ValueOverflow)?;
        Ok(rational_raw(BigInt::one(), pow2(self.sum)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use num_traits::Zero;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn marginal_is_two_to_minus_symbol_sum() {
        let m = GeometricMixture::new();
        assert_eq!(m.marginal(&[1, 2, 3]).unwrap(), rat(1, 64));
        assert_eq!(m.marginal(&[]).unwrap(), Rational::one());
        assert_eq!(m.marginal(&[5]).unwrap(), rat(1, 32));
    }

    #[test]
    fn conditional_ignores_prefix() {
        let m = GeometricMixture::new();
        assert_eq!(m.conditional(&[], 3).unwrap(), rat(1, 8));
        assert_eq!(m.conditional(&[9, 9, 9], 3).unwrap(), rat(1, 8));
        assert_eq!(m.conditional(&[], 0), Err(Error::SymbolOutOfAlphabet(0)));
    }

    #[test]
    fn cumulative_closed_form_matches_sum() {
        let m = GeometricMixture::new();
        for s in 1..=12u64 {
            let mut acc = Rational::zero();
            for y in 1..s {
                acc += m.conditional(&[], y).unwrap();
            }
            assert_eq!(m.cumulative_before(&[], s).unwrap(), acc);
        }
    }

    #[test]
    fn marginal_identity_on_random_strings() {
        let m = GeometricMixture::new();
        let mut rng = SplitMix64::new(31);
        for _ in 0..1000 {
            let len = (rng.next_u64() % 30) as usize;
            let x: Vec<Symbol> = (0..len).map(|_| 1 + rng.next_u64() % 9).collect();
            let sum: u64 = x.iter().sum();
            let expected = Rational::new(BigInt::one(), BigInt::one() << sum as usize);
            assert_eq!(m.marginal(&x).unwrap(), expected);
        }
    }

    #[test]
    fn stepper_tracks_prefix_products() {
        let m = GeometricMixture::new();
        let x = [2u64, 1, 4, 3];
        let mut st = m.stepper();
        for i in 0..x.len() {
            assert_eq!(st.push(x[i]).unwrap(), m.marginal(&x[..=i]).unwrap());
        }
    }
}
