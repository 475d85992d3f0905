//! The uniform-prior Bernoulli mixture over {0, 1} (Laplace's rule).
//!
//! Integrating the iid Bernoulli likelihood against the uniform prior on the
//! parameter gives the exchangeable marginal a!·b!/(n+1)! for a string with
//! `a` ones and `b` zeros, equivalently 1/((n+1)·C(n,a)); the successor
//! conditional is (a+1)/(m+2) after `a` ones among `m` symbols.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;

use super::{rational_raw, Alphabet, MarginalStepper, Rational, SequentialMeasure, Symbol};
use crate::error::{Error, Result};

/// Uniform-prior Bernoulli mixture; no parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LaplaceMixture;

impl LaplaceMixture {
    pub fn new() -> Self {
        LaplaceMixture
    }
}

impl SequentialMeasure for LaplaceMixture {
    fn alphabet(&self) -> Alphabet {
        Alphabet::Finite(2)
    }

    fn name(&self) -> String {
        "laplace".into()
    }

    fn conditional(&self, prefix: &[Symbol], s: Symbol) -> Result<Rational> {
        self.alphabet().validate(s)?;
        let mut ones = 0u64;
        for &y in prefix {
            self.alphabet().validate(y)?;
            ones += y;
        }
        let m = prefix.len() as u64;
        let successes = if s == 1 { ones } else { m - ones };
        Ok(Rational::new(
            BigInt::from(successes + 1),
            BigInt::from(m + 2),
        ))
    }

    fn marginal(&self, x: &[Symbol]) -> Result<Rational> {
        let mut stepper = self.stepper();
        let mut p = Rational::one();
        for &s in x {
            p = stepper.push(s)?;
        }
        Ok(p)
    }

    fn stepper(&self) -> Box<dyn MarginalStepper + '_> {
        Box::new(LaplaceStepper {
            len: 0,
            ones: 0,
            binom: BigUint::one(),
        })
    }
}

/// Tracks C(len, ones); the marginal is 1/((len+1)·C(len, ones)), already in
/// lowest terms.
struct LaplaceStepper {
    len: u64,
    ones: u64,
    binom: BigUint,
}

impl MarginalStepper for LaplaceStepper {
    fn push(&mut self, s: Symbol) -> Result<BigRational> {
        self.len += 1;
        match s {
            1 => {
                self.ones += 1;
                // C(m, a) = C(m-1, a-1) * m / a
                self.binom = &self.binom * self.len / self.ones;
            }
            0 => {
                // C(m, a) = C(m-1, a) * m / (m - a)
                self.binom = &self.binom * self.len / (self.len - self.ones);
            }
            other => return Err(Error::SymbolOutOfAlphabet(other)),
        }
        let den = BigInt::from(&self.binom * (self.len + 1));
        Ok(rational_raw(BigInt::one(), den))
    }
}
