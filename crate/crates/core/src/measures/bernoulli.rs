//! The iid Bernoulli family over {0, 1} with an exact rational parameter.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{rational_raw, Alphabet, MarginalStepper, Rational, SequentialMeasure, Symbol};
use crate::error::{Error, Result};

/// iid source over {0, 1}: every conditional of the symbol 1 equals theta.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BernoulliSource {
    theta: Rational,
}

impl BernoulliSource {
    /// `theta` must lie in [0, 1]; it is stored in lowest terms.
    pub fn new(theta: Rational) -> Result<Self> {
        if theta < Rational::zero() || theta > Rational::one() {
            return Err(Error::InvalidConfig(format!(
                "bernoulli parameter {theta} outside [0, 1]"
            )));
        }
        Ok(BernoulliSource { theta })
    }

    pub fn from_parts(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidConfig("zero denominator".into()));
        }
        Self::new(Rational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn theta(&self) -> &Rational {
        &self.theta
    }

    fn is_degenerate(&self) -> bool {
        self.theta.is_zero() || self.theta.is_one()
    }

    /// A degenerate parameter gives some prefixes zero mass.
    fn prefix_has_mass(&self, prefix: &[Symbol]) -> bool {
        if self.theta.is_zero() {
            prefix.iter().all(|&s| s == 0)
        } else if self.theta.is_one() {
            prefix.iter().all(|&s| s == 1)
        } else {
            true
        }
    }
}

impl SequentialMeasure for BernoulliSource {
    fn alphabet(&self) -> Alphabet {
        Alphabet::Finite(2)
    }

    fn name(&self) -> String {
        format!("bernoulli({})", self.theta)
    }

    fn conditional(&self, prefix: &[Symbol], s: Symbol) -> Result<Rational> {
        self.alphabet().validate(s)?;
        if self.is_degenerate() && !self.prefix_has_mass(prefix) {
            return Err(Error::ZeroMassPrefix);
        }
        Ok(if s == 1 {
            self.theta.clone()
        } else {
            Rational::one() - &self.theta
        })
    }

    fn marginal(&self, x: &[Symbol]) -> Result<Rational> {
        let mut ones = 0u64;
        for &s in x {
            self.alphabet().validate(s)?;
            ones += s;
        }
        let zeros = x.len() as u64 - ones;
        // theta^ones (1-theta)^zeros; numerator parts are each coprime to the
        // denominator q^n because theta is stored reduced
        let p = self.theta.numer();
        let q = self.theta.denom();
        let num = p.pow(ones as u32) * (q - p).pow(zeros as u32);
        if num.is_zero() {
            return Ok(Rational::zero());
        }
        Ok(rational_raw(num, q.pow(x.len() as u32)))
    }

    fn stepper(&self) -> Box<dyn MarginalStepper + '_> {
        Box::new(BernoulliStepper {
            one_num: self.theta.numer().clone(),
            zero_num: self.theta.denom() - self.theta.numer(),
            den_step: self.theta.denom().clone(),
            num: BigInt::one(),
            den: BigInt::one(),
        })
    }
}

struct BernoulliStepper {
    one_num: BigInt,
    zero_num: BigInt,
    den_step: BigInt,
    num: BigInt,
    den: BigInt,
}

impl MarginalStepper for BernoulliStepper {
    fn push(&mut self, s: Symbol) -> Result<BigRational> {
        match s {
            0 => self.num *= &self.zero_num,
            1 => self.num *= &self.one_num,
            other => return Err(Error::SymbolOutOfAlphabet(other)),
        }
        self.den *= &self.den_step;
        if self.num.is_zero() {
            return Ok(Rational::zero());
        }
        Ok(rational_raw(self.num.clone(), self.den.clone()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn uniform_marginal_is_two_to_minus_n() {
        let m = BernoulliSource::from_parts(1, 2).unwrap();
        for x in [vec![0, 1, 1], vec![1, 1, 1, 1], vec![0]] {
            let n = x.len() as i64;
            assert_eq!(m.marginal(&x).unwrap(), rat(1, 1 << n));
        }
    }

    #[test]
    fn conditional_is_theta_regardless_of_prefix() {
        let m = BernoulliSource::from_parts(3, 7).unwrap();
        assert_eq!(m.conditional(&[], 1).unwrap(), rat(3, 7));
        assert_eq!(m.conditional(&[0, 1, 0], 1).unwrap(), rat(3, 7));
        assert_eq!(m.conditional(&[1, 1], 0).unwrap(), rat(4, 7));
    }

    #[test]
    fn degenerate_parameter_zero_mass_prefix() {
        let m = BernoulliSource::from_parts(1, 1).unwrap();
        assert_eq!(m.conditional(&[1, 1], 1).unwrap(), rat(1, 1));
        assert_eq!(m.conditional(&[0], 1), Err(Error::ZeroMassPrefix));
        assert_eq!(m.marginal(&[1, 0, 1]).unwrap(), Rational::zero());
    }

    #[test]
    fn stepper_agrees_with_marginal() {
        let m = BernoulliSource::from_parts(5, 9).unwrap();
        let x = [1u64, 0, 0, 1, 1, 0, 1];
        let mut st = m.stepper();
        for i in 0..x.len() {
            let p = st.push(x[i]).unwrap();
            assert_eq!(p, m.marginal(&x[..=i]).unwrap());
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(BernoulliSource::new(rat(3, 2)).is_err());
        assert!(BernoulliSource::new(rat(-1, 2)).is_err());
        assert!(BernoulliSource::from_parts(1, 0).is_err());
    }

    #[test]
    fn binary_normalization_exact() {
        let m = BernoulliSource::from_parts(12_345, 65_536).unwrap();
        let mut rng = crate::rng::SplitMix64::new(6);
        for _ in 0..1000 {
            let len = (rng.next_u64() % 50) as usize;
            let prefix: Vec<Symbol> = (0..len).map(|_| rng.next_u64() & 1).collect();
            let total = m.conditional(&prefix, 0).unwrap() + m.conditional(&prefix, 1).unwrap();
            assert_eq!(total, Rational::one());
        }
    }
}
