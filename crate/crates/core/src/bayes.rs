//! The mixture code over strings of every length.
//!
//! A codeword is the integer codeword for the string length followed by the
//! SFE codeword of the string against the mixture measure:
//! |C(x)| = |c(|x|)| + ⌈−log₂ P(x)⌉ + 1. The integer code is prefix-free on
//! lengths and the SFE code is prefix-free within each length class, so the
//! concatenation is a self-delimiting prefix code over all of the input
//! domain, and concatenated codewords decode back one by one.

use crate::bits::{BitCursor, BitString};
use crate::error::{Error, Result};
use crate::integer_code::IntegerCode;
use crate::measures::{SequentialMeasure, Symbol};
use crate::sfe::{ceil_neg_log2, FixedLengthCode};

/// Prefix code C(x) = c(|x|) · SFE(x) against an exact mixture measure.
#[derive(Debug, Clone)]
pub struct BayesianCode<M> {
    length_code: IntegerCode,
    fixed: FixedLengthCode<M>,
}

impl<M: SequentialMeasure> BayesianCode<M> {
    pub fn new(length_code: IntegerCode, mixture: M) -> Self {
        BayesianCode {
            length_code,
            fixed: FixedLengthCode::new(mixture),
        }
    }

    /// The ω length header, the conventional choice.
    pub fn with_omega(mixture: M) -> Self {
        Self::new(IntegerCode::omega(), mixture)
    }

    pub fn mixture(&self) -> &M {
        self.fixed.measure()
    }

    pub fn length_code(&self) -> IntegerCode {
        self.length_code
    }

    pub fn encode(&self, x: &[Symbol]) -> Result<BitString> {
        if x.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut out = self.length_code.encode(x.len() as u64)?;
        out.extend(&self.fixed.encode(x)?);
        Ok(out)
    }

    /// Decode one codeword from the front of `bits`: `(string, consumed)`.
    pub fn decode(&self, bits: &BitString) -> Result<(Vec<Symbol>, usize)> {
        let mut cur = BitCursor::new(bits);
        let x = self.decode_from(&mut cur)?;
        Ok((x, cur.pos()))
    }

    pub fn decode_from(&self, cur: &mut BitCursor<'_>) -> Result<Vec<Symbol>> {
        let n = self.length_code.decode_from(cur)?;
        let n = usize::try_from(n).map_err(|_| Error::ValueOverflow)?;
        self.fixed.decode_from(n, cur)
    }

    /// |c(|x|)| + ⌈−log₂ P(x)⌉ + 1 without encoding.
    pub fn total_len(&self, x: &[Symbol]) -> Result<u64> {
        if x.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(self.length_code.len(x.len() as u64)? + self.fixed.codeword_len(x)?)
    }

    /// Total codeword length of every prefix x^1 … x^n, via one incremental
    /// pass over the mixture marginals.
    pub fn prefix_lengths(&self, x: &[Symbol]) -> Result<Vec<u64>> {
        let mut out = Vec::with_capacity(x.len());
        let mut stepper = self.mixture().stepper();
        for (i, &s) in x.iter().enumerate() {
            let p = stepper.push(s)?;
            if num_traits::Zero::is_zero(&p) {
                return Err(Error::ZeroProbability);
            }
            let header = self.length_code.len(i as u64 + 1)?;
            out.push(header + ceil_neg_log2(&p)? + 1);
        }
        Ok(out)
    }
}
