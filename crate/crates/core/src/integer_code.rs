//! Prefix-free codes for the positive naturals.
//!
//! The workhorse is the recursive Elias ω code: a codeword is a sequence of
//! binary groups followed by a terminating `0`, where each group is the
//! binary representation of the next value in the chain n, λ(n)−1, … down
//! to 1 (λ = binary length), emitted outermost group last. Codewords are
//! self-delimiting and their lengths satisfy the iterated-logarithm law.
//! A unary code is provided as a trivially analyzable baseline.

use crate::bits::{BitCursor, BitString};
use crate::error::{Error, Result};

/// Which integer code to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IntegerCodeKind {
    /// Recursive Elias ω representation (binary output only).
    Omega,
    /// n − 1 ones followed by a zero.
    Unary,
}

/// A prefix-free code c : {1, 2, 3, …} → bit strings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IntegerCode {
    kind: IntegerCodeKind,
    base: u32,
}

impl IntegerCode {
    /// The ω code over the binary output alphabet.
    pub fn omega() -> Self {
        IntegerCode {
            kind: IntegerCodeKind::Omega,
            base: 2,
        }
    }

    /// The unary code over the binary output alphabet.
    pub fn unary() -> Self {
        IntegerCode {
            kind: IntegerCodeKind::Unary,
            base: 2,
        }
    }

    /// A code with an explicit output base. The ω code is implemented for
    /// base 2 only; other bases are rejected at use sites.
    pub fn with_base(kind: IntegerCodeKind, base: u32) -> Self {
        IntegerCode { kind, base }
    }

    pub fn kind(&self) -> IntegerCodeKind {
        self.kind
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            IntegerCodeKind::Omega => "omega",
            IntegerCodeKind::Unary => "unary",
        }
    }

    fn check_base(&self) -> Result<()> {
        if self.base < 2 {
            return Err(Error::UnsupportedBase(self.base));
        }
        if self.kind == IntegerCodeKind::Omega && self.base != 2 {
            return Err(Error::UnsupportedBase(self.base));
        }
        Ok(())
    }

    /// Codeword for `n ≥ 1`.
    pub fn encode(&self, n: u64) -> Result<BitString> {
        self.check_base()?;
        if n == 0 {
            return Err(Error::ZeroValue);
        }
        match self.kind {
            IntegerCodeKind::Omega => {
                // collect groups innermost-first, then emit them reversed
                let mut groups: Vec<u64> = Vec::new();
                let mut v = n;
                while v > 1 {
                    groups.push(v);
                    v = u64::from(bit_len(v)) - 1;
                }
                let mut out = BitString::with_capacity(self.len(n)? as usize);
                for &g in groups.iter().rev() {
                    out.push_uint(g, bit_len(g));
                }
                out.push(false);
                Ok(out)
            }
            IntegerCodeKind::Unary => {
                let mut out = BitString::with_capacity(n as usize);
                for _ in 0..n - 1 {
                    out.push(true);
                }
                out.push(false);
                Ok(out)
            }
        }
    }

    /// Decode one codeword from the front of `bits`; returns `(n, consumed)`.
    pub fn decode(&self, bits: &BitString) -> Result<(u64, usize)> {
        let mut cur = BitCursor::new(bits);
        let n = self.decode_from(&mut cur)?;
        Ok((n, cur.pos()))
    }

    /// Decode one codeword at a cursor, advancing it past the codeword.
    pub fn decode_from(&self, cur: &mut BitCursor<'_>) -> Result<u64> {
        self.check_base()?;
        match self.kind {
            IntegerCodeKind::Omega => {
                let mut n: u64 = 1;
                loop {
                    if !cur.read_bit()? {
                        return Ok(n);
                    }
                    // a set continuation bit promises a group of n more bits
                    if n >= 64 {
                        return Err(Error::ValueOverflow);
                    }
                    let width = n as u32;
                    n = (1u64 << width) | cur.read_uint(width)?;
                }
            }
            IntegerCodeKind::Unary => {
                let mut n: u64 = 1;
                while cur.read_bit()? {
                    n = n.checked_add(1).ok_or(Error::ValueOverflow)?;
                }
                Ok(n)
            }
        }
    }

    /// |c(n)| without materializing the codeword.
    pub fn len(&self, n: u64) -> Result<u64> {
        self.check_base()?;
        if n == 0 {
            return Err(Error::ZeroValue);
        }
        match self.kind {
            IntegerCodeKind::Omega => {
                let mut total: u64 = 1;
                let mut v = n;
                while v > 1 {
                    let lambda = u64::from(bit_len(v));
                    total += lambda;
                    v = lambda - 1;
                }
                Ok(total)
            }
            IntegerCodeKind::Unary => Ok(n),
        }
    }
}

fn bit_len(v: u64) -> u32 {
    debug_assert!(v > 0);
    64 - v.leading_zeros()
}
