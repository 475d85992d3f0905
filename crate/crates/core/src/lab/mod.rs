//! Redundancy experiments: per-prefix code-length trajectories,
//! no-hypercompression violation counting, and catch-up-time lower bounds.
//!
//! Log-domain quantities are never materialized as floats. A statement like
//! "code length + log₂ P ≤ 0" is decided as P ≤ 2^−length by integer
//! comparison, and trajectories carry the exact probabilities whose negated
//! logs they describe.

mod sweep;

pub use sweep::{
    monte_carlo_sweep, run_experiment, trial_string, CatchupPairReport, CodecReport, Family,
    SweepConfig, SweepReport, CSV_HEADER,
};

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::codec::LabCodec;
use crate::error::{Error, Result};
use crate::integer_code::IntegerCode;
use crate::measures::{Rational, SequentialMeasure, Symbol};

/// P ≤ 2^−len, decided exactly (with a bit-length fast path).
pub(crate) fn prob_le_pow2_neg(p: &Rational, len: u64) -> bool {
    debug_assert!(p > &Rational::zero());
    let shifted_bits = p.numer().bits() + len;
    let den_bits = p.denom().bits();
    if shifted_bits < den_bits {
        return true;
    }
    if shifted_bits > den_bits {
        return false;
    }
    (p.numer() << usize::try_from(len).expect("length fits usize")) <= *p.denom()
}

/// One per-prefix record: the codeword length of x^n and the exact
/// probabilities of x^n under the true and the designated mixture measures.
/// The Shannon redundancy at n is code_len + log₂(prob_true), and the
/// no-hypercompression margin is the same quantity against the designated
/// measure; both are represented exactly by the stored rationals.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryPoint {
    pub n: u64,
    pub code_len: u64,
    pub prob_true: Rational,
    pub prob_mix: Rational,
}

impl TrajectoryPoint {
    /// code_len + log₂ P_true ≤ 0, i.e. the code beat the measure's ideal
    /// length at this prefix.
    pub fn barron_violation(&self) -> bool {
        prob_le_pow2_neg(&self.prob_true, self.code_len)
    }
}

/// Per-prefix records for n = 1 … |x|.
#[derive(Debug, Clone, PartialEq)]
pub struct RedundancyTrajectory {
    points: Vec<TrajectoryPoint>,
}

impl RedundancyTrajectory {
    pub fn points(&self) -> &[TrajectoryPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The prefix lengths n at which the codec hypercompressed the true
    /// measure.
    pub fn violations(&self) -> Vec<u64> {
        self.points
            .iter()
            .filter(|p| p.barron_violation())
            .map(|p| p.n)
            .collect()
    }
}

/// Compute the full trajectory of `codec` on `x`, scoring against
/// `true_measure` and carrying `mixture` alongside. All prefixes must have
/// positive mass under both measures.
pub fn trajectory(
    codec: &dyn LabCodec,
    true_measure: &dyn SequentialMeasure,
    mixture: &dyn SequentialMeasure,
    x: &[Symbol],
) -> Result<RedundancyTrajectory> {
    let lens = codec.prefix_lengths(x)?;
    let mut true_stepper = true_measure.stepper();
    let mut mix_stepper = mixture.stepper();
    let mut points = Vec::with_capacity(x.len());
    for (i, &s) in x.iter().enumerate() {
        let prob_true = true_stepper.push(s)?;
        let prob_mix = mix_stepper.push(s)?;
        if prob_true.is_zero() || prob_mix.is_zero() {
            return Err(Error::ZeroMassPrefix);
        }
        points.push(TrajectoryPoint {
            n: i as u64 + 1,
            code_len: lens[i],
            prob_true,
            prob_mix,
        });
    }
    Ok(RedundancyTrajectory { points })
}

/// The prefix lengths n ≤ |x| with code_len(n) + log₂ P(xⁿ) ≤ 0.
pub fn barron_violations(
    codec: &dyn LabCodec,
    measure: &dyn SequentialMeasure,
    x: &[Symbol],
) -> Result<Vec<u64>> {
    let lens = codec.prefix_lengths(x)?;
    let mut stepper = measure.stepper();
    let mut out = Vec::new();
    for (i, &s) in x.iter().enumerate() {
        let p = stepper.push(s)?;
        if p.is_zero() {
            return Err(Error::ZeroMassPrefix);
        }
        if prob_le_pow2_neg(&p, lens[i]) {
            out.push(i as u64 + 1);
        }
    }
    Ok(out)
}

/// The margin function f(n) a code is allowed over the reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarginSpec {
    /// f(n) = |ω(n)| + k: the length-header cost plus slack.
    OmegaPlus(u64),
    /// f(n) = k.
    Const(u64),
}

impl Default for MarginSpec {
    fn default() -> Self {
        MarginSpec::OmegaPlus(2)
    }
}

impl MarginSpec {
    pub fn eval(&self, n: u64) -> Result<u64> {
        match *self {
            MarginSpec::OmegaPlus(k) => Ok(IntegerCode::omega().len(n)? + k),
            MarginSpec::Const(k) => Ok(k),
        }
    }
}

impl fmt::Display for MarginSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MarginSpec::OmegaPlus(k) => write!(f, "omega+{k}"),
            MarginSpec::Const(k) => write!(f, "const:{k}"),
        }
    }
}

impl FromStr for MarginSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidConfig(format!("cannot parse margin {s:?}"));
        if let Some(k) = s.strip_prefix("omega+") {
            return k.parse().map(MarginSpec::OmegaPlus).map_err(|_| bad());
        }
        if let Some(k) = s.strip_prefix("const:") {
            return k.parse().map(MarginSpec::Const).map_err(|_| bad());
        }
        Err(bad())
    }
}

/// Catch-up lower bound: the last n (≤ horizon) at which codec 1 was still
/// at least f(n) + delta bits behind codec 2. With delta at least the
/// description cost of codec 2's decoder, any such n lower-bounds the true
/// catch-up time of codec 1; the delta actually used is always reported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatchUpReport {
    pub margin: MarginSpec,
    pub delta: u64,
    pub horizon: u64,
    pub cut_lb: u64,
}

pub fn catchup_lower_bound(
    x: &[Symbol],
    codec_1: &dyn LabCodec,
    codec_2: &dyn LabCodec,
    margin: MarginSpec,
    delta: u64,
) -> Result<CatchUpReport> {
    let l1 = codec_1.prefix_lengths(x)?;
    let l2 = codec_2.prefix_lengths(x)?;
    let cut_lb = catchup_from_lengths(&l1, &l2, margin, delta)?;
    Ok(CatchUpReport {
        margin,
        delta,
        horizon: x.len() as u64,
        cut_lb,
    })
}

/// Scan from the horizon down; the first qualifying n is the maximum.
pub(crate) fn catchup_from_lengths(
    l1: &[u64],
    l2: &[u64],
    margin: MarginSpec,
    delta: u64,
) -> Result<u64> {
    debug_assert_eq!(l1.len(), l2.len());
    for i in (0..l1.len()).rev() {
        let n = i as u64 + 1;
        let gap = l1[i] as i128 - l2[i] as i128 - delta as i128;
        if gap >= margin.eval(n)? as i128 {
            return Ok(n);
        }
    }
    Ok(0)
}
