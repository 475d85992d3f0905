//! Error type shared by all coding, measure, and experiment operations.

use thiserror::Error;

/// Crate-wide error enum.
///
/// Variants are grouped by the surface they come from: code-domain errors
/// (`ZeroValue`, `EmptyInput`, `UnsupportedBase`), bitstream errors
/// (`Truncated`, `Malformed`, `ValueOverflow`), measure errors
/// (`ZeroProbability`, `ZeroMassPrefix`, `SymbolOutOfAlphabet`,
/// `PrecisionExhausted`), and harness errors (`InvalidConfig`, `Trial`, `Io`,
/// `Internal`).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Integer codes here are defined on the positive naturals.
    #[error("0 is outside the code domain; naturals start at 1")]
    ZeroValue,

    /// The empty string has no codeword (its length 0 is not codable).
    #[error("empty string is outside the code domain")]
    EmptyInput,

    #[error("output base {0} is not supported by this code")]
    UnsupportedBase(u32),

    /// Input bits ran out in the middle of a codeword.
    #[error("truncated codeword: input ended mid-codeword")]
    Truncated,

    #[error("malformed codeword: {0}")]
    Malformed(String),

    /// A decoded integer does not fit in the 64-bit symbol range.
    #[error("decoded value exceeds the representable range")]
    ValueOverflow,

    /// Encoding a string the coding measure assigns probability zero.
    #[error("string has probability zero under the coding measure")]
    ZeroProbability,

    /// Conditional probabilities after a zero-mass prefix are undefined.
    #[error("prefix has probability zero; conditional is undefined")]
    ZeroMassPrefix,

    #[error("symbol {0} is outside the measure's alphabet")]
    SymbolOutOfAlphabet(u64),

    /// Interval refinement hit the configured digit-precision cap without
    /// reaching a decision.
    #[error("precision exhausted: no separation within {max} digits")]
    PrecisionExhausted { max: u32 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// A per-trial failure inside a Monte Carlo sweep, tagged with the trial
    /// index.
    #[error("trial {trial}: {source}")]
    Trial {
        trial: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("io error: {0}")]
    Io(String),

    /// An internal invariant was broken; always a bug.
    #[error("internal invariant breach: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn in_trial(self, trial: u64) -> Error {
        Error::Trial {
            trial,
            source: Box::new(self),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
