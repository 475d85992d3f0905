//! Exact universal source coding and an experiment bench around it.
//!
//! The crate provides, with no floating point anywhere on a coding path:
//!
//! - prefix-free integer codes (recursive Elias ω, unary) — [`integer_code`];
//! - sequential measures with exact rational conditionals — [`measures`]:
//!   iid Bernoulli, the uniform-prior Bernoulli mixture (Laplace), the
//!   geometric mixture over the positive naturals, and digit-parameterized
//!   sources evaluated by interval truncation;
//! - exact Shannon–Fano–Elias coding of fixed-length strings against any
//!   such measure — [`sfe`];
//! - the mixture code `c(|x|)` + SFE codeword, a prefix code over strings of
//!   every length — [`bayes`];
//! - LZ78 and a per-symbol integer code as computable baselines —
//!   [`baselines`];
//! - redundancy trajectories, no-hypercompression violation counts,
//!   catch-up-time lower bounds, and reproducible Monte Carlo sweeps with
//!   CSV/summary output — [`lab`].
//!
//! Codecs and measures are immutable after construction and safe to share
//! across threads; samplers own their generator state.

pub mod baselines;
pub mod bayes;
pub mod bits;
pub mod codec;
pub mod container;
pub mod error;
pub mod integer_code;
pub mod lab;
pub mod measures;
pub mod rng;
pub mod sfe;

pub use baselines::{per_symbol_length, Lz78Codec, PerSymbolCodec};
pub use bayes::BayesianCode;
pub use bits::{BitCursor, BitString};
pub use codec::{Codec, LabCodec};
pub use error::{Error, Result};
pub use integer_code::{IntegerCode, IntegerCodeKind};
pub use measures::{
    sample_sequence, Alphabet, BernoulliSource, DigitParamSource, DigitStream, GeometricMixture,
    LaplaceMixture, PriorSampler, Rational, SequentialMeasure, Symbol,
};
pub use sfe::FixedLengthCode;
