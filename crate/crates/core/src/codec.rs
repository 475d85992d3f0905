//! A common face over the concrete codecs for experiments and files.
//!
//! The lab consumes codecs purely through their length functions
//! ([`LabCodec`]); files and the CLI need dynamic construction and payload
//! round-trips, which the closed [`Codec`] enum provides. Payloads are
//! uniform across codecs: the integer codeword for the string length comes
//! first (for the mixture code it is an intrinsic part of the codeword; for
//! the baselines it is the shared framing that makes their bodies
//! decodable), followed by the codec body.
//!
//! Experiment lengths follow each code's own accounting: the mixture code
//! counts its length header because the header is part of the codeword
//! proper, while LZ78 and per-symbol lengths count body bits only, the
//! framing being shared context.

use crate::baselines::{Lz78Codec, PerSymbolCodec};
use crate::bayes::BayesianCode;
use crate::bits::{BitCursor, BitString};
use crate::error::{Error, Result};
use crate::integer_code::IntegerCode;
use crate::measures::{
    Alphabet, BernoulliSource, GeometricMixture, LaplaceMixture, SequentialMeasure, Symbol,
};

/// Codeword-length oracle used by every experiment.
pub trait LabCodec {
    /// Stable identifier for reports and CSV rows.
    fn codec_id(&self) -> String;

    /// Total codeword length of every prefix x^1 … x^n.
    fn prefix_lengths(&self, x: &[Symbol]) -> Result<Vec<u64>>;

    fn total_len(&self, x: &[Symbol]) -> Result<u64> {
        self.prefix_lengths(x)?
            .last()
            .copied()
            .ok_or(Error::EmptyInput)
    }
}

impl<M: SequentialMeasure> LabCodec for BayesianCode<M> {
    fn codec_id(&self) -> String {
        // the omega header is the default and stays implicit in the id
        if self.length_code().kind() == crate::integer_code::IntegerCodeKind::Omega {
            format!("bayes-{}", self.mixture().name())
        } else {
            format!(
                "bayes-{}+{}",
                self.mixture().name(),
                self.length_code().name()
            )
        }
    }

    fn prefix_lengths(&self, x: &[Symbol]) -> Result<Vec<u64>> {
        BayesianCode::prefix_lengths(self, x)
    }
}

impl LabCodec for Lz78Codec {
    fn codec_id(&self) -> String {
        "lz78".into()
    }

    fn prefix_lengths(&self, x: &[Symbol]) -> Result<Vec<u64>> {
        Lz78Codec::prefix_lengths(self, x)
    }
}

impl LabCodec for PerSymbolCodec {
    fn codec_id(&self) -> String {
        "per-symbol".into()
    }

    fn prefix_lengths(&self, x: &[Symbol]) -> Result<Vec<u64>> {
        PerSymbolCodec::prefix_lengths(self, x)
    }
}

/// The closed set of codecs that files and experiments can name.
#[derive(Debug, Clone)]
pub enum Codec {
    BayesLaplace(BayesianCode<LaplaceMixture>),
    BayesGeometric(BayesianCode<GeometricMixture>),
    BayesBernoulli(BayesianCode<BernoulliSource>),
    Lz78(Lz78Codec),
    PerSymbol(PerSymbolCodec),
}

impl Codec {
    pub fn bayes_laplace() -> Self {
        Codec::BayesLaplace(BayesianCode::with_omega(LaplaceMixture::new()))
    }

    pub fn bayes_geometric() -> Self {
        Codec::BayesGeometric(BayesianCode::with_omega(GeometricMixture::new()))
    }

    pub fn bayes_bernoulli(theta: BernoulliSource) -> Self {
        Codec::BayesBernoulli(BayesianCode::with_omega(theta))
    }

    pub fn lz78(alphabet: Alphabet) -> Self {
        Codec::Lz78(Lz78Codec::new(alphabet))
    }

    pub fn per_symbol(alphabet: Alphabet) -> Self {
        Codec::PerSymbol(PerSymbolCodec::new(alphabet))
    }

    /// The alphabet of strings this codec accepts.
    pub fn input_alphabet(&self) -> Alphabet {
        match self {
            Codec::BayesLaplace(c) => c.mixture().alphabet(),
            Codec::BayesGeometric(c) => c.mixture().alphabet(),
            Codec::BayesBernoulli(c) => c.mixture().alphabet(),
            Codec::Lz78(c) => c.alphabet(),
            Codec::PerSymbol(c) => c.alphabet(),
        }
    }

    /// The integer code carried in file headers.
    pub fn length_code(&self) -> IntegerCode {
        match self {
            Codec::BayesLaplace(c) => c.length_code(),
            Codec::BayesGeometric(c) => c.length_code(),
            Codec::BayesBernoulli(c) => c.length_code(),
            Codec::Lz78(c) => c.symbol_code(),
            Codec::PerSymbol(c) => c.symbol_code(),
        }
    }

    /// Full payload: length codeword followed by the codec body.
    pub fn encode_payload(&self, x: &[Symbol]) -> Result<BitString> {
        if x.is_empty() {
            return Err(Error::EmptyInput);
        }
        match self {
            Codec::BayesLaplace(c) => c.encode(x),
            Codec::BayesGeometric(c) => c.encode(x),
            Codec::BayesBernoulli(c) => c.encode(x),
            Codec::Lz78(c) => {
                let mut out = c.symbol_code().encode(x.len() as u64)?;
                out.extend(&c.encode_body(x)?);
                Ok(out)
            }
            Codec::PerSymbol(c) => {
                let mut out = c.symbol_code().encode(x.len() as u64)?;
                out.extend(&c.encode_body(x)?);
                Ok(out)
            }
        }
    }

    /// Decode one payload from the front of `bits`: `(string, consumed)`.
    pub fn decode_payload(&self, bits: &BitString) -> Result<(Vec<Symbol>, usize)> {
        let mut cur = BitCursor::new(bits);
        let x = self.decode_payload_from(&mut cur)?;
        Ok((x, cur.pos()))
    }

    pub fn decode_payload_from(&self, cur: &mut BitCursor<'_>) -> Result<Vec<Symbol>> {
        match self {
            Codec::BayesLaplace(c) => c.decode_from(cur),
            Codec::BayesGeometric(c) => c.decode_from(cur),
            Codec::BayesBernoulli(c) => c.decode_from(cur),
            Codec::Lz78(c) => {
                let n = c.symbol_code().decode_from(cur)?;
                let n = usize::try_from(n).map_err(|_| Error::ValueOverflow)?;
                c.decode_body(n, cur)
            }
            Codec::PerSymbol(c) => {
                let n = c.symbol_code().decode_from(cur)?;
                let n = usize::try_from(n).map_err(|_| Error::ValueOverflow)?;
                c.decode_body(n, cur)
            }
        }
    }

    /// The exact mixture this codec codes against, when it has one.
    pub fn mixture_measure(&self) -> Option<&dyn SequentialMeasure> {
        match self {
            Codec::BayesLaplace(c) => Some(c.mixture()),
            Codec::BayesGeometric(c) => Some(c.mixture()),
            Codec::BayesBernoulli(c) => Some(c.mixture()),
            Codec::Lz78(_) | Codec::PerSymbol(_) => None,
        }
    }
}

impl LabCodec for Codec {
    fn codec_id(&self) -> String {
        match self {
            Codec::BayesLaplace(c) => c.codec_id(),
            Codec::BayesGeometric(c) => c.codec_id(),
            Codec::BayesBernoulli(c) => c.codec_id(),
            Codec::Lz78(c) => c.codec_id(),
            Codec::PerSymbol(c) => c.codec_id(),
        }
    }

    fn prefix_lengths(&self, x: &[Symbol]) -> Result<Vec<u64>> {
        match self {
            Codec::BayesLaplace(c) => c.prefix_lengths(x),
            Codec::BayesGeometric(c) => c.prefix_lengths(x),
            Codec::BayesBernoulli(c) => c.prefix_lengths(x),
            Codec::Lz78(c) => c.prefix_lengths(x),
            Codec::PerSymbol(c) => c.prefix_lengths(x),
        }
    }
}
