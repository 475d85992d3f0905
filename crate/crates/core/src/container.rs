//! On-disk bitstream container.
//!
//! Layout, in order:
//!
//! 1. magic bytes `BYC1`;
//! 2. one byte naming the integer code used for length headers
//!    (0x00 omega, 0x01 unary);
//! 3. one byte naming the codec/measure (see [`CodecId`]);
//! 4. one length byte followed by that many ASCII bytes of measure
//!    parameters in decimal (`p/q` for a Bernoulli mixture; empty
//!    otherwise);
//! 5. the payload bits packed most-significant-bit first, zero-padded to a
//!    byte boundary.
//!
//! Padding is unambiguous because payloads are self-delimiting: decoding
//! consumes exactly one codeword and ignores the tail.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::bits::BitString;
use crate::codec::Codec;
use crate::error::{Error, Result};
use crate::integer_code::{IntegerCode, IntegerCodeKind};
use crate::measures::{Alphabet, BernoulliSource, Rational, Symbol};

pub const MAGIC: [u8; 4] = *b"BYC1";

/// Codec/measure identifier byte.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum CodecId {
    BayesLaplace = 0x01,
    BayesGeometric = 0x02,
    BayesBernoulli = 0x03,
    Lz78Positive = 0x10,
    Lz78Binary = 0x11,
    PerSymbolPositive = 0x12,
    PerSymbolBinary = 0x13,
}

impl CodecId {
    pub fn from_byte(b: u8) -> Result<Self> {
        Ok(match b {
            0x01 => CodecId::BayesLaplace,
            0x02 => CodecId::BayesGeometric,
            0x03 => CodecId::BayesBernoulli,
            0x10 => CodecId::Lz78Positive,
            0x11 => CodecId::Lz78Binary,
            0x12 => CodecId::PerSymbolPositive,
            0x13 => CodecId::PerSymbolBinary,
            other => {
                return Err(Error::Malformed(format!(
                    "unknown codec id byte 0x{other:02x}"
                )))
            }
        })
    }
}

fn code_id_byte(code: IntegerCode) -> u8 {
    match code.kind() {
        IntegerCodeKind::Omega => 0x00,
        IntegerCodeKind::Unary => 0x01,
    }
}

fn code_from_byte(b: u8) -> Result<IntegerCode> {
    match b {
        0x00 => Ok(IntegerCode::omega()),
        0x01 => Ok(IntegerCode::unary()),
        other => Err(Error::Malformed(format!(
            "unknown integer-code byte 0x{other:02x}"
        ))),
    }
}

fn codec_tag(codec: &Codec) -> (CodecId, String) {
    match codec {
        Codec::BayesLaplace(_) => (CodecId::BayesLaplace, String::new()),
        Codec::BayesGeometric(_) => (CodecId::BayesGeometric, String::new()),
        Codec::BayesBernoulli(c) => (CodecId::BayesBernoulli, c.mixture().theta().to_string()),
        Codec::Lz78(c) => match c.alphabet() {
            Alphabet::Positive => (CodecId::Lz78Positive, String::new()),
            Alphabet::Finite(_) => (CodecId::Lz78Binary, String::new()),
        },
        Codec::PerSymbol(c) => match c.alphabet() {
            Alphabet::Positive => (CodecId::PerSymbolPositive, String::new()),
            Alphabet::Finite(_) => (CodecId::PerSymbolBinary, String::new()),
        },
    }
}

fn codec_from_tag(id: CodecId, code: IntegerCode, params: &str) -> Result<Codec> {
    if code.kind() != IntegerCodeKind::Omega {
        // the codecs are constructed with their default (omega) header; a
        // different header byte is accepted only if it matches
        return Err(Error::Malformed(
            "only the omega length header is produced by this build".into(),
        ));
    }
    Ok(match id {
        CodecId::BayesLaplace => Codec::bayes_laplace(),
        CodecId::BayesGeometric => Codec::bayes_geometric(),
        CodecId::BayesBernoulli => {
            let theta = parse_rational(params)?;
            Codec::bayes_bernoulli(BernoulliSource::new(theta)?)
        }
        CodecId::Lz78Positive => Codec::lz78(Alphabet::Positive),
        CodecId::Lz78Binary => Codec::lz78(Alphabet::Finite(2)),
        CodecId::PerSymbolPositive => Codec::per_symbol(Alphabet::Positive),
        CodecId::PerSymbolBinary => Codec::per_symbol(Alphabet::Finite(2)),
    })
}

/// Parse `p/q` or a bare integer as a nonnegative rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = |_| Error::InvalidConfig(format!("cannot parse rational {s:?}"));
    let r = match s.split_once('/') {
        Some((num, den)) => {
            let num: BigInt = num.trim().parse().map_err(bad)?;
            let den: BigInt = den.trim().parse().map_err(bad)?;
            if den.is_zero() {
                return Err(Error::InvalidConfig("zero denominator".into()));
            }
            Rational::new(num, den)
        }
        None => Rational::from(s.trim().parse::<BigInt>().map_err(bad)?),
    };
    if r.is_negative() {
        return Err(Error::InvalidConfig(format!("{s:?} is negative")));
    }
    Ok(r)
}

/// Encode `x` and wrap it in a container.
pub fn write_container(codec: &Codec, x: &[Symbol]) -> Result<Vec<u8>> {
    let payload = codec.encode_payload(x)?;
    let (id, params) = codec_tag(codec);
    if params.len() > u8::MAX as usize {
        return Err(Error::InvalidConfig(
            "measure parameters exceed 255 bytes".into(),
        ));
    }
    let mut out = Vec::with_capacity(7 + params.len() + payload.len() / 8);
    out.extend_from_slice(&MAGIC);
    out.push(code_id_byte(codec.length_code()));
    out.push(id as u8);
    out.push(params.len() as u8);
    out.extend_from_slice(params.as_bytes());
    out.extend_from_slice(&payload.to_bytes());
    Ok(out)
}

/// Rebuild the codec named by a container and decode its payload.
pub fn read_container(bytes: &[u8]) -> Result<(Codec, Vec<Symbol>)> {
    if bytes.len() < 7 {
        return Err(Error::Malformed("container shorter than its header".into()));
    }
    if bytes[..4] != MAGIC {
        return Err(Error::Malformed("bad magic bytes".into()));
    }
    let code = code_from_byte(bytes[4])?;
    let id = CodecId::from_byte(bytes[5])?;
    let params_len = bytes[6] as usize;
    if bytes.len() < 7 + params_len {
        return Err(Error::Malformed("container truncated in parameters".into()));
    }
    let params = std::str::from_utf8(&bytes[7..7 + params_len])
        .map_err(|_| Error::Malformed("parameters are not ASCII".into()))?;
    let codec = codec_from_tag(id, code, params)?;
    let payload = BitString::from_bytes(&bytes[7 + params_len..]);
    let (x, _consumed) = codec.decode_payload(&payload)?;
    Ok((codec, x))
}
