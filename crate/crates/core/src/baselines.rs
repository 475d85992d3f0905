//! Computable reference codes: LZ78 and a per-symbol integer code.
//!
//! Both codes rely on the shared container framing to carry the string
//! length, so their bodies only need to be decodable given n. LZ78 emits one
//! record per phrase tagged by a flag bit: `0` ++ ω(index+1) ++ ω(symbol)
//! for a full phrase (longest dictionary match plus one fresh symbol), and
//! `1` ++ ω(index+1) for the final partial phrase when the input ends inside
//! a match. Fresh symbols are ω-coded rather than fixed-width because the
//! alphabet may be unbounded; binary inputs are shifted by one (0→1, 1→2)
//! to fit the ω domain.

use std::collections::HashMap;

use crate::bits::{BitCursor, BitString};
use crate::error::{Error, Result};
use crate::integer_code::IntegerCode;
use crate::measures::{Alphabet, Symbol};

/// Σᵢ |c(xᵢ)| over symbols already in the positive naturals — the cheap
/// code-length anchor used in catch-up comparisons.
pub fn per_symbol_length(code: &IntegerCode, x: &[Symbol]) -> Result<u64> {
    let mut total = 0u64;
    for &s in x {
        total += code.len(s)?;
    }
    Ok(total)
}

/// Shift a symbol into the ω domain when the alphabet starts at 0.
fn map_symbol(alphabet: Alphabet, s: Symbol) -> Result<Symbol> {
    alphabet.validate(s)?;
    Ok(match alphabet {
        Alphabet::Finite(_) => s + 1,
        Alphabet::Positive => s,
    })
}

fn unmap_symbol(alphabet: Alphabet, v: Symbol) -> Result<Symbol> {
    let s = match alphabet {
        Alphabet::Finite(_) => v.checked_sub(1).ok_or(Error::ZeroValue)?,
        Alphabet::Positive => v,
    };
    alphabet
        .validate(s)
        .map_err(|_| Error::Malformed(format!("decoded symbol {v} outside the alphabet")))?;
    Ok(s)
}

/// A greedy parse: the full (match index, fresh symbol) phrases, plus the
/// index of the final partial match when the input ends inside one.
pub type Lz78Parse = (Vec<(u64, Symbol)>, Option<u64>);

/// Incremental-parsing dictionary compressor.
#[derive(Debug, Clone)]
pub struct Lz78Codec {
    alphabet: Alphabet,
    symbol_code: IntegerCode,
}

impl Lz78Codec {
    pub fn new(alphabet: Alphabet) -> Self {
        Lz78Codec {
            alphabet,
            symbol_code: IntegerCode::omega(),
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn symbol_code(&self) -> IntegerCode {
        self.symbol_code
    }

    /// The greedy parse of `x`. Index 0 is the empty phrase.
    pub fn parse(&self, x: &[Symbol]) -> Result<Lz78Parse> {
        let mut dict: HashMap<(u64, Symbol), u64> = HashMap::new();
        let mut next_id = 1u64;
        let mut node = 0u64;
        let mut phrases = Vec::new();
        for &raw in x {
            let s = map_symbol(self.alphabet, raw)?;
            match dict.get(&(node, s)) {
                Some(&child) => node = child,
                None => {
                    phrases.push((node, s));
                    dict.insert((node, s), next_id);
                    next_id += 1;
                    node = 0;
                }
            }
        }
        Ok((phrases, (node != 0).then_some(node)))
    }

    /// Phrase records only; the string length travels in the container.
    pub fn encode_body(&self, x: &[Symbol]) -> Result<BitString> {
        if x.is_empty() {
            return Err(Error::EmptyInput);
        }
        let (phrases, tail) = self.parse(x)?;
        let mut out = BitString::new();
        for (index, symbol) in phrases {
            out.push(false);
            out.extend(&self.symbol_code.encode(index + 1)?);
            out.extend(&self.symbol_code.encode(symbol)?);
        }
        if let Some(index) = tail {
            out.push(true);
            out.extend(&self.symbol_code.encode(index + 1)?);
        }
        Ok(out)
    }

    /// Inverse of `encode_body` for a string of known length `n`.
    pub fn decode_body(&self, n: usize, cur: &mut BitCursor<'_>) -> Result<Vec<Symbol>> {
        // dictionary as (parent, symbol) links; 0 is the empty phrase
        let mut parents: Vec<(u64, Symbol)> = vec![(0, 0)];
        let mut out: Vec<Symbol> = Vec::with_capacity(n);
        while out.len() < n {
            let final_partial = cur.read_bit()?;
            let index = self.symbol_code.decode_from(cur)? - 1;
            let index_us = usize::try_from(index).map_err(|_| Error::ValueOverflow)?;
            if index_us >= parents.len() {
                return Err(Error::Malformed(format!(
                    "phrase index {index} not yet in dictionary"
                )));
            }
            if final_partial {
                if index == 0 {
                    return Err(Error::Malformed("empty final phrase".into()));
                }
                self.append_phrase(&parents, index_us, &mut out)?;
                if out.len() != n {
                    return Err(Error::Malformed(
                        "final partial phrase does not end the string".into(),
                    ));
                }
                return Ok(out);
            }
            let symbol = self.symbol_code.decode_from(cur)?;
            self.append_phrase(&parents, index_us, &mut out)?;
            out.push(unmap_symbol(self.alphabet, symbol)?);
            parents.push((index, symbol));
            if out.len() > n {
                return Err(Error::Malformed(
                    "phrase overruns the announced length".into(),
                ));
            }
        }
        Ok(out)
    }

    fn append_phrase(
        &self,
        parents: &[(u64, Symbol)],
        index: usize,
        out: &mut Vec<Symbol>,
    ) -> Result<()> {
        let mut stack = Vec::new();
        let mut node = index;
        while node != 0 {
            let (parent, symbol) = parents[node];
            stack.push(symbol);
            node = parent as usize;
        }
        for &mapped in stack.iter().rev() {
            out.push(unmap_symbol(self.alphabet, mapped)?);
        }
        Ok(())
    }

    /// Body bit-length of the encoding of every prefix of `x`, from one
    /// incremental parse: a prefix ending inside a match costs the records
    /// emitted so far plus a final-partial record for the current node.
    pub fn prefix_lengths(&self, x: &[Symbol]) -> Result<Vec<u64>> {
        let mut dict: HashMap<(u64, Symbol), u64> = HashMap::new();
        let mut next_id = 1u64;
        let mut node = 0u64;
        let mut emitted = 0u64;
        let mut out = Vec::with_capacity(x.len());
        for &raw in x {
            let s = map_symbol(self.alphabet, raw)?;
            match dict.get(&(node, s)) {
                Some(&child) => {
                    node = child;
                    out.push(emitted + 1 + self.symbol_code.len(node + 1)?);
                }
                None => {
                    emitted += 1 + self.symbol_code.len(node + 1)? + self.symbol_code.len(s)?;
                    dict.insert((node, s), next_id);
                    next_id += 1;
                    node = 0;
                    out.push(emitted);
                }
            }
        }
        Ok(out)
    }

    pub fn total_len(&self, x: &[Symbol]) -> Result<u64> {
        if x.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(*self.prefix_lengths(x)?.last().expect("nonempty"))
    }
}

/// Symbol-by-symbol integer coding; self-delimiting given a length header.
#[derive(Debug, Clone)]
pub struct PerSymbolCodec {
    alphabet: Alphabet,
    symbol_code: IntegerCode,
}

impl PerSymbolCodec {
    pub fn new(alphabet: Alphabet) -> Self {
        PerSymbolCodec {
            alphabet,
            symbol_code: IntegerCode::omega(),
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn symbol_code(&self) -> IntegerCode {
        self.symbol_code
    }

    pub fn encode_body(&self, x: &[Symbol]) -> Result<BitString> {
        let mut out = BitString::new();
        for &raw in x {
            out.extend(&self.symbol_code.encode(map_symbol(self.alphabet, raw)?)?);
        }
        Ok(out)
    }

    pub fn decode_body(&self, n: usize, cur: &mut BitCursor<'_>) -> Result<Vec<Symbol>> {
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            out.push(unmap_symbol(
                self.alphabet,
                self.symbol_code.decode_from(cur)?,
            )?);
        }
        Ok(out)
    }

    pub fn prefix_lengths(&self, x: &[Symbol]) -> Result<Vec<u64>> {
        let mut acc = 0u64;
        let mut out = Vec::with_capacity(x.len());
        for &raw in x {
            acc += self.symbol_code.len(map_symbol(self.alphabet, raw)?)?;
            out.push(acc);
        }
        Ok(out)
    }

    pub fn total_len(&self, x: &[Symbol]) -> Result<u64> {
        Ok(self.prefix_lengths(x)?.last().copied().unwrap_or(0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{sample_sequence, BernoulliSource, GeometricMixture, LaplaceMixture};
    use crate::rng::SplitMix64;

    fn round_trip(codec: &Lz78Codec, x: &[Symbol]) {
        let body = codec.encode_body(x).unwrap();
        let mut cur = BitCursor::new(&body);
        let back = codec.decode_body(x.len(), &mut cur).unwrap();
        assert_eq!(back, x);
        assert_eq!(cur.remaining(), 0, "body fully consumed");
    }

    #[test]
    fn hand_parsed_phrases() {
        let codec = Lz78Codec::new(Alphabet::Positive);
        let (phrases, tail) = codec.parse(&[1, 1, 2, 1, 2, 3]).unwrap();
        assert_eq!(phrases, vec![(0, 1), (1, 2), (2, 3)]);
        assert_eq!(tail, None);
        round_trip(&codec, &[1, 1, 2, 1, 2, 3]);
    }

    #[test]
    fn single_symbol_is_one_phrase() {
        let codec = Lz78Codec::new(Alphabet::Positive);
        for k in 1..=9u64 {
            let (phrases, tail) = codec.parse(&[k]).unwrap();
            assert_eq!(phrases, vec![(0, k)]);
            assert_eq!(tail, None);
            round_trip(&codec, &[k]);
        }
    }

    #[test]
    fn repeated_symbol_phrase_count_grows_like_sqrt() {
        let codec = Lz78Codec::new(Alphabet::Positive);
        for m in [10usize, 100, 1000] {
            let x = vec![1u64; m];
            let (phrases, tail) = codec.parse(&x).unwrap();
            // phrases are 1, 11, 111, ...: k full phrases cover k(k+1)/2
            let k = phrases.len();
            let covered: usize = k * (k + 1) / 2;
            assert!(covered <= m);
            match tail {
                None => assert_eq!(covered, m),
                Some(idx) => {
                    // the partial match is a strict prefix of an existing
                    // phrase chain: remaining symbols = m - covered
                    assert!(covered < m);
                    assert!(idx >= 1);
                }
            }
            let expected = (2.0 * m as f64).sqrt();
            assert!((k as f64) <= expected + 2.0 && (k as f64) >= expected - 2.0);
            round_trip(&codec, &x);
        }
    }

    #[test]
    fn ends_inside_match_uses_partial_record() {
        let codec = Lz78Codec::new(Alphabet::Positive);
        // phrases become 1 then 1,1; the final 1 ends inside phrase 1
        let x = [1u64, 1, 1, 1];
        let (phrases, tail) = codec.parse(&x).unwrap();
        assert_eq!(phrases, vec![(0, 1), (1, 1)]);
        assert_eq!(tail, Some(1));
        round_trip(&codec, &x);
    }

    #[test]
    fn binary_alphabet_round_trips_via_shift() {
        let codec = Lz78Codec::new(Alphabet::Finite(2));
        let mut rng = SplitMix64::new(3);
        for _ in 0..50 {
            let n = 1 + (rng.next_u64() % 64) as usize;
            let x: Vec<Symbol> = (0..n).map(|_| rng.next_u64() & 1).collect();
            round_trip(&codec, &x);
        }
        assert!(codec.encode_body(&[0, 1, 2]).is_err());
    }

    #[test]
    fn round_trips_across_measure_families() {
        let nat = Lz78Codec::new(Alphabet::Positive);
        let bin = Lz78Codec::new(Alphabet::Finite(2));
        let geo = GeometricMixture::new();
        let lap = LaplaceMixture::new();
        let ber = BernoulliSource::from_parts(1, 4).unwrap();
        for seed in 0..300u64 {
            let n = 1 + (seed % 50) as usize;
            round_trip(&nat, &sample_sequence(&geo, n, seed).unwrap());
            round_trip(&bin, &sample_sequence(&lap, n, seed).unwrap());
            round_trip(&bin, &sample_sequence(&ber, n, seed).unwrap());
        }
    }

    #[test]
    fn prefix_lengths_equal_fresh_encodings() {
        let codec = Lz78Codec::new(Alphabet::Positive);
        let x = sample_sequence(&GeometricMixture::new(), 120, 9).unwrap();
        let lens = codec.prefix_lengths(&x).unwrap();
        for i in 0..x.len() {
            assert_eq!(
                lens[i],
                codec.encode_body(&x[..=i]).unwrap().len() as u64,
                "prefix {}",
                i + 1
            );
        }
    }

    #[test]
    fn truncated_and_malformed_streams() {
        let codec = Lz78Codec::new(Alphabet::Positive);
        let body = codec.encode_body(&[1, 2, 3]).unwrap();
        let cut: BitString = body.iter().take(body.len() - 1).collect();
        let mut cur = BitCursor::new(&cut);
        assert!(matches!(
            codec.decode_body(3, &mut cur),
            Err(Error::Truncated) | Err(Error::Malformed(_))
        ));

        // a record referring to a not-yet-defined phrase index
        let mut bogus = BitString::new();
        bogus.push(false);
        bogus.extend(&IntegerCode::omega().encode(5).unwrap()); // index 4
        bogus.extend(&IntegerCode::omega().encode(1).unwrap());
        let mut cur = BitCursor::new(&bogus);
        assert!(matches!(
            codec.decode_body(2, &mut cur),
            Err(Error::Malformed(_))
        ));
    }

    #[test]
    fn per_symbol_lengths() {
        let omega = IntegerCode::omega();
        assert_eq!(per_symbol_length(&omega, &[1, 1, 1]).unwrap(), 3);
        assert_eq!(per_symbol_length(&omega, &[4]).unwrap(), 6);
        assert_eq!(per_symbol_length(&omega, &[]).unwrap(), 0);
        assert_eq!(per_symbol_length(&omega, &[0]), Err(Error::ZeroValue));
    }

    #[test]
    fn per_symbol_codec_round_trip_and_lengths() {
        let nat = PerSymbolCodec::new(Alphabet::Positive);
        let bin = PerSymbolCodec::new(Alphabet::Finite(2));
        let mut rng = SplitMix64::new(17);
        for _ in 0..50 {
            let n = (rng.next_u64() % 40) as usize;
            let x: Vec<Symbol> = (0..n).map(|_| 1 + rng.next_u64() % 7).collect();
            let body = nat.encode_body(&x).unwrap();
            assert_eq!(body.len() as u64, nat.total_len(&x).unwrap());
            assert_eq!(
                nat.total_len(&x).unwrap(),
                per_symbol_length(&nat.symbol_code(), &x).unwrap()
            );
            let mut cur = BitCursor::new(&body);
            assert_eq!(nat.decode_body(n, &mut cur).unwrap(), x);

            let b: Vec<Symbol> = (0..n).map(|_| rng.next_u64() & 1).collect();
            let body = bin.encode_body(&b).unwrap();
            let mut cur = BitCursor::new(&body);
            assert_eq!(bin.decode_body(n, &mut cur).unwrap(), b);
        }
    }
}
