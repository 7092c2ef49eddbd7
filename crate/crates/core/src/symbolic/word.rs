use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite word over {0, 1}.
///
/// Words index cylinders, Haar functions and de Bruijn arcs. Their integer
/// encoding is lexicographic: the first symbol is the most significant bit,
/// so `index()` enumerates Σ_n in dictionary order.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    bits: Vec<u8>,
}

impl Word {
    pub fn empty() -> Self {
        Word { bits: Vec::new() }
    }

    /// Builds a word from symbols, rejecting anything outside {0, 1}.
    pub fn from_symbols(symbols: &[u8]) -> Result<Self> {
        if let Some(bad) = symbols.iter().find(|&&s| s > 1) {
            return Err(Error::usage(format!("symbol {bad} is not binary")));
        }
        Ok(Word {
            bits: symbols.to_vec(),
        })
    }

    /// The word of length `len` whose lexicographic index is `index`.
    pub fn from_index(index: u64, len: usize) -> Self {
        debug_assert!(len < 64 && index < (1u64 << len));
        let bits = (0..len)
            .map(|i| ((index >> (len - 1 - i)) & 1) as u8)
            .collect();
        Word { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn symbols(&self) -> &[u8] {
        &self.bits
    }

    /// Symbol at 0-based position `i`.
    pub fn get(&self, i: usize) -> Option<u8> {
        self.bits.get(i).copied()
    }

    pub fn last(&self) -> Option<u8> {
        self.bits.last().copied()
    }

    /// Lexicographic index within Σ_len. Only defined for len < 64.
    pub fn index(&self) -> u64 {
        debug_assert!(self.len() < 64);
        self.bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    /// Position in the breadth-first enumeration of Σ_* (empty word is 1).
    /// Unique across lengths, which makes it a convenient stream key.
    pub fn heap_index(&self) -> u64 {
        (1u64 << self.len()) | self.index()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut bits = Vec::with_capacity(self.len() + other.len());
        bits.extend_from_slice(&self.bits);
        bits.extend_from_slice(&other.bits);
        Word { bits }
    }

    pub fn push(&mut self, symbol: u8) {
        debug_assert!(symbol <= 1);
        self.bits.push(symbol);
    }

    pub fn with(&self, symbol: u8) -> Word {
        let mut w = self.clone();
        w.push(symbol);
        w
    }

    pub fn prefix(&self, k: usize) -> Word {
        Word {
            bits: self.bits[..k.min(self.len())].to_vec(),
        }
    }

    /// Whether `self` is a prefix of `other`, i.e. `[other] ⊆ [self]`.
    pub fn is_prefix_of(&self, other: &Word) -> bool {
        other.bits.starts_with(&self.bits)
    }

    /// Cyclic rotation moving the first `k` symbols to the end.
    pub fn rotate(&self, k: usize) -> Word {
        if self.is_empty() {
            return self.clone();
        }
        let k = k % self.len();
        let mut bits = self.bits[k..].to_vec();
        bits.extend_from_slice(&self.bits[..k]);
        Word { bits }
    }

    /// The first `len` symbols of the infinite word `self self self ...`.
    pub fn periodic_prefix(&self, len: usize) -> Word {
        assert!(!self.is_empty(), "periodic extension of the empty word");
        Word {
            bits: self.bits.iter().copied().cycle().take(len).collect(),
        }
    }

    /// Iterates over all words of length `n` in lexicographic order.
    pub fn all_of_length(n: usize) -> impl Iterator<Item = Word> {
        assert!(n < 64);
        (0..1u64 << n).map(move |i| Word::from_index(i, n))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("e");
        }
        for &b in &self.bits {
            f.write_str(if b == 0 { "0" } else { "1" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "e" {
            return Ok(Word::empty());
        }
        if s.is_empty() {
            return Err(Error::usage("empty string is not a word; use \"e\""));
        }
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::usage(format!("invalid symbol {other:?} in word {s:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(Word { bits })
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Outcome of comparing two equal-length prefixes of infinite words.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Disagreement {
    /// 1-based position of the first differing symbol.
    At(usize),
    /// The prefixes agree on all `m` symbols; the true position is beyond `m`.
    AgreeThrough(usize),
}

/// Position of first disagreement `x † y` of two prefixes.
pub fn first_disagreement(x: &Word, y: &Word) -> Result<Disagreement> {
    if x.len() != y.len() {
        return Err(Error::usage(format!(
            "prefix lengths differ ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    if x.is_empty() {
        return Err(Error::usage("prefixes must have length at least 1"));
    }
    Ok(x.symbols()
        .iter()
        .zip(y.symbols())
        .position(|(a, b)| a != b)
        .map(|i| Disagreement::At(i + 1))
        .unwrap_or(Disagreement::AgreeThrough(x.len())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn first_disagreement_examples() {
        assert_eq!(first_disagreement(&w("011"), &w("000")).unwrap(), Disagreement::At(2));
        assert_eq!(
            first_disagreement(&w("010"), &w("010")).unwrap(),
            Disagreement::AgreeThrough(3)
        );
        assert_eq!(first_disagreement(&w("10"), &w("00")).unwrap(), Disagreement::At(1));
    }

    #[test]
    fn first_disagreement_rejects_length_mismatch() {
        assert!(matches!(
            first_disagreement(&w("01"), &w("011")),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn empty_word_serializes_as_e() {
        assert_eq!(Word::empty().to_string(), "e");
        assert_eq!(w("e"), Word::empty());
        let json = serde_json::to_string(&w("0110")).unwrap();
        assert_eq!(json, "\"0110\"");
        assert_eq!(serde_json::from_str::<Word>(&json).unwrap(), w("0110"));
        assert!("012".parse::<Word>().is_err());
        assert!("".parse::<Word>().is_err());
    }

    #[test]
    fn index_is_lexicographic() {
        let words: Vec<String> = Word::all_of_length(2).map(|w| w.to_string()).collect();
        assert_eq!(words, ["00", "01", "10", "11"]);
        assert_eq!(w("110").index(), 6);
        assert_eq!(Word::from_index(6, 3), w("110"));
        assert_eq!(Word::empty().heap_index(), 1);
        assert_eq!(w("0").heap_index(), 2);
        assert_eq!(w("11").heap_index(), 7);
    }

    #[test]
    fn concat_identity_and_associativity() {
        let (a, b, c) = (w("01"), w("1"), w("001"));
        assert_eq!(a.concat(&Word::empty()), a);
        assert_eq!(Word::empty().concat(&a), a);
        assert_eq!(a.concat(&b).concat(&c), a.concat(&b.concat(&c)));
        assert_eq!(a.concat(&b).len(), 3);
    }

    #[test]
    fn rotation_and_periodic_prefix() {
        assert_eq!(w("0011").rotate(1), w("0110"));
        assert_eq!(w("01").periodic_prefix(5), w("01010"));
    }
}
