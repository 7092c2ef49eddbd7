use std::fmt;

use serde::{Deserialize, Serialize};

use super::word::Word;
use crate::error::{Error, Result};

/// A periodic point of the shift, described by a repeating block.
///
/// Equality is structural; use [`PeriodicPoint::same_orbit`] to compare orbits.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PeriodicPoint {
    repeating_word: Word,
    canonical: bool,
}

impl PeriodicPoint {
    /// The point `block block block ...` exactly as given.
    pub fn new(block: Word) -> Result<Self> {
        if block.is_empty() {
            return Err(Error::usage("periodic point needs a non-empty repeating word"));
        }
        Ok(PeriodicPoint {
            repeating_word: block,
            canonical: false,
        })
    }

    /// The canonical representative of the orbit of `block^∞`: the least
    /// rotation of its primitive root.
    pub fn canonical(block: Word) -> Result<Self> {
        Ok(Self::new(block)?.canonicalize())
    }

    pub fn canonicalize(&self) -> Self {
        let root = primitive_root(&self.repeating_word);
        PeriodicPoint {
            repeating_word: least_rotation(&root),
            canonical: true,
        }
    }

    pub fn repeating_word(&self) -> &Word {
        &self.repeating_word
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical
    }

    /// Minimal period of the point.
    pub fn period(&self) -> usize {
        primitive_root(&self.repeating_word).len()
    }

    pub fn same_orbit(&self, other: &PeriodicPoint) -> bool {
        self.canonicalize().repeating_word == other.canonicalize().repeating_word
    }

    /// Averages `value_of_window` over one period of the orbit, where each
    /// point of the orbit is represented by its length-`depth` prefix.
    pub fn orbit_average(&self, depth: usize, mut value_of_window: impl FnMut(&Word) -> f64) -> f64 {
        let root = primitive_root(&self.repeating_word);
        let p = root.len();
        let stream = root.periodic_prefix(p + depth);
        let total: f64 = (0..p)
            .map(|j| {
                let window = Word::from_symbols(&stream.symbols()[j..j + depth]).expect("binary");
                value_of_window(&window)
            })
            .sum();
        total / p as f64
    }
}

impl fmt::Display for PeriodicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})^∞", self.repeating_word)
    }
}

/// Shortest word `r` with `word = r^k`.
pub fn primitive_root(word: &Word) -> Word {
    let n = word.len();
    let s = word.symbols();
    (1..=n)
        .filter(|p| n.is_multiple_of(*p))
        .find(|&p| (p..n).all(|i| s[i] == s[i - p]))
        .map(|p| word.prefix(p))
        .unwrap_or_else(|| word.clone())
}

/// Lexicographically least rotation.
pub fn least_rotation(word: &Word) -> Word {
    (0..word.len().max(1))
        .map(|k| word.rotate(k))
        .min()
        .unwrap_or_default()
}

/// All Lyndon words (canonical primitive blocks) of length 1..=max_len, via
/// Duval's generation algorithm. Each periodic orbit of period ≤ max_len
/// appears exactly once.
pub fn lyndon_words(max_len: usize) -> Vec<Word> {
    let mut out = Vec::new();
    if max_len == 0 {
        return out;
    }
    let mut w: Vec<u8> = vec![0];
    loop {
        out.push(Word::from_symbols(&w).expect("binary"));
        let m = w.len();
        while w.len() < max_len {
            let c = w[w.len() - m];
            w.push(c);
        }
        while w.last() == Some(&1) {
            w.pop();
        }
        match w.last_mut() {
            Some(last) => *last = 1,
            None => break,
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn canonical_form_is_least_rotation_of_root() {
        let p = PeriodicPoint::canonical(w("1010")).unwrap();
        assert_eq!(p.repeating_word(), &w("01"));
        assert_eq!(p.period(), 2);
        assert!(p.is_canonical());
        assert_eq!(PeriodicPoint::canonical(w("110")).unwrap().repeating_word(), &w("011"));
        assert_eq!(PeriodicPoint::canonical(w("111")).unwrap().repeating_word(), &w("1"));
    }

    #[test]
    fn empty_block_is_rejected() {
        assert!(PeriodicPoint::new(Word::empty()).is_err());
    }

    #[test]
    fn lyndon_counts_match_necklace_formula() {
        // number of binary Lyndon words of length n: 2, 1, 2, 3, 6, 9, 18, 30
        let words = lyndon_words(8);
        let mut counts = [0usize; 9];
        for x in &words {
            counts[x.len()] += 1;
            assert_eq!(&least_rotation(x), x);
            assert_eq!(&primitive_root(x), x);
        }
        assert_eq!(&counts[1..], &[2, 1, 2, 3, 6, 9, 18, 30]);
    }

    #[test]
    fn orbit_average_of_first_symbol() {
        let p = PeriodicPoint::canonical(w("011")).unwrap();
        let avg = p.orbit_average(1, |x| x.get(0).unwrap() as f64);
        assert!((avg - 2.0 / 3.0).abs() < 1e-15);
    }
}
