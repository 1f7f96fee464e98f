//! Fixed-length bit strings used for concepts, restricted patterns and
//! one-inclusion-graph vertices.
//!
//! Coordinate `i` is stored most-significant-bit first inside word `i / 64`,
//! so the derived `Ord` on equal-length strings is the lexicographic order of
//! the bit sequences (coordinate 0 compared first).

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    len: usize,
    words: Vec<u64>,
}

#[inline]
fn mask_of(i: usize) -> u64 {
    1u64 << (63 - (i % 64))
}

impl BitString {
    pub fn zeros(len: usize) -> Self {
        BitString {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut b = Self::zeros(len);
        for i in 0..len {
            b.set(i, true);
        }
        b
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let bits: Vec<bool> = bits.into_iter().collect();
        let mut b = Self::zeros(bits.len());
        for (i, v) in bits.into_iter().enumerate() {
            if v {
                b.set(i, true);
            }
        }
        b
    }

    /// The `rank`-th string of length `len` in lexicographic order.
    /// Requires `len <= 64`.
    pub fn from_lex_rank(len: usize, rank: u64) -> Self {
        assert!(len <= 64, "lex rank only defined for len <= 64");
        let mut b = Self::zeros(len);
        for i in 0..len {
            if (rank >> (len - 1 - i)) & 1 == 1 {
                b.set(i, true);
            }
        }
        b
    }

    /// Inverse of [`BitString::from_lex_rank`].
    pub fn lex_rank(&self) -> u64 {
        assert!(self.len <= 64, "lex rank only defined for len <= 64");
        (0..self.len).fold(0u64, |acc, i| (acc << 1) | self.get(i) as u64)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] & mask_of(i) != 0
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: bool) {
        debug_assert!(i < self.len);
        if v {
            self.words[i / 64] |= mask_of(i);
        } else {
            self.words[i / 64] &= !mask_of(i);
        }
    }

    pub fn flipped(&self, i: usize) -> Self {
        let mut b = self.clone();
        b.words[i / 64] ^= mask_of(i);
        b
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn hamming_distance(&self, other: &Self) -> usize {
        assert_eq!(self.len, other.len, "length mismatch");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Projection onto the listed coordinates, in the listed order.
    pub fn project(&self, coords: &[usize]) -> Self {
        let mut b = Self::zeros(coords.len());
        for (j, &i) in coords.iter().enumerate() {
            if self.get(i) {
                b.set(j, true);
            }
        }
        b
    }

    /// Whether the first `prefix.len()` coordinates equal `prefix`.
    pub fn starts_with(&self, prefix: &BitString) -> bool {
        prefix.len <= self.len && (0..prefix.len).all(|i| self.get(i) == prefix.get(i))
    }

    pub fn to_bools(&self) -> Vec<bool> {
        self.iter().collect()
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString(\"{self}\")")
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for BitString {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(format!("invalid bit character {other:?}")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitString::from_bools)
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter().map(|b| b as u8))
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw: Vec<u8> = Vec::deserialize(deserializer)?;
        raw.iter()
            .map(|&v| match v {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(serde::de::Error::custom(format!("label must be 0 or 1, got {other}"))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitString::from_bools)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_is_lexicographic_across_word_boundaries() {
        let mut a = BitString::zeros(70);
        let mut b = BitString::zeros(70);
        a.set(69, true);
        b.set(3, true);
        assert!(a < b);
        a.set(3, true);
        assert!(a > b);
    }

    #[test]
    fn lex_rank_round_trip() {
        for r in 0..16u64 {
            let b = BitString::from_lex_rank(4, r);
            assert_eq!(b.lex_rank(), r);
        }
        assert_eq!(BitString::from_lex_rank(3, 1).to_string(), "001");
        assert!(BitString::from_lex_rank(5, 3) < BitString::from_lex_rank(5, 4));
    }

    #[test]
    fn project_and_prefix() {
        let c: BitString = "0011".parse().unwrap();
        assert_eq!(c.project(&[3, 0]).to_string(), "10");
        assert!(c.starts_with(&"00".parse().unwrap()));
        assert!(!c.starts_with(&"01".parse().unwrap()));
        assert_eq!(c.hamming_distance(&c.flipped(2)), 1);
    }

    #[test]
    fn serde_as_label_array() {
        let c: BitString = "101".parse().unwrap();
        assert_eq!(serde_json::to_string(&c).unwrap(), "[1,0,1]");
        let back: BitString = serde_json::from_str("[1,0,1]").unwrap();
        assert_eq!(back, c);
        assert!(serde_json::from_str::<BitString>("[2]").is_err());
    }
}
