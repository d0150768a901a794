//! Binary blocks and the elementary word operations.
//!
//! Positions are 1-based throughout the public API. A block is packed
//! LSB-first into 64-bit words, so position i lives at bit (i-1) % 64 of
//! word (i-1) / 64. Bits past the logical length are kept at zero; equality
//! and hashing rely on that invariant.

use crate::{Config, Error, Result};
use smallvec::SmallVec;
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Block {
    words: SmallVec<[u64; 1]>,
    len: u32,
}

impl Block {
    pub fn empty() -> Block {
        Block::default()
    }

    pub fn zeros(len: u32) -> Block {
        let words = smallvec::smallvec![0u64; Self::word_count(len)];
        Block { words, len }
    }

    fn word_count(len: u32) -> usize {
        (len as usize + 63) / 64
    }

    /// Builds a block of length `len <= 64` from LSB-first packed bits.
    pub fn from_packed(bits: u64, len: u32) -> Block {
        assert!(len <= 64, "packed blocks are at most 64 long");
        let masked = if len == 64 {
            bits
        } else {
            bits & ((1u64 << len) - 1)
        };
        if len == 0 {
            Block::empty()
        } else {
            Block {
                words: smallvec::smallvec![masked],
                len,
            }
        }
    }

    /// LSB-first packed bits; only valid for blocks of length <= 64.
    pub fn packed(&self) -> u64 {
        assert!(self.len <= 64, "block too long to pack");
        self.words.first().copied().unwrap_or(0)
    }

    pub fn from_fn(len: u32, mut f: impl FnMut(u32) -> bool) -> Block {
        let mut b = Block::zeros(len);
        for i in 1..=len {
            if f(i) {
                b.set(i, true);
            }
        }
        b
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Symbol at 1-based position i.
    pub fn bit(&self, i: u32) -> bool {
        assert!(i >= 1 && i <= self.len, "position {i} out of 1..={}", self.len);
        let idx = (i - 1) as usize;
        (self.words[idx / 64] >> (idx % 64)) & 1 == 1
    }

    pub fn set(&mut self, i: u32, value: bool) {
        assert!(i >= 1 && i <= self.len, "position {i} out of 1..={}", self.len);
        let idx = (i - 1) as usize;
        if value {
            self.words[idx / 64] |= 1u64 << (idx % 64);
        } else {
            self.words[idx / 64] &= !(1u64 << (idx % 64));
        }
    }

    pub fn push(&mut self, value: bool) {
        if self.len as usize == self.words.len() * 64 {
            self.words.push(0);
        }
        self.len += 1;
        if value {
            let idx = (self.len - 1) as usize;
            self.words[idx / 64] |= 1u64 << (idx % 64);
        }
    }

    pub fn ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn ones_positions(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.ones() as usize);
        for (w, &word) in self.words.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let b = bits.trailing_zeros();
                out.push(w as u32 * 64 + b + 1);
                bits &= bits - 1;
            }
        }
        out
    }

    /// Zeros before the first one; the whole length if there is no one.
    pub fn leading_zeros(&self) -> u32 {
        for (w, &word) in self.words.iter().enumerate() {
            if word != 0 {
                return (w as u32 * 64 + word.trailing_zeros()).min(self.len);
            }
        }
        self.len
    }

    /// Zeros after the last one; the whole length if there is no one.
    pub fn trailing_zeros(&self) -> u32 {
        for (w, &word) in self.words.iter().enumerate().rev() {
            if word != 0 {
                let last = w as u32 * 64 + (63 - word.leading_zeros());
                return self.len - last - 1;
            }
        }
        self.len
    }

    /// Splits into leading zeros, the 1-to-1 core, and trailing zeros.
    /// An all-zero block yields an empty core.
    pub fn trim_zeros(&self) -> (u32, Block, u32) {
        if self.ones() == 0 {
            return (self.len, Block::empty(), 0);
        }
        let a = self.leading_zeros();
        let b = self.trailing_zeros();
        (a, subblock(self, a + 1, self.len - b), b)
    }

    /// Cyclic repetition of this nonempty block out to length n.
    pub fn repeat_to(&self, n: u32) -> Block {
        assert!(!self.is_empty(), "cannot repeat the empty block");
        Block::from_fn(n, |i| self.bit((i - 1) % self.len + 1))
    }
}

impl Ord for Block {
    fn cmp(&self, other: &Self) -> Ordering {
        let common = self.words.len().min(other.words.len());
        for idx in 0..common {
            let a = self.words[idx].reverse_bits();
            let b = other.words[idx].reverse_bits();
            if a != b {
                return a.cmp(&b);
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for Block {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.len {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for Block {
    type Err = Error;

    fn from_str(s: &str) -> Result<Block> {
        let mut b = Block::zeros(0);
        for (k, c) in s.chars().enumerate() {
            match c {
                '0' => b.push(false),
                '1' => b.push(true),
                _ => {
                    return Err(Error::Config(format!(
                        "invalid symbol {c:?} at position {} in block string",
                        k + 1
                    )))
                }
            }
        }
        Ok(b)
    }
}

impl serde::Serialize for Block {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Block {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Block, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses a block from its symbol string, panicking on bad input. Test and
/// fixture helper.
pub fn blk(s: &str) -> Block {
    s.parse().expect("valid block literal")
}

pub fn concat(u: &Block, v: &Block) -> Block {
    let mut out = u.clone();
    for i in 1..=v.len() {
        out.push(v.bit(i));
    }
    out
}

/// Number of occurrences of symbol `a` (0 or 1) in `w`.
pub fn count_symbol(w: &Block, a: u8) -> u64 {
    assert!(a <= 1, "binary alphabet");
    if a == 1 {
        w.ones() as u64
    } else {
        (w.len() - w.ones()) as u64
    }
}

/// The subblock w_[i, j] at 1-based positions, inclusive on both ends.
pub fn subblock(w: &Block, i: u32, j: u32) -> Block {
    assert!(i >= 1 && i <= j && j <= w.len(), "subblock range {i}..={j} out of 1..={}", w.len());
    Block::from_fn(j - i + 1, |p| w.bit(i + p - 1))
}

/// True when w is "1" or starts and ends with "1".
pub fn is_from_1_to_1(w: &Block) -> bool {
    w.len() >= 1 && w.bit(1) && w.bit(w.len())
}

/// Every binary block of length n in lexicographic order.
pub fn all_blocks(n: u32, cfg: &Config) -> Result<Vec<Block>> {
    if n > cfg.enum_cap {
        return Err(Error::CapExceeded {
            what: "enumeration length",
            needed: n as u64,
            cap: cfg.enum_cap as u64,
        });
    }
    let count = 1u64 << n;
    if count > cfg.block_budget {
        return Err(Error::CapExceeded {
            what: "block budget",
            needed: count,
            cap: cfg.block_budget,
        });
    }
    Ok((0..count).map(|key| Block::from_packed(key_to_bits(key, n), n)).collect())
}

/// Lexicographic rank of packed bits among blocks of length n <= 64.
/// Position 1 is the most significant digit of the rank.
pub(crate) fn lex_key(bits: u64, n: u32) -> u64 {
    if n == 0 {
        0
    } else {
        bits.reverse_bits() >> (64 - n)
    }
}

/// Inverse of `lex_key`.
pub(crate) fn key_to_bits(key: u64, n: u32) -> u64 {
    if n == 0 {
        0
    } else {
        (key << (64 - n)).reverse_bits()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn concat_basics() {
        assert_eq!(concat(&blk("10"), &blk("01")), blk("1001"));
        assert_eq!(concat(&blk(""), &blk("101")), blk("101"));
        let one = blk("1");
        let three = concat(&concat(&one, &one), &one);
        assert_eq!(three, blk("111"));
    }

    #[test]
    fn count_symbol_basics() {
        assert_eq!(count_symbol(&blk("10110"), 1), 3);
        assert_eq!(count_symbol(&blk("0000"), 1), 0);
        assert_eq!(count_symbol(&blk("101"), 1), 2);
        assert_eq!(count_symbol(&blk("10110"), 0), 2);
        assert_eq!(count_symbol(&blk(""), 0), 0);
    }

    #[test]
    fn subblock_basics() {
        assert_eq!(subblock(&blk("10110"), 2, 4), blk("011"));
        assert_eq!(subblock(&blk("10110"), 1, 1), blk("1"));
        assert_eq!(subblock(&blk("10110"), 1, 5), blk("10110"));
    }

    #[test]
    fn from_1_to_1_basics() {
        assert!(is_from_1_to_1(&blk("1")));
        assert!(is_from_1_to_1(&blk("1001")));
        assert!(!is_from_1_to_1(&blk("10")));
        assert!(!is_from_1_to_1(&blk("0")));
        assert!(!is_from_1_to_1(&blk("")));
    }

    #[test]
    fn all_blocks_small() {
        let cfg = Config::default();
        let b0 = all_blocks(0, &cfg).unwrap();
        assert_eq!(b0, vec![Block::empty()]);
        let b1 = all_blocks(1, &cfg).unwrap();
        assert_eq!(b1, vec![blk("0"), blk("1")]);
        let b2 = all_blocks(2, &cfg).unwrap();
        assert_eq!(b2, vec![blk("00"), blk("01"), blk("10"), blk("11")]);
    }

    #[test]
    fn all_blocks_cap() {
        let cfg = Config::default();
        match all_blocks(25, &cfg) {
            Err(Error::CapExceeded { what, .. }) => assert_eq!(what, "enumeration length"),
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn all_blocks_lex_sorted() {
        let cfg = Config::default();
        for n in 0..=8 {
            let blocks = all_blocks(n, &cfg).unwrap();
            assert_eq!(blocks.len(), 1 << n);
            let mut strings: Vec<String> = blocks.iter().map(|b| b.to_string()).collect();
            let sorted = {
                let mut s = strings.clone();
                s.sort();
                s
            };
            assert_eq!(strings, sorted, "lex order at n={n}");
            strings.dedup();
            assert_eq!(strings.len(), 1 << n);
        }
    }

    #[test]
    fn block_order_matches_string_order() {
        let cfg = Config::default();
        let blocks = all_blocks(6, &cfg).unwrap();
        for u in &blocks {
            for v in &blocks {
                assert_eq!(u.cmp(v), u.to_string().cmp(&v.to_string()));
            }
        }
        // Mixed lengths follow prefix order.
        assert!(blk("10") < blk("101"));
        assert!(blk("101") < blk("11"));
        assert!(blk("") < blk("0"));
    }

    #[test]
    fn packing_round_trip() {
        for n in 0..=10u32 {
            for key in 0..(1u64 << n) {
                let bits = key_to_bits(key, n);
                assert_eq!(lex_key(bits, n), key);
                let b = Block::from_packed(bits, n);
                assert_eq!(b.len(), n);
                assert_eq!(b.packed(), bits);
            }
        }
    }

    #[test]
    fn trims_and_positions() {
        let w = blk("0010100");
        assert_eq!(w.leading_zeros(), 2);
        assert_eq!(w.trailing_zeros(), 2);
        assert_eq!(w.ones_positions(), vec![3, 5]);
        let (a, core, b) = w.trim_zeros();
        assert_eq!((a, core.clone(), b), (2, blk("101"), 2));
        assert!(is_from_1_to_1(&core));
        let (a, core, b) = blk("000").trim_zeros();
        assert_eq!((a, core, b), (3, Block::empty(), 0));
    }

    #[test]
    fn long_blocks_cross_word_boundary() {
        let mut w = Block::zeros(0);
        for i in 1..=130u32 {
            w.push(i % 3 == 0);
        }
        assert_eq!(w.len(), 130);
        assert_eq!(w.ones(), 43);
        assert_eq!(w.bit(63), true);
        assert_eq!(w.bit(64), false);
        assert_eq!(w.bit(66), true);
        assert_eq!(subblock(&w, 60, 70), blk("10010010010"));
        let s = w.to_string();
        assert_eq!(s.parse::<Block>().unwrap(), w);
    }

    #[test]
    fn repeat_to_cycles() {
        assert_eq!(blk("10").repeat_to(5), blk("10101"));
        assert_eq!(blk("100").repeat_to(7), blk("1001001"));
    }
}
