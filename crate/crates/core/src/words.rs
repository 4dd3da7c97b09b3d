//! Binary offset words and the Koch word family.
//!
//! A [`BinaryWord`] assigns one offset bit to each consecutive stitched line
//! of a direction. Words are stored packed, so even `koch_word(8)` (2187
//! letters) and its periodic extension over a large window stay cheap.

use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use bitvec::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite word over `{0, 1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BinaryWord {
    bits: BitVec<u64, Lsb0>,
}

impl BinaryWord {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        Self {
            bits: bits.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Letter at `index`, as 0 or 1.
    pub fn letter(&self, index: usize) -> u8 {
        self.bits[index] as u8
    }

    /// Letter of the infinite periodic extension at any (possibly negative)
    /// position, using floored modulo.
    ///
    /// Panics on the empty word.
    pub fn letter_periodic(&self, position: i64) -> u8 {
        assert!(!self.is_empty(), "periodic lookup into an empty word");
        let idx = position.rem_euclid(self.len() as i64) as usize;
        self.letter(idx)
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        self.bits.iter().by_vals().map(u8::from)
    }

    pub fn concat(&self, other: &BinaryWord) -> BinaryWord {
        let mut bits = self.bits.clone();
        bits.extend_from_bitslice(&other.bits);
        BinaryWord { bits }
    }

    /// Smallest `p ≥ 1` such that the periodic extension of the word has
    /// period `p` (always a divisor of the length).
    pub fn minimal_period(&self) -> usize {
        let n = self.len();
        (1..=n)
            .filter(|p| n.is_multiple_of(*p))
            .find(|&p| (p..n).all(|i| self.bits[i] == self.bits[i - p]))
            .unwrap_or(n)
    }
}

/// Letterwise interchange `0 ↔ 1`.
pub fn complement(w: &BinaryWord) -> BinaryWord {
    BinaryWord {
        bits: !w.bits.clone(),
    }
}

/// The word read backwards.
pub fn reverse(w: &BinaryWord) -> BinaryWord {
    let mut bits = w.bits.clone();
    bits.reverse();
    BinaryWord { bits }
}

/// `w` followed by its reversal: one period of the forwards-and-backwards
/// stitching instructions.
pub fn palindromic_period(w: &BinaryWord) -> Result<BinaryWord> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(w.concat(&reverse(w)))
}

/// Order of a Koch word / snowflake iterate, `n ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct KochOrder(u32);

impl KochOrder {
    /// Largest order accepted; `|w_n| = 3^(n-1)` must fit comfortably in memory.
    pub const MAX: u32 = 16;

    pub fn new(n: i64) -> Result<Self> {
        if n < 1 || n > Self::MAX as i64 {
            return Err(Error::InvalidOrder(n));
        }
        Ok(Self(n as u32))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl TryFrom<u32> for KochOrder {
    type Error = Error;
    fn try_from(n: u32) -> Result<Self> {
        Self::new(n as i64)
    }
}

impl From<KochOrder> for u32 {
    fn from(k: KochOrder) -> u32 {
        k.0
    }
}

impl fmt::Display for KochOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn koch_cache() -> &'static Mutex<Vec<BinaryWord>> {
    static CACHE: OnceLock<Mutex<Vec<BinaryWord>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(vec![BinaryWord::from_bits([false])]))
}

/// The Koch word `w_n`: `w_1 = 0`, `w_{n+1} = rev(comp(w_n)) comp(w_n) w_n`.
///
/// Computed iteratively and memoized for the lifetime of the process.
pub fn koch_word(order: KochOrder) -> BinaryWord {
    let n = order.get() as usize;
    let mut cache = koch_cache().lock().unwrap_or_else(|e| e.into_inner());
    while cache.len() < n {
        let prev = cache.last().expect("cache seeded with w_1");
        let comp = complement(prev);
        let next = reverse(&comp).concat(&comp).concat(prev);
        cache.push(next);
    }
    cache[n - 1].clone()
}

impl FromStr for BinaryWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut bits = BitVec::with_capacity(s.len());
        for (position, ch) in s.chars().enumerate() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => {
                    return Err(Error::InvalidLetter {
                        position,
                        letter: other,
                    })
                }
            }
        }
        Ok(BinaryWord { bits })
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.bits.iter().by_vals() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryWord(\"{}\")", self)
    }
}

impl Serialize for BinaryWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BinaryWord {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
