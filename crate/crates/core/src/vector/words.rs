use std::fmt;

use serde::{Deserialize, Serialize};

use super::RowVec;
use crate::algebra::Scalar;
use crate::error::{out_of_range, Error, Result};

/// Finite 0/1 sequence.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct BitWord {
    bits: Vec<u8>,
}

impl BitWord {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if let Some(bad) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::Parse(format!("bit word entry {bad} is not 0 or 1")));
        }
        Ok(BitWord { bits })
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    /// 1-based access.
    pub fn get(&self, j: usize) -> Option<u8> {
        j.checked_sub(1).and_then(|i| self.bits.get(i)).copied()
    }
}

impl fmt::Display for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            f.write_str(if *b == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitWord({self})")
    }
}

impl TryFrom<String> for BitWord {
    type Error = Error;

    fn try_from(text: String) -> Result<Self> {
        let bits = text
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::Parse(format!("bad bit `{other}`"))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Ok(BitWord { bits })
    }
}

impl From<BitWord> for String {
    fn from(word: BitWord) -> String {
        word.to_string()
    }
}

/// Fibonacci numbers with `f_1 = f_2 = 1` (and `f_0 = 0`).
pub fn fib(n: u32) -> u64 {
    let (mut a, mut b) = (0u64, 1u64);
    for _ in 0..n {
        let next = a + b;
        a = b;
        b = next;
    }
    a
}

/// Prefix of the fixed point of `0 → 01, 1 → 0`.
pub fn fib_word_prefix(len: usize) -> BitWord {
    let mut word = vec![0u8];
    while word.len() < len {
        word = word.iter().flat_map(|&b| if b == 0 { vec![0, 1] } else { vec![0] }).collect();
    }
    word.truncate(len);
    BitWord { bits: word }
}

/// The Fibonacci word with each 0 replaced by `f_{k-1}` zeros and each 1 by
/// `f_{k-2}` ones, truncated to `len`.
pub fn fib_word_generalized(k: u32, len: usize) -> Result<BitWord> {
    if k < 3 {
        return Err(out_of_range(format!("generalized word order {k}"), "k >= 3"));
    }
    let zeros = fib(k - 1) as usize;
    let ones = fib(k - 2) as usize;
    let mut bits = Vec::with_capacity(len);
    for &b in fib_word_prefix(len).bits() {
        if bits.len() >= len {
            break;
        }
        if b == 0 {
            bits.extend(std::iter::repeat_n(0, zeros));
        } else {
            bits.extend(std::iter::repeat_n(1, ones));
        }
    }
    bits.truncate(len);
    Ok(BitWord { bits })
}

/// `b ⌢ (b)_k^{|b|}`.
pub fn cp<T: Scalar>(b: &RowVec<T>, k: usize) -> Result<RowVec<T>> {
    let tail = b.slice(k, b.len())?;
    Ok(b.concat(&tail))
}
