//! Fixed-length binary messages and hash values.
//!
//! Bit `j` addresses mode `j` (least-significant-first). The text form
//! follows the usual binary-number convention: the leftmost character is
//! the highest-index bit, so `"0111"` sets bits 0..=2 and clears bit 3.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitString {
    bits: Vec<u8>,
}

impl BitString {
    pub fn zeros(len: usize) -> Self {
        Self {
            bits: vec![0; len],
        }
    }

    pub fn ones(len: usize) -> Self {
        Self {
            bits: vec![1; len],
        }
    }

    /// Build from per-mode bit values (index 0 first).
    pub fn from_bits(bits: &[u8]) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidParameter(
                "bit values must be 0 or 1".into(),
            ));
        }
        Ok(Self {
            bits: bits.to_vec(),
        })
    }

    /// The `len` low bits of `index`, bit j of the integer becoming bit j.
    pub fn from_index(index: u64, len: usize) -> Self {
        let bits = (0..len).map(|j| ((index >> j) & 1) as u8).collect();
        Self { bits }
    }

    /// Packs bit j into bit j of the result.
    pub fn to_index(&self) -> u64 {
        self.bits
            .iter()
            .enumerate()
            .fold(0u64, |acc, (j, &b)| acc | ((b as u64) << j))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, j: usize) -> u8 {
        self.bits[j]
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn flipped(&self, j: usize) -> Self {
        let mut out = self.clone();
        out.bits[j] ^= 1;
        out
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    /// All-zeros or all-ones: accepted by the pipeline but flagged for
    /// application use.
    pub fn is_trivial(&self) -> bool {
        self.count_ones() == 0 || self.count_ones() == self.len()
    }

    pub fn hamming_distance(&self, other: &Self) -> usize {
        assert_eq!(self.len(), other.len(), "length mismatch");
        self.bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count()
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in self.bits.iter().rev() {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars().rev() {
            match c {
                '0' => bits.push(0),
                '1' => bits.push(1),
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "bitstring must contain only 0 and 1, found '{other}'"
                    )))
                }
            }
        }
        if bits.is_empty() {
            return Err(Error::InvalidParameter("empty bitstring".into()));
        }
        Ok(Self { bits })
    }
}
