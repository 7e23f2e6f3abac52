//! Fixed-length bit strings used for messages, transcripts and machine states.

use alloc::vec::Vec;
use core::fmt;

/// A finite bit string, most significant (first written) bit first.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bits {
    bits: Vec<bool>,
}

impl Bits {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(n: usize) -> Self {
        Self {
            bits: Vec::with_capacity(n),
        }
    }

    /// The low `width` bits of `value`, most significant first.
    pub fn from_uint(value: u64, width: usize) -> Self {
        let mut b = Self::with_capacity(width);
        b.push_uint(value, width);
        b
    }

    pub fn zeros(width: usize) -> Self {
        Self {
            bits: alloc::vec![false; width],
        }
    }

    /// Parses a string of `0`/`1` characters.
    pub fn parse(s: &str) -> Option<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Some(false),
                '1' => Some(true),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(|bits| Self { bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(bit);
    }

    pub fn push_uint(&mut self, value: u64, width: usize) {
        for i in (0..width).rev() {
            self.bits.push(i < 64 && (value >> i) & 1 == 1);
        }
    }

    pub fn extend_from(&mut self, other: &Bits) {
        self.bits.extend_from_slice(&other.bits);
    }

    /// Reads `width ≤ 64` bits starting at `offset` as an unsigned integer.
    pub fn read_uint(&self, offset: usize, width: usize) -> u64 {
        debug_assert!(width <= 64);
        self.bits[offset..offset + width]
            .iter()
            .fold(0u64, |acc, &b| (acc << 1) | b as u64)
    }

    /// The whole string as an integer; only meaningful for `len() ≤ 64`.
    pub fn to_uint(&self) -> u64 {
        self.read_uint(0, self.len())
    }

    pub fn slice(&self, offset: usize, width: usize) -> Bits {
        Self {
            bits: self.bits[offset..offset + width].to_vec(),
        }
    }

    /// Right-pads with zeros to `width` bits.
    pub fn padded(mut self, width: usize) -> Bits {
        if self.bits.len() < width {
            self.bits.resize(width, false);
        }
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    /// Packs the string into bytes (MSB first) for hex encoding.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.bits
            .chunks(8)
            .map(|c| {
                c.iter()
                    .enumerate()
                    .fold(0u8, |acc, (i, &b)| acc | ((b as u8) << (7 - i)))
            })
            .collect()
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bits(\"{self}\")")
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            f.write_str(if *b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromIterator<bool> for Bits {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        Self {
            bits: iter.into_iter().collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uint_round_trip() {
        let b = Bits::from_uint(0b1011, 6);
        assert_eq!(alloc::format!("{b}"), "001011");
        assert_eq!(b.to_uint(), 0b1011);
        assert_eq!(b.read_uint(2, 2), 0b10);
    }

    #[test]
    fn parse_and_pad() {
        let b = Bits::parse("101").unwrap().padded(5);
        assert_eq!(alloc::format!("{b}"), "10100");
        assert!(Bits::parse("10x").is_none());
        assert_eq!(b.to_bytes(), alloc::vec![0b1010_0000]);
    }
}
