//! Fixed-length bit strings `b₁…bₙ`.
//!
//! The leftmost bit `b₁` is the most significant bit of [`BitString::value`],
//! which matches the row-major layout of tensors where the first wire is the
//! slowest-varying index.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub const MAX_BITS: usize = 63;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BitStringError {
    #[error("invalid bit string '{0}'")]
    Invalid(String),
    #[error("bit string length {0} exceeds {MAX_BITS}")]
    TooLong(usize),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString {
    value: u64,
    len: usize,
}

impl BitString {
    pub fn new(value: u64, len: usize) -> Self {
        assert!(len <= MAX_BITS, "bit string too long");
        let mask = if len == 0 { 0 } else { (1u64 << len) - 1 };
        Self { value: value & mask, len }
    }

    pub fn zeros(len: usize) -> Self {
        Self::new(0, len)
    }

    pub fn ones(len: usize) -> Self {
        Self::new(u64::MAX, len)
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let value = bits.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
        Self::new(value, bits.len())
    }

    /// The string whose ones sit at the given (0-based, left-to-right) positions.
    pub fn from_positions(positions: &[usize], len: usize) -> Self {
        let mut v = 0u64;
        for &p in positions {
            assert!(p < len, "position out of range");
            v |= 1 << (len - 1 - p);
        }
        Self::new(v, len)
    }

    /// All strings of length `n` in lexicographic order.
    pub fn all(len: usize) -> impl Iterator<Item = BitString> {
        (0..1u64 << len).map(move |v| BitString::new(v, len))
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn index(&self) -> usize {
        self.value as usize
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Bit `i`, counting from the left.
    pub fn bit(&self, i: usize) -> bool {
        assert!(i < self.len);
        (self.value >> (self.len - 1 - i)) & 1 == 1
    }

    pub fn positions(&self) -> Vec<usize> {
        (0..self.len).filter(|&i| self.bit(i)).collect()
    }

    pub fn weight(&self) -> u32 {
        self.value.count_ones()
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// `self ⊆ other`: ones only where `other` has ones.
    pub fn is_subset(&self, other: &BitString) -> bool {
        self.value & !other.value == 0
    }

    /// Schur (bitwise AND) product.
    pub fn and(&self, other: &BitString) -> BitString {
        debug_assert_eq!(self.len, other.len);
        BitString::new(self.value & other.value, self.len)
    }

    /// Inner product modulo 2.
    pub fn dot(&self, other: &BitString) -> bool {
        (self.value & other.value).count_ones() % 2 == 1
    }

    /// Nonzero substrings `d ⊆ self`, in increasing order of value.
    pub fn nonzero_subsets(&self) -> impl Iterator<Item = BitString> + '_ {
        let full = self.value;
        let mut sub = full;
        let mut out = Vec::new();
        while sub != 0 {
            out.push(BitString::new(sub, self.len));
            sub = (sub - 1) & full;
        }
        out.reverse();
        out.into_iter()
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", if self.bit(i) { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = BitStringError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.len() > MAX_BITS {
            return Err(BitStringError::TooLong(s.len()));
        }
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(BitStringError::Invalid(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if bits.is_empty() {
            return Err(BitStringError::Invalid(s.to_string()));
        }
        Ok(BitString::from_bits(&bits))
    }
}
