//! Classical source files as exact-length bit sequences.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// An `N`-bit file, byte-packed most-significant-bit first.
///
/// The bit length is stored exactly; the trailing pad bits of the last byte
/// are always zero so that equality and hashing of the packed bytes agree
/// with equality of the bit sequences.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FileBits {
    bytes: Vec<u8>,
    len: usize,
}

impl FileBits {
    /// All-zero file of `len` bits.
    pub fn zeros(len: usize) -> Self {
        Self {
            bytes: vec![0; len.div_ceil(8)],
            len,
        }
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut file = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                file.bytes[i / 8] |= 0x80 >> (i % 8);
            }
        }
        file
    }

    /// Packed bytes plus an explicit bit length. Pad bits are cleared.
    pub fn from_packed(mut bytes: Vec<u8>, len: usize) -> Result<Self> {
        if bytes.len() != len.div_ceil(8) {
            return Err(Error::config(format!(
                "{} packed bytes cannot hold exactly {len} bits",
                bytes.len()
            )));
        }
        if !len.is_multiple_of(8) {
            let last = bytes.len() - 1;
            bytes[last] &= 0xffu8 << (8 - len % 8);
        }
        Ok(Self { bytes, len })
    }

    /// Minimal-width big-endian binary encoding of `value` (`0` encodes as a
    /// single `0` bit).
    pub fn from_uint(value: u64) -> Self {
        let width = (64 - value.leading_zeros() as usize).max(1);
        Self::from_uint_width(value, width)
    }

    /// Fixed-width big-endian binary encoding of the low `width` bits.
    pub fn from_uint_width(value: u64, width: usize) -> Self {
        let bits: Vec<bool> = (0..width)
            .rev()
            .map(|k| k < 64 && (value >> k) & 1 == 1)
            .collect();
        Self::from_bools(&bits)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn get(&self, index: usize) -> Result<bool> {
        self.check(index)?;
        Ok(self.bit(index))
    }

    pub fn set(&mut self, index: usize, value: bool) -> Result<()> {
        self.check(index)?;
        let mask = 0x80 >> (index % 8);
        if value {
            self.bytes[index / 8] |= mask;
        } else {
            self.bytes[index / 8] &= !mask;
        }
        Ok(())
    }

    pub fn flip(&mut self, index: usize) -> Result<()> {
        self.check(index)?;
        self.bytes[index / 8] ^= 0x80 >> (index % 8);
        Ok(())
    }

    /// Extends the file with zero bits up to `new_len`.
    pub fn extend_zeros(&mut self, new_len: usize) {
        if new_len > self.len {
            self.bytes.resize(new_len.div_ceil(8), 0);
            self.len = new_len;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(|i| self.bit(i))
    }

    pub fn count_ones(&self) -> usize {
        self.bytes.iter().map(|b| b.count_ones() as usize).sum()
    }

    fn bit(&self, index: usize) -> bool {
        self.bytes[index / 8] & (0x80 >> (index % 8)) != 0
    }

    fn check(&self, index: usize) -> Result<()> {
        if index < self.len {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index,
                len: self.len,
            })
        }
    }
}

impl FromStr for FileBits {
    type Err = Error;

    /// Parses a string of `0`/`1` characters; `_` separators are ignored.
    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .filter(|&c| c != '_')
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::config(format!("invalid bit character {other:?}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_bools(&bits))
    }
}

impl fmt::Display for FileBits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for FileBits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FileBits({self})")
    }
}
