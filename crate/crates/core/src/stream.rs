//! File-seeded deterministic randomness.
//!
//! Every random choice in an experiment is drawn from a [`SeededStream`]
//! keyed by the file being fingerprinted and a caller-supplied nonce:
//!
//! ```text
//! key      = SHA-256( u64_be(N) || packed file bytes || nonce )
//! block[i] = SHA-256( key || u64_be(i) )
//! ```
//!
//! The output is the concatenation of the blocks. Multi-byte integers are read
//! big-endian. The construction is portable, so a second implementation fed
//! the same file and nonce reproduces every gate angle and Haar matrix.

use std::f64::consts::TAU;

use num_complex::Complex64;
use sha2::{Digest, Sha256};

use crate::bits::FileBits;

const BLOCK: usize = 32;

/// Counter-mode SHA-256 byte stream.
#[derive(Clone, Debug)]
pub struct SeededStream {
    key: [u8; BLOCK],
    nonce: Vec<u8>,
    counter: u64,
    block: [u8; BLOCK],
    pos: usize,
}

/// Derives the stream for `(file, nonce)`.
pub fn derive_stream(file: &FileBits, nonce: &[u8]) -> SeededStream {
    let mut hasher = Sha256::new();
    hasher.update((file.len() as u64).to_be_bytes());
    hasher.update(file.as_bytes());
    hasher.update(nonce);
    SeededStream::from_key(hasher.finalize().into(), nonce.to_vec())
}

impl SeededStream {
    fn from_key(key: [u8; BLOCK], nonce: Vec<u8>) -> Self {
        Self {
            key,
            nonce,
            counter: 0,
            block: [0; BLOCK],
            // forces a refill on the first read
            pos: BLOCK,
        }
    }

    pub fn key(&self) -> &[u8; BLOCK] {
        &self.key
    }

    pub fn nonce(&self) -> &[u8] {
        &self.nonce
    }

    /// Index of the next block to be generated.
    pub fn counter(&self) -> u64 {
        self.counter
    }

    /// An independent child stream labelled by `label`, leaving `self`
    /// untouched.
    pub fn fork(&self, label: &[u8]) -> SeededStream {
        let mut hasher = Sha256::new();
        hasher.update(self.key);
        hasher.update(b"fork");
        hasher.update((label.len() as u64).to_be_bytes());
        hasher.update(label);
        SeededStream::from_key(hasher.finalize().into(), self.nonce.clone())
    }

    fn refill(&mut self) {
        let mut hasher = Sha256::new();
        hasher.update(self.key);
        hasher.update(self.counter.to_be_bytes());
        self.block = hasher.finalize().into();
        self.counter += 1;
        self.pos = 0;
    }

    pub fn fill_bytes(&mut self, out: &mut [u8]) {
        let mut written = 0;
        while written < out.len() {
            if self.pos == BLOCK {
                self.refill();
            }
            let take = (BLOCK - self.pos).min(out.len() - written);
            out[written..written + take].copy_from_slice(&self.block[self.pos..self.pos + take]);
            self.pos += take;
            written += take;
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut buf = [0u8; 8];
        self.fill_bytes(&mut buf);
        u64::from_be_bytes(buf)
    }

    /// Uniform in `[0, 1)` with 53 bits of resolution.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * f64::EPSILON / 2.0
    }

    /// Uniform angle in `[0, 2π)`: `2π · u / 2⁶⁴` for the next `u64`.
    ///
    /// The quotient is truncated to the 53 bits an `f64` can hold so that the
    /// upper end can never round up to exactly `2π`.
    pub fn sample_uniform_angle(&mut self) -> f64 {
        TAU * ((self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64))
    }

    /// Uniform integer in `0..bound` by rejection sampling (no modulo bias).
    pub fn uniform_index(&mut self, bound: usize) -> usize {
        assert!(bound > 0, "uniform_index needs a non-empty range");
        let bound = bound as u64;
        let zone = u64::MAX - (u64::MAX % bound);
        loop {
            let x = self.next_u64();
            if x < zone {
                return (x % bound) as usize;
            }
        }
    }

    pub fn bernoulli(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }

    /// Two independent standard normals via Box–Muller.
    pub fn standard_normal_pair(&mut self) -> (f64, f64) {
        // u1 in (0, 1] keeps the logarithm finite
        let u1 = ((self.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64);
        let u2 = self.next_f64();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (TAU * u2).sin_cos();
        (r * c, r * s)
    }

    /// Complex Gaussian with independent N(0, 1) real and imaginary parts.
    pub fn complex_gaussian(&mut self) -> Complex64 {
        let (re, im) = self.standard_normal_pair();
        Complex64::new(re, im)
    }

    /// Fisher–Yates shuffle of `items`.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.uniform_index(i + 1);
            items.swap(i, j);
        }
    }
}
