//! In-place gate kernels on little-endian amplitude buffers.
//!
//! The density-matrix engine reuses these by viewing a row-major `ρ` as a
//! `2n`-qubit vector: column index bits are qubits `0..n`, row index bits are
//! qubits `n..2n`.

use num_complex::Complex64;

use crate::linalg::CMatrix;

#[inline]
fn insert_zero_bit(i: usize, bit: usize) -> usize {
    let low = i & ((1 << bit) - 1);
    ((i >> bit) << (bit + 1)) | low
}

/// Applies the 2×2 matrix `m` to qubit `q`.
pub fn apply_1q(amps: &mut [Complex64], q: usize, m: &CMatrix) {
    debug_assert_eq!(m.dim(), 2);
    let (m00, m01, m10, m11) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let stride = 1 << q;
    for k in 0..amps.len() / 2 {
        let i0 = insert_zero_bit(k, q);
        let i1 = i0 | stride;
        let (a0, a1) = (amps[i0], amps[i1]);
        amps[i0] = m00 * a0 + m01 * a1;
        amps[i1] = m10 * a0 + m11 * a1;
    }
}

/// Applies the 4×4 matrix `m` to qubits `(a, b)`, pair index `2·bit_a + bit_b`.
pub fn apply_2q(amps: &mut [Complex64], a: usize, b: usize, m: &CMatrix) {
    debug_assert_eq!(m.dim(), 4);
    debug_assert_ne!(a, b);
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let (ma, mb) = (1 << a, 1 << b);
    let idx = [0, mb, ma, ma | mb];
    let mut local = [Complex64::default(); 4];
    for k in 0..amps.len() / 4 {
        let base = insert_zero_bit(insert_zero_bit(k, lo), hi);
        for (slot, off) in local.iter_mut().zip(idx) {
            *slot = amps[base | off];
        }
        for (r, off) in idx.iter().enumerate() {
            amps[base | off] = (0..4).map(|c| m[(r, c)] * local[c]).sum();
        }
    }
}

/// Multiplies amplitudes with both bits `a` and `b` set by -1.
pub fn apply_cz(amps: &mut [Complex64], a: usize, b: usize) {
    let mask = (1 << a) | (1 << b);
    for (i, z) in amps.iter_mut().enumerate() {
        if i & mask == mask {
            *z = -*z;
        }
    }
}

/// Diagonal single-qubit phase `diag(d0, d1)` on qubit `q`.
pub fn apply_diag_1q(amps: &mut [Complex64], q: usize, d0: Complex64, d1: Complex64) {
    for (i, z) in amps.iter_mut().enumerate() {
        *z *= if (i >> q) & 1 == 0 { d0 } else { d1 };
    }
}

/// Dense matrix on the low `log2(m.dim())` qubits of every block.
pub fn apply_dense(amps: &mut [Complex64], m: &CMatrix) {
    let d = m.dim();
    let mut out = vec![Complex64::default(); d];
    for block in amps.chunks_mut(d) {
        for (i, slot) in out.iter_mut().enumerate() {
            let row = &m.as_slice()[i * d..(i + 1) * d];
            *slot = row.iter().zip(block.iter()).map(|(a, b)| a * b).sum();
        }
        block.copy_from_slice(&out);
    }
}
