//! Haar-random unitaries from stream-drawn Ginibre matrices.
//!
//! The Ginibre matrix is drawn column by column and orthonormalised with
//! twice-iterated classical Gram–Schmidt. Gram–Schmidt produces the QR
//! factorisation whose `R` has a strictly positive real diagonal, which is the
//! phase convention that makes `Q` exactly Haar distributed.
//!
//! Because column `j` of `Q` only depends on the first `j + 1` Gaussian
//! columns, [`haar_state`] can produce `U|0⟩` by drawing a single column, and
//! it is bit-identical to the first column of [`sample_haar_unitary`] for the
//! same stream state.

use num_complex::Complex64;

use crate::linalg::CMatrix;
use crate::stream::SeededStream;

fn gaussian_column(stream: &mut SeededStream, dim: usize) -> Vec<Complex64> {
    (0..dim).map(|_| stream.complex_gaussian()).collect()
}

fn normalize(v: &mut [Complex64]) {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for z in v.iter_mut() {
        *z /= norm;
    }
}

/// Samples a `dim × dim` Haar-random unitary.
pub fn sample_haar_unitary(stream: &mut SeededStream, dim: usize) -> CMatrix {
    assert!(dim >= 1);
    let mut columns: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    for _ in 0..dim {
        let mut v = gaussian_column(stream, dim);
        for _pass in 0..2 {
            for q in &columns {
                let proj: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, qi) in v.iter_mut().zip(q) {
                    *x -= proj * qi;
                }
            }
        }
        normalize(&mut v);
        columns.push(v);
    }
    let mut u = CMatrix::zeros(dim);
    for (j, col) in columns.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            u[(i, j)] = *z;
        }
    }
    u
}

/// `U|0⟩` for the unitary [`sample_haar_unitary`] would draw from the same
/// stream state; consumes only the first Gaussian column.
pub fn haar_state(stream: &mut SeededStream, dim: usize) -> Vec<Complex64> {
    let mut v = gaussian_column(stream, dim);
    normalize(&mut v);
    v
}
