//! Fidelity kernels and the pairwise fidelity report.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::density::DensityMatrix;
use super::statevector::StateVector;
use crate::error::{Error, Result};

/// A pure or mixed state.
#[derive(Clone, Debug, PartialEq)]
pub enum QuantumState {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

impl QuantumState {
    pub fn n_qubits(&self) -> usize {
        match self {
            QuantumState::Pure(s) => s.n_qubits(),
            QuantumState::Mixed(r) => r.n_qubits(),
        }
    }
}

impl From<StateVector> for QuantumState {
    fn from(s: StateVector) -> Self {
        QuantumState::Pure(s)
    }
}

impl From<DensityMatrix> for QuantumState {
    fn from(r: DensityMatrix) -> Self {
        QuantumState::Mixed(r)
    }
}

/// How two mixed states are compared. Both agree with `|⟨a|b⟩|²` whenever
/// either state is pure.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MixedMetric {
    /// `tr(ρσ)`, the quantity a SWAP test measures.
    #[default]
    SwapOverlap,
    /// `(tr √(√ρ σ √ρ))²`.
    Uhlmann,
}

/// Fidelity with the SWAP-test convention for mixed pairs.
pub fn fidelity(a: &QuantumState, b: &QuantumState) -> Result<f64> {
    fidelity_with(a, b, MixedMetric::SwapOverlap)
}

pub fn fidelity_with(a: &QuantumState, b: &QuantumState, metric: MixedMetric) -> Result<f64> {
    if a.n_qubits() != b.n_qubits() {
        return Err(Error::dimension(format!(
            "fidelity between {}- and {}-qubit states",
            a.n_qubits(),
            b.n_qubits()
        )));
    }
    let f = match (a, b) {
        (QuantumState::Pure(x), QuantumState::Pure(y)) => x.inner(y).norm_sqr(),
        (QuantumState::Pure(x), QuantumState::Mixed(r))
        | (QuantumState::Mixed(r), QuantumState::Pure(x)) => r.expectation(x),
        (QuantumState::Mixed(r), QuantumState::Mixed(s)) => match metric {
            MixedMetric::SwapOverlap => r.overlap(s),
            MixedMetric::Uhlmann => uhlmann(r, s),
        },
    };
    Ok(f.clamp(0.0, 1.0))
}

fn hermitian_sqrt(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = SymmetricEigen::new(herm);
    let v = &eig.eigenvectors;
    let roots = DMatrix::from_diagonal(
        &eig.eigenvalues
            .map(|l| Complex64::new(l.max(0.0).sqrt(), 0.0)),
    );
    v * roots * v.adjoint()
}

/// Uhlmann fidelity `‖√ρ √σ‖₁²` of two density matrices of equal size.
pub fn uhlmann(rho: &DensityMatrix, sigma: &DensityMatrix) -> f64 {
    uhlmann_from_roots(&hermitian_sqrt(&rho.to_nalgebra()), &hermitian_sqrt(&sigma.to_nalgebra()))
}

fn uhlmann_from_roots(sqrt_rho: &DMatrix<Complex64>, sqrt_sigma: &DMatrix<Complex64>) -> f64 {
    let trace_norm: f64 = (sqrt_rho * sqrt_sigma).singular_values().iter().sum();
    trace_norm * trace_norm
}

/// Symmetric pairwise fidelity matrix with summary statistics.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<f64>>,
    pub max_offdiag: f64,
    pub min_diag: f64,
}

impl FidelityReport {
    pub fn from_matrix(labels: Vec<String>, matrix: Vec<Vec<f64>>) -> Self {
        let k = matrix.len();
        let mut max_offdiag = f64::NEG_INFINITY;
        let mut min_diag = f64::INFINITY;
        for (i, row) in matrix.iter().enumerate() {
            min_diag = min_diag.min(row[i]);
            for (j, &v) in row.iter().enumerate() {
                if i != j {
                    max_offdiag = max_offdiag.max(v);
                }
            }
        }
        if k < 2 {
            max_offdiag = 0.0;
        }
        Self {
            labels,
            matrix,
            max_offdiag,
            min_diag,
        }
    }

    pub fn len(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.is_empty()
    }

    /// Largest `|F_ij - F_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.len() {
            for j in 0..i {
                worst = worst.max((self.matrix[i][j] - self.matrix[j][i]).abs());
            }
        }
        worst
    }

    /// `row,col,fidelity` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("row,col,fidelity\n");
        for (i, row) in self.matrix.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                out.push_str(&format!("{},{},{v}\n", self.labels[i], self.labels[j]));
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("reports serialise")
    }
}

fn default_labels(k: usize) -> Vec<String> {
    (0..k).map(|i| i.to_string()).collect()
}

/// Rows of a stacked amplitude matrix, split into real and imaginary planes.
struct Planes {
    re: Vec<f64>,
    im: Vec<f64>,
    dim: usize,
}

impl Planes {
    fn new(states: &[StateVector]) -> Self {
        let dim = states[0].amplitudes().len();
        let mut re = Vec::with_capacity(states.len() * dim);
        let mut im = Vec::with_capacity(states.len() * dim);
        for s in states {
            re.extend(s.amplitudes().iter().map(|z| z.re));
            im.extend(s.amplitudes().iter().map(|z| z.im));
        }
        Self { re, im, dim }
    }

    fn row(&self, i: usize) -> (&[f64], &[f64]) {
        let r = i * self.dim..(i + 1) * self.dim;
        (&self.re[r.clone()], &self.im[r])
    }

    /// `|⟨x_i|x_j⟩|²`.
    fn fidelity(&self, i: usize, j: usize) -> f64 {
        let (ar, ai) = self.row(i);
        let (br, bi) = self.row(j);
        let mut re = [0.0f64; 4];
        let mut im = [0.0f64; 4];
        let chunks = self.dim / 4 * 4;
        for k in (0..chunks).step_by(4) {
            for l in 0..4 {
                let (xr, xi, yr, yi) = (ar[k + l], ai[k + l], br[k + l], bi[k + l]);
                re[l] += xr * yr + xi * yi;
                im[l] += xr * yi - xi * yr;
            }
        }
        let (mut sr, mut si) = (re.iter().sum::<f64>(), im.iter().sum::<f64>());
        for k in chunks..self.dim {
            sr += ar[k] * br[k] + ai[k] * bi[k];
            si += ar[k] * bi[k] - ai[k] * br[k];
        }
        sr * sr + si * si
    }
}

const ROW_BLOCK: usize = 8;

/// All pairwise fidelities of pure states via the Gram matrix `O = XX†` of
/// the stacked amplitudes, squared elementwise.
///
/// Row blocks are processed in parallel; every entry is computed by the same
/// sequential reduction whatever the schedule, so results are reproducible.
pub fn overlap_matrix(states: &[StateVector]) -> Result<FidelityReport> {
    overlap_matrix_labeled(states, default_labels(states.len()))
}

pub fn overlap_matrix_labeled(states: &[StateVector], labels: Vec<String>) -> Result<FidelityReport> {
    if states.is_empty() {
        return Err(Error::config("overlap matrix of an empty state list"));
    }
    if labels.len() != states.len() {
        return Err(Error::config("one label per state is required"));
    }
    let n = states[0].n_qubits();
    if let Some(bad) = states.iter().find(|s| s.n_qubits() != n) {
        return Err(Error::dimension(format!(
            "mixed register sizes {n} and {}",
            bad.n_qubits()
        )));
    }
    let k = states.len();
    let planes = Planes::new(states);
    let blocks: Vec<Vec<Vec<f64>>> = (0..k.div_ceil(ROW_BLOCK))
        .into_par_iter()
        .map(|b| {
            let rows = b * ROW_BLOCK..((b + 1) * ROW_BLOCK).min(k);
            let mut out = vec![vec![0.0; k]; rows.len()];
            for (i, row) in rows.zip(out.iter_mut()) {
                for (j, slot) in row.iter_mut().enumerate().skip(i) {
                    *slot = planes.fidelity(i, j);
                }
            }
            out
        })
        .collect();
    let mut matrix: Vec<Vec<f64>> = blocks.into_iter().flatten().collect();
    mirror_upper(&mut matrix);
    Ok(FidelityReport::from_matrix(labels, matrix))
}

/// Copies the upper triangle onto the lower one.
fn mirror_upper(matrix: &mut [Vec<f64>]) {
    for i in 1..matrix.len() {
        let (upper, lower) = matrix.split_at_mut(i);
        for (j, row) in upper.iter().enumerate() {
            lower[0][j] = row[i];
        }
    }
}

/// Pairwise comparison of density matrices under `metric`.
pub fn mixed_fidelity_matrix(
    states: &[DensityMatrix],
    labels: Vec<String>,
    metric: MixedMetric,
) -> Result<FidelityReport> {
    if states.is_empty() {
        return Err(Error::config("fidelity matrix of an empty state list"));
    }
    let n = states[0].n_qubits();
    if states.iter().any(|s| s.n_qubits() != n) {
        return Err(Error::dimension("mixed register sizes".to_string()));
    }
    let k = states.len();
    let roots: Vec<DMatrix<Complex64>> = match metric {
        MixedMetric::SwapOverlap => Vec::new(),
        MixedMetric::Uhlmann => states.par_iter().map(|s| hermitian_sqrt(&s.to_nalgebra())).collect(),
    };
    let rows: Vec<Vec<f64>> = (0..k)
        .into_par_iter()
        .map(|i| {
            (0..k)
                .map(|j| {
                    if j < i {
                        return 0.0;
                    }
                    match metric {
                        MixedMetric::SwapOverlap => states[i].overlap(&states[j]),
                        MixedMetric::Uhlmann => uhlmann_from_roots(&roots[i], &roots[j]).min(1.0),
                    }
                })
                .collect()
        })
        .collect();
    let mut matrix = rows;
    mirror_upper(&mut matrix);
    Ok(FidelityReport::from_matrix(labels, matrix))
}
