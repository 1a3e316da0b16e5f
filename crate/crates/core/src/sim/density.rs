use nalgebra::DMatrix;
use num_complex::Complex64;

use super::kernels;
use super::noise::{coherent_kraus, pauli_kraus, thermal_kraus, NoiseModel};
use super::statevector::{check_indices, StateVector};
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, ZERO};

/// Largest register the density-matrix engine accepts (`4ⁿ` entries).
pub const DENSITY_CAPACITY: usize = 10;

pub const TRACE_TOL: f64 = 1e-9;

/// Row-major `2ⁿ × 2ⁿ` density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    pub fn zero(n_qubits: usize) -> Self {
        Self::from_pure(&StateVector::zero(n_qubits))
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn from_pure(psi: &StateVector) -> Self {
        let a = psi.amplitudes();
        let data = a
            .iter()
            .flat_map(|x| a.iter().map(move |y| x * y.conj()))
            .collect();
        Self {
            n_qubits: psi.n_qubits(),
            data,
        }
    }

    pub fn from_entries(n_qubits: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != 1 << (2 * n_qubits) {
            return Err(Error::dimension(format!(
                "{} entries for a {n_qubits}-qubit density matrix",
                data.len()
            )));
        }
        Ok(Self { n_qubits, data })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim() + col]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        self.overlap(self)
    }

    /// `tr(ρσ)` for Hermitian arguments.
    pub fn overlap(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a * b.conj()).re)
            .sum()
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation(&self, psi: &StateVector) -> f64 {
        let a = psi.amplitudes();
        let d = self.dim();
        let mut acc = ZERO;
        for (i, ai) in a.iter().enumerate() {
            let row = &self.data[i * d..(i + 1) * d];
            let r: Complex64 = row.iter().zip(a).map(|(x, y)| x * y).sum();
            acc += ai.conj() * r;
        }
        acc.re
    }

    /// `max |ρ - ρ†|`.
    pub fn hermiticity_error(&self) -> f64 {
        let d = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.dim(), self.dim(), &self.data)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let m = self.to_nalgebra();
        let herm = (&m + m.adjoint()) * Complex64::new(0.5, 0.0);
        herm.symmetric_eigenvalues().iter().copied().collect()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().into_iter().fold(f64::INFINITY, f64::min)
    }

    /// `ρ → UρU†`.
    pub fn apply_unitary(&mut self, gate: &Gate) {
        let n = self.n_qubits;
        match gate {
            Gate::Unitary(u) => {
                let d = self.dim();
                let rho = CMatrix::from_row_major(std::mem::take(&mut self.data))
                    .expect("square by construction");
                let out = &(u * &rho) * &u.adjoint();
                self.data = out.as_slice().to_vec();
                debug_assert_eq!(self.data.len(), d * d);
            }
            Gate::Cz(a, b) => {
                kernels::apply_cz(&mut self.data, a + n, b + n);
                kernels::apply_cz(&mut self.data, *a, *b);
            }
            Gate::Rz { theta, qubit } => {
                let d0 = Complex64::from_polar(1.0, -theta / 2.0);
                kernels::apply_diag_1q(&mut self.data, qubit + n, d0, d0.conj());
                kernels::apply_diag_1q(&mut self.data, *qubit, d0.conj(), d0);
            }
            Gate::Gr { theta, phi } => {
                let f = Gate::gr_factor(*theta, *phi);
                let fc = f.conj();
                for q in 0..n {
                    kernels::apply_1q(&mut self.data, q + n, &f);
                    kernels::apply_1q(&mut self.data, q, &fc);
                }
            }
            Gate::H(q) | Gate::S(q) | Gate::U2 { qubit: q, .. } => {
                let m = gate.local_matrix().expect("single-qubit gates have matrices");
                kernels::apply_1q(&mut self.data, q + n, &m);
                kernels::apply_1q(&mut self.data, *q, &m.conj());
            }
            Gate::Cx(a, b) | Gate::Swap(a, b) | Gate::U4 { qubits: (a, b), .. } => {
                let m = gate.local_matrix().expect("two-qubit gates have matrices");
                kernels::apply_2q(&mut self.data, a + n, b + n, &m);
                kernels::apply_2q(&mut self.data, *a, *b, &m.conj());
            }
        }
    }

    /// `ρ → Σ_k K_k ρ K_k†` with single-qubit Kraus operators on `qubit`.
    pub fn apply_kraus_1q(&mut self, qubit: usize, kraus: &[CMatrix]) {
        let n = self.n_qubits;
        let mut acc = vec![ZERO; self.data.len()];
        let mut scratch = self.data.clone();
        for k in kraus {
            scratch.copy_from_slice(&self.data);
            kernels::apply_1q(&mut scratch, qubit + n, k);
            kernels::apply_1q(&mut scratch, qubit, &k.conj());
            for (a, s) in acc.iter_mut().zip(&scratch) {
                *a += s;
            }
        }
        self.data = acc;
    }

    /// Checks trace, Hermiticity and (for small registers) positivity.
    pub fn check_invariants(&self) -> Result<()> {
        let tr = self.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::Invariant(format!("trace is {tr}")));
        }
        let herm = self.hermiticity_error();
        if herm > 1e-10 {
            return Err(Error::Invariant(format!("hermiticity defect {herm:e}")));
        }
        let min = self.min_eigenvalue();
        if min < -1e-8 {
            return Err(Error::Invariant(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }
}

/// Applies the noise channel that follows `gate`.
fn apply_noise(rho: &mut DensityMatrix, gate: &Gate, noise: &NoiseModel) {
    let n = rho.n_qubits();
    match *noise {
        NoiseModel::None => {}
        NoiseModel::Pauli { p_x, p_y, p_z } => {
            let kraus = pauli_kraus(p_x, p_y, p_z);
            for q in gate.qubits(n) {
                rho.apply_kraus_1q(q, &kraus);
            }
        }
        NoiseModel::Thermal {
            t1_us,
            t2_us,
            t_1q_ns,
            t_2q_ns,
        } => {
            let single = matches!(
                gate,
                Gate::H(_) | Gate::S(_) | Gate::Rz { .. } | Gate::U2 { .. } | Gate::Gr { .. }
            );
            let t_ns = if single { t_1q_ns } else { t_2q_ns };
            let kraus = thermal_kraus(t_ns / 1000.0, t1_us, t2_us);
            for q in gate.qubits(n) {
                rho.apply_kraus_1q(q, &kraus);
            }
        }
        NoiseModel::Coherent { probability, angle } => {
            for (q, axis) in gate.coherent_axes(n) {
                rho.apply_kraus_1q(q, &coherent_kraus(probability, angle, axis));
            }
        }
    }
}

/// Simulates `circuit` from `|0…0⟩⟨0…0|` with `noise` after every gate.
pub fn run_noisy(circuit: &Circuit, noise: &NoiseModel) -> Result<DensityMatrix> {
    let n = circuit.n_qubits();
    if n > DENSITY_CAPACITY {
        return Err(Error::Capacity {
            what: "density-matrix qubits",
            requested: n,
            limit: DENSITY_CAPACITY,
        });
    }
    noise.validate()?;
    check_indices(circuit)?;
    let mut rho = DensityMatrix::zero(n);
    for gate in circuit.gates() {
        rho.apply_unitary(gate);
        apply_noise(&mut rho, gate, noise);
    }
    Ok(rho)
}
