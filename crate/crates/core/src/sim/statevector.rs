use num_complex::Complex64;

use super::kernels;
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::linalg::{ONE, ZERO};

/// Tolerance on `Σ|a|² = 1`.
pub const NORM_TOL: f64 = 1e-10;

/// Pure state of `n` qubits, `2ⁿ` amplitudes, qubit `q` = bit `q` of the index.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; 1 << n_qubits];
        amps[index] = ONE;
        Self { n_qubits, amps }
    }

    /// `|+⟩^⊗n`.
    pub fn plus(n_qubits: usize) -> Self {
        let a = Complex64::new((1.0 / (1u64 << n_qubits) as f64).sqrt(), 0.0);
        Self {
            n_qubits,
            amps: vec![a; 1 << n_qubits],
        }
    }

    /// Wraps amplitudes, checking the length is a power of two and the norm
    /// is one within [`NORM_TOL`].
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() || !amps.len().is_power_of_two() {
            return Err(Error::dimension(format!(
                "{} amplitudes is not a power of two",
                amps.len()
            )));
        }
        let state = Self {
            n_qubits: amps.len().trailing_zeros() as usize,
            amps,
        };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::Invariant(format!("state norm² is {norm}")));
        }
        Ok(state)
    }

    /// Normalises arbitrary non-zero amplitudes.
    pub fn normalized(mut amps: Vec<Complex64>) -> Result<Self> {
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Invariant("cannot normalise a zero vector".into()));
        }
        for z in &mut amps {
            *z /= norm;
        }
        Self::from_amplitudes(amps)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    #[cfg(test)]
    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|z| z.norm_sqr()).collect()
    }

    /// `self ⊗ other` with `other` on the low qubits.
    pub fn tensor(&self, other: &Self) -> Self {
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        Self {
            n_qubits: self.n_qubits + other.n_qubits,
            amps,
        }
    }

    pub fn apply(&mut self, gate: &Gate) {
        apply_gate(&mut self.amps, self.n_qubits, gate);
    }
}

/// Applies `gate` to a `n_qubits` amplitude buffer.
pub(crate) fn apply_gate(amps: &mut [Complex64], n_qubits: usize, gate: &Gate) {
    match gate {
        Gate::Cz(a, b) => kernels::apply_cz(amps, *a, *b),
        Gate::Rz { theta, qubit } => {
            let d0 = Complex64::from_polar(1.0, -theta / 2.0);
            kernels::apply_diag_1q(amps, *qubit, d0, d0.conj())
        }
        Gate::Gr { theta, phi } => {
            let factor = Gate::gr_factor(*theta, *phi);
            for q in 0..n_qubits {
                kernels::apply_1q(amps, q, &factor);
            }
        }
        Gate::Unitary(m) => kernels::apply_dense(amps, m),
        Gate::H(q) | Gate::S(q) | Gate::U2 { qubit: q, .. } => {
            let m = gate.local_matrix().expect("single-qubit gates have matrices");
            kernels::apply_1q(amps, *q, &m)
        }
        Gate::Cx(a, b) | Gate::Swap(a, b) | Gate::U4 { qubits: (a, b), .. } => {
            let m = gate.local_matrix().expect("two-qubit gates have matrices");
            kernels::apply_2q(amps, *a, *b, &m)
        }
    }
}

pub(crate) fn check_indices(circuit: &Circuit) -> Result<()> {
    let n = circuit.n_qubits();
    for g in circuit.gates() {
        let qs = g.qubits(n);
        if let Some(&bad) = qs.iter().find(|&&q| q >= n) {
            return Err(Error::config(format!(
                "{} gate on qubit {bad} in a {n}-qubit circuit",
                g.kind()
            )));
        }
    }
    Ok(())
}

/// Runs `circuit` on `initial`, returning the final pure state.
pub fn run_circuit(circuit: &Circuit, initial: &StateVector) -> Result<StateVector> {
    if initial.n_qubits != circuit.n_qubits() {
        return Err(Error::dimension(format!(
            "{}-qubit circuit applied to a {}-qubit state",
            circuit.n_qubits(),
            initial.n_qubits
        )));
    }
    check_indices(circuit)?;
    let mut state = initial.clone();
    for g in circuit.gates() {
        state.apply(g);
    }
    Ok(state)
}
