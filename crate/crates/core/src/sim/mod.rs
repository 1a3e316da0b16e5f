//! State-vector and density-matrix simulation.

pub mod density;
pub mod fidelity;
pub mod kernels;
pub mod noise;
pub mod statevector;

pub use density::{run_noisy, DensityMatrix, DENSITY_CAPACITY};
pub use fidelity::{
    fidelity, fidelity_with, mixed_fidelity_matrix, overlap_matrix, overlap_matrix_labeled,
    uhlmann, FidelityReport, MixedMetric, QuantumState,
};
pub use noise::NoiseModel;
pub use statevector::{run_circuit, StateVector};
