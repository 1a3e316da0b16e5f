//! Quantum fingerprinting for file equality checks.
//!
//! Two encodings are provided. The entanglement-efficient (EE) encoding seeds a
//! random circuit from the file bits and runs it on `n` qubits; the
//! information-efficient (IE) encoding writes the file into the adjacency
//! matrix of a graph state. Both are compared with SWAP tests under the
//! simultaneous message passing model.

pub mod analytics;
pub mod bits;
pub mod circuit;
pub mod ee;
pub mod error;
pub mod haar;
pub mod ie;
pub mod linalg;
pub mod sim;
pub mod stream;
pub mod verify;

pub use bits::FileBits;
pub use circuit::{Circuit, Gate};
pub use error::{Error, Result};
pub use stream::{derive_stream, SeededStream};
pub use ee::{fingerprint_ee, EncodingSpec, Variant};
pub use ie::{Graph, GraphFingerprint};
pub use sim::{QuantumState, StateVector};
