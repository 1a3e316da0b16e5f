//! Gate-level circuit representation shared by every encoding family.
//!
//! Qubit `q` is bit `q` of a basis-state index (little-endian). Two-qubit
//! matrices act on the pair basis `|a b⟩` with index `2·a + b`, where `a` is
//! the first listed qubit.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{consts, CMatrix, ONE, ZERO};

/// Unitarity tolerance for matrix payloads (max-entry norm of `U†U - I`).
pub const UNITARITY_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    H(usize),
    S(usize),
    Cz(usize, usize),
    /// Control, target.
    Cx(usize, usize),
    Swap(usize, usize),
    Rz { theta: f64, qubit: usize },
    /// `exp(-i θ/2 Σ_j (cos φ X_j + sin φ Y_j))` on every qubit.
    Gr { theta: f64, phi: f64 },
    U2 { matrix: CMatrix, qubit: usize },
    U4 { matrix: CMatrix, qubits: (usize, usize) },
    /// Dense unitary on the whole register, indexed like the state vector.
    Unitary(CMatrix),
}

impl Gate {
    /// Participating qubits; global gates list every qubit of the register.
    pub fn qubits(&self, n_qubits: usize) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::S(q) | Gate::Rz { qubit: q, .. } | Gate::U2 { qubit: q, .. } => {
                vec![q]
            }
            Gate::Cz(a, b) | Gate::Cx(a, b) | Gate::Swap(a, b) | Gate::U4 { qubits: (a, b), .. } => {
                vec![a, b]
            }
            Gate::Gr { .. } | Gate::Unitary(_) => (0..n_qubits).collect(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::S(_) => "S",
            Gate::Cz(..) => "CZ",
            Gate::Cx(..) => "CX",
            Gate::Swap(..) => "SWAP",
            Gate::Rz { .. } => "RZ",
            Gate::Gr { .. } => "GR",
            Gate::U2 { .. } => "U2",
            Gate::U4 { .. } => "U4",
            Gate::Unitary(_) => "UNITARY",
        }
    }

    /// True when the gate acts on two qubits (for gate-duration purposes).
    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cz(..) | Gate::Cx(..) | Gate::Swap(..) | Gate::U4 { .. })
    }

    /// Single-qubit factor of a GR gate.
    pub fn gr_factor(theta: f64, phi: f64) -> CMatrix {
        consts::axis_rotation(theta, [phi.cos(), phi.sin(), 0.0])
    }

    pub fn rz_matrix(theta: f64) -> CMatrix {
        consts::axis_rotation(theta, [0.0, 0.0, 1.0])
    }

    /// Dense matrix for one- and two-qubit gates. GR and full-register
    /// unitaries return `None`; GR is applied as a product of
    /// [`Gate::gr_factor`]s.
    pub fn local_matrix(&self) -> Option<CMatrix> {
        let m = match self {
            Gate::H(_) => consts::hadamard(),
            Gate::S(_) => consts::phase_s(),
            Gate::Rz { theta, .. } => Self::rz_matrix(*theta),
            Gate::U2 { matrix, .. } | Gate::U4 { matrix, .. } => matrix.clone(),
            Gate::Cz(..) => {
                let mut m = CMatrix::identity(4);
                m[(3, 3)] = -ONE;
                m
            }
            Gate::Cx(..) => {
                let mut m = CMatrix::identity(4);
                m[(2, 2)] = ZERO;
                m[(3, 3)] = ZERO;
                m[(2, 3)] = ONE;
                m[(3, 2)] = ONE;
                m
            }
            Gate::Swap(..) => {
                let mut m = CMatrix::identity(4);
                m[(1, 1)] = ZERO;
                m[(2, 2)] = ZERO;
                m[(1, 2)] = ONE;
                m[(2, 1)] = ONE;
                m
            }
            Gate::Gr { .. } | Gate::Unitary(_) => return None,
        };
        Some(m)
    }

    /// Rotation axis per participating qubit used to model coherent over- and
    /// under-rotation.
    ///
    /// Rotation gates use their own generator. Hadamard rotates about
    /// `(X + Z)/√2` and CX about Z on the control and X on the target. Gates
    /// with no natural generator (SWAP, arbitrary U2/U4, dense unitaries) fall
    /// back to Z on each participant.
    pub fn coherent_axes(&self, n_qubits: usize) -> Vec<(usize, [f64; 3])> {
        const Z: [f64; 3] = [0.0, 0.0, 1.0];
        match *self {
            Gate::H(q) => vec![(q, [FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2])],
            Gate::Cx(c, t) => vec![(c, Z), (t, [1.0, 0.0, 0.0])],
            Gate::Gr { phi, .. } => (0..n_qubits)
                .map(|q| (q, [phi.cos(), phi.sin(), 0.0]))
                .collect(),
            _ => self.qubits(n_qubits).into_iter().map(|q| (q, Z)).collect(),
        }
    }

    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let qubits = self.qubits(n_qubits);
        for (i, &q) in qubits.iter().enumerate() {
            if q >= n_qubits {
                return Err(Error::config(format!(
                    "{} gate on qubit {q} in a {n_qubits}-qubit circuit",
                    self.kind()
                )));
            }
            if qubits[..i].contains(&q) {
                return Err(Error::config(format!(
                    "{} gate repeats qubit {q}",
                    self.kind()
                )));
            }
        }
        let payload = match self {
            Gate::U2 { matrix, .. } => Some((matrix, 2)),
            Gate::U4 { matrix, .. } => Some((matrix, 4)),
            Gate::Unitary(matrix) => Some((matrix, 1usize << n_qubits)),
            _ => None,
        };
        if let Some((matrix, dim)) = payload {
            if matrix.dim() != dim {
                return Err(Error::dimension(format!(
                    "{} payload is {}x{}, expected {dim}x{dim}",
                    self.kind(),
                    matrix.dim(),
                    matrix.dim()
                )));
            }
            let err = matrix.unitarity_error();
            if err > UNITARITY_TOL {
                return Err(Error::config(format!(
                    "{} payload is not unitary (defect {err:e})",
                    self.kind()
                )));
            }
        }
        Ok(())
    }
}

/// An ordered gate list over `n_qubits`, optionally grouped into layers.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    /// Exclusive end index of each closed layer.
    layers: Option<Vec<usize>>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        assert!(n_qubits > 0, "circuits need at least one qubit");
        Self {
            n_qubits,
            gates: Vec::new(),
            layers: None,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(self)
    }

    /// Closes the current layer at the end of the gate list.
    pub fn end_layer(&mut self) {
        self.layers.get_or_insert_with(Vec::new).push(self.gates.len());
    }

    pub fn layer_bounds(&self) -> Option<&[usize]> {
        self.layers.as_deref()
    }

    /// Number of closed layers, if layer metadata is present.
    pub fn depth(&self) -> Option<usize> {
        self.layers.as_ref().map(Vec::len)
    }

    /// Gates of layer `k`, if layers are recorded.
    pub fn layer(&self, k: usize) -> Option<&[Gate]> {
        let bounds = self.layers.as_ref()?;
        let end = *bounds.get(k)?;
        let start = if k == 0 { 0 } else { bounds[k - 1] };
        Some(&self.gates[start..end])
    }

    pub fn count(&self, kind: &str) -> usize {
        self.gates.iter().filter(|g| g.kind() == kind).count()
    }

    pub fn validate(&self) -> Result<()> {
        for g in &self.gates {
            g.validate(self.n_qubits)?;
        }
        if let Some(bounds) = &self.layers {
            let monotone = bounds.windows(2).all(|w| w[0] <= w[1]);
            if !monotone || bounds.last().is_some_and(|&b| b > self.gates.len()) {
                return Err(Error::config("layer boundaries must be monotone and in range"));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&CircuitRecord::from(self)).expect("circuit records serialise")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let record: CircuitRecord =
            serde_json::from_str(text).map_err(|e| Error::config(format!("circuit json: {e}")))?;
        record.try_into()
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GateRecord {
    kind: String,
    qubits: Vec<usize>,
    params: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<[f64; 2]>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CircuitRecord {
    n_qubits: usize,
    gates: Vec<GateRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    layers: Option<Vec<usize>>,
}

fn matrix_pairs(m: &CMatrix) -> Vec<[f64; 2]> {
    m.as_slice().iter().map(|z| [z.re, z.im]).collect()
}

impl From<&Circuit> for CircuitRecord {
    fn from(c: &Circuit) -> Self {
        let gates = c
            .gates
            .iter()
            .map(|g| {
                let (qubits, params, matrix) = match g {
                    Gate::Rz { theta, qubit } => (vec![*qubit], vec![*theta], None),
                    Gate::Gr { theta, phi } => (vec![], vec![*theta, *phi], None),
                    Gate::U2 { matrix, qubit } => (vec![*qubit], vec![], Some(matrix_pairs(matrix))),
                    Gate::U4 { matrix, qubits } => {
                        (vec![qubits.0, qubits.1], vec![], Some(matrix_pairs(matrix)))
                    }
                    Gate::Unitary(matrix) => (vec![], vec![], Some(matrix_pairs(matrix))),
                    other => (other.qubits(c.n_qubits), vec![], None),
                };
                GateRecord {
                    kind: g.kind().to_string(),
                    qubits,
                    params,
                    matrix,
                }
            })
            .collect();
        CircuitRecord {
            n_qubits: c.n_qubits,
            gates,
            layers: c.layers.clone(),
        }
    }
}

impl TryFrom<CircuitRecord> for Circuit {
    type Error = Error;

    fn try_from(rec: CircuitRecord) -> Result<Self> {
        if rec.n_qubits == 0 {
            return Err(Error::config("n_qubits must be positive"));
        }
        let mut circuit = Circuit::new(rec.n_qubits);
        for g in rec.gates {
            let q = |k: usize| -> Result<usize> {
                g.qubits.get(k).copied().ok_or_else(|| {
                    Error::config(format!("{} gate is missing qubit #{k}", g.kind))
                })
            };
            let p = |k: usize| -> Result<f64> {
                g.params.get(k).copied().ok_or_else(|| {
                    Error::config(format!("{} gate is missing parameter #{k}", g.kind))
                })
            };
            let matrix = || -> Result<CMatrix> {
                let entries = g
                    .matrix
                    .as_ref()
                    .ok_or_else(|| Error::config(format!("{} gate needs a matrix", g.kind)))?;
                CMatrix::from_row_major(entries.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
                    .ok_or_else(|| Error::config("gate matrix is not square"))
            };
            let gate = match g.kind.as_str() {
                "H" => Gate::H(q(0)?),
                "S" => Gate::S(q(0)?),
                "CZ" => Gate::Cz(q(0)?, q(1)?),
                "CX" => Gate::Cx(q(0)?, q(1)?),
                "SWAP" => Gate::Swap(q(0)?, q(1)?),
                "RZ" => Gate::Rz {
                    theta: p(0)?,
                    qubit: q(0)?,
                },
                "GR" => Gate::Gr {
                    theta: p(0)?,
                    phi: p(1)?,
                },
                "U2" => Gate::U2 {
                    matrix: matrix()?,
                    qubit: q(0)?,
                },
                "U4" => Gate::U4 {
                    matrix: matrix()?,
                    qubits: (q(0)?, q(1)?),
                },
                "UNITARY" => Gate::Unitary(matrix()?),
                other => return Err(Error::config(format!("unknown gate kind {other:?}"))),
            };
            circuit.push(gate)?;
        }
        circuit.layers = rec.layers;
        circuit.validate()?;
        Ok(circuit)
    }
}
