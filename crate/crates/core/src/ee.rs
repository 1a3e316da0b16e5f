//! Entanglement-efficient fingerprints: random circuits seeded by the file.

use std::collections::HashSet;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bits::FileBits;
use crate::circuit::{Circuit, Gate};
use crate::error::{Error, Result};
use crate::haar::{haar_state, sample_haar_unitary};
use crate::sim::fidelity::{mixed_fidelity_matrix, overlap_matrix_labeled, FidelityReport, MixedMetric};
use crate::sim::{run_circuit, run_noisy, DensityMatrix, NoiseModel, StateVector};
use crate::stream::{derive_stream, SeededStream};

/// Largest register for which a dense Haar unitary is sampled.
pub const HAAR_CAPACITY: usize = 10;

/// Largest register the state-vector fingerprints accept.
pub const STATEVECTOR_CAPACITY: usize = 28;

/// Encoding circuit family. `layers` is the depth `L`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Variant {
    /// One dense Haar-random unitary on the whole register.
    Haar,
    /// Alternating even/odd nearest-neighbour Haar two-qubit gates on a line.
    Brickwork1d { layers: usize },
    /// Global-rotation layers with CZs on a `rows × cols` grid.
    Grid2dGr { rows: usize, cols: usize, layers: usize },
    /// Global-rotation layers with CZs on a random perfect matching.
    FullyConnectedGr { layers: usize },
    /// `layers` Haar two-qubit gates, each on a random adjacent pair.
    LocalLinear { layers: usize },
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::Haar => "haar",
            Variant::Brickwork1d { .. } => "brickwork_1d",
            Variant::Grid2dGr { .. } => "grid2d_gr",
            Variant::FullyConnectedGr { .. } => "fully_connected_gr",
            Variant::LocalLinear { .. } => "local_linear",
        }
    }

    pub fn layers(&self) -> Option<usize> {
        match *self {
            Variant::Haar => None,
            Variant::Brickwork1d { layers }
            | Variant::Grid2dGr { layers, .. }
            | Variant::FullyConnectedGr { layers }
            | Variant::LocalLinear { layers } => Some(layers),
        }
    }

    /// The same family at depth `layers`; `Haar` is returned unchanged.
    pub fn with_layers(&self, l: usize) -> Self {
        let mut v = self.clone();
        match &mut v {
            Variant::Haar => {}
            Variant::Brickwork1d { layers }
            | Variant::Grid2dGr { layers, .. }
            | Variant::FullyConnectedGr { layers }
            | Variant::LocalLinear { layers } => *layers = l,
        }
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EncodingSpec {
    pub variant: Variant,
    pub n_qubits: usize,
}

impl EncodingSpec {
    pub fn new(variant: Variant, n_qubits: usize) -> Result<Self> {
        let spec = Self { variant, n_qubits };
        spec.validate()?;
        Ok(spec)
    }

    pub fn haar(n_qubits: usize) -> Result<Self> {
        Self::new(Variant::Haar, n_qubits)
    }

    pub fn with_layers(&self, layers: usize) -> Self {
        Self {
            variant: self.variant.with_layers(layers),
            n_qubits: self.n_qubits,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_qubits;
        if n == 0 {
            return Err(Error::config("an encoding needs at least one qubit"));
        }
        if n > STATEVECTOR_CAPACITY {
            return Err(Error::Capacity {
                what: "state-vector qubits",
                requested: n,
                limit: STATEVECTOR_CAPACITY,
            });
        }
        if self.variant.layers() == Some(0) {
            return Err(Error::config("depth L must be at least 1"));
        }
        match self.variant {
            Variant::Haar if n > HAAR_CAPACITY => Err(Error::Capacity {
                what: "dense Haar qubits",
                requested: n,
                limit: HAAR_CAPACITY,
            }),
            Variant::Grid2dGr { rows, cols, .. } if rows * cols != n => Err(Error::config(format!(
                "a {rows}×{cols} grid does not hold {n} qubits"
            ))),
            Variant::Brickwork1d { .. } | Variant::LocalLinear { .. } if n < 2 => Err(
                Error::config(format!("{} needs at least two qubits", self.variant.name())),
            ),
            _ => Ok(()),
        }
    }
}

fn rz_round(c: &mut Circuit, s: &mut SeededStream) -> Result<()> {
    for q in 0..c.n_qubits() {
        c.push(Gate::Rz {
            theta: s.sample_uniform_angle(),
            qubit: q,
        })?;
    }
    Ok(())
}

fn random_gr(s: &mut SeededStream) -> Gate {
    let theta = s.sample_uniform_angle();
    let phi = s.sample_uniform_angle();
    Gate::Gr { theta, phi }
}

fn haar_u4(s: &mut SeededStream, a: usize, b: usize) -> Gate {
    Gate::U4 {
        matrix: sample_haar_unitary(s, 4),
        qubits: (a, b),
    }
}

/// Grid CZ pairs: horizontal neighbours on even layers, vertical on odd.
fn grid_pairs(rows: usize, cols: usize, layer: usize) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let q = r * cols + c;
            if layer.is_multiple_of(2) && c + 1 < cols {
                pairs.push((q, q + 1));
            }
            if layer % 2 == 1 && r + 1 < rows {
                pairs.push((q, q + cols));
            }
        }
    }
    pairs
}

fn random_matching(s: &mut SeededStream, n: usize) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..n).collect();
    s.shuffle(&mut order);
    order.chunks_exact(2).map(|p| (p[0], p[1])).collect()
}

fn build_from_stream(spec: &EncodingSpec, s: &mut SeededStream) -> Result<Circuit> {
    let n = spec.n_qubits;
    let mut c = Circuit::new(n);
    match spec.variant {
        Variant::Haar => {
            c.push(Gate::Unitary(sample_haar_unitary(s, 1 << n)))?;
            c.end_layer();
        }
        Variant::Brickwork1d { layers } => {
            for l in 0..layers {
                for a in (l % 2..n.saturating_sub(1)).step_by(2) {
                    c.push(haar_u4(s, a, a + 1))?;
                }
                c.end_layer();
            }
        }
        Variant::Grid2dGr { rows, cols, layers } => {
            for l in 0..layers {
                c.push(random_gr(s))?;
                rz_round(&mut c, s)?;
                c.push(random_gr(s))?;
                for (a, b) in grid_pairs(rows, cols, l) {
                    c.push(Gate::Cz(a, b))?;
                }
                if l + 1 == layers {
                    rz_round(&mut c, s)?;
                }
                c.end_layer();
            }
        }
        Variant::FullyConnectedGr { layers } => {
            for l in 0..layers {
                c.push(random_gr(s))?;
                rz_round(&mut c, s)?;
                c.push(random_gr(s))?;
                for (a, b) in random_matching(s, n) {
                    c.push(Gate::Cz(a, b))?;
                }
                if l + 1 == layers {
                    rz_round(&mut c, s)?;
                }
                c.end_layer();
            }
        }
        Variant::LocalLinear { layers } => {
            for _ in 0..layers {
                let a = s.uniform_index(n - 1);
                c.push(haar_u4(s, a, a + 1))?;
                c.end_layer();
            }
        }
    }
    Ok(c)
}

/// The encoding circuit `U(file)`, drawn from `derive_stream(file, nonce)`.
pub fn build_encoding_circuit(spec: &EncodingSpec, file: &FileBits, nonce: &[u8]) -> Result<Circuit> {
    spec.validate()?;
    build_from_stream(spec, &mut derive_stream(file, nonce))
}

/// `U(file)|0…0⟩`.
///
/// The Haar variant takes the first column of the sampled unitary directly,
/// which is bit-identical to simulating the dense circuit.
pub fn fingerprint_ee(spec: &EncodingSpec, file: &FileBits, nonce: &[u8]) -> Result<StateVector> {
    spec.validate()?;
    if spec.variant == Variant::Haar {
        let amps = haar_state(&mut derive_stream(file, nonce), 1 << spec.n_qubits);
        return StateVector::from_amplitudes(amps);
    }
    let circuit = build_encoding_circuit(spec, file, nonce)?;
    run_circuit(&circuit, &StateVector::zero(spec.n_qubits))
}

/// The noisy fingerprint `ρ(file)`.
pub fn fingerprint_ee_noisy(
    spec: &EncodingSpec,
    file: &FileBits,
    nonce: &[u8],
    noise: &NoiseModel,
) -> Result<DensityMatrix> {
    run_noisy(&build_encoding_circuit(spec, file, nonce)?, noise)
}

/// Files and per-trial nonces for a scan.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialConfig {
    files: Vec<FileBits>,
    nonces: Vec<Vec<u8>>,
}

impl TrialConfig {
    pub fn new(files: Vec<FileBits>, nonces: Vec<Vec<u8>>) -> Result<Self> {
        if files.is_empty() {
            return Err(Error::config("a scan needs at least one file"));
        }
        if nonces.is_empty() {
            return Err(Error::config("a scan needs at least one trial"));
        }
        let mut seen = HashSet::new();
        for f in &files {
            if !seen.insert(f) {
                return Err(Error::config(format!("file {f} appears twice")));
            }
        }
        Ok(Self { files, nonces })
    }

    /// The integers `0..count` as minimal-width bit strings.
    pub fn integer_files(count: u64) -> Vec<FileBits> {
        (0..count).map(FileBits::from_uint).collect()
    }

    /// Trial `t` uses `master ‖ u32_be(t)`.
    pub fn trial_nonces(master: &[u8], trials: usize) -> Vec<Vec<u8>> {
        (0..trials as u32)
            .map(|t| [master, &t.to_be_bytes()].concat())
            .collect()
    }

    pub fn files(&self) -> &[FileBits] {
        &self.files
    }

    pub fn nonces(&self) -> &[Vec<u8>] {
        &self.nonces
    }

    pub fn trials(&self) -> usize {
        self.nonces.len()
    }
}

/// Fingerprints of every file under one nonce, computed in parallel.
pub fn fingerprints(spec: &EncodingSpec, files: &[FileBits], nonce: &[u8]) -> Result<Vec<StateVector>> {
    files
        .par_iter()
        .map(|f| fingerprint_ee(spec, f, nonce))
        .collect()
}

fn file_labels(files: &[FileBits]) -> Vec<String> {
    files.iter().map(ToString::to_string).collect()
}

/// One line of a max-fidelity scan. `layers` is empty for Haar rows.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub variant: String,
    pub n: usize,
    pub layers: Option<usize>,
    pub trial: usize,
    pub nonce: String,
    pub max_offdiag: f64,
    pub haar_baseline: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledMatrix {
    pub variant: String,
    pub layers: Option<usize>,
    pub trial: usize,
    pub report: FidelityReport,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub matrices: Option<Vec<LabeledMatrix>>,
}

pub const SCAN_CSV_HEADER: &str = "variant,n,L,trial,nonce,max_offdiag,haar_baseline";

impl ScanReport {
    pub fn to_csv(&self) -> String {
        let mut out = format!("{SCAN_CSV_HEADER}\n");
        for r in &self.rows {
            let l = r.layers.map(|l| l.to_string()).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{l},{},{},{},{}",
                r.variant, r.n, r.trial, r.nonce, r.max_offdiag, r.haar_baseline
            );
        }
        out
    }

    /// Rows for one family and depth, in trial order.
    pub fn rows_for(&self, variant: &str, layers: Option<usize>) -> Vec<&ScanRow> {
        self.rows
            .iter()
            .filter(|r| r.variant == variant && r.layers == layers)
            .collect()
    }
}

/// Max off-diagonal fidelity for every (spec, trial), plus one Haar baseline
/// row per trial. All specs must share a register size.
pub fn ee_max_fidelity_scan(
    specs: &[EncodingSpec],
    trials: &TrialConfig,
    emit_matrix: bool,
) -> Result<ScanReport> {
    let n = match specs.first() {
        Some(s) => s.n_qubits,
        None => return Err(Error::config("a scan needs at least one encoding")),
    };
    for s in specs {
        s.validate()?;
        if s.n_qubits != n {
            return Err(Error::config("all encodings in a scan must share n_qubits"));
        }
    }
    let haar = EncodingSpec::haar(n)?;
    let labels = file_labels(trials.files());
    let mut rows = Vec::new();
    let mut matrices = Vec::new();
    for (t, nonce) in trials.nonces().iter().enumerate() {
        let baseline = overlap_matrix_labeled(&fingerprints(&haar, trials.files(), nonce)?, labels.clone())?;
        let haar_max = baseline.max_offdiag;
        let mut push = |spec: &EncodingSpec, report: FidelityReport| {
            rows.push(ScanRow {
                variant: spec.variant.name().to_string(),
                n,
                layers: spec.variant.layers(),
                trial: t,
                nonce: hex::encode(nonce),
                max_offdiag: report.max_offdiag,
                haar_baseline: haar_max,
            });
            if emit_matrix {
                matrices.push(LabeledMatrix {
                    variant: spec.variant.name().to_string(),
                    layers: spec.variant.layers(),
                    trial: t,
                    report,
                });
            }
        };
        for spec in specs.iter().filter(|s| s.variant != Variant::Haar) {
            let states = fingerprints(spec, trials.files(), nonce)?;
            push(spec, overlap_matrix_labeled(&states, labels.clone())?);
        }
        push(&haar, baseline);
    }
    Ok(ScanReport {
        rows,
        matrices: emit_matrix.then_some(matrices),
    })
}

/// One line of a noise scan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseRow {
    pub model: String,
    pub n: usize,
    pub layers: usize,
    /// Max over distinct files of `tr(ρσ)`.
    pub max_cross_overlap: f64,
    /// Min over files of the self-overlap `tr(ρ²)`.
    pub min_self_overlap: f64,
    /// Max over distinct files of the Uhlmann fidelity, when requested.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_cross_uhlmann: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseScanReport {
    pub rows: Vec<NoiseRow>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub matrices: Option<Vec<(String, usize, FidelityReport)>>,
}

pub const NOISE_CSV_HEADER: &str = "model,n,L,max_cross_overlap,min_self_overlap,max_cross_uhlmann";

impl NoiseScanReport {
    pub fn to_csv(&self) -> String {
        let mut out = format!("{NOISE_CSV_HEADER}\n");
        for r in &self.rows {
            let u = r.max_cross_uhlmann.map(|u| u.to_string()).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{u}",
                r.model, r.n, r.layers, r.max_cross_overlap, r.min_self_overlap
            );
        }
        out
    }

    pub fn rows_for(&self, model: &str) -> Vec<&NoiseRow> {
        self.rows.iter().filter(|r| r.model == model).collect()
    }
}

/// Options for [`ee_noise_scan`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct NoiseScanOptions {
    pub uhlmann: bool,
    pub emit_matrix: bool,
}

/// Noisy fingerprints of every file for each model and depth.
pub fn ee_noise_scan(
    spec: &EncodingSpec,
    models: &[NoiseModel],
    files: &[FileBits],
    depths: &[usize],
    nonce: &[u8],
    options: NoiseScanOptions,
) -> Result<NoiseScanReport> {
    TrialConfig::new(files.to_vec(), vec![nonce.to_vec()])?;
    for m in models {
        m.validate()?;
    }
    let labels = file_labels(files);
    let mut rows = Vec::new();
    let mut matrices = Vec::new();
    for model in models {
        for &l in depths {
            let s = spec.with_layers(l);
            s.validate()?;
            let states: Vec<DensityMatrix> = files
                .par_iter()
                .map(|f| fingerprint_ee_noisy(&s, f, nonce, model))
                .collect::<Result<_>>()?;
            let overlaps = mixed_fidelity_matrix(&states, labels.clone(), MixedMetric::SwapOverlap)?;
            let uhlmann = if options.uhlmann {
                Some(mixed_fidelity_matrix(&states, labels.clone(), MixedMetric::Uhlmann)?)
            } else {
                None
            };
            rows.push(NoiseRow {
                model: model.name().to_string(),
                n: s.n_qubits,
                layers: l,
                max_cross_overlap: overlaps.max_offdiag,
                min_self_overlap: overlaps.min_diag,
                max_cross_uhlmann: uhlmann.as_ref().map(|u| u.max_offdiag),
            });
            if options.emit_matrix {
                matrices.push((model.name().to_string(), l, overlaps));
            }
        }
    }
    Ok(NoiseScanReport {
        rows,
        matrices: options.emit_matrix.then_some(matrices),
    })
}
