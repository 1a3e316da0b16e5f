//! SWAP tests, the referee, and simultaneous-message-passing sessions.

use serde::{Deserialize, Serialize};

use crate::bits::FileBits;
use crate::circuit::Gate;
use crate::ee::{fingerprint_ee, EncodingSpec, STATEVECTOR_CAPACITY};
use crate::error::{Error, Result};
use crate::ie::GraphFingerprint;
use crate::sim::{fidelity, QuantumState, StateVector};
use crate::stream::{derive_stream, SeededStream};

/// Smallest `M` with `c^M ≤ ε`, i.e. `⌈ln ε / ln c⌉`.
pub fn copies_needed(epsilon: f64, cap: f64) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::config(format!("ε = {epsilon} must lie in (0, 1)")));
    }
    if !(cap > 0.0 && cap < 1.0) {
        return Err(Error::config(format!("fidelity cap c = {cap} must lie in (0, 1)")));
    }
    let mut m = ((epsilon.ln() / cap.ln()) - 1e-9).ceil().max(1.0) as usize;
    while cap.powi(m as i32) > epsilon {
        m += 1;
    }
    Ok(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SwapTestKind {
    /// Ancilla-controlled SWAP; `count` is the number of ancilla zeros.
    Standard,
    /// Transversal CX + H on all `2n` qubits; `count` is the number of
    /// odd-parity (reject) outcomes.
    Destructive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SwapTestOutcome {
    pub kind: SwapTestKind,
    pub shots: u64,
    pub count: u64,
    /// Unclamped estimator of `|⟨a|b⟩|²`.
    pub raw_estimate: f64,
    /// `raw_estimate` clamped to `[-δ, 1+δ]`, `δ = 3/√shots`.
    pub fidelity_estimate: f64,
}

impl SwapTestOutcome {
    fn new(kind: SwapTestKind, shots: u64, count: u64) -> Self {
        let frac = count as f64 / shots as f64;
        let raw = match kind {
            SwapTestKind::Standard => 2.0 * frac - 1.0,
            SwapTestKind::Destructive => 1.0 - 2.0 * frac,
        };
        let delta = 3.0 / (shots as f64).sqrt();
        Self {
            kind,
            shots,
            count,
            raw_estimate: raw,
            fidelity_estimate: raw.clamp(-delta, 1.0 + delta),
        }
    }

    /// Every shot gave the "equal" outcome.
    pub fn all_passed(&self) -> bool {
        match self.kind {
            SwapTestKind::Standard => self.count == self.shots,
            SwapTestKind::Destructive => self.count == 0,
        }
    }
}

fn check_shots(shots: u64) -> Result<()> {
    if shots == 0 {
        Err(Error::config("a SWAP test needs at least one shot"))
    } else {
        Ok(())
    }
}

/// Samples the ancilla of a standard SWAP test, `Pr[0] = (1 + F)/2`, where
/// `F` is `tr(ρσ)` for mixed inputs.
pub fn standard_swap_test(
    a: &QuantumState,
    b: &QuantumState,
    shots: u64,
    stream: &mut SeededStream,
) -> Result<SwapTestOutcome> {
    check_shots(shots)?;
    let p0 = (1.0 + fidelity(a, b)?) / 2.0;
    let zeros = (0..shots).filter(|_| stream.bernoulli(p0)).count() as u64;
    Ok(SwapTestOutcome::new(SwapTestKind::Standard, shots, zeros))
}

/// Output distribution of the destructive SWAP test circuit on `a ⊗ b`,
/// with `a` on qubits `0..n` and `b` on `n..2n`.
pub fn destructive_distribution(a: &StateVector, b: &StateVector) -> Result<Vec<f64>> {
    let n = a.n_qubits();
    if b.n_qubits() != n {
        return Err(Error::dimension(format!(
            "SWAP test between {n}- and {}-qubit states",
            b.n_qubits()
        )));
    }
    if 2 * n > STATEVECTOR_CAPACITY {
        return Err(Error::Capacity {
            what: "destructive SWAP test qubits",
            requested: 2 * n,
            limit: STATEVECTOR_CAPACITY,
        });
    }
    let mut joint = b.tensor(a);
    for q in 0..n {
        joint.apply(&Gate::Cx(q, q + n));
        joint.apply(&Gate::H(q));
    }
    Ok(joint.probabilities())
}

/// `⊕ᵢ (aᵢ ∧ bᵢ)` of a `2n`-bit outcome.
pub fn and_parity(outcome: usize, n: usize) -> bool {
    let a = outcome & ((1 << n) - 1);
    let b = outcome >> n;
    (a & b).count_ones() % 2 == 1
}

/// Materialised destructive SWAP test; rejects on odd AND-parity.
pub fn destructive_swap_test(
    a: &StateVector,
    b: &StateVector,
    shots: u64,
    stream: &mut SeededStream,
) -> Result<SwapTestOutcome> {
    check_shots(shots)?;
    let n = a.n_qubits();
    let probs = destructive_distribution(a, b)?;
    let mut cdf = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for p in &probs {
        acc += p;
        cdf.push(acc);
    }
    let total = acc;
    let mut rejects = 0;
    for _ in 0..shots {
        let u = stream.next_f64() * total;
        let x = cdf.partition_point(|&c| c <= u).min(probs.len() - 1);
        if and_parity(x, n) {
            rejects += 1;
        }
    }
    Ok(SwapTestOutcome::new(SwapTestKind::Destructive, shots, rejects))
}

/// How the referee turns test outcomes into a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum RefereeMode {
    /// Equal iff every test passed; wrong accepts bounded by `cap^M`.
    Protocol { cap: f64 },
    /// Pools all shots and compares the estimate with the midpoint between
    /// the expected self-overlap and the largest expected cross-overlap.
    Threshold { self_overlap: f64, cross_overlap: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Decision {
    pub equal: bool,
    /// Bound on the probability that this verdict is wrong.
    pub error_bound: f64,
}

pub fn referee_decide(outcomes: &[SwapTestOutcome], mode: RefereeMode) -> Result<Decision> {
    if outcomes.is_empty() {
        return Err(Error::config("the referee needs at least one test outcome"));
    }
    match mode {
        RefereeMode::Protocol { cap } => {
            let equal = outcomes.iter().all(SwapTestOutcome::all_passed);
            let error_bound = if equal { cap.powi(outcomes.len() as i32) } else { 0.0 };
            Ok(Decision { equal, error_bound })
        }
        RefereeMode::Threshold {
            self_overlap,
            cross_overlap,
        } => {
            if self_overlap <= cross_overlap {
                return Err(Error::config("self-overlap must exceed cross-overlap"));
            }
            let kind = outcomes[0].kind;
            if outcomes.iter().any(|o| o.kind != kind) {
                return Err(Error::config("cannot pool standard and destructive outcomes"));
            }
            let shots: u64 = outcomes.iter().map(|o| o.shots).sum();
            let count: u64 = outcomes.iter().map(|o| o.count).sum();
            let pooled = SwapTestOutcome::new(kind, shots, count);
            let threshold = (self_overlap + cross_overlap) / 2.0;
            let margin = (self_overlap - cross_overlap) / 2.0;
            // Hoeffding on the pass fraction, whose mean moves by margin/2
            let error_bound = (-(shots as f64) * margin * margin / 2.0).exp().min(1.0);
            Ok(Decision {
                equal: pooled.raw_estimate >= threshold,
                error_bound,
            })
        }
    }
}

/// Encoding used by both parties of a session.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Protocol {
    /// Graph-state fingerprints; distinct fidelities are at most 1/2.
    Ie,
    /// Random-circuit fingerprints under a public nonce, with a configured
    /// cap on distinct fidelities.
    Ee {
        encoding: EncodingSpec,
        #[serde(default = "default_cap")]
        fidelity_cap: f64,
    },
}

fn default_cap() -> f64 {
    0.5
}

impl Protocol {
    pub fn cap(&self) -> f64 {
        match self {
            Protocol::Ie => 0.5,
            Protocol::Ee { fidelity_cap, .. } => *fidelity_cap,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Protocol::Ie => "ie".into(),
            Protocol::Ee { encoding, .. } => format!("ee/{}", encoding.variant.name()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SessionConfig {
    pub protocol: Protocol,
    pub test: SwapTestKind,
    /// Target worst-case one-sided error.
    pub epsilon: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SmpTranscript {
    pub protocol: String,
    #[serde(rename = "N")]
    pub n_bits: usize,
    pub n: usize,
    #[serde(rename = "M")]
    pub copies: usize,
    pub qubits_sent: usize,
    pub classical_naive_bits: usize,
    pub classical_optimal_bits: usize,
    pub decision: String,
    pub error_bound: f64,
    pub recycled: bool,
}

/// `⌈√(3N)⌉`.
pub fn classical_fingerprint_bits(n_bits: usize) -> usize {
    let mut b = ((3.0 * n_bits as f64).sqrt()).ceil() as usize;
    while b > 0 && (b - 1) * (b - 1) >= 3 * n_bits {
        b -= 1;
    }
    while b * b < 3 * n_bits {
        b += 1;
    }
    b
}

fn fingerprint(protocol: &Protocol, file: &FileBits, nonce: &[u8]) -> Result<StateVector> {
    match protocol {
        Protocol::Ie => {
            let g = GraphFingerprint::encode(file)?;
            crate::sim::run_circuit(
                &crate::ie::graph_state_circuit(g.graph()),
                &StateVector::zero(g.n()),
            )
        }
        Protocol::Ee { encoding, .. } => fingerprint_ee(encoding, file, nonce),
    }
}

fn register_size(protocol: &Protocol, n_bits: usize) -> Result<usize> {
    match protocol {
        Protocol::Ie => crate::ie::qubits_for_file(n_bits),
        Protocol::Ee { encoding, .. } => Ok(encoding.n_qubits),
    }
}

/// Single-shot test of one copy pair. IE standard tests use the closed-form
/// graph fidelity so registers of any size are supported.
fn one_copy(
    config: &SessionConfig,
    states: &Option<(StateVector, StateVector)>,
    graph_fidelity: Option<f64>,
    stream: &mut SeededStream,
) -> Result<SwapTestOutcome> {
    if let Some(f) = graph_fidelity {
        let zeros = u64::from(stream.bernoulli((1.0 + f) / 2.0));
        return Ok(SwapTestOutcome::new(SwapTestKind::Standard, 1, zeros));
    }
    let Some((a, b)) = states else {
        return Err(Error::Invariant("session states were not prepared".into()));
    };
    match config.test {
        SwapTestKind::Standard => standard_swap_test(
            &QuantumState::Pure(a.clone()),
            &QuantumState::Pure(b.clone()),
            1,
            stream,
        ),
        SwapTestKind::Destructive => destructive_swap_test(a, b, 1, stream),
    }
}

/// One SMP session: each party sends `M` fingerprints, the referee runs `M`
/// single-shot tests. `nonce` fixes the EE dictionary and the referee's
/// measurement randomness.
pub fn run_smp_session(
    config: &SessionConfig,
    file_a: &FileBits,
    file_b: &FileBits,
    nonce: &[u8],
) -> Result<SmpTranscript> {
    let cap = config.protocol.cap();
    let m = copies_needed(config.epsilon, cap)?;
    let n_bits = file_a.len().max(file_b.len());
    let n = register_size(&config.protocol, n_bits)?;
    let mut transcript = SmpTranscript {
        protocol: config.protocol.name(),
        n_bits,
        n,
        copies: m,
        qubits_sent: 2 * m * n,
        classical_naive_bits: 2 * n_bits,
        classical_optimal_bits: classical_fingerprint_bits(n_bits) * m,
        decision: "unequal".into(),
        error_bound: 0.0,
        recycled: false,
    };
    if matches!(config.protocol, Protocol::Ie) && file_a.len() != file_b.len() {
        // the recorded lengths already differ
        return Ok(transcript);
    }
    let graph_fid = match (&config.protocol, config.test) {
        (Protocol::Ie, SwapTestKind::Standard) => Some(
            GraphFingerprint::encode(file_a)?.fidelity(&GraphFingerprint::encode(file_b)?)?,
        ),
        _ => None,
    };
    let states = if graph_fid.is_some() {
        None
    } else {
        Some((
            fingerprint(&config.protocol, file_a, nonce)?,
            fingerprint(&config.protocol, file_b, nonce)?,
        ))
    };
    let mut referee = derive_stream(&FileBits::zeros(0), nonce).fork(b"referee");
    let outcomes = (0..m)
        .map(|_| one_copy(config, &states, graph_fid, &mut referee))
        .collect::<Result<Vec<_>>>()?;
    let decision = referee_decide(&outcomes, RefereeMode::Protocol { cap })?;
    transcript.decision = if decision.equal { "equal" } else { "unequal" }.into();
    transcript.error_bound = decision.error_bound;
    transcript.recycled = decision.equal && config.test == SwapTestKind::Standard;
    Ok(transcript)
}
