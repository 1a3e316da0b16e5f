use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use supercheq::verify::{run_smp_session, Protocol, SessionConfig, SmpTranscript, SwapTestKind};
use supercheq::FileBits;

use crate::error::CliResult;
use crate::output::{self, CommonArgs, Resolve};

pub const HELP: &str = "\
Runs one simultaneous-message-passing session: both parties send M copies of
their fingerprint, the referee runs M single-shot SWAP tests and declares the
files equal only if all pass. M is the smallest count with c^M <= epsilon.
The protocol is {\"kind\": \"ie\"} or {\"kind\": \"ee\", \"encoding\": {...},
\"fidelity_cap\": c}; test is \"standard\" or \"destructive\".
Prints the transcript and a table of quantum versus classical message sizes.";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SmpConfig {
    pub file_a: String,
    pub file_b: String,
    pub protocol: Protocol,
    pub test: SwapTestKind,
    pub epsilon: f64,
    pub nonce: Option<String>,
    pub out: Option<PathBuf>,
}

impl Default for SmpConfig {
    fn default() -> Self {
        Self {
            file_a: "101010110111011".into(),
            file_b: "101010110111011".into(),
            protocol: Protocol::Ie,
            test: SwapTestKind::Standard,
            epsilon: 1e-6,
            nonce: None,
            out: None,
        }
    }
}

impl Resolve for SmpConfig {
    fn nonce_mut(&mut self) -> &mut Option<String> {
        &mut self.nonce
    }

    fn out_mut(&mut self) -> &mut Option<PathBuf> {
        &mut self.out
    }
}

pub fn resolve(common: &CommonArgs) -> CliResult<SmpConfig> {
    let cfg: SmpConfig = output::load(common)?;
    cfg.file_a.parse::<FileBits>()?;
    cfg.file_b.parse::<FileBits>()?;
    Ok(cfg)
}

#[derive(Serialize)]
struct SmpReport<'a> {
    transcript: &'a SmpTranscript,
}

pub fn render(cfg: &SmpConfig, t: &SmpTranscript) -> String {
    let mut text = output::header("smp", cfg);
    let test = match cfg.test {
        SwapTestKind::Standard => "standard",
        SwapTestKind::Destructive => "destructive",
    };
    let _ = writeln!(text, "protocol: {}  test: {test}  epsilon: {}", t.protocol, cfg.epsilon);
    let _ = writeln!(text, "N = {} bits, n = {} qubits, M = {} copies", t.n_bits, t.n, t.copies);
    if t.decision == "equal" {
        let _ = writeln!(text, "decision: equal (wrong-accept bound c^M = {:e})", t.error_bound);
    } else {
        let _ = writeln!(text, "decision: unequal (one-sided, never wrong for equal files)");
    }
    let _ = writeln!(text, "fingerprints reusable: {}", if t.recycled { "yes" } else { "no" });
    let _ = writeln!(text);
    let _ = writeln!(text, "{:<36}{:>10}", "message", "size");
    let _ = writeln!(text, "{:<36}{:>10}", "quantum, 2·M·n qubits", t.qubits_sent);
    let _ = writeln!(text, "{:<36}{:>10}", "classical naive, 2·N bits", t.classical_naive_bits);
    let _ = writeln!(text, "{:<36}{:>10}", "classical fingerprint, M·⌈√3N⌉ bits", t.classical_optimal_bits);
    text
}

pub fn run(cfg: &SmpConfig) -> CliResult<SmpTranscript> {
    let session = SessionConfig {
        protocol: cfg.protocol.clone(),
        test: cfg.test,
        epsilon: cfg.epsilon,
    };
    let nonce = output::decode_nonce(cfg.nonce.as_deref().unwrap_or_default())?;
    Ok(run_smp_session(
        &session,
        &cfg.file_a.parse()?,
        &cfg.file_b.parse()?,
        &nonce,
    )?)
}

pub fn run_and_write(cfg: &SmpConfig, json: bool) -> CliResult<()> {
    let t = run(cfg)?;
    let text = if json {
        output::json_report("smp", cfg, &SmpReport { transcript: &t })
    } else {
        render(cfg, &t)
    };
    output::write_text(cfg.out.as_deref(), &text)
}
