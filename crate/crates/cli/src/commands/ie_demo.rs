use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use supercheq::ie::graph_state_circuit;
use supercheq::{Error, FileBits, GraphFingerprint};

use crate::error::{CliError, CliResult};
use crate::output::{self, CommonArgs, Resolve};

pub const HELP: &str = "\
Encodes a file into a graph state, prints the register size, edge list and
gate counts, then applies the edit script one step at a time. After every
edit the incrementally updated graph is compared with a fresh encoding of
the edited file and VERIFIED is printed when they agree.
Edit script entries (JSON):
  {\"op\": \"flip\", \"index\": I}
  {\"op\": \"write\", \"index\": I, \"value\": true|false}
  {\"op\": \"resize\", \"length\": N}";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum Edit {
    Flip { index: usize },
    Write { index: usize, value: bool },
    Resize { length: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IeDemoConfig {
    /// File as a string of `0`/`1`.
    pub file: String,
    pub edits: Vec<Edit>,
    pub nonce: Option<String>,
    pub out: Option<PathBuf>,
}

impl Default for IeDemoConfig {
    fn default() -> Self {
        Self {
            file: "101010110111011".into(),
            edits: vec![Edit::Flip { index: 0 }],
            nonce: None,
            out: None,
        }
    }
}

impl Resolve for IeDemoConfig {
    fn nonce_mut(&mut self) -> &mut Option<String> {
        &mut self.nonce
    }

    fn out_mut(&mut self) -> &mut Option<PathBuf> {
        &mut self.out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EncodingSummary {
    #[serde(rename = "N")]
    pub n_bits: usize,
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub h_gates: usize,
    pub cz_gates: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct EditStep {
    pub edit: Edit,
    /// Adjacency entries whose value changed.
    pub toggled_edges: Vec<(usize, usize)>,
    pub verified: bool,
    /// Graph-state fidelity to the previous fingerprint; absent when the
    /// file length changed.
    pub fidelity_to_previous: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IeDemoReport {
    pub original: EncodingSummary,
    pub steps: Vec<EditStep>,
    pub edited: EncodingSummary,
    pub edited_file: String,
    pub fidelity_to_original: Option<f64>,
}

pub fn resolve(common: &CommonArgs) -> CliResult<IeDemoConfig> {
    let cfg: IeDemoConfig = output::load(common)?;
    let file: FileBits = cfg.file.parse()?;
    if file.is_empty() {
        return Err(CliError::usage("ie-demo needs a non-empty file"));
    }
    Ok(cfg)
}

fn summary(fp: &GraphFingerprint) -> EncodingSummary {
    let circuit = graph_state_circuit(fp.graph());
    EncodingSummary {
        n_bits: fp.file_length(),
        n: fp.n(),
        edges: fp.graph().edges(),
        h_gates: circuit.count("H"),
        cz_gates: circuit.count("CZ"),
    }
}

fn apply(fp: &mut GraphFingerprint, file: &mut FileBits, edit: Edit) -> CliResult<Vec<(usize, usize)>> {
    let check = |index: usize, len: usize| {
        if index < len {
            Ok(())
        } else {
            Err(CliError::from(Error::IndexOutOfRange { index, len }))
        }
    };
    Ok(match edit {
        Edit::Flip { index } => {
            check(index, file.len())?;
            file.flip(index)?;
            vec![fp.flip_bit(index)?]
        }
        Edit::Write { index, value } => {
            check(index, file.len())?;
            file.set(index, value)?;
            fp.write_bit(index, value)?.into_iter().collect()
        }
        Edit::Resize { length } => {
            if length < file.len() {
                return Err(CliError::usage(format!(
                    "resize to {length} bits would drop data from a {}-bit file",
                    file.len()
                )));
            }
            file.extend_zeros(length);
            fp.resize(length)?;
            Vec::new()
        }
    })
}

fn fidelity(a: &GraphFingerprint, b: &GraphFingerprint) -> CliResult<Option<f64>> {
    if a.file_length() != b.file_length() {
        return Ok(None);
    }
    Ok(Some(a.fidelity(b)?))
}

pub fn build(cfg: &IeDemoConfig) -> CliResult<IeDemoReport> {
    let mut file: FileBits = cfg.file.parse()?;
    let original = GraphFingerprint::encode(&file)?;
    let mut fp = original.clone();
    let mut steps = Vec::new();
    for &edit in &cfg.edits {
        let previous = fp.clone();
        let toggled_edges = apply(&mut fp, &mut file, edit)?;
        let verified = fp == GraphFingerprint::encode(&file)?;
        steps.push(EditStep {
            edit,
            toggled_edges,
            verified,
            fidelity_to_previous: fidelity(&previous, &fp)?,
        });
    }
    Ok(IeDemoReport {
        original: summary(&original),
        edited: summary(&fp),
        edited_file: file.to_string(),
        fidelity_to_original: fidelity(&original, &fp)?,
        steps,
    })
}

fn fmt_edges(edges: &[(usize, usize)]) -> String {
    edges.iter().map(|(i, j)| format!("({i},{j})")).collect::<Vec<_>>().join(" ")
}

fn fmt_fidelity(f: Option<f64>) -> String {
    f.map_or_else(|| "n/a (length changed)".into(), |f| f.to_string())
}

fn describe(edit: Edit) -> String {
    match edit {
        Edit::Flip { index } => format!("flip bit {index}"),
        Edit::Write { index, value } => format!("write bit {index} = {}", u8::from(value)),
        Edit::Resize { length } => format!("resize to {length} bits"),
    }
}

fn write_summary(text: &mut String, label: &str, s: &EncodingSummary) {
    let _ = writeln!(text, "{label}: N={} bits, n={} qubits", s.n_bits, s.n);
    let _ = writeln!(text, "  edges ({}): {}", s.edges.len(), fmt_edges(&s.edges));
    let _ = writeln!(text, "  circuit: {} H, {} CZ", s.h_gates, s.cz_gates);
}

pub fn render(cfg: &IeDemoConfig, report: &IeDemoReport) -> String {
    let mut text = output::header("ie-demo", cfg);
    let _ = writeln!(text, "file: {}", cfg.file);
    write_summary(&mut text, "original", &report.original);
    for (k, step) in report.steps.iter().enumerate() {
        let touched = match step.toggled_edges.as_slice() {
            [] => "no edge toggled".to_string(),
            [(i, j)] => format!("toggled edge ({i},{j}), one CZ"),
            many => format!("toggled edges {}", fmt_edges(many)),
        };
        let _ = writeln!(
            text,
            "edit {}: {}; {touched}; incremental vs scratch: {}; fidelity to previous: {}",
            k + 1,
            describe(step.edit),
            if step.verified { "VERIFIED" } else { "MISMATCH" },
            fmt_fidelity(step.fidelity_to_previous)
        );
    }
    let _ = writeln!(text, "edited file: {}", report.edited_file);
    write_summary(&mut text, "edited", &report.edited);
    let _ = writeln!(text, "fidelity to original: {}", fmt_fidelity(report.fidelity_to_original));
    text
}

pub fn run(cfg: &IeDemoConfig, json: bool) -> CliResult<()> {
    let report = build(cfg)?;
    let text = if json {
        output::json_report("ie-demo", cfg, &report)
    } else {
        render(cfg, &report)
    };
    output::write_text(cfg.out.as_deref(), &text)?;
    if report.steps.iter().all(|s| s.verified) {
        Ok(())
    } else {
        Err(Error::Invariant("incremental fingerprint diverged from a fresh encoding".into()).into())
    }
}
