use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use supercheq::ee::{ee_max_fidelity_scan, LabeledMatrix, ScanReport, TrialConfig};
use supercheq::FileBits;

use crate::error::{CliError, CliResult};
use crate::family::Family;
use crate::output::{self, CommonArgs, Resolve};

pub const HELP: &str = "\
CSV columns:
  variant        grid2d_gr, fully_connected_gr, brickwork_1d, local_linear or haar
  n              register size
  L              circuit depth (empty for the Haar baseline)
  trial          trial index; its nonce is master || u32_be(trial)
  nonce          trial nonce in hex
  max_offdiag    largest |<a|b>|^2 over distinct file pairs
  haar_baseline  the same statistic for Haar fingerprints in that trial
With --emit-matrix the full matrices go to <out stem>.matrices.csv with
columns variant,L,trial,row,col,fidelity (row and col are file bit strings).";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EeScanConfig {
    pub n_qubits: usize,
    /// `[rows, cols]` for the grid family; the most square shape by default.
    pub grid: Option<(usize, usize)>,
    pub depths: Vec<usize>,
    pub families: Vec<Family>,
    /// Files are the integers `0..files`, in minimal binary unless
    /// `file_width` fixes the bit length.
    pub files: u64,
    pub file_width: Option<usize>,
    pub trials: usize,
    pub emit_matrix: bool,
    pub nonce: Option<String>,
    pub out: Option<PathBuf>,
}

impl Default for EeScanConfig {
    fn default() -> Self {
        Self {
            n_qubits: 9,
            grid: None,
            depths: (1..=10).collect(),
            families: vec![Family::Grid2dGr, Family::FullyConnectedGr],
            files: 1024,
            file_width: None,
            trials: 5,
            emit_matrix: false,
            nonce: None,
            out: None,
        }
    }
}

impl Resolve for EeScanConfig {
    fn nonce_mut(&mut self) -> &mut Option<String> {
        &mut self.nonce
    }

    fn out_mut(&mut self) -> &mut Option<PathBuf> {
        &mut self.out
    }
}

pub fn resolve(common: &CommonArgs, emit_matrix: bool) -> CliResult<EeScanConfig> {
    let mut cfg: EeScanConfig = output::load(common)?;
    cfg.emit_matrix |= emit_matrix;
    if cfg.depths.is_empty() || cfg.families.is_empty() {
        return Err(CliError::usage("ee-scan needs at least one depth and one family"));
    }
    if cfg.files < 2 || cfg.trials == 0 {
        return Err(CliError::usage("ee-scan needs at least two files and one trial"));
    }
    Ok(cfg)
}

pub fn run(cfg: &EeScanConfig, json: bool) -> CliResult<()> {
    let mut specs = Vec::new();
    for &family in &cfg.families {
        for &l in &cfg.depths {
            specs.push(family.spec(cfg.n_qubits, l, cfg.grid)?);
        }
    }
    let master = output::decode_nonce(cfg.nonce.as_deref().unwrap_or_default())?;
    let files = match cfg.file_width {
        Some(w) => (0..cfg.files).map(|v| FileBits::from_uint_width(v, w)).collect(),
        None => TrialConfig::integer_files(cfg.files),
    };
    let trials = TrialConfig::new(files, TrialConfig::trial_nonces(&master, cfg.trials))?;
    let report = ee_max_fidelity_scan(&specs, &trials, cfg.emit_matrix)?;
    let out = cfg.out.as_deref();
    if json {
        return output::write_text(out, &output::json_report("ee-scan", cfg, &report));
    }
    if cfg.emit_matrix {
        let path = output::matrix_path(out)?;
        output::write_text(Some(&path), &matrices_csv(cfg, &report))?;
    }
    output::write_text(out, &format!("{}{}", output::header("ee-scan", cfg), report.to_csv()))
}

fn matrices_csv(cfg: &EeScanConfig, report: &ScanReport) -> String {
    let mut text = output::header("ee-scan", cfg);
    text.push_str("variant,L,trial,row,col,fidelity\n");
    for LabeledMatrix {
        variant,
        layers,
        trial,
        report,
    } in report.matrices.iter().flatten()
    {
        let l = layers.map(|l| l.to_string()).unwrap_or_default();
        for (i, row) in report.matrix.iter().enumerate() {
            for (j, f) in row.iter().enumerate() {
                let _ = writeln!(text, "{variant},{l},{trial},{},{},{f}", report.labels[i], report.labels[j]);
            }
        }
    }
    text
}
