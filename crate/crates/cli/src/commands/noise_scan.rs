use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use supercheq::ee::{ee_noise_scan, NoiseScanOptions, NoiseScanReport};
use supercheq::sim::NoiseModel;
use supercheq::{Error, FileBits};

use crate::error::{CliError, CliResult};
use crate::family::Family;
use crate::output::{self, CommonArgs, Resolve};

/// `2^k` density matrices of `4^k` entries stay under 1 GiB up to `k = 8`.
pub const SEED_BITS_CAPACITY: usize = 8;

pub const HELP: &str = "\
CSV columns:
  model              none, pauli, thermal or coherent
  n                  seed-file length in bits, equal to the register size
  L                  circuit depth
  max_cross_overlap  largest tr(rho sigma) over distinct seed files
  min_self_overlap   smallest purity tr(rho^2)
  max_cross_uhlmann  largest Uhlmann fidelity over distinct seed files (when enabled)
Every k-bit seed file is fingerprinted. With --emit-matrix the full matrices
go to <out stem>.matrices.csv with columns model,n,L,row,col,overlap.";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseScanConfig {
    pub seed_bits: Vec<usize>,
    pub depths: Vec<usize>,
    pub family: Family,
    pub models: Vec<NoiseModel>,
    pub uhlmann: bool,
    pub emit_matrix: bool,
    pub nonce: Option<String>,
    pub out: Option<PathBuf>,
}

impl Default for NoiseScanConfig {
    fn default() -> Self {
        Self {
            seed_bits: vec![3, 4, 5],
            depths: (1..=10).collect(),
            family: Family::FullyConnectedGr,
            models: vec![
                NoiseModel::None,
                NoiseModel::pauli_default(),
                NoiseModel::thermal_default(),
                NoiseModel::coherent_default(),
            ],
            uhlmann: true,
            emit_matrix: false,
            nonce: None,
            out: None,
        }
    }
}

impl Resolve for NoiseScanConfig {
    fn nonce_mut(&mut self) -> &mut Option<String> {
        &mut self.nonce
    }

    fn out_mut(&mut self) -> &mut Option<PathBuf> {
        &mut self.out
    }
}

pub fn resolve(common: &CommonArgs, emit_matrix: bool) -> CliResult<NoiseScanConfig> {
    let mut cfg: NoiseScanConfig = output::load(common)?;
    cfg.emit_matrix |= emit_matrix;
    if cfg.seed_bits.is_empty() || cfg.depths.is_empty() || cfg.models.is_empty() {
        return Err(CliError::usage("noise-scan needs seed sizes, depths and models"));
    }
    for m in &cfg.models {
        m.validate()?;
    }
    for &k in &cfg.seed_bits {
        if k == 0 {
            return Err(CliError::usage("seed files need at least one bit"));
        }
        if k > SEED_BITS_CAPACITY {
            return Err(Error::Capacity {
                what: "noise-scan seed bits",
                requested: k,
                limit: SEED_BITS_CAPACITY,
            }
            .into());
        }
    }
    Ok(cfg)
}

pub fn run(cfg: &NoiseScanConfig, json: bool) -> CliResult<()> {
    let nonce = output::decode_nonce(cfg.nonce.as_deref().unwrap_or_default())?;
    let options = NoiseScanOptions {
        uhlmann: cfg.uhlmann,
        emit_matrix: cfg.emit_matrix,
    };
    let mut report = NoiseScanReport {
        rows: Vec::new(),
        matrices: cfg.emit_matrix.then(Vec::new),
    };
    for &k in &cfg.seed_bits {
        let spec = cfg.family.spec(k, cfg.depths[0], None)?;
        let files: Vec<FileBits> = (0..1u64 << k).map(|v| FileBits::from_uint_width(v, k)).collect();
        let part = ee_noise_scan(&spec, &cfg.models, &files, &cfg.depths, &nonce, options)?;
        report.rows.extend(part.rows);
        if let (Some(all), Some(m)) = (report.matrices.as_mut(), part.matrices) {
            all.extend(m);
        }
    }
    let out = cfg.out.as_deref();
    if json {
        return output::write_text(out, &output::json_report("noise-scan", cfg, &report));
    }
    if cfg.emit_matrix {
        let path = output::matrix_path(out)?;
        output::write_text(Some(&path), &matrices_csv(cfg, &report))?;
    }
    output::write_text(out, &format!("{}{}", output::header("noise-scan", cfg), report.to_csv()))
}

fn matrices_csv(cfg: &NoiseScanConfig, report: &NoiseScanReport) -> String {
    let mut text = output::header("noise-scan", cfg);
    text.push_str("model,n,L,row,col,overlap\n");
    for (model, l, m) in report.matrices.iter().flatten() {
        let n = m.labels.first().map_or(0, String::len);
        for (i, row) in m.matrix.iter().enumerate() {
            for (j, f) in row.iter().enumerate() {
                let _ = writeln!(text, "{model},{n},{l},{},{},{f}", m.labels[i], m.labels[j]);
            }
        }
    }
    text
}
