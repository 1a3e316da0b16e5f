use std::fmt::Write as _;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use supercheq::analytics::{bounds_row, size_table, BoundsRow, SizeRow, BOUNDS_CSV_HEADER, DEFAULT_BASE};

use crate::error::{CliError, CliResult};
use crate::output::{self, CommonArgs, Resolve};

pub const HELP: &str = "\
Bound table columns (all logarithms base 10):
  n                     qubits
  log10_haar_tail       Pr[F > 1/2] for two Haar states, (1/2)^(2^n - 1)
  log10_file_count      K = base^(2^n)
  log10_haar_collision  K(K-1) 2^(-2^n), union bound for Haar fingerprints
  log10_tdesign_l1      t-design collision bound for l = 1 (t = 1, eps = 2^(-2n))
  log10_tdesign_l2      the same for l = 2 (t = n, eps = 2^(-2n^2))
  heuristic_depth_l1    t^4.01 (n t + log2(1/eps)) for l = 1
  heuristic_depth_l2    the same for l = 2
The n = 20 row is always included. A second table follows a '# sizes' line:
  N, ie_qubits, classical_bits (ceil(sqrt(3N))), ee_qubits, naive_bits";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundsConfig {
    pub n_min: u32,
    pub n_max: u32,
    pub base: f64,
    /// File sizes in bits for the size table.
    pub sizes: Vec<usize>,
    pub nonce: Option<String>,
    pub out: Option<PathBuf>,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        Self {
            n_min: 2,
            n_max: 30,
            base: DEFAULT_BASE,
            sizes: vec![15, 1_000, 1_000_000, 1_000_000_000],
            nonce: None,
            out: None,
        }
    }
}

impl Resolve for BoundsConfig {
    fn nonce_mut(&mut self) -> &mut Option<String> {
        &mut self.nonce
    }

    fn out_mut(&mut self) -> &mut Option<PathBuf> {
        &mut self.out
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundsReport {
    pub bounds: Vec<BoundsRow>,
    pub sizes: Vec<SizeRow>,
}

pub fn resolve(common: &CommonArgs) -> CliResult<BoundsConfig> {
    let cfg: BoundsConfig = output::load(common)?;
    if cfg.n_min == 0 || cfg.n_min > cfg.n_max {
        return Err(CliError::usage("bounds needs 1 <= n_min <= n_max"));
    }
    if cfg.n_max > 64 {
        return Err(CliError::usage("bounds supports n up to 64"));
    }
    if cfg.base <= 1.0 {
        return Err(CliError::usage("the file-count base must exceed 1"));
    }
    Ok(cfg)
}

pub fn build(cfg: &BoundsConfig) -> CliResult<BoundsReport> {
    let mut grid: Vec<u32> = (cfg.n_min..=cfg.n_max).collect();
    if !grid.contains(&20) {
        grid.push(20);
        grid.sort_unstable();
    }
    let bounds = grid
        .into_iter()
        .map(|n| bounds_row(n, cfg.base))
        .collect::<Result<_, _>>()?;
    let sizes = cfg.sizes.iter().map(|&n| size_table(n)).collect::<Result<_, _>>()?;
    Ok(BoundsReport { bounds, sizes })
}

pub fn run(cfg: &BoundsConfig, json: bool) -> CliResult<()> {
    let report = build(cfg)?;
    let text = if json {
        output::json_report("bounds", cfg, &report)
    } else {
        let mut text = output::header("bounds", cfg);
        let _ = writeln!(text, "{BOUNDS_CSV_HEADER}");
        for row in &report.bounds {
            let _ = writeln!(text, "{}", row.to_csv_line());
        }
        let _ = writeln!(text, "# sizes");
        let _ = writeln!(text, "N,ie_qubits,classical_bits,ee_qubits,naive_bits");
        for s in &report.sizes {
            let _ = writeln!(
                text,
                "{},{},{},{},{}",
                s.n_bits, s.ie_qubits, s.classical_bits, s.ee_qubits, s.naive_bits
            );
        }
        text
    };
    output::write_text(cfg.out.as_deref(), &text)
}
