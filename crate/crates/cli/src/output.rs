//! Config loading and report writing shared by every subcommand.

use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{CliError, CliResult};

/// `"supercheq"` in hex.
pub const DEFAULT_NONCE_HEX: &str = "737570657263686571";

#[derive(Args, Debug, Clone, Default)]
pub struct CommonArgs {
    /// JSON config file; unknown keys are rejected.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Master nonce as hex, overriding the config.
    #[arg(long, value_name = "HEX")]
    pub nonce: Option<String>,
    /// Output file; standard output when absent.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Worker threads (defaults to all cores). Results do not depend on it.
    #[arg(long, value_name = "N")]
    pub jobs: Option<usize>,
    /// Emit the JSON mirror instead of CSV or text.
    #[arg(long)]
    pub json: bool,
}

/// Fields every config carries.
pub trait Resolve {
    fn nonce_mut(&mut self) -> &mut Option<String>;
    fn out_mut(&mut self) -> &mut Option<PathBuf>;
}

/// Loads the config (or defaults), applies flag overrides and fills in the
/// default nonce.
pub fn load<C>(common: &CommonArgs) -> CliResult<C>
where
    C: DeserializeOwned + Default + Resolve,
{
    let mut cfg: C = match &common.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Read {
                path: path.clone(),
                source,
            })?;
            serde_json::from_str(&text).map_err(|source| CliError::Parse {
                path: path.clone(),
                source,
            })?
        }
        None => C::default(),
    };
    if let Some(n) = &common.nonce {
        *cfg.nonce_mut() = Some(n.clone());
    }
    if let Some(o) = &common.out {
        *cfg.out_mut() = Some(o.clone());
    }
    let nonce = cfg.nonce_mut().get_or_insert_with(|| DEFAULT_NONCE_HEX.to_string()).clone();
    decode_nonce(&nonce)?;
    Ok(cfg)
}

pub fn decode_nonce(text: &str) -> CliResult<Vec<u8>> {
    hex::decode(text).map_err(|e| CliError::usage(format!("nonce {text:?} is not hex: {e}")))
}

/// `# supercheq <command> config=<json>`.
pub fn header<C: Serialize>(command: &str, cfg: &C) -> String {
    let json = serde_json::to_string(cfg).expect("configs serialize");
    format!("# supercheq {command} config={json}\n")
}

/// JSON mirror: `{"command", "config", ...report fields}`.
pub fn json_report<C: Serialize, R: Serialize>(command: &str, cfg: &C, report: &R) -> String {
    let mut value = serde_json::json!({ "command": command, "config": cfg });
    if let serde_json::Value::Object(fields) = serde_json::to_value(report).expect("reports serialize") {
        value.as_object_mut().expect("object").extend(fields);
    }
    let mut text = serde_json::to_string_pretty(&value).expect("reports serialize");
    text.push('\n');
    text
}

pub fn write_text(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Write {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// `runs/scan.csv` → `runs/scan.matrices.csv`.
pub fn matrix_path(out: Option<&Path>) -> CliResult<PathBuf> {
    let out = out.ok_or_else(|| CliError::usage("--emit-matrix with CSV output needs --out"))?;
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("report");
    Ok(out.with_file_name(format!("{stem}.matrices.csv")))
}
