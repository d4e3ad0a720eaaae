//! CSV and JSON sidecar output.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::config::{RunConfig, Sidecar};
use crate::error::CliError;

pub const UNITS_HEADER: &str = "# units: time in 1/omega_c, frequency in omega_c";

/// `%.12g`-style formatting: 12 significant digits, trailing zeros removed,
/// scientific notation outside `[1e-4, 1e12)`.
pub fn format_g(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    // Round first so the exponent reflects carries such as 9.99…→10.
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if !(-4..DIGITS).contains(&exp) {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn opt(x: Option<f64>) -> String {
    x.map(format_g).unwrap_or_default()
}

/// A rendered table: header plus rows of already formatted fields.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        buf.extend_from_slice(UNITS_HEADER.as_bytes());
        buf.push(b'\n');
        {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(&mut buf);
            w.write_record(&self.columns).expect("in-memory write");
            for row in &self.rows {
                w.write_record(row).expect("in-memory write");
            }
            w.flush().expect("in-memory flush");
        }
        buf
    }
}

/// Writes `bytes` to `path` through a temporary file in the same directory,
/// so an interrupted run never leaves a partial file behind.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    std::fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|e| CliError::io(&dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.as_file()
        .sync_all()
        .map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    let mut name = csv_path.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

/// `out/phase.csv` → `out/phase-free.csv`.
pub fn companion_path(csv_path: &Path) -> PathBuf {
    let stem = csv_path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = match csv_path.extension() {
        Some(ext) => format!("{stem}-free.{}", ext.to_string_lossy()),
        None => format!("{stem}-free"),
    };
    csv_path.with_file_name(name)
}

pub fn sidecar_json(cfg: &RunConfig, columns: &[&'static str]) -> Vec<u8> {
    let sidecar = Sidecar {
        generator: format!("dd-discord {}", env!("CARGO_PKG_VERSION")),
        units: UNITS_HEADER.trim_start_matches("# ").to_string(),
        columns: columns.iter().map(|c| c.to_string()).collect(),
        config: cfg.clone(),
    };
    let mut bytes = serde_json::to_vec_pretty(&sidecar).expect("serializable config");
    bytes.push(b'\n');
    bytes
}
