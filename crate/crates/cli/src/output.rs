//! Output framing: a header shared by every command, JSON and CSV writers.

use std::io::Write;
use std::path::Path;

use hardyz::PrecisionConfig;
use serde::Serialize;

/// Version string recorded in every header. Builds may pin it with
/// `HARDYZ_BUILD_VERSION` (for example the output of `git describe`).
pub fn version() -> &'static str {
    option_env!("HARDYZ_BUILD_VERSION").unwrap_or(concat!("v", env!("CARGO_PKG_VERSION")))
}

pub type WriteResult<T> = Result<T, Box<dyn std::error::Error + Send + Sync>>;

#[derive(Debug, Clone, Serialize)]
pub struct Header {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub precision: PrecisionConfig,
}

impl Header {
    pub fn new(command: &str, precision: PrecisionConfig) -> Self {
        Header {
            tool: "hardyz",
            version: version(),
            command: command.to_string(),
            precision,
        }
    }

    fn csv_comment(&self) -> String {
        format!(
            "# tool={} version={} command={} target_abs_tol={:e} target_rel_tol={:e} max_series_terms={}\n",
            self.tool,
            self.version,
            self.command,
            self.precision.target_abs_tol,
            self.precision.target_rel_tol,
            self.precision.max_series_terms
        )
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    header: &'a Header,
    result: &'a T,
}

/// 17 significant digits.
pub fn f17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn json<T: Serialize>(header: &Header, result: &T) -> WriteResult<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(&Envelope { header, result })?;
    out.push(b'\n');
    Ok(out)
}

pub fn csv(header: &Header, columns: &[&str], rows: &[Vec<String>]) -> WriteResult<Vec<u8>> {
    let mut out = header.csv_comment().into_bytes();
    {
        let mut w = ::csv::Writer::from_writer(&mut out);
        w.write_record(columns)?;
        for r in rows {
            w.write_record(r)?;
        }
        w.flush()?;
    }
    Ok(out)
}

pub fn emit(bytes: &[u8], out: Option<&Path>) -> std::io::Result<()> {
    match out {
        Some(p) => std::fs::write(p, bytes),
        None => {
            let mut s = std::io::stdout().lock();
            s.write_all(bytes)?;
            s.flush()
        }
    }
}
