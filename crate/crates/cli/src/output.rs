use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use advdiff::Error;
use serde::Serialize;

pub const USAGE: u8 = 1;
pub const DIVERGED: u8 = 2;
pub const ORACLE: u8 = 3;
pub const INFEASIBLE: u8 = 4;

/// Message and process exit code of a failed command.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Divergence { .. } | Error::StepUnderflow { .. } | Error::Perturbation { .. } => DIVERGED,
            Error::OracleUnreliable { .. } => ORACLE,
            Error::FitInfeasible(_) => INFEASIBLE,
            _ => USAGE,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::usage(e.to_string())
    }
}

/// 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

/// CSV text from a header and numeric rows.
pub fn csv<I>(header: &str, rows: I) -> String
where
    I: IntoIterator,
    I::Item: AsRef<[f64]>,
{
    let mut s = String::with_capacity(4096);
    s.push_str(header);
    s.push('\n');
    for row in rows {
        for (i, v) in row.as_ref().iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{}", num(*v));
        }
        s.push('\n');
    }
    s
}

pub fn prepare_dir(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| Failure::usage(format!("output directory {}: {e}", dir.display())))?;
    let probe = dir.join(".advdiff-write-test");
    fs::write(&probe, b"").map_err(|e| Failure::usage(format!("output directory {} is not writable: {e}", dir.display())))?;
    let _ = fs::remove_file(probe);
    Ok(())
}

pub fn write_text(dir: &Path, name: &str, text: &str) -> Result<(), Failure> {
    fs::write(dir.join(name), text).map_err(|e| Failure::usage(format!("{}: {e}", dir.join(name).display())))
}

pub fn write_json<S: Serialize>(dir: &Path, name: &str, value: &S) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::usage(e.to_string()))?;
    write_text(dir, name, &(text + "\n"))
}
