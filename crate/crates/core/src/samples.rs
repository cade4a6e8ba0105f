//! Sample files: one decimal value per line. Values are written in the
//! shortest form that parses back to the same `f64`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

pub fn format_samples(samples: &[f64]) -> String {
    let mut out = String::with_capacity(samples.len() * 20);
    for s in samples {
        writeln!(out, "{s:?}").expect("writing to a String");
    }
    out
}

/// Parses one value per line; blank lines are ignored. `origin` only
/// labels error messages.
pub fn parse_samples(text: &str, origin: &Path) -> Result<Vec<f64>> {
    text.lines()
        .enumerate()
        .filter(|(_, line)| !line.trim().is_empty())
        .map(|(i, line)| {
            let bad = |reason: String| Error::MalformedSamples {
                path: origin.to_path_buf(),
                line: i + 1,
                reason,
            };
            let value: f64 = line.trim().parse().map_err(|e| bad(format!("{e}: `{}`", line.trim())))?;
            if value.is_finite() {
                Ok(value)
            } else {
                Err(bad(format!("non-finite sample `{}`", line.trim())))
            }
        })
        .collect()
}

pub fn write_samples(samples: &[f64], path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_samples(samples))?;
    Ok(())
}

pub fn read_samples(path: impl AsRef<Path>) -> Result<Vec<f64>> {
    let path = path.as_ref();
    parse_samples(&fs::read_to_string(path)?, path)
}
