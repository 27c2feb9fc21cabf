//! Two-column `index value` sequence files.
//!
//! One term per line, single space, ASCII decimal, LF endings. The reader
//! skips `#` comment lines and blank lines.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_bigint::BigInt;

use crate::error::{Error, Result};

pub fn format_bfile<'a, I>(terms: I) -> String
where
    I: IntoIterator<Item = (u64, &'a BigInt)>,
{
    let mut s = String::new();
    for (i, v) in terms {
        let _ = writeln!(s, "{i} {v}");
    }
    s
}

pub fn parse_bfile(text: &str) -> Result<Vec<(u64, BigInt)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let bad = || Error::Parse {
            line: i + 1,
            reason: format!("expected `index value`, got {line:?}"),
        };
        let mut parts = trimmed.split_whitespace();
        let (Some(idx), Some(val), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(bad());
        };
        let idx: u64 = idx.parse().map_err(|_| bad())?;
        let val: BigInt = val.parse().map_err(|_| bad())?;
        if let Some(&(last, _)) = out.last() {
            if idx != last + 1 {
                return Err(Error::Parse {
                    line: i + 1,
                    reason: format!("index {idx} does not follow {last}"),
                });
            }
        }
        out.push((idx, val));
    }
    Ok(out)
}

pub fn write_bfile<'a, I>(path: &Path, terms: I) -> Result<()>
where
    I: IntoIterator<Item = (u64, &'a BigInt)>,
{
    fs::write(path, format_bfile(terms))?;
    Ok(())
}

pub fn read_bfile(path: &Path) -> Result<Vec<(u64, BigInt)>> {
    parse_bfile(&fs::read_to_string(path)?)
}
