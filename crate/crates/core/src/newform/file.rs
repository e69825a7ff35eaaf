//! Plain-text q-expansion files: a header `k N label`, then `n c_n` lines of
//! raw integer coefficients in ascending `n`.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct CoeffFile {
    pub weight: u32,
    pub level: u64,
    pub label: String,
    /// Raw coefficient of `q^n` at index `n` (index 0 unused).
    pub raw: Vec<f64>,
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::FileParse { path: PathBuf::from(path), line, msg: msg.into() }
}

pub fn read_coeff_file(path: &Path) -> Result<CoeffFile> {
    let text = fs::read_to_string(path)?;
    parse_coeff_file(&text, path)
}

pub fn parse_coeff_file(text: &str, path: &Path) -> Result<CoeffFile> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (hl, header) = lines.next().ok_or_else(|| parse_err(path, 1, "empty file"))?;
    let mut parts = header.split_whitespace();
    let weight = parts
        .next()
        .and_then(|s| s.parse::<u32>().ok())
        .ok_or_else(|| parse_err(path, hl + 1, "header: expected weight"))?;
    let level = parts
        .next()
        .and_then(|s| s.parse::<u64>().ok())
        .ok_or_else(|| parse_err(path, hl + 1, "header: expected level"))?;
    let label = parts.collect::<Vec<_>>().join(" ");
    let mut raw = vec![0.0];
    for (i, line) in lines {
        let mut f = line.split_whitespace();
        let (Some(n), Some(c), None) = (f.next(), f.next(), f.next()) else {
            return Err(parse_err(path, i + 1, "expected `n c_n`"));
        };
        let n: usize = n.parse().map_err(|_| parse_err(path, i + 1, "bad index"))?;
        if n != raw.len() {
            return Err(parse_err(path, i + 1, format!("expected index {}, found {n}", raw.len())));
        }
        let c = BigInt::from_str(c).map_err(|_| parse_err(path, i + 1, "bad integer coefficient"))?;
        raw.push(c.to_f64().ok_or_else(|| parse_err(path, i + 1, "coefficient not representable"))?);
    }
    Ok(CoeffFile { weight, level, label, raw })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_header_and_rows() {
        let f = parse_coeff_file("12 1 delta\n1 1\n2 -24\n3 252\n", Path::new("t")).unwrap();
        assert_eq!((f.weight, f.level, f.label.as_str()), (12, 1, "delta"));
        assert_eq!(f.raw, vec![0.0, 1.0, -24.0, 252.0]);
    }

    #[test]
    fn rejects_gaps_and_garbage() {
        assert!(matches!(parse_coeff_file("2 11 e\n1 1\n3 -1\n", Path::new("t")), Err(Error::FileParse { line: 3, .. })));
        assert!(matches!(parse_coeff_file("2 11 e\n1 x\n", Path::new("t")), Err(Error::FileParse { .. })));
        assert!(matches!(parse_coeff_file("two 11\n", Path::new("t")), Err(Error::FileParse { .. })));
    }
}
