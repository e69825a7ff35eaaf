//! Zero files: one positive decimal ordinate per line in ascending order,
//! optionally preceded by a header `# label k N T_max checksum` where the
//! checksum is the SHA-256 of every byte after the header line.

use std::fmt::Write as _;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroHeader {
    pub label: String,
    pub weight: u32,
    pub level: u64,
    pub t_max: f64,
    pub checksum: String,
}

#[derive(Debug, Clone)]
pub struct ParsedZeros {
    pub header: Option<ZeroHeader>,
    pub ordinates: Vec<f64>,
}

pub fn checksum(body: &[u8]) -> String {
    hex::encode(Sha256::digest(body))
}

fn parse_header(line: &str) -> Option<ZeroHeader> {
    let fields: Vec<&str> = line.trim_start_matches('#').split_whitespace().collect();
    if fields.len() != 5 {
        return None;
    }
    Some(ZeroHeader {
        label: fields[0].to_string(),
        weight: fields[1].parse().ok()?,
        level: fields[2].parse().ok()?,
        t_max: fields[3].parse().ok()?,
        checksum: fields[4].to_string(),
    })
}

/// Parses the text of a zero file. Ordering and sign are checked by the
/// caller; only syntax and the checksum are checked here.
pub fn parse_zero_text(text: &str, path: &Path) -> Result<ParsedZeros> {
    let (header, body, first_body_line) = match text.strip_prefix('#') {
        Some(_) => {
            let (line, rest) = text.split_once('\n').unwrap_or((text, ""));
            match parse_header(line) {
                Some(h) => (Some(h), rest, 2),
                None => (None, text, 1),
            }
        }
        None => (None, text, 1),
    };
    if let Some(h) = &header {
        let actual = checksum(body.as_bytes());
        if actual != h.checksum {
            return Err(Error::CacheCorrupt(format!(
                "{}: checksum {} does not match header {}",
                path.display(),
                actual,
                h.checksum
            )));
        }
    }
    let mut ordinates = Vec::new();
    for (i, line) in body.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let v: f64 = line.parse().map_err(|_| Error::FileParse {
            path: path.to_path_buf(),
            line: i + first_body_line,
            msg: format!("bad ordinate `{line}`"),
        })?;
        ordinates.push(v);
    }
    Ok(ParsedZeros { header, ordinates })
}

/// Renders ordinates as a body (shortest round-trip decimal, one per line).
pub fn render_body(ordinates: &[f64]) -> String {
    let mut body = String::with_capacity(ordinates.len() * 20);
    for v in ordinates {
        writeln!(body, "{v}").expect("write to string");
    }
    body
}

pub fn render_zero_file(label: &str, weight: u32, level: u64, t_max: f64, ordinates: &[f64]) -> String {
    let body = render_body(ordinates);
    let label = if label.is_empty() { "-" } else { label };
    format!("# {} {} {} {} {}\n{}", label.replace(char::is_whitespace, "_"), weight, level, t_max, checksum(body.as_bytes()), body)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn render_parse_round_trip() {
        let text = render_zero_file("11.a2", 2, 11, 10.0, &[6.362613894713, 8.6035396192]);
        let parsed = parse_zero_text(&text, Path::new("t")).unwrap();
        let h = parsed.header.unwrap();
        assert_eq!((h.label.as_str(), h.weight, h.level, h.t_max), ("11.a2", 2, 11, 10.0));
        assert_eq!(parsed.ordinates, vec![6.362613894713, 8.6035396192]);
    }

    #[test]
    fn tampered_body_detected() {
        let text = render_zero_file("x", 2, 11, 10.0, &[1.0, 2.0]).replace("2\n", "2.5\n");
        assert!(matches!(parse_zero_text(&text, Path::new("t")), Err(Error::CacheCorrupt(_))));
    }

    #[test]
    fn headerless_and_comments() {
        let p = parse_zero_text("# just a note\n1.0\n\n2.5\n", Path::new("t")).unwrap();
        assert!(p.header.is_none());
        assert_eq!(p.ordinates, vec![1.0, 2.5]);
        assert!(matches!(parse_zero_text("1.0\nabc\n", Path::new("t")), Err(Error::FileParse { line: 2, .. })));
    }
}
