//! Plain-text code file format.
//!
//! ```text
//! q t n
//! s s ... s      (t rows of n symbols)
//! ```
//!
//! Fields are separated by exactly one space, integers are canonical base-10
//! (no sign, no leading zeros), and the file ends with a single newline. The
//! reader is as strict as the writer, so every accepted file round-trips
//! byte for byte.

use crate::code::{CodeMatrix, Symbol};
use crate::error::{Error, Result};

pub fn write_code(m: &CodeMatrix) -> Vec<u8> {
    let mut out = String::with_capacity(16 + m.t() * m.n() * 2);
    out.push_str(&format!("{} {} {}\n", m.q(), m.t(), m.n()));
    for row in m.rows() {
        let mut first = true;
        for s in row {
            if !first {
                out.push(' ');
            }
            first = false;
            out.push_str(&s.to_string());
        }
        out.push('\n');
    }
    out.into_bytes()
}

pub fn read_code(bytes: &[u8]) -> Result<CodeMatrix> {
    let text = std::str::from_utf8(bytes).map_err(|e| parse_err(1, format!("not UTF-8: {e}")))?;
    let body = text
        .strip_suffix('\n')
        .ok_or_else(|| parse_err(text.lines().count().max(1), "missing trailing newline"))?;
    let mut lines = body.split('\n');

    let header = lines.next().unwrap_or_default();
    let fields = split_fields(header, 1)?;
    if fields.len() != 3 {
        return Err(parse_err(1, format!("header needs 3 fields `q t n`, found {}", fields.len())));
    }
    let q = parse_uint(fields[0], 1)?;
    let t = parse_uint(fields[1], 1)?;
    let n = parse_uint(fields[2], 1)?;
    let q = u32::try_from(q).map_err(|_| parse_err(1, format!("q = {q} too large")))?;
    let (t, n) = (t as usize, n as usize);
    if t == 0 || n == 0 {
        return Err(parse_err(1, "t and n must be positive"));
    }
    crate::code::check_alphabet(q).map_err(|e| parse_err(1, e.to_string()))?;

    let mut entries: Vec<Symbol> = Vec::with_capacity(t.saturating_mul(n).min(1 << 24));
    for r in 0..t {
        let line_no = r + 2;
        let line = lines
            .next()
            .ok_or_else(|| parse_err(line_no, format!("expected {t} rows, found {r}")))?;
        let fields = split_fields(line, line_no)?;
        if fields.len() != n {
            return Err(parse_err(line_no, format!("expected {n} symbols, found {}", fields.len())));
        }
        for f in fields {
            let s = parse_uint(f, line_no)?;
            if s >= u64::from(q) {
                return Err(parse_err(line_no, format!("symbol {s} not below q = {q}")));
            }
            entries.push(s as Symbol);
        }
    }
    if lines.next().is_some() {
        return Err(parse_err(t + 2, "unexpected content after last row"));
    }
    CodeMatrix::from_entries(q, t, n, entries)
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn split_fields(line: &str, line_no: usize) -> Result<Vec<&str>> {
    let fields: Vec<&str> = line.split(' ').collect();
    if fields.iter().any(|f| f.is_empty()) {
        return Err(parse_err(line_no, "fields must be separated by single spaces"));
    }
    Ok(fields)
}

fn parse_uint(field: &str, line_no: usize) -> Result<u64> {
    let canonical = field.bytes().all(|b| b.is_ascii_digit()) && (field == "0" || !field.starts_with('0'));
    if !canonical {
        return Err(parse_err(line_no, format!("`{field}` is not a canonical non-negative integer")));
    }
    field
        .parse()
        .map_err(|_| parse_err(line_no, format!("`{field}` out of range")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reads_small_file() {
        let m = read_code(b"2 2 2\n0 1\n1 0\n").unwrap();
        assert_eq!(m, CodeMatrix::from_rows(2, &[[0, 1], [1, 0]]).unwrap());
        assert_eq!(write_code(&m), b"2 2 2\n0 1\n1 0\n");
    }

    #[test]
    fn symbol_bound_violation_reports_line() {
        let err = read_code(b"3 2 2\n0 1\n5 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn malformed_inputs() {
        let cases: &[(&[u8], usize)] = &[
            (b"2 1 2\n0 1", 2),
            (b"2 2\n0 1\n", 1),
            (b"2 2 2\n0 1\n", 3),
            (b"2 2 2\n0 1\n1\n", 3),
            (b"2 2 2\n0  1\n1 0\n", 2),
            (b"2 1 2\n0 1\n\n", 3),
            (b"2 1 2\n01 1\n", 2),
            (b"1 1 1\n0\n", 1),
            (b"2 0 1\n", 1),
            (b"2 1 1\n-1\n", 2),
            (b"2 1 2\n0 1 \n", 2),
        ];
        for &(input, line) in cases {
            match read_code(input) {
                Err(Error::Parse { line: got, .. }) => {
                    assert_eq!(got, line, "input {:?}", String::from_utf8_lossy(input))
                }
                other => panic!("input {:?}: {other:?}", String::from_utf8_lossy(input)),
            }
        }
    }
}
