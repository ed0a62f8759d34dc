//! Text encodings of field elements and polynomials.
//!
//! An element of `F_q` is up to `n` integers in `[0, p)` joined by `:`,
//! lowest power of `t` first (`2:1` is `2 + t`). A polynomial is a `,`
//! separated list of elements, lowest degree first.

use std::fmt;

use zetafrob::gf::{FieldDesc, FqElement, FqPoly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub what: &'static str,
    /// 1-based character column in the argument.
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: column {}: {}", self.what, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err(what: &'static str, column: usize, message: impl Into<String>) -> ParseError {
    ParseError { what, column, message: message.into() }
}

/// Splits on `sep`, yielding each piece with its 0-based byte offset.
fn pieces(s: &str, sep: char) -> impl Iterator<Item = (usize, &str)> {
    let mut offset = 0;
    s.split(sep).map(move |piece| {
        let at = offset;
        offset += piece.len() + 1;
        (at, piece)
    })
}

fn digit(what: &'static str, at: usize, raw: &str, p: u64) -> Result<u64, ParseError> {
    let trimmed = raw.trim();
    let lead = raw.len() - raw.trim_start().len();
    let v: u64 = trimmed
        .parse()
        .map_err(|_| err(what, at + lead + 1, format!("expected an integer, found {trimmed:?}")))?;
    if v >= p {
        return Err(err(what, at + lead + 1, format!("{v} is not in [0, {p})")));
    }
    Ok(v)
}

/// Modulus coefficients `m_0,...,m_n` as plain integers.
pub fn parse_modulus(s: &str, p: u64) -> Result<Vec<u64>, ParseError> {
    pieces(s, ',').map(|(at, raw)| digit("modulus", at, raw, p)).collect()
}

fn parse_element_at(
    field: &FieldDesc,
    s: &str,
    base: usize,
) -> Result<FqElement, ParseError> {
    let coords = pieces(s, ':')
        .map(|(at, raw)| digit("q-poly", base + at, raw, field.p()))
        .collect::<Result<Vec<_>, _>>()?;
    if coords.len() > field.n() {
        return Err(err(
            "q-poly",
            base + 1,
            format!("element has {} coordinates, field degree is {}", coords.len(), field.n()),
        ));
    }
    field.element(&coords).map_err(|e| err("q-poly", base + 1, e.to_string()))
}

pub fn parse_element(field: &FieldDesc, s: &str) -> Result<FqElement, ParseError> {
    parse_element_at(field, s, 0)
}

pub fn parse_poly(field: &FieldDesc, s: &str) -> Result<FqPoly, ParseError> {
    if s.trim().is_empty() {
        return Err(err("q-poly", 1, "empty polynomial"));
    }
    let coeffs = pieces(s, ',')
        .map(|(at, raw)| parse_element_at(field, raw, at))
        .collect::<Result<Vec<_>, _>>()?;
    FqPoly::new(field, coeffs).map_err(|e| err("q-poly", 1, e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f9() -> FieldDesc {
        FieldDesc::new(3, 2, Some(&[1, 0, 1])).unwrap()
    }

    #[test]
    fn elements_and_polys() {
        let f = f9();
        let e = parse_element(&f, "2:1").unwrap();
        assert_eq!(e.coords(), &[2, 1]);
        assert_eq!(parse_element(&f, "1").unwrap(), f.one());
        let q = parse_poly(&f, "0:1,1,0,1").unwrap();
        assert_eq!(q.degree(), Some(3));
        assert_eq!(q.coeff(0), f.generator());
    }

    #[test]
    fn diagnostics_point_at_the_column() {
        let f = f9();
        let e = parse_poly(&f, "1,2:x,1").unwrap_err();
        assert_eq!(e.column, 5);
        let e = parse_poly(&f, "1,0,3").unwrap_err();
        assert_eq!(e.column, 5);
        assert!(e.message.contains("not in [0, 3)"));
        let e = parse_poly(&f, "1,1:1:1").unwrap_err();
        assert_eq!(e.column, 3);
        assert_eq!(parse_modulus("1,0,a", 3).unwrap_err().column, 5);
    }
}
