//! Text format for digit sets.
//!
//! ```text
//! # Cantor middle-thirds set
//! fcube 1
//! n=3 d=1
//! digit: 0
//! digit: 2
//! ```
//!
//! Planar sets may instead give `n` rows of `n` characters from `.#`;
//! the top row is the highest second coordinate.

use crate::error::{Error, Result};

use super::DigitSet;

const MAGIC: &str = "fcube 1";

/// Parses the digit-set text format.
pub fn parse_digitset(text: &[u8]) -> Result<DigitSet> {
    let text = std::str::from_utf8(text).map_err(|e| {
        let before = &text[..e.valid_up_to()];
        let line = before.iter().filter(|&&b| b == b'\n').count() + 1;
        let column = before.iter().rev().take_while(|&&b| b != b'\n').count() + 1;
        Error::syntax(line, column, "input is not valid UTF-8")
    })?;

    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end()));

    let mut next_content = |allow_comments: bool| {
        lines.by_ref().find(|(_, l)| {
            let t = l.trim_start();
            !(t.is_empty() || allow_comments && t.starts_with('#'))
        })
    };

    let (line_no, magic) =
        next_content(true).ok_or_else(|| Error::syntax(1, 1, "missing `fcube 1` header"))?;
    if magic.trim() != MAGIC {
        return Err(Error::syntax(
            line_no,
            1,
            format!("expected `{MAGIC}`, found `{}`", magic.trim()),
        ));
    }

    let (line_no, header) =
        next_content(true).ok_or_else(|| Error::syntax(line_no + 1, 1, "missing `n=<int> d=<int>` line"))?;
    let (base, dim) = parse_header(line_no, header)?;
    if base < 2 {
        return Err(Error::BaseTooSmall(base));
    }
    if dim == 0 {
        return Err(Error::ZeroDimension);
    }

    let mut digits: Vec<Vec<i64>> = Vec::new();
    let mut grid_rows = 0u64;
    let mut mode: Option<Mode> = None;
    for (line_no, line) in lines {
        let content = line.trim_start();
        let indent = line.len() - content.len();
        if content.is_empty() {
            continue;
        }
        let is_grid_row =
            dim == 2 && content.len() as u64 == base && content.bytes().all(|b| b == b'.' || b == b'#');
        if is_grid_row && mode != Some(Mode::Digits) && grid_rows < base {
            mode = Some(Mode::Grid);
            let y = base - 1 - grid_rows;
            for (x, b) in content.bytes().enumerate() {
                if b == b'#' {
                    digits.push(vec![x as i64, y as i64]);
                }
            }
            grid_rows += 1;
            continue;
        }
        let inside_grid = mode == Some(Mode::Grid) && grid_rows < base;
        if content.starts_with('#') && !inside_grid {
            continue;
        }
        if let Some(rest) = content.strip_prefix("digit:") {
            if mode == Some(Mode::Grid) {
                return Err(Error::syntax(
                    line_no,
                    indent + 1,
                    "digit line mixed with grid rows",
                ));
            }
            mode = Some(Mode::Digits);
            let col0 = indent + "digit:".len();
            digits.push(parse_coordinates(line_no, col0, rest, dim)?);
            continue;
        }
        let message = if inside_grid {
            format!("grid row must be {base} characters from `.#`")
        } else {
            format!("unexpected content `{content}`")
        };
        return Err(Error::syntax(line_no, indent + 1, message));
    }
    if mode == Some(Mode::Grid) && grid_rows != base {
        return Err(Error::syntax(
            text.lines().count() + 1,
            1,
            format!("expected {base} grid rows, found {grid_rows}"),
        ));
    }
    DigitSet::from_signed(base, dim, digits)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Grid,
    Digits,
}

fn parse_header(line_no: usize, header: &str) -> Result<(u64, usize)> {
    let mut base = None;
    let mut dim = None;
    let mut column = 1;
    for token in header.split_whitespace() {
        let offset = header[column - 1..].find(token).unwrap_or(0) + column - 1;
        column = offset + token.len() + 1;
        let (key, value) = token.split_once('=').ok_or_else(|| {
            Error::syntax(
                line_no,
                offset + 1,
                format!("expected key=value, found `{token}`"),
            )
        })?;
        let slot = match key {
            "n" if base.is_none() => &mut base,
            "d" if dim.is_none() => &mut dim,
            _ => {
                return Err(Error::syntax(
                    line_no,
                    offset + 1,
                    format!("unexpected key `{key}`"),
                ))
            }
        };
        let parsed: u64 = value.parse().map_err(|_| {
            Error::syntax(
                line_no,
                offset + key.len() + 2,
                format!("`{value}` is not an integer"),
            )
        })?;
        *slot = Some(parsed);
    }
    match (base, dim) {
        (Some(n), Some(d)) => Ok((n, d as usize)),
        _ => Err(Error::syntax(line_no, 1, "expected `n=<int> d=<int>`")),
    }
}

fn parse_coordinates(line_no: usize, col0: usize, rest: &str, dim: usize) -> Result<Vec<i64>> {
    let mut coords = Vec::with_capacity(dim);
    let mut search_from = 0;
    for token in rest.split_whitespace() {
        let offset = rest[search_from..].find(token).unwrap_or(0) + search_from;
        search_from = offset + token.len();
        let value: i64 = token
            .parse()
            .map_err(|_| Error::syntax(line_no, col0 + offset + 1, format!("`{token}` is not an integer")))?;
        coords.push(value);
    }
    if coords.len() != dim {
        return Err(Error::syntax(
            line_no,
            col0 + 1,
            format!("expected {dim} coordinates, found {}", coords.len()),
        ));
    }
    Ok(coords)
}

/// Canonical coordinate-list serialization; digits in lexicographic order.
pub fn serialize_digitset(digits: &DigitSet) -> String {
    let mut out = format!("{MAGIC}\nn={} d={}\n", digits.base(), digits.dim());
    for d in digits.digits() {
        out.push_str("digit:");
        for c in d {
            out.push(' ');
            out.push_str(&c.to_string());
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cantor_list_form() {
        let d = parse_digitset(b"fcube 1\nn=3 d=1\ndigit: 0\ndigit: 2\n").unwrap();
        assert_eq!((d.base(), d.dim()), (3, 1));
        assert_eq!(d.to_vecs(), vec![vec![0], vec![2]]);
    }

    #[test]
    fn carpet_grid_form() {
        let text = "# Sierpinski carpet\nfcube 1\nn=3 d=2\n###\n#.#\n###\n";
        let d = parse_digitset(text.as_bytes()).unwrap();
        assert_eq!(d.len(), 8);
        assert!(!d.contains(&[1, 1]));
    }

    #[test]
    fn grid_rows_map_top_to_high_y() {
        let d = parse_digitset(b"fcube 1\nn=2 d=2\n#.\n..\n").unwrap();
        assert_eq!(d.to_vecs(), vec![vec![0, 1]]);
    }

    #[test]
    fn fourteen_cells_at_base_five() {
        let text = "fcube 1\nn=5 d=2\n#####\n#...#\n#...#\n#...#\n###..\n";
        let d = parse_digitset(text.as_bytes()).unwrap();
        assert_eq!(d.len(), 14);
        assert!((d.hausdorff_dimension() - 14f64.ln() / 5f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# a\n\nfcube 1\n# b\nn=3 d=1\n\n# c\ndigit: 1\n";
        assert_eq!(parse_digitset(text.as_bytes()).unwrap().len(), 1);
    }

    #[test]
    fn error_positions() {
        let err = parse_digitset(b"fcube 2\n").unwrap_err();
        assert!(matches!(
            err,
            Error::Syntax {
                line: 1,
                column: 1,
                ..
            }
        ));

        let err = parse_digitset(b"fcube 1\nn=x d=1\n").unwrap_err();
        assert!(
            matches!(
                err,
                Error::Syntax {
                    line: 2,
                    column: 3,
                    ..
                }
            ),
            "{err}"
        );

        let err = parse_digitset(b"fcube 1\nn=3 d=2\ndigit: 0 q\n").unwrap_err();
        assert!(
            matches!(
                err,
                Error::Syntax {
                    line: 3,
                    column: 10,
                    ..
                }
            ),
            "{err}"
        );

        let err = parse_digitset(b"fcube 1\nn=3 d=2\ndigit: 0\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 3, .. }), "{err}");

        let err = parse_digitset(b"fcube 1\nn=3 d=2\n###\n#x#\n").unwrap_err();
        assert!(
            matches!(
                err,
                Error::Syntax {
                    line: 4,
                    column: 1,
                    ..
                }
            ),
            "{err}"
        );

        let err = parse_digitset(b"fcube 1\nn=3 d=2\n###\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { .. }), "{err}");
    }

    #[test]
    fn semantic_errors() {
        assert_eq!(
            parse_digitset(b"fcube 1\nn=1 d=1\ndigit: 0\n"),
            Err(Error::BaseTooSmall(1))
        );
        assert_eq!(parse_digitset(b"fcube 1\nn=3 d=1\n"), Err(Error::EmptyDigitSet));
        assert!(matches!(
            parse_digitset(b"fcube 1\nn=3 d=1\ndigit: 3\n"),
            Err(Error::CoordinateOutOfRange { value: 3, .. })
        ));
        assert!(matches!(
            parse_digitset(b"fcube 1\nn=3 d=1\ndigit: -1\n"),
            Err(Error::CoordinateOutOfRange { value: -1, .. })
        ));
        assert_eq!(
            parse_digitset(b"fcube 1\nn=3 d=1\ndigit: 1\ndigit: 1\n"),
            Err(Error::DuplicateDigit(vec![1]))
        );
    }

    #[test]
    fn canonical_serialization() {
        let d = parse_digitset(b"fcube 1\nn=3 d=2\n#..\n...\n..#\n").unwrap();
        let text = serialize_digitset(&d);
        assert_eq!(text, "fcube 1\nn=3 d=2\ndigit: 0 2\ndigit: 2 0\n");
        assert_eq!(
            serialize_digitset(&parse_digitset(text.as_bytes()).unwrap()),
            text
        );
    }
}
