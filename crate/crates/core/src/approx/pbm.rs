//! Plain (`P1`) portable bitmaps.
//!
//! Output layout is fixed: `P1`, then `width height`, then one text line per
//! image row with one `0`/`1` character per pixel and no separators. The top
//! row holds the highest coordinate of the vertical axis.

use crate::error::{Error, Result};

use super::CellGrid;

/// Renders a grid, or a two-dimensional slice of it, as a `P1` bitmap.
///
/// `slice` fixes `(axis, value)` pairs; after fixing, exactly two axes must
/// remain free for `d ≥ 2`. The lower free axis runs left to right and the
/// higher one bottom to top. A one-dimensional grid renders as one row.
pub fn render_pbm(grid: &CellGrid, slice: &[(usize, u64)]) -> Result<Vec<u8>> {
    let dim = grid.dim();
    let m = grid.side();
    let expected = dim.saturating_sub(2);
    if slice.len() != expected {
        return Err(Error::SliceArity {
            expected,
            found: slice.len(),
        });
    }
    let mut fixed = vec![None; dim];
    for &(axis, value) in slice {
        if axis >= dim {
            return Err(Error::InvalidSlice(format!("axis {axis} does not exist")));
        }
        if value >= m {
            return Err(Error::InvalidSlice(format!("value {value} is outside 0..{m}")));
        }
        if fixed[axis].replace(value).is_some() {
            return Err(Error::InvalidSlice(format!("axis {axis} fixed twice")));
        }
    }
    let free: Vec<usize> = (0..dim).filter(|&a| fixed[a].is_none()).collect();
    let (width, height) = if dim == 1 { (m, 1) } else { (m, m) };

    let mut out = format!("P1\n{width} {height}\n").into_bytes();
    out.reserve(((width + 1) * height) as usize);
    let mut cell: Vec<u64> = fixed.iter().map(|v| v.unwrap_or(0)).collect();
    for row in 0..height {
        if dim > 1 {
            cell[free[1]] = height - 1 - row;
        }
        for x in 0..width {
            cell[free[0]] = x;
            out.push(if grid.contains(&cell) { b'1' } else { b'0' });
        }
        out.push(b'\n');
    }
    Ok(out)
}

/// A decoded `P1` image; `pixels` is row-major from the top row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bitmap {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<bool>,
}

impl Bitmap {
    pub fn get(&self, x: usize, y_from_top: usize) -> bool {
        self.pixels[y_from_top * self.width + x]
    }

    pub fn ones(&self) -> usize {
        self.pixels.iter().filter(|&&p| p).count()
    }
}

/// Parses any plain `P1` bitmap: comments, arbitrary whitespace, and pixels
/// with or without separators.
pub fn parse_pbm(bytes: &[u8]) -> Result<Bitmap> {
    let mut tokens = PbmTokens { bytes, pos: 0 };
    if tokens.header_token() != Some(b"P1".as_slice()) {
        return Err(Error::Pbm("missing P1 magic".into()));
    }
    let mut dimension = || -> Result<usize> {
        let tok = tokens
            .header_token()
            .ok_or_else(|| Error::Pbm("truncated header".into()))?;
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Pbm(format!("bad dimension {:?}", String::from_utf8_lossy(tok))))
    };
    let width = dimension()?;
    let height = dimension()?;
    let total = width
        .checked_mul(height)
        .ok_or_else(|| Error::Pbm("image too large".into()))?;
    let mut pixels = Vec::with_capacity(total);
    while pixels.len() < total {
        match tokens.pixel()? {
            Some(p) => pixels.push(p),
            None => {
                return Err(Error::Pbm(format!(
                    "expected {total} pixels, found {}",
                    pixels.len()
                )))
            }
        }
    }
    Ok(Bitmap {
        width,
        height,
        pixels,
    })
}

struct PbmTokens<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> PbmTokens<'a> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.bytes.get(self.pos).is_some_and(|&c| c != b'\n') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn header_token(&mut self) -> Option<&'a [u8]> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| !b.is_ascii_whitespace() && *b != b'#')
        {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.bytes[start..self.pos])
    }

    fn pixel(&mut self) -> Result<Option<bool>> {
        self.skip_space_and_comments();
        let Some(&b) = self.bytes.get(self.pos) else {
            return Ok(None);
        };
        self.pos += 1;
        match b {
            b'0' => Ok(Some(false)),
            b'1' => Ok(Some(true)),
            other => Err(Error::Pbm(format!(
                "unexpected byte {:?} in raster",
                other as char
            ))),
        }
    }
}
