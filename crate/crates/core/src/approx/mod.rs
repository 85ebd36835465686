//! Dense occupancy bitmaps of the level-`k` approximation `E_k`.

mod pbm;

pub use pbm::{parse_pbm, render_pbm, Bitmap};

use crate::error::{Error, Result};
use crate::model::DigitSet;

/// Default memory budget for grids: 2 GiB.
pub const DEFAULT_MAX_BYTES: u64 = 2 << 30;

/// Environment variable overriding [`DEFAULT_MAX_BYTES`].
pub const MAX_BYTES_ENV: &str = "FRACUBE_MAX_BYTES";

/// Upper limit on the bytes a single grid (plus its labeling) may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_bytes: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_bytes: DEFAULT_MAX_BYTES,
        }
    }
}

impl Budget {
    pub fn new(max_bytes: u64) -> Self {
        Self { max_bytes }
    }

    /// Reads `FRACUBE_MAX_BYTES`, falling back to the default when unset or
    /// unparsable.
    pub fn from_env() -> Self {
        std::env::var(MAX_BYTES_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(Self::new)
            .unwrap_or_default()
    }

    pub(crate) fn check(&self, required: u64) -> Result<()> {
        if required > self.max_bytes {
            Err(Error::BudgetExceeded {
                required,
                allowed: self.max_bytes,
                level: None,
            })
        } else {
            Ok(())
        }
    }
}

/// Occupancy of `{0..m−1}^d` with `m = n^k`.
///
/// Cells are indexed mixed-radix with the first axis fastest:
/// `index = c₀ + m·c₁ + m²·c₂ + …`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellGrid {
    level: u32,
    side: u64,
    dim: usize,
    words: Vec<u64>,
    occupied: u64,
}

impl CellGrid {
    pub fn level(&self) -> u32 {
        self.level
    }

    /// `m = n^k`, the number of cells per axis.
    pub fn side(&self) -> u64 {
        self.side
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `m^d`.
    pub fn cell_count(&self) -> u64 {
        self.side.pow(self.dim as u32)
    }

    pub fn occupied_count(&self) -> u64 {
        self.occupied
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn is_set(&self, index: u64) -> bool {
        self.words[(index >> 6) as usize] >> (index & 63) & 1 == 1
    }

    pub fn index_of(&self, cell: &[u64]) -> Result<u64> {
        if cell.len() != self.dim || cell.iter().any(|&c| c >= self.side) {
            return Err(Error::CellOutOfRange(cell.to_vec()));
        }
        Ok(cell.iter().rev().fold(0, |acc, &c| acc * self.side + c))
    }

    pub fn coords_of(&self, mut index: u64) -> Vec<u64> {
        let mut out = Vec::with_capacity(self.dim);
        for _ in 0..self.dim {
            out.push(index % self.side);
            index /= self.side;
        }
        out
    }

    pub fn contains(&self, cell: &[u64]) -> bool {
        self.index_of(cell).map(|i| self.is_set(i)).unwrap_or(false)
    }

    /// Occupied cell indices in increasing order.
    pub fn occupied_indices(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let base = (w as u64) << 6;
            BitIter(word).map(move |b| base + b as u64)
        })
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = u32;

    #[inline]
    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(b)
    }
}

/// Side length and total cell count for level `k`, with overflow checks.
pub(crate) fn grid_shape(n: u64, dim: usize, k: u32) -> Result<(u64, u64)> {
    let side = n
        .checked_pow(k)
        .filter(|&m| m <= u32::MAX as u64)
        .ok_or_else(|| Error::Overflow(format!("grid side {n}^{k}")))?;
    let cells = side
        .checked_pow(dim as u32)
        .ok_or_else(|| Error::Overflow(format!("grid size ({side})^{dim}")))?;
    Ok((side, cells))
}

/// Bytes of the dense bitmap for `cells` cells.
pub(crate) fn bitmap_bytes(cells: u64) -> u64 {
    cells.div_ceil(64) * 8
}

/// Materializes `E_k` as a bitmap by expanding digit words level by level.
pub fn build_grid(digits: &DigitSet, k: u32, budget: &Budget) -> Result<CellGrid> {
    if k == 0 {
        return Err(Error::ZeroLevel);
    }
    let n = digits.base();
    let dim = digits.dim();
    let (side, cells) = grid_shape(n, dim, k)?;
    budget.check(bitmap_bytes(cells)).map_err(|e| e.at_level(k))?;
    let words = usize::try_from(cells.div_ceil(64)).map_err(|_| Error::Overflow("bitmap length".into()))?;

    // Index contribution of each digit at each level: the digit chosen at
    // step i (0 = most significant) is scaled by n^{k-1-i}.
    let digit_index: Vec<u64> = digits
        .digits()
        .map(|d| d.iter().rev().fold(0, |acc, &c| acc * side + c))
        .collect();
    let mut offsets: Vec<Vec<u64>> = Vec::with_capacity(k as usize);
    let mut scale = side / n;
    for _ in 0..k {
        offsets.push(digit_index.iter().map(|&d| d * scale).collect());
        scale /= n;
    }

    let mut bits = vec![0u64; words];
    fill(&offsets, 0, 0, &mut bits);
    let occupied = bits.iter().map(|w| w.count_ones() as u64).sum();
    Ok(CellGrid {
        level: k,
        side,
        dim,
        words: bits,
        occupied,
    })
}

fn fill(offsets: &[Vec<u64>], depth: usize, acc: u64, bits: &mut [u64]) {
    if depth + 1 == offsets.len() {
        for &o in &offsets[depth] {
            let i = acc + o;
            bits[(i >> 6) as usize] |= 1 << (i & 63);
        }
        return;
    }
    for &o in &offsets[depth] {
        fill(offsets, depth + 1, acc + o, bits);
    }
}
