//! Digit sets and the arithmetic that only depends on them.
//!
//! A fractal cube is fixed by a base `n ≥ 2` and a digit set
//! `D ⊂ {0, …, n−1}^d`; its attractor is the unique compact `E` with
//! `E = (E + D) / n`. Everything else in the crate is derived from a
//! [`DigitSet`].

mod affine;
mod format;

pub use affine::{affine_rank, reduce_full_rank, AffineReduction, Rational, ReductionStep, StepSummary};
pub use format::{parse_digitset, serialize_digitset};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::topology::TrivialPointVerdict;

/// Base, ambient dimension and digits of a fractal cube.
///
/// Digits are kept sorted lexicographically (first coordinate most
/// significant) and free of duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DigitSet {
    base: u64,
    dim: usize,
    // flat row-major storage, `dim` coordinates per digit
    coords: Vec<u64>,
}

impl DigitSet {
    /// Validates and canonicalizes a digit set.
    pub fn new(base: u64, dim: usize, digits: Vec<Vec<u64>>) -> Result<Self> {
        let signed = digits
            .into_iter()
            .map(|d| d.into_iter().map(|c| c as i64).collect())
            .collect();
        Self::from_signed(base, dim, signed)
    }

    /// Like [`DigitSet::new`] but accepts signed coordinates so that
    /// negative input is reported as out of range instead of wrapping.
    pub fn from_signed(base: u64, dim: usize, digits: Vec<Vec<i64>>) -> Result<Self> {
        if base < 2 {
            return Err(Error::BaseTooSmall(base));
        }
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if digits.is_empty() {
            return Err(Error::EmptyDigitSet);
        }
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(digits.len());
        for digit in digits {
            if digit.len() != dim {
                return Err(Error::DigitArity {
                    expected: dim,
                    found: digit.len(),
                    digit,
                });
            }
            if let Some(&bad) = digit.iter().find(|&&c| c < 0 || c as u64 >= base) {
                return Err(Error::CoordinateOutOfRange {
                    digit,
                    value: bad,
                    base,
                });
            }
            rows.push(digit.into_iter().map(|c| c as u64).collect());
        }
        rows.sort();
        if let Some(w) = rows.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateDigit(w[0].clone()));
        }
        Ok(Self {
            base,
            dim,
            coords: rows.concat(),
        })
    }

    /// Trusted constructor for digits already known to be valid.
    pub(crate) fn from_sorted_unchecked(base: u64, dim: usize, coords: Vec<u64>) -> Self {
        debug_assert!(coords.len().is_multiple_of(dim) && !coords.is_empty());
        Self { base, dim, coords }
    }

    pub fn base(&self) -> u64 {
        self.base
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of digits, `N = #D`.
    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn digit(&self, i: usize) -> &[u64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    /// Digits in canonical (lexicographic) order.
    pub fn digits(&self) -> impl ExactSizeIterator<Item = &[u64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn to_vecs(&self) -> Vec<Vec<u64>> {
        self.digits().map(<[u64]>::to_vec).collect()
    }

    pub fn contains(&self, digit: &[u64]) -> bool {
        if digit.len() != self.dim {
            return false;
        }
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.digit(mid).cmp(digit) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    /// True when every cell of `{0..n−1}^d` is a digit.
    pub fn is_full(&self) -> bool {
        (self.base as u128).checked_pow(self.dim as u32) == Some(self.len() as u128)
    }

    pub fn dimension(&self) -> Dimension {
        Dimension::new(self.len() as u64, self.base)
    }

    /// `log N / log n`, the Hausdorff dimension of the attractor.
    pub fn hausdorff_dimension(&self) -> f64 {
        self.dimension().value
    }
}

/// A similarity dimension kept both as the exact pair `(N, n)` and as a float.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Dimension {
    pub count: u64,
    pub base: u64,
    pub value: f64,
}

impl Dimension {
    pub fn new(count: u64, base: u64) -> Self {
        let value = if count <= 1 {
            0.0
        } else {
            (count as f64).ln() / (base as f64).ln()
        };
        Self { count, base, value }
    }
}

/// `log N / log n` for a digit set of `N` digits in base `n`.
pub fn hausdorff_dimension(digits: &DigitSet) -> f64 {
    digits.hausdorff_dimension()
}

/// The level-`k` digit set `D + nD + … + n^{k−1}D`, viewed in base `n^k`.
pub fn compose_level(digits: &DigitSet, k: u32) -> Result<DigitSet> {
    if k == 0 {
        return Err(Error::ZeroLevel);
    }
    let n = digits.base;
    let base = n
        .checked_pow(k)
        .ok_or_else(|| Error::Overflow(format!("{n}^{k}")))?;
    let count = (digits.len() as u64)
        .checked_pow(k)
        .and_then(|c| c.checked_mul(digits.dim as u64))
        .filter(|&c| c <= isize::MAX as u64 / 8)
        .ok_or_else(|| Error::Overflow(format!("{}^{k} composed digits", digits.len())))?;

    // D_{j+1} = D + n·D_j, built one level at a time
    let dim = digits.dim;
    let mut current: Vec<u64> = digits.coords.clone();
    for _ in 1..k {
        let mut next = Vec::with_capacity(current.len() * digits.len());
        for prev in current.chunks_exact(dim) {
            for d in digits.digits() {
                next.extend(prev.iter().zip(d).map(|(p, c)| c + n * p));
            }
        }
        current = next;
    }
    debug_assert_eq!(current.len() as u64, count);
    let mut rows: Vec<&[u64]> = current.chunks_exact(dim).collect();
    rows.sort_unstable();
    let coords = rows.concat();
    Ok(DigitSet::from_sorted_unchecked(base, dim, coords))
}

/// Per-axis slice counts: `counts[axis][v]` digits have coordinate `v` on `axis`.
fn slice_counts(digits: &DigitSet) -> Vec<Vec<usize>> {
    let mut counts = vec![vec![0usize; digits.base as usize]; digits.dim];
    for d in digits.digits() {
        for (axis, &c) in d.iter().enumerate() {
            counts[axis][c as usize] += 1;
        }
    }
    counts
}

/// Whether every row and every column of a planar digit set holds the same
/// number of digits.
pub fn is_latin(digits: &DigitSet) -> Result<bool> {
    if digits.dim != 2 {
        return Err(Error::WrongDimension {
            expected: 2,
            found: digits.dim,
        });
    }
    Ok(slice_counts(digits)
        .iter()
        .all(|axis| axis.iter().all(|&c| c == axis[0])))
}

/// Planar product forms `[0,1] × C` and `C × [0,1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProductForm {
    /// Every occupied row is full: `E = [0,1] × C`.
    FullColumnProduct,
    /// Every occupied column is full: `E = C × [0,1]`.
    FullRowProduct,
    Latin,
}

/// Outcome of the necessary-condition screen for `dim_tH E = dim_H E`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Prescreen {
    /// A trivial point exists, so the two dimensions differ.
    RuledOut,
    /// A known necessary condition holds; equality is not decided.
    Possible {
        form: ProductForm,
    },
    Inconclusive,
}

/// Screens a digit set against the known necessary conditions for equality
/// of topological Hausdorff and Hausdorff dimension. Never asserts equality.
pub fn th_prescreen(digits: &DigitSet, verdict: &TrivialPointVerdict) -> Result<Prescreen> {
    if matches!(verdict, TrivialPointVerdict::HasTrivialPoint { .. }) {
        return Ok(Prescreen::RuledOut);
    }
    let latin = is_latin(digits)?;
    let n = digits.base as usize;
    let counts = slice_counts(digits);
    // rows are indexed by the second coordinate, columns by the first
    let rows_full = counts[1].iter().all(|&c| c == 0 || c == n);
    let cols_full = counts[0].iter().all(|&c| c == 0 || c == n);
    Ok(if rows_full {
        Prescreen::Possible {
            form: ProductForm::FullColumnProduct,
        }
    } else if cols_full {
        Prescreen::Possible {
            form: ProductForm::FullRowProduct,
        }
    } else if latin {
        Prescreen::Possible {
            form: ProductForm::Latin,
        }
    } else {
        Prescreen::Inconclusive
    })
}
