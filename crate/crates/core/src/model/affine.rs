//! Exact affine-rank computation and reduction of rank-deficient digit sets
//! to an equivalent full-rank set of lower dimension.

use num_rational::Ratio;
use serde::Serialize;

use super::DigitSet;

pub type Rational = Ratio<i128>;

/// One projection step: every digit `h` of the set being reduced satisfies
/// `⟨h, normal⟩ = (n − 1)·offset`, and `dropped_axis` has a nonzero normal
/// coordinate, so removing it loses no information.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    pub normal: Vec<Rational>,
    pub offset: Rational,
    pub dropped_axis: usize,
}

impl ReductionStep {
    /// Reinserts the dropped coordinate of a projected digit.
    pub fn restore(&self, projected: &[u64], base: u64) -> Option<Vec<u64>> {
        let j = self.dropped_axis;
        let mut rhs = Rational::from_integer(base as i128 - 1) * self.offset;
        let mut full = Vec::with_capacity(projected.len() + 1);
        full.extend_from_slice(&projected[..j]);
        full.push(0);
        full.extend_from_slice(&projected[j..]);
        for (i, &c) in full.iter().enumerate() {
            if i != j {
                rhs -= self.normal[i] * Rational::from_integer(c as i128);
            }
        }
        let value = rhs / self.normal[j];
        if !value.is_integer() || value < Rational::from_integer(0) {
            return None;
        }
        full[j] = value.to_integer() as u64;
        Some(full)
    }

    fn to_summary(&self) -> StepSummary {
        StepSummary {
            normal: self.normal.iter().map(ToString::to_string).collect(),
            offset: self.offset.to_string(),
            dropped_axis: self.dropped_axis,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepSummary {
    pub normal: Vec<String>,
    pub offset: String,
    pub dropped_axis: usize,
}

/// Result of projecting away affine dependencies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineReduction {
    pub steps: Vec<ReductionStep>,
    pub reduced: DigitSet,
    /// Affine rank of the original (and reduced) set.
    pub rank: usize,
}

impl AffineReduction {
    /// One-digit sets have a one-point attractor. They are reduced down to
    /// dimension 1 and flagged here rather than represented in dimension 0.
    pub fn is_singleton(&self) -> bool {
        self.rank == 0
    }

    pub fn step_summaries(&self) -> Vec<StepSummary> {
        self.steps.iter().map(ReductionStep::to_summary).collect()
    }
}

fn difference_rows(digits: &DigitSet) -> Vec<Vec<Rational>> {
    let origin = digits.digit(0);
    digits
        .digits()
        .skip(1)
        .map(|h| {
            h.iter()
                .zip(origin)
                .map(|(&a, &b)| Rational::from_integer(a as i128 - b as i128))
                .collect()
        })
        .collect()
}

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
fn row_reduce(mut rows: Vec<Vec<Rational>>, cols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let zero = Rational::from_integer(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][col] != zero) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].recip();
        for v in rows[r].iter_mut() {
            *v *= inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[col] != zero {
                let f = row[col];
                for (v, &p) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * p;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Rank over the rationals of `{h − h₀ : h ∈ D}`, i.e. `dim aff(E)`.
pub fn affine_rank(digits: &DigitSet) -> usize {
    row_reduce(difference_rows(digits), digits.dim()).1.len()
}

/// A nonzero vector orthogonal to every digit difference, if one exists.
fn normal_vector(digits: &DigitSet) -> Option<Vec<Rational>> {
    let dim = digits.dim();
    let (rows, pivots) = row_reduce(difference_rows(digits), dim);
    let free = (0..dim).find(|c| !pivots.contains(c))?;
    let mut alpha = vec![Rational::from_integer(0); dim];
    alpha[free] = Rational::from_integer(1);
    for (row, &p) in rows.iter().zip(&pivots) {
        alpha[p] = -row[free];
    }
    Some(alpha)
}

/// Projects a rank-deficient digit set onto coordinate subspaces until its
/// dimension equals its affine rank. Each step drops the lowest axis with a
/// nonzero normal coordinate.
pub fn reduce_full_rank(digits: &DigitSet) -> AffineReduction {
    let rank = affine_rank(digits);
    let n = digits.base();
    let mut current = digits.clone();
    let mut steps = Vec::new();
    while current.dim() > rank.max(1) {
        let normal = normal_vector(&current).expect("rank below dimension leaves a normal vector");
        let dropped_axis = normal
            .iter()
            .position(|a| *a != Rational::from_integer(0))
            .expect("normal vector is nonzero");
        let first = current.digit(0);
        let dot: Rational = first
            .iter()
            .zip(&normal)
            .map(|(&h, a)| Rational::from_integer(h as i128) * a)
            .sum();
        let offset = dot / Rational::from_integer(n as i128 - 1);

        let mut projected: Vec<Vec<u64>> = current
            .digits()
            .map(|h| {
                let mut p = h.to_vec();
                p.remove(dropped_axis);
                p
            })
            .collect();
        projected.sort();
        let coords = projected.concat();
        let next = DigitSet::from_sorted_unchecked(n, current.dim() - 1, coords);
        debug_assert_eq!(next.len(), current.len());
        steps.push(ReductionStep {
            normal,
            offset,
            dropped_axis,
        });
        current = next;
    }
    AffineReduction {
        steps,
        reduced: current,
        rank,
    }
}
