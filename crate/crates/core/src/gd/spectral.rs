//! Certified enclosures of the Perron root of nonnegative integer matrices.
//!
//! For any positive vector `x`, `min_i (Ax)_i / x_i ≤ ρ(A) ≤ max_i (Ax)_i / x_i`
//! on an irreducible block. The vector comes from power iteration on `A + I`,
//! which has the same Perron vector and no peripheral eigenvalues other than
//! `ρ + 1`, so periodic blocks converge too. The bounds are evaluated in
//! floating point and then widened by a rounding-error margin, so the
//! returned interval contains the exact root.

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;

use crate::error::{Error, Result};

/// Stop once `hi − lo < RELATIVE_WIDTH · hi`.
pub const RELATIVE_WIDTH: f64 = 1e-12;
pub const MAX_ITERATIONS: usize = 1_000_000;

/// An interval `[lo, hi]` known to contain the spectral radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Enclosure {
    pub lo: f64,
    pub hi: f64,
}

impl Enclosure {
    pub fn exact(value: f64) -> Self {
        Self { lo: value, hi: value }
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Spectral radius of a square nonnegative integer matrix, enclosed.
pub fn spectral_radius(matrix: &[Vec<i64>]) -> Result<Enclosure> {
    let size = matrix.len();
    if size == 0 {
        return Err(Error::EmptyMatrix);
    }
    if matrix.iter().any(|row| row.len() != size) {
        return Err(Error::NotSquare);
    }
    for (row, r) in matrix.iter().enumerate() {
        if let Some(col) = r.iter().position(|&v| v < 0) {
            return Err(Error::NegativeEntry { row, col });
        }
    }

    let mut graph = DiGraph::<(), ()>::with_capacity(size, 0);
    let nodes: Vec<_> = (0..size).map(|_| graph.add_node(())).collect();
    for (i, row) in matrix.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v > 0 {
                graph.add_edge(nodes[i], nodes[j], ());
            }
        }
    }

    let mut best = Enclosure::exact(0.0);
    for scc in tarjan_scc(&graph) {
        let idx: Vec<usize> = scc.iter().map(|n| n.index()).collect();
        let block: Vec<Vec<f64>> = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| matrix[i][j] as f64).collect())
            .collect();
        let enc = if block.len() == 1 {
            // a single node contributes its loop count exactly
            Enclosure::exact(block[0][0])
        } else {
            irreducible_radius(&block)
        };
        if enc.hi > best.hi {
            best.hi = enc.hi;
        }
        if enc.lo > best.lo {
            best.lo = enc.lo;
        }
    }
    Ok(best)
}

/// Collatz–Wielandt iteration on an irreducible block of size ≥ 2.
fn irreducible_radius(block: &[Vec<f64>]) -> Enclosure {
    let size = block.len();
    // each (Ax)_i is a sum of `size` rounded products; the ratio adds one
    // more rounding
    let margin = (size as f64 + 3.0) * f64::EPSILON;
    let mut x = vec![1.0f64; size];
    let mut y = vec![0.0f64; size];
    let mut best = Enclosure {
        lo: 0.0,
        hi: f64::INFINITY,
    };
    for _ in 0..MAX_ITERATIONS {
        for (yi, row) in y.iter_mut().zip(block) {
            *yi = row.iter().zip(&x).map(|(a, b)| a * b).sum();
        }
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for (&yi, &xi) in y.iter().zip(&x) {
            let r = yi / xi;
            lo = lo.min(r);
            hi = hi.max(r);
        }
        let lo = (lo * (1.0 - margin)).next_down();
        let hi = (hi * (1.0 + margin)).next_up();
        best.lo = best.lo.max(lo);
        best.hi = best.hi.min(hi);
        if best.hi - best.lo < RELATIVE_WIDTH * best.hi {
            break;
        }
        // x ← (A + I)x, normalized
        let mut scale = 0.0f64;
        for (xi, &yi) in x.iter_mut().zip(&y) {
            *xi += yi;
            scale = scale.max(*xi);
        }
        for xi in x.iter_mut() {
            *xi /= scale;
        }
    }
    best
}
