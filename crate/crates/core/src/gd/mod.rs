//! Graph-directed systems with uniform ratio `1/n`: dimension from the
//! Perron root of the edge-count matrix, and level-by-level verification
//! that a graph-directed set reproduces a component of the approximations.

mod graph;
mod spectral;

pub use graph::{Edge, MWGraph};
pub use spectral::{spectral_radius, Enclosure, MAX_ITERATIONS, RELATIVE_WIDTH};

use std::collections::HashSet;

use serde::Serialize;

use crate::approx::{build_grid, Budget};
use crate::error::{Error, Result};
use crate::model::DigitSet;
use crate::topology::{component_of_cell, label_components};

/// `log ρ(A) / log n` with an enclosing interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GdDimension {
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
    pub radius: Enclosure,
}

fn widen_down(x: f64) -> f64 {
    (x - 4.0 * f64::EPSILON * x.abs()).next_down()
}

fn widen_up(x: f64) -> f64 {
    (x + 4.0 * f64::EPSILON * x.abs()).next_up()
}

/// Dimension of the graph-directed sets (the largest over strongly
/// connected parts).
pub fn gd_dimension(graph: &MWGraph) -> Result<GdDimension> {
    let radius = spectral_radius(&graph.count_matrix())?;
    if radius.hi <= 0.0 {
        return Err(Error::EmptyAttractor);
    }
    let log_n = (graph.base() as f64).ln();
    let value = if radius.lo == radius.hi {
        radius.lo.ln() / log_n
    } else {
        radius.midpoint().ln() / log_n
    };
    Ok(GdDimension {
        value,
        lo: widen_down(radius.lo.ln() / log_n),
        hi: widen_up(radius.hi.ln() / log_n),
        radius,
    })
}

/// Orders cells by grid index (first axis fastest).
fn index_order(a: &[u64], b: &[u64]) -> std::cmp::Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

/// Level-`ℓ` cells `Σ n^{ℓ−i} d_i` reached by digit words along directed
/// paths of length `ℓ` from `start`, sorted by grid index.
pub fn path_cells(graph: &MWGraph, start: &str, level: u32, budget: &Budget) -> Result<Vec<Vec<u64>>> {
    if level == 0 {
        return Err(Error::ZeroLevel);
    }
    let start = graph.node_index(start)?;
    let n = graph.base();
    let dim = graph.dim();
    let state_bytes = (dim as u64 * 8) + 64;

    let mut layer: Vec<HashSet<Vec<u64>>> = vec![HashSet::new(); graph.nodes().len()];
    layer[start].insert(vec![0; dim]);
    for step in 1..=level {
        let mut next: Vec<HashSet<Vec<u64>>> = vec![HashSet::new(); layer.len()];
        for edge in graph.edges() {
            for prefix in &layer[edge.from] {
                let cell = prefix.iter().zip(&edge.digit).map(|(&p, &d)| p * n + d).collect();
                next[edge.to].insert(cell);
            }
        }
        let states: u64 = next.iter().map(|s| s.len() as u64).sum();
        budget
            .check(states.saturating_mul(state_bytes))
            .map_err(|e| e.at_level(step))?;
        layer = next;
    }
    let mut cells: Vec<Vec<u64>> = layer
        .into_iter()
        .flatten()
        .collect::<HashSet<_>>()
        .into_iter()
        .collect();
    cells.sort_by(|a, b| index_order(a, b));
    Ok(cells)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LevelOutcome {
    Equal,
    /// First cell (in grid order) of the symmetric difference.
    Mismatch {
        cell: Vec<u64>,
        in_component: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelCheck {
    pub level: u32,
    pub seed: Vec<u64>,
    pub component_cells: u64,
    pub path_cells: u64,
    pub outcome: LevelOutcome,
}

/// Per-level comparison of `C_ℓ` against the cells of the graph-directed
/// approximation. Equality at every level supports, but does not prove,
/// that the component is the graph-directed set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GdVerification {
    pub levels: Vec<LevelCheck>,
}

impl GdVerification {
    pub fn all_equal(&self) -> bool {
        self.levels.iter().all(|l| l.outcome == LevelOutcome::Equal)
    }

    pub fn first_mismatch(&self) -> Option<&LevelCheck> {
        self.levels.iter().find(|l| l.outcome != LevelOutcome::Equal)
    }
}

/// Compares, for `ℓ = 1..=levels`, the component of `E_ℓ` containing the
/// seed cell with `path_cells(graph, node, ℓ)`.
///
/// `cell` is a level-1 cell; at level `ℓ` the seed is the cell coded by the
/// word repeating that digit `ℓ` times, which contains the fixed point of
/// the corresponding map.
pub fn verify_decomposition(
    digits: &DigitSet,
    graph: &MWGraph,
    node: &str,
    cell: &[u64],
    levels: u32,
    budget: &Budget,
) -> Result<GdVerification> {
    if graph.base() != digits.base() || graph.dim() != digits.dim() {
        return Err(Error::GraphMismatch {
            graph_base: graph.base(),
            graph_dim: graph.dim(),
            set_base: digits.base(),
            set_dim: digits.dim(),
        });
    }
    if let Some(edge) = graph.edges().iter().find(|e| !digits.contains(&e.digit)) {
        return Err(Error::DigitNotInSet(edge.digit.clone()));
    }
    graph.node_index(node)?;
    if cell.len() != digits.dim() || cell.iter().any(|&c| c >= digits.base()) {
        return Err(Error::CellOutOfRange(cell.to_vec()));
    }
    if !digits.contains(cell) {
        return Err(Error::CellUnoccupied(cell.to_vec()));
    }

    let n = digits.base();
    let mut checks = Vec::with_capacity(levels as usize);
    let mut repunit = 0u64;
    for level in 1..=levels {
        repunit = repunit * n + 1;
        let seed: Vec<u64> = cell.iter().map(|&c| c * repunit).collect();
        let grid = build_grid(digits, level, budget)?;
        let labeling = label_components(&grid);
        let (_, mut component) = component_of_cell(&labeling, &seed)?;
        component.sort_by(|a, b| index_order(a, b));
        let paths = path_cells(graph, node, level, budget)?;
        checks.push(LevelCheck {
            level,
            seed,
            component_cells: component.len() as u64,
            path_cells: paths.len() as u64,
            outcome: compare(&component, &paths),
        });
    }
    Ok(GdVerification { levels: checks })
}

fn compare(component: &[Vec<u64>], paths: &[Vec<u64>]) -> LevelOutcome {
    let (mut i, mut j) = (0, 0);
    loop {
        match (component.get(i), paths.get(j)) {
            (None, None) => return LevelOutcome::Equal,
            (Some(c), None) => {
                return LevelOutcome::Mismatch {
                    cell: c.clone(),
                    in_component: true,
                }
            }
            (None, Some(p)) => {
                return LevelOutcome::Mismatch {
                    cell: p.clone(),
                    in_component: false,
                }
            }
            (Some(c), Some(p)) => match index_order(c, p) {
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
                std::cmp::Ordering::Less => {
                    return LevelOutcome::Mismatch {
                        cell: c.clone(),
                        in_component: true,
                    }
                }
                std::cmp::Ordering::Greater => {
                    return LevelOutcome::Mismatch {
                        cell: p.clone(),
                        in_component: false,
                    }
                }
            },
        }
    }
}
