//! Connected components of `E_k` under Chebyshev adjacency.
//!
//! Two closed cells `c + [0,1]^d` and `c' + [0,1]^d` meet exactly when
//! `|c_i − c'_i| ≤ 1` on every axis, so components of the union of closed
//! cells are components of the cell graph with all `3^d − 1` neighbours.

use serde::Serialize;

use crate::approx::CellGrid;
use crate::error::{Error, Result};

use super::union_find::UnionFind;

/// Summary of one connected component of a grid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentInfo {
    pub id: u32,
    pub cell_count: u64,
    pub min: Vec<u64>,
    pub max: Vec<u64>,
    pub touches_low: Vec<bool>,
    pub touches_high: Vec<bool>,
    /// No cell of the component has a coordinate equal to `0` or `m − 1`.
    pub is_island: bool,
}

/// Partition of the occupied cells of a grid into connected components.
///
/// Component ids are dense and ordered by the smallest cell index each
/// component contains.
#[derive(Debug, Clone)]
pub struct ComponentLabeling<'g> {
    grid: &'g CellGrid,
    // occupied cells before each bitmap word
    rank_prefix: Vec<u64>,
    // label of each occupied cell, in cell-index order
    labels: Vec<u32>,
    cell_counts: Vec<u64>,
    // per component: d minima then d maxima
    bbox: Vec<u32>,
}

/// Bytes needed to label `grid`, excluding the grid itself.
pub fn labeling_bytes(grid: &CellGrid) -> u64 {
    grid.words().len() as u64 * 8 + grid.occupied_count() * 12
}

/// Labels the components of `grid` with a union-find pass over the
/// forward half of the neighbour offsets.
pub fn label_components(grid: &CellGrid) -> ComponentLabeling<'_> {
    let dim = grid.dim();
    let m = grid.side();
    let words = grid.words();

    let mut rank_prefix = Vec::with_capacity(words.len());
    let mut acc = 0u64;
    for w in words {
        rank_prefix.push(acc);
        acc += w.count_ones() as u64;
    }
    let rank = |index: u64| -> u32 {
        let w = (index >> 6) as usize;
        let below = words[w] & ((1u64 << (index & 63)) - 1);
        (rank_prefix[w] + below.count_ones() as u64) as u32
    };

    let forward = forward_offsets(dim, m);
    let occupied = grid.occupied_count() as usize;
    let mut uf = UnionFind::new(occupied);
    let mut coords = vec![0u64; dim];
    for (r, index) in grid.occupied_indices().enumerate() {
        decode(index, m, &mut coords);
        'offsets: for offset in &forward {
            for (axis, &step) in offset.steps.iter().enumerate() {
                let c = coords[axis];
                if (step < 0 && c == 0) || (step > 0 && c + 1 == m) {
                    continue 'offsets;
                }
            }
            let neighbor = index.wrapping_add(offset.linear as u64);
            if grid.is_set(neighbor) {
                uf.union(r as u32, rank(neighbor));
            }
        }
    }
    let (labels, count) = uf.into_labels();

    let mut cell_counts = vec![0u64; count as usize];
    let mut bbox = vec![0u32; count as usize * 2 * dim];
    for chunk in bbox.chunks_exact_mut(2 * dim) {
        chunk[..dim].fill(u32::MAX);
    }
    for (index, &label) in grid.occupied_indices().zip(&labels) {
        decode(index, m, &mut coords);
        let l = label as usize;
        cell_counts[l] += 1;
        let b = &mut bbox[l * 2 * dim..(l + 1) * 2 * dim];
        for (axis, &c) in coords.iter().enumerate() {
            b[axis] = b[axis].min(c as u32);
            b[dim + axis] = b[dim + axis].max(c as u32);
        }
    }

    ComponentLabeling {
        grid,
        rank_prefix,
        labels,
        cell_counts,
        bbox,
    }
}

struct Offset {
    steps: Vec<i8>,
    linear: i64,
}

/// Offsets in `{−1,0,1}^d` whose linear index delta is positive, i.e. whose
/// highest nonzero axis steps up.
fn forward_offsets(dim: usize, m: u64) -> Vec<Offset> {
    let mut out = Vec::new();
    let total = 3usize.pow(dim as u32);
    for code in 0..total {
        let mut c = code;
        let mut steps = Vec::with_capacity(dim);
        for _ in 0..dim {
            steps.push((c % 3) as i8 - 1);
            c /= 3;
        }
        let linear = steps.iter().rev().fold(0i64, |acc, &s| acc * m as i64 + s as i64);
        if linear > 0 {
            out.push(Offset { steps, linear });
        }
    }
    out
}

#[inline]
fn decode(mut index: u64, m: u64, coords: &mut [u64]) {
    for c in coords.iter_mut() {
        *c = index % m;
        index /= m;
    }
}

impl<'g> ComponentLabeling<'g> {
    pub fn grid(&self) -> &'g CellGrid {
        self.grid
    }

    pub fn component_count(&self) -> usize {
        self.cell_counts.len()
    }

    /// Label of each occupied cell, in increasing cell-index order.
    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn label_of_index(&self, index: u64) -> Option<u32> {
        if index >= self.grid.cell_count() || !self.grid.is_set(index) {
            return None;
        }
        let words = self.grid.words();
        let w = (index >> 6) as usize;
        let below = words[w] & ((1u64 << (index & 63)) - 1);
        let r = self.rank_prefix[w] + below.count_ones() as u64;
        Some(self.labels[r as usize])
    }

    pub fn label_of(&self, cell: &[u64]) -> Option<u32> {
        self.grid.index_of(cell).ok().and_then(|i| self.label_of_index(i))
    }

    fn bounds(&self, id: u32) -> (&[u32], &[u32]) {
        let dim = self.grid.dim();
        let b = &self.bbox[id as usize * 2 * dim..(id as usize + 1) * 2 * dim];
        b.split_at(dim)
    }

    pub fn is_island(&self, id: u32) -> bool {
        let last = (self.grid.side() - 1) as u32;
        let (min, max) = self.bounds(id);
        min.iter().all(|&c| c >= 1) && max.iter().all(|&c| c < last)
    }

    pub fn cell_count(&self, id: u32) -> u64 {
        self.cell_counts[id as usize]
    }

    pub fn component(&self, id: u32) -> ComponentInfo {
        let last = self.grid.side() - 1;
        let (min, max) = self.bounds(id);
        let min: Vec<u64> = min.iter().map(|&c| c as u64).collect();
        let max: Vec<u64> = max.iter().map(|&c| c as u64).collect();
        ComponentInfo {
            id,
            cell_count: self.cell_counts[id as usize],
            touches_low: min.iter().map(|&c| c == 0).collect(),
            touches_high: max.iter().map(|&c| c == last).collect(),
            is_island: self.is_island(id),
            min,
            max,
        }
    }

    pub fn components(&self) -> impl Iterator<Item = ComponentInfo> + '_ {
        (0..self.component_count() as u32).map(|id| self.component(id))
    }

    pub fn island_ids(&self) -> impl Iterator<Item = u32> + '_ {
        (0..self.component_count() as u32).filter(|&id| self.is_island(id))
    }

    /// Total cells lying in islands.
    pub fn island_cells(&self) -> u64 {
        self.island_ids().map(|id| self.cell_count(id)).sum()
    }

    /// Sorted indices of the cells carrying `id`.
    pub fn cells_of(&self, id: u32) -> Vec<u64> {
        self.grid
            .occupied_indices()
            .zip(&self.labels)
            .filter(|(_, &l)| l == id)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Components lying strictly inside the open unit cube, ordered by id.
pub fn find_islands(labeling: &ComponentLabeling<'_>) -> Vec<ComponentInfo> {
    labeling.island_ids().map(|id| labeling.component(id)).collect()
}

/// The component containing `cell` together with its sorted cell list.
pub fn component_of_cell(
    labeling: &ComponentLabeling<'_>,
    cell: &[u64],
) -> Result<(ComponentInfo, Vec<Vec<u64>>)> {
    let grid = labeling.grid();
    let index = grid.index_of(cell)?;
    let id = labeling
        .label_of_index(index)
        .ok_or_else(|| Error::CellUnoccupied(cell.to_vec()))?;
    let cells = labeling
        .cells_of(id)
        .into_iter()
        .map(|i| grid.coords_of(i))
        .collect();
    Ok((labeling.component(id), cells))
}
