//! Components of the approximations, islands, and the trivial-point decision.
//!
//! A component of `E_k` that avoids `∂[0,1]^d` is an island. Any island forces
//! trivial points; for full-rank digit sets the converse holds too, but no
//! level bound is known, so a bounded search can only be conclusive in one
//! direction. The other direction is covered by a connectivity certificate.

mod labeling;
mod offsets;
mod union_find;

pub use labeling::{
    component_of_cell, find_islands, label_components, labeling_bytes, ComponentInfo, ComponentLabeling,
};
pub use offsets::{hata_connected, piece_intersects, OffsetGraph};

use serde::Serialize;

use crate::approx::{build_grid, Budget};
use crate::error::Result;
use crate::model::{reduce_full_rank, DigitSet};

/// Default island-search depth for a given ambient dimension.
pub fn default_k_max(dim: usize) -> u32 {
    match dim {
        1 => 8,
        2 => 6,
        3 => 3,
        _ => 2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    /// The piece-intersection graph is connected, so the attractor is a
    /// connected set with more than one point.
    ConnectedAttractor,
}

/// Whether the attractor has a point that is its own connected component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TrivialPointVerdict {
    /// `E_level` has an island, the first one being `island_id`.
    HasTrivialPoint {
        level: u32,
        island_id: u32,
    },
    NoTrivialPoint {
        certificate: Certificate,
    },
    /// One digit: the attractor is a single point, which is trivial.
    Singleton,
    /// No island up to `k_max` and no connectivity certificate.
    Unknown {
        k_max: u32,
    },
}

impl TrivialPointVerdict {
    pub fn has_trivial_point(&self) -> Option<bool> {
        match self {
            Self::HasTrivialPoint { .. } | Self::Singleton => Some(true),
            Self::NoTrivialPoint { .. } => Some(false),
            Self::Unknown { .. } => None,
        }
    }

    pub fn island_level(&self) -> Option<u32> {
        match *self {
            Self::HasTrivialPoint { level, .. } => Some(level),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::HasTrivialPoint { .. } => "has_trivial_point",
            Self::NoTrivialPoint { .. } => "no_trivial_point",
            Self::Singleton => "singleton",
            Self::Unknown { .. } => "unknown",
        }
    }
}

/// Component statistics of one approximation level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelSummary {
    pub level: u32,
    pub occupied: u64,
    pub components: u64,
    pub islands: u64,
    pub island_cells: u64,
    /// Id of the lowest-numbered island, if any.
    #[serde(skip)]
    pub first_island: Option<u32>,
}

/// Builds and labels `E_k` and summarizes its islands.
pub fn scan_level(digits: &DigitSet, k: u32, budget: &Budget) -> Result<LevelSummary> {
    let grid = build_grid(digits, k, budget)?;
    let total = crate::approx::bitmap_bytes(grid.cell_count()) + labeling_bytes(&grid);
    budget.check(total).map_err(|e| e.at_level(k))?;
    let labeling = label_components(&grid);
    let mut islands = 0;
    let mut island_cells = 0;
    let mut first_island = None;
    for id in labeling.island_ids() {
        islands += 1;
        island_cells += labeling.cell_count(id);
        first_island.get_or_insert(id);
    }
    Ok(LevelSummary {
        level: k,
        occupied: grid.occupied_count(),
        components: labeling.component_count() as u64,
        islands,
        island_cells,
        first_island,
    })
}

/// Smallest `k ≤ k_max` at which `E_k` has an island. Expects a full-rank
/// digit set; callers reduce first.
pub fn first_island_level(digits: &DigitSet, k_max: u32, budget: &Budget) -> Result<Option<u32>> {
    Ok(first_island(digits, k_max, budget)?.map(|(k, _)| k))
}

fn first_island(digits: &DigitSet, k_max: u32, budget: &Budget) -> Result<Option<(u32, u32)>> {
    for k in 1..=k_max {
        let summary = scan_level(digits, k, budget)?;
        if let Some(id) = summary.first_island {
            return Ok(Some((k, id)));
        }
    }
    Ok(None)
}

/// Decides trivial-point existence as far as a bounded island search and the
/// connectivity certificate allow.
pub fn trivial_point_status(digits: &DigitSet, k_max: u32, budget: &Budget) -> Result<TrivialPointVerdict> {
    let reduction = reduce_full_rank(digits);
    if reduction.is_singleton() {
        return Ok(TrivialPointVerdict::Singleton);
    }
    let reduced = &reduction.reduced;
    if let Some((level, island_id)) = first_island(reduced, k_max, budget)? {
        return Ok(TrivialPointVerdict::HasTrivialPoint { level, island_id });
    }
    Ok(certify_or_unknown(reduced, k_max))
}

pub(crate) fn certify_or_unknown(reduced: &DigitSet, k_max: u32) -> TrivialPointVerdict {
    if reduced.len() >= 2 && hata_connected(reduced) {
        TrivialPointVerdict::NoTrivialPoint {
            certificate: Certificate::ConnectedAttractor,
        }
    } else {
        TrivialPointVerdict::Unknown { k_max }
    }
}
