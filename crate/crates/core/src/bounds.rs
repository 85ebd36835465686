//! Upper bounds on the connectedness index and the report chain
//! `dim_tH ≤ I_c ≤ dim_H`.
//!
//! Every coding that uses island letters of `E_k` infinitely often lands on a
//! trivial point, so the non-trivial part of `E` is covered by copies of the
//! attractor of `D_k` minus all island cells, in base `n^k`. That gives the
//! candidate `log(#D_k − #J_k) / (k log n)` for each level with islands.

use serde::Serialize;

use crate::approx::Budget;
use crate::error::{Error, Result};
use crate::model::{reduce_full_rank, DigitSet, Dimension};
use crate::topology::{certify_or_unknown, scan_level, LevelSummary, TrivialPointVerdict};

/// Tolerance for `ic_exact ≤ ic_upper`.
pub const EXACT_TOLERANCE: f64 = 1e-9;

/// The level and cell counts behind an island-removal bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub level: u32,
    pub removed_cells: u64,
    pub remaining_cells: u64,
}

impl Witness {
    /// `log(remaining) / (level · log n)`; an empty remainder bounds the
    /// index by the dimension of the empty set, taken as 0.
    pub fn bound(&self, base: u64) -> f64 {
        if self.remaining_cells <= 1 {
            0.0
        } else {
            (self.remaining_cells as f64).ln() / (self.level as f64 * (base as f64).ln())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IcUpperBound {
    pub value: f64,
    /// Absent when no island was found and the bound is `dim_H` itself.
    pub witness: Option<Witness>,
    /// One candidate per level with islands.
    pub candidates: Vec<(Witness, f64)>,
}

fn bound_from_levels(digits: &DigitSet, levels: &[LevelSummary]) -> IcUpperBound {
    let base = digits.base();
    let candidates: Vec<(Witness, f64)> = levels
        .iter()
        .filter(|s| s.islands > 0)
        .map(|s| {
            let w = Witness {
                level: s.level,
                removed_cells: s.island_cells,
                remaining_cells: s.occupied - s.island_cells,
            };
            (w, w.bound(base))
        })
        .collect();
    match candidates.iter().min_by(|a, b| a.1.total_cmp(&b.1)) {
        Some(&(w, v)) => IcUpperBound {
            value: v,
            witness: Some(w),
            candidates,
        },
        None => IcUpperBound {
            value: digits.hausdorff_dimension(),
            witness: None,
            candidates,
        },
    }
}

fn scan_levels(digits: &DigitSet, k_max: u32, budget: &Budget) -> Result<Vec<LevelSummary>> {
    (1..=k_max).map(|k| scan_level(digits, k, budget)).collect()
}

/// Minimum over `k ≤ k_max` of the island-removal bound. Expects a full-rank
/// digit set.
pub fn ic_upper_bound(digits: &DigitSet, k_max: u32, budget: &Budget) -> Result<IcUpperBound> {
    Ok(bound_from_levels(digits, &scan_levels(digits, k_max, budget)?))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsReport {
    pub dim_h: Dimension,
    pub ic_upper: f64,
    pub witness: Option<Witness>,
    pub ic_exact: Option<f64>,
    pub th_upper: f64,
    pub verdict: TrivialPointVerdict,
    pub strict_drop: bool,
    /// Projection steps applied before analysis.
    pub reduction_steps: usize,
    pub reduced_dim: usize,
    pub levels: Vec<LevelSummary>,
}

/// Reduces, scans levels `1..=k_max`, and assembles the bound chain.
///
/// `gd_value` is an externally computed connectedness index; it must not
/// exceed the island-removal bound.
pub fn bounds_report(
    digits: &DigitSet,
    k_max: u32,
    gd_value: Option<f64>,
    budget: &Budget,
) -> Result<BoundsReport> {
    let reduction = reduce_full_rank(digits);
    let reduced = &reduction.reduced;
    let dim_h = digits.dimension();

    let (levels, verdict) = if reduction.is_singleton() {
        (Vec::new(), TrivialPointVerdict::Singleton)
    } else {
        let levels = scan_levels(reduced, k_max, budget)?;
        let verdict = match levels.iter().find_map(|s| s.first_island.map(|id| (s.level, id))) {
            Some((level, island_id)) => TrivialPointVerdict::HasTrivialPoint { level, island_id },
            None => certify_or_unknown(reduced, k_max),
        };
        (levels, verdict)
    };

    let bound = bound_from_levels(reduced, &levels);
    let ic_upper = bound.value.min(dim_h.value);
    if let Some(exact) = gd_value {
        if exact > ic_upper + EXACT_TOLERANCE {
            return Err(Error::ExactExceedsUpper {
                exact,
                upper: ic_upper,
            });
        }
    }
    let strict_drop = matches!(verdict, TrivialPointVerdict::HasTrivialPoint { .. });
    Ok(BoundsReport {
        dim_h,
        ic_upper,
        witness: bound.witness,
        ic_exact: gd_value,
        th_upper: ic_upper.min(dim_h.value),
        verdict,
        strict_drop,
        reduction_steps: reduction.steps.len(),
        reduced_dim: reduced.dim(),
        levels,
    })
}
