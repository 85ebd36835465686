//! Exhaustive enumeration of digit sets with fixed base, dimension and size.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::approx::Budget;
use crate::bounds::bounds_report;
use crate::error::Error;
use crate::model::DigitSet;

/// Default cap on candidate sets before symmetry reduction.
pub const DEFAULT_CAP: u64 = 10_000_000;

const BATCH: usize = 2048;

type PlaneMap = fn(u64, u64, u64) -> (u64, u64);

#[derive(Debug, Clone)]
pub struct SurveyParams {
    pub base: u64,
    pub dim: usize,
    pub cells: usize,
    pub k_max: u32,
    pub mod_symmetry: bool,
    pub cap: u64,
    pub budget: Budget,
    /// Worker threads; `None` uses the available parallelism.
    pub jobs: Option<usize>,
}

/// One line of survey output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurveyRecord {
    pub digits: Vec<Vec<u64>>,
    pub n: u64,
    pub d: usize,
    pub count: usize,
    /// Lexicographically smallest member of its symmetry class.
    pub representative: bool,
    pub class_size: usize,
    pub verdict: String,
    pub first_island_level: Option<u32>,
    pub dim_h: f64,
    pub ic_upper: f64,
    pub th_upper: f64,
    pub strict_drop: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SurveySummary {
    pub candidates: u64,
    pub emitted: u64,
    pub skipped: u64,
    pub by_verdict: BTreeMap<String, u64>,
}

#[derive(Debug, Error)]
pub enum SurveyError {
    #[error("survey has {count} candidate sets, cap is {cap}")]
    CapExceeded { count: u128, cap: u64 },
    #[error(transparent)]
    Analysis(#[from] Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("cannot start worker pool: {0}")]
    Pool(String),
}

/// `C(n^d, cells)`, the number of candidate digit sets.
pub fn candidate_count(base: u64, dim: usize, cells: usize) -> u128 {
    let Some(total) = (base as u128).checked_pow(dim as u32) else {
        return u128::MAX;
    };
    let k = cells as u128;
    if k > total {
        return 0;
    }
    let k = k.min(total - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul(total - i) {
            Some(v) => v / (i + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// All vectors of `{0..n−1}^d` in lexicographic order.
fn universe(base: u64, dim: usize) -> Vec<Vec<u64>> {
    let mut out: Vec<Vec<u64>> = vec![vec![]];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..base).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    out
}

/// The eight symmetries of the square acting on planar digits.
pub fn dihedral_images(digits: &[Vec<u64>], base: u64) -> Vec<Vec<Vec<u64>>> {
    let m = base - 1;
    let maps: [PlaneMap; 8] = [
        |_, x, y| (x, y),
        |m, x, y| (m - y, x),
        |m, x, y| (m - x, m - y),
        |m, x, y| (y, m - x),
        |m, x, y| (m - x, y),
        |m, x, y| (x, m - y),
        |_, x, y| (y, x),
        |m, x, y| (m - y, m - x),
    ];
    maps.iter()
        .map(|f| {
            let mut image: Vec<Vec<u64>> = digits
                .iter()
                .map(|d| {
                    let (x, y) = f(m, d[0], d[1]);
                    vec![x, y]
                })
                .collect();
            image.sort();
            image
        })
        .collect()
}

/// Whether `digits` is the smallest member of its class, and the class size.
fn symmetry_class(digits: &[Vec<u64>], base: u64, dim: usize) -> (bool, usize) {
    if dim != 2 {
        return (true, 1);
    }
    let mut images = dihedral_images(digits, base);
    images.sort();
    images.dedup();
    (images[0].as_slice() == digits, images.len())
}

fn analyze(digits: Vec<Vec<u64>>, params: &SurveyParams) -> Result<Option<SurveyRecord>, Error> {
    let (representative, class_size) = symmetry_class(&digits, params.base, params.dim);
    if params.mod_symmetry && !representative {
        return Ok(None);
    }
    let set = DigitSet::new(params.base, params.dim, digits)?;
    let report = bounds_report(&set, params.k_max, None, &params.budget)?;
    Ok(Some(SurveyRecord {
        digits: set.to_vecs(),
        n: set.base(),
        d: set.dim(),
        count: set.len(),
        representative,
        class_size,
        verdict: report.verdict.label().to_string(),
        first_island_level: report.verdict.island_level(),
        dim_h: report.dim_h.value,
        ic_upper: report.ic_upper,
        th_upper: report.th_upper,
        strict_drop: report.strict_drop,
    }))
}

/// Advances `idx` to the next `k`-combination of `0..total` in
/// lexicographic order.
fn next_combination(idx: &mut [usize], total: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < total - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Enumerates every digit set of the given shape in lexicographic order of
/// their sorted digit lists, analyzes them in parallel batches, and feeds
/// the records to `sink` in order. Sets in `skip` are not analyzed.
pub fn run_survey(
    params: &SurveyParams,
    skip: &HashSet<Vec<Vec<u64>>>,
    mut sink: impl FnMut(&SurveyRecord) -> std::io::Result<()>,
) -> Result<SurveySummary, SurveyError> {
    if params.base < 2 {
        return Err(Error::BaseTooSmall(params.base).into());
    }
    if params.dim == 0 {
        return Err(Error::ZeroDimension.into());
    }
    let count = candidate_count(params.base, params.dim, params.cells);
    if count > params.cap as u128 {
        return Err(SurveyError::CapExceeded {
            count,
            cap: params.cap,
        });
    }
    let mut summary = SurveySummary {
        candidates: count as u64,
        ..Default::default()
    };
    if count == 0 || params.cells == 0 {
        return Ok(summary);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(params.jobs.unwrap_or(0))
        .build()
        .map_err(|e| SurveyError::Pool(e.to_string()))?;
    let universe = universe(params.base, params.dim);
    let total = universe.len();
    let mut idx: Vec<usize> = (0..params.cells).collect();
    let mut more = true;
    while more {
        let mut batch = Vec::with_capacity(BATCH);
        while more && batch.len() < BATCH {
            let digits: Vec<Vec<u64>> = idx.iter().map(|&i| universe[i].clone()).collect();
            if skip.contains(&digits) {
                summary.skipped += 1;
            } else {
                batch.push(digits);
            }
            more = next_combination(&mut idx, total);
        }
        let results: Vec<Result<Option<SurveyRecord>, Error>> =
            pool.install(|| batch.into_par_iter().map(|d| analyze(d, params)).collect());
        for result in results {
            if let Some(record) = result? {
                sink(&record)?;
                summary.emitted += 1;
                *summary.by_verdict.entry(record.verdict.clone()).or_default() += 1;
            }
        }
    }
    Ok(summary)
}
