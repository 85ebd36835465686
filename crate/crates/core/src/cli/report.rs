//! The `fracube-report/1` JSON document and its plain-text rendering.

use std::fmt::Write as _;

use serde::Serialize;

use crate::bounds::{BoundsReport, Witness};
use crate::gd::{GdDimension, GdVerification, LevelOutcome};
use crate::model::{AffineReduction, DigitSet, Dimension, Prescreen, StepSummary};
use crate::topology::{LevelSummary, TrivialPointVerdict};

pub const SCHEMA: &str = "fracube-report/1";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InputEcho {
    pub n: u64,
    pub d: usize,
    pub count: usize,
    pub digits: Vec<Vec<u64>>,
}

impl InputEcho {
    pub fn new(digits: &DigitSet) -> Self {
        Self {
            n: digits.base(),
            d: digits.dim(),
            count: digits.len(),
            digits: digits.to_vecs(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionSummary {
    pub rank: usize,
    pub reduced_dim: usize,
    pub singleton: bool,
    pub steps: Vec<StepSummary>,
}

impl ReductionSummary {
    pub fn new(reduction: &AffineReduction) -> Self {
        Self {
            rank: reduction.rank,
            reduced_dim: reduction.reduced.dim(),
            singleton: reduction.is_singleton(),
            steps: reduction.step_summaries(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IcUpper {
    pub value: f64,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GdReport {
    pub dimension: GdDimension,
    pub verification: Option<GdVerification>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Timings {
    pub total_ms: f64,
}

/// Everything `fracube analyze` reports about one digit set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub schema: &'static str,
    pub input: InputEcho,
    pub reduction: ReductionSummary,
    pub k_max: u32,
    pub dim_h: Dimension,
    pub verdict: TrivialPointVerdict,
    pub first_island_level: Option<u32>,
    pub ic_upper: IcUpper,
    pub ic_exact: Option<f64>,
    pub th_upper: f64,
    pub strict_drop: bool,
    pub levels: Vec<LevelSummary>,
    pub prescreen: Option<Prescreen>,
    pub gd: Option<GdReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Timings>,
}

impl AnalysisReport {
    pub fn new(
        digits: &DigitSet,
        reduction: &AffineReduction,
        k_max: u32,
        bounds: BoundsReport,
        prescreen: Option<Prescreen>,
        gd: Option<GdReport>,
    ) -> Self {
        Self {
            schema: SCHEMA,
            input: InputEcho::new(digits),
            reduction: ReductionSummary::new(reduction),
            k_max,
            dim_h: bounds.dim_h,
            first_island_level: bounds.verdict.island_level(),
            verdict: bounds.verdict,
            ic_upper: IcUpper {
                value: bounds.ic_upper,
                witness: bounds.witness,
            },
            ic_exact: bounds.ic_exact,
            th_upper: bounds.th_upper,
            strict_drop: bounds.strict_drop,
            levels: bounds.levels,
            prescreen,
            gd,
            timings: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let i = &self.input;
        let _ = writeln!(s, "fractal cube: n={} d={} N={}", i.n, i.d, i.count);
        if self.reduction.steps.is_empty() {
            let _ = writeln!(s, "affine rank: {} (full)", self.reduction.rank);
        } else {
            let _ = writeln!(
                s,
                "affine rank: {} (reduced to dimension {} in {} step(s))",
                self.reduction.rank,
                self.reduction.reduced_dim,
                self.reduction.steps.len()
            );
        }
        let _ = writeln!(
            s,
            "dim_H = log {} / log {} = {:.9}",
            self.dim_h.count, self.dim_h.base, self.dim_h.value
        );
        for l in &self.levels {
            let _ = writeln!(
                s,
                "level {}: {} cells, {} component(s), {} island(s) covering {} cells",
                l.level, l.occupied, l.components, l.islands, l.island_cells
            );
        }
        let verdict = match self.verdict {
            TrivialPointVerdict::HasTrivialPoint { level, .. } => {
                format!("has trivial points (island at level {level})")
            }
            TrivialPointVerdict::NoTrivialPoint { .. } => "no trivial point (connected attractor)".into(),
            TrivialPointVerdict::Singleton => "single point (trivial)".into(),
            TrivialPointVerdict::Unknown { k_max } => format!("unknown (no island up to level {k_max})"),
        };
        let _ = writeln!(s, "verdict: {verdict}");
        match &self.ic_upper.witness {
            Some(w) => {
                let _ = writeln!(
                    s,
                    "I_c upper bound: {:.9} (level {}, {} island cells removed, {} kept)",
                    self.ic_upper.value, w.level, w.removed_cells, w.remaining_cells
                );
            }
            None => {
                let _ = writeln!(s, "I_c upper bound: {:.9} (no island found)", self.ic_upper.value);
            }
        }
        if let Some(exact) = self.ic_exact {
            let _ = writeln!(s, "I_c (graph-directed): {exact:.9}");
        }
        let _ = writeln!(s, "dim_tH upper bound: {:.9}", self.th_upper);
        let _ = writeln!(s, "strict drop: {}", if self.strict_drop { "yes" } else { "no" });
        if let Some(p) = &self.prescreen {
            let text = match p {
                Prescreen::RuledOut => "ruled out (trivial point exists)".to_string(),
                Prescreen::Possible { form } => format!("possible ({form:?})"),
                Prescreen::Inconclusive => "inconclusive".to_string(),
            };
            let _ = writeln!(s, "dim_tH = dim_H screen: {text}");
        }
        if let Some(gd) = &self.gd {
            let _ = writeln!(
                s,
                "graph-directed dimension: {:.12} in [{:.12}, {:.12}]",
                gd.dimension.value, gd.dimension.lo, gd.dimension.hi
            );
            if let Some(v) = &gd.verification {
                s.push_str(&verification_text(v));
            }
        }
        if let Some(t) = &self.timings {
            let _ = writeln!(s, "time: {:.1} ms", t.total_ms);
        }
        s
    }
}

pub fn verification_text(v: &GdVerification) -> String {
    let mut s = String::new();
    for l in &v.levels {
        let outcome = match &l.outcome {
            LevelOutcome::Equal => "equal".to_string(),
            LevelOutcome::Mismatch { cell, in_component } => format!(
                "mismatch at {:?} (only in {})",
                cell,
                if *in_component { "component" } else { "graph cells" }
            ),
        };
        let _ = writeln!(
            s,
            "level {}: component {} cells, graph {} cells: {}",
            l.level, l.component_cells, l.path_cells, outcome
        );
    }
    s
}
