use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::series::GcdSeriesReport;
use crate::error::{Error, Result};

/// Sorted distinct indices observed within `0..=window`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexSet {
    indices: Vec<usize>,
    window: usize,
}

impl IndexSet {
    pub fn new(indices: impl IntoIterator<Item = usize>, window: usize) -> Result<Self> {
        let set: BTreeSet<usize> = indices.into_iter().collect();
        if let Some(&big) = set.iter().next_back() {
            if big > window {
                return Err(Error::domain(format!("index {big} lies beyond the window {window}")));
            }
        }
        Ok(IndexSet {
            indices: set.into_iter().collect(),
            window,
        })
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn window(&self) -> usize {
        self.window
    }

    pub fn contains(&self, n: usize) -> bool {
        self.indices.binary_search(&n).is_ok()
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

/// Rows with `log_gcd >= η d^n`. Rows where both orbit values hit their
/// targets have `gcd = 0` and never qualify.
pub fn large_index_set(report: &GcdSeriesReport, eta: f64) -> Result<IndexSet> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::domain("eta must be positive"));
    }
    let d = report.degree as f64;
    let picked = report
        .rows
        .iter()
        .filter(|r| !r.has_flag(super::series::FLAG_BOTH_ZERO))
        .filter(|r| r.log_gcd >= eta * d.powi(r.n as i32))
        .map(|r| r.n);
    IndexSet::new(picked, report.last_completed())
}

/// `{start + k step : k >= 0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Progression {
    pub start: usize,
    pub step: usize,
}

impl Progression {
    pub fn terms(&self, window: usize) -> impl Iterator<Item = usize> {
        (self.start..=window).step_by(self.step)
    }
}

/// Window-consistent decomposition of an index set: every progression lies
/// inside the set up to the window, and together with `residual` they cover
/// it exactly. Says nothing about indices past the window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApStructure {
    pub progressions: Vec<Progression>,
    pub residual: Vec<usize>,
    /// Every index at or past this one is covered by a progression.
    pub burn_in: usize,
    pub window: usize,
    pub max_step: usize,
    pub label: String,
}

impl ApStructure {
    /// The indices described, within the window.
    pub fn expand(&self) -> BTreeSet<usize> {
        let mut out: BTreeSet<usize> = self.residual.iter().copied().collect();
        for p in &self.progressions {
            out.extend(p.terms(self.window));
        }
        out
    }
}

/// Greedy fit, smallest step first and then smallest uncovered start.
///
/// A candidate progression must start in the first half of the window and
/// have at least two terms there, all of them in the set, so edge effects
/// near the window end are not read as structure. Steps go up to
/// `sqrt(window)`; whatever stays uncovered is returned as the residual.
pub fn ap_structure(set: &IndexSet) -> ApStructure {
    let window = set.window();
    let max_step = (window as f64).sqrt().floor().max(1.0) as usize;
    let mut covered: BTreeSet<usize> = BTreeSet::new();
    let mut progressions = Vec::new();
    for step in 1..=max_step {
        for &start in set.indices() {
            if covered.contains(&start) || 2 * start > window || start + step > window {
                continue;
            }
            let p = Progression { start, step };
            if p.terms(window).all(|n| set.contains(n)) {
                covered.extend(p.terms(window));
                progressions.push(p);
            }
        }
    }
    let residual: Vec<usize> = set.indices().iter().copied().filter(|n| !covered.contains(n)).collect();
    let burn_in = residual.last().map_or(0, |&n| n + 1);
    ApStructure {
        progressions,
        residual,
        burn_in,
        window,
        max_step,
        label: "window-consistent".into(),
    }
}
