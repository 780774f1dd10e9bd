//! Exhaustive non-concentration audits over dyadic windows.
//!
//! Only dyadic windows are scanned. Any interval `J` with
//! `2^-(k'+1) < |J| <= 2^-k'` is covered by at most two dyadic windows of
//! length `2^-k'`, so the audited ratio bounds the one over all intervals
//! up to a factor `2 * 2^kappa`.

use serde::{Deserialize, Serialize};

use super::{DyadicSet1D, DyadicSet2D};
use crate::par::{self, Exec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub scale: u32,
    pub position: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonConcentrationAudit {
    pub alpha: f64,
    pub kappa: f64,
    pub threshold: f64,
    pub worst_ratio: f64,
    /// `None` for the empty set.
    pub worst_window: Option<Window>,
    pub passed: bool,
}

/// Largest ratio at one level, keeping the first window on ties.
fn best_of(level: u32, runs: impl Iterator<Item = (Vec<u64>, usize)>, weight: f64) -> Option<(f64, Window)> {
    let mut best: Option<(f64, Window)> = None;
    for (pos, count) in runs {
        let ratio = count as f64 * weight;
        if best.as_ref().is_none_or(|(b, _)| ratio > *b) {
            best = Some((ratio, Window { scale: level, position: pos }));
        }
    }
    best
}

fn reduce(per_level: Vec<Option<(f64, Window)>>) -> Option<(f64, Window)> {
    let mut best: Option<(f64, Window)> = None;
    for cand in per_level.into_iter().flatten() {
        if best.as_ref().is_none_or(|(b, _)| cand.0 > *b) {
            best = Some(cand);
        }
    }
    best
}

/// `max_J E_delta(s ∩ J) / (|J|^kappa delta^-alpha)` over every dyadic
/// window `J` at scales `0..=scale_k`.
pub fn audit_nonconcentration(
    s: &DyadicSet1D,
    alpha: f64,
    kappa: f64,
    threshold: f64,
    exec: Exec,
) -> NonConcentrationAudit {
    let k = s.scale_k();
    let cells = s.cells();
    let levels: Vec<u32> = (0..=k).collect();
    let per_level = par::map(exec, &levels, |&level| {
        let shift = k - level;
        let weight = (level as f64 * kappa - k as f64 * alpha).exp2();
        let runs = cells.chunk_by(|a, b| a >> shift == b >> shift).map(|run| (vec![run[0] >> shift], run.len()));
        best_of(level, runs, weight)
    });
    finish(reduce(per_level), alpha, kappa, threshold)
}

/// Ball form in the plane: `max_Q E_delta(X ∩ Q) / (r^alpha delta^-alpha)`
/// over dyadic squares `Q` of side `r`.
pub fn audit_nonconcentration_2d(s: &DyadicSet2D, alpha: f64, threshold: f64, exec: Exec) -> NonConcentrationAudit {
    let k = s.scale_k();
    let cells = s.cells();
    let levels: Vec<u32> = (0..=k).collect();
    let per_level = par::map(exec, &levels, |&level| {
        let shift = k - level;
        let weight = ((level as f64 - k as f64) * alpha).exp2();
        let mut coarse: Vec<(u32, u32)> = cells.iter().map(|&(i, j)| (i >> shift, j >> shift)).collect();
        coarse.sort_unstable();
        let runs = coarse
            .chunk_by(|a, b| a == b)
            .map(|run| (vec![run[0].0 as u64, run[0].1 as u64], run.len()))
            .collect::<Vec<_>>();
        best_of(level, runs.into_iter(), weight)
    });
    finish(reduce(per_level), alpha, alpha, threshold)
}

fn finish(best: Option<(f64, Window)>, alpha: f64, kappa: f64, threshold: f64) -> NonConcentrationAudit {
    let (worst_ratio, worst_window) = match best {
        Some((r, w)) => (r, Some(w)),
        None => (0.0, None),
    };
    NonConcentrationAudit {
        alpha,
        kappa,
        threshold,
        worst_ratio,
        worst_window,
        passed: worst_ratio <= threshold,
    }
}
