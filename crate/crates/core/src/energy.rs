//! δ-approximate solution counts of `P(x, y) = P(x', y')` over a cell set,
//! and the Cauchy–Schwarz lower bound on the image they imply.

use serde::{Deserialize, Serialize};

use crate::dyadic::DyadicSet2D;
use crate::error::{Error, Result};
use crate::exactpoly::BivariatePoly;
use crate::par::{self, Exec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyCount {
    /// Ordered pairs of cells with `|P(c) - P(c')| <= tolerance_c * delta`.
    pub quadruple_count: u64,
    pub tolerance_c: f64,
    /// `M^2` for `M` cells.
    pub total_pairs: u64,
    /// `log(quadruple_count) / log(1/delta)`
    pub normalized_exponent: f64,
    pub scale_k: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthBound {
    /// `c * entropy^2 / energy`, implicit constants set to 1.
    pub image_lower_bound: f64,
    pub heuristic: bool,
}

/// Counts ordered pairs of cells whose center values differ by at most
/// `tolerance_c * delta`, by sorting the values and sweeping a window.
pub fn energy_count(p: &BivariatePoly, e: &DyadicSet2D, tolerance_c: f64, exec: Exec) -> Result<EnergyCount> {
    if !(tolerance_c > 0.0 && tolerance_c.is_finite()) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tolerance_c}")));
    }
    let h = p.horner();
    let d = e.delta();
    let mut values = par::map(exec, e.cells(), |&(i, j)| h.eval((i as f64 + 0.5) * d, (j as f64 + 0.5) * d));
    par::sort_f64(exec, &mut values);
    let count = window_pairs(&values, tolerance_c * d);
    let m = values.len() as u64;
    let k = e.scale_k();
    Ok(EnergyCount {
        quadruple_count: count,
        tolerance_c,
        total_pairs: m * m,
        normalized_exponent: if count == 0 || k == 0 { 0.0 } else { (count as f64).log2() / k as f64 },
        scale_k: k,
    })
}

/// Ordered pairs `(i, j)` with `|v_i - v_j| <= w` in a sorted slice.
fn window_pairs(sorted: &[f64], w: f64) -> u64 {
    let mut hi = 0usize;
    let mut above = 0u64;
    for (i, &v) in sorted.iter().enumerate() {
        hi = hi.max(i);
        while hi + 1 < sorted.len() && sorted[hi + 1] - v <= w {
            hi += 1;
        }
        above += (hi - i) as u64;
    }
    sorted.len() as u64 + 2 * above
}

/// `gradient_floor_c * entropy_x^2 / quadruple_count`.
pub fn cs_image_lower_bound(entropy_x: u64, ec: &EnergyCount, gradient_floor_c: f64) -> Result<GrowthBound> {
    if ec.quadruple_count < entropy_x || ec.quadruple_count == 0 {
        return Err(Error::InvalidArgument(format!(
            "energy {} is below the diagonal count {entropy_x}",
            ec.quadruple_count
        )));
    }
    let e = entropy_x as f64;
    Ok(GrowthBound {
        image_lower_bound: gradient_floor_c * e * e / ec.quadruple_count as f64,
        heuristic: true,
    })
}
