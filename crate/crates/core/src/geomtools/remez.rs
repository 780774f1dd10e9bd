//! Grid check of the Remez-type sublevel bound
//! `|{z in Omega : |P(z)| <= lambda m}| <= 4 d |Omega| lambda^(1/D)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::{BivariatePoly, Var};
use crate::interval::{poly_range, Interval};
use crate::par::{self, Exec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemezReport {
    /// Grid estimate of `sup |P|`.
    pub m: f64,
    /// Fraction of grid midpoints with `|P| <= lambda m`.
    pub measured_fraction: f64,
    /// `4 d lambda^(1/D)`
    pub bound: f64,
    /// Relative allowance for one cell diagonal of Lipschitz drift.
    pub grid_slack: f64,
    pub passed: bool,
}

/// `omega` holds one `(lo, hi)` range per variable: one entry for a
/// polynomial in `x` only, two for a bivariate one.
pub fn remez_check(
    p: &BivariatePoly,
    omega: &[(f64, f64)],
    lambda: f64,
    grid_n: usize,
    exec: Exec,
) -> Result<RemezReport> {
    let d = omega.len();
    if !(d == 1 || d == 2) || (d == 1 && !p.is_free_of(Var::Y)) {
        return Err(Error::InvalidArgument("box must have one range per variable of P".into()));
    }
    if !(lambda > 0.0 && lambda < 1.0) || grid_n == 0 {
        return Err(Error::InvalidArgument(format!("need 0 < lambda < 1 and a nonempty grid, got {lambda}")));
    }
    if p.is_zero() || omega.iter().any(|&(a, b)| !(a < b)) {
        return Err(Error::InvalidArgument("zero polynomial or empty box".into()));
    }
    let h = p.horner();
    let (x0, x1) = omega[0];
    let (y0, y1) = if d == 2 { omega[1] } else { (0.0, 0.0) };
    let hx = (x1 - x0) / grid_n as f64;
    let hy = (y1 - y0) / grid_n as f64;
    let rows = if d == 2 { grid_n } else { 1 };
    let values: Vec<f64> = par::map_range(exec, rows, |j| {
        let y = y0 + (j as f64 + 0.5) * hy;
        (0..grid_n).map(|i| h.eval(x0 + (i as f64 + 0.5) * hx, y).abs()).collect::<Vec<_>>()
    })
    .into_iter()
    .flatten()
    .collect();
    let m = values.iter().copied().fold(0.0, f64::max);
    let below = values.iter().filter(|&&v| v <= lambda * m).count();
    let measured_fraction = below as f64 / values.len() as f64;
    let degree = p.degree().max(1) as f64;
    let bound = 4.0 * d as f64 * lambda.powf(1.0 / degree);
    let bx = Interval::new(x0, x1);
    let by = Interval::new(y0.min(y1), y0.max(y1));
    let lx = poly_range(&p.partial(Var::X), bx, by).mag();
    let ly = if d == 2 { poly_range(&p.partial(Var::Y), bx, by).mag() } else { 0.0 };
    let grid_slack = if m > 0.0 { lx.hypot(ly) * hx.hypot(hy) / (lambda * m) } else { f64::INFINITY };
    Ok(RemezReport {
        m,
        measured_fraction,
        bound,
        grid_slack,
        passed: measured_fraction <= bound * (1.0 + grid_slack),
    })
}
