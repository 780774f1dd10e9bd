//! Images of cell sets under the projection families: linear projections,
//! pinned distances, polynomial graph maps and additive maps `u(x) + v(y)`.
//!
//! Values are taken at cell centers. The inner count is the number of
//! value cells hit by those center values; the outer count thickens each
//! value by the worst change of the map across a cell, so the covering
//! number of the continuous image of the union of cells lies between the
//! two.

use serde::{Deserialize, Serialize};

use crate::dyadic::{DyadicSet1D, DyadicSet2D, MAX_SCALE_1D};
use crate::error::{Error, Result};
use crate::exactpoly::{BivariatePoly, HornerPoly, Rational, Var};
use crate::interval::{poly_range, Interval};
use crate::par::{self, Exec};

/// Pins must lie in `[-PIN_RANGE, PIN_RANGE]^2`.
pub const PIN_RANGE: f64 = 4.0;

#[derive(Debug, Clone, PartialEq)]
pub enum ProjectionFamily {
    /// `q -> e . q` for a unit vector `e`.
    Linear { direction: (f64, f64) },
    /// `q -> |p - q|` or `|p - q|^2`.
    PinnedDistance { pin: (f64, f64), squared: bool },
    Graph(BivariatePoly),
    /// `(x, y) -> u(x) + v(y)`; `u` only involves `x`, `v` only `y`.
    AdditiveConvex { u: BivariatePoly, v: BivariatePoly },
}

impl ProjectionFamily {
    /// Normalizes `(e1, e2)`; fails on the zero vector.
    pub fn linear(e1: f64, e2: f64) -> Result<Self> {
        let n = e1.hypot(e2);
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::InvalidArgument(format!("bad direction ({e1}, {e2})")));
        }
        Ok(ProjectionFamily::Linear { direction: (e1 / n, e2 / n) })
    }

    pub fn pinned(px: f64, py: f64, squared: bool) -> Result<Self> {
        if !(px.abs() <= PIN_RANGE && py.abs() <= PIN_RANGE) {
            return Err(Error::InvalidArgument(format!(
                "pin ({px}, {py}) outside [-{PIN_RANGE}, {PIN_RANGE}]^2"
            )));
        }
        Ok(ProjectionFamily::PinnedDistance { pin: (px, py), squared })
    }

    pub fn additive(u: BivariatePoly, v: BivariatePoly) -> Result<Self> {
        if !u.is_free_of(Var::Y) || !v.is_free_of(Var::X) {
            return Err(Error::InvalidArgument("u must depend on x only and v on y only".into()));
        }
        Ok(ProjectionFamily::AdditiveConvex { u, v })
    }

    /// The map as a polynomial, when it is one.
    pub fn polynomial(&self) -> Option<BivariatePoly> {
        match self {
            ProjectionFamily::Linear { direction: (a, b) } => {
                let a = Rational::from_f64(*a)?;
                let b = Rational::from_f64(*b)?;
                Some(&BivariatePoly::x().scale(&a) + &BivariatePoly::y().scale(&b))
            }
            ProjectionFamily::PinnedDistance { pin, squared: true } => {
                let dx = &BivariatePoly::x() - &BivariatePoly::constant(Rational::from_f64(pin.0)?);
                let dy = &BivariatePoly::y() - &BivariatePoly::constant(Rational::from_f64(pin.1)?);
                Some(&(&dx * &dx) + &(&dy * &dy))
            }
            ProjectionFamily::PinnedDistance { squared: false, .. } => None,
            ProjectionFamily::Graph(p) => Some(p.clone()),
            ProjectionFamily::AdditiveConvex { u, v } => Some(u + v),
        }
    }

    pub fn label(&self) -> String {
        match self {
            ProjectionFamily::Linear { direction: (a, b) } => format!("linear({a},{b})"),
            ProjectionFamily::PinnedDistance { pin: (a, b), squared } => {
                format!("{}({a},{b})", if *squared { "pinned_sq" } else { "pinned" })
            }
            ProjectionFamily::Graph(p) => format!("graph({p})"),
            ProjectionFamily::AdditiveConvex { u, v } => format!("additive({u}; {v})"),
        }
    }

    fn evaluator(&self) -> Evaluator {
        match self {
            ProjectionFamily::Linear { direction } => Evaluator::Linear(*direction),
            ProjectionFamily::PinnedDistance { pin, squared: false } => Evaluator::Distance(*pin),
            _ => Evaluator::Poly(self.polynomial().expect("polynomial family").horner()),
        }
    }
}

impl std::str::FromStr for ProjectionFamily {
    type Err = Error;

    /// `linear:A,B`, `pinned:X,Y`, `pinned-sq:X,Y`, `graph:P` or `additive:U;V`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected `kind:args`, got `{s}`")))?;
        let pair = |a: &str| -> Result<(f64, f64)> {
            let bad = || Error::Parse(format!("expected `x,y`, got `{a}`"));
            let (x, y) = a.split_once(',').ok_or_else(bad)?;
            Ok((x.trim().parse().map_err(|_| bad())?, y.trim().parse().map_err(|_| bad())?))
        };
        match kind.trim() {
            "linear" => pair(arg).and_then(|(a, b)| Self::linear(a, b)),
            "pinned" => pair(arg).and_then(|(a, b)| Self::pinned(a, b, false)),
            "pinned-sq" => pair(arg).and_then(|(a, b)| Self::pinned(a, b, true)),
            "graph" => Ok(ProjectionFamily::Graph(arg.parse()?)),
            "additive" => {
                let (u, v) = arg
                    .split_once(';')
                    .ok_or_else(|| Error::Parse(format!("expected `u;v`, got `{arg}`")))?;
                Self::additive(u.parse()?, v.parse()?)
            }
            other => Err(Error::Parse(format!("unknown projection family `{other}`"))),
        }
    }
}

enum Evaluator {
    Linear((f64, f64)),
    Distance((f64, f64)),
    Poly(HornerPoly),
}

impl Evaluator {
    fn eval(&self, x: f64, y: f64) -> f64 {
        match self {
            Evaluator::Linear((a, b)) => a * x + b * y,
            Evaluator::Distance((px, py)) => (x - px).hypot(y - py),
            Evaluator::Poly(h) => h.eval(x, y),
        }
    }
}

/// Bounds on the partial derivatives over a box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GradientBound {
    /// `sup |d/dx|`
    pub lx: f64,
    /// `sup |d/dy|`
    pub ly: f64,
    /// `sup |grad|`, at most `hypot(lx, ly)`.
    pub norm: f64,
}

impl GradientBound {
    /// Largest change of the map between a cell center and any point of
    /// the cell, for cells of side `delta`.
    pub fn cell_slack(&self, delta: f64) -> f64 {
        (self.lx + self.ly).min(std::f64::consts::SQRT_2 * self.norm) * delta / 2.0
    }
}

/// Interval bound on the gradient over `[x0, x1] x [y0, y1]`.
pub fn gradient_bounds(fam: &ProjectionFamily, bbox: [(f64, f64); 2]) -> GradientBound {
    match fam {
        ProjectionFamily::Linear { direction: (a, b) } => GradientBound { lx: a.abs(), ly: b.abs(), norm: 1.0 },
        ProjectionFamily::PinnedDistance { squared: false, .. } => GradientBound { lx: 1.0, ly: 1.0, norm: 1.0 },
        _ => {
            let p = fam.polynomial().expect("polynomial family");
            let bx = Interval::new(bbox[0].0, bbox[0].1);
            let by = Interval::new(bbox[1].0, bbox[1].1);
            let lx = poly_range(&p.partial(Var::X), bx, by).mag();
            let ly = poly_range(&p.partial(Var::Y), bx, by).mag();
            GradientBound { lx, ly, norm: lx.hypot(ly) }
        }
    }
}

/// `L >= sup |grad phi|` over the box.
pub fn gradient_bound(fam: &ProjectionFamily, bbox: [(f64, f64); 2]) -> f64 {
    gradient_bounds(fam, bbox).norm
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImageEstimate {
    /// Value cells hit by cell-center values.
    pub inner_count: usize,
    /// Value cells meeting the open `slack`-neighbourhood of some center value.
    pub outer_count: usize,
    pub lipschitz_bound_used: f64,
    pub slack: f64,
    /// Scale of the value cells.
    pub measure_k: u32,
    /// Value `v` is stored at `(v - chart_lo) / 2^chart_log2_width` in `[0,1)`.
    pub chart_lo: i64,
    pub chart_log2_width: u32,
}

impl ImageEstimate {
    /// `log(count) / log(1/delta)` for the inner count.
    pub fn inner_exponent(&self) -> f64 {
        exponent(self.inner_count, self.measure_k)
    }

    pub fn outer_exponent(&self) -> f64 {
        exponent(self.outer_count, self.measure_k)
    }
}

/// `log2(count) / k`; zero for an empty count.
pub fn exponent(count: usize, k: u32) -> f64 {
    if count == 0 || k == 0 {
        0.0
    } else {
        (count as f64).log2() / k as f64
    }
}

/// Image of `x` measured at its own scale.
pub fn image(fam: &ProjectionFamily, x: &DyadicSet2D, exec: Exec) -> Result<(DyadicSet1D, ImageEstimate)> {
    image_at_scale(fam, x, x.scale_k(), exec)
}

/// Image of `x` with value cells of side `2^-measure_k`. The slack still
/// comes from the cells of `x`.
pub fn image_at_scale(
    fam: &ProjectionFamily,
    x: &DyadicSet2D,
    measure_k: u32,
    exec: Exec,
) -> Result<(DyadicSet1D, ImageEstimate)> {
    let bbox = x.bounding_box().ok_or(Error::EmptySet)?;
    let grad = gradient_bounds(fam, bbox);
    let slack = grad.cell_slack(x.delta());
    let ev = fam.evaluator();
    let d = x.delta();
    let values = par::map(exec, x.cells(), |&(i, j)| ev.eval((i as f64 + 0.5) * d, (j as f64 + 0.5) * d));
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite value in image".into()));
    }
    let scale = (measure_k as f64).exp2();
    let vmin = values.iter().copied().fold(f64::INFINITY, f64::min);
    let vmax = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    // integer chart [lo, lo + 2^m) holding every thickened value
    let lo = (vmin - slack).floor();
    let mut m = 0u32;
    while lo + (m as f64).exp2() < vmax + slack {
        m += 1;
    }
    if measure_k + m > MAX_SCALE_1D {
        return Err(Error::BadScale { requested: measure_k + m, set_scale: MAX_SCALE_1D });
    }
    let offset = lo * scale;
    let cell = |v: f64| ((v * scale).floor() - offset) as u64;
    let mut inner: Vec<u64> = values.iter().map(|&v| cell(v)).collect();
    par::sort(exec, &mut inner);
    inner.dedup();
    // cells meeting (v - slack, v + slack): from floor((v-s)/d) to ceil((v+s)/d) - 1
    let mut spans: Vec<(i64, i64)> = values
        .iter()
        .map(|&v| {
            let a = ((v - slack) * scale).floor() - offset;
            let b = ((v + slack) * scale).ceil() - offset - 1.0;
            (a as i64, (b as i64).max(a as i64))
        })
        .collect();
    par::sort(exec, &mut spans);
    let outer_count = merged_length(&spans);
    let est = ImageEstimate {
        inner_count: inner.len(),
        outer_count,
        lipschitz_bound_used: grad.norm,
        slack,
        measure_k,
        chart_lo: lo as i64,
        chart_log2_width: m,
    };
    Ok((DyadicSet1D::new(measure_k + m, inner)?, est))
}

/// Number of integers in a union of sorted closed ranges.
fn merged_length(spans: &[(i64, i64)]) -> usize {
    let mut total = 0i64;
    let mut cur: Option<(i64, i64)> = None;
    for &(a, b) in spans {
        cur = match cur {
            Some((ca, cb)) if a <= cb + 1 => Some((ca, cb.max(b))),
            Some((ca, cb)) => {
                total += cb - ca + 1;
                Some((a, b))
            }
            None => Some((a, b)),
        };
    }
    if let Some((ca, cb)) = cur {
        total += cb - ca + 1;
    }
    total as usize
}

/// Pinned distance set `{|p - q|}` (or squared) of the cells of `x`.
pub fn pinned_distance_set(
    pin: (f64, f64),
    x: &DyadicSet2D,
    squared: bool,
    exec: Exec,
) -> Result<(DyadicSet1D, ImageEstimate)> {
    image(&ProjectionFamily::pinned(pin.0, pin.1, squared)?, x, exec)
}
