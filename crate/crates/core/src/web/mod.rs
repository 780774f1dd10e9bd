//! Curvature and special-form analytics for planar 3-webs.
//!
//! For a polynomial `P` the web is given by the level sets of `x`, `y` and
//! `P`. Its curvature is carried by the polynomial numerator
//!
//! ```text
//! N_P = P_y^2 (P_x P_xxy - P_xx P_xy) - P_x^2 (P_y P_xyy - P_xy P_yy)
//! ```
//!
//! which equals `P_xy^2 * K_P` (with `K_P = grad P ^ grad(P_x P_y / P_xy)`)
//! and `(P_x P_y)^2 * d_xy log(P_x / P_y)` wherever those are defined.
//! `N_P` is computed exactly, so the special-form decision `N_P == 0` is
//! never numerical.

mod blaschke;
mod pinned;

pub use blaschke::{fd_blaschke_curvature, fd_blaschke_curvature_richardson, FnField, PolyField, SmoothField};
pub use pinned::{pinned_blaschke_coefficient, pinned_curvature, PinnedWeb, PINNED_TO_BLASCHKE};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::{BivariatePoly, HornerPoly, Rational, Var};

/// Denominators below this magnitude are treated as structural poles.
pub const POLE_EPSILON: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DegenerateFlags {
    pub px_zero: bool,
    pub py_zero: bool,
    pub pxy_zero: bool,
}

impl DegenerateFlags {
    pub fn any(&self) -> bool {
        self.px_zero || self.py_zero || self.pxy_zero
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureReport {
    pub numerator: BivariatePoly,
    pub is_identically_zero: bool,
    pub degenerate_flags: DegenerateFlags,
}

/// Outcome of the special-form decision procedure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpecialForm {
    /// `N_P` vanishes identically and none of `P_x`, `P_y`, `P_xy` does.
    Special(String),
    NotSpecial,
    /// One of `P_x`, `P_y`, `P_xy` vanishes identically.
    DegenerateSpecial(DegenerateFlags),
}

impl SpecialForm {
    pub fn is_special(&self) -> bool {
        !matches!(self, SpecialForm::NotSpecial)
    }

    pub fn label(&self) -> &'static str {
        match self {
            SpecialForm::Special(_) => "special",
            SpecialForm::NotSpecial => "not-special",
            SpecialForm::DegenerateSpecial(_) => "degenerate-special",
        }
    }
}

/// The partial derivatives that enter `N_P`.
struct Partials {
    px: BivariatePoly,
    py: BivariatePoly,
    pxx: BivariatePoly,
    pxy: BivariatePoly,
    pyy: BivariatePoly,
    pxxy: BivariatePoly,
    pxyy: BivariatePoly,
}

impl Partials {
    fn of(p: &BivariatePoly) -> Self {
        let px = p.partial(Var::X);
        let py = p.partial(Var::Y);
        let pxx = px.partial(Var::X);
        let pxy = px.partial(Var::Y);
        let pyy = py.partial(Var::Y);
        let pxxy = pxx.partial(Var::Y);
        let pxyy = pxy.partial(Var::Y);
        Partials { px, py, pxx, pxy, pyy, pxxy, pxyy }
    }
}

pub fn curvature_numerator(p: &BivariatePoly) -> BivariatePoly {
    let d = Partials::of(p);
    numerator_from(&d)
}

fn numerator_from(d: &Partials) -> BivariatePoly {
    let left = &(&d.py * &d.py) * &(&(&d.px * &d.pxxy) - &(&d.pxx * &d.pxy));
    let right = &(&d.px * &d.px) * &(&(&d.py * &d.pxyy) - &(&d.pxy * &d.pyy));
    &left - &right
}

pub fn curvature_report(p: &BivariatePoly) -> CurvatureReport {
    let d = Partials::of(p);
    let numerator = numerator_from(&d);
    CurvatureReport {
        is_identically_zero: numerator.is_zero(),
        degenerate_flags: DegenerateFlags {
            px_zero: d.px.is_zero(),
            py_zero: d.py.is_zero(),
            pxy_zero: d.pxy.is_zero(),
        },
        numerator,
    }
}

pub fn is_special_form(p: &BivariatePoly) -> SpecialForm {
    let flags = DegenerateFlags {
        px_zero: p.is_free_of(Var::X),
        py_zero: p.is_free_of(Var::Y),
        pxy_zero: p.partial(Var::X).is_free_of(Var::Y),
    };
    if flags.any() {
        return SpecialForm::DegenerateSpecial(flags);
    }
    if curvature_numerator(p).is_zero() {
        SpecialForm::Special("curvature numerator vanishes identically".into())
    } else {
        SpecialForm::NotSpecial
    }
}

/// Precompiled floating evaluator for `K_P = N_P / P_xy^2`.
#[derive(Debug, Clone)]
pub struct KpEvaluator {
    numerator: HornerPoly,
    pxy: HornerPoly,
    pole_epsilon: f64,
}

impl KpEvaluator {
    pub fn new(p: &BivariatePoly) -> Self {
        Self::with_pole_epsilon(p, POLE_EPSILON)
    }

    pub fn with_pole_epsilon(p: &BivariatePoly, pole_epsilon: f64) -> Self {
        let d = Partials::of(p);
        KpEvaluator {
            numerator: numerator_from(&d).horner(),
            pxy: d.pxy.horner(),
            pole_epsilon,
        }
    }

    pub fn eval(&self, at: (f64, f64)) -> Result<f64> {
        let m = self.pxy.eval(at.0, at.1);
        if m.abs() < self.pole_epsilon {
            return Err(Error::Pole(format!(
                "|P_xy({}, {})| = {m:e} is within the pole tolerance",
                at.0, at.1
            )));
        }
        Ok(self.numerator.eval(at.0, at.1) / (m * m))
    }
}

pub fn eval_kp(p: &BivariatePoly, at: (f64, f64)) -> Result<f64> {
    KpEvaluator::new(p).eval(at)
}

/// `grad P ^ grad(P_x P_y / P_xy)` at a rational point, expanded with the
/// quotient rule rather than through `N_P`. `None` on `Z(P_xy)`.
pub fn kp_wedge_exact(p: &BivariatePoly, at: (&Rational, &Rational)) -> Option<Rational> {
    let px = p.partial(Var::X);
    let py = p.partial(Var::Y);
    let m = px.partial(Var::Y);
    let q = &px * &py;
    let m_val = m.evaluate(at);
    if m_val.is_zero() {
        return None;
    }
    let q_val = q.evaluate(at);
    // d(q/m) = (dq * m - q * dm) / m^2
    let quot = |var: Var| {
        let num = &(&q.partial(var).evaluate(at) * &m_val) - &(&q_val * &m.partial(var).evaluate(at));
        num / (&m_val * &m_val)
    };
    let gx = quot(Var::X);
    let gy = quot(Var::Y);
    Some(&(&px.evaluate(at) * &gy) - &(&py.evaluate(at) * &gx))
}

/// `(P_x P_y)^2 * d_xy log(P_x / P_y)` at a rational point, from the
/// expanded logarithmic derivative. `None` where `P_x` or `P_y` vanishes.
pub fn log_form_exact(p: &BivariatePoly, at: (&Rational, &Rational)) -> Option<Rational> {
    let d = Partials::of(p);
    let e = |q: &BivariatePoly| q.evaluate(at);
    let (px, py) = (e(&d.px), e(&d.py));
    if px.is_zero() || py.is_zero() {
        return None;
    }
    let (pxx, pxy, pyy, pxxy, pxyy) = (e(&d.pxx), e(&d.pxy), e(&d.pyy), e(&d.pxxy), e(&d.pxyy));
    // d_x (P_xy / P_x) - d_x (P_yy / P_y)
    let first = (&(&pxxy * &px) - &(&pxy * &pxx)) / (&px * &px);
    let second = (&(&pxyy * &py) - &(&pyy * &pxy)) / (&py * &py);
    let pp = &px * &py;
    Some(&(&pp * &pp) * &(first - second))
}

/// Four-point auxiliary function for `F(x,x',y,y') = P(x,y) - P(x',y')`:
///
/// `P_x(x,y) P_y(x,y) P_xy(x',y') - P_x(x',y') P_y(x',y') P_xy(x,y)`.
#[derive(Debug, Clone)]
pub struct HfEvaluator {
    px: HornerPoly,
    py: HornerPoly,
    pxy: HornerPoly,
}

impl HfEvaluator {
    pub fn new(p: &BivariatePoly) -> Self {
        let px = p.partial(Var::X);
        let py = p.partial(Var::Y);
        let pxy = px.partial(Var::Y);
        HfEvaluator {
            px: px.horner(),
            py: py.horner(),
            pxy: pxy.horner(),
        }
    }

    /// Argument order is `(x, x', y, y')`.
    pub fn eval(&self, at: (f64, f64, f64, f64)) -> f64 {
        let (x, xp, y, yp) = at;
        self.px.eval(x, y) * self.py.eval(x, y) * self.pxy.eval(xp, yp)
            - self.px.eval(xp, yp) * self.py.eval(xp, yp) * self.pxy.eval(x, y)
    }
}

pub fn eval_hf(p: &BivariatePoly, at: (f64, f64, f64, f64)) -> f64 {
    HfEvaluator::new(p).eval(at)
}

/// Exact version of [`eval_hf`], argument order `(x, x', y, y')`.
pub fn eval_hf_exact(p: &BivariatePoly, at: (&Rational, &Rational, &Rational, &Rational)) -> Rational {
    let (x, xp, y, yp) = at;
    let px = p.partial(Var::X);
    let py = p.partial(Var::Y);
    let pxy = px.partial(Var::Y);
    let here = (x, y);
    let there = (xp, yp);
    &(&(&px.evaluate(here) * &py.evaluate(here)) * &pxy.evaluate(there))
        - &(&(&px.evaluate(there) * &py.evaluate(there)) * &pxy.evaluate(here))
}
