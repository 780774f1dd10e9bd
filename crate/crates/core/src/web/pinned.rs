//! Closed-form curvature of the web of squared distances to three pins
//! `p1 = (t, 0)`, `p2 = (-t, 0)`, `p3 = (a, b)`.

use serde::{Deserialize, Serialize};

use super::POLE_EPSILON;
use crate::error::{Error, Result};
use crate::exactpoly::{BivariatePoly, Rational};

/// Ratio between the Blaschke form coefficient (with its leading factor 2,
/// relative to `dx ^ dy`, webs ordered `phi_i = |z - p_i|^2`) and
/// `b f / g^2`.
///
/// The closed form `b f / g^2` equals the *negative* of
/// `(d_phi1 d_phi2 log(...)) dphi1 ^ dphi2` under this pin ordering: with
/// `dphi1 ^ dphi2 = -8 t y dx ^ dy` the product of the web-coordinate mixed
/// derivative and the Jacobian has the opposite sign to `f`. Together with
/// the factor 2 this gives -2, confirmed symbolically and by the
/// finite-difference cross-check in the tests.
pub const PINNED_TO_BLASCHKE: f64 = -2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PinnedWeb {
    pub t: f64,
    pub a: f64,
    pub b: f64,
}

impl PinnedWeb {
    pub fn new(t: f64, a: f64, b: f64) -> Result<Self> {
        if !(t > 0.0) || !a.is_finite() || !b.is_finite() || !t.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "pinned web needs finite t > 0, got t={t}, a={a}, b={b}"
            )));
        }
        Ok(PinnedWeb { t, a, b })
    }

    pub fn pins(&self) -> [(f64, f64); 3] {
        [(self.t, 0.0), (-self.t, 0.0), (self.a, self.b)]
    }

    pub fn is_collinear(&self) -> bool {
        self.b == 0.0
    }

    fn params(&self) -> (Rational, Rational, Rational) {
        let q = |v: f64| Rational::from_f64(v).expect("finite by construction");
        (q(self.t), q(self.a), q(self.b))
    }

    /// Squared-distance functions `phi_i(z) = |z - p_i|^2` as polynomials.
    pub fn distance_polys(&self) -> [BivariatePoly; 3] {
        let (t, a, b) = self.params();
        let sq = |px: &Rational, py: &Rational| {
            let dx = &BivariatePoly::x() - &BivariatePoly::constant(px.clone());
            let dy = &BivariatePoly::y() - &BivariatePoly::constant(py.clone());
            &(&dx * &dx) + &(&dy * &dy)
        };
        [sq(&t, &Rational::zero()), sq(&-&t, &Rational::zero()), sq(&a, &b)]
    }

    /// Numerator polynomial `f(x, y)`, degree at most 5.
    pub fn f(&self) -> BivariatePoly {
        let (t, a, b) = self.params();
        let n = |k: i64| Rational::from_int(k);
        let t2 = t.pow(2);
        let t4 = t.pow(4);
        let a2 = a.pow(2);
        let a3 = a.pow(3);
        let b2 = b.pow(2);
        let b3 = b.pow(3);
        let ab = &a * &b;
        let ab2 = &a * &b2;
        let terms: Vec<(Rational, u32, u32)> = vec![
            // y^0
            (&ab2 * &t4, 0, 0),
            (-(&b2 * &t4), 1, 0),
            (&(&n(-2) * &ab2) * &t2, 2, 0),
            (&(&n(2) * &b2) * &t2, 3, 0),
            (ab2.clone(), 4, 0),
            (-b2.clone(), 5, 0),
            // y^1
            (&(&n(-4) * &ab) * &t4, 0, 1),
            (&(&(&n(4) * &a2) * &b) * &t2, 1, 1),
            (&(&n(4) * &b) * &t4, 1, 1),
            (&(&n(-4) * &a2) * &b, 3, 1),
            (&(&n(-4) * &b) * &t2, 3, 1),
            (&n(4) * &ab, 4, 1),
            // y^2
            (&(&n(-3) * &a3) * &t2, 0, 2),
            (-(&ab2 * &t2), 0, 2),
            (&(&n(3) * &a) * &t4, 0, 2),
            (&(&n(3) * &a2) * &t2, 1, 2),
            (&(&n(3) * &b2) * &t2, 1, 2),
            (&n(-3) * &t4, 1, 2),
            (&n(3) * &a3, 2, 2),
            (&n(-3) * &ab2, 2, 2),
            (&(&n(-3) * &a) * &t2, 2, 2),
            (&n(-3) * &a2, 3, 2),
            (b2.clone(), 3, 2),
            (&n(3) * &t2, 3, 2),
            // y^3
            (&(&n(2) * &ab) * &t2, 0, 3),
            (&(&n(2) * &a2) * &b, 1, 3),
            (&n(-2) * &b3, 1, 3),
            (&(&n(-6) * &b) * &t2, 1, 3),
            (&n(2) * &ab, 2, 3),
            // y^4
            (a3.clone(), 0, 4),
            (&n(2) * &ab2, 0, 4),
            (-(&a * &t2), 0, 4),
            (&n(-3) * &a2, 1, 4),
            (&n(2) * &b2, 1, 4),
            (&n(3) * &t2, 1, 4),
            // y^5
            (&n(-2) * &ab, 0, 5),
        ];
        BivariatePoly::from_terms(terms)
    }

    /// `g(x, y) = y (-b x + (t + a) y - b t) (b x + (t - a) y - b t)`;
    /// vanishes on the three lines through pairs of pins.
    pub fn g(&self) -> BivariatePoly {
        let (t, a, b) = self.params();
        let lin = |cx: Rational, cy: Rational, c0: Rational| {
            BivariatePoly::from_terms([(cx, 1, 0), (cy, 0, 1), (c0, 0, 0)])
        };
        let l1 = lin(-&b, &t + &a, -(&b * &t));
        let l2 = lin(b.clone(), &t - &a, -(&b * &t));
        &(&BivariatePoly::y() * &l1) * &l2
    }
}

/// `b f / g^2` at `at`; [`Error::Pole`] when `|g(at)| < POLE_EPSILON`.
pub fn pinned_curvature(web: &PinnedWeb, at: (f64, f64)) -> Result<f64> {
    let g = web.g().evaluate_f64(at);
    if g.abs() < POLE_EPSILON {
        return Err(Error::Pole(format!(
            "({}, {}) lies on a pin line (|g| = {:e})",
            at.0,
            at.1,
            g.abs()
        )));
    }
    Ok(web.b * web.f().evaluate_f64(at) / (g * g))
}

/// The Blaschke form coefficient (as returned by
/// [`super::fd_blaschke_curvature`]) predicted by the closed form.
pub fn pinned_blaschke_coefficient(web: &PinnedWeb, at: (f64, f64)) -> Result<f64> {
    Ok(PINNED_TO_BLASCHKE * pinned_curvature(web, at)?)
}
