//! Finite-difference Blaschke curvature of a 3-web.
//!
//! The curvature form is `2 d_phi1 d_phi2 log((dphi3/dphi1) / (dphi3/dphi2))
//! dphi1 ^ dphi2`; we return its coefficient relative to `dx ^ dy`. The
//! derivatives along web coordinates are taken by a central difference on
//! points located by Newton's method in `(phi1, phi2)`; `dphi3/dphi_i` at
//! each stencil point comes from solving the 2x2 system
//! `grad phi3 = psi1 grad phi1 + psi2 grad phi2`.

use crate::error::{Error, Result};
use crate::exactpoly::{BivariatePoly, HornerPoly, Var};

/// A smooth scalar field on (a subset of) the plane.
pub trait SmoothField: Sync {
    fn value(&self, z: (f64, f64)) -> f64;
    fn gradient(&self, z: (f64, f64)) -> (f64, f64);
}

/// Polynomial field with exact (symbolic) gradient.
#[derive(Debug, Clone)]
pub struct PolyField {
    p: HornerPoly,
    px: HornerPoly,
    py: HornerPoly,
}

impl PolyField {
    pub fn new(p: &BivariatePoly) -> Self {
        PolyField {
            p: p.horner(),
            px: p.partial(Var::X).horner(),
            py: p.partial(Var::Y).horner(),
        }
    }
}

impl From<&BivariatePoly> for PolyField {
    fn from(p: &BivariatePoly) -> Self {
        PolyField::new(p)
    }
}

impl SmoothField for PolyField {
    fn value(&self, z: (f64, f64)) -> f64 {
        self.p.eval(z.0, z.1)
    }

    fn gradient(&self, z: (f64, f64)) -> (f64, f64) {
        (self.px.eval(z.0, z.1), self.py.eval(z.0, z.1))
    }
}

/// Black-box field; the gradient uses a fourth-order central stencil.
pub struct FnField<F> {
    f: F,
    step: f64,
}

impl<F: Fn(f64, f64) -> f64 + Sync> FnField<F> {
    pub fn new(f: F) -> Self {
        FnField { f, step: 1e-3 }
    }
}

impl<F: Fn(f64, f64) -> f64 + Sync> SmoothField for FnField<F> {
    fn value(&self, z: (f64, f64)) -> f64 {
        (self.f)(z.0, z.1)
    }

    fn gradient(&self, z: (f64, f64)) -> (f64, f64) {
        let h = self.step;
        let d = |g: &dyn Fn(f64) -> f64| (g(-2.0 * h) - 8.0 * g(-h) + 8.0 * g(h) - g(2.0 * h)) / (12.0 * h);
        let gx = d(&|s| (self.f)(z.0 + s, z.1));
        let gy = d(&|s| (self.f)(z.0, z.1 + s));
        (gx, gy)
    }
}

fn wedge(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

struct Web<'a> {
    phi: [&'a dyn SmoothField; 3],
}

impl Web<'_> {
    /// `log|dphi3/dphi1| - log|dphi3/dphi2|` at `z`.
    fn log_ratio(&self, z: (f64, f64)) -> Result<f64> {
        let g1 = self.phi[0].gradient(z);
        let g2 = self.phi[1].gradient(z);
        let g3 = self.phi[2].gradient(z);
        let det = wedge(g1, g2);
        let psi1 = wedge(g3, g2) / det;
        let psi2 = wedge(g1, g3) / det;
        if psi1 == 0.0 || psi2 == 0.0 || !psi1.is_finite() || !psi2.is_finite() {
            return Err(Error::Pole(format!(
                "dphi3/dphi_i vanishes or blows up at ({}, {})",
                z.0, z.1
            )));
        }
        Ok(psi1.abs().ln() - psi2.abs().ln())
    }

    /// Point near `start` where `(phi1, phi2) = target`.
    fn locate(&self, start: (f64, f64), target: (f64, f64), threshold: f64) -> Result<(f64, f64)> {
        let mut z = start;
        for _ in 0..64 {
            let r1 = self.phi[0].value(z) - target.0;
            let r2 = self.phi[1].value(z) - target.1;
            let g1 = self.phi[0].gradient(z);
            let g2 = self.phi[1].gradient(z);
            let det = wedge(g1, g2);
            if det.abs() <= threshold {
                return Err(Error::DegenerateWeb { jacobian: det.abs(), threshold });
            }
            // Rows of the Jacobian are g1, g2.
            let dx = (r1 * g2.1 - r2 * g1.1) / det;
            let dy = (g1.0 * r2 - g2.0 * r1) / det;
            z = (z.0 - dx, z.1 - dy);
            if dx.abs().max(dy.abs()) <= 4.0 * f64::EPSILON * (1.0 + z.0.abs().max(z.1.abs())) {
                break;
            }
        }
        Ok(z)
    }

    fn mixed(&self, at: (f64, f64), h: f64, threshold: f64) -> Result<f64> {
        let w = (self.phi[0].value(at), self.phi[1].value(at));
        let mut sum = 0.0;
        for (s1, s2, sign) in [(1.0, 1.0, 1.0), (1.0, -1.0, -1.0), (-1.0, 1.0, -1.0), (-1.0, -1.0, 1.0)] {
            let z = self.locate(at, (w.0 + s1 * h, w.1 + s2 * h), threshold)?;
            sum += sign * self.log_ratio(z)?;
        }
        Ok(sum / (4.0 * h * h))
    }
}

/// Coefficient of the Blaschke curvature form relative to `dx ^ dy` at `at`,
/// by central differences with step `h` in web coordinates.
///
/// Fails with [`Error::DegenerateWeb`] when `|grad phi1 ^ grad phi2| <= h`
/// at the point or along the Newton path.
pub fn fd_blaschke_curvature(
    phi1: &dyn SmoothField,
    phi2: &dyn SmoothField,
    phi3: &dyn SmoothField,
    at: (f64, f64),
    h: f64,
) -> Result<f64> {
    let web = Web { phi: [phi1, phi2, phi3] };
    let jac = wedge(phi1.gradient(at), phi2.gradient(at));
    if jac.abs() <= h {
        return Err(Error::DegenerateWeb { jacobian: jac.abs(), threshold: h });
    }
    let mixed = web.mixed(at, h, h)?;
    Ok(2.0 * mixed * jac)
}

/// Richardson-extrapolated variant combining steps `h` and `h/2`.
pub fn fd_blaschke_curvature_richardson(
    phi1: &dyn SmoothField,
    phi2: &dyn SmoothField,
    phi3: &dyn SmoothField,
    at: (f64, f64),
    h: f64,
) -> Result<f64> {
    let coarse = fd_blaschke_curvature(phi1, phi2, phi3, at, h)?;
    let fine = fd_blaschke_curvature(phi1, phi2, phi3, at, h / 2.0)?;
    Ok((4.0 * fine - coarse) / 3.0)
}
