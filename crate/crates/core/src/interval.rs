//! Outward-widened interval bounds for polynomials over boxes.

use std::ops::{Add, Mul};

use crate::exactpoly::BivariatePoly;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        Interval::new(self.lo + o.lo, self.hi + o.hi)
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        let c = [self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Interval::new(lo, hi)
    }
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "inverted interval [{lo}, {hi}]");
        Interval { lo, hi }
    }

    pub fn point(x: f64) -> Self {
        Interval { lo: x, hi: x }
    }

    pub fn contains_zero(&self) -> bool {
        self.lo <= 0.0 && self.hi >= 0.0
    }

    pub fn mag(&self) -> f64 {
        self.lo.abs().max(self.hi.abs())
    }

    pub fn scale(self, c: f64) -> Interval {
        if c >= 0.0 {
            Interval::new(self.lo * c, self.hi * c)
        } else {
            Interval::new(self.hi * c, self.lo * c)
        }
    }

    /// Tight power: even powers of a zero-straddling interval start at 0.
    pub fn powi(self, e: u32) -> Interval {
        if e == 0 {
            return Interval::point(1.0);
        }
        let a = self.lo.powi(e as i32);
        let b = self.hi.powi(e as i32);
        if e % 2 == 1 {
            Interval::new(a, b)
        } else if self.contains_zero() {
            Interval::new(0.0, a.max(b))
        } else {
            Interval::new(a.min(b), a.max(b))
        }
    }

    /// Widen by a relative and absolute margin to absorb rounding.
    pub fn widen(self) -> Interval {
        let m = 1e-12 * self.mag() + 1e-300;
        Interval::new(self.lo - m, self.hi + m)
    }
}

/// Enclosure of `p` over the box `[x.lo, x.hi] x [y.lo, y.hi]`, summed
/// monomial by monomial.
pub fn poly_range(p: &BivariatePoly, x: Interval, y: Interval) -> Interval {
    let mut acc = Interval::point(0.0);
    for ((i, j), c) in p.terms() {
        let term = (x.powi(i) * y.powi(j)).scale(c.to_f64());
        acc = acc + term;
    }
    acc.widen()
}
