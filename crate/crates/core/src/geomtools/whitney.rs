//! Whitney decompositions by dyadic cubes.
//!
//! A domain is an open subset of `[0,1]^d` (relative topology), described
//! by a predicate that classifies closed boxes. A dyadic cube `Q` is
//! accepted when `3Q` (clipped to `[0,1]^d`) lies inside the domain and no
//! ancestor was accepted. This gives `side <= dist(Q, complement)` and,
//! for `Q` below the root, `dist <= 3 sqrt(d) side`.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::BivariatePoly;
use crate::interval::{poly_range, Interval};
use crate::par::{self, Exec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Membership {
    /// The closed box lies in the domain.
    Inside,
    /// The closed box misses the domain.
    Outside,
    /// The box certainly meets both the domain and its complement.
    Crossing,
    /// Undecided; callers subdivide.
    Unknown,
}

pub trait Domain: Sync {
    fn dim(&self) -> usize;
    /// Classifies the closed box `[lo, hi]`, which lies in `[0,1]^d`.
    fn classify(&self, lo: &[f64], hi: &[f64]) -> Membership;
}

/// `(0,1)^d`.
#[derive(Debug, Clone, Copy)]
pub struct OpenUnitCube {
    pub dim: usize,
}

impl Domain for OpenUnitCube {
    fn dim(&self) -> usize {
        self.dim
    }

    fn classify(&self, lo: &[f64], hi: &[f64]) -> Membership {
        let inside = lo.iter().all(|&a| a > 0.0) && hi.iter().all(|&b| b < 1.0);
        let degenerate_face = lo.iter().zip(hi).any(|(&a, &b)| a == b && (a == 0.0 || a == 1.0));
        if inside {
            Membership::Inside
        } else if degenerate_face {
            Membership::Outside
        } else {
            Membership::Crossing
        }
    }
}

/// `[0,1]^2` with the diagonal `x = y` removed.
#[derive(Debug, Clone, Copy)]
pub struct UnitSquareMinusDiagonal;

impl Domain for UnitSquareMinusDiagonal {
    fn dim(&self) -> usize {
        2
    }

    fn classify(&self, lo: &[f64], hi: &[f64]) -> Membership {
        let meets = lo[0] <= hi[1] && lo[1] <= hi[0];
        if !meets {
            Membership::Inside
        } else if lo[0] == hi[0] && lo[1] == hi[1] {
            Membership::Outside
        } else {
            Membership::Crossing
        }
    }
}

/// `[0,1]^2` minus the zero set of a polynomial, decided by interval
/// bounds (boxes where the bound straddles zero are `Unknown`).
#[derive(Debug, Clone)]
pub struct PolynomialComplement {
    pub p: BivariatePoly,
}

impl Domain for PolynomialComplement {
    fn dim(&self) -> usize {
        2
    }

    fn classify(&self, lo: &[f64], hi: &[f64]) -> Membership {
        let r = poly_range(&self.p, Interval::new(lo[0], hi[0]), Interval::new(lo[1], hi[1]));
        if r.contains_zero() {
            Membership::Unknown
        } else {
            Membership::Inside
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WhitneyCube {
    pub depth: u32,
    pub index: Vec<u32>,
}

impl WhitneyCube {
    pub fn side(&self) -> f64 {
        (-(self.depth as f64)).exp2()
    }

    /// Closed box of the cube dilated by `factor` about its center, clipped
    /// to `[0,1]^d`.
    pub fn dilate(&self, factor: f64) -> (Vec<f64>, Vec<f64>) {
        let s = self.side();
        let pad = (factor - 1.0) * s / 2.0;
        let lo = self.index.iter().map(|&i| (i as f64 * s - pad).max(0.0)).collect();
        let hi = self.index.iter().map(|&i| ((i as f64 + 1.0) * s + pad).min(1.0)).collect();
        (lo, hi)
    }

    pub fn parent(&self) -> Option<WhitneyCube> {
        (self.depth > 0).then(|| WhitneyCube {
            depth: self.depth - 1,
            index: self.index.iter().map(|i| i / 2).collect(),
        })
    }

    fn children(&self) -> Vec<WhitneyCube> {
        let d = self.index.len();
        (0..1u32 << d)
            .map(|mask| WhitneyCube {
                depth: self.depth + 1,
                index: self.index.iter().enumerate().map(|(n, &i)| 2 * i + (mask >> n & 1)).collect(),
            })
            .collect()
    }

    /// `depth i j [k]`
    pub fn to_line(&self) -> String {
        let mut s = self.depth.to_string();
        for i in &self.index {
            s.push(' ');
            s.push_str(&i.to_string());
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WhitneyDecomposition {
    pub dim: usize,
    pub max_depth: u32,
    /// Accepted cubes ordered by `(depth, index)`.
    pub cubes: Vec<WhitneyCube>,
    /// Cubes at `max_depth` that could not be decided.
    pub unresolved: Vec<WhitneyCube>,
    /// Volumes in units of `2^(-dim * max_depth)`.
    pub accepted_units: u128,
    pub exterior_units: u128,
    pub unresolved_units: u128,
}

impl WhitneyDecomposition {
    pub fn unit(&self) -> f64 {
        (-((self.dim as u32 * self.max_depth) as f64)).exp2()
    }

    pub fn accepted_volume(&self) -> f64 {
        self.accepted_units as f64 * self.unit()
    }

    pub fn unresolved_volume(&self) -> f64 {
        self.unresolved_units as f64 * self.unit()
    }

    pub fn exterior_volume(&self) -> f64 {
        self.exterior_units as f64 * self.unit()
    }

    /// One `depth i j [k]` line per cube.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.cubes {
            out.push_str(&c.to_line());
            out.push('\n');
        }
        out
    }

    pub fn count_at_depth(&self, depth: u32) -> usize {
        self.cubes.iter().filter(|c| c.depth == depth).count()
    }
}

enum Verdict {
    Accept,
    Exterior,
    Split,
}

pub fn whitney_decompose(domain: &dyn Domain, max_depth: u32, exec: Exec) -> Result<WhitneyDecomposition> {
    let dim = domain.dim();
    if !(1..=3).contains(&dim) {
        return Err(Error::InvalidArgument(format!("dimension {dim} not in 1..=3")));
    }
    if max_depth as usize * dim > 24 {
        return Err(Error::InvalidArgument(format!("max_depth {max_depth} exceeds 24/{dim}")));
    }
    let units = |depth: u32| 1u128 << (dim as u32 * (max_depth - depth));
    let mut out = WhitneyDecomposition {
        dim,
        max_depth,
        cubes: Vec::new(),
        unresolved: Vec::new(),
        accepted_units: 0,
        exterior_units: 0,
        unresolved_units: 0,
    };
    let mut frontier = vec![WhitneyCube { depth: 0, index: vec![0; dim] }];
    for depth in 0..=max_depth {
        let verdicts = par::map(exec, &frontier, |q| {
            let (lo, hi) = q.dilate(3.0);
            match domain.classify(&lo, &hi) {
                Membership::Inside => Verdict::Accept,
                _ => {
                    let (lo, hi) = q.dilate(1.0);
                    match domain.classify(&lo, &hi) {
                        Membership::Outside => Verdict::Exterior,
                        _ => Verdict::Split,
                    }
                }
            }
        });
        let mut next = Vec::new();
        for (q, v) in frontier.into_iter().zip(verdicts) {
            match v {
                Verdict::Accept => {
                    out.accepted_units += units(depth);
                    out.cubes.push(q);
                }
                Verdict::Exterior => out.exterior_units += units(depth),
                Verdict::Split if depth == max_depth => {
                    out.unresolved_units += units(depth);
                    out.unresolved.push(q);
                }
                Verdict::Split => next.extend(q.children()),
            }
        }
        next.sort_unstable();
        frontier = next;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WhitneyCheck {
    pub cubes: usize,
    pub disjoint: bool,
    /// Cubes whose closed box is not certified inside the domain.
    pub containment_failures: usize,
    /// Cubes whose 2-fold dilate stays inside the domain.
    pub two_q_inside: usize,
    /// Cubes violating `side <= dist(Q, complement) <= 3 sqrt(d) side`.
    pub distance_failures: usize,
    /// `accepted + exterior + unresolved == 2^(d * max_depth)` exactly.
    pub volume_balanced: bool,
}

impl WhitneyCheck {
    pub fn all_ok(&self) -> bool {
        self.disjoint
            && self.containment_failures == 0
            && self.two_q_inside == 0
            && self.distance_failures == 0
            && self.volume_balanced
    }
}

/// Re-checks every cube against the domain predicate.
pub fn verify_whitney(domain: &dyn Domain, w: &WhitneyDecomposition, exec: Exec) -> WhitneyCheck {
    // dyadic cubes overlap in interior iff one contains the other
    let set: HashSet<&WhitneyCube> = w.cubes.iter().collect();
    let mut disjoint = set.len() == w.cubes.len();
    for c in &w.cubes {
        let mut a = c.parent();
        while let Some(p) = a {
            if set.contains(&p) {
                disjoint = false;
            }
            a = p.parent();
        }
    }
    let per_cube = par::map(exec, &w.cubes, |c| {
        let inside = |f: f64| {
            let (lo, hi) = c.dilate(f);
            domain.classify(&lo, &hi) == Membership::Inside
        };
        let contained = inside(1.0);
        let two_q = inside(2.0);
        let lower = inside(3.0);
        // the parent was rejected, so its 3-fold dilate leaves the domain
        let upper = match c.parent() {
            Some(p) => {
                let (lo, hi) = p.dilate(3.0);
                domain.classify(&lo, &hi) != Membership::Inside
            }
            None => true,
        };
        (contained, two_q, lower && upper)
    });
    let total = 1u128 << (w.dim as u32 * w.max_depth);
    WhitneyCheck {
        cubes: w.cubes.len(),
        disjoint,
        containment_failures: per_cube.iter().filter(|r| !r.0).count(),
        two_q_inside: per_cube.iter().filter(|r| r.1).count(),
        distance_failures: per_cube.iter().filter(|r| !r.2).count(),
        volume_balanced: w.accepted_units + w.exterior_units + w.unresolved_units == total,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn open_square() {
        let w = whitney_decompose(&OpenUnitCube { dim: 2 }, 10, Exec::Sequential).unwrap();
        let check = verify_whitney(&OpenUnitCube { dim: 2 }, &w, Exec::Parallel);
        assert!(check.disjoint && check.volume_balanced);
        assert_eq!(check.containment_failures, 0);
        assert_eq!(check.distance_failures, 0);
        // 3Q inside forces 2Q inside: the literal 2Q-exit never holds for these cubes
        assert_eq!(check.two_q_inside, w.cubes.len());
        // a ring of constant width in cube units: counts double with depth
        for m in 6..10 {
            let r = w.count_at_depth(m + 1) as f64 / w.count_at_depth(m) as f64;
            assert!((1.8..=2.2).contains(&r), "depth {m}: {r}");
        }
        assert!(w.unresolved_volume() <= 4.0 * 4.0 * (-10f64).exp2() + 1e-15);
        assert_eq!(w.exterior_units, 0);
    }

    #[test]
    fn diagonal_complement_area_tends_to_one() {
        let mut prev = 0.0;
        for depth in [4, 6, 8, 10] {
            let w = whitney_decompose(&UnitSquareMinusDiagonal, depth, Exec::Parallel).unwrap();
            let a = w.accepted_volume();
            assert!(a > prev);
            // cubes within two cells of the diagonal stay unresolved: about 7 * 2^-depth
            assert!(w.unresolved_volume() <= 4.0 * (1.0 - depth as f64).exp2());
            prev = a;
            let check = verify_whitney(&UnitSquareMinusDiagonal, &w, Exec::Sequential);
            assert!(check.disjoint && check.volume_balanced && check.distance_failures == 0);
        }
        assert!(prev > 0.99);
    }

    #[test]
    fn polynomial_complement_and_text() {
        let dom = PolynomialComplement { p: "x^2 + y^2".parse().unwrap() };
        let w = whitney_decompose(&dom, 6, Exec::Sequential).unwrap();
        // the 3-fold dilates of the four corner cubes contain the deleted point
        assert_eq!(w.unresolved.len(), 4);
        assert!(w.unresolved.iter().all(|c| c.index.iter().all(|&i| i <= 1)));
        assert!(verify_whitney(&dom, &w, Exec::Sequential).distance_failures == 0);
        let line = w.to_text().lines().next().unwrap().to_string();
        assert_eq!(line.split(' ').count(), 3);
        assert!(whitney_decompose(&OpenUnitCube { dim: 3 }, 9, Exec::Sequential).is_err());
        let w3 = whitney_decompose(&OpenUnitCube { dim: 3 }, 6, Exec::Sequential).unwrap();
        assert!(verify_whitney(&OpenUnitCube { dim: 3 }, &w3, Exec::Sequential).volume_balanced);
        assert_eq!(w3.cubes[0].to_line().split(' ').count(), 4);
    }
}
