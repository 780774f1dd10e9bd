//! Triangle areas and the empirical small-area statistic for point sets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{self, Exec};

/// `|det(p2 - p1, p3 - p1)| / 2`
pub fn triangle_area(p1: (f64, f64), p2: (f64, f64), p3: (f64, f64)) -> f64 {
    0.5 * ((p2.0 - p1.0) * (p3.1 - p1.1) - (p2.1 - p1.1) * (p3.0 - p1.0)).abs()
}

const CHUNK: usize = 4096;

/// Powers `2^-24, 2^-23, ..., 1`.
pub fn default_r_grid() -> Vec<f64> {
    (0..=24).rev().map(|j| (-(j as f64)).exp2()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleAreaStats {
    pub r_grid: Vec<f64>,
    /// Fraction of sampled triples with area `< r`, per grid value.
    pub empirical_fraction: Vec<f64>,
    /// Log-log slope over the grid values whose fraction lies in
    /// `[0.01, 0.5]`; `None` when fewer than two such values exist and the
    /// set is not flat.
    pub fitted_beta: Option<f64>,
    pub fit_points: usize,
    pub flat: bool,
    pub samples: usize,
    pub caveat: String,
}

impl TripleAreaStats {
    /// `r,fraction` rows under a header.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("r,fraction\n");
        for (r, f) in self.r_grid.iter().zip(&self.empirical_fraction) {
            s.push_str(&format!("{r},{f}\n"));
        }
        s
    }
}

/// Samples `samples` i.i.d. uniform triples. Chunk `c` draws from the
/// ChaCha8 stream `c` of `seed`, so results do not depend on `exec`.
pub fn triple_area_stats(
    points: &[(f64, f64)],
    samples: usize,
    seed: u64,
    r_grid: &[f64],
    exec: Exec,
) -> Result<TripleAreaStats> {
    if points.len() < 3 {
        return Err(Error::TooFewPoints(points.len()));
    }
    if samples == 0 || r_grid.is_empty() || r_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidArgument("need samples > 0 and an increasing r grid".into()));
    }
    let chunks = samples.div_ceil(CHUNK);
    let per_chunk = par::map_range(exec, chunks, |c| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(c as u64);
        let n = CHUNK.min(samples - c * CHUNK);
        let mut areas: Vec<f64> = (0..n)
            .map(|_| {
                let mut pick = || points[rng.gen_range(0..points.len())];
                let (a, b, c) = (pick(), pick(), pick());
                triangle_area(a, b, c)
            })
            .collect();
        areas.sort_unstable_by(f64::total_cmp);
        r_grid.iter().map(|&r| areas.partition_point(|&a| a < r) as u64).collect::<Vec<_>>()
    });
    let mut counts = vec![0u64; r_grid.len()];
    for chunk in per_chunk {
        for (acc, c) in counts.iter_mut().zip(chunk) {
            *acc += c;
        }
    }
    let empirical_fraction: Vec<f64> = counts.iter().map(|&c| c as f64 / samples as f64).collect();
    let fit: Vec<(f64, f64)> = r_grid
        .iter()
        .zip(&empirical_fraction)
        .filter(|(_, &f)| (0.01..=0.5).contains(&f))
        .map(|(&r, &f)| (r.ln(), f.ln()))
        .collect();
    let (fitted_beta, flat) = if fit.len() >= 2 {
        let b = slope(&fit);
        (Some(b), b <= 0.05)
    } else if empirical_fraction[0] > 0.5 {
        // most triples are already degenerate at the smallest radius
        (Some(0.0), true)
    } else {
        (None, false)
    };
    Ok(TripleAreaStats {
        r_grid: r_grid.to_vec(),
        empirical_fraction,
        fitted_beta,
        fit_points: fit.len(),
        flat,
        samples,
        caveat: "uniform sampling over the given points; a set may be curved for another measure".into(),
    })
}

fn slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    #[test]
    fn area_examples() {
        assert_eq!(triangle_area((0.0, 0.0), (1.0, 0.0), (0.0, 1.0)), 0.5);
        assert_eq!(triangle_area((0.0, 0.0), (1.0, 1.0), (2.0, 2.0)), 0.0);
        assert_eq!(triangle_area((0.0, 0.0), (2.0, 0.0), (1.0, 3.0)), 3.0);
    }

    fn circle(n: usize) -> Vec<(f64, f64)> {
        (0..n)
            .map(|i| {
                let t = i as f64 / n as f64 * std::f64::consts::TAU;
                (0.5 + 0.5 * t.cos(), 0.5 + 0.5 * t.sin())
            })
            .collect()
    }

    #[test]
    fn flat_and_curved_sets() {
        let grid = default_r_grid();
        let line: Vec<(f64, f64)> = (0..1000).map(|i| (i as f64 / 1000.0, 0.0)).collect();
        let s = triple_area_stats(&line, 20_000, 7, &grid, Exec::Parallel).unwrap();
        assert!(s.flat && s.fitted_beta.unwrap().abs() <= 0.05);

        let s = triple_area_stats(&circle(4096), 100_000, 7, &grid, Exec::Parallel).unwrap();
        assert!(s.fitted_beta.unwrap() > 0.5, "{s:?}");
        assert!(!s.flat);

        let ap: Vec<f64> = (0..64).map(|i| (i as f64 + 0.5) / 64.0).collect();
        let pts: Vec<(f64, f64)> = ap.iter().flat_map(|&x| ap.iter().map(move |&y| (x, y))).collect();
        let s = triple_area_stats(&pts, 100_000, 7, &grid, Exec::Parallel).unwrap();
        assert!(s.fitted_beta.unwrap() > 0.5, "{s:?}");
    }

    #[test]
    fn deterministic_and_validated() {
        let grid = default_r_grid();
        let pts = circle(100);
        let a = triple_area_stats(&pts, 10_000, 3, &grid, Exec::Sequential).unwrap();
        let b = triple_area_stats(&pts, 10_000, 3, &grid, Exec::Parallel).unwrap();
        assert_eq!(a, b);
        assert!(a.empirical_fraction.windows(2).all(|w| w[0] <= w[1]));
        assert!(a.to_csv().starts_with("r,fraction\n"));
        assert_eq!(
            triple_area_stats(&pts[..2], 10, 0, &grid, Exec::Sequential),
            Err(Error::TooFewPoints(2))
        );
    }

    proptest! {
        #[test]
        fn area_invariances(
            pts in proptest::array::uniform3((-5.0f64..5.0, -5.0f64..5.0)),
            theta in 0.0f64..6.3,
            shift in (-3.0f64..3.0, -3.0f64..3.0),
        ) {
            let [a, b, c] = pts;
            let base = triangle_area(a, b, c);
            let scale = 1e-12 * (1.0 + base.abs() + 100.0);
            for (p, q, r) in [(b, a, c), (c, b, a), (b, c, a)] {
                prop_assert!((triangle_area(p, q, r) - base).abs() <= scale);
            }
            let (s, co) = theta.sin_cos();
            let m = |p: (f64, f64)| (co * p.0 - s * p.1 + shift.0, s * p.0 + co * p.1 + shift.1);
            prop_assert!((triangle_area(m(a), m(b), m(c)) - base).abs() <= scale);
        }
    }
}
