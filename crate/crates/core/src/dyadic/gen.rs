//! Set generators: arithmetic progressions, Cantor-type sets, products and
//! the Elekes-type construction `q_{a,b} = (a/2, sqrt(1 + b - a^2/4))`.

use num_bigint::{BigInt, Sign};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{DyadicSet1D, DyadicSet2D, MAX_SCALE_2D};
use crate::error::{Error, Result};
use crate::exactpoly::Rational;

/// `n` cells at indices `round(m 2^k / n)`, `m = 0..n`.
pub fn gen_ap(scale_k: u32, n: u64) -> Result<DyadicSet1D> {
    if scale_k > super::MAX_SCALE_1D {
        return Err(Error::InvalidArgument(format!("scale {scale_k} too large")));
    }
    let size = 1u128 << scale_k;
    if n == 0 || n as u128 > size {
        return Err(Error::Generator(format!("AP of {n} cells does not fit at scale {scale_k}")));
    }
    let n128 = n as u128;
    // round half up, in integers
    let cells = (0..n128).map(|m| ((2 * m * size + n128) / (2 * n128)) as u64).collect();
    DyadicSet1D::new(scale_k, cells)
}

/// Cells whose base-4 expansion to depth `scale_k / 2` uses only `keep`.
pub fn gen_cantor(scale_k: u32, keep: &[u8]) -> Result<DyadicSet1D> {
    if !scale_k.is_multiple_of(2) {
        return Err(Error::Generator(format!("Cantor scale must be even, got {scale_k}")));
    }
    let mut digits: Vec<u64> = keep.iter().map(|&d| d as u64).collect();
    digits.sort_unstable();
    digits.dedup();
    if digits.is_empty() || digits.iter().any(|&d| d > 3) {
        return Err(Error::Generator(format!("keep digits must be a nonempty subset of 0..=3, got {keep:?}")));
    }
    let mut cells = vec![0u64];
    for _ in 0..scale_k / 2 {
        cells = cells.iter().flat_map(|&c| digits.iter().map(move |&d| 4 * c + d)).collect();
    }
    DyadicSet1D::new(scale_k, cells)
}

/// All cells `(i, j)` with `i` in `a` and `j` in `b`.
pub fn product(a: &DyadicSet1D, b: &DyadicSet1D) -> Result<DyadicSet2D> {
    if a.scale_k() != b.scale_k() {
        return Err(Error::ScaleMismatch(a.scale_k(), b.scale_k()));
    }
    if a.scale_k() > MAX_SCALE_2D {
        return Err(Error::InvalidArgument(format!("2D scale {} too large", a.scale_k())));
    }
    let cells = a
        .cells()
        .iter()
        .flat_map(|&i| b.cells().iter().map(move |&j| (i as u32, j as u32)))
        .collect();
    DyadicSet2D::new(a.scale_k(), cells)
}

/// Output of [`gen_elekes`]. Stored cells are in the chart
/// `(x, y) -> (x, y - y_shift)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ElekesSet {
    pub set: DyadicSet2D,
    pub y_shift: f64,
    /// Exact input cell centers `(a, b)`, one per generated point.
    #[serde(skip)]
    pub sources: Vec<(Rational, Rational)>,
}

impl ElekesSet {
    /// `y^2 = 1 + b - a^2/4` for the point built from `(a, b)`.
    pub fn y_squared(a: &Rational, b: &Rational) -> Rational {
        Rational::one() + b - &(a * a) * &Rational::new(1, 4)
    }

    /// Checks `|(s,0) - q_{a,b}|^2 = (s^2 + 1) + (b - s a)` for every
    /// generated point, with `y^2` substituted exactly.
    pub fn verify_identity(&self, s: &Rational) -> bool {
        let half = Rational::new(1, 2);
        self.sources.iter().all(|(a, b)| {
            let dx = s - &(a * &half);
            let lhs = &dx * &dx + Self::y_squared(a, b);
            let rhs = (s * s + Rational::one()) + (b - &(s * a));
            lhs == rhs
        })
    }
}

fn center(i: u64, k: u32) -> Rational {
    Rational::new(BigInt::from(2 * i + 1), BigInt::from(1u64) << (k + 1))
}

/// Cells at `out_scale_k` containing `q_{a,b}` for all pairs of cell
/// centers `a` of `x`, `b` of `y`, after the chart `y -> y - 1/2`.
///
/// For `a, b` in `[0,1]` the second coordinate lies in `[sqrt(3)/2, sqrt(2)]`,
/// so the shifted points sit inside `[0, 1/2] x [0.36, 0.92]`.
pub fn gen_elekes(x: &DyadicSet1D, y: &DyadicSet1D, out_scale_k: u32) -> Result<ElekesSet> {
    let min_k = x.scale_k().max(y.scale_k()).max(1);
    if out_scale_k < min_k || out_scale_k > MAX_SCALE_2D {
        return Err(Error::InvalidArgument(format!(
            "output scale {out_scale_k} must lie in [{min_k}, {MAX_SCALE_2D}]"
        )));
    }
    let side = BigInt::from(1u64) << out_scale_k;
    let side_sq = Rational::from_int(&side * &side);
    let side_r = Rational::from_int(side.clone());
    let half_side = &side >> 1u32;
    let half = Rational::new(1, 2);
    let mut cells = Vec::with_capacity(x.len() * y.len());
    let mut sources = Vec::with_capacity(x.len() * y.len());
    for &i in x.cells() {
        let a = center(i, x.scale_k());
        let col = (&a * &half * &side_r).floor();
        for &j in y.cells() {
            let b = center(j, y.scale_k());
            let ysq = ElekesSet::y_squared(&a, &b);
            if ysq.is_negative() {
                continue;
            }
            // floor(sqrt(Y) 2^k) = isqrt(floor(Y 4^k)); the shift is 2^(k-1) cells
            let row = (&ysq * &side_sq).floor().sqrt() - &half_side;
            let (Some(ci), Some(cj)) = (col.to_u32(), row.to_u32()) else {
                continue;
            };
            if row.sign() == Sign::Minus || ci as u64 >> out_scale_k != 0 || cj as u64 >> out_scale_k != 0 {
                continue;
            }
            cells.push((ci, cj));
            sources.push((a.clone(), b));
        }
    }
    Ok(ElekesSet { set: DyadicSet2D::new(out_scale_k, cells)?, y_shift: 0.5, sources })
}
