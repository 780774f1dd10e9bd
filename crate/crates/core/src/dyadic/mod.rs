//! Finite unions of half-open dyadic cells in `[0,1)` and `[0,1)^2`.
//!
//! A set at scale `k` stores the indices of its cells of side `2^-k`;
//! cell `i` is `[i 2^-k, (i+1) 2^-k)`. Covering numbers at coarser dyadic
//! scales are exact: coarsening is a right shift of the indices.

mod audit;
mod format;
mod gen;

pub use format::AnySet;
pub use audit::{audit_nonconcentration, audit_nonconcentration_2d, NonConcentrationAudit, Window};
pub use gen::{gen_ap, gen_cantor, gen_elekes, product, ElekesSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported 1D scale (indices are `u64`).
pub const MAX_SCALE_1D: u32 = 62;
/// Largest supported 2D scale (indices are `u32` pairs).
pub const MAX_SCALE_2D: u32 = 31;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DyadicSet1D {
    scale_k: u32,
    cells: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DyadicSet2D {
    scale_k: u32,
    cells: Vec<(u32, u32)>,
}

impl DyadicSet1D {
    /// Sorts and deduplicates `cells`; fails if an index is out of range.
    pub fn new(scale_k: u32, mut cells: Vec<u64>) -> Result<Self> {
        if scale_k > MAX_SCALE_1D {
            return Err(Error::InvalidArgument(format!("1D scale {scale_k} exceeds {MAX_SCALE_1D}")));
        }
        cells.sort_unstable();
        cells.dedup();
        if let Some(&last) = cells.last() {
            if last >> scale_k != 0 {
                return Err(Error::InvalidArgument(format!(
                    "cell index {last} out of range at scale {scale_k}"
                )));
            }
        }
        Ok(DyadicSet1D { scale_k, cells })
    }

    pub fn full(scale_k: u32) -> Result<Self> {
        Self::new(scale_k, (0..1u64 << scale_k).collect())
    }

    pub fn scale_k(&self) -> u32 {
        self.scale_k
    }

    pub fn delta(&self) -> f64 {
        (-(self.scale_k as f64)).exp2()
    }

    pub fn cells(&self) -> &[u64] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn centers(&self) -> impl Iterator<Item = f64> + '_ {
        let d = self.delta();
        self.cells.iter().map(move |&i| (i as f64 + 0.5) * d)
    }

    /// Number of scale-`k_prime` dyadic cells meeting the set.
    pub fn covering_number(&self, k_prime: u32) -> Result<usize> {
        if k_prime > self.scale_k {
            return Err(Error::BadScale { requested: k_prime, set_scale: self.scale_k });
        }
        let shift = self.scale_k - k_prime;
        let mut count = 0usize;
        let mut prev = None;
        for &c in &self.cells {
            let coarse = c >> shift;
            if prev != Some(coarse) {
                count += 1;
                prev = Some(coarse);
            }
        }
        Ok(count)
    }

    /// Same set of points, described at the coarser scale `k_prime`.
    pub fn coarsen(&self, k_prime: u32) -> Result<Self> {
        if k_prime > self.scale_k {
            return Err(Error::BadScale { requested: k_prime, set_scale: self.scale_k });
        }
        let shift = self.scale_k - k_prime;
        let mut cells: Vec<u64> = self.cells.iter().map(|&c| c >> shift).collect();
        cells.dedup();
        Ok(DyadicSet1D { scale_k: k_prime, cells })
    }
}

impl DyadicSet2D {
    /// Sorts (lexicographically) and deduplicates `cells`.
    pub fn new(scale_k: u32, mut cells: Vec<(u32, u32)>) -> Result<Self> {
        if scale_k > MAX_SCALE_2D {
            return Err(Error::InvalidArgument(format!("2D scale {scale_k} exceeds {MAX_SCALE_2D}")));
        }
        cells.sort_unstable();
        cells.dedup();
        let limit = 1u64 << scale_k;
        if let Some(bad) = cells.iter().find(|&&(i, j)| i as u64 >= limit || j as u64 >= limit) {
            return Err(Error::InvalidArgument(format!(
                "cell {bad:?} out of range at scale {scale_k}"
            )));
        }
        Ok(DyadicSet2D { scale_k, cells })
    }

    pub fn scale_k(&self) -> u32 {
        self.scale_k
    }

    pub fn delta(&self) -> f64 {
        (-(self.scale_k as f64)).exp2()
    }

    pub fn cells(&self) -> &[(u32, u32)] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn centers(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let d = self.delta();
        self.cells
            .iter()
            .map(move |&(i, j)| ((i as f64 + 0.5) * d, (j as f64 + 0.5) * d))
    }

    pub fn covering_number(&self, k_prime: u32) -> Result<usize> {
        Ok(self.coarse_cells(k_prime)?.len())
    }

    fn coarse_cells(&self, k_prime: u32) -> Result<Vec<(u32, u32)>> {
        if k_prime > self.scale_k {
            return Err(Error::BadScale { requested: k_prime, set_scale: self.scale_k });
        }
        let shift = self.scale_k - k_prime;
        let mut cells: Vec<(u32, u32)> = self.cells.iter().map(|&(i, j)| (i >> shift, j >> shift)).collect();
        cells.sort_unstable();
        cells.dedup();
        Ok(cells)
    }

    pub fn coarsen(&self, k_prime: u32) -> Result<Self> {
        Ok(DyadicSet2D { scale_k: k_prime, cells: self.coarse_cells(k_prime)? })
    }

    /// Bounding box `[x0, x1] x [y0, y1]` of the union of cells.
    pub fn bounding_box(&self) -> Option<[(f64, f64); 2]> {
        if self.cells.is_empty() {
            return None;
        }
        let d = self.delta();
        let (mut i0, mut i1, mut j0, mut j1) = (u32::MAX, 0, u32::MAX, 0);
        for &(i, j) in &self.cells {
            i0 = i0.min(i);
            i1 = i1.max(i);
            j0 = j0.min(j);
            j1 = j1.max(j);
        }
        Some([
            (i0 as f64 * d, (i1 as f64 + 1.0) * d),
            (j0 as f64 * d, (j1 as f64 + 1.0) * d),
        ])
    }

    pub fn is_subset_of(&self, other: &DyadicSet2D) -> bool {
        self.scale_k == other.scale_k && self.cells.iter().all(|c| other.cells.binary_search(c).is_ok())
    }
}
