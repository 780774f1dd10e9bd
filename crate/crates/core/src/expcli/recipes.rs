//! Named set generators, resolved at a given scale.
//!
//! ```text
//! 1D:  ap:N | ap-dim:A | cantor:DIGITS | full
//! 2D:  grid-ap:N | grid-ap-dim:A | cantor2:DIGITS | elekes-ap:N | line:N | circle:N
//! ```
//!
//! `ap-dim:A` has `round(2^(A k))` cells. `cantor:03` keeps base-4 digits
//! 0 and 3. `elekes-ap:N` is the Elekes construction on two copies of
//! `ap:N`, built at scale `2k` and measured at `k`.

use crate::dyadic::{gen_ap, gen_cantor, gen_elekes, product, DyadicSet1D, DyadicSet2D};
use crate::error::{Error, Result};

/// A planar set together with the scale at which images are measured and
/// the vertical chart shift applied to it.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarSet {
    pub set: DyadicSet2D,
    pub measure_k: u32,
    pub y_shift: f64,
}

fn split(recipe: &str) -> (&str, Option<&str>) {
    match recipe.trim().split_once(':') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (recipe.trim(), None),
    }
}

fn arg<T: std::str::FromStr>(recipe: &str, a: Option<&str>) -> Result<T> {
    a.and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Generator(format!("bad or missing argument in recipe `{recipe}`")))
}

fn digits(recipe: &str, a: Option<&str>) -> Result<Vec<u8>> {
    let s = a.ok_or_else(|| Error::Generator(format!("recipe `{recipe}` needs digits")))?;
    s.chars()
        .map(|c| c.to_digit(4).map(|d| d as u8))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Generator(format!("digits in `{recipe}` must be 0..3")))
}

fn dim_count(recipe: &str, a: Option<&str>, k: u32) -> Result<u64> {
    let dim: f64 = arg(recipe, a)?;
    if !(0.0..=1.0).contains(&dim) {
        return Err(Error::Generator(format!("dimension in `{recipe}` must lie in [0, 1]")));
    }
    Ok((dim * k as f64).exp2().round().max(1.0) as u64)
}

pub fn set_1d(recipe: &str, k: u32) -> Result<DyadicSet1D> {
    let (name, a) = split(recipe);
    match name {
        "ap" => gen_ap(k, arg(recipe, a)?),
        "ap-dim" => gen_ap(k, dim_count(recipe, a, k)?),
        "cantor" => gen_cantor(k, &digits(recipe, a)?),
        "full" => DyadicSet1D::full(k),
        _ => Err(Error::Generator(format!("unknown 1D recipe `{recipe}`"))),
    }
}

pub fn is_1d(recipe: &str) -> bool {
    matches!(split(recipe).0, "ap" | "ap-dim" | "cantor" | "full")
}

pub fn set_2d(recipe: &str, k: u32) -> Result<PlanarSet> {
    let (name, a) = split(recipe);
    let plain = |set: DyadicSet2D| Ok(PlanarSet { set, measure_k: k, y_shift: 0.0 });
    match name {
        "grid-ap" => {
            let ap = gen_ap(k, arg(recipe, a)?)?;
            plain(product(&ap, &ap)?)
        }
        "grid-ap-dim" => {
            let ap = gen_ap(k, dim_count(recipe, a, k)?)?;
            plain(product(&ap, &ap)?)
        }
        "cantor2" => {
            let c = gen_cantor(k, &digits(recipe, a)?)?;
            plain(product(&c, &c)?)
        }
        "elekes-ap" => {
            let ap = gen_ap(k, arg(recipe, a)?)?;
            let e = gen_elekes(&ap, &ap, 2 * k)?;
            Ok(PlanarSet { set: e.set, measure_k: k, y_shift: e.y_shift })
        }
        "line" => {
            // N equally spaced cells on the horizontal line y = 1/2
            let ap = gen_ap(k, arg(recipe, a)?)?;
            let row = (1u64 << k) / 2;
            plain(DyadicSet2D::new(k, ap.cells().iter().map(|&i| (i as u32, row as u32)).collect())?)
        }
        "circle" => {
            // cells containing N equally spaced points of the circle of radius 1/2 about (1/2, 1/2)
            let n: u64 = arg(recipe, a)?;
            let side = (1u64 << k) as f64;
            let max = (1u64 << k) - 1;
            let cells = (0..n)
                .map(|i| {
                    let t = i as f64 / n as f64 * std::f64::consts::TAU;
                    let x = ((0.5 + 0.5 * t.cos()) * side).floor().clamp(0.0, max as f64);
                    let y = ((0.5 + 0.5 * t.sin()) * side).floor().clamp(0.0, max as f64);
                    (x as u32, y as u32)
                })
                .collect();
            plain(DyadicSet2D::new(k, cells)?)
        }
        _ => Err(Error::Generator(format!("unknown 2D recipe `{recipe}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recipes_resolve() {
        assert_eq!(set_1d("ap:4", 4).unwrap().cells(), &[0, 4, 8, 12]);
        assert_eq!(set_1d("ap-dim:0.5", 12).unwrap().len(), 64);
        assert_eq!(set_1d("cantor:03", 4).unwrap().len(), 4);
        assert_eq!(set_1d("full", 3).unwrap().len(), 8);
        assert!(set_1d("cantor:05", 4).is_err());
        assert!(set_1d("nope", 4).is_err());
        assert!(set_1d("ap:x", 4).is_err());
        assert!(is_1d("cantor:03") && !is_1d("grid-ap:4"));

        assert_eq!(set_2d("grid-ap:8", 6).unwrap().set.len(), 64);
        assert_eq!(set_2d("cantor2:03", 4).unwrap().set.len(), 16);
        let e = set_2d("elekes-ap:16", 6).unwrap();
        assert_eq!((e.set.scale_k(), e.measure_k, e.y_shift), (12, 6, 0.5));
        assert_eq!(set_2d("line:32", 8).unwrap().set.len(), 32);
        assert!(set_2d("circle:1000", 8).unwrap().set.len() > 500);
        assert!(set_2d("ap:4", 4).is_err());
    }
}
