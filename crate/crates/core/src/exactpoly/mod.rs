//! Exact rational arithmetic and sparse bivariate polynomials.
//!
//! All identity decisions in the crate (special-form detection, the
//! curvature-numerator identities) run here in exact arithmetic; doubles
//! only appear at grid-evaluation time through [`BivariatePoly::evaluate_f64`]
//! and [`HornerPoly`].

mod dd;
mod poly;
mod rational;
mod text;

pub use poly::{BivariatePoly, HornerPoly, Var};
pub use rational::Rational;

#[cfg(test)]
pub(crate) mod testutil {
    use super::*;
    use proptest::prelude::*;

    pub fn small_rational() -> impl Strategy<Value = Rational> {
        (-9i64..=9, 1i64..=4).prop_map(|(p, q)| Rational::new(p, q))
    }

    pub fn poly(max_deg: u32, max_terms: usize) -> impl Strategy<Value = BivariatePoly> {
        proptest::collection::vec(
            (small_rational(), 0..=max_deg, 0..=max_deg),
            0..=max_terms,
        )
        .prop_map(move |ts| {
            BivariatePoly::from_terms(ts.into_iter().filter(|(_, i, j)| i + j <= max_deg))
        })
    }
}
