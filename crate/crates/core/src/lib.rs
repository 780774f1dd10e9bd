//! Diagnostics and experiments for polynomial and distance maps applied to
//! discretized planar sets.
//!
//! * [`exactpoly`]: exact rationals and sparse bivariate polynomials.
//! * [`web`]: curvature numerators, special-form detection, Blaschke
//!   curvature of planar 3-webs.
//! * [`dyadic`]: dyadic cell sets, covering numbers, non-concentration
//!   audits and set generators.
//! * [`project`]: images of cell sets under projection families with
//!   certified inner/outer covering counts.
//! * [`energy`]: δ-approximate solution counts of `P(x,y) = P(x',y')`.
//! * [`geomtools`]: Whitney cubes, Remez sublevel checks, triangle areas.
//! * [`expcli`]: experiment configuration, runner and reports.
//!
//! Data-parallel kernels run on rayon when the `parallel` feature is on
//! (the default); see [`par::Exec`].

pub mod dyadic;
pub mod energy;
pub mod error;
pub mod expcli;
pub mod exactpoly;
pub mod geomtools;
pub mod interval;
pub mod par;
pub mod project;
pub mod web;

pub use error::{Error, Result};
pub use exactpoly::{BivariatePoly, Rational, Var};
pub use par::Exec;
