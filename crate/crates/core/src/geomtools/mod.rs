//! Supporting geometry: Whitney decompositions, Remez sublevel checks and
//! triangle-area statistics.

mod remez;
mod triangles;
mod whitney;

pub use remez::{remez_check, RemezReport};
pub use triangles::{default_r_grid, triangle_area, triple_area_stats, TripleAreaStats};
pub use whitney::{
    verify_whitney, whitney_decompose, Domain, Membership, OpenUnitCube, PolynomialComplement,
    UnitSquareMinusDiagonal, WhitneyCheck, WhitneyCube, WhitneyDecomposition,
};
