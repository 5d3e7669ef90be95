//! Exact combinatorics of modular hyperbolas.
//!
//! For a modulus `n >= 2` and a unit `a` the least-residue hyperbola is the
//! point set `{(x, y) : xy = a (mod n), 1 <= x, y <= n - 1}`. This crate
//! enumerates it, counts the lines it spans (ordinary lines in particular),
//! and counts the distinct origin distances of its points, together with the
//! prime-power machinery (quadratic congruences, Hensel lifting, residue
//! classes) those counts are built on.
//!
//! All arithmetic is exact. Residues live in [`Int`] (`i64`); products are
//! accumulated in [`Wide`] (`i128`), so every modulus up to [`MAX_MODULUS`]
//! is overflow free. Rational bounds use [`Rational`].

pub mod distances;
pub mod error;
pub mod geometry;
pub mod hyperbola;
pub mod ntcore;

pub use error::{Error, Result};

/// Scalar type for residues, coordinates and line coefficients.
pub type Int = i64;
/// Accumulator for products of two [`Int`]s.
pub type Wide = i128;
/// Exact rational used for bound constants.
pub type Rational = num_rational::Ratio<Wide>;

/// Largest modulus accepted anywhere in the crate (2^31).
pub const MAX_MODULUS: Int = 1 << 31;

pub use distances::{distance_profile, DistanceProfile};
pub use geometry::{census, IncidenceCensus, LineKey};
pub use hyperbola::{enumerate_points, HyperbolaSpec, Point, PointSet};
pub use ntcore::PrimePower;
