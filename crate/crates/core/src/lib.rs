//! Exact symbolic computation in free post-Lie algebras on planar rooted trees.

pub mod bch;
pub mod coeff;
pub mod error;
pub mod hopf;
pub mod lift;
pub mod magnus;
pub mod matrix;
pub mod psi;
pub mod reference;
pub mod report;
pub mod series;
pub mod tree;

pub use coeff::{Coeff, Laurent, Rational};
pub use error::Error;
pub use magnus::Expansion;
pub use matrix::{MatrixSeries, RatMatrix, TriangularModel};
pub use report::{Check, Report};
pub use series::Series;
pub use tree::{Alphabet, Forest, Tree};
