//! Exact discriminants, resultants and root separation of integral
//! polynomials, plus reproducible experiments on random polynomials of
//! bounded height.
//!
//! Coefficient vectors are always lowest power first.

pub mod cli;
pub mod discriminant;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod poly;
pub mod roots;
pub mod stats;

pub use discriminant::{discriminant, discriminant_matrix, discriminant_via_resultant, resultant};
pub use error::{Error, Result};
pub use linalg::IntMatrix;
pub use poly::{IntPolynomial, RealPolynomial};
pub use roots::{find_roots, mahler_bound, min_separation_scan, separation, RootSet};
pub use stats::EmpiricalDistribution;
