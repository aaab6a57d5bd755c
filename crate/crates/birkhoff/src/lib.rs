//! Exact rational arithmetic for dilations of the Birkhoff polytope of
//! doubly stochastic matrices and its faces: a closed-form multivariate
//! generating function over unimodular cones, and from it Ehrhart
//! polynomials, lattice-point counts, normalized volumes, and integrals of
//! powers of linear forms. Every quantity is computed exactly; no floating
//! point appears anywhere.
//!
//! The independent [`oracle`] module recomputes lattice-point counts by
//! dynamic programming and shares nothing with the formula path, so the
//! agreement checks in [`verify`] are meaningful.

pub mod combinatorics;
pub mod ehrhart;
pub mod error;
pub mod exactmath;
pub mod integration;
pub mod mgf;
pub mod oracle;
pub mod todd;
pub mod verify;

pub use combinatorics::{Arborescence, Permutation, RayMatrix};
pub use ehrhart::{count_lattice_points, ehrhart_polynomial, volume, EhrhartResult, GenericVector};
pub use error::{Error, Result};
pub use exactmath::{Polynomial, Rational};
pub use integration::{integrate_power, LinearForm};
pub use mgf::{birkhoff_terms, evaluate_mgf, face_terms, ConeTerm, FaceWeights, ZeroPattern};
pub use todd::ToddEngine;
