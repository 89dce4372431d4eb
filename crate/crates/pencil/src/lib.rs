//! Spectral analysis of regular matrix pencils and rank-one eigenvalue
//! placement.
//!
//! A *matrix pencil* is the parametrized matrix `A(s) = sE - A` with square
//! complex (or real) `E`, `A`; it is *regular* when `det(sE - A)` is not
//! identically zero. Regular pencils carry a complete eigenstructure on the
//! extended complex plane: finite eigenvalues with Jordan chains, plus the
//! point at infinity whenever `E` is singular. This crate computes that
//! structure (nullity towers, Segre characteristics, Jordan chains, the
//! Weierstrass canonical form) and constructs *rank-one* pencil perturbations
//! `P(s) = (su + v)w*` that move the spectrum to prescribed targets:
//!
//! * unrestricted placement, where both vector factors are free;
//! * restricted placement, where `u, v` are fixed and only `w` is solved for;
//! * state-feedback pole placement for linear differential-algebraic systems
//!   `E x' = A x + b u`, a special case of the restricted problem;
//! * the inverse problem: realize a prescribed before/after spectrum pair.
//!
//! Every construction is verified a posteriori against the predicted spectrum
//! and the determinant identity it is based on; results are never returned
//! silently unverified.
//!
//! The `pencil` binary exposes the same operations on JSON pencil files; see
//! the crate README for the file format and CLI usage.

pub mod bounds;
pub mod cli;
pub mod error;
pub mod feedback;
pub mod gen;
pub mod io;
pub mod lapack;
pub mod pencil;
pub mod placement;
pub mod poly;
pub mod rank_one;
pub mod report;
pub mod restricted;
pub mod scalar;
pub mod spectral;

pub use error::{Error, Result};
pub use pencil::{CharPoly, Pencil};
pub use placement::{PlacementResult, PlacementSpec};
pub use poly::Polynomial;
pub use rank_one::RankOnePencil;
pub use scalar::{ExtComplex, Tol};
pub use spectral::{EigStructure, SpectralData, Weierstrass};

/// Dense complex matrix in row-major order.
pub type CMat = ndarray::Array2<num_complex::Complex64>;
/// Dense complex vector.
pub type CVec = ndarray::Array1<num_complex::Complex64>;
