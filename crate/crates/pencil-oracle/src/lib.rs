//! Exact-arithmetic reference implementation for pencil eigenstructure.
//!
//! This crate exists to certify the floating-point rank decisions made by
//! the main library: given an integer pencil, it derives Segre
//! characteristics, nullity towers and the structure at infinity in exact
//! Gaussian-rational arithmetic (Smith normal form over `Q(i)[s]`), sharing
//! no code and no algorithms with the float path. It is a test-support
//! crate: slow, loud on ambiguity, and restricted to desk-scale inputs.

pub mod matrix;
pub mod poly;
pub mod rational;
pub mod roots;
pub mod smith;
pub mod structure;

pub use rational::Qi;
pub use structure::{exact_structure, exact_tower_at, exact_tower_at_inf, ExactEig, ExactStructure};
