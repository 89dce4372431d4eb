//! Crate-wide error type.
//!
//! Every fallible operation in this crate returns [`Error`]. The variants are
//! deliberately fine-grained: callers (in particular the CLI) distinguish
//! "the construction itself is impossible" from "the construction succeeded
//! but its numerical verification exceeded tolerance".

use crate::placement::PlacementResult;
use crate::scalar::ExtComplex;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Interpolation nodes coincide within machine tolerance.
    #[error("interpolation nodes {0} and {1} coincide within machine tolerance")]
    DuplicateNodes(usize, usize),

    /// Root extraction was asked for the zero polynomial.
    #[error("cannot compute roots of the zero polynomial")]
    ZeroPolynomial,

    /// The pencil sE - A is singular (det vanishes identically within tolerance).
    #[error("pencil is not regular: det(sE - A) vanishes at all test nodes")]
    NotRegular,

    /// Nullity-tower differences failed to be non-increasing, or cluster
    /// multiplicities disagree with root-subspace dimensions. Usually a sign
    /// that the clustering tolerance does not match the data.
    #[error("inconsistent eigenstructure: {0}")]
    StructureInconsistent(String),

    /// A Jordan-chain request at a point that is not an eigenvalue.
    #[error("{0} is not an eigenvalue of the pencil")]
    NotEigenvalue(ExtComplex),

    /// The chain matrix for the Weierstrass transformation is too
    /// ill-conditioned to invert reliably.
    #[error("Weierstrass chain matrix is ill-conditioned (cond = {0:.3e})")]
    IllConditioned(f64),

    /// The input pencil sF - G does not have rank exactly one.
    #[error("pencil does not have rank one: {0}")]
    NotRankOne(String),

    /// A degenerate-form operation received a non-degenerate rank-one pencil.
    #[error("rank-one pencil is not in degenerate form (s u + v with u, v independent)")]
    NotDegenerate,

    /// The right-hand-side polynomial for the resolvent equation exceeds the
    /// solvable degree range.
    #[error("polynomial degree {got} exceeds the solvable bound {max}")]
    DegreeTooHigh { got: usize, max: usize },

    /// The sampled coefficient matrix lost rank beyond tolerance.
    #[error("sampling matrix is numerically singular (rank {rank} of {want})")]
    NumericallySingular { rank: usize, want: usize },

    /// Requested multiplicities do not sum to the available capacity.
    #[error("target multiplicities sum to {got}, but the capacity is {want}")]
    BudgetMismatch { got: usize, want: usize },

    /// Construction succeeded algebraically, but the a-posteriori spectrum
    /// check exceeded tolerance. The constructed result is carried along so
    /// the caller can inspect (and report) both.
    #[error("verification failed: {detail}")]
    VerificationFailed {
        detail: String,
        result: Box<PlacementResult>,
    },

    /// A structural precondition (for example: every eigenvalue must have
    /// geometric multiplicity one) does not hold.
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    /// The requested targets violate the solvability hypotheses of the
    /// restricted placement problem.
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    /// Inverse-problem multisets disagree in total.
    #[error("multiset totals disagree: before sums to {before}, after sums to {after}")]
    TotalMismatch { before: usize, after: usize },

    /// Placing an eigenvalue at infinity is impossible for this system.
    #[error("cannot place an eigenvalue at infinity: {0}")]
    InfinityForbidden(String),

    /// A LAPACK routine reported failure.
    #[error("LAPACK routine {routine} failed with info = {info}")]
    Lapack { routine: &'static str, info: i32 },

    /// Matrix/vector dimensions do not line up.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Malformed input file or command-line argument.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
