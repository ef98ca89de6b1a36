//! Finite-dimensional operator models of Toeplitz and Cuntz-Krieger families,
//! and exact checks of their relations on truncated bases.

pub mod decomposition;
pub mod family;
pub mod formal;
pub mod matrix;
pub mod norm;
pub mod report;
pub mod separating;
pub mod verify;

use thiserror::Error;

use crate::alignment::AlignmentError;
use crate::aperiodicity::AperiodicityError;
use crate::boundary::BoundaryError;
use crate::degree::Degree;
use crate::graph::PathError;

pub use decomposition::{diagonal_norm, gap_projection, lem3_check, q_decomposition, QDecomposition};
pub use family::{build_boundary_family, build_fock_family, FamilyKind, IsometryFamily};
pub use formal::FormalElement;
pub use matrix::{Basis, OperatorMatrix, Scalar};
pub use norm::operator_norm;
pub use report::{CheckResult, CheckStatus, VerificationReport};
pub use separating::{build_separating_system, SeparatingSystem};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RepError {
    #[error("degree {0} does not match the graph rank")]
    RankMismatch(Degree),
    #[error("cap {cap} is too small: degree {needed} is required")]
    CapTooSmall { needed: Degree, cap: Degree },
    #[error("no seed handles were given")]
    EmptySeedSet,
    #[error("handles `{first}` and `{second}` agree on the comparison window but differ beyond it")]
    WindowCollision { first: String, second: String },
    #[error("seed handles belong to a different graph")]
    GraphMismatch,
    #[error("`{0}` is in the family but its source vertex is not")]
    SourceClosureViolation(String),
    #[error("the family is not closed under minimal common extensions")]
    NotMceClosed,
    #[error("q_{0} vanishes in this family")]
    ZeroProjection(String),
    #[error("paths `{0}` and `{1}` have different sources")]
    SourceMismatch(String, String),
    #[error("power iteration did not converge in {0} steps")]
    NonConvergence(usize),
    #[error("no separating extension found up to degree {0}")]
    SeparationSearchExhausted(Degree),
    #[error("separating-system invariant failed: {0}")]
    InvariantViolation(String),
    #[error("this operation needs a {0} family")]
    WrongFamily(&'static str),
    #[error(transparent)]
    Alignment(#[from] AlignmentError),
    #[error(transparent)]
    Aperiodicity(#[from] AperiodicityError),
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
    #[error(transparent)]
    Path(#[from] PathError),
}
