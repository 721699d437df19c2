//! Grid peeling and the affine curve-shortening flow.
//!
//! This crate implements two processes on convex planar regions and the
//! machinery to compare them quantitatively:
//!
//! * **Grid peeling** — iterated removal of the convex-hull vertex set of a
//!   finite grid subset, stored row-by-row as `[x_min, x_max]` intervals
//!   ([`peel`]), plus a specialized peeler for the quarter-infinite grid
//!   ([`quadrant`]).
//! * **ACSF** — a front-tracking simulator of the affine curve-shortening
//!   flow, where boundary points move toward their center of curvature with
//!   speed `r^{-1/3}` ([`acsf`]).
//!
//! The [`harness`] module runs both processes on the same region and reports
//! Hausdorff distances and estimates of the constant coupling peeling
//! iterations to flow time (`m = c t n^{4/3}`).

pub mod acsf;
pub mod geometry;
pub mod harness;
pub mod numtheory;
pub mod peel;
pub mod quadrant;
pub mod region;
pub mod report;

pub use geometry::{ConvexChain, FloatPoint, GridPoint, UnimodularMap};
pub use peel::{LayerRecord, RowIntervalSet};
pub use quadrant::QuadrantProfile;
pub use region::Region;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("input point set is empty")]
    EmptyInput,
    #[error("chain has fewer than {min} vertices")]
    DegenerateChain { min: usize },
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("vectors are linearly dependent")]
    DependentVectors,
    #[error("vector is not primitive")]
    NonPrimitiveVector,
    #[error("chain does not cross the diagonal y = x")]
    NoDiagonalCrossing,
    #[error("point set is empty")]
    EmptySet,
    #[error("row y = {y} is not a contiguous interval")]
    NotRowInterval { y: i64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("step rejected: {0}")]
    StepRejected(&'static str),
    #[error("flow did not converge within {max_steps} steps")]
    NonConvergence { max_steps: u64 },
    #[error("time {t} is past the collapse time {collapse}")]
    PastCollapse { t: f64, collapse: f64 },
    #[error("curve is not convex")]
    NonConvexCurve,
    #[error("config error: {0}")]
    Config(String),
    #[error("unknown region '{0}'")]
    UnknownRegion(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(&'static str),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
