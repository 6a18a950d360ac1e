//! Error taxonomy shared by every layer of the engine.
//!
//! Variants are deliberately coarse: callers mostly branch on "bad input"
//! versus "hypothesis not met" versus "resource limit", and the message
//! carries the specifics.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A triangle side that must be positive is zero or negative.
    #[error("degenerate triangle: {0}")]
    DegenerateTriangle(String),

    /// Side lengths violate the triangle inequality or the size bounds of
    /// the model surface (diameter, perimeter).
    #[error("invalid side lengths: {0}")]
    InvalidSides(String),

    /// An angle outside [0, pi] or otherwise unusable.
    #[error("invalid angle: {0}")]
    InvalidAngle(String),

    /// A space description that cannot be instantiated.
    #[error("invalid space description: {0}")]
    InvalidSpec(String),

    /// A point handed to a space it does not belong to.
    #[error("foreign point: {0}")]
    ForeignPoint(String),

    /// A geodesic was requested where it is not unique and no tie rule applies.
    #[error("ambiguous geodesic: {0}")]
    AmbiguousGeodesic(String),

    /// A configured resource cap (node count, iteration count) was exceeded.
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    /// A point expected to lie in the subset under test does not.
    #[error("not in subset: {0}")]
    NotInSubset(String),

    /// The space does not satisfy the curvature bound a routine requires.
    #[error("curvature bound mismatch: {0}")]
    WrongCurvature(String),

    /// The space was built by a constructor a routine does not support.
    #[error("unsupported constructor: {0}")]
    WrongConstructor(String),

    /// A structural hypothesis of a statement under verification fails on
    /// the given input, so the check cannot be run at all.
    #[error("hypothesis not satisfied: {0}")]
    HypothesisFailed(String),

    /// Direction-space analysis was requested at a point where it is not
    /// implemented.
    #[error("unsupported vertex: {0}")]
    UnsupportedVertex(String),

    /// A scenario name not present in the catalog.
    #[error("unknown scenario: {0}")]
    UnknownScenario(String),

    /// A ball radius too small relative to the sampling resolution for the
    /// result to mean anything.
    #[error("radius too small: {0}")]
    RadiusTooSmall(String),

    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),

    #[error("json failure: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
