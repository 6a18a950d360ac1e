//! Verification engine for convexity-type properties of subsets of model
//! metric spaces with a lower curvature bound.
//!
//! The crate is organized bottom-up: model-surface trigonometry
//! ([`spaceforms`]), constructed spaces with exact distance oracles
//! ([`spaces`]), sampled nets over spaces and subsets ([`nets`],
//! [`subsets`]), the convexity checkers ([`qc_check`]), discrete chain
//! analysis ([`qgeo`]), statement-level verification suites ([`theorems`]),
//! a scenario catalog ([`zoo`]), and file I/O ([`files`]).

pub mod error;
pub mod files;
pub mod nets;
pub mod qc_check;
pub mod qgeo;
pub mod spaceforms;
pub mod spaces;
pub mod subsets;
pub mod theorems;
pub mod util;
pub mod zoo;

pub use error::{Error, Result};
pub use spaceforms::{
    comparison_angle, comparison_angle_extended, model_diameter, side_from_angle, TriangleSides,
    LENGTH_TOL,
};
pub use spaces::{declared_k, describe, origin, Constructor, GraphData, Point, Space};
