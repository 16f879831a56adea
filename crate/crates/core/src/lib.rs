//! Trajectoids: solids that roll along a prescribed periodic planar path.
//!
//! The crate takes a planar polyline, finds ball radii at which rolling
//! along `n` periods returns the ball to its starting orientation, carves a
//! convex solid that touches the plane only along the rolling trace, and
//! checks the result by replaying the roll.

// Guards are written `!(x > 0.0)` so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod mesh_forge;
pub mod path_model;
pub mod roll_verify;
pub mod rolling_map;
pub mod solver;
pub mod spherical_geometry;

pub use error::{Error, Result};
