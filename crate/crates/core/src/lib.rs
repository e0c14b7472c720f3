//! Fast marching on the spacetime manifold traced by a moving front.
//!
//! The marcher samples the surface `M = {(x, y, t) : (x, y) ∈ C_t}` point by
//! point in increasing time. Each new point is computed in a local `uvw` frame
//! from two accepted parents, placed by a small constrained grid search, and
//! attached to a planar segment list that tracks the front's topology.

pub mod band;
pub mod book;
pub mod error;
pub mod fmm;
pub mod frames;
pub mod io;
pub mod local_solver;
pub mod march;
pub mod metrics;
pub mod sampler;
pub mod speed;
pub mod studies;

use std::fmt;

pub use error::{BookError, FieldError, FmmError, FrameError, MarchError, MetricsError, SolveError, StencilError, StudyError};
pub use frames::{Frame, Vec3};
pub use march::{FrontGraph, MarchConfig, MarchState, SpacetimePoint};
pub use speed::{Example, SpeedField};

/// Index of a point in the accepted/band storage.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub struct PointId(pub usize);

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}
