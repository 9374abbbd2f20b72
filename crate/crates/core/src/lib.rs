//! Piecewise flat Ricci flow on compact triangulated 3-manifolds.
//!
//! A geometry is carried entirely by a [`SimplicialComplex3`] and one length
//! per edge. Curvature lives on the edges as deficit angles, and the flow
//! evolves each edge length by its own piecewise flat Ricci curvature.
//!
//! The crate is organised bottom-up:
//!
//! * [`complex`]: block templates, periodic (and twisted) identification,
//!   validation and covering duplication.
//! * [`flat_geometry`]: single-tetrahedron Euclidean geometry, barycentric
//!   dual cells, convex clipping, vertex and edge volumes.
//! * [`curvature`]: deficit angles, sectional, scalar and Ricci curvatures.
//! * [`flow`]: forward-Euler evolution with body-diagonal flattening.
//! * [`manifolds`]: the reference metrics, geodesic edge lengths and builders.
//! * [`analysis`]: analytic and PDE reference solutions, fits and observables.

pub mod analysis;
pub mod complex;
pub mod curvature;
pub mod error;
pub mod flat_geometry;
pub mod flow;
pub mod manifolds;
pub mod numfmt;

pub use complex::{
    BlockKind, BlockSpec, Decomposition, EdgeId, GridSpec, Identification, SimplicialComplex3,
    TetId, TriId, VertexId,
};
pub use curvature::CurvatureReport;
pub use error::{Error, Result};
pub use flat_geometry::TetLengths;
pub use flow::{EdgeLengthState, FlowConfig, FlowTrace};
pub use manifolds::{ManifoldBuild, MetricField};
