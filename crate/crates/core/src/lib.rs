//! Numerical laboratory for the hyperbolic inverse mean curvature flow
//! `∂²X/∂t² = H⁻¹ν`.
//!
//! * [`geometry`]: normal-angle grids, support functions, discrete curves,
//!   radial-graph quantities.
//! * [`radial`]: closed forms, regime classification and integration of the
//!   radially symmetric reductions (spheres, cylinders, circles).
//! * [`flow`]: the plane-curve flow solved twice, as a hyperbolic PDE for the
//!   support function and as a Lagrangian normal flow of vertices.
//! * [`monitors`]: containment, convexity, length identities, outcome
//!   classification and evolution-identity residuals.
//! * [`scenario`]: scenario configuration and the CSV/JSON/SVG outputs used
//!   by the `himcf` binary.

pub mod error;
pub mod flow;
pub mod geometry;
pub mod monitors;
pub mod radial;
pub mod scenario;

pub use error::{Error, Result};
