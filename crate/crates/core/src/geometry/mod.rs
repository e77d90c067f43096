//! Shared geometric kernel: normal-angle grids, θ-differentiation, support
//! functions, discrete convex curves and radial-graph quantities.

pub mod curve;
pub mod graph;
pub mod grid;
pub mod spectral;
pub mod support;

pub use curve::{Frame, PeriodicCubic, PlaneCurve, Point};
pub use graph::{graph_quantities, polar_sphere_metric, round_sphere, GraphSample};
pub use grid::AngleGrid;
pub use spectral::{periodic_derivative, Order, SpectralDiff};
pub use support::{
    curvature_from_support, curve_to_support, hausdorff_convex, length_from_support,
    support_to_curve, SupportState,
};
