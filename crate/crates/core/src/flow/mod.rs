//! Time integration of the hyperbolic flow, in support-function form and in
//! Lagrangian (vertex) form.

pub mod config;
pub mod lagrangian;
pub mod sigma;
pub mod support_flow;
pub mod trajectory;

pub use config::{FlowConfig, TimeStep, MAX_CFL_SAFETY};
pub use lagrangian::{
    lagrangian_cfl_unit, max_tangential_velocity, run_lagrangian_flow, step_lagrangian,
    vertex_velocity,
};
pub use sigma::{sigma_field, support_curve_distance, NormalSpeed};
pub use support_flow::{cfl_unit_bound, run_support_flow, run_support_flow_from, step_support, support_rhs};
pub use trajectory::{FlowTrajectory, Snapshot, Termination};
