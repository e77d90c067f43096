//! Scenario descriptions, the commands behind the `himcf` binary and their
//! file outputs.

pub mod commands;
pub mod output;
pub mod spec;
pub mod verify;

pub use commands::{cmd_containment, cmd_curve, cmd_radial, RunOutput, RunSummary};
pub use output::{fmt_f64, render_svg, to_sorted_json, write_atomic, Csv, Outline};
pub use spec::{Body, ContainmentSpec, CurveSpec, Forcing, Preset, RadialSpec, Speed};
pub use verify::{cmd_verify, parallel_map, resolve_suites, run_suite, thread_budget, VerifyReport, SUITES};
