//! Runtime checks of the flow's geometric statements.

pub mod report;
pub mod sphere;
pub mod trajectory;

pub use report::{Criterion, MonitorRecord, MonitorReport, Status};
pub use sphere::{check_simons_sphere, residual_lemma_4_2, residual_lemma_4_5, TimeDerivative, FD_STEP};
pub use trajectory::{
    check_containment, check_convexity_bound, check_length_identities, check_normal_flow,
    classify_outcome, curvature_evolution_residual, length_series, predict_outcome,
    KttCoefficient, Outcome, OutcomeInputs, Prediction, SingularKind, COLLAPSE_LENGTH_RATIO,
    KTT_COEFFICIENT, T_STAR_SLACK,
};
