//! The reduced spin Calogero system: energy, equations of motion, Lax
//! matrices, invariants, and two ways of integrating the flow.

mod freezing;
mod integrate;
mod invariants;
mod phase;
mod projection;

pub use freezing::{
    freezing_solve, identity_434_residual, r12_build, FreezingSolution, TensorTerm,
    FREEZING_RESIDUAL,
};
pub use integrate::{
    drift, integrate_direct, integrate_direct_with, monitor, monitor_record, DriftReport,
    GaugeChoice, IntegratorOptions, MonitorRecord, Sample, Trajectory,
};
pub use invariants::{
    bracket_formula, evaluate, gradient, gradient_raw, identity_413, identity_416, invariant_value,
    InvariantClass, InvariantSpec,
};
pub use phase::{
    eom_rhs, eom_rhs_with_gauge, hamiltonian, hamiltonian_trace, lax, lax_cal, lax_minus,
    random_phase_point, LaxMatrix, PhasePoint, Tangent, EPS_WALL,
};
pub use projection::{flow_projection, flow_projection_with, ProjectionOptions, EPS_DEGENERATE};
