//! Jones calculus, rail waveplate programs and Poincaré-sphere geometry.

mod jones;
mod rails;
mod sphere;

pub use jones::{retarder_matrix, waveplate_matrix, JonesVector, RetarderKind, RetarderSpec};
pub use rails::{
    boundary_states, matching_sign_patterns, rail_composite, variable_flip, Plate, PlateAxis, Rail, RailProgram,
    RailTarget,
};
pub use sphere::{
    angle_between, geometric_phase_report, pancharatnam_phase, parallel_transport_residual, reference_closure,
    solid_angle, trace_path, wrap_angle, GeometricPhaseReport, SpherePath, DEFAULT_STEPS_PER_PLATE, MIN_OVERLAP,
};
