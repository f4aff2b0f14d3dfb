//! Angle combinatorics under doubling and numerical ray tracing.

mod angle;
mod trace;

pub use angle::{alpha_cycle, Angle, AngleCycle, AngleError};
pub use trace::{
    equipotential_arc, landing_point, periodic_point_near, potential_schedule, ray_point, ray_point_f64, trace_equipotential,
    trace_landed, trace_ray, trace_ray_deep, Equipotential, ExternalRay, Landing, PeriodicMatch, RayError, LANDING_TOL,
    MATCH_TOL,
};
