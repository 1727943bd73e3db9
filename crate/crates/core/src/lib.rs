//! Diffusion-controlled dissolution and growth of a spherical particle.
//!
//! The leading-order radius law `dR/dt = -eps (1/R + 1/sqrt(t))`, `R(0) = 1`,
//! is solved in closed form ([`exact`]), approximated by the classical
//! short-cut formulas ([`approx`]), integrated numerically as a cross-check
//! ([`ode`]) and compared against the full moving-boundary problem ([`pde`]).
//! Time is scaled by `R0^2 / (pi D)` and length by `R0`.

pub mod approx;
pub mod bisect;
pub mod curve;
pub mod error;
pub mod exact;
pub mod model;
pub mod ode;
pub mod pde;
pub mod report;
pub mod special;

pub use curve::{CurveMetadata, MethodId, RadiusCurve};
pub use error::{Error, Result};
pub use exact::{exact_curve, radius_at, time_to_dissolution, ParametricPoint};
pub use model::{
    classify_regime, nondimensionalize, redimensionalize, DimensionalCurve, DimensionlessProblem, PhysicalScenario,
    Regime,
};
pub use ode::{integrate_radius, IntegratorConfig, OdeSolution};
pub use pde::{solve_moving_boundary, MappedField, PdeConfig, PdeSolution, RunSummary};
pub use report::{compare_methods, t0_table, Comparison, ReportRow};
