//! Simulation core for dynamical quantum state reduction through spontaneous
//! unitarity violation.
//!
//! A superposition over `N` pointer states is evolved under one of four
//! nonlinear collapse flows until a single component dominates:
//!
//! * [`ModelKind::TwoState`] — the minimal two-state flow on the Bloch sphere,
//!   driven by one random variable `ξ ∈ U[-1,1]`.
//! * [`ModelKind::SingleLambda`] — the N-state flow driven by a single
//!   `λ ∈ U[0,1]`, whose value selects the outcome through a partition of the
//!   unit interval into blocks of Born weight.
//! * [`ModelKind::Sequential`] — N−1 random variables deciding one pointer
//!   state per stage, stages separated in time by powers of a hierarchy
//!   parameter `η`.
//! * [`ModelKind::Bisection`] — log₂(N) random variables, each stage halving
//!   the set of candidate outcomes; admits a continuum limit as a random
//!   field on `[0,1]` (see [`field`]).
//!
//! Trajectories are advanced by explicit steppers ([`integrate`]), ensembles
//! and Born-deviation sweeps are aggregated in [`ensemble`]. All randomness is
//! derived from a [`SeedSpec`], so every result is reproducible bitwise.

pub mod ensemble;
pub mod error;
pub mod field;
pub mod generators;
pub mod integrate;
pub mod state;

pub use ensemble::{
    binomial_standard_error, born_deviation, run_ensemble, run_ensemble_stratified,
    run_ensemble_streams, sweep, EnsembleReport, SweepAxis, SweepPoint, SweepTable,
};
pub use error::{Error, Result};
pub use field::{
    continuum_generator, draw_uniform, field_pdf_histogram, propagator_kernel,
    random_field_sample, sign_partition_continuum, FieldSpec, Histogram, SeedSpec,
};
pub use generators::{
    g_bisection, g_sequential, g_two_state, separatrix_values, sign_partition,
    theta_velocity_sequential, theta_velocity_single_lambda, theta_velocity_two_state,
    DrawConvention, GeneratorDiagonal, ModelKind, ModelSpec, StochasticDraw,
};
pub use integrate::{
    detect_outcome, run_trajectory, run_trajectory_with_draws, step, HaltReason,
    IntegratorConfig, ModelState, Scheme, StateForm, TrajectoryRecord,
};
pub use state::{
    angles_from_weights, born_weights, normalize, weights_from_angles, AngleCoords, StateVector,
    WeightVector,
};
