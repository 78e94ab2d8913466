//! Schedulability analysis built around k-point effective tests.
//!
//! The centerpiece is the [`kpoint`] module: given per-task utilizations and
//! the coefficients `(alpha_i, beta_i)` of a k-point effective test, it
//! evaluates a hyperbolic bound, two utilization bounds, and an
//! extreme-point bound, independent of the task model that produced the
//! coefficients.
//!
//! The remaining modules instantiate the framework for concrete models:
//!
//! * [`uniproc`]: uniprocessor fixed-priority tests (exact TDA and RTA,
//!   EDF demand-bound feasibility, the hyperbolic/sum tests for constrained
//!   and arbitrary deadlines, busy-window analysis, speed-up witnesses).
//! * [`multiproc`]: global rate-monotonic tests for sporadic, DAG, and
//!   self-suspending task systems, plus a linear-time monotonic variant,
//!   the tightened total-utilization test, and the Bertogna baseline.
//! * [`factors`]: bisection solvers for the named constants (the 1.76322
//!   speed-up factor and the 3.62143 / 2.668 capacity-augmentation factors).
//! * [`rt_bounds`]: experimental closed-form response-time upper bounds.
//! * [`model`]: the task and task-set data model, JSON (de)serialization,
//!   and derived quantities.
//! * [`generator`]: deterministic random task-set generation for
//!   acceptance-ratio experiments.

pub mod error;
pub mod factors;
pub mod generator;
pub mod kpoint;
pub mod model;
pub mod multiproc;
pub mod rt_bounds;
pub mod uniproc;
pub mod verdict;

pub(crate) mod numeric;

pub use error::Error;
pub use verdict::{Verdict, DEFAULT_TOLERANCE};

/// Convenient result alias for fallible analysis operations.
pub type Result<T> = std::result::Result<T, Error>;
