//! Uniformly accurate finite difference solver for the one-dimensional
//! Zakharov system
//!
//! ```text
//! i E_t + E_xx - N E = 0,
//! eps^2 N_tt - N_xx - (|E|^2)_xx = 0,
//! ```
//!
//! in the subsonic limit regime `0 < eps <= 1`, with the initial-layer
//! oscillations carried by a free wave `G^eps` treated exactly in time.
//!
//! The crate is organised bottom-up:
//! - [`grid`], [`dst`], [`linsolve`]: grid functions, finite difference
//!   operators, discrete norms, sine transform, tridiagonal solves;
//! - [`problem`]: test cases, perturbed initial data and the Taylor first step;
//! - [`oscillatory`]: sine-mode representation of `G^eps` and its averages;
//! - [`scheme`]: the three-level implicit scheme and density recovery;
//! - [`splitting`]: a Strang splitting solver for the limiting Schrödinger
//!   equation with oscillatory potential, used for cross-checks.

pub mod dst;
pub mod error;
pub mod grid;
pub mod linsolve;
pub mod oscillatory;
pub mod problem;
pub mod scheme;
pub mod splitting;

pub use error::{Result, ZakharovError};
pub use grid::{ComplexField, Field, Grid1D, RealField};
pub use oscillatory::WaveModes;
pub use problem::{CaseKind, PhysicalCase, ProfileSet};
pub use scheme::{FdSolver, RunReport, SolverState, StepConfig};
