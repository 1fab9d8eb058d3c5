//! Simulation and verification toolkit for time-fractional branching processes.
//!
//! The crate samples stable subordinators and their inverses, composes them
//! with Galton–Watson processes, Feller branching diffusions and Yule
//! processes, and checks closed-form moments, pmfs, inequalities and scaling
//! limits by Monte Carlo.
//!
//! Modules:
//! - [`special_fn`]: Gamma, Mittag–Leffler, L1 Caputo derivative.
//! - [`random`]: reproducible streams, one-sided stable laws, subordinators,
//!   inverse subordinators, renewal counts.
//! - [`gw`]: Galton–Watson processes and their renewal time changes.
//! - [`csbp`]: branching mechanisms, Laplace exponents, moment formulas,
//!   Feller/Yule simulation, time-change composition, fractional Yule pmf.
//! - [`mc`]: Monte Carlo estimates, two-sample statistics, scaling-limit runs.
//! - [`cli`]: the `fracbranch` command-line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod csbp;
pub mod error;
pub mod gw;
pub mod mc;
pub mod path;
pub mod random;
pub mod special_fn;

mod quad;

pub use error::{Error, Result};
pub use mc::McEstimate;
pub use path::{Interpolation, PathGrid};
pub use random::RngStream;
