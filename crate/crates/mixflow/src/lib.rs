//! Mixed-regime porous-media flow toolkit.
//!
//! Fluid flow through porous media crosses three regimes as the Reynolds
//! number grows: pre-Darcy (Izbash-type), Darcy (linear), and post-Darcy
//! (Forchheimer-type). This crate unifies them behind a single
//! gradient-dependent conductivity `K(|∇p|)` and provides:
//!
//! * [`conductivity`] — four concrete conductivity models (piecewise,
//!   smooth interpolation, rational, multiplicative), the forward map
//!   `G(s) = s·g(s)` and its inverse, the auxiliary energy density `H`,
//!   and every named comparison constant (`β₁`, `β₂`, `d₁`–`d₇`).
//! * [`bounds`] — pointwise/pairwise verification of the sandwich,
//!   derivative, monotonicity, and energy-density inequalities, plus the
//!   envelope and ODE-comparison utilities used by the long-time estimates.
//! * [`solver`] — a cell-centered finite-volume discretization of the
//!   degenerate pressure equation `p_t = ∇·(K(|∇p|)∇p)` with time-dependent
//!   Dirichlet data, explicit (CFL-adaptive) and backward-Euler/Picard
//!   steppers, and the discrete norms/energy diagnostics.
//! * [`experiments`] — scenario runners for energy/gradient decay,
//!   uniform-Gronwall saturation, continuous dependence on boundary data,
//!   and structural stability in the coefficient vector.
//! * [`config`] + [`cli`] — a TOML run configuration and the `mixflow`
//!   command-line front end.

pub mod boundary;
pub mod bounds;
pub mod cli;
pub mod conductivity;
pub mod config;
pub mod error;
pub mod experiments;
pub mod grid;
pub mod numerics;
pub mod solver;

pub use error::Error;
