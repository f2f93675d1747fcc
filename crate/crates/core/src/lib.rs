//! Interval regularization of ill-conditioned and imprecise linear systems.
//!
//! A point system `A·x = b` is immersed into an interval system
//! `(A + θE)·x = b` and a pseudo-solution is taken from (or as close as
//! possible to) its tolerable solution set
//!
//! ```text
//! Ξ_tol = { x ∈ ℝⁿ : A'·x ∈ b for every A' ∈ A }.
//! ```
//!
//! Two routes are provided: maximizing the recognizing functional `Tol`
//! ([`maximize`]) and formal solutions in Kaucher arithmetic ([`formal`]).
//! Linear-inequality characterizations ([`rohn`], [`sharaya`]) serve both as
//! exact oracles and as geometry for plotting.
//!
//! The crate is `no_std` (it needs `alloc`) unless the `std` feature is on.

#![cfg_attr(not(any(test, feature = "std")), no_std)]

extern crate alloc;

pub mod error;
pub mod formal;
pub mod interval;
pub mod linalg;
pub mod lp;
pub mod maximize;
pub mod regularize;
pub mod rohn;
pub mod sharaya;
pub mod systems;
pub mod tolerance;

pub use error::{Error, FormalFailure, Result};
pub use formal::{formal_solve, FormalConfig, FormalSolution};
pub use interval::{Interval, KInterval};
pub use linalg::{intervalize, IntervalMatrix, IntervalVector, Matrix};
pub use maximize::{maximize_tol, Certificate, SolverConfig, TolMaxReport};
pub use regularize::{cond_spectral, corner_condition_scan, regularize, Method, RegularizeConfig, Rhs};
pub use rohn::{lp_max_tol, rohn_feasible};
pub use sharaya::{enumerate_strips, polygon2d};
pub use tolerance::{member_tolerable, tol_eval, Membership};
