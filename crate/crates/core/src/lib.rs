//! Numerical laboratory for interacting Brownian motions of random-matrix type.
//!
//! The crate is organised bottom-up:
//!
//! * [`configuration`]: finite point configurations, labelling and spatial restriction.
//! * [`potentials`]: free/pair potentials, the windowed Hamiltonian, the finite-N
//!   log-gas density and the quasi-Gibbs sandwich check.
//! * [`drift`]: truncated drift evaluators for the bulk, soft-edge, Bessel,
//!   Ginibre, finite-N and frozen-environment systems.
//! * [`sde`]: adaptive Euler–Maruyama integration and the edge rescaling.
//! * [`kernels`]: Airy, Bessel and Pearcey special functions and the six
//!   correlation kernels, including the Nyström resolvent used by the tacnode kernel.
//! * [`sampling`]: Metropolis sampling of the log-gas, the tridiagonal β-ensemble
//!   and spectral sampling of determinantal point processes.
//! * [`stats`]: correlation estimators, spacing and semicircle comparisons, and
//!   the Gaussian-tail integrability audits.
//! * [`experiments`]: the named end-to-end acceptance experiments.

// `!(x > 0.0)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Reference constants keep every digit of their source.
#![allow(clippy::excessive_precision)]
#![allow(clippy::needless_range_loop)]

pub mod configuration;
pub mod drift;
mod error;
pub mod experiments;
pub mod kernels;
pub mod potentials;
pub mod quadrature;
pub mod rng;
pub mod sampling;
pub mod sde;
pub mod stats;

pub use configuration::{Configuration, Dim, LabelMode, LabeledState, Point, COLLISION_TOL};
pub use error::{Error, Result};
