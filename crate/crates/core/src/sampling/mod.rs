//! Samplers for the finite log-gas and for determinantal point processes.

pub mod dpp;
pub mod mcmc;
pub mod tridiag;

pub use dpp::{dpp_sample, poisson_interval, DppSampleConfig, DppSampler, DppWindow};
pub use mcmc::{mcmc_gibbs, GibbsTarget, McmcChain, McmcConfig, McmcRun};
pub use tridiag::{tridiag_beta_sample, tridiag_ensemble, tridiag_sample_with, EnsembleScaling};
