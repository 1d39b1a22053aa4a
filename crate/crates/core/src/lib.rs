//! Stochastic SIR/SEIR epidemics on synthetic contact networks with
//! budget-limited daily testing and contact tracing.
//!
//! The crate is organised bottom-up:
//!
//! * [`netgen`] derives degree distributions whose secondary-infection
//!   counts are negative binomial, and builds superspreading,
//!   Erdős–Rényi and gamma-infectiousness contact networks.
//! * [`epidemic`] runs continuous-time Gillespie dynamics on a network,
//!   pausing at each integer day for the intervention step.
//! * [`interventions`] implements random testing, forward and backward
//!   contact tracing, the two oracles and the mixed allocation.
//! * [`metrics`] turns trajectories into dispersion estimates, positive
//!   rates, correlations, threat levels and community statistics.
//! * [`harness`] runs deterministic parameter sweeps and writes CSV output.

pub mod epidemic;
pub mod error;
pub mod harness;
pub mod interventions;
pub mod metrics;
pub mod netgen;
pub mod rng;

pub use error::{Error, Result};
