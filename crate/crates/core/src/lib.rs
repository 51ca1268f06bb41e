//! Minimum cost consensus (MCC) solvers built around the mutual consensus
//! measure `κ(x) = max(x) − min(x)`.
//!
//! * [`measures`]: weight and opinion types, the OWA operator and the
//!   consensus measures.
//! * [`lp`]: a small dense bounded-variable simplex used by the exact solvers.
//! * [`mcmc`]: exact minimum cost with mutual consensus, by breakpoint sweep
//!   and by linear programming.
//! * [`owamcc`]: OWA-based MCC: region bounds, the interpolating
//!   approximation, the symmetric linear solver and the ordering oracle.
//! * [`harness`]: instance files, seeded simulation batches and region
//!   sampling.

pub mod error;
pub mod harness;
pub mod lp;
pub mod mcmc;
pub mod measures;
pub mod owamcc;
mod split;

pub use error::{Error, Result};
pub use mcmc::{cost, solve_mcmc, solve_mcmc_lp, solve_mcmc_with, McmcResult, TieBreak};
pub use measures::{
    kappa_max_dev, kappa_mutual, kappa_owa, kappa_pairwise, kappa_weighted_dev, membership, owa,
    AggregatorSpec, Instance, Membership, OpinionVector, Region, WeightVector,
};
pub use owamcc::{
    ap_owamcc, cost_bounds, delta_bounds, solve_exact_enum, solve_symmetric_linear, ApproxOptions,
    ApproxResult, DeltaBounds, ExactResult, Solution,
};
