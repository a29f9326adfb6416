//! KL-UCB-Transfer for Gaussian multi-armed bandits with offline prior samples.
//!
//! The crate is split along the lines of a simulation study:
//!
//! - [`bandit`] and [`seed`]: instances, prior specifications, per-arm statistics
//!   and the keyed random streams every run draws from.
//! - [`index`]: exploration schedules, the prior penalty and the transfer index,
//!   both in closed form and through a bisection oracle.
//! - [`policy`]: arm selection (KL-UCB-Transfer, classical KL-UCB, a pooled
//!   UCB-with-shift baseline).
//! - [`theory`]: evaluators for the transfer-aware lower and upper regret bounds
//!   and the auxiliary identities used as numerical oracles.
//! - [`engine`]: single runs, parallel replications and aggregation.
//! - [`config`], [`preset`] and [`output`]: experiment files, the three
//!   reference studies, CSV emission and the bounds table.

pub mod bandit;
pub mod config;
pub mod engine;
pub mod error;
pub mod index;
pub mod normal;
pub mod output;
pub mod policy;
pub mod preset;
pub mod seed;
pub mod theory;

pub use bandit::{draw_prior_data, ArmStats, BanditInstance, PriorData, PriorEntry, PriorSpec};
pub use config::ExperimentConfig;
pub use engine::{
    aggregate, checkpoint_grid, run_experiment, run_replications, run_single, AggregateCurve,
    RegretTrajectory, Run,
};
pub use error::{Error, Result};
pub use index::{
    index_bisection_oracle, index_closed_form, prior_penalty, DeltaSchedule, IndexInputs,
};
pub use policy::{Policy, PolicyState};
pub use seed::{SeedContract, StreamLabel};
