//! The three reference studies on the six-armed unit-variance instance
//! `mu = (1.0, 0.9, 0.8, 0.7, 0.6, 0.5)`.
//!
//! - `sim1`: the same prior shift `(shift, L)` on every arm, `mu'_k = mu_k + shift`,
//!   for `(shift, L)` in `(0.20, 0.40), (0.11, 0.20), (0.05, 0.10), (0.00, 0.05)`,
//!   plus a no-prior baseline. `T = 10^6`.
//! - `sim2`: a prior on the optimal arm only; no prior, mildly optimistic
//!   (`mu'_1 = 1.001, L_1 = 0.004`) and pessimistic (`mu'_1 = 0.990,
//!   L_1 = 0.210`). `T = 10^4`.
//! - `sim3`: KL-UCB-Transfer against the pooled UCB-with-shift baseline
//!   (`shift_l = 0.10`) under the `(0.05, 0.10)` prior on every arm. `T = 10^6`.
//!
//! All use 1000 prior samples per informed arm, `sigma' = 1`, 100 runs and
//! `delta_t = 1.05 ln t`.

use std::str::FromStr;

use crate::bandit::{BanditInstance, PriorEntry, PriorSpec};
use crate::config::{ExperimentConfig, DEFAULT_CHECKPOINTS};
use crate::error::{Error, Result};
use crate::index::DeltaSchedule;
use crate::policy::Policy;

pub const REFERENCE_MEANS: [f64; 6] = [1.0, 0.9, 0.8, 0.7, 0.6, 0.5];
pub const PRIOR_SAMPLES: u64 = 1000;
pub const EPSILON: f64 = 0.05;
pub const RUNS: u64 = 100;
pub const MASTER_SEED: u64 = 20_250_101;

/// `(shift, L)` settings of the first study, loosest first.
pub const SIM1_SETTINGS: [(f64, f64); 4] = [(0.20, 0.40), (0.11, 0.20), (0.05, 0.10), (0.00, 0.05)];

pub const SIM2_MILD: (f64, f64) = (1.001, 0.004);
pub const SIM2_PESSIMISTIC: (f64, f64) = (0.990, 0.210);

pub const SIM3_SETTING: (f64, f64) = (0.05, 0.10);
pub const SIM3_SHIFT_L: f64 = 0.10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Sim1,
    Sim2,
    Sim3,
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sim1" => Ok(Preset::Sim1),
            "sim2" => Ok(Preset::Sim2),
            "sim3" => Ok(Preset::Sim3),
            other => Err(Error::UnknownPreset(other.to_string())),
        }
    }
}

/// Removes binary noise from decimal sums such as `0.9 + 0.05`.
fn decimal(x: f64) -> f64 {
    (x * 1e9).round() / 1e9
}

pub fn reference_instance() -> BanditInstance {
    BanditInstance::new(REFERENCE_MEANS.to_vec(), 1.0).expect("reference instance is valid")
}

/// `mu'_k = mu_k + shift`, `L_k = l_bound` on every arm.
pub fn shifted_prior(shift: f64, l_bound: f64) -> PriorSpec {
    let arms = REFERENCE_MEANS
        .iter()
        .map(|&m| PriorEntry {
            n_prior: PRIOR_SAMPLES,
            mu_prior: decimal(m + shift),
            l_bound,
        })
        .collect();
    PriorSpec::new(arms, 1.0).expect("shifted prior is valid")
}

/// Prior samples on the optimal arm only.
pub fn optimal_arm_prior(mu_prior: f64, l_bound: f64) -> PriorSpec {
    let mut arms = vec![PriorEntry::empty(); REFERENCE_MEANS.len()];
    arms[0] = PriorEntry {
        n_prior: PRIOR_SAMPLES,
        mu_prior,
        l_bound,
    };
    PriorSpec::new(arms, 1.0).expect("optimal-arm prior is valid")
}

fn base(name: &str, prior: PriorSpec, policies: Vec<Policy>, horizon: u64) -> ExperimentConfig {
    ExperimentConfig {
        name: name.to_string(),
        instance: reference_instance(),
        prior,
        policies,
        schedule: DeltaSchedule::Linearized { epsilon: EPSILON },
        horizon,
        runs: RUNS,
        master_seed: MASTER_SEED,
        checkpoint_count: DEFAULT_CHECKPOINTS,
        output_path: format!("{name}.csv").into(),
    }
}

fn setting_name(prefix: &str, (shift, l): (f64, f64)) -> String {
    format!("{prefix}_shift{shift:.2}_L{l:.2}")
}

pub fn preset(which: Preset) -> Vec<ExperimentConfig> {
    let transfer = || vec![Policy::KlucbTransfer];
    match which {
        Preset::Sim1 => {
            let mut out = vec![base(
                "sim1_no_prior",
                PriorSpec::none(REFERENCE_MEANS.len()),
                transfer(),
                1_000_000,
            )];
            out.extend(SIM1_SETTINGS.iter().map(|&(shift, l)| {
                base(
                    &setting_name("sim1", (shift, l)),
                    shifted_prior(shift, l),
                    transfer(),
                    1_000_000,
                )
            }));
            out
        }
        Preset::Sim2 => vec![
            base(
                "sim2_no_prior",
                PriorSpec::none(REFERENCE_MEANS.len()),
                transfer(),
                10_000,
            ),
            base(
                "sim2_mildly_optimistic",
                optimal_arm_prior(SIM2_MILD.0, SIM2_MILD.1),
                transfer(),
                10_000,
            ),
            base(
                "sim2_pessimistic",
                optimal_arm_prior(SIM2_PESSIMISTIC.0, SIM2_PESSIMISTIC.1),
                transfer(),
                10_000,
            ),
        ],
        Preset::Sim3 => {
            let prior = shifted_prior(SIM3_SETTING.0, SIM3_SETTING.1);
            vec![
                base("sim3_klucb_transfer", prior.clone(), transfer(), 1_000_000),
                base(
                    "sim3_ast_ucb",
                    prior,
                    vec![Policy::AstUcb {
                        shift_l: SIM3_SHIFT_L,
                    }],
                    1_000_000,
                ),
            ]
        }
    }
}

pub fn preset_by_name(name: &str) -> Result<Vec<ExperimentConfig>> {
    Ok(preset(name.parse()?))
}
