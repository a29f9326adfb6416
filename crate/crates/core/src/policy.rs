//! Arm-selection rules.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bandit::{ArmStats, PriorData, PriorSpec};
use crate::error::{Error, Result};
use crate::index::{index_closed_form, DeltaSchedule, IndexInputs};

/// What a policy sees at round `round`.
#[derive(Debug, Clone, Copy)]
pub struct PolicyState<'a> {
    pub stats: &'a [ArmStats],
    pub prior: &'a PriorData,
    pub spec: &'a PriorSpec,
    /// Target reward standard deviation.
    pub sigma: f64,
    pub schedule: DeltaSchedule,
    pub round: u64,
}

impl PolicyState<'_> {
    pub fn num_arms(&self) -> usize {
        self.stats.len()
    }

    pub fn delta(&self) -> Result<f64> {
        self.schedule.delta_at(self.round)
    }

    /// Arguments of the transfer index for `arm` at the current round.
    pub fn index_inputs(&self, arm: usize, delta: f64) -> IndexInputs {
        let s = self.stats[arm];
        let p = self.prior.get(arm);
        IndexInputs::from_counts(
            s.pulls,
            s.mean,
            self.sigma,
            p.n_prior,
            p.mu_hat_prior,
            self.spec.arms()[arm].l_bound,
            self.spec.sigma_prior(),
            delta,
        )
    }

    /// KL-UCB-Transfer index of `arm`; infinite without any data.
    pub fn transfer_index(&self, arm: usize, delta: f64) -> f64 {
        index_closed_form(&self.index_inputs(arm, delta))
    }

    /// Pooled-mean UCB index with shift; infinite without any data.
    pub fn pooled_index(&self, arm: usize, delta: f64, shift_l: f64) -> f64 {
        let s = self.stats[arm];
        let p = self.prior.get(arm);
        let n = s.pulls + p.n_prior;
        if n == 0 {
            return f64::INFINITY;
        }
        let n = n as f64;
        let online = if s.pulls > 0 { s.pulls as f64 * s.mean } else { 0.0 };
        let offline = if p.n_prior > 0 {
            p.n_prior as f64 * p.mu_hat_prior
        } else {
            0.0
        };
        (online + offline) / n + shift_l + (2.0 * self.sigma * self.sigma * delta / n).sqrt()
    }

    /// First arm, in ascending order, with neither pulls nor prior samples.
    pub fn first_uninformed_arm(&self) -> Option<usize> {
        (0..self.num_arms()).find(|&a| self.stats[a].pulls == 0 && self.prior.get(a).n_prior == 0)
    }
}

/// Index of the largest score, ties resolved uniformly with `tie_rng`.
///
/// The generator is consumed only when at least two scores tie exactly.
pub fn argmax_random_ties<R: Rng + ?Sized>(scores: &[f64], tie_rng: &mut R) -> usize {
    let mut best = f64::NEG_INFINITY;
    let mut first = 0;
    let mut ties = 0usize;
    for (a, &v) in scores.iter().enumerate() {
        if v > best {
            best = v;
            first = a;
            ties = 1;
        } else if v == best {
            ties += 1;
        }
    }
    if ties <= 1 {
        return first;
    }
    let pick = tie_rng.random_range(0..ties);
    scores
        .iter()
        .enumerate()
        .filter(|(_, &v)| v == best)
        .nth(pick)
        .map(|(a, _)| a)
        .unwrap_or(first)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Policy {
    /// Transfer index built from online and prior data.
    KlucbTransfer,
    /// The transfer index with every prior budget forced to zero.
    KlucbClassic,
    /// Episodic-transfer UCB baseline: prior and online samples pooled into one
    /// mean, the shift budget added once, width `sqrt(2 sigma^2 delta / (N + N'))`.
    AstUcb { shift_l: f64 },
}

impl Policy {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Policy::AstUcb { shift_l } if !(shift_l.is_finite() && shift_l >= 0.0) => {
                Err(Error::InvalidConfig(format!(
                    "ast_ucb shift_l must be finite and non-negative, got {shift_l}"
                )))
            }
            _ => Ok(()),
        }
    }

    /// The prior this policy actually plays with.
    pub fn effective_prior(&self, spec: &PriorSpec) -> PriorSpec {
        match self {
            Policy::KlucbClassic => spec.without_samples(),
            _ => spec.clone(),
        }
    }

    pub fn id(&self) -> String {
        self.to_string()
    }

    /// Chooses the arm to pull at `state.round`. `scratch` is reused between
    /// rounds to hold the per-arm scores.
    pub fn select<R: Rng + ?Sized>(
        &self,
        state: &PolicyState<'_>,
        tie_rng: &mut R,
        scratch: &mut Vec<f64>,
    ) -> Result<usize> {
        if let Some(a) = state.first_uninformed_arm() {
            return Ok(a);
        }
        let delta = state.delta()?;
        scratch.clear();
        match *self {
            Policy::KlucbTransfer | Policy::KlucbClassic => {
                scratch.extend((0..state.num_arms()).map(|a| state.transfer_index(a, delta)))
            }
            Policy::AstUcb { shift_l } => scratch
                .extend((0..state.num_arms()).map(|a| state.pooled_index(a, delta, shift_l))),
        }
        Ok(argmax_random_ties(scratch, tie_rng))
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Policy::KlucbTransfer => f.write_str("klucb_transfer"),
            Policy::KlucbClassic => f.write_str("klucb_classic"),
            Policy::AstUcb { shift_l } => write!(f, "ast_ucb({shift_l})"),
        }
    }
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let policy = match s {
            "klucb_transfer" => Policy::KlucbTransfer,
            "klucb_classic" => Policy::KlucbClassic,
            _ => {
                let shift = s
                    .strip_prefix("ast_ucb(")
                    .and_then(|r| r.strip_suffix(')'))
                    .and_then(|v| v.trim().parse::<f64>().ok())
                    .ok_or_else(|| Error::UnknownPolicy(s.to_string()))?;
                Policy::AstUcb { shift_l: shift }
            }
        };
        policy.validate()?;
        Ok(policy)
    }
}

/// Selection with the transfer index. Convenience wrapper over
/// [`Policy::select`].
pub fn select_arm_klucb_transfer<R: Rng + ?Sized>(state: &PolicyState<'_>, tie_rng: &mut R) -> Result<usize> {
    Policy::KlucbTransfer.select(state, tie_rng, &mut Vec::new())
}

pub fn select_arm_ast_ucb<R: Rng + ?Sized>(
    state: &PolicyState<'_>,
    shift_l: f64,
    tie_rng: &mut R,
) -> Result<usize> {
    Policy::AstUcb { shift_l }.select(state, tie_rng, &mut Vec::new())
}
