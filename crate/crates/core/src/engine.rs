//! Seeded Monte-Carlo regret simulation.
//!
//! A run draws its prior data from the prior-samples stream, then plays
//! `t = 1..=T`: select an arm, draw `N(mu_a, sigma^2)` from the rewards stream,
//! update the arm's statistics. Regret is pseudo-regret, `sum_k N_k(t) gap_k`,
//! recorded at the checkpoints.
//!
//! Replications run in parallel over `(policy, run)` pairs. Each pair owns its
//! streams, so results do not depend on the thread count or on scheduling.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::bandit::{draw_prior_data, ArmStats, BanditInstance, PriorData, PriorSpec};
use crate::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::index::DeltaSchedule;
use crate::policy::{Policy, PolicyState};
use crate::seed::{SeedContract, StreamLabel};

/// One realization of the cumulative pseudo-regret.
#[derive(Debug, Clone, PartialEq)]
pub struct RegretTrajectory {
    pub checkpoints: Vec<u64>,
    pub cum_regret: Vec<f64>,
    pub run_index: u64,
    pub policy_id: String,
    /// Pull counts per arm at the horizon.
    pub pulls: Vec<u64>,
}

/// Mean and standard error across runs at each checkpoint. `sem` is 0 when
/// `runs == 1` (see [`AggregateCurve::sem_defined`]).
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateCurve {
    pub checkpoints: Vec<u64>,
    pub mean_regret: Vec<f64>,
    pub sem: Vec<f64>,
    pub runs: u64,
}

impl AggregateCurve {
    pub fn sem_defined(&self) -> bool {
        self.runs >= 2
    }

    pub fn final_mean(&self) -> f64 {
        *self.mean_regret.last().expect("curve has at least one checkpoint")
    }

    pub fn final_sem(&self) -> f64 {
        *self.sem.last().expect("curve has at least one checkpoint")
    }
}

/// A single simulation in progress. Exposes the per-round machinery so
/// diagnostics can inspect indices between pulls.
#[derive(Debug, Clone)]
pub struct Run {
    instance: BanditInstance,
    policy: Policy,
    spec: PriorSpec,
    prior: PriorData,
    schedule: DeltaSchedule,
    stats: Vec<ArmStats>,
    gaps: Vec<f64>,
    rewards: ChaCha8Rng,
    ties: ChaCha8Rng,
    round: u64,
    scratch: Vec<f64>,
}

impl Run {
    pub fn new(
        instance: &BanditInstance,
        prior_spec: &PriorSpec,
        policy: Policy,
        schedule: DeltaSchedule,
        master_seed: u64,
        run_index: u64,
    ) -> Result<Self> {
        prior_spec.check_arity(instance)?;
        policy.validate()?;
        schedule.validate()?;
        let spec = policy.effective_prior(prior_spec);
        let seed = SeedContract::new(master_seed, run_index, StreamLabel::PriorSamples);
        let prior = draw_prior_data(&spec, seed);
        Ok(Self {
            instance: instance.clone(),
            policy,
            spec,
            prior,
            schedule,
            stats: vec![ArmStats::default(); instance.num_arms()],
            gaps: instance.gaps(),
            rewards: seed.with_label(StreamLabel::Rewards).rng(),
            ties: seed.with_label(StreamLabel::TieBreaks).rng(),
            round: 1,
            scratch: Vec::with_capacity(instance.num_arms()),
        })
    }

    /// The round about to be played.
    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn stats(&self) -> &[ArmStats] {
        &self.stats
    }

    pub fn prior(&self) -> &PriorData {
        &self.prior
    }

    pub fn pulls(&self) -> Vec<u64> {
        self.stats.iter().map(|s| s.pulls).collect()
    }

    /// `sum_k N_k gap_k` over the rounds played so far.
    pub fn pseudo_regret(&self) -> f64 {
        self.stats
            .iter()
            .zip(&self.gaps)
            .map(|(s, g)| s.pulls as f64 * g)
            .sum()
    }

    pub fn state(&self) -> PolicyState<'_> {
        PolicyState {
            stats: &self.stats,
            prior: &self.prior,
            spec: &self.spec,
            sigma: self.instance.sigma(),
            schedule: self.schedule,
            round: self.round,
        }
    }

    /// Transfer index of `arm` at the current round.
    pub fn transfer_index(&self, arm: usize) -> Result<f64> {
        let state = self.state();
        Ok(state.transfer_index(arm, state.delta()?))
    }

    pub fn select(&mut self) -> Result<usize> {
        let state = PolicyState {
            stats: &self.stats,
            prior: &self.prior,
            spec: &self.spec,
            sigma: self.instance.sigma(),
            schedule: self.schedule,
            round: self.round,
        };
        self.policy.select(&state, &mut self.ties, &mut self.scratch)
    }

    /// Plays `arm` for the current round and returns the observed reward.
    pub fn pull(&mut self, arm: usize) -> f64 {
        let z: f64 = self.rewards.sample(StandardNormal);
        let reward = self.instance.means()[arm] + self.instance.sigma() * z;
        self.stats[arm].update(reward);
        self.round += 1;
        reward
    }

    pub fn step(&mut self) -> Result<usize> {
        let arm = self.select()?;
        self.pull(arm);
        Ok(arm)
    }
}

fn check_checkpoints(checkpoints: &[u64], horizon: u64) -> Result<()> {
    if checkpoints.last() != Some(&horizon) {
        return Err(Error::InvalidArgument(
            "checkpoints must end at the horizon".into(),
        ));
    }
    if checkpoints[0] < 1 || checkpoints.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "checkpoints must be strictly ascending and start at 1 or later".into(),
        ));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn run_single(
    instance: &BanditInstance,
    prior_spec: &PriorSpec,
    policy: Policy,
    schedule: DeltaSchedule,
    horizon: u64,
    checkpoints: &[u64],
    master_seed: u64,
    run_index: u64,
) -> Result<RegretTrajectory> {
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    check_checkpoints(checkpoints, horizon)?;
    let mut run = Run::new(instance, prior_spec, policy, schedule, master_seed, run_index)?;
    let mut cum_regret = Vec::with_capacity(checkpoints.len());
    let mut next = checkpoints.iter().peekable();
    for t in 1..=horizon {
        run.step()?;
        if next.peek() == Some(&&t) {
            cum_regret.push(run.pseudo_regret());
            next.next();
        }
    }
    Ok(RegretTrajectory {
        checkpoints: checkpoints.to_vec(),
        cum_regret,
        run_index,
        policy_id: policy.id(),
        pulls: run.pulls(),
    })
}

/// Up to `count` geometrically spaced distinct rounds in `1..=horizon`,
/// always including both ends. When `horizon <= count` every round is kept.
pub fn checkpoint_grid(horizon: u64, count: usize) -> Result<Vec<u64>> {
    if horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    if count < 2 {
        return Err(Error::InvalidArgument(format!(
            "checkpoint count must be at least 2, got {count}"
        )));
    }
    if horizon <= count as u64 {
        return Ok((1..=horizon).collect());
    }
    let mut grid = Vec::with_capacity(count);
    grid.push(1u64);
    let mut cur = 1u64;
    for i in 1..count - 1 {
        let steps_left = (count - i) as f64;
        let ideal = cur as f64 * (horizon as f64 / cur as f64).powf(1.0 / steps_left);
        let room = horizon - (count - 1 - i) as u64;
        cur = (ideal.round() as u64).max(cur + 1).min(room);
        grid.push(cur);
    }
    grid.push(horizon);
    Ok(grid)
}

/// Mean and standard error across trajectories sharing one checkpoint grid.
pub fn aggregate(trajectories: &[RegretTrajectory]) -> Result<AggregateCurve> {
    let first = trajectories
        .first()
        .ok_or_else(|| Error::InvalidArgument("nothing to aggregate".into()))?;
    if trajectories.iter().any(|t| t.checkpoints != first.checkpoints) {
        return Err(Error::InvalidArgument(
            "trajectories use different checkpoints".into(),
        ));
    }
    let n = trajectories.len();
    let m = first.checkpoints.len();
    let mut mean_regret = Vec::with_capacity(m);
    let mut sem = Vec::with_capacity(m);
    for j in 0..m {
        let mean = trajectories.iter().map(|t| t.cum_regret[j]).sum::<f64>() / n as f64;
        let s = if n >= 2 {
            let ss: f64 = trajectories
                .iter()
                .map(|t| {
                    let d = t.cum_regret[j] - mean;
                    d * d
                })
                .sum();
            (ss / (n - 1) as f64).sqrt() / (n as f64).sqrt()
        } else {
            0.0
        };
        mean_regret.push(mean);
        sem.push(s);
    }
    Ok(AggregateCurve {
        checkpoints: first.checkpoints.clone(),
        mean_regret,
        sem,
        runs: n as u64,
    })
}

/// Every `(policy, run)` trajectory of an experiment, keyed by policy id and
/// ordered by run index.
pub fn run_replications(config: &ExperimentConfig) -> Result<BTreeMap<String, Vec<RegretTrajectory>>> {
    config.validate()?;
    let checkpoints = checkpoint_grid(config.horizon, config.checkpoint_count)?;
    let jobs: Vec<(Policy, u64)> = config
        .policies
        .iter()
        .flat_map(|&p| (0..config.runs).map(move |r| (p, r)))
        .collect();
    let results: Vec<RegretTrajectory> = jobs
        .par_iter()
        .map(|&(policy, r)| {
            run_single(
                &config.instance,
                &config.prior,
                policy,
                config.schedule,
                config.horizon,
                &checkpoints,
                config.master_seed,
                r,
            )
        })
        .collect::<Result<_>>()?;
    let mut out: BTreeMap<String, Vec<RegretTrajectory>> = BTreeMap::new();
    for t in results {
        out.entry(t.policy_id.clone()).or_default().push(t);
    }
    Ok(out)
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<BTreeMap<String, AggregateCurve>> {
    run_replications(config)?
        .into_iter()
        .map(|(id, runs)| Ok((id, aggregate(&runs)?)))
        .collect()
}
