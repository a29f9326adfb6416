//! Bandit instances, prior specifications and per-arm statistics.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::{SeedContract, StreamLabel};

/// Gaussian arms `N(means[k], sigma^2)` sharing one standard deviation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "InstanceRepr", into = "InstanceRepr")]
pub struct BanditInstance {
    means: Vec<f64>,
    sigma: f64,
}

#[derive(Serialize, Deserialize)]
struct InstanceRepr {
    means: Vec<f64>,
    sigma: f64,
}

impl TryFrom<InstanceRepr> for BanditInstance {
    type Error = Error;

    fn try_from(r: InstanceRepr) -> Result<Self> {
        BanditInstance::new(r.means, r.sigma)
    }
}

impl From<BanditInstance> for InstanceRepr {
    fn from(b: BanditInstance) -> Self {
        InstanceRepr {
            means: b.means,
            sigma: b.sigma,
        }
    }
}

impl BanditInstance {
    pub fn new(means: Vec<f64>, sigma: f64) -> Result<Self> {
        if means.is_empty() {
            return Err(Error::InvalidInstance("no arms".into()));
        }
        if let Some(k) = means.iter().position(|m| !m.is_finite()) {
            return Err(Error::InvalidInstance(format!(
                "mean of arm {k} is not finite"
            )));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidInstance(format!(
                "sigma must be positive and finite, got {sigma}"
            )));
        }
        Ok(Self { means, sigma })
    }

    pub fn means(&self) -> &[f64] {
        &self.means
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn num_arms(&self) -> usize {
        self.means.len()
    }

    pub fn optimal_mean(&self) -> f64 {
        self.means.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Every arm whose mean equals the optimum.
    pub fn optimal_arms(&self) -> Vec<usize> {
        let best = self.optimal_mean();
        (0..self.means.len())
            .filter(|&k| self.means[k] == best)
            .collect()
    }

    pub fn unique_optimal_arm(&self) -> Result<usize> {
        match self.optimal_arms().as_slice() {
            [k] => Ok(*k),
            many => Err(Error::MultipleOptimalArms(many.len())),
        }
    }

    pub fn gap(&self, arm: usize) -> f64 {
        self.optimal_mean() - self.means[arm]
    }

    pub fn gaps(&self) -> Vec<f64> {
        let best = self.optimal_mean();
        self.means.iter().map(|m| best - m).collect()
    }
}

/// Offline sample budget and transfer radius for one arm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PriorEntry {
    pub n_prior: u64,
    pub mu_prior: f64,
    pub l_bound: f64,
}

impl PriorEntry {
    pub fn empty() -> Self {
        Self {
            n_prior: 0,
            mu_prior: 0.0,
            l_bound: 0.0,
        }
    }
}

/// Source distributions `N(mu_prior, sigma_prior^2)` per arm, with transfer
/// radius `l_bound` and `n_prior` offline samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PriorRepr", into = "PriorRepr")]
pub struct PriorSpec {
    arms: Vec<PriorEntry>,
    sigma_prior: f64,
}

#[derive(Serialize, Deserialize)]
struct PriorRepr {
    sigma_prior: f64,
    arms: Vec<PriorEntry>,
}

impl TryFrom<PriorRepr> for PriorSpec {
    type Error = Error;

    fn try_from(r: PriorRepr) -> Result<Self> {
        PriorSpec::new(r.arms, r.sigma_prior)
    }
}

impl From<PriorSpec> for PriorRepr {
    fn from(p: PriorSpec) -> Self {
        PriorRepr {
            sigma_prior: p.sigma_prior,
            arms: p.arms,
        }
    }
}

impl PriorSpec {
    pub fn new(arms: Vec<PriorEntry>, sigma_prior: f64) -> Result<Self> {
        if !(sigma_prior.is_finite() && sigma_prior > 0.0) {
            return Err(Error::InvalidPrior(format!(
                "sigma_prior must be positive and finite, got {sigma_prior}"
            )));
        }
        for (k, e) in arms.iter().enumerate() {
            if !e.mu_prior.is_finite() {
                return Err(Error::InvalidPrior(format!("mu_prior of arm {k} is not finite")));
            }
            if !(e.l_bound.is_finite() && e.l_bound >= 0.0) {
                return Err(Error::InvalidPrior(format!(
                    "l_bound of arm {k} must be finite and non-negative, got {}",
                    e.l_bound
                )));
            }
        }
        Ok(Self { arms, sigma_prior })
    }

    /// No prior samples on any of `num_arms` arms.
    pub fn none(num_arms: usize) -> Self {
        Self {
            arms: vec![PriorEntry::empty(); num_arms],
            sigma_prior: 1.0,
        }
    }

    pub fn arms(&self) -> &[PriorEntry] {
        &self.arms
    }

    pub fn sigma_prior(&self) -> f64 {
        self.sigma_prior
    }

    pub fn num_arms(&self) -> usize {
        self.arms.len()
    }

    /// Same radii and source means, but every sample budget set to zero.
    pub fn without_samples(&self) -> Self {
        Self {
            arms: self
                .arms
                .iter()
                .map(|e| PriorEntry { n_prior: 0, ..*e })
                .collect(),
            sigma_prior: self.sigma_prior,
        }
    }

    /// Rejects a spec whose arm count differs from the instance.
    pub fn check_arity(&self, instance: &BanditInstance) -> Result<()> {
        if self.arms.len() != instance.num_arms() {
            return Err(Error::InvalidPrior(format!(
                "prior has {} arms but the instance has {}",
                self.arms.len(),
                instance.num_arms()
            )));
        }
        Ok(())
    }

    /// Arms with prior samples that violate `|mu_k - mu'_k| <= L_k`.
    /// Advisory only: a violated radius is a legal (if misleading) input.
    pub fn radius_violations(&self, instance: &BanditInstance) -> Vec<usize> {
        self.arms
            .iter()
            .zip(instance.means())
            .enumerate()
            .filter(|(_, (e, mu))| e.n_prior > 0 && (*mu - e.mu_prior).abs() > e.l_bound)
            .map(|(k, _)| k)
            .collect()
    }
}

/// Realized prior sample mean for one arm. `mu_hat_prior` is 0 when
/// `n_prior == 0` and must not be read in that case.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PriorSample {
    pub n_prior: u64,
    pub mu_hat_prior: f64,
}

/// The offline data a run starts from. Drawn once, never mutated.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorData {
    arms: Vec<PriorSample>,
}

impl PriorData {
    pub fn from_samples(arms: Vec<PriorSample>) -> Self {
        Self { arms }
    }

    pub fn arms(&self) -> &[PriorSample] {
        &self.arms
    }

    pub fn get(&self, arm: usize) -> PriorSample {
        self.arms[arm]
    }
}

/// Draws `n_prior` i.i.d. `N(mu_prior, sigma_prior^2)` samples per arm and keeps
/// their mean.
///
/// Panics if `seed` is not a prior-samples stream.
pub fn draw_prior_data(spec: &PriorSpec, seed: SeedContract) -> PriorData {
    assert_eq!(
        seed.stream_label,
        StreamLabel::PriorSamples,
        "prior data must be drawn from the prior-samples stream"
    );
    let mut rng = seed.rng();
    let sigma = spec.sigma_prior();
    let arms = spec
        .arms()
        .iter()
        .map(|e| {
            if e.n_prior == 0 {
                return PriorSample {
                    n_prior: 0,
                    mu_hat_prior: 0.0,
                };
            }
            let mut stats = ArmStats::default();
            for _ in 0..e.n_prior {
                let z: f64 = rng.sample(StandardNormal);
                stats.update(e.mu_prior + sigma * z);
            }
            PriorSample {
                n_prior: e.n_prior,
                mu_hat_prior: stats.mean,
            }
        })
        .collect();
    PriorData { arms }
}

/// Online pull count and running mean. `mean` is 0 while `pulls == 0`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ArmStats {
    pub pulls: u64,
    pub mean: f64,
}

impl ArmStats {
    pub fn update(&mut self, reward: f64) {
        debug_assert!(reward.is_finite());
        self.pulls += 1;
        self.mean += (reward - self.mean) / self.pulls as f64;
    }

    #[must_use]
    pub fn updated(mut self, reward: f64) -> Self {
        self.update(reward);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn spec(entries: &[(u64, f64, f64)], sigma_prior: f64) -> PriorSpec {
        PriorSpec::new(
            entries
                .iter()
                .map(|&(n_prior, mu_prior, l_bound)| PriorEntry {
                    n_prior,
                    mu_prior,
                    l_bound,
                })
                .collect(),
            sigma_prior,
        )
        .unwrap()
    }

    fn prior_seed(master: u64, run: u64) -> SeedContract {
        SeedContract::new(master, run, StreamLabel::PriorSamples)
    }

    #[test]
    fn instance_validation() {
        assert!(BanditInstance::new(vec![], 1.0).is_err());
        assert!(BanditInstance::new(vec![0.5], 0.0).is_err());
        assert!(BanditInstance::new(vec![0.5], f64::INFINITY).is_err());
        assert!(BanditInstance::new(vec![f64::NAN], 1.0).is_err());
        let b = BanditInstance::new(vec![0.2, 0.9, 0.9, 0.1], 1.0).unwrap();
        assert_eq!(b.optimal_mean(), 0.9);
        assert_eq!(b.optimal_arms(), vec![1, 2]);
        assert!(matches!(
            b.unique_optimal_arm(),
            Err(Error::MultipleOptimalArms(2))
        ));
        assert!((b.gap(3) - 0.8).abs() < 1e-15);
    }

    #[test]
    fn prior_validation() {
        assert!(PriorSpec::new(vec![PriorEntry::empty()], 0.0).is_err());
        let neg = PriorEntry {
            n_prior: 3,
            mu_prior: 0.0,
            l_bound: -0.1,
        };
        assert!(PriorSpec::new(vec![neg], 1.0).is_err());
        let b = BanditInstance::new(vec![1.0, 0.5], 1.0).unwrap();
        assert!(spec(&[(0, 0.0, 0.0)], 1.0).check_arity(&b).is_err());
        let s = spec(&[(10, 1.3, 0.2), (10, 0.55, 0.1)], 1.0);
        assert_eq!(s.radius_violations(&b), vec![0]);
    }

    #[test]
    fn no_prior_gives_sentinels() {
        let s = spec(&[(0, 0.3, 0.1), (0, 0.9, 0.0)], 1.0);
        let d = draw_prior_data(&s, prior_seed(1, 0));
        for a in d.arms() {
            assert_eq!(a.n_prior, 0);
            assert_eq!(a.mu_hat_prior, 0.0);
        }
    }

    #[test]
    fn degenerate_noise_gives_source_mean() {
        let s = spec(&[(5, 0.7, 0.0)], 1e-12);
        let d = draw_prior_data(&s, prior_seed(9, 3));
        assert!((d.get(0).mu_hat_prior - 0.7).abs() <= 1e-11);
    }

    #[test]
    fn prior_draw_replays_bit_identically() {
        let s = spec(&[(1000, 0.55, 0.1), (1000, 0.95, 0.1)], 1.0);
        let a = draw_prior_data(&s, prior_seed(2024, 17));
        let b = draw_prior_data(&s, prior_seed(2024, 17));
        for (x, y) in a.arms().iter().zip(b.arms()) {
            assert_eq!(x.mu_hat_prior.to_bits(), y.mu_hat_prior.to_bits());
        }
        let c = draw_prior_data(&s, prior_seed(2024, 18));
        assert_ne!(a, c);
    }

    #[test]
    #[should_panic(expected = "prior-samples stream")]
    fn prior_draw_rejects_other_streams() {
        let s = spec(&[(3, 0.0, 0.0)], 1.0);
        draw_prior_data(&s, SeedContract::new(1, 0, StreamLabel::Rewards));
    }

    #[test]
    fn prior_mean_concentrates() {
        // 1000 seeds, n_prior = 10^4: the mean of the sample means sits within
        // 4 sigma'/sqrt(1000 * 10^4) of mu'.
        let mu = 0.55;
        let s = spec(&[(10_000, mu, 0.0)], 1.0);
        let runs = 1000u64;
        let total: f64 = (0..runs)
            .map(|r| draw_prior_data(&s, prior_seed(77, r)).get(0).mu_hat_prior)
            .sum();
        let grand = total / runs as f64;
        let band = 4.0 / ((runs * 10_000) as f64).sqrt();
        assert!((grand - mu).abs() <= band, "{grand} vs {mu} +- {band}");
    }

    #[test]
    fn update_examples() {
        let s = ArmStats::default().updated(3.0);
        assert_eq!(s, ArmStats { pulls: 1, mean: 3.0 });
        let s = s.updated(1.0);
        assert_eq!(s, ArmStats { pulls: 2, mean: 2.0 });
    }

    #[test]
    fn million_constant_updates_stay_exact() {
        let mut s = ArmStats::default();
        for _ in 0..1_000_000 {
            s.update(1.0);
        }
        assert_eq!(s.pulls, 1_000_000);
        assert!((s.mean - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn long_stream_matches_compensated_sum() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut s = ArmStats::default();
        // Kahan-summed reference.
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        let n = 1_000_000;
        for _ in 0..n {
            let z: f64 = rand::Rng::sample(&mut rng, StandardNormal);
            let x = 0.7 + z;
            s.update(x);
            let y = x - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        let reference = sum / n as f64;
        assert!((s.mean - reference).abs() <= 1e-12 * reference.abs().max(1.0));
    }

    proptest! {
        #[test]
        fn running_mean_matches_arithmetic_mean(
            xs in prop::collection::vec(-1e3f64..1e3, 1..1000)
        ) {
            let mut s = ArmStats::default();
            for &x in &xs {
                s.update(x);
            }
            let direct = xs.iter().sum::<f64>() / xs.len() as f64;
            let scale = xs.iter().map(|x| x.abs()).fold(1.0, f64::max);
            prop_assert_eq!(s.pulls, xs.len() as u64);
            prop_assert!((s.mean - direct).abs() <= 1e-12 * scale);
        }
    }
}
