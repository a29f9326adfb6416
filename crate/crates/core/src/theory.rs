//! Closed-form evaluators for the transfer-aware regret bounds.
//!
//! Bounds are leading terms only. The `o(ln T)` part of the lower bound and
//! the `O((ln T)^{2/3})` part of the upper bound are not evaluated.

use crate::bandit::{BanditInstance, PriorSpec};
use crate::error::{Error, Result};
use crate::normal::{std_normal_cdf, std_normal_pdf};

/// Everything the per-arm bounds depend on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundInputs {
    pub mu_star: f64,
    pub mu_k: f64,
    pub sigma: f64,
    pub n_prior: u64,
    pub mu_prior: f64,
    pub l_bound: f64,
    pub sigma_prior: f64,
    pub horizon: u64,
}

/// Gaussian `K_inf` under the mean-distance constraint `|mu - mu'| <= L`:
/// the smallest `KL(N(mu_prior, s'^2), N(m, s'^2))` over source means `m`
/// within `l_bound` of `mu_tilde`.
pub fn kinf_gaussian(mu_prior: f64, mu_tilde: f64, l_bound: f64, sigma_prior: f64) -> f64 {
    let d = ((mu_tilde - mu_prior).abs() - l_bound).max(0.0);
    d * d / (2.0 * sigma_prior * sigma_prior)
}

/// `N' (mu_star - mu' - L)_+^2 / (2 sigma'^2)`: information the prior already
/// carries against arm `k` being optimal.
pub fn prior_information(inp: &BoundInputs) -> f64 {
    let d = (inp.mu_star - inp.mu_prior - inp.l_bound).max(0.0);
    inp.n_prior as f64 * d * d / (2.0 * inp.sigma_prior * inp.sigma_prior)
}

/// Leading term of the minimal expected number of pulls of a suboptimal arm:
/// `2 sigma^2 / gap^2 * (ln T - prior_information)_+`.
pub fn pulls_lower_bound(inp: &BoundInputs) -> Result<f64> {
    let gap = inp.mu_star - inp.mu_k;
    if !(gap > 0.0) {
        return Err(Error::UndefinedGap {
            mu_star: inp.mu_star,
            mu_k: inp.mu_k,
        });
    }
    if inp.horizon == 0 {
        return Err(Error::InvalidArgument("horizon must be at least 1".into()));
    }
    let budget = ((inp.horizon as f64).ln() - prior_information(inp)).max(0.0);
    Ok(2.0 * inp.sigma * inp.sigma / (gap * gap) * budget)
}

/// Leading term of the KL-UCB-Transfer pull-count guarantee. It coincides with
/// [`pulls_lower_bound`]; the two bounds differ only in lower-order terms.
pub fn pulls_upper_bound(inp: &BoundInputs) -> Result<f64> {
    pulls_lower_bound(inp)
}

/// Per-arm bound inputs for every suboptimal arm, keyed by arm index.
pub fn suboptimal_bound_inputs(
    instance: &BanditInstance,
    prior: &PriorSpec,
    horizon: u64,
) -> Result<Vec<(usize, BoundInputs)>> {
    prior.check_arity(instance)?;
    let best = instance.unique_optimal_arm()?;
    let mu_star = instance.means()[best];
    Ok(instance
        .means()
        .iter()
        .zip(prior.arms())
        .enumerate()
        .filter(|&(k, _)| k != best)
        .map(|(k, (&mu_k, e))| {
            (
                k,
                BoundInputs {
                    mu_star,
                    mu_k,
                    sigma: instance.sigma(),
                    n_prior: e.n_prior,
                    mu_prior: e.mu_prior,
                    l_bound: e.l_bound,
                    sigma_prior: prior.sigma_prior(),
                    horizon,
                },
            )
        })
        .collect())
}

/// Asymptotic regret floor: sum over suboptimal arms of `gap * pulls_lower_bound`.
pub fn regret_lower_bound(instance: &BanditInstance, prior: &PriorSpec, horizon: u64) -> Result<f64> {
    let mut total = 0.0;
    for (_, inp) in suboptimal_bound_inputs(instance, prior, horizon)? {
        total += (inp.mu_star - inp.mu_k) * pulls_lower_bound(&inp)?;
    }
    Ok(total)
}

/// `I(beta, delta) = int_0^delta Phi(sqrt(2(delta - t)) - beta) dt` in closed
/// form: the expected positive part of the budget left after the prior penalty.
pub fn budget_integral(beta: f64, delta: f64) -> Result<f64> {
    if !(delta >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "delta must be non-negative, got {delta}"
        )));
    }
    let r = (2.0 * delta).sqrt();
    let b2 = beta * beta;
    Ok(0.5 * (2.0 * delta - b2 - 1.0) * std_normal_cdf(r - beta)
        + 0.5 * (b2 + 1.0) * std_normal_cdf(-beta)
        + 0.5 * (r + beta) * std_normal_pdf(r - beta)
        - 0.5 * beta * std_normal_pdf(beta))
}

/// `E[exp((W - a)_+^2 / 2)] = Phi(a) + phi(a) / a` for standard normal `W`.
pub fn hardship_constant(a: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "scale must be positive, got {a}"
        )));
    }
    Ok(std_normal_cdf(a) + std_normal_pdf(a) / a)
}

/// The bound `1 + sigma' / (eta sqrt(2 pi))` on [`hardship_constant`] at
/// `a = eta sqrt(N') / sigma'`, valid for every `N' >= 1`.
pub fn hardship_envelope(eta: f64, sigma_prior: f64) -> f64 {
    1.0 + sigma_prior / (eta * (2.0 * std::f64::consts::PI).sqrt())
}

/// Hardship margin of a prior on the optimal arm: `L + mu' - mu_star`, the
/// distance by which the source envelope clears the true optimum.
pub fn hardship_margin(mu_star: f64, mu_prior: f64, l_bound: f64) -> f64 {
    l_bound + mu_prior - mu_star
}

/// `a = eta sqrt(N') / sigma'` with `eta` from [`hardship_margin`].
pub fn hardship_scale(mu_star: f64, mu_prior: f64, l_bound: f64, n_prior: u64, sigma_prior: f64) -> f64 {
    hardship_margin(mu_star, mu_prior, l_bound) * (n_prior as f64).sqrt() / sigma_prior
}
