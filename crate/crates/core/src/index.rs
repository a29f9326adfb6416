//! Exploration schedules, the prior penalty and the transfer index.
//!
//! For one arm with `N` online pulls (mean `mu_hat`, noise `sigma`) and `N'`
//! prior samples (mean `mu_hat'`, noise `sigma'`, radius `L`) the index is the
//! largest `q` with
//!
//! ```text
//! alpha (q - mu_hat)_+^2 + beta (q - s)_+^2 <= delta_t
//! alpha = N / (2 sigma^2),  beta = N' / (2 sigma'^2),  s = mu_hat' + L
//! ```
//!
//! [`index_closed_form`] evaluates it in O(1); [`index_bisection_oracle`]
//! solves the same constraint numerically and is kept as a cross-check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `delta_t`, the confidence budget at round `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DeltaSchedule {
    /// `ln t + 3 ln(max(1, ln t))`
    Theory,
    /// `(1 + epsilon) ln t`
    Linearized { epsilon: f64 },
}

impl DeltaSchedule {
    pub fn linearized(epsilon: f64) -> Result<Self> {
        let s = DeltaSchedule::Linearized { epsilon };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            DeltaSchedule::Theory => Ok(()),
            DeltaSchedule::Linearized { epsilon } if epsilon.is_finite() && epsilon > 0.0 => {
                Ok(())
            }
            DeltaSchedule::Linearized { epsilon } => Err(Error::InvalidSchedule(format!(
                "epsilon must be positive and finite, got {epsilon}"
            ))),
        }
    }

    pub fn delta_at(&self, t: u64) -> Result<f64> {
        if t == 0 {
            return Err(Error::ZeroRound);
        }
        let ln_t = (t as f64).ln();
        Ok(match *self {
            DeltaSchedule::Theory => ln_t + 3.0 * ln_t.max(1.0).ln(),
            DeltaSchedule::Linearized { epsilon } => (1.0 + epsilon) * ln_t,
        })
    }
}

/// `beta * (q - shifted_prior)_+^2`: the confidence budget spent by claiming a
/// mean `q` above the prior's upper envelope.
#[inline]
pub fn prior_penalty(q: f64, beta: f64, shifted_prior: f64) -> f64 {
    let excess = (q - shifted_prior).max(0.0);
    beta * excess * excess
}

/// Arguments of the index for one arm at one round.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexInputs {
    /// `N_a(t) / (2 sigma^2)`
    pub alpha: f64,
    /// Online empirical mean; ignored when `alpha == 0`.
    pub mu_hat: f64,
    /// `N'_a / (2 sigma'^2)`
    pub beta: f64,
    /// `mu_hat'_a + L_a`; ignored when `beta == 0`.
    pub shifted_prior: f64,
    pub delta: f64,
}

impl IndexInputs {
    #[allow(clippy::too_many_arguments)]
    pub fn from_counts(
        pulls: u64,
        mu_hat: f64,
        sigma: f64,
        n_prior: u64,
        mu_hat_prior: f64,
        l_bound: f64,
        sigma_prior: f64,
        delta: f64,
    ) -> Self {
        Self {
            alpha: pulls as f64 / (2.0 * sigma * sigma),
            mu_hat,
            beta: n_prior as f64 / (2.0 * sigma_prior * sigma_prior),
            shifted_prior: mu_hat_prior + l_bound,
            delta,
        }
    }

    /// Left-hand side of the index constraint.
    pub fn budget_used(&self, q: f64) -> f64 {
        let online = if self.alpha > 0.0 {
            let d = (q - self.mu_hat).max(0.0);
            self.alpha * d * d
        } else {
            0.0
        };
        let prior = if self.beta > 0.0 {
            prior_penalty(q, self.beta, self.shifted_prior)
        } else {
            0.0
        };
        online + prior
    }

    /// Smallest defined anchor: the constraint costs nothing at or below it.
    pub fn lowest_anchor(&self) -> Option<f64> {
        match (self.alpha > 0.0, self.beta > 0.0) {
            (true, true) => Some(self.mu_hat.min(self.shifted_prior)),
            (true, false) => Some(self.mu_hat),
            (false, true) => Some(self.shifted_prior),
            (false, false) => None,
        }
    }

    pub fn is_unbounded(&self) -> bool {
        self.alpha <= 0.0 && self.beta <= 0.0
    }
}

/// Largest `q` satisfying the index constraint.
///
/// Returns `f64::INFINITY` when both rates are zero (no data at all); the
/// caller decides what an unbounded index means.
pub fn index_closed_form(inp: &IndexInputs) -> f64 {
    let IndexInputs {
        alpha,
        mu_hat: mu,
        beta,
        shifted_prior: s,
        delta,
    } = *inp;
    let delta = delta.max(0.0);
    match (alpha > 0.0, beta > 0.0) {
        (false, false) => f64::INFINITY,
        (true, false) => mu + (delta / alpha).sqrt(),
        (false, true) => s + (delta / beta).sqrt(),
        (true, true) => {
            let prior_reach = s + (delta / beta).sqrt();
            if mu >= prior_reach {
                return prior_reach;
            }
            let online_reach = mu + (delta / alpha).sqrt();
            if s >= online_reach {
                return online_reach;
            }
            let d = mu - s;
            let total = alpha + beta;
            let disc = (total * delta - alpha * beta * d * d).max(0.0);
            (alpha * mu + beta * s + disc.sqrt()) / total
        }
    }
}

/// Default residual tolerance of [`index_bisection_oracle`].
pub fn default_tolerance(delta: f64) -> f64 {
    1e-12 * delta.abs().max(1.0)
}

const MAX_BISECTIONS: usize = 200;

/// Solves the index constraint by monotone bisection.
///
/// The bracket starts at `[lo, lo + sqrt(delta / (alpha + beta))]`, where `lo`
/// is the lowest anchor, and doubles until the constraint is violated at the
/// upper end. Bisection keeps `budget_used(lo) <= delta < budget_used(hi)` and
/// stops when the bracket can no longer be split.
pub fn index_bisection_oracle(inp: &IndexInputs, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let anchor = inp.lowest_anchor().ok_or(Error::UnboundedIndex)?;
    let delta = inp.delta;
    if !(delta >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "delta must be non-negative, got {delta}"
        )));
    }
    if delta == 0.0 {
        return Ok(anchor);
    }

    let g = |q: f64| inp.budget_used(q);
    let mut lo = anchor;
    let mut width = (delta / (inp.alpha + inp.beta)).sqrt();
    let mut hi = lo + width;
    let mut expansions = 0;
    while g(hi) <= delta {
        lo = hi;
        width *= 2.0;
        hi = anchor + width;
        expansions += 1;
        if expansions > MAX_BISECTIONS {
            return Err(Error::NonConvergence {
                iterations: expansions,
                residual: f64::INFINITY,
            });
        }
    }

    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) <= delta {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let residual = (g(lo) - delta).abs();
    if residual <= tol {
        Ok(lo)
    } else {
        Err(Error::NonConvergence {
            iterations: MAX_BISECTIONS,
            residual,
        })
    }
}
