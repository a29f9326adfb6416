//! Experiment description, stored as one JSON object per file.
//!
//! ```json
//! {
//!   "name": "sim3_klucb_transfer",
//!   "instance": { "means": [1.0, 0.9, 0.8, 0.7, 0.6, 0.5], "sigma": 1.0 },
//!   "prior": {
//!     "sigma_prior": 1.0,
//!     "arms": [ { "n_prior": 1000, "mu_prior": 1.05, "l_bound": 0.1 }, ... ]
//!   },
//!   "policies": [ { "kind": "klucb_transfer" }, { "kind": "ast_ucb", "shift_l": 0.1 } ],
//!   "schedule": { "kind": "linearized", "epsilon": 0.05 },
//!   "horizon": 1000000,
//!   "runs": 100,
//!   "master_seed": 20250101,
//!   "checkpoint_count": 200,
//!   "output_path": "sim3_klucb_transfer.csv"
//! }
//! ```

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::bandit::{BanditInstance, PriorSpec};
use crate::error::{Error, Result};
use crate::index::DeltaSchedule;
use crate::policy::Policy;

pub const DEFAULT_CHECKPOINTS: usize = 200;

fn default_checkpoints() -> usize {
    DEFAULT_CHECKPOINTS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub name: String,
    pub instance: BanditInstance,
    pub prior: PriorSpec,
    pub policies: Vec<Policy>,
    pub schedule: DeltaSchedule,
    pub horizon: u64,
    pub runs: u64,
    pub master_seed: u64,
    #[serde(default = "default_checkpoints")]
    pub checkpoint_count: usize,
    pub output_path: PathBuf,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.prior.check_arity(&self.instance)?;
        self.schedule.validate()?;
        if self.policies.is_empty() {
            return Err(Error::InvalidConfig("no policies".into()));
        }
        let mut ids = BTreeSet::new();
        for p in &self.policies {
            p.validate()?;
            if !ids.insert(p.id()) {
                return Err(Error::InvalidConfig(format!("policy `{p}` listed twice")));
            }
        }
        if self.horizon == 0 {
            return Err(Error::InvalidConfig("horizon must be at least 1".into()));
        }
        if self.runs == 0 {
            return Err(Error::InvalidConfig("runs must be at least 1".into()));
        }
        if self.checkpoint_count < 2 {
            return Err(Error::InvalidConfig(
                "checkpoint_count must be at least 2".into(),
            ));
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let config = Self::from_json(&text).map_err(|source| Error::Json {
            path: path.to_path_buf(),
            source,
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bandit::PriorEntry;

    fn sample() -> ExperimentConfig {
        ExperimentConfig {
            name: "demo".into(),
            instance: BanditInstance::new(vec![1.0, 0.5], 1.0).unwrap(),
            prior: PriorSpec::new(
                vec![
                    PriorEntry {
                        n_prior: 10,
                        mu_prior: 1.1,
                        l_bound: 0.2,
                    },
                    PriorEntry::empty(),
                ],
                0.5,
            )
            .unwrap(),
            policies: vec![Policy::KlucbTransfer, Policy::AstUcb { shift_l: 0.1 }],
            schedule: DeltaSchedule::Linearized { epsilon: 0.05 },
            horizon: 1000,
            runs: 3,
            master_seed: 7,
            checkpoint_count: 20,
            output_path: "out.csv".into(),
        }
    }

    #[test]
    fn json_round_trip() {
        let c = sample();
        let back = ExperimentConfig::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn schema_shape() {
        let v: serde_json::Value = serde_json::from_str(&sample().to_json()).unwrap();
        assert_eq!(v["policies"][1]["kind"], "ast_ucb");
        assert_eq!(v["policies"][1]["shift_l"], 0.1);
        assert_eq!(v["schedule"]["kind"], "linearized");
        assert_eq!(v["prior"]["arms"][0]["n_prior"], 10);
        assert_eq!(v["instance"]["means"][1], 0.5);
    }

    #[test]
    fn invalid_documents_are_rejected() {
        let good = sample().to_json();
        let bad_sigma = good.replace("\"sigma\": 1.0", "\"sigma\": -1.0");
        assert!(ExperimentConfig::from_json(&bad_sigma).is_err());
        let bad_policy = good.replace("klucb_transfer", "thompson");
        assert!(ExperimentConfig::from_json(&bad_policy).is_err());
        let extra = good.replacen('{', "{\"bogus\": 1,", 1);
        assert!(ExperimentConfig::from_json(&extra).is_err());

        let mut c = sample();
        c.runs = 0;
        assert!(c.validate().is_err());
        let mut c = sample();
        c.policies.push(Policy::KlucbTransfer);
        assert!(c.validate().is_err());
        let mut c = sample();
        c.instance = BanditInstance::new(vec![1.0, 0.5, 0.2], 1.0).unwrap();
        assert!(c.validate().is_err());
        let mut c = sample();
        c.schedule = DeltaSchedule::Linearized { epsilon: -1.0 };
        assert!(c.validate().is_err());
    }

    #[test]
    fn load_reports_the_path() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("broken.json");
        std::fs::write(&path, "{ not json").unwrap();
        let err = ExperimentConfig::load(&path).unwrap_err().to_string();
        assert!(err.contains("broken.json"), "{err}");
        let good = dir.path().join("good.json");
        sample().save(&good).unwrap();
        assert_eq!(ExperimentConfig::load(&good).unwrap(), sample());
    }
}
