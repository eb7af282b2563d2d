//! JSON chain configuration and the bundled `ref50` preset.
//!
//! ```json
//! { "n": 3, "X0": 1000, "alpha": 0.5, "beta": 1,
//!   "stages": [ {"d": 0.1, "em": 0, "ei": 1, "c": 10, "m": 1, "i": 1, "C": 0, "M": 0, "I": 0}, ... ] }
//! ```
//!
//! `stages` may be replaced by `uniform` (one record applied to all `n` stages).
//! Unknown keys are rejected.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::chain::{Chain, CostTriple, Reputation, StageParams};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StageRecord {
    pub d: f64,
    pub em: f64,
    pub ei: f64,
    pub c: f64,
    pub m: f64,
    pub i: f64,
    #[serde(rename = "C")]
    pub fixed_c: f64,
    #[serde(rename = "M")]
    pub fixed_m: f64,
    #[serde(rename = "I")]
    pub fixed_i: f64,
}

impl From<StageRecord> for StageParams {
    fn from(r: StageRecord) -> Self {
        StageParams {
            defect_rate: r.d,
            monitoring_effectiveness: r.em,
            inspection_effectiveness: r.ei,
            variable: CostTriple::new(r.c, r.m, r.i),
            fixed: CostTriple::new(r.fixed_c, r.fixed_m, r.fixed_i),
        }
    }
}

impl From<StageParams> for StageRecord {
    fn from(s: StageParams) -> Self {
        StageRecord {
            d: s.defect_rate,
            em: s.monitoring_effectiveness,
            ei: s.inspection_effectiveness,
            c: s.variable.production,
            m: s.variable.monitoring,
            i: s.variable.inspection,
            fixed_c: s.fixed.production,
            fixed_m: s.fixed.monitoring,
            fixed_i: s.fixed.inspection,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainConfig {
    pub n: usize,
    #[serde(rename = "X0")]
    pub initial_volume: f64,
    pub alpha: f64,
    pub beta: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stages: Option<Vec<StageRecord>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uniform: Option<StageRecord>,
}

impl ChainConfig {
    /// Parses and validates; errors carry serde's line/column position.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ChainConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.to_chain()?;
        Ok(cfg)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_chain(&self) -> Result<Chain> {
        let reputation = Reputation::new(self.alpha, self.beta)?;
        let stages: Vec<StageParams> = match (&self.stages, &self.uniform) {
            (Some(_), Some(_)) => return Err(Error::Config("give either `stages` or `uniform`, not both".into())),
            (None, None) => return Err(Error::Config("missing `stages` or `uniform`".into())),
            (None, Some(u)) => vec![(*u).into(); self.n],
            (Some(list), None) => {
                if list.len() != self.n {
                    return Err(Error::Config(format!(
                        "`n` is {} but `stages` has {} records",
                        self.n,
                        list.len()
                    )));
                }
                list.iter().map(|&r| r.into()).collect()
            }
        };
        if stages.is_empty() {
            return Err(Error::Config("`n` must be at least 1".into()));
        }
        Chain::new(stages, self.initial_volume, reputation)
    }

    pub fn from_chain(chain: &Chain) -> Self {
        let rep = chain.reputation();
        let (stages, uniform) = if chain.is_uniform() {
            (None, Some(chain.stages()[0].into()))
        } else {
            (Some(chain.stages().iter().map(|&s| s.into()).collect()), None)
        };
        Self {
            n: chain.len(),
            initial_volume: chain.initial_volume(),
            alpha: rep.return_rate,
            beta: rep.premium,
            stages,
            uniform,
        }
    }

    /// Hex SHA-256 of the canonical (compact) JSON form.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        Sha256::digest(canonical.as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

/// Named parameter sets shipped with the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Ref50,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Ref50 => "ref50",
        }
    }

    pub fn config(self) -> ChainConfig {
        match self {
            Preset::Ref50 => ChainConfig::from_chain(&ref50()),
        }
    }
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ref50" => Ok(Preset::Ref50),
            other => Err(Error::Config(format!("unknown preset `{other}` (available: ref50)"))),
        }
    }
}

pub const REF50_STAGES: usize = 50;
pub const REF50_INITIAL_VOLUME: f64 = 1e6;

/// One `ref50` stage with the given defect rate and effectiveness pair.
pub fn ref50_stage(d: f64, e_m: f64, e_i: f64) -> StageParams {
    StageParams {
        defect_rate: d,
        monitoring_effectiveness: e_m,
        inspection_effectiveness: e_i,
        variable: CostTriple::new(10.0, 1.0, 1.0),
        fixed: CostTriple::new(5e4, 1e4, 1e4),
    }
}

/// Uniform 50-stage reference chain: `X0 = 1e6`, `C = 5e4`, `c = 10`,
/// `M = I = 1e4`, `m = i = 1`, `alpha = 0.5`, `beta = 1` (`kappa = 1`).
pub fn ref50_with(d: f64, e_m: f64, e_i: f64) -> Result<Chain> {
    Chain::uniform(
        REF50_STAGES,
        ref50_stage(d, e_m, e_i),
        REF50_INITIAL_VOLUME,
        Reputation::new(0.5, 1.0)?,
    )
}

/// The reference chain at its default operating point `d = 0.02`, `e_m = e_i = 0.8`.
pub fn ref50() -> Chain {
    ref50_with(0.02, 0.8, 0.8).expect("preset parameters are valid")
}
