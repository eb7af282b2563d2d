//! Canonical transformation of a heterogeneous chain into `N` identical virtual stages.
//!
//! The transform keeps three survival products and the fixed and variable cost
//! totals unchanged, so sold volume, defective sold volume and total cost are
//! exactly those of the source chain for any `N > 0`. `N = n` is the direct
//! length representation, `N < n` clusters the chain and `N > n` de-clusters it.
//!
//! All power laws are evaluated in the log domain (`ln_1p` / `exp_m1`) so that
//! small defect rates do not lose precision.

use serde::{Deserialize, Serialize};

use crate::chain::{Chain, CostTriple, Reputation, Strategy, DEGENERATE_SURVIVAL};
use crate::error::{check_fraction, check_nonnegative, check_positive, Error, Result};

/// Homogeneous representation of a chain over `stages` virtual stages.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "HomogenizedRecord", try_from = "HomogenizedRecord")]
pub struct HomogenizedChain {
    /// Number of virtual stages `N`; any positive real.
    pub stages: f64,
    /// Fixed costs per virtual stage.
    pub fixed: CostTriple,
    pub defect_rate: f64,
    pub monitoring_effectiveness: f64,
    pub inspection_effectiveness: f64,
    /// Variable costs per virtual stage.
    pub variable: CostTriple,
    pub initial_volume: f64,
    pub reputation: Reputation,
    /// Stage count of the chain this representation came from.
    pub source_stages: usize,
}

/// Quantities the canonical transform preserves, independent of `N`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conserved {
    /// `ln Π (1 - d_k)`.
    pub ln_defect_free: f64,
    /// `ln Π (1 - (1 - e_mk) d_k)`.
    pub ln_intact: f64,
    /// `ln Π (1 - e_ik (1 - e_mk) d_k)`.
    pub ln_survival: f64,
    pub fixed_total: CostTriple,
    /// `Σ_j v_j Π_{k<j} (1 - e_ik (1 - e_mk) d_k)` per cost kind.
    pub variable_total: CostTriple,
}

impl Conserved {
    pub fn of_chain(chain: &Chain) -> Self {
        let st = chain.stages();
        Self {
            ln_defect_free: st.iter().map(|s| (-s.defect_rate).ln_1p()).sum(),
            ln_intact: st.iter().map(|s| (-s.effective_defect_rate()).ln_1p()).sum(),
            ln_survival: st.iter().map(|s| (-s.removal_rate()).ln_1p()).sum(),
            fixed_total: chain.fixed_total(),
            variable_total: CostTriple::new(
                chain.weighted_variable_sum(|v| v.production),
                chain.weighted_variable_sum(|v| v.monitoring),
                chain.weighted_variable_sum(|v| v.inspection),
            ),
        }
    }

    pub fn of_homogenized(h: &HomogenizedChain) -> Self {
        let n = h.stages;
        let removal = h.removal_rate();
        let ln_survival = n * (-removal).ln_1p();
        Self {
            ln_defect_free: n * (-h.defect_rate).ln_1p(),
            ln_intact: n * (-h.effective_defect_rate()).ln_1p(),
            ln_survival,
            fixed_total: h.fixed.scaled(n),
            variable_total: h.variable.scaled(geometric_sum(removal, n)),
        }
    }

    pub fn defect_free_product(&self) -> f64 {
        self.ln_defect_free.exp()
    }

    pub fn intact_product(&self) -> f64 {
        self.ln_intact.exp()
    }

    pub fn survival_product(&self) -> f64 {
        self.ln_survival.exp()
    }
}

/// `Σ_{j<N} (1 - x)^j = (1 - (1 - x)^N) / x`, continuous at `x = 0`.
fn geometric_sum(x: f64, n: f64) -> f64 {
    if x == 0.0 {
        n
    } else {
        -(n * (-x).ln_1p()).exp_m1() / x
    }
}

/// `1 - (1 - x)^N`.
fn one_minus_power(x: f64, n: f64) -> f64 {
    -(n * (-x).ln_1p()).exp_m1()
}

impl HomogenizedChain {
    pub fn n_source(&self) -> usize {
        self.source_stages
    }

    pub fn strength(&self) -> f64 {
        self.reputation.strength()
    }

    pub fn effective_defect_rate(&self) -> f64 {
        (1.0 - self.monitoring_effectiveness) * self.defect_rate
    }

    pub fn removal_rate(&self) -> f64 {
        self.inspection_effectiveness * self.effective_defect_rate()
    }

    pub fn validate(&self) -> Result<()> {
        check_positive("N", self.stages)?;
        check_fraction("d", self.defect_rate)?;
        check_fraction("em", self.monitoring_effectiveness)?;
        check_fraction("ei", self.inspection_effectiveness)?;
        for (name, v) in [
            ("C", self.fixed.production),
            ("M", self.fixed.monitoring),
            ("I", self.fixed.inspection),
            ("c", self.variable.production),
            ("m", self.variable.monitoring),
            ("i", self.variable.inspection),
        ] {
            check_nonnegative(name, v)?;
        }
        check_positive("X0", self.initial_volume)?;
        Reputation::new(self.reputation.return_rate, self.reputation.premium)?;
        Ok(())
    }

    pub fn masked(&self, strategy: Strategy) -> Self {
        let mut h = *self;
        if !strategy.uses_monitoring() {
            h.monitoring_effectiveness = 0.0;
            h.fixed.monitoring = 0.0;
            h.variable.monitoring = 0.0;
        }
        if !strategy.uses_inspection() {
            h.inspection_effectiveness = 0.0;
            h.fixed.inspection = 0.0;
            h.variable.inspection = 0.0;
        }
        h
    }

    pub fn with_defect_rate(mut self, d: f64) -> Self {
        self.defect_rate = d;
        self
    }

    pub fn with_monitoring_effectiveness(mut self, e_m: f64) -> Self {
        self.monitoring_effectiveness = e_m;
        self
    }

    pub fn with_inspection_effectiveness(mut self, e_i: f64) -> Self {
        self.inspection_effectiveness = e_i;
        self
    }

    pub fn with_strength(mut self, kappa: f64) -> Result<Self> {
        self.reputation = Reputation::with_strength(kappa)?;
        Ok(self)
    }

    /// Rebuilds the parameters at `stages` virtual stages from conserved quantities.
    ///
    /// `fallback` supplies `(e_m, e_i)` for the 0/0 cases: no defects at all
    /// makes `e_m` undefined, no unprevented defects makes `e_i` undefined.
    fn from_conserved(
        q: &Conserved,
        stages: f64,
        fallback: (f64, f64),
        initial_volume: f64,
        reputation: Reputation,
        source_stages: usize,
    ) -> Self {
        let d = -(q.ln_defect_free / stages).exp_m1();
        let unprevented = -(q.ln_intact / stages).exp_m1();
        let removal = -(q.ln_survival / stages).exp_m1();
        let e_m = if d > 0.0 {
            (1.0 - unprevented / d).clamp(0.0, 1.0)
        } else {
            fallback.0
        };
        let e_i = if unprevented > 0.0 {
            (removal / unprevented).clamp(0.0, 1.0)
        } else {
            fallback.1
        };
        let per_stage_variable = if q.ln_survival == 0.0 {
            q.variable_total.scaled(1.0 / stages)
        } else {
            q.variable_total.scaled(removal / -q.ln_survival.exp_m1())
        };
        Self {
            stages,
            fixed: q.fixed_total.scaled(1.0 / stages),
            defect_rate: d,
            monitoring_effectiveness: e_m,
            inspection_effectiveness: e_i,
            variable: per_stage_variable,
            initial_volume,
            reputation,
            source_stages,
        }
    }
}

/// Homogenizes `chain` under `strategy` onto `stages` virtual stages.
///
/// The strategy mask is applied before the transform: the homogenized variable
/// costs depend on which effectiveness values are active.
pub fn homogenize(chain: &Chain, strategy: Strategy, stages: f64) -> Result<HomogenizedChain> {
    check_positive("N", stages)?;
    let masked = strategy.mask(chain);
    if masked.is_uniform() && stages == masked.len() as f64 {
        // Identity transform; skip the round trip through the logs.
        let s = masked.stages()[0];
        let unprevented = (1.0 - s.monitoring_effectiveness) * s.defect_rate;
        return Ok(HomogenizedChain {
            stages,
            fixed: s.fixed,
            defect_rate: s.defect_rate,
            monitoring_effectiveness: if s.defect_rate > 0.0 { s.monitoring_effectiveness } else { 0.0 },
            inspection_effectiveness: if unprevented > 0.0 { s.inspection_effectiveness } else { 0.0 },
            variable: s.variable,
            initial_volume: masked.initial_volume(),
            reputation: masked.reputation(),
            source_stages: masked.len(),
        });
    }
    let q = Conserved::of_chain(&masked);
    Ok(HomogenizedChain::from_conserved(
        &q,
        stages,
        (0.0, 0.0),
        masked.initial_volume(),
        masked.reputation(),
        masked.len(),
    ))
}

/// Moves a homogenized chain to another virtual stage count without the source chain.
pub fn rescale(h: &HomogenizedChain, stages: f64) -> Result<HomogenizedChain> {
    check_positive("N", h.stages)?;
    check_positive("N", stages)?;
    if stages == h.stages {
        return Ok(*h);
    }
    let q = Conserved::of_homogenized(h);
    Ok(HomogenizedChain::from_conserved(
        &q,
        stages,
        (h.monitoring_effectiveness, h.inspection_effectiveness),
        h.initial_volume,
        h.reputation,
        h.source_stages,
    ))
}

/// Maps a defect rate between virtual stage counts, keeping `(1 - d)^N` fixed.
pub fn rescale_defect_rate(d: f64, from: f64, to: f64) -> f64 {
    -((from / to) * (-d).ln_1p()).exp_m1()
}

/// Maps a monitoring effectiveness between virtual stage counts.
///
/// Works for values outside [0, 1] as long as `(1 - e_m) d < 1`; the map is
/// monotone and fixes 0 and 1, so out-of-range values stay out of range.
/// Returns `None` when the power law has no real value.
pub fn rescale_monitoring_effectiveness(e_m: f64, d: f64, from: f64, to: f64) -> Option<f64> {
    let unprevented = (1.0 - e_m) * d;
    if unprevented >= 1.0 && e_m != 0.0 {
        return None;
    }
    let d_to = rescale_defect_rate(d, from, to);
    if d_to == 0.0 {
        return Some(e_m);
    }
    let unprevented_to = -((from / to) * (-unprevented).ln_1p()).exp_m1();
    let v = 1.0 - unprevented_to / d_to;
    v.is_finite().then_some(v)
}

/// Maps an inspection effectiveness between virtual stage counts (given the chain's `e_m`).
pub fn rescale_inspection_effectiveness(e_i: f64, e_m: f64, d: f64, from: f64, to: f64) -> Option<f64> {
    let unprevented = (1.0 - e_m) * d;
    let removal = e_i * unprevented;
    if removal >= 1.0 && removal != unprevented {
        return None;
    }
    let unprevented_to = -((from / to) * (-unprevented).ln_1p()).exp_m1();
    if unprevented_to == 0.0 {
        return Some(e_i);
    }
    let removal_to = -((from / to) * (-removal).ln_1p()).exp_m1();
    let v = removal_to / unprevented_to;
    v.is_finite().then_some(v)
}

/// General homogeneous unit cost (the monitoring-and-inspection form).
pub fn general_unit_cost(h: &HomogenizedChain) -> Result<f64> {
    let n = h.stages;
    let removal = h.removal_rate();
    let ln_survival = n * (-removal).ln_1p();
    let survival = ln_survival.exp();
    if survival < DEGENERATE_SURVIVAL {
        return Err(Error::DegenerateChain { survival });
    }
    let ln_intact = n * (-h.effective_defect_rate()).ln_1p();
    // (Θ - P_m) / Θ
    let defective_share = -(ln_intact - ln_survival).exp_m1();
    let fixed = n * h.fixed.sum() / (h.initial_volume * survival);
    let variable = h.variable.sum() * geometric_sum(removal, n) / survival;
    Ok(fixed + variable * (1.0 + h.strength() * defective_share))
}

/// Pure inspection: `h.variable.production` is the inspection-homogenized `c_i`.
pub fn inspection_unit_cost(h: &HomogenizedChain) -> Result<f64> {
    let n = h.stages;
    let removal = h.inspection_effectiveness * h.defect_rate;
    let ln_survival = n * (-removal).ln_1p();
    let survival = ln_survival.exp();
    if survival < DEGENERATE_SURVIVAL {
        return Err(Error::DegenerateChain { survival });
    }
    let ln_defect_free = n * (-h.defect_rate).ln_1p();
    let defective_share = -(ln_defect_free - ln_survival).exp_m1();
    let fixed = n * (h.fixed.production + h.fixed.inspection) / (h.initial_volume * survival);
    let variable = (h.variable.production + h.variable.inspection) * geometric_sum(removal, n) / survival;
    Ok(fixed + (1.0 + h.strength() * defective_share) * variable)
}

/// Pure monitoring: sold volume equals input volume.
pub fn monitoring_unit_cost(h: &HomogenizedChain) -> f64 {
    let n = h.stages;
    n * (h.fixed.production + h.fixed.monitoring) / h.initial_volume
        + n * (h.variable.production + h.variable.monitoring)
            * (1.0 + h.strength() * one_minus_power(h.effective_defect_rate(), n))
}

/// Zero maintenance.
pub fn zero_unit_cost(h: &HomogenizedChain) -> f64 {
    let n = h.stages;
    n * h.fixed.production / h.initial_volume
        + n * h.variable.production * (1.0 + h.strength() * one_minus_power(h.defect_rate, n))
}

/// Unit cost of `strategy` on a homogenized chain.
///
/// `h` must have been homogenized under the same strategy (or one whose
/// variable costs coincide, e.g. zero and monitoring) to reproduce the
/// heterogeneous unit cost.
pub fn homogenized_unit_cost(h: &HomogenizedChain, strategy: Strategy) -> Result<f64> {
    let h = h.masked(strategy);
    match strategy {
        Strategy::Zero => Ok(zero_unit_cost(&h)),
        Strategy::Monitoring => Ok(monitoring_unit_cost(&h)),
        Strategy::Inspection => inspection_unit_cost(&h),
        Strategy::General => general_unit_cost(&h),
    }
}

/// Error of the first-order expansion of the conserved power law over `N` stages.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TaylorError {
    /// The conserved product `γ = (1 - x)^N`.
    pub gamma: f64,
    pub stages: f64,
    pub error: f64,
}

impl TaylorError {
    /// Value approached as `N -> ∞`: `-ln γ + γ - 1`.
    pub fn limit(gamma: f64) -> f64 {
        -gamma.ln() + gamma - 1.0
    }
}

/// `γ - 1 + N (1 - γ^{1/N})`: zero at `N = 1` and increasing in `N` for `γ < 1`.
pub fn taylor_error(gamma: f64, stages: f64) -> Result<TaylorError> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::InvalidParameter {
            name: "gamma",
            value: gamma,
            reason: "must lie in (0, 1]",
        });
    }
    check_positive("N", stages)?;
    let error = (gamma - 1.0) - stages * (gamma.ln() / stages).exp_m1();
    Ok(TaylorError {
        gamma,
        stages,
        error,
    })
}

/// Flat JSON form using the model's symbol names as keys.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HomogenizedRecord {
    #[serde(rename = "N")]
    stages: f64,
    #[serde(rename = "C")]
    fixed_production: f64,
    #[serde(rename = "M")]
    fixed_monitoring: f64,
    #[serde(rename = "I")]
    fixed_inspection: f64,
    d: f64,
    em: f64,
    ei: f64,
    c: f64,
    m: f64,
    i: f64,
    #[serde(rename = "X0")]
    initial_volume: f64,
    alpha: f64,
    beta: f64,
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<serde_json::Value>,
}

impl From<HomogenizedChain> for HomogenizedRecord {
    fn from(h: HomogenizedChain) -> Self {
        Self {
            stages: h.stages,
            fixed_production: h.fixed.production,
            fixed_monitoring: h.fixed.monitoring,
            fixed_inspection: h.fixed.inspection,
            d: h.defect_rate,
            em: h.monitoring_effectiveness,
            ei: h.inspection_effectiveness,
            c: h.variable.production,
            m: h.variable.monitoring,
            i: h.variable.inspection,
            initial_volume: h.initial_volume,
            alpha: h.reputation.return_rate,
            beta: h.reputation.premium,
            n: h.source_stages,
            provenance: None,
        }
    }
}

impl TryFrom<HomogenizedRecord> for HomogenizedChain {
    type Error = Error;

    fn try_from(r: HomogenizedRecord) -> Result<Self> {
        let h = HomogenizedChain {
            stages: r.stages,
            fixed: CostTriple::new(r.fixed_production, r.fixed_monitoring, r.fixed_inspection),
            defect_rate: r.d,
            monitoring_effectiveness: r.em,
            inspection_effectiveness: r.ei,
            variable: CostTriple::new(r.c, r.m, r.i),
            initial_volume: r.initial_volume,
            reputation: Reputation::new(r.alpha, r.beta)?,
            source_stages: r.n,
        };
        h.validate()?;
        Ok(h)
    }
}
