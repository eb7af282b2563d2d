//! Heterogeneous n-stage production chain: expected volumes and unit costs.
//!
//! Every stage `k` creates defects with propensity `d_k`. Monitoring prevents a
//! fraction `e_mk` of them, inspection removes a fraction `e_ik` of the defects
//! the stage still creates. Units that are removed are not processed further
//! and never sold; undetected defective units reach the customer and trigger
//! warranty costs proportional to the reputation strength `alpha * (1 + beta)`.

use serde::{Deserialize, Serialize};

use crate::error::{check_fraction, check_nonnegative, check_positive, Error, Result};

/// Survival products below this are treated as "everything scrapped".
pub const DEGENERATE_SURVIVAL: f64 = 1e-300;

/// A production / monitoring / inspection cost triple.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CostTriple {
    pub production: f64,
    pub monitoring: f64,
    pub inspection: f64,
}

impl CostTriple {
    pub const fn new(production: f64, monitoring: f64, inspection: f64) -> Self {
        Self {
            production,
            monitoring,
            inspection,
        }
    }

    pub fn sum(&self) -> f64 {
        self.production + self.monitoring + self.inspection
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self::new(
            self.production * factor,
            self.monitoring * factor,
            self.inspection * factor,
        )
    }

    fn validate(&self, names: [&'static str; 3]) -> Result<()> {
        check_nonnegative(names[0], self.production)?;
        check_nonnegative(names[1], self.monitoring)?;
        check_nonnegative(names[2], self.inspection)
    }
}

/// Parameters of a single process stage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageParams {
    pub defect_rate: f64,
    pub monitoring_effectiveness: f64,
    pub inspection_effectiveness: f64,
    /// Per-unit costs `c_k`, `m_k`, `i_k`.
    pub variable: CostTriple,
    /// Per-stage fixed costs `C_k`, `M_k`, `I_k`.
    pub fixed: CostTriple,
}

impl StageParams {
    pub fn validate(&self) -> Result<()> {
        check_fraction("d", self.defect_rate)?;
        check_fraction("em", self.monitoring_effectiveness)?;
        check_fraction("ei", self.inspection_effectiveness)?;
        self.variable.validate(["c", "m", "i"])?;
        self.fixed.validate(["C", "M", "I"])
    }

    /// Defect rate left after monitoring, `(1 - e_m) d`.
    pub fn effective_defect_rate(&self) -> f64 {
        (1.0 - self.monitoring_effectiveness) * self.defect_rate
    }

    /// Fraction of the incoming volume removed by inspection, `e_i (1 - e_m) d`.
    pub fn removal_rate(&self) -> f64 {
        self.inspection_effectiveness * self.effective_defect_rate()
    }

    pub fn masked(&self, strategy: Strategy) -> Self {
        let mut s = *self;
        if !strategy.uses_monitoring() {
            s.monitoring_effectiveness = 0.0;
            s.variable.monitoring = 0.0;
            s.fixed.monitoring = 0.0;
        }
        if !strategy.uses_inspection() {
            s.inspection_effectiveness = 0.0;
            s.variable.inspection = 0.0;
            s.fixed.inspection = 0.0;
        }
        s
    }
}

/// Market reaction to defective units that reach the customer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Reputation {
    /// Share of sold defectives that are returned, `alpha` in [0, 1].
    pub return_rate: f64,
    /// Premium over variable cost for transaction and goodwill, `beta >= 0`.
    pub premium: f64,
}

impl Reputation {
    pub fn new(return_rate: f64, premium: f64) -> Result<Self> {
        check_fraction("alpha", return_rate)?;
        check_nonnegative("beta", premium)?;
        Ok(Self {
            return_rate,
            premium,
        })
    }

    /// A reputation with the given strength `kappa = alpha (1 + beta)`.
    ///
    /// Uses `alpha = min(kappa, 1)` and puts the rest into the premium.
    pub fn with_strength(kappa: f64) -> Result<Self> {
        check_nonnegative("kappa", kappa)?;
        if kappa == 0.0 {
            return Self::new(0.0, 0.0);
        }
        let alpha = kappa.min(1.0);
        Self::new(alpha, kappa / alpha - 1.0)
    }

    /// `kappa = alpha (1 + beta)`; the only combination the cost formulas use.
    pub fn strength(&self) -> f64 {
        self.return_rate * (1.0 + self.premium)
    }
}

/// Ordered production chain with its input volume and market reputation.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    stages: Vec<StageParams>,
    initial_volume: f64,
    reputation: Reputation,
}

impl Chain {
    pub fn new(stages: Vec<StageParams>, initial_volume: f64, reputation: Reputation) -> Result<Self> {
        if stages.is_empty() {
            return Err(Error::InvalidParameter {
                name: "n",
                value: 0.0,
                reason: "a chain needs at least one stage",
            });
        }
        for s in &stages {
            s.validate()?;
        }
        check_positive("X0", initial_volume)?;
        Reputation::new(reputation.return_rate, reputation.premium)?;
        Ok(Self {
            stages,
            initial_volume,
            reputation,
        })
    }

    pub fn uniform(n: usize, stage: StageParams, initial_volume: f64, reputation: Reputation) -> Result<Self> {
        Self::new(vec![stage; n], initial_volume, reputation)
    }

    pub fn stages(&self) -> &[StageParams] {
        &self.stages
    }

    pub fn len(&self) -> usize {
        self.stages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stages.is_empty()
    }

    pub fn initial_volume(&self) -> f64 {
        self.initial_volume
    }

    pub fn reputation(&self) -> Reputation {
        self.reputation
    }

    pub fn is_uniform(&self) -> bool {
        self.stages.windows(2).all(|w| w[0] == w[1])
    }

    /// Applies `f` to every stage and revalidates.
    pub fn map_stages(&self, f: impl FnMut(&StageParams) -> StageParams) -> Result<Self> {
        Self::new(
            self.stages.iter().map(f).collect(),
            self.initial_volume,
            self.reputation,
        )
    }

    pub fn with_reputation(&self, reputation: Reputation) -> Self {
        Self {
            reputation,
            ..self.clone()
        }
    }

    /// Fraction of the input volume that is sold, `Θ_C = Π (1 - e_ik (1 - e_mk) d_k)`.
    pub fn survival_product(&self) -> f64 {
        self.stages.iter().map(|s| 1.0 - s.removal_rate()).product()
    }

    /// `Π (1 - (1 - e_mk) d_k)`: fraction of units never hit by an unprevented defect.
    pub fn intact_product(&self) -> f64 {
        self.stages
            .iter()
            .map(|s| 1.0 - s.effective_defect_rate())
            .product()
    }

    /// `Σ_j v_j Π_{k<j} (1 - e_ik (1 - e_mk) d_k)` for the variable costs selected by `pick`.
    pub(crate) fn weighted_variable_sum(&self, pick: impl Fn(&CostTriple) -> f64) -> f64 {
        let mut survival = 1.0;
        let mut sum = 0.0;
        for s in &self.stages {
            sum += pick(&s.variable) * survival;
            survival *= 1.0 - s.removal_rate();
        }
        sum
    }

    pub(crate) fn fixed_total(&self) -> CostTriple {
        self.stages.iter().fold(CostTriple::default(), |acc, s| {
            CostTriple::new(
                acc.production + s.fixed.production,
                acc.monitoring + s.fixed.monitoring,
                acc.inspection + s.fixed.inspection,
            )
        })
    }
}

/// The three pure maintenance strategies plus the unmasked general case.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Zero,
    Inspection,
    Monitoring,
    General,
}

impl Strategy {
    pub const PURE: [Strategy; 3] = [Strategy::Zero, Strategy::Inspection, Strategy::Monitoring];

    pub fn uses_monitoring(self) -> bool {
        matches!(self, Strategy::Monitoring | Strategy::General)
    }

    pub fn uses_inspection(self) -> bool {
        matches!(self, Strategy::Inspection | Strategy::General)
    }

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Zero => "zero",
            Strategy::Inspection => "inspection",
            Strategy::Monitoring => "monitoring",
            Strategy::General => "general",
        }
    }

    /// Zeroes the parameters this strategy does not use.
    pub fn mask(self, chain: &Chain) -> Chain {
        Chain {
            stages: chain.stages.iter().map(|s| s.masked(self)).collect(),
            initial_volume: chain.initial_volume,
            reputation: chain.reputation,
        }
    }
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "zero" => Ok(Strategy::Zero),
            "inspection" => Ok(Strategy::Inspection),
            "monitoring" => Ok(Strategy::Monitoring),
            "general" => Ok(Strategy::General),
            other => Err(Error::Config(format!("unknown strategy `{other}`"))),
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Totals and unit cost of one strategy applied to a chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CostBreakdown {
    pub fixed: f64,
    pub variable: f64,
    pub warranty: f64,
    pub total: f64,
    pub sold_volume: f64,
    pub defective_sold_volume: f64,
    /// `X_n / X_0`.
    pub survival: f64,
    pub unit_cost: f64,
}

/// Expected sold volume `X_n`.
pub fn sold_volume(chain: &Chain, strategy: Strategy) -> f64 {
    chain.initial_volume * strategy.mask(chain).survival_product()
}

/// Expected defective share of the sold volume, `X_n` minus the units never hit by a defect.
pub fn defective_sold_volume(chain: &Chain, strategy: Strategy) -> f64 {
    let masked = strategy.mask(chain);
    let bad = masked.initial_volume * (masked.survival_product() - masked.intact_product());
    bad.max(0.0)
}

/// Fixed, variable and warranty costs and the unit cost per sold product.
pub fn cost_breakdown(chain: &Chain, strategy: Strategy) -> Result<CostBreakdown> {
    let masked = strategy.mask(chain);
    let x0 = masked.initial_volume;
    let survival = masked.survival_product();
    if survival < DEGENERATE_SURVIVAL {
        return Err(Error::DegenerateChain { survival });
    }
    let sold = x0 * survival;
    let defective = (x0 * (survival - masked.intact_product())).max(0.0);
    let fixed = masked.fixed_total().sum();
    let variable = x0 * masked.weighted_variable_sum(CostTriple::sum);
    let warranty = masked.reputation.strength() * (variable / sold) * defective;
    let total = fixed + variable + warranty;
    Ok(CostBreakdown {
        fixed,
        variable,
        warranty,
        total,
        sold_volume: sold,
        defective_sold_volume: defective,
        survival,
        unit_cost: total / sold,
    })
}

/// Unit cost through the strategy-specific closed forms instead of the general one.
///
/// Pure inspection uses `Π(1 - e_ik d_k)` survival, pure monitoring and zero
/// maintenance sell the full input volume. `General` falls back to
/// [`cost_breakdown`].
pub fn pure_unit_cost(chain: &Chain, strategy: Strategy) -> Result<f64> {
    let x0 = chain.initial_volume;
    let kappa = chain.reputation.strength();
    let st = &chain.stages;
    match strategy {
        Strategy::Inspection => {
            let survival: f64 = st
                .iter()
                .map(|s| 1.0 - s.inspection_effectiveness * s.defect_rate)
                .product();
            if survival < DEGENERATE_SURVIVAL {
                return Err(Error::DegenerateChain { survival });
            }
            let intact: f64 = st.iter().map(|s| 1.0 - s.defect_rate).product();
            let fixed: f64 = st.iter().map(|s| s.fixed.production + s.fixed.inspection).sum();
            let mut reach = 1.0;
            let mut var = 0.0;
            for s in st {
                var += (s.variable.production + s.variable.inspection) * reach;
                reach *= 1.0 - s.inspection_effectiveness * s.defect_rate;
            }
            Ok(fixed / (x0 * survival)
                + (1.0 + kappa * (survival - intact) / survival) * var / survival)
        }
        Strategy::Monitoring => {
            let fixed: f64 = st.iter().map(|s| s.fixed.production + s.fixed.monitoring).sum();
            let intact: f64 = st
                .iter()
                .map(|s| 1.0 - (1.0 - s.monitoring_effectiveness) * s.defect_rate)
                .product();
            let var: f64 = st.iter().map(|s| s.variable.production + s.variable.monitoring).sum();
            Ok(fixed / x0 + (1.0 + kappa * (1.0 - intact)) * var)
        }
        Strategy::Zero => {
            let fixed: f64 = st.iter().map(|s| s.fixed.production).sum();
            let intact: f64 = st.iter().map(|s| 1.0 - s.defect_rate).product();
            let var: f64 = st.iter().map(|s| s.variable.production).sum();
            Ok(fixed / x0 + (1.0 + kappa * (1.0 - intact)) * var)
        }
        Strategy::General => cost_breakdown(chain, strategy).map(|b| b.unit_cost),
    }
}
