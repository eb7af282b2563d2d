//! Critical effectiveness thresholds between strategy pairs and the
//! defect-rate regime classification.
//!
//! A critical monitoring effectiveness `(e_m)_c` is the value at which
//! monitoring and its rival have equal unit cost; above it monitoring is
//! cheaper. Closed forms are provided at the query's own stage count and at
//! `N = 1`; first-order approximations for small defect rates follow.

use serde::Serialize;

use crate::chain::{Chain, Strategy};
use crate::error::{Error, Result};
use crate::homogenize::{homogenize, homogenized_unit_cost, rescale, HomogenizedChain};
use crate::solver::{log_grid, refine_root, SolveSettings};

/// Validity bound of the small-defect-rate approximation.
pub const TAYLOR_D_MAX: f64 = 1e-2;

/// Relative tolerance for the cost-balance precondition.
const BALANCE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyPair {
    MonitoringVsZero,
    MonitoringVsInspection,
    InspectionVsZero,
}

impl StrategyPair {
    pub const ALL: [StrategyPair; 3] = [
        StrategyPair::MonitoringVsZero,
        StrategyPair::MonitoringVsInspection,
        StrategyPair::InspectionVsZero,
    ];

    pub fn subject(self) -> Strategy {
        match self {
            StrategyPair::InspectionVsZero => Strategy::Inspection,
            _ => Strategy::Monitoring,
        }
    }

    pub fn rival(self) -> Strategy {
        match self {
            StrategyPair::MonitoringVsInspection => Strategy::Inspection,
            _ => Strategy::Zero,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            StrategyPair::MonitoringVsZero => "monitoring_vs_zero",
            StrategyPair::MonitoringVsInspection => "monitoring_vs_inspection",
            StrategyPair::InspectionVsZero => "inspection_vs_zero",
        }
    }
}

impl std::str::FromStr for StrategyPair {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StrategyPair::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown strategy pair `{s}`")))
    }
}

impl std::fmt::Display for StrategyPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Two homogenized chains, each carrying the parameters of one strategy of the pair.
///
/// Varying `d` sets the defect rate on both chains and keeps every other
/// per-stage parameter fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalQuery {
    pub pair: StrategyPair,
    pub subject: HomogenizedChain,
    pub rival: HomogenizedChain,
}

impl CriticalQuery {
    /// Homogenizes `chain` under each strategy of the pair at `stages` virtual stages.
    pub fn new(pair: StrategyPair, chain: &Chain, stages: f64) -> Result<Self> {
        Ok(Self {
            pair,
            subject: homogenize(chain, pair.subject(), stages)?,
            rival: homogenize(chain, pair.rival(), stages)?,
        })
    }

    /// Masks one homogenized parameter set for both strategies.
    pub fn from_homogenized(pair: StrategyPair, h: &HomogenizedChain) -> Self {
        Self {
            pair,
            subject: h.masked(pair.subject()),
            rival: h.masked(pair.rival()),
        }
    }

    pub fn stages(&self) -> f64 {
        self.subject.stages
    }

    pub fn defect_rate(&self) -> f64 {
        self.subject.defect_rate
    }

    pub fn with_defect_rate(&self, d: f64) -> Self {
        Self {
            subject: self.subject.with_defect_rate(d),
            rival: self.rival.with_defect_rate(d),
            ..*self
        }
    }

    /// Sets `e_m` on the monitoring chain, if the pair has one.
    pub fn with_monitoring_effectiveness(&self, e_m: f64) -> Self {
        let mut q = *self;
        if self.pair.subject() == Strategy::Monitoring {
            q.subject = q.subject.with_monitoring_effectiveness(e_m);
        }
        q
    }

    /// Sets `e_i` on the inspection chain, if the pair has one.
    pub fn with_inspection_effectiveness(&self, e_i: f64) -> Self {
        let mut q = *self;
        match self.pair {
            StrategyPair::MonitoringVsInspection => q.rival = q.rival.with_inspection_effectiveness(e_i),
            StrategyPair::InspectionVsZero => q.subject = q.subject.with_inspection_effectiveness(e_i),
            StrategyPair::MonitoringVsZero => {}
        }
        q
    }

    pub fn with_strength(&self, kappa: f64) -> Result<Self> {
        Ok(Self {
            subject: self.subject.with_strength(kappa)?,
            rival: self.rival.with_strength(kappa)?,
            ..*self
        })
    }

    pub fn strength(&self) -> f64 {
        self.subject.strength()
    }

    /// Moves both chains to `stages` virtual stages.
    pub fn rescaled(&self, stages: f64) -> Result<Self> {
        Ok(Self {
            subject: rescale(&self.subject, stages)?,
            rival: rescale(&self.rival, stages)?,
            ..*self
        })
    }

    /// Unit cost of the subject strategy; `+inf` if its output is entirely scrapped.
    pub fn subject_cost(&self) -> f64 {
        homogenized_unit_cost(&self.subject, self.pair.subject()).unwrap_or(f64::INFINITY)
    }

    pub fn rival_cost(&self) -> f64 {
        homogenized_unit_cost(&self.rival, self.pair.rival()).unwrap_or(f64::INFINITY)
    }

    /// `(c_subject - c_rival) / max(c_subject, c_rival)`; negative when the subject is cheaper.
    pub fn relative_difference(&self) -> f64 {
        relative_gap(self.subject_cost(), self.rival_cost())
    }

    fn inspection_params(&self) -> Result<InspectionParams> {
        if self.pair != StrategyPair::MonitoringVsInspection {
            return Err(Error::Unsupported(format!(
                "needs a monitoring_vs_inspection query, got {}",
                self.pair
            )));
        }
        let (s, r) = (&self.subject, &self.rival);
        Ok(InspectionParams {
            fixed_production: s.fixed.production,
            fixed_monitoring: s.fixed.monitoring,
            fixed_inspection: r.fixed.inspection,
            c_m: s.variable.production,
            m: s.variable.monitoring,
            c_i: r.variable.production,
            i: r.variable.inspection,
            e_i: r.inspection_effectiveness,
            d: s.defect_rate,
            kappa: s.strength(),
            x0: s.initial_volume,
            n: s.source_stages as f64,
        })
    }
}

fn relative_gap(a: f64, b: f64) -> f64 {
    match (a.is_finite(), b.is_finite()) {
        (true, true) => {
            let scale = a.max(b);
            if scale == 0.0 {
                0.0
            } else {
                (a - b) / scale
            }
        }
        (false, true) => 1.0,
        (true, false) => -1.0,
        (false, false) => f64::NAN,
    }
}

/// Per-stage quantities entering the monitoring-versus-inspection formulas.
#[derive(Debug, Clone, Copy)]
struct InspectionParams {
    fixed_production: f64,
    fixed_monitoring: f64,
    fixed_inspection: f64,
    c_m: f64,
    m: f64,
    c_i: f64,
    i: f64,
    e_i: f64,
    d: f64,
    kappa: f64,
    x0: f64,
    n: f64,
}

impl InspectionParams {
    /// `(M - I)/X0 + m - i`.
    fn cost_gap(&self) -> f64 {
        (self.fixed_monitoring - self.fixed_inspection) / self.x0 + self.m - self.i
    }

    /// `(M - I)/X0 + m - i + c_m - c_i`.
    fn balance(&self) -> f64 {
        self.cost_gap() + self.c_m - self.c_i
    }

    fn require_balance(&self) -> Result<()> {
        let scale = self.c_m + self.m;
        if self.balance().abs() > BALANCE_TOL * scale.max(1.0) {
            return Err(Error::ConditionViolated(format!(
                "cost balance (M - I)/X0 + m - i + c_m - c_i = {:e} is not zero",
                self.balance()
            )));
        }
        Ok(())
    }

    fn require_kappa(&self) -> Result<()> {
        if self.kappa <= 0.0 {
            return Err(Error::NoThreshold("reputation strength is zero".into()));
        }
        Ok(())
    }

    /// `(C + I)/X0 + (1 + 1/n)(c_i + i)/2`.
    fn inspection_burden(&self) -> f64 {
        (self.fixed_production + self.fixed_inspection) / self.x0 + 0.5 * (1.0 + 1.0 / self.n) * (self.c_i + self.i)
    }
}

/// A critical effectiveness, never clamped.
///
/// Values below 0 mean the subject strategy is cheaper for every feasible
/// effectiveness, values above 1 mean it never is.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalValue {
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Dominance {
    /// The threshold lies in [0, 1] and splits the effectiveness range.
    Split,
    SubjectAlways,
    RivalAlways,
}

impl CriticalValue {
    pub fn in_range(&self) -> bool {
        (0.0..=1.0).contains(&self.value)
    }

    pub fn dominance(&self) -> Dominance {
        if self.value < 0.0 {
            Dominance::SubjectAlways
        } else if self.value > 1.0 {
            Dominance::RivalAlways
        } else {
            Dominance::Split
        }
    }
}

/// Lowest defect rate at which monitoring can beat zero maintenance at all.
///
/// `1 - (1 - (M/X0 + m) / (kappa c))^{1/N}`, using `h`'s stage count `N`.
pub fn d_min_vs_zero(h: &HomogenizedChain) -> Result<f64> {
    let kappa = h.strength();
    let overhead = h.fixed.monitoring / h.initial_volume + h.variable.monitoring;
    let c = h.variable.production;
    if kappa * c <= overhead {
        return Err(Error::NoThreshold(format!(
            "kappa * c = {} does not exceed M/X0 + m = {overhead}",
            kappa * c
        )));
    }
    Ok(-((-overhead / (kappa * c)).ln_1p() / h.stages).exp_m1())
}

/// Critical monitoring effectiveness against zero maintenance at `h`'s stage count.
pub fn em_crit_vs_zero_nn(h: &HomogenizedChain) -> Result<CriticalValue> {
    let d_min = d_min_vs_zero(h)?;
    let d = h.defect_rate;
    if d <= d_min {
        return Err(Error::NoThreshold(format!("d = {d} does not exceed d_min = {d_min}")));
    }
    let n = h.stages;
    let kappa = h.strength();
    let (c, m) = (h.variable.production, h.variable.monitoring);
    let overhead = h.fixed.monitoring / h.initial_volume + m;
    let defect_free = (n * (-d).ln_1p()).exp();
    let intact = (overhead / kappa + m + c * defect_free) / (c + m);
    Ok(CriticalValue {
        value: 1.0 + (intact.ln() / n).exp_m1() / d,
    })
}

fn require_single_stage(stages: f64) -> Result<()> {
    if (stages - 1.0).abs() > 1e-12 {
        return Err(Error::ConditionViolated(format!(
            "formula holds at N = 1 but the parameters are at N = {stages}; rescale first"
        )));
    }
    Ok(())
}

/// Critical monitoring effectiveness against zero maintenance for a single virtual stage.
///
/// `e_m = m/(c+m) + (M/X0 + m) / (kappa (c+m) d)`. `NoThreshold` when above 1.
pub fn em_crit_vs_zero_n1(h: &HomogenizedChain) -> Result<CriticalValue> {
    require_single_stage(h.stages)?;
    let d = h.defect_rate;
    let kappa = h.strength();
    if d <= 0.0 {
        return Err(Error::NoThreshold("no defects: monitoring cannot pay off".into()));
    }
    if kappa <= 0.0 {
        return Err(Error::NoThreshold("reputation strength is zero".into()));
    }
    let (c, m) = (h.variable.production, h.variable.monitoring);
    let overhead = h.fixed.monitoring / h.initial_volume + m;
    let value = m / (c + m) + overhead / (kappa * (c + m) * d);
    if value > 1.0 {
        return Err(Error::NoThreshold(format!("critical value {value} exceeds 1")));
    }
    Ok(CriticalValue { value })
}

/// Monitoring effectiveness at which monitoring costs exactly `rival_cost` per unit.
///
/// Inverts the pure-monitoring unit cost at `h`'s stage count; with the zero
/// maintenance cost as rival this reduces to [`em_crit_vs_zero_nn`].
pub fn em_crit_vs_rival_cost(h: &HomogenizedChain, rival_cost: f64) -> Result<CriticalValue> {
    let n = h.stages;
    let kappa = h.strength();
    let d = h.defect_rate;
    let variable = h.variable.production + h.variable.monitoring;
    if kappa <= 0.0 || d <= 0.0 || variable <= 0.0 {
        return Err(Error::NoThreshold(
            "monitoring cost does not depend on its effectiveness".into(),
        ));
    }
    if !rival_cost.is_finite() {
        return Ok(CriticalValue {
            value: f64::NEG_INFINITY,
        });
    }
    let fixed = n * (h.fixed.production + h.fixed.monitoring) / h.initial_volume;
    let intact = 1.0 + 1.0 / kappa - (rival_cost - fixed) / (kappa * n * variable);
    if intact <= 0.0 {
        return Ok(CriticalValue {
            value: f64::NEG_INFINITY,
        });
    }
    Ok(CriticalValue {
        value: 1.0 + (intact.ln() / n).exp_m1() / d,
    })
}

/// Critical monitoring effectiveness against inspection for a query at `N = 1`.
pub fn em_crit_vs_inspection_n1(q: &CriticalQuery) -> Result<CriticalValue> {
    let p = q.inspection_params()?;
    require_single_stage(q.stages())?;
    p.require_kappa()?;
    let d = p.d;
    if d <= 0.0 {
        return Err(Error::NoThreshold("no defects: monitoring cannot pay off".into()));
    }
    let survival = 1.0 - p.e_i * d;
    if survival <= 0.0 {
        return Err(Error::DegenerateChain { survival: 0.0 });
    }
    let k = p.kappa;
    let mon = p.c_m + p.m;
    let value = 1.0 + 1.0 / (k * d) + (p.fixed_production + p.fixed_monitoring) / (p.x0 * k * mon * d)
        - ((p.fixed_production + p.fixed_inspection) / p.x0 + p.c_i + p.i) / (k * mon * survival * d)
        - (p.c_i + p.i) * (1.0 - p.e_i) / (mon * survival * survival);
    Ok(CriticalValue { value })
}

/// Small-`d` estimate of the critical effectiveness against inspection.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TaylorEstimate {
    pub value: CriticalValue,
    /// `d <= TAYLOR_D_MAX` at the direct length representation.
    pub within_validity: bool,
}

/// First-order approximation in `d`, evaluated at the direct length (`N = n`).
///
/// The slope in `d` has the opposite sign of `(M - I)/X0 + m - i + c_m - c_i`.
pub fn em_crit_taylor(q: &CriticalQuery) -> Result<TaylorEstimate> {
    let n = q.subject.source_stages as f64;
    let q = q.rescaled(n)?;
    let p = q.inspection_params()?;
    p.require_kappa()?;
    if p.d <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "d",
            value: p.d,
            reason: "approximation needs d > 0",
        });
    }
    let mon = p.c_m + p.m;
    let value = 1.0
        - (p.c_i + p.i) * (1.0 - p.e_i) / mon
        - p.inspection_burden() * p.e_i / (p.kappa * mon)
        + p.balance() / (p.kappa * mon * n * p.d);
    Ok(TaylorEstimate {
        value: CriticalValue { value },
        within_validity: p.d <= TAYLOR_D_MAX,
    })
}

/// Upper bound of the critical effectiveness over all `e_i` and `d` under cost balance.
pub fn max_em_crit(q: &CriticalQuery) -> Result<CriticalValue> {
    let p = q.inspection_params()?;
    p.require_balance()?;
    p.require_kappa()?;
    Ok(CriticalValue {
        value: 1.0 - p.inspection_burden() / (p.kappa * (p.c_m + p.m)),
    })
}

/// Critical effectiveness in the limit `d -> 0` under cost balance; linear in `e_i`.
pub fn em_crit_at_d0(q: &CriticalQuery, e_i: f64) -> Result<CriticalValue> {
    let (intercept, slope) = d0_line(q)?;
    Ok(CriticalValue {
        value: intercept + slope * e_i,
    })
}

/// Inspection effectiveness at which [`em_crit_at_d0`] equals `target`.
pub fn ei_for_em_crit_at_d0(q: &CriticalQuery, target: f64) -> Result<f64> {
    let (intercept, slope) = d0_line(q)?;
    if slope == 0.0 {
        return Err(Error::NoThreshold("the d -> 0 threshold does not depend on e_i".into()));
    }
    Ok((target - intercept) / slope)
}

fn d0_line(q: &CriticalQuery) -> Result<(f64, f64)> {
    let p = q.inspection_params()?;
    p.require_balance()?;
    p.require_kappa()?;
    let mon = p.c_m + p.m;
    let intercept = 1.0 - (p.c_i + p.i) / mon;
    let slope = (p.c_i + p.i) / mon - p.inspection_burden() / (p.kappa * mon);
    Ok((intercept, slope))
}

/// Reputation strength below which monitoring beats inspection for every `e_i` and `d`.
pub fn kappa_min(q: &CriticalQuery) -> Result<f64> {
    let p = q.inspection_params()?;
    if p.cost_gap() > 0.0 {
        return Err(Error::ConditionViolated(format!(
            "(M - I)/X0 + m - i = {} must be <= 0",
            p.cost_gap()
        )));
    }
    Ok(p.inspection_burden() / (p.c_m + p.m))
}

/// Inspection effectiveness at which the critical value stops depending on `kappa`.
///
/// `(1/d)(1 - (C + I + X0(c_i + i)) / (C + M + X0(c_m + m)))` with the query's
/// parameters read as a single virtual stage.
pub fn ei_crit(q: &CriticalQuery, d: f64) -> Result<f64> {
    let p = q.inspection_params()?;
    if p.cost_gap() <= 0.0 {
        return Err(Error::ConditionViolated(format!(
            "(M - I)/X0 + m - i = {} must be > 0",
            p.cost_gap()
        )));
    }
    if d <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "d",
            value: d,
            reason: "must be > 0",
        });
    }
    let insp = p.fixed_production + p.fixed_inspection + p.x0 * (p.c_i + p.i);
    let mon = p.fixed_production + p.fixed_monitoring + p.x0 * (p.c_m + p.m);
    Ok((1.0 - insp / mon) / d)
}

/// Reputation strength at which the critical value stops depending on `e_i`.
pub fn kappa_crit(q: &CriticalQuery) -> Result<f64> {
    let p = q.inspection_params()?;
    if p.cost_gap() <= 0.0 {
        return Err(Error::ConditionViolated(format!(
            "(M - I)/X0 + m - i = {} must be > 0",
            p.cost_gap()
        )));
    }
    Ok((p.fixed_production + p.fixed_inspection) / (p.x0 * (p.c_i + p.i)) + 0.5 * (1.0 + 1.0 / p.n))
}

/// Partition of the defect-rate axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    /// `d < a`: a cheaper alternative to monitoring exists.
    Uncertainty,
    /// `a <= d <= b`: monitoring is the cheapest strategy.
    MonitoringSuperiority,
    /// `d > b`: monitoring loses again.
    Avoidance,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::Uncertainty => "uncertainty",
            Regime::MonitoringSuperiority => "monitoring_superiority",
            Regime::Avoidance => "avoidance",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeClassification {
    /// Field containing the chain's own defect rate.
    pub field: Regime,
    pub a: f64,
    pub b: f64,
    /// Monitoring never beats both alternatives; then `a = b = 1`.
    pub monitoring_field_empty: bool,
}

/// Locates the monitoring-superiority interval `[a, b]` in `d` for fixed effectiveness values.
///
/// Monitoring is compared with the cheaper of zero maintenance and inspection.
/// `a` is the first `d` where monitoring becomes cheapest (0 if it already is
/// at `d = 0`), `b` the last `d` where it stops being cheapest (1 if it still
/// is at `d = 1`).
pub fn classify_regime(
    h: &HomogenizedChain,
    e_m: f64,
    e_i: f64,
    settings: &SolveSettings,
) -> Result<RegimeClassification> {
    h.validate()?;
    let monitoring = h.masked(Strategy::Monitoring).with_monitoring_effectiveness(e_m);
    let zero = h.masked(Strategy::Zero);
    let inspection = h.masked(Strategy::Inspection).with_inspection_effectiveness(e_i);
    monitoring.validate()?;
    inspection.validate()?;
    let mut gap = |d: f64| {
        let cost = |chain: &HomogenizedChain, s: Strategy| {
            homogenized_unit_cost(&chain.with_defect_rate(d), s).unwrap_or(f64::INFINITY)
        };
        let best = cost(&zero, Strategy::Zero).min(cost(&inspection, Strategy::Inspection));
        relative_gap(cost(&monitoring, Strategy::Monitoring), best)
    };

    let mut xs = vec![0.0];
    xs.extend(log_grid(1e-9, 1.0, settings.scan_samples.max(256)));
    let gs: Vec<f64> = xs.iter().map(|&d| gap(d)).collect();
    let wins: Vec<bool> = gs.iter().map(|&g| g <= 0.0).collect();

    let mut entries = Vec::new();
    let mut exits = Vec::new();
    for k in 0..xs.len() - 1 {
        if wins[k] == wins[k + 1] {
            continue;
        }
        let root = if gs[k] == 0.0 {
            xs[k]
        } else if gs[k + 1] == 0.0 {
            xs[k + 1]
        } else {
            refine_root(&mut gap, (xs[k], xs[k + 1]), (gs[k], gs[k + 1]), settings)?
        };
        if wins[k + 1] {
            entries.push(root);
        } else {
            exits.push(root);
        }
    }

    let d = h.defect_rate;
    if !wins.iter().any(|&w| w) {
        return Ok(RegimeClassification {
            field: Regime::Uncertainty,
            a: 1.0,
            b: 1.0,
            monitoring_field_empty: true,
        });
    }
    let a = if wins[0] { 0.0 } else { entries[0] };
    let b = if wins[wins.len() - 1] {
        1.0
    } else {
        *exits.last().expect("a win followed by a loss has an exit")
    };
    let field = if d < a {
        Regime::Uncertainty
    } else if d > b {
        Regime::Avoidance
    } else {
        Regime::MonitoringSuperiority
    };
    Ok(RegimeClassification {
        field,
        a,
        b,
        monitoring_field_empty: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ref50, ref50_with};

    fn ref50_query(pair: StrategyPair) -> CriticalQuery {
        CriticalQuery::new(pair, &ref50(), 50.0).unwrap()
    }

    #[test]
    fn d_min_reference_value() {
        let h = homogenize(&ref50(), Strategy::Monitoring, 50.0).unwrap();
        let d_min = d_min_vs_zero(&h).unwrap();
        assert!((d_min - 2.1272e-3).abs() < 1e-6, "{d_min}");
        assert!(em_crit_vs_zero_nn(&h.with_defect_rate(d_min * 0.99)).is_err());
    }

    #[test]
    fn weak_reputation_boundary_has_no_threshold() {
        let h = homogenize(&ref50(), Strategy::Monitoring, 50.0).unwrap();
        // kappa c = M/X0 + m  <=>  kappa = 1.01 / 10
        let h = h.with_strength(0.101).unwrap();
        assert!(matches!(em_crit_vs_zero_nn(&h), Err(Error::NoThreshold(_))));
    }

    #[test]
    fn free_monitoring_has_zero_d_min() {
        let mut h = homogenize(&ref50(), Strategy::Monitoring, 50.0).unwrap();
        h.fixed.monitoring = 0.0;
        h.variable.monitoring = 0.0;
        assert_eq!(d_min_vs_zero(&h).unwrap(), 0.0);
    }

    #[test]
    fn closed_form_equalizes_costs() {
        let q = ref50_query(StrategyPair::MonitoringVsZero).with_defect_rate(0.05);
        let v = em_crit_vs_zero_nn(&q.subject).unwrap().value;
        assert!(q.with_monitoring_effectiveness(v).relative_difference().abs() < 1e-13);
        let v2 = em_crit_vs_rival_cost(&q.subject, q.rival_cost()).unwrap().value;
        assert!((v - v2).abs() < 1e-12);
    }

    #[test]
    fn single_stage_forms_need_single_stage() {
        let q = ref50_query(StrategyPair::MonitoringVsInspection);
        assert!(matches!(em_crit_vs_inspection_n1(&q), Err(Error::ConditionViolated(_))));
        let q1 = q.rescaled(1.0).unwrap();
        let v = em_crit_vs_inspection_n1(&q1).unwrap().value;
        assert!(q1.with_monitoring_effectiveness(v).relative_difference().abs() < 1e-12);
    }

    #[test]
    fn reference_numbers() {
        let q = ref50_query(StrategyPair::MonitoringVsInspection);
        assert!((max_em_crit(&q).unwrap().value - (1.0 - 5.67 / 11.0)).abs() < 1e-12);
        assert!((em_crit_at_d0(&q, 0.8).unwrap().value - 0.8 * (1.0 - 5.67 / 11.0)).abs() < 1e-12);
        assert!((ei_for_em_crit_at_d0(&q, 0.4).unwrap() - 0.4 / (1.0 - 5.67 / 11.0)).abs() < 1e-12);
        assert!((kappa_min(&q).unwrap() - 5.67 / 11.0).abs() < 1e-12);
    }

    #[test]
    fn preconditions_are_reported() {
        let chain = ref50()
            .map_stages(|s| {
                let mut s = *s;
                s.fixed.monitoring = 2e4;
                s
            })
            .unwrap();
        let q = CriticalQuery::new(StrategyPair::MonitoringVsInspection, &chain, 50.0).unwrap();
        assert!(matches!(max_em_crit(&q), Err(Error::ConditionViolated(_))));
        assert!(matches!(kappa_min(&q), Err(Error::ConditionViolated(_))));
        assert!((kappa_crit(&q).unwrap() - 5.67 / 11.0).abs() < 1e-12);
        let base = ref50_query(StrategyPair::MonitoringVsInspection);
        assert!(matches!(kappa_crit(&base), Err(Error::ConditionViolated(_))));
        assert!(matches!(ei_crit(&base, 0.1), Err(Error::ConditionViolated(_))));
        assert!(matches!(max_em_crit(&ref50_query(StrategyPair::MonitoringVsZero)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn taylor_is_flat_under_balance() {
        let q = ref50_query(StrategyPair::MonitoringVsInspection).with_inspection_effectiveness(1.0);
        let a = em_crit_taylor(&q.with_defect_rate(1e-4)).unwrap();
        let b = em_crit_taylor(&q.with_defect_rate(5e-3)).unwrap();
        assert!(a.within_validity && b.within_validity);
        assert!((a.value.value - b.value.value).abs() < 1e-12);
        assert!((a.value.value - (1.0 - 5.67 / 11.0)).abs() < 1e-12);
        assert!(!em_crit_taylor(&q.with_defect_rate(0.05)).unwrap().within_validity);
    }

    #[test]
    fn critical_value_dominance() {
        assert_eq!(CriticalValue { value: -0.1 }.dominance(), Dominance::SubjectAlways);
        assert_eq!(CriticalValue { value: 1.1 }.dominance(), Dominance::RivalAlways);
        assert!(CriticalValue { value: 0.5 }.in_range());
    }

    #[test]
    fn regimes_for_free_perfect_monitoring() {
        let mut h = homogenize(&ref50_with(0.1, 1.0, 0.8).unwrap(), Strategy::General, 50.0).unwrap();
        h.fixed.monitoring = 0.0;
        h.variable.monitoring = 0.0;
        let r = classify_regime(&h, 1.0, 0.8, &SolveSettings::default()).unwrap();
        assert_eq!((r.a, r.b), (0.0, 1.0));
        assert_eq!(r.field, Regime::MonitoringSuperiority);
    }

    #[test]
    fn regimes_without_reputation_effect() {
        let h = homogenize(&ref50(), Strategy::General, 50.0).unwrap().with_strength(0.0).unwrap();
        let r = classify_regime(&h, 0.8, 0.8, &SolveSettings::default()).unwrap();
        assert!(r.monitoring_field_empty);
        assert_eq!(r.field, Regime::Uncertainty);
    }

    #[test]
    fn pair_names_round_trip() {
        for p in StrategyPair::ALL {
            assert_eq!(p.name().parse::<StrategyPair>().unwrap(), p);
        }
    }
}
