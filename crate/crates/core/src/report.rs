//! Text outputs: CSV tables, JSON records and the per-figure data sets.
//!
//! Every output starts with a provenance line (`# tool=... version=...
//! preset=... config_hash=...`) followed by a mandatory header row. Numbers
//! use Rust's shortest round-trip formatting (`.` decimal separator, exponent
//! for very small or large magnitudes), lines end in `\n`, and an absent
//! value is an empty field.

use serde::Serialize;

use crate::chain::{cost_breakdown, Chain, CostBreakdown, Reputation, Strategy};
use crate::config::{ChainConfig, Preset};
use crate::critical::{classify_regime, em_crit_taylor, CriticalQuery, RegimeClassification, StrategyPair, TaylorEstimate};
use crate::error::Result;
use crate::homogenize::{homogenize, homogenized_unit_cost, rescale_defect_rate, HomogenizedChain};
use crate::oracle::SimResult;
use crate::solver::{
    critical_value, default_d_grid, default_ei_grid, linear_grid, log_grid, superiority_surface, trace_critical_curve,
    CriticalCurve, CurveMethod, SolveSettings, SuperioritySurface,
};

pub const TOOL: &str = "maintcost";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Figures with a data export.
pub const FIGURES: std::ops::RangeInclusive<u8> = 2..=8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    /// Preset name, or `none` for a config file.
    pub preset: String,
    pub config_hash: String,
}

impl Provenance {
    pub fn new(preset: Option<Preset>, config: &ChainConfig) -> Self {
        Self {
            tool: TOOL,
            version: VERSION,
            preset: preset.map_or("none", Preset::name).to_string(),
            config_hash: config.hash(),
        }
    }

    pub fn line(&self) -> String {
        format!(
            "# tool={} version={} preset={} config_hash={}\n",
            self.tool, self.version, self.preset, self.config_hash
        )
    }
}

/// Shortest representation that parses back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

struct Table(String);

impl Table {
    fn new(prov: &Provenance, header: &[&str]) -> Self {
        let mut s = prov.line();
        s.push_str(&header.join(","));
        s.push('\n');
        Table(s)
    }

    fn row(&mut self, fields: &[String]) {
        self.0.push_str(&fields.join(","));
        self.0.push('\n');
    }
}

/// Per-strategy cost rows for `compare`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub rows: Vec<(Strategy, CostBreakdown)>,
    pub cheapest: Strategy,
    /// Small-`d` estimate of the monitoring threshold against inspection, when defined.
    pub taylor: Option<TaylorEstimate>,
    /// Monitoring threshold against inspection through the single-stage closed form.
    pub em_crit_vs_inspection: Option<f64>,
    pub em_crit_vs_zero: Option<f64>,
}

/// Evaluates the three pure strategies on `chain`; the cheapest is flagged.
pub fn compare(chain: &Chain, settings: &SolveSettings) -> Result<Comparison> {
    let rows = Strategy::PURE
        .into_iter()
        .map(|s| Ok((s, cost_breakdown(chain, s)?)))
        .collect::<Result<Vec<_>>>()?;
    let cheapest = rows
        .iter()
        .min_by(|a, b| a.1.unit_cost.total_cmp(&b.1.unit_cost))
        .map(|r| r.0)
        .expect("three strategies");
    let n = chain.len() as f64;
    let threshold = |pair| {
        CriticalQuery::new(pair, chain, n)
            .and_then(|q| critical_value(&q, CurveMethod::N1Rescale, settings))
            .ok()
            .map(|v| v.value)
    };
    let taylor = CriticalQuery::new(StrategyPair::MonitoringVsInspection, chain, n)
        .and_then(|q| em_crit_taylor(&q))
        .ok();
    Ok(Comparison {
        rows,
        cheapest,
        taylor,
        em_crit_vs_inspection: threshold(StrategyPair::MonitoringVsInspection),
        em_crit_vs_zero: threshold(StrategyPair::MonitoringVsZero),
    })
}

pub fn comparison_csv(prov: &Provenance, c: &Comparison) -> String {
    let mut t = Table::new(
        prov,
        &[
            "strategy",
            "fixed",
            "variable",
            "warranty",
            "total",
            "X_n",
            "X_n_bad",
            "unit_cost",
            "cheapest",
        ],
    );
    for (s, b) in &c.rows {
        t.row(&[
            s.name().to_string(),
            num(b.fixed),
            num(b.variable),
            num(b.warranty),
            num(b.total),
            num(b.sold_volume),
            num(b.defective_sold_volume),
            num(b.unit_cost),
            (*s == c.cheapest).to_string(),
        ]);
    }
    t.0
}

/// JSON record of a homogenized chain with a `provenance` object.
pub fn homogenized_json(prov: &Provenance, h: &HomogenizedChain) -> String {
    let mut value = serde_json::to_value(h).expect("homogenized chain serializes");
    value["provenance"] = serde_json::to_value(prov).expect("provenance serializes");
    let mut s = serde_json::to_string_pretty(&value).expect("value serializes");
    s.push('\n');
    s
}

pub const CURVE_HEADER: [&str; 5] = ["d", "value", "method", "N", "pair"];

fn curve_fields(curve: &CriticalCurve) -> impl Iterator<Item = Vec<String>> + '_ {
    curve.points.iter().map(move |p| {
        vec![
            num(p.d),
            opt(p.value),
            curve.method.csv_name().to_string(),
            num(curve.stages),
            curve.pair.name().to_string(),
        ]
    })
}

/// Critical curves, one row per grid point, curves concatenated in order.
pub fn curve_csv(prov: &Provenance, curves: &[CriticalCurve]) -> String {
    let mut t = Table::new(prov, &CURVE_HEADER);
    for c in curves {
        for row in curve_fields(c) {
            t.row(&row);
        }
    }
    t.0
}

pub fn surface_csv(prov: &Provenance, surface: &SuperioritySurface) -> String {
    let mut t = Table::new(prov, &["d", "e_i", "em_crit", "dominant_strategy"]);
    for c in &surface.cells {
        t.row(&[num(c.d), num(c.e_i), opt(c.point.value), c.dominant.name().to_string()]);
    }
    t.0
}

/// Regime boundaries for one `(e_m, e_i)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeRow {
    pub e_m: f64,
    pub e_i: f64,
    pub classification: RegimeClassification,
}

/// Regime boundaries `a`, `b` over `em_grid` at the chain's own `e_i` and `d`.
pub fn regimes(h: &HomogenizedChain, em_grid: &[f64], settings: &SolveSettings) -> Result<Vec<RegimeRow>> {
    let e_i = h.inspection_effectiveness;
    em_grid
        .iter()
        .map(|&e_m| {
            Ok(RegimeRow {
                e_m,
                e_i,
                classification: classify_regime(h, e_m, e_i, settings)?,
            })
        })
        .collect()
}

pub fn regimes_csv(prov: &Provenance, d: f64, rows: &[RegimeRow]) -> String {
    let mut t = Table::new(prov, &["e_m", "e_i", "a", "b", "d", "field", "monitoring_field_empty"]);
    for r in rows {
        let c = &r.classification;
        t.row(&[
            num(r.e_m),
            num(r.e_i),
            num(c.a),
            num(c.b),
            num(d),
            c.field.name().to_string(),
            c.monitoring_field_empty.to_string(),
        ]);
    }
    t.0
}

pub fn simulation_csv(prov: &Provenance, r: &SimResult) -> String {
    let mut t = Table::new(prov, &["replication", "X_n", "X_n_bad"]);
    for (k, run) in r.runs.iter().enumerate() {
        t.row(&[k.to_string(), run.sold.to_string(), run.defective_sold.to_string()]);
    }
    t.0
}

#[derive(Serialize)]
struct SimSummary<'a> {
    provenance: &'a Provenance,
    strategy: Strategy,
    replications: usize,
    seed: u64,
    sold_mean: f64,
    sold_stderr: f64,
    defective_sold_mean: f64,
    defective_sold_stderr: f64,
    warranty_mean: f64,
    warranty_stderr: f64,
    /// Expected volumes from the closed forms, for comparison.
    expected_sold: f64,
    expected_defective_sold: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    per_stage_trace: Option<&'a [crate::oracle::StageTrace]>,
}

/// Means and standard errors of a simulation next to the expected volumes.
pub fn simulation_json(prov: &Provenance, chain: &Chain, strategy: Strategy, r: &SimResult) -> String {
    let summary = SimSummary {
        provenance: prov,
        strategy,
        replications: r.replications,
        seed: r.seed,
        sold_mean: r.sold_mean,
        sold_stderr: r.sold_stderr,
        defective_sold_mean: r.defective_sold_mean,
        defective_sold_stderr: r.defective_sold_stderr,
        warranty_mean: r.warranty_mean,
        warranty_stderr: r.warranty_stderr,
        expected_sold: crate::chain::sold_volume(chain, strategy),
        expected_defective_sold: crate::chain::defective_sold_volume(chain, strategy),
        per_stage_trace: r.per_stage_trace.as_deref(),
    };
    let mut s = serde_json::to_string_pretty(&summary).expect("summary serializes");
    s.push('\n');
    s
}

/// One exported figure data set.
#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub figure: u8,
    pub file_name: String,
    pub csv: String,
    /// Solver failures among the computed points.
    pub failures: usize,
}

/// Monitoring effectiveness values of the unit-cost families.
pub const FIGURE_EM_VALUES: [f64; 5] = [0.2, 0.4, 0.6, 0.8, 1.0];
/// Reputation strengths of the zero-maintenance critical curves.
pub const FIGURE_KAPPAS: [f64; 5] = [0.2, 0.6, 1.0, 2.0, 4.0];
/// Reputation strengths of the inspection critical curves.
pub const FIGURE_INSPECTION_KAPPAS: [f64; 2] = [1.0, 0.6];
/// Offsets added to the per-stage inspection fixed cost for the cost-imbalance curves.
pub const FIGURE_INSPECTION_OFFSETS: [f64; 3] = [-5e3, 0.0, 5e3];
/// Effectiveness of the inspection critical curves.
pub const FIGURE_INSPECTION_EFFECTIVENESS: f64 = 0.8;

fn unit_cost_grid() -> Vec<f64> {
    log_grid(1e-4, 1.0, 200)
}

/// Data behind one figure, computed from `chain` at its direct length.
///
/// | figure | columns |
/// |---|---|
/// | 2 | `d,e_m,strategy,unit_cost` (zero maintenance rows have empty `e_m`) |
/// | 3 | `d,e_m,cost_difference` (monitoring minus zero maintenance) |
/// | 4 | `d,value,method,N,pair,kappa` |
/// | 5 | `d,strategy,unit_cost` |
/// | 6 | `d,e_i,em_crit,dominant_strategy` |
/// | 7 | `d,value,method,N,pair,kappa,M_minus_I` |
/// | 8 | `e_m,e_i,a,b,d,field,monitoring_field_empty` |
pub fn figure(number: u8, chain: &Chain, prov: &Provenance, settings: &SolveSettings) -> Result<FigureData> {
    let n = chain.len() as f64;
    let (csv, failures) = match number {
        2 => (figure2(chain, prov)?, 0),
        3 => (figure3(chain, prov)?, 0),
        4 => figure4(chain, prov, settings)?,
        5 => (figure5(chain, prov)?, 0),
        6 => {
            let q = CriticalQuery::new(StrategyPair::MonitoringVsInspection, chain, n)?;
            let s = superiority_surface(&q, &default_d_grid(), &default_ei_grid(), CurveMethod::N1Rescale, settings)?;
            (surface_csv(prov, &s), s.failures())
        }
        7 => figure7(chain, prov, settings)?,
        8 => {
            let h = homogenize(chain, Strategy::General, n)?;
            let rows = regimes(&h, &linear_grid(0.05, 1.0, 20), settings)?;
            (regimes_csv(prov, h.defect_rate, &rows), 0)
        }
        other => {
            return Err(crate::Error::InvalidParameter {
                name: "figure",
                value: other as f64,
                reason: "figure data exists for 2 to 8",
            })
        }
    };
    Ok(FigureData {
        figure: number,
        file_name: format!("fig{number}.csv"),
        csv,
        failures,
    })
}

fn figure2(chain: &Chain, prov: &Provenance) -> Result<String> {
    let h = homogenize(chain, Strategy::General, chain.len() as f64)?;
    let mut t = Table::new(prov, &["d", "e_m", "strategy", "unit_cost"]);
    for d in unit_cost_grid() {
        let hd = h.with_defect_rate(d);
        for e_m in FIGURE_EM_VALUES {
            let c = homogenized_unit_cost(&hd.with_monitoring_effectiveness(e_m), Strategy::Monitoring)?;
            t.row(&[num(d), num(e_m), "monitoring".into(), num(c)]);
        }
        let z = homogenized_unit_cost(&hd, Strategy::Zero)?;
        t.row(&[num(d), String::new(), "zero".into(), num(z)]);
    }
    Ok(t.0)
}

fn figure3(chain: &Chain, prov: &Provenance) -> Result<String> {
    let h = homogenize(chain, Strategy::General, chain.len() as f64)?;
    let mut t = Table::new(prov, &["d", "e_m", "cost_difference"]);
    for d in unit_cost_grid() {
        let hd = h.with_defect_rate(d);
        let z = homogenized_unit_cost(&hd, Strategy::Zero)?;
        for e_m in FIGURE_EM_VALUES {
            let c = homogenized_unit_cost(&hd.with_monitoring_effectiveness(e_m), Strategy::Monitoring)?;
            t.row(&[num(d), num(e_m), num(c - z)]);
        }
    }
    Ok(t.0)
}

fn figure4(chain: &Chain, prov: &Provenance, settings: &SolveSettings) -> Result<(String, usize)> {
    let q = CriticalQuery::new(StrategyPair::MonitoringVsZero, chain, chain.len() as f64)?;
    let mut t = Table::new(prov, &["d", "value", "method", "N", "pair", "kappa"]);
    let mut failures = 0;
    for kappa in FIGURE_KAPPAS {
        let qk = q.with_strength(kappa)?;
        for method in CurveMethod::ALL {
            let curve = trace_critical_curve(&qk, &default_d_grid(), method, settings)?;
            failures += curve.failures();
            for mut row in curve_fields(&curve) {
                row.push(num(kappa));
                t.row(&row);
            }
        }
    }
    Ok((t.0, failures))
}

fn figure5(chain: &Chain, prov: &Provenance) -> Result<String> {
    let h = homogenize(chain, Strategy::General, chain.len() as f64)?;
    let mut t = Table::new(prov, &["d", "strategy", "unit_cost"]);
    for d in unit_cost_grid() {
        for s in Strategy::PURE {
            let c = homogenized_unit_cost(&h.with_defect_rate(d).masked(s), s)?;
            t.row(&[num(d), s.name().into(), num(c)]);
        }
    }
    Ok(t.0)
}

fn figure7(chain: &Chain, prov: &Provenance, settings: &SolveSettings) -> Result<(String, usize)> {
    let n = chain.len() as f64;
    let mut t = Table::new(prov, &["d", "value", "method", "N", "pair", "kappa", "M_minus_I"]);
    let mut failures = 0;
    let grid = default_d_grid();
    let grid1: Vec<f64> = grid.iter().map(|&d| rescale_defect_rate(d, n, 1.0)).collect();
    for kappa in FIGURE_INSPECTION_KAPPAS {
        for offset in FIGURE_INSPECTION_OFFSETS {
            let variant = chain
                .map_stages(|s| {
                    let mut s = *s;
                    s.inspection_effectiveness = FIGURE_INSPECTION_EFFECTIVENESS;
                    s.fixed.inspection += offset;
                    s
                })?
                .with_reputation(Reputation::with_strength(kappa)?);
            let imbalance = variant
                .stages()
                .iter()
                .map(|s| s.fixed.monitoring - s.fixed.inspection)
                .sum::<f64>()
                / n;
            let q = CriticalQuery::new(StrategyPair::MonitoringVsInspection, &variant, n)?;
            let q1 = q.rescaled(1.0)?;
            for (query, d_grid) in [(&q, &grid), (&q1, &grid1)] {
                let curve = trace_critical_curve(query, d_grid, CurveMethod::ClosedForm, settings)?;
                failures += curve.failures();
                for mut row in curve_fields(&curve) {
                    row.push(num(kappa));
                    row.push(num(imbalance));
                    t.row(&row);
                }
            }
        }
    }
    Ok((t.0, failures))
}
