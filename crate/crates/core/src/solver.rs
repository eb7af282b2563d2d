//! Root finding on unit-cost differences, critical-curve tracing and superiority surfaces.
//!
//! Roots are bracketed by a coarse sign scan and refined with the Illinois
//! variant of regula falsi, falling back to bisection whenever an
//! interpolation step fails to shrink the bracket enough.

use rayon::prelude::*;
use serde::Serialize;

use crate::critical::{
    em_crit_vs_inspection_n1, em_crit_vs_rival_cost, em_crit_vs_zero_n1, em_crit_vs_zero_nn, CriticalQuery,
    CriticalValue, Dominance, StrategyPair,
};
use crate::error::{Error, Result};
use crate::homogenize::rescale_monitoring_effectiveness;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveSettings {
    /// Required accuracy of a root in the varied parameter.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub bracket: (f64, f64),
    /// Number of coarse samples used to detect sign changes.
    pub scan_samples: usize,
    /// Space the scan samples logarithmically (needs `bracket.0 > 0`).
    pub log_scan: bool,
}

impl Default for SolveSettings {
    fn default() -> Self {
        Self {
            tolerance: 1e-5,
            max_iterations: 200,
            bracket: (0.0, 1.0),
            scan_samples: 64,
            log_scan: false,
        }
    }
}

impl SolveSettings {
    pub fn with_bracket(mut self, lo: f64, hi: f64) -> Self {
        self.bracket = (lo, hi);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.bracket;
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "tolerance",
                value: self.tolerance,
                reason: "must be finite and > 0",
            });
        }
        if !(lo < hi && lo.is_finite() && hi.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "bracket",
                value: lo,
                reason: "bracket must be a nonempty finite interval",
            });
        }
        if self.log_scan && lo <= 0.0 {
            return Err(Error::InvalidParameter {
                name: "bracket",
                value: lo,
                reason: "log scan needs a positive lower end",
            });
        }
        if self.scan_samples < 2 {
            return Err(Error::InvalidParameter {
                name: "scan_samples",
                value: self.scan_samples as f64,
                reason: "need at least two samples",
            });
        }
        Ok(())
    }

    fn scan_points(&self) -> Vec<f64> {
        let (lo, hi) = self.bracket;
        if self.log_scan {
            log_grid(lo, hi, self.scan_samples)
        } else {
            linear_grid(lo, hi, self.scan_samples)
        }
    }
}

/// `n` points from `lo` to `hi` inclusive, evenly spaced in `ln`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    let mut g: Vec<f64> = (0..n).map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp()).collect();
    g[0] = lo;
    g[n - 1] = hi;
    g
}

pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

/// Default defect-rate grid: 200 log-spaced points on [1e-4, 0.5].
pub fn default_d_grid() -> Vec<f64> {
    log_grid(1e-4, 0.5, 200)
}

/// Default inspection-effectiveness grid: 50 linear points on [0, 1].
pub fn default_ei_grid() -> Vec<f64> {
    linear_grid(0.0, 1.0, 50)
}

/// Refines a root of `f` inside `[lo, hi]`, where `f(lo)` and `f(hi)` have opposite signs.
///
/// Stops once the bracket is narrower than `tolerance / 1000`, so the
/// returned point is well inside the requested accuracy.
pub fn refine_root(
    f: &mut dyn FnMut(f64) -> f64,
    (mut lo, mut hi): (f64, f64),
    (mut flo, mut fhi): (f64, f64),
    settings: &SolveSettings,
) -> Result<f64> {
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::NoRoot { lo, hi });
    }
    let xtol = settings.tolerance * 1e-3;
    // 0 = no side retained yet, -1 = lo retained last step, 1 = hi retained last step.
    let mut side = 0i8;
    for _ in 0..settings.max_iterations {
        if hi - lo <= xtol {
            return Ok(if flo.abs() < fhi.abs() { lo } else { hi });
        }
        let width = hi - lo;
        let mut x = (lo * fhi - hi * flo) / (fhi - flo);
        if !(x > lo && x < hi) || !x.is_finite() {
            x = 0.5 * (lo + hi);
        }
        let fx = f(x);
        if !fx.is_finite() {
            return Err(Error::NoConvergence {
                iterations: settings.max_iterations,
            });
        }
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == flo.signum() {
            lo = x;
            flo = fx;
            if side == -1 {
                fhi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            fhi = fx;
            if side == 1 {
                flo *= 0.5;
            }
            side = 1;
        }
        // Guarantee geometric shrinkage.
        if hi - lo > 0.5 * width {
            let mid = 0.5 * (lo + hi);
            let fm = f(mid);
            if fm == 0.0 {
                return Ok(mid);
            }
            if fm.signum() == flo.signum() {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
                fhi = fm;
            }
            side = 0;
        }
    }
    Err(Error::NoConvergence {
        iterations: settings.max_iterations,
    })
}

/// All sign changes of `f` on the settings' bracket, each refined to the tolerance.
///
/// Returns `DegenerateBracket` when `f` vanishes at every scan sample and
/// `NoRoot` when no sign change is found.
pub fn find_roots(f: &mut dyn FnMut(f64) -> f64, settings: &SolveSettings) -> Result<Vec<f64>> {
    settings.validate()?;
    let xs = settings.scan_points();
    let fs: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let (lo, hi) = settings.bracket;
    if fs.iter().all(|&v| v == 0.0) {
        return Err(Error::DegenerateBracket { lo, hi });
    }
    let mut roots = Vec::new();
    for k in 0..xs.len() - 1 {
        let (a, b) = (fs[k], fs[k + 1]);
        if a == 0.0 {
            if roots.last() != Some(&xs[k]) {
                roots.push(xs[k]);
            }
            continue;
        }
        if b != 0.0 && a.signum() != b.signum() {
            roots.push(refine_root(f, (xs[k], xs[k + 1]), (a, b), settings)?);
        }
    }
    if fs[fs.len() - 1] == 0.0 {
        roots.push(xs[xs.len() - 1]);
    }
    if roots.is_empty() {
        return Err(Error::NoRoot { lo, hi });
    }
    Ok(roots)
}

/// Parameter varied by [`find_cost_equality`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Parameter {
    DefectRate,
    MonitoringEffectiveness,
    InspectionEffectiveness,
    Strength,
}

impl Parameter {
    pub fn apply(self, q: &CriticalQuery, value: f64) -> Result<CriticalQuery> {
        Ok(match self {
            Parameter::DefectRate => q.with_defect_rate(value),
            Parameter::MonitoringEffectiveness => q.with_monitoring_effectiveness(value),
            Parameter::InspectionEffectiveness => q.with_inspection_effectiveness(value),
            Parameter::Strength => q.with_strength(value)?,
        })
    }
}

/// Points where the subject and rival unit costs are equal as `vary` moves over the bracket.
///
/// The function solved is the relative cost difference
/// `(c_subject - c_rival) / max(c_subject, c_rival)`.
pub fn find_cost_equality(q: &CriticalQuery, vary: Parameter, settings: &SolveSettings) -> Result<Vec<f64>> {
    let mut f = |x: f64| match vary.apply(q, x) {
        Ok(qx) => qx.relative_difference(),
        Err(_) => f64::NAN,
    };
    find_roots(&mut f, settings)
}

/// How a critical curve is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CurveMethod {
    /// Closed form at the query's own stage count.
    ClosedForm,
    /// Closed form at `N = 1`, mapped back to the query's stage count.
    N1Rescale,
    /// Root finding on the cost difference at the query's stage count.
    DirectNn,
}

impl CurveMethod {
    pub const ALL: [CurveMethod; 3] = [CurveMethod::ClosedForm, CurveMethod::N1Rescale, CurveMethod::DirectNn];

    pub fn csv_name(self) -> &'static str {
        match self {
            CurveMethod::ClosedForm => "closed_Nn",
            CurveMethod::N1Rescale => "closed_N1_rescaled",
            CurveMethod::DirectNn => "numeric",
        }
    }
}

impl std::str::FromStr for CurveMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "closed_Nn" | "closed_form" | "closed" => Ok(CurveMethod::ClosedForm),
            "closed_N1_rescaled" | "N1_rescale" | "n1" => Ok(CurveMethod::N1Rescale),
            "numeric" | "direct_Nn" | "direct" => Ok(CurveMethod::DirectNn),
            other => Err(Error::Config(format!("unknown curve method `{other}`"))),
        }
    }
}

/// Outcome at one grid point of a critical curve.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PointStatus {
    /// Critical value lies in [0, 1].
    InRange,
    /// The subject strategy is cheaper for every effectiveness in [0, 1].
    SubjectAlways,
    /// The rival strategy is cheaper for every effectiveness in [0, 1].
    RivalAlways,
    /// The closed form has no threshold at this point (outside its domain).
    NoThreshold(String),
    /// The solve itself failed; carries the reason.
    Failed(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePoint {
    pub d: f64,
    /// Critical effectiveness; closed forms report out-of-range values unclamped,
    /// root finding cannot and leaves `None`.
    pub value: Option<f64>,
    pub status: PointStatus,
}

impl CurvePoint {
    pub fn in_range(&self) -> bool {
        self.status == PointStatus::InRange
    }

    fn from_critical(d: f64, v: Result<CriticalValue>) -> Self {
        match v {
            Ok(cv) => CurvePoint {
                d,
                value: Some(cv.value),
                status: match cv.dominance() {
                    Dominance::Split => PointStatus::InRange,
                    Dominance::SubjectAlways => PointStatus::SubjectAlways,
                    Dominance::RivalAlways => PointStatus::RivalAlways,
                },
            },
            Err(e @ (Error::NoThreshold(_) | Error::ConditionViolated(_))) => CurvePoint {
                d,
                value: None,
                status: PointStatus::NoThreshold(e.to_string()),
            },
            Err(e) => CurvePoint {
                d,
                value: None,
                status: PointStatus::Failed(e.to_string()),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriticalCurve {
    pub pair: StrategyPair,
    pub method: CurveMethod,
    pub stages: f64,
    pub points: Vec<CurvePoint>,
}

impl CriticalCurve {
    /// The in-range point with the smallest critical value.
    pub fn minimum(&self) -> Option<&CurvePoint> {
        self.points
            .iter()
            .filter(|p| p.in_range())
            .min_by(|a, b| a.value.partial_cmp(&b.value).expect("finite values"))
    }

    /// Points where the solve failed, not counting points without a threshold.
    pub fn failures(&self) -> usize {
        self.points
            .iter()
            .filter(|p| matches!(p.status, PointStatus::Failed(_)))
            .count()
    }
}

/// Critical effectiveness of the subject strategy for the query as given.
pub fn critical_value(q: &CriticalQuery, method: CurveMethod, settings: &SolveSettings) -> Result<CriticalValue> {
    match (q.pair, method) {
        (StrategyPair::MonitoringVsZero, CurveMethod::ClosedForm) => em_crit_vs_zero_nn(&q.subject),
        (StrategyPair::MonitoringVsInspection, CurveMethod::ClosedForm) => {
            em_crit_vs_rival_cost(&q.subject, q.rival_cost())
        }
        (StrategyPair::MonitoringVsZero | StrategyPair::MonitoringVsInspection, CurveMethod::N1Rescale) => {
            let q1 = q.rescaled(1.0)?;
            let v1 = match q.pair {
                StrategyPair::MonitoringVsZero => em_crit_vs_zero_n1(&q1.subject)?,
                _ => em_crit_vs_inspection_n1(&q1)?,
            };
            let d1 = q1.subject.defect_rate;
            rescale_monitoring_effectiveness(v1.value, d1, 1.0, q.stages())
                .map(|value| CriticalValue { value })
                .ok_or_else(|| Error::NoThreshold(format!("critical value {} has no image at N = {}", v1.value, q.stages())))
        }
        (StrategyPair::InspectionVsZero, CurveMethod::ClosedForm | CurveMethod::N1Rescale) => Err(
            Error::Unsupported("inspection versus zero maintenance has no closed form; use the numeric method".into()),
        ),
        (_, CurveMethod::DirectNn) => direct_critical_value(q, settings),
    }
}

/// Root of the cost difference in the subject's own effectiveness on [0, 1].
fn direct_critical_value(q: &CriticalQuery, settings: &SolveSettings) -> Result<CriticalValue> {
    let vary = match q.pair {
        StrategyPair::InspectionVsZero => Parameter::InspectionEffectiveness,
        _ => Parameter::MonitoringEffectiveness,
    };
    let s = SolveSettings {
        bracket: (0.0, 1.0),
        log_scan: false,
        ..*settings
    };
    match find_cost_equality(q, vary, &s) {
        Ok(roots) => Ok(CriticalValue { value: roots[0] }),
        Err(Error::NoRoot { .. }) => {
            let at_zero = vary.apply(q, 0.0)?.relative_difference();
            // No crossing: one side wins over the whole bracket. Report a
            // sentinel outside [0, 1] on the correct side.
            Ok(CriticalValue {
                value: if at_zero < 0.0 { -f64::INFINITY } else { f64::INFINITY },
            })
        }
        Err(e) => Err(e),
    }
}

/// Traces the critical effectiveness over `d_grid`. Each point is independent;
/// failures are recorded on the point and do not stop the curve.
pub fn trace_critical_curve(
    q: &CriticalQuery,
    d_grid: &[f64],
    method: CurveMethod,
    settings: &SolveSettings,
) -> Result<CriticalCurve> {
    settings.validate()?;
    if let Some(&bad) = d_grid.iter().find(|&&d| !(d > 0.0 && d < 1.0)) {
        return Err(Error::InvalidParameter {
            name: "d",
            value: bad,
            reason: "grid points must lie in (0, 1)",
        });
    }
    if !d_grid.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidParameter {
            name: "d",
            value: f64::NAN,
            reason: "grid must be strictly increasing",
        });
    }
    if q.pair == StrategyPair::InspectionVsZero && method != CurveMethod::DirectNn {
        return Err(Error::Unsupported(
            "inspection versus zero maintenance has no closed form; use the numeric method".into(),
        ));
    }
    let points = d_grid
        .par_iter()
        .map(|&d| {
            let qd = q.with_defect_rate(d);
            let mut p = CurvePoint::from_critical(d, critical_value(&qd, method, settings));
            if p.value.is_some_and(|v| !v.is_finite()) {
                p.value = None;
            }
            p
        })
        .collect();
    Ok(CriticalCurve {
        pair: q.pair,
        method,
        stages: q.stages(),
        points,
    })
}

/// Cheaper strategy of a surface cell at the query's monitoring effectiveness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Dominant {
    Monitoring,
    Inspection,
    Tie,
}

impl Dominant {
    pub fn name(self) -> &'static str {
        match self {
            Dominant::Monitoring => "monitoring",
            Dominant::Inspection => "inspection",
            Dominant::Tie => "tie",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SurfaceCell {
    pub d: f64,
    pub e_i: f64,
    pub point: CurvePoint,
    pub dominant: Dominant,
}

/// Monitoring-versus-inspection critical effectiveness over a `(d, e_i)` grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuperioritySurface {
    pub method: CurveMethod,
    pub stages: f64,
    pub d_grid: Vec<f64>,
    pub ei_grid: Vec<f64>,
    /// Row-major: all `e_i` values for the first `d`, then the next `d`.
    pub cells: Vec<SurfaceCell>,
}

impl SuperioritySurface {
    pub fn cell(&self, d_index: usize, ei_index: usize) -> &SurfaceCell {
        &self.cells[d_index * self.ei_grid.len() + ei_index]
    }

    pub fn failures(&self) -> usize {
        self.cells
            .iter()
            .filter(|c| matches!(c.point.status, PointStatus::Failed(_)))
            .count()
    }

    /// Largest finite critical value over the grid.
    pub fn maximum(&self) -> Option<&SurfaceCell> {
        self.cells
            .iter()
            .filter(|c| c.point.value.is_some_and(f64::is_finite))
            .max_by(|a, b| a.point.value.partial_cmp(&b.point.value).expect("finite values"))
    }
}

pub fn superiority_surface(
    q: &CriticalQuery,
    d_grid: &[f64],
    ei_grid: &[f64],
    method: CurveMethod,
    settings: &SolveSettings,
) -> Result<SuperioritySurface> {
    settings.validate()?;
    if q.pair != StrategyPair::MonitoringVsInspection {
        return Err(Error::Unsupported("surfaces compare monitoring with inspection".into()));
    }
    for (name, grid) in [("d", d_grid), ("ei", ei_grid)] {
        if let Some(&bad) = grid.iter().find(|&&x| !(0.0..=1.0).contains(&x)) {
            return Err(Error::InvalidParameter {
                name,
                value: bad,
                reason: "grid points must lie in [0, 1]",
            });
        }
    }
    let cells = d_grid
        .par_iter()
        .flat_map_iter(|&d| ei_grid.iter().map(move |&e_i| (d, e_i)))
        .map(|(d, e_i)| {
            let qc = q.with_defect_rate(d).with_inspection_effectiveness(e_i);
            let mut point = CurvePoint::from_critical(d, critical_value(&qc, method, settings));
            if point.value.is_some_and(|v| !v.is_finite()) {
                point.value = None;
            }
            let gap = qc.relative_difference();
            let dominant = if gap < 0.0 {
                Dominant::Monitoring
            } else if gap > 0.0 {
                Dominant::Inspection
            } else {
                Dominant::Tie
            };
            SurfaceCell { d, e_i, point, dominant }
        })
        .collect();
    Ok(SuperioritySurface {
        method,
        stages: q.stages(),
        d_grid: d_grid.to_vec(),
        ei_grid: ei_grid.to_vec(),
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_both_roots_of_a_parabola() {
        let mut f = |x: f64| (x - 0.2) * (x - 0.7);
        let roots = find_roots(&mut f, &SolveSettings::default()).unwrap();
        assert_eq!(roots.len(), 2);
        assert!((roots[0] - 0.2).abs() < 1e-8);
        assert!((roots[1] - 0.7).abs() < 1e-8);
    }

    #[test]
    fn steep_sigmoid_converges() {
        let mut f = |x: f64| ((x - 0.123_456) * 1e4).tanh();
        let s = SolveSettings::default();
        let r = find_roots(&mut f, &s).unwrap();
        assert!((r[0] - 0.123_456).abs() < s.tolerance);
    }

    #[test]
    fn no_sign_change_and_identically_zero() {
        let s = SolveSettings::default();
        assert!(matches!(find_roots(&mut |x| x + 1.0, &s), Err(Error::NoRoot { .. })));
        assert!(matches!(find_roots(&mut |_| 0.0, &s), Err(Error::DegenerateBracket { .. })));
    }

    #[test]
    fn iteration_cap_is_reported() {
        let s = SolveSettings {
            max_iterations: 2,
            ..SolveSettings::default()
        };
        let r = refine_root(&mut |x| x - 0.3, (0.0, 1.0), (-0.3, 0.7), &s);
        assert!(matches!(r, Err(Error::NoConvergence { iterations: 2 })) || r.is_ok_and(|x| (x - 0.3).abs() < 1e-12));
        let r = refine_root(&mut |x| (x - 0.3).powi(3), (0.0, 1.0), (-0.027, 0.343), &s);
        assert!(matches!(r, Err(Error::NoConvergence { iterations: 2 })));
    }

    #[test]
    fn grids() {
        let g = log_grid(1e-4, 0.5, 200);
        assert_eq!(g.len(), 200);
        assert_eq!(g[0], 1e-4);
        assert_eq!(g[199], 0.5);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        let e = default_ei_grid();
        assert_eq!((e[0], e[49], e.len()), (0.0, 1.0, 50));
    }

    #[test]
    fn settings_validation() {
        assert!(SolveSettings::default().with_bracket(0.5, 0.5).validate().is_err());
        let s = SolveSettings {
            log_scan: true,
            ..SolveSettings::default()
        };
        assert!(s.validate().is_err());
        assert!(SolveSettings { tolerance: 0.0, ..SolveSettings::default() }.validate().is_err());
    }
}
