//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

mod common;

use std::time::{Duration, Instant};

use maintcost::chain::{cost_breakdown, CostTriple, Reputation, Strategy};
use maintcost::config::{ref50, ref50_with};
use maintcost::critical::{
    d_min_vs_zero, em_crit_at_d0, em_crit_vs_rival_cost, em_crit_vs_zero_nn, ei_for_em_crit_at_d0, kappa_min,
    max_em_crit, CriticalQuery, StrategyPair,
};
use maintcost::homogenize::{homogenize, homogenized_unit_cost, taylor_error, HomogenizedChain, TaylorError};
use maintcost::oracle::{recursive_volumes, simulate, SimSettings};
use maintcost::solver::{
    default_d_grid, find_cost_equality, linear_grid, log_grid, superiority_surface, trace_critical_curve,
    CriticalCurve, CurveMethod, Parameter, SolveSettings,
};
use rand::Rng;

use common::{product_volumes, random_chain, rel, rng};

type Outcome = Result<String, String>;

struct Suite {
    failed: Vec<&'static str>,
}

impl Suite {
    fn run(&mut self, name: &'static str, check: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name}  ({secs:.2} s)  {detail}"),
            Err(detail) => {
                println!("FAIL  {name}  ({secs:.2} s)  {detail}");
                self.failed.push(name);
            }
        }
    }
}

fn within(elapsed: Duration, limit_secs: f64) -> Result<(), String> {
    if elapsed.as_secs_f64() < limit_secs {
        Ok(())
    } else {
        Err(format!("runtime {:.2} s exceeds {limit_secs} s", elapsed.as_secs_f64()))
    }
}

fn homogenization_exactness() -> Outcome {
    let start = Instant::now();
    let mut r = rng(11);
    let mut worst = 0.0f64;
    let mut evaluations = 0;
    for _ in 0..1000 {
        let n = r.random_range(1..=20);
        let chain = random_chain(&mut r, n);
        for strategy in Strategy::PURE {
            let expected = cost_breakdown(&chain, strategy).map_err(|e| e.to_string())?.unit_cost;
            for stages in [1.0, n as f64, 2.0 * n as f64] {
                let h = homogenize(&chain, strategy, stages).map_err(|e| e.to_string())?;
                let got = homogenized_unit_cost(&h, strategy).map_err(|e| e.to_string())?;
                worst = worst.max(rel(got, expected));
                evaluations += 1;
            }
        }
    }
    within(start.elapsed(), 10.0)?;
    if worst <= 1e-10 {
        Ok(format!("{evaluations} evaluations, max relative deviation {worst:.2e}"))
    } else {
        Err(format!("max relative deviation {worst:.2e} > 1e-10"))
    }
}

fn recursion_oracle() -> Outcome {
    let start = Instant::now();
    let mut r = rng(12);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let n = r.random_range(1..=20);
        let chain = random_chain(&mut r, n);
        for strategy in [Strategy::Zero, Strategy::Inspection, Strategy::Monitoring, Strategy::General] {
            let v = recursive_volumes(&chain, strategy);
            let (sold, bad) = product_volumes(&chain, strategy);
            worst = worst.max(rel(v.sold, sold)).max(rel(v.defective_sold, bad));
        }
    }
    within(start.elapsed(), 5.0)?;
    if worst <= 1e-12 {
        Ok(format!("4000 chain/strategy pairs, max relative deviation {worst:.2e}"))
    } else {
        Err(format!("max relative deviation {worst:.2e} > 1e-12"))
    }
}

fn monte_carlo_consistency() -> Outcome {
    let start = Instant::now();
    let chain = ref50_with(0.02, 0.8, 0.8).unwrap();
    let chain = maintcost::Chain::new(chain.stages().to_vec(), 1e5, chain.reputation()).unwrap();
    let settings = SimSettings {
        replications: 30,
        seed: 2024,
        ..SimSettings::default()
    };
    let sim = simulate(&chain, Strategy::Inspection, &settings).map_err(|e| e.to_string())?;
    let sold = 1e5 * (1.0f64 - 0.8 * 0.02).powi(50);
    let bad = 1e5 * ((1.0f64 - 0.016).powi(50) - (1.0f64 - 0.02).powi(50));
    let z_sold = (sim.sold_mean - sold) / sim.sold_stderr;
    let z_bad = (sim.defective_sold_mean - bad) / sim.defective_sold_stderr;
    within(start.elapsed(), 60.0)?;
    let detail = format!(
        "X_n {:.1} vs {sold:.1} (z = {z_sold:.2}), X_n_bad {:.1} vs {bad:.1} (z = {z_bad:.2})",
        sim.sold_mean, sim.defective_sold_mean
    );
    if z_sold.abs() <= 4.0 && z_bad.abs() <= 4.0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn saturation_bounds() -> Outcome {
    let zero = homogenize(&ref50_with(1.0, 0.8, 0.8).unwrap(), Strategy::Zero, 50.0).unwrap();
    let cz = homogenized_unit_cost(&zero, Strategy::Zero).unwrap();
    // Monitoring saturates when every stage damages every unit it keeps.
    let saturated = homogenize(&ref50_with(1.0, 0.0, 0.8).unwrap(), Strategy::Monitoring, 50.0).unwrap();
    let cm = homogenized_unit_cost(&saturated, Strategy::Monitoring).unwrap();
    let at_08 = homogenized_unit_cost(&saturated.with_monitoring_effectiveness(0.8), Strategy::Monitoring).unwrap();
    let detail = format!("c_u^z(d=1) = {cz}, c_u^m(d=1) = {cm} (e_m = 0.8 gives {at_08:.5})");
    if (cz - 1002.5).abs() <= 1e-9 && (cm - 1103.0).abs() <= 1e-9 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn ref50_numerics() -> Outcome {
    let q = CriticalQuery::new(StrategyPair::MonitoringVsInspection, &ref50(), 50.0).unwrap();
    let max = max_em_crit(&q).map_err(|e| e.to_string())?.value;
    let d0 = em_crit_at_d0(&q, 0.8).map_err(|e| e.to_string())?.value;
    let inv = ei_for_em_crit_at_d0(&q, 0.4).map_err(|e| e.to_string())?;
    let kmin = kappa_min(&q).map_err(|e| e.to_string())?;
    let detail = format!("max {max:.6}, at d=0 {d0:.6}, inverse e_i {inv:.6}, kappa_min {kmin:.6}");
    let ok = (max - 0.4845).abs() <= 5e-4
        && (d0 - 0.3876).abs() <= 5e-4
        && (inv - 0.826).abs() <= 1e-3
        && (kmin - 0.51545).abs() <= 5e-5;
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn max_pairwise(a: &CriticalCurve, b: &CriticalCurve) -> (f64, usize) {
    let mut worst = 0.0f64;
    let mut compared = 0;
    for (p, q) in a.points.iter().zip(&b.points) {
        if let (Some(x), Some(y)) = (p.value, q.value) {
            if p.in_range() && q.in_range() {
                worst = worst.max((x - y).abs());
                compared += 1;
            }
        }
    }
    (worst, compared)
}

fn triple_method_agreement() -> Outcome {
    let start = Instant::now();
    let grid = default_d_grid();
    let settings = SolveSettings::default();
    let mut details = Vec::new();
    let mut ok = true;
    for pair in [StrategyPair::MonitoringVsZero, StrategyPair::MonitoringVsInspection] {
        let q = CriticalQuery::new(pair, &ref50(), 50.0).unwrap();
        let curve = |m| trace_critical_curve(&q, &grid, m, &settings).unwrap();
        let (direct, rescaled, closed) =
            (curve(CurveMethod::DirectNn), curve(CurveMethod::N1Rescale), curve(CurveMethod::ClosedForm));
        let (dr, nr) = max_pairwise(&direct, &rescaled);
        let (dc, nc) = max_pairwise(&direct, &closed);
        ok &= dr <= 1e-5 && dc <= 1e-5 && nr > 0 && nc > 0;
        details.push(format!(
            "{pair}: |direct-N1| {dr:.1e} over {nr} pts, |direct-closed| {dc:.1e} over {nc} pts"
        ));
    }
    within(start.elapsed(), 120.0)?;
    if ok {
        Ok(details.join("; "))
    } else {
        Err(details.join("; "))
    }
}

/// Minimum of the closed-form monitoring-versus-zero curve on a fine log grid.
fn curve_minimum(kappa: f64) -> Option<(f64, f64)> {
    let h = homogenize(&ref50(), Strategy::Monitoring, 50.0).unwrap().with_strength(kappa).unwrap();
    log_grid(1e-4, 0.9, 20_000)
        .into_iter()
        .filter_map(|d| em_crit_vs_zero_nn(&h.with_defect_rate(d)).ok().map(|v| (d, v.value)))
        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
}

fn figure_landmarks() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;

    let (d1, v1) = curve_minimum(1.0).ok_or("kappa = 1 curve is empty")?;
    let tangency = (v1 - 0.35).abs() <= 0.02 && (d1 - 0.02).abs() <= 0.005;
    ok &= tangency;
    lines.push(format!("tangency e_m {v1:.4} at d {d1:.4} [{}]", verdict(tangency)));

    let q = CriticalQuery::new(StrategyPair::MonitoringVsZero, &ref50(), 50.0)
        .unwrap()
        .with_monitoring_effectiveness(0.8);
    let settings = SolveSettings {
        bracket: (1e-5, 1.0),
        log_scan: true,
        ..SolveSettings::default()
    };
    let roots = find_cost_equality(&q, Parameter::DefectRate, &settings).map_err(|e| e.to_string())?;
    let lower = roots[0];
    let boundary = (2.0e-3..=2.6e-3).contains(&lower);
    ok &= boundary;
    lines.push(format!(
        "lower boundary at e_m 0.8: d {lower:.4e} (target [2.0e-3, 2.6e-3]) [{}]",
        verdict(boundary)
    ));

    let (d4, v4) = curve_minimum(4.0).ok_or("kappa = 4 curve is empty")?;
    let k4 = (v4 - 0.18).abs() <= 0.02 && (d4 - 0.012).abs() <= 0.003;
    ok &= k4;
    lines.push(format!("kappa 4 minimum {v4:.4} at d {d4:.4} [{}]", verdict(k4)));

    let h = homogenize(&ref50(), Strategy::Monitoring, 50.0).unwrap().with_strength(0.2).unwrap();
    let onset_d = d_min_vs_zero(&h).map_err(|e| e.to_string())?;
    let (_, onset_em) = curve_minimum(0.2).ok_or("kappa = 0.2 curve is empty")?;
    let k02 = (onset_em - 0.8).abs() <= 0.02 && (onset_d - 0.015).abs() <= 0.003;
    ok &= k02;
    lines.push(format!(
        "kappa 0.2 onset e_m > {onset_em:.4}, d > {onset_d:.4} [{}]",
        verdict(k02)
    ));

    if ok {
        Ok(lines.join("; "))
    } else {
        Err(lines.join("; "))
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "MISS"
    }
}

fn taylor_error_function() -> Outcome {
    let mut r = rng(13);
    for _ in 0..1000 {
        let gamma: f64 = r.random_range(1e-6..=1.0);
        let e = taylor_error(gamma, 1.0).unwrap().error;
        if e.abs() > 1e-15 {
            return Err(format!("error {e:e} at N = 1, gamma = {gamma}"));
        }
    }
    let grid = log_grid(1.0, 1e6, 400);
    for gamma in [0.5, 0.9, 0.99] {
        let values: Vec<f64> = grid.iter().map(|&n| taylor_error(gamma, n).unwrap().error).collect();
        if let Some(w) = values.windows(2).find(|w| w[1] <= w[0]) {
            return Err(format!("not increasing for gamma {gamma}: {} -> {}", w[0], w[1]));
        }
    }
    let far = taylor_error(0.5, 1e6).unwrap().error;
    let limit = TaylorError::limit(0.5);
    if (far - limit).abs() <= 1e-6 {
        Ok(format!("limit at gamma 0.5: {far:.8} vs {limit:.8}"))
    } else {
        Err(format!("N = 1e6 gives {far}, limit {limit}"))
    }
}

#[derive(Clone, Copy)]
struct Draw {
    n: f64,
    x0: f64,
    fixed: CostTriple,
    variable_c: f64,
    m: f64,
    i: f64,
    d: f64,
    e_m: f64,
    e_i: f64,
    kappa: f64,
}

impl Draw {
    fn random(r: &mut rand_chacha::ChaCha8Rng) -> Self {
        Draw {
            n: r.random_range(2..=200) as f64,
            x0: 10f64.powf(r.random_range(4.0..7.0)),
            fixed: CostTriple::new(r.random_range(0.0..1e5), r.random_range(0.0..1e5), r.random_range(0.0..1e5)),
            variable_c: r.random_range(1.0..50.0),
            m: r.random_range(0.0..5.0),
            i: r.random_range(0.0..5.0),
            d: 10f64.powf(r.random_range(-4.0..-0.3)),
            e_m: r.random(),
            e_i: r.random(),
            kappa: r.random_range(0.05..5.0),
        }
    }

    fn chain(&self) -> HomogenizedChain {
        HomogenizedChain {
            stages: self.n,
            fixed: self.fixed,
            defect_rate: self.d,
            monitoring_effectiveness: self.e_m,
            inspection_effectiveness: self.e_i,
            variable: CostTriple::new(self.variable_c, self.m, self.i),
            initial_volume: self.x0,
            reputation: Reputation::with_strength(self.kappa).unwrap(),
            source_stages: self.n as usize,
        }
    }

    fn query(&self, pair: StrategyPair) -> CriticalQuery {
        CriticalQuery::from_homogenized(pair, &self.chain())
    }
}

/// Draws until `accept` holds 1000 times; returns the number of sign violations.
fn property(seed: u64, mut draw: impl FnMut(&mut rand_chacha::ChaCha8Rng) -> Option<bool>) -> Result<usize, String> {
    let mut r = rng(seed);
    let mut accepted = 0;
    let mut violations = 0;
    let mut attempts = 0;
    while accepted < 1000 {
        attempts += 1;
        if attempts > 200_000 {
            return Err(format!("only {accepted} admissible draws"));
        }
        if let Some(holds) = draw(&mut r) {
            accepted += 1;
            violations += usize::from(!holds);
        }
    }
    Ok(violations)
}

fn zero_threshold_monotonicity() -> Result<usize, String> {
    property(21, |r| {
        let base = Draw::random(r);
        let v = |d: &Draw| em_crit_vs_zero_nn(&d.chain()).ok().map(|c| c.value);
        let v0 = v(&base)?;
        let more_kappa = v(&Draw { kappa: base.kappa * 1.01, ..base })?;
        let more_c = v(&Draw { variable_c: base.variable_c * 1.01, ..base })?;
        let mut fixed = base.fixed;
        fixed.monitoring += 0.01 * base.x0;
        let more_big_m = v(&Draw { fixed, ..base })?;
        let more_m = v(&Draw { m: base.m + 0.01, ..base })?;
        Some(more_kappa < v0 && more_c < v0 && more_big_m > v0 && more_m > v0)
    })
}

/// Monitoring-superiority interval `[a, b]` in `d` against zero maintenance.
fn superiority_interval(h: &HomogenizedChain) -> Option<(f64, f64)> {
    let q = CriticalQuery::from_homogenized(StrategyPair::MonitoringVsZero, h);
    let settings = SolveSettings {
        tolerance: 1e-9,
        bracket: (1e-7, 1.0),
        log_scan: true,
        scan_samples: 256,
        ..SolveSettings::default()
    };
    let roots = find_cost_equality(&q, Parameter::DefectRate, &settings).ok()?;
    let wins_at_one = q.with_defect_rate(1.0).relative_difference() < 0.0;
    match (roots.as_slice(), wins_at_one) {
        ([a, b], false) => Some((*a, *b)),
        ([a], true) => Some((*a, 1.0)),
        _ => None,
    }
}

fn with_stages(h: &HomogenizedChain, total: &HomogenizedChain, n: f64) -> HomogenizedChain {
    HomogenizedChain {
        stages: n,
        source_stages: n as usize,
        fixed: total.fixed.scaled(1.0 / n),
        variable: total.variable.scaled(1.0 / n),
        ..*h
    }
}

fn superiority_interval_shrinks() -> Result<usize, String> {
    property(23, |r| {
        let draw = Draw::random(r);
        let total = HomogenizedChain {
            fixed: draw.fixed.scaled(50.0),
            variable: CostTriple::new(draw.variable_c, draw.m, draw.i).scaled(50.0),
            ..draw.chain()
        };
        let n1 = r.random_range(2..=100) as f64;
        let n2 = (n1 * r.random_range(1.5..4.0)).round();
        let (a1, b1) = superiority_interval(&with_stages(&draw.chain(), &total, n1))?;
        if b1 >= 1.0 {
            return None;
        }
        let width2 = superiority_interval(&with_stages(&draw.chain(), &total, n2)).map_or(0.0, |(a, b)| b - a);
        Some(width2 < b1 - a1)
    })
}

/// Closed-form monitoring-versus-zero curve on a log grid above `d_min`.
fn zero_curve(h: &HomogenizedChain) -> Option<Vec<f64>> {
    let d_min = d_min_vs_zero(h).ok()?;
    let lo = (d_min * (1.0 + 1e-6)).max(1e-9);
    log_grid(lo, 1.0, 3000)
        .into_iter()
        .map(|d| em_crit_vs_zero_nn(&h.with_defect_rate(d)).ok().map(|v| v.value))
        .collect()
}

fn unimodal_minimum(values: &[f64]) -> Option<f64> {
    let (k, &min) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.partial_cmp(b.1).unwrap())?;
    let tol = 1e-12;
    let down = values[..=k].windows(2).all(|w| w[1] <= w[0] + tol);
    let up = values[k..].windows(2).all(|w| w[1] >= w[0] - tol);
    (down && up && min > 0.0).then_some(min)
}

fn zero_curve_single_minimum() -> Result<usize, String> {
    property(24, |r| {
        let draw = Draw::random(r);
        let total = HomogenizedChain {
            fixed: draw.fixed.scaled(50.0),
            variable: CostTriple::new(draw.variable_c, draw.m, draw.i).scaled(50.0),
            ..draw.chain()
        };
        let c50 = zero_curve(&with_stages(&draw.chain(), &total, 50.0))?;
        let c500 = zero_curve(&with_stages(&draw.chain(), &total, 500.0))?;
        Some(match (unimodal_minimum(&c50), unimodal_minimum(&c500)) {
            (Some(a), Some(b)) => rel(a, b) < 0.02,
            _ => false,
        })
    })
}

/// Draw with equal per-stage monitoring and inspection costs.
fn balanced(r: &mut rand_chacha::ChaCha8Rng) -> Draw {
    let mut d = Draw::random(r);
    d.fixed.inspection = d.fixed.monitoring;
    d.i = d.m;
    d
}

fn inspection_curve(q: &CriticalQuery, grid: &[f64]) -> Vec<Option<f64>> {
    grid.iter()
        .map(|&d| {
            let qd = q.with_defect_rate(d);
            em_crit_vs_rival_cost(&qd.subject, qd.rival_cost())
                .ok()
                .map(|v| v.value)
                .filter(|v| v.is_finite())
        })
        .collect()
}

fn inspection_supremum_at_zero_d() -> Result<usize, String> {
    let grid = log_grid(1e-4, 0.5, 200);
    property(25, |r| {
        let q = balanced(r).query(StrategyPair::MonitoringVsInspection);
        let sup_d0 = em_crit_at_d0(&q, q.rival.inspection_effectiveness).ok()?.value;
        let curve: Vec<f64> = inspection_curve(&q, &grid).into_iter().flatten().collect();
        if curve.is_empty() {
            return None;
        }
        Some(curve.iter().all(|&v| v <= sup_d0 + 1e-9))
    })
}

fn curves_ordered_by_cost_gap() -> Result<usize, String> {
    let grid = log_grid(1e-4, 0.5, 100);
    property(27, |r| {
        let low = Draw::random(r);
        let mut high = low;
        if r.random::<bool>() {
            high.fixed.monitoring += r.random_range(0.0..2.0) * low.x0;
        } else {
            high.m += r.random_range(0.0..2.0);
        }
        let a = inspection_curve(&low.query(StrategyPair::MonitoringVsInspection), &grid);
        let b = inspection_curve(&high.query(StrategyPair::MonitoringVsInspection), &grid);
        let pairs: Vec<(f64, f64)> = a.iter().zip(&b).filter_map(|(x, y)| Some(((*x)?, (*y)?))).collect();
        if pairs.is_empty() {
            return None;
        }
        Some(pairs.iter().all(|&(x, y)| y >= x - 1e-12))
    })
}

fn threshold_rises_with_kappa_and_ei() -> Result<usize, String> {
    property(28, |r| {
        let mut base = Draw::random(r);
        base.fixed.inspection = base.fixed.monitoring + base.x0 * (base.m - base.i) + r.random_range(0.0..1e5);
        if base.fixed.inspection < 0.0 || base.e_i > 0.99 {
            return None;
        }
        let v = |d: &Draw| {
            let q = d.query(StrategyPair::MonitoringVsInspection);
            em_crit_vs_rival_cost(&q.subject, q.rival_cost())
                .ok()
                .map(|c| c.value)
                .filter(|v| *v > 0.0 && *v < 1.0)
        };
        let v0 = v(&base)?;
        let vk = v(&Draw { kappa: base.kappa * 1.01, ..base })?;
        let ve = v(&Draw { e_i: base.e_i + 0.01, ..base })?;
        Some(vk > v0 && ve > v0)
    })
}

fn property_suite() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, run) in [
        ("monotonicity vs zero", zero_threshold_monotonicity as fn() -> Result<usize, String>),
        ("interval shrinks in n", superiority_interval_shrinks),
        ("single minimum", zero_curve_single_minimum),
        ("supremum at d=0", inspection_supremum_at_zero_d),
        ("no crossing", curves_ordered_by_cost_gap),
        ("rises with kappa and e_i", threshold_rises_with_kappa_and_ei),
    ] {
        match run() {
            Ok(0) => lines.push(format!("{name}: 0/1000 violations")),
            Ok(v) => {
                ok = false;
                lines.push(format!("{name}: {v}/1000 violations"));
            }
            Err(e) => {
                ok = false;
                lines.push(format!("{name}: {e}"));
            }
        }
    }

    let q = CriticalQuery::new(StrategyPair::MonitoringVsInspection, &ref50(), 50.0).unwrap();
    let d_grid = log_grid(1e-4, 0.5, 50);
    let ei_grid = linear_grid(0.0, 1.0, 40);
    let surface = superiority_surface(&q, &d_grid, &ei_grid, CurveMethod::DirectNn, &SolveSettings::default())
        .map_err(|e| e.to_string())?;
    let max = surface.maximum().ok_or("surface has no finite value")?;
    let max_value = max.point.value.unwrap();
    let corner = surface.cell(0, ei_grid.len() - 1).point.value.ok_or("corner undefined")?;
    let surface_ok = max_value < 0.5 && (corner - 0.4845).abs() <= 2e-3;
    ok &= surface_ok;
    lines.push(format!(
        "surface 50x40: max {max_value:.5} at (d {:.1e}, e_i {:.3}), corner {corner:.5} [{}]",
        max.d,
        max.e_i,
        verdict(surface_ok)
    ));

    if ok {
        Ok(lines.join("; "))
    } else {
        Err(lines.join("; "))
    }
}

fn main() {
    let mut suite = Suite { failed: Vec::new() };
    suite.run("homogenization exactness", homogenization_exactness);
    suite.run("recursion oracle", recursion_oracle);
    suite.run("monte carlo consistency", monte_carlo_consistency);
    suite.run("saturation bounds", saturation_bounds);
    suite.run("reference numerics", ref50_numerics);
    suite.run("triple-method agreement", triple_method_agreement);
    suite.run("figure landmarks", figure_landmarks);
    suite.run("taylor error function", taylor_error_function);
    suite.run("threshold property suite", property_suite);
    if suite.failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: {} failed: {}", suite.failed.len(), suite.failed.join(", "));
        std::process::exit(1);
    }
}
