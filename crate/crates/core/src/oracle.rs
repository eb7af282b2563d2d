//! Independent checks of the volume formulas: the exact stage-by-stage
//! recursion and a unit-level Monte Carlo simulation.
//!
//! Simulation semantics per unit still in flow at stage `k`: with probability
//! `(1 - e_mk) d_k` the stage damages it (a unit that is already defective
//! stays singly defective); a unit damaged at this stage is removed with
//! probability `e_ik`. Older defects are invisible to inspection.
//!
//! Random numbers are addressed by position: unit `u` at stage `k` of
//! replication `r` uses words `2 (u n + k)` and `2 (u n + k) + 1` of ChaCha8
//! stream `r` under the given seed, so results do not depend on scheduling.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::chain::{Chain, Strategy};
use crate::error::{Error, Result};

/// Expected sold and defective sold volume by forward recursion over the stages.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Volumes {
    pub sold: f64,
    pub defective_sold: f64,
}

pub fn recursive_volumes(chain: &Chain, strategy: Strategy) -> Volumes {
    let chain = strategy.mask(chain);
    let mut volume = chain.initial_volume();
    let mut defective = 0.0;
    for s in chain.stages() {
        let hit = (1.0 - s.monitoring_effectiveness) * s.defect_rate;
        let previous = volume;
        volume = previous - s.inspection_effectiveness * hit * previous;
        defective = defective * (1.0 - hit) + previous * (1.0 - s.inspection_effectiveness) * hit;
    }
    Volumes {
        sold: volume,
        defective_sold: defective,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimSettings {
    pub replications: usize,
    pub seed: u64,
    /// Upper bound on `X0 * replications`.
    pub unit_budget: f64,
    pub trace: bool,
}

impl Default for SimSettings {
    fn default() -> Self {
        Self {
            replications: 30,
            seed: 0,
            unit_budget: 1e10,
            trace: false,
        }
    }
}

/// Mean counts per stage over replications.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StageTrace {
    /// Units in flow after the stage.
    pub volume: f64,
    /// Defective units in flow after the stage.
    pub defective: f64,
    pub removed: f64,
    /// `(1 - e_mk) d_k`.
    pub effective_defect_rate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Replication {
    pub sold: u64,
    pub defective_sold: u64,
    /// `kappa * (C_var / X_n) * X_n_bad` on this replication's volumes.
    pub warranty: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    pub sold_mean: f64,
    pub defective_sold_mean: f64,
    pub sold_stderr: f64,
    pub defective_sold_stderr: f64,
    pub warranty_mean: f64,
    pub warranty_stderr: f64,
    pub replications: usize,
    pub seed: u64,
    pub runs: Vec<Replication>,
    pub per_stage_trace: Option<Vec<StageTrace>>,
}

const CHUNK: u64 = 4096;

#[derive(Clone)]
struct Counts {
    volume: Vec<u64>,
    defective: Vec<u64>,
    removed: Vec<u64>,
}

impl Counts {
    fn zeros(n: usize) -> Self {
        Self {
            volume: vec![0; n],
            defective: vec![0; n],
            removed: vec![0; n],
        }
    }

    fn add(mut self, other: &Counts) -> Self {
        for k in 0..self.volume.len() {
            self.volume[k] += other.volume[k];
            self.defective[k] += other.defective[k];
            self.removed[k] += other.removed[k];
        }
        self
    }
}

fn threshold(p: f64) -> u64 {
    (p * 4_294_967_296.0) as u64
}

fn simulate_chunk(thresholds: &[(u64, u64)], seed: u64, replication: u64, start: u64, end: u64) -> Counts {
    let n = thresholds.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replication);
    rng.set_word_pos(2 * start as u128 * n as u128);
    let mut counts = Counts::zeros(n);
    for _ in start..end {
        let mut in_flow = true;
        let mut defective = false;
        for (k, &(hit_t, remove_t)) in thresholds.iter().enumerate() {
            let u_hit = rng.next_u32() as u64;
            let u_remove = rng.next_u32() as u64;
            if !in_flow {
                continue;
            }
            if u_hit < hit_t {
                defective = true;
                if u_remove < remove_t {
                    in_flow = false;
                    counts.removed[k] += 1;
                    continue;
                }
            }
            counts.volume[k] += 1;
            if defective {
                counts.defective[k] += 1;
            }
        }
    }
    counts
}

fn mean_stderr(xs: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = xs.clone().count() as f64;
    let mean = xs.clone().sum::<f64>() / n;
    if n < 2.0 {
        return (mean, 0.0);
    }
    let var = xs.map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Simulates `X0` individual units through the masked chain.
pub fn simulate(chain: &Chain, strategy: Strategy, settings: &SimSettings) -> Result<SimResult> {
    let chain = strategy.mask(chain);
    let x0 = chain.initial_volume();
    if x0.fract() != 0.0 || x0 > u64::MAX as f64 {
        return Err(Error::InvalidParameter {
            name: "X0",
            value: x0,
            reason: "simulation needs an integer unit count",
        });
    }
    if settings.replications == 0 {
        return Err(Error::InvalidParameter {
            name: "replications",
            value: 0.0,
            reason: "must be at least 1",
        });
    }
    let requested = x0 * settings.replications as f64;
    if requested > settings.unit_budget {
        return Err(Error::Overflow {
            requested,
            budget: settings.unit_budget,
        });
    }
    let units = x0 as u64;
    let n = chain.len();
    let thresholds: Vec<(u64, u64)> = chain
        .stages()
        .iter()
        .map(|s| (threshold(s.effective_defect_rate()), threshold(s.inspection_effectiveness)))
        .collect();
    let chunks = units.div_ceil(CHUNK);
    let per_replication: Vec<Counts> = (0..settings.replications as u64)
        .into_par_iter()
        .map(|r| {
            (0..chunks)
                .into_par_iter()
                .map(|c| simulate_chunk(&thresholds, settings.seed, r, c * CHUNK, ((c + 1) * CHUNK).min(units)))
                .reduce(|| Counts::zeros(n), |a, b| a.add(&b))
        })
        .collect();

    let kappa = chain.reputation().strength();
    let runs: Vec<Replication> = per_replication
        .iter()
        .map(|c| {
            let sold = c.volume[n - 1];
            let defective_sold = c.defective[n - 1];
            let mut entering = x0;
            let mut variable = 0.0;
            for (k, s) in chain.stages().iter().enumerate() {
                variable += s.variable.sum() * entering;
                entering = c.volume[k] as f64;
            }
            let warranty = if sold == 0 {
                0.0
            } else {
                kappa * variable / sold as f64 * defective_sold as f64
            };
            Replication {
                sold,
                defective_sold,
                warranty,
            }
        })
        .collect();

    let (sold_mean, sold_stderr) = mean_stderr(runs.iter().map(|r| r.sold as f64));
    let (defective_sold_mean, defective_sold_stderr) = mean_stderr(runs.iter().map(|r| r.defective_sold as f64));
    let (warranty_mean, warranty_stderr) = mean_stderr(runs.iter().map(|r| r.warranty));
    let per_stage_trace = settings.trace.then(|| {
        let reps = settings.replications as f64;
        let total = per_replication
            .iter()
            .fold(Counts::zeros(n), |acc, c| acc.add(c));
        chain
            .stages()
            .iter()
            .enumerate()
            .map(|(k, s)| StageTrace {
                volume: total.volume[k] as f64 / reps,
                defective: total.defective[k] as f64 / reps,
                removed: total.removed[k] as f64 / reps,
                effective_defect_rate: s.effective_defect_rate(),
            })
            .collect()
    });
    Ok(SimResult {
        sold_mean,
        defective_sold_mean,
        sold_stderr,
        defective_sold_stderr,
        warranty_mean,
        warranty_stderr,
        replications: settings.replications,
        seed: settings.seed,
        runs,
        per_stage_trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::{CostTriple, Reputation, StageParams};

    fn one_stage(d: f64, e_i: f64, x0: f64) -> Chain {
        let s = StageParams {
            defect_rate: d,
            monitoring_effectiveness: 0.0,
            inspection_effectiveness: e_i,
            variable: CostTriple::new(1.0, 0.0, 0.0),
            fixed: CostTriple::default(),
        };
        Chain::new(vec![s], x0, Reputation::new(0.5, 1.0).unwrap()).unwrap()
    }

    #[test]
    fn recursion_base_case() {
        let v = recursive_volumes(&one_stage(0.1, 0.5, 1000.0), Strategy::Inspection);
        assert!((v.sold - 950.0).abs() < 1e-12);
        assert!((v.defective_sold - 50.0).abs() < 1e-12);
    }

    #[test]
    fn perfect_inspection_sells_no_defects() {
        let v = recursive_volumes(&one_stage(0.3, 1.0, 1000.0), Strategy::Inspection);
        assert_eq!(v.defective_sold, 0.0);
    }

    #[test]
    fn defect_free_simulation_has_no_variance() {
        let r = simulate(&one_stage(0.0, 0.5, 5000.0), Strategy::General, &SimSettings::default()).unwrap();
        assert_eq!(r.sold_mean, 5000.0);
        assert_eq!(r.defective_sold_mean, 0.0);
        assert_eq!(r.sold_stderr, 0.0);
    }

    #[test]
    fn seeded_runs_repeat() {
        let chain = one_stage(0.2, 0.5, 10_000.0);
        let s = SimSettings {
            replications: 4,
            seed: 7,
            trace: true,
            ..SimSettings::default()
        };
        let a = simulate(&chain, Strategy::Inspection, &s).unwrap();
        let b = simulate(&chain, Strategy::Inspection, &s).unwrap();
        assert_eq!(a, b);
        let c = simulate(&chain, Strategy::Inspection, &SimSettings { seed: 8, ..s }).unwrap();
        assert_ne!(a.runs, c.runs);
        let t = a.per_stage_trace.unwrap();
        assert!((t[0].volume + t[0].removed - 10_000.0).abs() < 1e-9);
    }

    #[test]
    fn input_checks() {
        let s = SimSettings::default();
        assert!(simulate(&one_stage(0.1, 0.5, 10.5), Strategy::General, &s).is_err());
        let big = SimSettings {
            unit_budget: 100.0,
            ..s
        };
        assert!(matches!(
            simulate(&one_stage(0.1, 0.5, 10.0), Strategy::General, &big),
            Err(Error::Overflow { .. })
        ));
        let none = SimSettings { replications: 0, ..s };
        assert!(simulate(&one_stage(0.1, 0.5, 10.0), Strategy::General, &none).is_err());
    }
}
