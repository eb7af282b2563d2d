#![allow(dead_code)]

use maintcost::{Chain, CostTriple, Reputation, StageParams, Strategy};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / b.abs().max(a.abs())
    }
}

pub fn random_stage(rng: &mut ChaCha8Rng) -> StageParams {
    StageParams {
        defect_rate: rng.random(),
        monitoring_effectiveness: rng.random(),
        inspection_effectiveness: rng.random(),
        variable: CostTriple::new(
            rng.random_range(0.0..100.0),
            rng.random_range(0.0..10.0),
            rng.random_range(0.0..10.0),
        ),
        fixed: CostTriple::new(
            rng.random_range(0.0..1e5),
            rng.random_range(0.0..1e5),
            rng.random_range(0.0..1e5),
        ),
    }
}

/// Heterogeneous chain with every parameter uniform in its valid range.
pub fn random_chain(rng: &mut ChaCha8Rng, n: usize) -> Chain {
    let stages = (0..n).map(|_| random_stage(rng)).collect();
    let reputation = Reputation::new(rng.random(), rng.random_range(0.0..3.0)).unwrap();
    Chain::new(stages, rng.random_range(1e3..1e7), reputation).unwrap()
}

/// Masks parameters the way each strategy switches activities off.
pub fn mask(s: &StageParams, strategy: Strategy) -> StageParams {
    let mut s = *s;
    if !matches!(strategy, Strategy::Monitoring | Strategy::General) {
        s.monitoring_effectiveness = 0.0;
        s.fixed.monitoring = 0.0;
        s.variable.monitoring = 0.0;
    }
    if !matches!(strategy, Strategy::Inspection | Strategy::General) {
        s.inspection_effectiveness = 0.0;
        s.fixed.inspection = 0.0;
        s.variable.inspection = 0.0;
    }
    s
}

/// Double-double value `hi + lo`.
#[derive(Debug, Clone, Copy)]
pub struct Dd(pub f64, pub f64);

fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let v = s - a;
    Dd(s, (a - (s - v)) + (b - v))
}

impl Dd {
    pub fn from(x: f64) -> Self {
        Dd(x, 0.0)
    }

    pub fn add(self, o: Dd) -> Dd {
        let s = two_sum(self.0, o.0);
        let t = s.1 + self.1 + o.1;
        two_sum(s.0, t)
    }

    pub fn neg(self) -> Dd {
        Dd(-self.0, -self.1)
    }

    pub fn mul(self, o: Dd) -> Dd {
        let p = self.0 * o.0;
        let e = self.0.mul_add(o.0, -p);
        two_sum(p, e + self.0 * o.1 + self.1 * o.0)
    }

    pub fn value(self) -> f64 {
        self.0 + self.1
    }
}

/// Sold and defective sold volume from the closed product forms, evaluated
/// in double-double so the difference of products keeps full precision.
pub fn product_volumes(chain: &Chain, strategy: Strategy) -> (f64, f64) {
    let one = Dd::from(1.0);
    let mut survival = one;
    let mut intact = one;
    for s in chain.stages() {
        let s = mask(s, strategy);
        let hit = one.add(Dd::from(s.monitoring_effectiveness).neg()).mul(Dd::from(s.defect_rate));
        survival = survival.mul(one.add(Dd::from(s.inspection_effectiveness).mul(hit).neg()));
        intact = intact.mul(one.add(hit.neg()));
    }
    let x0 = Dd::from(chain.initial_volume());
    (x0.mul(survival).value(), x0.mul(survival.add(intact.neg())).value())
}

/// Unit cost written out from fixed, variable and warranty cost totals.
pub fn reference_unit_cost(chain: &Chain, strategy: Strategy) -> f64 {
    let x0 = chain.initial_volume();
    let mut volume = x0;
    let mut fixed = 0.0;
    let mut variable = 0.0;
    for s in chain.stages() {
        let s = mask(s, strategy);
        fixed += s.fixed.sum();
        variable += s.variable.sum() * volume;
        volume *= 1.0 - s.inspection_effectiveness * (1.0 - s.monitoring_effectiveness) * s.defect_rate;
    }
    let (sold, bad) = product_volumes(chain, strategy);
    let warranty = chain.reputation().strength() * variable / sold * bad;
    (fixed + variable + warranty) / sold
}
