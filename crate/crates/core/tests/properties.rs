mod common;

use common::rel;
use maintcost::homogenize::{homogenize, homogenized_unit_cost, rescale, Conserved, HomogenizedChain};
use maintcost::{cost_breakdown, defective_sold_volume, sold_volume, Chain, CostTriple, Reputation, StageParams};
use proptest::prelude::*;

fn strategy() -> impl Strategy<Value = maintcost::Strategy> {
    prop_oneof![
        Just(maintcost::Strategy::Zero),
        Just(maintcost::Strategy::Inspection),
        Just(maintcost::Strategy::Monitoring),
        Just(maintcost::Strategy::General),
    ]
}

prop_compose! {
    fn stage()(
        d in 0.0..0.5f64,
        em in 0.0..=1.0f64,
        ei in 0.0..=1.0f64,
        c in 0.0..100.0f64,
        m in 0.0..10.0f64,
        i in 0.0..10.0f64,
        fc in 0.0..1e5f64,
        fm in 0.0..1e5f64,
        fi in 0.0..1e5f64,
    ) -> StageParams {
        StageParams {
            defect_rate: d,
            monitoring_effectiveness: em,
            inspection_effectiveness: ei,
            variable: CostTriple::new(c, m, i),
            fixed: CostTriple::new(fc, fm, fi),
        }
    }
}

prop_compose! {
    fn chain()(
        stages in prop::collection::vec(stage(), 1..30),
        x0 in 1e3..1e7f64,
        alpha in 0.0..=1.0f64,
        beta in 0.0..3.0f64,
    ) -> Chain {
        Chain::new(stages, x0, Reputation::new(alpha, beta).unwrap()).unwrap()
    }
}

fn close(a: &Conserved, b: &Conserved, tol: f64) -> bool {
    let logs = [
        (a.ln_defect_free, b.ln_defect_free),
        (a.ln_intact, b.ln_intact),
        (a.ln_survival, b.ln_survival),
    ];
    let log_ok = logs.iter().all(|&(x, y)| (x - y).abs() <= tol * (1.0 + y.abs()));
    let triple = |x: CostTriple, y: CostTriple| {
        [(x.production, y.production), (x.monitoring, y.monitoring), (x.inspection, y.inspection)]
            .iter()
            .all(|&(p, q)| (p - q).abs() <= tol * (1.0 + q.abs()))
    };
    log_ok && triple(a.fixed_total, b.fixed_total) && triple(a.variable_total, b.variable_total)
}

fn fields(h: &HomogenizedChain) -> [f64; 9] {
    [
        h.defect_rate,
        h.monitoring_effectiveness,
        h.inspection_effectiveness,
        h.fixed.production,
        h.fixed.monitoring,
        h.fixed.inspection,
        h.variable.production,
        h.variable.monitoring,
        h.variable.inspection,
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn masking_is_idempotent(c in chain(), s in strategy()) {
        let once = s.mask(&c);
        prop_assert_eq!(s.mask(&once), once.clone());
        let h = homogenize(&c, maintcost::Strategy::General, 7.0).unwrap();
        prop_assert_eq!(h.masked(s).masked(s), h.masked(s));
    }

    #[test]
    fn homogenization_conserves_products(c in chain(), s in strategy(), n in 0.5..200.0f64) {
        let h = homogenize(&c, s, n).unwrap();
        let expected = Conserved::of_chain(&s.mask(&c));
        prop_assert!(close(&Conserved::of_homogenized(&h), &expected, 1e-10));
    }

    #[test]
    fn homogenized_cost_is_chain_cost(c in chain(), s in strategy(), n in 0.5..200.0f64) {
        let h = homogenize(&c, s, n).unwrap();
        let direct = cost_breakdown(&c, s).unwrap().unit_cost;
        prop_assert!(rel(homogenized_unit_cost(&h, s).unwrap(), direct) < 1e-9);
    }

    #[test]
    fn rescale_round_trip(c in chain(), n1 in 0.5..200.0f64, n2 in 0.5..200.0f64) {
        let h = homogenize(&c, maintcost::Strategy::General, n1).unwrap();
        let back = rescale(&rescale(&h, n2).unwrap(), n1).unwrap();
        prop_assert!(close(&Conserved::of_homogenized(&back), &Conserved::of_homogenized(&h), 1e-10));
        for (a, b) in fields(&back).into_iter().zip(fields(&h)) {
            prop_assert!((a - b).abs() <= 1e-8 * (1.0 + b.abs()), "{a} vs {b}");
        }
    }

    #[test]
    fn sold_volume_falls_and_defects_rise_with_d(c in chain(), k in 0usize..30, bump in 0.0..0.5f64) {
        let k = k % c.len();
        let worse = c.map_stages({
            let mut j = 0;
            move |s| {
                let mut s = *s;
                if j == k {
                    s.defect_rate = (s.defect_rate + bump).min(1.0);
                }
                j += 1;
                s
            }
        }).unwrap();
        let tol = 1e-9 * c.initial_volume();
        prop_assert!(sold_volume(&worse, maintcost::Strategy::Inspection) <= sold_volume(&c, maintcost::Strategy::Inspection) + tol);
        prop_assert!(defective_sold_volume(&worse, maintcost::Strategy::Zero) >= defective_sold_volume(&c, maintcost::Strategy::Zero) - tol);
    }

    #[test]
    fn monitoring_cost_falls_with_effectiveness(c in chain(), lo in 0.0..=1.0f64, hi in 0.0..=1.0f64) {
        let (lo, hi) = (lo.min(hi), lo.max(hi));
        let h = homogenize(&c, maintcost::Strategy::Monitoring, c.len() as f64).unwrap();
        let at = |e: f64| homogenized_unit_cost(&h.with_monitoring_effectiveness(e), maintcost::Strategy::Monitoring).unwrap();
        prop_assert!(at(hi) <= at(lo) * (1.0 + 1e-12));
    }
}
