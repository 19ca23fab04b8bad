mod common;

use common::*;
use proptest::prelude::*;
use psisolve_core::{estimate, Family, Options, OutcomeKind};

/// Families with an analytic ϑ₁, including the non-strict ones.
const THETA1_SPECS: [&str; 17] = [
    "median",
    "quantile:alpha=0.3",
    "expectile:alpha=0.7",
    "mathieu:huber:beta=1",
    "mathieu:catoni:b=2",
    "mathieu:poly:p=3,beta=2",
    "mathieu:catoni2:alpha=1.5",
    "mathieu:l1l2",
    "mathieu:fair",
    "bajraktarevic:id",
    "bajraktarevic:cube:c=1",
    "bajraktarevic:exp",
    "normal-mean:sigma=2",
    "normal-var:m=0",
    "normal-var:raw:m=1",
    "ism",
    "normal-mixture:sigma=1",
];

const MATHIEU_SPECS: [&str; 6] = [
    "mathieu:huber:beta=1",
    "mathieu:catoni:b=2",
    "mathieu:poly:p=2,beta=1",
    "mathieu:catoni2:alpha=1.5",
    "mathieu:l1l2",
    "mathieu:fair",
];

fn rescaled(fam: &Family) -> Family {
    fam.rescaled("(2+sin t)", |t: f64| 2.0 + t.sin())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn theta1_separates_signs(idx in 0..THETA1_SPECS.len(), u in 0.0..1.0f64) {
        let fam = family(THETA1_SPECS[idx]);
        let x = point_in(&fam, u);
        let c = fam.theta1(x).unwrap();
        for k in 0..16 {
            let d = 1e-6 * 2f64.powi(k);
            let left = c - d;
            let right = c + d;
            if fam.theta().contains(left) {
                prop_assert!(fam.psi(x, left) > 0.0, "{}: psi({x}, {left})", fam.name());
            }
            if fam.theta().contains(right) {
                prop_assert!(fam.psi(x, right) < 0.0, "{}: psi({x}, {right})", fam.name());
            }
        }
    }

    #[test]
    fn strict_decrease_flag_is_honest(idx in 0..STRICT_SPECS.len(), u in 0.0..1.0f64, a in 0.0..1.0f64, b in 0.0..1.0f64) {
        let fam = family(STRICT_SPECS[idx]);
        prop_assert!(fam.is_strictly_decreasing_in_t());
        let x = point_in(&fam, u);
        let grid = fam.theta().grid(64, 1.0);
        let (i, j) = ((a * 63.0) as usize, (b * 63.0) as usize);
        prop_assume!(i != j);
        let (t1, t2) = (grid[i.min(j)], grid[i.max(j)]);
        let (p1, p2) = (fam.psi(x, t1), fam.psi(x, t2));
        prop_assert!(p1 > p2 || (p1 - p2).abs() <= 1e-12 * p1.abs().max(1.0), "{}: x={x} t1={t1} t2={t2}", fam.name());
    }

    #[test]
    fn mathieu_families_are_odd(idx in 0..MATHIEU_SPECS.len(), x in -20.0..20.0f64, t in -20.0..20.0f64) {
        let fam = family(MATHIEU_SPECS[idx]);
        prop_assert_eq!(fam.psi(x, t), -fam.psi(t, x));
    }

    #[test]
    fn rescaling_by_positive_factor_keeps_estimates(idx in 0..THETA1_SPECS.len(), raw in raw_sample(9)) {
        let fam = family(THETA1_SPECS[idx]);
        let sample = sample_in(&fam, &raw);
        let opts = Options::default();
        let base = estimate(&fam, &sample, &opts).unwrap().outcome;
        let scaled = estimate(&rescaled(&fam), &sample, &opts).unwrap().outcome;
        prop_assert_eq!(base.kind(), scaled.kind());
        if base.kind() == OutcomeKind::Point {
            prop_assert!((base.location().unwrap() - scaled.location().unwrap()).abs() <= 100.0 * opts.tolerance);
        }
    }
}

#[test]
fn strictly_increasing_mathieu_functions() {
    use psisolve_core::{eval_f_mathieu, MathieuKind};
    let kinds = [
        MathieuKind::Catoni { b: 0.5 },
        MathieuKind::Polynomial { p: 4, beta: 2.0 },
        MathieuKind::Catoni2 { alpha: 1.2 },
        MathieuKind::L1L2,
        MathieuKind::Fair,
    ];
    for kind in kinds {
        let values: Vec<f64> = (0..400).map(|k| eval_f_mathieu(&kind, k as f64 * 0.05)).collect();
        assert_eq!(values[0], 0.0);
        assert!(values.windows(2).all(|w| w[0] < w[1]), "{kind:?}");
    }
}
