mod common;

use common::*;
use proptest::prelude::*;
use psisolve_core::estimators::empirical_quantile;
use psisolve_core::{closed_form, estimate, Estimate, Family, Options, OutcomeKind, Sample};

const CLOSED_FORM_SPECS: [&str; 9] = [
    "bajraktarevic:id",
    "bajraktarevic:cube",
    "bajraktarevic:exp:c=1",
    "normal-mean:sigma=1",
    "normal-var:m=0",
    "normal-var:raw:m=2",
    "ism",
    "median",
    "quantile:alpha=0.37",
];

fn same(a: &Estimate, b: &Estimate, tol: f64) -> bool {
    a.outcome.kind() == b.outcome.kind()
        && match (a.outcome.location(), b.outcome.location()) {
            (Some(x), Some(y)) => (x - y).abs() <= tol,
            (None, None) => true,
            _ => false,
        }
}

fn run(fam: &Family, s: &Sample) -> Estimate {
    estimate(fam, s, &Options::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn solver_agrees_with_closed_form(idx in 0..CLOSED_FORM_SPECS.len(), raw in raw_sample(20), equal in any::<bool>()) {
        let fam = family(CLOSED_FORM_SPECS[idx]);
        let mut sample = sample_in(&fam, &raw);
        if equal {
            sample = Sample::unit(sample.points().to_vec()).unwrap();
        }
        let r = run(&fam, &sample);
        prop_assert_eq!(r.agreement.is_some(), r.outcome.is_point() && r.closed_form.is_some());
        if let Some(d) = r.agreement {
            prop_assert!(d <= 100.0 * Options::default().tolerance, "{}: {d}", fam.name());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn positive_weight_scaling(idx in 0..STRICT_SPECS.len(), raw in raw_sample(12)) {
        let fam = family(STRICT_SPECS[idx]);
        let s = sample_in(&fam, &raw);
        let base = run(&fam, &s);
        for c in [0.5, 3.0] {
            prop_assert!(same(&base, &run(&fam, &s.scaled(c).unwrap()), Options::default().tolerance));
        }
    }

    #[test]
    fn joint_permutation(idx in 0..STRICT_SPECS.len(), raw in raw_sample(12), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let fam = family(STRICT_SPECS[idx]);
        let mut shuffled = raw.clone();
        shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let a = run(&fam, &sample_in(&fam, &raw));
        let b = run(&fam, &sample_in(&fam, &shuffled));
        prop_assert!(same(&a, &b, Options::default().tolerance));
    }

    #[test]
    fn equal_weights_reduce_to_unit_weights(idx in 0..CLOSED_FORM_SPECS.len(), raw in raw_sample(12), c in 0.1..9.0f64) {
        let fam = family(CLOSED_FORM_SPECS[idx]);
        let points = sample_in(&fam, &raw).points().to_vec();
        let unit = Sample::unit(points.clone()).unwrap();
        let equal = Sample::new(points.clone(), vec![c; points.len()]).unwrap();
        let (a, b) = (run(&fam, &unit), run(&fam, &equal));
        prop_assert!(same(&a, &b, Options::default().tolerance));
        prop_assert_eq!(a.closed_form.is_some(), b.closed_form.is_some());
    }

    #[test]
    fn grouping_preserves_the_estimate(
        idx in 0..STRICT_SPECS.len(),
        blocks in prop::collection::vec(0.0..1.0f64, 1..=5),
        assignment in prop::collection::vec((0usize..5, 0.1..5.0f64), 1..=15),
    ) {
        let fam = family(STRICT_SPECS[idx]);
        let values: Vec<f64> = blocks.iter().map(|&u| point_in(&fam, u)).collect();
        let m = values.len();
        let mut points = Vec::new();
        let mut weights = Vec::new();
        let mut mu = vec![0.0; m];
        for &(b, w) in &assignment {
            points.push(values[b % m]);
            weights.push(w);
            mu[b % m] += w;
        }
        let used: Vec<usize> = (0..m).filter(|&a| mu[a] > 0.0).collect();
        let grouped = Sample::new(used.iter().map(|&a| values[a]).collect(), used.iter().map(|&a| mu[a]).collect()).unwrap();
        let full = Sample::new(points, weights).unwrap();
        prop_assert!(same(&run(&fam, &full), &run(&fam, &grouped), Options::default().tolerance));
    }

    #[test]
    fn replication_by_a_divisor(raw in raw_sample(6), k in 2usize..5) {
        let fam = family("mathieu:catoni:b=1");
        let base = Sample::unit(sample_in(&fam, &raw).points().to_vec()).unwrap();
        let replicated: Vec<f64> = (0..k).flat_map(|_| base.points().iter().copied()).collect();
        let a = run(&fam, &base);
        let b = run(&fam, &Sample::unit(replicated).unwrap());
        prop_assert!(same(&a, &b, Options::default().tolerance));
    }

    #[test]
    fn quantile_off_lattice_is_a_point(raw in raw_sample(8), a in 0.001..0.999f64) {
        let fam = family(&format!("quantile:alpha={a}"));
        let s = Sample::unit(sample_in(&fam, &raw).points().to_vec()).unwrap();
        let r = run(&fam, &s);
        match empirical_quantile(s.points(), a) {
            Some(q) => {
                prop_assert_eq!(r.outcome.kind(), OutcomeKind::Point);
                prop_assert!((r.outcome.location().unwrap() - q).abs() <= 1e-8);
            }
            None => prop_assert!(r.closed_form.is_none()),
        }
    }
}

#[test]
fn closed_form_absent_for_weighted_median() {
    let s = Sample::new(vec![1.0, 2.0, 3.0], vec![1.0, 2.0, 1.0]).unwrap();
    assert_eq!(closed_form(&family("median"), &s), None);
}
