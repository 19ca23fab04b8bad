mod common;

use common::*;
use proptest::prelude::*;
use psisolve_core::{find_sign_change, find_sign_change_seeded, normalized_psi_sum, weighted_psi_sum, ExtReal, Options};

/// Points strictly left and right of `location`, at distances `tol * 2^k`,
/// clipped to the domain.
fn flanks(location: f64, tol: f64, lower: ExtReal<f64>, upper: ExtReal<f64>) -> (Vec<f64>, Vec<f64>) {
    let ds: Vec<f64> = (1..=64).map(|k| tol * 2f64.powi(k / 2 + 1) * if k % 2 == 0 { 1.0 } else { 1.5 }).collect();
    let left = ds
        .iter()
        .map(|d| location - d)
        .filter(|&t| lower.finite().is_none_or(|a| t > a))
        .collect();
    let right = ds
        .iter()
        .map(|d| location + d)
        .filter(|&t| upper.finite().is_none_or(|b| t < b))
        .collect();
    (left, right)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn point_outcomes_satisfy_the_definition_on_flanks(idx in 0..STRICT_SPECS.len(), raw in raw_sample(12)) {
        let fam = family(STRICT_SPECS[idx]);
        let sample = sample_in(&fam, &raw);
        let f = weighted_psi_sum(&fam, &sample).unwrap();
        let g = normalized_psi_sum(&fam, &sample).unwrap();
        let opts = Options::default();
        let out = find_sign_change(&g, fam.theta(), &opts);
        let loc = out.location().expect("point");
        let (a, b) = out.bracket().unwrap();
        prop_assert!(a <= loc && loc <= b);
        prop_assert!(f(a) > 0.0 && f(b) < 0.0);
        let (left, right) = flanks(loc, opts.tolerance, fam.theta().lower(), fam.theta().upper());
        let lv: Vec<f64> = left.iter().map(|&t| f(t)).collect();
        let rv: Vec<f64> = right.iter().map(|&t| f(t)).collect();
        prop_assert!(lv.iter().all(|&v| v >= 0.0) && lv.iter().any(|&v| v > 0.0), "{lv:?}");
        prop_assert!(rv.iter().all(|&v| v <= 0.0) && rv.iter().any(|&v| v < 0.0), "{rv:?}");
    }

    #[test]
    fn bracket_width_within_tolerance(idx in 0..STRICT_SPECS.len(), raw in raw_sample(12)) {
        let fam = family(STRICT_SPECS[idx]);
        let sample = sample_in(&fam, &raw);
        let g = normalized_psi_sum(&fam, &sample).unwrap();
        let opts = Options::default();
        let out = find_sign_change(&g, fam.theta(), &opts);
        let (a, b) = out.bracket().unwrap();
        let ulp = f64::EPSILON * a.abs().max(b.abs());
        prop_assert!(b - a <= opts.tolerance.max(2.0 * ulp), "{a} {b}");
    }

    #[test]
    fn reseeding_with_the_bracket_is_idempotent(idx in 0..STRICT_SPECS.len(), raw in raw_sample(12)) {
        let fam = family(STRICT_SPECS[idx]);
        let sample = sample_in(&fam, &raw);
        let g = normalized_psi_sum(&fam, &sample).unwrap();
        let opts = Options::default();
        let first = find_sign_change(&g, fam.theta(), &opts);
        let again = find_sign_change_seeded(&g, fam.theta(), first.bracket().unwrap(), &opts);
        prop_assert!((first.location().unwrap() - again.location().unwrap()).abs() <= opts.tolerance);
    }

    #[test]
    fn expectile_residual_shrinks_with_tolerance(raw in raw_sample(10)) {
        let fam = family("expectile:alpha=0.3");
        let sample = sample_in(&fam, &raw);
        let f = weighted_psi_sum(&fam, &sample).unwrap();
        let g = normalized_psi_sum(&fam, &sample).unwrap();
        let residuals: Vec<f64> = [1e-6, 1e-9, 1e-12]
            .iter()
            .map(|&tol| f(find_sign_change(&g, fam.theta(), &Options::with_tolerance(tol)).location().unwrap()).abs())
            .collect();
        let total: f64 = sample.weights().iter().sum();
        for (r, tol) in residuals.iter().zip([1e-6, 1e-9, 1e-12]) {
            // |f(loc)| <= slope * tol, with slope at most the total weight.
            prop_assert!(*r <= total * tol + 1e-12, "{residuals:?}");
        }
    }
}
