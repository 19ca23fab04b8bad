#![allow(dead_code)]

use proptest::prelude::*;
use psisolve_core::{parse_family, Family, Sample, XDomain};

/// Catalog families flagged strictly decreasing in t.
pub const STRICT_SPECS: [&str; 13] = [
    "expectile:alpha=0.3",
    "mathieu:catoni:b=2",
    "mathieu:poly:p=2,beta=1",
    "mathieu:catoni2:alpha=1.5",
    "mathieu:l1l2",
    "mathieu:fair",
    "bajraktarevic:id",
    "bajraktarevic:cube:c=1",
    "bajraktarevic:exp",
    "normal-mean:sigma=1",
    "normal-var:m=0",
    "normal-var:m=1.5",
    "ism",
];

pub fn family(spec: &str) -> Family {
    parse_family(spec).unwrap()
}

/// Maps `u` in [0, 1) into the family's sample space.
pub fn point_in(family: &Family, u: f64) -> f64 {
    match family.x_domain() {
        XDomain::Open(_) => 0.01 + 0.98 * u,
        XDomain::RealLineExcept(m) => {
            let x = -10.0 + 20.0 * u;
            if x == *m {
                x + 0.5
            } else {
                x
            }
        }
        XDomain::Finite(v) => v[((u * v.len() as f64) as usize).min(v.len() - 1)],
        XDomain::RealLine => -10.0 + 20.0 * u,
    }
}

pub fn sample_in(family: &Family, raw: &[(f64, f64)]) -> Sample {
    let points = raw.iter().map(|&(u, _)| point_in(family, u)).collect();
    let weights = raw.iter().map(|&(_, w)| w).collect();
    Sample::new(points, weights).unwrap()
}

/// Pairs (u, weight) with u in [0, 1) and weights in [0.1, 5).
pub fn raw_sample(max_n: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.0..1.0f64, 0.1..5.0f64), 1..=max_n)
}
