//! Locating the point of sign change (of decreasing type) of a real function
//! on an open interval.
//!
//! A point `v` qualifies when `f > 0` strictly left of `v` and `f < 0`
//! strictly right of it. `f` may jump or stay flat; the solver only ever asks
//! for signs, never for derivatives.
//!
//! The search runs in three stages:
//!
//! 1. a geometric probe set: from a centre, doubling outwards toward
//!    unbounded ends and halving toward finite ends;
//! 2. a uniform scan of `scan_points` over the hull of the sign transitions
//!    the probes saw, used both to bracket and to look for increasing-type
//!    changes;
//! 3. bisection of the bracket. A bisection midpoint where `f` is zero (within
//!    `zero_threshold`) triggers two edge bisections that measure the zero set:
//!    a zero set wider than the tolerance is a [`SignChangeOutcome::ZeroPlateau`],
//!    a narrower one collapses to a point at its middle.
//!
//! Values with `|f| <= zero_threshold` count as zero everywhere, including in
//! the tails. Zero tails outside the bracket are ignored: they cannot be told
//! apart from values that underflow.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::types::{ExtReal, MissingSign, OpenInterval, SignChangeOutcome};

/// Knobs of the sign-change search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverOptions<T> {
    /// Target width of the returned bracket.
    pub tolerance: T,
    /// First step of the geometric expansion toward unbounded ends.
    pub initial_step: T,
    /// Number of doublings (and halvings) in the probe set.
    pub max_expansions: usize,
    /// Size of the uniform scan over the transition hull.
    pub scan_points: usize,
    /// Values with `|f| <= zero_threshold` are classified as zero.
    pub zero_threshold: T,
}

impl<T: Scalar> Default for SolverOptions<T> {
    fn default() -> Self {
        Self {
            tolerance: T::lit(1e-10).max(T::epsilon() * T::lit(64.0)),
            initial_step: T::one(),
            max_expansions: 200,
            scan_points: 4096,
            zero_threshold: T::lit(1e-13).max(T::epsilon() * T::lit(8.0)),
        }
    }
}

impl<T: Scalar> SolverOptions<T> {
    pub fn with_tolerance(tolerance: T) -> Self {
        Self { tolerance, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > T::zero() && self.tolerance.is_finite()) {
            return Err(Error::InvalidOptions(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if !(self.initial_step > T::zero() && self.initial_step.is_finite()) {
            return Err(Error::InvalidOptions(format!("initial step must be positive, got {}", self.initial_step)));
        }
        if self.scan_points < 16 {
            return Err(Error::InvalidOptions(format!("scan points must be at least 16, got {}", self.scan_points)));
        }
        if self.max_expansions == 0 {
            return Err(Error::InvalidOptions("max expansions must be positive".into()));
        }
        if !(self.zero_threshold >= T::zero() && self.zero_threshold.is_finite()) {
            return Err(Error::InvalidOptions(format!(
                "zero threshold must be nonnegative, got {}",
                self.zero_threshold
            )));
        }
        Ok(())
    }

    fn class(&self, v: T) -> i8 {
        if v > self.zero_threshold {
            1
        } else if v < -self.zero_threshold {
            -1
        } else {
            0
        }
    }
}

/// Why [`bracket`] could not produce a positive-left/negative-right pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BracketFailure<T> {
    pub missing: MissingSign,
    /// Smallest and largest point evaluated.
    pub scanned: (T, T),
}

/// The probe set of stage 1, sorted and strictly inside `domain`.
fn probe_points<T: Scalar>(domain: &OpenInterval<T>, opts: &SolverOptions<T>, seed: Option<(T, T)>) -> Vec<T> {
    let k_max = opts.max_expansions as i32;
    let two = T::lit(2.0);
    let h = opts.initial_step;
    let mut pts = Vec::with_capacity(4 * opts.max_expansions + 8);
    match (domain.lower(), domain.upper()) {
        (ExtReal::Finite(a), ExtReal::Finite(b)) => {
            let half = (b - a) / two;
            pts.push(a + half);
            for k in 1..=k_max {
                let d = half * two.powi(-k);
                pts.push(a + d);
                pts.push(b - d);
            }
        }
        (ExtReal::Finite(a), _) => {
            for k in -k_max..=k_max {
                pts.push(a + h * two.powi(k));
            }
        }
        (_, ExtReal::Finite(b)) => {
            for k in -k_max..=k_max {
                pts.push(b - h * two.powi(k));
            }
        }
        _ => {
            let c = seed.map_or(T::zero(), |(s, t)| s + (t - s) / two);
            pts.push(c);
            for k in -k_max..=k_max {
                let d = h * two.powi(k);
                pts.push(c - d);
                pts.push(c + d);
            }
        }
    }
    if let Some((s, t)) = seed {
        pts.push(s);
        pts.push(t);
        pts.push(s + (t - s) / two);
    }
    pts.retain(|&t| domain.contains(t));
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite probes"));
    pts.dedup();
    pts
}

/// Stage 1 and 2: evaluated, sorted sample of `f`.
struct Scan<T> {
    ts: Vec<T>,
    classes: Vec<i8>,
}

impl<T: Scalar> Scan<T> {
    fn run<F: Fn(T) -> T>(f: &F, domain: &OpenInterval<T>, opts: &SolverOptions<T>, seed: Option<(T, T)>) -> Self {
        let probes = probe_points(domain, opts, seed);
        let probe_classes: Vec<i8> = probes.iter().map(|&t| opts.class(f(t))).collect();
        let transitions: Vec<usize> = (0..probes.len().saturating_sub(1))
            .filter(|&i| probe_classes[i] != probe_classes[i + 1])
            .collect();
        let mut pairs: Vec<(T, i8)> = probes.iter().copied().zip(probe_classes.iter().copied()).collect();
        if let (Some(&first), Some(&last)) = (transitions.first(), transitions.last()) {
            let lo = probes[first.saturating_sub(1)];
            let hi = probes[(last + 2).min(probes.len() - 1)];
            let denom = T::from_count(opts.scan_points + 1);
            for k in 1..=opts.scan_points {
                let t = lo + (hi - lo) * (T::from_count(k) / denom);
                if domain.contains(t) {
                    pairs.push((t, opts.class(f(t))));
                }
            }
            pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite scan"));
            pairs.dedup_by(|a, b| a.0 == b.0);
        }
        let (ts, classes) = pairs.into_iter().unzip();
        Self { ts, classes }
    }

    fn range(&self) -> (T, T) {
        (self.ts[0], self.ts[self.ts.len() - 1])
    }

    /// First `s < t` with `f(s) < 0 < f(t)`.
    fn increasing_witness(&self) -> Option<(T, T)> {
        let neg = self.classes.iter().position(|&c| c < 0)?;
        let pos = self.classes[neg..].iter().position(|&c| c > 0)? + neg;
        Some((self.ts[neg], self.ts[pos]))
    }

    fn positive_then_negative(&self) -> std::result::Result<(T, T), BracketFailure<T>> {
        let fail = |missing| BracketFailure { missing, scanned: self.range() };
        let first_pos = self
            .classes
            .iter()
            .position(|&c| c > 0)
            .ok_or(fail(MissingSign::NoPositiveValueFound))?;
        let neg = self.classes[first_pos..]
            .iter()
            .position(|&c| c < 0)
            .ok_or(fail(MissingSign::NoNegativeValueFound))?
            + first_pos;
        let pos = self.classes[..neg].iter().rposition(|&c| c > 0).expect("positive before negative");
        Ok((self.ts[pos], self.ts[neg]))
    }
}

/// Finds `a < b` in `domain` with `f(a) > 0 > f(b)`.
pub fn bracket<T: Scalar, F: Fn(T) -> T>(
    f: F,
    domain: &OpenInterval<T>,
    opts: &SolverOptions<T>,
) -> std::result::Result<(T, T), BracketFailure<T>> {
    Scan::run(&f, domain, opts, None).positive_then_negative()
}

/// Locates the point of sign change of decreasing type of `f` on `domain`.
///
/// Failures are data: see [`SignChangeOutcome`] for the four outcomes.
pub fn find_sign_change<T: Scalar, F: Fn(T) -> T>(
    f: F,
    domain: &OpenInterval<T>,
    opts: &SolverOptions<T>,
) -> SignChangeOutcome<T> {
    solve(&f, domain, opts, None)
}

/// Like [`find_sign_change`], with `seed` (for instance a previous bracket)
/// added to the probe set.
pub fn find_sign_change_seeded<T: Scalar, F: Fn(T) -> T>(
    f: F,
    domain: &OpenInterval<T>,
    seed: (T, T),
    opts: &SolverOptions<T>,
) -> SignChangeOutcome<T> {
    solve(&f, domain, opts, Some(seed))
}

fn solve<T: Scalar, F: Fn(T) -> T>(
    f: &F,
    domain: &OpenInterval<T>,
    opts: &SolverOptions<T>,
    seed: Option<(T, T)>,
) -> SignChangeOutcome<T> {
    let scan = Scan::run(f, domain, opts, seed);
    if scan.ts.is_empty() {
        // Only possible for intervals narrower than the float grid.
        let mid = match (domain.lower(), domain.upper()) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a + (b - a) / T::lit(2.0),
            _ => T::zero(),
        };
        return SignChangeOutcome::NoFlip {
            missing: MissingSign::NoPositiveValueFound,
            scanned: (mid, mid),
            witnesses: vec![],
        };
    }
    if let Some(witnesses) = scan.increasing_witness() {
        return SignChangeOutcome::NotDecreasingType { witnesses };
    }
    if scan.classes.iter().all(|&c| c == 0) {
        return SignChangeOutcome::ZeroPlateau { plateau: scan.range() };
    }
    match scan.positive_then_negative() {
        Ok((lo, hi)) => refine(f, lo, hi, opts),
        Err(failure) => {
            let witnesses = vec![failure.scanned.0, failure.scanned.1];
            SignChangeOutcome::NoFlip { missing: failure.missing, scanned: failure.scanned, witnesses }
        }
    }
}

/// Bisection of a certified bracket `f(lo) > 0 > f(hi)`.
pub fn refine<T: Scalar, F: Fn(T) -> T>(f: &F, mut lo: T, mut hi: T, opts: &SolverOptions<T>) -> SignChangeOutcome<T> {
    let two = T::lit(2.0);
    loop {
        let mid = lo + (hi - lo) / two;
        if hi - lo <= opts.tolerance || mid <= lo || mid >= hi {
            return SignChangeOutcome::Point { location: mid, bracket: (lo, hi) };
        }
        match opts.class(f(mid)) {
            1 => lo = mid,
            -1 => hi = mid,
            _ => return measure_zero_set(f, lo, mid, hi, opts),
        }
    }
}

/// `f(lo) > 0`, `f(zero) == 0`, `f(hi) < 0`: find the edges of the zero set
/// around `zero` and decide between a plateau and a point. The decision uses
/// the inner edges (the outermost zeros found), so a zero set of one float
/// next to a grid spacing wider than the tolerance still counts as a point.
fn measure_zero_set<T: Scalar, F: Fn(T) -> T>(f: &F, lo: T, zero: T, hi: T, opts: &SolverOptions<T>) -> SignChangeOutcome<T> {
    let edge_width = opts.tolerance / T::lit(8.0);
    let (left_outer, left_inner) = bisect_predicate(|t| opts.class(f(t)) > 0, lo, zero, edge_width);
    let (right_inner, right_outer) = bisect_predicate(|t| opts.class(f(t)) >= 0, zero, hi, edge_width);
    if right_inner - left_inner <= opts.tolerance {
        let location = left_inner + (right_inner - left_inner) / T::lit(2.0);
        return SignChangeOutcome::Point { location, bracket: (left_outer, right_outer) };
    }
    // Flat crossing: clearly positive at the first quarter, negative at the third.
    let width = right_outer - left_outer;
    let q1 = left_outer + width / T::lit(4.0);
    let q3 = left_outer + width * T::lit(0.75);
    let cut = opts.zero_threshold / T::lit(16.0);
    if opts.zero_threshold > T::zero() && f(q1) > cut && f(q3) < -cut {
        return refine_exact(f, q1, q3, opts);
    }
    SignChangeOutcome::ZeroPlateau { plateau: (left_outer, right_outer) }
}

/// Bisection on exact signs of a bracket `f(lo) > 0 > f(hi)`.
fn refine_exact<T: Scalar, F: Fn(T) -> T>(f: &F, lo: T, hi: T, opts: &SolverOptions<T>) -> SignChangeOutcome<T> {
    let quarter = opts.tolerance / T::lit(4.0);
    let (a, b) = bisect_predicate(|t| f(t) > T::zero(), lo, hi, quarter);
    let d = if f(b) < T::zero() { b } else { bisect_predicate(|t| f(t) >= T::zero(), b, hi, quarter).1 };
    if d - a <= opts.tolerance || b == d {
        SignChangeOutcome::Point { location: a + (d - a) / T::lit(2.0), bracket: (a, d) }
    } else {
        SignChangeOutcome::ZeroPlateau { plateau: (a, d) }
    }
}

/// `pred(a)` true and `pred(b)` false; shrinks `[a, b]` keeping that
/// invariant until `b - a <= width` or the float grid is exhausted.
pub(crate) fn bisect_predicate<T: Scalar, P: Fn(T) -> bool>(pred: P, mut a: T, mut b: T, width: T) -> (T, T) {
    let two = T::lit(2.0);
    while b - a > width {
        let mid = a + (b - a) / two;
        if mid <= a || mid >= b {
            break;
        }
        if pred(mid) {
            a = mid;
        } else {
            b = mid;
        }
    }
    (a, b)
}
