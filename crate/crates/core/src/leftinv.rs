//! Generalized left inverse of a strictly increasing, possibly discontinuous
//! function: `g(y) = sup { u in domain : f(u) <= y }` on the convex hull of the
//! range of `f`.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::signchange::{bisect_predicate, SolverOptions};
use crate::types::{ExtReal, OpenInterval};

/// Shared real map.
pub type RealMap<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// Number of grid points used for the strict-increase spot check.
pub const MONOTONE_CHECK_POINTS: usize = 256;

/// A strictly increasing function on an open interval, with its range hull.
#[derive(Clone)]
pub struct MonotoneFunction<T> {
    evaluate: RealMap<T>,
    domain: OpenInterval<T>,
    analytic_inverse: Option<RealMap<T>>,
    hull: (ExtReal<T>, ExtReal<T>),
    analytic_hull: bool,
}

impl<T: fmt::Debug> fmt::Debug for MonotoneFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MonotoneFunction")
            .field("domain", &self.domain)
            .field("hull", &self.hull)
            .field("analytic_inverse", &self.analytic_inverse.is_some())
            .finish()
    }
}

impl<T: Scalar> MonotoneFunction<T> {
    /// Wraps `f`, spot-checks strict increase and estimates the range hull
    /// from endpoint limits.
    pub fn new(f: impl Fn(T) -> T + Send + Sync + 'static, domain: OpenInterval<T>) -> Result<Self> {
        let evaluate: RealMap<T> = Arc::new(f);
        check_strictly_increasing(&*evaluate, &domain)?;
        let hull = estimate_hull(&*evaluate, &domain, &SolverOptions::default());
        Ok(Self { evaluate, domain, analytic_inverse: None, hull, analytic_hull: false })
    }

    /// Replaces the estimated hull by a known one.
    pub fn with_hull(mut self, lower: ExtReal<T>, upper: ExtReal<T>) -> Self {
        self.hull = (lower, upper);
        self.analytic_hull = true;
        self
    }

    /// Installs an exact inverse, used by [`generalized_left_inverse`] in place
    /// of bisection.
    pub fn with_inverse(mut self, inverse: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        self.analytic_inverse = Some(Arc::new(inverse));
        self
    }

    /// `t` on the real line.
    pub fn identity() -> Self {
        Self::new(|t| t, OpenInterval::real_line())
            .expect("identity is increasing")
            .with_hull(ExtReal::NegInfinity, ExtReal::PosInfinity)
            .with_inverse(|y| y)
    }

    /// `t^3` on the real line.
    pub fn cube() -> Self {
        Self::new(|t: T| t * t * t, OpenInterval::real_line())
            .expect("cube is increasing")
            .with_hull(ExtReal::NegInfinity, ExtReal::PosInfinity)
            .with_inverse(|y: T| y.cbrt())
    }

    /// `e^t` on the real line.
    pub fn exp() -> Self {
        Self::new(|t: T| t.exp(), OpenInterval::real_line())
            .expect("exp is increasing")
            .with_hull(ExtReal::Finite(T::zero()), ExtReal::PosInfinity)
            .with_inverse(|y: T| y.ln())
    }

    /// `t` for `t < 0`, `t + 1` for `t >= 0`: a jump of height one at zero.
    pub fn step_jump() -> Self {
        Self::new(|t: T| if t < T::zero() { t } else { t + T::one() }, OpenInterval::real_line())
            .expect("step jump is increasing")
            .with_hull(ExtReal::NegInfinity, ExtReal::PosInfinity)
    }

    pub fn eval(&self, t: T) -> T {
        (self.evaluate)(t)
    }

    pub fn domain(&self) -> &OpenInterval<T> {
        &self.domain
    }

    pub fn has_analytic_inverse(&self) -> bool {
        self.analytic_inverse.is_some()
    }

    /// Cached `(inf f, sup f)`.
    pub fn hull(&self) -> (ExtReal<T>, ExtReal<T>) {
        self.hull
    }

    /// Whether `y` lies strictly inside the range hull.
    pub fn hull_contains(&self, y: T) -> bool {
        let (lo, hi) = self.hull;
        y.is_finite() && lo.lt(ExtReal::Finite(y)) && ExtReal::Finite(y).lt(hi)
    }
}

fn check_strictly_increasing<T: Scalar>(f: &dyn Fn(T) -> T, domain: &OpenInterval<T>) -> Result<()> {
    let grid = domain.grid(MONOTONE_CHECK_POINTS, T::one());
    let values: Vec<T> = grid.iter().map(|&t| f(t)).collect();
    for i in 0..grid.len().saturating_sub(1) {
        let (fs, ft) = (values[i], values[i + 1]);
        let saturated = fs == ft && (fs.is_infinite() || fs.abs() > T::max_value() / T::lit(4.0));
        if fs.is_nan() || ft.is_nan() || (fs >= ft && !saturated) {
            return Err(Error::NotIncreasing {
                s: grid[i].as_f64(),
                t: grid[i + 1].as_f64(),
                fs: fs.as_f64(),
                ft: ft.as_f64(),
            });
        }
    }
    Ok(())
}

/// Sequence of points in `domain` converging to its lower (`toward_upper =
/// false`) or upper end.
fn endpoint_sequence<T: Scalar>(domain: &OpenInterval<T>, toward_upper: bool, opts: &SolverOptions<T>) -> Vec<T> {
    let two = T::lit(2.0);
    let k_max = opts.max_expansions as i32;
    let (lo, hi) = (domain.lower(), domain.upper());
    let anchor = match (lo, hi) {
        (ExtReal::Finite(a), ExtReal::Finite(b)) => a + (b - a) / two,
        (ExtReal::Finite(a), _) => a + opts.initial_step,
        (_, ExtReal::Finite(b)) => b - opts.initial_step,
        _ => T::zero(),
    };
    let end = if toward_upper { hi } else { lo };
    let mut out = Vec::new();
    for k in 0..=k_max {
        let t = match end {
            ExtReal::Finite(e) => e + (anchor - e) * two.powi(-k),
            _ => {
                let d = opts.initial_step * two.powi(k);
                if toward_upper {
                    anchor + d
                } else {
                    anchor - d
                }
            }
        };
        if !domain.contains(t) || out.last() == Some(&t) {
            break;
        }
        out.push(t);
    }
    out
}

/// Limit of a monotone sequence of values, or the matching infinity when the
/// tail still moves by more than a relative 1e-9 per step (or overflows).
fn sequence_limit<T: Scalar>(values: &[T], upward: bool) -> ExtReal<T> {
    let inf = if upward { ExtReal::PosInfinity } else { ExtReal::NegInfinity };
    let Some(&last) = values.last() else { return inf };
    if !last.is_finite() {
        return inf;
    }
    if values.len() < 2 {
        return ExtReal::Finite(last);
    }
    let prev = values[values.len() - 2];
    let settle = T::lit(1e-9) * T::one().max(last.abs());
    if (last - prev).abs() <= settle {
        ExtReal::Finite(last)
    } else {
        inf
    }
}

fn estimate_hull<T: Scalar>(f: &dyn Fn(T) -> T, domain: &OpenInterval<T>, opts: &SolverOptions<T>) -> (ExtReal<T>, ExtReal<T>) {
    let lower: Vec<T> = endpoint_sequence(domain, false, opts).into_iter().map(f).collect();
    let upper: Vec<T> = endpoint_sequence(domain, true, opts).into_iter().map(f).collect();
    (sequence_limit(&lower, false), sequence_limit(&upper, true))
}

/// Range hull `(inf f, sup f)` of a monotone function.
pub fn range_hull<T: Scalar>(f: &MonotoneFunction<T>, opts: &SolverOptions<T>) -> (ExtReal<T>, ExtReal<T>) {
    if f.analytic_hull {
        return f.hull;
    }
    estimate_hull(&*f.evaluate, &f.domain, opts)
}

/// `sup { u in domain : f(u) <= y }` for `y` strictly inside the range hull,
/// to float resolution (well inside `opts.tolerance`).
pub fn generalized_left_inverse<T: Scalar>(f: &MonotoneFunction<T>, y: T, opts: &SolverOptions<T>) -> Result<T> {
    if !f.hull_contains(y) {
        return Err(Error::OutOfHull { y: y.as_f64(), lower: f.hull.0.to_string(), upper: f.hull.1.to_string() });
    }
    if let Some(inverse) = &f.analytic_inverse {
        return Ok(inverse(y));
    }
    let below = |u: T| f.eval(u) <= y;
    // A point where the predicate holds and one where it fails.
    let mut seq_lo = endpoint_sequence(&f.domain, false, opts);
    let mut seq_hi = endpoint_sequence(&f.domain, true, opts);
    let lo = seq_lo.drain(..).find(|&u| below(u));
    let hi = seq_hi.drain(..).find(|&u| !below(u));
    let (Some(lo), Some(hi)) = (lo, hi) else {
        return Err(Error::OutOfHull { y: y.as_f64(), lower: f.hull.0.to_string(), upper: f.hull.1.to_string() });
    };
    if lo >= hi {
        return Err(Error::NotIncreasing { s: hi.as_f64(), t: lo.as_f64(), fs: f.eval(hi).as_f64(), ft: f.eval(lo).as_f64() });
    }
    let (a, _) = bisect_predicate(below, lo, hi, T::zero());
    Ok(a)
}
