//! Weighted generalized ψ-estimators: the point of sign change of
//! `t ↦ Σ λᵢ ψ(xᵢ, t)`, closed forms where known, and ψ-expectations of
//! finitely supported distributions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::families::{Bajraktarevic, FamilySpec, PsiFamily};
use crate::leftinv::generalized_left_inverse;
use crate::scalar::{sign, CompensatedSum, Scalar};
use crate::signchange::{find_sign_change, SolverOptions};
use crate::types::{DiscreteDistribution, SignChangeOutcome, WeightedSample};

/// Solver outcome plus the closed-form value when one applies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateResult<T> {
    pub outcome: SignChangeOutcome<T>,
    pub closed_form: Option<T>,
    /// `|location - closed_form|`, present iff both exist.
    pub agreement: Option<T>,
    /// Set when the family guarantees a point of sign change for every
    /// weighted sample but the solver returned something else.
    pub anomaly: bool,
}

/// `t ↦ Σ λᵢ ψ(xᵢ, t)` with compensated summation. Every point is checked
/// against the family's sample space up front.
pub fn weighted_psi_sum<'a, T: Scalar>(
    family: &'a PsiFamily<T>,
    sample: &'a WeightedSample<T>,
) -> Result<impl Fn(T) -> T + 'a> {
    for &x in sample.points() {
        family.check_x(x)?;
    }
    Ok(move |t: T| {
        let mut acc = CompensatedSum::new();
        for (x, w) in sample.iter() {
            if w != T::zero() {
                acc.add(w * family.psi(x, t));
            }
        }
        acc.value()
    })
}

/// `Σ λᵢ ψ(xᵢ, t) / Σ λᵢ |ψ(xᵢ, t)|`: same signs as the weighted ψ-sum, but
/// on a scale where the solver's zero threshold is relative to the size of
/// the terms. Flat sums (small slope at the crossing) then do not read as
/// zero plateaus, while exact cancellations still do.
pub fn normalized_psi_sum<'a, T: Scalar>(
    family: &'a PsiFamily<T>,
    sample: &'a WeightedSample<T>,
) -> Result<impl Fn(T) -> T + 'a> {
    for &x in sample.points() {
        family.check_x(x)?;
    }
    Ok(move |t: T| {
        let mut acc = CompensatedSum::new();
        let mut scale = T::zero();
        for (x, w) in sample.iter() {
            if w != T::zero() {
                let term = w * family.psi(x, t);
                acc.add(term);
                scale = scale + term.abs();
            }
        }
        let v = acc.value();
        if scale == T::zero() {
            T::zero()
        } else if !scale.is_finite() {
            sign(v)
        } else {
            v / scale
        }
    })
}

/// The weighted ψ-estimator of `sample`.
pub fn estimate<T: Scalar>(
    family: &PsiFamily<T>,
    sample: &WeightedSample<T>,
    opts: &SolverOptions<T>,
) -> Result<EstimateResult<T>> {
    opts.validate()?;
    let f = normalized_psi_sum(family, sample)?;
    let outcome = find_sign_change(&f, family.theta(), opts);
    let closed_form = closed_form(family, sample);
    let agreement = match (outcome.location(), closed_form) {
        (Some(l), Some(c)) => Some((l - c).abs()),
        _ => None,
    };
    let anomaly = family.is_equivalent_to_decreasing() && family.has_theta1() && !outcome.is_point();
    Ok(EstimateResult { outcome, closed_form, agreement, anomaly })
}

fn sorted<T: Scalar>(points: &[T]) -> Vec<T> {
    let mut v = points.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("validated samples hold no NaN"));
    v
}

/// Empirical median `Med_n` of the points: the middle order statistic for odd
/// `n`, the midpoint of the two middle ones for even `n`.
pub fn empirical_median<T: Scalar>(points: &[T]) -> T {
    let s = sorted(points);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        (s[n / 2 - 1] + s[n / 2]) / T::lit(2.0)
    }
}

/// True when `n α` is (numerically) one of `1, …, n - 1`.
pub fn alpha_is_lattice_point<T: Scalar>(alpha: T, n: usize) -> bool {
    let r = alpha.as_f64() * n as f64;
    (r - r.round()).abs() <= 1e-12 * n as f64 && r.round() >= 1.0 && r.round() < n as f64
}

/// `(x*_{⌈nα⌉} + x*_{⌊nα + 1⌋}) / 2`, or `None` when `α ∈ {k/n}`.
pub fn empirical_quantile<T: Scalar>(points: &[T], alpha: T) -> Option<T> {
    let n = points.len();
    if alpha_is_lattice_point(alpha, n) {
        return None;
    }
    let s = sorted(points);
    let na = alpha.as_f64() * n as f64;
    let lo = (na.ceil() as usize).clamp(1, n);
    let hi = ((na + 1.0).floor() as usize).clamp(1, n);
    Some((s[lo - 1] + s[hi - 1]) / T::lit(2.0))
}

fn weighted_mean<T: Scalar>(sample: &WeightedSample<T>, g: impl Fn(T) -> T) -> T {
    let num: T = sample.iter().map(|(x, w)| w * g(x)).collect::<CompensatedSum<T>>().value();
    num / sample.total_weight()
}

fn bajraktarevic_ratio<T: Scalar>(b: &Bajraktarevic<T>, pairs: impl Iterator<Item = (T, T)>) -> T {
    let mut num = CompensatedSum::new();
    let mut den = CompensatedSum::new();
    for (x, w) in pairs {
        let wp = w * (b.p)(x);
        num.add(wp * (b.phi)(x));
        den.add(wp);
    }
    num.value() / den.value()
}

/// Closed-form estimator, when the family and sample admit one:
///
/// * median with equal weights: `Med_n` (for even `n` this is the midpoint
///   convention; the solver reports a zero plateau there);
/// * quantile with equal weights and `α ∉ {k/n}`;
/// * Bajraktarević: `f⁻¹(Σ λᵢ p(xᵢ) φ(xᵢ) / Σ λᵢ p(xᵢ))`;
/// * normal mean and variance: weighted averages of `x` and `(x - m)²`;
/// * ism: `-Σ λᵢ / Σ λᵢ ln(1 - xᵢ²)`.
pub fn closed_form<T: Scalar>(family: &PsiFamily<T>, sample: &WeightedSample<T>) -> Option<T> {
    if sample.points().iter().any(|&x| family.check_x(x).is_err()) {
        return None;
    }
    match family.spec()? {
        FamilySpec::MedianSign if sample.has_equal_weights() => Some(empirical_median(sample.points())),
        FamilySpec::Quantile { alpha } if sample.has_equal_weights() => empirical_quantile(sample.points(), *alpha),
        FamilySpec::Bajraktarevic(b) => {
            let y = bajraktarevic_ratio(b, sample.iter());
            generalized_left_inverse(&b.f, y, &SolverOptions::default()).ok()
        }
        FamilySpec::NormalMean { .. } => Some(weighted_mean(sample, |x| x)),
        FamilySpec::NormalVar { m, .. } => Some(weighted_mean(sample, |x| (x - *m) * (x - *m))),
        FamilySpec::Ism => {
            let den = sample.iter().map(|(x, w)| w * (-x * x).ln_1p()).collect::<CompensatedSum<T>>().value();
            Some(-sample.total_weight() / den)
        }
        _ => None,
    }
}

/// Point of sign change of `t ↦ E ψ(ξ, t) = Σ pᵢ ψ(xᵢ, t)`.
pub fn expectation_sign_change<T: Scalar>(
    family: &PsiFamily<T>,
    dist: &DiscreteDistribution<T>,
    opts: &SolverOptions<T>,
) -> Result<SignChangeOutcome<T>> {
    Ok(estimate(family, &dist.as_weighted_sample(), opts)?.outcome)
}

/// `f⁻¹(E(p(ξ) φ(ξ)) / E p(ξ))` for a Bajraktarević family.
pub fn bajraktarevic_expectation_point<T: Scalar>(
    b: &Bajraktarevic<T>,
    dist: &DiscreteDistribution<T>,
    opts: &SolverOptions<T>,
) -> Result<T> {
    for &x in dist.atoms() {
        if !((b.p)(x) > T::zero()) {
            return Err(Error::InvalidParameter(format!("p({x}) is not positive")));
        }
    }
    let y = bajraktarevic_ratio(b, dist.atoms().iter().copied().zip(dist.probabilities().iter().copied()));
    generalized_left_inverse(&b.f, y, opts)
}
