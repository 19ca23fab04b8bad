//! Domain types shared by the solver, the families and the checks.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A point of the extended real line. Infinite endpoints are tags, never IEEE
/// infinities, so they cannot leak into arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ExtReal<T> {
    NegInfinity,
    Finite(T),
    PosInfinity,
}

impl<T: Scalar> ExtReal<T> {
    pub fn finite(self) -> Option<T> {
        match self {
            ExtReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    /// Strict order on the extended line.
    pub fn lt(self, other: Self) -> bool {
        match (self, other) {
            (ExtReal::NegInfinity, ExtReal::NegInfinity) => false,
            (ExtReal::NegInfinity, _) => true,
            (_, ExtReal::PosInfinity) => !matches!(self, ExtReal::PosInfinity),
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a < b,
            _ => false,
        }
    }

    /// Widened copy used by reports.
    pub fn to_f64(self) -> ExtReal<f64> {
        match self {
            ExtReal::NegInfinity => ExtReal::NegInfinity,
            ExtReal::Finite(v) => ExtReal::Finite(v.as_f64()),
            ExtReal::PosInfinity => ExtReal::PosInfinity,
        }
    }
}

impl<T: fmt::Display> fmt::Display for ExtReal<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::NegInfinity => write!(f, "-inf"),
            ExtReal::Finite(v) => write!(f, "{v}"),
            ExtReal::PosInfinity => write!(f, "+inf"),
        }
    }
}

/// Nondegenerate open interval `(lower, upper)` of the real line; either end
/// may be unbounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpenInterval<T> {
    lower: ExtReal<T>,
    upper: ExtReal<T>,
}

impl<T: Scalar> OpenInterval<T> {
    pub fn new(lower: ExtReal<T>, upper: ExtReal<T>) -> Result<Self> {
        let finite_ok = |e: ExtReal<T>| e.finite().is_none_or(|v| v.is_finite());
        let well_placed =
            !matches!(lower, ExtReal::PosInfinity) && !matches!(upper, ExtReal::NegInfinity);
        if !finite_ok(lower) || !finite_ok(upper) || !well_placed || !lower.lt(upper) {
            return Err(Error::DegenerateInterval { lower: lower.to_string(), upper: upper.to_string() });
        }
        Ok(Self { lower, upper })
    }

    pub fn bounded(lower: T, upper: T) -> Result<Self> {
        Self::new(ExtReal::Finite(lower), ExtReal::Finite(upper))
    }

    pub fn real_line() -> Self {
        Self { lower: ExtReal::NegInfinity, upper: ExtReal::PosInfinity }
    }

    /// `(0, +inf)`.
    pub fn positive_half_line() -> Self {
        Self { lower: ExtReal::Finite(T::zero()), upper: ExtReal::PosInfinity }
    }

    pub fn lower(&self) -> ExtReal<T> {
        self.lower
    }

    pub fn upper(&self) -> ExtReal<T> {
        self.upper
    }

    pub fn contains(&self, t: T) -> bool {
        if t.is_nan() {
            return false;
        }
        let above = match self.lower {
            ExtReal::NegInfinity => true,
            ExtReal::Finite(a) => t > a,
            ExtReal::PosInfinity => false,
        };
        let below = match self.upper {
            ExtReal::PosInfinity => true,
            ExtReal::Finite(b) => t < b,
            ExtReal::NegInfinity => false,
        };
        above && below && t.is_finite()
    }

    /// `count` increasing points strictly inside the interval. Unbounded ends
    /// are reached through the maps `u/(1-u)` or `tan`, with `scale` setting
    /// the spread of the grid.
    pub fn grid(&self, count: usize, scale: T) -> Vec<T> {
        let half = T::lit(0.5);
        let denom = T::from_count(count + 1);
        let us = (1..=count).map(|k| T::from_count(k) / denom);
        let pts: Vec<T> = match (self.lower, self.upper) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => us.map(|u| a + (b - a) * u).collect(),
            (ExtReal::Finite(a), _) => us.map(|u| a + scale * u / (T::one() - u)).collect(),
            (_, ExtReal::Finite(b)) => us.rev().map(|u| b - scale * u / (T::one() - u)).collect(),
            _ => us.map(|u| scale * (T::PI() * (u - half)).tan()).collect(),
        };
        let mut pts: Vec<T> = pts.into_iter().filter(|&t| self.contains(t)).collect();
        pts.dedup();
        pts
    }
}

impl<T: fmt::Display> fmt::Display for OpenInterval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lower, self.upper)
    }
}

/// Sample points paired with nonnegative weights, not all zero.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedSample<T> {
    points: Vec<T>,
    weights: Vec<T>,
}

impl<T: Scalar> WeightedSample<T> {
    /// Validates and builds a weighted sample.
    pub fn new(points: Vec<T>, weights: Vec<T>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::LengthMismatch { points: points.len(), weights: weights.len() });
        }
        if points.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(index) = points.iter().chain(weights.iter()).position(|v| !v.is_finite()) {
            return Err(Error::NaNInput { index: index % points.len() });
        }
        if let Some((index, w)) = weights.iter().enumerate().find(|(_, w)| **w < T::zero()) {
            return Err(Error::NegativeWeight { index, value: w.as_f64() });
        }
        if weights.iter().all(|w| *w == T::zero()) {
            return Err(Error::AllWeightsZero);
        }
        Ok(Self { points, weights })
    }

    /// All weights equal to one.
    pub fn unit(points: Vec<T>) -> Result<Self> {
        let weights = vec![T::one(); points.len()];
        Self::new(points, weights)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.points.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn total_weight(&self) -> T {
        crate::scalar::compensated_sum(self.weights.iter().copied())
    }

    /// True when every weight equals the first one.
    pub fn has_equal_weights(&self) -> bool {
        self.weights.iter().all(|w| *w == self.weights[0])
    }

    /// Same points with every weight multiplied by `c > 0`.
    pub fn scaled(&self, c: T) -> Result<Self> {
        Self::new(self.points.clone(), self.weights.iter().map(|w| *w * c).collect())
    }
}

/// Validates a sample; see [`WeightedSample::new`].
pub fn validate_weighted_sample<T: Scalar>(points: Vec<T>, weights: Vec<T>) -> Result<WeightedSample<T>> {
    WeightedSample::new(points, weights)
}

/// Finitely supported probability distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution<T> {
    atoms: Vec<T>,
    probabilities: Vec<T>,
}

/// Allowed deviation of the probability total from one.
pub const PROBABILITY_SUM_TOLERANCE: f64 = 1e-12;

impl<T: Scalar> DiscreteDistribution<T> {
    pub fn new(atoms: Vec<T>, probabilities: Vec<T>) -> Result<Self> {
        if atoms.len() != probabilities.len() {
            return Err(Error::LengthMismatch { points: atoms.len(), weights: probabilities.len() });
        }
        if atoms.is_empty() {
            return Err(Error::EmptySample);
        }
        if let Some(index) = atoms.iter().chain(probabilities.iter()).position(|v| !v.is_finite()) {
            return Err(Error::NaNInput { index: index % atoms.len() });
        }
        if let Some((index, p)) = probabilities.iter().enumerate().find(|(_, p)| **p < T::zero()) {
            return Err(Error::NegativeWeight { index, value: p.as_f64() });
        }
        let sum = crate::scalar::compensated_sum(probabilities.iter().map(|p| p.as_f64()));
        if (sum - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
            return Err(Error::ProbabilitiesNotNormalized { sum });
        }
        let mut sorted = atoms.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite atoms"));
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateAtom { value: w[0].as_f64() });
        }
        Ok(Self { atoms, probabilities })
    }

    /// Uniform distribution on distinct atoms.
    pub fn uniform(atoms: Vec<T>) -> Result<Self> {
        let p = T::one() / T::from_count(atoms.len().max(1));
        let probabilities = vec![p; atoms.len()];
        Self::new(atoms, probabilities)
    }

    pub fn point_mass(atom: T) -> Result<Self> {
        Self::new(vec![atom], vec![T::one()])
    }

    pub fn atoms(&self) -> &[T] {
        &self.atoms
    }

    pub fn probabilities(&self) -> &[T] {
        &self.probabilities
    }

    /// The distribution viewed as a weighted sample (weights = probabilities).
    pub fn as_weighted_sample(&self) -> WeightedSample<T> {
        WeightedSample::new(self.atoms.clone(), self.probabilities.clone())
            .expect("validated distribution is a valid weighted sample")
    }
}

/// Discriminant of a [`SignChangeOutcome`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum OutcomeKind {
    Point,
    ZeroPlateau,
    NoFlip,
    NotDecreasingType,
}

impl fmt::Display for OutcomeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutcomeKind::Point => "Point",
            OutcomeKind::ZeroPlateau => "ZeroPlateau",
            OutcomeKind::NoFlip => "NoFlip",
            OutcomeKind::NotDecreasingType => "NotDecreasingType",
        })
    }
}

/// Which sign could not be found when bracketing failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum MissingSign {
    NoPositiveValueFound,
    NoNegativeValueFound,
}

/// Result of a search for a point of sign change of decreasing type.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum SignChangeOutcome<T> {
    /// `f > 0` left of the bracket, `f < 0` right of it, and the bracket is
    /// no wider than the requested tolerance.
    Point { location: T, bracket: (T, T) },
    /// `f` vanishes on an interval wider than the tolerance that separates
    /// its positive and negative regions.
    ZeroPlateau { plateau: (T, T) },
    /// No positive-left/negative-right pair was found in the scanned range.
    NoFlip { missing: MissingSign, scanned: (T, T), witnesses: Vec<T> },
    /// Scanning found `s < t` with `f(s) < 0 < f(t)`.
    NotDecreasingType { witnesses: (T, T) },
}

impl<T: Scalar> SignChangeOutcome<T> {
    pub fn kind(&self) -> OutcomeKind {
        match self {
            SignChangeOutcome::Point { .. } => OutcomeKind::Point,
            SignChangeOutcome::ZeroPlateau { .. } => OutcomeKind::ZeroPlateau,
            SignChangeOutcome::NoFlip { .. } => OutcomeKind::NoFlip,
            SignChangeOutcome::NotDecreasingType { .. } => OutcomeKind::NotDecreasingType,
        }
    }

    pub fn location(&self) -> Option<T> {
        match self {
            SignChangeOutcome::Point { location, .. } => Some(*location),
            _ => None,
        }
    }

    pub fn bracket(&self) -> Option<(T, T)> {
        match self {
            SignChangeOutcome::Point { bracket, .. } => Some(*bracket),
            _ => None,
        }
    }

    pub fn plateau(&self) -> Option<(T, T)> {
        match self {
            SignChangeOutcome::ZeroPlateau { plateau } => Some(*plateau),
            _ => None,
        }
    }

    pub fn is_point(&self) -> bool {
        matches!(self, SignChangeOutcome::Point { .. })
    }
}
