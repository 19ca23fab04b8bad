//! Weighted generalized ψ-estimators computed as points of sign change of
//! weighted ψ-sums, plus numerical checks of the conditions under which such
//! points exist and are unique.
//!
//! The numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! at the bottom of this module fix the scalar to `f64`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod estimators;
pub mod families;
pub mod leftinv;
pub mod scalar;
pub mod signchange;
pub mod types;
pub mod verify;

pub use error::{Error, Result};
pub use estimators::{
    bajraktarevic_expectation_point, closed_form, estimate, expectation_sign_change, normalized_psi_sum, weighted_psi_sum,
    EstimateResult,
};
pub use families::{
    catalog, eval_f_mathieu, make_family, parse_family, Bajraktarevic, FamilyDoc, FamilySpec, MathieuKind, PsiFamily,
    XDomain,
};
pub use leftinv::{generalized_left_inverse, range_hull, MonotoneFunction, RealMap};
pub use scalar::{compensated_sum, sign, CompensatedSum, Scalar};
pub use signchange::{bracket, find_sign_change, find_sign_change_seeded, refine, BracketFailure, SolverOptions};
pub use types::{
    validate_weighted_sample, DiscreteDistribution, ExtReal, MissingSign, OpenInterval, OutcomeKind, SignChangeOutcome,
    WeightedSample,
};

/// Default seed for randomized corpora.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;

pub type Interval = OpenInterval<f64>;
pub type Sample = WeightedSample<f64>;
pub type Distribution = DiscreteDistribution<f64>;
pub type Outcome = SignChangeOutcome<f64>;
pub type Options = SolverOptions<f64>;
pub type Family = PsiFamily<f64>;
pub type Spec = FamilySpec<f64>;
pub type Monotone = MonotoneFunction<f64>;
pub type Estimate = EstimateResult<f64>;
