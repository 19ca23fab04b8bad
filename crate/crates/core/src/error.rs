use thiserror::Error;

/// Errors raised by input validation and by the operations that can refuse
/// their input. Solver failures are not errors: they are reported as
/// [`SignChangeOutcome`](crate::SignChangeOutcome) variants.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("points and weights differ in length ({points} vs {weights})")]
    LengthMismatch { points: usize, weights: usize },
    #[error("sample is empty")]
    EmptySample,
    #[error("all weights are zero")]
    AllWeightsZero,
    #[error("weight {index} is negative ({value})")]
    NegativeWeight { index: usize, value: f64 },
    #[error("entry {index} is NaN or infinite")]
    NaNInput { index: usize },
    #[error("interval ({lower}, {upper}) is degenerate")]
    DegenerateInterval { lower: String, upper: String },
    #[error("probabilities sum to {sum}, not 1")]
    ProbabilitiesNotNormalized { sum: f64 },
    #[error("atom {value} appears more than once")]
    DuplicateAtom { value: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid solver options: {0}")]
    InvalidOptions(String),
    #[error("x = {x} lies outside the family's sample space {domain}")]
    DomainError { x: f64, domain: String },
    #[error("y = {y} lies outside the range hull ({lower}, {upper})")]
    OutOfHull { y: f64, lower: String, upper: String },
    #[error("function is not strictly increasing: f({s}) = {fs} >= f({t}) = {ft}")]
    NotIncreasing { s: f64, t: f64, fs: f64, ft: f64 },
    #[error("family {0} has no analytic theta1")]
    NoAnalyticTheta1(String),
    #[error("theta1(x) = {tx} is not below theta1(y) = {ty}")]
    Theta1Order { tx: f64, ty: f64 },
    #[error("unknown reproduction id `{0}`")]
    UnknownId(String),
    #[error("cannot parse family spec `{spec}`: {reason}")]
    FamilySpecParse { spec: String, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
