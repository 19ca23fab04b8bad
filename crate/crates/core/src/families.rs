//! Catalog of ψ-families `ψ: X × Θ → ℝ` with their metadata.
//!
//! Every family is a [`PsiFamily`]: an evaluator plus the parameter interval
//! Θ, the sample space X, continuity and monotonicity flags in `t`, and the
//! single-observation estimator `theta1` where it is known in closed form.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::leftinv::{generalized_left_inverse, MonotoneFunction, RealMap};
use crate::scalar::{sign, Scalar};
use crate::signchange::SolverOptions;
use crate::types::OpenInterval;

/// Increasing `f: [0, ∞) → [0, ∞)` with `f(0) = 0` for the odd-extension family
/// `ψ(x, t) = sign(x - t) f(|x - t|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MathieuKind<T> {
    /// `min(z, beta)`; increasing but not strictly.
    Huber { beta: T },
    /// `ln(1 + z/b + z²/(2b²))`.
    Catoni { b: T },
    /// `z / (1 + (z/beta)^(1 - 1/p))`.
    Polynomial { p: u32, beta: T },
    /// `ln(1 + z + z^alpha/alpha)`, `alpha ∈ (1, 2)`.
    Catoni2 { alpha: T },
    /// `z / sqrt(1 + z²/2)`.
    L1L2,
    /// `z / (1 + z)`.
    Fair,
}

impl<T: Scalar> MathieuKind<T> {
    fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParameter(what.to_string()));
        match *self {
            MathieuKind::Huber { beta } if !(beta > T::zero() && beta.is_finite()) => bad("huber beta must be positive"),
            MathieuKind::Catoni { b } if !(b > T::zero() && b.is_finite()) => bad("catoni b must be positive"),
            MathieuKind::Polynomial { p: 0, .. } => bad("polynomial p must be a positive integer"),
            MathieuKind::Polynomial { beta, .. } if !(beta > T::zero() && beta.is_finite()) => {
                bad("polynomial beta must be positive")
            }
            MathieuKind::Catoni2 { alpha } if !(alpha > T::one() && alpha < T::lit(2.0)) => {
                bad("catoni2 alpha must lie in (1, 2)")
            }
            _ => Ok(()),
        }
    }

    pub fn is_strictly_increasing(&self) -> bool {
        !matches!(self, MathieuKind::Huber { .. })
    }
}

/// `f(z)` of the odd-extension family, for `z >= 0`.
pub fn eval_f_mathieu<T: Scalar>(kind: &MathieuKind<T>, z: T) -> T {
    let one = T::one();
    let half = T::lit(0.5);
    match *kind {
        MathieuKind::Huber { beta } => z.min(beta),
        MathieuKind::Catoni { b } => {
            let u = z / b;
            (u + half * u * u).ln_1p()
        }
        MathieuKind::Polynomial { p, beta } => {
            let e = one - one / T::from_count(p as usize);
            z / (one + (z / beta).powf(e))
        }
        MathieuKind::Catoni2 { alpha } => (z + z.powf(alpha) / alpha).ln_1p(),
        MathieuKind::L1L2 => z / (one + half * z * z).sqrt(),
        MathieuKind::Fair => z / (one + z),
    }
}

/// Ingredients of `ψ(x, t) = p(x) (φ(x) - f(t))`.
#[derive(Clone)]
pub struct Bajraktarevic<T> {
    pub f: MonotoneFunction<T>,
    pub p: RealMap<T>,
    pub phi: RealMap<T>,
    pub label: String,
}

impl<T: Scalar> Bajraktarevic<T> {
    pub fn new(
        label: impl Into<String>,
        f: MonotoneFunction<T>,
        p: impl Fn(T) -> T + Send + Sync + 'static,
        phi: impl Fn(T) -> T + Send + Sync + 'static,
    ) -> Self {
        Self { f, p: Arc::new(p), phi: Arc::new(phi), label: label.into() }
    }

    /// Quasi-arithmetic-type builtin: `φ = f` on `X = Θ = ℝ` and
    /// `p(x) = 1 + c |f(x)|`.
    pub fn builtin(name: &str, c: T) -> Result<Self> {
        let f = match name {
            "id" => MonotoneFunction::identity(),
            "cube" => MonotoneFunction::cube(),
            "exp" => MonotoneFunction::exp(),
            other => {
                return Err(Error::InvalidParameter(format!(
                    "unknown builtin f `{other}` (expected id, cube or exp)"
                )))
            }
        };
        if !(c >= T::zero() && c.is_finite()) {
            return Err(Error::InvalidParameter("bajraktarevic c must be nonnegative".into()));
        }
        let (fp, fphi) = (f.clone(), f.clone());
        let label = if c == T::zero() { name.to_string() } else { format!("{name}:c={c}") };
        Ok(Self::new(label, f, move |x| T::one() + c * fp.eval(x).abs(), move |x| fphi.eval(x)))
    }
}

impl<T: fmt::Debug> fmt::Debug for Bajraktarevic<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Bajraktarevic").field("label", &self.label).field("f", &self.f).finish()
    }
}

/// Family tag plus parameters.
#[derive(Debug, Clone)]
pub enum FamilySpec<T> {
    MedianSign,
    Quantile { alpha: T },
    Expectile { alpha: T },
    Mathieu(MathieuKind<T>),
    Bajraktarevic(Bajraktarevic<T>),
    NormalMean { sigma: T },
    /// Likelihood score of the variance `s = σ²` with known mean `m`. The
    /// default (`raw = false`) is the rescaled `(x - m)² - s`, which is
    /// strictly decreasing in `s`; `raw = true` is `((x - m)² - s) / (2 s²)`.
    NormalVar { m: T, raw: bool },
    Ism,
    NormalMixture { sigma: T },
}

/// The sample space X of a family.
#[derive(Debug, Clone, PartialEq)]
pub enum XDomain<T> {
    RealLine,
    /// ℝ minus one point.
    RealLineExcept(T),
    Open(OpenInterval<T>),
    /// Finite index set, encoded as the listed values.
    Finite(Vec<T>),
}

impl<T: Scalar> XDomain<T> {
    pub fn contains(&self, x: T) -> bool {
        if !x.is_finite() {
            return false;
        }
        match self {
            XDomain::RealLine => true,
            XDomain::RealLineExcept(p) => x != *p,
            XDomain::Open(i) => i.contains(x),
            XDomain::Finite(v) => v.contains(&x),
        }
    }
}

impl<T: Scalar> fmt::Display for XDomain<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XDomain::RealLine => write!(f, "R"),
            XDomain::RealLineExcept(p) => write!(f, "R \\ {{{p}}}"),
            XDomain::Open(i) => write!(f, "{i}"),
            XDomain::Finite(v) => {
                let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                write!(f, "{{{}}}", items.join(", "))
            }
        }
    }
}

type PsiMap<T> = Arc<dyn Fn(T, T) -> T + Send + Sync>;

#[derive(Clone)]
enum Evaluator<T> {
    Catalog(FamilySpec<T>),
    Custom(PsiMap<T>),
}

/// A ψ-family with its metadata.
#[derive(Clone)]
pub struct PsiFamily<T> {
    name: String,
    evaluator: Evaluator<T>,
    theta: OpenInterval<T>,
    x_domain: XDomain<T>,
    continuous_in_t: bool,
    strictly_decreasing_in_t: bool,
    equivalent_to_decreasing: bool,
    theta1: Option<RealMap<T>>,
}

impl<T: fmt::Debug> fmt::Debug for PsiFamily<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PsiFamily")
            .field("name", &self.name)
            .field("theta", &self.theta)
            .field("x_domain", &self.x_domain)
            .field("continuous_in_t", &self.continuous_in_t)
            .field("strictly_decreasing_in_t", &self.strictly_decreasing_in_t)
            .finish()
    }
}

/// Builds the catalog family for `spec`.
pub fn make_family<T: Scalar>(spec: FamilySpec<T>) -> Result<PsiFamily<T>> {
    PsiFamily::new(spec)
}

fn check_unit_interval<T: Scalar>(name: &str, alpha: T) -> Result<()> {
    if alpha > T::zero() && alpha < T::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} alpha must lie in (0, 1), got {alpha}")))
    }
}

fn check_positive<T: Scalar>(what: &str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{what} must be positive, got {v}")))
    }
}

impl<T: Scalar> PsiFamily<T> {
    pub fn new(spec: FamilySpec<T>) -> Result<Self> {
        let real = OpenInterval::real_line();
        let identity: Option<RealMap<T>> = Some(Arc::new(|x| x));
        // (theta, X, continuous, strictly decreasing, equivalent to decreasing, theta1)
        let (theta, x_domain, cont, dec, equiv, theta1) = match &spec {
            FamilySpec::MedianSign => (real, XDomain::RealLine, false, false, false, identity),
            FamilySpec::Quantile { alpha } => {
                check_unit_interval("quantile", *alpha)?;
                (real, XDomain::RealLine, false, false, false, identity)
            }
            FamilySpec::Expectile { alpha } => {
                check_unit_interval("expectile", *alpha)?;
                (real, XDomain::RealLine, true, true, true, identity)
            }
            FamilySpec::Mathieu(kind) => {
                kind.validate()?;
                let strict = kind.is_strictly_increasing();
                (real, XDomain::RealLine, true, strict, strict, identity)
            }
            FamilySpec::Bajraktarevic(b) => {
                let theta = *b.f.domain();
                let (f, phi) = (b.f.clone(), b.phi.clone());
                let theta1: RealMap<T> = Arc::new(move |x| {
                    generalized_left_inverse(&f, phi(x), &SolverOptions::default()).unwrap_or(T::nan())
                });
                (theta, XDomain::RealLine, false, true, true, Some(theta1))
            }
            FamilySpec::NormalMean { sigma } => {
                check_positive("normal-mean sigma", *sigma)?;
                (real, XDomain::RealLine, true, true, true, identity)
            }
            FamilySpec::NormalVar { m, raw } => {
                if !m.is_finite() {
                    return Err(Error::InvalidParameter("normal-var m must be finite".into()));
                }
                let m = *m;
                let theta1: RealMap<T> = Arc::new(move |x| (x - m) * (x - m));
                (OpenInterval::positive_half_line(), XDomain::RealLineExcept(m), true, !raw, true, Some(theta1))
            }
            FamilySpec::Ism => {
                let theta1: RealMap<T> = Arc::new(|x: T| -T::one() / (-x * x).ln_1p());
                let x = XDomain::Open(OpenInterval::bounded(T::zero(), T::one())?);
                (OpenInterval::positive_half_line(), x, true, true, true, Some(theta1))
            }
            FamilySpec::NormalMixture { sigma } => {
                check_positive("normal-mixture sigma", *sigma)?;
                (real, XDomain::RealLine, true, false, false, identity)
            }
        };
        Ok(Self {
            name: spec_name(&spec),
            evaluator: Evaluator::Catalog(spec),
            theta,
            x_domain,
            continuous_in_t: cont,
            strictly_decreasing_in_t: dec,
            equivalent_to_decreasing: equiv,
            theta1,
        })
    }

    /// Family from an arbitrary evaluator. Flags default to the weakest
    /// claims (not continuous, not decreasing) and X to the real line.
    pub fn from_fn(name: impl Into<String>, theta: OpenInterval<T>, psi: impl Fn(T, T) -> T + Send + Sync + 'static) -> Self {
        Self {
            name: name.into(),
            evaluator: Evaluator::Custom(Arc::new(psi)),
            theta,
            x_domain: XDomain::RealLine,
            continuous_in_t: false,
            strictly_decreasing_in_t: false,
            equivalent_to_decreasing: false,
            theta1: None,
        }
    }

    pub fn with_x_domain(mut self, x_domain: XDomain<T>) -> Self {
        self.x_domain = x_domain;
        self
    }

    pub fn with_theta1(mut self, theta1: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        self.theta1 = Some(Arc::new(theta1));
        self
    }

    /// Declares continuity and strict decrease in `t`.
    pub fn with_flags(mut self, continuous_in_t: bool, strictly_decreasing_in_t: bool) -> Self {
        self.continuous_in_t = continuous_in_t;
        self.strictly_decreasing_in_t = strictly_decreasing_in_t;
        self.equivalent_to_decreasing = strictly_decreasing_in_t;
        self
    }

    /// The equivalent family `h(t) ψ(x, t)` for a positive `h`. Points of sign
    /// change are unchanged; strict decrease in `t` is not claimed any more,
    /// but the guarantee inherited through equivalence is kept.
    pub fn rescaled(&self, label: &str, h: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        let base = self.clone();
        Self {
            name: format!("{}*{label}", self.name),
            evaluator: Evaluator::Custom(Arc::new(move |x, t| h(t) * base.psi(x, t))),
            theta: self.theta,
            x_domain: self.x_domain.clone(),
            continuous_in_t: self.continuous_in_t,
            strictly_decreasing_in_t: false,
            equivalent_to_decreasing: self.equivalent_to_decreasing,
            theta1: self.theta1.clone(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn spec(&self) -> Option<&FamilySpec<T>> {
        match &self.evaluator {
            Evaluator::Catalog(s) => Some(s),
            Evaluator::Custom(_) => None,
        }
    }

    pub fn theta(&self) -> &OpenInterval<T> {
        &self.theta
    }

    pub fn x_domain(&self) -> &XDomain<T> {
        &self.x_domain
    }

    pub fn is_continuous_in_t(&self) -> bool {
        self.continuous_in_t
    }

    pub fn is_strictly_decreasing_in_t(&self) -> bool {
        self.strictly_decreasing_in_t
    }

    /// Strictly decreasing in `t` up to a positive factor `h(t)`; such
    /// families have a point of sign change for every weighted sample.
    pub fn is_equivalent_to_decreasing(&self) -> bool {
        self.equivalent_to_decreasing
    }

    pub fn has_theta1(&self) -> bool {
        self.theta1.is_some()
    }

    /// Rejects `x` outside X (and, for Bajraktarević families, `x` whose
    /// `φ(x)` leaves the hull of the range of `f` or whose `p(x)` is not
    /// positive).
    pub fn check_x(&self, x: T) -> Result<()> {
        let domain_error = || Error::DomainError { x: x.as_f64(), domain: self.x_domain.to_string() };
        if !self.x_domain.contains(x) {
            return Err(domain_error());
        }
        if let Some(FamilySpec::Bajraktarevic(b)) = self.spec() {
            if !b.f.hull_contains((b.phi)(x)) || !((b.p)(x) > T::zero()) {
                return Err(domain_error());
            }
        }
        Ok(())
    }

    /// `ψ(x, t)`. Callers are expected to have validated `x` with
    /// [`check_x`](Self::check_x).
    pub fn psi(&self, x: T, t: T) -> T {
        match &self.evaluator {
            Evaluator::Custom(f) => f(x, t),
            Evaluator::Catalog(spec) => eval_catalog(spec, x, t),
        }
    }

    /// The single-observation estimator ϑ₁(x).
    pub fn theta1(&self, x: T) -> Result<T> {
        let f = self.theta1.as_ref().ok_or_else(|| Error::NoAnalyticTheta1(self.name.clone()))?;
        self.check_x(x)?;
        Ok(f(x))
    }
}

fn eval_catalog<T: Scalar>(spec: &FamilySpec<T>, x: T, t: T) -> T {
    let zero = T::zero();
    let one = T::one();
    match spec {
        FamilySpec::MedianSign => sign(x - t),
        FamilySpec::Quantile { alpha } => {
            if x > t {
                *alpha
            } else if x < t {
                *alpha - one
            } else {
                zero
            }
        }
        FamilySpec::Expectile { alpha } => {
            let d = x - t;
            if d > zero {
                *alpha * d
            } else if d < zero {
                (one - *alpha) * d
            } else {
                zero
            }
        }
        FamilySpec::Mathieu(kind) => {
            let d = x - t;
            sign(d) * eval_f_mathieu(kind, d.abs())
        }
        FamilySpec::Bajraktarevic(b) => (b.p)(x) * ((b.phi)(x) - b.f.eval(t)),
        FamilySpec::NormalMean { sigma } => (x - t) / (*sigma * *sigma),
        FamilySpec::NormalVar { m, raw } => {
            let r = (x - *m) * (x - *m) - t;
            if *raw {
                r / (T::lit(2.0) * t * t)
            } else {
                r
            }
        }
        FamilySpec::Ism => one / t + (-x * x).ln_1p(),
        FamilySpec::NormalMixture { sigma } => {
            // (x - m)/σ² · 1/(1 + σ exp((x - m)²/(2σ²) - x²/2)), evaluated as a
            // logistic of the log-ratio of the two mixture components.
            let d = x - t;
            let s2 = *sigma * *sigma;
            let z = sigma.ln() + d * d / (T::lit(2.0) * s2) - x * x / T::lit(2.0);
            let share = if z > zero {
                let e = (-z).exp();
                e / (one + e)
            } else {
                one / (one + z.exp())
            };
            d / s2 * share
        }
    }
}

fn spec_name<T: Scalar>(spec: &FamilySpec<T>) -> String {
    match spec {
        FamilySpec::MedianSign => "median".into(),
        FamilySpec::Quantile { alpha } => format!("quantile:alpha={alpha}"),
        FamilySpec::Expectile { alpha } => format!("expectile:alpha={alpha}"),
        FamilySpec::Mathieu(kind) => match kind {
            MathieuKind::Huber { beta } => format!("mathieu:huber:beta={beta}"),
            MathieuKind::Catoni { b } => format!("mathieu:catoni:b={b}"),
            MathieuKind::Polynomial { p, beta } => format!("mathieu:poly:p={p},beta={beta}"),
            MathieuKind::Catoni2 { alpha } => format!("mathieu:catoni2:alpha={alpha}"),
            MathieuKind::L1L2 => "mathieu:l1l2".into(),
            MathieuKind::Fair => "mathieu:fair".into(),
        },
        FamilySpec::Bajraktarevic(b) => format!("bajraktarevic:{}", b.label),
        FamilySpec::NormalMean { sigma } => format!("normal-mean:sigma={sigma}"),
        FamilySpec::NormalVar { m, raw: false } => format!("normal-var:m={m}"),
        FamilySpec::NormalVar { m, raw: true } => format!("normal-var:raw:m={m}"),
        FamilySpec::Ism => "ism".into(),
        FamilySpec::NormalMixture { sigma } => format!("normal-mixture:sigma={sigma}"),
    }
}

/// Parsed `tag[:subtag][:k=v{,k=v}]`.
struct SpecText<'a> {
    raw: &'a str,
    tag: &'a str,
    subtag: Option<&'a str>,
    params: Vec<(&'a str, f64)>,
}

impl<'a> SpecText<'a> {
    fn parse(raw: &'a str) -> Result<Self> {
        let err = |reason: String| Error::FamilySpecParse { spec: raw.to_string(), reason };
        let mut parts = raw.trim().split(':');
        let tag = parts.next().filter(|t| !t.is_empty()).ok_or_else(|| err("empty family tag".into()))?;
        let mut subtag = None;
        let mut params = Vec::new();
        for part in parts {
            if part.contains('=') {
                for kv in part.split(',') {
                    let (k, v) = kv.split_once('=').ok_or_else(|| err(format!("expected key=value, got `{kv}`")))?;
                    let v: f64 = v.trim().parse().map_err(|_| err(format!("`{v}` is not a number")))?;
                    params.push((k.trim(), v));
                }
            } else if subtag.is_none() && params.is_empty() {
                subtag = Some(part);
            } else {
                return Err(err(format!("unexpected segment `{part}`")));
            }
        }
        Ok(Self { raw, tag, subtag, params })
    }

    fn err(&self, reason: impl Into<String>) -> Error {
        Error::FamilySpecParse { spec: self.raw.to_string(), reason: reason.into() }
    }

    fn take(&self, key: &str, default: Option<f64>) -> Result<f64> {
        self.params
            .iter()
            .rev()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| *v)
            .or(default)
            .ok_or_else(|| self.err(format!("missing parameter `{key}`")))
    }

    fn only(&self, allowed: &[&str]) -> Result<()> {
        match self.params.iter().find(|(k, _)| !allowed.contains(k)) {
            Some((k, _)) => Err(self.err(format!("unknown parameter `{k}`"))),
            None => Ok(()),
        }
    }

    fn no_subtag(&self) -> Result<()> {
        match self.subtag {
            Some(s) => Err(self.err(format!("unexpected subtag `{s}`"))),
            None => Ok(()),
        }
    }
}

impl<T: Scalar> FromStr for FamilySpec<T> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let text = SpecText::parse(s)?;
        let num = |key: &str, default: Option<f64>| text.take(key, default).map(T::lit);
        let spec = match text.tag {
            "median" => {
                text.no_subtag()?;
                text.only(&[])?;
                FamilySpec::MedianSign
            }
            "quantile" | "expectile" => {
                text.no_subtag()?;
                text.only(&["alpha"])?;
                let alpha = num("alpha", None)?;
                if text.tag == "quantile" {
                    FamilySpec::Quantile { alpha }
                } else {
                    FamilySpec::Expectile { alpha }
                }
            }
            "mathieu" => {
                let kind = match text.subtag {
                    Some("huber") => {
                        text.only(&["beta"])?;
                        MathieuKind::Huber { beta: num("beta", Some(1.0))? }
                    }
                    Some("catoni") => {
                        text.only(&["b"])?;
                        MathieuKind::Catoni { b: num("b", Some(1.0))? }
                    }
                    Some("poly") => {
                        text.only(&["p", "beta"])?;
                        let p = text.take("p", None)?;
                        if p < 1.0 || p.fract() != 0.0 || p > u32::MAX as f64 {
                            return Err(text.err("p must be a positive integer"));
                        }
                        MathieuKind::Polynomial { p: p as u32, beta: num("beta", Some(1.0))? }
                    }
                    Some("catoni2") => {
                        text.only(&["alpha"])?;
                        MathieuKind::Catoni2 { alpha: num("alpha", None)? }
                    }
                    Some("l1l2") => {
                        text.only(&[])?;
                        MathieuKind::L1L2
                    }
                    Some("fair") => {
                        text.only(&[])?;
                        MathieuKind::Fair
                    }
                    Some(other) => return Err(text.err(format!("unknown mathieu function `{other}`"))),
                    None => return Err(text.err("mathieu needs a function: huber, catoni, poly, catoni2, l1l2, fair")),
                };
                FamilySpec::Mathieu(kind)
            }
            "bajraktarevic" => {
                text.only(&["c"])?;
                let name = text.subtag.ok_or_else(|| text.err("bajraktarevic needs a builtin f: id, cube, exp"))?;
                FamilySpec::Bajraktarevic(Bajraktarevic::builtin(name, num("c", Some(0.0))?)?)
            }
            "normal-mean" => {
                text.no_subtag()?;
                text.only(&["sigma"])?;
                FamilySpec::NormalMean { sigma: num("sigma", Some(1.0))? }
            }
            "normal-var" => {
                let raw = match text.subtag {
                    None => false,
                    Some("raw") => true,
                    Some(other) => return Err(text.err(format!("unexpected subtag `{other}`"))),
                };
                text.only(&["m"])?;
                FamilySpec::NormalVar { m: num("m", Some(0.0))?, raw }
            }
            "ism" => {
                text.no_subtag()?;
                text.only(&[])?;
                FamilySpec::Ism
            }
            "normal-mixture" => {
                text.no_subtag()?;
                text.only(&["sigma"])?;
                FamilySpec::NormalMixture { sigma: num("sigma", Some(1.0))? }
            }
            other => return Err(text.err(format!("unknown family `{other}`"))),
        };
        Ok(spec)
    }
}

/// Parses a textual spec and builds the family.
pub fn parse_family<T: Scalar>(text: &str) -> Result<PsiFamily<T>> {
    make_family(text.parse::<FamilySpec<T>>()?)
}

/// One catalog entry for `list-families`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct FamilyDoc {
    pub syntax: &'static str,
    pub psi: &'static str,
    pub theta: &'static str,
    pub parameters: &'static str,
    pub strictly_decreasing_in_t: bool,
    pub closed_form: bool,
}

/// Documentation of every catalog family.
pub fn catalog() -> Vec<FamilyDoc> {
    let doc = |syntax, psi, theta, parameters, strict, closed| FamilyDoc {
        syntax,
        psi,
        theta,
        parameters,
        strictly_decreasing_in_t: strict,
        closed_form: closed,
    };
    vec![
        doc("median", "sign(x - t)", "R", "none", false, true),
        doc("quantile:alpha=A", "A if x > t, 0 if x = t, A - 1 if x < t", "R", "A in (0, 1)", false, true),
        doc("expectile:alpha=A", "A (x - t) if x > t, (1 - A)(x - t) otherwise", "R", "A in (0, 1)", true, false),
        doc("mathieu:huber:beta=B", "sign(x - t) min(|x - t|, B)", "R", "B > 0 (default 1)", false, false),
        doc("mathieu:catoni:b=B", "sign(x - t) ln(1 + z/B + z^2/(2B^2)), z = |x - t|", "R", "B > 0 (default 1)", true, false),
        doc("mathieu:poly:p=P,beta=B", "sign(x - t) z/(1 + (z/B)^(1 - 1/P))", "R", "P positive integer, B > 0 (default 1)", true, false),
        doc("mathieu:catoni2:alpha=A", "sign(x - t) ln(1 + z + z^A/A)", "R", "A in (1, 2)", true, false),
        doc("mathieu:l1l2", "(x - t)/sqrt(1 + (x - t)^2/2)", "R", "none", true, false),
        doc("mathieu:fair", "(x - t)/(1 + |x - t|)", "R", "none", true, false),
        doc("bajraktarevic:F[:c=C]", "p(x)(F(x) - F(t)), p(x) = 1 + C|F(x)|", "R", "F in {id, cube, exp}, C >= 0 (default 0)", true, true),
        doc("normal-mean:sigma=S", "(x - t)/S^2", "R", "S > 0 (default 1)", true, true),
        doc("normal-var:m=M", "(x - M)^2 - s (rescaled likelihood score)", "(0, inf)", "M real (default 0); X = R \\ {M}", true, true),
        doc("normal-var:raw:m=M", "((x - M)^2 - s)/(2 s^2)", "(0, inf)", "M real (default 0); X = R \\ {M}", false, true),
        doc("ism", "1/t + ln(1 - x^2)", "(0, inf)", "none; X = (0, 1)", true, true),
        doc("normal-mixture:sigma=S", "likelihood score of m in 0.5 N(0,1) + 0.5 N(m, S^2)", "R", "S > 0 (default 1)", false, false),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(s: &str) -> PsiFamily<f64> {
        parse_family(s).unwrap()
    }

    #[test]
    fn quantile_case_split() {
        let q = fam("quantile:alpha=0.3");
        assert_eq!(q.psi(5.0, 2.0), 0.3);
        assert!((q.psi(1.0, 2.0) + 0.7).abs() < 1e-15);
        assert_eq!(q.psi(2.0, 2.0), 0.0);
    }

    #[test]
    fn huber_values() {
        let h = fam("mathieu:huber:beta=1");
        assert_eq!(h.psi(0.0, 0.5), -0.5);
        assert_eq!(h.psi(0.0, 3.0), -1.0);
        assert!(!h.is_strictly_decreasing_in_t());
    }

    #[test]
    fn symmetric_expectile_is_half_difference() {
        let e = fam("expectile:alpha=0.5");
        for (x, t) in [(3.0, 1.0), (-2.0, 4.0), (0.25, 0.25)] {
            assert_eq!(e.psi(x, t), (x - t) / 2.0);
        }
    }

    #[test]
    fn mathieu_f_values() {
        assert_eq!(eval_f_mathieu(&MathieuKind::Huber { beta: 1.0 }, 2.0), 1.0);
        assert_eq!(eval_f_mathieu::<f64>(&MathieuKind::L1L2, 0.0), 0.0);
        assert_eq!(eval_f_mathieu::<f64>(&MathieuKind::Fair, 1.0), 0.5);
        // ln(1 + 1 + 1/2) for catoni b = 1, z = 1.
        let c = eval_f_mathieu(&MathieuKind::Catoni { b: 1.0 }, 1.0);
        assert!((c - 2.5f64.ln()).abs() < 1e-15);
        // p = 1 gives z/2.
        assert_eq!(eval_f_mathieu(&MathieuKind::Polynomial { p: 1, beta: 3.0 }, 4.0), 2.0);
        for kind in [
            MathieuKind::Catoni { b: 2.0 },
            MathieuKind::Polynomial { p: 2, beta: 1.0 },
            MathieuKind::Catoni2 { alpha: 1.5 },
        ] {
            assert_eq!(eval_f_mathieu(&kind, 0.0), 0.0);
        }
    }

    #[test]
    fn theta1_values() {
        let ism = fam("ism");
        let v = ism.theta1(0.5).unwrap();
        assert!((v - 3.476_059_496_782_207).abs() < 1e-12);
        assert!(ism.psi(0.5, v).abs() < 1e-14);
        assert_eq!(fam("normal-var:m=0").theta1(2.0).unwrap(), 4.0);
        assert_eq!(fam("median").theta1(7.0).unwrap(), 7.0);
        let b = fam("bajraktarevic:cube");
        assert!((b.theta1(1.7).unwrap() - 1.7).abs() < 1e-12);
    }

    #[test]
    fn no_theta1_for_bare_custom() {
        let f = PsiFamily::from_fn("c", OpenInterval::real_line(), |x: f64, t| x - t);
        assert!(matches!(f.theta1(0.0), Err(Error::NoAnalyticTheta1(_))));
    }

    #[test]
    fn ism_rejects_outside_unit_interval() {
        let ism = fam("ism");
        assert!(matches!(ism.check_x(1.0), Err(Error::DomainError { .. })));
        assert!(matches!(ism.theta1(-0.2), Err(Error::DomainError { .. })));
        assert!(ism.check_x(0.999).is_ok());
    }

    #[test]
    fn metadata_flags() {
        let strict = ["expectile:alpha=0.2", "mathieu:catoni:b=2", "mathieu:poly:p=2,beta=1", "mathieu:catoni2:alpha=1.5",
            "mathieu:l1l2", "mathieu:fair", "bajraktarevic:exp", "normal-mean:sigma=1", "normal-var:m=0", "ism"];
        for s in strict {
            assert!(fam(s).is_strictly_decreasing_in_t(), "{s}");
        }
        for s in ["median", "quantile:alpha=0.3", "mathieu:huber:beta=1", "normal-mixture:sigma=1", "normal-var:raw:m=0"] {
            assert!(!fam(s).is_strictly_decreasing_in_t(), "{s}");
        }
        assert!(fam("normal-var:raw:m=0").is_equivalent_to_decreasing());
    }

    #[test]
    fn raw_variance_score_is_equivalent_to_rescaled() {
        let raw = fam("normal-var:raw:m=1");
        let resc = fam("normal-var:m=1");
        for (x, s) in [(3.0, 0.5), (-1.0, 4.0), (2.0, 1.0)] {
            assert!((raw.psi(x, s) * 2.0 * s * s - resc.psi(x, s)).abs() < 1e-12);
        }
    }

    #[test]
    fn mixture_matches_direct_density_ratio() {
        let fam = fam("normal-mixture:sigma=1.5");
        let (sigma, x, m) = (1.5f64, 0.7f64, -0.4f64);
        let phi = |z: f64| (-z * z / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let dens = 0.5 * phi(x) + 0.5 * phi((x - m) / sigma) / sigma;
        let dm = 0.5 * phi((x - m) / sigma) / sigma * (x - m) / (sigma * sigma);
        assert!((fam.psi(x, m) - dm / dens).abs() < 1e-14);
        // Far tails stay finite.
        assert!(fam.psi(0.0, 1e4).is_finite());
    }

    #[test]
    fn parse_errors() {
        for bad in ["", "quantile", "quantile:alpha=2", "mathieu", "mathieu:huber:gamma=1", "unknown", "median:alpha=1",
            "mathieu:poly:p=1.5", "bajraktarevic:sin", "mathieu:catoni2:alpha=2.5", "quantile:alpha=x"] {
            assert!(parse_family::<f64>(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn parse_roundtrips_through_names() {
        for s in ["median", "quantile:alpha=0.3", "expectile:alpha=0.7", "mathieu:huber:beta=1", "mathieu:catoni:b=2",
            "mathieu:poly:p=2,beta=1", "mathieu:catoni2:alpha=1.5", "mathieu:l1l2", "mathieu:fair", "bajraktarevic:id",
            "bajraktarevic:cube:c=1", "normal-mean:sigma=1", "normal-var:m=0", "normal-var:raw:m=0", "ism", "normal-mixture:sigma=1"] {
            assert_eq!(fam(s).name(), s);
        }
        assert_eq!(catalog().len(), 15);
    }
}
