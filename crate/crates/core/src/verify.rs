//! Grid-level checks of the conditions behind existence and uniqueness of
//! ψ-estimators, and reproductions of the classical counterexamples.
//!
//! A check never proves anything: `HoldsOnGrid` only says no violation was
//! found among the evaluated points. Violations come with witnesses that
//! re-evaluate to the same inequality.
//!
//! Float comparisons use two declared margins. A grid pair counts as strictly
//! increasing when `f(u) < f(v) - STRICT_MARGIN * max(1, |f(u)|)`. A violation
//! of a non-strict inequality smaller than `TIE_MARGIN * max(1, |value|)` is
//! reported as `Inconclusive` rather than `Violated`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimators::{estimate, EstimateResult};
use crate::families::{parse_family, PsiFamily, XDomain};
use crate::scalar::Scalar;
use crate::signchange::{find_sign_change, SolverOptions};
use crate::types::{ExtReal, OpenInterval, OutcomeKind, SignChangeOutcome, WeightedSample};

pub const STRICT_MARGIN: f64 = 1e-13;
pub const TIE_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    HoldsOnGrid,
    Violated,
    Inconclusive,
}

impl Verdict {
    fn severity(self) -> u8 {
        match self {
            Verdict::HoldsOnGrid => 0,
            Verdict::Inconclusive => 1,
            Verdict::Violated => 2,
        }
    }

    fn worst(self, other: Self) -> Self {
        if other.severity() > self.severity() {
            other
        } else {
            self
        }
    }
}

/// Which of the three ways a level `y` can be a level of increase for `f` was
/// seen on the grid: `y < f` everywhere, `y > f` everywhere, or `y - f` has a
/// point of sign change.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelCase {
    LevelBelowFunction,
    LevelAboveFunction,
    SignChange,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Witness {
    /// Grid pair `u < v` with the function values.
    Pair {
        u: f64,
        v: f64,
        fu: f64,
        fv: f64,
        #[serde(skip_serializing_if = "Option::is_none")]
        level: Option<f64>,
    },
    /// A sample whose weighted ψ-sum has no point of sign change.
    Sample { points: Vec<f64>, weights: Vec<f64>, outcome: OutcomeKind },
    /// Explicit evaluations.
    Values { ts: Vec<f64>, values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridInfo {
    pub lower: f64,
    pub upper: f64,
    pub count: usize,
    pub resolution: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PropertyReport {
    pub property_id: String,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub grid: GridInfo,
    /// Smallest slack observed; negative when violated.
    pub margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level_case: Option<LevelCase>,
}

impl PropertyReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::HoldsOnGrid
    }

    pub fn violated(&self) -> bool {
        self.verdict == Verdict::Violated
    }
}

fn check_grid_count(grid_count: usize) -> Result<()> {
    if grid_count < 16 {
        return Err(Error::InvalidOptions(format!("grid count must be at least 16, got {grid_count}")));
    }
    Ok(())
}

fn scale(v: f64) -> f64 {
    v.abs().max(1.0)
}

/// `(ts, f(ts))` as f64 on `count` grid points of `domain`.
fn sample_grid<T: Scalar, F: Fn(T) -> T>(f: &F, domain: &OpenInterval<T>, count: usize) -> (Vec<f64>, Vec<f64>) {
    domain.grid(count, T::one()).into_iter().map(|t| (t.as_f64(), f(t).as_f64())).unzip()
}

fn grid_info(ts: &[f64], what: &str) -> GridInfo {
    let (lower, upper) = match (ts.first(), ts.last()) {
        (Some(&a), Some(&b)) => (a, b),
        _ => (f64::NAN, f64::NAN),
    };
    GridInfo {
        lower,
        upper,
        count: ts.len(),
        resolution: format!(
            "{} grid points in [{lower}, {upper}]; {what}; a pass is not a proof",
            ts.len()
        ),
    }
}

fn pair(ts: &[f64], fs: &[f64], i: usize, j: usize, level: Option<f64>) -> Witness {
    Witness::Pair { u: ts[i], v: ts[j], fu: fs[i], fv: fs[j], level }
}

fn first_violation(fs: &[f64], upper_ok: impl Fn(f64) -> bool, lower_ok: impl Fn(f64) -> bool) -> Option<(usize, usize)> {
    let u = fs.iter().position(|&v| upper_ok(v))?;
    let v = fs[u + 1..].iter().position(|&v| lower_ok(v))? + u + 1;
    Some((u, v))
}

struct LevelScan {
    verdict: Verdict,
    witness: Option<(usize, usize)>,
    margin: Option<f64>,
    case: Option<LevelCase>,
}

fn scan_level(fs: &[f64], y: f64) -> LevelScan {
    if fs.iter().any(|v| !v.is_finite()) {
        let i = fs.iter().position(|v| !v.is_finite()).expect("non-finite value");
        return LevelScan { verdict: Verdict::Inconclusive, witness: Some((i, i)), margin: None, case: None };
    }
    let tie = TIE_MARGIN * scale(y);
    if let Some(w) = first_violation(fs, |v| y <= v, |v| y >= v) {
        return LevelScan { verdict: Verdict::Violated, witness: Some(w), margin: Some(0.0), case: None };
    }
    if let Some(w) = first_violation(fs, |v| y <= v + tie, |v| y + tie >= v) {
        return LevelScan { verdict: Verdict::Inconclusive, witness: Some(w), margin: None, case: None };
    }
    let margin = fs.iter().map(|&v| (v - y).abs()).fold(f64::INFINITY, f64::min);
    let case = if fs.iter().all(|&v| y < v) {
        LevelCase::LevelBelowFunction
    } else if fs.iter().all(|&v| y > v) {
        LevelCase::LevelAboveFunction
    } else {
        LevelCase::SignChange
    };
    LevelScan { verdict: Verdict::HoldsOnGrid, witness: None, margin: Some(margin), case: Some(case) }
}

/// Is `y` a level of increase for `f` on the grid: does `y <= f(u)` force
/// `y < f(v)` for every grid `v > u`?
pub fn check_level_of_increase<T: Scalar, F: Fn(T) -> T>(
    f: F,
    domain: &OpenInterval<T>,
    y: T,
    grid_count: usize,
) -> Result<PropertyReport> {
    check_grid_count(grid_count)?;
    let (ts, fs) = sample_grid(&f, domain, grid_count);
    let y = y.as_f64();
    let scan = scan_level(&fs, y);
    Ok(PropertyReport {
        property_id: format!("level-of-increase:y={y}"),
        verdict: scan.verdict,
        witnesses: scan.witness.map(|(i, j)| pair(&ts, &fs, i, j, Some(y))).into_iter().collect(),
        grid: grid_info(&ts, &format!("equality within {TIE_MARGIN} max(1, |y|) is inconclusive")),
        margin: scan.margin,
        level_case: scan.case,
    })
}

/// `f(u) <= f(v) + eps` (strict: `<`) for all grid pairs `u < v`, checked in
/// one pass against the running maximum.
fn eps_scan(fs: &[f64], eps: f64, strict: bool) -> (Verdict, Option<(usize, usize)>, f64) {
    let mut arg_max = 0;
    let mut worst: Option<(f64, usize, usize)> = None;
    for j in 1..fs.len() {
        if fs[j - 1] > fs[arg_max] {
            arg_max = j - 1;
        }
        let excess = fs[arg_max] - fs[j] - eps;
        if worst.is_none_or(|(w, _, _)| excess > w) {
            worst = Some((excess, arg_max, j));
        }
    }
    let Some((excess, i, j)) = worst else {
        return (Verdict::Inconclusive, None, f64::NAN);
    };
    if fs.iter().any(|v| !v.is_finite()) {
        let k = fs.iter().position(|v| !v.is_finite()).expect("non-finite value");
        return (Verdict::Inconclusive, Some((k, k)), f64::NAN);
    }
    let verdict = if strict {
        if excess >= -STRICT_MARGIN * scale(fs[i]) {
            Verdict::Violated
        } else {
            Verdict::HoldsOnGrid
        }
    } else if excess > TIE_MARGIN * scale(fs[i]) {
        Verdict::Violated
    } else if excess > 0.0 {
        Verdict::Inconclusive
    } else {
        Verdict::HoldsOnGrid
    };
    let witness = (verdict != Verdict::HoldsOnGrid).then_some((i, j));
    (verdict, witness, -excess)
}

fn strictness_note(strict: bool) -> String {
    if strict {
        format!("strict means a gap above {STRICT_MARGIN} max(1, |f(u)|)")
    } else {
        format!("violations within {TIE_MARGIN} max(1, |f(u)|) are inconclusive")
    }
}

/// Is `f` (strictly) `eps`-increasing on the grid: `f(u) <= f(v) + eps` for
/// all `u < v`?
pub fn check_eps_increasing<T: Scalar, F: Fn(T) -> T>(
    f: F,
    domain: &OpenInterval<T>,
    eps: T,
    strict: bool,
    grid_count: usize,
) -> Result<PropertyReport> {
    check_grid_count(grid_count)?;
    if !(eps > T::zero()) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    let (ts, fs) = sample_grid(&f, domain, grid_count);
    let eps = eps.as_f64();
    let (verdict, witness, margin) = eps_scan(&fs, eps, strict);
    Ok(PropertyReport {
        property_id: format!("{}eps-increasing:eps={eps}", if strict { "strictly-" } else { "" }),
        verdict,
        witnesses: witness.map(|(i, j)| pair(&ts, &fs, i, j, None)).into_iter().collect(),
        grid: grid_info(&ts, &strictness_note(strict)),
        margin: Some(margin),
        level_case: None,
    })
}

/// `t ↦ -ψ(x, t) / ψ(y, t)` on `(ϑ₁(x), ϑ₁(y))`, or the variant
/// `t ↦ ψ(x, t) / (ψ(x, t) - ψ(y, t))`.
#[derive(Debug, Clone)]
pub struct RatioFunction<T> {
    pub x: T,
    pub y: T,
    family: PsiFamily<T>,
    domain: OpenInterval<T>,
    variant: bool,
}

impl<T: Scalar> RatioFunction<T> {
    pub fn new(family: &PsiFamily<T>, x: T, y: T) -> Result<Self> {
        Self::build(family, x, y, false)
    }

    pub fn variant(family: &PsiFamily<T>, x: T, y: T) -> Result<Self> {
        Self::build(family, x, y, true)
    }

    fn build(family: &PsiFamily<T>, x: T, y: T, variant: bool) -> Result<Self> {
        let (tx, ty) = (family.theta1(x)?, family.theta1(y)?);
        if !(tx < ty) {
            return Err(Error::Theta1Order { tx: tx.as_f64(), ty: ty.as_f64() });
        }
        Ok(Self { x, y, family: family.clone(), domain: OpenInterval::bounded(tx, ty)?, variant })
    }

    pub fn domain(&self) -> &OpenInterval<T> {
        &self.domain
    }

    pub fn eval(&self, t: T) -> T {
        let px = self.family.psi(self.x, t);
        let py = self.family.psi(self.y, t);
        if self.variant {
            px / (px - py)
        } else {
            -px / py
        }
    }
}

/// (Strict) increase of the ratio function over all grid pairs.
pub fn check_ratio_monotone<T: Scalar>(
    family: &PsiFamily<T>,
    x: T,
    y: T,
    grid_count: usize,
    strict: bool,
) -> Result<PropertyReport> {
    check_grid_count(grid_count)?;
    let ratio = RatioFunction::new(family, x, y)?;
    let (ts, fs) = sample_grid(&|t| ratio.eval(t), ratio.domain(), grid_count);
    let (verdict, witness, margin) = if strict {
        // Consecutive strict gaps imply strict gaps for every pair.
        let worst = (0..fs.len().saturating_sub(1))
            .map(|i| (fs[i + 1] - fs[i] - STRICT_MARGIN * scale(fs[i]), i))
            .fold(None, |acc: Option<(f64, usize)>, c| match acc {
                Some(a) if !(c.0 < a.0) => Some(a),
                _ => Some(c),
            });
        match worst {
            _ if fs.iter().any(|v| !v.is_finite()) => (Verdict::Inconclusive, None, f64::NAN),
            Some((gap, i)) if gap <= 0.0 => (Verdict::Violated, Some((i, i + 1)), fs[i + 1] - fs[i]),
            Some((_, i)) => (Verdict::HoldsOnGrid, None, fs[i + 1] - fs[i]),
            None => (Verdict::Inconclusive, None, f64::NAN),
        }
    } else {
        let (v, w, m) = eps_scan(&fs, 0.0, false);
        (v, w, m)
    };
    let id = format!(
        "ratio-{}increasing:{}:x={},y={}",
        if strict { "strictly-" } else { "" },
        family.name(),
        x,
        y
    );
    Ok(PropertyReport {
        property_id: id,
        verdict,
        witnesses: witness.map(|(i, j)| pair(&ts, &fs, i, j, None)).into_iter().collect(),
        grid: grid_info(&ts, &strictness_note(strict)),
        margin: margin.is_finite().then_some(margin),
        level_case: None,
    })
}

/// Necessary condition for the unit-weight property for `n`: each `k/(n-k)`
/// must be a level of increase of the ratio function. A violation therefore
/// refutes the property.
pub fn check_levels_for_tn<T: Scalar>(
    family: &PsiFamily<T>,
    x: T,
    y: T,
    n: usize,
    grid_count: usize,
) -> Result<PropertyReport> {
    check_grid_count(grid_count)?;
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n must be at least 2, got {n}")));
    }
    let ratio = RatioFunction::new(family, x, y)?;
    let (ts, fs) = sample_grid(&|t| ratio.eval(t), ratio.domain(), grid_count);
    let mut verdict = Verdict::HoldsOnGrid;
    let mut witnesses = Vec::new();
    let mut margin = f64::INFINITY;
    for k in 1..n {
        let level = k as f64 / (n - k) as f64;
        let scan = scan_level(&fs, level);
        verdict = verdict.worst(scan.verdict);
        if let Some((i, j)) = scan.witness {
            witnesses.push(pair(&ts, &fs, i, j, Some(level)));
        }
        margin = margin.min(scan.margin.unwrap_or(f64::NEG_INFINITY));
    }
    Ok(PropertyReport {
        property_id: format!("levels-for-T{n}:{}:x={x},y={y}", family.name()),
        verdict,
        witnesses,
        grid: grid_info(&ts, &format!("levels k/(n-k), k = 1..{}; ties within {TIE_MARGIN} are inconclusive", n - 1)),
        margin: margin.is_finite().then_some(margin),
        level_case: None,
    })
}

const MAX_SAMPLE_WITNESSES: usize = 16;

fn tn_lambda_report<T: Scalar>(
    family: &PsiFamily<T>,
    corpus: &[WeightedSample<T>],
    results: Vec<Result<EstimateResult<T>>>,
) -> Result<PropertyReport> {
    let mut witnesses = Vec::new();
    let mut failures = 0usize;
    for (sample, result) in corpus.iter().zip(results) {
        let result = result?;
        if !result.outcome.is_point() {
            failures += 1;
            if witnesses.len() < MAX_SAMPLE_WITNESSES {
                witnesses.push(Witness::Sample {
                    points: sample.points().iter().map(|v| v.as_f64()).collect(),
                    weights: sample.weights().iter().map(|v| v.as_f64()).collect(),
                    outcome: result.outcome.kind(),
                });
            }
        }
    }
    let (lower, upper) = corpus
        .iter()
        .flat_map(|s| s.points().iter().map(|v| v.as_f64()))
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    let lens: Vec<usize> = corpus.iter().map(|s| s.len()).collect();
    Ok(PropertyReport {
        property_id: format!("T-n-lambda:{}", family.name()),
        verdict: if failures == 0 { Verdict::HoldsOnGrid } else { Verdict::Violated },
        witnesses,
        grid: GridInfo {
            lower,
            upper,
            count: corpus.len(),
            resolution: format!(
                "{} samples of size {}..={}, {failures} without a point of sign change; a pass is not a proof",
                corpus.len(),
                lens.iter().min().copied().unwrap_or(0),
                lens.iter().max().copied().unwrap_or(0)
            ),
        },
        margin: None,
        level_case: None,
    })
}

/// Estimates every sample of `corpus` in parallel. A single sample without a
/// point of sign change refutes the property for its `(n, λ)`. The report is
/// identical to [`check_tn_lambda_sequential`].
pub fn check_tn_lambda<T: Scalar>(
    family: &PsiFamily<T>,
    corpus: &[WeightedSample<T>],
    opts: &SolverOptions<T>,
) -> Result<PropertyReport> {
    if corpus.is_empty() {
        return Err(Error::EmptySample);
    }
    let results: Vec<_> = corpus.par_iter().map(|s| estimate(family, s, opts)).collect();
    tn_lambda_report(family, corpus, results)
}

pub fn check_tn_lambda_sequential<T: Scalar>(
    family: &PsiFamily<T>,
    corpus: &[WeightedSample<T>],
    opts: &SolverOptions<T>,
) -> Result<PropertyReport> {
    if corpus.is_empty() {
        return Err(Error::EmptySample);
    }
    let results: Vec<_> = corpus.iter().map(|s| estimate(family, s, opts)).collect();
    tn_lambda_report(family, corpus, results)
}

fn random_point<T: Scalar>(x_domain: &XDomain<T>, rng: &mut ChaCha8Rng) -> T {
    match x_domain {
        XDomain::RealLine => T::lit(rng.gen_range(-10.0..10.0)),
        XDomain::RealLineExcept(p) => loop {
            let x = T::lit(rng.gen_range(-10.0..10.0));
            if x != *p {
                return x;
            }
        },
        XDomain::Finite(values) => values[rng.gen_range(0..values.len())],
        XDomain::Open(interval) => loop {
            let x = match (interval.lower(), interval.upper()) {
                (ExtReal::Finite(a), ExtReal::Finite(b)) => a + (b - a) * T::lit(rng.gen::<f64>()),
                (ExtReal::Finite(a), _) => a + T::lit(rng.gen_range(0.0..10.0)),
                (_, ExtReal::Finite(b)) => b - T::lit(rng.gen_range(0.0..10.0)),
                _ => T::lit(rng.gen_range(-10.0..10.0)),
            };
            if interval.contains(x) {
                return x;
            }
        },
    }
}

/// `count` samples with sizes in `sizes`, points drawn from `x_domain` and,
/// when `weighted`, weights uniform on `[0.1, 5)`.
pub fn random_corpus<T: Scalar>(
    x_domain: &XDomain<T>,
    count: usize,
    sizes: std::ops::RangeInclusive<usize>,
    weighted: bool,
    seed: u64,
) -> Vec<WeightedSample<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(sizes.clone());
            let points = (0..n).map(|_| random_point(x_domain, &mut rng)).collect();
            let weights = (0..n).map(|_| if weighted { T::lit(rng.gen_range(0.1..5.0)) } else { T::one() }).collect();
            WeightedSample::new(points, weights).expect("generated samples are valid")
        })
        .collect()
}

/// All of `valuesⁿ` with unit weights.
pub fn exhaustive_corpus<T: Scalar>(values: &[T], n: usize) -> Vec<WeightedSample<T>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<T>| {
                values.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect();
    }
    out.into_iter().map(|p| WeightedSample::unit(p).expect("nonempty")).collect()
}

/// Exhaustive unit-weight corpus for finite X and `n <= 3`, otherwise
/// `count` random unit-weight samples of size `n`.
pub fn corpus<T: Scalar>(x_domain: &XDomain<T>, n: usize, count: usize, seed: u64) -> Vec<WeightedSample<T>> {
    match x_domain {
        XDomain::Finite(values) if n <= 3 => exhaustive_corpus(values, n),
        _ => random_corpus(x_domain, count, n..=n, false, seed),
    }
}

/// Table family on `X = {1, …, m}`: `ψ(i, t) = wᵢ` for `t < i`, `-wᵢ` for
/// `t >= i`.
pub fn step_family(weights: &[f64]) -> PsiFamily<f64> {
    let w = weights.to_vec();
    let xs: Vec<f64> = (1..=w.len()).map(|i| i as f64).collect();
    let name = format!(
        "step:w=({})",
        w.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
    );
    PsiFamily::from_fn(name, OpenInterval::real_line(), move |x: f64, t: f64| {
        let wi = w[x as usize - 1];
        if t < x {
            wi
        } else {
            -wi
        }
    })
    .with_x_domain(XDomain::Finite(xs))
    .with_theta1(|x| x)
}

/// Two-point table family whose ψ does not vanish at ϑ₁: `X = {1, 2}` with
/// `ψ(1, ·) = 2, -t, -2` on `t < 1`, `[1, 2]`, `t > 2` and
/// `ψ(2, ·) = 1, 2, -1` on `t < 2`, `t = 2`, `t > 2`.
pub fn nonvanishing_family() -> PsiFamily<f64> {
    PsiFamily::from_fn("two-step", OpenInterval::real_line(), |x: f64, t: f64| {
        if x == 1.0 {
            if t < 1.0 {
                2.0
            } else if t <= 2.0 {
                -t
            } else {
                -2.0
            }
        } else if t < 2.0 {
            1.0
        } else if t == 2.0 {
            2.0
        } else {
            -1.0
        }
    })
    .with_x_domain(XDomain::Finite(vec![1.0, 2.0]))
    .with_theta1(|x| x)
}

/// Outcome of one reproduction: the classical verdict, the computed one, and
/// the reports behind it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reproduction {
    pub id: String,
    pub expected: String,
    pub computed: String,
    pub matched: bool,
    pub reports: Vec<PropertyReport>,
}

pub const REPRODUCTION_IDS: [&str; 6] =
    ["ex-T2-fail", "ex-not-omitted", "ex-div-noomit", "huber-T2", "median-even", "mixture-ratio"];

const REPRODUCTION_GRID: usize = 512;
const LOCATION_TOLERANCE: f64 = 1e-8;

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= LOCATION_TOLERANCE
}

fn describe(outcome: &SignChangeOutcome<f64>) -> String {
    match outcome {
        SignChangeOutcome::Point { location, .. } => format!("Point at {location:.9}"),
        SignChangeOutcome::ZeroPlateau { plateau } => format!("ZeroPlateau [{:.9}, {:.9}]", plateau.0, plateau.1),
        other => other.kind().to_string(),
    }
}

/// Checks unit-weight pairs of the step family against the case table: the
/// pair property holds iff all weights differ, and then the estimate of
/// `(xᵢ, xⱼ)` is the index with the larger weight.
pub fn step_pairs(weights: &[f64]) -> Result<(bool, String, PropertyReport)> {
    let family = step_family(weights);
    let opts = SolverOptions::default();
    let xs: Vec<f64> = (1..=weights.len()).map(|i| i as f64).collect();
    let samples = exhaustive_corpus(&xs, 2);
    let report = check_tn_lambda_sequential(&family, &samples, &opts)?;
    let distinct = (0..weights.len()).all(|i| (i + 1..weights.len()).all(|j| weights[i] != weights[j]));
    let mut table_ok = true;
    for s in &samples {
        let (i, j) = (s.points()[0], s.points()[1]);
        let (wi, wj) = (weights[i as usize - 1], weights[j as usize - 1]);
        let expected = if i == j || wi > wj { Some(i) } else if wi < wj { Some(j) } else { None };
        let outcome = estimate(&family, s, &opts)?.outcome;
        table_ok &= match (expected, outcome.location()) {
            (Some(e), Some(l)) => near(e, l),
            (None, None) => true,
            _ => false,
        };
    }
    let computed = if report.holds() {
        format!("T2 holds on X^2; estimates {} the case table", if table_ok { "match" } else { "differ from" })
    } else {
        format!("T2 fails on {} of {} pairs", report.witnesses.len(), samples.len())
    };
    let matched = table_ok && report.holds() == distinct;
    Ok((matched, computed, report))
}

fn reproduce_t2_fail(seed: u64) -> Result<Reproduction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random: Vec<f64> = (0..4).map(|_| rng.gen_range(0.5..3.0)).collect();
    let cases = [vec![1.0, 2.0], vec![1.0, 1.0], random];
    let mut matched = true;
    let mut computed = Vec::new();
    let mut expected = Vec::new();
    let mut reports = Vec::new();
    for w in cases {
        let distinct = (0..w.len()).all(|i| (i + 1..w.len()).all(|j| w[i] != w[j]));
        let (ok, text, report) = step_pairs(&w)?;
        matched &= ok;
        let label = format!("w={w:?}");
        expected.push(format!(
            "{label}: {}",
            if distinct { "T2 holds, estimate = index of larger weight" } else { "T2 fails" }
        ));
        computed.push(format!("{label}: {text}"));
        reports.push(report);
    }
    Ok(Reproduction {
        id: "ex-T2-fail".into(),
        expected: expected.join("; "),
        computed: computed.join("; "),
        matched,
        reports,
    })
}

fn reproduce_not_omitted() -> Result<Reproduction> {
    let family = nonvanishing_family();
    let opts = SolverOptions::default();
    let sample = WeightedSample::unit(vec![1.0, 2.0])?;
    let sum = crate::estimators::weighted_psi_sum(&family, &sample)?;
    let outcome = find_sign_change(&sum, family.theta(), &opts);
    // Re-check at the breakpoints of the table.
    let breakpoints = [1.0, 2.0];
    let values: Vec<f64> = breakpoints.iter().map(|&t| sum(t)).collect();
    let refuted = match outcome.location() {
        Some(l) => breakpoints
            .iter()
            .zip(&values)
            .any(|(&b, &v)| (b < l - opts.tolerance && v <= 0.0) || (b > l + opts.tolerance && v >= 0.0)),
        None => true,
    };
    let zeros = values.iter().all(|&v| v == 0.0);
    let definition = PropertyReport {
        property_id: "sign-change-at-breakpoints:two-step".into(),
        verdict: if refuted { Verdict::Violated } else { Verdict::HoldsOnGrid },
        witnesses: vec![Witness::Values { ts: breakpoints.to_vec(), values: values.clone() }],
        grid: GridInfo {
            lower: 1.0,
            upper: 2.0,
            count: breakpoints.len(),
            resolution: format!("solver scan plus breakpoints {{1, 2}}; solver saw {}", describe(&outcome)),
        },
        margin: None,
        level_case: None,
    };
    let ratio = check_ratio_monotone(&family, 1.0, 2.0, REPRODUCTION_GRID, true)?;
    Ok(Reproduction {
        id: "ex-not-omitted".into(),
        expected: "ratio strictly increasing, psi sum zero at t = 1 and t = 2, no point of sign change".into(),
        computed: format!(
            "ratio {}; psi sum at 1, 2 = {:?}; {}",
            if ratio.holds() { "strictly increasing on grid" } else { "not strictly increasing" },
            values,
            if refuted { "no point of sign change" } else { "point of sign change found" }
        ),
        matched: refuted && zeros && ratio.holds(),
        reports: vec![definition, ratio],
    })
}

fn reproduce_div_noomit() -> Result<Reproduction> {
    let (n, k) = (3usize, 2usize);
    let family = step_family(&[(k - 1) as f64, 1.0]);
    let opts = SolverOptions::default();
    let tn = check_tn_lambda_sequential(&family, &exhaustive_corpus(&[1.0, 2.0], n), &opts)?;
    let k_sample = WeightedSample::unit(vec![1.0, 2.0])?;
    let tk = check_tn_lambda_sequential(&family, std::slice::from_ref(&k_sample), &opts)?;
    let outcome = estimate(&family, &k_sample, &opts)?.outcome;
    let plateau_ok = outcome.plateau().is_some_and(|(a, b)| near(a, 1.0) && near(b, 2.0));
    Ok(Reproduction {
        id: "ex-div-noomit".into(),
        expected: "w = (1, 1): T3 holds on all of X^3; sample (x1, x2) has a zero plateau [1, 2]".into(),
        computed: format!(
            "T3 {} on {} samples; sample (x1, x2): {}",
            if tn.holds() { "holds" } else { "fails" },
            tn.grid.count,
            describe(&outcome)
        ),
        matched: tn.holds() && tk.violated() && plateau_ok,
        reports: vec![tn, tk],
    })
}

fn reproduce_huber() -> Result<Reproduction> {
    let family = parse_family::<f64>("mathieu:huber:beta=1")?;
    let sample = WeightedSample::unit(vec![0.0, 3.0])?;
    let opts = SolverOptions::default();
    let report = check_tn_lambda_sequential(&family, std::slice::from_ref(&sample), &opts)?;
    let outcome = estimate(&family, &sample, &opts)?.outcome;
    let plateau_ok = outcome.plateau().is_some_and(|(a, b)| near(a, 1.0) && near(b, 2.0));
    Ok(Reproduction {
        id: "huber-T2".into(),
        expected: "no-sign-change: zero plateau [1, 2] for sample (0, 3)".into(),
        computed: describe(&outcome),
        matched: report.violated() && plateau_ok,
        reports: vec![report],
    })
}

fn reproduce_median_even() -> Result<Reproduction> {
    let family = parse_family::<f64>("median")?;
    let sample = WeightedSample::unit(vec![1.0, 2.0])?;
    let opts = SolverOptions::default();
    let result = estimate(&family, &sample, &opts)?;
    let report = check_tn_lambda_sequential(&family, std::slice::from_ref(&sample), &opts)?;
    let plateau_ok = result.outcome.plateau().is_some_and(|(a, b)| near(a, 1.0) && near(b, 2.0));
    Ok(Reproduction {
        id: "median-even".into(),
        expected: "ZeroPlateau [1, 2], closed form 1.5".into(),
        computed: format!(
            "{}, closed form {}",
            describe(&result.outcome),
            result.closed_form.map_or("none".to_string(), |c| c.to_string())
        ),
        matched: plateau_ok && result.closed_form == Some(1.5) && report.violated(),
        reports: vec![report],
    })
}

fn reproduce_mixture() -> Result<Reproduction> {
    let family = parse_family::<f64>("normal-mixture:sigma=1")?;
    let report = check_ratio_monotone(&family, 1.0, 5.0, REPRODUCTION_GRID, false)?;
    let inside = report.witnesses.iter().all(|w| match w {
        Witness::Pair { u, v, .. } => 1.0 < *u && u < v && *v < 5.0,
        _ => false,
    });
    Ok(Reproduction {
        id: "mixture-ratio".into(),
        expected: "ratio on (1, 5) is not increasing".into(),
        computed: match report.witnesses.first() {
            Some(Witness::Pair { u, v, fu, fv, .. }) => {
                format!("not increasing: r({u:.6}) = {fu:.6} > r({v:.6}) = {fv:.6}")
            }
            _ => "increasing on grid".into(),
        },
        matched: report.violated() && inside && !report.witnesses.is_empty(),
        reports: vec![report],
    })
}

/// Runs one reproduction; `seed` drives the randomly weighted case of
/// `ex-T2-fail`.
pub fn reproduce(id: &str, seed: u64) -> Result<Reproduction> {
    match id {
        "ex-T2-fail" => reproduce_t2_fail(seed),
        "ex-not-omitted" => reproduce_not_omitted(),
        "ex-div-noomit" => reproduce_div_noomit(),
        "huber-T2" => reproduce_huber(),
        "median-even" => reproduce_median_even(),
        "mixture-ratio" => reproduce_mixture(),
        other => Err(Error::UnknownId(other.to_string())),
    }
}

pub fn reproduce_all(seed: u64) -> Result<Vec<Reproduction>> {
    REPRODUCTION_IDS.iter().map(|id| reproduce(id, seed)).collect()
}
