//! Command-line front end of `psisolve`: data ingestion, command dispatch and
//! report rendering. The binary is a thin wrapper around [`run`].

use std::fs;
use std::io::Read;
use std::path::Path;

use psisolve_core::verify::{self, PropertyReport, Reproduction};
use psisolve_core::{
    catalog, estimate, parse_family, DiscreteDistribution, Estimate, Family, Options, Sample, SignChangeOutcome,
    DEFAULT_SEED,
};
use serde_json::{json, Map, Value};

pub const SEED_ENV: &str = "PSISOLVE_SEED";
pub const DEFAULT_GRID: usize = 1024;
pub const VERIFY_CORPUS: usize = 200;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_ANOMALY: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Estimate,
    Verify,
    Expectation,
    Reproduce,
    ListFamilies,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Table,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub command: Command,
    pub family_spec: Option<String>,
    /// Path of the data file, `-` for standard input.
    pub data_path: Option<String>,
    /// Weights file; read as CSV only when it ends in `.csv`, then from
    /// column `csv_col`.
    pub weights_path: Option<String>,
    pub atoms: Option<String>,
    pub probs: Option<String>,
    pub csv_col: Option<usize>,
    /// Reproduction id or `all`.
    pub target: Option<String>,
    pub tolerance: f64,
    pub seed: u64,
    pub grid_count: usize,
    pub format: OutputFormat,
}

impl CliConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            family_spec: None,
            data_path: None,
            weights_path: None,
            atoms: None,
            probs: None,
            csv_col: None,
            target: None,
            tolerance: Options::default().tolerance,
            seed: DEFAULT_SEED,
            grid_count: DEFAULT_GRID,
            format: OutputFormat::Json,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(CliError::Usage(format!("--tol must be positive, got {}", self.tolerance)));
        }
        if self.grid_count < 16 {
            return Err(CliError::Usage(format!("--grid must be at least 16, got {}", self.grid_count)));
        }
        Ok(())
    }
}

/// Seed precedence: explicit flag, then `PSISOLVE_SEED`, then the default.
pub fn resolve_seed(flag: Option<u64>, env: Option<&str>) -> Result<u64, CliError> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match env {
        Some(text) => text
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{SEED_ENV} is not an unsigned integer: `{text}`"))),
        None => Ok(DEFAULT_SEED),
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IngestError {
    #[error("cannot parse `{text}` at line {line}, token {token}")]
    ParseError { line: usize, token: usize, text: String },
    #[error("input holds no numbers")]
    EmptyInput,
    #[error("line {line} has no column {column}")]
    MissingColumn { line: usize, column: usize },
    #[error("cannot read {path}: {reason}")]
    Io { path: String, reason: String },
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Core(#[from] psisolve_core::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn kind(&self) -> &'static str {
        match self {
            CliError::Ingest(IngestError::ParseError { .. }) => "parse-error",
            CliError::Ingest(IngestError::EmptyInput) => "empty-input",
            CliError::Ingest(IngestError::MissingColumn { .. }) => "missing-column",
            CliError::Ingest(IngestError::Io { .. }) => "io-error",
            CliError::Core(_) => "invalid-input",
            CliError::Usage(_) => "usage",
        }
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("error".into(), json!(self.kind()));
        obj.insert("message".into(), json!(self.to_string()));
        if let CliError::Ingest(IngestError::ParseError { line, token, .. }) = self {
            obj.insert("line".into(), json!(line));
            obj.insert("token".into(), json!(token));
        }
        Value::Object(obj)
    }
}

fn parse_float(text: &str, line: usize, token: usize) -> Result<f64, IngestError> {
    text.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| IngestError::ParseError { line, token, text: text.trim().to_string() })
}

fn csv_cells(line: &str) -> impl Iterator<Item = &str> {
    line.split(',').map(str::trim)
}

/// Parses whitespace-separated floats, or column `csv_col` of comma-separated
/// rows. A CSV header is skipped when its first cell is not a number.
pub fn parse_data(text: &str, csv_col: Option<usize>) -> Result<Vec<f64>, IngestError> {
    let mut out = Vec::new();
    match csv_col {
        None => {
            for (i, line) in text.lines().enumerate() {
                for (j, tok) in line.split_whitespace().enumerate() {
                    out.push(parse_float(tok, i + 1, j + 1)?);
                }
            }
        }
        Some(col) => {
            for (i, line) in csv_rows(text) {
                let cell = csv_cells(line).nth(col).ok_or(IngestError::MissingColumn { line: i + 1, column: col })?;
                out.push(parse_float(cell, i + 1, col + 1)?);
            }
        }
    }
    if out.is_empty() {
        return Err(IngestError::EmptyInput);
    }
    Ok(out)
}

fn csv_rows(text: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut rows = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()).peekable();
    if let Some((_, first)) = rows.peek() {
        if csv_cells(first).next().is_some_and(|c| c.parse::<f64>().is_err()) {
            rows.next();
        }
    }
    rows
}

/// Two numbers per row, separated by a comma or whitespace; a non-numeric
/// first row is a header.
pub fn parse_pairs(text: &str) -> Result<(Vec<f64>, Vec<f64>), IngestError> {
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut rows = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()).peekable();
    let split = |line: &str| -> Vec<String> {
        line.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).map(String::from).collect()
    };
    if let Some((_, first)) = rows.peek() {
        if split(first).first().is_some_and(|c| c.parse::<f64>().is_err()) {
            rows.next();
        }
    }
    for (i, line) in rows {
        let cells = split(line);
        if cells.len() < 2 {
            return Err(IngestError::MissingColumn { line: i + 1, column: 1 });
        }
        left.push(parse_float(&cells[0], i + 1, 1)?);
        right.push(parse_float(&cells[1], i + 1, 2)?);
    }
    if left.is_empty() {
        return Err(IngestError::EmptyInput);
    }
    Ok((left, right))
}

/// Comma- or whitespace-separated floats given inline on the command line.
pub fn parse_list(text: &str) -> Result<Vec<f64>, IngestError> {
    let mut out = Vec::new();
    for (j, tok) in text.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).enumerate() {
        out.push(parse_float(tok, 1, j + 1)?);
    }
    if out.is_empty() {
        return Err(IngestError::EmptyInput);
    }
    Ok(out)
}

fn read_source(path: &str) -> Result<String, IngestError> {
    let io = |e: std::io::Error| IngestError::Io { path: path.to_string(), reason: e.to_string() };
    if path == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text).map_err(io)?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(io)
    }
}

fn is_csv(path: &str) -> bool {
    Path::new(path).extension().is_some_and(|e| e.eq_ignore_ascii_case("csv"))
}

/// Reads `path` (or standard input for `-`). CSV is used when `csv_col` is
/// given or the file name ends in `.csv`, in which case column 0 is the
/// default.
pub fn ingest_data(path: &str, csv_col: Option<usize>) -> Result<Vec<f64>, IngestError> {
    let col = csv_col.or_else(|| is_csv(path).then_some(0));
    parse_data(&read_source(path)?, col)
}

/// The rendered result of a command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub status: i32,
    pub stdout: String,
    pub stderr: String,
}

impl RunOutput {
    fn error(e: &CliError) -> Self {
        Self { status: EXIT_INPUT, stdout: String::new(), stderr: format!("{}\n", e.to_json()) }
    }
}

/// Runs a command and renders its report. Errors become a JSON object on
/// `stderr` with exit status 1.
pub fn run(config: &CliConfig) -> RunOutput {
    match dispatch(config) {
        Ok(out) => out,
        Err(e) => RunOutput::error(&e),
    }
}

fn dispatch(config: &CliConfig) -> Result<RunOutput, CliError> {
    config.validate()?;
    match config.command {
        Command::Estimate => run_estimate(config),
        Command::Expectation => run_expectation(config),
        Command::Verify => run_verify(config),
        Command::Reproduce => run_reproduce(config),
        Command::ListFamilies => Ok(run_list_families(config)),
    }
}

fn family(config: &CliConfig) -> Result<Family, CliError> {
    let spec = config.family_spec.as_deref().ok_or_else(|| CliError::Usage("--psi is required".into()))?;
    Ok(parse_family(spec)?)
}

fn options(config: &CliConfig) -> Options {
    Options::with_tolerance(config.tolerance)
}

fn sample(config: &CliConfig) -> Result<Sample, CliError> {
    let path = config.data_path.as_deref().ok_or_else(|| CliError::Usage("--data is required".into()))?;
    let points = ingest_data(path, config.csv_col)?;
    let weights = match &config.weights_path {
        Some(w) => ingest_data(w, config.csv_col.filter(|_| is_csv(w)))?,
        None => vec![1.0; points.len()],
    };
    Ok(Sample::new(points, weights)?)
}

fn pair(v: Option<(f64, f64)>) -> Value {
    v.map_or(Value::Null, |(a, b)| json!([a, b]))
}

/// The estimate as a JSON object with keys `kind`, `location`, `bracket`,
/// `plateau`, `closed_form`, `agreement` and `anomaly`. Outcomes without a
/// location or plateau also carry the solver's `detail`.
pub fn estimate_json(result: &Estimate) -> Value {
    let o = &result.outcome;
    let mut obj = Map::new();
    obj.insert("kind".into(), json!(o.kind().to_string()));
    obj.insert("location".into(), json!(o.location()));
    obj.insert("bracket".into(), pair(o.bracket()));
    obj.insert("plateau".into(), pair(o.plateau()));
    obj.insert("closed_form".into(), json!(result.closed_form));
    obj.insert("agreement".into(), json!(result.agreement));
    obj.insert("anomaly".into(), json!(result.anomaly));
    if matches!(o, SignChangeOutcome::NoFlip { .. } | SignChangeOutcome::NotDecreasingType { .. }) {
        obj.insert("detail".into(), serde_json::to_value(o).expect("outcomes serialize"));
    }
    Value::Object(obj)
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

fn fmt_pair(v: Option<(f64, f64)>) -> String {
    v.map_or_else(|| "-".to_string(), |(a, b)| format!("[{a}, {b}]"))
}

/// Left-aligned columns separated by two spaces.
pub fn render_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<String>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.iter().map(|h| h.to_string()).collect());
    for row in rows {
        out += &line(row.clone());
    }
    out
}

fn estimate_table(result: &Estimate) -> String {
    let o = &result.outcome;
    let rows = vec![
        vec!["kind".into(), o.kind().to_string()],
        vec!["location".into(), fmt_opt(o.location())],
        vec!["bracket".into(), fmt_pair(o.bracket())],
        vec!["plateau".into(), fmt_pair(o.plateau())],
        vec!["closed_form".into(), fmt_opt(result.closed_form)],
        vec!["agreement".into(), fmt_opt(result.agreement)],
        vec!["anomaly".into(), result.anomaly.to_string()],
    ];
    render_table(&["field", "value"], &rows)
}

fn render_estimate(config: &CliConfig, result: &Estimate) -> RunOutput {
    let stdout = match config.format {
        OutputFormat::Json => format!("{}\n", estimate_json(result)),
        OutputFormat::Table => estimate_table(result),
    };
    let status = if result.anomaly { EXIT_ANOMALY } else { EXIT_OK };
    RunOutput { status, stdout, stderr: String::new() }
}

fn run_estimate(config: &CliConfig) -> Result<RunOutput, CliError> {
    let family = family(config)?;
    let sample = sample(config)?;
    let result = estimate(&family, &sample, &options(config))?;
    Ok(render_estimate(config, &result))
}

fn distribution(config: &CliConfig) -> Result<DiscreteDistribution<f64>, CliError> {
    let (atoms, probs) = match (&config.atoms, &config.probs, &config.data_path) {
        (Some(a), Some(p), _) => (parse_list(a)?, parse_list(p)?),
        (None, None, Some(path)) => parse_pairs(&read_source(path)?)?,
        (Some(_), None, _) | (None, Some(_), _) => {
            return Err(CliError::Usage("--atoms and --probs must be given together".into()))
        }
        (None, None, None) => {
            return Err(CliError::Usage("expectation needs --atoms and --probs or a two-column --data file".into()))
        }
    };
    Ok(DiscreteDistribution::new(atoms, probs)?)
}

fn run_expectation(config: &CliConfig) -> Result<RunOutput, CliError> {
    let family = family(config)?;
    let dist = distribution(config)?;
    let result = estimate(&family, &dist.as_weighted_sample(), &options(config))?;
    Ok(render_estimate(config, &result))
}

/// Reports for `verify`: the weighted pair-and-beyond property on a seeded
/// random corpus (or on the given sample), and with exactly two data points
/// `x < y` also the strict monotonicity of the ratio function.
pub fn verify_reports(config: &CliConfig) -> Result<Vec<PropertyReport>, CliError> {
    let family = family(config)?;
    let opts = options(config);
    let mut reports = Vec::new();
    match &config.data_path {
        None => {
            let corpus = verify::random_corpus(family.x_domain(), VERIFY_CORPUS, 2..=8, true, config.seed);
            reports.push(verify::check_tn_lambda(&family, &corpus, &opts)?);
        }
        Some(_) => {
            let sample = sample(config)?;
            let points = sample.points().to_vec();
            reports.push(verify::check_tn_lambda(&family, std::slice::from_ref(&sample), &opts)?);
            if points.len() == 2 && points[0] != points[1] && family.has_theta1() {
                let (x, y) = (points[0].min(points[1]), points[0].max(points[1]));
                reports.push(verify::check_ratio_monotone(&family, x, y, config.grid_count, true)?);
            }
        }
    }
    Ok(reports)
}

fn report_row(r: &PropertyReport) -> Vec<String> {
    let verdict = serde_json::to_value(r.verdict).expect("verdicts serialize");
    vec![
        r.property_id.clone(),
        verdict.as_str().unwrap_or_default().to_string(),
        fmt_opt(r.margin),
        r.witnesses.len().to_string(),
        r.grid.resolution.clone(),
    ]
}

fn json_lines<S: serde::Serialize>(items: &[S]) -> String {
    items.iter().map(|i| format!("{}\n", to_canonical_json(i))).collect()
}

fn run_verify(config: &CliConfig) -> Result<RunOutput, CliError> {
    let reports = verify_reports(config)?;
    let stdout = match config.format {
        OutputFormat::Json => json_lines(&reports),
        OutputFormat::Table => render_table(
            &["property", "verdict", "margin", "witnesses", "grid"],
            &reports.iter().map(report_row).collect::<Vec<_>>(),
        ),
    };
    Ok(RunOutput { status: EXIT_OK, stdout, stderr: String::new() })
}

fn run_reproduce(config: &CliConfig) -> Result<RunOutput, CliError> {
    let target = config.target.as_deref().ok_or_else(|| CliError::Usage("reproduce needs an id or `all`".into()))?;
    let results: Vec<Reproduction> = if target == "all" {
        verify::reproduce_all(config.seed)?
    } else {
        vec![verify::reproduce(target, config.seed)?]
    };
    let stdout = match config.format {
        OutputFormat::Json => json_lines(&results),
        OutputFormat::Table => render_table(
            &["id", "expected", "computed", "match"],
            &results
                .iter()
                .map(|r| vec![r.id.clone(), r.expected.clone(), r.computed.clone(), r.matched.to_string()])
                .collect::<Vec<_>>(),
        ),
    };
    let status = if results.iter().all(|r| r.matched) { EXIT_OK } else { EXIT_ANOMALY };
    Ok(RunOutput { status, stdout, stderr: String::new() })
}

fn run_list_families(config: &CliConfig) -> RunOutput {
    let docs = catalog();
    let stdout = match config.format {
        OutputFormat::Json => json_lines(&docs),
        OutputFormat::Table => render_table(
            &["syntax", "psi", "theta", "strict", "closed form", "parameters"],
            &docs
                .iter()
                .map(|d| {
                    vec![
                        d.syntax.to_string(),
                        d.psi.to_string(),
                        d.theta.to_string(),
                        d.strictly_decreasing_in_t.to_string(),
                        d.closed_form.to_string(),
                        d.parameters.to_string(),
                    ]
                })
                .collect::<Vec<_>>(),
        ),
    };
    RunOutput { status: EXIT_OK, stdout, stderr: String::new() }
}

/// Sorted keys and shortest round-trip floats.
pub fn to_canonical_json<S: serde::Serialize>(value: &S) -> String {
    serde_json::to_value(value).expect("reports serialize").to_string()
}

/// Parses `text` and serializes it again with the canonical layout.
pub fn recanonicalize(text: &str) -> serde_json::Result<String> {
    Ok(serde_json::from_str::<Value>(text)?.to_string())
}
