//! Command-line front end: `compute`, `verify` and `mc`.
//!
//! Exit codes: 0 success, 1 identity failure, 2 input/usage error,
//! 3 domain or parameter error (also used for quadrature failures).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::empirical::{EcdfConvention, Sample};
use crate::error::Error;
use crate::identities::{self, Exactness, IdentityReport, Outcome, Source, VerifyConfig};
use crate::measures::{estimate, MeasureParams, MeasureSpec, Phi, Weight, MEASURE_NAMES};
use crate::models::{measure_population, ParametricModel, PopulationRoute, QuadratureConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_DOMAIN: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "gmdent",
    version,
    about = "Gini mean difference and cumulative entropy toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute measures on a data file or a parametric model.
    Compute(ComputeArgs),
    /// Check the identity suite on a data file or a parametric model.
    Verify(VerifyArgs),
    /// Monte Carlo convergence table for estimators on a parametric model.
    Mc(McArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Dist {
    Uniform,
    #[value(alias = "exponential")]
    Exp,
    Weibull,
    Pareto,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Tsv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LevelArg {
    Population,
    Sample,
}

#[derive(Debug, Clone, Args)]
pub struct ModelArgs {
    /// Parametric model.
    #[arg(long, value_enum)]
    pub dist: Option<Dist>,
    /// Uniform lower bound.
    #[arg(long, allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Uniform upper bound.
    #[arg(long, allow_negative_numbers = true)]
    pub b: Option<f64>,
    /// Exponential mean.
    #[arg(long, allow_negative_numbers = true)]
    pub mean: Option<f64>,
    /// Weibull or Pareto shape.
    #[arg(long, allow_negative_numbers = true)]
    pub shape: Option<f64>,
    /// Weibull or Pareto scale.
    #[arg(long, allow_negative_numbers = true)]
    pub scale: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// One-column CSV file (`-` for stdin).
    #[arg(long, conflicts_with = "dist")]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub model: ModelArgs,
}

#[derive(Debug, Clone, Args)]
pub struct MeasureArgs {
    /// Measure name; repeat or separate with commas.
    #[arg(long = "measure", short = 'm', value_delimiter = ',', required = true)]
    pub measures: Vec<String>,
    /// Order for the Tsallis and two-parameter families.
    #[arg(long, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Second order for sr/sp/srw/spw.
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    /// S-Gini order.
    #[arg(long, allow_negative_numbers = true)]
    pub v: Option<f64>,
    /// Premium order.
    #[arg(long)]
    pub k: Option<u32>,
    /// Truncation point.
    #[arg(long, allow_negative_numbers = true)]
    pub t: Option<f64>,
    /// PWM power of the quantile.
    #[arg(long)]
    pub p: Option<u32>,
    /// PWM exponent of u.
    #[arg(long, allow_negative_numbers = true)]
    pub r: Option<f64>,
    /// PWM exponent of 1 - u.
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<f64>,
    /// Weight for ge/gce: `F:j`, `Fbar:j` or `const:c`.
    #[arg(long)]
    pub weight: Option<String>,
    /// Transform for ge/gce: `c*x^v`.
    #[arg(long)]
    pub phi: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[command(flatten)]
    pub measure: MeasureArgs,
    /// ECDF plotting-position convention: hazen, naive or mean-rank.
    #[arg(long, default_value = "hazen")]
    pub conv: String,
    /// Quadrature tolerance (absolute and relative) for model values.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Level to check; defaults to the level of the source.
    #[arg(long, value_enum)]
    pub level: Option<LevelArg>,
    /// Only these identities (e.g. I1,I6).
    #[arg(long = "identity", value_delimiter = ',')]
    pub identities: Vec<String>,
    #[arg(long, default_value = "hazen")]
    pub conv: String,
    /// Population tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct McArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[command(flatten)]
    pub measure: MeasureArgs,
    /// Sample sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    pub sizes: Vec<usize>,
    /// Replications per size.
    #[arg(long, default_value_t = 500)]
    pub reps: usize,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value = "hazen")]
    pub conv: String,
    /// Quadrature tolerance for the population values.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
}

/// A failure carrying its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn domain(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_DOMAIN,
            message: message.into(),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let result = match cli.command {
        Command::Compute(a) => compute(&a, out),
        Command::Verify(a) => verify(&a, out),
        Command::Mc(a) => monte_carlo(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

// ---------------------------------------------------------------------------
// input

/// Reads a one-column CSV: `#` comments, blank lines, an optional header line
/// and CRLF endings are accepted. Values are returned with their line numbers.
pub fn parse_csv(text: &str) -> CliResult<Vec<(usize, f64)>> {
    let mut values = Vec::new();
    let mut seen_content = false;
    for (idx, raw) in text.split('\n').enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let col = line.len() - line.trim_start().len() + 1;
        let first = !seen_content;
        seen_content = true;
        if let Some(pos) = trimmed.find(',') {
            return Err(Failure::input(format!(
                "line {line_no}, column {}: expected a single column",
                col + pos
            )));
        }
        match trimmed.parse::<f64>() {
            Ok(v) => values.push((line_no, v)),
            // a non-numeric first line is a header
            Err(_) if first => {}
            Err(_) => {
                return Err(Failure::input(format!(
                    "line {line_no}, column {col}: cannot parse '{trimmed}' as a number"
                )))
            }
        }
    }
    Ok(values)
}

fn read_input(path: &PathBuf) -> CliResult<(Sample, String)> {
    let bytes = if path.as_os_str() == "-" {
        let mut buf = Vec::new();
        io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| Failure::input(format!("stdin: {e}")))?;
        buf
    } else {
        std::fs::read(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?
    };
    let text = String::from_utf8(bytes)
        .map_err(|e| Failure::input(format!("{}: not valid UTF-8 ({e})", path.display())))?;
    let rows = parse_csv(&text)
        .map_err(|f| Failure::input(format!("{}: {}", path.display(), f.message)))?;
    let raw: Vec<f64> = rows.iter().map(|&(_, v)| v).collect();
    let sample = Sample::new(&raw).map_err(|e| {
        let msg = match e {
            Error::NegativeValue { index, .. } | Error::NonFinite { index } => {
                format!("{}: line {}: {e}", path.display(), rows[index].0)
            }
            _ => format!("{}: {e}", path.display()),
        };
        Failure::domain(msg)
    })?;
    Ok((sample, path.display().to_string()))
}

fn build_model(m: &ModelArgs) -> CliResult<Option<ParametricModel>> {
    let Some(dist) = m.dist else {
        return Ok(None);
    };
    let need = |v: Option<f64>, what: &str, flag: &str| {
        v.ok_or_else(|| Failure::input(format!("{what} needs --{flag}")))
    };
    let model = match dist {
        Dist::Uniform => ParametricModel::uniform(m.a.unwrap_or(0.0), m.b.unwrap_or(1.0)),
        Dist::Exp => ParametricModel::exponential(m.mean.unwrap_or(1.0)),
        Dist::Weibull => {
            ParametricModel::weibull(need(m.shape, "weibull", "shape")?, m.scale.unwrap_or(1.0))
        }
        Dist::Pareto => {
            ParametricModel::pareto(need(m.shape, "pareto", "shape")?, m.scale.unwrap_or(1.0))
        }
    };
    model.map(Some).map_err(|e| Failure::domain(e.to_string()))
}

enum Input {
    Data(Sample),
    Model(ParametricModel),
}

fn resolve_source(s: &SourceArgs) -> CliResult<Input> {
    match (&s.input, build_model(&s.model)?) {
        (Some(path), None) => Ok(Input::Data(read_input(path)?.0)),
        (None, Some(model)) => Ok(Input::Model(model)),
        (None, None) => Err(Failure::input("give either --input or --dist")),
        (Some(_), Some(_)) => Err(Failure::input("give only one of --input and --dist")),
    }
}

fn parse_conv(s: &str) -> CliResult<EcdfConvention> {
    s.parse().map_err(|e: Error| Failure::input(e.to_string()))
}

fn quadrature(tol: Option<f64>) -> CliResult<QuadratureConfig> {
    let cfg = match tol {
        Some(t) => QuadratureConfig::default().with_tol(t),
        None => QuadratureConfig::default(),
    };
    cfg.validate().map_err(|e| Failure::domain(e.to_string()))?;
    Ok(cfg)
}

fn measure_specs(m: &MeasureArgs) -> CliResult<Vec<MeasureSpec>> {
    let weight = m
        .weight
        .as_deref()
        .map(str::parse::<Weight>)
        .transpose()
        .map_err(|e| Failure::domain(format!("--weight: {e}")))?;
    let phi = m
        .phi
        .as_deref()
        .map(str::parse::<Phi>)
        .transpose()
        .map_err(|e| Failure::domain(format!("--phi: {e}")))?;
    let params = MeasureParams {
        alpha: m.alpha,
        beta: m.beta,
        v: m.v,
        k: m.k,
        t: m.t,
        p: m.p,
        r: m.r,
        s: m.s,
        weight,
        phi,
    };
    m.measures
        .iter()
        .map(|name| {
            let name = name.trim();
            if !MEASURE_NAMES.contains(&name) {
                return Err(Failure::input(format!(
                    "unknown measure '{name}' (known: {})",
                    MEASURE_NAMES.join(", ")
                )));
            }
            MeasureSpec::from_name(name, &params)
                .map_err(|e| Failure::domain(format!("{name}: {e}")))
        })
        .collect()
}

// ---------------------------------------------------------------------------
// output

/// Rounds to 12 digits after the leading significant one, so `4/3` prints as
/// `1.333333333333`.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.12e}").parse().unwrap_or(x)
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(round_sig(x)).map_or(Value::Null, Value::Number)
}

/// Applies [`round_sig`] to every float inside `v`.
fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if !n.is_i64() && !n.is_u64() => n.as_f64().map_or(Value::Number(n), num),
        Value::Array(xs) => Value::Array(xs.into_iter().map(round_value).collect()),
        Value::Object(m) => {
            Value::Object(m.into_iter().map(|(k, v)| (k, round_value(v))).collect())
        }
        other => other,
    }
}

fn tsv_cell(v: &Value) -> String {
    match v {
        Value::Null => "NA".to_string(),
        Value::String(s) => s.clone(),
        Value::Object(m) => m
            .iter()
            .map(|(k, v)| format!("{k}={}", tsv_cell(v)))
            .collect::<Vec<_>>()
            .join(","),
        other => other.to_string(),
    }
}

/// Writes records as JSON lines or as TSV with a header row.
struct Emitter<'a> {
    out: &'a mut dyn Write,
    format: Format,
    columns: &'static [&'static str],
    header_done: bool,
}

impl<'a> Emitter<'a> {
    fn new(out: &'a mut dyn Write, format: Format, columns: &'static [&'static str]) -> Self {
        Emitter {
            out,
            format,
            columns,
            header_done: false,
        }
    }

    fn emit(&mut self, record: Value) -> CliResult<()> {
        let record = round_value(record);
        let mut line = String::new();
        match self.format {
            Format::Json => line = record.to_string(),
            Format::Tsv => {
                if !self.header_done {
                    self.header_done = true;
                    let _ = writeln!(line, "{}", self.columns.join("\t"));
                }
                let cells: Vec<String> = self
                    .columns
                    .iter()
                    .map(|c| record.get(*c).map_or_else(|| "NA".to_string(), tsv_cell))
                    .collect();
                line.push_str(&cells.join("\t"));
            }
        }
        writeln!(self.out, "{line}").map_err(|e| Failure::input(format!("write failed: {e}")))
    }
}

/// One identity report as a JSON line (without the newline), numbers rounded
/// as in the CLI output.
pub fn report_json(r: &IdentityReport) -> String {
    serde_json::to_value(r)
        .map(round_value)
        .unwrap_or(Value::Null)
        .to_string()
}

fn params_object(spec: &MeasureSpec) -> Value {
    let mut m = Map::new();
    for (k, v) in spec.params() {
        let val = match v.parse::<f64>() {
            Ok(x) if x.is_finite() => num(x),
            _ => Value::String(v),
        };
        m.insert(k.to_string(), val);
    }
    Value::Object(m)
}

// ---------------------------------------------------------------------------
// compute

const COMPUTE_COLUMNS: &[&str] = &[
    "measure",
    "parameters",
    "value",
    "estimator_route",
    "n",
    "source",
];

fn compute(a: &ComputeArgs, out: &mut dyn Write) -> CliResult<u8> {
    let conv = parse_conv(&a.conv)?;
    let specs = measure_specs(&a.measure)?;
    let source = resolve_source(&a.source)?;
    let quad = quadrature(a.tol)?;
    let mut em = Emitter::new(out, a.format, COMPUTE_COLUMNS);
    for spec in &specs {
        let record = match &source {
            Input::Data(sample) => {
                let est = estimate(sample, spec, conv)
                    .map_err(|e| Failure::domain(format!("{}: {e}", spec.name())))?;
                json!({
                    "measure": spec.name(),
                    "parameters": params_object(spec),
                    "value": est.value,
                    "estimator_route": est.route.as_str(),
                    "n": sample.len(),
                    "source": Source::Sample(sample).describe(),
                })
            }
            Input::Model(model) => {
                let value = measure_population(model, spec, &quad)
                    .map_err(|e| Failure::domain(format!("{}: {e}", spec.name())))?;
                json!({
                    "measure": spec.name(),
                    "parameters": params_object(spec),
                    "value": value,
                    "estimator_route": PopulationRoute::of(spec).as_str(),
                    "n": Value::Null,
                    "source": model.to_string(),
                })
            }
        };
        em.emit(record)?;
    }
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------------------
// verify

const VERIFY_COLUMNS: &[&str] = &[
    "id",
    "level",
    "outcome",
    "lhs",
    "rhs",
    "abs_residual",
    "rel_residual",
    "tolerance",
    "lhs_route",
    "rhs_route",
    "source",
    "note",
];

fn verify(a: &VerifyArgs, out: &mut dyn Write) -> CliResult<u8> {
    let conv = parse_conv(&a.conv)?;
    let wanted: Vec<&'static str> = a
        .identities
        .iter()
        .map(|id| {
            identities::find(id.trim())
                .map(|i| i.id)
                .ok_or_else(|| Failure::input(format!("unknown identity '{id}'")))
        })
        .collect::<CliResult<_>>()?;
    let input = resolve_source(&a.source)?;
    let level = match (&input, a.level) {
        (Input::Model(_), None | Some(LevelArg::Population)) => LevelArg::Population,
        (Input::Data(_), None | Some(LevelArg::Sample)) => LevelArg::Sample,
        (Input::Model(_), Some(LevelArg::Sample)) => {
            return Err(Failure::input("sample level needs --input"));
        }
        (Input::Data(_), Some(LevelArg::Population)) => {
            return Err(Failure::input("population level needs --dist"));
        }
    };
    let mut cfg = VerifyConfig {
        conv,
        ..VerifyConfig::default()
    };
    if let Some(t) = a.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Failure::domain(format!(
                "tolerance must be positive, got {t}"
            )));
        }
        cfg.population_tol = t;
    }
    let source = match &input {
        Input::Model(m) => Source::Model(m),
        Input::Data(s) => Source::Sample(s),
    };
    let reports: Vec<IdentityReport> = identities::verify_all(source, &cfg)
        .into_iter()
        .filter(|r| wanted.is_empty() || wanted.contains(&r.id))
        .filter(|r| {
            level == LevelArg::Population
                || identities::find(r.id).is_some_and(|i| i.exactness != Exactness::PopulationOnly)
        })
        .collect();
    let mut em = Emitter::new(out, a.format, VERIFY_COLUMNS);
    for r in &reports {
        let v = serde_json::to_value(r).map_err(|e| Failure::input(e.to_string()))?;
        em.emit(v)?;
    }
    let ran = reports
        .iter()
        .filter(|r| r.outcome != Outcome::Skipped)
        .count();
    let passed = reports.iter().filter(|r| r.passed()).count();
    let skipped = reports.len() - ran;
    let summary = format!("passed {passed}/{ran}");
    match a.format {
        Format::Json => {
            let line =
                json!({"summary": summary, "passed": passed, "total": ran, "skipped": skipped});
            writeln!(em.out, "{line}")
        }
        Format::Tsv => writeln!(em.out, "# {summary} (skipped {skipped})"),
    }
    .map_err(|e| Failure::input(format!("write failed: {e}")))?;
    Ok(if passed == ran { EXIT_OK } else { EXIT_FAIL })
}

// ---------------------------------------------------------------------------
// Monte Carlo

/// Generator for replicate `rep` at size `n`: ChaCha8 keyed by `seed`, with
/// the stream id `n << 32 | rep`.
pub fn replicate_rng(seed: u64, n: usize, rep: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((n as u64) << 32) | (rep as u64 & 0xffff_ffff));
    rng
}

/// Draws `n` observations from `model` by inversion.
pub fn draw(model: &ParametricModel, n: usize, rng: &mut impl Rng) -> Vec<f64> {
    (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            model.quantile_pair(u, 1.0 - u)
        })
        .collect()
}

/// Summary of one (measure, n) cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McRow {
    pub n: usize,
    pub mean: f64,
    pub population: f64,
    pub bias: f64,
    pub sd: f64,
    pub rmse: f64,
}

/// Replicates the estimator of `spec` `reps` times at each size. Replicates
/// run in parallel; the reduction is sequential in replicate order.
pub fn monte_carlo_table(
    model: &ParametricModel,
    spec: &MeasureSpec,
    sizes: &[usize],
    reps: usize,
    seed: u64,
    conv: EcdfConvention,
    quad: &QuadratureConfig,
) -> crate::Result<Vec<McRow>> {
    if reps < 2 {
        return Err(Error::bad(format!(
            "need at least 2 replications, got {reps}"
        )));
    }
    if let Some(&n) = sizes.iter().find(|&&n| n < 2) {
        return Err(Error::TooFew { needed: 2, got: n });
    }
    let population = measure_population(model, spec, quad)?;
    sizes
        .iter()
        .map(|&n| {
            let values: Vec<f64> = (0..reps)
                .into_par_iter()
                .map(|rep| {
                    let mut rng = replicate_rng(seed, n, rep);
                    let sample = Sample::new(&draw(model, n, &mut rng))?;
                    estimate(&sample, spec, conv).map(|e| e.value)
                })
                .collect::<crate::Result<_>>()?;
            let k = reps as f64;
            let mean = values.iter().sum::<f64>() / k;
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (k - 1.0);
            let mse = values.iter().map(|v| (v - population).powi(2)).sum::<f64>() / k;
            Ok(McRow {
                n,
                mean,
                population,
                bias: mean - population,
                sd: var.sqrt(),
                rmse: mse.sqrt(),
            })
        })
        .collect()
}

const MC_COLUMNS: &[&str] = &[
    "measure",
    "parameters",
    "n",
    "reps",
    "mean",
    "population",
    "bias",
    "sd",
    "rmse",
];

fn monte_carlo(a: &McArgs, out: &mut dyn Write) -> CliResult<u8> {
    let conv = parse_conv(&a.conv)?;
    let specs = measure_specs(&a.measure)?;
    let model = build_model(&a.model)?.ok_or_else(|| Failure::input("mc needs --dist"))?;
    let quad = quadrature(a.tol)?;
    let mut em = Emitter::new(out, a.format, MC_COLUMNS);
    for spec in &specs {
        let rows = monte_carlo_table(&model, spec, &a.sizes, a.reps, a.seed, conv, &quad)
            .map_err(|e| Failure::domain(format!("{}: {e}", spec.name())))?;
        for row in rows {
            em.emit(json!({
                "measure": spec.name(),
                "parameters": params_object(spec),
                "n": row.n,
                "reps": a.reps,
                "mean": row.mean,
                "population": row.population,
                "bias": row.bias,
                "sd": row.sd,
                "rmse": row.rmse,
            }))?;
        }
    }
    Ok(EXIT_OK)
}
