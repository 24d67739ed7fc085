//! Command-line front end. Every subcommand prints (or writes) one JSON
//! document carrying its result and a provenance block; CSV and text outputs
//! get the provenance block on stderr or in a `.provenance.json` sidecar.
//!
//! Flags can also come from a TOML file (`--config`): each key is a flag name
//! (`window_k` or `window-k`), `command` names the subcommand, and flags given
//! on the command line win.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::enumerate::{dp_distribution, exhaustive_distribution, DistTable};
use crate::error::{Error, ErrorKind, Result};
use crate::experiments::{
    compare, emit_figure, exact_distribution, sample_paths, windowed_distribution, EmpiricalDist,
    DEFAULT_WINDOW_K,
};
use crate::kernel_numeric::{kernel_roots, solve_bilateral_system, validate_puiseux};
use crate::kernel_series::{distribution_from_series, series_for, type_coefficient, FunctionalEquation, MarkerConfig};
use crate::limitlaw::{classify, fit_discrete_params, law_eval, LawSpec};
use crate::stepset::{parse_stepset, StepSet};
use crate::walk::{Statistic, WalkType};

/// Environment variable naming the default directory for relative output paths.
pub const OUT_DIR_ENV: &str = "LOCALTIME_OUT_DIR";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_COMPUTATION: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "localtime",
    version,
    about = "Local time at zero of directed lattice paths"
)]
pub struct Cli {
    /// TOML file with default values for any flag.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory for relative output paths (default: $LOCALTIME_OUT_DIR, else the working directory).
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// Omit timestamps and timings so identical runs give identical bytes.
    #[arg(long, global = true)]
    pub deterministic: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Structural constants of a step set.
    Analyze(AnalyzeArgs),
    /// q-marked generating function, truncated at z^n.
    Series(SeriesArgs),
    /// Exact distribution of a statistic at one length.
    Enumerate(EnumerateArgs),
    /// Roots of the kernel at z, and/or the square-root expansion check near rho.
    Roots(RootsArgs),
    /// Boundary unknowns and W at numeric (z, q) with q marking crossings.
    Evaluate(EvaluateArgs),
    /// Predicted limit law, optionally fitted and evaluated.
    Limits(LimitsArgs),
    /// Large-n distribution by sampling or windowed DP.
    Simulate(SimulateArgs),
    /// Histogram vs limit law as CSV + SVG.
    Figure(FigureArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Analyze(_) => "analyze",
            Command::Series(_) => "series",
            Command::Enumerate(_) => "enumerate",
            Command::Roots(_) => "roots",
            Command::Evaluate(_) => "evaluate",
            Command::Limits(_) => "limits",
            Command::Simulate(_) => "simulate",
            Command::Figure(_) => "figure",
        }
    }
}

const SUBCOMMANDS: [&str; 8] = [
    "analyze", "series", "enumerate", "roots", "evaluate", "limits", "simulate", "figure",
];

#[derive(Debug, Args, Serialize)]
pub struct StepsArg {
    /// Step set as "offset:weight,...", e.g. "-2:1,-1:1,0:1,1:1,2:1" (weights may be fractions).
    #[arg(long, allow_hyphen_values = true)]
    pub steps: String,
}

impl StepsArg {
    fn parse(&self) -> Result<StepSet> {
        parse_stepset(&self.steps)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mark {
    Crossings,
    Touches,
    Returns,
    LocalTime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dp,
    Exhaustive,
    Series,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceKind {
    Sampler,
    Windowed,
    Exact,
}

#[derive(Debug, Args, Serialize)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub steps: StepsArg,
}

#[derive(Debug, Args, Serialize)]
pub struct SeriesArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub steps: StepsArg,
    /// Truncation order.
    #[arg(long)]
    pub n: usize,
    #[arg(long = "type", default_value = "walk")]
    pub walk_type: WalkType,
    /// Events marked by q (repeatable or comma-separated).
    #[arg(long = "mark", value_enum, value_delimiter = ',')]
    pub marks: Vec<Mark>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Include the full u-resolved series in JSON output.
    #[arg(long)]
    pub full: bool,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct EnumerateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub steps: StepsArg,
    #[arg(long)]
    pub n: usize,
    #[arg(long = "type", default_value = "walk")]
    pub walk_type: WalkType,
    #[arg(long, default_value = "local_time")]
    pub statistic: Statistic,
    #[arg(long, value_enum, default_value = "dp")]
    pub method: Method,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct RootsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub steps: StepsArg,
    /// Real part of z.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<f64>,
    /// Imaginary part of z.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub z_im: f64,
    /// Distances eps for the check at z = rho (1 - eps).
    #[arg(long, value_delimiter = ',')]
    pub puiseux: Vec<f64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct EvaluateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub steps: StepsArg,
    #[arg(long, value_delimiter = ',', required = true)]
    pub z: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub q: Vec<f64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct LimitsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub steps: StepsArg,
    #[arg(long = "type", default_value = "walk")]
    pub walk_type: WalkType,
    /// Statistic used for fitting (default: returns on nonnegative paths, local time otherwise).
    #[arg(long)]
    pub statistic: Option<Statistic>,
    /// Lengths of the exact tables used to fit discrete parameters.
    #[arg(long, value_delimiter = ',')]
    pub fit: Vec<usize>,
    /// Points at which to evaluate the law.
    #[arg(long, value_delimiter = ',')]
    pub eval: Vec<f64>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub steps: StepsArg,
    #[arg(long = "type", default_value = "walk")]
    pub walk_type: WalkType,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "local_time")]
    pub statistic: Statistic,
    #[arg(long, value_enum, default_value = "sampler")]
    pub source: SourceKind,
    #[arg(long, default_value_t = 100_000)]
    pub count: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_WINDOW_K)]
    pub window_k: f64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct FigureArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub steps: StepsArg,
    #[arg(long = "type", default_value = "bridge")]
    pub walk_type: WalkType,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value = "local_time")]
    pub statistic: Statistic,
    #[arg(long, value_enum, default_value = "windowed")]
    pub source: SourceKind,
    #[arg(long, default_value_t = 100_000)]
    pub count: u64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_WINDOW_K)]
    pub window_k: f64,
    /// Output prefix; `.csv` and `.svg` are appended.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Exit code for an error.
pub fn exit_code(err: &Error) -> i32 {
    match err.kind() {
        ErrorKind::Validation => EXIT_VALIDATION,
        ErrorKind::Computation => EXIT_COMPUTATION,
        ErrorKind::Io => EXIT_IO,
    }
}

/// Runs the CLI on `args` (program name first), writing to the process streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<String> = args
        .into_iter()
        .map(|a| a.into().to_string_lossy().into_owned())
        .collect();
    let args = match merge_config(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
        }
    };
    match dispatch(&cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn config_path(args: &[String]) -> Option<String> {
    let mut it = args.iter();
    while let Some(a) = it.next() {
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(p) = a.strip_prefix("--config=") {
            return Some(p.to_string());
        }
    }
    None
}

fn toml_scalar(v: &toml::Value) -> Result<String> {
    match v {
        toml::Value::String(s) => Ok(s.clone()),
        toml::Value::Integer(i) => Ok(i.to_string()),
        toml::Value::Float(f) => Ok(f.to_string()),
        toml::Value::Boolean(b) => Ok(b.to_string()),
        toml::Value::Array(items) => Ok(items
            .iter()
            .map(toml_scalar)
            .collect::<Result<Vec<_>>>()?
            .join(",")),
        other => Err(Error::InvalidArgument(format!("unsupported config value {other}"))),
    }
}

/// Splices the `--config` file into the argument list. Keys already given as
/// flags are skipped; `command` supplies the subcommand when none is given.
fn merge_config(mut args: Vec<String>) -> Result<Vec<String>> {
    let Some(path) = config_path(&args) else {
        return Ok(args);
    };
    let text = std::fs::read_to_string(&path)?;
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::InvalidArgument(format!("config {path}: {e}")))?;
    let has_subcommand = args.iter().skip(1).any(|a| SUBCOMMANDS.contains(&a.as_str()));
    if !has_subcommand {
        match table.get("command") {
            Some(toml::Value::String(c)) => args.push(c.clone()),
            _ => {
                return Err(Error::InvalidArgument(
                    "no subcommand given on the command line or as `command` in the config".into(),
                ))
            }
        }
    }
    for (key, value) in &table {
        if key == "command" || key == "config" {
            continue;
        }
        let flag = format!("--{}", key.replace('_', "-"));
        let given = args
            .iter()
            .any(|a| *a == flag || a.starts_with(&format!("{flag}=")));
        if given {
            continue;
        }
        match value {
            toml::Value::Boolean(true) => args.push(flag),
            toml::Value::Boolean(false) => {}
            v => args.push(format!("{flag}={}", toml_scalar(v)?)),
        }
    }
    Ok(args)
}

struct Context<'a> {
    cli: &'a Cli,
    started: Instant,
    started_unix: u64,
}

impl Context<'_> {
    fn out_dir(&self) -> Option<PathBuf> {
        self.cli
            .out_dir
            .clone()
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
    }

    fn resolve(&self, path: &Path) -> PathBuf {
        match self.out_dir() {
            Some(dir) if path.is_relative() => dir.join(path),
            _ => path.to_path_buf(),
        }
    }

    fn provenance(&self) -> Value {
        let mut p = json!({
            "tool": "localtime",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.cli.command.name(),
            "config": serde_json::to_value(&self.cli.command).unwrap_or(Value::Null),
            "deterministic": self.cli.deterministic,
        });
        if !self.cli.deterministic {
            p["started_unix"] = json!(self.started_unix);
            p["timings_ms"] = json!({ "total": self.started.elapsed().as_secs_f64() * 1e3 });
        }
        p
    }

    /// Writes a JSON document with the provenance block attached.
    fn emit_json(&self, result: Value, output: Option<&Path>, out: &mut dyn Write) -> Result<()> {
        let doc = json!({
            "command": self.cli.command.name(),
            "result": result,
            "provenance": self.provenance(),
        });
        let mut text = serde_json::to_string_pretty(&doc)?;
        text.push('\n');
        self.write_artifact(text.as_bytes(), output, out)
    }

    /// Writes CSV or text; provenance goes to a sidecar file or stderr.
    fn emit_plain(
        &self,
        body: &[u8],
        output: Option<&Path>,
        out: &mut dyn Write,
        err: &mut dyn Write,
    ) -> Result<()> {
        let prov = serde_json::to_string(&self.provenance())?;
        self.write_artifact(body, output, out)?;
        match output {
            Some(path) => {
                let mut side = self.resolve(path).into_os_string();
                side.push(".provenance.json");
                std::fs::write(side, prov + "\n")?;
            }
            None => writeln!(err, "{prov}")?,
        }
        Ok(())
    }

    fn write_artifact(&self, bytes: &[u8], output: Option<&Path>, out: &mut dyn Write) -> Result<()> {
        match output {
            Some(path) => {
                let path = self.resolve(path);
                if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
                    std::fs::create_dir_all(dir)?;
                }
                std::fs::write(path, bytes)?;
            }
            None => out.write_all(bytes)?,
        }
        Ok(())
    }
}

/// Executes a parsed command.
pub fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let ctx = Context {
        cli,
        started: Instant::now(),
        started_unix: SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0),
    };
    match &cli.command {
        Command::Analyze(a) => analyze(&ctx, a, out),
        Command::Series(a) => series(&ctx, a, out, err),
        Command::Enumerate(a) => enumerate(&ctx, a, out, err),
        Command::Roots(a) => roots(&ctx, a, out),
        Command::Evaluate(a) => evaluate(&ctx, a, out),
        Command::Limits(a) => limits(&ctx, a, out),
        Command::Simulate(a) => simulate(&ctx, a, out, err),
        Command::Figure(a) => figure(&ctx, a, out),
    }
}

fn analyze(ctx: &Context, a: &AnalyzeArgs, out: &mut dyn Write) -> Result<()> {
    let steps = a.steps.parse()?;
    let cleared = steps.cleared();
    let families: serde_json::Map<String, Value> = WalkType::ALL
        .iter()
        .map(|wt| (wt.to_string(), serde_json::to_value(classify(&steps, *wt).family).unwrap_or(Value::Null)))
        .collect();
    let result = json!({
        "steps": steps.to_string(),
        "c": steps.c(),
        "d": steps.d(),
        "support": steps.support(),
        "integer_weights": cleared.weights.iter().map(|(j, w)| json!([j, w.to_string()])).collect::<Vec<_>>(),
        "weight_denominator": cleared.denominator.to_string(),
        "drift_exact": steps.drift().to_string(),
        "constants": steps.structural_constants(),
        "limit_families": families,
    });
    ctx.emit_json(result, None, out)
}

fn markers_for(marks: &[Mark], walk_type: WalkType) -> Result<MarkerConfig> {
    let mut m = MarkerConfig::NONE;
    for mark in marks {
        match mark {
            Mark::Crossings if walk_type.is_nonnegative() => {
                return Err(Error::InvalidArgument(format!(
                    "{walk_type}s stay nonnegative and cannot cross zero; mark returns instead"
                )));
            }
            Mark::Crossings => m.mark_crossings = true,
            Mark::Touches => m.mark_touches = true,
            Mark::Returns => m.mark_returns = true,
            Mark::LocalTime => {
                // crossings are impossible on nonnegative paths
                m.mark_crossings |= !walk_type.is_nonnegative();
                m.mark_touches = true;
            }
        }
    }
    m.validate()
}

fn series(ctx: &Context, a: &SeriesArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let steps = a.steps.parse()?;
    let markers = markers_for(&a.marks, a.walk_type)?;
    let eq = if a.walk_type.is_nonnegative() {
        FunctionalEquation::nonnegative(&steps, markers)?
    } else {
        FunctionalEquation::walks(&steps, markers)?
    };
    let s = eq.solve(a.n);
    let coeffs = (0..=a.n)
        .map(|n| type_coefficient(&s, a.walk_type, n, markers.mark_touches))
        .collect::<Result<Vec<_>>>()?;
    match a.format {
        Format::Json => {
            let mut result = json!({
                "order": a.n,
                "walk_type": a.walk_type,
                "markers": {
                    "crossings": markers.mark_crossings,
                    "touches": markers.mark_touches,
                    "returns": markers.mark_returns,
                },
                "weight_denominator": s.weight_denominator().to_string(),
                "coefficients": coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            });
            if a.full {
                result["series"] = serde_json::to_value(&s)?;
            }
            ctx.emit_json(result, a.output.as_deref(), out)
        }
        Format::Text => {
            let mut text = String::new();
            if !num_traits::One::is_one(s.weight_denominator()) {
                text.push_str(&format!(
                    "# coefficients of z^n are weighted counts times {}^n\n",
                    s.weight_denominator()
                ));
            }
            for (n, c) in coeffs.iter().enumerate() {
                text.push_str(&format!("z^{n}: {c}\n"));
            }
            ctx.emit_plain(text.as_bytes(), a.output.as_deref(), out, err)
        }
        Format::Csv => Err(Error::InvalidArgument("series supports --format json or text".into())),
    }
}

fn enumerate(ctx: &Context, a: &EnumerateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let steps = a.steps.parse()?;
    let table: DistTable = match a.method {
        Method::Dp => dp_distribution(&steps, a.walk_type, a.n, a.statistic),
        Method::Exhaustive => exhaustive_distribution(&steps, a.walk_type, a.n, a.statistic)?,
        Method::Series => {
            let s = series_for(&steps, a.walk_type, a.statistic, a.n)?;
            distribution_from_series(&s, a.walk_type, a.statistic, a.n)?
        }
    };
    match a.format {
        Format::Csv => {
            let mut buf = Vec::new();
            table.write_csv(&mut buf)?;
            ctx.emit_plain(&buf, a.output.as_deref(), out, err)
        }
        Format::Json => ctx.emit_json(table.to_json(), a.output.as_deref(), out),
        Format::Text => Err(Error::InvalidArgument("enumerate supports --format csv or json".into())),
    }
}

fn roots(ctx: &Context, a: &RootsArgs, out: &mut dyn Write) -> Result<()> {
    let steps = a.steps.parse()?;
    if a.z.is_none() && a.puiseux.is_empty() {
        return Err(Error::InvalidArgument("give --z and/or --puiseux".into()));
    }
    let mut result = json!({});
    if let Some(z) = a.z {
        let r = kernel_roots(&steps, num_complex::Complex64::new(z, a.z_im))?;
        result["roots"] = serde_json::to_value(r)?;
    }
    if !a.puiseux.is_empty() {
        let rows = validate_puiseux(&steps, &a.puiseux)?;
        result["puiseux"] = serde_json::to_value(rows)?;
    }
    ctx.emit_json(result, a.output.as_deref(), out)
}

fn evaluate(ctx: &Context, a: &EvaluateArgs, out: &mut dyn Write) -> Result<()> {
    let steps = a.steps.parse()?;
    let mut points = Vec::new();
    for &z in &a.z {
        for &q in &a.q {
            points.push(serde_json::to_value(solve_bilateral_system(&steps, z, q)?)?);
        }
    }
    ctx.emit_json(json!({ "q_marks": "crossings", "points": points }), a.output.as_deref(), out)
}

fn limits(ctx: &Context, a: &LimitsArgs, out: &mut dyn Write) -> Result<()> {
    let steps = a.steps.parse()?;
    let mut spec: LawSpec = classify(&steps, a.walk_type);
    let mut result = json!({});
    if !a.fit.is_empty() {
        let statistic = a.statistic.unwrap_or(if a.walk_type.is_nonnegative() {
            Statistic::Returns
        } else {
            Statistic::LocalTime
        });
        if spec.family.is_continuous() {
            return Err(Error::InvalidArgument(format!(
                "{:?} parameters come from a formula; --fit applies to discrete laws",
                spec.family
            )));
        }
        let tables: Vec<DistTable> = a
            .fit
            .iter()
            .map(|&n| dp_distribution(&steps, a.walk_type, n, statistic))
            .collect();
        let fit = fit_discrete_params(&tables, spec.family)?;
        result["fit"] = serde_json::to_value(&fit)?;
        let warnings = spec.warnings.clone();
        spec = fit.spec;
        spec.warnings.extend(warnings);
    }
    if !a.eval.is_empty() {
        let law = spec.law()?;
        let rows = a
            .eval
            .iter()
            .map(|&x| Ok(json!({ "x": x, "eval": law_eval(&law, x)? })))
            .collect::<Result<Vec<_>>>()?;
        result["evaluations"] = Value::Array(rows);
    }
    result["law"] = serde_json::to_value(&spec)?;
    ctx.emit_json(result, a.output.as_deref(), out)
}

#[allow(clippy::too_many_arguments)]
fn distribution(
    steps: &StepSet,
    walk_type: WalkType,
    n: usize,
    statistic: Statistic,
    source: SourceKind,
    count: u64,
    seed: u64,
    window_k: f64,
) -> Result<EmpiricalDist> {
    match source {
        SourceKind::Sampler => sample_paths(steps, walk_type, n, statistic, count, seed),
        SourceKind::Windowed => windowed_distribution(steps, walk_type, n, statistic, window_k),
        SourceKind::Exact => Ok(exact_distribution(steps, walk_type, n, statistic)),
    }
}

fn simulate(ctx: &Context, a: &SimulateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let steps = a.steps.parse()?;
    let dist = distribution(&steps, a.walk_type, a.n, a.statistic, a.source, a.count, a.seed, a.window_k)?;
    match a.format {
        Format::Json => ctx.emit_json(serde_json::to_value(&dist)?, a.output.as_deref(), out),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["value", "probability"])?;
            for (v, p) in &dist.probabilities {
                w.write_record([v.to_string(), format!("{p:.16e}")])?;
            }
            let buf = w.into_inner().map_err(|e| Error::Serialization(e.to_string()))?;
            ctx.emit_plain(&buf, a.output.as_deref(), out, err)
        }
        Format::Text => Err(Error::InvalidArgument("simulate supports --format json or csv".into())),
    }
}

fn figure(ctx: &Context, a: &FigureArgs, out: &mut dyn Write) -> Result<()> {
    let steps = a.steps.parse()?;
    let dist = distribution(&steps, a.walk_type, a.n, a.statistic, a.source, a.count, a.seed, a.window_k)?;
    let mut spec = classify(&steps, a.walk_type);
    if spec.params.is_none() {
        if a.n < 4 {
            return Err(Error::InvalidArgument("fitting a discrete law needs n >= 4".into()));
        }
        let tables: Vec<DistTable> = [a.n / 4, a.n / 2, a.n]
            .iter()
            .map(|&n| dp_distribution(&steps, a.walk_type, n, a.statistic))
            .collect();
        let warnings = spec.warnings.clone();
        spec = fit_discrete_params(&tables, spec.family)?.spec;
        spec.warnings.extend(warnings);
    }
    let report = compare(&dist, &spec)?;
    let default_name = format!("figure-{}-{}-n{}", a.walk_type, a.statistic, a.n);
    let prefix = ctx.resolve(a.output.as_deref().unwrap_or(Path::new(&default_name)));
    let files = emit_figure(&report, &dist, &prefix)?;
    ctx.emit_json(
        json!({ "report": report, "files": files, "source": dist.source }),
        None,
        out,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(
            std::iter::once("localtime").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn analyze_reports_constants() {
        let (code, out, _) = run_capture(&["analyze", "--steps", "-1:2,1:1", "--deterministic"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        let k = &v["result"]["constants"];
        assert_eq!(k["drift"].as_f64().unwrap(), -1.0);
        assert!((k["tau"].as_f64().unwrap() - 2f64.sqrt()).abs() < 1e-14);
        assert_eq!(v["result"]["drift_exact"], "-1");
        assert!(v["provenance"].get("timings_ms").is_none());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_capture(&["frobnicate"]).0, EXIT_VALIDATION);
        assert_eq!(run_capture(&["analyze", "--steps", "1:1"]).0, EXIT_VALIDATION);
        let (code, _, err) = run_capture(&[
            "series", "--steps", "-1:1,1:1", "--n", "4", "--type", "excursion", "--mark", "crossings",
        ]);
        assert_eq!(code, EXIT_VALIDATION);
        assert!(err.contains("cannot cross"));
        // z beyond the radius of convergence
        assert_eq!(run_capture(&["evaluate", "--steps", "-1:1,1:1", "--z", "0.9"]).0, EXIT_VALIDATION);
        assert_eq!(
            run_capture(&["simulate", "--steps", "-1:1,1:1", "--n", "4000", "--type", "bridge", "--source", "windowed", "--window-k", "1"]).0,
            EXIT_COMPUTATION
        );
        assert_eq!(run_capture(&["analyze", "--config", "/nonexistent/cfg.toml"]).0, EXIT_IO);
    }

    #[test]
    fn config_values_fill_missing_flags() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("run.toml");
        std::fs::write(&cfg, "command = \"series\"\nsteps = \"-1:1,1:1\"\nn = 4\nmark = [\"returns\"]\ndeterministic = true\n").unwrap();
        let (code, out, _) = run_capture(&["--config", cfg.to_str().unwrap()]);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("z^2: 2*q+2"), "{out}");
        let (code, out, _) = run_capture(&["--config", cfg.to_str().unwrap(), "series", "--n", "2"]);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 3);
    }
}
