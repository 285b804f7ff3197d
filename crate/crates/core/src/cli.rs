//! Command-line front end. [`run`] takes the argument vector and output
//! streams and returns the process exit code, so it can be driven from tests.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 invariant violation,
//! 3 budget exceeded.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::Zero;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::discriminant::{discriminant, discriminant_via_resultant, resultant};
use crate::error::{Error, Result};
use crate::experiments::ensemble::{draw_stream, par_draws, sample_gq, DEFAULT_BUDGET};
use crate::experiments::irreducible::irreducible_rate;
use crate::experiments::spec::parse_count;
use crate::experiments::{
    delta_boundedness_grid, moment_bound_check, small_disc_probability, ExperimentSpec, Model, Nu,
    Samples,
};
use crate::poly::IntPolynomial;
use crate::roots::{mahler_bound, scan_heights, separation, DEFAULT_TOL};
use crate::stats::{disc_convergence, resultant_convergence, ConvergenceConfig};

/// Relative slack allowed when comparing a separation against its Mahler bound.
const MAHLER_SLACK: f64 = 1e-9;

/// Relative `--out` paths are resolved against this directory when set.
const OUT_DIR_VAR: &str = "POLYDISC_OUT_DIR";

#[derive(Parser, Debug)]
#[command(
    name = "polydisc",
    version,
    about = "Exact discriminants, resultants and root separation of integral polynomials",
    after_help = "Coefficient lists are lowest power first: -1,0,1 is x^2 - 1."
)]
struct Cli {
    /// Master seed for every random draw.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Experiment config: JSON document or key=value lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Largest exhaustive enumeration allowed (accepts 1e8 style).
    #[arg(long, global = true, value_parser = count_arg)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact discriminant of one polynomial.
    Disc {
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        /// Also check the value against the resultant route.
        #[arg(long)]
        check: bool,
    },
    /// Exact resultant of two polynomials (Sylvester order: rows of p first).
    Res {
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long, allow_hyphen_values = true)]
        q: String,
    },
    /// Roots, separation, Mahler bound and convergence certificate.
    Delta {
        #[arg(long, allow_hyphen_values = true)]
        coeffs: String,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Exhaustive minimum-separation scan over heights.
    Scan {
        #[arg(long)]
        n: Option<usize>,
        /// Comma-separated heights.
        #[arg(long = "Q")]
        q: Option<String>,
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Exact moment table with bound checks for all k <= kmax, Q <= qmax.
    Moments {
        #[arg(long, default_value_t = 10)]
        kmax: u32,
        #[arg(long, default_value_t = 100)]
        qmax: u64,
    },
    /// Small-discriminant probabilities over a grid of nu.
    Tail {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        /// Comma-separated nu values.
        #[arg(long)]
        nu: Option<String>,
    },
    /// Discriminant or resultant convergence tables.
    Converge {
        #[arg(long)]
        n: Option<usize>,
        /// Second degree; selects the resultant experiment.
        #[arg(long)]
        m: Option<usize>,
        /// Comma-separated ascending heights.
        #[arg(long = "Q")]
        q: Option<String>,
        /// Discrete draws per height in Monte Carlo mode.
        #[arg(long = "N", value_parser = count_arg)]
        samples: Option<u64>,
        /// Continuous reference draws.
        #[arg(long = "NG", value_parser = count_arg)]
        reference: Option<u64>,
        #[arg(long, value_parser = ["auto", "exhaustive", "montecarlo"])]
        mode: Option<String>,
        /// Quantile grid size for the interval distance; exact when omitted.
        #[arg(long)]
        grid: Option<usize>,
        /// Also write `1/log Q, distance` as TSV here.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Irreducibility rate of the discrete ensemble.
    Irr {
        #[command(flatten)]
        ensemble: EnsembleArgs,
    },
    /// Fractions with delta < separation < 1/delta.
    Bounded {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        /// Comma-separated delta values.
        #[arg(long, default_value = "0.1,0.01,0.001")]
        delta: String,
    },
    /// Quick oracle suites.
    Selftest,
}

#[derive(Args, Debug)]
struct EnsembleArgs {
    #[arg(long)]
    n: Option<usize>,
    #[arg(long = "Q")]
    q: Option<u64>,
    #[arg(long, value_parser = ["exhaustive", "montecarlo"])]
    mode: Option<String>,
    /// Monte Carlo draws (accepts 1e6 style).
    #[arg(long = "N", value_parser = count_arg)]
    samples: Option<u64>,
    #[arg(long)]
    tol: Option<f64>,
}

fn count_arg(s: &str) -> std::result::Result<u64, String> {
    parse_count(s).map_err(|e| e.to_string())
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad {what} value {t:?}")))
        })
        .collect()
}

fn parse_heights(s: &str) -> Result<Vec<u64>> {
    s.split(',').map(parse_count).collect()
}

/// Rendered output of one subcommand.
struct Report {
    command: &'static str,
    spec: Option<Value>,
    rows: Vec<Value>,
    summary: Map<String, Value>,
    /// Plain CSV-mode text for single-value queries.
    bare: Option<String>,
}

impl Report {
    fn new(command: &'static str, spec: Option<Value>) -> Self {
        Self {
            command,
            spec,
            rows: Vec::new(),
            summary: Map::new(),
            bare: None,
        }
    }

    fn push<T: Serialize>(&mut self, row: &T) -> Result<()> {
        self.rows.push(to_value(row)?);
        Ok(())
    }

    fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => {
                let mut doc = Map::new();
                doc.insert("command".into(), Value::from(self.command));
                if let Some(spec) = &self.spec {
                    doc.insert("spec".into(), spec.clone());
                }
                doc.insert("rows".into(), Value::Array(self.rows.clone()));
                for (k, v) in &self.summary {
                    doc.insert(k.clone(), v.clone());
                }
                let mut s = serde_json::to_string_pretty(&Value::Object(doc))
                    .map_err(|e| Error::Io(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => {
                if let Some(bare) = &self.bare {
                    return Ok(format!("{bare}\n"));
                }
                let mut out = String::new();
                if let Some(spec) = &self.spec {
                    out.push_str(&format!("# spec={spec}\n"));
                }
                let mut w = csv::Writer::from_writer(Vec::new());
                if let Some(Value::Object(first)) = self.rows.first() {
                    w.write_record(first.keys()).map_err(csv_err)?;
                }
                for row in &self.rows {
                    if let Value::Object(map) = row {
                        w.write_record(map.values().map(cell)).map_err(csv_err)?;
                    }
                }
                let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
                out.push_str(&String::from_utf8(bytes).expect("utf-8 input"));
                for (k, v) in &self.summary {
                    out.push_str(&format!("# {k}={}\n", cell(v)));
                }
                Ok(out)
            }
        }
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Io(e.to_string()))
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

/// Parses `argv` (program name first), runs the subcommand and writes its
/// output. Diagnostics go to `stderr`.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(stderr, "{text}");
                1
            } else {
                let _ = write!(stdout, "{text}");
                0
            };
        }
    };
    let outcome = match cli.threads {
        Some(0) => Err(Error::InvalidArgument("--threads must be positive".into())),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::Io(e.to_string()))
            .and_then(|pool| pool.install(|| execute(&cli))),
        None => execute(&cli),
    };
    let result = outcome.and_then(|(report, extra)| {
        let text = report.render(cli.format)?;
        emit(&cli, &text, stdout)?;
        match extra {
            Some(err) => Err(err),
            None => Ok(()),
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn resolve_out(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_VAR) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn emit(cli: &Cli, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match &cli.out {
        Some(path) => std::fs::write(resolve_out(path), text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

/// Runs the subcommand. A report may come back together with an error
/// (partial scans, failed checks): the report is still written, then the
/// error decides the exit code.
fn execute(cli: &Cli) -> Result<(Report, Option<Error>)> {
    match &cli.command {
        Command::Disc { coeffs, check } => {
            let p: IntPolynomial = coeffs.parse()?;
            let d = discriminant(&p)?;
            if *check && !p.formal_leading().is_zero() {
                let other = discriminant_via_resultant(&p)?;
                if other != d {
                    return Err(Error::InvariantViolation(format!(
                        "matrix route {d} differs from resultant route {other}"
                    )));
                }
            }
            let mut r = Report::new("disc", None);
            r.push(&json!({"coeffs": p.to_string(), "discriminant": d.to_string()}))?;
            r.bare = Some(d.to_string());
            Ok((r, None))
        }
        Command::Res { p, q } => {
            let (p, q): (IntPolynomial, IntPolynomial) = (p.parse()?, q.parse()?);
            let v = resultant(&p, &q)?;
            let mut r = Report::new("res", None);
            r.push(&json!({"p": p.to_string(), "q": q.to_string(), "resultant": v.to_string()}))?;
            r.bare = Some(v.to_string());
            Ok((r, None))
        }
        Command::Delta { coeffs, tol } => delta_report(coeffs, tol.unwrap_or(DEFAULT_TOL)),
        Command::Scan { n, q, tol } => {
            let base = load_config(cli)?;
            let n = n.unwrap_or(base.as_ref().map_or(2, |s| s.n));
            let qs = match (q, &base) {
                (Some(q), _) => parse_heights(q)?,
                (None, Some(s)) => vec![s.q],
                (None, None) => vec![1, 2, 5, 10],
            };
            let tol = tol.or(base.as_ref().map(|s| s.tol)).unwrap_or(DEFAULT_TOL);
            let budget = budget(cli, base.as_ref());
            let spec = json!({"n": n, "Q_list": qs, "tol": tol, "budget": budget.to_string()});
            let mut r = Report::new("scan", Some(spec));
            let (rows, err) = match scan_heights(n, &qs, tol, budget) {
                Ok(rows) => (rows, None),
                Err(partial) => (partial.rows, Some(partial.error)),
            };
            for row in &rows {
                r.push(row)?;
            }
            Ok((r, err))
        }
        Command::Moments { kmax, qmax } => {
            if *kmax == 0 || *qmax == 0 {
                return Err(Error::InvalidArgument("kmax and qmax must be >= 1".into()));
            }
            let mut r = Report::new("moments", Some(json!({"kmax": kmax, "qmax": qmax})));
            let mut failures = 0u64;
            for k in 1..=*kmax {
                for q in 1..=*qmax {
                    let c = moment_bound_check(k, q);
                    failures += u64::from(!c.holds);
                    r.push(&c)?;
                }
            }
            r.summary.insert("failures".into(), Value::from(failures));
            let err = (failures > 0)
                .then(|| Error::InvariantViolation(format!("{failures} moment bounds fail")));
            Ok((r, err))
        }
        Command::Tail { ensemble, nu } => {
            let mut spec = ensemble_spec(cli, ensemble)?;
            if let Some(nu) = nu {
                spec.nu_grid = parse_list::<Nu>(nu, "nu")?;
            }
            if spec.nu_grid.is_empty() {
                return Err(Error::InvalidArgument("tail needs --nu".into()));
            }
            let mut r = Report::new("tail", Some(to_value(&spec)?));
            for nu in &spec.nu_grid {
                r.push(&small_disc_probability(&spec, nu)?)?;
            }
            Ok((r, None))
        }
        Command::Converge {
            n,
            m,
            q,
            samples,
            reference,
            mode,
            grid,
            plot,
        } => {
            let base = load_config(cli)?;
            let cfg = ConvergenceConfig {
                n: n.or(base.as_ref().map(|s| s.n)).unwrap_or(2),
                m: m.or(base.as_ref().and_then(|s| s.m)),
                q_list: match (q, &base) {
                    (Some(q), _) => parse_heights(q)?,
                    (None, Some(s)) => vec![s.q],
                    (None, None) => vec![2, 10, 100, 1000],
                },
                samples: samples
                    .or(base.as_ref().and_then(|s| match s.samples {
                        Samples::MonteCarlo(k) => Some(k),
                        Samples::Exhaustive => None,
                    }))
                    .unwrap_or(1_000_000),
                reference_samples: reference.unwrap_or(1_000_000),
                mode: mode.as_deref().unwrap_or("auto").parse()?,
                seed: seed(cli, base.as_ref()),
                budget: budget(cli, base.as_ref()),
                grid_size: grid.unwrap_or(usize::MAX),
            };
            let table = if cfg.m.is_some() {
                resultant_convergence(&cfg)?
            } else {
                disc_convergence(&cfg)?
            };
            if let Some(path) = plot {
                std::fs::write(resolve_out(path), table.plot_tsv())?;
            }
            let mut spec = to_value(&cfg)?;
            if let Value::Object(map) = &mut spec {
                map.insert("budget".into(), Value::from(cfg.budget.to_string()));
                if cfg.grid_size == usize::MAX {
                    map.insert("grid_size".into(), Value::from("exact"));
                }
            }
            let mut r = Report::new("converge", Some(spec));
            for row in &table.rows {
                r.push(row)?;
            }
            r.summary
                .insert("fitted_constant".into(), Value::from(table.fitted_constant));
            Ok((r, None))
        }
        Command::Irr { ensemble } => {
            let spec = ensemble_spec(cli, ensemble)?;
            let mut r = Report::new("irr", Some(to_value(&spec)?));
            r.push(&irreducible_rate(&spec)?)?;
            Ok((r, None))
        }
        Command::Bounded { ensemble, delta } => {
            let spec = ensemble_spec(cli, ensemble)?;
            let deltas = parse_list::<f64>(delta, "delta")?;
            let b = delta_boundedness_grid(&spec, &deltas)?;
            let mut r = Report::new("bounded", Some(to_value(&spec)?));
            let Value::Object(mut head) = to_value(&b)? else {
                unreachable!("struct serializes to an object")
            };
            head.remove("rows");
            for row in &b.rows {
                let mut merged = head.clone();
                if let Value::Object(fields) = to_value(row)? {
                    merged.extend(fields);
                }
                r.rows.push(Value::Object(merged));
            }
            Ok((r, None))
        }
        Command::Selftest => {
            let mut r = Report::new("selftest", Some(json!({"seed": seed(cli, None)})));
            let mut failed = 0u64;
            for check in selftest(seed(cli, None))? {
                failed += u64::from(check.failures > 0);
                r.push(&check)?;
            }
            let err = (failed > 0).then(|| Error::InvariantViolation(format!("{failed} self-test suites failed")));
            Ok((r, err))
        }
    }
}

fn delta_report(coeffs: &str, tol: f64) -> Result<(Report, Option<Error>)> {
    let p: IntPolynomial = coeffs.parse()?;
    let sep = separation(&p, tol)?;
    let bound = mahler_bound(&p)?;
    let mut r = Report::new("delta", None);
    r.push(&json!({
        "coeffs": p.to_string(),
        "delta": sep.delta,
        "mahler_bound": bound,
        "converged": sep.roots.converged,
        "residual_bound": sep.roots.residual_bound,
        "iterations": sep.roots.iterations,
    }))?;
    let err = if sep.roots.converged && sep.delta < (1.0 - MAHLER_SLACK) * bound {
        Some(Error::InvariantViolation(format!(
            "separation {} below Mahler bound {bound}",
            sep.delta
        )))
    } else {
        None
    };
    Ok((r, err))
}

fn load_config(cli: &Cli) -> Result<Option<ExperimentSpec>> {
    match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            Ok(Some(ExperimentSpec::from_config_str(&text)?))
        }
        None => Ok(None),
    }
}

fn seed(cli: &Cli, base: Option<&ExperimentSpec>) -> u64 {
    cli.seed.or(base.map(|s| s.seed)).unwrap_or(0)
}

fn budget(cli: &Cli, base: Option<&ExperimentSpec>) -> u128 {
    cli.budget
        .map(u128::from)
        .or(base.map(|s| s.budget))
        .unwrap_or(DEFAULT_BUDGET)
}

/// Config file first, then command-line overrides.
fn ensemble_spec(cli: &Cli, args: &EnsembleArgs) -> Result<ExperimentSpec> {
    let mut spec = load_config(cli)?.unwrap_or_default();
    spec.model = Model::Discrete;
    if let Some(n) = args.n {
        spec.n = n;
    }
    if let Some(q) = args.q {
        spec.q = q;
    }
    if let Some(tol) = args.tol {
        spec.tol = tol;
    }
    spec.seed = seed(cli, Some(&spec));
    spec.budget = budget(cli, Some(&spec));
    spec.samples = match (args.mode.as_deref(), args.samples) {
        (Some("exhaustive"), _) => Samples::Exhaustive,
        (Some(_), Some(k)) | (None, Some(k)) => Samples::MonteCarlo(k),
        (Some(_), None) => match spec.samples {
            Samples::MonteCarlo(k) => Samples::MonteCarlo(k),
            Samples::Exhaustive => {
                return Err(Error::InvalidArgument("montecarlo mode needs --N".into()))
            }
        },
        (None, None) => spec.samples,
    };
    spec.validate()?;
    Ok(spec)
}

#[derive(Debug, Serialize)]
struct SelfCheck {
    suite: &'static str,
    cases: u64,
    failures: u64,
    status: &'static str,
}

impl SelfCheck {
    fn new(suite: &'static str, cases: u64, failures: u64) -> Self {
        Self {
            suite,
            cases,
            failures,
            status: if failures == 0 { "pass" } else { "fail" },
        }
    }
}

fn selftest(seed: u64) -> Result<Vec<SelfCheck>> {
    let mut out = Vec::new();

    let mut fails = 0;
    let mut cases = 0;
    for a in -10i64..=10 {
        for b in -10i64..=10 {
            for c in -10i64..=10 {
                let d = discriminant(&IntPolynomial::from_i64(&[c, b, a]))?;
                cases += 1;
                fails += u64::from(d != (b * b - 4 * a * c).into());
            }
        }
    }
    out.push(SelfCheck::new("quadratic-closed-form", cases, fails));

    let per_degree = 200u64;
    let mut fails = 0;
    for n in 2..=6usize {
        let results = par_draws(per_degree, |i| -> Result<bool> {
            let mut p = sample_gq(n, 1000, &mut draw_stream(seed, &format!("selftest-route-{n}"), i));
            if p.formal_leading().is_zero() {
                let mut c = p.coeffs().to_vec();
                c[n] = 1.into();
                p = IntPolynomial::new(c)?;
            }
            Ok(discriminant(&p)? == discriminant_via_resultant(&p)?)
        });
        for ok in results {
            fails += u64::from(!ok?);
        }
    }
    out.push(SelfCheck::new("two-route-identity", 5 * per_degree, fails));

    let mut fails = 0;
    for k in 1..=10 {
        for q in 1..=100 {
            fails += u64::from(!moment_bound_check(k, q).holds);
        }
    }
    out.push(SelfCheck::new("moment-bound", 1000, fails));

    let draws = 500u64;
    let results = par_draws(draws, |i| -> Result<Option<bool>> {
        let p = sample_gq(3, 1000, &mut draw_stream(seed, "selftest-mahler", i));
        if p.effective_degree().is_none_or(|d| d < 2) || discriminant(&p)?.is_zero() {
            return Ok(None);
        }
        let sep = separation(&p, DEFAULT_TOL)?;
        if !sep.roots.converged {
            return Ok(None);
        }
        Ok(Some(sep.delta >= (1.0 - MAHLER_SLACK) * mahler_bound(&p)?))
    });
    let (mut cases, mut fails) = (0, 0);
    for r in results {
        if let Some(ok) = r? {
            cases += 1;
            fails += u64::from(!ok);
        }
    }
    out.push(SelfCheck::new("mahler-inequality", cases, fails));
    Ok(out)
}
