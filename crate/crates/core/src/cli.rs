//! Command-line front end.
//!
//! Every run prints its resolved configuration first (`# key=value` lines
//! for csv and plain output, a `config` object for json), then its rows.
//! Exit codes: 0 on success, 2 on usage errors, 1 when a computation fails.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};

use crate::gauss_sums::{gauss_sum, gauss_sum_explicit_q2, twist, GaussSumValue};
use crate::lattice::{count_primary, Filter, LatticeQuery};
use crate::rings::{EisInt, GaussInt, QuadInt, Ring};
use crate::sums::{
    compare, direct_sum, factorization_check, m0_term, main_term, poisson_check, zeta2_euler_product,
    zeta2_ideal_sum, SumConfig, SumReport, Truncation, THREADS_ENV,
};
use crate::symbols::{symbol_fast, PowerResidue, SymbolValue};
use crate::weights::{make_weight, TransformEvaluator, DEFAULT_QUAD_TOL};

#[derive(Debug, Parser)]
#[command(name = "hecke", version, about = "Power-residue symbols, Gauss sums and Hecke character sums")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Plain,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// The power-residue symbol (a/n)_j.
    Symbol(SymbolArgs),
    /// The Gauss sum g_j(k, n).
    GaussSum(GaussSumArgs),
    /// The weight transform at one argument.
    Transform(TransformArgs),
    /// Lattice point counts by norm.
    Count(CountArgs),
    /// The direct double sum S_j(X, Y).
    Sum(SumArgs),
    /// The predicted main term and the diagonal term.
    Predict(SumArgs),
    /// Direct sum against the prediction, one CSV schema row.
    Compare(SumArgs),
    /// Both sides of the twisted Poisson identity for one modulus.
    PoissonCheck(PoissonArgs),
    /// Truncated check of the quadratic Gauss-sum Dirichlet series factorization.
    FactorCheck(FactorArgs),
    /// zeta_K(2) by both methods.
    Zeta(ZetaArgs),
    /// Runs `compare` over the points of a config file.
    Grid(GridArgs),
}

#[derive(Debug, Args, Serialize)]
struct SymbolArgs {
    #[arg(long)]
    j: u8,
    #[arg(long, allow_hyphen_values = true)]
    a: String,
    #[arg(long, allow_hyphen_values = true)]
    n: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Method {
    Brute,
    Explicit,
}

#[derive(Debug, Args, Serialize)]
struct GaussSumArgs {
    #[arg(long)]
    j: u8,
    #[arg(long, allow_hyphen_values = true)]
    k: String,
    #[arg(long, allow_hyphen_values = true)]
    n: String,
    #[arg(long, value_enum, default_value_t = Method::Brute)]
    method: Method,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Field {
    I,
    Omega,
}

#[derive(Debug, Args, Serialize)]
struct TransformArgs {
    #[arg(long, value_enum)]
    field: Field,
    #[arg(long)]
    t: f64,
    #[arg(long = "U")]
    #[serde(rename = "U")]
    u: f64,
    #[arg(long, default_value_t = DEFAULT_QUAD_TOL)]
    quad_tol: f64,
}

#[derive(Debug, Args, Serialize)]
struct CountArgs {
    #[arg(long)]
    ring: String,
    #[arg(long)]
    x: i64,
    #[arg(long, default_value = "primary")]
    filter: String,
}

#[derive(Debug, Clone, Args, Serialize)]
struct TruncationArgs {
    #[arg(long, default_value_t = Truncation::default().decay_exponent)]
    decay_exponent: u32,
    #[arg(long, default_value_t = Truncation::default().tail_tol)]
    tail_tol: f64,
    #[arg(long, default_value_t = Truncation::default().max_t)]
    max_t: f64,
}

impl TruncationArgs {
    fn policy(&self) -> Truncation {
        Truncation {
            decay_exponent: self.decay_exponent,
            tail_tol: self.tail_tol,
            max_t: self.max_t,
        }
    }
}

#[derive(Debug, Args, Serialize)]
struct SumArgs {
    #[arg(long)]
    j: u8,
    #[arg(long = "X")]
    #[serde(rename = "X")]
    x: f64,
    #[arg(long = "Y")]
    #[serde(rename = "Y")]
    y: f64,
    /// Defaults to max(2, sqrt(X/Y)).
    #[arg(long = "U")]
    #[serde(rename = "U")]
    u: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_QUAD_TOL)]
    quad_tol: f64,
    /// Defaults to the machine parallelism; HECKE_THREADS takes precedence.
    #[arg(long)]
    threads: Option<usize>,
    #[command(flatten)]
    truncation: TruncationArgs,
}

#[derive(Debug, Args, Serialize)]
struct PoissonArgs {
    #[arg(long)]
    j: u8,
    #[arg(long, allow_hyphen_values = true)]
    n: String,
    #[arg(long = "X")]
    #[serde(rename = "X")]
    x: f64,
    #[arg(long = "U", default_value_t = 4.0)]
    #[serde(rename = "U")]
    u: f64,
    #[arg(long, default_value_t = DEFAULT_QUAD_TOL)]
    quad_tol: f64,
    #[command(flatten)]
    truncation: TruncationArgs,
}

#[derive(Debug, Args, Serialize)]
struct FactorArgs {
    #[arg(long, allow_hyphen_values = true)]
    k: String,
    #[arg(long, default_value_t = 2.0)]
    s_re: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    s_im: f64,
    #[arg(long = "T")]
    #[serde(rename = "T")]
    t: i64,
}

#[derive(Debug, Args, Serialize)]
struct ZetaArgs {
    #[arg(long, value_enum)]
    field: Field,
    /// Norm bound of the ideal sum.
    #[arg(long = "T", default_value_t = crate::sums::DEFAULT_IDEAL_BOUND)]
    #[serde(rename = "T")]
    t: i64,
    /// Prime bound of the Euler product.
    #[arg(long = "P", default_value_t = crate::sums::DEFAULT_PRIME_BOUND)]
    #[serde(rename = "P")]
    p: u64,
}

#[derive(Debug, Args, Serialize)]
struct GridArgs {
    #[arg(long)]
    config: PathBuf,
}

/// Why a run stopped.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Compute(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Compute(e)
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// An ordered table plus the configuration that produced it.
#[derive(Debug, Default)]
struct Report {
    config: Vec<(String, Value)>,
    columns: Vec<&'static str>,
    rows: Vec<Vec<Value>>,
}

impl Report {
    fn new(command: &str, args: &impl Serialize) -> Self {
        let mut config = vec![("command".to_string(), json!(command))];
        config.extend(flatten(serde_json::to_value(args).expect("arguments serialize")));
        Report {
            config,
            ..Report::default()
        }
    }

    fn set(&mut self, key: &str, value: Value) {
        match self.config.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = value,
            None => self.config.push((key.to_string(), value)),
        }
    }

    fn emit(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Csv => {
                self.write_header(out)?;
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row.iter().map(cell))?;
                }
                w.flush()
            }
            Format::Plain => {
                self.write_header(out)?;
                for (i, row) in self.rows.iter().enumerate() {
                    if i > 0 {
                        writeln!(out)?;
                    }
                    for (c, v) in self.columns.iter().zip(row) {
                        writeln!(out, "{c}: {}", cell(v))?;
                    }
                }
                Ok(())
            }
            Format::Json => {
                let object = |pairs: Vec<(&str, &Value)>| {
                    let body: Vec<String> = pairs
                        .into_iter()
                        .map(|(k, v)| format!("{}:{}", Value::from(k), v))
                        .collect();
                    format!("{{{}}}", body.join(","))
                };
                let config = object(self.config.iter().map(|(k, v)| (k.as_str(), v)).collect());
                let rows: Vec<String> = self
                    .rows
                    .iter()
                    .map(|r| object(self.columns.iter().copied().zip(r).collect()))
                    .collect();
                writeln!(out, "{{\"config\":{config},\"rows\":[{}]}}", rows.join(","))
            }
        }
    }

    fn write_header(&self, out: &mut dyn Write) -> std::io::Result<()> {
        for (k, v) in &self.config {
            writeln!(out, "# {k}={}", cell(v))?;
        }
        Ok(())
    }
}

/// Nested objects become dotted keys, flattened ones keep their names.
fn flatten(v: Value) -> Vec<(String, Value)> {
    match v {
        Value::Object(map) => map
            .into_iter()
            .flat_map(|(k, v)| match v {
                Value::Object(_) => flatten(v),
                other => vec![(k, other)],
            })
            .collect(),
        other => vec![("value".into(), other)],
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

fn num(x: f64) -> Value {
    // non-finite values have no JSON number form
    if x.is_finite() {
        json!(x)
    } else {
        json!(x.to_string())
    }
}

fn ring_of_order(j: u8) -> Result<Ring, Failure> {
    match j {
        2 | 4 => Ok(Ring::Gauss),
        3 => Ok(Ring::Eisenstein),
        _ => Err(usage(format!("j must be 2, 3 or 4, got {j}"))),
    }
}

fn parse_element<R: QuadInt>(flag: &str, s: &str) -> Result<R, Failure> {
    R::parse(s).map_err(|e| usage(format!("--{flag}: {e}")))
}

fn symbol_text(s: SymbolValue) -> String {
    let Some(e) = s.exponent() else {
        return "0".into();
    };
    match (s.order(), e) {
        (_, 0) => "1".into(),
        (2, _) => "-1".into(),
        (4, 1) => "i".into(),
        (4, 2) => "-1".into(),
        (4, _) => "-i".into(),
        (3, 1) => "w".into(),
        (_, _) => "w^2".into(),
    }
}

fn run_symbol(a: &SymbolArgs) -> Result<Report, Failure> {
    fn go<R: PowerResidue>(a: &SymbolArgs) -> Result<SymbolValue, Failure> {
        let x: R = parse_element("a", &a.a)?;
        let n: R = parse_element("n", &a.n)?;
        symbol_fast(a.j, x, n).map_err(|e| usage(e.to_string()))
    }
    let ring = ring_of_order(a.j)?;
    let s = match ring {
        Ring::Gauss => go::<GaussInt>(a)?,
        Ring::Eisenstein => go::<EisInt>(a)?,
    };
    let mut r = Report::new("symbol", a);
    r.set("ring", json!(ring.name()));
    r.columns = vec!["j", "a", "n", "exponent", "value", "re", "im"];
    let z = s.to_complex();
    r.rows.push(vec![
        json!(a.j),
        json!(a.a),
        json!(a.n),
        s.exponent().map_or(Value::Null, |e| json!(e)),
        json!(symbol_text(s)),
        num(z.re),
        num(z.im),
    ]);
    Ok(r)
}

fn run_gauss_sum(a: &GaussSumArgs) -> Result<Report, Failure> {
    /// The value by the requested method and an independent cross-check.
    fn go<R: PowerResidue>(a: &GaussSumArgs) -> Result<(GaussSumValue, &'static str, Option<Complex64>), Failure> {
        let k: R = parse_element("k", &a.k)?;
        let n: R = parse_element("n", &a.n)?;
        if !n.is_primary() {
            return Err(usage(format!("--n: {n} is not primary")));
        }
        let brute = || gauss_sum(a.j, k, n).context("brute-force Gauss sum");
        match a.method {
            Method::Explicit => {
                let explicit = gauss_sum_explicit_q2(to_gauss(k), to_gauss(n)).context("explicit Gauss sum")?;
                Ok((explicit, "brute", Some(brute()?.value)))
            }
            Method::Brute => {
                let g = brute()?;
                if a.j == 2 {
                    let e = gauss_sum_explicit_q2(to_gauss(k), to_gauss(n)).context("explicit Gauss sum")?;
                    return Ok((g, "explicit", Some(e.value)));
                }
                // g(k, n) = conj((k/n)_j) g(1, n) for k coprime to n
                match twist(a.j, k, gauss_sum(a.j, R::one(), n).context("g(1, n)")?.value, n) {
                    Ok(t) => Ok((g, "twist", Some(t))),
                    Err(_) => Ok((g, "none", None)),
                }
            }
        }
    }
    /// Only reached on `Z[i]`, where the explicit table lives.
    fn to_gauss<R: QuadInt>(z: R) -> GaussInt {
        debug_assert_eq!(R::RING, Ring::Gauss);
        GaussInt::new(z.a(), z.b())
    }
    let ring = ring_of_order(a.j)?;
    if a.method == Method::Explicit && a.j != 2 {
        return Err(usage("--method explicit is only available for j = 2"));
    }
    let (g, check, other) = match ring {
        Ring::Gauss => go::<GaussInt>(a)?,
        Ring::Eisenstein => go::<EisInt>(a)?,
    };
    let mut r = Report::new("gauss-sum", a);
    r.set("ring", json!(ring.name()));
    r.columns = vec!["j", "k", "n", "method", "re", "im", "error_bound", "check", "check_delta"];
    r.rows.push(vec![
        json!(a.j),
        json!(a.k),
        json!(a.n),
        serde_json::to_value(a.method).expect("method serializes"),
        num(g.value.re),
        num(g.value.im),
        num(g.error_bound),
        json!(check),
        other.map_or(Value::Null, |o| num((o - g.value).norm())),
    ]);
    Ok(r)
}

fn run_transform(a: &TransformArgs) -> Result<Report, Failure> {
    let w = make_weight(a.u).map_err(|e| usage(e.to_string()))?;
    if !(a.t.is_finite() && a.t >= 0.0) {
        return Err(usage(format!("--t must be finite and nonnegative, got {}", a.t)));
    }
    let ev = TransformEvaluator::new(w, a.quad_tol).map_err(|e| usage(e.to_string()))?;
    let (value, reference) = match a.field {
        Field::I => (ev.transform_i(a.t), ev.transform_i_reference(a.t)),
        Field::Omega => {
            let s3 = 3f64.sqrt();
            (
                ev.transform_omega(a.t),
                ev.transform_i_reference(2.0 * a.t / s3).map(|v| 2.0 / s3 * v),
            )
        }
    };
    let value = value.context("transform")?;
    let reference = reference.context("reference quadrature")?;
    let mut r = Report::new("transform", a);
    r.columns = vec!["field", "t", "U", "value", "reference", "delta"];
    r.rows.push(vec![
        serde_json::to_value(a.field).expect("field serializes"),
        num(a.t),
        num(a.u),
        num(value),
        num(reference),
        num((value - reference).abs()),
    ]);
    Ok(r)
}

fn run_count(a: &CountArgs) -> Result<Report, Failure> {
    let ring: Ring = a.ring.parse().map_err(usage)?;
    let filter: Filter = a.filter.parse().map_err(usage)?;
    let mut r = Report::new("count", a);
    if filter == Filter::Primary {
        if a.x < 1 {
            return Err(usage(format!("--x must be at least 1, got {}", a.x)));
        }
        let c = count_primary(ring, a.x);
        r.columns = vec!["ring", "x", "filter", "count", "main_term", "ratio"];
        r.rows.push(vec![
            json!(ring.name()),
            json!(a.x),
            json!(a.filter),
            json!(c.count),
            num(c.main_term),
            num(c.ratio),
        ]);
    } else {
        let q = LatticeQuery::new(ring, a.x, filter).map_err(usage)?;
        r.columns = vec!["ring", "x", "filter", "count"];
        r.rows
            .push(vec![json!(ring.name()), json!(a.x), json!(a.filter), json!(q.count())]);
    }
    Ok(r)
}

fn sum_config(a: &SumArgs) -> Result<SumConfig, Failure> {
    let mut cfg = SumConfig::new(a.j, a.x, a.y).map_err(|e| usage(e.to_string()))?;
    if let Some(u) = a.u {
        cfg = cfg.with_sharpness(u);
    }
    if let Some(t) = a.threads {
        cfg = cfg.with_threads(t);
    }
    cfg.quad_tol = a.quad_tol;
    cfg.truncation = a.truncation.policy();
    let cfg = cfg.with_env_threads().map_err(|e| usage(e.to_string()))?;
    cfg.validate().map_err(|e| usage(e.to_string()))?;
    Ok(cfg)
}

fn config_report(command: &str, cfg: &SumConfig) -> Report {
    Report::new(command, cfg)
}

pub const COMPARE_COLUMNS: [&str; 13] = [
    "j",
    "X",
    "Y",
    "U",
    "S_re",
    "S_im",
    "main_term",
    "m0_term",
    "ratio",
    "imag_fraction",
    "n_count",
    "m_count",
    "elapsed_ms",
];

fn compare_row(s: &SumReport) -> Vec<Value> {
    let v = serde_json::to_value(s).expect("report serializes");
    COMPARE_COLUMNS
        .iter()
        .map(|c| match &v[*c] {
            Value::Number(n) => n.as_f64().map_or(Value::Number(n.clone()), |x| {
                if n.is_f64() {
                    num(x)
                } else {
                    Value::Number(n.clone())
                }
            }),
            other => other.clone(),
        })
        .collect()
}

fn run_sums(kind: &str, a: &SumArgs) -> Result<Report, Failure> {
    let cfg = sum_config(a)?;
    let mut r = config_report(kind, &cfg);
    match kind {
        "sum" => {
            let start = std::time::Instant::now();
            let d = direct_sum(&cfg).context("direct sum")?;
            r.columns = vec!["j", "X", "Y", "U", "S_re", "S_im", "error_budget", "n_count", "m_count", "elapsed_ms"];
            r.rows.push(vec![
                json!(cfg.j),
                num(cfg.x),
                num(cfg.y),
                num(cfg.u),
                num(d.value.re),
                num(d.value.im),
                num(d.error_budget),
                json!(d.n_count),
                json!(d.m_count),
                json!(start.elapsed().as_millis() as u64),
            ]);
        }
        "predict" => {
            let main = main_term(&cfg).context("main term")?;
            let m0 = m0_term(&cfg).context("diagonal term")?;
            r.columns = vec!["j", "X", "Y", "U", "main_term", "m0_term"];
            r.rows
                .push(vec![json!(cfg.j), num(cfg.x), num(cfg.y), num(cfg.u), num(main), num(m0)]);
        }
        _ => {
            let s = compare(&cfg).context("compare")?;
            r.columns = COMPARE_COLUMNS.to_vec();
            r.rows.push(compare_row(&s));
        }
    }
    Ok(r)
}

fn run_poisson(a: &PoissonArgs) -> Result<Report, Failure> {
    let ring = ring_of_order(a.j)?;
    let trunc = a.truncation.policy();
    let c = match ring {
        Ring::Gauss => {
            let n: GaussInt = parse_element("n", &a.n)?;
            poisson_check(a.j, n, a.x, a.u, a.quad_tol, &trunc)
        }
        Ring::Eisenstein => {
            let n: EisInt = parse_element("n", &a.n)?;
            poisson_check(a.j, n, a.x, a.u, a.quad_tol, &trunc)
        }
    }
    .context("Poisson check")?;
    let mut r = Report::new("poisson-check", a);
    r.set("ring", json!(ring.name()));
    r.columns = vec![
        "j", "n", "X", "U", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "delta", "k_count", "t_cut", "tail_bound",
    ];
    r.rows.push(vec![
        json!(a.j),
        json!(a.n),
        num(a.x),
        num(a.u),
        num(c.lhs_re),
        num(c.lhs_im),
        num(c.rhs_re),
        num(c.rhs_im),
        num(c.delta),
        json!(c.k_count),
        num(c.t_cut),
        num(c.tail_bound),
    ]);
    Ok(r)
}

fn run_factor(a: &FactorArgs) -> Result<Report, Failure> {
    let k: GaussInt = parse_element("k", &a.k)?;
    let c = factorization_check(k, Complex64::new(a.s_re, a.s_im), a.t).context("factorization check")?;
    let mut r = Report::new("factor-check", a);
    r.columns = vec!["k", "s_re", "s_im", "T", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "delta"];
    r.rows.push(vec![
        json!(a.k),
        num(a.s_re),
        num(a.s_im),
        json!(a.t),
        num(c.lhs_re),
        num(c.lhs_im),
        num(c.rhs_re),
        num(c.rhs_im),
        num(c.delta),
    ]);
    Ok(r)
}

fn run_zeta(a: &ZetaArgs) -> Result<Report, Failure> {
    if a.t < 1 || a.p < 2 {
        return Err(usage("--T must be at least 1 and --P at least 2"));
    }
    let field = match a.field {
        Field::I => Ring::Gauss,
        Field::Omega => Ring::Eisenstein,
    };
    let x = zeta2_ideal_sum(field, a.t);
    let y = zeta2_euler_product(field, a.p);
    let diff = (x.value - y.value).abs();
    let mut r = Report::new("zeta", a);
    r.columns = vec!["field", "ideal_sum", "ideal_sum_bound", "euler_product", "euler_product_bound", "difference", "agree"];
    r.rows.push(vec![
        json!(field.name()),
        num(x.value),
        num(x.error_bound),
        num(y.value),
        num(y.error_bound),
        num(diff),
        json!(diff <= x.error_bound + y.error_bound),
    ]);
    Ok(r)
}

/// A parsed grid file: shared settings plus `point = j, X, Y` lines.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    #[serde(rename = "U")]
    pub u: Option<f64>,
    pub quad_tol: f64,
    pub threads: Option<usize>,
    pub truncation: Truncation,
    #[serde(skip)]
    pub points: Vec<(u8, f64, f64)>,
}

/// Parses `key = value` lines; `#` starts a comment. Keys: `point`
/// (repeatable, `j, X, Y`), `U`, `quad_tol`, `threads`, `decay_exponent`,
/// `tail_tol`, `max_t`.
pub fn parse_grid(text: &str) -> Result<GridSpec, String> {
    let mut spec = GridSpec {
        u: None,
        quad_tol: DEFAULT_QUAD_TOL,
        threads: None,
        truncation: Truncation::default(),
        points: Vec::new(),
    };
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |msg: String| format!("line {}: {msg}", lineno + 1);
        let (key, value) = line
            .split_once('=')
            .map(|(k, v)| (k.trim(), v.trim()))
            .ok_or_else(|| at(format!("expected key = value, got {line:?}")))?;
        fn number<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, String> {
            v.parse().map_err(|_| format!("bad value {v:?} for {key}"))
        }
        match key {
            "point" => {
                let parts: Vec<&str> = value.split(',').map(str::trim).collect();
                let [j, x, y] = parts[..] else {
                    return Err(at(format!("point needs j, X, Y, got {value:?}")));
                };
                spec.points
                    .push((number("j", j).map_err(at)?, number("X", x).map_err(at)?, number("Y", y).map_err(at)?));
            }
            "U" => spec.u = Some(number(key, value).map_err(at)?),
            "quad_tol" => spec.quad_tol = number(key, value).map_err(at)?,
            "threads" => spec.threads = Some(number(key, value).map_err(at)?),
            "decay_exponent" => spec.truncation.decay_exponent = number(key, value).map_err(at)?,
            "tail_tol" => spec.truncation.tail_tol = number(key, value).map_err(at)?,
            "max_t" => spec.truncation.max_t = number(key, value).map_err(at)?,
            _ => return Err(at(format!("unknown key {key:?}"))),
        }
    }
    Ok(spec)
}

fn run_grid(a: &GridArgs) -> Result<Report, Failure> {
    let text = std::fs::read_to_string(&a.config)
        .map_err(|e| usage(format!("cannot read {}: {e}", a.config.display())))?;
    let spec = parse_grid(&text).map_err(|e| usage(format!("{}: {e}", a.config.display())))?;
    let mut r = Report::new("grid", a);
    r.config.extend(flatten(serde_json::to_value(&spec).expect("grid serializes")));
    let env_threads = std::env::var(THREADS_ENV).ok();
    if let Some(t) = &env_threads {
        r.set("threads", json!(t));
    }
    r.set("points", json!(spec.points.len()));
    r.columns = COMPARE_COLUMNS.to_vec();
    let mut cfgs = Vec::with_capacity(spec.points.len());
    for &(j, x, y) in &spec.points {
        let args = SumArgs {
            j,
            x,
            y,
            u: spec.u,
            quad_tol: spec.quad_tol,
            threads: spec.threads,
            truncation: TruncationArgs {
                decay_exponent: spec.truncation.decay_exponent,
                tail_tol: spec.truncation.tail_tol,
                max_t: spec.truncation.max_t,
            },
        };
        cfgs.push(sum_config(&args)?);
    }
    for cfg in &cfgs {
        let s = compare(cfg).with_context(|| format!("compare at j={} X={} Y={}", cfg.j, cfg.x, cfg.y))?;
        r.rows.push(compare_row(&s));
    }
    Ok(r)
}

fn dispatch(cli: &Cli) -> Result<Report, Failure> {
    match &cli.command {
        Command::Symbol(a) => run_symbol(a),
        Command::GaussSum(a) => run_gauss_sum(a),
        Command::Transform(a) => run_transform(a),
        Command::Count(a) => run_count(a),
        Command::Sum(a) => run_sums("sum", a),
        Command::Predict(a) => run_sums("predict", a),
        Command::Compare(a) => run_sums("compare", a),
        Command::PoissonCheck(a) => run_poisson(a),
        Command::FactorCheck(a) => run_factor(a),
        Command::Zeta(a) => run_zeta(a),
        Command::Grid(a) => run_grid(a),
    }
}

/// Runs one invocation, writing the report to `out` and diagnostics to
/// `err`; returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    return 0;
                }
                _ => 2,
            };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(report) => match report.emit(cli.format, out) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(err, "error: cannot write output: {e}");
                1
            }
        },
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(Failure::Compute(e)) => {
            let _ = writeln!(err, "error: {e:#}");
            1
        }
    }
}
