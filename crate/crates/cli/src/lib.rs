//! Subcommands of the `folding` binary. Every command writes to the given
//! sinks and returns its exit status, which keeps them testable in-process.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use folding::field::{make_field, prime_power, prime_powers};
use folding::torus::{self, PointClass};
use folding::value_set::{self, Method, ValueSetReport};
use folding::weyl::{canonicalize, orbit_group, stabilizer_size, Rational64};
use folding::{folding_poly, formulas, AlgebraId, Error, PolyMap, TorusPoint};
use rayon::prelude::*;
use serde::Serialize;

pub const EXIT_OK: u8 = 0;
pub const EXIT_MISMATCH: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "folding", version, about = "Folding polynomials and their value sets over finite fields")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the coefficients of P_k.
    Gen(GenArgs),
    /// Count |P_k(F_q)| or |P_k(F_q²)| with one or more methods.
    Count(CountArgs),
    /// Cross-check the methods over a grid of (q, k).
    Verify(VerifyArgs),
    /// Count with the fixed-point oracle, optionally with the per-class audit.
    Oracle(OracleArgs),
    /// Canonical form and class of a torus point.
    Classify(ClassifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// An argument accepted either positionally or as a flag.
fn pick<T: Clone>(positional: &Option<T>, flag: &Option<T>, name: &str) -> Result<T, String> {
    match (positional, flag) {
        (Some(_), Some(_)) => Err(format!("{name} given both positionally and as a flag")),
        (Some(v), None) | (None, Some(v)) => Ok(v.clone()),
        (None, None) => Err(format!("missing {name}")),
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    pub algebra: Option<AlgebraId>,
    pub k: Option<u64>,
    #[arg(long = "algebra", id = "algebra_flag")]
    pub algebra_flag: Option<AlgebraId>,
    #[arg(short = 'k', id = "k_flag")]
    pub k_flag: Option<u64>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    pub algebra: Option<AlgebraId>,
    pub p: Option<u64>,
    pub n: Option<u32>,
    pub k: Option<u64>,
    #[arg(long = "algebra", id = "algebra_flag")]
    pub algebra_flag: Option<AlgebraId>,
    #[arg(short = 'p', id = "p_flag")]
    pub p_flag: Option<u64>,
    #[arg(short = 'n', id = "n_flag")]
    pub n_flag: Option<u32>,
    #[arg(short = 'k', id = "k_flag")]
    pub k_flag: Option<u64>,
}

impl FieldArgs {
    fn resolve(&self) -> Result<(AlgebraId, u64, u64), String> {
        let alg = pick(&self.algebra, &self.algebra_flag, "algebra")?;
        let p = pick(&self.p, &self.p_flag, "p")?;
        let n = pick(&self.n, &self.n_flag, "n")?;
        let k = pick(&self.k, &self.k_flag, "k")?;
        let field = make_field(p, n).map_err(|e| e.to_string())?;
        Ok((alg, field.q(), k))
    }
}

#[derive(Debug, Args)]
pub struct CountArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// `all` or a comma-separated subset of formula, exhaustive, oracle.
    pub methods: Option<String>,
    #[arg(long = "methods", id = "methods_flag")]
    pub methods_flag: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Comma-separated algebras, or `all`.
    #[arg(long, default_value = "all")]
    pub algebra: String,
    #[arg(long, default_value_t = 16)]
    pub qmax: u64,
    #[arg(long, default_value_t = 60)]
    pub kmax: u64,
    /// A single field size instead of the range up to `--qmax`.
    #[arg(long)]
    pub q: Option<u64>,
    /// A single degree instead of the range up to `--kmax`.
    #[arg(long)]
    pub k: Option<u64>,
    #[arg(long, default_value = "all")]
    pub methods: String,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub field: FieldArgs,
    /// Also print the interior/edge/corner tables against their closed forms.
    #[arg(long)]
    pub audit: bool,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    pub algebra: AlgebraId,
    /// A rational such as `1/3`.
    pub sigma: Rational64,
    pub tau: Rational64,
}

/// Where a command writes. `out` carries the primary output and `err`
/// diagnostics and summaries.
pub struct Sinks<'a> {
    pub out: &'a mut dyn Write,
    pub err: &'a mut dyn Write,
}

pub fn run(cli: Cli, sinks: &mut Sinks<'_>) -> u8 {
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(&a, sinks),
        Command::Count(a) => cmd_count(&a, sinks),
        Command::Verify(a) => cmd_verify(&a, sinks),
        Command::Oracle(a) => cmd_oracle(&a, sinks),
        Command::Classify(a) => cmd_classify(&a, sinks),
    };
    match result {
        Ok(code) => code,
        Err(msg) => {
            let _ = writeln!(sinks.err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

type CmdResult = Result<u8, String>;

fn io_err(e: io::Error) -> String {
    e.to_string()
}

fn lib_err(e: Error) -> String {
    e.to_string()
}

fn emit(text: &str, out: &Option<PathBuf>, sinks: &mut Sinks<'_>) -> Result<(), String> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => sinks.out.write_all(text.as_bytes()).map_err(io_err),
    }
}

/// `[i, j, "coefficient"]` triples, highest `(i, j)` first.
pub fn component_triples(map: &PolyMap) -> Vec<Vec<(u32, u32, String)>> {
    map.components
        .iter()
        .map(|c| {
            c.terms()
                .iter()
                .rev()
                .map(|(&(i, j), v)| (i, j, v.to_string()))
                .collect()
        })
        .collect()
}

#[derive(Serialize)]
struct GenJson {
    algebra: &'static str,
    k: u64,
    components: Vec<Vec<(u32, u32, String)>>,
}

pub fn render_gen(map: &PolyMap, format: Format) -> String {
    let components = component_triples(map);
    match format {
        Format::Json => {
            let doc = GenJson {
                algebra: map.algebra.name(),
                k: map.k,
                components,
            };
            serde_json::to_string(&doc).expect("plain data serializes") + "\n"
        }
        Format::Csv => {
            let mut s = String::from("component,i,j,coefficient\n");
            for (c, terms) in components.iter().enumerate() {
                for (i, j, v) in terms {
                    let _ = writeln!(s, "{},{i},{j},{v}", c + 1);
                }
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for (c, poly) in map.components.iter().enumerate() {
                let _ = writeln!(s, "P{}: {poly}", c + 1);
            }
            s
        }
    }
}

fn cmd_gen(a: &GenArgs, sinks: &mut Sinks<'_>) -> CmdResult {
    let alg = pick(&a.algebra, &a.algebra_flag, "algebra")?;
    let k = pick(&a.k, &a.k_flag, "k")?;
    let map = folding_poly(alg, k).map_err(lib_err)?;
    emit(&render_gen(&map, a.format), &a.out, sinks)?;
    Ok(EXIT_OK)
}

pub fn parse_methods(spec: &str) -> Result<Vec<Method>, String> {
    if spec.eq_ignore_ascii_case("all") {
        return Ok(Method::ALL.to_vec());
    }
    let mut methods: Vec<Method> = spec
        .split(',')
        .map(|m| m.trim().parse::<Method>())
        .collect::<Result<_, _>>()?;
    methods.sort();
    methods.dedup();
    if methods.is_empty() {
        return Err("no methods given".into());
    }
    Ok(methods)
}

pub fn parse_algebras(spec: &str) -> Result<Vec<AlgebraId>, String> {
    if spec.eq_ignore_ascii_case("all") {
        return Ok(AlgebraId::ALL.to_vec());
    }
    let mut algs: Vec<AlgebraId> = spec
        .split(',')
        .map(|a| a.trim().parse::<AlgebraId>().map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    algs.sort();
    algs.dedup();
    Ok(algs)
}

#[derive(Serialize)]
struct ReportJson {
    algebra: &'static str,
    q: u64,
    k: u64,
    method: &'static str,
    cardinality: u64,
}

impl From<&ValueSetReport> for ReportJson {
    fn from(r: &ValueSetReport) -> Self {
        ReportJson {
            algebra: r.algebra.name(),
            q: r.q,
            k: r.k,
            method: r.method.name(),
            cardinality: r.cardinality,
        }
    }
}

fn cmd_count(a: &CountArgs, sinks: &mut Sinks<'_>) -> CmdResult {
    let (alg, q, k) = a.field.resolve()?;
    let spec = match (&a.methods, &a.methods_flag) {
        (None, None) => "all".to_string(),
        _ => pick(&a.methods, &a.methods_flag, "methods")?,
    };
    let methods = parse_methods(&spec)?;
    let reports: Vec<ValueSetReport> = methods
        .iter()
        .map(|&m| value_set::count(alg, q, k, m))
        .collect::<Result<_, _>>()
        .map_err(lib_err)?;
    let text = match a.format {
        Format::Json => {
            let rows: Vec<ReportJson> = reports.iter().map(ReportJson::from).collect();
            serde_json::to_string(&rows).expect("plain data serializes") + "\n"
        }
        Format::Csv => {
            let mut s = String::from("algebra,q,k,method,cardinality\n");
            for r in &reports {
                let _ = writeln!(s, "{},{},{},{},{}", r.algebra, r.q, r.k, r.method, r.cardinality);
            }
            s
        }
        Format::Text => reports
            .iter()
            .map(|r| format!("{} q={} k={} {} {}\n", r.algebra, r.q, r.k, r.method, r.cardinality))
            .collect(),
    };
    sinks.out.write_all(text.as_bytes()).map_err(io_err)?;
    let agree = reports.windows(2).all(|w| w[0].cardinality == w[1].cardinality);
    if agree {
        Ok(EXIT_OK)
    } else {
        writeln!(sinks.err, "methods disagree").map_err(io_err)?;
        Ok(EXIT_MISMATCH)
    }
}

/// One cell of a verification sweep. A method that is disabled or outside its
/// size bound leaves its column empty.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyRow {
    pub q: u64,
    pub k: u64,
    pub algebra: &'static str,
    pub formula: Option<u64>,
    pub exhaustive: Option<u64>,
    pub oracle: Option<u64>,
    pub agree: bool,
    /// Set when an enabled method failed outright.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

fn within_bounds(method: Method, alg: AlgebraId, q: u64) -> bool {
    match method {
        Method::Formula => true,
        Method::Exhaustive if alg.is_bivariate() => q <= value_set::MAX_BIVARIATE_Q,
        Method::Exhaustive => q <= value_set::MAX_UNIVARIATE_Q,
        Method::TorusOracle => q <= torus::MAX_ORACLE_Q,
    }
}

pub fn verify_cell(alg: AlgebraId, q: u64, k: u64, methods: &[Method]) -> VerifyRow {
    let mut row = VerifyRow {
        q,
        k,
        algebra: alg.name(),
        formula: None,
        exhaustive: None,
        oracle: None,
        agree: true,
        error: None,
    };
    for &m in methods.iter().filter(|&&m| within_bounds(m, alg, q)) {
        match value_set::count(alg, q, k, m) {
            Ok(r) => {
                let slot = match m {
                    Method::Formula => &mut row.formula,
                    Method::Exhaustive => &mut row.exhaustive,
                    Method::TorusOracle => &mut row.oracle,
                };
                *slot = Some(r.cardinality);
            }
            Err(e) => {
                row.error = Some(format!("{m}: {e}"));
                row.agree = false;
            }
        }
    }
    let values: Vec<u64> = [row.formula, row.exhaustive, row.oracle].into_iter().flatten().collect();
    row.agree &= values.windows(2).all(|w| w[0] == w[1]);
    row
}

pub fn render_verify(rows: &[VerifyRow], format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(rows).expect("plain data serializes") + "\n",
        Format::Csv | Format::Text => {
            let cell = |v: Option<u64>| v.map(|v| v.to_string()).unwrap_or_default();
            let mut s = String::from("q,k,algebra,formula,exhaustive,oracle,agree\n");
            for r in rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    r.q,
                    r.k,
                    r.algebra,
                    cell(r.formula),
                    cell(r.exhaustive),
                    cell(r.oracle),
                    r.agree
                );
            }
            s
        }
    }
}

fn cmd_verify(a: &VerifyArgs, sinks: &mut Sinks<'_>) -> CmdResult {
    let algebras = parse_algebras(&a.algebra)?;
    let methods = parse_methods(&a.methods)?;
    let qs = match a.q {
        Some(q) if prime_power(q).is_some() => vec![q],
        Some(q) => return Err(Error::NotPrimePower(q).to_string()),
        None => prime_powers(2, a.qmax),
    };
    let ks: Vec<u64> = match a.k {
        Some(0) => return Err(Error::ZeroDegree.to_string()),
        Some(k) => vec![k],
        None => (1..=a.kmax).collect(),
    };
    if qs.is_empty() || ks.is_empty() {
        return Err("empty grid".into());
    }
    let mut cells = Vec::with_capacity(algebras.len() * qs.len() * ks.len());
    for &alg in &algebras {
        for &q in &qs {
            cells.extend(ks.iter().map(|&k| (alg, q, k)));
        }
    }
    let mut rows: Vec<VerifyRow> = cells
        .par_iter()
        .map(|&(alg, q, k)| verify_cell(alg, q, k, &methods))
        .collect();
    rows.sort_by(|x, y| (x.q, x.k, x.algebra).cmp(&(y.q, y.k, y.algebra)));
    emit(&render_verify(&rows, a.format), &a.out, sinks)?;
    let mismatched = rows.iter().filter(|r| !r.agree).count();
    for r in rows.iter().filter(|r| r.error.is_some()) {
        writeln!(sinks.err, "{} q={} k={}: {}", r.algebra, r.q, r.k, r.error.as_deref().unwrap_or("")).map_err(io_err)?;
    }
    writeln!(sinks.err, "checked {}, mismatched {mismatched}", rows.len()).map_err(io_err)?;
    Ok(if mismatched == 0 { EXIT_OK } else { EXIT_MISMATCH })
}

fn cmd_oracle(a: &OracleArgs, sinks: &mut Sinks<'_>) -> CmdResult {
    let (alg, q, k) = a.field.resolve()?;
    let n = torus::oracle_count(alg, q, k).map_err(lib_err)?;
    writeln!(sinks.out, "{alg} q={q} k={k} oracle {n}").map_err(io_err)?;
    if !a.audit {
        return Ok(EXIT_OK);
    }
    let lines = torus::audit(alg, q, k).map_err(lib_err)?;
    let mut failed = 0;
    for l in &lines {
        let mark = if l.holds() { "ok" } else { "MISMATCH" };
        failed += usize::from(!l.holds());
        writeln!(sinks.out, "{:<20} observed {:>6}  closed form {:>8}  {mark}", l.label, l.observed, l.predicted.to_string())
            .map_err(io_err)?;
    }
    let formula = formulas::cardinality(alg, q, k).map_err(lib_err)?;
    if formula != n {
        failed += 1;
        writeln!(sinks.err, "oracle {n} differs from formula {formula}").map_err(io_err)?;
    }
    Ok(if failed == 0 { EXIT_OK } else { EXIT_MISMATCH })
}

fn class_name(c: PointClass) -> &'static str {
    match c {
        PointClass::Interior => "interior",
        PointClass::Edge => "edge",
        PointClass::Corner => "corner",
    }
}

fn cmd_classify(a: &ClassifyArgs, sinks: &mut Sinks<'_>) -> CmdResult {
    if *a.sigma.denom() == 0 || *a.tau.denom() == 0 {
        return Err("zero denominator".into());
    }
    let p = TorusPoint::new(a.sigma, a.tau);
    let g = orbit_group(a.algebra);
    let c = canonicalize(&p, &g);
    let class = torus::classify_point(&p, a.algebra);
    writeln!(
        sinks.out,
        "{} point {p} canonical {c} stabilizer {} {}",
        a.algebra,
        stabilizer_size(&c, &g),
        class_name(class)
    )
    .map_err(io_err)?;
    Ok(EXIT_OK)
}
