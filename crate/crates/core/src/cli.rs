//! Command-line front end. Every report is a JSON envelope holding the tool
//! version, the fully resolved configuration and the result.

use std::fs;
use std::io::{BufReader, Write};
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dashu::integer::UBig;
use dashu::rational::RBig;
use serde::Serialize;
use serde_json::{json, Value};

use crate::approx::{approximate, verify_approximation, ApproximationRequest};
use crate::census::{self, collision_report, growth_fit, Census, CensusOptions};
use crate::compositions::{self, PartSet};
use crate::error::{Error, Result};
use crate::height::{ln_ubig, RationalPoint};
use crate::semigroup::{
    find_composition_collision, mersenne_degrees, count_words_with_degree_at_most, Generator, GeneratorSet,
    GeneratorSetSpec, DEFAULT_DEGREE_CAP,
};
use crate::solver::{self, SolverOptions};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "orbitex", version, about = "Orbit counting for semigroups of unicritical polynomials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Working precision in decimal digits.
    #[arg(long, global = true, env = "ORBITEX_PRECISION", default_value_t = solver::DEFAULT_DIGITS)]
    pub precision: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Bracket the orbit growth exponent.
    Exponents(ExponentArgs),
    /// Enumerate an orbit up to one or more height bounds.
    Census(CensusArgs),
    /// Count restricted compositions.
    Compositions(CompositionArgs),
    /// Rational sandwich of the log-degrees.
    Approx(ApproxArgs),
    /// Look for compositional relations among short words.
    Freeness(FreenessArgs),
    /// Exponent bracket and census in one report.
    Report(ReportArgs),
}

#[derive(Args, Debug, Clone)]
pub struct GeneratorArgs {
    /// `mersenne` or a comma-separated list of degrees.
    #[arg(long, default_value = "mersenne")]
    pub degrees: String,
    /// Shared constant c of the maps z^d + c.
    #[arg(long, default_value = "1")]
    pub constant: String,
    /// Generator-set JSON file; overrides --degrees and --constant.
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct ExponentArgs {
    #[command(flatten)]
    pub generators: GeneratorArgs,
    /// Lower bound for every unlisted degree, e.g. 1e26.
    #[arg(long)]
    pub tail: Option<String>,
    /// Ignore the tail bound that comes with `mersenne`.
    #[arg(long)]
    pub no_tail: bool,
    #[arg(long, default_value_t = 1e-5)]
    pub delta: f64,
    /// Target width of each exponent endpoint.
    #[arg(long, default_value_t = solver::DEFAULT_PRECISION)]
    pub tolerance: f64,
    /// Common denominator to use instead of the default.
    #[arg(long)]
    pub denominator: Option<String>,
    /// Base point for the explicit constants.
    #[arg(long, default_value = "5")]
    pub point: String,
    #[arg(long, default_value_t = solver::DEFAULT_EPS_PRIME)]
    pub eps_prime: f64,
}

#[derive(Args, Debug, Clone)]
pub struct CensusArgs {
    #[command(flatten)]
    pub generators: GeneratorArgs,
    #[arg(long, default_value = "5")]
    pub point: String,
    /// Height bounds, strictly increasing.
    #[arg(long, value_delimiter = ',', required = true)]
    pub bound: Vec<String>,
    #[arg(long, default_value_t = census::DEFAULT_MAX_ENTRIES)]
    pub max_entries: usize,
    #[arg(long)]
    pub allow_partial: bool,
    /// Write the census for the largest bound as JSON lines.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Read a census written by --cache instead of enumerating.
    #[arg(long)]
    pub reload: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct CompositionArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub parts: Vec<u64>,
    #[arg(long, default_value_t = 20)]
    pub max_n: u64,
    /// With --r, also report the cumulative bounds.
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub r: Option<f64>,
}

#[derive(Args, Debug, Clone)]
pub struct ApproxArgs {
    #[command(flatten)]
    pub generators: GeneratorArgs,
    #[arg(long, default_value_t = 1e-2)]
    pub delta: f64,
    #[arg(long)]
    pub denominator: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct FreenessArgs {
    #[command(flatten)]
    pub generators: GeneratorArgs,
    #[arg(long, default_value_t = 3)]
    pub max_len: usize,
    /// Indices of generators to replace by −(z^d + c).
    #[arg(long, value_delimiter = ',')]
    pub negate: Vec<usize>,
    #[arg(long, default_value_t = DEFAULT_DEGREE_CAP)]
    pub degree_cap: usize,
}

#[derive(Args, Debug, Clone)]
pub struct ReportArgs {
    #[command(flatten)]
    pub exponents: ExponentArgs,
    #[arg(long, value_delimiter = ',', default_value = "1e20,1e50,1e100,1e200")]
    pub bound: Vec<String>,
    #[arg(long, default_value_t = census::DEFAULT_MAX_ENTRIES)]
    pub max_entries: usize,
}

/// A finished report in both renderings.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub json: Value,
    pub csv: Option<String>,
}

impl Report {
    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Json => Ok(serde_json::to_string_pretty(&self.json)? + "\n"),
            Format::Csv => self
                .csv
                .clone()
                .ok_or_else(|| Error::InvalidConfig("this command has no CSV form; use --format json".into())),
        }
    }
}

/// Parses `123`, `1e26` or `2.5e3` into an exact integer.
pub fn parse_big(s: &str) -> Result<UBig> {
    let t = s.trim().replace('_', "");
    let bad = || Error::InvalidConfig(format!("{s:?} is not a non-negative integer"));
    let (mantissa, exp) = match t.split_once(['e', 'E']) {
        Some((m, e)) => (m.to_string(), e.parse::<i64>().map_err(|_| bad())?),
        None => (t.clone(), 0),
    };
    let (int_part, frac) = mantissa.split_once('.').unwrap_or((&mantissa, ""));
    if int_part.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !(int_part.chars().all(|c| c.is_ascii_digit()) && frac.chars().all(|c| c.is_ascii_digit())) {
        return Err(bad());
    }
    let digits = UBig::from_str(&format!("{int_part}{frac}")).map_err(|_| bad())?;
    let shift = exp - frac.len() as i64;
    if shift >= 0 {
        Ok(digits * UBig::from(10u8).pow(shift as usize))
    } else {
        let den = UBig::from(10u8).pow((-shift) as usize);
        if &digits % &den != UBig::ZERO {
            return Err(Error::InvalidConfig(format!("{s:?} is not an integer")));
        }
        Ok(digits / den)
    }
}

fn parse_point(s: &str) -> Result<RationalPoint> {
    s.parse().map_err(|e: Error| Error::InvalidConfig(format!("bad point {s:?}: {e}")))
}

fn parse_constant(s: &str) -> Result<RBig> {
    match parse_point(s)? {
        RationalPoint::Finite(r) => Ok(r),
        RationalPoint::Infinity => Err(Error::InvalidConfig("constant must be finite".into())),
    }
}

/// Degrees, shared constant and optional tail bound.
#[derive(Clone, Debug)]
struct ResolvedSet {
    label: String,
    degrees: Vec<UBig>,
    constant: RBig,
    tail: Option<UBig>,
}

impl ResolvedSet {
    fn build(&self) -> Result<GeneratorSet> {
        GeneratorSet::with_shared_constant(&self.degrees, self.constant.clone())
    }

    fn config(&self) -> Value {
        json!({
            "label": self.label,
            "degrees": self.degrees.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
            "constant": constant_string(&self.constant),
            "tail_bound": self.tail.as_ref().map(|t| t.to_string()),
        })
    }
}

fn constant_string(c: &RBig) -> String {
    RationalPoint::Finite(c.clone()).to_string()
}

fn resolve_set(g: &GeneratorArgs) -> Result<ResolvedSet> {
    if let Some(path) = &g.spec {
        let text = fs::read_to_string(path)?;
        let spec = GeneratorSetSpec::from_json(&text).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))?;
        return Ok(ResolvedSet {
            label: path.display().to_string(),
            degrees: spec.degrees.clone(),
            constant: spec.constant()?,
            tail: spec.tail_bound()?,
        });
    }
    let constant = parse_constant(&g.constant)?;
    if g.degrees.trim().eq_ignore_ascii_case("mersenne") {
        let m = mersenne_degrees();
        return Ok(ResolvedSet { label: "mersenne".into(), degrees: m.primes, constant, tail: Some(m.tail_bound) });
    }
    let degrees = g.degrees.split(',').map(parse_big).collect::<Result<Vec<_>>>()?;
    if degrees.is_empty() {
        return Err(Error::InvalidConfig("no degrees given".into()));
    }
    Ok(ResolvedSet { label: g.degrees.clone(), degrees, constant, tail: None })
}

fn parse_bounds(list: &[String]) -> Result<Vec<UBig>> {
    let bounds = list.iter().map(|s| parse_big(s)).collect::<Result<Vec<_>>>()?;
    if bounds.is_empty() {
        return Err(Error::InvalidConfig("at least one bound is required".into()));
    }
    if bounds.iter().any(|b| *b == UBig::ZERO) {
        return Err(Error::InvalidConfig("bounds must be positive".into()));
    }
    if bounds.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidConfig("bounds must be strictly increasing".into()));
    }
    Ok(bounds)
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!("--{name} must be positive, got {x}")))
    }
}

fn envelope(command: &str, config: Value, result: Value) -> Value {
    json!({ "orbitex_version": VERSION, "command": command, "config": config, "result": result })
}

pub fn run(cli: &Cli) -> Result<Report> {
    if cli.precision < 10 {
        return Err(Error::InvalidConfig(format!("--precision {} is below 10 digits", cli.precision)));
    }
    match &cli.command {
        Command::Exponents(a) => run_exponents(a, cli.precision),
        Command::Census(a) => run_census(a),
        Command::Compositions(a) => run_compositions(a),
        Command::Approx(a) => run_approx(a, cli.precision),
        Command::Freeness(a) => run_freeness(a),
        Command::Report(a) => run_report(a, cli.precision),
    }
}

struct ExponentRun {
    config: Value,
    result: Value,
    csv: String,
}

fn exponents_inner(a: &ExponentArgs, digits: u32) -> Result<ExponentRun> {
    positive("delta", a.delta)?;
    positive("tolerance", a.tolerance)?;
    let mut set = resolve_set(&a.generators)?;
    if let Some(t) = &a.tail {
        set.tail = Some(parse_big(t)?);
    }
    if a.no_tail {
        set.tail = None;
    }
    let denominator = a.denominator.as_deref().map(parse_big).transpose()?;
    let point = parse_point(&a.point)?;
    let opts = SolverOptions { digits, precision: a.tolerance, denominator: denominator.clone() };
    let config = json!({
        "generators": set.config(),
        "delta": a.delta,
        "precision_digits": digits,
        "tolerance": a.tolerance,
        "denominator": denominator.as_ref().map(|u| u.to_string()),
        "point": point.to_string(),
        "eps_prime": a.eps_prime,
    });

    let bracket = solver::exponent_bounds(&set.degrees, set.tail.as_ref(), a.delta, &opts)?;
    let mut csv = format!("{}\n{}\n", solver::ExponentBracket::CSV_HEADER, bracket.csv_row(&csv_label(&set.label, set.tail.is_some()), set.degrees.len()));
    let tail_free = match set.tail {
        Some(_) => {
            let b = solver::exponent_bounds(&set.degrees, None, a.delta, &opts)?;
            csv.push_str(&b.csv_row(&csv_label(&set.label, false), set.degrees.len()));
            csv.push('\n');
            Some(b)
        }
        None => None,
    };
    let oracle = solver::direct_exponent_oracle(&set.degrees, set.tail.as_ref())?;

    let logs: Vec<f64> = set.degrees.iter().map(ln_ubig).collect();
    let delta_t = solver::discreteness_constant(&logs)?;
    let diag = solver::c_t_bound(&logs, delta_t)?;
    let reals: Vec<_> = set.degrees.iter().cloned().map(crate::approx::PositiveReal::LogOf).collect();
    let finite = tail_free.as_ref().unwrap_or(&bracket);
    let diagnostics = json!({
        "constants": diag,
        "gap_bound": solver::gap_bound(a.delta, &diag).ok(),
        "root_lower_bound_holds": solver::root_lower_bound_holds(&reals, finite, &diag),
    });

    let gens = set.build()?;
    let tele = gens.telescoping_constants();
    let h_p = point.weil_height()?.log_height;
    let constants = solver::explicit_constants(h_p, tele.b_s, a.eps_prime, &bracket).ok();

    let result = json!({
        "bracket": bracket,
        "tail_free_bracket": tail_free,
        "oracle": oracle,
        "diagnostics": diagnostics,
        "telescoping": tele,
        "explicit_constants": constants,
    });
    Ok(ExponentRun { config, result, csv })
}

fn csv_label(label: &str, tail: bool) -> String {
    let l = label.replace(',', " ");
    if tail {
        format!("{l} (tail)")
    } else {
        l
    }
}

fn run_exponents(a: &ExponentArgs, digits: u32) -> Result<Report> {
    let r = exponents_inner(a, digits)?;
    Ok(Report { json: envelope("exponents", r.config, r.result), csv: Some(r.csv) })
}

struct CensusRun {
    config: Value,
    result: Value,
    csv: String,
}

fn census_inner(
    set: &ResolvedSet,
    point: &RationalPoint,
    bounds: &[UBig],
    opts: &CensusOptions,
    cache: Option<&PathBuf>,
    reload: Option<&PathBuf>,
) -> Result<CensusRun> {
    let gens = set.build()?;
    let largest = bounds.last().expect("non-empty");
    let full = match reload {
        Some(path) => {
            let c = Census::read_jsonl(&gens, BufReader::new(fs::File::open(path)?))?;
            if c.base_point != *point {
                return Err(Error::InvalidConfig(format!("cache is for base point {}, not {point}", c.base_point)));
            }
            if c.bound < *largest {
                return Err(Error::InvalidConfig(format!("cache bound {} is below {largest}", c.bound)));
            }
            c
        }
        None => census::enumerate_with(&gens, point, largest, opts)?,
    };
    if let Some(path) = cache {
        let mut f = std::io::BufWriter::new(fs::File::create(path)?);
        full.restrict(largest)?.write_jsonl(&gens, &mut f)?;
        f.flush()?;
    }
    let tele = gens.telescoping_constants();
    let h_p = point.weil_height()?.log_height;
    let mut rows = Vec::new();
    let mut censuses = Vec::new();
    let mut csv = String::from("bound,point_count,function_count,max_multiplicity,partial,word_lower,word_upper\n");
    for b in bounds {
        let c = full.restrict(b)?;
        let report = collision_report(&c);
        let lb = ln_ubig(b);
        let sandwich = (h_p > tele.b_s).then(|| {
            let lo = count_words_with_degree_at_most(&set.degrees, lb / (h_p + tele.b_s));
            let hi = count_words_with_degree_at_most(&set.degrees, lb / (h_p - tele.b_s));
            (lo, hi)
        });
        csv.push_str(&format!(
            "{b},{},{},{},{},{},{}\n",
            c.point_count,
            c.function_count,
            report.max_multiplicity,
            c.partial,
            sandwich.as_ref().map(|s| s.0.to_string()).unwrap_or_default(),
            sandwich.as_ref().map(|s| s.1.to_string()).unwrap_or_default(),
        ));
        rows.push(json!({
            "bound": b.to_string(),
            "point_count": c.point_count.to_string(),
            "function_count": c.function_count.to_string(),
            "collisions": report,
            "partial": c.partial,
            "word_degree_sandwich": sandwich.map(|(lo, hi)| json!({
                "lower": lo.to_string(),
                "upper": hi.to_string(),
                "contains_function_count": lo <= c.function_count && c.function_count <= hi,
            })),
        }));
        censuses.push(c);
    }
    let fit = if censuses.len() >= 4 && censuses.iter().all(|c| c.point_count > UBig::ZERO) {
        Some(growth_fit(&censuses)?)
    } else {
        None
    };
    let oracle = solver::direct_exponent_oracle(&set.degrees, None).ok().map(|o| o.b);
    let config = json!({
        "generators": set.config(),
        "point": point.to_string(),
        "bounds": bounds.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
        "max_entries": opts.max_entries,
        "allow_partial": opts.allow_partial,
    });
    let result = json!({
        "mode": full.mode,
        "words_evaluated": full.words_evaluated,
        "telescoping": tele,
        "censuses": rows,
        "growth_fit": fit,
        "oracle_exponent": oracle,
    });
    Ok(CensusRun { config, result, csv })
}

fn run_census(a: &CensusArgs) -> Result<Report> {
    let set = resolve_set(&a.generators)?;
    let point = parse_point(&a.point)?;
    let bounds = parse_bounds(&a.bound)?;
    if a.max_entries == 0 {
        return Err(Error::InvalidConfig("--max-entries must be positive".into()));
    }
    let opts = CensusOptions { max_entries: a.max_entries, allow_partial: a.allow_partial };
    let r = census_inner(&set, &point, &bounds, &opts, a.cache.as_ref(), a.reload.as_ref())?;
    Ok(Report { json: envelope("census", r.config, r.result), csv: Some(r.csv) })
}

fn run_compositions(a: &CompositionArgs) -> Result<Report> {
    let set = PartSet::new(&a.parts).map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let table = compositions::count_table(&set, a.max_n)?;
    let root = if set.len() >= 2 { Some(compositions::dominant_root(&set)?) } else { None };
    let asymptotic = |n: u64| -> Option<f64> {
        if set.gcd() == 1 {
            compositions::count_asymptotic(&set, n).ok()
        } else {
            None
        }
    };
    let mut rows = Vec::new();
    let mut csv = String::from("n,count,cumulative,asymptotic\n");
    let mut cumulative = UBig::ZERO;
    for (n, a_n) in table.iter().enumerate() {
        cumulative += a_n;
        let asy = asymptotic(n as u64);
        csv.push_str(&format!("{n},{a_n},{cumulative},{}\n", asy.map(|x| format!("{x:.6}")).unwrap_or_default()));
        rows.push(json!({
            "n": n,
            "count": a_n.to_string(),
            "cumulative": cumulative.to_string(),
            "asymptotic": asy,
        }));
    }
    let bounds = match (a.epsilon, a.r) {
        (Some(eps), Some(r)) => Some(compositions::cumulative_bounds(&set, r, eps)?),
        (None, None) => None,
        _ => return Err(Error::InvalidConfig("--epsilon and --r go together".into())),
    };
    let config = json!({ "parts": set.parts(), "max_n": a.max_n, "epsilon": a.epsilon, "r": a.r });
    let result = json!({
        "gcd": set.gcd(),
        "dominant_root": root,
        "table": rows,
        "cumulative_bounds": bounds,
    });
    Ok(Report { json: envelope("compositions", config, result), csv: Some(csv) })
}

fn run_approx(a: &ApproxArgs, digits: u32) -> Result<Report> {
    positive("delta", a.delta)?;
    let set = resolve_set(&a.generators)?;
    let mut req = ApproximationRequest::logs_of(&set.degrees, a.delta).with_digits(digits);
    if let Some(d) = &a.denominator {
        req = req.with_denominator(parse_big(d)?);
    }
    let e = approximate(&req)?;
    let v = verify_approximation(&req.reals, a.delta, &e)?;
    let mut csv = String::from("real,lower,upper,u\n");
    for (i, t) in req.reals.iter().enumerate() {
        csv.push_str(&format!("{t},{},{},{}\n", e.lower[i], e.upper[i], e.u));
    }
    let config = json!({
        "generators": set.config(),
        "delta": a.delta,
        "precision_digits": digits,
        "denominator": req.denominator.as_ref().map(|u| u.to_string()),
    });
    let result = json!({ "exponent_set": e, "verification": v });
    Ok(Report { json: envelope("approx", config, result), csv: Some(csv) })
}

fn run_freeness(a: &FreenessArgs) -> Result<Report> {
    let set = resolve_set(&a.generators)?;
    if let Some(&i) = a.negate.iter().find(|&&i| i >= set.degrees.len()) {
        return Err(Error::InvalidConfig(format!("--negate index {i} is out of range")));
    }
    let gens = set
        .degrees
        .iter()
        .enumerate()
        .map(|(i, d)| {
            if a.negate.contains(&i) {
                Generator::negated(d.clone(), set.constant.clone())
            } else {
                Generator::new(d.clone(), set.constant.clone())
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let gens = GeneratorSet::new(gens)?;
    let r = find_composition_collision(&gens, a.max_len, a.degree_cap)?;
    let collision = r.collision.as_ref().map(|(x, y)| json!([x.indices(), y.indices()]));
    let mut negate = a.negate.clone();
    negate.sort_unstable();
    negate.dedup();
    let config = json!({
        "generators": set.config(),
        "max_len": a.max_len,
        "negate": negate,
        "degree_cap": a.degree_cap,
    });
    let result = json!({
        "words_checked": r.words_checked,
        "collision": collision,
        "free_up_to_max_len": r.collision.is_none(),
    });
    let csv = format!(
        "words_checked,free,collision\n{},{},{}\n",
        r.words_checked,
        r.collision.is_none(),
        r.collision.as_ref().map(|(x, y)| format!("{:?} = {:?}", x.indices(), y.indices()).replace(',', " ")).unwrap_or_default()
    );
    Ok(Report { json: envelope("freeness", config, result), csv: Some(csv) })
}

fn run_report(a: &ReportArgs, digits: u32) -> Result<Report> {
    let e = exponents_inner(&a.exponents, digits)?;
    let mut set = resolve_set(&a.exponents.generators)?;
    set.tail = None;
    let point = parse_point(&a.exponents.point)?;
    let bounds = parse_bounds(&a.bound)?;
    let opts = CensusOptions { max_entries: a.max_entries, allow_partial: false };
    let c = census_inner(&set, &point, &bounds, &opts, None, None)?;
    let config = json!({ "exponents": e.config, "census": c.config });
    let result = json!({ "exponents": e.result, "census": c.result });
    Ok(Report { json: envelope("report", config, result), csv: None })
}

/// Runs the CLI on `args` and returns the process exit code. Failures are
/// printed to stderr as a JSON object.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli).and_then(|r| emit(&cli, &r)) {
        Ok(()) => 0,
        Err(e) => {
            let body = json!({ "error": { "kind": e.kind(), "message": e.to_string(), "exit_code": e.exit_code() } });
            eprintln!("{body}");
            e.exit_code()
        }
    }
}

fn emit(cli: &Cli, report: &Report) -> Result<()> {
    let text = report.render(cli.format)?;
    match &cli.output {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}
