//! Command-line surface. Every library operation sits behind exactly one
//! subcommand (see [`COMMAND_TABLE`]); results go to standard output as
//! compact JSON with a fixed key order.
//!
//! Exit codes: 0 success, 1 domain error, 2 numerical non-convergence,
//! 64 usage error, 65 malformed input.

use std::collections::BTreeMap;
use std::io::Read;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::albanese::{self, AlbaneseError};
use crate::hodge::{self, HodgeError, NilpotentEndo, WeightFiltrationGeneric};
use crate::json::{complex_pair, parse_complex, parse_complex_str, ComplexParseError};
use crate::linalg::{Field, Matrix};
use crate::malcev::{self, ExactSeries, GroupWord, MalcevError};
use crate::paths::{self, Anchor, PathError, Puncture, QuadratureConfig, TruncatedSeries};
use crate::selftest::{self, SuiteLevel};
use crate::words::{self, parse_rational, FormCombination, ShuffleElement, SymbolicFormTable, Word, WordError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;

/// Environment variable overriding the default absolute tolerance.
pub const TOL_ENV: &str = "ALBLAB_TOL";

/// `(subcommand, library operation)` for every command.
pub const COMMAND_TABLE: &[(&str, &str)] = &[
    ("bar basis", "words::word_basis"),
    ("bar shuffle", "words::shuffle_product"),
    ("bar coproduct", "words::deconcat_coproduct"),
    ("bar differential", "words::bar_differential"),
    ("ii path", "paths::make_path"),
    ("ii eval", "paths::iterated_integral"),
    ("ii signature", "paths::signature"),
    ("ii compose", "paths::compose_signatures"),
    ("ii regularized", "paths::regularized_signature"),
    ("ii monodromy", "paths::monodromy_matrix"),
    ("malcev exp", "malcev::exp_trunc"),
    ("malcev log", "malcev::log_trunc"),
    ("malcev classify", "malcev::classify_coproduct"),
    ("malcev bch", "malcev::bch"),
    ("malcev hall", "malcev::hall_dims"),
    ("malcev group", "malcev::group_element"),
    ("malcev coords", "malcev::malcev_coordinates"),
    ("hodge filtration", "hodge::hodge_filtration_from"),
    ("hodge transversal", "hodge::griffiths_transversal"),
    ("hodge orbit", "hodge::generates_nilpotent_orbit"),
    ("hodge rmf", "hodge::relative_monodromy_filtration"),
    ("hodge chart", "hodge::boundary_chart_point"),
    ("hodge reduce", "hodge::reduce_mod_integral"),
    ("alb map", "albanese::albanese_point"),
    ("alb map --alt", "albanese::albanese_point_alt"),
    ("alb extend", "albanese::extended_albanese"),
    ("alb monodromy", "albanese::monodromy_action"),
    ("alb monodromy --alt", "albanese::monodromy_action_alt"),
    ("alb mhs", "albanese::lie_action_is_mhs_morphism"),
    ("alb differential", "albanese::differential_check"),
    ("selftest", "selftest::run"),
];

#[derive(Debug, Parser)]
#[command(name = "alblab", version, about = "Unipotent periods of the thrice-punctured line")]
struct Cli {
    /// Absolute quadrature tolerance; overrides ALBLAB_TOL.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Truncation level.
    #[arg(long, global = true, default_value_t = 2)]
    level: usize,
    /// Cap on adaptive interval bisections per segment.
    #[arg(long, global = true)]
    max_subdivisions: Option<usize>,
    /// Regularization radii, comma separated and decreasing.
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    epsilons: Option<Vec<f64>>,
    /// Worker threads for batch requests; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    workers: usize,
    /// Batch request file, or `-` for standard input.
    #[arg(long = "json-in")]
    json_in: Option<String>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Words, shuffles and the bar differential.
    #[command(subcommand)]
    Bar(BarCmd),
    /// Iterated integrals and signatures.
    #[command(subcommand)]
    Ii(IiCmd),
    /// Exact truncated series and Malcev coordinates.
    #[command(subcommand)]
    Malcev(MalcevCmd),
    /// Filtrations, orbits and the boundary chart.
    #[command(subcommand)]
    Hodge(HodgeCmd),
    /// The level-2 Albanese map.
    #[command(subcommand)]
    Alb(AlbCmd),
    /// Runs the acceptance suite.
    Selftest {
        #[arg(value_enum, default_value_t = SuiteArg::Quick)]
        suite: SuiteArg,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    Quick,
    Full,
}

#[derive(Debug, Subcommand)]
enum BarCmd {
    /// All words of length at most `--level`.
    Basis,
    /// Shuffle product of two `{word: "p/q"}` maps.
    Shuffle {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Deconcatenation coproduct of a word.
    Coproduct {
        #[arg(long)]
        word: String,
    },
    /// Differential of an iterated integral over a symbolic form table.
    Differential {
        /// A 0/1 word, or form symbols separated by spaces.
        #[arg(long)]
        word: String,
        /// `{"forms": {name: {"degree": p, "d": {name: "p/q"}}}, "wedges": [[a, b, {name: "p/q"}]]}`
        #[arg(long)]
        table: Option<String>,
    },
}

#[derive(Debug, Args)]
struct PathArg {
    /// Path description (JSON).
    #[arg(long)]
    path: String,
}

#[derive(Debug, Subcommand)]
enum IiCmd {
    /// Validates a path and reports its anchors and winding numbers.
    Path(PathArg),
    /// One iterated integral along a path.
    Eval {
        #[arg(long)]
        word: String,
        #[command(flatten)]
        path: PathArg,
    },
    /// Every coefficient up to `--level` along a path.
    Signature(PathArg),
    /// Product of two `{word: [re, im]}` series.
    Compose {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Signature from the tangential base point to `x`.
    Regularized {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value = "")]
        loop_prefix: String,
    },
    /// Integer matrix of a loop at the tangential base point.
    Monodromy {
        #[arg(long = "loop")]
        loop_spec: String,
    },
}

#[derive(Debug, Args)]
struct SeriesArg {
    /// `{word: "p/q"}` map.
    #[arg(long)]
    series: String,
}

#[derive(Debug, Subcommand)]
enum MalcevCmd {
    /// Truncated exponential of a series without constant term.
    Exp(SeriesArg),
    /// Truncated logarithm of a series with constant term 1.
    Log(SeriesArg),
    /// Grouplike, primitive or neither.
    Classify(SeriesArg),
    /// Baker–Campbell–Hausdorff product of two Lie elements.
    Bch {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Lyndon–Hall basis and graded dimensions up to `--level`.
    Hall,
    /// Image of a group word in the truncated tensor algebra.
    Group {
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Malcev coordinates of a group word in the Lyndon–Hall basis.
    Coords {
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
}

#[derive(Debug, Args)]
struct FlagArg {
    /// `alpha,beta,lambda`; exact when every entry is rational.
    #[arg(long = "F", allow_hyphen_values = true)]
    f: String,
}

#[derive(Debug, Args)]
struct OrbitArgs {
    /// `a,b,c` (rationals).
    #[arg(long = "N", allow_hyphen_values = true)]
    n: String,
    #[command(flatten)]
    f: FlagArg,
}

#[derive(Debug, Subcommand)]
enum HodgeCmd {
    /// The flag F⁰ ⊃ F¹ of a point, with its coordinates read back.
    Filtration(FlagArg),
    /// Whether N·F^p lies in F^(p-1).
    Transversal(OrbitArgs),
    /// Whether (N, F) generates a nilpotent orbit.
    Orbit(OrbitArgs),
    /// Relative monodromy filtration of a nilpotent matrix and a weight
    /// filtration, given as per-vector weights or as `{weight: [vectors]}`.
    Rmf {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        weights: String,
    },
    /// Boundary chart point from `q`, `beta`, `lambda`.
    Chart {
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Representative modulo the integer Heisenberg group.
    Reduce {
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
}

#[derive(Debug, Subcommand)]
enum AlbCmd {
    /// Image of `x` reached along the loop prefix then the straight path.
    Map {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, default_value = "")]
        loop_prefix: String,
        /// Use the coordinates of the inverted period matrix.
        #[arg(long)]
        alt: bool,
    },
    /// The extended map in the boundary chart; defined for |x| < 1/2.
    Extend {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
    },
    /// Integer action of a group word on the period matrix.
    Monodromy {
        #[arg(long)]
        word: String,
        /// Report the action in the alternative coordinates.
        #[arg(long)]
        alt: bool,
    },
    /// Compatibility tables of the Lie action with the mixed Hodge structures.
    Mhs,
    /// Finite-difference check of the coordinate differentials on `x0 → x1`.
    Differential {
        #[arg(long, allow_hyphen_values = true)]
        x0: String,
        #[arg(long, allow_hyphen_values = true)]
        x1: String,
        #[arg(long, default_value = "")]
        loop_prefix: String,
        #[arg(long, default_value_t = 1e-4)]
        step: f64,
    },
}

/// Tolerances and level shared by every command.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub quadrature: QuadratureConfig,
    pub level: usize,
    pub workers: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            quadrature: QuadratureConfig::default(),
            level: 2,
            workers: 0,
        }
    }
}

/// Exit code and standard output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutput {
    pub code: i32,
    pub stdout: String,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Data(String),
    Domain(String),
    Numerical(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Data(_) => EXIT_DATA,
            Failure::Domain(_) => EXIT_DOMAIN,
            Failure::Numerical(_) => EXIT_NUMERICAL,
        }
    }

    fn to_json(&self) -> Value {
        let (kind, msg) = match self {
            Failure::Usage(m) => ("usage", m),
            Failure::Data(m) => ("malformed_input", m),
            Failure::Domain(m) => ("domain", m),
            Failure::Numerical(m) => ("numerical", m),
        };
        json!({"error": {"kind": kind, "message": msg}})
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

impl From<ComplexParseError> for Failure {
    fn from(e: ComplexParseError) -> Self {
        Failure::Data(e.to_string())
    }
}

impl From<WordError> for Failure {
    fn from(e: WordError) -> Self {
        match e {
            WordError::MissingForm(_) => Failure::Domain(e.to_string()),
            _ => Failure::Data(e.to_string()),
        }
    }
}

impl From<PathError> for Failure {
    fn from(e: PathError) -> Self {
        match e {
            PathError::NotConverged(_) | PathError::NotStabilized { .. } | PathError::NonIntegral { .. } => {
                Failure::Numerical(e.to_string())
            }
            PathError::InvalidSpec(_) | PathError::Complex(_) => Failure::Data(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

impl From<MalcevError> for Failure {
    fn from(e: MalcevError) -> Self {
        match e {
            MalcevError::BadGroupWord(_) | MalcevError::Word(_) => Failure::Data(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

impl From<HodgeError> for Failure {
    fn from(e: HodgeError) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<AlbaneseError> for Failure {
    fn from(e: AlbaneseError) -> Self {
        match e {
            AlbaneseError::Path(p) => p.into(),
            other => Failure::Domain(other.to_string()),
        }
    }
}

type Outcome = Result<Value, Failure>;

fn to_value<T: Serialize>(t: &T) -> Outcome {
    Ok(serde_json::to_value(t)?)
}

/// Runs one command line (without the program name), reading batch input
/// from standard input when asked to.
pub fn run_command<I, S>(argv: I) -> CommandOutput
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    run_command_with_input(argv, &mut std::io::stdin())
}

/// As [`run_command`], with an explicit source for `--json-in -`.
pub fn run_command_with_input<I, S>(argv: I, input: &mut dyn Read) -> CommandOutput
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let args: Vec<String> = std::iter::once("alblab".to_string())
        .chain(argv.into_iter().map(Into::into))
        .collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => CommandOutput {
                    code: EXIT_OK,
                    stdout: e.to_string(),
                },
                _ => finish(Err(Failure::Usage(e.to_string()))),
            };
        }
    };
    let cfg = match config_from(&cli) {
        Ok(c) => c,
        Err(f) => return finish(Err(f)),
    };
    if let Some(src) = &cli.json_in {
        return finish(run_batch(src, input, &cfg));
    }
    match cli.command {
        Some(cmd) => finish(dispatch(cmd, &cfg)),
        None => finish(Err(Failure::Usage("no subcommand given".into()))),
    }
}

fn finish(outcome: Outcome) -> CommandOutput {
    let (code, value) = match outcome {
        Ok(v) => (v.get("__exit").and_then(Value::as_i64).unwrap_or(0) as i32, v),
        Err(f) => (f.code(), f.to_json()),
    };
    let value = match value {
        Value::Object(mut m) => {
            m.remove("__exit");
            Value::Object(m)
        }
        v => v,
    };
    CommandOutput {
        code,
        stdout: format!("{value}\n"),
    }
}

fn config_from(cli: &Cli) -> Result<Config, Failure> {
    let mut q = QuadratureConfig::default();
    if let Ok(s) = std::env::var(TOL_ENV) {
        q.abs_tol = s
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{TOL_ENV}={s:?} is not a number")))?;
    }
    if let Some(t) = cli.tol {
        q.abs_tol = t;
    }
    if let Some(m) = cli.max_subdivisions {
        q.max_subdivisions = m;
    }
    if let Some(e) = &cli.epsilons {
        q.regularization_epsilons = e.clone();
    }
    q.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    if cli.level == 0 {
        return Err(Failure::Usage("--level must be at least 1".into()));
    }
    Ok(Config {
        quadrature: q,
        level: cli.level,
        workers: cli.workers,
    })
}

// ---------------------------------------------------------------------------
// Batch mode

/// A request is `{"args": [...]}`; a batch is `{"requests": [request, …]}`
/// or a bare array of requests or argument lists.
fn run_batch(src: &str, input: &mut dyn Read, cfg: &Config) -> Outcome {
    let mut text = String::new();
    if src == "-" {
        input.read_to_string(&mut text).map_err(|e| Failure::Data(e.to_string()))?;
    } else {
        text = std::fs::read_to_string(src).map_err(|e| Failure::Data(format!("{src}: {e}")))?;
    }
    let doc: Value = serde_json::from_str(&text)?;
    let (requests, single) = match &doc {
        Value::Array(items) => (items.clone(), false),
        Value::Object(m) if m.contains_key("requests") => match &m["requests"] {
            Value::Array(items) => (items.clone(), false),
            _ => return Err(Failure::Data("\"requests\" must be an array".into())),
        },
        Value::Object(m) if m.contains_key("args") => (vec![doc.clone()], true),
        _ => return Err(Failure::Data("expected {\"args\": [...]} or {\"requests\": [...]}".into())),
    };
    let argvs = requests
        .iter()
        .map(|r| {
            let args = r.get("args").unwrap_or(r);
            let arr = args.as_array().ok_or_else(|| Failure::Data(format!("request {r} has no argument list")))?;
            arr.iter()
                .map(|a| match a {
                    Value::String(s) => Ok(s.clone()),
                    other => Ok(other.to_string()),
                })
                .collect::<Result<Vec<String>, Failure>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let run_one = |argv: &Vec<String>| -> Value {
        let args: Vec<String> = std::iter::once("alblab".to_string()).chain(argv.iter().cloned()).collect();
        let out = match Cli::try_parse_from(&args) {
            Ok(c) if c.json_in.is_some() => finish(Err(Failure::Usage("batch requests cannot nest".into()))),
            Ok(c) => match (c.command, config_for_request(cfg, &args)) {
                (Some(cmd), Ok(sub)) => finish(dispatch(cmd, &sub)),
                (None, _) => finish(Err(Failure::Usage("no subcommand given".into()))),
                (_, Err(f)) => finish(Err(f)),
            },
            Err(e) => finish(Err(Failure::Usage(e.to_string()))),
        };
        let output: Value = serde_json::from_str(&out.stdout).unwrap_or(Value::String(out.stdout));
        json!({"exit": out.code, "output": output})
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Failure::Usage(e.to_string()))?;
    let results: Vec<Value> = pool.install(|| argvs.par_iter().map(run_one).collect());
    if single {
        let r = results.into_iter().next().expect("one request");
        let code = r["exit"].as_i64().unwrap_or(0);
        let mut out = r["output"].clone();
        if let Value::Object(m) = &mut out {
            m.insert("__exit".into(), json!(code));
        }
        return Ok(out);
    }
    let worst = results.iter().filter_map(|r| r["exit"].as_i64()).find(|&c| c != 0).unwrap_or(0);
    Ok(json!({"results": results, "__exit": worst}))
}

/// Per-request options override the batch-wide ones.
fn config_for_request(base: &Config, args: &[String]) -> Result<Config, Failure> {
    let cli = Cli::try_parse_from(args).map_err(|e| Failure::Usage(e.to_string()))?;
    let mut cfg = base.clone();
    if let Some(t) = cli.tol {
        cfg.quadrature.abs_tol = t;
    }
    if let Some(m) = cli.max_subdivisions {
        cfg.quadrature.max_subdivisions = m;
    }
    if let Some(e) = cli.epsilons {
        cfg.quadrature.regularization_epsilons = e;
    }
    if args.iter().any(|a| a == "--level" || a.starts_with("--level=")) {
        cfg.level = cli.level;
    }
    cfg.quadrature.validate().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(cfg)
}

// ---------------------------------------------------------------------------
// Input helpers

fn parse_json(s: &str) -> Result<Value, Failure> {
    Ok(serde_json::from_str(s)?)
}

/// Complex number from `"re+imi"`, a bare number or a JSON `[re, im]`.
fn complex_arg(s: &str) -> Result<Complex64, Failure> {
    let t = s.trim();
    if t.starts_with('[') {
        return Ok(parse_complex(&parse_json(t)?)?);
    }
    Ok(parse_complex_str(t)?)
}

fn group_word(s: &str) -> Result<GroupWord, Failure> {
    Ok(s.parse::<GroupWord>()?)
}

fn word_arg(s: &str) -> Result<Word, Failure> {
    Ok(s.trim().parse::<Word>()?)
}

fn rational_value(v: &Value) -> Result<BigRational, Failure> {
    match v {
        Value::String(s) => Ok(parse_rational(s)?),
        Value::Number(n) if n.is_i64() => Ok(BigRational::from_integer(n.as_i64().unwrap().into())),
        other => Err(Failure::Data(format!("expected a rational, got {other}"))),
    }
}

fn exact_series(s: &str, level: usize) -> Result<ExactSeries, Failure> {
    let map: BTreeMap<String, String> = serde_json::from_str(s)?;
    Ok(ExactSeries::from_map(&map, level)?)
}

fn float_series(s: &str, level: usize) -> Result<TruncatedSeries, Failure> {
    let raw: BTreeMap<String, Value> = serde_json::from_str(s)?;
    let map = raw
        .iter()
        .map(|(k, v)| Ok((k.clone(), parse_complex(v)?)))
        .collect::<Result<BTreeMap<_, _>, Failure>>()?;
    Ok(TruncatedSeries::from_map(&map, level)?)
}

/// Comma-separated triple; `Ok(Left)` when every entry is rational.
enum Triple {
    Exact([BigRational; 3]),
    Float([Complex64; 3]),
}

fn triple(s: &str) -> Result<Triple, Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Failure::Data(format!("expected three comma-separated entries, got {s:?}")));
    }
    if let Ok(q) = parts.iter().map(|p| parse_rational(p)).collect::<Result<Vec<_>, _>>() {
        let [a, b, c]: [BigRational; 3] = q.try_into().expect("three entries");
        return Ok(Triple::Exact([a, b, c]));
    }
    let z = parts.iter().map(|p| parse_complex_str(p)).collect::<Result<Vec<_>, _>>()?;
    Ok(Triple::Float([z[0], z[1], z[2]]))
}

fn nilpotent(s: &str) -> Result<NilpotentEndo, Failure> {
    match triple(s)? {
        Triple::Exact([a, b, c]) => Ok(NilpotentEndo::new(a, b, c)),
        Triple::Float(_) => Err(Failure::Data(format!("N must have rational entries, got {s:?}"))),
    }
}

/// Entries of exact or floating vectors on the wire.
trait Wire: Field {
    fn wire(&self) -> Value;
}

impl Wire for Complex64 {
    fn wire(&self) -> Value {
        json!(complex_pair(*self))
    }
}

impl Wire for Complex<BigRational> {
    fn wire(&self) -> Value {
        json!([words::format_rational(&self.re), words::format_rational(&self.im)])
    }
}

fn basis_json<K: Wire>(basis: &[Vec<K>]) -> Value {
    Value::Array(basis.iter().map(|v| Value::Array(v.iter().map(Wire::wire).collect())).collect())
}

fn filtration_json<K: Wire>(f: &hodge::HodgeFiltration<K>) -> Value {
    json!({
        "F0": basis_json(f.level(0).basis()),
        "F-1": basis_json(f.level(-1).basis()),
        "F-2": basis_json(f.level(-2).basis()),
    })
}

fn anchor_json(a: Option<Anchor>) -> Value {
    match a {
        None => Value::Null,
        Some(Anchor::Point(z)) => json!({"point": complex_pair(z)}),
        Some(Anchor::Tangential { puncture, vector }) => json!({
            "tangential": {"at": if puncture == Puncture::Zero { 0 } else { 1 }, "vector": complex_pair(vector)}
        }),
    }
}

fn form_table(s: &str) -> Result<SymbolicFormTable, Failure> {
    let doc = parse_json(s)?;
    let combination = |v: Option<&Value>| -> Result<FormCombination, Failure> {
        let mut out = FormCombination::new();
        if let Some(Value::Object(m)) = v {
            for (k, c) in m {
                out.insert(k.clone(), rational_value(c)?);
            }
        }
        Ok(out)
    };
    let mut table = SymbolicFormTable::new();
    let forms = doc
        .get("forms")
        .and_then(Value::as_object)
        .ok_or_else(|| Failure::Data("form table needs a \"forms\" object".into()))?;
    for (name, entry) in forms {
        let degree = entry
            .get("degree")
            .and_then(Value::as_u64)
            .ok_or_else(|| Failure::Data(format!("form {name} needs an integer degree")))?;
        table.insert_form(name, degree as usize, combination(entry.get("d"))?);
    }
    if let Some(wedges) = doc.get("wedges") {
        let list = wedges
            .as_array()
            .ok_or_else(|| Failure::Data("\"wedges\" must be an array".into()))?;
        for w in list {
            let (a, b) = match (w.get(0).and_then(Value::as_str), w.get(1).and_then(Value::as_str)) {
                (Some(a), Some(b)) => (a, b),
                _ => return Err(Failure::Data(format!("wedge entry {w} must be [a, b, {{...}}]"))),
            };
            table.set_wedge(a, b, combination(w.get(2))?)?;
        }
    }
    Ok(table)
}

fn rational_matrix(s: &str) -> Result<Matrix<BigRational>, Failure> {
    let doc = parse_json(s)?;
    let rows = doc.as_array().ok_or_else(|| Failure::Data("matrix must be an array of rows".into()))?;
    let m = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| Failure::Data("matrix rows must be arrays".into()))?
                .iter()
                .map(rational_value)
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Matrix<BigRational>, _>>()?;
    let n = m.len();
    if n == 0 || m.iter().any(|r| r.len() != n) {
        return Err(Failure::Data("matrix must be square and nonempty".into()));
    }
    Ok(m)
}

fn weight_filtration(s: &str, dim: usize) -> Result<WeightFiltrationGeneric, Failure> {
    match parse_json(s)? {
        Value::Array(ws) => {
            let weights = ws
                .iter()
                .map(|w| w.as_i64().ok_or_else(|| Failure::Data(format!("weight {w} is not an integer"))))
                .collect::<Result<Vec<_>, _>>()?;
            if weights.len() != dim {
                return Err(Failure::Data(format!("{} weights for a {dim}-dimensional space", weights.len())));
            }
            Ok(WeightFiltrationGeneric::split_standard(&weights))
        }
        Value::Object(m) => {
            let mut spans = BTreeMap::new();
            for (k, vs) in m {
                let w: i64 = k.parse().map_err(|_| Failure::Data(format!("weight key {k:?} is not an integer")))?;
                let vecs = vs
                    .as_array()
                    .ok_or_else(|| Failure::Data(format!("weight {k} needs a list of vectors")))?
                    .iter()
                    .map(|v| {
                        v.as_array()
                            .ok_or_else(|| Failure::Data("vectors must be arrays".into()))?
                            .iter()
                            .map(rational_value)
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                spans.insert(w, vecs);
            }
            Ok(WeightFiltrationGeneric::from_spans(dim, spans).map_err(HodgeError::from)?)
        }
        other => Err(Failure::Data(format!("weights must be an array or object, got {other}"))),
    }
}

// ---------------------------------------------------------------------------
// Dispatch

fn dispatch(cmd: Command, cfg: &Config) -> Outcome {
    match cmd {
        Command::Bar(c) => bar(c, cfg),
        Command::Ii(c) => ii(c, cfg),
        Command::Malcev(c) => malcev_cmd(c, cfg),
        Command::Hodge(c) => hodge_cmd(c),
        Command::Alb(c) => alb(c, cfg),
        Command::Selftest { suite } => {
            let level = match suite {
                SuiteArg::Quick => SuiteLevel::Quick,
                SuiteArg::Full => SuiteLevel::Full,
            };
            let report = selftest::run(level, &cfg.quadrature);
            let mut v = to_value(&report)?;
            if !report.passed {
                v["__exit"] = json!(EXIT_DOMAIN);
            }
            Ok(v)
        }
    }
}

fn bar(cmd: BarCmd, cfg: &Config) -> Outcome {
    match cmd {
        BarCmd::Basis => to_value(&json!({"level": cfg.level, "words": words::word_basis(cfg.level)})),
        BarCmd::Shuffle { a, b } => {
            let a: ShuffleElement = serde_json::from_str(&a)?;
            let b: ShuffleElement = serde_json::from_str(&b)?;
            to_value(&words::shuffle_product(&a, &b))
        }
        BarCmd::Coproduct { word } => {
            let w = word_arg(&word)?;
            to_value(&words::deconcat_coproduct(&w))
        }
        BarCmd::Differential { word, table } => {
            let table = match table {
                Some(t) => form_table(&t)?,
                None => SymbolicFormTable::punctured_line(),
            };
            let symbols: Vec<String> = if word.contains(' ') || word.chars().any(|c| c != '0' && c != '1') {
                word.split_whitespace().map(str::to_string).collect()
            } else {
                words::form_word_of(&word_arg(&word)?)
            };
            let sum = words::bar_differential(&symbols, &table)?;
            let terms: BTreeMap<String, String> = sum
                .iter()
                .map(|(w, c)| (w.join(" "), words::format_rational(c)))
                .collect();
            to_value(&json!({"word": symbols.join(" "), "differential": terms}))
        }
    }
}

fn ii(cmd: IiCmd, cfg: &Config) -> Outcome {
    let q = &cfg.quadrature;
    match cmd {
        IiCmd::Path(p) => {
            let path = paths::make_path(&parse_json(&p.path)?)?;
            let interior = matches!(path.start(), Some(Anchor::Point(_))) && matches!(path.end(), Some(Anchor::Point(_)));
            let winding = if interior && path.is_closed() {
                let (w0, w1) = paths::winding_numbers(&path, q)?;
                json!([w0, w1])
            } else {
                Value::Null
            };
            to_value(&json!({
                "steps": path.steps().len(),
                "start": anchor_json(path.start()),
                "end": anchor_json(path.end()),
                "closed": path.is_closed(),
                "winding": winding,
            }))
        }
        IiCmd::Eval { word, path } => {
            let path = paths::make_path(&parse_json(&path.path)?)?;
            to_value(&paths::iterated_integral(&word_arg(&word)?, &path, q)?)
        }
        IiCmd::Signature(p) => {
            let path = paths::make_path(&parse_json(&p.path)?)?;
            let (s, err) = paths::signature_with_estimate(&path, cfg.level, q)?;
            to_value(&json!({"level": cfg.level, "coefficients": s, "abs_err_est": err}))
        }
        IiCmd::Compose { a, b } => {
            let a = float_series(&a, cfg.level)?;
            let b = float_series(&b, cfg.level)?;
            to_value(&paths::compose_signatures(&a, &b)?)
        }
        IiCmd::Regularized { x, loop_prefix } => {
            let s = paths::regularized_signature(complex_arg(&x)?, cfg.level, q, &group_word(&loop_prefix)?)?;
            to_value(&json!({"level": cfg.level, "coefficients": s}))
        }
        IiCmd::Monodromy { loop_spec } => {
            let lp = paths::make_path(&parse_json(&loop_spec)?)?;
            let base = paths::regularized_signature(albanese::MONODROMY_BASE_POINT, 2, q, &GroupWord::identity())?;
            monodromy_json(&paths::monodromy_matrix(&lp, &base, q)?)
        }
    }
}

fn monodromy_json(m: &paths::MonodromyMatrix) -> Outcome {
    to_value(&json!({
        "matrix": m.g.matrix(),
        "a": m.g.a,
        "b": m.g.b,
        "c": m.g.c,
        "max_deviation": m.max_deviation,
    }))
}

fn malcev_cmd(cmd: MalcevCmd, cfg: &Config) -> Outcome {
    let level = cfg.level;
    match cmd {
        MalcevCmd::Exp(s) => to_value(&malcev::exp_trunc(&exact_series(&s.series, level)?)?),
        MalcevCmd::Log(s) => to_value(&malcev::log_trunc(&exact_series(&s.series, level)?)?),
        MalcevCmd::Classify(s) => {
            to_value(&json!({"class": malcev::classify_coproduct(&exact_series(&s.series, level)?)}))
        }
        MalcevCmd::Bch { a, b } => {
            to_value(&malcev::bch(&exact_series(&a, level)?, &exact_series(&b, level)?)?)
        }
        MalcevCmd::Hall => {
            let dims = malcev::hall_dims(level)?;
            let total: usize = dims.iter().map(|d| d.dim).sum();
            to_value(&json!({"level": level, "degrees": dims, "total": total}))
        }
        MalcevCmd::Group { word } => to_value(&malcev::group_element(&group_word(&word)?, level)?),
        MalcevCmd::Coords { word } => to_value(&malcev::malcev_coordinates(&group_word(&word)?, level)?),
    }
}

fn with_flag<R>(
    s: &str,
    exact: impl FnOnce(hodge::HodgeFiltration<Complex<BigRational>>) -> R,
    float: impl FnOnce(hodge::HodgeFiltration<Complex64>) -> R,
) -> Result<R, Failure> {
    Ok(match triple(s)? {
        Triple::Exact([a, b, l]) => {
            let z = || BigRational::from_integer(0.into());
            let g = |x: BigRational| hodge::gaussian(x, z());
            exact(hodge::hodge_filtration_from(g(a), g(b), g(l)))
        }
        Triple::Float([a, b, l]) => float(hodge::hodge_filtration_from(a, b, l)),
    })
}

fn hodge_cmd(cmd: HodgeCmd) -> Outcome {
    match cmd {
        HodgeCmd::Filtration(f) => {
            let (exact, v) = with_flag(&f.f, |h| (true, filtration_json(&h)), |h| (false, filtration_json(&h)))?;
            to_value(&json!({"exact": exact, "filtration": v}))
        }
        HodgeCmd::Transversal(a) => {
            let n = nilpotent(&a.n)?;
            let t = with_flag(&a.f.f, |h| hodge::griffiths_transversal(&n, &h), |h| hodge::griffiths_transversal(&n, &h))?;
            to_value(&json!({"transversal": t}))
        }
        HodgeCmd::Orbit(a) => {
            let n = nilpotent(&a.n)?;
            let v = with_flag(
                &a.f.f,
                |h| hodge::generates_nilpotent_orbit(&n, &h),
                |h| hodge::generates_nilpotent_orbit(&n, &h),
            )??;
            to_value(&v)
        }
        HodgeCmd::Rmf { matrix, weights } => {
            let n = rational_matrix(&matrix)?;
            let w = weight_filtration(&weights, n.len())?;
            match hodge::relative_monodromy_filtration(&n, &w).map_err(HodgeError::from)? {
                Some(m) => {
                    let check = hodge::verify_relative_monodromy(&n, &w, &m);
                    to_value(&json!({"exists": true, "filtration": m, "check": check}))
                }
                None => to_value(&json!({"exists": false, "filtration": null})),
            }
        }
        HodgeCmd::Chart { q, beta, lambda } => {
            let y = hodge::BoundaryChartPoint::new(complex_arg(&q)?, complex_arg(&beta)?, complex_arg(&lambda)?)?;
            to_value(&hodge::boundary_chart_point(&y)?)
        }
        HodgeCmd::Reduce { alpha, beta, lambda } => {
            let p = hodge::HeisenbergPoint::new(complex_arg(&alpha)?, complex_arg(&beta)?, complex_arg(&lambda)?);
            let (r, g) = hodge::reduce_mod_integral(&p);
            to_value(&json!({
                "alpha": complex_pair(r.alpha),
                "beta": complex_pair(r.beta),
                "lambda": complex_pair(r.lambda),
                "reduction_matrix": g.matrix(),
            }))
        }
    }
}

fn chart_point_json(y: &hodge::BoundaryChartPoint) -> Outcome {
    to_value(&json!({
        "q": complex_pair(y.q),
        "beta": complex_pair(y.beta),
        "lambda": complex_pair(y.lambda),
        "class": hodge::boundary_chart_point(y)?,
    }))
}

fn alb(cmd: AlbCmd, cfg: &Config) -> Outcome {
    let q = &cfg.quadrature;
    match cmd {
        AlbCmd::Map { x, loop_prefix, alt } => {
            let (x, w) = (complex_arg(&x)?, group_word(&loop_prefix)?);
            let p = if alt {
                albanese::albanese_point_alt(x, &w, q)?
            } else {
                albanese::albanese_point(x, &w, q)?
            };
            to_value(&p)
        }
        AlbCmd::Extend { x } => chart_point_json(&albanese::extended_albanese(complex_arg(&x)?, q)?),
        AlbCmd::Monodromy { word, alt } => {
            let w = group_word(&word)?;
            let m = if alt {
                albanese::monodromy_action_alt(&w, q)?
            } else {
                albanese::monodromy_action(&w, q)?
            };
            monodromy_json(&m)
        }
        AlbCmd::Mhs => {
            let r = albanese::lie_action_is_mhs_morphism();
            to_value(&json!({"passes": r.passes(), "report": r}))
        }
        AlbCmd::Differential { x0, x1, loop_prefix, step } => {
            let samples = albanese::differential_check(
                &group_word(&loop_prefix)?,
                complex_arg(&x0)?,
                complex_arg(&x1)?,
                &[0.25, 0.5, 0.75],
                step,
                q,
            )?;
            let worst = samples.iter().map(|s| s.max_error()).fold(0.0, f64::max);
            to_value(&json!({"samples": samples, "max_error": worst}))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run(args: &[&str]) -> (i32, Value) {
        let out = run_command_with_input(args.iter().copied(), &mut std::io::empty());
        let v = serde_json::from_str(&out.stdout).unwrap_or(Value::String(out.stdout.clone()));
        (out.code, v)
    }

    #[test]
    fn residue_through_the_cli() {
        let (code, v) = run(&["ii", "eval", "--word", "0", "--path", r#"{"loop":"gamma0","turns":1}"#]);
        assert_eq!(code, 0);
        assert!((v["value"][1].as_f64().unwrap() - 2.0 * std::f64::consts::PI).abs() < 1e-9);
        assert!(v["value"][0].as_f64().unwrap().abs() < 1e-9);
    }

    #[test]
    fn orbit_and_extend_examples() {
        let (code, v) = run(&["hodge", "orbit", "--N", "1,1,0", "--F", "0,0,0"]);
        assert_eq!(code, 0);
        assert_eq!(v["generates"], json!(true));
        let (code, v) = run(&["alb", "extend", "--x", "0"]);
        assert_eq!(code, 0);
        assert_eq!(v["q"], json!([0.0, 0.0]));
        assert_eq!(v["beta"], json!([0.0, 0.0]));
        assert_eq!(v["lambda"], json!([0.0, 0.0]));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run(&[]).0, EXIT_USAGE);
        assert_eq!(run(&["ii", "eval", "--word", "0", "--path", "{not json"]).0, EXIT_DATA);
        assert_eq!(run(&["alb", "extend", "--x", "0.7"]).0, EXIT_DOMAIN);
        let (code, v) = run(&["ii", "eval", "--word", "0", "--path", r#"{"waypoints":[0.5, 1.0]}"#]);
        assert_eq!(code, EXIT_DOMAIN, "{v}");
        let (code, _) = run(&["--max-subdivisions", "2", "ii", "eval", "--word", "10", "--path", r#"{"waypoints":[[0.5,0.1],[3,-2],[-2,2]]}"#]);
        assert_eq!(code, EXIT_NUMERICAL);
    }

    #[test]
    fn batch_mode_keeps_order() {
        let req = json!({"requests": [
            {"args": ["malcev", "hall", "--level", "3"]},
            ["alb", "monodromy", "--word", "0"],
            {"args": ["nope"]}
        ]});
        let out = run_command_with_input(["--json-in", "-"], &mut req.to_string().as_bytes());
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["results"][0]["output"]["total"], json!(5));
        assert_eq!(v["results"][1]["output"]["a"], json!(1));
        assert_eq!(v["results"][2]["exit"], json!(EXIT_USAGE));
        assert_eq!(out.code, EXIT_USAGE);
    }

    #[test]
    fn output_is_deterministic() {
        let args = ["alb", "map", "--x", "0.3-0.2i", "--loop-prefix", "0 1"];
        let a = run_command_with_input(args, &mut std::io::empty());
        let b = run_command_with_input(args, &mut std::io::empty());
        assert_eq!(a, b);
    }

    #[test]
    fn command_table_is_a_bijection() {
        let mut ops: Vec<&str> = COMMAND_TABLE.iter().map(|(_, op)| *op).collect();
        let mut cmds: Vec<&str> = COMMAND_TABLE.iter().map(|(c, _)| *c).collect();
        let n = ops.len();
        ops.sort();
        ops.dedup();
        cmds.sort();
        cmds.dedup();
        assert_eq!(ops.len(), n);
        assert_eq!(cmds.len(), n);
        // every table entry parses
        for (cmd, _) in COMMAND_TABLE {
            let mut argv: Vec<&str> = cmd.split(' ').collect();
            argv.push("--help");
            let out = run_command_with_input(argv, &mut std::io::empty());
            assert_eq!(out.code, 0, "{cmd}");
        }
    }
}
