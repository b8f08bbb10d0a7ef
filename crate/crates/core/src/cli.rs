//! Command-line surface: catalog verification, classification runs,
//! smoothness certificates and invariant reports.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use crate::action::ActionData;
use crate::catalog::{catalog, find_case, verify_case, CaseReport, CatalogCase, Check};
use crate::classifier::{classify, is_maximal, Classification, ClassifyConfig, VerdictCache, DEFAULT_PRIMES};
use crate::error::{Error, Result};
use crate::graph::{chain_invariants_of, edge_graph, spoon_violations};
use crate::monomial::Monomial;
use crate::simplicity::find_simple_decomposition;
use crate::smooth::{certify_polynomial, is_prime, LargenessConfig, SparsePoly};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "hypersym", version, about = "Diagonal symmetries of smooth hypersurfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check catalog cases (a label, `all`, or a JSON case/data file).
    Verify {
        target: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Re-derive the maximal classes for degree d in n variables.
    Classify {
        #[arg(short = 'd', long = "degree")]
        degree: u32,
        #[arg(short = 'n', long = "vars")]
        vars: usize,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Look for a smoothness certificate for a polynomial file.
    Smooth {
        file: PathBuf,
        /// Primes to try, in order.
        #[arg(long, value_delimiter = ',', default_values_t = [101u64, 211, 307])]
        primes: Vec<u64>,
        #[arg(short = 'n', long = "vars")]
        vars: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print E_S, (s, c) and M-set queries for a data file or catalog label.
    Invariants {
        target: String,
        /// M-set query `A;B` with 1-based variable lists, e.g. `1,3;2`.
        #[arg(long = "m-set")]
        m_set: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    /// Prime bound for the maximality test.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_PRIMES.to_vec())]
    pub primes: Vec<u64>,
    /// Primes used to sample smooth members.
    #[arg(long = "cert-primes", value_delimiter = ',', default_values_t = [101u64, 211, 307])]
    pub cert_primes: Vec<u64>,
    /// Random coefficient vectors per certificate prime.
    #[arg(long, default_value_t = 32)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

impl SearchArgs {
    fn largeness(&self) -> LargenessConfig {
        LargenessConfig { primes: self.cert_primes.clone(), trials: self.trials, ..LargenessConfig::default() }
    }

    fn validate(&self) -> Result<()> {
        for &p in self.primes.iter().chain(&self.cert_primes) {
            if !is_prime(p) {
                return Err(Error::Invalid(format!("{p} is not prime")));
            }
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct RunInfo<'a> {
    version: &'static str,
    command: &'a str,
    seed: u64,
    primes: &'a [u64],
    cert_primes: &'a [u64],
    trials: usize,
}

impl<'a> RunInfo<'a> {
    fn new(command: &'a str, a: &'a SearchArgs) -> Self {
        Self {
            version: env!("CARGO_PKG_VERSION"),
            command,
            seed: a.seed,
            primes: &a.primes,
            cert_primes: &a.cert_primes,
            trials: a.trials,
        }
    }
}

/// Parses arguments and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Verify { target, search } => {
            search.validate()?;
            with_jobs(search.jobs, || cmd_verify(&target, &search))
        }
        Command::Classify { degree, vars, search } => {
            search.validate()?;
            with_jobs(search.jobs, || cmd_classify(degree, vars, &search))
        }
        Command::Smooth { file, primes, vars, out } => cmd_smooth(&file, &primes, vars, out.as_deref()),
        Command::Invariants { target, m_set, out } => cmd_invariants(&target, &m_set, out.as_deref()),
    }
}

fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Invalid(format!("thread pool: {e}")))?;
    pool.install(f)
}

fn write_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(value).expect("reports serialize") + "\n";
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_json(path: &str) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{path}: {e}")))
}

/// A catalog label, a JSON catalog case, or a JSON `ActionData`.
enum Input {
    Case(Box<CatalogCase>),
    Data(Box<ActionData>),
}

fn load_input(target: &str) -> Result<Input> {
    if !Path::new(target).exists() {
        return find_case(target).map(|c| Input::Case(Box::new(c)));
    }
    let value = read_json(target)?;
    if value.get("generators").is_some() {
        let case: CatalogCase = serde_json::from_value(value).map_err(|e| Error::Parse(format!("{target}: {e}")))?;
        return Ok(Input::Case(Box::new(case)));
    }
    let raw: ActionData = serde_json::from_value(value).map_err(|e| Error::Parse(format!("{target}: {e}")))?;
    // Rebuild through the constructor so faithfulness and shapes are checked.
    let data = ActionData::new(
        raw.degree(),
        raw.n_vars(),
        raw.presentation().clone(),
        raw.weights().iter().map(|w| w.iter().map(|&x| x as i64).collect()).collect(),
        raw.target().iter().map(|&x| x as i64).collect(),
    )?;
    Ok(Input::Data(Box::new(data)))
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    run: RunInfo<'a>,
    passed: bool,
    cases: Vec<CaseReport>,
    /// Labels whose canonical keys coincide.
    duplicate_classes: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct DataReport<'a> {
    run: RunInfo<'a>,
    passed: bool,
    generators: String,
    structure: String,
    support: Vec<String>,
    checks: Vec<Check>,
}

fn cmd_verify(target: &str, a: &SearchArgs) -> Result<i32> {
    let cases = if target == "all" {
        catalog()
    } else {
        match load_input(target)? {
            Input::Case(c) => vec![*c],
            Input::Data(data) => return verify_data(&data, a),
        }
    };
    let cfg = a.largeness();
    let reports: Vec<CaseReport> =
        cases.iter().map(|c| verify_case(c, &a.primes, &cfg, a.seed)).collect::<Result<_>>()?;
    let mut duplicate_classes = vec![];
    for (i, r) in reports.iter().enumerate() {
        if reports[..i].iter().any(|q| q.key == r.key) {
            continue;
        }
        let same: Vec<String> = reports[i..].iter().filter(|q| q.key == r.key).map(|q| q.label.clone()).collect();
        if same.len() > 1 {
            duplicate_classes.push(same);
        }
    }
    let passed = reports.iter().all(|r| r.passed());
    for r in &reports {
        let failed = r.failed_checks();
        let status = if failed.is_empty() { "ok".to_string() } else { format!("FAILED: {}", failed.join(", ")) };
        eprintln!("{:<8} {:<14} |S|={:<3} {}", r.label, r.structure_text, r.support.len(), status);
    }
    for group in &duplicate_classes {
        eprintln!("same class: {}", group.join(" = "));
    }
    write_json(&VerifyReport { run: RunInfo::new("verify", a), passed, cases: reports, duplicate_classes }, a.out.as_deref())?;
    Ok(if passed { EXIT_OK } else { EXIT_NEGATIVE })
}

fn verify_data(data: &ActionData, a: &SearchArgs) -> Result<i32> {
    let s = data.invariant_monomials();
    let verdict = VerdictCache::default().verdict(&s, &a.largeness(), a.seed)?;
    let maximal = is_maximal(data, &a.primes, &a.largeness(), a.seed)?;
    let simple = find_simple_decomposition(&s);
    let chain = crate::graph::chain_invariants(data);
    let checks = vec![
        Check { name: "large".into(), passed: verdict.is_large(), detail: format!("{verdict:?}") },
        Check { name: "not simple".into(), passed: simple.is_none(), detail: format!("{simple:?}") },
        Check { name: "maximal".into(), passed: maximal.is_maximal(), detail: format!("{maximal:?}") },
        Check {
            name: "chain invariants".into(),
            passed: chain.is_ok(),
            detail: match &chain {
                Ok(inv) => format!("(s, c) = ({}, {})", inv.s, inv.c),
                Err(e) => e.to_string(),
            },
        },
    ];
    let passed = checks.iter().all(|c| c.passed);
    let report = DataReport {
        run: RunInfo::new("verify", a),
        passed,
        generators: data.to_generator_string(),
        structure: data.group_structure().primary_form(),
        support: s.to_strings(),
        checks,
    };
    write_json(&report, a.out.as_deref())?;
    Ok(if passed { EXIT_OK } else { EXIT_NEGATIVE })
}

#[derive(Serialize)]
struct ClassifyReport<'a> {
    run: RunInfo<'a>,
    /// Set when the prime bound is not backed by a known argument.
    caveat: Option<String>,
    #[serde(flatten)]
    result: &'a Classification,
}

fn cmd_classify(degree: u32, vars: usize, a: &SearchArgs) -> Result<i32> {
    let caveat = if matches!((degree, vars), (3, 6) | (4, 4)) {
        None
    } else {
        let msg = format!("(d, N) = ({degree}, {vars}): maximality uses a bounded prime search without a completeness argument");
        eprintln!("warning: {msg}");
        Some(msg)
    };
    let cfg = ClassifyConfig {
        degree,
        n_vars: vars,
        primes: a.primes.clone(),
        largeness: a.largeness(),
        seed: a.seed,
    };
    let result = classify(&cfg)?;
    eprint!("{}", summary(&result));
    write_json(&ClassifyReport { run: RunInfo::new("classify", a), caveat, result: &result }, a.out.as_deref())?;
    Ok(if result.inconclusive.is_empty() { EXIT_OK } else { EXIT_NEGATIVE })
}

/// Human-readable table of the non-simple classes.
pub fn summary(c: &Classification) -> String {
    let mut lines = vec![];
    let st = &c.stats;
    lines.push(format!(
        "frames {}  closed sets {}  large {}  small {}  inconclusive {}",
        st.frame_classes, st.closed_sets_visited, st.large_closed_sets, st.small_closed_sets, st.inconclusive_closed_sets
    ));
    lines.push(format!(
        "maximal classes {}  (simple {}, non-simple {})",
        c.records.len(),
        c.records.len() - c.non_simple().count(),
        c.non_simple().count()
    ));
    lines.push(format!("{:<4} {:<16} {:<6} {:<40} S", "#", "group", "(s,c)", "generators"));
    for (i, r) in c.non_simple().enumerate() {
        let sc = r.chain.as_ref().map(|x| format!("({},{})", x.s, x.c)).unwrap_or_else(|| "-".into());
        lines.push(format!("{:<4} {:<16} {:<6} {:<40} {}", i + 1, r.structure_text, sc, r.generators, r.support.join(", ")));
    }
    if !c.inconclusive.is_empty() {
        lines.push(format!("inconclusive: {}", c.inconclusive.len()));
    }
    if !c.lemma_violations.is_empty() {
        lines.push(format!("lemma violations: {}", c.lemma_violations.len()));
    }
    if !c.maximality_disagreements.is_empty() {
        lines.push(format!("maximality disagreements: {}", c.maximality_disagreements.len()));
    }
    lines.join("\n") + "\n"
}

/// JSON `{"terms": {monomial: coefficient}}` (optionally with `degree`,
/// `variables`), a bare `{monomial: coefficient}` object, or plain text.
fn load_polynomial(path: &Path, vars: Option<usize>) -> Result<SparsePoly> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let infer = |keys: &[String]| -> usize {
        vars.unwrap_or_else(|| keys.iter().map(|k| max_variable(k)).max().unwrap_or(0))
    };
    match serde_json::from_str::<Value>(&text) {
        Ok(Value::Object(obj)) => {
            let declared = obj.get("variables").and_then(Value::as_u64).map(|v| v as usize);
            let terms = match obj.get("terms") {
                Some(Value::Object(t)) => t.clone(),
                Some(_) => return Err(Error::Parse("`terms` must be an object".into())),
                None => obj,
            };
            let keys: Vec<String> = terms.keys().cloned().collect();
            let n = declared.or(vars).unwrap_or_else(|| infer(&keys));
            let mut parsed = vec![];
            for (k, v) in &terms {
                let c = v.as_i64().ok_or_else(|| Error::Parse(format!("coefficient of {k} is not an integer")))?;
                parsed.push((Monomial::parse(k, n)?, c));
            }
            let degree = parsed.first().map(|(m, _)| m.degree()).ok_or(Error::ZeroPolynomial)?;
            SparsePoly::new(degree, n, parsed)
        }
        Ok(_) => Err(Error::Parse("expected a JSON object".into())),
        Err(_) => {
            let n = infer(std::slice::from_ref(&text));
            let first = text.split(['+', '-']).map(str::trim).find(|t| !t.is_empty()).ok_or(Error::ZeroPolynomial)?;
            let mono = first.trim_start_matches(|c: char| c.is_ascii_digit() || c == '*' || c.is_whitespace());
            let degree = Monomial::parse(mono, n)?.degree();
            SparsePoly::parse(degree, n, &text)
        }
    }
}

fn max_variable(s: &str) -> usize {
    let t = s.trim();
    if t.starts_with('[') {
        return t.split(',').count();
    }
    let mut best = 0;
    for (i, c) in t.char_indices() {
        if c == 'x' {
            let digits: String = t[i + 1..].chars().take_while(|d| d.is_ascii_digit()).collect();
            if let Ok(k) = digits.parse::<usize>() {
                best = best.max(k);
            }
        }
    }
    best
}

#[derive(Serialize)]
struct SmoothReport {
    version: &'static str,
    primes: Vec<u64>,
    polynomial: String,
    smooth: bool,
    certificate: Option<crate::smooth::SmoothnessCertificate>,
    /// Primes skipped because they divide the degree.
    skipped: Vec<u64>,
}

fn cmd_smooth(file: &Path, primes: &[u64], vars: Option<usize>, out: Option<&Path>) -> Result<i32> {
    let f = load_polynomial(file, vars)?;
    let mut skipped = vec![];
    let mut certificate = None;
    for &p in primes {
        match certify_polynomial(&f, p) {
            Ok(Some(c)) => {
                certificate = Some(c);
                break;
            }
            Ok(None) | Err(Error::ZeroPolynomial) => {}
            Err(Error::EulerObstruction { .. }) => skipped.push(p),
            Err(e) => return Err(e),
        }
    }
    let smooth = certificate.is_some();
    if !smooth {
        eprintln!("no certificate");
    }
    let report = SmoothReport {
        version: env!("CARGO_PKG_VERSION"),
        primes: primes.to_vec(),
        polynomial: f.to_string(),
        smooth,
        certificate,
        skipped,
    };
    write_json(&report, out)?;
    Ok(if smooth { EXIT_OK } else { EXIT_NEGATIVE })
}

#[derive(Serialize)]
struct MSetAnswer {
    a: Vec<usize>,
    b: Vec<usize>,
    monomials: Vec<String>,
}

#[derive(Serialize)]
struct InvariantsReport {
    version: &'static str,
    generators: String,
    structure: String,
    support: Vec<String>,
    arrows: Vec<(usize, usize)>,
    s: Option<usize>,
    c: Option<usize>,
    chain: Option<Vec<usize>>,
    chain_error: Option<String>,
    spoon_violations: Vec<(usize, usize)>,
    m_sets: Vec<MSetAnswer>,
}

fn parse_index_list(s: &str, n: usize) -> Result<Vec<usize>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| match t.parse::<usize>() {
            Ok(k) if (1..=n).contains(&k) => Ok(k - 1),
            _ => Err(Error::Parse(format!("bad variable index `{t}`"))),
        })
        .collect()
}

fn cmd_invariants(target: &str, queries: &[String], out: Option<&Path>) -> Result<i32> {
    let data = match load_input(target)? {
        Input::Case(c) => c.action_data()?,
        Input::Data(d) => *d,
    };
    let s = data.invariant_monomials();
    let n = data.n_vars();
    let graph = edge_graph(&s);
    let chain = chain_invariants_of(&graph, data.weights());
    let mut m_sets = vec![];
    for q in queries {
        let (a, b) = q.split_once(';').unwrap_or((q.as_str(), ""));
        let (a, b) = (parse_index_list(a, n)?, parse_index_list(b, n)?);
        let found = s.m_set(&a, &b)?;
        m_sets.push(MSetAnswer {
            a: a.iter().map(|i| i + 1).collect(),
            b: b.iter().map(|i| i + 1).collect(),
            monomials: found.to_strings(),
        });
    }
    let report = InvariantsReport {
        version: env!("CARGO_PKG_VERSION"),
        generators: data.to_generator_string(),
        structure: data.group_structure().primary_form(),
        support: s.to_strings(),
        arrows: graph.arrows_one_based(),
        s: chain.as_ref().ok().map(|c| c.s),
        c: chain.as_ref().ok().map(|c| c.c),
        chain: chain.as_ref().ok().map(|c| c.witness_one_based()),
        chain_error: chain.as_ref().err().map(|e| e.to_string()),
        spoon_violations: chain
            .as_ref()
            .map(|c| spoon_violations(&graph, c).into_iter().map(|(i, j)| (i + 1, j + 1)).collect())
            .unwrap_or_default(),
        m_sets,
    };
    write_json(&report, out)?;
    Ok(EXIT_OK)
}
