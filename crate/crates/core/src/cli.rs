//! The `kfib` command line: subcommand dispatch, `--config` merging, run
//! manifests and the consolidated report.
//!
//! Exit codes: 0 all checks passed, 1 a check failed, 2 usage error,
//! 3 precision cap reached.

use std::ffi::OsString;
use std::fs;
use std::io::{IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::asymptotics::{expand_c, expansion_report, ExpansionConfig};
use crate::bounds::{gcd_scan, verify_binet_residuals, verify_root_window, verify_size_bounds};
use crate::charpoly::{all_roots, all_roots_auto, binet_coefficients, norm_linear_form_int, RootSet};
use crate::error::{with_precision_policy, Error, Result, INITIAL_PRECISION, PRECISION_CAP};
use crate::interval::Interval;
use crate::multindep::{certify_independence, is_multiple_of_ones, parse_mask, probe_relations};
use crate::sequence::SequenceCache;
use crate::squares::{discriminant, scan};
use crate::triples::{search, SearchCheckpoint, SearchOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED_CHECK: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;

/// Failures listed in a manifest are truncated to this many entries.
const MAX_LISTED_FAILURES: usize = 50;

#[derive(Parser, Debug)]
#[command(name = "kfib", version, about = "k-generalized Fibonacci verification and triple search")]
#[command(args_override_self = true)]
struct Cli {
    /// Directory that receives one run manifest per invocation.
    #[arg(long, global = true, default_value = "manifests")]
    manifest_dir: PathBuf,

    /// JSON object of flag values (keys as flag names); command-line flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads for parallel scans.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
enum Command {
    /// Print F_n for a range of indices, or locate a value.
    Seq(SeqArgs),
    /// Certified enclosures of all roots of Psi_k.
    Roots(RootsArgs),
    /// Norms |N(p alpha - q)| exactly and from the root enclosures.
    Norms(NormsArgs),
    /// Root window, Binet residuals and size bounds.
    Verify(VerifyArgs),
    /// gcd(F_x - 1, F_y - 1) against alpha^(kx/(k+1)).
    GcdScan(GcdArgs),
    /// Independence certificate and bounded relation probe.
    Indep(IndepArgs),
    /// Exhaustive search for triples.
    Search(SearchArgs),
    /// Truncated expansion of c at a point.
    Expand(ExpandArgs),
    /// D(k) = 2^(k+1) k^k - (k+1)^(k+1) is not a square.
    SquareScan(SquareArgs),
    /// Summarize a directory of manifests.
    Report(ReportArgs),
}

fn parse_k(s: &str) -> std::result::Result<usize, String> {
    let k: usize = s.parse().map_err(|e| format!("{e}"))?;
    if k < 2 {
        return Err(format!("k must be at least 2, got {k}"));
    }
    Ok(k)
}

#[derive(Args, Debug, Serialize)]
struct SeqArgs {
    #[arg(long, value_parser = parse_k)]
    k: usize,
    /// Last index printed.
    #[arg(long, default_value_t = 20)]
    n: i64,
    /// First index printed.
    #[arg(long, default_value_t = 1)]
    from: i64,
    /// Report the smallest index of this value instead of listing terms.
    #[arg(long)]
    member: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct RootsArgs {
    #[arg(long, value_parser = parse_k)]
    k: usize,
    /// Working precision in bits (default: automatic).
    #[arg(long)]
    prec: Option<u32>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct NormsArgs {
    #[arg(long, value_parser = parse_k)]
    k: usize,
    /// With --q: a single form p alpha - q instead of the standard chain.
    #[arg(long, requires = "q")]
    p: Option<i64>,
    #[arg(long, requires = "p")]
    q: Option<i64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct VerifyArgs {
    #[arg(long, value_parser = parse_k)]
    k: usize,
    #[arg(long, default_value_t = 200)]
    n_max: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct GcdArgs {
    #[arg(long, value_parser = parse_k)]
    k: usize,
    #[arg(long)]
    x_max: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct IndepArgs {
    #[arg(long, value_parser = parse_k)]
    k: usize,
    #[arg(long)]
    probe_bound: Option<u32>,
    /// One 0/1 character per root, alpha_1 first, with k-1 ones.
    #[arg(long)]
    subset: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct SearchArgs {
    #[arg(long, value_parser = parse_k)]
    k: usize,
    #[arg(long)]
    z_max: u64,
    /// Checkpoint file to resume from.
    #[arg(long)]
    resume: Option<PathBuf>,
    #[arg(long)]
    no_prune: bool,
    /// Checkpoint written after every layer (default: OUT.checkpoint.json).
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct ExpandArgs {
    #[arg(long, value_parser = parse_k)]
    k: usize,
    #[arg(long = "T", default_value_t = 2)]
    #[serde(rename = "T")]
    order: u32,
    #[arg(long, value_delimiter = ',', required = true)]
    at: Vec<u64>,
    #[arg(long, default_value_t = 256)]
    prec: u32,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct SquareArgs {
    #[arg(long)]
    k_max: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
struct ReportArgs {
    /// Directory of manifests (default: the manifest directory).
    #[arg(long)]
    manifests: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Seq(_) => "seq",
            Command::Roots(_) => "roots",
            Command::Norms(_) => "norms",
            Command::Verify(_) => "verify",
            Command::GcdScan(_) => "gcd-scan",
            Command::Indep(_) => "indep",
            Command::Search(_) => "search",
            Command::Expand(_) => "expand",
            Command::SquareScan(_) => "square-scan",
            Command::Report(_) => "report",
        }
    }

    fn parameters(&self) -> Value {
        let v = serde_json::to_value(self).expect("arguments serialize");
        // externally tagged: {"Seq": {...}}
        v.as_object()
            .and_then(|o| o.values().next().cloned())
            .unwrap_or(Value::Null)
    }

    fn k(&self) -> Option<usize> {
        match self {
            Command::Seq(a) => Some(a.k),
            Command::Roots(a) => Some(a.k),
            Command::Norms(a) => Some(a.k),
            Command::Verify(a) => Some(a.k),
            Command::GcdScan(a) => Some(a.k),
            Command::Indep(a) => Some(a.k),
            Command::Search(a) => Some(a.k),
            Command::Expand(a) => Some(a.k),
            Command::SquareScan(_) | Command::Report(_) => None,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PrecisionSettings {
    pub initial_bits: u32,
    pub cap_bits: u32,
    /// Precision that produced the result, when a single one applies.
    pub used_bits: Option<u32>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OutcomeSummary {
    /// `pass`, `fail`, `usage-error`, `precision-cap` or `error`.
    pub status: String,
    pub exit_code: i32,
    pub checks: Value,
    pub failures: Vec<String>,
    pub outputs: Vec<String>,
    pub message: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    pub k: Option<usize>,
    pub parameters: Value,
    pub jobs: Option<usize>,
    pub precision: PrecisionSettings,
    pub started: String,
    pub finished: String,
    pub outcome: OutcomeSummary,
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::io(path, e))
    }
}

#[derive(Default)]
struct Outcome {
    passed: bool,
    checks: Value,
    failures: Vec<String>,
    outputs: Vec<String>,
    used_bits: Option<u32>,
}

impl Outcome {
    fn fail(&mut self, what: String) {
        self.passed = false;
        if self.failures.len() < MAX_LISTED_FAILURES {
            self.failures.push(what);
        }
    }
}

/// Runs the command line and returns the process exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let argv = match apply_config(argv) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("kfib: {e}");
            return EXIT_USAGE;
        }
    };
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let started = now();
    let run = || match &cli.command {
        Command::Seq(a) => cmd_seq(a),
        Command::Roots(a) => cmd_roots(a),
        Command::Norms(a) => cmd_norms(a),
        Command::Verify(a) => cmd_verify(a),
        Command::GcdScan(a) => cmd_gcd(a),
        Command::Indep(a) => cmd_indep(a),
        Command::Search(a) => cmd_search(a, cli.jobs),
        Command::Expand(a) => cmd_expand(a),
        Command::SquareScan(a) => cmd_squares(a),
        Command::Report(a) => cmd_report(a, &cli.manifest_dir),
    };
    let result = match cli.jobs {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build() {
            Ok(pool) => pool.install(run),
            Err(e) => Err(Error::invalid(e.to_string())),
        },
        None => run(),
    };
    let (code, status, message, outcome) = match result {
        Ok(o) if o.passed => (EXIT_OK, "pass", None, o),
        Ok(o) => (EXIT_FAILED_CHECK, "fail", None, o),
        Err(e) => {
            eprintln!("kfib: {e}");
            let (code, status) = match e {
                Error::InvalidArgument(_) | Error::TermOverflow { .. } => (EXIT_USAGE, "usage-error"),
                Error::PrecisionCap { .. } | Error::InsufficientPrecision { .. } => {
                    (EXIT_PRECISION, "precision-cap")
                }
                Error::Io(_) => (EXIT_USAGE, "error"),
            };
            (code, status, Some(e.to_string()), Outcome::default())
        }
    };
    let manifest = RunManifest {
        tool: "kfib".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        subcommand: cli.command.name().into(),
        k: cli.command.k(),
        parameters: cli.command.parameters(),
        jobs: cli.jobs,
        precision: PrecisionSettings {
            initial_bits: INITIAL_PRECISION,
            cap_bits: PRECISION_CAP,
            used_bits: outcome.used_bits,
        },
        started,
        finished: now(),
        outcome: OutcomeSummary {
            status: status.into(),
            exit_code: code,
            checks: outcome.checks,
            failures: outcome.failures,
            outputs: outcome.outputs,
            message,
        },
    };
    if let Err(e) = write_manifest(&cli.manifest_dir, &manifest) {
        eprintln!("kfib: {e}");
        return EXIT_USAGE;
    }
    code
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Micros, true)
}

static MANIFEST_SEQ: AtomicUsize = AtomicUsize::new(0);

fn write_manifest(dir: &Path, m: &RunManifest) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let stamp = chrono::Utc::now().format("%Y%m%dT%H%M%S%.6fZ");
    let seq = MANIFEST_SEQ.fetch_add(1, Ordering::Relaxed);
    let path = dir.join(format!(
        "{stamp}-{}-{}-{seq}.json",
        m.subcommand,
        std::process::id()
    ));
    let text = serde_json::to_string_pretty(m).expect("manifest serializes");
    fs::write(&path, text + "\n").map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

const SUBCOMMANDS: [&str; 10] = [
    "seq", "roots", "norms", "verify", "gcd-scan", "indep", "search", "expand", "square-scan", "report",
];

/// Removes `--config FILE` and splices its entries in as flags right after the
/// subcommand, so that explicit flags (which come later) take precedence.
fn apply_config(argv: Vec<OsString>) -> Result<Vec<OsString>> {
    let mut rest = Vec::with_capacity(argv.len());
    let mut config = None;
    let mut it = argv.into_iter();
    while let Some(a) = it.next() {
        let s = a.to_string_lossy().into_owned();
        if s == "--config" {
            let p = it.next().ok_or_else(|| Error::invalid("--config needs a file"))?;
            config = Some(PathBuf::from(p));
        } else if let Some(p) = s.strip_prefix("--config=") {
            config = Some(PathBuf::from(p));
        } else {
            rest.push(a);
        }
    }
    let Some(path) = config else {
        return Ok(rest);
    };
    let text = fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| Error::io(&path, e))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::invalid("config must be a JSON object"))?;
    let mut flags: Vec<OsString> = Vec::new();
    for (key, v) in obj {
        let flag = if key == "T" {
            "--T".to_string()
        } else {
            format!("--{}", key.replace('_', "-"))
        };
        match v {
            Value::Null | Value::Bool(false) => {}
            Value::Bool(true) => flags.push(flag.into()),
            Value::Array(items) => {
                let joined: Vec<String> = items.iter().map(scalar_text).collect();
                flags.push(flag.into());
                flags.push(joined.join(",").into());
            }
            other => {
                flags.push(flag.into());
                flags.push(scalar_text(other).into());
            }
        }
    }
    let pos = rest
        .iter()
        .position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref()))
        .map(|i| i + 1)
        .unwrap_or(rest.len());
    rest.splice(pos..pos, flags);
    Ok(rest)
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn write_text(out: Option<&Path>, text: &str) -> Result<Vec<String>> {
    match out {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            }
            fs::write(p, text).map_err(|e| Error::io(p, e))?;
            Ok(vec![p.display().to_string()])
        }
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes())
                .map_err(|e| Error::io(Path::new("<stdout>"), e))?;
            Ok(Vec::new())
        }
    }
}

fn emit_doc<T: Serialize>(out: Option<&Path>, doc: &T) -> Result<Vec<String>> {
    let text = serde_json::to_string_pretty(doc).expect("document serializes");
    write_text(out, &(text + "\n"))
}

fn emit_lines<T: Serialize>(out: Option<&Path>, items: &[T]) -> Result<Vec<String>> {
    let mut text = String::new();
    for it in items {
        text.push_str(&serde_json::to_string(it).expect("record serializes"));
        text.push('\n');
    }
    write_text(out, &text)
}

fn cmd_seq(a: &SeqArgs) -> Result<Outcome> {
    let mut seq = SequenceCache::new(a.k)?;
    if let Some(v) = &a.member {
        let v: BigInt = v
            .parse()
            .map_err(|_| Error::invalid(format!("not an integer: {v}")))?;
        let idx = seq.membership(&v)?;
        let doc = json!({ "k": a.k, "value": v.to_string(), "index": idx });
        return Ok(Outcome {
            passed: true,
            checks: json!({ "member": idx.is_some() }),
            outputs: emit_doc(a.out.as_deref(), &doc)?,
            ..Default::default()
        });
    }
    if a.from > a.n {
        return Err(Error::invalid("--from must not exceed --n"));
    }
    seq.materialize(a.n)?;
    let mut rows = Vec::new();
    for n in a.from..=a.n {
        rows.push(json!({ "n": n, "value": seq.term(n)?.to_string() }));
    }
    Ok(Outcome {
        passed: true,
        checks: json!({ "terms": rows.len() }),
        outputs: emit_lines(a.out.as_deref(), &rows)?,
        ..Default::default()
    })
}

fn roots_doc(r: &RootSet) -> Result<Value> {
    let p = r.working_precision();
    let mut others = Vec::new();
    for (b, m) in r.others().iter().zip(r.other_moduli()?) {
        let rect = b.to_rect(p);
        others.push(json!({ "re": rect.re, "im": rect.im, "modulus": m, "real": b.real }));
    }
    Ok(json!({
        "k": r.k(),
        "precision": p,
        "dominant": r.dominant(),
        "others": others,
    }))
}

fn cmd_roots(a: &RootsArgs) -> Result<Outcome> {
    let roots = match a.prec {
        Some(p) => all_roots(a.k, p)?,
        None => all_roots_auto(a.k)?,
    };
    let window = crate::bounds::root_window(&roots)?;
    let mut doc = roots_doc(&roots)?;
    doc["window_ok"] = json!(window);
    let mut o = Outcome {
        passed: true,
        checks: json!({ "root_window": window }),
        used_bits: Some(roots.working_precision()),
        outputs: emit_doc(a.out.as_deref(), &doc)?,
        ..Default::default()
    };
    if !window {
        o.fail(format!("k={}: dominant root outside (2 - 1/k, 2)", a.k));
    }
    Ok(o)
}

#[derive(Serialize)]
struct NormEntry {
    form: String,
    p: i64,
    q: i64,
    #[serde(serialize_with = "crate::json::rational")]
    exact: BigRational,
    #[serde(serialize_with = "opt_rational")]
    expected: Option<BigRational>,
    enclosure: Interval,
    enclosure_contains_exact: bool,
    ok: bool,
}

fn opt_rational<S: serde::Serializer>(v: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(r) => crate::json::rational(r, s),
        None => s.serialize_none(),
    }
}

fn cmd_norms(a: &NormsArgs) -> Result<Outcome> {
    let k = a.k as i64;
    let int = |v: BigInt| BigRational::from_integer(v);
    let forms: Vec<(String, i64, i64, Option<BigRational>)> = match (a.p, a.q) {
        (Some(p), Some(q)) => vec![(format!("{p} alpha - {q}"), p, q, None)],
        _ => vec![
            ("alpha".into(), 1, 0, Some(int(1.into()))),
            ("alpha - 1".into(), 1, 1, Some(int((k - 1).into()))),
            (
                format!("{} alpha - {}", k + 1, 2 * k),
                k + 1,
                2 * k,
                Some(BigRational::new(discriminant(a.k as u64)?, (k - 1).into())),
            ),
        ],
    };
    let (entries, bits) = with_precision_policy(INITIAL_PRECISION, |bits| {
        let roots = all_roots(a.k, bits)?;
        forms
            .iter()
            .map(|(form, p, q, expected)| {
                let exact = norm_linear_form_int(a.k, *p, *q)?;
                let enclosure = roots.norm_product_enclosure(&int((*p).into()), &int((*q).into()))?;
                let contains = enclosure.contains_rational(&exact);
                let ok = contains && expected.as_ref().is_none_or(|e| e == &exact);
                Ok(NormEntry {
                    form: form.clone(),
                    p: *p,
                    q: *q,
                    exact,
                    expected: expected.clone(),
                    enclosure,
                    enclosure_contains_exact: contains,
                    ok,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let doc = json!({ "k": a.k, "precision": bits, "norms": entries });
    let mut o = Outcome {
        passed: true,
        checks: json!({ "norm_identities": entries.iter().all(|e| e.ok) }),
        used_bits: Some(bits),
        outputs: emit_doc(a.out.as_deref(), &doc)?,
        ..Default::default()
    };
    for e in entries.iter().filter(|e| !e.ok) {
        o.fail(format!("k={}: norm of {} = {}", a.k, e.form, e.exact));
    }
    Ok(o)
}

fn cmd_verify(a: &VerifyArgs) -> Result<Outcome> {
    if a.n_max < 3 {
        return Err(Error::invalid("--n-max must be at least 3"));
    }
    let window = verify_root_window(a.k)?;
    let residuals = verify_binet_residuals(a.k, a.n_max)?;
    let sizes = verify_size_bounds(a.k, a.n_max)?;
    let mut o = Outcome {
        passed: true,
        ..Default::default()
    };
    if !window {
        o.fail(format!("k={}: root window", a.k));
    }
    for r in residuals.iter().filter(|r| r.n >= 1 && !r.ok) {
        o.fail(format!("k={} n={}: Binet residual", a.k, r.n));
    }
    // at n = 2 the lower bound reads 1 < 1; the claim starts at n = 3
    for r in sizes.iter().filter(|r| r.n >= 3 && !r.ok()) {
        o.fail(format!("k={} n={}: size bounds", a.k, r.n));
    }
    o.checks = json!({
        "root_window": window,
        "binet_residuals": residuals.iter().filter(|r| r.n >= 1).all(|r| r.ok),
        "size_bounds": sizes.iter().filter(|r| r.n >= 3).all(|r| r.ok()),
    });
    let doc = json!({
        "k": a.k,
        "n_max": a.n_max,
        "root_window": window,
        "binet_residuals": residuals,
        "size_bounds": sizes,
    });
    o.outputs = emit_doc(a.out.as_deref(), &doc)?;
    Ok(o)
}

fn cmd_gcd(a: &GcdArgs) -> Result<Outcome> {
    let recs = gcd_scan(a.k, a.x_max)?;
    let mut o = Outcome {
        passed: true,
        ..Default::default()
    };
    for r in recs.iter().filter(|r| !r.ok) {
        o.fail(format!("k={} x={} y={}: gcd {} exceeds bound", a.k, r.x, r.y, r.gcd_value));
    }
    o.checks = json!({ "gcd_bound": o.passed, "records": recs.len() });
    o.outputs = emit_lines(a.out.as_deref(), &recs)?;
    Ok(o)
}

fn cmd_indep(a: &IndepArgs) -> Result<Outcome> {
    let mask = a.subset.as_deref().map(parse_mask).transpose()?;
    let cert = certify_independence(a.k, mask.as_deref())?;
    let mut o = Outcome {
        passed: true,
        used_bits: Some(cert.precision),
        ..Default::default()
    };
    if !cert.passes {
        o.fail(format!("k={}: diagonal dominance", a.k));
    }
    let probe = match a.probe_bound {
        Some(b) => {
            let rel = probe_relations(a.k, b)?;
            let only_ones = rel.iter().all(|v| is_multiple_of_ones(v));
            for v in rel.iter().filter(|v| !is_multiple_of_ones(v)) {
                o.fail(format!("k={}: unexpected relation {v:?}", a.k));
            }
            json!({ "bound": b, "relations": rel, "only_multiples_of_ones": only_ones })
        }
        None => Value::Null,
    };
    o.checks = json!({
        "dominance": cert.passes,
        "probe": probe.get("only_multiples_of_ones").cloned().unwrap_or(Value::Null),
    });
    let doc = json!({ "certificate": cert, "probe": probe });
    o.outputs = emit_doc(a.out.as_deref(), &doc)?;
    Ok(o)
}

fn cmd_search(a: &SearchArgs, jobs: Option<usize>) -> Result<Outcome> {
    let resume = a.resume.as_deref().map(SearchCheckpoint::load).transpose()?;
    let checkpoint_path = a.checkpoint.clone().or_else(|| {
        a.out.as_ref().map(|p| {
            let mut s = p.clone().into_os_string();
            s.push(".checkpoint.json");
            PathBuf::from(s)
        })
    });
    let opts = SearchOptions {
        prune: !a.no_prune,
        jobs,
        checkpoint_path,
    };
    let state = search(a.k, a.z_max, resume.as_ref(), &opts)?;
    let mut o = Outcome {
        passed: true,
        ..Default::default()
    };
    for s in &state.solutions {
        if !s.check()? {
            o.fail(format!("k={} ({}, {}, {}): does not re-verify", a.k, s.a, s.b, s.c));
        }
    }
    o.checks = json!({ "solutions": state.solutions.len(), "verified": o.passed });
    o.outputs = emit_lines(a.out.as_deref(), &state.solutions)?;
    if let Some(p) = &opts.checkpoint_path {
        if p.exists() {
            o.outputs.push(p.display().to_string());
        }
    }
    Ok(o)
}

fn cmd_expand(a: &ExpandArgs) -> Result<Outcome> {
    let [x, y, z] = a.at[..] else {
        return Err(Error::invalid("--at takes exactly three indices X,Y,Z"));
    };
    if !(1 <= x && x <= y && y <= z) {
        return Err(Error::invalid("--at must satisfy 1 <= x <= y <= z"));
    }
    let roots = all_roots(a.k, a.prec)?;
    let coeffs = binet_coefficients(&roots)?;
    let config = ExpansionConfig::for_point(a.order, x, y, z);
    let terms = expand_c(a.k, &config, &roots, &coeffs)?;
    let report = expansion_report(a.k, a.order, x, y, z, &roots, &coeffs)?;
    let mut o = Outcome {
        passed: true,
        used_bits: Some(a.prec),
        checks: json!({ "monomial_decay": report.decay_ok }),
        ..Default::default()
    };
    if !report.decay_ok {
        o.fail(format!("k={} at ({x},{y},{z}): a monomial exceeds (3/2)^(-x)", a.k));
    }
    let table: Vec<Value> = terms
        .iter()
        .map(|t| {
            json!({
                "re": t.coefficient.re.mid().to_decimal(30),
                "im": t.coefficient.im.mid().to_decimal(30),
                "exponents": t.exponents,
            })
        })
        .collect();
    o.outputs = emit_doc(a.out.as_deref(), &json!({ "report": report, "terms": table }))?;
    Ok(o)
}

fn cmd_squares(a: &SquareArgs) -> Result<Outcome> {
    let recs = scan(a.k_max)?;
    let mut o = Outcome {
        passed: true,
        ..Default::default()
    };
    for r in &recs {
        if r.is_square {
            o.fail(format!("k={}: D(k) is a perfect square", r.k));
        } else if !r.consistent() {
            o.fail(format!("k={}: record is inconsistent", r.k));
        }
    }
    o.checks = json!({ "no_squares": recs.iter().all(|r| !r.is_square), "records": recs.len() });
    o.outputs = emit_lines(a.out.as_deref(), &recs)?;
    Ok(o)
}

fn paint(text: &str, ok: bool) -> String {
    let color = std::env::var_os("NO_COLOR").is_none() && std::io::stdout().is_terminal();
    match (color, ok) {
        (false, _) => text.to_string(),
        (true, true) => format!("\x1b[32m{text}\x1b[0m"),
        (true, false) => format!("\x1b[31m{text}\x1b[0m"),
    }
}

fn check_cells(checks: &Value) -> String {
    match checks.as_object() {
        Some(map) if !map.is_empty() => map
            .iter()
            .map(|(name, v)| match v {
                Value::Bool(b) => format!("{name}={}", if *b { "pass" } else { "FAIL" }),
                other => format!("{name}={other}"),
            })
            .collect::<Vec<_>>()
            .join(", "),
        _ => "-".into(),
    }
}

/// Markdown summary of a set of manifests: one row per run.
pub fn render_report(manifests: &[RunManifest]) -> (String, bool) {
    let mut rows: Vec<&RunManifest> = manifests.iter().filter(|m| m.subcommand != "report").collect();
    rows.sort_by(|a, b| (&a.subcommand, a.k, &a.started).cmp(&(&b.subcommand, b.k, &b.started)));
    let all_ok = rows.iter().all(|m| m.outcome.status == "pass");
    let mut s = String::from("# kfib run summary\n\n");
    s += &format!("{} run(s), {}\n\n", rows.len(), if all_ok { "all passing" } else { "FAILURES PRESENT" });
    s += "| subcommand | k | status | checks |\n|---|---|---|---|\n";
    for m in &rows {
        let k = m.k.map_or("-".to_string(), |k| k.to_string());
        s += &format!(
            "| {} | {} | {} | {} |\n",
            m.subcommand,
            k,
            m.outcome.status,
            check_cells(&m.outcome.checks)
        );
    }
    let failing: Vec<&&RunManifest> = rows.iter().filter(|m| m.outcome.status != "pass").collect();
    if !failing.is_empty() {
        s += "\n## Failing records\n\n";
        for m in failing {
            if let Some(msg) = &m.outcome.message {
                s += &format!("- {} ({}): {msg}\n", m.subcommand, m.outcome.status);
            }
            for f in &m.outcome.failures {
                s += &format!("- {}: {f}\n", m.subcommand);
            }
        }
    }
    (s, all_ok)
}

fn cmd_report(a: &ReportArgs, manifest_dir: &Path) -> Result<Outcome> {
    let dir = a.manifests.as_deref().unwrap_or(manifest_dir);
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let manifests = paths
        .iter()
        .map(|p| RunManifest::load(p))
        .collect::<Result<Vec<_>>>()?;
    let runs = manifests.iter().filter(|m| m.subcommand != "report").count();
    if runs == 0 {
        return Err(Error::invalid(format!("no manifests in {}", dir.display())));
    }
    let (text, all_ok) = render_report(&manifests);
    let shown = if a.out.is_none() {
        text.replace("| pass |", &format!("| {} |", paint("pass", true)))
            .replace("| fail |", &format!("| {} |", paint("fail", false)))
    } else {
        text
    };
    let mut o = Outcome {
        passed: true,
        checks: json!({ "runs": runs, "all_passing": all_ok }),
        outputs: write_text(a.out.as_deref(), &shown)?,
        ..Default::default()
    };
    if !all_ok {
        o.fail("at least one run failed".into());
    }
    Ok(o)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(v: &[&str]) -> Vec<OsString> {
        v.iter().map(OsString::from).collect()
    }

    #[test]
    fn config_is_spliced_after_subcommand() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("c.json");
        fs::write(&cfg, r#"{"k": 3, "n_max": 50, "at": [1, 2, 3], "no_prune": true, "out": null}"#).unwrap();
        let out = apply_config(args(&["kfib", "--config", cfg.to_str().unwrap(), "verify", "--k", "4"])).unwrap();
        let s: Vec<String> = out.iter().map(|a| a.to_string_lossy().into_owned()).collect();
        assert_eq!(s[..2], ["kfib", "verify"]);
        assert!(s.windows(2).any(|w| w == ["--n-max", "50"]));
        assert!(s.windows(2).any(|w| w == ["--at", "1,2,3"]));
        assert!(s.contains(&"--no-prune".to_string()));
        assert_eq!(s[s.len() - 2..], ["--k", "4"]);
    }

    #[test]
    fn parameters_are_flat() {
        let cli = Cli::try_parse_from(["kfib", "gcd-scan", "--k", "3", "--x-max", "9"]).unwrap();
        assert_eq!(cli.command.parameters(), json!({ "k": 3, "x_max": 9, "out": null }));
        assert_eq!(cli.command.name(), "gcd-scan");
    }

    #[test]
    fn flags_repeat_last_wins() {
        let cli = Cli::try_parse_from(["kfib", "verify", "--k", "3", "--k", "5"]).unwrap();
        assert_eq!(cli.command.k(), Some(5));
    }
}
