use std::io::Write;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use ringforge_core::classify::{classify_congruence, classify_subspaces, ClassReport, ClassifyOptions, DEFAULT_BUDGET};
use ringforge_core::construction_a::{
    iso_test, ring_axioms_check, ring_create, ring_structure, AxiomsMode, RingSpec,
};
use ringforge_core::counting::{
    count_case_s1, count_case_t_s2, nc_symmetric, paper_predictions, serialize_big, waterhouse_count,
};
use ringforge_core::gf::FiniteField;
use ringforge_core::matspace::{case_rep_list, newman_symmetric_reps, Mat, MatTuple};
use ringforge_core::verify::{run_verify_suite, Scope, SuiteResult, VerifyOptions};

#[derive(Parser)]
#[command(name = "ringforge", version, about = "Classify and count finite rings of characteristic p")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Equivalence classes of t-dimensional subspaces of s x s matrices.
    Classify {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
        /// Leave field automorphisms out of the acting group.
        #[arg(long)]
        no_frobenius: bool,
        /// Drop classes with no compatible member.
        #[arg(long)]
        compatible_only: bool,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Congruence classes of s x s matrices.
    Congruence {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        s: usize,
        /// Symmetric matrices only.
        #[arg(long)]
        symmetric: bool,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Closed-form counts and published predictions.
    Count {
        #[arg(long, value_enum)]
        kind: CountKind,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        q: Option<u64>,
        #[arg(long)]
        r: Option<u64>,
        #[arg(long)]
        s: Option<u64>,
        #[arg(long)]
        t: Option<u64>,
        #[arg(long)]
        lambda: Option<u64>,
    },
    /// Isomorphism test between two ring specs (JSON files).
    Iso {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long, default_value = "central")]
        mode: String,
    },
    /// Build a ring, check its axioms and report its structure.
    Ring {
        /// Ring spec JSON file; `-` reads stdin.
        #[arg(long, conflicts_with_all = ["matrices", "p"])]
        spec: Option<String>,
        /// Structural matrices as JSON, e.g. '[[[1,0],[0,1]]]'; builds an untwisted spec.
        #[arg(long, requires = "p")]
        matrices: Option<String>,
        #[arg(long)]
        p: Option<u32>,
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long, default_value_t = 0)]
        lambda: usize,
        #[arg(long, value_enum, default_value_t = AxiomsArg::Auto)]
        axioms: AxiomsArg,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Include the multiplication table when the ring has at most this many elements.
        #[arg(long)]
        table: Option<u128>,
    },
    /// Congruence class representative lists.
    Reps {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        s: usize,
        #[arg(long, value_enum, default_value_t = RepsKind::All)]
        kind: RepsKind,
    },
    /// Reproduce every published count and list.
    Verify {
        #[arg(long)]
        full: bool,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Include per-check runtimes in the output.
        #[arg(long)]
        timings: bool,
        /// Run on fields with one wrong product, to exercise the failure path.
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Args)]
struct FieldArgs {
    #[arg(long)]
    p: u32,
    #[arg(long, default_value_t = 1)]
    r: u32,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value = "auto")]
    strategy: String,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Cap on estimated group actions; overrides RINGFORGE_BUDGET.
    #[arg(long)]
    budget: Option<u128>,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum CountKind {
    S1,
    TEqS2,
    Waterhouse,
    NcSymmetric,
    Prediction,
}

#[derive(Clone, Copy, ValueEnum)]
enum AxiomsArg {
    Exhaustive,
    Sampled,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum RepsKind {
    /// All matrices (s = 2 or 3).
    All,
    Symmetric,
}

/// Failures that are not usage errors.
struct VerificationFailed;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Ok(out)) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Ok(Err((out, VerificationFailed))) => {
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

type Outcome = std::result::Result<String, (String, VerificationFailed)>;

fn run(cli: Cli) -> Result<Outcome> {
    let fmt = cli.format;
    let out = match cli.command {
        Command::Classify { field, s, t, no_frobenius, compatible_only, run } => {
            let f = field.build()?;
            let opts = ClassifyOptions {
                use_frobenius: !no_frobenius,
                filter_compatible: compatible_only,
                ..run.options()?
            };
            class_output(&classify_subspaces(&f, s, t, &opts)?, fmt)?
        }
        Command::Congruence { field, s, symmetric, run } => {
            let f = field.build()?;
            let opts = ClassifyOptions { symmetric_only: symmetric, ..run.options()? };
            class_output(&classify_congruence(&f, s, &opts)?, fmt)?
        }
        Command::Count { kind, p, q, r, s, t, lambda } => count(kind, p, q, r, s, t, lambda, fmt)?,
        Command::Iso { left, right, mode } => {
            let l = RingSpec::from_json(&read_input(&left)?).with_context(|| format!("reading {left}"))?;
            let d = RingSpec::from_json(&read_input(&right)?).with_context(|| format!("reading {right}"))?;
            let w = iso_test(&l, &d, &mode)?;
            match fmt {
                Format::Json => to_json(&json!({ "isomorphic": w.is_some(), "mode": mode, "witness": w }))?,
                Format::Csv => {
                    let mut rows = vec![vec!["isomorphic".to_string(), "sigma".into(), "C".into(), "B".into(), "v_perm".into()]];
                    rows.push(match &w {
                        Some(w) => vec![
                            "true".into(),
                            w.sigma_global.exponent().to_string(),
                            serde_json::to_string(&w.c)?,
                            serde_json::to_string(&w.b)?,
                            serde_json::to_string(&w.v_perm)?,
                        ],
                        None => vec!["false".into(), String::new(), String::new(), String::new(), String::new()],
                    });
                    to_csv(rows)?
                }
            }
        }
        Command::Ring { spec, matrices, p, r, lambda, axioms, samples, seed, table } => {
            let spec = match (spec, matrices, p) {
                (Some(path), _, _) => RingSpec::from_json(&read_input(&path)?)?,
                (None, Some(m), Some(p)) => {
                    let f = FiniteField::new(p, r)?;
                    let mats: Vec<Mat> = serde_json::from_str(&m).context("parsing --matrices")?;
                    RingSpec::untwisted(&f, MatTuple::new(mats)?, lambda)
                }
                _ => bail!("give either --spec or --matrices with --p"),
            };
            let ring = ring_create(spec)?;
            let mode = match axioms {
                AxiomsArg::Exhaustive => AxiomsMode::Exhaustive,
                AxiomsArg::Sampled => AxiomsMode::Sampled { seed, count: samples },
                AxiomsArg::Auto => AxiomsMode::Auto { seed, count: samples },
            };
            let table = table.map(|limit| ring.multiplication_table(limit)).transpose()?;
            let axioms = ring_axioms_check(&ring, mode)?;
            let structure = ring_structure(&ring);
            let passed = axioms.passed;
            let out = match fmt {
                Format::Json => to_json(&json!({
                    "spec": ring.spec(),
                    "axioms": axioms,
                    "structure": structure,
                    "multiplication_table": table.map(|t| t.into_iter().map(|row| row.into_iter().map(|c| c.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>()),
                }))?,
                Format::Csv => {
                    let v = serde_json::to_value(&structure)?;
                    let mut rows = vec![vec!["property".to_string(), "value".into()]];
                    rows.push(vec!["axioms_passed".into(), passed.to_string()]);
                    rows.push(vec!["axioms_exhaustive".into(), axioms.exhaustive.to_string()]);
                    rows.push(vec!["triples_checked".into(), axioms.triples_checked.to_string()]);
                    flatten("", &v, &mut rows);
                    to_csv(rows)?
                }
            };
            if !passed {
                return Ok(Err((out, VerificationFailed)));
            }
            out
        }
        Command::Reps { field, s, kind } => {
            let f = field.build()?;
            let reps = match kind {
                RepsKind::All => case_rep_list(&f, s)?,
                RepsKind::Symmetric => {
                    if s == 0 {
                        bail!("s must be at least 1");
                    }
                    newman_symmetric_reps(&f, s)
                }
            };
            match fmt {
                Format::Json => to_json(&json!({ "p": f.p(), "r": f.r(), "s": s, "count": reps.len(), "representatives": reps }))?,
                Format::Csv => {
                    let mut rows = vec![vec!["index".to_string(), "matrix".into()]];
                    rows.extend(reps.iter().enumerate().map(|(i, m)| Ok(vec![i.to_string(), serde_json::to_string(m)?])).collect::<Result<Vec<_>>>()?);
                    to_csv(rows)?
                }
            }
        }
        Command::Verify { full, workers, seed, timings, inject_fault } => {
            let scope = if full { Scope::Full } else { Scope::Fast };
            let mut result = run_verify_suite(scope, &VerifyOptions { workers: workers.max(1), seed, seeded_fault: inject_fault });
            print_table(&result);
            if !timings {
                result.strip_timings();
            }
            let out = match fmt {
                Format::Json => to_json(&result)?,
                Format::Csv => verify_csv(&result)?,
            };
            if result.exit_code != 0 {
                return Ok(Err((out, VerificationFailed)));
            }
            out
        }
    };
    Ok(Ok(out))
}

impl FieldArgs {
    fn build(&self) -> Result<FiniteField> {
        Ok(FiniteField::new(self.p, self.r)?)
    }
}

impl RunArgs {
    fn options(&self) -> Result<ClassifyOptions> {
        let budget = match (self.budget, std::env::var("RINGFORGE_BUDGET")) {
            (Some(b), _) => b,
            (None, Ok(v)) => v.trim().parse().with_context(|| format!("RINGFORGE_BUDGET = {v:?} is not an integer"))?,
            (None, Err(_)) => DEFAULT_BUDGET,
        };
        ringforge_core::classify::strategy(&self.strategy)?;
        Ok(ClassifyOptions { strategy: self.strategy.clone(), workers: self.workers.max(1), budget, ..ClassifyOptions::default() })
    }
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        return Ok(std::io::read_to_string(std::io::stdin())?);
    }
    std::fs::read_to_string(path).with_context(|| format!("cannot read {path}"))
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn to_csv(rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<Vec<String>>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, rows);
            }
        }
        Value::String(s) => rows.push(vec![prefix.into(), s.clone()]),
        other => rows.push(vec![prefix.into(), other.to_string()]),
    }
}

fn class_output(rep: &ClassReport, fmt: Format) -> Result<String> {
    match fmt {
        Format::Json => to_json(rep),
        Format::Csv => {
            let mut rows = vec![vec![
                "index".to_string(),
                "orbit_size".into(),
                "contains_compatible".into(),
                "commutative_capable".into(),
                "canonical_rep".into(),
            ]];
            for (i, c) in rep.classes.iter().enumerate() {
                rows.push(vec![
                    i.to_string(),
                    c.orbit_size.to_string(),
                    c.contains_compatible.to_string(),
                    c.commutative_capable.to_string(),
                    serde_json::to_string(&c.canonical_rep)?,
                ]);
            }
            to_csv(rows)
        }
    }
}

fn need(name: &str, v: Option<u64>) -> Result<u64> {
    v.with_context(|| format!("--{name} is required for this kind"))
}

#[derive(Serialize)]
struct CountOutput {
    kind: CountKind,
    params: serde_json::Map<String, Value>,
    #[serde(serialize_with = "serialize_big")]
    value: num_bigint::BigUint,
    status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    source: Option<&'static str>,
}

#[allow(clippy::too_many_arguments)]
fn count(kind: CountKind, p: Option<u64>, q: Option<u64>, r: Option<u64>, s: Option<u64>, t: Option<u64>, lambda: Option<u64>, fmt: Format) -> Result<String> {
    let mut params = serde_json::Map::new();
    let mut put = |k: &str, v: u64| {
        params.insert(k.into(), json!(v));
        v
    };
    let (value, status, source) = match kind {
        CountKind::S1 => {
            let (r, l) = (put("r", need("r", r)?), put("lambda", need("lambda", lambda)?));
            (count_case_s1(r, l)?, "exact", None)
        }
        CountKind::TEqS2 => {
            let (r, s, l) = (put("r", need("r", r)?), put("s", need("s", s)?), put("lambda", need("lambda", lambda)?));
            (count_case_t_s2(r, s, l)?, "exact", None)
        }
        CountKind::Waterhouse => {
            let (q, s) = (put("q", need("q", q)?), put("s", need("s", s)?));
            (waterhouse_count(q, s as usize)?, "exact", None)
        }
        CountKind::NcSymmetric => {
            let s = put("s", need("s", s)?);
            (nc_symmetric(s)?.into(), "exact", None)
        }
        CountKind::Prediction => {
            let p = put("p", need("p", p)?);
            let r = put("r", r.unwrap_or(1));
            let s = put("s", need("s", s)?);
            let t = put("t", need("t", t)?);
            let l = put("lambda", lambda.unwrap_or(0));
            let pred = paper_predictions(p, r, s, t, l)?;
            let status = match pred.status {
                ringforge_core::counting::PredictionStatus::Verified => "verified",
                ringforge_core::counting::PredictionStatus::Conjectured => "conjectured",
            };
            (pred.value, status, Some(pred.source))
        }
    };
    let out = CountOutput { kind, params, value, status, source };
    match fmt {
        Format::Json => to_json(&out),
        Format::Csv => {
            let kind = serde_json::to_value(kind)?.as_str().unwrap_or_default().to_string();
            to_csv(vec![
                vec!["kind".into(), "value".into(), "status".into(), "source".into()],
                vec![kind, out.value.to_string(), status.into(), source.unwrap_or_default().into()],
            ])
        }
    }
}

fn status_word(s: ringforge_core::verify::CheckStatus) -> &'static str {
    use ringforge_core::verify::CheckStatus::*;
    match s {
        Pass => "pass",
        Fail => "FAIL",
        Skipped => "skip",
    }
}

fn print_table(result: &SuiteResult) {
    let mut err = std::io::stderr().lock();
    for c in &result.checks {
        let pred = c.prediction.map(|p| format!(" [{}]", serde_json::to_value(p).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()));
        let _ = writeln!(
            err,
            "{:<4} {:<24} expected {:<28} measured {:<36} {}{}",
            status_word(c.status),
            c.name,
            c.expected,
            c.measured,
            c.citation,
            pred.unwrap_or_default()
        );
    }
    let failed = result.failed();
    let _ = writeln!(err, "{} checks, {} failed", result.checks.len(), failed.len());
}

fn verify_csv(result: &SuiteResult) -> Result<String> {
    let mut rows = vec![vec![
        "name".to_string(),
        "status".into(),
        "expected".into(),
        "measured".into(),
        "prediction".into(),
        "citation".into(),
        "runtime_ms".into(),
    ]];
    for c in &result.checks {
        let pred = c.prediction.map(|p| serde_json::to_value(p).map(|v| v.as_str().unwrap_or_default().to_string())).transpose()?;
        rows.push(vec![
            c.name.clone(),
            status_word(c.status).to_lowercase(),
            c.expected.clone(),
            c.measured.clone(),
            pred.unwrap_or_default(),
            c.citation.clone(),
            c.runtime_ms.map(|m| m.to_string()).unwrap_or_default(),
        ]);
    }
    to_csv(rows)
}
