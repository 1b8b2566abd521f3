use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use cs_algebra::color::{GradingContext, KoszulConvention};
use cs_algebra::model::Coupling;
use cs_algebra::scalar::Rat;
use cs_algebra::verify::catalog::{Ranges, CATALOG};
use cs_algebra::verify::manifest::{Manifest, Mismatch};
use cs_algebra::verify::{default_contexts, resolve_cases, run_suite, IdentityReport, RunConfig, Verdict, SCHEMA_VERSION};
use serde_json::json;

const EXIT_MISMATCH: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Convention {
    Left,
    Right,
}

/// Verify operator identities of gl(n|m) color Calogero-Sutherland models.
#[derive(Parser, Debug)]
#[command(name = "cs-verify", version)]
struct Args {
    /// Number of even colors.
    #[arg(long)]
    n: Option<u8>,
    /// Number of odd colors.
    #[arg(long)]
    m: Option<u8>,
    /// Number of particles.
    #[arg(long = "N")]
    sites: Option<u8>,
    /// `default`, or a `;`-separated list of `n,m,N` triples.
    #[arg(long, conflicts_with_all = ["n", "m", "sites"])]
    contexts: Option<String>,
    /// Comma-separated case ids, or `all`.
    #[arg(long, default_value = "all", value_delimiter = ',')]
    cases: Vec<String>,
    /// `symbolic` or a rational value such as `3/2`.
    #[arg(long, default_value = "symbolic")]
    lambda: String,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Raise the oracle's test-state degree.
    #[arg(long)]
    oracle_degree: Option<u32>,
    #[arg(long, default_value_t = 3)]
    max_spin: u8,
    #[arg(long, default_value_t = 2)]
    max_degree: u8,
    /// Largest operator (in terms) any step may produce.
    #[arg(long, default_value_t = 200_000)]
    term_budget: usize,
    /// Seed for sampled color tuples.
    #[arg(long, default_value_t = 0x5eed)]
    seed: u64,
    /// Number of sampled color sextuples when n + m >= 3.
    #[arg(long, default_value_t = 48)]
    sample: usize,
    #[arg(long, value_enum, default_value = "left")]
    convention: Convention,
    /// Write residuals of failing instances to this file.
    #[arg(long)]
    dump_residual: Option<PathBuf>,
    #[arg(long, env = "CS_VERIFY_WORKERS", default_value_t = 1)]
    workers: usize,
    /// Write the report here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Compare against this manifest instead of the built-in one.
    #[arg(long)]
    manifest: Option<PathBuf>,
    /// List the case catalog and exit.
    #[arg(long)]
    list: bool,
}

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    eprintln!("run with --help for usage");
    ExitCode::from(EXIT_USAGE)
}

fn parse_contexts(args: &Args) -> Result<Vec<GradingContext>, String> {
    if args.n.is_some() || args.m.is_some() || args.sites.is_some() {
        let n = args.n.unwrap_or(0);
        let m = args.m.unwrap_or(0);
        let sites = args.sites.ok_or("--N is required with --n/--m")?;
        return GradingContext::new(n, m, sites).map(|g| vec![g]).map_err(|e| e.to_string());
    }
    match args.contexts.as_deref() {
        None | Some("default") => Ok(default_contexts()),
        Some(list) => list
            .split(';')
            .map(|t| {
                let v: Vec<u8> = t
                    .split(',')
                    .map(|x| x.trim().parse::<u8>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| format!("bad context `{t}`"))?;
                match v[..] {
                    [n, m, s] => GradingContext::new(n, m, s).map_err(|e| e.to_string()),
                    _ => Err(format!("bad context `{t}`, expected n,m,N")),
                }
            })
            .collect(),
    }
}

fn build_config(args: &Args) -> Result<RunConfig, String> {
    let contexts = parse_contexts(args)?;
    let coupling = match args.lambda.as_str() {
        "symbolic" => Coupling::Symbolic,
        v => Coupling::Fixed(v.parse::<Rat>().map_err(|_| format!("bad --lambda `{v}`"))?),
    };
    if args.max_spin == 0 || args.max_degree == 0 || args.term_budget == 0 || args.sample == 0 || args.workers == 0 {
        return Err("caps, sample size and worker count must be positive".into());
    }
    let cases = resolve_cases(&args.cases).map_err(|e| e.to_string())?;
    Ok(RunConfig {
        contexts,
        cases,
        coupling,
        oracle_degree: args.oracle_degree,
        ranges: Ranges { max_spin: args.max_spin, max_degree: args.max_degree, seed: args.seed, sample: args.sample },
        term_budget: Some(args.term_budget),
        convention: match args.convention {
            Convention::Left => KoszulConvention::Left,
            Convention::Right => KoszulConvention::Right,
        },
        keep_residuals: args.dump_residual.is_some(),
        workers: args.workers,
    })
}

fn record(r: &IdentityReport) -> serde_json::Value {
    let mut v = json!({
        "id": r.id,
        "n": r.n,
        "m": r.m,
        "N": r.sites,
        "mode": r.mode,
        "lambda": r.lambda,
        "verdict": r.verdict,
        "oracle_agrees": r.oracle_agrees,
        "instances": r.instances,
        "failing_instances": r.failing_instances,
        "residual_term_count": r.residual_term_count,
        "millis": r.millis,
    });
    if let Some(f) = &r.first_failure {
        v["first_failure"] = json!(f);
    }
    if let Some(n) = &r.note {
        v["note"] = json!(n);
    }
    v
}

fn render_text(reports: &[IdentityReport], mismatches: &[Mismatch]) -> String {
    let mut s = String::new();
    for r in reports {
        s += &format!(
            "{:<17} ({}|{}) N={}  {:<16} instances={:<5} failing={:<4} residual_terms={:<5} oracle={} {}ms",
            r.id,
            r.n,
            r.m,
            r.sites,
            r.verdict.to_string(),
            r.instances,
            r.failing_instances,
            r.residual_term_count,
            if r.oracle_agrees { "agrees" } else { "DISAGREES" },
            r.millis
        );
        if let Some(f) = &r.first_failure {
            s += &format!("  first failure: {f}");
        }
        if let Some(n) = &r.note {
            s += &format!("  ({n})");
        }
        s.push('\n');
    }
    if mismatches.is_empty() {
        s += &format!("{} reports, all match the manifest\n", reports.len());
    } else {
        s += &format!("{} mismatches against the manifest:\n", mismatches.len());
        for m in mismatches {
            s += &format!("  {} ({}|{}) N={}: expected {}, got {}", m.id, m.n, m.m, m.sites, m.expected, m.actual);
            if let Some(d) = &m.detail {
                s += &format!(" — {d}");
            }
            s.push('\n');
        }
    }
    s
}

fn main() -> ExitCode {
    let args = Args::parse();
    if args.list {
        for c in CATALOG {
            println!("{:<17} {}", c.id, c.summary);
        }
        return ExitCode::SUCCESS;
    }
    let cfg = match build_config(&args) {
        Ok(c) => c,
        Err(e) => return usage(e),
    };
    let manifest = match &args.manifest {
        None => Manifest::embedded(),
        Some(p) => match std::fs::read_to_string(p).map_err(|e| e.to_string()).and_then(|t| Manifest::parse(&t).map_err(|e| e.to_string())) {
            Ok(m) => m,
            Err(e) => return usage(format!("cannot read manifest {}: {e}", p.display())),
        },
    };
    let reports = match run_suite(&cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_MISMATCH);
        }
    };
    let mismatches = manifest.compare(&reports);

    let body = match args.format {
        Format::Text => render_text(&reports, &mismatches),
        Format::Structured => {
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "reports": reports.iter().map(record).collect::<Vec<_>>(),
                "mismatches": mismatches,
            });
            serde_json::to_string_pretty(&doc).expect("report serializes") + "\n"
        }
    };
    let written = match &args.output {
        Some(p) => std::fs::write(p, &body).map_err(|e| format!("{}: {e}", p.display())),
        None => std::io::stdout().write_all(body.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(EXIT_MISMATCH);
    }
    if let Some(p) = &args.dump_residual {
        let mut text = String::new();
        for r in reports.iter().filter(|r| r.residual.is_some()) {
            text += &format!("# {} ({}|{}) N={}\n{}\n", r.id, r.n, r.m, r.sites, r.residual.as_deref().unwrap());
        }
        if let Err(e) = std::fs::write(p, text) {
            eprintln!("error: cannot write residuals to {}: {e}", p.display());
            return ExitCode::from(EXIT_MISMATCH);
        }
    }

    if let Some(r) = reports.iter().find(|r| r.verdict == Verdict::Truncated) {
        eprintln!("term budget exceeded in case {} at ({}|{}) N={}", r.id, r.n, r.m, r.sites);
        return ExitCode::from(EXIT_CAP);
    }
    if !mismatches.is_empty() {
        for m in &mismatches {
            eprintln!("mismatch: {} ({}|{}) N={}: expected {}, got {}", m.id, m.n, m.m, m.sites, m.expected, m.actual);
        }
        return ExitCode::from(EXIT_MISMATCH);
    }
    ExitCode::SUCCESS
}
