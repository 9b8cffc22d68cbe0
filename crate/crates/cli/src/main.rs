#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use cpacked::curve::{load_curve, to_csv, CurveFormat, PolyCurve};
use cpacked::exact::min_c_exact;
use cpacked::generate::{generate, CurveKind};
use cpacked::geometry::{Disk, Point};
use cpacked::haq::{build_haq, length_query, length_query_scan};
use cpacked::mpc::{mpc_vertex_relative, MpcOptions};
use cpacked::relative::{s_relative_exact, vertex_relative, AnchorSet};
use cpacked::report::PackednessReport;
use cpacked::sweep::min_c_sweep;
use cpacked::wspd::min_c_wspd;

#[derive(Parser)]
#[command(name = "cpacked", version, about = "Packedness of polygonal curves")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the packedness of a curve and print a JSON report.
    Pack(PackArgs),
    /// Length of the curve inside one disk.
    Query(QueryArgs),
    /// Print a generated curve as CSV.
    Gen(GenArgs),
    /// Run a suite of generated instances and print one JSON line per case.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Algo {
    Exact,
    VertexRelative,
    SRelative,
    Wspd,
    Sweep,
    Mpc,
}

#[derive(clap::Args)]
struct PackArgs {
    /// Curve file: CSV (`x,y` per line) or JSON (`.json`); `-` reads CSV
    /// from stdin.
    curve: PathBuf,
    #[arg(long, value_enum)]
    algo: Algo,
    /// Approximation parameter (wspd, sweep).
    #[arg(long)]
    epsilon: Option<f64>,
    /// Memory exponent in (0, 1] (mpc).
    #[arg(long)]
    eta: Option<f64>,
    /// Anchor points file in the curve CSV format (s-relative).
    #[arg(long)]
    anchors: Option<PathBuf>,
    /// Evaluate vertex-relative packedness only at event radii.
    #[arg(long)]
    events_only: bool,
    /// Restrict the mpc evaluation to vertex-to-vertex radii.
    #[arg(long)]
    vertex_pairs: bool,
    /// Worker threads (the algorithms run sequentially; accepted for
    /// interface symmetry with bench).
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    threads: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum Backend {
    Scan,
    Haq,
}

#[derive(clap::Args)]
struct QueryArgs {
    curve: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    cx: f64,
    #[arg(long, allow_negative_numbers = true)]
    cy: f64,
    #[arg(long)]
    r: f64,
    #[arg(long, value_enum, default_value = "scan")]
    backend: Backend,
}

#[derive(clap::Args)]
struct GenArgs {
    #[arg(long, value_parser = parse_kind)]
    kind: CurveKind,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(clap::Args)]
struct BenchArgs {
    /// JSON suite: `{"cases": [{"kind": "walk", "n": 8, "seed": 1, "algo": "exact"}, ...]}`.
    #[arg(long)]
    suite: PathBuf,
    /// Cases run concurrently; output order is the suite order.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    threads: u32,
}

fn parse_kind(s: &str) -> Result<CurveKind, String> {
    s.parse()
}

enum Failure {
    /// Bad input or flags: exit 2.
    Usage(String),
    /// The algorithm's preconditions do not hold: exit 3.
    Precondition(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Precondition(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Precondition(m) => m,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Pack(a) => pack(&a),
        Command::Query(a) => query(&a),
        Command::Gen(a) => gen(&a),
        Command::Bench(a) => bench(&a),
    };
    match result.and_then(|out| emit(&out)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn emit(text: &str) -> Result<(), Failure> {
    let mut stdout = io::stdout().lock();
    stdout
        .write_all(text.as_bytes())
        .and_then(|_| stdout.flush())
        .map_err(|e| Failure::Usage(format!("cannot write output: {e}")))
}

fn read_curve(path: &Path) -> Result<PolyCurve, Failure> {
    let fail = |e: String| Failure::Usage(format!("{}: {e}", path.display()));
    if path == Path::new("-") {
        return load_curve(io::stdin().lock(), CurveFormat::Csv).map_err(|e| fail(e.to_string()));
    }
    let format = match path.extension().and_then(|e| e.to_str()) {
        Some(e) if e.eq_ignore_ascii_case("json") => CurveFormat::Json,
        _ => CurveFormat::Csv,
    };
    let file = File::open(path).map_err(|e| fail(e.to_string()))?;
    load_curve(file, format).map_err(|e| fail(e.to_string()))
}

fn read_anchors(path: &Path) -> Result<AnchorSet, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    let mut points = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let coords: Vec<f64> = content
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|e| Failure::Usage(format!("{}:{}: {e}", path.display(), i + 1)))?;
        let [x, y] = coords[..] else {
            return Err(Failure::Usage(format!("{}:{}: expected x,y", path.display(), i + 1)));
        };
        points.push(Point::new(x, y));
    }
    AnchorSet::new(points).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn need(v: Option<f64>, flag: &str, algo: &str) -> Result<f64, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("--{flag} is required for --algo {algo}")))
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("reports serialize") + "\n"
}

struct PackRequest<'a> {
    algo: Algo,
    epsilon: Option<f64>,
    eta: Option<f64>,
    anchors: Option<&'a AnchorSet>,
    events_only: bool,
    vertex_pairs: bool,
}

fn run(curve: &PolyCurve, req: &PackRequest) -> Result<Value, Failure> {
    let report: PackednessReport = match req.algo {
        Algo::Exact => min_c_exact(curve),
        Algo::VertexRelative => vertex_relative(curve, !req.events_only),
        Algo::SRelative => {
            let anchors = req.anchors.ok_or_else(|| Failure::Usage("--anchors is required for --algo s-relative".into()))?;
            s_relative_exact(curve, anchors)
        }
        Algo::Wspd => {
            let eps = need(req.epsilon, "epsilon", "wspd")?;
            if !(eps > 0.0 && eps <= 2.0) {
                return Err(Failure::Usage(format!("--epsilon must lie in (0, 2] for wspd, got {eps}")));
            }
            min_c_wspd(curve, eps)
        }
        Algo::Sweep => {
            let eps = need(req.epsilon, "epsilon", "sweep")?;
            if !(eps > 0.0) {
                return Err(Failure::Usage(format!("--epsilon must be positive, got {eps}")));
            }
            min_c_sweep(curve, eps).map_err(|e| Failure::Precondition(e.to_string()))?
        }
        Algo::Mpc => {
            let eta = need(req.eta, "eta", "mpc")?;
            if !(eta > 0.0 && eta <= 1.0) {
                return Err(Failure::Usage(format!("--eta must lie in (0, 1], got {eta}")));
            }
            let opts = MpcOptions { extended: !req.vertex_pairs, ..MpcOptions::default() };
            let (report, log) = mpc_vertex_relative(curve, eta, opts).map_err(|e| Failure::Precondition(e.to_string()))?;
            let mut v = serde_json::to_value(&report).expect("reports serialize");
            v["round_log"] = serde_json::to_value(&log).expect("logs serialize");
            return Ok(v);
        }
    };
    Ok(serde_json::to_value(&report).expect("reports serialize"))
}

fn pack(a: &PackArgs) -> Result<String, Failure> {
    let curve = read_curve(&a.curve)?;
    let anchors = a.anchors.as_deref().map(read_anchors).transpose()?;
    let req = PackRequest {
        algo: a.algo,
        epsilon: a.epsilon,
        eta: a.eta,
        anchors: anchors.as_ref(),
        events_only: a.events_only,
        vertex_pairs: a.vertex_pairs,
    };
    run(&curve, &req).map(|v| to_json(&v))
}

fn query(a: &QueryArgs) -> Result<String, Failure> {
    let curve = read_curve(&a.curve)?;
    if !(a.r >= 0.0) || !a.cx.is_finite() || !a.cy.is_finite() {
        return Err(Failure::Usage("the query disk needs a finite center and a non-negative radius".into()));
    }
    let q = Disk::new(Point::new(a.cx, a.cy), a.r);
    let out = match a.backend {
        Backend::Scan => json!({ "backend": "scan", "length": length_query_scan(&curve, &q) }),
        Backend::Haq => {
            if !(a.r > 0.0) {
                return Err(Failure::Precondition("the haq backend needs a positive radius".into()));
            }
            let idx = build_haq(&curve);
            let ans = length_query(&idx, &q);
            json!({
                "backend": "haq",
                "length": ans.length,
                "level": ans.level,
                "fallback": ans.fell_back(),
                "candidates": ans.candidates,
                "hits": ans.hits,
                "levels": idx.radii().len(),
            })
        }
    };
    Ok(to_json(&out))
}

fn gen(a: &GenArgs) -> Result<String, Failure> {
    let min = if a.kind == CurveKind::Star { 3 } else { 2 };
    if a.n < min {
        return Err(Failure::Usage(format!("--n must be at least {min} for {}", a.kind)));
    }
    Ok(to_csv(&generate(a.kind, a.n, a.seed)))
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct Case {
    kind: String,
    n: usize,
    #[serde(default)]
    seed: u64,
    algo: Algo,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    eta: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Suite {
    cases: Vec<Case>,
}

fn bench_case(case: &Case) -> Result<Value, Failure> {
    let kind: CurveKind = case.kind.parse().map_err(Failure::Usage)?;
    if case.n < 3 {
        return Err(Failure::Usage(format!("bench cases need n >= 3, got {}", case.n)));
    }
    let curve = generate(kind, case.n, case.seed);
    let req = PackRequest { algo: case.algo, epsilon: case.epsilon, eta: case.eta, anchors: None, events_only: false, vertex_pairs: false };
    if case.algo == Algo::SRelative {
        return Err(Failure::Usage("bench does not support s-relative".into()));
    }
    let report = run(&curve, &req)?;
    let mut line = serde_json::to_value(case).expect("cases serialize");
    for key in ["algorithm", "c_estimate", "certified_lo", "certified_hi", "counters", "wall_time_ms"] {
        line[key] = report[key].clone();
    }
    Ok(line)
}

fn bench(a: &BenchArgs) -> Result<String, Failure> {
    let text = std::fs::read_to_string(&a.suite).map_err(|e| Failure::Usage(format!("{}: {e}", a.suite.display())))?;
    let suite: Suite = serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", a.suite.display())))?;
    let mut results: Vec<Option<Result<Value, Failure>>> = (0..suite.cases.len()).map(|_| None).collect();
    let workers = (a.threads as usize).min(suite.cases.len()).max(1);
    std::thread::scope(|scope| {
        let chunks: Vec<_> = results.chunks_mut(suite.cases.len().div_ceil(workers).max(1)).collect();
        let mut start = 0;
        for chunk in chunks {
            let cases = &suite.cases[start..start + chunk.len()];
            start += chunk.len();
            scope.spawn(move || {
                for (slot, case) in chunk.iter_mut().zip(cases) {
                    *slot = Some(bench_case(case));
                }
            });
        }
    });
    let mut out = String::new();
    for r in results {
        out.push_str(&to_json(&r.expect("every case ran")?));
    }
    Ok(out)
}
