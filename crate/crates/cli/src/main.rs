mod svg;

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use splitline::collision::{
    back_and_forth, sqrt2_shifted, stern_brocot_prefix, theorem1_witness_with, Auto1D, RealInterval,
    DEFAULT_ITERATION_CAP,
};
use splitline::completion::{cpoint_compare, embed_enclosure, std_interval, CPoint, IntervalBound, IntervalSpec};
use splitline::order_maps::{decompose_interval, parse_map, parse_point, space_point_compare, SpacePoint};
use splitline::sample::Sampler;
use splitline::tailclass::{classify, in_C, meeting_rep, signature, tail_equivalent};
use splitline::zseq::{lex_compare_capped, parse_zseq_literal, ZSeq, DEFAULT_COMPARE_CAP};
use splitline::{run_verify, Error};

#[derive(Parser)]
#[command(name = "splitline", version, about = "Exact Z^omega order arithmetic, interval isomorphisms and collision runs")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Opts {
    /// Seed for every sampled choice
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Expansion depth for prefixes and enclosures
    #[arg(long, global = true, default_value_t = 64)]
    depth: usize,
    /// Numeric tolerance for collision runs
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol: f64,
    /// Print JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Write an SVG plot (embed, collide)
    #[arg(long, global = true)]
    svg: Option<PathBuf>,
    /// Override the iteration or comparison cap
    #[arg(long, global = true)]
    cap: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Operations on sequence literals such as `[1|0,2;+1]`
    #[command(subcommand)]
    Seq(SeqCmd),
    /// A, B or C class of a sequence
    Classify {
        literal: String,
    },
    /// Tail equivalence
    #[command(subcommand, name = "tailrel")]
    TailRel(TailCmd),
    /// Standard intervals and interval decompositions
    #[command(subcommand)]
    Interval(IntervalCmd),
    /// Order maps written as s-expressions
    #[command(subcommand)]
    Map(MapCmd),
    /// Rational enclosures of completion points in (0, 1)
    Embed {
        #[arg(required = true)]
        points: Vec<String>,
        /// Write the enclosure table as CSV
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Run the collision construction for an automorphism of the line
    Collide {
        /// Automorphism family, e.g. translate:1, conjtrans:-0.5,2,1, pwl:0,1;1,2.5
        #[arg(long = "f", default_value = "translate:1", allow_hyphen_values = true)]
        f: String,
        /// Automorphism of I to use instead of the seeded default
        #[arg(long = "g", allow_hyphen_values = true)]
        g: Option<String>,
        /// Interval K as LO,HI (default: the domain of f)
        #[arg(long = "k", allow_hyphen_values = true)]
        k: Option<String>,
    },
    /// Back-and-forth matching of Stern-Brocot rationals with their shifts by sqrt 2
    Cantor {
        #[arg(long, default_value_t = 10)]
        steps: usize,
        /// Enumerated points available on each side
        #[arg(long, default_value_t = 4096)]
        pool: usize,
    },
    /// Run a seeded property suite
    Verify {
        /// order-laws, tailrel, classify, maps, everywhere, collision, embed or all
        suite: String,
    },
}

#[derive(Subcommand)]
enum SeqCmd {
    /// Print the normal form
    Normalize {
        literal: String,
    },
    /// Lexicographic comparison
    Compare {
        a: String,
        b: String,
    },
    /// Entrywise sum
    Add {
        a: String,
        b: String,
    },
    /// Drop the first M entries
    Tail {
        literal: String,
        m: usize,
    },
    /// First N entries (default: --depth)
    Prefix {
        literal: String,
        n: Option<usize>,
    },
}

#[derive(Subcommand)]
enum TailCmd {
    /// Whether two sequences share a tail
    Check {
        a: String,
        b: String,
    },
    /// Shortest prefixes r, s and common tail t with a = r t, b = s t
    Meet {
        a: String,
        b: String,
    },
}

#[derive(Subcommand)]
enum IntervalCmd {
    /// Endpoints of the standard interval of a finite sequence such as (1,2)
    Endpoints {
        #[arg(allow_hyphen_values = true)]
        label: String,
    },
    /// Decomposition of (LO, HI) into sums of standard intervals
    Decompose {
        #[arg(allow_hyphen_values = true)]
        lo: String,
        #[arg(allow_hyphen_values = true)]
        hi: String,
    },
}

#[derive(Subcommand)]
enum MapCmd {
    /// Validate a map and print its domain and codomain
    Build { expr: String },
    /// Apply a map to a point
    Apply {
        expr: String,
        point: String,
    },
    /// Apply the inverse of a map to a point
    Inverse {
        expr: String,
        point: String,
    },
    /// Round-trip and order checks on seeded samples of the domain
    Check {
        expr: String,
        #[arg(long, default_value_t = 200)]
        cases: usize,
    },
}

enum Outcome {
    Ok,
    Failed,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Failed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

type CliResult<T> = Result<T, String>;

fn err(e: Error) -> String {
    e.to_string()
}

fn lit(s: &str) -> CliResult<ZSeq> {
    parse_zseq_literal(s).map_err(err)
}

fn emit<T: Serialize>(opts: &Opts, value: &T, text: impl FnOnce() -> String) -> CliResult<()> {
    let body = if opts.json { serde_json::to_string_pretty(value).map_err(|e| e.to_string())? } else { text() };
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{body}").and_then(|_| out.flush()) {
        // reader went away, as with `| head`
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => std::process::exit(0),
        r => r.map_err(|e| e.to_string()),
    }
}

fn order_word(o: Ordering) -> &'static str {
    match o {
        Ordering::Less => "less",
        Ordering::Equal => "equal",
        Ordering::Greater => "greater",
    }
}

fn run(cli: &Cli) -> CliResult<Outcome> {
    let opts = &cli.opts;
    match &cli.command {
        Command::Seq(cmd) => seq(opts, cmd)?,
        Command::Classify { literal } => {
            let u = lit(literal)?;
            let class = classify(&u);
            let sig = signature(&u);
            emit(opts, &json!({"literal": u.to_string(), "class": class, "in_C": in_C(&u), "signature": sig}), || {
                format!("{class}\nsignature {sig}")
            })?;
        }
        Command::TailRel(cmd) => tailrel(opts, cmd)?,
        Command::Interval(cmd) => interval(opts, cmd)?,
        Command::Map(cmd) => return map(opts, cmd),
        Command::Embed { points, csv } => embed(opts, points, csv.as_ref())?,
        Command::Collide { f, g, k } => collide(opts, f, g.as_deref(), k.as_deref())?,
        Command::Cantor { steps, pool } => cantor(opts, *steps, *pool)?,
        Command::Verify { suite } => return verify(opts, suite),
    }
    Ok(Outcome::Ok)
}

fn seq(opts: &Opts, cmd: &SeqCmd) -> CliResult<()> {
    match cmd {
        SeqCmd::Normalize { literal } => {
            let u = lit(literal)?;
            emit(opts, &json!({"literal": u.to_string(), "zseq": u}), || u.to_string())
        }
        SeqCmd::Compare { a, b } => {
            let (u, v) = (lit(a)?, lit(b)?);
            let cap = opts.cap.unwrap_or(DEFAULT_COMPARE_CAP);
            let order = lex_compare_capped(&u, &v, cap).map_err(err)?;
            let at = u.first_difference(&v, cap).map_err(err)?;
            emit(opts, &json!({"order": order_word(order), "first_difference": at}), || {
                let sym = match order {
                    Ordering::Less => "<",
                    Ordering::Equal => "=",
                    Ordering::Greater => ">",
                };
                match at {
                    Some(i) => format!("{u} {sym} {v} (first difference at index {i})"),
                    None => format!("{u} {sym} {v}"),
                }
            })
        }
        SeqCmd::Add { a, b } => {
            let w = lit(a)?.add(&lit(b)?);
            emit(opts, &json!({"literal": w.to_string(), "zseq": w}), || w.to_string())
        }
        SeqCmd::Tail { literal, m } => {
            let w = lit(literal)?.tail_shift(*m);
            emit(opts, &json!({"literal": w.to_string(), "zseq": w}), || w.to_string())
        }
        SeqCmd::Prefix { literal, n } => {
            let p = lit(literal)?.prefix(n.unwrap_or(opts.depth));
            emit(opts, &json!({"prefix": p.to_string()}), || p.to_string())
        }
    }
}

fn tailrel(opts: &Opts, cmd: &TailCmd) -> CliResult<()> {
    match cmd {
        TailCmd::Check { a, b } => {
            let eq = tail_equivalent(&lit(a)?, &lit(b)?);
            emit(opts, &json!({"equivalent": eq}), || if eq { "equivalent" } else { "not equivalent" }.to_string())
        }
        TailCmd::Meet { a, b } => {
            let m = meeting_rep(&lit(a)?, &lit(b)?).map_err(err)?;
            emit(opts, &m, || format!("r = {}\ns = {}\ntail = {}", m.r, m.s, m.common_tail))
        }
    }
}

fn interval(opts: &Opts, cmd: &IntervalCmd) -> CliResult<()> {
    match cmd {
        IntervalCmd::Endpoints { label } => {
            let r = match label.parse::<CPoint>().map_err(err)? {
                CPoint::Fin(r) => r,
                CPoint::Seq(_) => return Err("a standard interval needs a finite label such as (1,2)".into()),
            };
            let spec = std_interval(&r).map_err(err)?;
            emit(opts, &spec, || spec.to_string())
        }
        IntervalCmd::Decompose { lo, hi } => {
            let lo: IntervalBound = lo.parse().map_err(err)?;
            let hi: IntervalBound = hi.parse().map_err(err)?;
            let spec = IntervalSpec::new(lo, hi).map_err(err)?;
            let plan = decompose_interval(&spec).map_err(err)?;
            emit(opts, &json!({"interval": spec, "plan": plan}), || format!("{spec}\n{plan}"))
        }
    }
}

fn map(opts: &Opts, cmd: &MapCmd) -> CliResult<Outcome> {
    match cmd {
        MapCmd::Build { expr } => {
            let m = parse_map(expr).map_err(err)?;
            let (dom, cod) = (m.domain(), m.codomain());
            emit(opts, &json!({"map": m.to_string(), "domain": dom.to_string(), "codomain": cod.to_string()}), || {
                format!("{m}\ndomain {dom}\ncodomain {cod}")
            })?;
        }
        MapCmd::Apply { expr, point } | MapCmd::Inverse { expr, point } => {
            let m = parse_map(expr).map_err(err)?;
            let p = parse_point(point).map_err(err)?;
            let q = if matches!(cmd, MapCmd::Apply { .. }) { m.apply(&p) } else { m.unapply(&p) }.map_err(err)?;
            emit(opts, &json!({"input": p, "output": q, "output_text": q.to_string()}), || q.to_string())?;
        }
        MapCmd::Check { expr, cases } => {
            let m = parse_map(expr).map_err(err)?;
            let dom = m.domain();
            let mut sampler = Sampler::new(opts.seed);
            let mut points: Vec<SpacePoint> = Vec::with_capacity(*cases);
            let mut failures: Vec<String> = Vec::new();
            for _ in 0..*cases {
                match sampler.space_point(&dom) {
                    Some(p) => points.push(p),
                    None => failures.push(format!("could not sample a point of {dom}")),
                }
            }
            let mut images = Vec::with_capacity(points.len());
            for p in &points {
                match m.apply(p).and_then(|q| m.unapply(&q).map(|back| (q, back))) {
                    Ok((q, back)) if back == *p => images.push((p.clone(), q)),
                    Ok((_, back)) => failures.push(format!("{p} came back as {back}")),
                    Err(e) => failures.push(format!("{p}: {e}")),
                }
            }
            images.sort_by(|a, b| space_point_compare(&a.0, &b.0).unwrap_or(Ordering::Equal));
            images.dedup_by(|a, b| a.0 == b.0);
            for w in images.windows(2) {
                if space_point_compare(&w[0].1, &w[1].1) != Ok(Ordering::Less) {
                    failures.push(format!("order lost between {} and {}", w[0].0, w[1].0));
                }
            }
            let report = json!({"map": m.to_string(), "seed": opts.seed, "cases": cases, "failures": failures});
            emit(opts, &report, || {
                let mut s = format!("{} cases, {} failures", cases, failures.len());
                for f in failures.iter().take(10) {
                    let _ = write!(s, "\n  {f}");
                }
                s
            })?;
            if !failures.is_empty() {
                return Ok(Outcome::Failed);
            }
        }
    }
    Ok(Outcome::Ok)
}

#[derive(Serialize)]
struct EnclosureRow {
    point: String,
    depth: usize,
    lo: String,
    hi: String,
    lo_decimal: f64,
    hi_decimal: f64,
}

fn embed(opts: &Opts, points: &[String], csv_path: Option<&PathBuf>) -> CliResult<()> {
    let mut rows = Vec::with_capacity(points.len());
    let mut parsed = Vec::with_capacity(points.len());
    for text in points {
        let p: CPoint = text.parse().map_err(err)?;
        let e = embed_enclosure(&p, opts.depth);
        rows.push(EnclosureRow {
            point: p.to_string(),
            depth: opts.depth,
            lo: e.lo.to_string(),
            hi: e.hi.to_string(),
            lo_decimal: e.lo_f64(),
            hi_decimal: e.hi_f64(),
        });
        parsed.push(p);
    }
    for w in parsed.windows(2) {
        if let Err(e) = cpoint_compare(&w[0], &w[1]) {
            eprintln!("warning: {e}");
        }
    }
    if let Some(path) = csv_path {
        let mut out = csv::Writer::from_path(path).map_err(|e| e.to_string())?;
        for row in &rows {
            out.serialize(row).map_err(|e| e.to_string())?;
        }
        out.flush().map_err(|e| e.to_string())?;
    }
    if let Some(path) = &opts.svg {
        let marks: Vec<(String, f64, f64)> = rows.iter().map(|r| (r.point.clone(), r.lo_decimal, r.hi_decimal)).collect();
        std::fs::write(path, svg::enclosures(&marks)).map_err(|e| e.to_string())?;
    }
    emit(opts, &rows, || {
        rows.iter()
            .map(|r| format!("{}  [{:.17}, {:.17}]", r.point, r.lo_decimal, r.hi_decimal))
            .collect::<Vec<_>>()
            .join("\n")
    })
}

fn parse_window(s: &str) -> CliResult<RealInterval> {
    let (lo, hi) = s.split_once(',').ok_or("K must be LO,HI")?;
    let read = |t: &str| -> CliResult<f64> {
        match t.trim() {
            "-inf" => Ok(f64::NEG_INFINITY),
            "inf" | "+inf" => Ok(f64::INFINITY),
            t => t.parse().map_err(|_| format!("cannot read `{t}` as a number")),
        }
    };
    RealInterval::new(read(lo)?, read(hi)?).map_err(err)
}

fn collide(opts: &Opts, f: &str, g: Option<&str>, k: Option<&str>) -> CliResult<()> {
    let f: Auto1D = f.parse().map_err(err)?;
    let g: Option<Auto1D> = g.map(str::parse).transpose().map_err(err)?;
    let k = match k {
        Some(s) => parse_window(s)?,
        None => f.domain(),
    };
    let cap = opts.cap.unwrap_or(DEFAULT_ITERATION_CAP);
    let report = theorem1_witness_with(&f, k, opts.seed, opts.tol, g.as_ref(), cap).map_err(err)?;
    if let Some(path) = &opts.svg {
        std::fs::write(path, svg::ladder(&report)).map_err(|e| e.to_string())?;
    }
    emit(opts, &report, || {
        format!(
            "f = {}\ng = {} on I = {}\nx = {}  y = {}\nn = {}  J = [{}, {}]\nN = {}\nc = {}  residual = {:e} after {} bisection steps\n{}",
            report.f,
            report.g,
            report.i,
            report.x,
            report.y,
            report.n,
            report.j.lo,
            report.j.hi,
            report.big_n,
            report.c,
            report.residual,
            report.bisection_steps,
            report.parity_note
        )
    })
}

fn cantor(opts: &Opts, steps: usize, pool: usize) -> CliResult<()> {
    let fracs = stern_brocot_prefix(pool);
    let a: Vec<f64> = fracs.iter().map(|&(p, q)| p as f64 / q as f64).collect();
    let b = sqrt2_shifted(&a);
    let pairs = back_and_forth(&a, &b, steps).map_err(err)?;
    emit(opts, &pairs, || {
        pairs
            .iter()
            .map(|m| {
                let (p, q) = fracs[m.ia];
                let (bp, bq) = fracs[m.ib];
                format!("a[{}] = {p}/{q}  <->  b[{}] = frac({bp}/{bq} + sqrt 2) = {}", m.ia, m.ib, m.b)
            })
            .collect::<Vec<_>>()
            .join("\n")
    })
}

fn verify(opts: &Opts, suite: &str) -> CliResult<Outcome> {
    let start = Instant::now();
    let report = run_verify(suite, opts.seed).map_err(err)?;
    let elapsed = start.elapsed();
    emit(opts, &report, || {
        let mut s = String::new();
        for r in &report.suites {
            let _ = writeln!(s, "{}: {} cases, {} checks, {} failures", r.suite, r.cases, r.checks, r.failures.len());
            for f in r.failures.iter().take(5) {
                let _ = writeln!(s, "  case {} (seed {}): {} on {}", f.case, f.case_seed, f.detail, f.input);
            }
        }
        let verdict = if report.passed() { "PASS" } else { "FAIL" };
        let _ = write!(s, "{verdict}: {} cases, {} failures", report.cases, report.failure_count);
        s
    })?;
    eprintln!("elapsed {:.2}s", elapsed.as_secs_f64());
    Ok(if report.passed() { Outcome::Ok } else { Outcome::Failed })
}

