//! Command-line front end.
//!
//! One binary, five modes: `mesh` runs the full pipeline, `pv` meshes a
//! curve assumed nonsingular, `singularities` stops after isolation,
//! `degree` counts curve branches entering a given box, and `oracle`
//! exposes the sampling references for fixture generation. `--mode NAME`
//! is accepted as an alias for the subcommand.
//!
//! Exit codes: 0 success, 2 bad input, 3 certification failure (depth cap
//! reached, zero of the energy polynomial on the region boundary, and
//! friends). Failures still print a JSON body naming the failing stage, so
//! scripted callers never have to parse prose.

use crate::bounds::{certified_report, BoundSource};
use crate::collar::{run_extended_pv, CollarOptions};
use crate::mesher::{mesh, MeshConfig};
use crate::numeric::{Box2, DyInterval, Dyadic, Rect};
use crate::poly::BiPoly;
use crate::pv::run_pv;
use crate::report::{render_svg, JsonDyadic, Report};
use crate::singular::{annulus_degree, isolate_singularities};
use crate::subdivision::{Label, SubdivisionTree};
use crate::{Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::collections::VecDeque;
use std::fs;
use std::path::PathBuf;

#[derive(Parser)]
#[command(name = "curvemesh", version, about = "Certified meshing of implicit algebraic curves")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Full pipeline: isolate singularities, mesh, reconnect branches.
    Mesh(RunArgs),
    /// Subdivision mesher only; the curve must be nonsingular in the box.
    Pv(RunArgs),
    /// Stop after singularity isolation and report the rectangles.
    Singularities(RunArgs),
    /// Count curve branches entering the given box.
    Degree(RunArgs),
    /// Non-certified sampling references for building test fixtures.
    Oracle(OracleArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Bivariate integer polynomial, e.g. "y^2 - x^3 - x^2".
    #[arg(long)]
    poly: String,
    /// Square region "[a,b]x[c,d]" with dyadic endpoints.
    #[arg(long = "box")]
    region: String,
    /// Rectangle "[a,b]x[c,d]" removed from the region; repeatable.
    #[arg(long)]
    exclude: Vec<String>,
    /// Output tolerance (dyadic, or "inf"); default infinite.
    #[arg(long)]
    eps: Option<String>,
    #[arg(long, default_value_t = 40)]
    max_depth: u32,
    /// Override for the critical-value lower bound of the energy polynomial.
    #[arg(long)]
    ev_bound: Option<String>,
    /// Override for both separation lower bounds.
    #[arg(long)]
    delta: Option<String>,
    /// Width cap for boundary collar boxes the curve may enter.
    #[arg(long)]
    collar_eps: Option<String>,
    /// Skip boundary treatment (pv mode only; curve must stay interior).
    #[arg(long)]
    no_collar: bool,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also render the report as SVG.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Worker threads for the parallel stages; output is unaffected.
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleOp {
    /// Marching-squares reference mesh over a sign grid.
    March,
    /// Sign alternations around a square loop.
    Branch,
    /// Smallest positive sampled local minimum of the polynomial.
    Critical,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    op: OracleOp,
    #[arg(long)]
    poly: String,
    /// Sample rectangle "[a,b]x[c,d]" (march, critical).
    #[arg(long = "box")]
    region: Option<String>,
    /// Grid resolution exponent: 2^n cells per side.
    #[arg(long, default_value_t = 8)]
    grid_pow: u32,
    /// Loop center "x,y" (branch).
    #[arg(long)]
    center: Option<String>,
    /// Loop half-width (branch).
    #[arg(long)]
    half_width: Option<String>,
    /// Apply the op to f^2 + fx^2 + fy^2 instead of f itself.
    #[arg(long)]
    energy: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    threads: Option<usize>,
}

/// `--mode NAME` anywhere on the line becomes the leading subcommand.
fn rewrite_mode_flag(mut argv: Vec<String>) -> Vec<String> {
    let mut mode = None;
    let mut i = 1;
    while i < argv.len() {
        if argv[i] == "--mode" && i + 1 < argv.len() {
            mode = Some(argv[i + 1].clone());
            argv.drain(i..=i + 1);
        } else if let Some(v) = argv[i].strip_prefix("--mode=") {
            mode = Some(v.to_string());
            argv.remove(i);
        } else {
            i += 1;
        }
    }
    if let Some(m) = mode {
        argv.insert(1, m);
    }
    argv
}

pub fn run() -> i32 {
    run_from(std::env::args().collect())
}

pub fn run_from(argv: Vec<String>) -> i32 {
    let argv = rewrite_mode_flag(argv);
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.cmd {
        Cmd::Mesh(a) => run_mesh(&a),
        Cmd::Pv(a) => run_pv_mode(&a),
        Cmd::Singularities(a) => run_singularities(&a),
        Cmd::Degree(a) => run_degree(&a),
        Cmd::Oracle(a) => run_oracle(&a),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => report_error(&e),
    }
}

#[derive(Serialize)]
struct ErrorBody {
    error: ErrorInner,
}

#[derive(Serialize)]
struct ErrorInner {
    stage: String,
    message: String,
}

fn error_stage(e: &Error) -> &str {
    match e {
        Error::MaxDepthExceeded { stage, .. } => stage,
        Error::SingularOnBoundary { .. } => "boundary barrier",
        Error::CardinalityViolation { .. } | Error::AlternatingPattern { .. } => "vertex placement",
        Error::CollarInterference { .. } => "collar",
        Error::ClosedLoopInAnnulus { .. } | Error::OverlappingSingularityNeighborhoods => {
            "singularity excision"
        }
        Error::AmbiguousCell { .. } => "oracle sampling",
        Error::ZeroPolynomial
        | Error::DegreeTooSmall { .. }
        | Error::Parse(_)
        | Error::Invalid(_) => "input",
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::ZeroPolynomial
        | Error::DegreeTooSmall { .. }
        | Error::Parse(_)
        | Error::Invalid(_)
        | Error::AmbiguousCell { .. } => 2,
        _ => 3,
    }
}

fn report_error(e: &Error) -> i32 {
    let body = ErrorBody {
        error: ErrorInner { stage: error_stage(e).to_string(), message: e.to_string() },
    };
    let mut s = serde_json::to_string_pretty(&body).expect("error body serializes");
    s.push('\n');
    print!("{s}");
    eprintln!("error: {e}");
    exit_code_for(e)
}

fn io_error(e: std::io::Error) -> Error {
    Error::Invalid(format!("io: {e}"))
}

fn init_threads(threads: Option<usize>) {
    if let Some(n) = threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn parse_interval(part: &str, whole: &str) -> Result<DyInterval> {
    let (a, b) = part
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("expected \"lo,hi\" inside {whole:?}")))?;
    let lo = Dyadic::parse(a)?;
    let hi = Dyadic::parse(b)?;
    if lo >= hi {
        return Err(Error::Parse(format!("empty interval [{a},{b}] in {whole:?}")));
    }
    Ok(DyInterval::new(lo, hi))
}

/// "[a,b]x[c,d]" with dyadic endpoints.
fn parse_rect(s: &str) -> Result<Rect> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("expected \"[a,b]x[c,d]\", got {s:?}"));
    let inner = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
    let (xs, ys) = inner
        .split_once("]x[")
        .or_else(|| inner.split_once("]X["))
        .ok_or_else(bad)?;
    Ok(Rect::new(parse_interval(xs, s)?, parse_interval(ys, s)?))
}

fn parse_square(s: &str) -> Result<Box2> {
    let r = parse_rect(s)?;
    if r.x.width() != r.y.width() {
        return Err(Error::Invalid(format!(
            "region box must be a square, got widths {} and {}",
            r.x.width().to_decimal_string(),
            r.y.width().to_decimal_string()
        )));
    }
    let (cx, cy) = r.center();
    Ok(Box2::centered(&cx, &cy, &r.x.width(), 0))
}

fn parse_eps(s: &Option<String>) -> Result<Option<Dyadic>> {
    match s.as_deref() {
        None | Some("inf") => Ok(None),
        Some(v) => {
            let d = Dyadic::parse(v)?;
            if !d.is_positive() {
                return Err(Error::Invalid("--eps must be positive".into()));
            }
            Ok(Some(d))
        }
    }
}

fn parse_opt_dyadic(s: &Option<String>, flag: &str) -> Result<Option<Dyadic>> {
    match s {
        None => Ok(None),
        Some(v) => {
            let d = Dyadic::parse(v)?;
            if !d.is_positive() {
                return Err(Error::Invalid(format!("{flag} must be positive")));
            }
            Ok(Some(d))
        }
    }
}

fn parse_poly(s: &str) -> Result<BiPoly> {
    let f = BiPoly::parse(s)?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    Ok(f)
}

fn build_config(a: &RunArgs) -> Result<MeshConfig> {
    let mut exclude = Vec::new();
    for e in &a.exclude {
        exclude.push(parse_rect(e)?);
    }
    Ok(MeshConfig {
        max_depth: a.max_depth,
        exclude,
        ev_bound: parse_opt_dyadic(&a.ev_bound, "--ev-bound")?,
        delta: parse_opt_dyadic(&a.delta, "--delta")?,
        eps: parse_eps(&a.eps)?,
        collar_eps: parse_opt_dyadic(&a.collar_eps, "--collar-eps")?,
        override_source: BoundSource::UserOverride,
    })
}

fn emit(report: &Report, out: &Option<PathBuf>, svg: &Option<PathBuf>) -> Result<()> {
    let json = report.to_json_string();
    match out {
        Some(p) => fs::write(p, &json).map_err(io_error)?,
        None => print!("{json}"),
    }
    if let Some(p) = svg {
        fs::write(p, render_svg(report)).map_err(io_error)?;
    }
    Ok(())
}

fn run_mesh(a: &RunArgs) -> Result<()> {
    init_threads(a.threads);
    if a.no_collar {
        return Err(Error::Invalid("--no-collar only applies to pv mode".into()));
    }
    let f = parse_poly(&a.poly)?;
    let region = parse_square(&a.region)?;
    let cfg = build_config(a)?;
    let result = mesh(&f, &region, &cfg)?;
    emit(&Report::from_mesh(&result), &a.out, &a.svg)
}

fn run_pv_mode(a: &RunArgs) -> Result<()> {
    init_threads(a.threads);
    if a.ev_bound.is_some() || a.delta.is_some() {
        return Err(Error::Invalid(
            "--ev-bound/--delta control singularity isolation; pv mode has none".into(),
        ));
    }
    let f = parse_poly(&a.poly)?;
    let region = parse_square(&a.region)?;
    let cfg = build_config(a)?;
    let mut tree = SubdivisionTree::new(region.clone(), cfg.max_depth);
    for r in &cfg.exclude {
        tree.carve_complement(r, "user exclusion")?;
    }
    let graph = if a.no_collar {
        if cfg.collar_eps.is_some() {
            return Err(Error::Invalid("--collar-eps has no effect with --no-collar".into()));
        }
        if let Some(eps) = &cfg.eps {
            let cap = eps.mul_pow2(-2);
            let mut queue: VecDeque<_> = tree.leaves_labeled(Label::Region).into();
            while let Some(id) = queue.pop_front() {
                if tree.box_of(id).width() > cap {
                    queue.extend(tree.split(id, "refinement to tolerance")?);
                }
            }
        }
        run_pv(&f, &mut tree)?
    } else {
        let opts = CollarOptions {
            collar_eps: cfg.collar_eps.clone(),
            curve_eps: cfg.eps.clone(),
        };
        run_extended_pv(&f, &mut tree, &opts)?.0
    };
    emit(&Report::from_graph(&f.to_string(), &region, &cfg, &graph, &tree), &a.out, &a.svg)
}

fn run_singularities(a: &RunArgs) -> Result<()> {
    init_threads(a.threads);
    let f = parse_poly(&a.poly)?.sqfree_part();
    let region = parse_square(&a.region)?;
    let cfg = build_config(a)?;
    let mut bounds = certified_report(&f)?;
    if let Some(v) = &cfg.ev_bound {
        bounds.ev.replace(v.clone(), BoundSource::UserOverride);
    }
    if let Some(v) = &cfg.delta {
        bounds.delta3.replace(v.clone(), BoundSource::UserOverride);
        bounds.delta4.replace(v.clone(), BoundSource::UserOverride);
    }
    let delta = if bounds.delta3.value <= bounds.delta4.value {
        bounds.delta3.value.clone()
    } else {
        bounds.delta4.value.clone()
    };
    let iso = isolate_singularities(&f, &region, &bounds.ev.value, &delta, cfg.max_depth)?;
    emit(
        &Report::from_isolation(&f.to_string(), &region, &cfg, &bounds, &iso),
        &a.out,
        &a.svg,
    )
}

fn run_degree(a: &RunArgs) -> Result<()> {
    init_threads(a.threads);
    let f = parse_poly(&a.poly)?.sqfree_part();
    let inner = parse_square(&a.region)?;
    let cfg = build_config(a)?;
    let rep = annulus_degree(&f, &inner, cfg.max_depth)?;
    let (cx, cy) = inner.center();
    let report = Report {
        config: crate::report::JsonConfig {
            poly: f.to_string(),
            region: crate::report::JsonRect::of_box(&inner),
            mode: "degree".to_string(),
            exclude: Vec::new(),
            eps: None,
            max_depth: cfg.max_depth,
            collar_eps: None,
        },
        bounds: None,
        vertices: Vec::new(),
        edges: Vec::new(),
        singularities: vec![crate::report::JsonSingularity {
            center: crate::report::JsonPoint {
                x: JsonDyadic::of(&cx),
                y: JsonDyadic::of(&cy),
            },
            degree: Some(rep.degree),
            rect: crate::report::JsonRect::of_box(&inner),
        }],
        stats: crate::report::JsonStats { boxes: 0, depth: 0, runtime_ms: 0 },
    };
    emit(&report, &a.out, &a.svg)
}

#[derive(Serialize)]
struct MarchOut {
    op: &'static str,
    grid_pow: u32,
    vertices: usize,
    edges: usize,
    components: usize,
    cycle_rank: usize,
    odd_degree_vertices: usize,
}

#[derive(Serialize)]
struct BranchOut {
    op: &'static str,
    count: u32,
}

#[derive(Serialize)]
struct CriticalOut {
    op: &'static str,
    grid_pow: u32,
    estimate: Option<JsonDyadic>,
}

fn write_small(json: String, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, &json).map_err(io_error),
        None => {
            print!("{json}");
            Ok(())
        }
    }
}

fn pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("oracle output serializes");
    s.push('\n');
    s
}

fn run_oracle(a: &OracleArgs) -> Result<()> {
    init_threads(a.threads);
    let mut f = parse_poly(&a.poly)?;
    if a.energy {
        f = f.sq_plus_grad_sq();
    }
    let need = |o: &Option<String>, flag: &str| -> Result<String> {
        o.clone().ok_or_else(|| Error::Invalid(format!("{flag} is required for this op")))
    };
    match a.op {
        OracleOp::March => {
            let region = parse_rect(&need(&a.region, "--box")?)?;
            let m = crate::oracle::marching_reference(&f, &region, a.grid_pow)?;
            let odd = m.degrees().iter().filter(|&&d| d % 2 == 1).count();
            write_small(
                pretty(&MarchOut {
                    op: "march",
                    grid_pow: a.grid_pow,
                    vertices: m.vertices.len(),
                    edges: m.edges.len(),
                    components: m.component_count(),
                    cycle_rank: m.cycle_rank(),
                    odd_degree_vertices: odd,
                }),
                &a.out,
            )
        }
        OracleOp::Branch => {
            let c = need(&a.center, "--center")?;
            let (xs, ys) = c
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected \"x,y\", got {c:?}")))?;
            let cx = Dyadic::parse(xs)?;
            let cy = Dyadic::parse(ys)?;
            let hw = Dyadic::parse(&need(&a.half_width, "--half-width")?)?;
            let count = crate::oracle::loop_branch_count(&f, &cx, &cy, &hw)?;
            write_small(pretty(&BranchOut { op: "branch", count }), &a.out)
        }
        OracleOp::Critical => {
            let region = parse_rect(&need(&a.region, "--box")?)?;
            let est = crate::oracle::min_positive_critical_estimate(&f, &region, a.grid_pow);
            write_small(
                pretty(&CriticalOut {
                    op: "critical",
                    grid_pow: a.grid_pow,
                    estimate: est.as_ref().map(JsonDyadic::of),
                }),
                &a.out,
            )
        }
    }
}
