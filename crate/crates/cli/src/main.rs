//! `curvedim`: command-line access to the bounds library.
//!
//! Exit codes: 0 success, 1 usage error, 2 vacuous or out-of-range query,
//! 3 no certificate / witness / threshold.

mod render;
mod scan;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use curvedim::bounds::{
    castelnuovo_params, castelnuovo_pi, lower_bound, mu_closed_form, mu_minimal_s,
    surface_restriction_bound, BoundError, Provenance,
};
use curvedim::determinantal::{
    family_p3_invariants, family_p3_uniform_dimension, family_q_invariants, ratio_analysis,
    search_family_p3, FamilyP3, FamilyQ, DEFAULT_MAX_K, DEFAULT_MAX_S,
};
use curvedim::exactpoly::{approx_decimal, approx_sqrt_decimal, ratio};
use curvedim::quadric::{coverage_report, gb_threshold, gb_witness};
use curvedim::resolutions::{
    curve_class_from_resolution, curve_hilbert_poly, CurveClass, GradedResolution,
    ResolutionError,
};
use curvedim::rigidity::{
    rigidity_certificate, rigidity_threshold, RigidityCertificate, RigidityError,
    RigidityOutcome,
};
use curvedim::Int;
use serde_json::{json, Value};
use thiserror::Error;

use scan::{parse_int, parse_range, Range, ScanSpec};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    OutOfRange(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::OutOfRange(_) => 2,
        }
    }
}

impl From<BoundError> for CliError {
    fn from(e: BoundError) -> Self {
        match e {
            BoundError::OutOfRange { d, g, r, pi } => {
                CliError::OutOfRange(format!("g={g} exceeds π({d},{r})={pi}"))
            }
            other => CliError::OutOfRange(other.to_string()),
        }
    }
}

impl From<RigidityError> for CliError {
    fn from(e: RigidityError) -> Self {
        match e {
            RigidityError::OutOfRange { d, g, pi } => {
                CliError::OutOfRange(format!("g={g} exceeds π({d},4)={pi}"))
            }
            other => CliError::OutOfRange(other.to_string()),
        }
    }
}

/// Exact dimension bounds for Hilbert schemes of space curves.
#[derive(Parser)]
#[command(name = "curvedim", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Output {
    /// Print JSON instead of `key: value` text.
    #[arg(long, global = true)]
    json: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Lower bound on the dimension of a component of the Hilbert scheme.
    Bound {
        #[arg(short, value_parser = parse_int)]
        d: Int,
        #[arg(short, value_parser = parse_int)]
        g: Int,
        #[arg(short, value_parser = parse_int, default_value = "3")]
        r: Int,
        /// Print the derivation step by step.
        #[arg(long)]
        explain: bool,
        #[command(flatten)]
        out: Output,
    },
    /// Castelnuovo's genus bound π(d, r).
    Pi {
        #[arg(short, value_parser = parse_int)]
        d: Int,
        #[arg(short, value_parser = parse_int, default_value = "3")]
        r: Int,
        #[command(flatten)]
        out: Output,
    },
    /// Degree bound μ(d, g) of a surface containing the curve, both ways.
    Mu {
        #[arg(short, value_parser = parse_int)]
        d: Int,
        #[arg(short, value_parser = parse_int)]
        g: Int,
        #[command(flatten)]
        out: Output,
    },
    /// Invariants of a determinantal family in P³ or on the quadric.
    Family {
        /// Row degrees k_1,...,k_s of the matrix (P³).
        #[arg(long, value_delimiter = ',', required_unless_present = "quadric", conflicts_with = "quadric")]
        rows: Vec<u32>,
        /// Size t of a t×(t+1) matrix of linear forms on the quadric.
        #[arg(long)]
        quadric: Option<u32>,
        #[command(flatten)]
        out: Output,
    },
    /// Determinantal families in P³ with the given degree and genus.
    FamilySearch {
        #[arg(short, value_parser = parse_int)]
        d: Int,
        #[arg(short, value_parser = parse_int)]
        g: Int,
        #[arg(long, default_value_t = DEFAULT_MAX_S)]
        max_s: u32,
        #[arg(long, default_value_t = DEFAULT_MAX_K)]
        max_k: u32,
        #[command(flatten)]
        out: Output,
    },
    /// Non-rigidity certificate for a curve in P⁴.
    Rigidity {
        #[arg(short, value_parser = parse_int, required_unless_present = "verify")]
        d: Option<Int>,
        #[arg(short, value_parser = parse_int, required_unless_present = "verify")]
        g: Option<Int>,
        /// Re-verify a certificate previously printed with --json.
        #[arg(long, conflicts_with_all = ["d", "g"])]
        verify: Option<PathBuf>,
        #[command(flatten)]
        out: Output,
    },
    /// Smallest genus certified non-rigid at degree d.
    RigidityThreshold {
        #[arg(short, value_parser = parse_int)]
        d: Int,
        #[command(flatten)]
        out: Output,
    },
    /// Curves on the smooth quadric threefold.
    Quadric {
        #[command(subcommand)]
        command: QuadricCommand,
    },
    /// Grid scan written as CSV or JSON.
    Scan {
        #[arg(long, value_enum)]
        target: scan::Target,
        /// Degrees: a:b[:step] or a comma list.
        #[arg(short, value_parser = parse_range)]
        d: Range,
        /// Genera, same syntax.
        #[arg(short, value_parser = parse_range)]
        g: Option<Range>,
        /// Ambient dimensions (pi target only; default 3).
        #[arg(short, value_parser = parse_range)]
        r: Option<Range>,
        /// Read -g as offsets from the smallest g with g² ≥ d³.
        #[arg(long)]
        g_relative: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: scan::Format,
        #[arg(long, default_value_t = default_workers())]
        workers: usize,
    },
    /// Degree and genus from a graded free resolution file ("-" for stdin).
    Resolve {
        file: PathBuf,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Subcommand)]
enum QuadricCommand {
    /// Large-genus witness k.
    Witness {
        #[arg(short, value_parser = parse_int)]
        d: Int,
        #[arg(short, value_parser = parse_int)]
        g: Int,
        #[command(flatten)]
        out: Output,
    },
    /// Smallest genus admitting a witness.
    Threshold {
        #[arg(short, value_parser = parse_int)]
        d: Int,
        #[command(flatten)]
        out: Output,
    },
    /// Genus ranges reached by smoothing determinantal curves.
    Coverage {
        #[arg(short, value_parser = parse_int)]
        d: Int,
        #[command(flatten)]
        out: Output,
    },
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

pub fn branch_label(p: Provenance) -> &'static str {
    match p {
        Provenance::BelowCubeRatio => "A",
        Provenance::LowDegreeSurface => "B",
        Provenance::ExpectedDimension => "expected_dimension",
        Provenance::SurfaceRestriction => "surface_restriction",
        Provenance::CompleteIntersectionDeformation => "complete_intersection",
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

/// `g / d^{3/2}` as the exact `g²/d³` plus a truncated decimal of its root.
fn three_halves(g: Int, d: Int) -> (String, String) {
    let sq = ratio(g * g, d * d * d);
    let approx = approx_sqrt_decimal(&sq, 12).expect("non-negative");
    (sq.to_string(), approx)
}

fn cmd_bound(d: Int, g: Int, r: Int, explain: bool, out: Output) -> Result<ExitCode, CliError> {
    let cert = lower_bound(&CurveClass::new(d, g, r))?;
    let mut v = json!({
        "d": d,
        "g": g,
        "r": r,
        "value": cert.value,
        "branch": branch_label(cert.provenance),
        "provenance": to_value(&cert.provenance),
        "mu": cert.s,
        "verified": cert.verify(),
    });
    if explain {
        v["explain"] = to_value(&cert.explain());
    }
    render::emit(&v, out.json);
    Ok(ExitCode::SUCCESS)
}

fn cmd_pi(d: Int, r: Int, out: Output) -> Result<ExitCode, CliError> {
    if d < 1 || r < 2 {
        return Err(CliError::OutOfRange(format!("need d >= 1 and r >= 2, got d={d}, r={r}")));
    }
    let p = castelnuovo_params(d, r);
    let v = json!({
        "d": d,
        "r": r,
        "m": p.m,
        "epsilon": p.epsilon,
        "pi": castelnuovo_pi(d, r),
    });
    render::emit(&v, out.json);
    Ok(ExitCode::SUCCESS)
}

fn cmd_mu(d: Int, g: Int, out: Output) -> Result<ExitCode, CliError> {
    let closed = mu_closed_form(d, g)?;
    let brute = mu_minimal_s(d, g)?;
    let v = json!({
        "d": d,
        "g": g,
        "mu": closed,
        "mu_minimal_s": brute,
        "agreement": if closed == brute { "ok" } else { "mismatch" },
        "surface_bound": surface_restriction_bound(d, g, closed),
    });
    render::emit(&v, out.json);
    Ok(ExitCode::SUCCESS)
}

fn cmd_family(rows: Vec<u32>, quadric: Option<u32>, out: Output) -> Result<ExitCode, CliError> {
    let v = if let Some(t) = quadric {
        let f = FamilyQ::new(t).ok_or_else(|| CliError::Usage("--quadric needs t >= 1".into()))?;
        let inv = family_q_invariants(&f);
        let class = curve_class_from_resolution(&f.resolution()).map_err(|e| CliError::Usage(e.to_string()))?;
        json!({
            "ambient": "Q",
            "t": t,
            "d": inv.d,
            "g": inv.g,
            "dim": inv.dim,
            "degenerate": inv.degenerate,
            "resolution_agrees": (class.d, class.g) == (inv.d, inv.g),
        })
    } else {
        let f = FamilyP3::new(rows).ok_or_else(|| CliError::Usage("--rows needs positive degrees".into()))?;
        let inv = family_p3_invariants(&f);
        let class = curve_class_from_resolution(&f.resolution()).map_err(|e| CliError::Usage(e.to_string()))?;
        let dim = f
            .uniform_degree()
            .map(|t| family_p3_uniform_dimension(f.s(), Int::from(t)));
        let mut v = json!({
            "ambient": "P3",
            "rows": f.row_degrees(),
            "s": f.s(),
            "t": f.t(),
            "u": f.u(),
            "d": inv.d,
            "g": inv.g,
            "dim": dim,
            "degenerate": inv.degenerate,
            "resolution_agrees": (class.d, class.g) == (inv.d, inv.g),
        });
        if inv.g >= 0 {
            let r = ratio_analysis(&f);
            v["ratio"] = to_value(&r.ratio.to_string());
            v["ratio_approx"] = to_value(&approx_decimal(&r.ratio, 12));
            v["alpha"] = to_value(&r.alpha.to_string());
            v["mixed_bound"] = to_value(&r.mixed_bound.to_string());
            v["uniform_bound"] = to_value(&r.uniform_bound.map(|b| b.to_string()));
        }
        v
    };
    render::emit(&v, out.json);
    Ok(ExitCode::SUCCESS)
}

fn cmd_family_search(d: Int, g: Int, max_s: u32, max_k: u32, out: Output) -> Result<ExitCode, CliError> {
    if max_s < 1 || max_k < 1 {
        return Err(CliError::Usage("--max-s and --max-k must be >= 1".into()));
    }
    let families = search_family_p3(d, g, max_s, max_k);
    let rows: Vec<&[u32]> = families.iter().map(FamilyP3::row_degrees).collect();
    let v = json!({
        "d": d,
        "g": g,
        "max_s": max_s,
        "max_k": max_k,
        "families": rows,
    });
    render::emit(&v, out.json);
    Ok(ExitCode::SUCCESS)
}

fn cmd_rigidity(d: Option<Int>, g: Option<Int>, verify: Option<PathBuf>, out: Output) -> Result<ExitCode, CliError> {
    if let Some(path) = verify {
        let text = read_input(&path)?;
        let cert: RigidityCertificate =
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad certificate: {e}")))?;
        let (ok, detail) = match cert.verify() {
            Ok(()) => (true, None),
            Err(msg) => (false, Some(msg)),
        };
        let v = json!({ "d": cert.d, "g": cert.g, "verified": ok, "detail": detail });
        render::emit(&v, out.json);
        return Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(3) });
    }
    let (d, g) = (d.expect("clap enforces -d"), g.expect("clap enforces -g"));
    match rigidity_certificate(d, g)? {
        RigidityOutcome::Certified(cert) => {
            render::emit(&to_value(&cert), out.json);
            Ok(ExitCode::SUCCESS)
        }
        RigidityOutcome::NoCertificate(failure) => {
            let v = json!({ "d": d, "g": g, "verdict": "no_certificate", "failure": to_value(&failure) });
            render::emit(&v, out.json);
            Ok(ExitCode::from(3))
        }
    }
}

fn cmd_rigidity_threshold(d: Int, out: Output) -> Result<ExitCode, CliError> {
    match rigidity_threshold(d)? {
        Some(t) => {
            let (sq, approx) = three_halves(t.g_star, d);
            let v = json!({
                "d": d,
                "g_star": t.g_star,
                "ratio_sq": sq,
                "ratio_approx": approx,
                "certificate": to_value(&t.certificate),
            });
            render::emit(&v, out.json);
            Ok(ExitCode::SUCCESS)
        }
        None => {
            let v = json!({ "d": d, "verdict": "no_threshold" });
            render::emit(&v, out.json);
            Ok(ExitCode::from(3))
        }
    }
}

fn check_quadric_degree(d: Int) -> Result<(), CliError> {
    if d < 3 {
        return Err(CliError::OutOfRange(format!("need d >= 3, got {d}")));
    }
    Ok(())
}

fn cmd_quadric(command: QuadricCommand) -> Result<ExitCode, CliError> {
    match command {
        QuadricCommand::Witness { d, g, out } => {
            check_quadric_degree(d)?;
            if g < 0 {
                return Err(CliError::OutOfRange(format!("need g >= 0, got {g}")));
            }
            match gb_witness(d, g) {
                Some(w) => {
                    let mut v = to_value(&w);
                    v["expected_dimension"] = json!(3 * d);
                    render::emit(&v, out.json);
                    Ok(ExitCode::SUCCESS)
                }
                None => {
                    let v = json!({ "d": d, "g": g, "verdict": "no_witness" });
                    render::emit(&v, out.json);
                    Ok(ExitCode::from(3))
                }
            }
        }
        QuadricCommand::Threshold { d, out } => {
            check_quadric_degree(d)?;
            let g = gb_threshold(d);
            let w = gb_witness(d, g).expect("threshold admits a witness");
            let (sq, approx) = three_halves(g, d);
            let v = json!({
                "d": d,
                "gb_threshold": g,
                "k": w.k,
                "ratio_sq": sq,
                "ratio_approx": approx,
            });
            render::emit(&v, out.json);
            Ok(ExitCode::SUCCESS)
        }
        QuadricCommand::Coverage { d, out } => {
            if d < 2 {
                return Err(CliError::OutOfRange(format!("need d >= 2, got {d}")));
            }
            let rep = coverage_report(d);
            let mut v = to_value(&rep);
            v["closure_max_contiguous_g"] = to_value(&rep.closure_max_contiguous_g());
            if let Some(max_g) = rep.paper_max_g {
                let (sq, approx) = three_halves(max_g.max(0), d);
                v["paper_max_ratio_sq"] = json!(sq);
                v["paper_max_ratio_approx"] = json!(approx);
            }
            render::emit(&v, out.json);
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn read_input(path: &PathBuf) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| CliError::Io(e.to_string()))
    } else {
        std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }
}

fn cmd_resolve(file: PathBuf, out: Output) -> Result<ExitCode, CliError> {
    let text = read_input(&file)?;
    let res: GradedResolution = text.parse().map_err(|e: ResolutionError| CliError::Usage(e.to_string()))?;
    let class = curve_class_from_resolution(&res).map_err(|e| CliError::OutOfRange(e.to_string()))?;
    let v = json!({
        "ambient": res.ambient().to_string(),
        "d": class.d,
        "g": class.g,
        "r": class.r,
        "hilbert_polynomial": curve_hilbert_poly(&res).to_string(),
    });
    render::emit(&v, out.json);
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Bound { d, g, r, explain, out } => cmd_bound(d, g, r, explain, out),
        Command::Pi { d, r, out } => cmd_pi(d, r, out),
        Command::Mu { d, g, out } => cmd_mu(d, g, out),
        Command::Family { rows, quadric, out } => cmd_family(rows, quadric, out),
        Command::FamilySearch { d, g, max_s, max_k, out } => cmd_family_search(d, g, max_s, max_k, out),
        Command::Rigidity { d, g, verify, out } => cmd_rigidity(d, g, verify, out),
        Command::RigidityThreshold { d, out } => cmd_rigidity_threshold(d, out),
        Command::Quadric { command } => cmd_quadric(command),
        Command::Scan { target, d, g, r, g_relative, format, workers } => {
            let spec = ScanSpec { target, d, g, r, g_relative, format, workers };
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            scan::run(&spec, &mut lock)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Resolve { file, out } => cmd_resolve(file, out),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
