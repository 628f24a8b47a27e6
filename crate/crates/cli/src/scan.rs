//! Grid scans over `(d, g)` with ordered, schedule-independent output.

use std::io::Write;

use clap::ValueEnum;
use curvedim::bounds::{castelnuovo_params, castelnuovo_pi, lower_bound_p3, mu_closed_form, mu_minimal_s};
use curvedim::exactpoly::{approx_sqrt_decimal, ratio};
use curvedim::quadric::{coverage_report, gb_threshold};
use curvedim::rigidity::rigidity_threshold;
use curvedim::Int;
use rayon::prelude::*;
use serde::ser::{SerializeMap, Serializer};

use crate::CliError;

/// Rows computed per parallel batch; output is flushed between batches.
const BATCH: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    P3Bound,
    Mu,
    Pi,
    Rigidity,
    Quadric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Integer values of a range argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Range(pub Vec<Int>);

/// Largest magnitude accepted on the command line. Keeps `g²` and `d³`
/// comfortably inside `i128` for every genus up to Castelnuovo's bound.
pub const INPUT_LIMIT: Int = 1_000_000_000_000;

/// Integer literal with optional `_` separators and an `eN` exponent.
pub fn parse_int(s: &str) -> Result<Int, String> {
    let clean: String = s.trim().chars().filter(|&c| c != '_').collect();
    let (mantissa, exp) = match clean.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<u32>().map_err(|_| format!("bad exponent in `{s}`"))?),
        None => (clean.as_str(), 0),
    };
    let m: Int = mantissa.parse().map_err(|_| format!("bad integer `{s}`"))?;
    10i128
        .checked_pow(exp)
        .and_then(|p| m.checked_mul(p))
        .filter(|v| v.abs() <= INPUT_LIMIT)
        .ok_or_else(|| format!("integer `{s}` outside ±{INPUT_LIMIT}"))
}

/// `a:b` or `a:b:step` (inclusive), or a comma list `x,y,z`.
pub fn parse_range(s: &str) -> Result<Range, String> {
    if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        let (start, stop, step) = match parts.as_slice() {
            [a, b] => (parse_int(a)?, parse_int(b)?, 1),
            [a, b, c] => (parse_int(a)?, parse_int(b)?, parse_int(c)?),
            _ => return Err(format!("range `{s}` must be a:b or a:b:step")),
        };
        if step < 1 {
            return Err(format!("range step must be >= 1, got {step}"));
        }
        let count = if stop < start { 0 } else { (stop - start) / step + 1 };
        if count > 100_000_000 {
            return Err(format!("range `{s}` has too many values"));
        }
        Ok(Range((0..count).map(|i| start + i * step).collect()))
    } else {
        s.split(',')
            .filter(|p| !p.trim().is_empty())
            .map(parse_int)
            .collect::<Result<_, _>>()
            .map(Range)
    }
}

pub struct ScanSpec {
    pub target: Target,
    pub d: Range,
    pub g: Option<Range>,
    pub r: Option<Range>,
    pub g_relative: bool,
    pub format: Format,
    pub workers: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Cell {
    Int(Int),
    Str(String),
    Empty,
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(n) => n.to_string(),
            Cell::Str(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

impl From<Int> for Cell {
    fn from(n: Int) -> Self {
        Cell::Int(n)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Str(s.into())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Str(s)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

fn header(target: Target) -> &'static [&'static str] {
    match target {
        Target::P3Bound => &["d", "g", "value", "branch", "mu", "error"],
        Target::Mu => &["d", "g", "mu_closed_form", "mu_minimal_s", "agreement", "error"],
        Target::Pi => &["d", "r", "m", "epsilon", "pi", "error"],
        Target::Rigidity => &["d", "g_star", "ratio_sq", "ratio_approx", "k", "l", "error"],
        Target::Quadric => &["d", "gb_threshold", "paper_max_g", "closure_max_contiguous_g", "error"],
    }
}

/// Smallest `g ≥ 0` with `g² ≥ d³`.
pub fn g_min(d: Int) -> Int {
    let cube = d.max(0).pow(3);
    let mut g = (cube as f64).sqrt() as Int;
    while g > 0 && (g - 1) * (g - 1) >= cube {
        g -= 1;
    }
    while g * g < cube {
        g += 1;
    }
    g
}

/// A row with every value column empty and the message in `error`.
fn error_row(target: Target, lead: &[Int], msg: String) -> Vec<Cell> {
    let width = header(target).len();
    let mut row: Vec<Cell> = lead.iter().map(|&x| Cell::Int(x)).collect();
    row.resize(width - 1, Cell::Empty);
    row.push(Cell::Str(msg));
    row
}

fn compute(target: Target, x: Int, y: Option<Int>) -> Vec<Cell> {
    match target {
        Target::P3Bound => {
            let g = y.expect("p3_bound rows carry g");
            match lower_bound_p3(x, g) {
                Ok(c) => vec![
                    x.into(),
                    g.into(),
                    c.value.into(),
                    crate::branch_label(c.provenance).into(),
                    c.s.into(),
                    Cell::Empty,
                ],
                Err(e) => error_row(target, &[x, g], e.to_string()),
            }
        }
        Target::Mu => {
            let g = y.expect("mu rows carry g");
            match (mu_closed_form(x, g), mu_minimal_s(x, g)) {
                (Ok(a), Ok(b)) => vec![
                    x.into(),
                    g.into(),
                    a.into(),
                    b.into(),
                    (if a == b { "ok" } else { "mismatch" }).into(),
                    Cell::Empty,
                ],
                (Err(e), _) | (_, Err(e)) => error_row(target, &[x, g], e.to_string()),
            }
        }
        Target::Pi => {
            let r = y.expect("pi rows carry r");
            if x < 1 || r < 2 {
                return error_row(target, &[x, r], format!("need d >= 1 and r >= 2, got d={x}, r={r}"));
            }
            let p = castelnuovo_params(x, r);
            vec![
                x.into(),
                r.into(),
                p.m.into(),
                p.epsilon.into(),
                castelnuovo_pi(x, r).into(),
                Cell::Empty,
            ]
        }
        Target::Rigidity => match rigidity_threshold(x) {
            Ok(Some(t)) => {
                let sq = ratio(t.g_star * t.g_star, x * x * x);
                vec![
                    x.into(),
                    t.g_star.into(),
                    sq.to_string().into(),
                    approx_sqrt_decimal(&sq, 12).ok().into(),
                    t.certificate.k.into(),
                    t.certificate.l.into(),
                    Cell::Empty,
                ]
            }
            Ok(None) => error_row(target, &[x], "no threshold: pi(d,4) is not certified".into()),
            Err(e) => error_row(target, &[x], e.to_string()),
        },
        Target::Quadric => {
            if x < 3 {
                return error_row(target, &[x], format!("need d >= 3, got {x}"));
            }
            let rep = coverage_report(x);
            vec![
                x.into(),
                gb_threshold(x).into(),
                rep.paper_max_g.into(),
                rep.closure_max_contiguous_g().into(),
                Cell::Empty,
            ]
        }
    }
}

/// Work items in output order.
fn items(spec: &ScanSpec) -> Result<Vec<(Int, Option<Int>)>, CliError> {
    let needs_g = matches!(spec.target, Target::P3Bound | Target::Mu);
    let needs_r = spec.target == Target::Pi;
    if !needs_g && (spec.g.is_some() || spec.g_relative) {
        return Err(CliError::Usage(format!("target {:?} does not take -g", spec.target)));
    }
    if !needs_r && spec.r.is_some() {
        return Err(CliError::Usage(format!("target {:?} does not take -r", spec.target)));
    }
    let ds = &spec.d.0;
    if needs_g {
        let gs = spec
            .g
            .as_ref()
            .ok_or_else(|| CliError::Usage("this target needs a -g range".into()))?;
        Ok(ds
            .iter()
            .flat_map(|&d| {
                let base = if spec.g_relative { g_min(d) } else { 0 };
                gs.0.iter().map(move |&g| (d, Some(base + g)))
            })
            .collect())
    } else if needs_r {
        let rs = spec.r.clone().unwrap_or(Range(vec![3]));
        Ok(ds
            .iter()
            .flat_map(|&d| rs.0.iter().map(move |&r| (d, Some(r))))
            .collect())
    } else {
        Ok(ds.iter().map(|&d| (d, None)).collect())
    }
}

struct JsonRow<'a> {
    keys: &'a [&'a str],
    cells: &'a [Cell],
}

impl serde::Serialize for JsonRow<'_> {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut map = ser.serialize_map(Some(self.keys.len()))?;
        for (k, c) in self.keys.iter().zip(self.cells) {
            match c {
                Cell::Int(n) => map.serialize_entry(k, n)?,
                Cell::Str(s) => map.serialize_entry(k, s)?,
                Cell::Empty => map.serialize_entry(k, &Option::<()>::None)?,
            }
        }
        map.end()
    }
}

/// Where finished rows go; owns the output for the whole scan.
enum Sink<'a> {
    Csv(Box<csv::Writer<&'a mut dyn Write>>),
    Json { out: &'a mut dyn Write, rows: usize },
}

impl Sink<'_> {
    fn push(&mut self, keys: &[&str], row: &[Cell]) -> Result<(), CliError> {
        match self {
            Sink::Csv(w) => w.write_record(row.iter().map(Cell::csv)).map_err(io_err),
            Sink::Json { out, rows } => {
                let line = serde_json::to_string(&JsonRow { keys, cells: row }).map_err(io_err)?;
                let sep = if *rows == 0 { "[\n" } else { ",\n" };
                *rows += 1;
                write!(out, "{sep}  {line}").map_err(io_err)
            }
        }
    }

    fn flush(&mut self) -> Result<(), CliError> {
        match self {
            Sink::Csv(w) => w.flush().map_err(io_err),
            Sink::Json { out, .. } => out.flush().map_err(io_err),
        }
    }

    fn finish(mut self) -> Result<(), CliError> {
        if let Sink::Json { out, rows } = &mut self {
            let tail = if *rows == 0 { "[]" } else { "\n]" };
            writeln!(out, "{tail}").map_err(io_err)?;
        }
        self.flush()
    }
}

fn io_err(e: impl std::fmt::Display) -> CliError {
    CliError::Io(e.to_string())
}

pub fn run(spec: &ScanSpec, out: &mut dyn Write) -> Result<(), CliError> {
    let work = items(spec)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers.max(1))
        .build()
        .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
    let keys = header(spec.target);
    let mut sink = match spec.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(keys).map_err(io_err)?;
            Sink::Csv(Box::new(w))
        }
        Format::Json => Sink::Json { out, rows: 0 },
    };
    for batch in work.chunks(BATCH) {
        let rows: Vec<Vec<Cell>> =
            pool.install(|| batch.par_iter().map(|&(x, y)| compute(spec.target, x, y)).collect());
        for row in &rows {
            sink.push(keys, row)?;
        }
        sink.flush()?;
    }
    sink.finish()
}
