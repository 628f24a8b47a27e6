//! Hilbert polynomials of curves from graded free resolutions.
//!
//! A resolution `0 → E_m → … → E_1 → E_0 → I_C → 0` is stored as ranks and
//! twists only. The Hilbert polynomial of the ideal sheaf is the alternating
//! sum of twisted Euler characteristics of the ambient space; subtracting it
//! from `χ(O(k))` gives `dk + 1 - g` for a curve.
//!
//! # Text format
//!
//! ```text
//! # twisted cubic
//! ambient P3
//! level 0: 3 x -2
//! level 1: 2 x -3
//! ```
//!
//! - Blank lines and lines starting with `#` are ignored.
//! - The first remaining line is `ambient P<n>` (n ≥ 2) or `ambient Q`.
//! - Then one line per syzygy level, numbered consecutively from 0:
//!   `level <i>: <rank> x <twist>[, <rank> x <twist>]*`.
//! - Ranks must be positive integers; twists are signed integers.

use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::exactpoly::{binomial_poly, to_integer, RationalPolynomial, Rational};
use crate::Int;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolutionError {
    #[error("not a curve: Hilbert polynomial has degree {0:?}, expected 1")]
    NotACurve(Option<usize>),
    #[error("degree {d} or genus {g} is not an integer")]
    NonIntegralInvariants { d: Box<Rational>, g: Box<Rational> },
    #[error("resolution has no terms")]
    Empty,
    #[error("level {level}: rank must be positive, got {rank}")]
    BadRank { level: usize, rank: i64 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Ambient space of the curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Ambient {
    /// Pⁿ with n ≥ 2.
    ProjectiveSpace(u32),
    /// The smooth quadric threefold in P⁴.
    QuadricThreefold,
}

impl Ambient {
    /// Dimension of the projective space the ambient sits in.
    pub fn embedding_dimension(self) -> u32 {
        match self {
            Ambient::ProjectiveSpace(n) => n,
            Ambient::QuadricThreefold => 4,
        }
    }

    /// `χ(O(k + twist))` as a polynomial in `k`.
    pub fn twisted_chi(self, twist: i64) -> RationalPolynomial {
        match self {
            Ambient::ProjectiveSpace(n) => binomial_poly(i64::from(n) + twist, n),
            // From 0 → O_P4(k-2) → O_P4(k) → O_Q(k) → 0.
            Ambient::QuadricThreefold => {
                &binomial_poly(4 + twist, 4) - &binomial_poly(2 + twist, 4)
            }
        }
    }
}

/// `χ(O(k))` of the ambient space.
pub fn ambient_chi(ambient: Ambient) -> RationalPolynomial {
    ambient.twisted_chi(0)
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ambient::ProjectiveSpace(n) => write!(f, "P{n}"),
            Ambient::QuadricThreefold => write!(f, "Q"),
        }
    }
}

impl FromStr for Ambient {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "Q" {
            return Ok(Ambient::QuadricThreefold);
        }
        let n = s
            .strip_prefix('P')
            .and_then(|n| n.parse::<u32>().ok())
            .ok_or_else(|| format!("unknown ambient `{s}` (expected P<n> or Q)"))?;
        if n < 2 {
            return Err(format!("projective space must have dimension >= 2, got {n}"));
        }
        Ok(Ambient::ProjectiveSpace(n))
    }
}

/// One summand `O(twist)^{⊕ rank}` of a syzygy module.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Summand {
    pub rank: u64,
    pub twist: i64,
}

impl Summand {
    pub fn new(rank: u64, twist: i64) -> Self {
        Self { rank, twist }
    }
}

/// Ranks-and-twists description of a resolution of an ideal sheaf.
///
/// `terms[i]` lists the summands of `E_i`; `E_0` maps onto the ideal sheaf.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradedResolution {
    ambient: Ambient,
    terms: Vec<Vec<Summand>>,
}

impl GradedResolution {
    pub fn new(ambient: Ambient, terms: Vec<Vec<Summand>>) -> Result<Self, ResolutionError> {
        if terms.is_empty() || terms.iter().all(Vec::is_empty) {
            return Err(ResolutionError::Empty);
        }
        for (level, term) in terms.iter().enumerate() {
            if let Some(bad) = term.iter().find(|s| s.rank == 0) {
                return Err(ResolutionError::BadRank {
                    level,
                    rank: bad.rank as i64,
                });
            }
        }
        Ok(Self { ambient, terms })
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn terms(&self) -> &[Vec<Summand>] {
        &self.terms
    }
}

impl fmt::Display for GradedResolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ambient {}", self.ambient)?;
        for (i, term) in self.terms.iter().enumerate() {
            let parts: Vec<String> = term
                .iter()
                .map(|s| format!("{} x {}", s.rank, s.twist))
                .collect();
            writeln!(f, "level {i}: {}", parts.join(", "))?;
        }
        Ok(())
    }
}

impl FromStr for GradedResolution {
    type Err = ResolutionError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let mut ambient = None;
        let mut terms: Vec<Vec<Summand>> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: String| ResolutionError::Parse { line: line_no, msg };
            if ambient.is_none() {
                let rest = line
                    .strip_prefix("ambient")
                    .filter(|r| r.starts_with(char::is_whitespace))
                    .ok_or_else(|| err("expected `ambient P<n>|Q`".into()))?;
                ambient = Some(rest.parse::<Ambient>().map_err(err)?);
                continue;
            }
            let rest = line
                .strip_prefix("level")
                .ok_or_else(|| err("expected `level <i>: ...`".into()))?;
            let (idx_part, body) = rest
                .split_once(':')
                .ok_or_else(|| err("missing `:` after level index".into()))?;
            let level: usize = idx_part
                .trim()
                .parse()
                .map_err(|_| err(format!("bad level index `{}`", idx_part.trim())))?;
            if level != terms.len() {
                return Err(err(format!(
                    "levels must be consecutive from 0; expected {}, got {level}",
                    terms.len()
                )));
            }
            let mut term = Vec::new();
            for piece in body.split(',') {
                let (rank, twist) = piece
                    .split_once('x')
                    .ok_or_else(|| err(format!("expected `<rank> x <twist>`, got `{}`", piece.trim())))?;
                let rank: i64 = rank
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("bad rank `{}`", rank.trim())))?;
                let twist: i64 = twist
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("bad twist `{}`", twist.trim())))?;
                if rank <= 0 {
                    return Err(ResolutionError::BadRank { level, rank });
                }
                term.push(Summand::new(rank as u64, twist));
            }
            terms.push(term);
        }
        let ambient = ambient.ok_or(ResolutionError::Parse {
            line: 0,
            msg: "missing `ambient` line".into(),
        })?;
        GradedResolution::new(ambient, terms)
    }
}

/// Degree, arithmetic genus and ambient projective dimension of a curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CurveClass {
    pub d: Int,
    pub g: Int,
    pub r: Int,
}

impl CurveClass {
    pub fn new(d: Int, g: Int, r: Int) -> Self {
        Self { d, g, r }
    }
}

/// Hilbert polynomial of the ideal sheaf: `Σ_i (-1)^i Σ rank·χ(O(k + twist))`.
pub fn ideal_hilbert_poly(res: &GradedResolution) -> RationalPolynomial {
    let mut acc = RationalPolynomial::zero();
    for (i, term) in res.terms.iter().enumerate() {
        for s in term {
            let contrib = res
                .ambient
                .twisted_chi(s.twist)
                .scale(&Rational::from_integer(s.rank.into()));
            acc = if i % 2 == 0 { &acc + &contrib } else { &acc - &contrib };
        }
    }
    acc
}

/// Hilbert polynomial of the resolved subscheme, `χ(O(k)) - χ(I(k))`.
pub fn curve_hilbert_poly(res: &GradedResolution) -> RationalPolynomial {
    &ambient_chi(res.ambient) - &ideal_hilbert_poly(res)
}

/// Reads `(d, g)` off the Hilbert polynomial `dk + 1 - g`.
pub fn curve_class_from_resolution(res: &GradedResolution) -> Result<CurveClass, ResolutionError> {
    let p = curve_hilbert_poly(res);
    if p.degree() != Some(1) {
        return Err(ResolutionError::NotACurve(p.degree()));
    }
    let d = p.coeff(1);
    let g = Rational::from_integer(1.into()) - p.coeff(0);
    let as_int = |q: &Rational| to_integer(q).and_then(|n| n.to_i128());
    match (as_int(&d), as_int(&g)) {
        (Some(di), Some(gi)) => Ok(CurveClass::new(
            di,
            gi,
            Int::from(res.ambient.embedding_dimension()),
        )),
        _ => Err(ResolutionError::NonIntegralInvariants { d: Box::new(d), g: Box::new(g) }),
    }
}
