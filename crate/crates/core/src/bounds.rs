//! Scalar bound formulas for curves in projective space.
//!
//! All inequalities of the form `g > threshold` are strict and evaluated with
//! denominators cleared, so floor boundaries are exact.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use thiserror::Error;

use crate::exactpoly::{floor_sqrt_expr, ratio, Rational};
use crate::resolutions::CurveClass;
use crate::Int;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no admissible s for (d={d}, g={g})")]
    NoSuchS { d: Int, g: Int },
    #[error("g={g} exceeds the Castelnuovo bound pi({d},{r})={pi}")]
    OutOfRange { d: Int, g: Int, r: Int, pi: Int },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
}

/// Which formula produced a [`BoundCertificate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// `χ(N) = (r+1)d - (r-3)(g-1)`.
    ExpectedDimension,
    /// P³ with `g² < d³`: the bound is `4d`.
    BelowCubeRatio,
    /// P³ with `g² ≥ d³`: the curve lies on a surface of degree at most
    /// `s = μ(d,g)` and the bound is `4d + g - 1 - sd`.
    LowDegreeSurface,
    /// `4d + g - 1 - sd` for a caller-supplied `s`.
    SurfaceRestriction,
    /// `χ(N_{C/X})` for a complete intersection `X`.
    CompleteIntersectionDeformation,
}

/// A lower bound with the data that justifies it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundCertificate {
    pub d: Int,
    pub g: Int,
    pub r: Int,
    pub value: Int,
    pub provenance: Provenance,
    /// Surface degree bound `s`, when the provenance uses one.
    pub s: Option<Int>,
}

impl BoundCertificate {
    /// Recomputes `value` from `(d, g, r, s)` and the provenance.
    pub fn recompute(&self) -> Option<Int> {
        let (d, g) = (self.d, self.g);
        match self.provenance {
            Provenance::ExpectedDimension => Some(chi_normal(&CurveClass::new(d, g, self.r))),
            Provenance::BelowCubeRatio => Some(4 * d),
            Provenance::LowDegreeSurface | Provenance::SurfaceRestriction => {
                self.s.map(|s| surface_restriction_bound(d, g, s))
            }
            Provenance::CompleteIntersectionDeformation => None,
        }
    }

    pub fn verify(&self) -> bool {
        self.recompute().is_none_or(|v| v == self.value)
    }

    /// Human-readable derivation, one step per line.
    pub fn explain(&self) -> Vec<String> {
        let (d, g) = (self.d, self.g);
        match self.provenance {
            Provenance::ExpectedDimension => vec![format!(
                "expected dimension: chi(N) = (r+1)d - (r-3)(g-1) = {}",
                self.value
            )],
            Provenance::BelowCubeRatio => vec![
                format!("g^2 = {} < d^3 = {}", g * g, d * d * d),
                format!("expected dimension in P3: chi(N) = 4d = {}", self.value),
            ],
            Provenance::LowDegreeSurface | Provenance::SurfaceRestriction => {
                let s = self.s.unwrap_or_default();
                let mut lines = Vec::new();
                if self.provenance == Provenance::LowDegreeSurface {
                    lines.push(format!("g^2 = {} >= d^3 = {}", g * g, d * d * d));
                    lines.push(format!(
                        "mu(d,g) = {s}: smallest s with s(s+1) < d and g > (d/2)(s + d/(s+1) - 3)"
                    ));
                    lines.push(format!(
                        "surface containment: C lies on a surface S of degree k <= {s}"
                    ));
                    lines.push(
                        "singular locus: C meets Sing(S) in at most finitely many points (deg Sing(S) <= k(k-1))"
                            .into(),
                    );
                }
                lines.push(format!(
                    "deformations on S: chi(N_C/S) = 4d + g - 1 - kd >= 4d + g - 1 - sd = {}",
                    self.value
                ));
                lines
            }
            Provenance::CompleteIntersectionDeformation => vec![format!(
                "complete intersection: chi(N_C/X) = {}",
                self.value
            )],
        }
    }
}

/// `χ(N_{C/P^r}) = (r+1)d - (r-3)(g-1)`; may be negative for `r ≥ 4`.
pub fn chi_normal(c: &CurveClass) -> Int {
    (c.r + 1) * c.d - (c.r - 3) * (c.g - 1)
}

/// Decomposition `d - 1 = m(r-1) + ε` with `0 ≤ ε < r-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CastelnuovoParams {
    pub m: Int,
    pub epsilon: Int,
}

pub fn castelnuovo_params(d: Int, r: Int) -> CastelnuovoParams {
    assert!(d >= 1 && r >= 2, "castelnuovo_params needs d >= 1, r >= 2");
    let m = (d - 1) / (r - 1);
    CastelnuovoParams {
        m,
        epsilon: (d - 1) - m * (r - 1),
    }
}

/// Castelnuovo's bound `π(d, r) = C(m,2)(r-1) + mε`.
///
/// Zero whenever `d ≤ r`.
pub fn castelnuovo_pi(d: Int, r: Int) -> Int {
    let CastelnuovoParams { m, epsilon } = castelnuovo_params(d, r);
    m * (m - 1) / 2 * (r - 1) + m * epsilon
}

fn check_mu_domain(d: Int, g: Int) -> Result<(), BoundError> {
    if d < 3 {
        return Err(BoundError::Domain(format!("mu needs d >= 3, got {d}")));
    }
    if g < 0 || g * g < d * d * d {
        return Err(BoundError::Domain(format!(
            "mu needs g^2 >= d^3, got d={d}, g={g}"
        )));
    }
    Ok(())
}

/// `μ(d,g) = 1 + ⌊(d² - 3d - 2g) / (g + d + √(g² - d³ + 4dg + 4d²))⌋`.
pub fn mu_closed_form(d: Int, g: Int) -> Result<Int, BoundError> {
    check_mu_domain(d, g)?;
    let (bd, bg) = (BigInt::from(d), BigInt::from(g));
    let num = &bd * &bd - 3 * &bd - 2 * &bg;
    let den = &bg + &bd;
    let rad = &bg * &bg - &bd * &bd * &bd + 4 * &bd * &bg + 4 * &bd * &bd;
    let q = floor_sqrt_expr(&num, &den, &rad).map_err(|e| BoundError::Domain(e.to_string()))?;
    let q = q
        .to_i128()
        .ok_or_else(|| BoundError::Domain("mu out of machine range".into()))?;
    Ok(1 + q)
}

/// Smallest `s ≥ 1` with `s(s+1) < d` and `g > (d/2)(s + d/(s+1) - 3)`.
pub fn mu_minimal_s(d: Int, g: Int) -> Result<Int, BoundError> {
    check_mu_domain(d, g)?;
    (1..)
        .take_while(|s| s * (s + 1) < d)
        .find(|&s| gp_simplified_predicate(d, g, s))
        .ok_or(BoundError::NoSuchS { d, g })
}

/// Lower bound for the dimension of a component of `H_{d,g,3}` whose general
/// point is a smooth irreducible nondegenerate curve.
pub fn lower_bound_p3(d: Int, g: Int) -> Result<BoundCertificate, BoundError> {
    if d < 3 {
        return Err(BoundError::Domain(format!("need d >= 3, got {d}")));
    }
    if g < 0 {
        return Err(BoundError::Domain(format!("need g >= 0, got {g}")));
    }
    let pi = castelnuovo_pi(d, 3);
    if g > pi {
        return Err(BoundError::OutOfRange { d, g, r: 3, pi });
    }
    if g * g < d * d * d {
        return Ok(BoundCertificate {
            d,
            g,
            r: 3,
            value: 4 * d,
            provenance: Provenance::BelowCubeRatio,
            s: None,
        });
    }
    let s = mu_closed_form(d, g)?;
    Ok(BoundCertificate {
        d,
        g,
        r: 3,
        value: surface_restriction_bound(d, g, s),
        provenance: Provenance::LowDegreeSurface,
        s: Some(s),
    })
}

/// Generic entry point: the `μ` bound for `r = 3`, `χ(N)` otherwise.
pub fn lower_bound(c: &CurveClass) -> Result<BoundCertificate, BoundError> {
    if c.r == 3 {
        return lower_bound_p3(c.d, c.g);
    }
    if c.r < 3 || c.d < 1 || c.g < 0 {
        return Err(BoundError::Domain(format!(
            "need r >= 3, d >= 1, g >= 0; got {c:?}"
        )));
    }
    let pi = castelnuovo_pi(c.d, c.r);
    if c.g > pi {
        return Err(BoundError::OutOfRange {
            d: c.d,
            g: c.g,
            r: c.r,
            pi,
        });
    }
    Ok(BoundCertificate {
        d: c.d,
        g: c.g,
        r: c.r,
        value: chi_normal(c),
        provenance: Provenance::ExpectedDimension,
        s: None,
    })
}

/// The Gruson–Peskine threshold
/// `(d/2)(s + d/s - 4) - ρ(s-ρ)(s-1)/(2s)` with `0 ≤ ρ < s`, `d + ρ ≡ 0 (mod s)`.
///
/// Exposed as stated; the bound pipeline never relies on it.
pub fn gp_original_threshold(d: Int, s: Int) -> Result<Rational, BoundError> {
    if s < 1 || s * (s - 1) >= d {
        return Err(BoundError::PreconditionFailed(format!(
            "need s >= 1 and s(s-1) < d, got d={d}, s={s}"
        )));
    }
    let rho = (-d).rem_euclid(s);
    // (d/2)(s + d/s - 4) = d(s² + d - 4s) / (2s)
    let main = ratio(d * (s * s + d - 4 * s), 2 * s);
    let correction = ratio(rho * (s - rho) * (s - 1), 2 * s);
    Ok(main - correction)
}

/// `s(s+1) < d` and `g > (d/2)(s + d/(s+1) - 3)`, compared as
/// `2(s+1)g > d(s(s+1) + d - 3(s+1))`.
pub fn gp_simplified_predicate(d: Int, g: Int, s: Int) -> bool {
    s >= 1 && s * (s + 1) < d && 2 * (s + 1) * g > d * (s * (s + 1) + d - 3 * (s + 1))
}

/// `4d + g - 1 - sd`.
pub fn surface_restriction_bound(d: Int, g: Int, s: Int) -> Int {
    4 * d + g - 1 - s * d
}

/// `χ(N_{C/X}) = (n+1 - Σ dᵢ)d + (k - n + 3)(g - 1)` for a curve on a
/// complete intersection `X ⊂ Pⁿ` of `k` hypersurfaces of the given degrees.
pub fn ci_deformation_bound(n: Int, degrees: &[Int], d: Int, g: Int) -> Result<Int, BoundError> {
    let k = degrees.len() as Int;
    if n < 3 || k < 1 || k > n - 2 {
        return Err(BoundError::PreconditionFailed(format!(
            "need n >= 3 and 1 <= #degrees <= n-2, got n={n}, #degrees={k}"
        )));
    }
    if degrees.iter().any(|&a| a < 1) {
        return Err(BoundError::PreconditionFailed("degrees must be positive".into()));
    }
    let sum: Int = degrees.iter().sum();
    Ok((n + 1 - sum) * d + (k - n + 3) * (g - 1))
}

/// Degree bound `k(k-1)` on the singular locus of a degree-`k` surface in P³.
pub fn sing_locus_bound_p3(k: Int) -> Int {
    k * (k - 1)
}

/// Degree bound `ab(a+b-2)/2` on a one-dimensional singular locus of a
/// complete intersection surface of type `(a, b)` in P⁴.
pub fn sing_locus_bound_ci_p4(a: Int, b: Int) -> Int {
    let twice = a * b * (a + b - 2);
    assert_eq!(twice % 2, 0, "ab(a+b-2) is always even");
    twice / 2
}
