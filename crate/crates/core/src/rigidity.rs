//! Non-rigidity certificates for curves in P⁴.
//!
//! For a smooth irreducible nondegenerate curve `C ⊂ P⁴` of degree `d` and
//! genus `g` the search runs the containment chain:
//!
//! 1. Smallest `k` with `g > π(dk, N)`, `N = C(k+4,4) - 1`: the degree-`k`
//!    Veronese image of `C` is degenerate, so `C` lies on an irreducible
//!    threefold `F` of degree `a ≤ k`.
//! 2. For every possible `a`, smallest `l ≥ a` with `g > π(dl, M_a)`,
//!    `M_a = C(l+4,4) - C(l-a+4,4) - 1`: a second threefold `G` of degree
//!    `b ≤ l` not containing `F`, so `S = F ∩ G` is a complete intersection.
//! 3. `d > ab(a+b-2)/2` keeps `C` out of the singular locus of `S`.
//! 4. Deformations of `C` on `S` have dimension at least
//!    `5d + g - 1 - (a+b)d`, which must exceed `dim PGL(5) = 24`.
//!
//! The true `a` is not computable from `(d, g)`, so step 2 is run for every
//! `a` in `2..=k` (a nondegenerate curve lies on no hyperplane, so `a ≥ 2`).
//! Within a branch the checks in steps 3 and 4 are evaluated at `b = l`,
//! the worst case for both.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::castelnuovo_pi;
use crate::Int;

/// `dim PGL(5)`.
pub const PGL5_DIM: Int = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RigidityError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("g={g} exceeds the Castelnuovo bound pi({d},4)={pi}")]
    OutOfRange { d: Int, g: Int, pi: Int },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("certification is not monotone in g at d={d}, g={g}")]
    NonMonotone { d: Int, g: Int },
}

/// `C(n, 4)` for `n ≥ 0`.
fn binom4(n: Int) -> Int {
    if n < 4 {
        0
    } else {
        n * (n - 1) * (n - 2) * (n - 3) / 24
    }
}

/// `N = C(k+4, 4) - 1`, the target of the degree-`k` Veronese map of P⁴.
pub fn veronese_target_dim(k: Int) -> Int {
    binom4(k + 4) - 1
}

/// `M = C(l+4, 4) - C(l-a+4, 4) - 1`.
pub fn residual_target_dim(l: Int, a: Int) -> Int {
    binom4(l + 4) - binom4(l - a + 4) - 1
}

/// Why a curve is forced into a hyperplane of the Veronese target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Containment {
    /// Image degree below the target dimension: degenerate without any
    /// genus condition.
    DegenerateImage,
    /// Genus exceeds the Castelnuovo bound of the target.
    AboveCastelnuovo,
}

fn containment(d: Int, g: Int, degree_factor: Int, target_dim: Int) -> Option<Containment> {
    let image_degree = d * degree_factor;
    if image_degree < target_dim {
        Some(Containment::DegenerateImage)
    } else if g > castelnuovo_pi(image_degree, target_dim) {
        Some(Containment::AboveCastelnuovo)
    } else {
        None
    }
}

/// Search limits for `k` and `l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchCaps {
    pub k_cap: Int,
    pub l_cap: Int,
}

impl SearchCaps {
    /// `max(200, 4⌈d^{1/4}⌉ + 16, ⌊√d⌋ + 2)` for both caps.
    ///
    /// Past `⌊√d⌋ + 1` the singular-locus check fails for every `a ≥ 2`
    /// (it needs `ab(a+b-2)/2 ≥ b² ≥ d`), so the cap never hides a
    /// certificate.
    pub fn for_degree(d: Int) -> Self {
        let d = d.max(1);
        let mut fourth = d.nth_root(4);
        if fourth.pow(4) < d {
            fourth += 1;
        }
        let cap = 200.max(4 * fourth + 16).max(d.sqrt() + 2);
        Self { k_cap: cap, l_cap: cap }
    }
}

/// Smallest `k ≤ k_cap` forcing `C` onto a threefold of degree `≤ k`.
pub fn find_first_threefold(d: Int, g: Int, k_cap: Int) -> Option<(Int, Containment)> {
    (1..=k_cap).find_map(|k| containment(d, g, k, veronese_target_dim(k)).map(|c| (k, c)))
}

/// Smallest `l` in `a..=l_cap` giving a second threefold that meets the
/// first (of degree `a`) in a complete intersection.
pub fn find_second_threefold(
    d: Int,
    g: Int,
    a: Int,
    l_cap: Int,
) -> Result<Option<(Int, Containment)>, RigidityError> {
    if a < 1 || l_cap < a {
        return Err(RigidityError::PreconditionFailed(format!(
            "need 1 <= a <= l_cap, got a={a}, l_cap={l_cap}"
        )));
    }
    Ok((a..=l_cap).find_map(|l| containment(d, g, l, residual_target_dim(l, a)).map(|c| (l, c))))
}

/// The checks for one possible degree `a` of the first threefold.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Branch {
    pub a: Int,
    pub l: Int,
    #[serde(rename = "M")]
    pub m: Int,
    pub containment: Containment,
    /// `ab(a+b-2)/2` at `b = l`; must be below `d`.
    pub bezout_rhs: Int,
    /// `5d + g - 1 - (a+l)d`; must exceed 24.
    pub deformation_bound: Int,
}

/// Outcome of each inequality in the chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checks {
    pub first_threefold: bool,
    pub second_threefold: bool,
    pub bezout: bool,
    pub deformation: bool,
}

/// A verified non-rigidity certificate.
///
/// The headline fields describe the `a = k` branch; `branches` holds every
/// `a` in `2..=k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RigidityCertificate {
    pub d: Int,
    pub g: Int,
    pub k: Int,
    pub l: Int,
    #[serde(rename = "N")]
    pub n: Int,
    #[serde(rename = "M")]
    pub m: Int,
    pub worst_case_a: Int,
    pub worst_case_b: Int,
    pub bezout_lhs: Int,
    pub bezout_rhs: Int,
    pub deformation_bound: Int,
    pub pgl5: Int,
    pub verdict: String,
    pub first_containment: Containment,
    /// Smallest deformation bound over all branches.
    pub min_deformation_bound: Int,
    pub checks: Checks,
    pub branches: Vec<Branch>,
}

/// The inequality that stopped the search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Failure {
    NoFirstThreefold { k_cap: Int },
    NoSecondThreefold { k: Int, a: Int, l_cap: Int },
    Bezout { k: Int, a: Int, l: Int, lhs: Int, rhs: Int },
    Deformation { k: Int, a: Int, l: Int, bound: Int },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RigidityOutcome {
    Certified(Box<RigidityCertificate>),
    NoCertificate(Failure),
}

impl RigidityOutcome {
    pub fn is_certified(&self) -> bool {
        matches!(self, RigidityOutcome::Certified(_))
    }

    pub fn certificate(&self) -> Option<&RigidityCertificate> {
        match self {
            RigidityOutcome::Certified(c) => Some(c),
            RigidityOutcome::NoCertificate(_) => None,
        }
    }
}

fn check_domain(d: Int, g: Int) -> Result<(), RigidityError> {
    if d < 5 {
        return Err(RigidityError::Domain(format!("need d >= 5, got {d}")));
    }
    if g < 0 {
        return Err(RigidityError::Domain(format!("need g >= 0, got {g}")));
    }
    let pi = castelnuovo_pi(d, 4);
    if g > pi {
        return Err(RigidityError::OutOfRange { d, g, pi });
    }
    Ok(())
}

pub fn rigidity_certificate(d: Int, g: Int) -> Result<RigidityOutcome, RigidityError> {
    rigidity_certificate_with_caps(d, g, SearchCaps::for_degree(d))
}

pub fn rigidity_certificate_with_caps(
    d: Int,
    g: Int,
    caps: SearchCaps,
) -> Result<RigidityOutcome, RigidityError> {
    check_domain(d, g)?;
    let Some((k, first_containment)) = find_first_threefold(d, g, caps.k_cap) else {
        return Ok(RigidityOutcome::NoCertificate(Failure::NoFirstThreefold { k_cap: caps.k_cap }));
    };
    if caps.l_cap < k {
        return Ok(RigidityOutcome::NoCertificate(Failure::NoSecondThreefold {
            k,
            a: k,
            l_cap: caps.l_cap,
        }));
    }
    let a_min = k.min(2);
    let mut branches = Vec::with_capacity((k - a_min + 1) as usize);
    // Largest a first: that branch carries the hardest singular-locus check.
    for a in (a_min..=k).rev() {
        let Some((l, containment)) = find_second_threefold(d, g, a, caps.l_cap)? else {
            return Ok(RigidityOutcome::NoCertificate(Failure::NoSecondThreefold {
                k,
                a,
                l_cap: caps.l_cap,
            }));
        };
        let branch = Branch {
            a,
            l,
            m: residual_target_dim(l, a),
            containment,
            bezout_rhs: a * l * (a + l - 2) / 2,
            deformation_bound: 5 * d + g - 1 - (a + l) * d,
        };
        if d <= branch.bezout_rhs {
            return Ok(RigidityOutcome::NoCertificate(Failure::Bezout {
                k,
                a,
                l,
                lhs: d,
                rhs: branch.bezout_rhs,
            }));
        }
        if branch.deformation_bound <= PGL5_DIM {
            return Ok(RigidityOutcome::NoCertificate(Failure::Deformation {
                k,
                a,
                l,
                bound: branch.deformation_bound,
            }));
        }
        branches.push(branch);
    }
    branches.reverse();
    let head = branches.last().expect("a = k branch").clone();
    let cert = RigidityCertificate {
        d,
        g,
        k,
        l: head.l,
        n: veronese_target_dim(k),
        m: head.m,
        worst_case_a: k,
        worst_case_b: head.l,
        bezout_lhs: d,
        bezout_rhs: head.bezout_rhs,
        deformation_bound: head.deformation_bound,
        pgl5: PGL5_DIM,
        verdict: "not_rigid".into(),
        first_containment,
        min_deformation_bound: branches
            .iter()
            .map(|b| b.deformation_bound)
            .min()
            .expect("non-empty"),
        checks: Checks {
            first_threefold: true,
            second_threefold: true,
            bezout: true,
            deformation: true,
        },
        branches,
    };
    debug_assert_eq!(cert.verify(), Ok(()));
    Ok(RigidityOutcome::Certified(Box::new(cert)))
}

fn big(n: Int) -> BigInt {
    BigInt::from(n)
}

fn big_binomial(n: &BigInt, k: u32) -> BigInt {
    if n.is_negative() {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= n - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// Castelnuovo bound evaluated in `BigInt`, written out independently of
/// the machine-integer version used by the search.
fn big_castelnuovo(d: &BigInt, r: &BigInt) -> BigInt {
    let step = r - BigInt::one();
    let (m, eps) = (d - BigInt::one()).div_rem(&step);
    big_binomial(&m, 2) * &step + &m * eps
}

fn big_contained(d: &BigInt, g: &BigInt, factor: Int, target: &BigInt) -> bool {
    let image = d * big(factor);
    &image < target || g > &big_castelnuovo(&image, target)
}

impl RigidityCertificate {
    /// Re-derives every inequality from the stored integers in `BigInt`
    /// arithmetic.
    pub fn verify(&self) -> Result<(), String> {
        let (d, g) = (big(self.d), big(self.g));
        let n = big_binomial(&big(self.k + 4), 4) - 1;
        if n != big(self.n) {
            return Err(format!("N mismatch: stored {}, recomputed {n}", self.n));
        }
        if !big_contained(&d, &g, self.k, &n) {
            return Err(format!("first threefold condition fails at k={}", self.k));
        }
        let a_min = self.k.min(2);
        let expected_as: Vec<Int> = (a_min..=self.k).collect();
        let got_as: Vec<Int> = self.branches.iter().map(|b| b.a).collect();
        if expected_as != got_as {
            return Err(format!("branches cover a={got_as:?}, expected {expected_as:?}"));
        }
        for b in &self.branches {
            if b.l < b.a {
                return Err(format!("branch a={}: l={} < a", b.a, b.l));
            }
            let m = big_binomial(&big(b.l + 4), 4) - big_binomial(&big(b.l - b.a + 4), 4) - 1;
            if m != big(b.m) {
                return Err(format!("branch a={}: M mismatch", b.a));
            }
            if !big_contained(&d, &g, b.l, &m) {
                return Err(format!("branch a={}: second threefold condition fails", b.a));
            }
            let twice_rhs = big(b.a) * big(b.l) * big(b.a + b.l - 2);
            if &d * 2 <= twice_rhs {
                return Err(format!("branch a={}: singular-locus check fails", b.a));
            }
            let def = big(5) * &d + &g - 1 - big(b.a + b.l) * &d;
            if def != big(b.deformation_bound) || def <= big(PGL5_DIM) {
                return Err(format!("branch a={}: deformation bound fails", b.a));
            }
        }
        let head = self.branches.last().ok_or("no branches")?;
        if head.a != self.k
            || head.l != self.l
            || head.m != self.m
            || self.worst_case_a != self.k
            || self.worst_case_b != self.l
            || self.bezout_lhs != self.d
            || self.bezout_rhs != head.bezout_rhs
            || self.deformation_bound != head.deformation_bound
            || self.pgl5 != PGL5_DIM
        {
            return Err("headline fields disagree with the a = k branch".into());
        }
        Ok(())
    }
}

/// Minimal genus certified non-rigid at degree `d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RigidityThreshold {
    pub d: Int,
    pub g_star: Int,
    pub certificate: RigidityCertificate,
}

/// Smallest `g ≤ π(d, 4)` admitting a certificate, by binary search.
///
/// Every condition in the chain weakens as `g` grows, so certification is
/// monotone in `g`; the result is checked at `g_star - 1` anyway.
pub fn rigidity_threshold(d: Int) -> Result<Option<RigidityThreshold>, RigidityError> {
    rigidity_threshold_with_caps(d, SearchCaps::for_degree(d))
}

pub fn rigidity_threshold_with_caps(
    d: Int,
    caps: SearchCaps,
) -> Result<Option<RigidityThreshold>, RigidityError> {
    if d < 5 {
        return Err(RigidityError::Domain(format!("need d >= 5, got {d}")));
    }
    let pi = castelnuovo_pi(d, 4);
    let certify = |g: Int| rigidity_certificate_with_caps(d, g, caps);
    let top = certify(pi)?;
    let Some(mut best) = top.certificate().cloned() else {
        return Ok(None);
    };
    // certify(lo) fails (or lo = -1), certify(hi) succeeds.
    let (mut lo, mut hi) = (-1, pi);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match certify(mid)? {
            RigidityOutcome::Certified(c) => {
                hi = mid;
                best = *c;
            }
            RigidityOutcome::NoCertificate(_) => lo = mid,
        }
    }
    if hi > 0 && certify(hi - 1)?.is_certified() {
        return Err(RigidityError::NonMonotone { d, g: hi - 1 });
    }
    Ok(Some(RigidityThreshold {
        d,
        g_star: hi,
        certificate: best,
    }))
}
