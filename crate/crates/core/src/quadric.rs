//! Curves on the smooth quadric threefold `Q ⊂ P⁴`.
//!
//! Two regimes with expected dimension `3d`:
//!
//! - Large genus: a witness `k` places `C` on a surface in `|O_Q(a)|`,
//!   `a ≤ k`, and every component has dimension at least
//!   `3d + g - kd - 1 > 3d`.
//! - Small genus: determinantal curves on `Q` (degree `t(t+1)`, genus
//!   `L(t)`) are smoothed together with rational cubics and lines, which
//!   keeps a component of dimension exactly `3d` over a range of genera.
//!
//! The smoothing lemmas are trusted; only their effect on `(d, g)` is used:
//! a cubic meeting the curve in `δ ∈ 1..=4` points moves
//! `(d, g) → (d+3, g+δ-1)`, a line meeting it once moves `(d, g) → (d+1, g)`.

use serde::Serialize;

use crate::determinantal::quadric_family_genus;
use crate::Int;

/// A `k` for which the large-genus argument applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GBWitness {
    pub d: Int,
    pub g: Int,
    pub k: Int,
    /// `3d + g - kd - 1`.
    pub bound: Int,
}

/// `d > 2k(k-1)`, `4kg > d² + 2k²d`, and `3d + g - kd - 1 > 3d`.
fn witness_valid(d: Int, g: Int, k: Int) -> bool {
    d > 2 * k * (k - 1) && 4 * k * g > d * d + 2 * k * k * d && g - k * d - 1 > 0
}

/// Valid `k` are bounded by `2k(k-1) < d`.
fn k_range(d: Int) -> impl Iterator<Item = Int> {
    (1..).take_while(move |k| 2 * k * (k - 1) < d)
}

/// The witness with the largest bound, i.e. the smallest valid `k`.
pub fn gb_witness(d: Int, g: Int) -> Option<GBWitness> {
    k_range(d).find(|&k| witness_valid(d, g, k)).map(|k| GBWitness {
        d,
        g,
        k,
        bound: 3 * d + g - k * d - 1,
    })
}

/// Smallest genus for which [`gb_witness`] succeeds at `k`.
fn min_genus_for(d: Int, k: Int) -> Int {
    // 4kg > d² + 2k²d  ⟺  g ≥ ⌊(d² + 2k²d)/(4k)⌋ + 1
    let castelnuovo_side = (d * d + 2 * k * k * d).div_euclid(4 * k) + 1;
    castelnuovo_side.max(k * d + 2)
}

/// Minimal genus admitting a witness.
pub fn gb_threshold(d: Int) -> Int {
    assert!(d >= 3, "gb_threshold needs d >= 3");
    k_range(d)
        .map(|k| min_genus_for(d, k))
        .min()
        .expect("k = 1 is always in range")
}

/// Closed integer interval `[lo, hi]`; empty when `hi < lo`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct GenusInterval {
    pub lo: Int,
    pub hi: Int,
}

impl GenusInterval {
    pub fn is_empty(&self) -> bool {
        self.hi < self.lo
    }

    pub fn contains(&self, g: Int) -> bool {
        self.lo <= g && g <= self.hi
    }
}

/// Genera reachable at `target_d` from `(base_d, base_g)`: as many cubic
/// moves as fit, the remaining degree made up with lines.
pub fn smoothing_reach(base_d: Int, base_g: Int, target_d: Int) -> GenusInterval {
    assert!(target_d >= base_d, "smoothing only raises the degree");
    let cubic_moves = (target_d - base_d) / 3;
    GenusInterval {
        lo: base_g,
        hi: base_g + 3 * cubic_moves,
    }
}

/// `L(t) = (4t³ - 3t² - 7t + 6)/6`.
pub fn range_low(t: Int) -> Int {
    quadric_family_genus(t)
}

/// `R(t) = L(t) + d - t(t+1) - 2`.
pub fn range_high(t: Int, d: Int) -> Int {
    range_low(t) + d - t * (t + 1) - 2
}

/// `L(t+2) ≤ R(t)`, compared directly.
pub fn stitched(t: Int, d: Int) -> bool {
    range_low(t + 2) <= range_high(t, d)
}

/// Closed form of [`stitched`]: `d ≥ 5t² + 7t + 3`.
///
/// `L(t+2) - L(t) = 4t² + 6t + 1`, so `L(t+2) ≤ R(t)` reads
/// `4t² + 6t + 1 ≤ d - t² - t - 2`.
pub fn stitched_closed_form(t: Int, d: Int) -> bool {
    d >= 5 * t * t + 7 * t + 3
}

/// `t ≥ 2` with `t(t+1) ≡ 0 (mod 3)`, i.e. `t ≡ 0, 2 (mod 3)`.
pub fn admissible(t: Int) -> bool {
    t >= 2 && (t * (t + 1)) % 3 == 0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CoverageRow {
    pub t: Int,
    #[serde(rename = "L")]
    pub low: Int,
    #[serde(rename = "R")]
    pub high: Int,
    pub stitched: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageReport {
    pub d: Int,
    pub per_t: Vec<CoverageRow>,
    /// Last `t` of the unbroken stitched chain starting at the smallest
    /// admissible `t`.
    pub chain_end_t: Option<Int>,
    /// `L` at the start of the chain.
    pub paper_min_g: Option<Int>,
    /// `R(chain_end_t)`.
    pub paper_max_g: Option<Int>,
    /// Union of every `smoothing_reach(t(t+1), L(t), d)`, merged and sorted.
    pub closure_intervals: Vec<GenusInterval>,
}

impl CoverageReport {
    /// Upper end of the closure interval containing the smallest base genus.
    pub fn closure_max_contiguous_g(&self) -> Option<Int> {
        let start = self.paper_min_g?;
        self.closure_intervals
            .iter()
            .find(|iv| iv.contains(start))
            .map(|iv| iv.hi)
    }

    /// The stitched range `[paper_min_g, paper_max_g]`, possibly empty.
    pub fn paper_range(&self) -> Option<GenusInterval> {
        Some(GenusInterval {
            lo: self.paper_min_g?,
            hi: self.paper_max_g?,
        })
    }
}

pub fn coverage_report(d: Int) -> CoverageReport {
    assert!(d >= 2, "coverage_report needs d >= 2");
    let ts: Vec<Int> = (2..)
        .take_while(|t| t * (t + 1) <= d)
        .filter(|&t| admissible(t))
        .collect();
    let per_t: Vec<CoverageRow> = ts
        .iter()
        .map(|&t| CoverageRow {
            t,
            low: range_low(t),
            high: range_high(t, d),
            stitched: stitched(t, d),
        })
        .collect();

    let mut chain_end = None;
    for (i, row) in per_t.iter().enumerate() {
        chain_end = Some(row.t);
        if !row.stitched || i + 1 == per_t.len() {
            break;
        }
    }

    let mut intervals: Vec<GenusInterval> = per_t
        .iter()
        .map(|row| smoothing_reach(row.t * (row.t + 1), row.low, d))
        .collect();
    intervals.sort();
    let mut merged: Vec<GenusInterval> = Vec::new();
    for iv in intervals {
        match merged.last_mut() {
            Some(last) if iv.lo <= last.hi + 1 => last.hi = last.hi.max(iv.hi),
            _ => merged.push(iv),
        }
    }

    CoverageReport {
        d,
        paper_min_g: per_t.first().map(|r| r.low),
        paper_max_g: chain_end.map(|t| range_high(t, d)),
        chain_end_t: chain_end,
        per_t,
        closure_intervals: merged,
    }
}
