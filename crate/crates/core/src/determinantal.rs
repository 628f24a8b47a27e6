//! Determinantal curve families in P³ and on the quadric threefold.
//!
//! A family in P³ is given by the row degrees `k_1..k_s` of an `s × (s+1)`
//! matrix of forms; its maximal minors cut out a curve whose ideal sheaf has
//! the resolution
//!
//! ```text
//! 0 → ⊕ O(-t-k_i) → O(-t)^{s+1} → I_C → 0,   t = Σ k_i.
//! ```
//!
//! On the quadric `Q` the family is indexed by `t`: a `t × (t+1)` matrix of
//! linear forms, intersected with `Q`.

use std::collections::BTreeMap;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::exactpoly::{ratio, serialize_opt_rational, serialize_rational, Rational};
use crate::resolutions::{Ambient, GradedResolution, Summand};
use crate::Int;

/// Row-degree data of a determinantal family in P³.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct FamilyP3 {
    row_degrees: Vec<u32>,
}

impl FamilyP3 {
    /// Returns `None` for an empty list or a zero degree.
    pub fn new(row_degrees: Vec<u32>) -> Option<Self> {
        if row_degrees.is_empty() || row_degrees.contains(&0) {
            return None;
        }
        Some(Self { row_degrees })
    }

    /// `s` rows, all of degree `t`.
    pub fn uniform(s: u32, t: u32) -> Option<Self> {
        Self::new(vec![t; s as usize])
    }

    pub fn row_degrees(&self) -> &[u32] {
        &self.row_degrees
    }

    pub fn s(&self) -> Int {
        self.row_degrees.len() as Int
    }

    /// `t = Σ k_i`.
    pub fn t(&self) -> Int {
        self.row_degrees.iter().map(|&k| Int::from(k)).sum()
    }

    /// `u = Σ k_i²`.
    pub fn u(&self) -> Int {
        self.row_degrees.iter().map(|&k| Int::from(k).pow(2)).sum()
    }

    fn cube_sum(&self) -> Int {
        self.row_degrees.iter().map(|&k| Int::from(k).pow(3)).sum()
    }

    /// Common row degree if every row has the same degree.
    pub fn uniform_degree(&self) -> Option<u32> {
        let first = self.row_degrees[0];
        self.row_degrees.iter().all(|&k| k == first).then_some(first)
    }

    /// Same multiset of row degrees in non-decreasing order.
    pub fn canonical(&self) -> Self {
        let mut row_degrees = self.row_degrees.clone();
        row_degrees.sort_unstable();
        Self { row_degrees }
    }

    /// The length-one resolution of the ideal sheaf over P³.
    pub fn resolution(&self) -> GradedResolution {
        let t = self.t() as i64;
        let mut syzygies: BTreeMap<i64, u64> = BTreeMap::new();
        for &k in &self.row_degrees {
            *syzygies.entry(-t - i64::from(k)).or_default() += 1;
        }
        let e1 = syzygies
            .into_iter()
            .rev()
            .map(|(twist, rank)| Summand::new(rank, twist))
            .collect();
        GradedResolution::new(
            Ambient::ProjectiveSpace(3),
            vec![vec![Summand::new(self.row_degrees.len() as u64 + 1, -t)], e1],
        )
        .expect("family resolutions are well formed")
    }
}

/// Degree and genus of a family member, with a flag for curves of degree
/// below the ambient dimension (which cannot be nondegenerate).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FamilyInvariants {
    pub d: Int,
    pub g: Int,
    pub degenerate: bool,
}

/// `d = (t² + u)/2`, `g = 1 + (2t³ - 6t² + 3ut + Σ(k_i³ - 6k_i²))/6`.
pub fn family_p3_invariants(f: &FamilyP3) -> FamilyInvariants {
    let (t, u) = (f.t(), f.u());
    let twice_d = t * t + u;
    assert_eq!(twice_d % 2, 0);
    let six_gm1 = 2 * t.pow(3) - 6 * t * t + 3 * u * t + f.cube_sum() - 6 * u;
    assert_eq!(six_gm1 % 6, 0);
    let d = twice_d / 2;
    FamilyInvariants {
        d,
        g: 1 + six_gm1 / 6,
        degenerate: d < 3,
    }
}

/// Dimension `s(s+1)(t³ + 6t² + 11t - 6)/6` of the component of uniform
/// determinantal curves (all row degrees equal to `t`).
///
/// Only the uniform case has a closed form; for mixed row degrees the count
/// depends on coincidences among the `k_i` and is not provided.
pub fn family_p3_uniform_dimension(s: Int, t: Int) -> Int {
    assert!(s >= 1 && t >= 1);
    let num = s * (s + 1) * (t.pow(3) + 6 * t * t + 11 * t - 6);
    assert_eq!(num % 6, 0);
    num / 6
}

/// Curves on the quadric cut by a `t × (t+1)` matrix of linear forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FamilyQ {
    pub t: u32,
}

impl FamilyQ {
    pub fn new(t: u32) -> Option<Self> {
        (t >= 1).then_some(Self { t })
    }

    /// `0 → O_Q(-t-1)^t → O_Q(-t)^{t+1} → I_{C/Q} → 0`.
    pub fn resolution(&self) -> GradedResolution {
        let t = i64::from(self.t);
        GradedResolution::new(
            Ambient::QuadricThreefold,
            vec![
                vec![Summand::new(u64::from(self.t) + 1, -t)],
                vec![Summand::new(u64::from(self.t), -t - 1)],
            ],
        )
        .expect("family resolutions are well formed")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuadricFamilyInvariants {
    pub d: Int,
    pub g: Int,
    /// Dimension of the component, always `3d`.
    pub dim: Int,
    pub degenerate: bool,
}

/// `d = t(t+1)`, `g = (4t³ - 3t² - 7t + 6)/6`, `dim = 3d`.
pub fn family_q_invariants(f: &FamilyQ) -> QuadricFamilyInvariants {
    let t = Int::from(f.t);
    let d = t * (t + 1);
    QuadricFamilyInvariants {
        d,
        g: quadric_family_genus(t),
        dim: 3 * d,
        degenerate: d < 4,
    }
}

/// `(4t³ - 3t² - 7t + 6)/6`, exact for every integer `t`.
pub fn quadric_family_genus(t: Int) -> Int {
    let num = 4 * t.pow(3) - 3 * t * t - 7 * t + 6;
    assert_eq!(num % 6, 0);
    num / 6
}

/// `g²/d³` of a family together with the two a-priori bounds on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RatioAnalysis {
    pub d: Int,
    pub g: Int,
    #[serde(serialize_with = "serialize_rational")]
    pub ratio: Rational,
    /// `u / t²`.
    #[serde(serialize_with = "serialize_rational")]
    pub alpha: Rational,
    /// `(8/9)(1+2α)²/(1+α)³`, valid for every family with `g ≥ 0`.
    #[serde(serialize_with = "serialize_rational")]
    pub mixed_bound: Rational,
    /// `(2/9)(4 + 1/(s²+s))`, only for uniform families.
    #[serde(serialize_with = "serialize_opt_rational")]
    pub uniform_bound: Option<Rational>,
}

/// `(8/9)(1+2α)²/(1+α)³`; its maximum over `α > 0` is `256/243` at `α = 1/2`.
pub fn mixed_ratio_bound(alpha: &Rational) -> Rational {
    let one = Rational::from_integer(1.into());
    let two = Rational::from_integer(2.into());
    let a = &one + &two * alpha;
    let b = &one + alpha;
    ratio(8, 9) * &a * &a / (&b * &b * &b)
}

/// `(2/9)(4 + 1/(s² + s))`.
pub fn uniform_ratio_bound(s: Int) -> Rational {
    ratio(2, 9) * (Rational::from_integer(4.into()) + ratio(1, s * s + s))
}

pub fn ratio_analysis(f: &FamilyP3) -> RatioAnalysis {
    let inv = family_p3_invariants(f);
    let (t, u) = (f.t(), f.u());
    let alpha = ratio(u, t * t);
    let ratio_gd = if inv.g.is_zero() {
        Rational::zero()
    } else {
        ratio(inv.g * inv.g, inv.d.pow(3))
    };
    RatioAnalysis {
        d: inv.d,
        g: inv.g,
        ratio: ratio_gd,
        mixed_bound: mixed_ratio_bound(&alpha),
        alpha,
        uniform_bound: f.uniform_degree().map(|_| uniform_ratio_bound(f.s())),
    }
}

/// Default bounds for [`search_family_p3`].
pub const DEFAULT_MAX_S: u32 = 8;
pub const DEFAULT_MAX_K: u32 = 8;

/// All row-degree multisets with at most `max_s` rows and entries at most
/// `max_k` whose invariants are `(d, g)`.
///
/// Each multiset is listed once, in non-decreasing order. Results are sorted
/// by number of rows, then lexicographically.
pub fn search_family_p3(d: Int, g: Int, max_s: u32, max_k: u32) -> Vec<FamilyP3> {
    if max_s == 0 || max_k == 0 || d < 1 {
        return Vec::new();
    }
    // Partition the search by smallest row degree; each branch is independent.
    let mut found: Vec<FamilyP3> = (1..=max_k)
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut out = Vec::new();
            let mut rows = vec![first];
            extend_rows(&mut rows, d, g, max_s as usize, max_k, &mut out);
            out
        })
        .collect();
    found.sort_by(|a, b| {
        a.row_degrees
            .len()
            .cmp(&b.row_degrees.len())
            .then_with(|| a.row_degrees.cmp(&b.row_degrees))
    });
    found
}

fn extend_rows(rows: &mut Vec<u32>, d: Int, g: Int, max_s: usize, max_k: u32, out: &mut Vec<FamilyP3>) {
    let t: Int = rows.iter().map(|&k| Int::from(k)).sum();
    let u: Int = rows.iter().map(|&k| Int::from(k).pow(2)).sum();
    // 2d = t² + u only grows as rows are added or raised.
    if t * t + u > 2 * d {
        return;
    }
    let fam = FamilyP3 {
        row_degrees: rows.clone(),
    };
    let inv = family_p3_invariants(&fam);
    if inv.d == d && inv.g == g {
        out.push(fam);
    }
    if rows.len() == max_s {
        return;
    }
    let last = *rows.last().expect("non-empty");
    for k in last..=max_k {
        rows.push(k);
        extend_rows(rows, d, g, max_s, max_k, out);
        rows.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;

    fn fam(rows: &[u32]) -> FamilyP3 {
        FamilyP3::new(rows.to_vec()).unwrap()
    }

    #[test]
    fn invariants_examples() {
        let twisted = family_p3_invariants(&fam(&[1, 1]));
        assert_eq!((twisted.d, twisted.g, twisted.degenerate), (3, 0, false));
        let quartic = family_p3_invariants(&fam(&[2]));
        assert_eq!((quartic.d, quartic.g), (4, 1));
        let sextic = family_p3_invariants(&fam(&[1, 1, 1]));
        assert_eq!((sextic.d, sextic.g), (6, 3));
        let line = family_p3_invariants(&fam(&[1]));
        assert_eq!((line.d, line.g, line.degenerate), (1, 0, true));
    }

    #[test]
    fn linear_family_closed_forms() {
        for s in 1..=30 {
            let inv = family_p3_invariants(&FamilyP3::uniform(s as u32, 1).unwrap());
            assert_eq!(inv.d * 2, s * (s + 1));
            assert_eq!(6 * (inv.g - 1), 2 * s.pow(3) - 3 * s * s - 5 * s);
        }
    }

    #[test]
    fn uniform_dimension_examples() {
        for s in 1..=40 {
            assert_eq!(family_p3_uniform_dimension(s, 1), 2 * s * (s + 1));
        }
        assert_eq!(family_p3_uniform_dimension(3, 1), 24);
        // 4s(s+1) - 1 - (s² - 1) - ((s+1)² - 1) at s = 3
        assert_eq!(4 * 3 * 4 - 1 - 8 - 15, 24);
        // Pencils of quartics: Grassmannian G(2, 35).
        assert_eq!(family_p3_uniform_dimension(1, 4), 66);
    }

    #[test]
    fn quadric_examples() {
        let expect = [(1, 2, 0, 6, true), (2, 6, 2, 18, false), (3, 12, 11, 36, false)];
        for (t, d, g, dim, degenerate) in expect {
            let inv = family_q_invariants(&FamilyQ::new(t).unwrap());
            assert_eq!((inv.d, inv.g, inv.dim, inv.degenerate), (d, g, dim, degenerate));
        }
        assert!(FamilyQ::new(0).is_none());
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(mixed_ratio_bound(&ratio(1, 2)), ratio(256, 243));
        let r = ratio_analysis(&FamilyP3::uniform(1, 10).unwrap());
        assert_eq!((r.d, r.g), (100, 801));
        assert_eq!(r.ratio, ratio(641_601, 1_000_000));
        assert_eq!(r.uniform_bound, Some(rat(1)));
        assert!(r.ratio < rat(1));
        let cubic = ratio_analysis(&fam(&[1, 1]));
        assert_eq!(cubic.ratio, rat(0));
        assert_eq!(cubic.alpha, ratio(1, 2));
        assert!(ratio_analysis(&fam(&[1, 2])).uniform_bound.is_none());
    }

    #[test]
    fn resolution_shape() {
        let r = fam(&[2, 1, 2]).resolution();
        assert_eq!(r.terms()[0], vec![Summand::new(4, -5)]);
        assert_eq!(r.terms()[1], vec![Summand::new(1, -6), Summand::new(2, -7)]);
        let q = FamilyQ::new(2).unwrap().resolution();
        assert_eq!(q.terms()[0], vec![Summand::new(3, -2)]);
        assert_eq!(q.terms()[1], vec![Summand::new(2, -3)]);
    }

    #[test]
    fn search_examples() {
        assert_eq!(search_family_p3(3, 0, 4, 4), vec![fam(&[1, 1])]);
        assert_eq!(search_family_p3(4, 1, 4, 4), vec![fam(&[2])]);
        assert!(search_family_p3(5, 0, 3, 3).is_empty());
        assert!(search_family_p3(3, 0, 0, 4).is_empty());
    }

    #[test]
    fn search_matches_brute_force() {
        // Enumerate every tuple (not multiset) and dedupe by sorting.
        let (max_s, max_k) = (4u32, 4u32);
        let mut by_class: BTreeMap<(Int, Int), std::collections::BTreeSet<Vec<u32>>> = BTreeMap::new();
        for s in 1..=max_s {
            let total = max_k.pow(s);
            for code in 0..total {
                let mut c = code;
                let mut rows: Vec<u32> = (0..s)
                    .map(|_| {
                        let k = c % max_k + 1;
                        c /= max_k;
                        k
                    })
                    .collect();
                rows.sort_unstable();
                let inv = family_p3_invariants(&fam(&rows));
                by_class.entry((inv.d, inv.g)).or_default().insert(rows);
            }
        }
        for ((d, g), rows) in by_class {
            let found: Vec<Vec<u32>> = search_family_p3(d, g, max_s, max_k)
                .into_iter()
                .map(|f| f.row_degrees().to_vec())
                .collect();
            let mut expected: Vec<Vec<u32>> = rows.into_iter().collect();
            expected.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
            assert_eq!(found, expected, "(d, g) = ({d}, {g})");
        }
    }
}
