use curvedim::determinantal::{
    family_p3_invariants, family_p3_uniform_dimension, family_q_invariants, mixed_ratio_bound,
    ratio_analysis, search_family_p3, uniform_ratio_bound, FamilyP3, FamilyQ,
};
use curvedim::exactpoly::{ratio, Rational};
use curvedim::resolutions::curve_class_from_resolution;
use curvedim::Int;
use num_traits::Signed;
use proptest::prelude::*;

/// `C(x, n)` as the polynomial `x(x-1)…(x-n+1)/n!`, for any integer `x`.
fn binom(x: Int, n: u32) -> Int {
    let mut num = 1;
    let mut den = 1;
    for i in 0..Int::from(n) {
        num *= x - i;
        den *= i + 1;
    }
    num / den
}

/// `χ(O(k))` on P³ or on the quadric threefold.
fn chi(on_quadric: bool, k: Int) -> Int {
    if on_quadric {
        binom(k + 4, 4) - binom(k + 2, 4)
    } else {
        binom(k + 3, 3)
    }
}

/// `(d, g)` from `χ(O_C(k)) = χ(O(k)) - χ(E₀(k)) + χ(E₁(k))` at `k = 0, 1`.
fn numeric_dg(on_quadric: bool, e0: &[(Int, Int)], e1: &[(Int, Int)]) -> (Int, Int) {
    let p = |k: Int| {
        let sum = |e: &[(Int, Int)]| e.iter().map(|&(rank, tw)| rank * chi(on_quadric, k + tw)).sum::<Int>();
        chi(on_quadric, k) - sum(e0) + sum(e1)
    };
    (p(1) - p(0), 1 - p(0))
}

fn p3_numeric(rows: &[u32]) -> (Int, Int) {
    let t: Int = rows.iter().map(|&k| Int::from(k)).sum();
    let e1: Vec<(Int, Int)> = rows.iter().map(|&k| (1, -t - Int::from(k))).collect();
    numeric_dg(false, &[(rows.len() as Int + 1, -t)], &e1)
}

fn q_numeric(t: Int) -> (Int, Int) {
    numeric_dg(true, &[(t + 1, -t)], &[(t, -t - 1)])
}

/// Non-decreasing sequences of length `s` over `1..=max_k`.
fn multisets(s: usize, max_k: u32) -> Vec<Vec<u32>> {
    if s == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for prefix in multisets(s - 1, max_k) {
        let start = prefix.last().copied().unwrap_or(1);
        for k in start..=max_k {
            let mut next = prefix.clone();
            next.push(k);
            out.push(next);
        }
    }
    out
}

fn all_families(max_s: usize, max_k: u32) -> Vec<FamilyP3> {
    (1..=max_s)
        .flat_map(|s| multisets(s, max_k))
        .map(|rows| FamilyP3::new(rows).unwrap())
        .collect()
}

#[test]
fn p3_closed_form_matches_resolution() {
    let families = all_families(6, 5);
    assert_eq!(families.len(), 5 + 15 + 35 + 70 + 126 + 210);
    for f in &families {
        let inv = family_p3_invariants(f);
        let class = curve_class_from_resolution(&f.resolution()).unwrap();
        assert_eq!((inv.d, inv.g), (class.d, class.g), "{:?}", f.row_degrees());
        assert_eq!((inv.d, inv.g), p3_numeric(f.row_degrees()), "{:?}", f.row_degrees());
        assert_eq!(class.r, 3);
    }
}

#[test]
fn quadric_closed_form_matches_resolution() {
    for t in 1..=10u32 {
        let f = FamilyQ::new(t).unwrap();
        let inv = family_q_invariants(&f);
        let class = curve_class_from_resolution(&f.resolution()).unwrap();
        assert_eq!((inv.d, inv.g), (class.d, class.g), "t={t}");
        assert_eq!((inv.d, inv.g), q_numeric(Int::from(t)), "t={t}");
        assert_eq!(inv.dim, 3 * inv.d);
    }
}

#[test]
fn linear_specialization() {
    for s in 1..=10u32 {
        let inv = family_p3_invariants(&FamilyP3::uniform(s, 1).unwrap());
        let s = Int::from(s);
        assert_eq!(2 * inv.d, s * (s + 1));
        assert_eq!(6 * (inv.g - 1), 2 * s.pow(3) - 3 * s * s - 5 * s);
        assert_eq!(family_p3_uniform_dimension(s, 1), 4 * inv.d);
    }
}

#[test]
fn uniform_specialization() {
    for s in 1..=10u32 {
        for t in 1..=6u32 {
            let inv = family_p3_invariants(&FamilyP3::uniform(s, t).unwrap());
            let (s, t) = (Int::from(s), Int::from(t));
            assert_eq!(2 * inv.d, s * (s + 1) * t * t);
            assert_eq!(
                6 * (inv.g - 1),
                s * (s + 1) * (2 * s + 1) * t.pow(3) - 6 * s * (s + 1) * t * t
            );
        }
    }
    // The t = 2 and t = 3 closed forms.
    for s in 1..=20u32 {
        let two = family_p3_invariants(&FamilyP3::uniform(s, 2).unwrap());
        let three = family_p3_invariants(&FamilyP3::uniform(s, 3).unwrap());
        let s = Int::from(s);
        assert_eq!(two.d, 2 * s * (s + 1));
        assert_eq!(3 * (two.g - 1), 8 * (s - 1) * s * (s + 1));
        assert_eq!(2 * three.d, 9 * s * (s + 1));
        assert_eq!(2 * (three.g - 1), 9 * s * (s + 1) * (2 * s - 1));
    }
}

#[test]
fn dimension_dichotomy() {
    for s in 1..=50 {
        for t in 1..=10 {
            let d = s * (s + 1) * t * t / 2;
            let l = family_p3_uniform_dimension(s, t);
            if t <= 3 {
                assert_eq!(l, 4 * d, "s={s} t={t}");
            } else {
                assert!(l > 4 * d, "s={s} t={t}");
            }
        }
    }
}

#[test]
fn uniform_ratio_bound_is_strict() {
    for s in 1..=20u32 {
        for t in 1..=20u32 {
            let r = ratio_analysis(&FamilyP3::uniform(s, t).unwrap());
            if r.g < 0 {
                continue;
            }
            assert!(r.ratio < uniform_ratio_bound(Int::from(s)), "s={s} t={t}");
        }
    }
}

#[test]
fn mixed_bounds_hold() {
    for f in all_families(6, 6) {
        let r = ratio_analysis(&f);
        let (t, u) = (f.t(), f.u());
        assert!(6 * (r.g - 1) < 2 * t.pow(3) + 4 * u * t, "{:?}", f.row_degrees());
        if r.g < 0 {
            continue;
        }
        assert!(r.ratio < ratio(256, 243), "{:?}", f.row_degrees());
        assert!(r.ratio < r.mixed_bound, "{:?}", f.row_degrees());
    }
}

#[test]
fn mixed_bound_peaks_at_one_half() {
    let peak = mixed_ratio_bound(&ratio(1, 2));
    assert_eq!(peak, ratio(256, 243));
    for n in 1..=200 {
        let alpha = ratio(n, 100);
        assert!(mixed_ratio_bound(&alpha) <= peak, "alpha={alpha}");
    }
}

#[test]
fn asymptotic_ratios() {
    let r = ratio_analysis(&FamilyP3::uniform(500, 2).unwrap());
    let target = ratio(8, 9);
    let rel = (r.ratio.clone() - &target) / &target;
    assert!(rel.clone().abs() < ratio(2, 100), "relative error {rel}");

    let q = family_q_invariants(&FamilyQ::new(500).unwrap());
    let value = q.g as f64 / (q.d as f64).powf(1.5);
    assert!((value / (2.0 / 3.0) - 1.0).abs() < 0.01, "{value}");
}

#[test]
fn search_finds_every_family() {
    for f in all_families(4, 4) {
        let inv = family_p3_invariants(&f);
        let found = search_family_p3(inv.d, inv.g, 4, 4);
        assert!(found.contains(&f.canonical()), "{:?}", f.row_degrees());
        for g in &found {
            let other = family_p3_invariants(g);
            assert_eq!((other.d, other.g), (inv.d, inv.g));
        }
    }
}

proptest! {
    #[test]
    fn invariants_ignore_row_order(mut rows in prop::collection::vec(1u32..=9, 1..=7)) {
        let a = family_p3_invariants(&FamilyP3::new(rows.clone()).unwrap());
        rows.reverse();
        let b = family_p3_invariants(&FamilyP3::new(rows.clone()).unwrap());
        prop_assert_eq!(a, b);
        prop_assert_eq!((a.d, a.g), p3_numeric(&rows));
    }

    #[test]
    fn alpha_is_u_over_t_squared(rows in prop::collection::vec(1u32..=9, 1..=7)) {
        let f = FamilyP3::new(rows).unwrap();
        let r = ratio_analysis(&f);
        prop_assert_eq!(r.alpha, Rational::new(f.u().into(), (f.t() * f.t()).into()));
    }
}
