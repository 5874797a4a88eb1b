#![allow(dead_code)]

use ietforge::intervals::{try_sort_by, Interval};
use ietforge::iet::compose;
use ietforge::{build_iet, AlphaOracle, Iet, Permutation, QAlpha, Rational};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use std::cmp::Ordering;
use std::sync::Arc;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qa(s: &str) -> QAlpha {
    s.parse().unwrap()
}

/// `c·sqrt(2)`.
pub fn sqrt2_times(n: i64, d: i64) -> Arc<AlphaOracle> {
    Arc::new(AlphaOracle::sqrt(rat(n, d), rat(2, 1)).unwrap())
}

pub fn random_permutation(rng: &mut impl Rng, m: usize) -> Permutation {
    let mut v: Vec<usize> = (1..=m).collect();
    v.shuffle(rng);
    Permutation::new(v).unwrap()
}

/// A point of `(0, 1)` of the form `a/b + c·alpha/d` with small integers.
fn random_cut(rng: &mut impl Rng, oracle: &AlphaOracle) -> QAlpha {
    loop {
        let b = rng.gen_range(2..=12);
        let a = rng.gen_range(-b..=2 * b);
        let c = rng.gen_range(-1..=1);
        let d = rng.gen_range(1..=3);
        let x = QAlpha::frac(a, b, c, d);
        let inside = oracle.is_positive(&x).unwrap() && oracle.is_positive(&(&QAlpha::one() - &x)).unwrap();
        if inside {
            return x;
        }
    }
}

/// `m - 1` distinct cut points of `(0, 1)` turned into a length vector.
pub fn random_lengths(rng: &mut impl Rng, m: usize, oracle: &AlphaOracle) -> Vec<QAlpha> {
    let mut cuts: Vec<QAlpha> = Vec::new();
    while cuts.len() < m - 1 {
        let x = random_cut(rng, oracle);
        if !cuts.contains(&x) {
            cuts.push(x);
        }
    }
    let mut cuts = try_sort_by(cuts, &mut |a: &QAlpha, b: &QAlpha| oracle.cmp(a, b)).unwrap();
    cuts.insert(0, QAlpha::zero());
    cuts.push(QAlpha::one());
    cuts.windows(2).map(|w| &w[1] - &w[0]).collect()
}

pub fn random_iet(rng: &mut impl Rng, m: usize, oracle: &Arc<AlphaOracle>) -> Iet {
    let perm = random_permutation(rng, m);
    let lengths = random_lengths(rng, m, oracle);
    build_iet(perm, lengths, oracle.clone()).unwrap()
}

/// Independent check that the translated intervals tile `[0, r)`.
pub fn images_tile_domain(t: &Iet) -> bool {
    let o = t.oracle();
    let images: Vec<Interval> = (1..=t.m()).map(|i| t.interval(i).translate(t.translation(i))).collect();
    let sorted = try_sort_by(images, &mut |a: &Interval, b: &Interval| o.cmp(&a.lo, &b.lo)).unwrap();
    let mut cursor = QAlpha::zero();
    for iv in &sorted {
        if o.cmp(&iv.lo, &cursor).unwrap() != Ordering::Equal {
            return false;
        }
        if !o.is_positive(&iv.length()).unwrap() {
            return false;
        }
        cursor = iv.hi.clone();
    }
    cursor == *t.total_length()
}

/// A rational exchange of `[0, 1)` on the grid of step `1/k`, and its
/// rotation by `theta`: the translations of `R_theta ∘ S` are
/// `theta + (multiple of 1/k)`.
pub fn planted(rng: &mut impl Rng, oracle: &Arc<AlphaOracle>, theta: &QAlpha) -> (Iet, i64) {
    let k = rng.gen_range(2..=50i64);
    let m = rng.gen_range(1..=(k as usize).min(6));
    // a random composition of k into m positive parts
    let mut cuts: Vec<i64> = (1..k).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<i64> = cuts.into_iter().take(m - 1).collect();
    cuts.sort_unstable();
    cuts.insert(0, 0);
    cuts.push(k);
    let lengths = cuts.windows(2).map(|w| QAlpha::frac(w[1] - w[0], k, 0, 1)).collect();
    let s = build_iet(random_permutation(rng, m), lengths, oracle.clone()).unwrap();
    let r = ietforge::families::rotation(theta, oracle.clone()).unwrap();
    (compose(&r, &s).unwrap(), k)
}

/// Naive `T^l(x)` by repeated application.
pub fn naive_power(t: &Iet, x: &QAlpha, l: u64) -> QAlpha {
    (0..l).fold(x.clone(), |y, _| t.apply(&y).unwrap())
}

/// True when `x - y` is an integer.
pub fn congruent_mod_one(x: &QAlpha, y: &QAlpha) -> bool {
    let d = x - y;
    d.is_rational() && d.rational_part().is_integer()
}
