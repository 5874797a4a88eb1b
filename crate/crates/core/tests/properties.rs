mod common;

use common::*;
use ietforge::combinatorics::{all_permutations, cycle_decomposition, is_irreducible, is_n_cycle};
use ietforge::dynamics::{
    drift_certificate, first_return, idoc_check, invariant_union_search, minimality_report, Budgets, IdocVerdict,
    MinimalityVerdict,
};
use ietforge::families::{thm14_family, thm15_family};
use ietforge::iet::{compose, iterate};
use ietforge::intervals::{Interval, IntervalSet};
use ietforge::numeric::qa_integer_quotient;
use ietforge::spectral::find_interval_cycles;
use ietforge::{AlphaOracle, QAlpha, Sign};
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::cmp::Ordering;
use std::sync::Arc;

fn small_qalpha() -> impl Strategy<Value = QAlpha> {
    (-40i64..40, 1i64..20, -40i64..40, 1i64..20).prop_map(|(a, b, c, d)| QAlpha::frac(a, b, c, d))
}

fn oracles() -> Vec<Arc<AlphaOracle>> {
    vec![
        sqrt2_times(1, 2),
        Arc::new(AlphaOracle::sqrt(rat(1, 3), rat(5, 1)).unwrap()),
        Arc::new(AlphaOracle::continued_fraction(vec![BigInt::from(0)], vec![BigInt::from(1), BigInt::from(2)]).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn comparison_is_a_total_order(x in small_qalpha(), y in small_qalpha(), z in small_qalpha(), k in 0usize..3) {
        let o = &oracles()[k];
        let xy = o.cmp(&x, &y).unwrap();
        prop_assert_eq!(xy, o.cmp(&y, &x).unwrap().reverse());
        prop_assert_eq!(xy == Ordering::Equal, x == y);
        let yz = o.cmp(&y, &z).unwrap();
        if xy != Ordering::Greater && yz != Ordering::Greater {
            prop_assert_ne!(o.cmp(&x, &z).unwrap(), Ordering::Greater);
        }
        if !x.alpha_coeff().is_integer() || x.alpha_coeff() != &rat(0, 1) {
            prop_assert_ne!(o.sign(&x).unwrap(), Sign::Zero);
        }
    }

    #[test]
    fn comparison_agrees_with_floats_away_from_ties(x in small_qalpha(), y in small_qalpha()) {
        let o = sqrt2_times(1, 2);
        let a = 2f64.sqrt() / 2.0;
        let gap = x.to_f64(a) - y.to_f64(a);
        prop_assume!(gap.abs() > 1e-9);
        let expected = if gap > 0.0 { Ordering::Greater } else { Ordering::Less };
        prop_assert_eq!(o.cmp(&x, &y).unwrap(), expected);
    }

    #[test]
    fn integer_quotient_recovers_multiples(k in -1_000_000i64..=1_000_000, s in small_qalpha()) {
        prop_assume!(!s.is_zero());
        let x = s.scale(&rat(k, 1));
        prop_assert_eq!(qa_integer_quotient(&x, &s), Some(BigInt::from(k)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn built_maps_tile_and_preserve_length(seed in any::<u64>(), m in 1usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_iet(&mut rng, m, &sqrt2_times(1, 2));
        prop_assert!(images_tile_domain(&t));
        for i in 1..=t.m() {
            let image = t.interval(i).translate(t.translation(i));
            prop_assert_eq!(image.length(), t.lengths()[i - 1].clone());
            let j = t.permutation().image(i);
            prop_assert_eq!(&image.lo, &t.image_breakpoints()[j - 1]);
        }
        let sum = t.lengths().iter().fold(QAlpha::zero(), |acc, l| acc + l);
        prop_assert_eq!(&sum, t.total_length());
    }

    #[test]
    fn cocycle(seed in any::<u64>(), k in 0i64..=1000, j in 0i64..=1000) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = rng.gen_range(2..=6);
        let t = random_iet(&mut rng, m, &sqrt2_times(1, 2));
        let x = t.breakpoints()[rng.gen_range(0..m)].clone();
        let whole = iterate(&t, &x, k + j, None).unwrap();
        let first = iterate(&t, &x, k, None).unwrap();
        prop_assert_eq!(iterate(&t, &first.position, j, None).unwrap().position, whole.position.clone());
        let sum = whole.occupation.iter().zip(t.translations()).fold(x.clone(), |acc, (&n, d)| acc + d.scale(&rat(n as i64, 1)));
        prop_assert_eq!(sum, whole.position);
    }

    #[test]
    fn inverse_round_trips(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = rng.gen_range(1..=6);
        let t = random_iet(&mut rng, m, &sqrt2_times(1, 2));
        let inv = t.invert().unwrap();
        for i in 1..=t.m() {
            let x = t.interval(i).midpoint();
            prop_assert_eq!(inv.apply(&t.apply(&x).unwrap()).unwrap(), x);
        }
        prop_assert_eq!(compose(&inv, &t).unwrap().m(), 1);
    }

    #[test]
    fn composition_is_associative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let o = sqrt2_times(1, 2);
        let (ma, mb, mc) = (rng.gen_range(1..=4), rng.gen_range(1..=4), rng.gen_range(1..=4));
        let a = random_iet(&mut rng, ma, &o);
        let b = random_iet(&mut rng, mb, &o);
        let c = random_iet(&mut rng, mc, &o);
        let left = compose(&compose(&a, &b).unwrap(), &c).unwrap();
        let right = compose(&a, &compose(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        for i in 1..=c.m() {
            let x = c.interval(i).lo.clone();
            prop_assert_eq!(left.apply(&x).unwrap(), a.apply(&b.apply(&c.apply(&x).unwrap()).unwrap()).unwrap());
        }
    }

    #[test]
    fn interval_cycles_are_sound(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let o = sqrt2_times(1, 2);
        let t = if rng.gen_bool(0.5) {
            let n = rng.gen_range(1..=5);
            thm15_family(&random_permutation(&mut rng, n), o).unwrap()
        } else {
            let m = rng.gen_range(2..=5);
            random_iet(&mut rng, m, &o)
        };
        let search = find_interval_cycles(&t, t.discontinuities(), 2 * t.m()).unwrap();
        for c in &search.cycles {
            let n = c.period();
            prop_assert!(n >= 2);
            for k in 0..n {
                let next = &c.pieces[(k + 1) % n];
                let mut images = Vec::new();
                for (sub, d) in &c.branches[k] {
                    prop_assert!(sub.is_within(&c.pieces[k], t.oracle()).unwrap());
                    for x in [sub.lo.clone(), sub.midpoint()] {
                        let y = t.apply(&x).unwrap();
                        prop_assert_eq!(&y, &(&x + d));
                        prop_assert!(next.contains(&y, t.oracle()).unwrap());
                    }
                    images.push(sub.translate(d));
                }
                // the step function exp(2iπ j/n) on piece j is carried onto
                // exp(2iπ (k+1)/n): T maps piece k onto piece k+1 exactly
                let image = IntervalSet::from_intervals(images, t.oracle()).unwrap();
                prop_assert_eq!(image.parts(), std::slice::from_ref(next));
            }
            let all = IntervalSet::from_intervals(c.pieces.clone(), t.oracle()).unwrap();
            let total = c.pieces.iter().fold(QAlpha::zero(), |acc, p| acc + p.length());
            prop_assert_eq!(all.measure(), total);
        }
    }
}

#[test]
fn drift_certificate_agrees_with_depth_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut certified = 0;
    for m in 4..=12usize {
        let t = thm14_family(m, sqrt2_times(1, 2 * (m as i64 - 1))).unwrap();
        assert!(drift_certificate(&t).unwrap().unwrap().certified);
        assert!(matches!(idoc_check(&t, 1000).unwrap(), IdocVerdict::PassToDepth { .. }));
        certified += 1;
    }
    for _ in 0..60 {
        let n = rng.gen_range(1..=5);
        let sigma = random_permutation(&mut rng, n);
        let t = thm15_family(&sigma, sqrt2_times(1, 2)).unwrap();
        let cert = drift_certificate(&t).unwrap().unwrap();
        let search = idoc_check(&t, 1000).unwrap();
        if cert.certified {
            certified += 1;
            assert!(matches!(search, IdocVerdict::PassToDepth { .. }), "{sigma}");
        } else {
            let IdocVerdict::Fail { witness } = search else {
                panic!("certificate found a collision the search missed: {sigma}");
            };
            assert!(witness.step <= cert.witness().unwrap().step);
        }
    }
    assert!(certified >= 9);
}

#[test]
fn first_return_matches_direct_iteration() {
    let o = sqrt2_times(1, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let cases = [
        thm15_family(&"[2,3,1]".parse().unwrap(), o.clone()).unwrap(),
        thm14_family(5, sqrt2_times(1, 8)).unwrap(),
        thm15_family(&"[3,2,1]".parse().unwrap(), o.clone()).unwrap(),
    ];
    let bases = [
        Interval::new(QAlpha::zero(), QAlpha::one()),
        Interval::new(qa("1/4"), qa("1/2+a")),
        Interval::new(QAlpha::zero(), QAlpha::one()),
    ];
    let mut checked = 0;
    for (t, base) in cases.iter().zip(&bases) {
        let rs = first_return(t, base, None).unwrap();
        assert_eq!(rs.induced.total_length(), &base.length());
        for _ in 0..1000 / cases.len() + 1 {
            // a random point of the base: lo + u·(hi - lo) with rational u
            let u = rat(rng.gen_range(0..997), 997);
            let x = &base.lo + &base.length().scale(&u);
            let branch = rs.branches.iter().find(|b| b.piece.contains(&x, t.oracle()).unwrap()).unwrap();
            let mut y = x.clone();
            for (step, &i) in branch.itinerary.iter().enumerate() {
                assert_eq!(t.locate(&y).unwrap(), i);
                y = t.apply(&y).unwrap();
                let inside = base.contains(&y, t.oracle()).unwrap();
                assert_eq!(inside, step + 1 == branch.itinerary.len());
            }
            assert_eq!(y, &x + &branch.translation);
            let induced = rs.induced.apply(&(&x - &base.lo)).unwrap();
            assert_eq!(induced, &y - &base.lo);
            checked += 1;
        }
    }
    assert!(checked >= 1000);
}

#[test]
fn invariant_unions_match_cycles_of_sigma() {
    let o = sqrt2_times(1, 2);
    for n in 2..=5 {
        for sigma in all_permutations(n) {
            let t = thm15_family(&sigma, o.clone()).unwrap();
            let search = invariant_union_search(&t, 1000, 1000).unwrap();
            match search.witness {
                Some(w) => {
                    assert!(w.verify(&t).unwrap());
                    let cycles = cycle_decomposition(&sigma);
                    let covered: usize = cycles
                        .iter()
                        .filter(|c| {
                            let block = Interval::new(QAlpha::from_integer(c[0] as i64 - 1), QAlpha::from_integer(c[0] as i64));
                            w.set.parts().iter().any(|p| block.is_within(p, t.oracle()).unwrap())
                        })
                        .map(Vec::len)
                        .sum();
                    assert_eq!(w.set.measure(), QAlpha::from_integer(covered as i64), "{sigma}");
                }
                None => assert!(is_n_cycle(&sigma), "{sigma}"),
            }
        }
    }
}

#[test]
fn family_minimality_matches_cycle_structure() {
    let o = sqrt2_times(1, 2);
    for n in 1..=6 {
        for sigma in all_permutations(n) {
            let t = thm15_family(&sigma, o.clone()).unwrap();
            let report = minimality_report(&t, Budgets::default()).unwrap();
            let expected = if is_n_cycle(&sigma) {
                MinimalityVerdict::MinimalCertified
            } else {
                MinimalityVerdict::NonMinimal
            };
            assert_eq!(report.verdict, expected, "{sigma}");
            assert!(t.lengths().iter().all(|l| l.denominator_lcm() == BigInt::from(1)));
        }
    }
    for m in 4..=12 {
        let t = thm14_family(m, sqrt2_times(1, 2 * (m as i64 - 1))).unwrap();
        assert!(is_irreducible(t.permutation()));
        assert_eq!(minimality_report(&t, Budgets::default()).unwrap().verdict, MinimalityVerdict::MinimalCertified);
    }
}
