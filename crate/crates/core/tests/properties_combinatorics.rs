mod common;

use common::{fib_floor, quad};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;
use sturmian::confrac::positive_side_denominators;
use sturmian::kernel::RealLike;
use sturmian::rotor::ContractedRotation;
use sturmian::stutter::{mismatch_set, pair_structure, stutter_report, Condition, StutterSource};
use sturmian::words::{complexity_profile, fibonacci_word, letter_frequency, theta_coding, CodingSpec, Word};

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

/// Mismatches found by walking both windows from their right ends.
fn reversed_mismatches(bits: &[u8], r: usize, s: usize) -> Vec<usize> {
    let a: Vec<u8> = bits[..=s].iter().rev().copied().collect();
    let b: Vec<u8> = bits[r..=r + s].iter().rev().copied().collect();
    let mut out: Vec<usize> = a.iter().zip(&b).enumerate().filter(|(_, (x, y))| x != y).map(|(i, _)| s - i).collect();
    out.reverse();
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coding_matches_floor_differences(q in quad(), n in 1usize..2000) {
        let t = q.real();
        let w = theta_coding(&CodingSpec::new(t.clone(), t, 1).unwrap(), n).unwrap();
        for (j, &u) in w.symbols().iter().enumerate() {
            let k = j as i128 + 1;
            prop_assert_eq!(u as i128, q.floor_n(k + 1) - q.floor_n(k), "index {}", k);
        }
    }

    #[test]
    fn fibonacci_frequency_is_balanced(n in 1usize..20_000) {
        let w = fibonacci_word(n);
        let ones = w.count(1) as i128;
        // |ones - n theta| <= 2 exactly: ones equals ⌊(n+1)θ⌋ - ⌊θ⌋ for the coding at x = θ
        prop_assert_eq!(ones, fib_floor(n as i128 + 1) - fib_floor(1));
        let f = letter_frequency(&w, 1).unwrap();
        prop_assert_eq!(f, BigRational::new(BigInt::from(ones), BigInt::from(n)));
        let theta = (3.0 - 5f64.sqrt()) / 2.0;
        prop_assert!((ones as f64 / n as f64 - theta).abs() <= 2.0 / n as f64);
    }

    #[test]
    fn periodic_words_are_flagged(pattern in prop::collection::vec(0u8..2, 1..6), reps in 40usize..80) {
        let bits: Vec<u8> = pattern.iter().copied().cycle().take(pattern.len() * reps).collect();
        let w = Word::binary(&bits, "periodic");
        for c in complexity_profile(&w, 12).unwrap() {
            prop_assert!(c.count <= pattern.len());
            if c.n >= pattern.len() && !c.censored {
                prop_assert!(c.periodic_suspect, "n {} count {}", c.n, c.count);
            }
        }
    }

    #[test]
    fn mismatch_set_is_order_independent(bits in prop::collection::vec(0u8..2, 20..300), r in 1usize..40, frac in 0.0f64..1.0) {
        prop_assume!(r + 1 < bits.len());
        let s = ((bits.len() - r - 1) as f64 * frac) as usize;
        let w = Word::binary(&bits, "random");
        prop_assert_eq!(mismatch_set(&w, r, s).unwrap(), reversed_mismatches(&bits, r, s));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// Coding-generated words: every mismatch is explained, leaders are the first-condition
    /// positions (either side), each successor is the matching second condition, and S4 holds.
    #[test]
    fn stutter_records_are_fully_explained(q in quad(), xn in 0i64..97) {
        let t = q.real();
        let r_max: usize = positive_side_denominators(&t, 4).unwrap().last().unwrap().try_into().unwrap();
        let x = RealLike::Rational(rat(xn, 97));
        let spec = CodingSpec::new(t, x, 1).unwrap();
        let src = StutterSource::Specs {
            specs: vec![spec],
            coeffs: vec![sturmian::kernel::AlgebraicNumber::from_int(0), sturmian::kernel::AlgebraicNumber::from_int(1)],
        };
        let wit = stutter_report(&src, &BigRational::one(), 3, 8 * r_max + 200).unwrap();
        prop_assert_eq!(wit.unexplained_total, 0);
        for rec in wit.records.iter().filter(|r| !r.truncated) {
            prop_assert_eq!(rec.unexplained, 0);
            let Some(leaders) = &rec.leaders else { continue };
            prop_assert_eq!(leaders, &pair_structure(&rec.delta).unwrap());
            let cond = |m: usize| rec.classification.iter().find(|c| c.m == m).and_then(|c| c.condition);
            let first = |c: Option<Condition>| matches!(c, Some(Condition::I | Condition::INeg));
            let partner = |c: Condition| match c {
                Condition::I => Condition::II,
                Condition::INeg => Condition::IINeg,
                Condition::II => Condition::I,
                Condition::IINeg => Condition::INeg,
            };
            for c in &rec.classification {
                let k = c.condition.expect("explained");
                if first(Some(k)) && c.m < rec.s {
                    prop_assert_eq!(cond(c.m + 1), Some(partner(k)), "m {}", c.m);
                } else if !first(Some(k)) && c.m > 0 {
                    prop_assert_eq!(cond(c.m - 1), Some(partner(k)), "m {}", c.m);
                }
            }
            let firsts: Vec<usize> = rec.classification.iter().filter(|c| first(c.condition)).map(|c| c.m).collect();
            // pairs cut by the window edges shift the greedy pairing by one
            let straddles = rec.classification.first().is_some_and(|c| !first(c.condition))
                || rec.classification.last().is_some_and(|c| first(c.condition));
            if !straddles {
                prop_assert_eq!(leaders, &firsts);
            }
            prop_assert_ne!(rec.s4_holds, Some(false));
        }
    }
}

#[test]
fn fibonacci_spread_increases() {
    let wit = stutter_report(&StutterSource::fibonacci(), &BigRational::one(), 4, 100_000).unwrap();
    let spreads: Vec<usize> = wit.records.iter().map(|r| r.diagnostics.spread.expect("spread")).collect();
    assert!(spreads.windows(2).all(|w| w[0] < w[1]), "{:?}", spreads);
}

/// `lambda = p/q`, `delta` in `(1 - lambda, 1)`.
fn rotation() -> impl Strategy<Value = (BigRational, BigRational)> {
    (1i64..20, 2i64..21)
        .prop_filter("lambda < 1", |(p, q)| p < q)
        .prop_flat_map(|(p, q)| (Just(rat(p, q)), 1i64..1000))
        .prop_map(|(l, k)| {
            let lo = BigRational::one() - &l;
            let d = &lo + (BigRational::one() - &lo) * rat(k, 1001);
            (l, d)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn lifting_laws((l, d) in rotation(), p in -5000i64..5000, den in 1i64..500) {
        let cr = ContractedRotation::new(RealLike::Rational(l), RealLike::Rational(d)).unwrap();
        let x = RealLike::Rational(rat(p, den));
        let f = cr.lift_F(&x).unwrap();
        let one = BigRational::one();
        prop_assert_eq!(cr.lift_F(&x.add_rational(&one)).unwrap(), f.add_rational(&one));
        let (img, _) = cr.apply_f(&x.frac().unwrap()).unwrap();
        prop_assert_eq!(f.frac().unwrap(), img);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rotation_numbers_are_consistent((l, d) in rotation(), n in 100u64..5000) {
        let cr = ContractedRotation::new(RealLike::Rational(l), RealLike::Rational(d)).unwrap();
        let a = cr.rotation_number(n).unwrap();
        let b = cr.rotation_number(2 * n).unwrap();
        prop_assert!(a.intersects(&b));
        prop_assert!(a.width().to_f64() <= 2.0 / n as f64 + 1e-12);
        prop_assert!(b.width().to_f64() <= 1.0 / n as f64 + 1e-12);
    }

    #[test]
    fn rotation_numbers_are_monotone((l, d) in rotation(), k in 1i64..1000) {
        let d2 = &d + (BigRational::one() - &d) * rat(k, 1000);
        prop_assume!(d2 < BigRational::one());
        let a = ContractedRotation::new(RealLike::Rational(l.clone()), RealLike::Rational(d)).unwrap().rotation_number(2000).unwrap();
        let b = ContractedRotation::new(RealLike::Rational(l), RealLike::Rational(d2)).unwrap().rotation_number(2000).unwrap();
        prop_assert!(a.lo() <= b.hi());
    }
}
