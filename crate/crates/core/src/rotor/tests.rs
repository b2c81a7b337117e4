use num_integer::Roots;

use super::*;
use crate::evalnum::{sturmian_number, Base, DigitGenerator, DigitSequence};
use crate::kernel::AlgebraicNumber;
use crate::words::{theta_coding, CodingSpec};

fn theta() -> RealLike {
    RealLike::parse("quad:(3-sqrt(5))/2").unwrap()
}

fn inv_phi() -> RealLike {
    RealLike::parse("quad:(-1+sqrt(5))/2").unwrap()
}

fn q(n: i64, d: i64) -> RealLike {
    RealLike::rational(n, d)
}

fn half_three_quarters() -> ContractedRotation {
    ContractedRotation::new(q(1, 2), q(3, 4)).unwrap()
}

/// ⌈n (3 - sqrt 5)/2⌉ from an integer square root.
fn ceil_n_theta(n: u128) -> i128 {
    if n == 0 {
        return 0;
    }
    let s = (5 * n * n).sqrt();
    (3 * n - s).div_ceil(2) as i128
}

/// (1 - λ)(1 + xi_0) for λ = 1/2 and θ = (3 - sqrt 5)/2, summed to 300 terms.
fn offset_oracle() -> BigRational {
    let mut sum = BigRational::one();
    let mut w = BigRational::one();
    let half = BigRational::new(1.into(), 2.into());
    for n in 1..=300u128 {
        w = &w * &half;
        if ceil_n_theta(n + 1) - ceil_n_theta(n) == 1 {
            sum += &w;
        }
    }
    sum * half
}

#[test]
fn apply_f_examples() {
    let cr = half_three_quarters();
    assert_eq!(cr.apply_f(&q(0, 1)).unwrap(), (q(3, 4), 0));
    assert_eq!(cr.apply_f(&q(3, 4)).unwrap(), (q(1, 8), 1));
    assert_eq!(cr.apply_f(&q(1, 2)).unwrap(), (q(0, 1), 1));
    assert!(cr.apply_f(&q(1, 1)).is_err());
}

#[test]
fn lift_examples_and_laws() {
    let cr = half_three_quarters();
    assert_eq!(cr.lift_F(&q(0, 1)).unwrap(), q(3, 4));
    assert_eq!(cr.lift_F(&q(1, 1)).unwrap(), q(7, 4));
    assert_eq!(cr.lift_F(&q(-1, 4)).unwrap(), q(1, 8));
    for (n, d) in [(5, 7), (-13, 5), (22, 3), (0, 1), (99, 100)] {
        let x = q(n, d);
        let f = cr.lift_F(&x).unwrap();
        let f1 = cr.lift_F(&x.add_rational(&BigRational::one())).unwrap();
        assert_eq!(f1, f.add_rational(&BigRational::one()));
        let (img, _) = cr.apply_f(&x.frac().unwrap()).unwrap();
        assert_eq!(f.frac().unwrap(), img);
    }
}

#[test]
fn validation() {
    assert!(ContractedRotation::new(q(1, 2), q(1, 4)).is_err());
    assert!(ContractedRotation::new(q(3, 2), q(3, 4)).is_err());
    assert!(ContractedRotation::with_rotation(q(1, 2), q(1, 3)).is_err());
    assert!(delta_for_rotation(&q(1, 2), &q(2, 5), &BigRational::new(1.into(), 100.into())).is_err());
}

#[test]
fn period_two_rotation_number() {
    let cr = half_three_quarters();
    // f^2(1/6) = 1/6 exactly
    let (a, _) = cr.apply_f(&q(1, 6)).unwrap();
    let (b, _) = cr.apply_f(&a).unwrap();
    assert_eq!(b, q(1, 6));
    let half = BigRational::new(1.into(), 2.into());
    let r = cr.rotation_number(100_000).unwrap();
    assert!(r.contains_rational(&half));
    assert!(r.width().to_f64() <= 2e-5);
    let r1 = cr.rotation_number(1).unwrap();
    assert!(r1.contains_rational(&half));
    assert!(r1.width().to_f64() <= 2.0);
    assert!(cr.rotation_number(0).is_err());
}

#[test]
fn rotation_numbers_are_consistent_and_monotone() {
    let lam = q(1, 2);
    let mut prev: Option<BallReal> = None;
    for k in 1..8 {
        let cr = ContractedRotation::new(lam.clone(), q(50 + 6 * k, 100)).unwrap();
        let a = cr.rotation_number(1000).unwrap();
        let b = cr.rotation_number(2000).unwrap();
        assert!(a.intersects(&b));
        if let Some(p) = prev {
            assert!(p.lo() <= b.hi());
        }
        prev = Some(b);
    }
}

#[test]
fn offset_matches_oracle() {
    let tol = BigRational::new(1.into(), 1_000_000.into());
    let d = delta_for_rotation(&q(1, 2), &theta(), &tol).unwrap();
    assert!(d.width().to_rational() <= tol);
    assert!(d.contains_rational(&offset_oracle()));
    let cr = ContractedRotation::new(q(1, 2), RealLike::Ball(d)).unwrap();
    let r = cr.rotation_number(100_000).unwrap();
    assert!(r.intersects(&theta().to_ball(128).unwrap()));
    let wide = delta_for_rotation(&q(1, 2), &theta(), &BigRational::one()).unwrap();
    assert!(wide.contains_rational(&offset_oracle()));
    assert!(wide.width().to_f64() >= 0.49);
}

#[test]
fn lazy_offset_refines() {
    let cr = ContractedRotation::with_rotation(q(1, 2), theta()).unwrap();
    let d = cr.delta_ball(200).unwrap();
    assert!(d.width() <= Dyadic::pow2(-200));
    assert!(d.contains_rational(&offset_oracle()) || d.intersects(&BallReal::from_rational(&offset_oracle(), 300).add_error(&Dyadic::pow2(-299))));
}

#[test]
fn xi_digit_identities() {
    for (x, t) in [(q(1, 3), theta()), (inv_phi(), inv_phi())] {
        let n = 2000;
        let up = xi_digits(&x, &t, n).unwrap();
        let down = xi_prime_digits(&x, &t, n).unwrap();
        let shifted = match &x {
            RealLike::Rational(r) => t.add_rational(r),
            _ => RealLike::from(x.to_algebraic().unwrap().add(&t.to_algebraic().unwrap()).unwrap()),
        };
        let spec = CodingSpec::new(t.clone(), shifted.frac().unwrap(), 1).unwrap();
        assert_eq!(theta_coding(&spec, n).unwrap().to_bitstring().unwrap(), bits(&down));
        let neg = shifted.neg().frac().unwrap();
        let one_minus = t.neg().add_rational(&BigRational::one());
        let spec2 = CodingSpec::new(one_minus, neg, 1).unwrap();
        let c2 = theta_coding(&spec2, n).unwrap();
        let flipped: Vec<u8> = c2.symbols().iter().map(|&b| 1 - b as u8).collect();
        assert_eq!(flipped, up);
    }
}

fn bits(v: &[u8]) -> String {
    v.iter().map(|b| char::from(b'0' + b)).collect()
}

#[test]
fn xi_prime_matches_sturmian_number() {
    let t = theta();
    let v = xi_prime(&t, &q(1, 2), &t, 128).unwrap();
    let base = Base::new(AlgebraicNumber::from_int(2)).unwrap();
    let s = sturmian_number(&DigitSequence::new(DigitGenerator::Fibonacci), &base, 128).unwrap();
    // the Fibonacci word starts with 0, so dropping it leaves the sum unchanged
    assert!(s.im.contains_zero());
    assert!(v.intersects(&s.re));
    assert!(v.rad().to_f64() < 1e-35);
}

#[test]
fn xi_at_zero_gives_the_offset() {
    let x0 = xi(&q(0, 1), &q(1, 2), &theta(), 256).unwrap();
    let d = &(&x0 + &BallReal::one(256)) * &BallReal::from_rational(&BigRational::new(1.into(), 2.into()), 256);
    assert!(d.contains_rational(&offset_oracle()) || d.intersects(&BallReal::from_rational(&offset_oracle(), 300).add_error(&Dyadic::pow2(-299))));
}

#[test]
fn rational_attractor_is_periodic() {
    let s = half_three_quarters().attractor_sample(60, 10).unwrap();
    assert_eq!(s.itinerary.to_bitstring().unwrap().len(), 10);
    let b = s.itinerary.to_bitstring().unwrap();
    assert!(b == "0101010101" || b == "1010101010");
    assert!(s.depth_bound.contains(&Dyadic::pow2(-60)));
    assert_eq!(half_three_quarters().attractor_sample(5, 1).unwrap().points.len(), 1);
}

#[test]
fn attractor_itinerary_is_a_rotation_coding() {
    let t = theta();
    let cr = ContractedRotation::with_rotation(q(1, 2), t.clone()).unwrap();
    let s = cr.attractor_sample(80, 300).unwrap();
    // orbit point k has conjugacy parameter {kθ}
    let x = RealLike::from(t.to_algebraic().unwrap().mul_rational(&BigRational::from_integer(80.into()))).frac().unwrap();
    let spec = CodingSpec::new(t.clone(), x, 1).unwrap();
    assert_eq!(s.itinerary.symbols(), theta_coding(&spec, 300).unwrap().symbols());
    let ones = s.itinerary.count(1) as f64;
    assert!((ones / 300.0 - 0.381966).abs() <= 2.0 / 300.0);

    for i in [0usize, 37, 150] {
        let d = cr.decompose_limit_point(&s.points[i], 200, 128).unwrap();
        match d {
            Decomposition::FirstForm { residual, k, x_enclosure, .. } => {
                assert!(residual.hi() <= Dyadic::pow2(-60), "residual {}", residual);
                if 80 + i <= 200 {
                    assert_eq!(k as usize, 80 + i);
                }
                let xb = RealLike::from(t.to_algebraic().unwrap().mul_rational(&BigRational::from_integer((80 + i).into())))
                    .frac()
                    .unwrap()
                    .to_ball(128)
                    .unwrap();
                assert!(x_enclosure.intersects(&xb));
            }
            other => panic!("unexpected {:?}", other),
        }
    }
    let far = cr.decompose_limit_point(&BallReal::from_rational(&BigRational::new(1.into(), 2.into()), 128), 200, 128);
    assert!(matches!(far, Err(Error::NotOnAttractor(_))));
    let zero = cr.decompose_limit_point(&BallReal::zero(128), 200, 128);
    assert!(matches!(zero, Err(Error::NotOnAttractor(_))));
}
