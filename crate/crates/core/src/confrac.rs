//! Simple continued fractions of reals in (0, 1), convergents, distances to the nearest
//! integer and best approximations.
//!
//! Indexing: `p_0/q_0 = 0/1` and `p_i/q_i = [0; a_1, ..., a_i]`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::kernel::{Affine, BallReal, RealLike};

#[derive(Clone, Debug)]
pub struct ContinuedFraction {
    pub theta: RealLike,
    /// `a_1, ..., a_n`.
    pub quotients: Vec<BigInt>,
    /// `(p_i, q_i)` for `i = 0..=n`.
    pub convergents: Vec<(BigInt, BigInt)>,
    /// Expansion stopped at a digit the input could not certify (ball inputs only).
    pub truncated: bool,
    /// Rational input whose expansion ended before the requested count.
    pub terminated: bool,
}

impl ContinuedFraction {
    /// Exact sign of `q_i theta - p_i`.
    pub fn sign_at(&self, i: usize) -> Result<i32> {
        let (p, q) = &self.convergents[i];
        Affine::new(vec![self.theta.clone()]).sign(std::slice::from_ref(q), &BigRational::from_integer(-p))
    }

    /// Enclosure of `q_i theta - p_i`.
    pub fn signed_distance(&self, i: usize, prec: u32) -> Result<BallReal> {
        let (p, q) = &self.convergents[i];
        Affine::new(vec![self.theta.clone()]).eval(std::slice::from_ref(q), &BigRational::from_integer(-p), prec)
    }

    pub fn denominators(&self) -> Vec<BigInt> {
        self.convergents.iter().map(|c| c.1.clone()).collect()
    }
}

fn check_unit_interval(theta: &RealLike) -> Result<()> {
    let lo = theta.sign()?;
    let hi = theta.cmp_rational(&BigRational::one())?;
    if lo <= 0 || hi != std::cmp::Ordering::Less {
        return Err(Error::InvalidInput(format!("theta must lie in (0,1), got {}", theta)));
    }
    Ok(())
}

/// First `n` partial quotients of `theta`, each certified.
pub fn cf_expand(theta: &RealLike, n: usize) -> Result<ContinuedFraction> {
    check_unit_interval(theta)?;
    let form = Affine::new(vec![theta.clone()]);
    let mut cf = ContinuedFraction {
        theta: theta.clone(),
        quotients: Vec::with_capacity(n),
        convergents: vec![(BigInt::zero(), BigInt::one())],
        truncated: false,
        terminated: false,
    };
    // s_i = q_i theta - p_i with (p_{-1}, q_{-1}) = (1, 0)
    let mut prev = (BigInt::one(), BigInt::zero());
    while cf.quotients.len() < n {
        let cur = cf.convergents.last().expect("nonempty").clone();
        let s_sign = form.sign(std::slice::from_ref(&cur.1), &BigRational::from_integer(-&cur.0))?;
        if s_sign == 0 {
            cf.terminated = true;
            break;
        }
        match next_quotient(&form, &prev, &cur, s_sign) {
            Ok(a) => {
                let p = &a * &cur.0 + &prev.0;
                let q = &a * &cur.1 + &prev.1;
                cf.quotients.push(a);
                prev = cur;
                cf.convergents.push((p, q));
            }
            Err(Error::Indeterminate(_)) | Err(Error::PrecisionExhausted(_)) if !theta.is_exact() => {
                cf.truncated = true;
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(cf)
}

/// `floor(-s_{i-1} / s_i)` with the sign of `s_i` known.
fn next_quotient(form: &Affine, prev: &(BigInt, BigInt), cur: &(BigInt, BigInt), s_sign: i32) -> Result<BigInt> {
    let bits = cur.1.bits() as u32;
    let mut prec = (4 * bits + 96).max(128);
    let ceiling = form.cfg().ceiling;
    loop {
        let sp = form.eval(std::slice::from_ref(&prev.1), &BigRational::from_integer(-&prev.0), prec)?;
        let sc = form.eval(std::slice::from_ref(&cur.1), &BigRational::from_integer(-&cur.0), prec)?;
        if !sc.contains_zero() {
            let t = (-sp).div(&sc)?;
            if let Some(f) = t.floor() {
                return Ok(f);
            }
            if t.width() < crate::kernel::Dyadic::one() {
                // t >= k  <=>  sign(k s_i + s_{i-1}) is opposite to s_i or zero
                let k = t.lo().ceil();
                let s = form.sign(&[&k * &cur.1 + &prev.1], &BigRational::from_integer(-(&k * &cur.0 + &prev.0)))?;
                return Ok(if s * s_sign <= 0 { k } else { k - 1 });
            }
        }
        if !form.gens()[0].is_exact() {
            return Err(Error::Indeterminate("ball too wide for the next partial quotient".into()));
        }
        if prec >= ceiling {
            return Err(Error::PrecisionExhausted(ceiling));
        }
        prec = (prec * 2).min(ceiling);
    }
}

#[derive(Clone, Debug)]
pub struct Distance {
    /// `||q theta||`.
    pub value: BallReal,
    /// `q theta - round(q theta)`.
    pub signed: BallReal,
    pub nearest: BigInt,
}

/// Distance from `q theta` to the nearest integer.
pub fn dist_to_int(q: &BigInt, theta: &RealLike, prec: u32) -> Result<Distance> {
    if !q.is_positive() {
        return Err(Error::InvalidInput("q must be positive".into()));
    }
    let form = Affine::new(vec![theta.clone()]);
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let nearest = form.floor(std::slice::from_ref(q), &half)?;
    let signed = form.eval(std::slice::from_ref(q), &BigRational::from_integer(-&nearest), prec)?;
    Ok(Distance { value: signed.abs(), signed, nearest })
}

/// Convergent denominators `q_i` with `q_i theta - p_i > 0`, the first `count` of them.
pub fn positive_side_denominators(theta: &RealLike, count: usize) -> Result<Vec<BigInt>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    let cf = cf_expand(theta, 2 * (count - 1))?;
    if cf.terminated {
        return Err(Error::InvalidInput("theta is rational; its expansion terminates".into()));
    }
    if cf.truncated {
        return Err(Error::PrecisionExhausted(theta.to_ball(64).map(|b| b.prec()).unwrap_or(0)));
    }
    let mut out = Vec::with_capacity(count);
    for i in 0..cf.convergents.len() {
        if cf.sign_at(i)? > 0 {
            out.push(cf.convergents[i].1.clone());
        }
    }
    out.truncate(count);
    Ok(out)
}

/// `q theta - n` with its exact sign.
#[derive(Clone, Debug)]
struct SignedGap {
    q: BigInt,
    n: BigInt,
    sign: i32,
}

fn signed_for(form: &Affine, q: BigInt, n: BigInt) -> Result<SignedGap> {
    let sign = form.sign(std::slice::from_ref(&q), &BigRational::from_integer(-&n))?;
    Ok(SignedGap { q, n, sign })
}

/// Sign of `||a theta|| - ||b theta||`, exact.
fn cmp_dist(form: &Affine, a: &SignedGap, b: &SignedGap) -> Result<i32> {
    let sa = BigInt::from(a.sign);
    let sb = BigInt::from(b.sign);
    form.sign(&[&sa * &a.q - &sb * &b.q], &BigRational::from_integer(&sb * &b.n - &sa * &a.n))
}

fn nearest_integers(form: &Affine, q_lo: i64, q_hi: i64) -> Result<Vec<BigInt>> {
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    form.floor_progression(&[BigInt::zero()], &[BigInt::one()], &half, q_lo, q_hi)
}

/// Whether `||q theta|| < ||q' theta||` for every `1 <= q' < q`, by direct scan.
pub fn is_best_approx(q: u64, theta: &RealLike) -> Result<bool> {
    if q < 2 {
        return Err(Error::InvalidInput("q must be at least 2".into()));
    }
    let form = Affine::new(vec![theta.clone()]);
    let near = nearest_integers(&form, 1, q as i64 + 1)?;
    let target = signed_for(&form, BigInt::from(q), near[q as usize - 1].clone())?;
    let prec = 96 + 2 * (64 - q.leading_zeros());
    let tv = form.eval(std::slice::from_ref(&target.q), &BigRational::from_integer(-&target.n), prec)?.abs();
    for (i, n) in near.iter().enumerate().take(q as usize - 1) {
        let qq = BigInt::from(i as u64 + 1);
        let v = form.eval(std::slice::from_ref(&qq), &BigRational::from_integer(-n), prec)?.abs();
        if tv.hi() < v.lo() {
            continue;
        }
        if tv.lo() > v.hi() {
            return Ok(false);
        }
        let other = signed_for(&form, qq, n.clone())?;
        if cmp_dist(&form, &target, &other)? >= 0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All `q <= q_max` with `||q theta||` strictly below every earlier distance, in one pass.
pub fn best_approx_denominators(theta: &RealLike, q_max: u64) -> Result<Vec<u64>> {
    let form = Affine::new(vec![theta.clone()]);
    let near = nearest_integers(&form, 1, q_max as i64 + 1)?;
    let prec = 96 + 2 * (64 - q_max.leading_zeros());
    let mut best: Option<(SignedGap, BallReal)> = None;
    let mut out = Vec::new();
    for (i, n) in near.iter().enumerate() {
        let q = BigInt::from(i as u64 + 1);
        let v = form.eval(std::slice::from_ref(&q), &BigRational::from_integer(-n), prec)?.abs();
        let better = match &best {
            None => true,
            Some((_, bv)) if v.hi() < bv.lo() => true,
            Some((_, bv)) if v.lo() > bv.hi() => false,
            Some((b, _)) => cmp_dist(&form, &signed_for(&form, q.clone(), n.clone())?, b)? < 0,
        };
        if better {
            best = Some((signed_for(&form, q, n.clone())?, v));
            out.push(i as u64 + 1);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn theta_fib() -> RealLike {
        RealLike::parse("quad:(3-sqrt(5))/2").unwrap()
    }

    fn inv_phi() -> RealLike {
        RealLike::parse("quad:(-1+sqrt(5))/2").unwrap()
    }

    #[test]
    fn expansions() {
        let cf = cf_expand(&theta_fib(), 10).unwrap();
        assert_eq!(cf.quotients, ints(&[2, 1, 1, 1, 1, 1, 1, 1, 1, 1]));
        assert!(!cf.truncated && !cf.terminated);
        assert_eq!(cf_expand(&inv_phi(), 8).unwrap().quotients, ints(&[1; 8]));
        let r = cf_expand(&RealLike::rational(5, 8), 10).unwrap();
        assert_eq!(r.quotients, ints(&[1, 1, 1, 2]));
        assert!(r.terminated);
        let s = cf_expand(&RealLike::parse("quad:-1+sqrt(2)").unwrap(), 6).unwrap();
        assert_eq!(s.quotients, ints(&[2; 6]));
    }

    #[test]
    fn ball_input_truncates() {
        let b = theta_fib().to_ball(30).unwrap();
        let cf = cf_expand(&RealLike::Ball(b), 40).unwrap();
        assert!(cf.truncated);
        assert!(cf.quotients.len() >= 5 && cf.quotients.len() < 40);
        assert_eq!(cf.quotients[0], BigInt::from(2));
        assert!(cf.quotients[1..].iter().all(|a| a == &BigInt::one()));
    }

    #[test]
    fn distances() {
        let d = dist_to_int(&BigInt::from(5), &inv_phi(), 128).unwrap();
        assert!((d.value.to_f64() - 0.090_169_943_749_474_2).abs() < 1e-15);
        assert_eq!(d.signed.sign(), Some(1));
        let d = dist_to_int(&BigInt::from(8), &theta_fib(), 128).unwrap();
        assert!((d.value.to_f64() - 0.055_728_090_000_841_2).abs() < 1e-15);
        assert_eq!(d.signed.sign(), Some(1));
        let h = dist_to_int(&BigInt::one(), &RealLike::rational(1, 2), 64).unwrap();
        assert_eq!(h.value.to_f64(), 0.5);
    }

    #[test]
    fn positive_side() {
        assert_eq!(positive_side_denominators(&inv_phi(), 5).unwrap(), ints(&[1, 2, 5, 13, 34]));
        assert_eq!(positive_side_denominators(&theta_fib(), 4).unwrap(), ints(&[1, 3, 8, 21]));
        let s2 = RealLike::parse("quad:-1+sqrt(2)").unwrap();
        assert_eq!(positive_side_denominators(&s2, 3).unwrap(), ints(&[1, 5, 29]));
    }

    #[test]
    fn best_approximations() {
        assert!(is_best_approx(5, &inv_phi()).unwrap());
        assert!(!is_best_approx(4, &inv_phi()).unwrap());
        assert!(is_best_approx(2, &theta_fib()).unwrap());
    }

    #[test]
    fn convergent_recurrence_and_error_bound() {
        let t = theta_fib();
        let cf = cf_expand(&t, 30).unwrap();
        let f = Affine::new(vec![t]);
        for i in 0..cf.convergents.len() - 1 {
            let (p, q) = &cf.convergents[i];
            let (_, q1) = &cf.convergents[i + 1];
            assert!(p.gcd(q).is_one());
            // |q theta - p| < 1/q_{i+1}
            let s = BigInt::from(cf.sign_at(i).unwrap());
            let v = f.sign(&[&s * q1 * q], &BigRational::from_integer(-(&s * q1 * p) - 1)).unwrap();
            assert_eq!(v, -1, "bound fails at {}", i);
            if i > 0 {
                assert_eq!(cf.sign_at(i).unwrap(), -cf.sign_at(i + 1).unwrap());
            }
        }
        let big = cf.convergents.last().unwrap().1.to_f64().unwrap();
        assert!(big > 1e5);
    }

    use num_integer::Integer;
}
