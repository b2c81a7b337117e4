//! The series `xi_x = sum (⌈x+(n+1)θ⌉ - ⌈x+nθ⌉) λ^n` and `xi'_x` (floors), `n >= 1`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::kernel::{Affine, BallReal, RealLike};

/// Floors of `s (x + m θ)` for `m = 1..=n+1`, with `s = ±1`.
fn signed_floors(x: &RealLike, theta: &RealLike, s: i64, n: usize) -> Result<Vec<BigInt>> {
    let s_big = BigInt::from(s);
    let end = n as i64 + 2;
    match x.as_rational() {
        Some(q) => {
            let aff = Affine::new(vec![theta.clone()]);
            aff.floor_progression(&[BigInt::zero()], &[s_big], &(q * BigRational::from_integer(s.into())), 1, end)
        }
        None => {
            let aff = Affine::new(vec![x.clone(), theta.clone()]);
            aff.floor_progression(&[s_big.clone(), BigInt::zero()], &[BigInt::zero(), s_big], &BigRational::zero(), 1, end)
        }
    }
}

fn to_digits(f: &[BigInt], s: i64) -> Result<Vec<u8>> {
    f.windows(2)
        .map(|w| {
            let d = (&w[1] - &w[0]) * BigInt::from(s);
            d.to_u8().filter(|&v| v <= 1).ok_or_else(|| Error::Validation("theta must lie in (0, 1)".into()))
        })
        .collect()
}

/// `⌈x+(n+1)θ⌉ - ⌈x+nθ⌉` for `n = 1..=len`.
pub fn xi_digits(x: &RealLike, theta: &RealLike, len: usize) -> Result<Vec<u8>> {
    // ⌈v⌉ = -⌊-v⌋
    to_digits(&signed_floors(x, theta, -1, len)?, -1)
}

/// `⌊x+(n+1)θ⌋ - ⌊x+nθ⌋` for `n = 1..=len`.
pub fn xi_prime_digits(x: &RealLike, theta: &RealLike, len: usize) -> Result<Vec<u8>> {
    to_digits(&signed_floors(x, theta, 1, len)?, 1)
}

/// Terms needed so that the tail `λ^(N+1)/(1-λ)` is below `2^-(prec+1)`.
fn terms_for(lam: &BallReal, prec: u32) -> Result<usize> {
    let hi = lam.hi().to_f64();
    let lo = lam.lo().to_f64();
    if !(lo > 0.0 && hi < 1.0) {
        return Err(Error::Validation("lambda must lie in (0, 1)".into()));
    }
    let need = (prec as f64 + 2.0 - (1.0 - hi).log2()) / -hi.log2();
    Ok(need.ceil() as usize + 1)
}

/// `sum_{n=1}^{N} d_n λ^n` plus the tail enclosure `[0, λ^(N+1)/(1-λ)]`.
pub(crate) fn series(digits: &[u8], lam: &BallReal, prec: u32) -> Result<BallReal> {
    let wp = prec + 32;
    let mut acc = BallReal::zero(wp);
    for &d in digits.iter().rev() {
        acc = &(&acc + &BallReal::from_int(d, wp)) * lam;
    }
    let one = BallReal::one(wp);
    let tail = lam.powi(digits.len() as u32 + 1).div(&(&one - lam))?;
    let t = tail.hi().mul_pow2(-1);
    let res = &acc + &BallReal::exact(t.clone(), wp);
    Ok(res.add_error(&t).with_prec(prec))
}

fn eval(digits: impl Fn(usize) -> Result<Vec<u8>>, lambda: &RealLike, prec: u32) -> Result<BallReal> {
    let lam = lambda.to_ball(prec + 32)?;
    let n = terms_for(&lam, prec)?;
    let d = digits(n)?;
    series(&d, &lam, prec)
}

/// Enclosure of `xi_x`.
pub fn xi(x: &RealLike, lambda: &RealLike, theta: &RealLike, prec: u32) -> Result<BallReal> {
    eval(|n| xi_digits(x, theta, n), lambda, prec)
}

/// Enclosure of `xi'_x`.
pub fn xi_prime(x: &RealLike, lambda: &RealLike, theta: &RealLike, prec: u32) -> Result<BallReal> {
    eval(|n| xi_prime_digits(x, theta, n), lambda, prec)
}
