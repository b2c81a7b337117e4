//! Certified signs and floors of integer-linear forms `c + sum a_i g_i` over a fixed
//! list of real generators, with a fixed-point fast path for arithmetic progressions.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ball::BallReal;
use super::dyadic::Dyadic;
use super::expr::Expr;
use super::reallike::RealLike;
use super::Precision;
use crate::error::{Error, Result};

/// Fractional bits of the fixed-point fast path.
const FIX_BITS: u32 = 80;
/// Ball precision used to seed the fast path.
const SEED_PREC: u32 = 192;

#[derive(Debug)]
pub struct Affine {
    gens: Vec<RealLike>,
    cfg: Precision,
    cache: Mutex<Vec<(u32, Vec<BallReal>)>>,
}

impl Clone for Affine {
    fn clone(&self) -> Self {
        Affine::with_cfg(self.gens.clone(), self.cfg.clone())
    }
}

impl Affine {
    pub fn new(gens: Vec<RealLike>) -> Self {
        Affine::with_cfg(gens, Precision::default())
    }

    pub fn with_cfg(gens: Vec<RealLike>, cfg: Precision) -> Self {
        Affine { gens, cfg, cache: Mutex::new(Vec::new()) }
    }

    pub fn gens(&self) -> &[RealLike] {
        &self.gens
    }

    pub fn cfg(&self) -> &Precision {
        &self.cfg
    }

    /// Generator enclosures at `prec` bits (ball generators are returned as given).
    pub fn balls(&self, prec: u32) -> Result<Vec<BallReal>> {
        {
            let c = self.cache.lock().expect("cache lock");
            if let Some((_, b)) = c.iter().find(|(p, _)| *p == prec) {
                return Ok(b.clone());
            }
        }
        let b = self.gens.iter().map(|g| g.to_ball(prec)).collect::<Result<Vec<_>>>()?;
        let mut c = self.cache.lock().expect("cache lock");
        if c.len() > 8 {
            c.remove(0);
        }
        c.push((prec, b.clone()));
        Ok(b)
    }

    pub fn eval(&self, a: &[BigInt], c: &BigRational, prec: u32) -> Result<BallReal> {
        let balls = self.balls(prec)?;
        let mut acc = BallReal::from_rational(c, prec + 8);
        for (ai, g) in a.iter().zip(&balls) {
            if !ai.is_zero() {
                acc = &acc + &(&BallReal::from_int(ai.clone(), prec + 8) * g);
            }
        }
        Ok(acc.with_prec(prec))
    }

    fn involved<'a>(&'a self, a: &'a [BigInt]) -> impl Iterator<Item = &'a RealLike> + 'a {
        a.iter().zip(&self.gens).filter(|(ai, _)| !ai.is_zero()).map(|(_, g)| g)
    }

    /// Exact sign of `c + sum a_i g_i`; `Indeterminate` only when a ball generator is involved.
    pub fn sign(&self, a: &[BigInt], c: &BigRational) -> Result<i32> {
        if self.involved(a).all(|g| g.as_rational().is_some()) {
            let mut v = c.clone();
            for (ai, g) in a.iter().zip(&self.gens) {
                if let Some(q) = g.as_rational() {
                    v += q * BigRational::from_integer(ai.clone());
                }
            }
            return Ok(sign_q(&v));
        }
        let has_ball = self.involved(a).any(|g| !g.is_exact());
        for prec in [128u32, 512] {
            if let Some(s) = self.eval(a, c, prec)?.sign() {
                return Ok(s);
            }
            if has_ball {
                return Err(Error::Indeterminate("linear form straddles zero at ball precision".into()));
            }
        }
        self.to_expr(a, c)?.sign_exact_with(&self.cfg)
    }

    /// Exact expression for the form; fails for ball generators.
    pub fn to_expr(&self, a: &[BigInt], c: &BigRational) -> Result<Expr> {
        let mut e = Expr::Rat(c.clone());
        for (ai, g) in a.iter().zip(&self.gens) {
            if ai.is_zero() {
                continue;
            }
            let ge = g.to_expr().ok_or_else(|| Error::Indeterminate("ball generator in exact test".into()))?;
            e = e + Expr::from(ai.clone()) * ge;
        }
        Ok(e)
    }

    /// Exact floor of `c + sum a_i g_i`.
    pub fn floor(&self, a: &[BigInt], c: &BigRational) -> Result<BigInt> {
        let mut prec = 128;
        loop {
            let v = self.eval(a, c, prec)?;
            if let Some(f) = v.floor() {
                return Ok(f);
            }
            if v.width() < Dyadic::one() {
                // exactly one integer k inside the ball
                let k = v.lo().ceil();
                let s = self.sign(a, &(c - BigRational::from_integer(k.clone())))?;
                return Ok(if s >= 0 { k } else { k - 1 });
            }
            if prec >= 1 << 14 {
                return Err(Error::Indeterminate("ball too wide to resolve floor".into()));
            }
            prec *= 4;
        }
    }

    /// Floors of `c + sum (a_i + n b_i) g_i` for `n` in `n0..n1`.
    pub fn floor_progression(&self, a: &[BigInt], b: &[BigInt], c: &BigRational, n0: i64, n1: i64) -> Result<Vec<BigInt>> {
        if n1 <= n0 {
            return Ok(Vec::new());
        }
        let at = |n: i64| -> Vec<BigInt> { a.iter().zip(b).map(|(x, y)| x + y * BigInt::from(n)).collect() };
        let start = self.eval(&at(n0), c, SEED_PREC)?;
        let step = self.eval(b, &BigRational::zero(), SEED_PREC)?;
        let scale = Dyadic::pow2(FIX_BITS as i64);
        let fixed = |x: &BallReal| -> Option<(i128, i128)> {
            let m = (x.mid() * &scale).floor().to_i128()?;
            let r = (x.rad() * &scale).ceil().to_i128()? + 2;
            Some((m, r))
        };
        let len = (n1 - n0) as i128;
        let fast = match (fixed(&start), fixed(&step)) {
            (Some((v0, e0)), Some((d, ed))) => {
                // keep every partial value well inside the i128 range
                let bound = v0.unsigned_abs() + d.unsigned_abs() * len as u128 + (e0 + ed * len) as u128;
                if bound < 1u128 << 125 {
                    Some((v0, e0, d, ed))
                } else {
                    None
                }
            }
            _ => None,
        };
        let mut out = Vec::with_capacity((n1 - n0) as usize);
        match fast {
            Some((v0, e0, d, ed)) => {
                let mut v = v0;
                let mut e = e0;
                for n in n0..n1 {
                    let lo = (v - e) >> FIX_BITS;
                    let hi = (v + e) >> FIX_BITS;
                    if lo == hi {
                        out.push(BigInt::from(lo));
                    } else {
                        out.push(self.floor(&at(n), c)?);
                    }
                    v += d;
                    e += ed;
                }
            }
            None => {
                for n in n0..n1 {
                    out.push(self.floor(&at(n), c)?);
                }
            }
        }
        Ok(out)
    }
}

fn sign_q(q: &BigRational) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

/// `[1, 0, ...]`-style coefficient vector helper.
pub fn coeffs(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn one() -> BigRational {
    BigRational::one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> RealLike {
        RealLike::parse("quad:(3-sqrt(5))/2").unwrap()
    }

    #[test]
    fn exact_zero_sign() {
        let t = golden();
        // theta + (1 - theta) - 1 = 0 through two generators holding the same value
        let f = Affine::new(vec![t.clone(), t.neg()]);
        assert_eq!(f.sign(&coeffs(&[1, 1]), &rat(0)).unwrap(), 0);
        assert_eq!(f.sign(&coeffs(&[2, 1]), &rat(0)).unwrap(), 1);
        assert_eq!(f.floor(&coeffs(&[1, 1]), &rat(3)).unwrap(), BigInt::from(3));
    }

    #[test]
    fn progression_matches_direct() {
        let t = golden();
        let f = Affine::new(vec![t.clone()]);
        let fast = f.floor_progression(&coeffs(&[0]), &coeffs(&[1]), &rat(0), 0, 2000).unwrap();
        for (n, v) in fast.iter().enumerate().step_by(97) {
            assert_eq!(v, &f.floor(&coeffs(&[n as i64]), &rat(0)).unwrap());
        }
        let th = 0.381_966_011_250_105_1_f64;
        for (n, v) in fast.iter().enumerate().take(500) {
            assert_eq!(v.to_i64().unwrap(), (n as f64 * th).floor() as i64);
        }
    }

    #[test]
    fn ball_generator_can_be_indeterminate() {
        let b = BallReal::from_bounds(&Dyadic::from_f64(0.49), &Dyadic::from_f64(0.51), 64);
        let f = Affine::new(vec![RealLike::Ball(b)]);
        assert!(matches!(f.sign(&coeffs(&[2]), &rat(-1)), Err(Error::Indeterminate(_))));
        assert_eq!(f.sign(&coeffs(&[1]), &rat(-1)).unwrap(), -1);
    }
}
