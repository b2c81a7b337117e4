//! Midpoint-radius enclosures over dyadic rationals.
//!
//! Every operation returns a ball containing the exact result of applying the
//! operation to any pair of points of its inputs. Midpoints are rounded to the
//! working precision, radii are rounded upward to [`RAD_BITS`] bits.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;

use serde::{Deserialize, Serialize};

use super::dyadic::{Dyadic, Round};
use crate::error::{Error, Result};

pub const RAD_BITS: u32 = 32;

#[derive(Clone, PartialEq, Eq)]
pub struct BallReal {
    mid: Dyadic,
    rad: Dyadic,
    prec: u32,
}

impl fmt::Debug for BallReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{} +/- {:e}]", self.mid.to_decimal(24), self.rad.to_f64())
    }
}

impl fmt::Display for BallReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Serialized form of a ball: decimal midpoint, decimal radius, precision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallRecord {
    pub mid: String,
    pub rad: String,
    pub bits: u32,
}

fn rad_up(r: Dyadic) -> Dyadic {
    r.round(RAD_BITS, Round::Ceil)
}

impl BallReal {
    pub fn new(mid: Dyadic, rad: Dyadic, prec: u32) -> Self {
        assert!(!rad.is_negative(), "negative radius");
        let mut b = BallReal { mid: Dyadic::zero(), rad: Dyadic::zero(), prec };
        b.set(mid, rad);
        b
    }

    /// Store `mid` rounded to `prec` bits, folding the rounding error into `rad`.
    fn set(&mut self, mid: Dyadic, rad: Dyadic) {
        let rounded = mid.round(self.prec, Round::Nearest);
        let err = (&mid - &rounded).abs();
        self.mid = rounded;
        self.rad = rad_up(rad + err);
    }

    pub fn exact(v: Dyadic, prec: u32) -> Self {
        BallReal::new(v, Dyadic::zero(), prec)
    }

    pub fn zero(prec: u32) -> Self {
        BallReal { mid: Dyadic::zero(), rad: Dyadic::zero(), prec }
    }

    pub fn one(prec: u32) -> Self {
        BallReal { mid: Dyadic::one(), rad: Dyadic::zero(), prec }
    }

    pub fn from_int<T: Into<BigInt>>(v: T, prec: u32) -> Self {
        BallReal::exact(Dyadic::from_int(v), prec)
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        if let Some(d) = Dyadic::from_rational_exact(q) {
            if d.bits() <= prec as u64 {
                return BallReal::exact(d, prec);
            }
        }
        let lo = Dyadic::from_rational(q, prec + 2, Round::Floor);
        let hi = Dyadic::from_rational(q, prec + 2, Round::Ceil);
        BallReal::from_bounds(&lo, &hi, prec)
    }

    /// Smallest representable ball containing `[lo, hi]`.
    pub fn from_bounds(lo: &Dyadic, hi: &Dyadic, prec: u32) -> Self {
        assert!(lo <= hi, "inverted bounds");
        let sum = lo + hi;
        let mid = sum.mul_pow2(-1);
        let rad = (hi - lo).mul_pow2(-1);
        BallReal::new(mid, rad, prec)
    }

    pub fn mid(&self) -> &Dyadic {
        &self.mid
    }

    pub fn rad(&self) -> &Dyadic {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        BallReal::new(self.mid.clone(), self.rad.clone(), prec)
    }

    pub fn lo(&self) -> Dyadic {
        &self.mid - &self.rad
    }

    pub fn hi(&self) -> Dyadic {
        &self.mid + &self.rad
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn width(&self) -> Dyadic {
        self.rad.mul_pow2(1)
    }

    /// `Some(sign)` when the ball certifies it, `None` when it contains 0 but is not exactly 0.
    pub fn sign(&self) -> Option<i32> {
        if self.rad.is_zero() {
            return Some(self.mid.signum());
        }
        if self.lo().signum() > 0 {
            Some(1)
        } else if self.hi().signum() < 0 {
            Some(-1)
        } else {
            None
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.lo().signum() <= 0 && self.hi().signum() >= 0
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo() <= x && x <= &self.hi()
    }

    pub fn contains_rational(&self, x: &BigRational) -> bool {
        self.lo().to_rational() <= *x && *x <= self.hi().to_rational()
    }

    pub fn contains_ball(&self, other: &BallReal) -> bool {
        self.lo() <= other.lo() && other.hi() <= self.hi()
    }

    pub fn intersects(&self, other: &BallReal) -> bool {
        self.lo() <= other.hi() && other.lo() <= self.hi()
    }

    pub fn hull(&self, other: &BallReal) -> BallReal {
        let lo = Dyadic::min(&self.lo(), &other.lo());
        let hi = Dyadic::max(&self.hi(), &other.hi());
        BallReal::from_bounds(&lo, &hi, self.prec.max(other.prec))
    }

    /// Floor, when the ball does not straddle an integer.
    pub fn floor(&self) -> Option<BigInt> {
        let a = self.lo().floor();
        let b = self.hi().floor();
        if a == b {
            Some(a)
        } else {
            None
        }
    }

    pub fn ceil(&self) -> Option<BigInt> {
        let a = self.lo().ceil();
        let b = self.hi().ceil();
        if a == b {
            Some(a)
        } else {
            None
        }
    }

    pub fn abs(&self) -> BallReal {
        match self.sign() {
            Some(s) if s >= 0 => self.clone(),
            Some(_) => -self,
            None => {
                let m = Dyadic::max(&self.lo().abs(), &self.hi().abs());
                BallReal::from_bounds(&Dyadic::zero(), &m, self.prec)
            }
        }
    }

    /// `max(c, x)` pointwise, which is monotone and so maps balls to balls.
    pub fn max_with(&self, c: &Dyadic) -> BallReal {
        let lo = Dyadic::max(&self.lo(), c);
        let hi = Dyadic::max(&self.hi(), c);
        BallReal::from_bounds(&lo, &hi, self.prec)
    }

    pub fn mul_pow2(&self, k: i64) -> BallReal {
        BallReal { mid: self.mid.mul_pow2(k), rad: self.rad.mul_pow2(k), prec: self.prec }
    }

    pub fn add_error(&self, err: &Dyadic) -> BallReal {
        BallReal { mid: self.mid.clone(), rad: rad_up(&self.rad + &err.abs()), prec: self.prec }
    }

    pub fn square(&self) -> BallReal {
        let m = self.abs();
        &m * &m
    }

    pub fn powi(&self, n: u32) -> BallReal {
        let mut base = self.clone();
        let mut acc = BallReal::one(self.prec);
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn recip(&self) -> Result<BallReal> {
        let p = self.prec;
        match self.sign() {
            Some(0) | None => Err(Error::DivisionByZero),
            Some(_) => {
                // 1/y is decreasing on either side of 0
                let one = Dyadic::one();
                let lo = Dyadic::div(&one, &self.hi(), p + 4, Round::Floor);
                let hi = Dyadic::div(&one, &self.lo(), p + 4, Round::Ceil);
                Ok(BallReal::from_bounds(&lo, &hi, p))
            }
        }
    }

    pub fn div(&self, other: &BallReal) -> Result<BallReal> {
        if other.is_exact() && !other.mid.is_zero() {
            // tighter path for exact divisors
            let p = self.prec.max(other.prec);
            let lo = Dyadic::div(&self.mid, &other.mid, p + 4, Round::Floor);
            let hi = Dyadic::div(&self.mid, &other.mid, p + 4, Round::Ceil);
            let q = BallReal::from_bounds(&lo, &hi, p);
            let extra = Dyadic::div(&self.rad, &other.mid.abs(), RAD_BITS, Round::Ceil);
            return Ok(q.add_error(&extra));
        }
        Ok(self * &other.recip()?)
    }

    pub fn sqrt(&self) -> Result<BallReal> {
        let hi = self.hi();
        if hi.is_negative() {
            return Err(Error::InvalidInput("square root of a negative ball".into()));
        }
        let lo = Dyadic::max(&self.lo(), &Dyadic::zero());
        let p = self.prec + 4;
        Ok(BallReal::from_bounds(&lo.sqrt(p, Round::Floor), &hi.sqrt(p, Round::Ceil), self.prec))
    }

    pub fn nth_root(&self, n: u32) -> Result<BallReal> {
        let hi = self.hi();
        if hi.is_negative() {
            return Err(Error::InvalidInput("root of a negative ball".into()));
        }
        let lo = Dyadic::max(&self.lo(), &Dyadic::zero());
        let p = self.prec + 4;
        Ok(BallReal::from_bounds(&lo.nth_root(n, p, Round::Floor), &hi.nth_root(n, p, Round::Ceil), self.prec))
    }

    /// Natural logarithm; requires a positive ball.
    pub fn ln(&self) -> Result<BallReal> {
        if self.lo().signum() <= 0 {
            return Err(Error::InvalidInput("logarithm of a non-positive ball".into()));
        }
        let a = ln_dyadic(&self.lo(), self.prec)?;
        if self.is_exact() {
            return Ok(a);
        }
        let b = ln_dyadic(&self.hi(), self.prec)?;
        Ok(BallReal::from_bounds(&a.lo(), &b.hi(), self.prec))
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    pub fn to_record(&self) -> BallRecord {
        let digits = ((self.prec as f64) * std::f64::consts::LOG10_2).ceil() as usize + 2;
        BallRecord {
            mid: self.mid.to_decimal(digits),
            rad: format!("{:e}", self.rad.to_f64().max(if self.rad.is_zero() { 0.0 } else { f64::MIN_POSITIVE })),
            bits: self.prec,
        }
    }
}

/// `2 atanh(t)` for a small ball `t`, with the series tail folded into the radius.
fn two_atanh(t: &BallReal, prec: u32) -> BallReal {
    let t2 = t.square();
    let mut power = t.clone();
    let mut sum = BallReal::zero(prec);
    let tol = Dyadic::pow2(-(prec as i64) - 8);
    let mut k: u64 = 1;
    loop {
        let term = power.div(&BallReal::from_int(k, prec)).expect("nonzero divisor");
        sum = &sum + &term;
        power = &power * &t2;
        k += 2;
        let bound = power.abs().hi();
        if bound < tol {
            // remaining tail <= power / (1 - t^2) <= 2 * power when t^2 <= 1/2
            sum = sum.add_error(&bound.mul_pow2(1));
            break;
        }
    }
    sum.mul_pow2(1)
}

fn ln2(prec: u32) -> BallReal {
    let third = BallReal::from_rational(&BigRational::new(1.into(), 3.into()), prec);
    two_atanh(&third, prec)
}

fn ln_dyadic(x: &Dyadic, prec: u32) -> Result<BallReal> {
    let wp = prec + 16;
    let k = x.top_bit().expect("positive");
    let m = x.mul_pow2(-k); // in [1, 2)
    let mb = BallReal::exact(m, wp);
    let one = BallReal::one(wp);
    let t = (&mb - &one).div(&(&mb + &one))?;
    let lnm = two_atanh(&t, wp);
    let res = if k == 0 { lnm } else { &lnm + &(&ln2(wp) * &BallReal::from_int(k, wp)) };
    Ok(res.with_prec(prec))
}

impl<'a> Add<&'a BallReal> for &'a BallReal {
    type Output = BallReal;
    fn add(self, rhs: &BallReal) -> BallReal {
        BallReal::new(&self.mid + &rhs.mid, &self.rad + &rhs.rad, self.prec.max(rhs.prec))
    }
}

impl<'a> Sub<&'a BallReal> for &'a BallReal {
    type Output = BallReal;
    fn sub(self, rhs: &BallReal) -> BallReal {
        BallReal::new(&self.mid - &rhs.mid, &self.rad + &rhs.rad, self.prec.max(rhs.prec))
    }
}

impl<'a> Mul<&'a BallReal> for &'a BallReal {
    type Output = BallReal;
    fn mul(self, rhs: &BallReal) -> BallReal {
        let mid = &self.mid * &rhs.mid;
        let rad = if self.rad.is_zero() && rhs.rad.is_zero() {
            Dyadic::zero()
        } else {
            let a = &self.mid.abs() * &rhs.rad;
            let b = &rhs.mid.abs() * &self.rad;
            let c = &self.rad * &rhs.rad;
            rad_up(a + b + c)
        };
        BallReal::new(mid, rad, self.prec.max(rhs.prec))
    }
}

impl Neg for &BallReal {
    type Output = BallReal;
    fn neg(self) -> BallReal {
        BallReal { mid: -&self.mid, rad: self.rad.clone(), prec: self.prec }
    }
}

impl Neg for BallReal {
    type Output = BallReal;
    fn neg(self) -> BallReal {
        -&self
    }
}

macro_rules! forward_ball {
    ($t:ty, $tr:ident, $m:ident) => {
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a $t> for $t {
            type Output = $t;
            fn $m(self, rhs: &$t) -> $t {
                (&self).$m(rhs)
            }
        }
    };
}
forward_ball!(BallReal, Add, add);
forward_ball!(BallReal, Sub, sub);
forward_ball!(BallReal, Mul, mul);

/// Rectangular complex enclosure.
#[derive(Clone, PartialEq, Eq)]
pub struct BallComplex {
    pub re: BallReal,
    pub im: BallReal,
}

impl fmt::Debug for BallComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + i{:?})", self.re, self.im)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexRecord {
    pub re: BallRecord,
    pub im: BallRecord,
}

impl BallComplex {
    pub fn new(re: BallReal, im: BallReal) -> Self {
        BallComplex { re, im }
    }

    pub fn from_real(re: BallReal) -> Self {
        let p = re.prec();
        BallComplex { re, im: BallReal::zero(p) }
    }

    pub fn zero(prec: u32) -> Self {
        BallComplex::from_real(BallReal::zero(prec))
    }

    pub fn one(prec: u32) -> Self {
        BallComplex::from_real(BallReal::one(prec))
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn is_real(&self) -> bool {
        self.im.is_exact() && self.im.mid().is_zero()
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    pub fn is_exact_zero(&self) -> bool {
        self.re.is_exact() && self.im.is_exact() && self.re.mid().is_zero() && self.im.mid().is_zero()
    }

    pub fn conj(&self) -> BallComplex {
        BallComplex { re: self.re.clone(), im: -&self.im }
    }

    pub fn norm_sq(&self) -> BallReal {
        &self.re.square() + &self.im.square()
    }

    pub fn abs(&self) -> BallReal {
        if self.is_real() {
            return self.re.abs();
        }
        self.norm_sq().sqrt().expect("norm is nonnegative")
    }

    /// Upper bound on the modulus.
    pub fn abs_hi(&self) -> Dyadic {
        self.abs().hi()
    }

    pub fn scale(&self, r: &BallReal) -> BallComplex {
        BallComplex { re: &self.re * r, im: &self.im * r }
    }

    pub fn mul_pow2(&self, k: i64) -> BallComplex {
        BallComplex { re: self.re.mul_pow2(k), im: self.im.mul_pow2(k) }
    }

    pub fn add_error(&self, err: &Dyadic) -> BallComplex {
        BallComplex { re: self.re.add_error(err), im: self.im.add_error(err) }
    }

    pub fn recip(&self) -> Result<BallComplex> {
        if self.is_real() {
            return Ok(BallComplex::from_real(self.re.recip()?));
        }
        let n = self.norm_sq();
        let inv = n.recip()?;
        Ok(self.conj().scale(&inv))
    }

    pub fn div(&self, other: &BallComplex) -> Result<BallComplex> {
        if other.is_real() {
            return Ok(BallComplex { re: self.re.div(&other.re)?, im: self.im.div(&other.re)? });
        }
        Ok(self * &other.recip()?)
    }

    pub fn powi(&self, n: u32) -> BallComplex {
        let mut base = self.clone();
        let mut acc = BallComplex::one(self.prec());
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn intersects(&self, other: &BallComplex) -> bool {
        self.re.intersects(&other.re) && self.im.intersects(&other.im)
    }

    pub fn to_record(&self) -> ComplexRecord {
        ComplexRecord { re: self.re.to_record(), im: self.im.to_record() }
    }
}

impl<'a> Add<&'a BallComplex> for &'a BallComplex {
    type Output = BallComplex;
    fn add(self, rhs: &BallComplex) -> BallComplex {
        BallComplex { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Sub<&'a BallComplex> for &'a BallComplex {
    type Output = BallComplex;
    fn sub(self, rhs: &BallComplex) -> BallComplex {
        BallComplex { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a BallComplex> for &'a BallComplex {
    type Output = BallComplex;
    fn mul(self, rhs: &BallComplex) -> BallComplex {
        if self.is_real() && rhs.is_real() {
            return BallComplex::from_real(&self.re * &rhs.re);
        }
        let re = &(&self.re * &rhs.re) - &(&self.im * &rhs.im);
        let im = &(&self.re * &rhs.im) + &(&self.im * &rhs.re);
        BallComplex { re, im }
    }
}

impl Neg for &BallComplex {
    type Output = BallComplex;
    fn neg(self) -> BallComplex {
        BallComplex { re: -&self.re, im: -&self.im }
    }
}

forward_ball!(BallComplex, Add, add);
forward_ball!(BallComplex, Sub, sub);
forward_ball!(BallComplex, Mul, mul);

/// Ball for an exact rational, convenient in tests and callers.
pub fn rational_ball(n: i64, d: i64, prec: u32) -> BallReal {
    BallReal::from_rational(&BigRational::new(n.into(), d.into()), prec)
}

impl From<&BallReal> for BallComplex {
    fn from(b: &BallReal) -> Self {
        BallComplex::from_real(b.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_contains_exact() {
        let p = 128;
        let a = rational_ball(1, 3, p);
        let b = rational_ball(2, 7, p);
        let s = &a + &b;
        assert!(s.contains_rational(&BigRational::new(13.into(), 21.into())));
        let m = &a * &b;
        assert!(m.contains_rational(&BigRational::new(2.into(), 21.into())));
        let q = a.div(&b).unwrap();
        assert!(q.contains_rational(&BigRational::new(7.into(), 6.into())));
        assert!(q.rad().top_bit().unwrap() < -(p as i64) + 4);
    }

    #[test]
    fn sign_and_floor() {
        let x = rational_ball(-1, 4, 64);
        assert_eq!(x.sign(), Some(-1));
        assert_eq!(x.floor(), Some(BigInt::from(-1)));
        let straddle = BallReal::new(Dyadic::one(), Dyadic::pow2(-3), 64);
        assert_eq!(straddle.floor(), None);
        assert_eq!(BallReal::zero(8).sign(), Some(0));
    }

    #[test]
    fn log_of_two_and_e_like_values() {
        let l = BallReal::from_int(2, 200).ln().unwrap();
        // ln 2 = 0.693147180559945309417232121458176568...
        let s = l.mid().to_decimal(30);
        assert!(s.starts_with("0.693147180559945309417232121458"), "{s}");
        assert!(l.rad().top_bit().unwrap() < -190);
        let l9 = BallReal::from_int(9, 128).ln().unwrap();
        let l3 = BallReal::from_int(3, 128).ln().unwrap();
        let r = l9.div(&l3).unwrap();
        assert!(r.contains(&Dyadic::from_int(2)));
    }

    #[test]
    fn complex_modulus() {
        let b = BallComplex::new(BallReal::from_int(1, 64), BallReal::from_int(1, 64));
        let m = b.abs();
        let two = Dyadic::from_int(2);
        assert!(m.lo() * m.lo() <= two && m.hi() * m.hi() >= two);
        let inv = b.recip().unwrap();
        let prod = &b * &inv;
        assert!(prod.re.contains(&Dyadic::one()) && prod.im.contains(&Dyadic::zero()));
    }

    #[test]
    fn nth_root_of_exact() {
        let r = BallReal::from_int(27, 64).nth_root(3).unwrap();
        assert!(r.contains(&Dyadic::from_int(3)));
    }
}
