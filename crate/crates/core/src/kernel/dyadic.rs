//! Dyadic rationals `m * 2^e` with explicit rounding.
//!
//! These are the midpoints and radii of every ball in the crate. Values are
//! kept normalized (odd mantissa, or the canonical zero) so that equality and
//! hashing are structural.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Round {
    Floor,
    Ceil,
    Nearest,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Dyadic {
    man: BigInt,
    exp: i64,
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.man, self.exp)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal(20))
    }
}

/// floor(a / 2^k) for k >= 0.
fn shr_floor(a: &BigInt, k: u64) -> BigInt {
    if k == 0 {
        return a.clone();
    }
    let d = BigInt::one() << k;
    a.div_floor(&d)
}

fn shr_round(a: &BigInt, k: u64, mode: Round) -> BigInt {
    if k == 0 {
        return a.clone();
    }
    match mode {
        Round::Floor => shr_floor(a, k),
        Round::Ceil => -shr_floor(&-a, k),
        Round::Nearest => {
            let half = BigInt::one() << (k - 1);
            shr_floor(&(a + half), k)
        }
    }
}

impl Dyadic {
    pub fn new(man: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { man, exp };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.man.is_zero() {
            self.exp = 0;
            return;
        }
        if let Some(tz) = self.man.trailing_zeros() {
            if tz > 0 {
                self.man >>= tz;
                self.exp += tz as i64;
            }
        }
    }

    pub fn zero() -> Self {
        Dyadic { man: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { man: BigInt::one(), exp: 0 }
    }

    pub fn from_int<T: Into<BigInt>>(v: T) -> Self {
        Dyadic::new(v.into(), 0)
    }

    /// `2^e`.
    pub fn pow2(e: i64) -> Self {
        Dyadic { man: BigInt::one(), exp: e }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.man
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.man.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.man.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.man.is_negative()
    }

    pub fn abs(&self) -> Self {
        Dyadic { man: self.man.abs(), exp: self.exp }
    }

    /// Number of significant bits in the mantissa.
    pub fn bits(&self) -> u64 {
        self.man.bits()
    }

    /// Exponent of the leading bit: `2^top <= |x| < 2^(top+1)`. `None` for zero.
    pub fn top_bit(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.exp + self.man.bits() as i64 - 1)
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { man: self.man.clone(), exp: self.exp + k }
    }

    /// Quantize to a multiple of `2^e`.
    pub fn quantize(&self, e: i64, mode: Round) -> Self {
        if self.exp >= e {
            return self.clone();
        }
        let k = (e - self.exp) as u64;
        Dyadic::new(shr_round(&self.man, k, mode), e)
    }

    /// Round to at most `prec` significant bits.
    pub fn round(&self, prec: u32, mode: Round) -> Self {
        let bits = self.man.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let k = bits - prec as u64;
        Dyadic::new(shr_round(&self.man, k, mode), self.exp + k as i64)
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            &self.man << (self.exp as u64)
        } else {
            shr_floor(&self.man, (-self.exp) as u64)
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.man << (self.exp as u64))
        } else {
            BigRational::new(self.man.clone(), BigInt::one() << ((-self.exp) as u64))
        }
    }

    /// Exact conversion; fails unless the denominator is a power of two.
    pub fn from_rational_exact(q: &BigRational) -> Option<Self> {
        let den = q.denom();
        let tz = den.trailing_zeros().unwrap_or(0);
        if (den >> tz) != BigInt::one() {
            return None;
        }
        Some(Dyadic::new(q.numer().clone(), -(tz as i64)))
    }

    /// Round a rational to a multiple of `2^e`.
    pub fn from_rational_quantum(q: &BigRational, e: i64, mode: Round) -> Self {
        // q * 2^-e rounded to an integer
        let (num, den): (BigInt, BigInt) = if e <= 0 {
            (q.numer() << ((-e) as u64), q.denom().clone())
        } else {
            (q.numer().clone(), q.denom() << (e as u64))
        };
        let n = match mode {
            Round::Floor => num.div_floor(&den),
            Round::Ceil => -((-num).div_floor(&den)),
            Round::Nearest => ((num << 1u32) + &den).div_floor(&(den << 1u32)),
        };
        Dyadic::new(n, e)
    }

    /// Round a rational to `prec` significant bits.
    pub fn from_rational(q: &BigRational, prec: u32, mode: Round) -> Self {
        if q.is_zero() {
            return Dyadic::zero();
        }
        let top = q.numer().bits() as i64 - q.denom().bits() as i64;
        Dyadic::from_rational_quantum(q, top - prec as i64 - 1, mode)
    }

    /// Quotient `a / b` rounded to `prec` significant bits.
    pub fn div(a: &Dyadic, b: &Dyadic, prec: u32, mode: Round) -> Dyadic {
        assert!(!b.is_zero(), "dyadic division by zero");
        if a.is_zero() {
            return Dyadic::zero();
        }
        // a/b = (ma/mb) 2^(ea-eb); scale ma so the integer quotient has prec+2 bits.
        let shift = prec as i64 + 2 + b.man.bits() as i64 - a.man.bits() as i64;
        let shift = shift.max(0) as u64;
        let num = &a.man << shift;
        let den = &b.man;
        let (num, den): (BigInt, BigInt) = if den.is_negative() { (-num, -den) } else { (num, den.clone()) };
        let q = match mode {
            Round::Floor => num.div_floor(&den),
            Round::Ceil => -((-num).div_floor(&den)),
            Round::Nearest => ((num << 1u32) + &den).div_floor(&(&den << 1u32)),
        };
        Dyadic::new(q, a.exp - b.exp - shift as i64).round(prec, mode)
    }

    /// Square root rounded to `prec` bits; requires `self >= 0`.
    pub fn sqrt(&self, prec: u32, mode: Round) -> Dyadic {
        self.nth_root(2, prec, mode)
    }

    /// n-th root rounded in the given direction; requires `self >= 0`.
    pub fn nth_root(&self, n: u32, prec: u32, mode: Round) -> Dyadic {
        assert!(!self.is_negative(), "root of negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        if n == 1 {
            return self.round(prec, mode);
        }
        // choose scale s (multiple of n) with enough bits: root(m * 2^(e)) where e = exp - s
        let want = (prec as i64 + 2) * n as i64;
        let mut s = (want - self.man.bits() as i64).max(0);
        // exponent after shifting must be divisible by n
        s += (self.exp - s).rem_euclid(n as i64);
        let e = self.exp - s;
        debug_assert_eq!(e.rem_euclid(n as i64), 0);
        let m = &self.man << (s as u64);
        let root = m.nth_root(n);
        let exact = root.pow(n) == m;
        let root = match mode {
            Round::Floor | Round::Nearest => root,
            Round::Ceil if exact => root,
            Round::Ceil => root + 1,
        };
        Dyadic::new(root, e / n as i64).round(prec, mode)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.man.bits() as i64;
        let drop = (bits - 60).max(0);
        let m = shr_floor(&self.man, drop as u64).to_f64().unwrap_or(f64::NAN);
        let e = self.exp + drop;
        m * 2f64.powi(e.clamp(-1100, 1100) as i32)
    }

    pub fn from_f64(x: f64) -> Dyadic {
        assert!(x.is_finite());
        if x == 0.0 {
            return Dyadic::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1 } else { 1 };
        let exp = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (m, e) = if exp == 0 {
            (frac as i64, -1074)
        } else {
            ((frac | (1u64 << 52)) as i64, exp - 1075)
        };
        Dyadic::new(BigInt::from(sign * m), e)
    }

    /// Decimal rendering with `digits` digits after the point, rounded to nearest.
    pub fn to_decimal(&self, digits: usize) -> String {
        let q = self.to_rational();
        rational_to_decimal(&q, digits)
    }

    pub fn min(a: &Dyadic, b: &Dyadic) -> Dyadic {
        if a <= b { a.clone() } else { b.clone() }
    }

    pub fn max(a: &Dyadic, b: &Dyadic) -> Dyadic {
        if a >= b { a.clone() } else { b.clone() }
    }
}

/// Fixed-point decimal rendering of a rational, rounded to nearest.
pub fn rational_to_decimal(q: &BigRational, digits: usize) -> String {
    let scale = num_traits::pow(BigInt::from(10), digits);
    let neg = q.is_negative();
    let a = q.abs();
    let scaled: BigInt = (((a.numer() * &scale) << 1u32) + a.denom()).div_floor(&(a.denom() << 1u32));
    let (int, frac): (BigInt, BigInt) = scaled.div_rem(&scale);
    let mut s = String::new();
    if neg && !scaled.is_zero() {
        s.push('-');
    }
    s.push_str(&int.to_string());
    if digits > 0 {
        let f = frac.to_string();
        s.push('.');
        for _ in f.len()..digits {
            s.push('0');
        }
        s.push_str(&f);
    }
    s
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let sa = self.signum();
        let sb = other.signum();
        if sa != sb {
            return sa.cmp(&sb);
        }
        if sa == 0 {
            return Ordering::Equal;
        }
        let ta = self.top_bit().unwrap();
        let tb = other.top_bit().unwrap();
        if ta != tb {
            return if sa > 0 { ta.cmp(&tb) } else { tb.cmp(&ta) };
        }
        (self - other).signum().cmp(&0)
    }
}

impl<'a> Add<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.man << ((self.exp - e) as u64);
        let b = &rhs.man << ((rhs.exp - e) as u64);
        Dyadic::new(a + b, e)
    }
}

impl<'a> Sub<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a Dyadic> for &'a Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        if self.is_zero() || rhs.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { man: &self.man * &rhs.man, exp: self.exp + rhs.exp }
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { man: -&self.man, exp: self.exp }
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic { man: -self.man, exp: self.exp }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: Dyadic) -> Dyadic {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Dyadic> for Dyadic {
            type Output = Dyadic;
            fn $m(self, rhs: &Dyadic) -> Dyadic {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn normalizes_and_compares() {
        let a = Dyadic::new(BigInt::from(12), 0);
        assert_eq!(a, Dyadic::new(BigInt::from(3), 2));
        assert!(Dyadic::from_int(-3) < Dyadic::from_int(2));
        assert!(Dyadic::pow2(-10) < Dyadic::pow2(-9));
        assert!(-Dyadic::pow2(-10) > -Dyadic::pow2(-9));
    }

    #[test]
    fn rational_rounding_brackets() {
        let third = q(1, 3);
        let lo = Dyadic::from_rational(&third, 64, Round::Floor);
        let hi = Dyadic::from_rational(&third, 64, Round::Ceil);
        assert!(lo.to_rational() < third && third < hi.to_rational());
        assert!((hi - lo).top_bit().unwrap() <= -64);
    }

    #[test]
    fn floor_of_negative() {
        let x = Dyadic::from_rational_exact(&q(-1, 4)).unwrap();
        assert_eq!(x.floor(), BigInt::from(-1));
        assert_eq!(x.ceil(), BigInt::from(0));
    }

    #[test]
    fn roots_bracket() {
        let two = Dyadic::from_int(2);
        let lo = two.sqrt(100, Round::Floor);
        let hi = two.sqrt(100, Round::Ceil);
        assert!(&lo * &lo <= two && &hi * &hi >= two);
        assert!((hi - lo).top_bit().unwrap() < -95);
        let eight = Dyadic::from_int(8);
        assert_eq!(eight.nth_root(3, 30, Round::Ceil), Dyadic::from_int(2));
    }

    #[test]
    fn division_directed() {
        let one = Dyadic::one();
        let three = Dyadic::from_int(3);
        let lo = Dyadic::div(&one, &three, 80, Round::Floor);
        let hi = Dyadic::div(&one, &three, 80, Round::Ceil);
        let t = q(1, 3);
        assert!(lo.to_rational() < t && t < hi.to_rational());
        let neg = Dyadic::div(&one, &-three, 80, Round::Floor);
        assert!(neg.to_rational() < -t);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(rational_to_decimal(&q(-1, 4), 3), "-0.250");
        assert_eq!(rational_to_decimal(&q(2, 3), 4), "0.6667");
        assert_eq!(Dyadic::from_f64(0.75).to_decimal(2), "0.75");
    }
}
