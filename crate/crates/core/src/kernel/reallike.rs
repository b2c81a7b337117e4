//! Real values that are either exact (rational or real algebraic) or a ball.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::algebraic::AlgebraicNumber;
use super::ball::BallReal;
use super::expr::Expr;
use super::literal::{parse_algebraic, print_algebraic, print_rational};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealLike {
    Rational(BigRational),
    Algebraic(AlgebraicNumber),
    Ball(BallReal),
}

impl From<BigRational> for RealLike {
    fn from(q: BigRational) -> Self {
        RealLike::Rational(q)
    }
}

impl From<AlgebraicNumber> for RealLike {
    fn from(a: AlgebraicNumber) -> Self {
        match a.to_rational() {
            Some(q) => RealLike::Rational(q),
            None => RealLike::Algebraic(a),
        }
    }
}

impl From<BallReal> for RealLike {
    fn from(b: BallReal) -> Self {
        RealLike::Ball(b)
    }
}

impl fmt::Display for RealLike {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RealLike::Rational(q) => write!(f, "rat:{}", print_rational(q)),
            RealLike::Algebraic(a) => write!(f, "{}", print_algebraic(a)),
            RealLike::Ball(b) => write!(f, "{}", b),
        }
    }
}

impl RealLike {
    pub fn rational(n: i64, d: i64) -> Self {
        RealLike::Rational(BigRational::new(n.into(), d.into()))
    }

    /// Parse an exact literal; non-real algebraic numbers are rejected.
    pub fn parse(s: &str) -> Result<Self> {
        let a = parse_algebraic(s)?;
        if !a.is_real() {
            return Err(Error::Validation(format!("{:?} is not real", s)));
        }
        Ok(RealLike::from(a))
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, RealLike::Ball(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            RealLike::Rational(q) => Some(q),
            _ => None,
        }
    }

    /// Exact expression for exact variants.
    pub fn to_expr(&self) -> Option<Expr> {
        match self {
            RealLike::Rational(q) => Some(Expr::Rat(q.clone())),
            RealLike::Algebraic(a) => Some(Expr::from(a)),
            RealLike::Ball(_) => None,
        }
    }

    /// Exact algebraic form for exact variants.
    pub fn to_algebraic(&self) -> Option<AlgebraicNumber> {
        match self {
            RealLike::Rational(q) => Some(AlgebraicNumber::from_rational(q.clone())),
            RealLike::Algebraic(a) => Some(a.clone()),
            RealLike::Ball(_) => None,
        }
    }

    /// Enclosure at `prec` bits; a ball variant is returned as is.
    pub fn to_ball(&self, prec: u32) -> Result<BallReal> {
        match self {
            RealLike::Rational(q) => Ok(BallReal::from_rational(q, prec)),
            RealLike::Algebraic(a) => a.refine_real(prec),
            RealLike::Ball(b) => Ok(b.clone()),
        }
    }

    pub fn sign(&self) -> Result<i32> {
        match self {
            RealLike::Rational(q) => Ok(if q.is_zero() { 0 } else if q.is_positive() { 1 } else { -1 }),
            RealLike::Algebraic(a) => a.sign(),
            RealLike::Ball(b) => b.sign().ok_or_else(|| Error::Indeterminate("ball contains zero".into())),
        }
    }

    pub fn floor(&self) -> Result<BigInt> {
        match self {
            RealLike::Rational(q) => Ok(q.floor().to_integer()),
            RealLike::Algebraic(a) => a.floor(),
            RealLike::Ball(b) => b.floor().ok_or_else(|| Error::Indeterminate("ball straddles an integer".into())),
        }
    }

    /// `x - floor(x)`, exact for exact inputs.
    pub fn frac(&self) -> Result<RealLike> {
        let f = self.floor()?;
        let fq = BigRational::from_integer(f.clone());
        Ok(match self {
            RealLike::Rational(q) => RealLike::Rational(q - fq),
            RealLike::Algebraic(a) => RealLike::Algebraic(a.add_rational(&-fq)),
            RealLike::Ball(b) => RealLike::Ball(b - &BallReal::from_int(f, b.prec())),
        })
    }

    pub fn neg(&self) -> RealLike {
        match self {
            RealLike::Rational(q) => RealLike::Rational(-q),
            RealLike::Algebraic(a) => RealLike::Algebraic(a.neg()),
            RealLike::Ball(b) => RealLike::Ball(-b),
        }
    }

    pub fn add_rational(&self, r: &BigRational) -> RealLike {
        match self {
            RealLike::Rational(q) => RealLike::Rational(q + r),
            RealLike::Algebraic(a) => RealLike::Algebraic(a.add_rational(r)),
            RealLike::Ball(b) => RealLike::Ball(b + &BallReal::from_rational(r, b.prec())),
        }
    }

    /// Exact comparison with a rational, or ball comparison for balls.
    pub fn cmp_rational(&self, r: &BigRational) -> Result<std::cmp::Ordering> {
        self.add_rational(&-r).sign().map(|s| s.cmp(&0))
    }

    /// Whether the value is certified irrational (degree at least two).
    pub fn is_irrational(&self) -> bool {
        matches!(self, RealLike::Algebraic(a) if a.degree() >= 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn frac_examples() {
        let phi = RealLike::parse("quad:(1+sqrt(5))/2").unwrap();
        let f = phi.frac().unwrap();
        let a = f.to_algebraic().unwrap();
        assert_eq!(a.minpoly(), &crate::kernel::IntPoly::from_i64s(&[-1, 1, 1]));
        assert_eq!(RealLike::rational(7, 2).frac().unwrap(), RealLike::Rational(q(1, 2)));
        assert_eq!(RealLike::parse("-0.25").unwrap().frac().unwrap(), RealLike::Rational(q(3, 4)));
    }

    #[test]
    fn ball_straddle_is_indeterminate() {
        let b = BallReal::from_bounds(&crate::kernel::Dyadic::from_f64(0.9), &crate::kernel::Dyadic::from_f64(1.1), 64);
        assert!(matches!(RealLike::Ball(b).frac(), Err(Error::Indeterminate(_))));
    }

    #[test]
    fn floor_reconstructs() {
        for s in ["quad:(1+sqrt(5))/2", "quad:(-7+sqrt(2))/3", "rat:-9/4"] {
            let x = RealLike::parse(s).unwrap();
            let fl = x.floor().unwrap();
            let back = x.frac().unwrap().add_rational(&BigRational::from_integer(fl));
            assert!(back.to_algebraic().unwrap().eq_value(&x.to_algebraic().unwrap()).unwrap());
        }
    }
}
