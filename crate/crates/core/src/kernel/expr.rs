//! Arithmetic expressions over exact numbers with certified sign and zero tests.
//!
//! Nonzero signs come from ball evaluation at increasing precision. Zero is never
//! inferred from a small ball alone: it is certified when `|e|` drops below the
//! lower bound on nonzero roots of an annihilating polynomial built by resultants.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::algebraic::AlgebraicNumber;
use super::ball::{BallComplex, BallReal};
use super::dyadic::{Dyadic, Round};
use super::poly::IntPoly;
use super::resultant::{power_annihilator, product_annihilator, sum_annihilator};
use super::Precision;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Rat(BigRational),
    Alg(AlgebraicNumber),
    Neg(Arc<Expr>),
    Add(Arc<Expr>, Arc<Expr>),
    Sub(Arc<Expr>, Arc<Expr>),
    Mul(Arc<Expr>, Arc<Expr>),
    Div(Arc<Expr>, Arc<Expr>),
    Pow(Arc<Expr>, i32),
    Floor(Arc<Expr>),
}

impl From<BigRational> for Expr {
    fn from(q: BigRational) -> Self {
        Expr::Rat(q)
    }
}

impl From<AlgebraicNumber> for Expr {
    fn from(a: AlgebraicNumber) -> Self {
        match a.to_rational() {
            Some(q) => Expr::Rat(q),
            None => Expr::Alg(a),
        }
    }
}

impl From<&AlgebraicNumber> for Expr {
    fn from(a: &AlgebraicNumber) -> Self {
        Expr::from(a.clone())
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::Rat(BigRational::from_integer(n.into()))
    }
}

impl From<BigInt> for Expr {
    fn from(n: BigInt) -> Self {
        Expr::Rat(BigRational::from_integer(n))
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $variant:ident) => {
        impl std::ops::$trait for Expr {
            type Output = Expr;
            fn $method(self, o: Expr) -> Expr {
                Expr::$variant(Arc::new(self), Arc::new(o))
            }
        }
        impl std::ops::$trait<&Expr> for &Expr {
            type Output = Expr;
            fn $method(self, o: &Expr) -> Expr {
                Expr::$variant(Arc::new(self.clone()), Arc::new(o.clone()))
            }
        }
    };
}

binop!(Add, add, Add);
binop!(Sub, sub, Sub);
binop!(Mul, mul, Mul);
binop!(Div, div, Div);

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Neg(Arc::new(self))
    }
}

impl Expr {
    pub fn rat(n: i64, d: i64) -> Expr {
        Expr::Rat(BigRational::new(n.into(), d.into()))
    }

    pub fn pow(self, k: i32) -> Expr {
        Expr::Pow(Arc::new(self), k)
    }

    pub fn floor(self) -> Expr {
        Expr::Floor(Arc::new(self))
    }

    /// Rational value when the tree contains no irrational leaves.
    pub fn as_rational(&self) -> Option<Result<BigRational>> {
        Some(match self {
            Expr::Rat(q) => Ok(q.clone()),
            Expr::Alg(a) => Ok(a.to_rational()?),
            Expr::Neg(a) => a.as_rational()?.map(|x| -x),
            Expr::Add(a, b) => binary_rational(a, b, |x, y| Ok(x + y))?,
            Expr::Sub(a, b) => binary_rational(a, b, |x, y| Ok(x - y))?,
            Expr::Mul(a, b) => binary_rational(a, b, |x, y| Ok(x * y))?,
            Expr::Div(a, b) => binary_rational(a, b, |x, y| {
                if y.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(x / y)
                }
            })?,
            Expr::Pow(a, k) => a.as_rational()?.and_then(|x| {
                if *k < 0 && x.is_zero() {
                    Err(Error::DivisionByZero)
                } else if *k < 0 {
                    Ok(num_traits::pow(x.recip(), k.unsigned_abs() as usize))
                } else {
                    Ok(num_traits::pow(x, *k as usize))
                }
            }),
            Expr::Floor(a) => a.as_rational()?.map(|x| BigRational::from_integer(x.floor().to_integer())),
        })
    }

    /// Ball enclosure at working precision `prec`.
    pub fn eval(&self, prec: u32) -> Result<BallComplex> {
        self.eval_with(prec, &Precision::default())
    }

    fn eval_with(&self, prec: u32, cfg: &Precision) -> Result<BallComplex> {
        Ok(match self {
            Expr::Rat(q) => BallComplex::from_real(BallReal::from_rational(q, prec)),
            Expr::Alg(a) => a.refine(prec)?,
            Expr::Neg(a) => -&a.eval_with(prec, cfg)?,
            Expr::Add(a, b) => &a.eval_with(prec, cfg)? + &b.eval_with(prec, cfg)?,
            Expr::Sub(a, b) => &a.eval_with(prec, cfg)? - &b.eval_with(prec, cfg)?,
            Expr::Mul(a, b) => &a.eval_with(prec, cfg)? * &b.eval_with(prec, cfg)?,
            Expr::Div(a, b) => {
                let den = b.eval_with(prec, cfg)?;
                if den.contains_zero() {
                    if b.is_zero_with(cfg)? {
                        return Err(Error::DivisionByZero);
                    }
                    return Err(Error::Indeterminate("denominator ball contains zero".into()));
                }
                a.eval_with(prec, cfg)?.div(&den)?
            }
            Expr::Pow(a, k) => {
                let base = a.eval_with(prec, cfg)?;
                if *k < 0 {
                    if base.contains_zero() {
                        if a.is_zero_with(cfg)? {
                            return Err(Error::DivisionByZero);
                        }
                        return Err(Error::Indeterminate("base ball contains zero".into()));
                    }
                    base.recip()?.powi(k.unsigned_abs())
                } else {
                    base.powi(*k as u32)
                }
            }
            Expr::Floor(a) => {
                let n = a.floor_exact_with(cfg)?;
                BallComplex::from_real(BallReal::from_int(n, prec))
            }
        })
    }

    /// Annihilating polynomial (nonzero, squarefree, primitive).
    pub fn annihilator(&self, cap: usize) -> Result<IntPoly> {
        self.annihilator_with(&Precision { degree_cap: cap, ..Precision::default() })
    }

    fn annihilator_with(&self, cfg: &Precision) -> Result<IntPoly> {
        let check = |p: IntPoly| -> Result<IntPoly> {
            let p = p.squarefree();
            if p.degree() > cfg.degree_cap {
                Err(Error::DegreeCap(p.degree()))
            } else {
                Ok(p)
            }
        };
        if let Some(q) = self.as_rational() {
            return Ok(IntPoly::linear_for(&q?));
        }
        match self {
            Expr::Rat(q) => Ok(IntPoly::linear_for(q)),
            Expr::Alg(a) => Ok(a.minpoly().clone()),
            Expr::Neg(a) => check(a.annihilator_with(cfg)?.negate_var()),
            Expr::Add(a, b) => check(combine(a, b, cfg, false)?),
            Expr::Sub(a, b) => {
                let nb = Expr::Neg(b.clone());
                check(combine(a, &Arc::new(nb), cfg, false)?)
            }
            Expr::Mul(a, b) => check(combine(a, b, cfg, true)?),
            Expr::Div(a, b) => {
                let (pb, _) = b.annihilator_with(cfg)?.strip_zero_roots();
                let pa = a.annihilator_with(cfg)?;
                if let Some(q) = b.as_rational() {
                    let q = q?;
                    if q.is_zero() {
                        return Err(Error::DivisionByZero);
                    }
                    return check(pa.scale_root(&q.recip()));
                }
                check(product_annihilator(&pa, &pb.reverse()))
            }
            Expr::Pow(a, k) => {
                let pa = a.annihilator_with(cfg)?;
                let base = if *k < 0 { pa.strip_zero_roots().0.reverse() } else { pa };
                match k.unsigned_abs() {
                    0 => Ok(IntPoly::from_i64s(&[-1, 1])),
                    1 => check(base),
                    m => check(power_annihilator(&base, m)),
                }
            }
            Expr::Floor(a) => Ok(IntPoly::linear_for(&BigRational::from_integer(a.floor_exact_with(cfg)?))),
        }
    }

    /// Exact test for `e == 0` (works for complex-valued expressions).
    pub fn is_zero(&self) -> Result<bool> {
        self.is_zero_with(&Precision::default())
    }

    pub fn is_zero_with(&self, cfg: &Precision) -> Result<bool> {
        if let Some(q) = self.as_rational() {
            return Ok(q?.is_zero());
        }
        let mut bound: Option<Dyadic> = None;
        let mut tried_ann = false;
        let mut p = cfg.start;
        while p <= cfg.ceiling {
            let v = match self.eval_with(p, cfg) {
                Ok(v) => v,
                Err(Error::Indeterminate(_)) => {
                    p *= 2;
                    continue;
                }
                Err(e) => return Err(e),
            };
            if !v.contains_zero() {
                return Ok(false);
            }
            if !tried_ann {
                tried_ann = true;
                match self.annihilator_with(cfg) {
                    Ok(ann) => {
                        let lb = ann.nonzero_root_lower_bound();
                        bound = Some(Dyadic::from_rational(&lb, 64, Round::Floor));
                    }
                    Err(Error::DegreeCap(_)) => {}
                    Err(e) => return Err(e),
                }
            }
            if let Some(b) = &bound {
                if v.abs_hi() < *b {
                    return Ok(true);
                }
            }
            p *= 2;
        }
        if bound.is_none() {
            Err(Error::Indeterminate("degree cap exceeded; zero cannot be certified".into()))
        } else {
            Err(Error::PrecisionExhausted(cfg.ceiling))
        }
    }

    /// Exact sign of a real-valued expression.
    pub fn sign_exact(&self) -> Result<i32> {
        self.sign_exact_with(&Precision::default())
    }

    pub fn sign_exact_with(&self, cfg: &Precision) -> Result<i32> {
        if let Some(q) = self.as_rational() {
            let q = q?;
            return Ok(if q.is_zero() { 0 } else if q.is_positive() { 1 } else { -1 });
        }
        let mut p = cfg.start;
        let mut zero_checked = false;
        while p <= cfg.ceiling {
            match self.eval_with(p, cfg) {
                Ok(v) => {
                    if !v.im.contains_zero() {
                        return Err(Error::InvalidInput("sign of a non-real expression".into()));
                    }
                    if let Some(s) = v.re.sign() {
                        return Ok(s);
                    }
                    // ball straddles zero: try the certified zero test once the ball is small
                    if !zero_checked && v.re.rad() < &Dyadic::pow2(-(p as i64) / 2) {
                        zero_checked = true;
                        if self.is_zero_with(cfg)? {
                            return Ok(0);
                        }
                    }
                }
                Err(Error::Indeterminate(_)) => {}
                Err(e) => return Err(e),
            }
            p *= 2;
        }
        Err(Error::PrecisionExhausted(cfg.ceiling))
    }

    /// Exact floor of a real-valued expression.
    pub fn floor_exact(&self) -> Result<BigInt> {
        self.floor_exact_with(&Precision::default())
    }

    fn floor_exact_with(&self, cfg: &Precision) -> Result<BigInt> {
        if let Some(q) = self.as_rational() {
            return Ok(q?.floor().to_integer());
        }
        if let Expr::Alg(a) = self {
            return a.floor();
        }
        let mut p = cfg.start.min(128);
        let guess = loop {
            match self.eval_with(p, cfg) {
                Ok(v) => {
                    if let Some(f) = v.re.floor() {
                        return Ok(f);
                    }
                    break v.re.mid().floor();
                }
                Err(Error::Indeterminate(_)) if p < cfg.ceiling => p *= 2,
                Err(e) => return Err(e),
            }
        };
        // ball straddles an integer: decide exactly
        let mut k = guess;
        loop {
            let below = (self - &Expr::from(k.clone())).sign_exact_with(cfg)?;
            if below < 0 {
                k -= 1;
                continue;
            }
            let above = (self - &Expr::from(k.clone() + 1)).sign_exact_with(cfg)?;
            if above >= 0 {
                k += 1;
                continue;
            }
            return Ok(k);
        }
    }

    /// `e - floor(e)` as an expression.
    pub fn frac(&self) -> Result<Expr> {
        let f = self.floor_exact()?;
        Ok(self - &Expr::from(f))
    }
}

fn binary_rational(
    a: &Expr,
    b: &Expr,
    f: impl Fn(BigRational, BigRational) -> Result<BigRational>,
) -> Option<Result<BigRational>> {
    let x = a.as_rational()?;
    let y = b.as_rational()?;
    Some(x.and_then(|x| y.and_then(|y| f(x, y))))
}

/// Annihilator of `a + b` or `a * b`, using exact shifts when one side is rational.
fn combine(a: &Expr, b: &Expr, cfg: &Precision, product: bool) -> Result<IntPoly> {
    let (ra, rb) = (a.as_rational(), b.as_rational());
    if let Some(q) = rb {
        let q = q?;
        let pa = a.annihilator_with(cfg)?;
        return Ok(if product {
            if q.is_zero() {
                IntPoly::x()
            } else {
                pa.scale_root(&q)
            }
        } else {
            pa.shift_root(&q)
        });
    }
    if ra.is_some() {
        return combine(b, a, cfg, product);
    }
    let pa = a.annihilator_with(cfg)?;
    let pb = b.annihilator_with(cfg)?;
    if pa.degree() * pb.degree() > cfg.degree_cap {
        return Err(Error::DegreeCap(pa.degree() * pb.degree()));
    }
    Ok(if product { product_annihilator(&pa, &pb) } else { sum_annihilator(&pa, &pb) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::literal::parse_algebraic;

    fn alg(s: &str) -> Expr {
        Expr::from(parse_algebraic(s).unwrap())
    }

    #[test]
    fn certified_zeros() {
        let s2 = alg("quad:(0+1*sqrt(2))/1");
        assert_eq!((&(&s2 * &s2) - &Expr::from(2)).sign_exact().unwrap(), 0);
        let phi = alg("quad:(1+sqrt(5))/2");
        let e = &(&phi.clone().pow(2) - &phi) - &Expr::from(1);
        assert_eq!(e.sign_exact().unwrap(), 0);
        let s3 = alg("quad:(0+1*sqrt(3))/1");
        let s6 = alg("quad:(0+1*sqrt(6))/1");
        assert_eq!((&(&s2 * &s3) - &s6).sign_exact().unwrap(), 0);
    }

    #[test]
    fn nonzero_signs() {
        let phi = alg("quad:(1+sqrt(5))/2");
        let e = &(&Expr::from(5) / &phi) - &Expr::from(3);
        assert_eq!(e.sign_exact().unwrap(), 1);
        assert_eq!((-e).sign_exact().unwrap(), -1);
    }

    #[test]
    fn division_by_zero() {
        let s2 = alg("quad:(0+1*sqrt(2))/1");
        let z = &(&s2 * &s2) - &Expr::from(2);
        let e = &Expr::from(1) / &z;
        assert_eq!(e.sign_exact(), Err(Error::DivisionByZero));
        assert_eq!((&Expr::from(1) / &Expr::from(0)).sign_exact(), Err(Error::DivisionByZero));
    }

    #[test]
    fn floors() {
        let phi = alg("quad:(1+sqrt(5))/2");
        assert_eq!(phi.floor_exact().unwrap(), BigInt::from(1));
        // floor of an exact integer hidden in an algebraic identity
        let s2 = alg("quad:(0+1*sqrt(2))/1");
        assert_eq!((&s2 * &s2).floor_exact().unwrap(), BigInt::from(2));
        let m = -(&s2 * &s2);
        assert_eq!(m.floor_exact().unwrap(), BigInt::from(-2));
        assert_eq!(Expr::rat(-1, 4).frac().unwrap().as_rational().unwrap().unwrap(), BigRational::new(3.into(), 4.into()));
    }

    #[test]
    fn complex_zero_test() {
        let beta = alg("quad:1+sqrt(-1)");
        // (1+i)^2 - 2(1+i) + 2 = 0
        let e = &(&beta.clone().pow(2) - &(&Expr::from(2) * &beta)) + &Expr::from(2);
        assert!(e.is_zero().unwrap());
        assert!(!(&beta - &Expr::from(1)).is_zero().unwrap());
    }
}
