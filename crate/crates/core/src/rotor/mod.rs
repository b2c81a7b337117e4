//! Contracted rotations `f(x) = {lambda x + delta}` on `[0, 1)`: the map and its lift,
//! rotation numbers, the unique offset realising an irrational rotation number,
//! the xi series, attractor sampling and limit-point decomposition.

mod attractor;
mod xi;

use std::cmp::Ordering;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::kernel::{Affine, BallReal, Dyadic, Precision, RealLike, Round};

pub use attractor::{AttractorSample, Decomposition};
pub use xi::{xi, xi_digits, xi_prime, xi_prime_digits};

/// Longest orbit used to separate an offset from the unique one.
const MAX_ORBIT: u64 = 1 << 26;
/// Most bisection steps before giving up on a tolerance.
const MAX_BISECTIONS: u32 = 1 << 16;
/// Ball precision ceiling for orbit iteration.
const ORBIT_CEILING: u32 = 1 << 15;
/// Precision ceiling when sharpening a rotation number enclosure.
const ROTATION_CEILING: u32 = 1 << 12;

#[derive(Clone, Debug)]
enum Offset {
    Value(RealLike),
    /// The offset whose rotation number is `theta`, refined on demand.
    Unique(Arc<Mutex<Bracket>>),
}

/// `⌊n theta⌋` for `n = 0, 1, ...`, extended in blocks.
#[derive(Debug)]
struct Floors {
    aff: Affine,
    vals: Vec<i64>,
}

impl Floors {
    fn new(theta: &RealLike) -> Floors {
        Floors { aff: Affine::new(vec![theta.clone()]), vals: Vec::new() }
    }

    fn get(&mut self, n: u64) -> Result<i64> {
        let n = n as usize;
        if n >= self.vals.len() {
            let start = self.vals.len();
            let end = (n + 1).max(2 * start).max(1024);
            let one = [BigInt::one()];
            let fl = self.aff.floor_progression(&[BigInt::zero()], &one, &BigRational::zero(), start as i64, end as i64)?;
            for f in fl {
                self.vals.push(f.to_i64().ok_or_else(|| Error::InvalidInput("orbit too long".into()))?);
            }
        }
        Ok(self.vals[n])
    }
}

/// Current enclosure `[lo, hi]` of the unique offset.
#[derive(Debug)]
struct Bracket {
    lambda: RealLike,
    lo: Dyadic,
    hi: Dyadic,
    floors: Floors,
}

impl Bracket {
    fn new(lambda: &RealLike, theta: &RealLike) -> Result<Bracket> {
        let lam = lambda.to_ball(128)?;
        // the offset exceeds 1 - lambda
        let lo = (&Dyadic::one() - &lam.hi()).quantize(-128, Round::Floor);
        Ok(Bracket { lambda: lambda.clone(), lo, hi: Dyadic::one(), floors: Floors::new(theta) })
    }

    fn width(&self) -> Dyadic {
        &self.hi - &self.lo
    }

    /// Bisect until the width is at most `tol`.
    fn narrow(&mut self, tol: &Dyadic) -> Result<()> {
        let mut steps = 0u32;
        while &self.width() > tol {
            if steps >= MAX_BISECTIONS {
                return Err(Error::TolUnreachable(steps as usize));
            }
            let mid = (&self.lo + &self.hi).mul_pow2(-1);
            match offset_side(&self.lambda, &mid, &mut self.floors)? {
                Ordering::Greater => self.hi = mid,
                _ => self.lo = mid,
            }
            steps += 1;
        }
        Ok(())
    }

    fn ball(&self) -> BallReal {
        let bits = width_bits(&self.width()) + 64;
        BallReal::from_bounds(&self.lo, &self.hi, bits.max(64))
    }
}

/// Number of bits below the unit where `w` lives, i.e. roughly `-log2 w`.
fn width_bits(w: &Dyadic) -> u32 {
    match w.top_bit() {
        Some(t) if t < 0 => (-t) as u32,
        _ => 0,
    }
}

/// One lift step `⌊x⌋ + lambda {x} + delta` rounded to a multiple of `2^-q` in direction `mode`.
fn lift_step(x: &Dyadic, lam: &Dyadic, delta: &Dyadic, q: i64, mode: Round) -> Dyadic {
    let fl = Dyadic::from_int(x.floor());
    let fr = x - &fl;
    let v = &(&fr * lam) + delta;
    &v.quantize(-q, mode) + &fl
}

/// Orders `delta` against the offset with rotation number `theta` by comparing
/// `⌊F^n(0)⌋` with `⌊n theta⌋` along a directed-rounding orbit.
fn offset_side(lambda: &RealLike, delta: &Dyadic, floors: &mut Floors) -> Result<Ordering> {
    let cfg = Precision::default();
    let mut q = ((-delta.exponent()).max(0) as u32 + 64).max(128);
    loop {
        let lam = lambda.to_ball(q + 8)?;
        let (lam_lo, lam_hi) = (lam.lo(), lam.hi());
        let mut lo = Dyadic::zero();
        let mut hi = Dyadic::zero();
        let mut decided = None;
        for n in 1..=MAX_ORBIT {
            lo = lift_step(&lo, &lam_lo, delta, q as i64, Round::Floor);
            hi = lift_step(&hi, &lam_hi, delta, q as i64, Round::Ceil);
            let target = BigInt::from(floors.get(n)?);
            let (fl, fh) = (lo.floor(), hi.floor());
            if fl > target {
                decided = Some(Ordering::Greater);
            } else if fh < target {
                decided = Some(Ordering::Less);
            } else if fl != fh {
                break;
            }
            if decided.is_some() {
                break;
            }
            if n == MAX_ORBIT {
                return Err(Error::TolUnreachable(n as usize));
            }
        }
        if let Some(d) = decided {
            return Ok(d);
        }
        q *= 2;
        if q > cfg.ceiling {
            return Err(Error::PrecisionExhausted(q));
        }
    }
}

fn in_unit(v: &RealLike, what: &str) -> Result<()> {
    let pos = v.sign()? > 0;
    let below = v.cmp_rational(&BigRational::one())? == Ordering::Less;
    if pos && below {
        Ok(())
    } else {
        Err(Error::Validation(format!("{} must lie in (0, 1)", what)))
    }
}

fn check_theta(theta: &RealLike) -> Result<()> {
    in_unit(theta, "theta")?;
    if !theta.is_irrational() {
        return Err(Error::Validation("theta must be an exact irrational".into()));
    }
    Ok(())
}

/// `lambda x + delta` for exact values, if all three are exact.
fn exact_affine(lambda: &RealLike, x: &RealLike, delta: &RealLike) -> Result<Option<RealLike>> {
    if let (Some(l), Some(v), Some(d)) = (lambda.as_rational(), x.as_rational(), delta.as_rational()) {
        return Ok(Some(RealLike::Rational(l * v + d)));
    }
    match (lambda.to_algebraic(), x.to_algebraic(), delta.to_algebraic()) {
        (Some(l), Some(v), Some(d)) => Ok(Some(RealLike::from(l.mul(&v)?.add(&d)?))),
        _ => Ok(None),
    }
}

/// A contracted rotation with `0 < lambda, delta < 1` and `lambda + delta > 1`.
#[derive(Clone, Debug)]
pub struct ContractedRotation {
    lambda: RealLike,
    delta: Offset,
    theta: Option<RealLike>,
}

impl ContractedRotation {
    pub fn new(lambda: RealLike, delta: RealLike) -> Result<Self> {
        in_unit(&lambda, "lambda")?;
        in_unit(&delta, "delta")?;
        let aff = Affine::new(vec![lambda.clone(), delta.clone()]);
        let s = aff.sign(&[BigInt::one(), BigInt::one()], &-BigRational::one())?;
        if s <= 0 {
            return Err(Error::Validation("lambda + delta must exceed 1".into()));
        }
        Ok(ContractedRotation { lambda, delta: Offset::Value(delta), theta: None })
    }

    /// The rotation with contraction `lambda` and rotation number `theta` (irrational);
    /// its offset is refined by bisection whenever more precision is needed.
    pub fn with_rotation(lambda: RealLike, theta: RealLike) -> Result<Self> {
        in_unit(&lambda, "lambda")?;
        check_theta(&theta)?;
        let b = Bracket::new(&lambda, &theta)?;
        Ok(ContractedRotation { lambda, delta: Offset::Unique(Arc::new(Mutex::new(b))), theta: Some(theta) })
    }

    /// Declare the exact rotation number, as needed by `decompose_limit_point`.
    pub fn with_theta(mut self, theta: RealLike) -> Result<Self> {
        check_theta(&theta)?;
        self.theta = Some(theta);
        Ok(self)
    }

    pub fn lambda(&self) -> &RealLike {
        &self.lambda
    }

    pub fn theta(&self) -> Option<&RealLike> {
        self.theta.as_ref()
    }

    /// The offset when it is given exactly or as a fixed ball.
    pub fn delta(&self) -> Option<&RealLike> {
        match &self.delta {
            Offset::Value(d) => Some(d),
            Offset::Unique(_) => None,
        }
    }

    /// Enclosure of the offset; a bisected offset is refined to width `2^-prec`.
    pub fn delta_ball(&self, prec: u32) -> Result<BallReal> {
        match &self.delta {
            Offset::Value(d) => d.to_ball(prec),
            Offset::Unique(b) => {
                let mut g = b.lock().expect("offset lock");
                g.narrow(&Dyadic::pow2(-(prec as i64)))?;
                Ok(g.ball())
            }
        }
    }

    /// `lambda x + delta` as an exact value where possible, else a ball whose
    /// position relative to 1 is certified.
    fn affine_part(&self, x: &RealLike) -> Result<(RealLike, bool)> {
        if let Offset::Value(d) = &self.delta {
            if let Some(v) = exact_affine(&self.lambda, x, d)? {
                let wrap = v.cmp_rational(&BigRational::one())? != Ordering::Less;
                return Ok((v, wrap));
            }
        }
        let mut prec = 128;
        loop {
            let v = &(&self.lambda.to_ball(prec)? * &x.to_ball(prec)?) + &self.delta_ball(prec)?;
            match (&v - &BallReal::one(prec)).sign() {
                Some(s) => return Ok((RealLike::Ball(v), s >= 0)),
                None if prec < 4096 && !matches!(x, RealLike::Ball(_)) => prec *= 2,
                None => return Err(Error::Indeterminate("lambda x + delta is too close to 1".into())),
            }
        }
    }

    /// `f(x) = {lambda x + delta}` and its branch: 1 when `lambda x + delta >= 1`.
    pub fn apply_f(&self, x: &RealLike) -> Result<(RealLike, u8)> {
        if x.sign()? < 0 || x.cmp_rational(&BigRational::one())? != Ordering::Less {
            return Err(Error::Validation("x must lie in [0, 1)".into()));
        }
        let (v, wrap) = self.affine_part(x)?;
        if wrap {
            Ok((v.add_rational(&-BigRational::one()), 1))
        } else {
            Ok((v, 0))
        }
    }

    /// The lift `F(x) = lambda {x} + delta + ⌊x⌋`.
    #[allow(non_snake_case)]
    pub fn lift_F(&self, x: &RealLike) -> Result<RealLike> {
        let fl = BigRational::from_integer(x.floor()?);
        let (v, _) = self.affine_part(&x.frac()?)?;
        Ok(v.add_rational(&fl))
    }

    /// Enclosure of the rotation number from `F^n(0)`: if `p <= F^n(0) < p + 1`
    /// then the rotation number lies in `[p/n, (p+1)/n]`. Exact or lazily refined
    /// parameters are re-run at doubled precision until the lower and upper orbits
    /// end within one unit; ball parameters contribute their radius.
    pub fn rotation_number(&self, n: u64) -> Result<BallReal> {
        if n == 0 {
            return Err(Error::InvalidInput("n_iter must be at least 1".into()));
        }
        let refinable = !matches!(self.lambda, RealLike::Ball(_)) && !matches!(self.delta, Offset::Value(RealLike::Ball(_)));
        let mut prec = 128;
        let (p_lo, p_hi) = loop {
            let lam = self.lambda.to_ball(prec)?;
            let del = self.delta_ball(prec)?;
            let last = !refinable || prec >= ROTATION_CEILING;
            let cap = if last { None } else { Some(2) };
            let bounds = if prec == 128 { fixed_orbit(&lam, &del, n, cap) } else { None };
            match bounds.or_else(|| dyadic_orbit(&lam, &del, n, prec, cap)) {
                Some((lo, hi)) if last || &hi - &lo <= BigInt::one() => break (lo, hi),
                _ => prec *= 2,
            }
        };
        let nn = BigRational::from_integer(n.into());
        let lo = BigRational::from_integer(p_lo) / &nn;
        let hi = BigRational::from_integer(p_hi + 1) / &nn;
        Ok(BallReal::from_bounds(
            &Dyadic::from_rational(&lo, 128, Round::Floor),
            &Dyadic::from_rational(&hi, 128, Round::Ceil),
            128,
        ))
    }
}

/// Steps between divergence checks of the lower and upper orbits.
const SPREAD_CHECK: u64 = 4096;

/// Floors of lower and upper bounds for `F^n(0)`, in 64-bit fixed point; `None` on
/// overflow or once the floors differ by `cap`.
fn fixed_orbit(lam: &BallReal, del: &BallReal, n: u64, cap: Option<u64>) -> Option<(BigInt, BigInt)> {
    let scale = Dyadic::pow2(64);
    let lam_lo = (&lam.lo() * &scale).floor().to_u64()?;
    let lam_hi = (&lam.hi() * &scale).ceil().to_u64()?;
    let d_lo = (&del.lo() * &scale).floor().to_u128()?;
    let d_hi = (&del.hi() * &scale).ceil().to_u128()?;
    let (mut i_lo, mut f_lo) = (0u64, 0u64);
    let (mut i_hi, mut f_hi) = (0u64, 0u64);
    for k in 0..n {
        let t = ((f_lo as u128 * lam_lo as u128) >> 64) + d_lo;
        i_lo = i_lo.checked_add((t >> 64) as u64)?;
        f_lo = t as u64;
        let p = f_hi as u128 * lam_hi as u128;
        let t = ((p + u64::MAX as u128) >> 64) + d_hi;
        i_hi = i_hi.checked_add((t >> 64) as u64)?;
        f_hi = t as u64;
        if cap.is_some_and(|c| k % SPREAD_CHECK == 0 && i_hi - i_lo >= c) {
            return None;
        }
    }
    Some((i_lo.into(), i_hi.into()))
}

/// Directed-rounding orbit in `prec`-bit fixed point; `None` once the floors differ by `cap`.
fn dyadic_orbit(lam: &BallReal, del: &BallReal, n: u64, prec: u32, cap: Option<u64>) -> Option<(BigInt, BigInt)> {
    let (lam_lo, lam_hi) = (lam.lo(), lam.hi());
    let (d_lo, d_hi) = (del.lo(), del.hi());
    let q = prec as i64;
    let mut lo = Dyadic::zero();
    let mut hi = Dyadic::zero();
    for k in 0..n {
        lo = lift_step(&lo, &lam_lo, &d_lo, q, Round::Floor);
        hi = lift_step(&hi, &lam_hi, &d_hi, q, Round::Ceil);
        if let Some(c) = cap.filter(|_| k % SPREAD_CHECK == 0) {
            if hi.floor() - lo.floor() >= BigInt::from(c) {
                return None;
            }
        }
    }
    Some((lo.floor(), hi.floor()))
}

/// Enclosure of width at most `tol` of the unique offset `delta > 1 - lambda` whose
/// contracted rotation has rotation number `theta`.
pub fn delta_for_rotation(lambda: &RealLike, theta: &RealLike, tol: &BigRational) -> Result<BallReal> {
    in_unit(lambda, "lambda")?;
    check_theta(theta)?;
    if tol <= &BigRational::zero() {
        return Err(Error::Validation("tol must be positive".into()));
    }
    let mut b = Bracket::new(lambda, theta)?;
    let t = Dyadic::from_rational(tol, 64, Round::Floor);
    if b.width().to_rational() > *tol {
        b.narrow(&t)?;
    }
    Ok(b.ball())
}

/// `lambda^k` enclosure.
pub(crate) fn lambda_pow(lambda: &RealLike, k: u64, prec: u32) -> Result<BallReal> {
    let k = u32::try_from(k).map_err(|_| Error::InvalidInput("exponent too large".into()))?;
    Ok(lambda.to_ball(prec)?.powi(k))
}

#[cfg(test)]
mod tests;
