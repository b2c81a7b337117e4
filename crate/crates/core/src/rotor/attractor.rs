//! Attractor sampling along the orbit of 0 and decomposition of limit points
//! `y = z + xi_0 - xi_{-x}` via the backward branch itinerary.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::xi::{series, xi};
use super::{lambda_pow, ContractedRotation, ORBIT_CEILING};
use crate::error::{Error, Result};
use crate::kernel::{Affine, BallReal, Dyadic, RealLike};
use crate::words::Word;

/// Orbit points `f^k(0)` for `k = burn_in .. burn_in + N - 1` and their branches.
#[derive(Clone, Debug)]
pub struct AttractorSample {
    pub points: Vec<BallReal>,
    pub burn_in: u64,
    /// `lambda^burn_in`, the distance bound to the limit set.
    pub depth_bound: BallReal,
    pub itinerary: Word,
    /// Ball precision at which every branch was certified.
    pub prec: u32,
}

/// Outcome of `decompose_limit_point`.
#[derive(Clone, Debug)]
pub enum Decomposition {
    FirstForm {
        /// Cylinder of the conjugacy parameter.
        x_enclosure: BallReal,
        /// Left end of the cylinder, `{k theta}`, exact.
        intercept: RealLike,
        k: u64,
        z: BigInt,
        residual: BallReal,
        symbols: usize,
    },
    SecondForm {
        m: u64,
        gamma_note: String,
    },
}

fn sample_exact(l: &BigRational, d: &BigRational, burn_in: u64, n: usize) -> (Vec<BigRational>, Vec<u8>) {
    let one = BigRational::one();
    let mut x = BigRational::zero();
    let mut pts = Vec::with_capacity(n);
    let mut bits = Vec::with_capacity(n);
    for k in 0..burn_in + n as u64 {
        let v = l * &x + d;
        let wrap = v >= one;
        if k >= burn_in {
            pts.push(x.clone());
            bits.push(wrap as u8);
        }
        x = if wrap { v - &one } else { v };
    }
    (pts, bits)
}

/// Ball orbit at `prec`; `Err(k)` when the branch at step `k` is not certified.
fn sample_ball(lam: &BallReal, del: &BallReal, burn_in: u64, n: usize, prec: u32) -> std::result::Result<(Vec<BallReal>, Vec<u8>), u64> {
    let one = BallReal::one(prec);
    let mut x = BallReal::zero(prec);
    let mut pts = Vec::with_capacity(n);
    let mut bits = Vec::with_capacity(n);
    for k in 0..burn_in + n as u64 {
        let v = &(lam * &x) + del;
        let wrap = match (&v - &one).sign() {
            Some(s) => s >= 0,
            None => return Err(k),
        };
        if k >= burn_in {
            pts.push(x.clone());
            bits.push(wrap as u8);
        }
        x = if wrap { &v - &one } else { v };
    }
    Ok((pts, bits))
}

impl ContractedRotation {
    /// Sample the attractor along the orbit of 0, raising precision until every
    /// branch is certified.
    pub fn attractor_sample(&self, burn_in: u64, n: usize) -> Result<AttractorSample> {
        if burn_in == 0 || n == 0 {
            return Err(Error::InvalidInput("burn_in and N must be at least 1".into()));
        }
        let depth = |prec| lambda_pow(&self.lambda, burn_in, prec);
        if let (Some(l), Some(d)) = (self.lambda.as_rational(), self.delta().and_then(|d| d.as_rational())) {
            let (pts, bits) = sample_exact(l, d, burn_in, n);
            let prec = 256;
            return Ok(AttractorSample {
                points: pts.iter().map(|q| BallReal::from_rational(q, prec)).collect(),
                burn_in,
                depth_bound: depth(prec)?,
                itinerary: Word::binary(&bits, "attractor itinerary"),
                prec,
            });
        }
        let mut prec = 128;
        loop {
            let lam = self.lambda.to_ball(prec)?;
            let del = self.delta_ball(prec)?;
            match sample_ball(&lam, &del, burn_in, n, prec) {
                Ok((points, bits)) => {
                    return Ok(AttractorSample {
                        points,
                        burn_in,
                        depth_bound: depth(prec)?,
                        itinerary: Word::binary(&bits, "attractor itinerary"),
                        prec,
                    })
                }
                Err(k) if prec >= ORBIT_CEILING => return Err(Error::ItineraryAmbiguous(k as usize)),
                Err(_) => prec = (prec * 3 / 2).min(ORBIT_CEILING),
            }
        }
    }

    /// Backward branches `e_1, ..., e_N` of `y`: `e_j = 1` when the `j`-th preimage
    /// step wraps. Points are assumed to lie on the attractor, so a ball meeting the
    /// gap `[lambda + delta - 1, delta)` is clipped to the side that has a preimage.
    fn backward_itinerary(&self, y: &BallReal, n: usize, prec: u32) -> Result<Vec<u8>> {
        let lam = self.lambda.to_ball(prec)?;
        let del = self.delta_ball(prec)?;
        let one = BallReal::one(prec);
        let low = &(&lam + &del) - &one;
        let mut cur = y.clone();
        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            let can0 = cur.hi() >= del.lo();
            let can1 = cur.lo() < low.hi();
            let (bit, v) = match (can0, can1) {
                (false, false) => {
                    return Err(Error::NotOnAttractor(format!("no preimage after {} backward steps", j)));
                }
                (true, false) => {
                    let lo = Dyadic::max(&cur.lo(), &del.lo());
                    let c = BallReal::from_bounds(&lo, &cur.hi(), prec);
                    (0, (&c - &del).div(&lam)?)
                }
                (false, true) => {
                    let hi = Dyadic::min(&cur.hi(), &low.hi());
                    let c = BallReal::from_bounds(&cur.lo(), &hi, prec);
                    (1, (&(&c + &one) - &del).div(&lam)?)
                }
                (true, true) => return Err(Error::ItineraryAmbiguous(j)),
            };
            out.push(bit);
            cur = v;
        }
        Ok(out)
    }

    /// Decompose an attractor point `y` as `z + xi_0 - xi_{-x}`: the conjugacy
    /// parameter `x` is located by matching the backward itinerary of `y` over `N`
    /// symbols with the rotation cylinders bounded by `{k theta}`, `k = 0..=N`.
    pub fn decompose_limit_point(&self, y: &BallReal, n: usize, prec: u32) -> Result<Decomposition> {
        let theta = self.theta.clone().ok_or_else(|| Error::Validation("the exact rotation number is required".into()))?;
        if n == 0 {
            return Err(Error::InvalidInput("N must be at least 1".into()));
        }
        if y.lo() <= Dyadic::zero() || y.hi() >= Dyadic::one() {
            return Err(Error::NotOnAttractor("y must lie strictly inside (0, 1)".into()));
        }
        let wp = prec.max(y.prec()) + 64;
        let e = self.backward_itinerary(y, n, wp)?;

        // c_i = ⌊(i+1)θ⌋ - ⌊iθ⌋ for i in -N..=N
        let aff = Affine::new(vec![theta.clone()]);
        let fl = aff.floor_progression(&[BigInt::zero()], &[BigInt::one()], &BigRational::zero(), -(n as i64), n as i64 + 2)?;
        let c: Vec<u8> = fl.windows(2).map(|w| (&w[1] - &w[0]).to_u8().unwrap_or(0)).collect();
        let at = |i: i64| c[(i + n as i64) as usize];
        // the symbol of {kθ} at coding index 1 - j is c_{k-j}
        let k = (0..=n as i64)
            .find(|&k| (1..=n as i64).all(|j| at(k - j) == e[(j - 1) as usize]))
            .ok_or_else(|| Error::NotOnAttractor("backward itinerary is not a rotation coding".into()))?;

        // cylinder [{kθ}, next point clockwise)
        let bp = 128 + 4 * (64 - (n as u64).leading_zeros());
        let th = theta.to_ball(bp)?;
        let point = |m: i64| &(&th * &BallReal::from_int(m, bp)) - &BallReal::from_int(fl[(m + n as i64) as usize].clone(), bp);
        let left = point(k);
        let mut right = BallReal::one(bp);
        for m in (0..=n as i64).filter(|&m| m != k) {
            let p = point(m);
            let gap = &p - &left;
            let s = gap.sign().ok_or_else(|| Error::Indeterminate("cylinder endpoints not separated".into()))?;
            if s > 0 && (&right - &p).sign() == Some(1) {
                right = p;
            }
        }
        let x_enclosure = BallReal::from_bounds(&left.lo(), &right.hi(), prec);
        if x_enclosure.width() <= Dyadic::pow2(-((prec / 2) as i64)) {
            return Ok(Decomposition::SecondForm {
                m: k as u64,
                gamma_note: "gamma in Q(beta) is not evaluated".into(),
            });
        }
        let theta_alg = theta.to_algebraic().ok_or_else(|| Error::Validation("theta must be exact".into()))?;
        let intercept = RealLike::from(
            theta_alg
                .mul_rational(&BigRational::from_integer(k.into()))
                .add_rational(&-BigRational::from_integer(fl[(k + n as i64) as usize].clone())),
        );

        // xi_{-x} has digits e_2, e_3, ... and is fixed on the cylinder up to the tail
        let lam = self.lambda.to_ball(prec + 32)?;
        let xi_minus = series(&e[1..], &lam, prec + 16)?;
        let xi_0 = xi(&RealLike::Rational(BigRational::zero()), &self.lambda, &theta, prec + 16)?;
        let yy = y.with_prec(prec + 16);
        let v = &(&yy - &xi_0) + &xi_minus;
        let z = v.mid().to_rational().round().to_integer();
        let residual = (&v - &BallReal::from_int(z.clone(), prec + 16)).abs().with_prec(prec);
        Ok(Decomposition::FirstForm { x_enclosure, intercept, k: k as u64, z, residual, symbols: n })
    }
}

impl Decomposition {
    pub fn residual(&self) -> Option<&BallReal> {
        match self {
            Decomposition::FirstForm { residual, .. } => Some(residual),
            Decomposition::SecondForm { .. } => None,
        }
    }
}
