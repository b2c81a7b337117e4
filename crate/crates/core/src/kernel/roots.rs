//! Certified isolation of all complex roots of a squarefree integer polynomial.
//!
//! Approximations come from Aberth iteration in multiprecision dyadic arithmetic.
//! Each approximation `c` is certified by the disc of radius `n |p(c)| / |p'(c)|`,
//! which always contains a root; pairwise disjoint discs then hold exactly one each.

use num_rational::BigRational;

use super::ball::{BallComplex, BallReal};
use super::dyadic::{Dyadic, Round};
use super::poly::IntPoly;
use crate::error::{Error, Result};

/// Working precision ceiling for root isolation.
pub const ROOT_PREC_CEILING: u32 = 1 << 16;

/// A disc `|z - (re + i im)| <= rad` holding exactly one root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootDisc {
    pub re: Dyadic,
    pub im: Dyadic,
    pub rad: Dyadic,
    /// Certified real root (the centre then lies on the real axis).
    pub real: bool,
}

impl RootDisc {
    /// Enclosing rectangular ball.
    pub fn ball(&self, prec: u32) -> BallComplex {
        BallComplex::new(
            BallReal::new(self.re.clone(), self.rad.clone(), prec),
            BallReal::new(self.im.clone(), self.rad.clone(), prec),
        )
    }

    /// Bounding box `[re - rad, re + rad] x [im - rad, im + rad]`.
    pub fn bbox(&self) -> [BigRational; 4] {
        [
            (&self.re - &self.rad).to_rational(),
            (&self.re + &self.rad).to_rational(),
            (&self.im - &self.rad).to_rational(),
            (&self.im + &self.rad).to_rational(),
        ]
    }

    fn meets_real_axis(&self) -> bool {
        self.im.abs() <= self.rad
    }

    fn disjoint(&self, o: &RootDisc) -> bool {
        let dx = &self.re - &o.re;
        let dy = &self.im - &o.im;
        let d2 = &(&dx * &dx) + &(&dy * &dy);
        let s = &self.rad + &o.rad;
        d2 > &s * &s
    }
}

#[derive(Clone, Debug)]
struct Cx {
    re: Dyadic,
    im: Dyadic,
}

impl Cx {
    fn zero() -> Cx {
        Cx { re: Dyadic::zero(), im: Dyadic::zero() }
    }
    fn one() -> Cx {
        Cx { re: Dyadic::one(), im: Dyadic::zero() }
    }
    fn rnd(&self, w: u32) -> Cx {
        Cx { re: self.re.round(w, Round::Nearest), im: self.im.round(w, Round::Nearest) }
    }
    fn add(&self, o: &Cx) -> Cx {
        Cx { re: &self.re + &o.re, im: &self.im + &o.im }
    }
    fn sub(&self, o: &Cx) -> Cx {
        Cx { re: &self.re - &o.re, im: &self.im - &o.im }
    }
    fn mul(&self, o: &Cx, w: u32) -> Cx {
        Cx {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
        .rnd(w)
    }
    fn norm2(&self) -> Dyadic {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }
    fn div(&self, o: &Cx, w: u32) -> Option<Cx> {
        let n = o.norm2();
        if n.is_zero() {
            return None;
        }
        let re = &(&self.re * &o.re) + &(&self.im * &o.im);
        let im = &(&self.im * &o.re) - &(&self.re * &o.im);
        Some(Cx { re: Dyadic::div(&re, &n, w, Round::Nearest), im: Dyadic::div(&im, &n, w, Round::Nearest) })
    }
    /// Magnitude estimate as log2, for convergence tests.
    fn log2_mag(&self) -> i64 {
        let a = self.re.top_bit().unwrap_or(i64::MIN / 4);
        let b = self.im.top_bit().unwrap_or(i64::MIN / 4);
        a.max(b)
    }
}

fn horner2(p: &[Dyadic], z: &Cx, w: u32) -> (Cx, Cx) {
    // value and derivative
    let mut v = Cx::zero();
    let mut d = Cx::zero();
    for a in p.iter().rev() {
        d = d.mul(z, w).add(&v);
        v = v.mul(z, w);
        v.re = &v.re + a;
    }
    (v, d)
}

fn initial_guesses(p: &IntPoly) -> Vec<Cx> {
    let n = p.degree();
    let bound = p.root_bound();
    let r = Dyadic::from_rational(&bound, 32, Round::Ceil);
    (0..n)
        .map(|k| {
            let t = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            let (s, c) = t.sin_cos();
            Cx { re: &r * &Dyadic::from_f64(c), im: &r * &Dyadic::from_f64(s) }
        })
        .collect()
}

fn aberth(p: &IntPoly, z: &mut [Cx], w: u32) {
    let coeffs: Vec<Dyadic> = p.coeffs().iter().map(|a| Dyadic::from_int(a.clone())).collect();
    let n = z.len();
    let tol = -(w as i64) + 8;
    let max_iter = 64 + 8 * n + w as usize / 2;
    for _ in 0..max_iter {
        let mut moved = false;
        for k in 0..n {
            let (v, d) = horner2(&coeffs, &z[k], w);
            if v.re.is_zero() && v.im.is_zero() {
                continue;
            }
            let Some(ratio) = v.div(&d, w) else {
                // stationary point: nudge
                z[k].re = &z[k].re + &Dyadic::pow2(-(w as i64) / 4);
                moved = true;
                continue;
            };
            let mut s = Cx::zero();
            for j in 0..n {
                if j != k {
                    if let Some(inv) = Cx::one().div(&z[k].sub(&z[j]), w) {
                        s = s.add(&inv);
                    }
                }
            }
            let denom = Cx::one().sub(&ratio.mul(&s, w));
            let step = ratio.div(&denom, w).unwrap_or(ratio);
            let scale = z[k].log2_mag().max(0);
            if step.log2_mag() > tol + scale {
                moved = true;
            }
            z[k] = z[k].sub(&step).rnd(w);
        }
        if !moved {
            break;
        }
    }
}

/// Certified disc around `c` (exact centre) at ball precision `w`.
fn certify(p: &IntPoly, dp: &IntPoly, re: Dyadic, im: Dyadic, w: u32) -> Option<RootDisc> {
    let c = BallComplex::new(BallReal::exact(re.clone(), w), BallReal::exact(im.clone(), w));
    let pv = p.eval_complex(&c).abs_hi();
    let dv = dp.eval_complex(&c).abs();
    let dlo = dv.lo();
    if dlo.signum() <= 0 {
        return None;
    }
    let n = Dyadic::from_int(p.degree() as u64);
    let rad = Dyadic::div(&(&n * &pv), &dlo, 32, Round::Ceil);
    Some(RootDisc { re, im, rad, real: false })
}

fn try_certify(p: &IntPoly, z: &[Cx], w: u32, real_count: usize) -> Option<Vec<RootDisc>> {
    let dp = p.derivative();
    let mut discs = Vec::with_capacity(z.len());
    for c in z {
        discs.push(certify(p, &dp, c.re.clone(), c.im.clone(), w)?);
    }
    // project real candidates to the axis and recertify
    for d in discs.iter_mut() {
        if d.meets_real_axis() {
            *d = certify(p, &dp, d.re.clone(), Dyadic::zero(), w)?;
        }
    }
    for i in 0..discs.len() {
        for j in i + 1..discs.len() {
            if !discs[i].disjoint(&discs[j]) {
                return None;
            }
        }
    }
    let meeting = discs.iter().filter(|d| d.meets_real_axis()).count();
    if meeting != real_count {
        return None;
    }
    for d in discs.iter_mut() {
        if d.meets_real_axis() {
            d.real = true;
        }
    }
    Some(discs)
}

/// All roots of the squarefree polynomial `p`, each in a certified disc of radius
/// at most `2^-prec` (relative to the root modulus when it exceeds one).
pub fn isolate_roots(p: &IntPoly, prec: u32) -> Result<Vec<RootDisc>> {
    let p = p.primitive();
    let n = p.degree();
    if p.is_zero() || n == 0 {
        return Ok(Vec::new());
    }
    if p.squarefree().degree() != n {
        return Err(Error::InvalidInput(format!("polynomial {} is not squarefree", p)));
    }
    if n == 1 {
        let q = BigRational::new(-p.coeff(0), p.coeff(1));
        let (re, rad) = match Dyadic::from_rational_exact(&q) {
            Some(d) => (d, Dyadic::zero()),
            None => {
                let lo = Dyadic::from_rational(&q, prec + 8, Round::Floor);
                let hi = Dyadic::from_rational(&q, prec + 8, Round::Ceil);
                (lo.clone(), &hi - &lo)
            }
        };
        return Ok(vec![RootDisc { re, im: Dyadic::zero(), rad, real: true }]);
    }
    let bound = p.root_bound();
    let real_count = p.count_real_roots(&-bound.clone(), &bound);
    let mut z = initial_guesses(&p);
    let target = Dyadic::pow2(-(prec as i64));
    let mut w = (prec + 32).max(64);
    while w <= ROOT_PREC_CEILING {
        aberth(&p, &mut z, w);
        if let Some(discs) = try_certify(&p, &z, w, real_count) {
            let ok = discs.iter().all(|d| {
                let scale = Dyadic::max(&Dyadic::one(), &Dyadic::max(&d.re.abs(), &d.im.abs()));
                d.rad <= &target * &scale
            });
            if ok {
                return Ok(sort_discs(discs));
            }
        }
        w *= 2;
    }
    Err(Error::PrecisionExhausted(ROOT_PREC_CEILING))
}

/// Real roots first in increasing order, then complex roots by (re, im).
fn sort_discs(mut d: Vec<RootDisc>) -> Vec<RootDisc> {
    d.sort_by(|a, b| b.real.cmp(&a.real).then(a.re.cmp(&b.re)).then(a.im.cmp(&b.im)));
    d
}
