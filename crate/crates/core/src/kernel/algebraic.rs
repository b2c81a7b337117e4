//! Exact algebraic numbers: a primitive irreducible integer polynomial and a rational
//! box that isolates one of its roots.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ball::{BallComplex, BallReal};
use super::dyadic::{Dyadic, Round};
use super::lattice::{find_relation, RelationSearch};
use super::poly::IntPoly;
use super::resultant::{power_annihilator, product_annihilator, sum_annihilator};
use super::roots::{isolate_roots, RootDisc};
use super::Precision;
use crate::error::{Error, Result};

/// Closed rational rectangle `[re_lo, re_hi] x [im_lo, im_hi]`; real numbers use `im = [0, 0]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Isolator {
    pub re_lo: BigRational,
    pub re_hi: BigRational,
    pub im_lo: BigRational,
    pub im_hi: BigRational,
}

impl Isolator {
    pub fn real(lo: BigRational, hi: BigRational) -> Self {
        Isolator { re_lo: lo, re_hi: hi, im_lo: BigRational::zero(), im_hi: BigRational::zero() }
    }

    pub fn rect(re_lo: BigRational, re_hi: BigRational, im_lo: BigRational, im_hi: BigRational) -> Self {
        Isolator { re_lo, re_hi, im_lo, im_hi }
    }

    pub fn is_real(&self) -> bool {
        self.im_lo.is_zero() && self.im_hi.is_zero()
    }

    fn is_well_formed(&self) -> bool {
        self.re_lo <= self.re_hi && self.im_lo <= self.im_hi
    }

    fn from_disc(d: &RootDisc) -> Self {
        let [a, b, c, e] = d.bbox();
        if d.real {
            Isolator::real(a, b)
        } else {
            Isolator::rect(a, b, c, e)
        }
    }

    fn meets_disc(&self, d: &RootDisc) -> bool {
        let [a, b, c, e] = d.bbox();
        a <= self.re_hi && self.re_lo <= b && c <= self.im_hi && self.im_lo <= e
    }

    fn contains_disc(&self, d: &RootDisc) -> bool {
        let [a, b, c, e] = d.bbox();
        self.re_lo <= a && b <= self.re_hi && self.im_lo <= c && e <= self.im_hi
    }

    fn meets(&self, o: &Isolator) -> bool {
        o.re_lo <= self.re_hi && self.re_lo <= o.re_hi && o.im_lo <= self.im_hi && self.im_lo <= o.im_hi
    }
}

#[derive(Clone, Debug)]
enum Approx {
    /// Exact rational value.
    Exact(BigRational),
    /// Real root strictly inside `(lo, hi)`; `sign_lo` is the sign of the polynomial at `lo`.
    Bracket { lo: BigRational, hi: BigRational, sign_lo: i32 },
    Disc(RootDisc),
}

/// An algebraic number given by its minimal polynomial and an isolating box.
#[derive(Clone)]
pub struct AlgebraicNumber {
    minpoly: IntPoly,
    iso: Isolator,
    cache: Arc<Mutex<Option<Approx>>>,
}

impl PartialEq for AlgebraicNumber {
    fn eq(&self, o: &Self) -> bool {
        self.minpoly == o.minpoly && self.iso == o.iso
    }
}

impl Eq for AlgebraicNumber {}

impl Hash for AlgebraicNumber {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.minpoly.hash(state);
        self.iso.hash(state);
    }
}

impl fmt::Debug for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlgebraicNumber({}, {:?})", self.minpoly, self.iso)
    }
}

/// Number of distinct real roots of `p` in the closed interval `[lo, hi]`.
fn count_closed(p: &IntPoly, lo: &BigRational, hi: &BigRational) -> usize {
    let sf = p.squarefree();
    let inner = sf.count_real_roots(lo, hi);
    inner + usize::from(sf.sign_at(lo) == 0)
}

fn int_sign(x: &BigRational) -> i32 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Dyadic point strictly inside `(lo, hi)` close to the midpoint.
fn dyadic_mid(lo: &BigRational, hi: &BigRational) -> BigRational {
    let mid = (lo + hi) / BigRational::from_integer(2.into());
    let w = hi - lo;
    // quantum 2^e with 2^e <= w / 8
    let e = w.numer().bits() as i64 - w.denom().bits() as i64 - 4;
    let d = Dyadic::from_rational_quantum(&mid, e, Round::Nearest).to_rational();
    if &d > lo && &d < hi {
        d
    } else {
        mid
    }
}

impl AlgebraicNumber {
    pub fn from_rational(q: BigRational) -> Self {
        AlgebraicNumber {
            minpoly: IntPoly::linear_for(&q),
            iso: Isolator::real(q.clone(), q.clone()),
            cache: Arc::new(Mutex::new(Some(Approx::Exact(q)))),
        }
    }

    pub fn from_int<T: Into<BigInt>>(n: T) -> Self {
        AlgebraicNumber::from_rational(BigRational::from_integer(n.into()))
    }

    /// Validate `p` and `iso`, and reduce `p` to the minimal polynomial of the isolated root.
    pub fn new(p: &IntPoly, iso: Isolator) -> Result<Self> {
        Self::new_with(p, iso, &Precision::default())
    }

    pub fn new_with(p: &IntPoly, iso: Isolator, cfg: &Precision) -> Result<Self> {
        if !iso.is_well_formed() {
            return Err(Error::IsolatorInvalid("empty box".into()));
        }
        let sf = p.squarefree();
        if sf.is_zero() || sf.degree() == 0 {
            return Err(Error::IsolatorInvalid("constant polynomial".into()));
        }
        let count = if iso.is_real() {
            count_closed(&sf, &iso.re_lo, &iso.re_hi)
        } else {
            count_in_rect(&sf, &iso, cfg)?
        };
        if count != 1 {
            return Err(Error::IsolatorInvalid(format!("{} roots of {} in box", count, p)));
        }
        let mut iso = iso;
        if !iso.is_real() {
            // normalize to a real interval when the isolated root is real
            let tmp = AlgebraicNumber::raw(sf.clone(), iso.clone());
            if let Some(d) = tmp.disc(64)? {
                if d.real {
                    iso = Isolator::from_disc(&d);
                }
            }
        }
        let tmp = AlgebraicNumber::raw(sf.clone(), iso.clone());
        let g = minimal_factor(&sf, &tmp, cfg)?;
        Ok(AlgebraicNumber::raw(g, iso))
    }

    fn raw(minpoly: IntPoly, iso: Isolator) -> Self {
        let exact = if minpoly.degree() == 1 {
            Some(Approx::Exact(BigRational::new(-minpoly.coeff(0), minpoly.coeff(1))))
        } else {
            None
        };
        AlgebraicNumber { minpoly, iso, cache: Arc::new(Mutex::new(exact)) }
    }

    pub fn minpoly(&self) -> &IntPoly {
        &self.minpoly
    }

    pub fn isolator(&self) -> &Isolator {
        &self.iso
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree()
    }

    pub fn is_real(&self) -> bool {
        self.iso.is_real()
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        if self.degree() == 1 {
            Some(BigRational::new(-self.minpoly.coeff(0), self.minpoly.coeff(1)))
        } else {
            None
        }
    }

    pub fn is_zero(&self) -> bool {
        self.to_rational().is_some_and(|q| q.is_zero())
    }

    fn real_refine(&self, prec: u32) -> Approx {
        let mut guard = self.cache.lock().expect("cache lock");
        let start = match guard.as_ref() {
            Some(Approx::Exact(q)) => return Approx::Exact(q.clone()),
            Some(Approx::Bracket { lo, hi, sign_lo }) => (lo.clone(), hi.clone(), *sign_lo),
            _ => {
                let p = &self.minpoly;
                let (lo, hi) = (self.iso.re_lo.clone(), self.iso.re_hi.clone());
                let s = p.sign_at(&lo);
                if s == 0 {
                    *guard = Some(Approx::Exact(lo.clone()));
                    return Approx::Exact(lo);
                }
                if p.sign_at(&hi) == 0 {
                    *guard = Some(Approx::Exact(hi.clone()));
                    return Approx::Exact(hi);
                }
                (lo, hi, s)
            }
        };
        let (mut lo, mut hi, s_lo) = start;
        let p = &self.minpoly;
        let dp = p.derivative();
        let target = |lo: &BigRational, hi: &BigRational| -> bool {
            let scale = lo.abs().max(hi.abs()).max(BigRational::one());
            (hi - lo) <= scale * BigRational::new(BigInt::one(), BigInt::one() << prec)
        };
        while !target(&lo, &hi) {
            let width_bits = {
                let w = &hi - &lo;
                w.denom().bits() as i64 - w.numer().bits() as i64
            };
            let mut progressed = false;
            if width_bits > 16 {
                // interval Newton step
                let w = (2 * width_bits.max(0) as u32 + 64).min(prec + 64);
                let lo_d = Dyadic::from_rational(&lo, w + 16, Round::Floor);
                let hi_d = Dyadic::from_rational(&hi, w + 16, Round::Ceil);
                let x = BallReal::from_bounds(&lo_d, &hi_d, w);
                let dx = dp.eval_ball(&x);
                if dx.sign().is_some() {
                    let m = dyadic_mid(&lo, &hi);
                    let pm = p.eval_rational(&m);
                    if pm.is_zero() {
                        *guard = Some(Approx::Exact(m.clone()));
                        return Approx::Exact(m);
                    }
                    let m_d = Dyadic::from_rational_exact(&m).expect("dyadic midpoint");
                    let pm_b = BallReal::from_rational(&pm, w);
                    if let Ok(q) = pm_b.div(&dx) {
                        let n = &BallReal::exact(m_d, w) - &q;
                        let nlo = n.lo().to_rational();
                        let nhi = n.hi().to_rational();
                        let new_lo = if nlo > lo { nlo } else { lo.clone() };
                        let new_hi = if nhi < hi { nhi } else { hi.clone() };
                        if new_lo < new_hi && (&new_hi - &new_lo) * BigRational::from_integer(2.into()) <= &hi - &lo {
                            let sl = p.sign_at(&new_lo);
                            let sh = p.sign_at(&new_hi);
                            if sl == 0 {
                                *guard = Some(Approx::Exact(new_lo.clone()));
                                return Approx::Exact(new_lo);
                            }
                            if sh == 0 {
                                *guard = Some(Approx::Exact(new_hi.clone()));
                                return Approx::Exact(new_hi);
                            }
                            if sl == s_lo && sh == -s_lo {
                                lo = new_lo;
                                hi = new_hi;
                                progressed = true;
                            }
                        }
                    }
                }
            }
            if !progressed {
                let m = dyadic_mid(&lo, &hi);
                let s = p.sign_at(&m);
                if s == 0 {
                    *guard = Some(Approx::Exact(m.clone()));
                    return Approx::Exact(m);
                }
                if s == s_lo {
                    lo = m;
                } else {
                    hi = m;
                }
            }
        }
        let a = Approx::Bracket { lo, hi, sign_lo: s_lo };
        *guard = Some(a.clone());
        a
    }

    /// Certified root disc for a non-real number, refined to `prec` bits.
    fn disc(&self, prec: u32) -> Result<Option<RootDisc>> {
        if self.iso.is_real() {
            return Ok(None);
        }
        {
            let guard = self.cache.lock().expect("cache lock");
            if let Some(Approx::Disc(d)) = guard.as_ref() {
                let scale = Dyadic::max(&Dyadic::one(), &Dyadic::max(&d.re.abs(), &d.im.abs()));
                if d.rad <= &Dyadic::pow2(-(prec as i64)) * &scale {
                    return Ok(Some(d.clone()));
                }
            }
        }
        let mut w = prec.max(32);
        loop {
            let discs = isolate_roots(&self.minpoly, w)?;
            let hits: Vec<&RootDisc> = discs.iter().filter(|d| self.iso.meets_disc(d)).collect();
            if hits.len() == 1 {
                let d = hits[0].clone();
                *self.cache.lock().expect("cache lock") = Some(Approx::Disc(d.clone()));
                return Ok(Some(d));
            }
            if hits.is_empty() {
                return Err(Error::IsolatorInvalid("no root in box".into()));
            }
            w = w.checked_mul(2).ok_or(Error::PrecisionExhausted(w))?;
            if w > super::roots::ROOT_PREC_CEILING {
                return Err(Error::IsolatorInvalid("root on isolator boundary".into()));
            }
        }
    }

    /// Real enclosure with `rad <= 2^(1-prec) max(1, |mid|)`.
    pub fn refine_real(&self, prec: u32) -> Result<BallReal> {
        if !self.is_real() {
            return Err(Error::InvalidInput("number is not real".into()));
        }
        let bp = prec + 8;
        Ok(match self.real_refine(prec) {
            Approx::Exact(q) => BallReal::from_rational(&q, bp),
            Approx::Bracket { lo, hi, .. } => BallReal::from_bounds(
                &Dyadic::from_rational(&lo, bp + 8, Round::Floor),
                &Dyadic::from_rational(&hi, bp + 8, Round::Ceil),
                bp,
            ),
            Approx::Disc(_) => unreachable!(),
        })
    }

    /// Complex enclosure with each radius at most `2^(1-prec) max(1, |mid|)`.
    pub fn refine(&self, prec: u32) -> Result<BallComplex> {
        if self.is_real() {
            return Ok(BallComplex::from_real(self.refine_real(prec)?));
        }
        let d = self.disc(prec)?.expect("complex number has a disc");
        Ok(d.ball(prec + 8))
    }

    /// Exact sign of a real number.
    pub fn sign(&self) -> Result<i32> {
        if !self.is_real() {
            return Err(Error::InvalidInput("sign of a non-real number".into()));
        }
        if let Some(q) = self.to_rational() {
            return Ok(int_sign(&q));
        }
        let mut p = 64;
        loop {
            if let Some(s) = self.refine_real(p)?.sign() {
                return Ok(s);
            }
            p *= 2;
        }
    }

    /// Exact comparison of a real number with a rational.
    pub fn cmp_rational(&self, q: &BigRational) -> Result<Ordering> {
        self.add_rational(&-q).sign().map(|s| s.cmp(&0))
    }

    /// Exact floor of a real number.
    pub fn floor(&self) -> Result<BigInt> {
        if let Some(q) = self.to_rational() {
            return Ok(q.floor().to_integer());
        }
        if !self.is_real() {
            return Err(Error::InvalidInput("floor of a non-real number".into()));
        }
        let mut p = 64;
        loop {
            if let Some(f) = self.refine_real(p)?.floor() {
                return Ok(f);
            }
            p *= 2;
        }
    }

    /// `x - floor(x)`.
    pub fn frac(&self) -> Result<AlgebraicNumber> {
        let f = self.floor()?;
        Ok(self.add_rational(&-BigRational::from_integer(f)))
    }

    pub fn neg(&self) -> AlgebraicNumber {
        let i = &self.iso;
        AlgebraicNumber::raw(
            self.minpoly.negate_var().primitive(),
            Isolator::rect(-i.re_hi.clone(), -i.re_lo.clone(), -i.im_hi.clone(), -i.im_lo.clone()),
        )
    }

    pub fn conj(&self) -> AlgebraicNumber {
        let i = &self.iso;
        AlgebraicNumber::raw(
            self.minpoly.clone(),
            Isolator::rect(i.re_lo.clone(), i.re_hi.clone(), -i.im_hi.clone(), -i.im_lo.clone()),
        )
    }

    pub fn add_rational(&self, q: &BigRational) -> AlgebraicNumber {
        if q.is_zero() {
            return self.clone();
        }
        if let Some(r) = self.to_rational() {
            return AlgebraicNumber::from_rational(r + q);
        }
        let i = &self.iso;
        AlgebraicNumber::raw(
            self.minpoly.shift_root(q),
            Isolator::rect(&i.re_lo + q, &i.re_hi + q, i.im_lo.clone(), i.im_hi.clone()),
        )
    }

    pub fn mul_rational(&self, q: &BigRational) -> AlgebraicNumber {
        if let Some(r) = self.to_rational() {
            return AlgebraicNumber::from_rational(r * q);
        }
        if q.is_zero() {
            return AlgebraicNumber::from_int(0);
        }
        let i = &self.iso;
        let (a, b, c, d) = (&i.re_lo * q, &i.re_hi * q, &i.im_lo * q, &i.im_hi * q);
        let iso = if q.is_positive() { Isolator::rect(a, b, c, d) } else { Isolator::rect(b, a, d, c) };
        AlgebraicNumber::raw(self.minpoly.scale_root(q).primitive(), iso)
    }

    pub fn recip(&self) -> Result<AlgebraicNumber> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.to_rational() {
            return Ok(AlgebraicNumber::from_rational(r.recip()));
        }
        let q = self.minpoly.reverse().primitive();
        if self.is_real() {
            // shrink the bracket away from zero, then invert it
            let (lo, hi) = match self.real_refine(8) {
                Approx::Bracket { lo, hi, .. } if lo.is_positive() || hi.is_negative() => (lo, hi),
                _ => {
                    let mut p = 16;
                    loop {
                        if let Approx::Bracket { lo, hi, .. } = self.real_refine(p) {
                            if lo.is_positive() || hi.is_negative() {
                                break (lo, hi);
                            }
                        }
                        p *= 2;
                    }
                }
            };
            return Ok(AlgebraicNumber::raw(q, Isolator::real(hi.recip(), lo.recip())));
        }
        let me = self.clone();
        let iso = locate(&q, false, &Precision::default(), move |w| me.refine(w)?.recip())?;
        Ok(AlgebraicNumber::raw(q, iso))
    }

    pub fn add(&self, o: &AlgebraicNumber) -> Result<AlgebraicNumber> {
        self.add_with(o, &Precision::default())
    }

    pub fn add_with(&self, o: &AlgebraicNumber, cfg: &Precision) -> Result<AlgebraicNumber> {
        if let Some(q) = o.to_rational() {
            return Ok(self.add_rational(&q));
        }
        if let Some(q) = self.to_rational() {
            return Ok(o.add_rational(&q));
        }
        let ann = sum_annihilator(&self.minpoly, &o.minpoly);
        let (a, b) = (self.clone(), o.clone());
        from_annihilator(&ann, self.is_real() && o.is_real(), cfg, move |w| Ok(&a.refine(w)? + &b.refine(w)?))
    }

    pub fn sub(&self, o: &AlgebraicNumber) -> Result<AlgebraicNumber> {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &AlgebraicNumber) -> Result<AlgebraicNumber> {
        self.mul_with(o, &Precision::default())
    }

    pub fn mul_with(&self, o: &AlgebraicNumber, cfg: &Precision) -> Result<AlgebraicNumber> {
        if let Some(q) = o.to_rational() {
            return Ok(self.mul_rational(&q));
        }
        if let Some(q) = self.to_rational() {
            return Ok(o.mul_rational(&q));
        }
        let ann = product_annihilator(&self.minpoly, &o.minpoly);
        let (a, b) = (self.clone(), o.clone());
        from_annihilator(&ann, self.is_real() && o.is_real(), cfg, move |w| Ok(&a.refine(w)? * &b.refine(w)?))
    }

    pub fn div(&self, o: &AlgebraicNumber) -> Result<AlgebraicNumber> {
        self.mul(&o.recip()?)
    }

    pub fn pow(&self, k: i32) -> Result<AlgebraicNumber> {
        if k < 0 {
            return self.recip()?.pow(-k);
        }
        if let Some(q) = self.to_rational() {
            return Ok(AlgebraicNumber::from_rational(num_traits::pow(q, k as usize)));
        }
        match k {
            0 => return Ok(AlgebraicNumber::from_int(1)),
            1 => return Ok(self.clone()),
            _ => {}
        }
        let ann = power_annihilator(&self.minpoly, k as u32);
        let a = self.clone();
        from_annihilator(&ann, self.is_real(), &Precision::default(), move |w| Ok(a.refine(w + 2 * k as u32)?.powi(k as u32)))
    }

    /// Mathematical equality (as opposed to `==`, which compares representations).
    pub fn eq_value(&self, o: &AlgebraicNumber) -> Result<bool> {
        if self.minpoly != o.minpoly {
            return Ok(false);
        }
        if let (Some(a), Some(b)) = (self.to_rational(), o.to_rational()) {
            return Ok(a == b);
        }
        if self.iso == o.iso {
            return Ok(true);
        }
        if self.is_real() != o.is_real() {
            return Ok(false);
        }
        // same minimal polynomial: equal iff the boxes share the same root
        let mut p = 32;
        loop {
            let a = self.refine(p)?;
            let b = o.refine(p)?;
            if !a.intersects(&b) {
                return Ok(false);
            }
            let sep = root_separation_ok(&self.minpoly, &a, &b, p)?;
            if sep {
                return Ok(true);
            }
            p *= 2;
        }
    }

    /// Whether this number is a root of `f` (exact, by divisibility of the minimal polynomial).
    pub fn is_root_of(&self, f: &IntPoly) -> bool {
        f.is_zero() || self.minpoly.divides(f)
    }
}

/// Both balls fit inside a single certified root disc of `p`.
fn root_separation_ok(p: &IntPoly, a: &BallComplex, b: &BallComplex, prec: u32) -> Result<bool> {
    let discs = isolate_roots(p, prec)?;
    let hull = |z: &BallComplex| -> Isolator {
        Isolator::rect(z.re.lo().to_rational(), z.re.hi().to_rational(), z.im.lo().to_rational(), z.im.hi().to_rational())
    };
    let (ha, hb) = (hull(a), hull(b));
    let ia: Vec<usize> = (0..discs.len()).filter(|&i| ha.meets_disc(&discs[i])).collect();
    let ib: Vec<usize> = (0..discs.len()).filter(|&i| hb.meets_disc(&discs[i])).collect();
    Ok(ia.len() == 1 && ia == ib)
}

fn count_in_rect(p: &IntPoly, iso: &Isolator, cfg: &Precision) -> Result<usize> {
    let mut w = 32;
    while w <= cfg.ceiling.min(super::roots::ROOT_PREC_CEILING) {
        let discs = isolate_roots(p, w)?;
        let straddle = discs.iter().any(|d| iso.meets_disc(d) && !iso.contains_disc(d));
        if !straddle {
            return Ok(discs.iter().filter(|d| iso.contains_disc(d)).count());
        }
        w *= 2;
    }
    Err(Error::IsolatorInvalid("root on isolator boundary".into()))
}

/// Isolating box for the root of squarefree `q` that `approx` encloses.
pub(crate) fn locate<F>(q: &IntPoly, real: bool, cfg: &Precision, approx: F) -> Result<Isolator>
where
    F: Fn(u32) -> Result<BallComplex>,
{
    let mut w = 64;
    while w <= cfg.ceiling {
        let z = match approx(w) {
            Ok(z) => z,
            Err(Error::Indeterminate(_)) | Err(Error::DivisionByZero) => {
                w *= 2;
                continue;
            }
            Err(e) => return Err(e),
        };
        if real {
            let lo = z.re.lo().to_rational();
            let hi = z.re.hi().to_rational();
            match count_closed(q, &lo, &hi) {
                1 => return Ok(Isolator::real(lo, hi)),
                0 => return Err(Error::IsolatorInvalid("enclosure holds no root".into())),
                _ => {}
            }
        } else {
            let bx = Isolator::rect(
                z.re.lo().to_rational(),
                z.re.hi().to_rational(),
                z.im.lo().to_rational(),
                z.im.hi().to_rational(),
            );
            let discs = isolate_roots(q, w)?;
            let hits: Vec<usize> = (0..discs.len()).filter(|&i| bx.meets_disc(&discs[i])).collect();
            if hits.is_empty() {
                return Err(Error::IsolatorInvalid("enclosure holds no root".into()));
            }
            if hits.len() == 1 {
                let d = &discs[hits[0]];
                let iso = Isolator::from_disc(d);
                let clear = discs
                    .iter()
                    .enumerate()
                    .all(|(i, o)| i == hits[0] || !iso.meets(&Isolator::from_disc(o)));
                if clear {
                    return Ok(iso);
                }
            }
        }
        w *= 2;
    }
    Err(Error::PrecisionExhausted(cfg.ceiling))
}

/// Minimal polynomial of the number enclosed by `approx`, from an annihilator.
fn from_annihilator<F>(ann: &IntPoly, real: bool, cfg: &Precision, approx: F) -> Result<AlgebraicNumber>
where
    F: Fn(u32) -> Result<BallComplex>,
{
    let sf = ann.squarefree();
    if sf.degree() > cfg.degree_cap {
        return Err(Error::DegreeCap(sf.degree()));
    }
    let iso = locate(&sf, real, cfg, approx)?;
    let tmp = AlgebraicNumber::raw(sf.clone(), iso.clone());
    let g = minimal_factor(&sf, &tmp, cfg)?;
    Ok(AlgebraicNumber::raw(g, iso))
}

/// Coefficient bound for any factor of degree `k` of `f`: `2^k ||f||_2`.
fn factor_bound(f: &IntPoly, k: usize) -> BigInt {
    let norm_sq: BigInt = f.coeffs().iter().map(|a| a * a).sum();
    (norm_sq.sqrt() + 1u32) << k
}

/// Decide which of the complementary factors `g`, `h` (with `g h` squarefree) vanishes at `x`.
fn vanishes_on_factor(g: &IntPoly, h: &IntPoly, x: &AlgebraicNumber, ceiling: u32) -> Result<bool> {
    let mut p = 64;
    while p <= ceiling {
        let z = x.refine(p)?;
        if !g.eval_complex(&z).contains_zero() {
            return Ok(false);
        }
        if !h.eval_complex(&z).contains_zero() {
            return Ok(true);
        }
        p *= 2;
    }
    Err(Error::PrecisionExhausted(ceiling))
}

/// Irreducible factor of squarefree `f` vanishing at `x`, found by integer relations on
/// the powers of `x`; lower degrees are excluded by the lattice certificate.
fn minimal_factor(f: &IntPoly, x: &AlgebraicNumber, cfg: &Precision) -> Result<IntPoly> {
    let n = f.degree();
    if n <= 1 {
        return Ok(f.primitive());
    }
    for k in 1..n {
        let bound = factor_bound(f, k);
        let mut w = 64 + (k as u32 + 1) * (bound.bits() as u32 + 16);
        loop {
            if w > cfg.ceiling {
                return Err(Error::PrecisionExhausted(cfg.ceiling));
            }
            let base = x.refine(w + 16 + 4 * k as u32)?;
            let mut vals = Vec::with_capacity(k + 1);
            let mut acc = BallComplex::one(base.prec());
            for _ in 0..=k {
                vals.push(acc.clone());
                acc = &acc * &base;
            }
            match find_relation(&vals, &bound, w) {
                RelationSearch::Found { coeffs, .. } => {
                    let g = IntPoly::new(coeffs).primitive();
                    if g.degree() >= 1 {
                        if let Some(h) = f.exact_div(&g) {
                            if vanishes_on_factor(&g, &h, x, cfg.ceiling)? {
                                return Ok(g);
                            }
                        }
                    }
                    w *= 2;
                }
                RelationSearch::Excluded { .. } => break,
                RelationSearch::Inconclusive { .. } => w *= 2,
            }
        }
    }
    Ok(f.primitive())
}

/// Integer square root helper used by literal parsing.
pub(crate) fn exact_isqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// `(a + b sqrt(D)) / c`.
pub fn quadratic(a: &BigInt, b: &BigInt, d: &BigInt, c: &BigInt) -> Result<AlgebraicNumber> {
    if c.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let cq = BigRational::from_integer(c.clone());
    if b.is_zero() || d.is_zero() {
        return Ok(AlgebraicNumber::from_rational(BigRational::from_integer(a.clone()) / cq));
    }
    if let Some(r) = exact_isqrt(d) {
        return Ok(AlgebraicNumber::from_rational(BigRational::from_integer(a + b * r) / cq));
    }
    // (c x - a)^2 = b^2 D
    let p = IntPoly::new(vec![a * a - b * b * d, -(a * c) * 2, c * c]).primitive();
    let real = d.is_positive();
    let (a, b, d, c) = (a.clone(), b.clone(), d.clone(), c.clone());
    let iso = locate(&p.squarefree(), real, &Precision::default(), move |w| {
        let sd = BallReal::from_int(d.abs(), w + 8).sqrt()?;
        let bs = &BallReal::from_int(b.clone(), w + 8) * &sd;
        let cb = BallReal::from_int(c.clone(), w + 8);
        let re = BallReal::from_int(a.clone(), w + 8).div(&cb)?;
        if real {
            Ok(BallComplex::from_real(&re + &bs.div(&cb)?))
        } else {
            Ok(BallComplex::new(re, bs.div(&cb)?))
        }
    })?;
    Ok(AlgebraicNumber::raw(p, iso))
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::literal::print_algebraic(self))
    }
}
