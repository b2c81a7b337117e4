//! Dense univariate polynomials with integer coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ball::{BallComplex, BallReal};

/// Coefficients low-to-high degree; no trailing zeros (the zero polynomial is empty).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    c: Vec<BigInt>,
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let m = a.abs();
            match i {
                0 => write!(f, "{}", m)?,
                _ => {
                    if !m.is_one() {
                        write!(f, "{}*", m)?;
                    }
                    if i == 1 {
                        write!(f, "X")?;
                    } else {
                        write!(f, "X^{}", i)?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl IntPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        IntPoly { c }
    }

    pub fn from_i64s(c: &[i64]) -> Self {
        IntPoly::new(c.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { c: Vec::new() }
    }

    /// `X`.
    pub fn x() -> Self {
        IntPoly::from_i64s(&[0, 1])
    }

    /// `den * X - num`, the primitive annihilator of a rational.
    pub fn linear_for(q: &BigRational) -> Self {
        IntPoly::new(vec![-q.numer().clone(), q.denom().clone()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.c.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lc(&self) -> BigInt {
        self.c.last().cloned().unwrap_or_default()
    }

    pub fn content(&self) -> BigInt {
        self.c.iter().fold(BigInt::zero(), |g, a| g.gcd(a))
    }

    /// Divide by the content and make the leading coefficient positive.
    pub fn primitive(&self) -> IntPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        IntPoly::new(self.c.iter().map(|a| a / &g).collect())
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly::new(self.c.iter().map(|a| -a).collect())
    }

    pub fn add(&self, o: &IntPoly) -> IntPoly {
        let n = self.c.len().max(o.c.len());
        IntPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &IntPoly) -> IntPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return IntPoly::zero();
        }
        let mut r = vec![BigInt::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                r[i + j] += a * b;
            }
        }
        IntPoly::new(r)
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        IntPoly::new(self.c.iter().map(|a| a * k).collect())
    }

    pub fn pow(&self, n: u32) -> IntPoly {
        let mut acc = IntPoly::from_i64s(&[1]);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(self.c.iter().enumerate().skip(1).map(|(i, a)| a * BigInt::from(i)).collect())
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.c.iter().rev().fold(BigInt::zero(), |acc, a| acc * x + a)
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        // homogenized Horner: sum a_i n^i d^(deg-i), divided by d^deg
        let n = x.numer();
        let d = x.denom();
        let mut acc = BigInt::zero();
        let mut dpow = BigInt::one();
        for a in self.c.iter().rev() {
            acc = acc * n + a * &dpow;
            dpow *= d;
        }
        // acc = sum a_i n^i d^(deg - i); dpow = d^(deg + 1)
        BigRational::new(acc, dpow / d)
    }

    pub fn sign_at(&self, x: &BigRational) -> i32 {
        let v = self.eval_rational(x);
        if v.is_zero() {
            0
        } else if v.is_positive() {
            1
        } else {
            -1
        }
    }

    pub fn eval_ball(&self, x: &BallReal) -> BallReal {
        let p = x.prec();
        self.c.iter().rev().fold(BallReal::zero(p), |acc, a| &(&acc * x) + &BallReal::from_int(a.clone(), p))
    }

    pub fn eval_complex(&self, z: &BallComplex) -> BallComplex {
        let p = z.prec();
        self.c.iter().rev().fold(BallComplex::zero(p), |acc, a| {
            &(&acc * z) + &BallComplex::from_real(BallReal::from_int(a.clone(), p))
        })
    }

    /// `p(X + a)`.
    pub fn taylor_shift(&self, a: &BigInt) -> IntPoly {
        let mut c = self.c.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = &c[j + 1] * a;
                c[j] += t;
            }
        }
        IntPoly::new(c)
    }

    /// `X^deg * p(1/X)`.
    pub fn reverse(&self) -> IntPoly {
        let mut c = self.c.clone();
        c.reverse();
        IntPoly::new(c)
    }

    /// `p(-X)`.
    pub fn negate_var(&self) -> IntPoly {
        IntPoly::new(
            self.c.iter().enumerate().map(|(i, a)| if i % 2 == 1 { -a } else { a.clone() }).collect(),
        )
    }

    /// Annihilator of `q * x` when `self` annihilates `x`: `num^d p(den X / num)`, `q = num/den != 0`.
    pub fn scale_root(&self, q: &BigRational) -> IntPoly {
        let (a, b) = (q.numer(), q.denom());
        let d = self.degree();
        IntPoly::new(
            self.c
                .iter()
                .enumerate()
                .map(|(i, c)| c * num_traits::pow(b.clone(), i) * num_traits::pow(a.clone(), d - i))
                .collect(),
        )
    }

    /// Annihilator of `x + q` when `self` annihilates `x`.
    pub fn shift_root(&self, q: &BigRational) -> IntPoly {
        let (a, b) = (q.numer(), q.denom());
        let d = self.degree();
        // den^d p(Y / den) has roots den x; shift by num, then scale back by 1/den
        let scaled = IntPoly::new(
            self.c.iter().enumerate().map(|(i, c)| c * num_traits::pow(b.clone(), d - i)).collect(),
        );
        let g = scaled.taylor_shift(&-a);
        g.scale_root(&BigRational::new(BigInt::one(), b.clone())).primitive()
    }

    /// Remainder and quotient over Q; `None` if `d` is zero.
    pub fn div_rem_rational(&self, d: &IntPoly) -> Option<(Vec<BigRational>, Vec<BigRational>)> {
        if d.is_zero() {
            return None;
        }
        let mut r: Vec<BigRational> = self.c.iter().map(|a| BigRational::from_integer(a.clone())).collect();
        let dd = d.degree();
        let lc = BigRational::from_integer(d.lc());
        if self.c.len() < d.c.len() {
            return Some((Vec::new(), r));
        }
        let mut q = vec![BigRational::zero(); self.c.len() - dd];
        for i in (0..q.len()).rev() {
            let coef = &r[i + dd] / &lc;
            if !coef.is_zero() {
                for (j, b) in d.c.iter().enumerate() {
                    r[i + j] -= &coef * BigRational::from_integer(b.clone());
                }
            }
            q[i] = coef;
        }
        while r.last().is_some_and(|x| x.is_zero()) {
            r.pop();
        }
        Some((q, r))
    }

    /// Exact quotient over Z (after clearing content), if `d` divides `self` over Q.
    pub fn exact_div(&self, d: &IntPoly) -> Option<IntPoly> {
        let (q, r) = self.div_rem_rational(d)?;
        if !r.is_empty() {
            return None;
        }
        Some(rational_to_primitive(&q))
    }

    /// Quotient over Z when `d` divides `self` exactly with integral quotient.
    pub fn exact_quotient(&self, d: &IntPoly) -> Option<IntPoly> {
        let (q, r) = self.div_rem_rational(d)?;
        if !r.is_empty() || q.iter().any(|c| !c.is_integer()) {
            return None;
        }
        Some(IntPoly::new(q.into_iter().map(|c| c.to_integer()).collect()))
    }

    pub fn divides(&self, f: &IntPoly) -> bool {
        f.div_rem_rational(self).is_some_and(|(_, r)| r.is_empty())
    }

    /// Primitive pseudo-remainder sequence gcd; result primitive with positive lc.
    pub fn gcd(&self, o: &IntPoly) -> IntPoly {
        let mut a = self.primitive();
        let mut b = o.primitive();
        if a.degree() < b.degree() || a.is_zero() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let (_, r) = a.div_rem_rational(&b).expect("nonzero divisor");
            let r = rational_to_primitive(&r);
            a = b;
            b = r;
        }
        a.primitive()
    }

    pub fn squarefree(&self) -> IntPoly {
        let g = self.gcd(&self.derivative());
        if g.degree() == 0 {
            return self.primitive();
        }
        self.exact_div(&g).expect("gcd divides").primitive()
    }

    /// Remove factors of X.
    pub fn strip_zero_roots(&self) -> (IntPoly, usize) {
        let k = self.c.iter().take_while(|a| a.is_zero()).count();
        (IntPoly::new(self.c[k..].to_vec()), k)
    }

    /// Number of distinct real roots in the half-open interval `(lo, hi]`.
    pub fn count_real_roots(&self, lo: &BigRational, hi: &BigRational) -> usize {
        let seq = sturm_sequence(&self.squarefree());
        let va = sign_variations(&seq, lo);
        let vb = sign_variations(&seq, hi);
        va.saturating_sub(vb)
    }

    /// Lower bound on the modulus of any nonzero root: `|a_k| / (|a_k| + max |a_i|)`
    /// where `a_k` is the lowest nonzero coefficient.
    pub fn nonzero_root_lower_bound(&self) -> BigRational {
        let (p, _) = self.strip_zero_roots();
        let a0 = p.coeff(0).abs();
        let m = p.c.iter().skip(1).map(|a| a.abs()).max().unwrap_or_default();
        BigRational::new(a0.clone(), a0 + m)
    }

    /// Cauchy bound: every root has modulus below `1 + max |a_i / a_d|`.
    pub fn root_bound(&self) -> BigRational {
        let lc = self.lc().abs();
        let m = self.c.iter().take(self.degree()).map(|a| a.abs()).max().unwrap_or_default();
        BigRational::new(lc.clone() + m, lc)
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.c.iter().map(|a| a.abs()).max().unwrap_or_default()
    }
}

/// Clear denominators and content of a rational coefficient vector.
pub fn rational_to_primitive(q: &[BigRational]) -> IntPoly {
    let l = q.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    IntPoly::new(q.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect()).primitive()
}

fn sturm_sequence(p: &IntPoly) -> Vec<Vec<BigRational>> {
    let to_q = |p: &IntPoly| p.c.iter().map(|a| BigRational::from_integer(a.clone())).collect::<Vec<_>>();
    let mut seq = vec![to_q(p), to_q(&p.derivative())];
    loop {
        let n = seq.len();
        let b = &seq[n - 1];
        if b.is_empty() {
            seq.pop();
            break;
        }
        let r = rat_rem(&seq[n - 2], b);
        if r.is_empty() {
            break;
        }
        seq.push(r.into_iter().map(|x| -x).collect());
    }
    seq
}

fn rat_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let coef = r.last().unwrap() / b.last().unwrap();
        let shift = r.len() - 1 - db;
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] -= &coef * bj;
        }
        r.pop();
        while r.last().is_some_and(|x| x.is_zero()) {
            r.pop();
        }
    }
    r
}

fn eval_q(p: &[BigRational], x: &BigRational) -> BigRational {
    p.iter().rev().fold(BigRational::zero(), |acc, a| acc * x + a)
}

fn sign_variations(seq: &[Vec<BigRational>], x: &BigRational) -> usize {
    let mut last = 0i32;
    let mut v = 0;
    for p in seq {
        let s = eval_q(p, x);
        let s = if s.is_zero() { 0 } else if s.is_positive() { 1 } else { -1 };
        if s != 0 {
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn display_and_eval() {
        let p = IntPoly::from_i64s(&[-1, -1, 1]);
        assert_eq!(p.to_string(), "X^2 - X - 1");
        assert_eq!(p.eval_rational(&q(3, 2)), q(-1, 4));
        assert_eq!(p.eval_int(&BigInt::from(2)), BigInt::from(1));
    }

    #[test]
    fn gcd_and_squarefree() {
        let a = IntPoly::from_i64s(&[-1, 0, 1]); // (X-1)(X+1)
        let b = IntPoly::from_i64s(&[1, -2, 1]); // (X-1)^2
        assert_eq!(a.gcd(&b), IntPoly::from_i64s(&[-1, 1]));
        assert_eq!(b.squarefree(), IntPoly::from_i64s(&[-1, 1]));
    }

    #[test]
    fn sturm_counts() {
        let p = IntPoly::from_i64s(&[-2, 0, 1]); // roots +-sqrt2
        assert_eq!(p.count_real_roots(&q(0, 1), &q(2, 1)), 1);
        assert_eq!(p.count_real_roots(&q(-2, 1), &q(2, 1)), 2);
        assert_eq!(p.count_real_roots(&q(2, 1), &q(3, 1)), 0);
    }

    #[test]
    fn root_transforms() {
        // phi root of X^2 - X - 1; phi - 1 should be root of X^2 + X - 1
        let p = IntPoly::from_i64s(&[-1, -1, 1]);
        assert_eq!(p.shift_root(&q(-1, 1)), IntPoly::from_i64s(&[-1, 1, 1]));
        // 2*phi root of X^2 - 2X - 4
        assert_eq!(p.scale_root(&q(2, 1)).primitive(), IntPoly::from_i64s(&[-4, -2, 1]));
        // 1/phi root of -X^2 - X + 1 -> primitive X^2 + X - 1
        assert_eq!(p.reverse().primitive(), IntPoly::from_i64s(&[-1, 1, 1]));
        // phi + 1/2: (2x-1)^2 - (2x - 1) - 4 = 4x^2 - 8x - 1 ... check root
        let s = p.shift_root(&q(1, 2));
        assert_eq!(s, IntPoly::from_i64s(&[-1, -8, 4]));
    }

    #[test]
    fn taylor_shift_matches_eval() {
        let p = IntPoly::from_i64s(&[3, -5, 0, 2]);
        let s = p.taylor_shift(&BigInt::from(4));
        for x in -3..4 {
            let x = BigInt::from(x);
            assert_eq!(s.eval_int(&x), p.eval_int(&(&x + 4)));
        }
    }
}
