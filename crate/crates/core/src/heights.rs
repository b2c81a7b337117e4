//! Weil heights of algebraic numbers, integer vectors and sparse integer polynomials,
//! and the gap-splitting test for sparse polynomials vanishing at an algebraic number.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::ball::BallRecord;
use crate::kernel::literal::parse_int;
use crate::kernel::roots::isolate_roots;
use crate::kernel::{AlgebraicNumber, BallReal, IntPoly};

/// Polynomial stored as `(exponent, coefficient)` terms, exponents strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePolynomial {
    terms: Vec<(u64, BigInt)>,
}

impl SparsePolynomial {
    /// Sorts, merges equal exponents and drops zero coefficients.
    pub fn new(mut terms: Vec<(u64, BigInt)>) -> Result<Self> {
        terms.sort_by_key(|t| t.0);
        let mut out: Vec<(u64, BigInt)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == e => last.1 += c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        if out.is_empty() {
            return Err(Error::InvalidInput("polynomial has no nonzero terms".into()));
        }
        Ok(SparsePolynomial { terms: out })
    }

    pub fn from_pairs(pairs: &[(u64, i64)]) -> Result<Self> {
        SparsePolynomial::new(pairs.iter().map(|&(e, c)| (e, BigInt::from(c))).collect())
    }

    pub fn from_dense(p: &IntPoly) -> Result<Self> {
        SparsePolynomial::new(p.coeffs().iter().enumerate().map(|(i, c)| (i as u64, c.clone())).collect())
    }

    /// Parse `poly:e1:c1,e2:c2,...`.
    pub fn parse(s: &str) -> Result<Self> {
        let body = s.trim().strip_prefix("poly:").ok_or_else(|| Error::Parse(format!("expected poly: literal, got {:?}", s)))?;
        let mut terms = Vec::new();
        for item in body.split(',') {
            let (e, c) = item.split_once(':').ok_or_else(|| Error::Parse(format!("bad term {:?}", item)))?;
            let e: u64 = e.trim().parse().map_err(|_| Error::Parse(format!("bad exponent {:?}", e)))?;
            terms.push((e, parse_int(c)?));
        }
        SparsePolynomial::new(terms).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn terms(&self) -> &[(u64, BigInt)] {
        &self.terms
    }

    pub fn degree(&self) -> u64 {
        self.terms.last().map(|t| t.0).unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.degree() == 0
    }

    pub fn to_dense(&self) -> IntPoly {
        let mut c = vec![BigInt::zero(); self.degree() as usize + 1];
        for (e, a) in &self.terms {
            c[*e as usize] = a.clone();
        }
        IntPoly::new(c)
    }

    /// Terms with exponent in `range`.
    pub fn part(&self, keep: impl Fn(u64) -> bool) -> Option<SparsePolynomial> {
        let t: Vec<_> = self.terms.iter().filter(|t| keep(t.0)).cloned().collect();
        if t.is_empty() {
            None
        } else {
            Some(SparsePolynomial { terms: t })
        }
    }
}

impl std::fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(|(e, c)| format!("{}:{}", e, c)).collect();
        write!(f, "poly:{}", parts.join(","))
    }
}

/// Projective height of an integer vector: max absolute entry after removing the gcd.
pub fn height_int_vector(v: &[BigInt]) -> Result<BigInt> {
    if v.len() < 2 {
        return Err(Error::InvalidInput("vector needs at least two coordinates".into()));
    }
    let g = v.iter().fold(BigInt::zero(), |g, a| g.gcd(a));
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(v.iter().map(|a| (a / &g).abs()).max().expect("nonempty"))
}

/// Height of the coefficient vector of a nonconstant polynomial.
pub fn poly_height(f: &SparsePolynomial) -> Result<BigInt> {
    if f.is_constant() {
        return Err(Error::ConstantPolynomial);
    }
    // zero coefficients affect neither the gcd nor the maximum
    let mut v: Vec<BigInt> = f.terms.iter().map(|t| t.1.clone()).collect();
    if v.len() < 2 {
        v.push(BigInt::zero());
    }
    height_int_vector(&v)
}

/// Mahler measure `|lc| prod max(1, |r|)` as a ball.
pub fn mahler_measure(p: &IntPoly, prec: u32) -> Result<BallReal> {
    let p = p.squarefree();
    let bp = prec + 16;
    let mut m = BallReal::from_int(p.lc().abs(), bp);
    for d in isolate_roots(&p, prec + 8)? {
        let r = d.ball(bp).abs();
        m = &m * &r.max_with(&crate::kernel::Dyadic::one());
    }
    Ok(m)
}

/// Absolute Weil height `M(minpoly)^(1/d)`; exact for rationals.
pub fn weil_height_alg(x: &AlgebraicNumber, prec: u32) -> Result<BallReal> {
    if let Some(q) = x.to_rational() {
        return Ok(BallReal::from_int(q.numer().abs().max(q.denom().clone()), prec));
    }
    let d = x.degree() as u32;
    mahler_measure(x.minpoly(), prec + 2 * d)?.nth_root(d)
}

/// n-th cyclotomic polynomial.
pub fn cyclotomic(n: u64) -> IntPoly {
    let mut c = vec![BigInt::zero(); n as usize + 1];
    c[0] = -BigInt::one();
    c[n as usize] = BigInt::one();
    let mut p = IntPoly::new(c);
    for m in 1..n {
        if n.is_multiple_of(m) {
            p = p.exact_quotient(&cyclotomic(m)).expect("cyclotomic divides X^n - 1");
        }
    }
    p
}

fn euler_phi(mut n: u64) -> u64 {
    let mut r = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            r -= r / p;
        }
        p += 1;
    }
    if n > 1 {
        r -= r / n;
    }
    r
}

/// Whether `x` is a root of unity, by comparison with the cyclotomic polynomials of its degree.
pub fn is_root_of_unity(x: &AlgebraicNumber) -> bool {
    let m = x.minpoly();
    if !m.lc().is_one() || !m.coeff(0).abs().is_one() {
        return false;
    }
    let d = m.degree() as u64;
    // phi(n) >= sqrt(n / 2), so phi(n) = d forces n <= 2 d^2
    (1..=2 * d * d + 2).filter(|&n| euler_phi(n) == d).any(|n| &cyclotomic(n) == m)
}

fn rat_poly_rem(a: &[BigRational], m: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let c = r.last().expect("nonempty").clone() / m.last().expect("nonempty");
        let shift = r.len() - 1 - dm;
        if !c.is_zero() {
            for (j, mj) in m.iter().enumerate() {
                r[shift + j] -= &c * mj;
            }
        }
        r.pop();
    }
    while r.last().is_some_and(|x| x.is_zero()) {
        r.pop();
    }
    r
}

fn rat_poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    r
}

/// `f mod m` over Q for sparse `f`, by square-and-multiply on each monomial.
pub fn sparse_rem(f: &SparsePolynomial, m: &IntPoly) -> Vec<BigRational> {
    let mq: Vec<BigRational> = m.coeffs().iter().map(|c| BigRational::from_integer(c.clone())).collect();
    let x = rat_poly_rem(&[BigRational::zero(), BigRational::one()], &mq);
    let mut acc: Vec<BigRational> = Vec::new();
    for (e, c) in &f.terms {
        let mut pow = rat_poly_rem(&[BigRational::one()], &mq);
        let mut base = x.clone();
        let mut k = *e;
        while k > 0 {
            if k & 1 == 1 {
                pow = rat_poly_rem(&rat_poly_mul(&pow, &base), &mq);
            }
            base = rat_poly_rem(&rat_poly_mul(&base, &base), &mq);
            k >>= 1;
        }
        let cq = BigRational::from_integer(c.clone());
        if acc.len() < pow.len() {
            acc.resize(pow.len(), BigRational::zero());
        }
        for (a, p) in acc.iter_mut().zip(pow) {
            *a += &cq * p;
        }
    }
    while acc.last().is_some_and(|x| x.is_zero()) {
        acc.pop();
    }
    acc
}

/// Exact membership of `x` among the roots of `f`.
pub fn is_root_of_sparse(x: &AlgebraicNumber, f: &SparsePolynomial) -> bool {
    sparse_rem(f, x.minpoly()).is_empty()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapReport {
    /// `None` when the certified ratio enclosure contains the gap `d1 - d0`.
    pub gap_condition_holds: Option<bool>,
    pub beta_is_root_of_f: bool,
    pub beta_common_root_of_parts: bool,
    pub terms: usize,
    pub k: usize,
    pub gap: u64,
    pub height_f: String,
    pub height_beta: BallRecord,
    pub threshold: Option<BallRecord>,
    pub convention: String,
}

/// Check the gap condition `d1 - d0 > log(k H(f)) / log H(beta)` and root membership
/// of `beta` in `f` and in its low part `g` (degrees `<= d0`) and high part `h` (`>= d1`).
pub fn gap_split_check(f: &SparsePolynomial, d0: u64, d1: u64, beta: &AlgebraicNumber, prec: u32) -> Result<GapReport> {
    if d1 <= d0 {
        return Err(Error::InvalidInput(format!("need d0 < d1, got {} and {}", d0, d1)));
    }
    if let Some(t) = f.terms.iter().find(|t| t.0 > d0 && t.0 < d1) {
        return Err(Error::BadSplit(t.0));
    }
    if is_root_of_unity(beta) {
        return Err(Error::RootOfUnity);
    }
    if beta.is_zero() {
        return Err(Error::HeightOne);
    }
    let terms = f.terms.len();
    let k = terms - 1;
    let hf = if f.is_constant() { f.terms[0].1.abs() } else { poly_height(f)? };
    let gap = d1 - d0;
    let g = f.part(|e| e <= d0);
    let h = f.part(|e| e >= d1);
    let in_part = |p: &Option<SparsePolynomial>| p.as_ref().is_none_or(|p| is_root_of_sparse(beta, p));
    let root_of_f = is_root_of_sparse(beta, f);
    let common = in_part(&g) && in_part(&h);
    let mut p = prec.max(64);
    let (holds, hb, threshold) = loop {
        let hb = weil_height_alg(beta, p)?;
        if k == 0 {
            // a single term: the left side is log 0, the condition holds vacuously
            break (Some(true), hb, None);
        }
        let ln_hb = hb.ln()?;
        if ln_hb.sign() != Some(1) {
            if p >= 4 * prec.max(64) {
                return Err(Error::HeightOne);
            }
            p *= 2;
            continue;
        }
        let num = BallReal::from_int(hf.clone() * BigInt::from(k), p).ln()?;
        let ratio = num.div(&ln_hb)?;
        let g = BallReal::from_int(gap, p);
        let verdict = if ratio.hi() < g.lo() {
            Some(true)
        } else if ratio.lo() > g.hi() {
            Some(false)
        } else {
            None
        };
        if verdict.is_some() || p >= 8 * prec.max(64) {
            break (verdict, hb, Some(ratio));
        }
        p *= 2;
    };
    Ok(GapReport {
        gap_condition_holds: holds,
        beta_is_root_of_f: root_of_f,
        beta_common_root_of_parts: common,
        terms,
        k,
        gap,
        height_f: hf.to_string(),
        height_beta: hb.to_record(),
        threshold: threshold.map(|t| t.to_record()),
        convention: "absolute (degree-normalized) Weil height; natural logarithms".into(),
    })
}

/// Convenience: f64 view of a height for diagnostics.
pub fn height_f64(b: &BallReal) -> f64 {
    b.to_f64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::literal::parse_algebraic;

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn vector_heights() {
        assert_eq!(height_int_vector(&bi(&[1, 1])).unwrap(), BigInt::from(1));
        assert_eq!(height_int_vector(&bi(&[-3, 2, -3, 2])).unwrap(), BigInt::from(3));
        assert_eq!(height_int_vector(&bi(&[4, 6])).unwrap(), BigInt::from(3));
        assert_eq!(height_int_vector(&bi(&[0, 0])), Err(Error::ZeroVector));
    }

    #[test]
    fn polynomial_heights() {
        let f = SparsePolynomial::from_pairs(&[(0, -1), (1, -1), (2, 1)]).unwrap();
        assert_eq!(poly_height(&f).unwrap(), BigInt::from(1));
        let g = SparsePolynomial::from_pairs(&[(1001, 2), (1000, -3), (1, 2), (0, -3)]).unwrap();
        assert_eq!(poly_height(&g).unwrap(), BigInt::from(3));
        let h = SparsePolynomial::parse("poly:2:10,0:5").unwrap();
        assert_eq!(poly_height(&h).unwrap(), BigInt::from(2));
        assert_eq!(poly_height(&SparsePolynomial::from_pairs(&[(0, 7)]).unwrap()), Err(Error::ConstantPolynomial));
    }

    #[test]
    fn algebraic_heights() {
        let two = weil_height_alg(&AlgebraicNumber::from_int(2), 64).unwrap();
        assert!(two.is_exact() && two.mid() == &crate::kernel::Dyadic::from_int(2));
        let phi = parse_algebraic("quad:(1+sqrt(5))/2").unwrap();
        let h = weil_height_alg(&phi, 128).unwrap();
        assert!((h.to_f64() - 1.272_019_649_514_069).abs() < 1e-14);
    }

    #[test]
    fn cyclotomic_detection() {
        assert_eq!(cyclotomic(6), IntPoly::from_i64s(&[1, -1, 1]));
        assert_eq!(cyclotomic(12), IntPoly::from_i64s(&[1, 0, -1, 0, 1]));
        let w = parse_algebraic("alg:1,-1,1@[0,1]x[1/2,1]").unwrap();
        assert!(is_root_of_unity(&w));
        assert!(!is_root_of_unity(&parse_algebraic("quad:(1+sqrt(5))/2").unwrap()));
        assert!(is_root_of_unity(&AlgebraicNumber::from_int(-1)));
    }

    #[test]
    fn sparse_membership() {
        let beta = AlgebraicNumber::from_rational(BigRational::new(3.into(), 2.into()));
        let f = SparsePolynomial::from_pairs(&[(0, -3), (1, 2), (1000, -3), (1001, 2)]).unwrap();
        assert!(is_root_of_sparse(&beta, &f));
        let phi = parse_algebraic("quad:(1+sqrt(5))/2").unwrap();
        // phi^10 = 55 phi + 34
        let g = SparsePolynomial::from_pairs(&[(10, 1), (1, -55), (0, -34)]).unwrap();
        assert!(is_root_of_sparse(&phi, &g));
        assert!(!is_root_of_sparse(&phi, &SparsePolynomial::from_pairs(&[(10, 1), (0, -34)]).unwrap()));
    }
}
