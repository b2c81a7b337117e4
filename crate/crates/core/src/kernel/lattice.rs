//! Exact integral LLL reduction and integer-relation search with an exclusion certificate.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ball::{BallComplex, BallReal};
use super::dyadic::{Dyadic, Round};

/// A reduced basis together with its Gram-Schmidt data.
#[derive(Clone, Debug)]
pub struct Reduced {
    pub basis: Vec<Vec<BigInt>>,
    /// `d[i]` is the Gram determinant of the first `i + 1` vectors.
    pub d: Vec<BigInt>,
}

impl Reduced {
    /// `|b*_i|^2` for each basis vector.
    pub fn gs_norms_sq(&self) -> Vec<BigRational> {
        let mut prev = BigInt::one();
        self.d
            .iter()
            .map(|di| {
                let v = BigRational::new(di.clone(), prev.clone());
                prev = di.clone();
                v
            })
            .collect()
    }

    /// Every nonzero lattice vector has squared norm at least this value.
    pub fn min_gs_norm_sq(&self) -> BigRational {
        self.gs_norms_sq().into_iter().min().unwrap_or_else(BigRational::zero)
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Round `a / b` to the nearest integer, `b > 0`.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    ((a << 1u32) + b).div_floor(&(b << 1u32))
}

/// Integral LLL with `delta = 3/4`; rows must be linearly independent.
pub fn lll(mut b: Vec<Vec<BigInt>>) -> Reduced {
    let n = b.len();
    if n == 0 {
        return Reduced { basis: b, d: Vec::new() };
    }
    // d[0] is the empty determinant 1; d[i + 1] belongs to vector i
    let mut d = vec![BigInt::zero(); n + 1];
    d[0] = BigInt::one();
    let mut lam = vec![vec![BigInt::zero(); n]; n];
    d[1] = dot(&b[0], &b[0]);
    let mut k = 1usize;
    let mut kmax = 0usize;

    let red = |b: &mut Vec<Vec<BigInt>>, lam: &mut Vec<Vec<BigInt>>, d: &[BigInt], k: usize, l: usize| {
        let two_l = &lam[k][l] << 1u32;
        if two_l.abs() > d[l + 1] {
            let q = round_div(&lam[k][l], &d[l + 1]);
            let bl = b[l].clone();
            for (x, y) in b[k].iter_mut().zip(&bl) {
                *x -= &q * y;
            }
            lam[k][l] -= &q * &d[l + 1];
            for i in 0..l {
                let t = &q * &lam[l][i];
                lam[k][i] -= t;
            }
        }
    };

    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = dot(&b[k], &b[j]);
                for i in 0..j {
                    u = (&d[i + 1] * &u - &lam[k][i] * &lam[j][i]) / &d[i];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    assert!(!u.is_zero(), "lll: dependent vectors");
                    d[k + 1] = u;
                }
            }
        }
        red(&mut b, &mut lam, &d, k, k - 1);
        // Lovasz: 4 d_k d_{k-2} < 3 d_{k-1}^2 - 4 lam^2 triggers a swap
        let lhs = (&d[k + 1] * &d[k - 1]) << 2u32;
        let rhs = &d[k] * &d[k] * 3 - ((&lam[k][k - 1] * &lam[k][k - 1]) << 2u32);
        if lhs < rhs {
            b.swap(k, k - 1);
            for j in 0..k - 1 {
                let t = lam[k][j].clone();
                lam[k][j] = lam[k - 1][j].clone();
                lam[k - 1][j] = t;
            }
            let l = lam[k][k - 1].clone();
            let bb = (&d[k - 1] * &d[k + 1] + &l * &l) / &d[k];
            for i in k + 1..=kmax {
                let t = lam[i][k].clone();
                lam[i][k] = (&d[k + 1] * &lam[i][k - 1] - &l * &t) / &d[k];
                lam[i][k - 1] = (&bb * &t + &l * &lam[i][k]) / &d[k + 1];
            }
            d[k] = bb;
            if k > 1 {
                k -= 1;
            }
        } else {
            for l in (0..k.saturating_sub(1)).rev() {
                red(&mut b, &mut lam, &d, k, l);
            }
            k += 1;
        }
    }
    d.remove(0);
    Reduced { basis: b, d }
}

/// Outcome of an integer-relation search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelationSearch {
    /// Nonzero vector within the bound whose combination has residual below `2^(-prec/2)`.
    Found { coeffs: Vec<BigInt>, residual: BallReal },
    /// No relation exists with `max |m_i| <= bound`; carries the certificate.
    Excluded { min_norm_sq: BigRational },
    /// Neither detected nor excluded at this precision.
    Inconclusive { min_norm_sq: BigRational },
}

/// Normalize so the first nonzero coefficient is positive.
pub fn normalize_relation(m: &mut [BigInt]) {
    if let Some(first) = m.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in m.iter_mut() {
                *x = -x.clone();
            }
        }
    }
}

/// Residual `|sum m_i v_i|` as a ball.
pub fn relation_residual(values: &[BallComplex], m: &[BigInt]) -> BallReal {
    let p = values.iter().map(|v| v.prec()).max().unwrap_or(64);
    let mut acc = BallComplex::zero(p);
    for (v, c) in values.iter().zip(m) {
        acc = &acc + &v.scale(&BallReal::from_int(c.clone(), p));
    }
    acc.abs()
}

/// Search for an integer relation among `values` with `max |m_i| <= bound`, using
/// the lattice `[e_i | round(2^prec v_i)]`.
pub fn find_relation(values: &[BallComplex], bound: &BigInt, prec: u32) -> RelationSearch {
    let n = values.len();
    let complex = values.iter().any(|v| !v.is_real());
    let scale = prec as i64;
    let mut rows = Vec::with_capacity(n);
    let mut max_rad = Dyadic::zero();
    for (i, v) in values.iter().enumerate() {
        let mut row = vec![BigInt::zero(); n];
        row[i] = BigInt::one();
        row.push(v.re.mid().mul_pow2(scale).quantize(0, Round::Nearest).floor());
        if complex {
            row.push(v.im.mid().mul_pow2(scale).quantize(0, Round::Nearest).floor());
        }
        max_rad = Dyadic::max(&max_rad, &Dyadic::max(v.re.rad(), v.im.rad()));
        rows.push(row);
    }
    let red = lll(rows);
    let min_norm_sq = red.min_gs_norm_sq();
    let eps = Dyadic::pow2(-(prec as i64) / 2);
    for row in &red.basis {
        let m = &row[..n];
        if m.iter().all(|x| x.is_zero()) || m.iter().any(|x| x.abs() > *bound) {
            continue;
        }
        let res = relation_residual(values, m);
        if res.hi() <= eps {
            let mut coeffs = m.to_vec();
            normalize_relation(&mut coeffs);
            return RelationSearch::Found { coeffs, residual: res };
        }
    }
    // a relation within the bound maps to a vector of squared norm at most
    // n B^2 + cols (n B (1/2 + 2^prec rad))^2
    let nb = BigRational::from_integer(bound * BigInt::from(n));
    let err = BigRational::new(BigInt::one(), BigInt::from(2)) + max_rad.mul_pow2(scale).to_rational();
    let tail = &nb * &err;
    let cols = if complex { 2 } else { 1 };
    let limit = BigRational::from_integer(bound * bound * BigInt::from(n))
        + &tail * &tail * BigRational::from_integer(BigInt::from(cols));
    if min_norm_sq > limit {
        RelationSearch::Excluded { min_norm_sq }
    } else {
        RelationSearch::Inconclusive { min_norm_sq }
    }
}
