//! Resultants over `Z[z]` by fraction-free (Bareiss) elimination of the Sylvester matrix,
//! and the annihilating polynomials they give for sums, products and powers.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::poly::IntPoly;

/// A polynomial in `t` whose coefficients are polynomials in `z`, low-to-high in `t`.
pub type BiPoly = Vec<IntPoly>;

fn trim(mut p: BiPoly) -> BiPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

/// Embed a polynomial in `t` with constant coefficients.
pub fn constant_in_z(p: &IntPoly) -> BiPoly {
    p.coeffs().iter().map(|a| IntPoly::new(vec![a.clone()])).collect()
}

/// `Res_t(p, q)` as a polynomial in `z`.
pub fn resultant(p: &BiPoly, q: &BiPoly) -> IntPoly {
    let p = trim(p.clone());
    let q = trim(q.clone());
    if p.is_empty() || q.is_empty() {
        return IntPoly::zero();
    }
    let m = p.len() - 1;
    let n = q.len() - 1;
    if m == 0 && n == 0 {
        return IntPoly::new(vec![BigInt::one()]);
    }
    if m == 0 {
        return p[0].pow(n as u32);
    }
    if n == 0 {
        return q[0].pow(m as u32);
    }
    let size = m + n;
    let mut a = vec![vec![IntPoly::zero(); size]; size];
    // rows of p shifted n times, then q shifted m times; leading coefficient first
    for r in 0..n {
        for (j, c) in p.iter().rev().enumerate() {
            a[r][r + j] = c.clone();
        }
    }
    for r in 0..m {
        for (j, c) in q.iter().rev().enumerate() {
            a[n + r][r + j] = c.clone();
        }
    }
    bareiss_det(a)
}

/// Determinant of a square matrix over `Z[z]`.
pub fn bareiss_det(mut a: Vec<Vec<IntPoly>>) -> IntPoly {
    let n = a.len();
    if n == 0 {
        return IntPoly::new(vec![BigInt::one()]);
    }
    let mut sign = false;
    let mut prev = IntPoly::new(vec![BigInt::one()]);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !a[r][k].is_zero()) else {
                return IntPoly::zero();
            };
            a.swap(k, r);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = if prev.degree() == 0 && prev.coeff(0).is_one() {
                    num
                } else {
                    num.exact_quotient(&prev).expect("Bareiss division is exact")
                };
            }
            a[i][k] = IntPoly::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        d.neg()
    } else {
        d
    }
}

/// Binomial expansion of `(z - t)^i` as a polynomial in `t`.
fn z_minus_t_pow(i: usize) -> BiPoly {
    // coefficient of t^k: C(i,k) (-1)^k z^(i-k)
    let mut out = Vec::with_capacity(i + 1);
    let mut binom = BigInt::one();
    for k in 0..=i {
        let mut c = vec![BigInt::zero(); i - k + 1];
        c[i - k] = if k % 2 == 0 { binom.clone() } else { -binom.clone() };
        out.push(IntPoly::new(c));
        binom = binom * BigInt::from(i - k) / BigInt::from(k + 1);
    }
    out
}

fn bi_add_scaled(acc: &mut BiPoly, p: &BiPoly, k: &BigInt) {
    if acc.len() < p.len() {
        acc.resize(p.len(), IntPoly::zero());
    }
    for (a, c) in acc.iter_mut().zip(p) {
        *a = a.add(&c.scale(k));
    }
}

/// Annihilator of `x + y` given annihilators of `x` and `y`: `Res_t(p(t), q(z - t))`.
pub fn sum_annihilator(p: &IntPoly, q: &IntPoly) -> IntPoly {
    let mut qs: BiPoly = Vec::new();
    for (i, c) in q.coeffs().iter().enumerate() {
        if !c.is_zero() {
            bi_add_scaled(&mut qs, &z_minus_t_pow(i), c);
        }
    }
    resultant(&constant_in_z(p), &qs)
}

/// Annihilator of `x * y`: `Res_t(p(t), t^n q(z / t))`.
pub fn product_annihilator(p: &IntPoly, q: &IntPoly) -> IntPoly {
    let n = q.degree();
    let mut qs: BiPoly = vec![IntPoly::zero(); n + 1];
    for (i, c) in q.coeffs().iter().enumerate() {
        let mut zc = vec![BigInt::zero(); i + 1];
        zc[i] = c.clone();
        qs[n - i] = IntPoly::new(zc);
    }
    resultant(&constant_in_z(p), &qs)
}

/// Annihilator of `x^k`: `Res_t(p(t), z - t^k)`.
pub fn power_annihilator(p: &IntPoly, k: u32) -> IntPoly {
    let k = k as usize;
    let mut qs: BiPoly = vec![IntPoly::zero(); k + 1];
    qs[0] = IntPoly::x();
    qs[k] = qs[k].add(&IntPoly::from_i64s(&[-1]));
    resultant(&constant_in_z(p), &qs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn roots_of(p: &IntPoly, xs: &[i64]) -> bool {
        xs.iter().all(|&x| p.eval_int(&BigInt::from(x)).is_zero())
    }

    #[test]
    fn integer_resultant() {
        // Res(X - 2, X - 5) = -3 in this sign convention: prod (a_i - b_j) = (2 - 5)
        let p = constant_in_z(&IntPoly::from_i64s(&[-2, 1]));
        let q = constant_in_z(&IntPoly::from_i64s(&[-5, 1]));
        assert_eq!(resultant(&p, &q), IntPoly::from_i64s(&[-3]));
    }

    #[test]
    fn sum_of_square_roots() {
        // sqrt2 + sqrt3 has minimal polynomial X^4 - 10X^2 + 1
        let p = IntPoly::from_i64s(&[-2, 0, 1]);
        let q = IntPoly::from_i64s(&[-3, 0, 1]);
        assert_eq!(sum_annihilator(&p, &q).primitive(), IntPoly::from_i64s(&[1, 0, -10, 0, 1]));
    }

    #[test]
    fn products_and_powers() {
        let p = IntPoly::from_i64s(&[-2, 1]);
        let q = IntPoly::from_i64s(&[-3, 1]);
        assert!(roots_of(&product_annihilator(&p, &q), &[6]));
        assert!(roots_of(&sum_annihilator(&p, &q), &[5]));
        // sqrt2 squared is 2
        let r = power_annihilator(&IntPoly::from_i64s(&[-2, 0, 1]), 2).primitive();
        assert_eq!(r, IntPoly::from_i64s(&[-2, 1]).pow(2));
        // phi^2 = phi + 1 has minpoly X^2 - 3X + 1
        let s = power_annihilator(&IntPoly::from_i64s(&[-1, -1, 1]), 2).primitive();
        assert_eq!(s, IntPoly::from_i64s(&[1, -3, 1]));
    }
}
