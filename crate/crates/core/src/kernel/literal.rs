//! Text literals for exact numbers.
//!
//! - `alg:c0,c1,...,cd@[lo,hi]` real root of `sum c_i X^i` in `[lo, hi]`
//! - `alg:c0,...,cd@[lo,hi]x[ilo,ihi]` root in a complex rectangle
//! - `rat:p/q`, or a bare integer, fraction or decimal
//! - `quad:(a+b*sqrt(D))/c`

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::algebraic::{quadratic, AlgebraicNumber, Isolator};
use super::poly::IntPoly;
use crate::error::{Error, Result};

fn perr(s: &str, what: &str) -> Error {
    Error::Parse(format!("{}: {:?}", what, s))
}

pub fn parse_int(s: &str) -> Result<BigInt> {
    let t = s.trim();
    let t = t.strip_prefix('+').unwrap_or(t);
    t.parse::<BigInt>().map_err(|_| perr(s, "bad integer"))
}

/// Integer, `p/q`, or finite decimal such as `-0.25`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let t = s.trim();
    if let Some((n, d)) = t.split_once('/') {
        let d = parse_int(d)?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {:?}", s)));
        }
        return Ok(BigRational::new(parse_int(n)?, d));
    }
    if let Some((ip, fp)) = t.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return Err(perr(s, "bad decimal"));
        }
        let neg = ip.trim_start().starts_with('-');
        let ip = if ip.is_empty() || ip == "-" || ip == "+" { "0" } else { ip };
        let whole = parse_int(ip)?.abs();
        let scale = num_traits::pow(BigInt::from(10), fp.len());
        let frac: BigInt = fp.parse().map_err(|_| perr(s, "bad decimal"))?;
        let v = BigRational::new(whole * &scale + frac, scale);
        return Ok(if neg { -v } else { v });
    }
    Ok(BigRational::from_integer(parse_int(t)?))
}

pub fn print_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn parse_interval(s: &str) -> Result<(BigRational, BigRational)> {
    let t = s.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or_else(|| perr(s, "expected [lo,hi]"))?;
    let (a, b) = inner.split_once(',').ok_or_else(|| perr(s, "expected [lo,hi]"))?;
    Ok((parse_rational(a)?, parse_rational(b)?))
}

fn parse_alg(body: &str) -> Result<AlgebraicNumber> {
    let (coeffs, boxes) = body.split_once('@').ok_or_else(|| perr(body, "missing @ isolator"))?;
    let c = coeffs.split(',').map(parse_int).collect::<Result<Vec<_>>>()?;
    let p = IntPoly::new(c);
    if p.degree() == 0 || p.is_zero() {
        return Err(Error::Parse(format!("constant polynomial in {:?}", body)));
    }
    let boxes = boxes.trim();
    let iso = match boxes.find("]x[") {
        Some(k) => {
            let (re, im) = (&boxes[..=k], &boxes[k + 2..]);
            let (a, b) = parse_interval(re)?;
            let (c, d) = parse_interval(im)?;
            Isolator::rect(a, b, c, d)
        }
        None => {
            let (a, b) = parse_interval(boxes)?;
            Isolator::real(a, b)
        }
    };
    AlgebraicNumber::new(&p, iso)
}

fn parse_quad(body: &str) -> Result<AlgebraicNumber> {
    let t: String = body.chars().filter(|c| !c.is_whitespace()).collect();
    let (num, den) = match t.strip_prefix('(') {
        Some(rest) => {
            let close = rest.rfind(')').ok_or_else(|| perr(body, "unbalanced parentheses"))?;
            let tail = &rest[close + 1..];
            let den = if tail.is_empty() {
                BigInt::one()
            } else {
                parse_int(tail.strip_prefix('/').ok_or_else(|| perr(body, "expected /c"))?)?
            };
            (rest[..close].to_string(), den)
        }
        None => (t.clone(), BigInt::one()),
    };
    let k = num.find("sqrt(").ok_or_else(|| perr(body, "missing sqrt(D)"))?;
    let after = &num[k + 5..];
    let close = after.find(')').ok_or_else(|| perr(body, "unbalanced sqrt"))?;
    if !after[close + 1..].is_empty() {
        return Err(perr(body, "trailing text after sqrt"));
    }
    let d = parse_int(&after[..close])?;
    let pre = num[..k].strip_suffix('*').unwrap_or(&num[..k]);
    let split = pre.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').map(|(i, _)| i).last();
    let (a, b) = match split {
        Some(i) => (parse_int(&pre[..i])?, &pre[i..]),
        None => (BigInt::zero(), pre),
    };
    let b = match b {
        "" | "+" => BigInt::one(),
        "-" => -BigInt::one(),
        other => parse_int(other)?,
    };
    quadratic(&a, &b, &d, &den)
}

/// Parse any exact-number literal into an algebraic number.
pub fn parse_algebraic(s: &str) -> Result<AlgebraicNumber> {
    let t = s.trim();
    if let Some(body) = t.strip_prefix("alg:") {
        parse_alg(body)
    } else if let Some(body) = t.strip_prefix("quad:") {
        parse_quad(body)
    } else if let Some(body) = t.strip_prefix("rat:") {
        Ok(AlgebraicNumber::from_rational(parse_rational(body)?))
    } else {
        parse_rational(t).map(AlgebraicNumber::from_rational).map_err(|_| perr(s, "unrecognized literal"))
    }
}

/// Canonical literal; `parse_algebraic(print_algebraic(x)) == x`.
pub fn print_algebraic(x: &AlgebraicNumber) -> String {
    let iso = x.isolator();
    if let Some(q) = x.to_rational() {
        if iso.is_real() && iso.re_lo == q && iso.re_hi == q {
            return format!("rat:{}", print_rational(&q));
        }
    }
    let coeffs: Vec<String> = x.minpoly().coeffs().iter().map(|c| c.to_string()).collect();
    let mut s = format!("alg:{}@[{},{}]", coeffs.join(","), print_rational(&iso.re_lo), print_rational(&iso.re_hi));
    if !iso.is_real() {
        s.push_str(&format!("x[{},{}]", print_rational(&iso.im_lo), print_rational(&iso.im_hi)));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-0.25").unwrap(), BigRational::new((-1).into(), 4.into()));
        assert_eq!(parse_rational("-.5").unwrap(), BigRational::new((-1).into(), 2.into()));
        assert_eq!(parse_rational("6/4").unwrap(), BigRational::new(3.into(), 2.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn round_trips() {
        for lit in [
            "alg:-1,-1,1@[1,2]",
            "alg:-2,0,1@[-3/2,-1]",
            "rat:3/2",
            "alg:2,-2,1@[1/2,3/2]x[1/2,3/2]",
            "alg:-3,2@[0,5]",
        ] {
            let x = parse_algebraic(lit).unwrap();
            let y = parse_algebraic(&print_algebraic(&x)).unwrap();
            assert_eq!(x, y, "{}", lit);
        }
    }

    #[test]
    fn quadratic_forms() {
        let t = parse_algebraic("quad:(3-sqrt(5))/2").unwrap();
        assert_eq!(t.minpoly(), &IntPoly::from_i64s(&[1, -3, 1]));
        let b = t.refine_real(60).unwrap().to_f64();
        assert!((b - 0.381_966_011_250_105_1).abs() < 1e-15);
        let p = parse_algebraic("quad:(1+sqrt(5))/2").unwrap();
        assert_eq!(p.minpoly(), &IntPoly::from_i64s(&[-1, -1, 1]));
        let s = parse_algebraic("quad:(0+1*sqrt(2))/1").unwrap();
        assert_eq!(s.minpoly(), &IntPoly::from_i64s(&[-2, 0, 1]));
        let i = parse_algebraic("quad:1+sqrt(-1)").unwrap();
        assert!(!i.is_real());
        assert_eq!(i.minpoly(), &IntPoly::from_i64s(&[2, -2, 1]));
        assert_eq!(parse_algebraic("quad:(2+3*sqrt(4))/4").unwrap().to_rational(), Some(BigRational::from_integer(2.into())));
    }

    #[test]
    fn malformed() {
        for bad in ["alg:1,2", "alg:1@[0,1]", "quad:(1+2)/3", "alg:a,b@[0,1]", "foo"] {
            assert!(matches!(parse_algebraic(bad), Err(Error::Parse(_))), "{}", bad);
        }
    }
}
