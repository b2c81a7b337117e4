//! Sturmian numbers `sum u_n beta^(-n)`, the partial sums and pair coefficients of the
//! shift identity, the key inequality, and integer-relation probes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::ball::BallRecord;
use crate::kernel::lattice::{find_relation, RelationSearch};
use crate::kernel::{AlgebraicNumber, BallComplex, BallReal, Dyadic, Expr, Precision, Round};
use crate::serial;
use crate::words::{fibonacci_word, linear_combination, CodingSpec, Word, DEFAULT_SEARCH_BOUND};

/// How digits are produced; every generator is prefix-stable.
#[derive(Clone, Debug)]
pub enum DigitGenerator {
    Fixed(Word),
    Fibonacci,
    Combination { specs: Vec<CodingSpec>, coeffs: Vec<AlgebraicNumber> },
    Constant(AlgebraicNumber),
}

#[derive(Clone, Debug)]
pub struct DigitSequence {
    pub generator: DigitGenerator,
}

impl DigitSequence {
    pub fn new(generator: DigitGenerator) -> Self {
        DigitSequence { generator }
    }

    pub fn fixed(w: Word) -> Self {
        DigitSequence::new(DigitGenerator::Fixed(w))
    }

    /// Whether `prefix(n)` exists for every `n`.
    pub fn is_infinite(&self) -> bool {
        !matches!(self.generator, DigitGenerator::Fixed(_))
    }

    /// Digits `u_0 .. u_{n-1}`.
    pub fn prefix(&self, n: usize) -> Result<Word> {
        match &self.generator {
            DigitGenerator::Fixed(w) => {
                if n > w.len() {
                    return Err(Error::PrefixTooShort { have: w.len(), need: n });
                }
                Ok(w.prefix(n))
            }
            DigitGenerator::Fibonacci => Ok(fibonacci_word(n)),
            DigitGenerator::Combination { specs, coeffs } => Ok(linear_combination(specs, coeffs, n, DEFAULT_SEARCH_BOUND)?.word),
            DigitGenerator::Constant(c) => Word::new(vec![c.clone()], vec![0; n], "constant"),
        }
    }

    /// Upper bound on `|u_n|` over all digits.
    pub fn value_bound(&self, prec: u32) -> Result<Dyadic> {
        match &self.generator {
            DigitGenerator::Fixed(w) => max_abs(w.alphabet(), prec),
            DigitGenerator::Fibonacci => Ok(Dyadic::one()),
            DigitGenerator::Combination { coeffs, .. } => {
                let mut a = Dyadic::zero();
                for c in coeffs {
                    a = &a + &c.refine(prec)?.abs_hi();
                }
                Ok(a)
            }
            DigitGenerator::Constant(c) => Ok(c.refine(prec)?.abs_hi()),
        }
    }

    /// Drop the first digit.
    pub fn shifted(&self, len: usize) -> Result<DigitSequence> {
        let w = self.prefix(len + 1)?;
        let syms = w.symbols()[1..].to_vec();
        Ok(DigitSequence::fixed(Word::new(w.alphabet().to_vec(), syms, format!("shift of {}", w.origin_note))?))
    }
}

/// An algebraic base with certified `|beta| >= modulus_lower > 1`.
#[derive(Clone, Debug)]
pub struct Base {
    pub beta: AlgebraicNumber,
    pub modulus_lower: Dyadic,
}

impl Base {
    pub fn new(beta: AlgebraicNumber) -> Result<Base> {
        let mut prec = 64;
        while prec <= 4096 {
            let m = beta.refine(prec)?.abs();
            if m.lo() > Dyadic::one() {
                return Ok(Base { beta, modulus_lower: m.lo() });
            }
            if m.hi() <= Dyadic::one() {
                break;
            }
            prec *= 2;
        }
        Err(Error::Validation("base must satisfy |beta| > 1".into()))
    }

    pub fn ball(&self, prec: u32) -> Result<BallComplex> {
        self.beta.refine(prec)
    }
}

fn max_abs(alphabet: &[AlgebraicNumber], prec: u32) -> Result<Dyadic> {
    let mut a = Dyadic::zero();
    for v in alphabet {
        a = Dyadic::max(&a, &v.refine(prec)?.abs_hi());
    }
    Ok(a)
}

/// Terms needed so that `A m^-(N+1) / (1 - 1/m) <= 2^-target` for `m = modulus_lower`.
fn terms_needed(a_max: &Dyadic, m: &Dyadic, target: u32) -> usize {
    let lm = m.to_f64().log2();
    let extra = a_max.to_f64().max(1.0).log2() - (1.0 - 1.0 / m.to_f64()).log2();
    ((target as f64 + extra) / lm).ceil().max(0.0) as usize + 2
}

/// Rigorous bound `A m^-(N+1) / (1 - 1/m)` on the tail after index `N`.
fn tail_bound(a_max: &Dyadic, m: &Dyadic, n: usize, prec: u32) -> Result<Dyadic> {
    let mb = BallReal::exact(m.clone(), prec);
    let q = mb.recip()?;
    let t = &BallReal::exact(a_max.clone(), prec) * &q.powi(n as u32 + 1);
    let d = (&BallReal::one(prec) - &q).recip()?;
    Ok((&t * &d).hi())
}

/// Enclosure of `sum_{n >= 0} u_n beta^(-n)`; a fixed word is a finite digit string.
pub fn sturmian_number(seq: &DigitSequence, base: &Base, prec: u32) -> Result<BallComplex> {
    let wp = prec + 32;
    let a_max = seq.value_bound(wp)?;
    let n_terms = terms_needed(&a_max, &base.modulus_lower, prec + 4);
    let (digits, with_tail) = match &seq.generator {
        DigitGenerator::Fixed(w) if w.len() <= n_terms => (w.clone(), false),
        _ => (seq.prefix(n_terms)?, true),
    };
    let wp = wp + (usize::BITS - digits.len().leading_zeros());
    let gamma = base.ball(wp)?.recip()?;
    let vals = digits.alphabet().iter().map(|v| v.refine(wp)).collect::<Result<Vec<_>>>()?;
    let mut acc = BallComplex::zero(wp);
    for &s in digits.symbols().iter().rev() {
        acc = &(&acc * &gamma) + &vals[s as usize];
    }
    if with_tail && !a_max.is_zero() {
        acc = acc.add_error(&tail_bound(&a_max, &base.modulus_lower, digits.len() - 1, wp)?);
    }
    Ok(acc)
}

/// Exact value or enclosure.
#[derive(Clone, Debug)]
pub enum Value {
    Exact(AlgebraicNumber),
    Ball(BallComplex),
}

impl Value {
    pub fn ball(&self, prec: u32) -> Result<BallComplex> {
        match self {
            Value::Exact(a) => a.refine(prec),
            Value::Ball(b) => Ok(b.clone()),
        }
    }

    pub fn to_literal(&self) -> Option<String> {
        match self {
            Value::Exact(a) => Some(crate::kernel::literal::print_algebraic(a)),
            Value::Ball(_) => None,
        }
    }
}

fn rationals(w: &Word) -> Option<Vec<BigRational>> {
    w.alphabet().iter().map(|a| a.to_rational()).collect()
}

/// `alpha_r = sum_{j=0}^{r} u_j beta^(r-j)`.
pub fn partial_alpha(w: &Word, base: &Base, r: usize, prec: u32) -> Result<Value> {
    if r >= w.len() {
        return Err(Error::PrefixTooShort { have: w.len(), need: r + 1 });
    }
    if let (Some(vals), Some(b)) = (rationals(w), base.beta.to_rational()) {
        let mut acc = BigRational::zero();
        for &s in &w.symbols()[..=r] {
            acc = acc * &b + &vals[s as usize];
        }
        return Ok(Value::Exact(AlgebraicNumber::from_rational(acc)));
    }
    let wp = prec + 16 + 2 * (usize::BITS - r.leading_zeros());
    let b = base.ball(wp)?;
    let vals = w.alphabet().iter().map(|v| v.refine(wp)).collect::<Result<Vec<_>>>()?;
    let mut acc = BallComplex::zero(wp);
    for &s in &w.symbols()[..=r] {
        acc = &(&acc * &b) + &vals[s as usize];
    }
    Ok(Value::Ball(acc))
}

#[derive(Clone, Debug)]
pub struct CCoefficient {
    pub leader: usize,
    pub value: Value,
    pub nonzero: bool,
}

/// `c_j = (u_{i+r} - u_i) + (u_{i+r+1} - u_{i+1}) beta^(-1)` for each leader `i`.
pub fn c_coefficients(w: &Word, r: usize, leaders: &[usize], base: &Base) -> Result<Vec<CCoefficient>> {
    let mut out = Vec::with_capacity(leaders.len());
    for &i in leaders {
        if i + r + 1 >= w.len() {
            return Err(Error::IndexOutOfRange(i));
        }
        let (a0, a1, b0, b1) = (w.value(i), w.value(i + 1), w.value(i + r), w.value(i + r + 1));
        let exact = match ([a0, a1, b0, b1].iter().map(|x| x.to_rational()).collect::<Option<Vec<_>>>(), base.beta.to_rational()) {
            (Some(q), Some(beta)) => Some((&q[2] - &q[0]) + (&q[3] - &q[1]) / beta),
            _ => None,
        };
        let (value, nonzero) = match exact {
            Some(q) => (Value::Exact(AlgebraicNumber::from_rational(q.clone())), !q.is_zero()),
            None => {
                let e = (Expr::from(b0) - Expr::from(a0)) + (Expr::from(b1) - Expr::from(a1)) / Expr::from(&base.beta);
                let nz = !e.is_zero()?;
                (Value::Ball(e.eval(256)?), nz)
            }
        };
        out.push(CCoefficient { leader: i, value, nonzero });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KeyInequality {
    pub r: usize,
    pub s: usize,
    pub lhs: BallRecord,
    pub rhs: BallRecord,
    pub holds: Option<bool>,
    pub bits: u32,
    pub c_nonzero: Vec<bool>,
}

/// `|beta^r alpha - alpha - (alpha_r - u_r) - sum_j c_j beta^(-i_j)|` against `|beta|^(-s)`.
pub fn check_key_inequality(seq: &DigitSequence, base: &Base, r: usize, s: usize, leaders: &[usize], prec: u32) -> Result<KeyInequality> {
    let cfg = Precision::default();
    let need = r + s + 2;
    let w = seq.prefix(need)?;
    let cs = c_coefficients(&w, r, leaders, base)?;
    let lm = base.modulus_lower.to_f64().log2();
    let mut wp = prec.max(((s + r) as f64 * lm.max(1.0)).ceil() as u32 + 64);
    loop {
        let alpha = sturmian_number(seq, base, wp)?;
        let b = base.ball(wp)?;
        let br = b.powi(r as u32);
        let ar = partial_alpha(&w, base, r, wp)?.ball(wp)?;
        let ur = w.value(r).refine(wp)?;
        let gamma = b.recip()?;
        let mut v = &(&(&br * &alpha) - &alpha) - &(&ar - &ur);
        for c in &cs {
            let term = &c.value.ball(wp)? * &gamma.powi(c.leader as u32);
            v = &v - &term;
        }
        let lhs = v.abs();
        let rhs = b.abs().powi(s as u32).recip()?;
        let holds = if lhs.hi() < rhs.lo() {
            Some(true)
        } else if lhs.lo() > rhs.hi() {
            Some(false)
        } else {
            None
        };
        if holds.is_some() || wp >= cfg.ceiling.min(1 << 14) {
            return Ok(KeyInequality {
                r,
                s,
                lhs: lhs.to_record(),
                rhs: rhs.to_record(),
                holds,
                bits: wp,
                c_nonzero: cs.iter().map(|c| c.nonzero).collect(),
            });
        }
        wp *= 2;
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum RelationOutcome {
    Relation {
        #[serde(with = "serial::big_vec")]
        coeffs: Vec<BigInt>,
        residual: BallRecord,
    },
    /// No relation with coefficients below the bound was found at this precision. With
    /// `certified` the lattice bound excludes one; otherwise the search was inconclusive.
    NoneBelowBound { certificate_norm: String, certified: bool },
}

fn check_radii(values: &[BallComplex], prec: u32) -> Result<()> {
    if values.len() < 2 {
        return Err(Error::InvalidInput("need at least two values".into()));
    }
    let lim = Dyadic::pow2(-(prec as i64));
    if values.iter().any(|v| v.re.rad() > &lim || v.im.rad() > &lim) {
        return Err(Error::PrecisionTooLow);
    }
    Ok(())
}

fn norm_string(min_norm_sq: &BigRational) -> String {
    let d = Dyadic::from_rational(min_norm_sq, 64, Round::Floor).sqrt(64, Round::Floor);
    let e = d.to_f64();
    if e.is_finite() {
        format!("{:e}", e)
    } else {
        format!("2^{}", d.top_bit().unwrap_or(0))
    }
}

/// Integer relation `sum m_i v_i = 0` with `max |m_i| <= bound`, residual at most `2^(-prec/2)`.
pub fn integer_relation(values: &[BallComplex], bound: &BigInt, prec: u32) -> Result<RelationOutcome> {
    check_radii(values, prec)?;
    Ok(match find_relation(values, bound, prec) {
        RelationSearch::Found { coeffs, residual } => RelationOutcome::Relation { coeffs, residual: residual.to_record() },
        RelationSearch::Excluded { min_norm_sq } => RelationOutcome::NoneBelowBound { certificate_norm: norm_string(&min_norm_sq), certified: true },
        RelationSearch::Inconclusive { min_norm_sq } => RelationOutcome::NoneBelowBound { certificate_norm: norm_string(&min_norm_sq), certified: false },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum BaseRelationOutcome {
    /// `coeffs[i][k]` is the coefficient of `beta^k` multiplying value `i`.
    Relation { coeffs: Vec<Vec<String>>, residual: BallRecord, degree_bound: usize },
    NoneBelowBound { certificate_norm: String, certified: bool, degree_bound: usize },
}

/// Relation `sum_i (sum_{k<t} a_{ik} beta^k) v_i = 0` with `|a_ik| <= bound`; `t` is capped at `deg beta`.
pub fn relation_over_base(values: &[BallComplex], base: &Base, t: usize, bound: &BigInt, prec: u32) -> Result<BaseRelationOutcome> {
    check_radii(values, prec)?;
    let t = t.clamp(1, base.beta.degree());
    let b = base.ball(prec + 32)?;
    let mut flat = Vec::with_capacity(values.len() * t);
    for v in values {
        let mut p = v.clone();
        for _ in 0..t {
            flat.push(p.clone());
            p = &p * &b;
        }
    }
    let flat_prec = flat.iter().map(|v| v.re.rad().max(v.im.rad()).clone()).max().map_or(prec, |r| {
        r.top_bit().map_or(prec, |e| (-e - 1).clamp(16, prec as i64) as u32)
    });
    Ok(match find_relation(&flat, bound, flat_prec) {
        RelationSearch::Found { coeffs, residual } => BaseRelationOutcome::Relation {
            coeffs: coeffs.chunks(t).map(|c| c.iter().map(|x| x.to_string()).collect()).collect(),
            residual: residual.to_record(),
            degree_bound: t,
        },
        RelationSearch::Excluded { min_norm_sq } => {
            BaseRelationOutcome::NoneBelowBound { certificate_norm: norm_string(&min_norm_sq), certified: true, degree_bound: t }
        }
        RelationSearch::Inconclusive { min_norm_sq } => {
            BaseRelationOutcome::NoneBelowBound { certificate_norm: norm_string(&min_norm_sq), certified: false, degree_bound: t }
        }
    })
}

/// Small integer conversion for word lengths.
pub fn usize_of(x: &BigInt) -> Result<usize> {
    x.to_usize().filter(|_| !x.is_negative()).ok_or_else(|| Error::InvalidInput(format!("{} is not a valid length", x)))
}
