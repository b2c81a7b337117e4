//! Codings of rotations, the Fibonacci word, linear combinations of codings and
//! subword complexity.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::lattice::{find_relation, RelationSearch};
use crate::kernel::literal::{parse_algebraic, print_algebraic};
use crate::kernel::{Affine, AlgebraicNumber, BallComplex, Expr, RealLike};

/// Finite word over a list of pairwise distinct exact values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word {
    alphabet: Vec<AlgebraicNumber>,
    symbols: Vec<u32>,
    pub origin_note: String,
}

#[derive(Serialize, Deserialize)]
struct WordFile {
    alphabet: Vec<String>,
    symbols: Vec<u32>,
}

impl Word {
    /// Word over `{0, 1}` from 0/1 bytes.
    pub fn binary(bits: &[u8], note: impl Into<String>) -> Word {
        Word {
            alphabet: vec![AlgebraicNumber::from_int(0), AlgebraicNumber::from_int(1)],
            symbols: bits.iter().map(|&b| b as u32).collect(),
            origin_note: note.into(),
        }
    }

    /// Word from an alphabet and symbol indices; distinctness of the alphabet is certified.
    pub fn new(alphabet: Vec<AlgebraicNumber>, symbols: Vec<u32>, note: impl Into<String>) -> Result<Word> {
        if let Some(s) = symbols.iter().find(|&&s| s as usize >= alphabet.len()) {
            return Err(Error::Validation(format!("symbol index {} outside alphabet of size {}", s, alphabet.len())));
        }
        for i in 0..alphabet.len() {
            for j in 0..i {
                if alphabet[i].eq_value(&alphabet[j])? {
                    return Err(Error::Validation(format!("alphabet entries {} and {} coincide", j, i)));
                }
            }
        }
        Ok(Word { alphabet, symbols, origin_note: note.into() })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn alphabet(&self) -> &[AlgebraicNumber] {
        &self.alphabet
    }

    pub fn value(&self, i: usize) -> &AlgebraicNumber {
        &self.alphabet[self.symbols[i] as usize]
    }

    pub fn prefix(&self, n: usize) -> Word {
        Word { alphabet: self.alphabet.clone(), symbols: self.symbols[..n.min(self.len())].to_vec(), origin_note: self.origin_note.clone() }
    }

    /// Whether the alphabet is exactly `[0, 1]`.
    pub fn is_binary(&self) -> bool {
        self.alphabet.len() == 2
            && self.alphabet[0].to_rational() == Some(BigRational::zero())
            && self.alphabet[1].to_rational() == Some(BigRational::one())
    }

    /// Digit string for binary words.
    pub fn to_bitstring(&self) -> Option<String> {
        self.is_binary().then(|| self.symbols.iter().map(|&s| if s == 0 { '0' } else { '1' }).collect())
    }

    /// File form: a 0/1 line for binary words, JSON otherwise.
    pub fn to_text(&self) -> String {
        match self.to_bitstring() {
            Some(s) => format!("{}\n", s),
            None => {
                let f = WordFile { alphabet: self.alphabet.iter().map(print_algebraic).collect(), symbols: self.symbols.clone() };
                format!("{}\n", serde_json::to_string(&f).expect("word serializes"))
            }
        }
    }

    pub fn parse_text(s: &str) -> Result<Word> {
        let t = s.trim();
        if t.starts_with('{') {
            let f: WordFile = serde_json::from_str(t)?;
            let alphabet = f.alphabet.iter().map(|a| parse_algebraic(a)).collect::<Result<Vec<_>>>()?;
            return Word::new(alphabet, f.symbols, "file");
        }
        let mut bits = Vec::with_capacity(t.len());
        for c in t.chars() {
            match c {
                '0' => bits.push(0),
                '1' => bits.push(1),
                c if c.is_whitespace() => {}
                c => return Err(Error::Parse(format!("unexpected character {:?} in binary word", c))),
            }
        }
        Ok(Word::binary(&bits, "file"))
    }

    /// Count of positions holding alphabet entry `sym`.
    pub fn count(&self, sym: u32) -> usize {
        self.symbols.iter().filter(|&&s| s == sym).count()
    }
}

/// Parameters of the coding `u_n = 1` iff `frac(x + n theta) < theta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodingSpec {
    pub theta: RealLike,
    pub x: RealLike,
    /// Index of the first emitted symbol (0 or 1).
    pub index_origin: u8,
}

impl CodingSpec {
    pub fn new(theta: RealLike, x: RealLike, index_origin: u8) -> Result<CodingSpec> {
        if index_origin > 1 {
            return Err(Error::Validation("index origin must be 0 or 1".into()));
        }
        if theta.sign()? <= 0 || theta.cmp_rational(&BigRational::one())?.is_ge() {
            return Err(Error::Validation(format!("theta must lie in (0,1), got {}", theta)));
        }
        if theta.as_rational().is_some() {
            return Err(Error::Validation("theta must be irrational".into()));
        }
        if x.sign()? < 0 || x.cmp_rational(&BigRational::one())?.is_ge() {
            return Err(Error::Validation(format!("x must lie in [0,1), got {}", x)));
        }
        Ok(CodingSpec { theta, x, index_origin })
    }

    /// Form over the generators `[x, theta]`.
    pub fn affine(&self) -> Affine {
        Affine::new(vec![self.x.clone(), self.theta.clone()])
    }
}

fn one_zero() -> [BigInt; 2] {
    [BigInt::one(), BigInt::zero()]
}

/// Symbols `u_n` for `n` in `start..start + len` (absolute indices).
pub fn coding_range(spec: &CodingSpec, start: i64, len: usize) -> Result<Vec<u8>> {
    let f = spec.affine();
    // u_n = floor(x + n theta) - floor(x + (n - 1) theta)
    let fl = f.floor_progression(&one_zero(), &[BigInt::zero(), BigInt::one()], &BigRational::zero(), start - 1, start + len as i64)?;
    Ok(fl.windows(2).map(|w| if w[1] > w[0] { 1 } else { 0 }).collect())
}

/// Position `j` holds `u_{j + origin}`.
pub fn theta_coding(spec: &CodingSpec, n: usize) -> Result<Word> {
    let bits = coding_range(spec, spec.index_origin as i64, n)?;
    Ok(Word::binary(&bits, format!("coding theta={} x={} origin={}", spec.theta, spec.x, spec.index_origin)))
}

/// Exact membership `frac(x + n theta) in [lo, hi)` for `lo`, `hi` of the form `c + k theta`.
pub fn frac_in(spec: &CodingSpec, n: i64, lo: (&BigRational, i64), hi: (&BigRational, i64)) -> Result<bool> {
    let f = spec.affine();
    let fl = f.floor(&[BigInt::one(), BigInt::from(n)], &BigRational::zero())?;
    // frac - lo = x + (n - k) theta - floor - c
    let s_lo = f.sign(&[BigInt::one(), BigInt::from(n - lo.1)], &(-(BigRational::from_integer(fl.clone())) - lo.0))?;
    let s_hi = f.sign(&[BigInt::one(), BigInt::from(n - hi.1)], &(-(BigRational::from_integer(fl)) - hi.0))?;
    Ok(s_lo >= 0 && s_hi < 0)
}

/// Prefix of length `n` of the limit of `f_0 = 0`, `f_1 = 01`, `f_k = f_{k-1} f_{k-2}`.
pub fn fibonacci_word(n: usize) -> Word {
    let mut a: Vec<u8> = vec![0];
    let mut b: Vec<u8> = vec![0, 1];
    while b.len() < n {
        let mut c = b.clone();
        c.extend_from_slice(&a);
        a = b;
        b = c;
    }
    let bits = if n <= 1 { &a[..n] } else { &b[..n] };
    Word::binary(bits, "fibonacci")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Complexity {
    pub n: usize,
    pub count: usize,
    /// The prefix has too few windows for `count` to reach `n + 1`.
    pub censored: bool,
    /// `count <= n` on an uncensored prefix.
    pub periodic_suspect: bool,
}

fn complexity_flags(len: usize, n: usize, count: usize) -> Complexity {
    let censored = len - n + 1 < n + 1;
    Complexity { n, count, censored, periodic_suspect: count <= n && !censored }
}

/// Number of distinct factors of length `n`.
pub fn subword_complexity(w: &Word, n: usize) -> Result<Complexity> {
    if n > w.len() {
        return Err(Error::WindowTooLong { n, len: w.len() });
    }
    let count = if n == 0 { 1 } else { w.symbols.windows(n).collect::<HashSet<_>>().len() };
    Ok(complexity_flags(w.len(), n, count))
}

/// Suffix array by prefix doubling.
fn suffix_array(s: &[u32]) -> Vec<usize> {
    let n = s.len();
    let mut sa: Vec<usize> = (0..n).collect();
    let mut rank: Vec<i64> = s.iter().map(|&c| c as i64).collect();
    let mut tmp = vec![0i64; n];
    let mut k = 1;
    if n < 2 {
        return sa;
    }
    loop {
        let key = |i: usize, rank: &[i64]| (rank[i], if i + k < n { rank[i + k] } else { -1 });
        sa.sort_by_key(|&i| key(i, &rank));
        tmp[sa[0]] = 0;
        for j in 1..n {
            tmp[sa[j]] = tmp[sa[j - 1]] + i64::from(key(sa[j - 1], &rank) < key(sa[j], &rank));
        }
        std::mem::swap(&mut rank, &mut tmp);
        // suffixes are distinct, so the ranks separate after at most log n rounds
        if rank[sa[n - 1]] as usize == n - 1 {
            break;
        }
        k *= 2;
    }
    sa
}

/// Kasai LCP: `lcp[i]` is the common prefix length of suffixes `sa[i-1]` and `sa[i]`.
fn lcp_array(s: &[u32], sa: &[usize]) -> Vec<usize> {
    let n = s.len();
    let mut rank = vec![0; n];
    for (i, &p) in sa.iter().enumerate() {
        rank[p] = i;
    }
    let mut lcp = vec![0; n];
    let mut h = 0;
    for i in 0..n {
        if rank[i] > 0 {
            let j = sa[rank[i] - 1];
            while i + h < n && j + h < n && s[i + h] == s[j + h] {
                h += 1;
            }
            lcp[rank[i]] = h;
            h = h.saturating_sub(1);
        } else {
            h = 0;
        }
    }
    lcp
}

/// Complexities for `n = 1..=n_max` from one suffix array.
pub fn complexity_profile(w: &Word, n_max: usize) -> Result<Vec<Complexity>> {
    if n_max > w.len() {
        return Err(Error::WindowTooLong { n: n_max, len: w.len() });
    }
    let sa = suffix_array(&w.symbols);
    let lcp = lcp_array(&w.symbols, &sa);
    let mut hist = vec![0usize; w.len() + 2];
    for &l in lcp.iter().skip(1) {
        hist[l.min(w.len() + 1)] += 1;
    }
    // at_least[n] = #{i : lcp_i >= n}
    let mut at_least = vec![0usize; w.len() + 3];
    for n in (0..=w.len() + 1).rev() {
        at_least[n] = at_least[n + 1] + hist[n];
    }
    Ok((1..=n_max).map(|n| complexity_flags(w.len(), n, w.len() - n + 1 - at_least[n])).collect())
}

/// Frequency of symbol `sym` as an exact fraction.
pub fn letter_frequency(w: &Word, sym: u32) -> Option<BigRational> {
    (!w.is_empty()).then(|| BigRational::new(BigInt::from(w.count(sym)), BigInt::from(w.len())))
}

/// Outcome of the search for `x_i - x_j` in `Z theta + Z`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status")]
pub enum Nondegeneracy {
    /// No `a theta + b` with `|a|, |b| <= bound` equals the difference.
    CheckedToBound { i: usize, j: usize, bound: u64 },
    Unverified { i: usize, j: usize, reason: String },
}

pub const DEFAULT_SEARCH_BOUND: u64 = 1_000_000;

/// Search `x_i - x_j = a theta + b` with integer `|a|, |b| <= bound`.
pub fn check_nondegenerate(specs: &[CodingSpec], i: usize, j: usize, bound: u64) -> Result<Nondegeneracy> {
    let (xi, xj, theta) = (&specs[i].x, &specs[j].x, &specs[i].theta);
    if !(xi.is_exact() && xj.is_exact() && theta.is_exact()) {
        return Ok(Nondegeneracy::Unverified { i, j, reason: "ball input".into() });
    }
    let form = Affine::new(vec![xi.clone(), xj.clone(), theta.clone()]);
    let b = BigInt::from(bound) + 2;
    let mut prec = 256;
    while prec <= 4096 {
        let d = form.eval(&[BigInt::one(), -BigInt::one(), BigInt::zero()], &BigRational::zero(), prec + 32)?;
        let t = form.balls(prec + 32)?[2].clone();
        let vals = [BallComplex::from(&d), BallComplex::from(&t), BallComplex::from(&crate::kernel::BallReal::one(prec))];
        match find_relation(&vals, &b, prec) {
            RelationSearch::Excluded { .. } => return Ok(Nondegeneracy::CheckedToBound { i, j, bound }),
            RelationSearch::Found { coeffs, .. } => {
                let g = coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
                let m: Vec<BigInt> = coeffs.iter().map(|c| c / &g).collect();
                let exact = form.sign(&[m[0].clone(), -m[0].clone(), m[1].clone()], &BigRational::from_integer(m[2].clone()))?;
                if exact == 0 {
                    // the relation lattice has rank one; x_i - x_j lies in Z theta + Z iff m_0 = +-1
                    if m[0].abs().is_one() {
                        let a = -&m[1] * &m[0];
                        let c = -&m[2] * &m[0];
                        return Err(Error::DegenerateDifference { i, j, relation: format!("x_{} - x_{} = {}*theta + {}", i, j, a, c) });
                    }
                    return Ok(Nondegeneracy::CheckedToBound { i, j, bound });
                }
            }
            RelationSearch::Inconclusive { .. } => {}
        }
        prec *= 2;
    }
    Ok(Nondegeneracy::Unverified { i, j, reason: "relation search inconclusive at 4096 bits".into() })
}

#[derive(Clone, Debug)]
pub struct Combination {
    pub word: Word,
    pub nondegeneracy: Vec<Nondegeneracy>,
}

fn same_theta(a: &RealLike, b: &RealLike) -> Result<bool> {
    match (a.to_algebraic(), b.to_algebraic()) {
        (Some(x), Some(y)) => x.eq_value(&y),
        (None, None) => Ok(a == b),
        _ => Ok(false),
    }
}

/// `u_n = c_0 + sum_i c_i u_n^(i)` over codings sharing one slope.
pub fn linear_combination(specs: &[CodingSpec], c: &[AlgebraicNumber], n: usize, search_bound: u64) -> Result<Combination> {
    if c.len() != specs.len() + 1 {
        return Err(Error::Validation(format!("need {} coefficients, got {}", specs.len() + 1, c.len())));
    }
    for s in specs.iter().skip(1) {
        if !same_theta(&specs[0].theta, &s.theta)? {
            return Err(Error::SharedThetaViolation);
        }
    }
    if specs.iter().any(|s| s.index_origin != specs.first().map_or(1, |f| f.index_origin)) {
        return Err(Error::Validation("codings must share one index origin".into()));
    }
    let mut nondeg = Vec::new();
    for i in 0..specs.len() {
        for j in 0..i {
            nondeg.push(check_nondegenerate(specs, i, j, search_bound)?);
        }
    }
    let words = specs.iter().map(|s| theta_coding(s, n)).collect::<Result<Vec<_>>>()?;
    let mut alphabet: Vec<AlgebraicNumber> = Vec::new();
    let mut pattern_index: std::collections::HashMap<Vec<u32>, u32> = std::collections::HashMap::new();
    let mut symbols = Vec::with_capacity(n);
    for pos in 0..n {
        let pat: Vec<u32> = words.iter().map(|w| w.symbols[pos]).collect();
        if let Some(&k) = pattern_index.get(&pat) {
            symbols.push(k);
            continue;
        }
        let mut v = c[0].clone();
        for (ci, &b) in c[1..].iter().zip(&pat) {
            if b == 1 {
                v = v.add(ci)?;
            }
        }
        let mut k = None;
        for (idx, a) in alphabet.iter().enumerate() {
            if a.eq_value(&v)? {
                k = Some(idx as u32);
                break;
            }
        }
        let k = k.unwrap_or_else(|| {
            alphabet.push(v);
            alphabet.len() as u32 - 1
        });
        pattern_index.insert(pat, k);
        symbols.push(k);
    }
    if alphabet.is_empty() {
        alphabet.push(c[0].clone());
    }
    let note = format!("linear combination of {} codings", specs.len());
    Ok(Combination { word: Word { alphabet, symbols, origin_note: note }, nondegeneracy: nondeg })
}

/// Exact test `a + b == c + d` over word values.
pub fn sums_equal(a: &AlgebraicNumber, b: &AlgebraicNumber, c: &AlgebraicNumber, d: &AlgebraicNumber) -> Result<bool> {
    let qs: Option<Vec<BigRational>> = [a, b, c, d].iter().map(|x| x.to_rational()).collect();
    if let Some(q) = qs {
        return Ok(&q[0] + &q[1] == &q[2] + &q[3]);
    }
    (Expr::from(a) + Expr::from(b) - Expr::from(c) - Expr::from(d)).is_zero()
}
