//! Finite-prefix verification of the stuttering conditions: mismatch sets between a word
//! and its shift, their pair structure, pair sums, and classification of each mismatch
//! by the rotation windows that produce it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::confrac::{dist_to_int, positive_side_denominators};
use crate::error::{Error, Result};
use crate::kernel::ball::BallRecord;
use crate::kernel::literal::print_algebraic;
use crate::kernel::{AlgebraicNumber, BallReal, RealLike};
use crate::serial;
use crate::words::{frac_in, linear_combination, sums_equal, CodingSpec, Nondegeneracy, Word, DEFAULT_SEARCH_BOUND};

/// `{ m in [0, s] : u_m != u_{m+r} }`.
pub fn mismatch_set(w: &Word, r: usize, s: usize) -> Result<Vec<usize>> {
    if r == 0 {
        return Err(Error::InvalidInput("shift r must be positive".into()));
    }
    if r + s >= w.len() {
        return Err(Error::PrefixTooShort { have: w.len(), need: r + s + 1 });
    }
    let u = w.symbols();
    Ok((0..=s).filter(|&m| u[m] != u[m + r]).collect())
}

/// Greatest `s` with at most `budget` mismatches in `[0, s]`, and whether the prefix end stopped it.
pub fn max_window(w: &Word, r: usize, budget: usize) -> Result<(usize, bool)> {
    if r == 0 {
        return Err(Error::InvalidInput("shift r must be positive".into()));
    }
    if r >= w.len() {
        return Err(Error::PrefixTooShort { have: w.len(), need: r + 1 });
    }
    let u = w.symbols();
    let mut count = 0;
    for m in 0..w.len() - r {
        if u[m] != u[m + r] {
            count += 1;
            if count > budget {
                return if m == 0 { Err(Error::NoWindow) } else { Ok((m - 1, false)) };
            }
        }
    }
    Ok((w.len() - r - 1, true))
}

/// Leaders `i` of a decomposition of `delta` into blocks `{i, i+1}`.
pub fn pair_structure(delta: &[usize]) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(delta.len() / 2);
    let mut k = 0;
    while k < delta.len() {
        if k + 1 < delta.len() && delta[k + 1] == delta[k] + 1 {
            out.push(delta[k]);
            k += 2;
        } else {
            return Err(Error::NotPaired(delta[k]));
        }
    }
    Ok(out)
}

/// `u_i + u_{i+1} == u_{i+r} + u_{i+r+1}` for each leader.
pub fn check_s4(w: &Word, r: usize, leaders: &[usize]) -> Result<Vec<bool>> {
    leaders
        .iter()
        .map(|&i| {
            if i + r + 1 >= w.len() {
                return Err(Error::IndexOutOfRange(i));
            }
            sums_equal(w.value(i), w.value(i + 1), w.value(i + r), w.value(i + r + 1))
        })
        .collect()
}

/// Which rotation window produced a mismatch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Condition {
    /// `frac(x + m theta)` in `[1 - ||r theta||, 1)`.
    #[serde(rename = "i")]
    I,
    /// `frac(x + m theta)` in `[theta - ||r theta||, theta)`.
    #[serde(rename = "ii")]
    II,
    /// Negative-side shift: `[0, ||r theta||)`.
    #[serde(rename = "i-")]
    INeg,
    /// Negative-side shift: `[theta, theta + ||r theta||)`.
    #[serde(rename = "ii-")]
    IINeg,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub m: usize,
    pub ell: Option<usize>,
    pub condition: Option<Condition>,
    /// Number of codings whose windows contain the point; more than one is a uniqueness warning.
    pub matches: usize,
}

impl Classification {
    pub fn unexplained(&self) -> bool {
        self.condition.is_none()
    }
}

/// Window endpoint `c + k theta`, as `(c, k)`.
type Bound<'a> = (&'a BigRational, i64);

/// Classify positions by the windows of each coding; positions are word indices.
pub fn classify_mismatches(specs: &[CodingSpec], r: &BigInt, delta: &[usize]) -> Result<Vec<Classification>> {
    let first = specs.first().ok_or_else(|| Error::InvalidInput("no codings given".into()))?;
    let d = dist_to_int(r, &first.theta, 128)?;
    let p = BigRational::from_integer(d.nearest.clone());
    let rr = r.to_i64().ok_or_else(|| Error::InvalidInput("shift too large".into()))?;
    let sign = crate::kernel::Affine::new(vec![first.theta.clone()]).sign(std::slice::from_ref(r), &-p.clone())?;
    if sign == 0 {
        return Err(Error::InvalidInput("r theta is an integer".into()));
    }
    let one = BigRational::one();
    let zero = BigRational::zero();
    let p1 = &p + &one;
    let mut out = Vec::with_capacity(delta.len());
    for &m in delta {
        let mut hits: Vec<(usize, Condition)> = Vec::new();
        for (ell, spec) in specs.iter().enumerate() {
            let n = m as i64 + spec.index_origin as i64;
            let windows: [(Condition, Bound, Bound); 2] = if sign > 0 {
                [(Condition::I, (&p1, -rr), (&one, 0)), (Condition::II, (&p, 1 - rr), (&zero, 1))]
            } else {
                [(Condition::INeg, (&zero, 0), (&p, -rr)), (Condition::IINeg, (&zero, 1), (&p, 1 - rr))]
            };
            for (cond, lo, hi) in windows {
                if frac_in(spec, n, lo, hi)? {
                    hits.push((ell, cond));
                }
            }
        }
        out.push(Classification { m, ell: hits.first().map(|h| h.0), condition: hits.first().map(|h| h.1), matches: hits.len() });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct S3Diagnostics {
    /// `i_last - i_first`.
    pub spread: Option<usize>,
    /// Minimum gap between consecutive leaders.
    pub gap_min: Option<usize>,
    /// `i_first - 0`.
    pub margin_first: Option<usize>,
    /// `s - i_last`.
    pub margin_last: Option<usize>,
    pub log_r: BallRecord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StutterRecord {
    pub n: usize,
    #[serde(with = "serial::big")]
    pub r: BigInt,
    pub s: usize,
    pub truncated: bool,
    pub delta: Vec<usize>,
    pub leaders: Option<Vec<usize>>,
    pub not_paired_at: Option<usize>,
    /// `s >= w r`; `None` when the prefix capped `s` below the threshold.
    pub s1_holds: Option<bool>,
    pub s2_pairs_ok: bool,
    pub pair_count: usize,
    pub s4_holds: Option<bool>,
    pub s4_per_leader: Vec<bool>,
    pub diagnostics: S3Diagnostics,
    pub classification: Vec<Classification>,
    pub unexplained: usize,
    pub uniqueness_warnings: usize,
}

/// Serializable description of where the word came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SourceRecord {
    Specs { theta: String, xs: Vec<String>, coeffs: Vec<String>, index_origin: u8 },
    Raw { word: String, shifts: Vec<String> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StutterWitness {
    pub source: SourceRecord,
    #[serde(with = "serial::rational")]
    pub w: BigRational,
    pub k: usize,
    pub d: usize,
    pub budget: usize,
    pub prefix_len: usize,
    pub nondegeneracy: Vec<Nondegeneracy>,
    pub records: Vec<StutterRecord>,
    pub unexplained_total: usize,
    pub notes: Vec<String>,
}

pub enum StutterSource {
    /// Linear combination `c_0 + sum c_i u^(i)` of codings with a shared slope.
    Specs { specs: Vec<CodingSpec>, coeffs: Vec<AlgebraicNumber> },
    /// A given word with caller-chosen shifts and pair bound `d`.
    Raw { word: Word, shifts: Vec<BigInt>, d: usize },
}

impl StutterSource {
    /// The Fibonacci word as the coding of `theta = (3 - sqrt 5)/2` at `x = theta`, origin 1.
    pub fn fibonacci() -> StutterSource {
        let theta = RealLike::parse("quad:(3-sqrt(5))/2").expect("literal");
        let spec = CodingSpec::new(theta.clone(), theta, 1).expect("valid coding");
        StutterSource::Specs { specs: vec![spec], coeffs: vec![AlgebraicNumber::from_int(0), AlgebraicNumber::from_int(1)] }
    }

    pub fn record(&self) -> SourceRecord {
        match self {
            StutterSource::Specs { specs, coeffs } => SourceRecord::Specs {
                theta: specs[0].theta.to_string(),
                xs: specs.iter().map(|s| s.x.to_string()).collect(),
                coeffs: coeffs.iter().map(print_algebraic).collect(),
                index_origin: specs[0].index_origin,
            },
            StutterSource::Raw { word, shifts, .. } => {
                SourceRecord::Raw { word: word.to_text().trim().to_string(), shifts: shifts.iter().map(|s| s.to_string()).collect() }
            }
        }
    }

    /// Rebuild a source from its record.
    pub fn from_record(rec: &SourceRecord, d: usize) -> Result<StutterSource> {
        match rec {
            SourceRecord::Specs { theta, xs, coeffs, index_origin } => {
                let t = RealLike::parse(theta)?;
                let specs = xs.iter().map(|x| CodingSpec::new(t.clone(), RealLike::parse(x)?, *index_origin)).collect::<Result<Vec<_>>>()?;
                let coeffs = coeffs.iter().map(|c| crate::kernel::literal::parse_algebraic(c)).collect::<Result<Vec<_>>>()?;
                Ok(StutterSource::Specs { specs, coeffs })
            }
            SourceRecord::Raw { word, shifts } => Ok(StutterSource::Raw {
                word: Word::parse_text(word)?,
                shifts: shifts.iter().map(|s| crate::kernel::literal::parse_int(s)).collect::<Result<Vec<_>>>()?,
                d,
            }),
        }
    }

    /// Word prefix of length `len`.
    pub fn word(&self, len: usize) -> Result<(Word, Vec<Nondegeneracy>)> {
        match self {
            StutterSource::Specs { specs, coeffs } => {
                let c = linear_combination(specs, coeffs, len, DEFAULT_SEARCH_BOUND)?;
                Ok((c.word, c.nondegeneracy))
            }
            StutterSource::Raw { word, .. } => Ok((word.prefix(len), Vec::new())),
        }
    }
}

fn ceil_rational(q: &BigRational) -> BigInt {
    q.ceil().to_integer()
}

/// One record: window, mismatch set, pairs, S1/S2/S4 verdicts and S3 diagnostics.
pub fn stutter_record(word: &Word, specs: Option<&[CodingSpec]>, n: usize, r: &BigInt, w: &BigRational, budget: usize) -> Result<StutterRecord> {
    let ru = r.to_usize().ok_or_else(|| Error::PrefixTooShort { have: word.len(), need: usize::MAX })?;
    let (s, truncated) = max_window(word, ru, budget)?;
    let delta = mismatch_set(word, ru, s)?;
    let (leaders, not_paired_at) = match pair_structure(&delta) {
        Ok(l) => (Some(l), None),
        Err(Error::NotPaired(p)) => (None, Some(p)),
        Err(e) => return Err(e),
    };
    let s1 = BigRational::from_integer(BigInt::from(s)) >= w * BigRational::from_integer(r.clone());
    let s1_holds = if s1 || !truncated { Some(s1) } else { None };
    let s4_per_leader = match &leaders {
        Some(l) => check_s4(word, ru, l)?,
        None => Vec::new(),
    };
    let s4_holds = leaders.as_ref().map(|_| s4_per_leader.iter().all(|&b| b));
    let l = leaders.clone().unwrap_or_default();
    let diagnostics = S3Diagnostics {
        spread: l.last().zip(l.first()).map(|(a, b)| a - b),
        gap_min: l.windows(2).map(|p| p[1] - p[0]).min(),
        margin_first: l.first().copied(),
        margin_last: l.last().map(|&i| s - i),
        log_r: BallReal::from_int(r.clone(), 64).ln()?.to_record(),
    };
    let classification = match specs {
        Some(sp) => classify_mismatches(sp, r, &delta)?,
        None => Vec::new(),
    };
    let unexplained = classification.iter().filter(|c| c.unexplained()).count();
    let uniqueness_warnings = classification.iter().filter(|c| c.matches > 1).count();
    Ok(StutterRecord {
        n,
        r: r.clone(),
        s,
        truncated,
        pair_count: delta.len() / 2,
        s2_pairs_ok: leaders.is_some(),
        delta,
        leaders,
        not_paired_at,
        s1_holds,
        s4_holds,
        s4_per_leader,
        diagnostics,
        classification,
        unexplained,
        uniqueness_warnings,
    })
}

/// Records for `n = 0..=n_max` over a prefix of length `prefix_len`.
pub fn stutter_report(source: &StutterSource, w: &BigRational, n_max: usize, prefix_len: usize) -> Result<StutterWitness> {
    if !w.is_positive() {
        return Err(Error::InvalidInput("w must be positive".into()));
    }
    let wc = ceil_rational(w).to_usize().ok_or_else(|| Error::InvalidInput("w too large".into()))?;
    let (word, nondegeneracy) = source.word(prefix_len)?;
    let mut notes = Vec::new();
    let (shifts, specs, k, d) = match source {
        StutterSource::Specs { specs, .. } => {
            let k = specs.len();
            let r = positive_side_denominators(&specs[0].theta, n_max + 1)?;
            (r, Some(specs.as_slice()), k, (k + 1) * wc)
        }
        StutterSource::Raw { shifts, d, .. } => {
            if shifts.len() < n_max + 1 {
                return Err(Error::InvalidInput(format!("need {} shifts, got {}", n_max + 1, shifts.len())));
            }
            if *d == 0 {
                notes.push("d = 0: no mismatches allowed; S2 holds only with zero pairs".into());
            }
            (shifts[..=n_max].to_vec(), None, 1, *d)
        }
    };
    let budget = 2 * d;
    let mut records = Vec::with_capacity(n_max + 1);
    for (n, r) in shifts.iter().enumerate() {
        records.push(stutter_record(&word, specs, n, r, w, budget)?);
    }
    if specs.is_some() {
        notes.push("shifts r_n: convergent denominators with q theta - p > 0".into());
    }
    let unexplained_total = records.iter().map(|r| r.unexplained).sum();
    Ok(StutterWitness {
        source: source.record(),
        w: w.clone(),
        k,
        d,
        budget,
        prefix_len: word.len(),
        nondegeneracy,
        records,
        unexplained_total,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::fibonacci_word;

    #[test]
    fn fibonacci_alignment() {
        let f = fibonacci_word(40);
        let d = mismatch_set(&f, 5, 34).unwrap();
        assert_eq!(d, vec![6, 7, 19, 20, 27, 28]);
        let l = pair_structure(&d).unwrap();
        assert_eq!(l, vec![6, 19, 27]);
        assert_eq!(check_s4(&f, 5, &l).unwrap(), vec![true, true, true]);
    }

    #[test]
    fn trivial_mismatch_sets() {
        let p = Word::binary(&(0..30).map(|i| (i % 2) as u8).collect::<Vec<_>>(), "p");
        assert!(mismatch_set(&p, 2, 10).unwrap().is_empty());
        let c = Word::binary(&[0, 0, 1], "c");
        assert!(mismatch_set(&c, 1, 0).unwrap().is_empty());
        assert!(matches!(mismatch_set(&c, 1, 5), Err(Error::PrefixTooShort { .. })));
    }

    #[test]
    fn windows() {
        let k = Word::binary(&[0; 50], "const");
        assert_eq!(max_window(&k, 3, 0).unwrap(), (46, true));
        let m = Word::binary(&[1, 0, 0, 0, 0], "m");
        assert_eq!(max_window(&m, 1, 0), Err(Error::NoWindow));
        // oracle: linear scan for the last s before the budget is exceeded
        let f = fibonacci_word(60);
        let (s, t) = max_window(&f, 5, 6).unwrap();
        let mut count = 0;
        let mut want = None;
        for i in 0..55 {
            if f.symbols()[i] != f.symbols()[i + 5] {
                count += 1;
                if count == 7 {
                    want = Some(i - 1);
                    break;
                }
            }
        }
        assert_eq!(Some(s), want);
        assert!(!t);
    }

    #[test]
    fn pairs() {
        assert_eq!(pair_structure(&[]).unwrap(), Vec::<usize>::new());
        assert_eq!(pair_structure(&[4, 6, 7]), Err(Error::NotPaired(4)));
        assert_eq!(pair_structure(&[4, 5, 7]), Err(Error::NotPaired(7)));
    }

    #[test]
    fn s4_counterexample() {
        let w = Word::binary(&[0, 0, 1, 1], "x");
        assert_eq!(check_s4(&w, 2, &[0]).unwrap(), vec![false]);
        assert_eq!(check_s4(&w, 2, &[1]), Err(Error::IndexOutOfRange(1)));
    }

    #[test]
    fn fibonacci_classification() {
        let StutterSource::Specs { specs, .. } = StutterSource::fibonacci() else { unreachable!() };
        let c = classify_mismatches(&specs, &BigInt::from(5), &[6, 7, 19, 20, 27, 28]).unwrap();
        // r = 5 is a negative-side shift for (3 - sqrt 5)/2
        assert!(c.iter().all(|x| !x.unexplained() && x.matches == 1));
        let none = classify_mismatches(&specs, &BigInt::from(5), &[0]).unwrap();
        assert!(none[0].unexplained());
        let c8 = classify_mismatches(&specs, &BigInt::from(8), &[0, 1, 2, 3, 4, 5, 6, 7, 8]).unwrap();
        let f = fibonacci_word(20);
        for cl in &c8 {
            let mism = f.symbols()[cl.m] != f.symbols()[cl.m + 8];
            assert_eq!(mism, !cl.unexplained(), "m = {}", cl.m);
        }
    }

    #[test]
    fn fibonacci_report_small() {
        let w = stutter_report(&StutterSource::fibonacci(), &BigRational::one(), 3, 2000).unwrap();
        assert_eq!(w.records.iter().map(|r| r.r.clone()).collect::<Vec<_>>(), vec![1, 3, 8, 21].into_iter().map(BigInt::from).collect::<Vec<_>>());
        for r in &w.records {
            assert_eq!(r.s1_holds, Some(true), "{:?}", r);
            assert!(r.s2_pairs_ok);
            assert_eq!(r.s4_holds, Some(true));
            assert_eq!(r.unexplained, 0);
            let cls = &r.classification;
            for (k, &i) in r.leaders.as_ref().unwrap().iter().enumerate() {
                assert_eq!(cls[2 * k].m, i);
                assert_eq!(cls[2 * k].condition, Some(Condition::I));
                assert_eq!(cls[2 * k + 1].condition, Some(Condition::II));
            }
        }
        let json = serde_json::to_string(&w).unwrap();
        let back: StutterWitness = serde_json::from_str(&json).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn periodic_raw_source() {
        let p = Word::binary(&(0..200).map(|i| (i % 2) as u8).collect::<Vec<_>>(), "p");
        let src = StutterSource::Raw { word: p, shifts: vec![BigInt::from(2); 3], d: 0 };
        let w = stutter_report(&src, &BigRational::one(), 2, 200).unwrap();
        for r in &w.records {
            assert!(r.delta.is_empty() && r.s2_pairs_ok && r.truncated);
        }
        assert!(!w.notes.is_empty());
    }
}
