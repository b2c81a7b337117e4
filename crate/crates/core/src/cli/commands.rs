//! Execution of each subcommand into a JSON report body.

use std::fs;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};

use super::*;
use crate::confrac::{best_approx_denominators, cf_expand, positive_side_denominators};
use crate::evalnum::{check_key_inequality, integer_relation, relation_over_base, sturmian_number, Base, DigitGenerator, DigitSequence};
use crate::heights::{gap_split_check, height_int_vector, mahler_measure, poly_height, weil_height_alg, SparsePolynomial};
use crate::kernel::literal::{parse_algebraic, parse_int, parse_rational, print_rational};
use crate::kernel::{AlgebraicNumber, BallComplex, BallReal, RealLike, DEFAULT_DEGREE_CAP};
use crate::rotor::{delta_for_rotation, ContractedRotation, Decomposition};
use crate::stutter::{stutter_report, SourceRecord, StutterSource, StutterWitness};
use crate::words::{complexity_profile, fibonacci_word, theta_coding, CodingSpec, Word};

/// Precision used for points and enclosures written to reports.
const REPORT_BITS: u32 = 128;

fn strs<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(T::to_string).collect()
}

fn bits_of(w: &Word) -> Result<String> {
    w.to_bitstring().ok_or_else(|| Error::Validation("word is not binary".into()))
}

fn specs(theta: &str, xs: &[String], origin: u8) -> Result<Vec<CodingSpec>> {
    let t = RealLike::parse(theta)?;
    xs.iter().map(|x| CodingSpec::new(t.clone(), RealLike::parse(x)?, origin)).collect()
}

fn base(s: &str) -> Result<Base> {
    Base::new(parse_algebraic(s)?)
}

fn coding_spec(theta: &Option<String>, x: &Option<String>, origin: u8) -> Result<Option<CodingSpec>> {
    match (theta, x) {
        (None, None) => Ok(None),
        (Some(t), Some(x)) => Ok(Some(CodingSpec::new(RealLike::parse(t)?, RealLike::parse(x)?, origin)?)),
        _ => Err(Error::Validation("theta and x must be given together".into())),
    }
}

/// Compact ball at report precision.
fn record(b: &BallReal) -> Value {
    json!(BallReal::new(b.mid().clone(), b.rad().clone(), REPORT_BITS).to_record())
}

pub fn execute(cmd: &Command, prec: u32) -> Result<Value> {
    match cmd {
        Command::Cf(a) => cf(a),
        Command::Code(a) => code(a),
        Command::Stutter(a) => stutter(a),
        Command::Eval(a) => eval(a, prec),
        Command::Keyineq(a) => keyineq(a, prec),
        Command::Relation(a) => relation(a, prec),
        Command::Heights(a) => heights(a, prec),
        Command::Rotor(RotorCommand::Rotnum(a)) => rotnum(a),
        Command::Rotor(RotorCommand::Invert(a)) => invert(a),
        Command::Rotor(RotorCommand::Attractor(a)) => attractor(a),
        Command::Rotor(RotorCommand::Decompose(a)) => decompose(a, prec),
        Command::Export(a) => {
            let text = fs::read_to_string(&a.report)?;
            let report: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("report: {}", e)))?;
            let csv = export_plot_data(&report, &a.kind)?;
            if let Some(p) = &a.out {
                fs::write(p, &csv)?;
            }
            Ok(json!({"kind": a.kind, "rows": csv.lines().count().saturating_sub(1), "csv": csv}))
        }
    }
}

fn cf(a: &CfArgs) -> Result<Value> {
    let theta = RealLike::parse(&a.theta)?;
    let c = cf_expand(&theta, a.n)?;
    let mut out = json!({
        "theta": theta.to_string(),
        "quotients": strs(&c.quotients),
        "convergents": c.convergents.iter().map(|(p, q)| json!({"p": p.to_string(), "q": q.to_string()})).collect::<Vec<_>>(),
        "truncated": c.truncated,
        "terminated": c.terminated,
    });
    if let Some(k) = a.positive_side {
        out["positive_side"] = json!(strs(&positive_side_denominators(&theta, k)?));
    }
    if let Some(m) = a.best_upto {
        out["best_approximations"] = json!(best_approx_denominators(&theta, m)?);
    }
    Ok(out)
}

fn code(a: &CodeArgs) -> Result<Value> {
    let (w, source) = match coding_spec(&a.theta, &a.x, a.origin)? {
        Some(s) => (theta_coding(&s, a.n)?, json!({"theta": s.theta.to_string(), "x": s.x.to_string(), "index_origin": s.index_origin})),
        None => (fibonacci_word(a.n), json!("fibonacci")),
    };
    let mut out = json!({"source": source, "length": w.len(), "ones": w.count(1), "word": bits_of(&w)?});
    if let Some(m) = a.complexity {
        out["complexity"] = json!(complexity_profile(&w, m)?);
    }
    Ok(out)
}

fn stutter(a: &StutterArgs) -> Result<Value> {
    let w = parse_rational(&a.w)?;
    let source = match (&a.theta, &a.word) {
        (Some(_), Some(_)) => return Err(Error::Validation("give either theta or word, not both".into())),
        (Some(t), None) => {
            if a.xs.is_empty() || a.coeffs.len() != a.xs.len() + 1 {
                return Err(Error::Validation("need k intercepts and k + 1 coefficients".into()));
            }
            let coeffs = a.coeffs.iter().map(|c| parse_algebraic(c)).collect::<Result<Vec<_>>>()?;
            StutterSource::Specs { specs: specs(t, &a.xs, a.origin)?, coeffs }
        }
        (None, Some(word)) => {
            let d = a.d.ok_or_else(|| Error::Validation("a raw word needs the pair bound d".into()))?;
            let shifts = a.shifts.iter().map(|s| parse_int(s)).collect::<Result<Vec<_>>>()?;
            StutterSource::Raw { word: Word::parse_text(word)?, shifts, d }
        }
        (None, None) => StutterSource::fibonacci(),
    };
    Ok(serde_json::to_value(stutter_report(&source, &w, a.n_max, a.prefix)?).expect("serializable"))
}

fn eval(a: &EvalArgs, prec: u32) -> Result<Value> {
    let b = base(&a.base)?;
    let seq = match a.digits.as_str() {
        "fibonacci" => DigitSequence::new(DigitGenerator::Fibonacci),
        "coding" => {
            let s = coding_spec(&a.theta, &a.x, a.origin)?.ok_or_else(|| Error::Validation("coding digits need theta and x".into()))?;
            DigitSequence::new(DigitGenerator::Combination { specs: vec![s], coeffs: vec![AlgebraicNumber::from_int(0), AlgebraicNumber::from_int(1)] })
        }
        "word" => DigitSequence::fixed(Word::parse_text(a.word.as_deref().ok_or_else(|| Error::Validation("word digits need a word".into()))?)?),
        other => return Err(Error::Validation(format!("unknown digit source {:?}", other))),
    };
    let v = sturmian_number(&seq, &b, prec)?;
    Ok(json!({"base": a.base, "digits": a.digits, "value": v.to_record()}))
}

/// Accepts a bare witness or a report envelope around one.
fn load_witness(path: &std::path::Path) -> Result<StutterWitness> {
    let text = fs::read_to_string(path)?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Parse(format!("witness: {}", e)))?;
    let inner = if v.get("schema_version").is_some() { v.get("report").cloned().unwrap_or(Value::Null) } else { v };
    serde_json::from_value(inner).map_err(|e| Error::Parse(format!("witness: {}", e)))
}

fn keyineq(a: &KeyIneqArgs, prec: u32) -> Result<Value> {
    let wit = load_witness(&a.witness)?;
    let b = base(&a.base)?;
    let seq = match StutterSource::from_record(&wit.source, wit.d)? {
        StutterSource::Specs { specs, coeffs } => DigitSequence::new(DigitGenerator::Combination { specs, coeffs }),
        StutterSource::Raw { word, .. } => DigitSequence::fixed(word),
    };
    let mut results = Vec::new();
    for rec in &wit.records {
        if !a.records.is_empty() && !a.records.contains(&rec.n) {
            continue;
        }
        let Some(leaders) = rec.leaders.as_ref().filter(|l| !l.is_empty()) else { continue };
        if rec.truncated {
            continue;
        }
        let r = crate::evalnum::usize_of(&rec.r)?;
        results.push(json!({"n": rec.n, "result": check_key_inequality(&seq, &b, r, rec.s, leaders, prec)?}));
    }
    let holding = results.iter().filter(|r| r["result"]["holds"] == json!(true)).count();
    let source = match &wit.source {
        SourceRecord::Specs { .. } => "specs",
        SourceRecord::Raw { .. } => "raw",
    };
    Ok(json!({"base": a.base, "source": source, "results": results, "holding": holding}))
}

fn relation(a: &RelationArgs, prec: u32) -> Result<Value> {
    let wp = prec + 16;
    let mut vals: Vec<BallComplex> = a.values.iter().map(|s| parse_algebraic(s)?.refine(wp)).collect::<Result<_>>()?;
    let b = base(&a.base)?;
    if let Some(t) = &a.theta {
        for s in specs(t, &a.xs, a.origin)? {
            let seq = DigitSequence::new(DigitGenerator::Combination { specs: vec![s], coeffs: vec![AlgebraicNumber::from_int(0), AlgebraicNumber::from_int(1)] });
            vals.push(sturmian_number(&seq, &b, wp)?);
        }
    }
    let bound = parse_int(&a.bound)?;
    let outcome = match a.over_base {
        Some(t) => serde_json::to_value(relation_over_base(&vals, &b, t, &bound, prec)?),
        None => serde_json::to_value(integer_relation(&vals, &bound, prec)?),
    }
    .expect("serializable");
    Ok(json!({"count": vals.len(), "bound": bound.to_string(), "outcome": outcome}))
}

fn heights(a: &HeightsArgs, prec: u32) -> Result<Value> {
    let mut out = serde_json::Map::new();
    if !a.vector.is_empty() {
        let v = a.vector.iter().map(|s| parse_int(s)).collect::<Result<Vec<BigInt>>>()?;
        out.insert("vector_height".into(), json!(height_int_vector(&v)?.to_string()));
    }
    let poly = a.poly.as_deref().map(SparsePolynomial::parse).transpose()?;
    if let Some(f) = &poly {
        out.insert("poly_height".into(), json!(poly_height(f)?.to_string()));
        // root isolation beyond the degree cap is impractical
        if f.degree() <= DEFAULT_DEGREE_CAP as u64 {
            out.insert("mahler_measure".into(), json!(mahler_measure(&f.to_dense(), prec)?.to_record()));
        } else {
            out.insert("mahler_measure".into(), Value::Null);
            out.insert("note".into(), json!(format!("mahler measure skipped above degree {}", DEFAULT_DEGREE_CAP)));
        }
    }
    if let Some(s) = &a.alg {
        out.insert("weil_height".into(), json!(weil_height_alg(&parse_algebraic(s)?, prec)?.to_record()));
    }
    match (a.d0, a.d1, &a.beta) {
        (None, None, None) => {}
        (Some(d0), Some(d1), Some(b)) => {
            let f = poly.as_ref().ok_or_else(|| Error::Validation("the gap check needs poly".into()))?;
            out.insert("gap".into(), json!(gap_split_check(f, d0, d1, &parse_algebraic(b)?, prec)?));
        }
        _ => return Err(Error::Validation("the gap check needs d0, d1 and beta".into())),
    }
    if out.is_empty() {
        return Err(Error::Validation("nothing to compute: give vector, poly or alg".into()));
    }
    Ok(Value::Object(out))
}

fn rotnum(a: &RotnumArgs) -> Result<Value> {
    let lambda = RealLike::parse(&a.lambda)?;
    match (&a.delta, &a.sweep_from, &a.sweep_to) {
        (Some(d), None, None) => {
            let cr = ContractedRotation::new(lambda, RealLike::parse(d)?)?;
            Ok(json!({"lambda": a.lambda, "delta": d, "n": a.n, "rotation": cr.rotation_number(a.n)?.to_record()}))
        }
        (None, Some(from), Some(to)) => {
            if a.steps < 2 {
                return Err(Error::Validation("a sweep needs at least two steps".into()));
            }
            let (from, to) = (parse_rational(from)?, parse_rational(to)?);
            let last = BigRational::from_integer((a.steps - 1).into());
            let mut samples = Vec::with_capacity(a.steps);
            for i in 0..a.steps {
                let t = BigRational::from_integer(i.into()) / &last;
                let d = &from + (&to - &from) * t;
                let cr = ContractedRotation::new(lambda.clone(), RealLike::Rational(d.clone()))?;
                samples.push(json!({"delta": print_rational(&d), "rotation": cr.rotation_number(a.n)?.to_record()}));
            }
            Ok(json!({"lambda": a.lambda, "n": a.n, "samples": samples}))
        }
        _ => Err(Error::Validation("give either delta or both sweep_from and sweep_to".into())),
    }
}

fn invert(a: &InvertArgs) -> Result<Value> {
    let tol = parse_rational(&a.tol)?;
    if tol <= BigRational::from_integer(0.into()) || tol > BigRational::one() {
        return Err(Error::Validation("tol must lie in (0, 1]".into()));
    }
    let d = delta_for_rotation(&RealLike::parse(&a.lambda)?, &RealLike::parse(&a.theta)?, &tol)?;
    Ok(json!({"lambda": a.lambda, "theta": a.theta, "tol": a.tol, "delta": d.to_record(), "width": d.width().to_f64()}))
}

fn rotation(lambda: &str, theta: &Option<String>, delta: &Option<String>) -> Result<ContractedRotation> {
    let l = RealLike::parse(lambda)?;
    match (theta, delta) {
        (Some(t), None) => ContractedRotation::with_rotation(l, RealLike::parse(t)?),
        (None, Some(d)) => ContractedRotation::new(l, RealLike::parse(d)?),
        (Some(t), Some(d)) => ContractedRotation::new(l, RealLike::parse(d)?)?.with_theta(RealLike::parse(t)?),
        (None, None) => Err(Error::Validation("give theta or delta".into())),
    }
}

fn attractor(a: &AttractorArgs) -> Result<Value> {
    let cr = rotation(&a.lambda, &a.theta, &a.delta)?;
    let s = cr.attractor_sample(a.burn_in, a.n)?;
    let itinerary = bits_of(&s.itinerary)?;
    Ok(json!({
        "lambda": a.lambda,
        "burn_in": s.burn_in,
        "depth_bound": record(&s.depth_bound),
        "prec": s.prec,
        "itinerary": itinerary,
        "ones": s.itinerary.count(1),
        "points": s.points.iter().map(record).collect::<Vec<_>>(),
    }))
}

fn decomposition(d: &Decomposition) -> Value {
    match d {
        Decomposition::FirstForm { x_enclosure, intercept, k, z, residual, symbols } => json!({
            "form": "first",
            "x_enclosure": x_enclosure.to_record(),
            "intercept": intercept.to_string(),
            "k": k,
            "z": z.to_string(),
            "residual": residual.to_record(),
            "symbols": symbols,
        }),
        Decomposition::SecondForm { m, gamma_note } => json!({"form": "second", "m": m, "gamma_note": gamma_note}),
    }
}

fn decompose(a: &DecomposeArgs, prec: u32) -> Result<Value> {
    let cr = rotation(&a.lambda, &Some(a.theta.clone()), &None)?;
    let mut items = Vec::new();
    if let Some(y) = &a.y {
        let yb = RealLike::parse(y)?.to_ball(prec + 64)?;
        items.push(json!({"y": y, "decomposition": decomposition(&cr.decompose_limit_point(&yb, a.symbols, prec)?)}));
    } else {
        let top = a.indices.iter().max().copied().ok_or_else(|| Error::Validation("no indices".into()))?;
        let s = cr.attractor_sample(a.burn_in, top + 1)?;
        for &i in &a.indices {
            let d = cr.decompose_limit_point(&s.points[i], a.symbols, prec)?;
            items.push(json!({"index": i, "y": record(&s.points[i]), "decomposition": decomposition(&d)}));
        }
    }
    Ok(json!({"lambda": a.lambda, "theta": a.theta, "burn_in": a.burn_in, "items": items}))
}
