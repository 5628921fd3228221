//! JSON file formats. Exact scalars are written as `"p/q"` or `"re+imi"`
//! strings; on input, integer and decimal JSON numbers are also accepted and
//! read as the exact rational they spell.
//!
//! ```text
//! polynomial  ["6","4"]                                   6 + 4z
//! series      {"regime":"exact","coeffs":["1","-1/2"],"tail":"truncated","origin":""}
//!             {"regime":"approx","precision_bits":128,"coeffs":[["1.5","0"]],…}
//! equation    {"form":"delta","coeffs":[["1"],["3"],["6","4"]],
//!              "constraints":["a0+2a1=0"],"free":{"a0":"1"}}
//! ```

use rug::{Float, Integer, Rational};
use serde_json::{json, Map, Value};

use crate::catalog::Example;
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::{Cplx, ExactScalar};
use crate::series::{BinomialSeries, Coeffs, Tail};
use crate::solver::{Form, InitialData, LinearConstraint, LinearDifferenceEquation, NewtonPolygon};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Exact value of a decimal literal such as `-1.25e-3`.
fn decimal_to_rational(s: &str) -> Option<Rational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mantissa) = match mantissa.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mantissa),
    };
    let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits: Integer = format!("{int}{frac}").parse().ok()?;
    let exp = exp - frac.len() as i32;
    let ten = |k: u32| Integer::from(Integer::u_pow_u(10, k));
    let mut r = if exp >= 0 {
        Rational::from(digits * ten(exp as u32))
    } else {
        Rational::from((digits, ten(exp.unsigned_abs())))
    };
    if neg {
        r = -r;
    }
    Some(r)
}

pub fn scalar_from_value(v: &Value) -> Result<ExactScalar> {
    match v {
        Value::String(s) => s.parse(),
        Value::Number(n) => decimal_to_rational(&n.to_string())
            .map(ExactScalar::from)
            .ok_or_else(|| parse_err(format!("bad number {n}"))),
        other => Err(parse_err(format!("expected a rational string, got {other}"))),
    }
}

pub fn scalar_to_value(s: &ExactScalar) -> Value {
    Value::String(s.to_string())
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| parse_err(format!("{what} must be an array")))
}

pub fn polynomial_to_value(p: &Polynomial) -> Value {
    Value::Array(p.coeffs().iter().map(scalar_to_value).collect())
}

pub fn polynomial_from_value(v: &Value) -> Result<Polynomial> {
    let c = array(v, "polynomial")?.iter().map(scalar_from_value).collect::<Result<_>>()?;
    Ok(Polynomial::new(c))
}

fn digits_for(prec: u32) -> usize {
    (prec as f64 * std::f64::consts::LOG10_2).ceil() as usize + 1
}

fn float_from_value(v: &Value, prec: u32) -> Result<Float> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => return Err(parse_err(format!("expected a number, got {other}"))),
    };
    Float::parse(text.trim())
        .map(|p| Float::with_val(prec, p))
        .map_err(|_| parse_err(format!("not a number: {text:?}")))
}

pub fn series_to_value(y: &BinomialSeries) -> Value {
    let tail = match y.tail() {
        Tail::Terminating => "terminating",
        Tail::Truncated => "truncated",
    };
    match y.coeffs() {
        Coeffs::Exact(v) => json!({
            "regime": "exact",
            "coeffs": v.iter().map(scalar_to_value).collect::<Vec<_>>(),
            "tail": tail,
            "origin": y.origin(),
        }),
        Coeffs::Approx { precision_bits, values } => {
            let d = digits_for(*precision_bits);
            let pairs: Vec<Value> = values
                .iter()
                .map(|c| {
                    let (re, im) = c.to_string_digits(d);
                    json!([re, im])
                })
                .collect();
            json!({
                "regime": "approx",
                "precision_bits": precision_bits,
                "coeffs": pairs,
                "tail": tail,
                "origin": y.origin(),
            })
        }
    }
}

pub fn series_from_value(v: &Value) -> Result<BinomialSeries> {
    let obj = v.as_object().ok_or_else(|| parse_err("series must be an object"))?;
    let coeffs = array(obj.get("coeffs").ok_or_else(|| parse_err("series needs \"coeffs\""))?, "coeffs")?;
    let tail = match obj.get("tail").and_then(Value::as_str) {
        None | Some("truncated") => Tail::Truncated,
        Some("terminating") => Tail::Terminating,
        Some(t) => return Err(parse_err(format!("unknown tail {t:?}"))),
    };
    let coeffs = match obj.get("regime").and_then(Value::as_str) {
        Some("exact") => Coeffs::Exact(coeffs.iter().map(scalar_from_value).collect::<Result<_>>()?),
        Some("approx") => {
            let prec = obj
                .get("precision_bits")
                .and_then(Value::as_u64)
                .ok_or_else(|| parse_err("approx series needs \"precision_bits\""))?;
            if !(53..=1 << 20).contains(&prec) {
                return Err(Error::InvalidInput(format!("precision_bits {prec} out of range")));
            }
            let prec = prec as u32;
            let values = coeffs
                .iter()
                .map(|c| match c {
                    Value::Array(p) if p.len() == 2 => {
                        Ok(Cplx::new(float_from_value(&p[0], prec)?, float_from_value(&p[1], prec)?))
                    }
                    _ => Ok(Cplx::new(float_from_value(c, prec)?, Float::new(prec))),
                })
                .collect::<Result<_>>()?;
            Coeffs::Approx { precision_bits: prec, values }
        }
        other => return Err(parse_err(format!("unknown regime {other:?}"))),
    };
    let origin = obj.get("origin").and_then(Value::as_str).unwrap_or("");
    Ok(BinomialSeries::new(coeffs, tail).with_origin(origin))
}

/// An equation file: the equation plus any initial data stored with it.
#[derive(Clone, Debug)]
pub struct EquationFile {
    pub equation: LinearDifferenceEquation,
    pub initial: InitialData,
}

pub fn equation_to_value(eq: &LinearDifferenceEquation, initial: &InitialData) -> Value {
    let mut m = Map::new();
    let form = match eq.form() {
        Form::Delta => "delta",
        Form::Shift => "shift",
    };
    m.insert("form".into(), form.into());
    m.insert("coeffs".into(), Value::Array(eq.coeffs().iter().map(polynomial_to_value).collect()));
    if !initial.constraints.is_empty() {
        let c = initial.constraints.iter().map(|c| Value::String(c.to_string())).collect();
        m.insert("constraints".into(), Value::Array(c));
    }
    if !initial.free.is_empty() {
        let f = initial.free.iter().map(|(k, v)| (format!("a{k}"), scalar_to_value(v))).collect();
        m.insert("free".into(), Value::Object(f));
    }
    Value::Object(m)
}

/// Parses `"a3"` (or `"3"`) to `3`.
pub fn parse_index(s: &str) -> Result<usize> {
    let t = s.trim();
    t.strip_prefix('a').unwrap_or(t).parse().map_err(|_| parse_err(format!("bad coefficient index {s:?}")))
}

/// Parses a `a0=1` style assignment.
pub fn parse_free_assignment(s: &str) -> Result<(usize, ExactScalar)> {
    let (k, v) = s.split_once('=').ok_or_else(|| parse_err(format!("expected aK=value, got {s:?}")))?;
    Ok((parse_index(k)?, v.parse()?))
}

pub fn equation_from_value(v: &Value) -> Result<EquationFile> {
    let obj = v.as_object().ok_or_else(|| parse_err("equation must be an object"))?;
    let form = match obj.get("form").and_then(Value::as_str) {
        Some("delta") => Form::Delta,
        Some("shift") => Form::Shift,
        other => return Err(parse_err(format!("unknown form {other:?}"))),
    };
    let coeffs = array(obj.get("coeffs").ok_or_else(|| parse_err("equation needs \"coeffs\""))?, "coeffs")?
        .iter()
        .map(polynomial_from_value)
        .collect::<Result<Vec<_>>>()?;
    let equation = LinearDifferenceEquation::new(form, coeffs)?;
    let mut initial = InitialData::default();
    if let Some(c) = obj.get("constraints") {
        for c in array(c, "constraints")? {
            let s = c.as_str().ok_or_else(|| parse_err("constraints must be strings"))?;
            initial.constraints.push(s.parse::<LinearConstraint>()?);
        }
    }
    if let Some(f) = obj.get("free") {
        let f = f.as_object().ok_or_else(|| parse_err("\"free\" must be an object"))?;
        for (k, v) in f {
            initial.free.push((parse_index(k)?, scalar_from_value(v)?));
        }
        initial.free.sort_by_key(|(k, _)| *k);
    }
    Ok(EquationFile { equation, initial })
}

pub fn example_to_value(ex: &Example) -> Value {
    let mut v = equation_to_value(&ex.equation, &ex.initial);
    v["name"] = ex.name.into();
    v["summary"] = ex.summary.into();
    v
}

pub fn polygon_to_value(p: &NewtonPolygon) -> Value {
    let mut v = serde_json::to_value(p).expect("plain data");
    let c: Vec<String> = p.candidate_orders().iter().map(|r| r.to_string()).collect();
    v["candidates"] = json!(c);
    v
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("plain data");
    s.push('\n');
    s
}

pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))
}
