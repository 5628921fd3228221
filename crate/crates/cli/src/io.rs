use std::fs;
use std::io::Write;
use std::path::Path;

use fallfact::analysis::circle_points;
use fallfact::error::{Error, Result};
use fallfact::json;
use fallfact::scalar::Cplx;
use fallfact::series::EvaluationResult;
use serde_json::Value;

use crate::{CsvOutput, GridArgs};

pub fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    json::parse(&text).map_err(|e| match e {
        Error::Parse(m) => Error::Parse(format!("{}: {m}", path.display())),
        other => other,
    })
}

/// Writes to `path`, or to stdout when absent.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

pub fn point_from_value(v: &Value, prec: u32) -> Result<Cplx> {
    match v {
        Value::String(s) => Cplx::parse(prec, s),
        Value::Number(n) => Cplx::parse(prec, &n.to_string()),
        Value::Array(p) if p.len() == 2 => {
            let part = |x: &Value| -> Result<Cplx> { point_from_value(x, prec) };
            let (re, im) = (part(&p[0])?, part(&p[1])?);
            Ok(Cplx::new(re.re().clone(), im.re().clone()))
        }
        other => Err(Error::Parse(format!("not a point: {other}"))),
    }
}

pub fn read_points(path: &Path, prec: u32) -> Result<Vec<Cplx>> {
    let v = read_json(path)?;
    v.as_array()
        .ok_or_else(|| Error::Parse("points file must hold an array".into()))?
        .iter()
        .map(|p| point_from_value(p, prec))
        .collect()
}

fn numbers(spec: &str, n: usize, what: &str) -> Result<Vec<f64>> {
    let parts: Vec<f64> = spec
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| Error::Parse(format!("bad {what} {spec:?}")))?;
    if parts.len() != n {
        return Err(Error::Parse(format!("{what} needs {n} comma-separated numbers, got {spec:?}")));
    }
    Ok(parts)
}

fn count(x: f64, what: &str) -> Result<usize> {
    if x < 0.0 || x.fract() != 0.0 {
        return Err(Error::Parse(format!("{what} count must be a nonnegative integer")));
    }
    Ok(x as usize)
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Points in the order given: single points, rectangle (row by row), circles, file.
pub fn grid(args: &GridArgs, prec: u32) -> Result<Vec<Cplx>> {
    let mut out = Vec::new();
    for s in &args.z {
        out.push(Cplx::parse(prec, s)?);
    }
    if let Some(r) = &args.rect {
        let v = numbers(r, 6, "rectangle")?;
        let (nx, ny) = (count(v[2], "rectangle")?, count(v[5], "rectangle")?);
        for y in linspace(v[3], v[4], ny) {
            for x in linspace(v[0], v[1], nx) {
                out.push(Cplx::from_f64(prec, x, y));
            }
        }
    }
    for c in &args.circle {
        let v = numbers(c, 2, "circle")?;
        if v[0] < 0.0 {
            return Err(Error::InvalidInput("circle radius must be nonnegative".into()));
        }
        out.extend(circle_points(v[0], count(v[1], "circle")?, prec));
    }
    if let Some(p) = &args.points {
        out.extend(read_points(p, prec)?);
    }
    Ok(out)
}

fn format_part(x: &fallfact::rug::Float, digits: Option<usize>) -> String {
    match digits {
        Some(d) => x.to_string_radix(10, Some(d)),
        None => x.to_f64().to_string(),
    }
}

/// One CSV row per point: `z_re,z_im,val_re,val_im,terms,converged`. Failed
/// points get `NaN` values and `converged = false`.
pub fn write_eval_csv(points: &[Cplx], results: &[Result<EvaluationResult>], out: &CsvOutput) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(["z_re", "z_im", "val_re", "val_im", "terms", "converged"]).map_err(csv_err)?;
    for (z, r) in points.iter().zip(results) {
        let (zr, zi) = z.to_f64();
        let row = match r {
            Ok(r) => [
                zr.to_string(),
                zi.to_string(),
                format_part(r.value.re(), out.digits),
                format_part(r.value.im(), out.digits),
                r.terms_used.to_string(),
                r.converged.to_string(),
            ],
            Err(e) => {
                eprintln!("note: z = {zr}{zi:+}i failed: {e}");
                [zr.to_string(), zi.to_string(), "NaN".into(), "NaN".into(), "0".into(), "false".into()]
            }
        };
        w.write_record(&row).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    emit(out.out.as_deref(), &String::from_utf8(bytes).expect("ascii"))
}

pub fn write_csv(header: &[&str], rows: &[Vec<String>], out: Option<&Path>) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(header).map_err(csv_err)?;
    for r in rows {
        w.write_record(r).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    emit(out, &String::from_utf8(bytes).expect("ascii"))
}
