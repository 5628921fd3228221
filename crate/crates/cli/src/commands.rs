use std::fs;
use std::path::Path;

use fallfact::analysis::{classify, fit_order_type, modulus_profile, ClassifyConfig, GrowthEstimate};
use fallfact::basis::{binomial_to_poly, poly_to_binomial};
use fallfact::catalog::examples;
use fallfact::error::{Error, Result};
use fallfact::interp::{newton_series, Samples};
use fallfact::json;
use fallfact::riccati::{riccati_coefficient, sample_points, verify_riccati, RiccatiInstance};
use fallfact::scalar::{Cplx, ExactScalar};
use fallfact::series::{Acceleration, BinomialSeries, EvalConfig};
use fallfact::solver::{
    continuation_eval, derive_recurrence, formal_solve, newton_polygon, ContinuationConfig, Form, InitialData,
    LinearConstraint,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::io::{emit, grid, point_from_value, read_json, read_points, write_csv, write_eval_csv};
use crate::{Cli, Command, RiccatiAction, RiccatiParams, RunConfig, Target};

impl RunConfig {
    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidInput(m.into()));
        if self.precision < 53 {
            return bad("precision must be at least 53 bits");
        }
        if self.eps.is_nan() || self.eps <= 0.0 {
            return bad("eps must be positive");
        }
        if self.n_max < 16 {
            return bad("n-max must be at least 16");
        }
        if !(self.window > 0.0 && self.window <= 1.0) {
            return bad("window must lie in (0, 1]");
        }
        if self.consecutive_small_terms == 0 {
            return bad("consecutive-small-terms must be at least 1");
        }
        Ok(())
    }

    fn eval(&self) -> EvalConfig {
        EvalConfig {
            eps: self.eps,
            n_max: self.n_max,
            window: self.consecutive_small_terms,
            precision_bits: self.precision,
            acceleration: match self.averaging {
                Some(levels) => Acceleration::Averaging { levels },
                None => Acceleration::None,
            },
        }
    }

    fn classify(&self) -> ClassifyConfig {
        ClassifyConfig { window_fraction: self.window, ..Default::default() }
    }
}

pub fn run(cli: &Cli) -> Result<()> {
    let run = &cli.run;
    run.validate()?;
    match &cli.command {
        Command::Solve { eq, free, constraint, n, out, analysis } => {
            solve(run, eq, free, constraint, *n, out.as_deref(), analysis.as_deref())
        }
        Command::Eval { series, grid: g, offset, strict, output } => {
            let doc = read_json(series)?;
            let y = json::series_from_value(&doc)?;
            let shift = match offset {
                Some(s) => Some(Cplx::parse(run.precision, s)?),
                None => match doc.get("offset") {
                    Some(v) => Some(point_from_value(v, run.precision)?),
                    None => None,
                },
            };
            let points = grid(g, run.precision)?;
            let cfg = run.eval();
            let results: Vec<_> = points
                .par_iter()
                .map(|z| {
                    let w = match &shift {
                        Some(a) => z - a,
                        None => z.clone(),
                    };
                    y.evaluate(&w, &cfg)
                })
                .collect();
            write_eval_csv(&points, &results, output)?;
            strict_check(*strict, &points, &results)
        }
        Command::ContinueEval { eq, series, grid: g, threshold, max_depth, strict, output } => {
            let eq = json::equation_from_value(&read_json(eq)?)?.equation;
            let y = json::series_from_value(&read_json(series)?)?;
            let points = grid(g, run.precision)?;
            let cfg = ContinuationConfig { eval: run.eval(), re_threshold: *threshold, max_depth: *max_depth };
            let results: Vec<_> = points.par_iter().map(|z| continuation_eval(&eq, &y, z, &cfg)).collect();
            write_eval_csv(&points, &results, output)?;
            // a single requested point that hits a pole is reported as such
            if let [Err(e @ (Error::Pole { .. } | Error::DepthExceeded { .. }))] = &results[..] {
                return Err(clone_error(e));
            }
            strict_check(*strict, &points, &results)
        }
        Command::Analyze { series, radii, samples, profile, out } => {
            analyze(run, series, radii, *samples, profile.as_deref(), out.as_deref())
        }
        Command::Polygon { eq } => {
            let eq = json::equation_from_value(&read_json(eq)?)?.equation;
            emit(None, &json::to_pretty(&json::polygon_to_value(&newton_polygon(&eq))))
        }
        Command::Riccati { params, action } => match action {
            None => {
                let (a, b, c) = riccati_params(params)?;
                println!("{}", riccati_coefficient(&a, &b, &c)?);
                Ok(())
            }
            Some(RiccatiAction::Verify { params, n, points, random, seed, free, constraint, max_residual, output }) => {
                let (a, b, c) = riccati_params(params)?;
                let inst = RiccatiInstance::new(a, b, c)?;
                let y = if free.is_empty() && constraint.is_empty() {
                    inst.minimal_solution(*n)?
                } else {
                    let data = initial_data(InitialData::default(), free, constraint)?;
                    formal_solve(&inst.linear_eq, &data, *n, &run.classify())?.0
                };
                let prec = run.precision;
                let pts = match points {
                    Some(p) => read_points(p, prec)?,
                    None => {
                        let guards = [inst.transform_denominator(), inst.coefficient.denominator().clone()];
                        sample_points(*seed, *random, (0.0, 5.0), (0.0, 0.0), &guards, prec)
                    }
                };
                let cfg = run.eval();
                let y_at = |z: &Cplx| y.value_at(z, &cfg);
                let report = verify_riccati(|z: &Cplx| inst.transform(y_at, z), &inst.coefficient, &pts)?;
                let rows: Vec<Vec<String>> = report
                    .points
                    .iter()
                    .map(|p| {
                        vec![
                            p.z.0.to_string(),
                            p.z.1.to_string(),
                            p.residual.map(|r| format!("{r:e}")).unwrap_or_default(),
                        ]
                    })
                    .collect();
                write_csv(&["z_re", "z_im", "residual"], &rows, output.out.as_deref())?;
                for p in report.points.iter().filter(|p| p.note.is_some()) {
                    eprintln!("note: z = {}{:+}i skipped: {}", p.z.0, p.z.1, p.note.as_deref().unwrap_or(""));
                }
                match max_residual {
                    Some(tol) if report.max_residual > *tol => Err(Error::NotConverged {
                        z: format!("max residual {:e} exceeds {tol:e}", report.max_residual),
                        terms: y.len(),
                    }),
                    _ => Ok(()),
                }
            }
        },
        Command::Interp { samples, exact, offset, assume_carlson, out } => {
            let v = read_json(samples)?;
            let arr = v.as_array().ok_or_else(|| Error::Parse("samples file must hold an array".into()))?;
            let samples = if *exact {
                Samples::Exact(arr.iter().map(json::scalar_from_value).collect::<Result<_>>()?)
            } else {
                let values = arr.iter().map(|p| point_from_value(p, run.precision)).collect::<Result<_>>()?;
                Samples::Approx { precision_bits: run.precision, values }
            };
            let y = newton_series(&samples)?;
            let mut doc = json::series_to_value(&y);
            if let Some(a) = offset {
                Cplx::parse(run.precision, a)?;
                doc["offset"] = Value::String(a.clone());
            }
            if *assume_carlson {
                doc["assumptions"] = json!(["carlson"]);
                eprintln!(
                    "note: the growth condition on f is assumed, not checked; agreement between f and the series \
                     off the integers rests on it"
                );
            } else {
                eprintln!(
                    "note: the series matches the samples at 0..{}; agreement elsewhere is not implied",
                    arr.len().saturating_sub(1)
                );
            }
            emit(out.as_deref(), &json::to_pretty(&doc))
        }
        Command::Convert { eq, poly, to, out } => convert(eq.as_deref(), poly.as_deref(), *to, out.as_deref()),
        Command::SeedExamples { dir } => {
            fs::create_dir_all(dir)?;
            for ex in examples() {
                let path = dir.join(format!("{}.json", ex.name));
                fs::write(&path, json::to_pretty(&json::example_to_value(&ex)))?;
                println!("{}", path.display());
            }
            Ok(())
        }
    }
}

fn clone_error(e: &Error) -> Error {
    match e {
        Error::Pole { at, what } => Error::Pole { at: at.clone(), what: what.clone() },
        Error::DepthExceeded { steps, cap } => Error::DepthExceeded { steps: *steps, cap: *cap },
        other => Error::InvalidInput(other.to_string()),
    }
}

fn strict_check(strict: bool, points: &[Cplx], results: &[Result<fallfact::series::EvaluationResult>]) -> Result<()> {
    if !strict {
        return Ok(());
    }
    for (z, r) in points.iter().zip(results) {
        match r {
            Ok(r) if r.converged => {}
            Ok(r) => return Err(Error::NotConverged { z: z.to_string(), terms: r.terms_used }),
            Err(e) => return Err(Error::NotConverged { z: format!("{z} ({e})"), terms: 0 }),
        }
    }
    Ok(())
}

fn initial_data(mut data: InitialData, free: &[String], constraint: &[String]) -> Result<InitialData> {
    for f in free {
        let (k, v) = json::parse_free_assignment(f)?;
        data.free.retain(|(j, _)| *j != k);
        data.free.push((k, v));
    }
    data.free.sort_by_key(|(k, _)| *k);
    for c in constraint {
        data.constraints.push(c.parse::<LinearConstraint>()?);
    }
    Ok(data)
}

fn growth_to_value(g: &GrowthEstimate) -> Value {
    let mut v = json!({
        "chi": g.chi,
        "window": [g.window.0, g.window.1],
        "s_trace": g.s_trace.iter().map(|(n, s)| json!([n, s])).collect::<Vec<_>>(),
        "class": g.classification.label(),
        "K": g.k,
        "rho_fit": g.rho_fit,
        "tau_fit": g.tau_fit,
    });
    if !g.chi_flags.is_empty() {
        v["flags"] = serde_json::to_value(&g.chi_flags).expect("plain data");
    }
    v
}

fn solve(
    run: &RunConfig,
    eq_path: &Path,
    free: &[String],
    constraint: &[String],
    n: usize,
    out: Option<&Path>,
    analysis: Option<&Path>,
) -> Result<()> {
    let file = json::equation_from_value(&read_json(eq_path)?)?;
    let data = initial_data(file.initial, free, constraint)?;
    let rec = derive_recurrence(&file.equation)?;
    let (y, growth) = formal_solve(&file.equation, &data, n, &run.classify())?;
    let mut doc = json!({ "recurrence": rec.to_string() });
    let series = json::series_to_value(&y);
    match out {
        Some(p) => fs::write(p, json::to_pretty(&series))?,
        None => doc["series"] = series,
    }
    let growth = growth_to_value(&growth);
    match analysis {
        Some(p) => fs::write(p, json::to_pretty(&growth))?,
        None => doc["analysis"] = growth,
    }
    emit(None, &json::to_pretty(&doc))
}

fn analyze(
    run: &RunConfig,
    series: &Path,
    radii: &[f64],
    samples: usize,
    profile_out: Option<&Path>,
    out: Option<&Path>,
) -> Result<()> {
    let y: BinomialSeries = json::series_from_value(&read_json(series)?)?;
    let mut growth = classify(y.coeffs(), &run.classify());
    if !radii.is_empty() {
        let cfg = run.eval();
        let profile = modulus_profile(|z| y.evaluate(z, &cfg), radii, samples, run.precision)?;
        match fit_order_type(&profile) {
            Ok((rho, tau)) => {
                growth.rho_fit = Some(rho);
                growth.tau_fit = Some(tau);
            }
            Err(e) => eprintln!("note: no order fit: {e}"),
        }
        if let Some(p) = profile_out {
            let rows: Vec<Vec<String>> = profile
                .radii
                .iter()
                .zip(&profile.ln_max_modulus)
                .map(|(r, l)| match l {
                    Some(l) => vec![r.to_string(), l.exp().to_string(), l.to_string()],
                    None => vec![r.to_string(), String::new(), String::new()],
                })
                .collect();
            write_csv(&["r", "M", "ln_M"], &rows, Some(p))?;
        }
    }
    emit(out, &json::to_pretty(&growth_to_value(&growth)))
}

fn riccati_params(p: &RiccatiParams) -> Result<(ExactScalar, ExactScalar, ExactScalar)> {
    let get = |v: &Option<String>, name: &str| -> Result<ExactScalar> {
        v.as_deref().ok_or_else(|| Error::InvalidInput(format!("missing --{name}")))?.parse()
    };
    Ok((get(&p.a, "a")?, get(&p.b, "b")?, get(&p.c, "c")?))
}

fn convert(eq: Option<&Path>, poly: Option<&Path>, to: Target, out: Option<&Path>) -> Result<()> {
    let value = match (eq, poly) {
        (Some(path), _) => {
            let file = json::equation_from_value(&read_json(path)?)?;
            let converted = match (to, file.equation.form()) {
                (Target::Delta, Form::Shift) => file.equation.to_delta_form(),
                (Target::Shift, Form::Delta) => file.equation.to_shift_form(),
                (Target::Delta | Target::Shift, _) => file.equation.clone(),
                _ => return Err(Error::InvalidInput("equations convert to delta or shift".into())),
            };
            json::equation_to_value(&converted, &file.initial)
        }
        (None, Some(path)) => {
            let v = read_json(path)?;
            let arr = v.as_array().ok_or_else(|| Error::Parse("polynomial must be an array".into()))?;
            let c: Vec<ExactScalar> = arr.iter().map(json::scalar_from_value).collect::<Result<_>>()?;
            match to {
                Target::Binomial => {
                    let b = poly_to_binomial(&fallfact::poly::Polynomial::new(c));
                    Value::Array(b.iter().map(json::scalar_to_value).collect())
                }
                Target::Monomial => json::polynomial_to_value(&binomial_to_poly(&c)),
                _ => return Err(Error::InvalidInput("polynomials convert to binomial or monomial".into())),
            }
        }
        (None, None) => return Err(Error::InvalidInput("give --eq or --poly".into())),
    };
    emit(out, &json::to_pretty(&value))
}
