use rug::Float;

use crate::error::{Error, Result};
use crate::scalar::Cplx;
use crate::series::{BinomialSeries, EvalConfig, EvaluationResult};

use super::equation::{Form, LinearDifferenceEquation};

#[derive(Clone, Debug)]
pub struct ContinuationConfig {
    pub eval: EvalConfig,
    /// Points with `Re z` above this are evaluated directly. `None` picks
    /// `5 + √N/2` for a series of truncation order `N`.
    pub re_threshold: Option<f64>,
    pub max_depth: usize,
}

impl Default for ContinuationConfig {
    fn default() -> Self {
        ContinuationConfig { eval: EvalConfig::default(), re_threshold: None, max_depth: 10_000 }
    }
}

pub fn default_threshold(series: &BinomialSeries) -> f64 {
    5.0 + (series.truncation_order().unwrap_or(0) as f64).sqrt() / 2.0
}

/// `y(z)` for a solution of `Σ qⱼ(z)·y(z+j) = 0` given by `series` on the
/// right. Left of the threshold the equation is run backwards,
/// `y(z) = -(1/q₀(z))·Σ_{j≥1} qⱼ(z)·y(z+j)`, from directly evaluated values at
/// `z+K, …, z+K+p-1`.
pub fn continuation_eval(
    eq: &LinearDifferenceEquation,
    series: &BinomialSeries,
    z: &Cplx,
    cfg: &ContinuationConfig,
) -> Result<EvaluationResult> {
    let eq = match eq.form() {
        Form::Shift => eq.clone(),
        Form::Delta => eq.to_shift_form(),
    };
    let q = eq.coeffs();
    if q[0].is_zero() {
        return Err(Error::InvalidInput("coefficient of y(z) is identically zero".into()));
    }
    let prec = cfg.eval.precision_bits.max(z.prec());
    let z = z.with_prec(prec);
    let threshold = cfg.re_threshold.unwrap_or_else(|| default_threshold(series));
    let re = z.re().to_f64();
    let steps = if re > threshold { 0 } else { (threshold - re).floor() as usize + 1 };
    if steps == 0 {
        return series.evaluate(&z, &cfg.eval);
    }
    if steps > cfg.max_depth {
        return Err(Error::DepthExceeded { steps, cap: cfg.max_depth });
    }

    // Check every backward step for a vanishing q₀ before any evaluation.
    let tiny = Float::with_val(prec, Float::i_exp(1, -(prec as i32) / 2));
    let q0_at: Vec<Cplx> = (0..steps).map(|i| q[0].eval_cplx(&z.add_i64(i as i64))).collect();
    for (i, v) in q0_at.iter().enumerate().rev() {
        let scale = q[0].abs_scale(z.abs_f64() + i as f64).max(1.0);
        if v.is_zero() || v.abs() < Float::with_val(prec, &tiny * scale) {
            return Err(Error::pole(&z.add_i64(i as i64), "coefficient of y(z) vanishes"));
        }
    }

    let p = eq.order();
    let mut values: Vec<Option<Cplx>> = vec![None; steps + p];
    let mut summary = EvaluationResult {
        value: Cplx::zero(prec),
        terms_used: 0,
        last_term_magnitude: 0.0,
        tail_bound: 0.0,
        converged: true,
    };
    for (i, slot) in values.iter_mut().enumerate().skip(steps) {
        let r = series.evaluate(&z.add_i64(i as i64), &cfg.eval)?;
        summary.terms_used += r.terms_used;
        summary.last_term_magnitude = summary.last_term_magnitude.max(r.last_term_magnitude);
        summary.tail_bound = summary.tail_bound.max(r.tail_bound);
        summary.converged &= r.converged;
        *slot = Some(r.value);
    }
    for i in (0..steps).rev() {
        let w = z.add_i64(i as i64);
        let mut s = Cplx::zero(prec);
        for (j, qj) in q.iter().enumerate().skip(1) {
            let y = values[i + j].as_ref().expect("filled right to left");
            s = &s + &(&qj.eval_cplx(&w) * y);
        }
        values[i] = Some((&s / &q0_at[i]).neg());
    }
    summary.value = values[0].take().expect("computed");
    Ok(summary)
}
