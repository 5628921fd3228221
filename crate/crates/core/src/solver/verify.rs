use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Cplx;
use crate::series::EvaluationResult;

use super::equation::{Form, LinearDifferenceEquation};

#[derive(Clone, Debug, Serialize)]
pub struct PointResidual {
    pub z: (f64, f64),
    /// `|Σ qⱼ(z)·y(z+j)|`
    pub residual: f64,
    /// `residual / max_j |qⱼ(z)·y(z+j)|`, or 0 when every term vanishes.
    pub relative: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidualReport {
    pub points: Vec<PointResidual>,
    pub max_relative: f64,
}

impl ResidualReport {
    pub fn passes(&self, eps: f64) -> bool {
        self.max_relative < eps
    }
}

/// Shift-form residual of a candidate solution at each point. Evaluation
/// errors and unconverged sums abort the check.
pub fn verify_solution<F>(eq: &LinearDifferenceEquation, y_at: F, points: &[Cplx]) -> Result<ResidualReport>
where
    F: Fn(&Cplx) -> Result<EvaluationResult> + Sync,
{
    let eq = match eq.form() {
        Form::Shift => eq.clone(),
        Form::Delta => eq.to_shift_form(),
    };
    let points: Vec<PointResidual> = points
        .par_iter()
        .map(|z| {
            let mut sum = Cplx::zero(z.prec());
            let mut scale = 0.0f64;
            for (j, qj) in eq.coeffs().iter().enumerate() {
                if qj.is_zero() {
                    continue;
                }
                let w = z.add_i64(j as i64);
                let r = y_at(&w)?;
                if !r.converged {
                    return Err(Error::NotConverged { z: w.to_string(), terms: r.terms_used });
                }
                let t = &qj.eval_cplx(&z.with_prec(r.value.prec())) * &r.value;
                scale = scale.max(t.abs_f64());
                sum = &sum + &t;
            }
            let residual = sum.abs_f64();
            let relative = if scale == 0.0 { 0.0 } else { residual / scale };
            Ok(PointResidual { z: z.to_f64(), residual, relative })
        })
        .collect::<Result<_>>()?;
    let max_relative = points.iter().map(|p| p.relative).fold(0.0, f64::max);
    Ok(ResidualReport { points, max_relative })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;
    use crate::series::{BinomialSeries, EvalConfig};

    #[test]
    fn coefficients_are_taken_at_z() {
        // y = z solves z·y(z+1) - (z+1)·y(z) = 0
        let eq =
            LinearDifferenceEquation::shift(vec![Polynomial::from_ints(&[-1, -1]), Polynomial::from_ints(&[0, 1])])
                .unwrap();
        let y = BinomialSeries::from_ints(&[0, 1]);
        let cfg = EvalConfig::default();
        let pts = [Cplx::from_f64(128, 0.5, 0.0), Cplx::from_f64(128, -2.25, 3.0)];
        let rep = verify_solution(&eq, |z| y.evaluate(z, &cfg), &pts).unwrap();
        assert!(rep.passes(1e-30), "{}", rep.max_relative);
    }
}
