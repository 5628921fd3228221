//! Linear difference equations with polynomial coefficients and their formal
//! binomial-series solutions.

mod continuation;
mod equation;
mod polygon;
mod recurrence;
mod verify;

pub use continuation::{continuation_eval, default_threshold, ContinuationConfig};
pub use equation::{Form, LinearDifferenceEquation};
pub use polygon::{newton_polygon, NewtonPolygon};
pub use recurrence::{derive_recurrence, solve_recurrence, CoefficientRecurrence, LinearConstraint};
pub use verify::{verify_solution, PointResidual, ResidualReport};

use crate::analysis::{classify, ClassifyConfig, GrowthEstimate};
use crate::error::Result;
use crate::scalar::ExactScalar;
use crate::series::BinomialSeries;

/// Initial data for [`formal_solve`].
#[derive(Clone, Debug, Default)]
pub struct InitialData {
    pub free: Vec<(usize, ExactScalar)>,
    pub constraints: Vec<LinearConstraint>,
}

impl InitialData {
    pub fn free(mut self, k: usize, v: ExactScalar) -> Self {
        self.free.push((k, v));
        self
    }

    pub fn constraint(mut self, c: LinearConstraint) -> Self {
        self.constraints.push(c);
        self
    }
}

/// Recurrence, coefficients `a₀ … a_n`, and growth classification.
pub fn formal_solve(
    eq: &LinearDifferenceEquation,
    data: &InitialData,
    n: usize,
    cfg: &ClassifyConfig,
) -> Result<(BinomialSeries, GrowthEstimate)> {
    let rec = derive_recurrence(eq)?;
    let a = solve_recurrence(&rec, &data.free, &data.constraints, n)?;
    let series = BinomialSeries::exact(a).with_origin(format!("solve: {eq}"));
    let growth = classify(series.coeffs(), cfg);
    Ok((series, growth))
}
