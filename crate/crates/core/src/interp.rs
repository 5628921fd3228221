//! Newton interpolation from samples at `0, 1, …, N`:
//!
//! ```text
//! F(z) = Σ Δⁿf(0)/n! · z^(n)
//! ```
//!
//! `F` agrees with `f` at every sampled integer. Whether it agrees with `f`
//! elsewhere depends on growth conditions on `f` that finite data cannot
//! confirm.

use rayon::prelude::*;
use rug::{Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{binomial, factorial, Coefficient, Cplx, ExactScalar};
use crate::series::{BinomialSeries, Coeffs, EvalConfig};

/// Above this many samples, float samples are differenced in exact arithmetic.
pub const EXACT_DIFFERENCE_THRESHOLD: usize = 50;

#[derive(Clone, Debug, PartialEq)]
pub enum Samples {
    Exact(Vec<ExactScalar>),
    Approx { precision_bits: u32, values: Vec<Cplx> },
}

impl Samples {
    pub fn len(&self) -> usize {
        match self {
            Samples::Exact(v) => v.len(),
            Samples::Approx { values, .. } => values.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// The top edge `Δⁿf(0)` of the difference table.
pub fn forward_differences<C: Coefficient>(values: &[C]) -> Vec<C> {
    let mut row = values.to_vec();
    let mut out = Vec::with_capacity(values.len());
    while let Some(first) = row.first() {
        out.push(first.clone());
        row = row.windows(2).map(|w| w[1].minus(&w[0])).collect();
    }
    out
}

/// `Δⁿf(0) = Σⱼ C(n,j)(-1)^{n-j} f(j)`, computed directly.
pub fn forward_differences_direct<C: Coefficient>(values: &[C], ctx: C::Ctx) -> Vec<C> {
    (0..values.len())
        .map(|n| {
            (0..=n).fold(C::zero(ctx), |acc, j| {
                let c = ExactScalar::from(binomial(n as u32, j as u32));
                let t = values[j].mul_exact(&c);
                if (n - j) % 2 == 1 {
                    acc.minus(&t)
                } else {
                    acc.plus(&t)
                }
            })
        })
        .collect()
}

/// `Δⁿf(0)` as a full triangular table, row `n` holding `Δⁿf(0), Δⁿf(1), …`.
pub fn difference_table<C: Coefficient>(values: &[C]) -> Vec<Vec<C>> {
    let mut rows = vec![values.to_vec()];
    while rows.last().is_some_and(|r| r.len() > 1) {
        let r = rows.last().expect("nonempty");
        rows.push(r.windows(2).map(|w| w[1].minus(&w[0])).collect());
    }
    rows
}

fn float_to_exact(c: &Cplx) -> Option<ExactScalar> {
    Some(ExactScalar::new(c.re().to_rational()?, c.im().to_rational()?))
}

/// `aₙ = Δⁿf(0)/n!`; the series is truncated at `N`. Long float inputs are
/// differenced exactly (each float is a dyadic rational) and cast back.
pub fn newton_series(samples: &Samples) -> Result<BinomialSeries> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("need at least one sample".into()));
    }
    let inv_fact = |n: usize| ExactScalar::from(Rational::from((Integer::from(1), factorial(n as u32))));
    let coeffs = match samples {
        Samples::Exact(v) => {
            Coeffs::Exact(forward_differences(v).iter().enumerate().map(|(n, d)| d * &inv_fact(n)).collect())
        }
        Samples::Approx { precision_bits, values } if values.len() > EXACT_DIFFERENCE_THRESHOLD => {
            let exact: Vec<ExactScalar> = values
                .iter()
                .map(float_to_exact)
                .collect::<Option<_>>()
                .ok_or_else(|| Error::InvalidInput("non-finite sample".into()))?;
            let prec = *precision_bits;
            Coeffs::Approx {
                precision_bits: prec,
                values: forward_differences(&exact)
                    .iter()
                    .enumerate()
                    .map(|(n, d)| (d * &inv_fact(n)).to_cplx(prec))
                    .collect(),
            }
        }
        Samples::Approx { precision_bits, values } => Coeffs::Approx {
            precision_bits: *precision_bits,
            values: forward_differences(values).iter().enumerate().map(|(n, d)| d.mul_exact(&inv_fact(n))).collect(),
        },
    };
    Ok(BinomialSeries::new(coeffs, Default::default()).with_origin("interp"))
}

#[derive(Clone, Debug, Serialize)]
pub struct Deviation {
    pub z: (f64, f64),
    pub deviation: f64,
    pub converged: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReconstructReport {
    pub points: Vec<Deviation>,
    /// Largest deviation over the converged points.
    pub max_deviation: f64,
    pub all_converged: bool,
}

/// `|f(z) - F(z)|` at each point. Unconverged points are flagged and left out
/// of the maximum rather than treated as errors.
pub fn reconstruct_check<F>(
    f_oracle: F,
    series: &BinomialSeries,
    points: &[Cplx],
    cfg: &EvalConfig,
) -> Result<ReconstructReport>
where
    F: Fn(&Cplx) -> Cplx + Sync,
{
    let points: Vec<Deviation> = points
        .par_iter()
        .map(|z| {
            let r = series.evaluate(z, cfg)?;
            let want = f_oracle(&z.with_prec(r.value.prec()));
            Ok(Deviation { z: z.to_f64(), deviation: (&want - &r.value).abs_f64(), converged: r.converged })
        })
        .collect::<Result<_>>()?;
    let max_deviation = points.iter().filter(|p| p.converged).map(|p| p.deviation).fold(0.0, f64::max);
    let all_converged = points.iter().all(|p| p.converged);
    Ok(ReconstructReport { points, max_deviation, all_converged })
}
