//! Difference Riccati equations `f(z+1) = (f(z) + A(z)) / (1 - f(z))` obtained
//! from second-order linear equations `(az+b)Δ²y + cΔy + y = 0`.
//!
//! With `g = -Δy/y` the linear equation becomes the first-order relation
//!
//! ```text
//! g(z+1)·((az+b) - (az+b)·g(z)) = 1 + (az+b-c)·g(z)
//! ```
//!
//! and `f = (2(az-a+b)·g - c) / (2az-2a+2b-c)` then satisfies the Riccati
//! equation with
//!
//! ```text
//! A(z) = (4az - 4a + 4b + 2ac - c²) / ((2az+2b-c)(2az+2b-2a-c))
//! ```

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rug::Float;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::{Polynomial, RationalFunction};
use crate::scalar::{Cplx, ExactScalar};
use crate::series::BinomialSeries;
use crate::solver::{derive_recurrence, LinearDifferenceEquation};

/// Guard distance used by [`sample_points`].
pub const MIN_DENOMINATOR: f64 = 0.1;

fn linear(slope: &ExactScalar, constant: &ExactScalar) -> Polynomial {
    Polynomial::new(vec![constant.clone(), slope.clone()])
}

/// `A(z)` for parameters `(a, b, c)`, reduced. Fails for `a = 0`.
pub fn riccati_coefficient(a: &ExactScalar, b: &ExactScalar, c: &ExactScalar) -> Result<RationalFunction> {
    if a.is_zero() {
        return Err(Error::InvalidInput("parameter a must be nonzero".into()));
    }
    let four = ExactScalar::from(4);
    let two = ExactScalar::from(2);
    let num_const = &(&(&(&four * b) - &(&four * a)) + &(&(&two * a) * c)) - &(c * c);
    let num = linear(&(&four * a), &num_const);
    let d1 = linear(&(&two * a), &(&(&two * b) - c));
    let d2 = linear(&(&two * a), &(&(&(&two * b) - &(&two * a)) - c));
    RationalFunction::new(num, &d1 * &d2).ok_or_else(|| Error::InvalidInput("zero denominator".into()))
}

#[derive(Clone, Debug)]
pub struct RiccatiInstance {
    pub a: ExactScalar,
    pub b: ExactScalar,
    pub c: ExactScalar,
    pub coefficient: RationalFunction,
    /// `(az+b)Δ²y + cΔy + y = 0`
    pub linear_eq: LinearDifferenceEquation,
}

impl RiccatiInstance {
    pub fn new(a: ExactScalar, b: ExactScalar, c: ExactScalar) -> Result<Self> {
        let coefficient = riccati_coefficient(&a, &b, &c)?;
        let linear_eq = LinearDifferenceEquation::delta(vec![
            Polynomial::from_ints(&[1]),
            Polynomial::constant(c.clone()),
            linear(&a, &b),
        ])?;
        Ok(RiccatiInstance { a, b, c, coefficient, linear_eq })
    }

    /// `2az - 2a + 2b - c`, the denominator of the transform.
    pub fn transform_denominator(&self) -> Polynomial {
        let two = ExactScalar::from(2);
        linear(&(&two * &self.a), &(&(&(&two * &self.b) - &(&two * &self.a)) - &self.c))
    }

    /// `2(az - a + b)`
    fn transform_numerator(&self) -> Polynomial {
        let two = ExactScalar::from(2);
        linear(&(&two * &self.a), &(&two * &(&self.b - &self.a)))
    }

    /// `az + b`
    pub fn leading(&self) -> Polynomial {
        linear(&self.a, &self.b)
    }

    /// Coefficients `a₀ … a_n` of the solution whose coefficients decay
    /// fastest, normalized to `a₀ = 1`. Runs the coefficient recurrence
    /// backwards from `a_M = 1, a_{M+1} = 0` with `M = 2n + 20`, in exact
    /// arithmetic; the result is that of the true minimal solution up to a
    /// relative error of the order of the ratio of the two solutions at `M`.
    pub fn minimal_solution(&self, n: usize) -> Result<BinomialSeries> {
        let rec = derive_recurrence(&self.linear_eq)?;
        if rec.order() != 2 || rec.n_start != 0 || !rec.prefix_constraints.is_empty() {
            return Err(Error::InvalidInput(format!("unexpected recurrence shape: {rec}")));
        }
        let m = 2 * n + 20;
        let mut a = vec![ExactScalar::zero(); m + 2];
        a[m] = ExactScalar::one();
        for k in (0..m).rev() {
            let q0 = rec.q[0].eval_i64(k as i64);
            if q0.is_zero() {
                return Err(Error::SingularIndex { n: k, order: 0 });
            }
            let s = &(&rec.q[1].eval_i64(k as i64) * &a[k + 1]) + &(&rec.q[2].eval_i64(k as i64) * &a[k + 2]);
            a[k] = (-&s).checked_div(&q0).expect("nonzero");
        }
        let a0 = a[0].clone();
        if a0.is_zero() {
            return Err(Error::Underdetermined { missing: 1 });
        }
        a.truncate(n + 1);
        let a = a.iter().map(|v| v.checked_div(&a0).expect("nonzero")).collect();
        Ok(BinomialSeries::exact(a).with_origin(format!("minimal solution of {}", self.linear_eq)))
    }

    /// `f(z)` built from a solution `y` of the linear equation.
    pub fn transform<F>(&self, y_at: F, z: &Cplx) -> Result<Cplx>
    where
        F: Fn(&Cplx) -> Result<Cplx>,
    {
        let den = self.transform_denominator().eval_cplx(z);
        if negligible(&den, 1.0) {
            return Err(Error::pole(z, "2az-2a+2b-c vanishes"));
        }
        let g = g_value(&y_at, z)?;
        let num = &(&self.transform_numerator().eval_cplx(z) * &g) - &self.c.to_cplx(z.prec());
        Ok(&num / &den)
    }

    /// Residual of `g(z+1)·((az+b) - (az+b)g(z)) - (1 + (az+b-c)g(z))`.
    pub fn g_step_check<F>(&self, y_at: F, z: &Cplx) -> Result<Cplx>
    where
        F: Fn(&Cplx) -> Result<Cplx>,
    {
        let g0 = g_value(&y_at, z)?;
        let g1 = g_value(&y_at, &z.add_i64(1))?;
        let l = self.leading().eval_cplx(z);
        let one = Cplx::from_i64(z.prec(), 1);
        let lhs = &g1 * &(&l - &(&l * &g0));
        let lc = &l - &self.c.to_cplx(z.prec());
        Ok(&lhs - &(&one + &(&lc * &g0)))
    }
}

fn negligible(v: &Cplx, scale: f64) -> bool {
    let tiny = Float::with_val(v.prec(), Float::i_exp(1, -(v.prec() as i32) / 2));
    v.is_zero() || v.abs() < Float::with_val(v.prec(), tiny * scale.max(1.0))
}

/// `g(z) = -Δy(z)/y(z)`.
fn g_value<F>(y_at: &F, z: &Cplx) -> Result<Cplx>
where
    F: Fn(&Cplx) -> Result<Cplx>,
{
    let y0 = y_at(z)?;
    let y1 = y_at(&z.add_i64(1))?;
    if negligible(&y0, y1.abs_f64()) {
        return Err(Error::pole(z, "y vanishes, so f has a pole"));
    }
    Ok((&(&y1 - &y0) / &y0).neg())
}

#[derive(Clone, Debug, Serialize)]
pub struct RiccatiPoint {
    pub z: (f64, f64),
    /// `|f(z+1)(1 - f(z)) - f(z) - A(z)|`; `None` when the point was skipped.
    pub residual: Option<f64>,
    pub note: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RiccatiReport {
    pub points: Vec<RiccatiPoint>,
    pub max_residual: f64,
}

/// Checks `f(z+1)(1 - f(z)) = f(z) + A(z)` at each point. Points where
/// `f(z) ≈ 1` or `A` has a pole are skipped with a note.
pub fn verify_riccati<F>(f_at: F, a: &RationalFunction, points: &[Cplx]) -> Result<RiccatiReport>
where
    F: Fn(&Cplx) -> Result<Cplx>,
{
    let mut out = Vec::with_capacity(points.len());
    for z in points {
        let skip = |note: &str| RiccatiPoint { z: z.to_f64(), residual: None, note: Some(note.to_string()) };
        let f0 = f_at(z)?;
        let one = Cplx::from_i64(z.prec(), 1);
        let gap = &one - &f0;
        if gap.abs_f64() < 1e-8 {
            out.push(skip("f(z) = 1: breakdown point"));
            continue;
        }
        let Some(az) = a.eval_cplx(z) else {
            out.push(skip("A has a pole"));
            continue;
        };
        let f1 = f_at(&z.add_i64(1))?;
        let r = &(&(&f1 * &gap) - &f0) - &az;
        out.push(RiccatiPoint { z: z.to_f64(), residual: Some(r.abs_f64()), note: None });
    }
    let max_residual = out.iter().filter_map(|p| p.residual).fold(0.0, f64::max);
    Ok(RiccatiReport { points: out, max_residual })
}

/// Random points in a rectangle, resampled while any guard polynomial has
/// modulus below [`MIN_DENOMINATOR`]. Deterministic for a given seed.
pub fn sample_points(
    seed: u64,
    count: usize,
    re: (f64, f64),
    im: (f64, f64),
    guards: &[Polynomial],
    prec: u32,
) -> Vec<Cplx> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let x = rng.gen_range(re.0..=re.1);
        let y = if im.0 == im.1 { im.0 } else { rng.gen_range(im.0..=im.1) };
        let z = Cplx::from_f64(prec, x, y);
        if guards.iter().all(|g| g.eval_cplx(&z).abs_f64() >= MIN_DENOMINATOR) {
            out.push(z);
        }
    }
    out
}

/// Subintervals of `[lo, hi]` (split into `steps` pieces) on which the real
/// part of `y` changes sign.
pub fn sign_changes<F>(y_at: F, lo: f64, hi: f64, steps: usize, prec: u32) -> Result<Vec<(f64, f64)>>
where
    F: Fn(&Cplx) -> Result<Cplx>,
{
    let xs: Vec<f64> = (0..=steps).map(|k| lo + (hi - lo) * k as f64 / steps as f64).collect();
    let vals: Vec<f64> =
        xs.iter().map(|&x| y_at(&Cplx::from_f64(prec, x, 0.0)).map(|v| v.re().to_f64())).collect::<Result<_>>()?;
    Ok(xs.windows(2).zip(vals.windows(2)).filter(|(_, v)| v[0] * v[1] < 0.0).map(|(x, _)| (x[0], x[1])).collect())
}
