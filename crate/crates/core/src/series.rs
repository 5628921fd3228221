//! Binomial series `Y(z) = Σ aₙ z^(n)` and their operator algebra.
//!
//! A series stores `a₀…a_N` plus a [`Tail`] saying what lies beyond `a_N`:
//! either nothing (a polynomial) or unknown coefficients (a truncation).
//! Every operation documents the length of its output under both tails.

use rug::{Float, Integer};

use crate::basis;
use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::{Coefficient, Cplx, ExactScalar};

/// Default working precision of approximate evaluation, in bits.
pub const DEFAULT_PRECISION: u32 = 128;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Tail {
    /// Coefficients past the stored ones are zero: the series is a polynomial.
    Terminating,
    /// Coefficients past the stored ones exist but are not known.
    #[default]
    Truncated,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Coeffs {
    Exact(Vec<ExactScalar>),
    Approx { precision_bits: u32, values: Vec<Cplx> },
}

/// Apply a regime-agnostic body to the coefficient vector, rebuilding the
/// same variant. `$ctx` is `()` for exact and the precision for approximate.
macro_rules! map_coeffs {
    ($c:expr, |$v:ident, $ctx:ident| $body:expr) => {
        match $c {
            Coeffs::Exact($v) => {
                #[allow(unused_variables)]
                let $ctx = ();
                Coeffs::Exact($body)
            }
            Coeffs::Approx { precision_bits, values: $v } => {
                #[allow(unused_variables)]
                let $ctx: u32 = *precision_bits;
                Coeffs::Approx { precision_bits: *precision_bits, values: $body }
            }
        }
    };
}

impl Coeffs {
    pub fn len(&self) -> usize {
        match self {
            Coeffs::Exact(v) => v.len(),
            Coeffs::Approx { values, .. } => values.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Coeffs::Exact(_))
    }

    /// `ln |aₙ|` per entry, `None` for zeros.
    pub fn ln_abs(&self) -> Vec<Option<f64>> {
        match self {
            Coeffs::Exact(v) => v.iter().map(ExactScalar::ln_abs).collect(),
            Coeffs::Approx { values, .. } => values.iter().map(Coefficient::ln_abs).collect(),
        }
    }

    pub fn to_approx(&self, prec: u32) -> Vec<Cplx> {
        match self {
            Coeffs::Exact(v) => v.iter().map(|c| c.to_cplx(prec)).collect(),
            Coeffs::Approx { values, .. } => values.iter().map(|c| c.with_prec(prec)).collect(),
        }
    }

    /// An empty list in the same regime.
    pub fn empty_like(&self) -> Coeffs {
        match self {
            Coeffs::Exact(_) => Coeffs::Exact(Vec::new()),
            Coeffs::Approx { precision_bits, .. } => {
                Coeffs::Approx { precision_bits: *precision_bits, values: Vec::new() }
            }
        }
    }

    fn truncate(&mut self, len: usize) {
        match self {
            Coeffs::Exact(v) => v.truncate(len),
            Coeffs::Approx { values, .. } => values.truncate(len),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BinomialSeries {
    coeffs: Coeffs,
    tail: Tail,
    origin: String,
}

impl BinomialSeries {
    pub fn new(coeffs: Coeffs, tail: Tail) -> Self {
        BinomialSeries { coeffs, tail, origin: String::new() }
    }

    /// Exact truncated series.
    pub fn exact(coeffs: Vec<ExactScalar>) -> Self {
        BinomialSeries::new(Coeffs::Exact(coeffs), Tail::Truncated)
    }

    /// Exact terminating series (a polynomial in the falling-factorial basis).
    pub fn polynomial(coeffs: Vec<ExactScalar>) -> Self {
        BinomialSeries::new(Coeffs::Exact(coeffs), Tail::Terminating)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        BinomialSeries::polynomial(coeffs.iter().map(|&c| ExactScalar::from(c)).collect())
    }

    /// Truncated series with `aₙ = f(n)` for `n ≤ n_max`.
    pub fn from_fn(n_max: usize, f: impl FnMut(usize) -> ExactScalar) -> Self {
        BinomialSeries::exact((0..=n_max).map(f).collect())
    }

    pub fn approx(precision_bits: u32, values: Vec<Cplx>) -> Self {
        BinomialSeries::new(Coeffs::Approx { precision_bits, values }, Tail::Truncated)
    }

    pub fn with_tail(mut self, tail: Tail) -> Self {
        self.tail = tail;
        self
    }

    pub fn with_origin(mut self, origin: impl Into<String>) -> Self {
        self.origin = origin.into();
        self
    }

    pub fn coeffs(&self) -> &Coeffs {
        &self.coeffs
    }

    pub fn exact_coeffs(&self) -> Option<&[ExactScalar]> {
        match &self.coeffs {
            Coeffs::Exact(v) => Some(v),
            Coeffs::Approx { .. } => None,
        }
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    pub fn origin(&self) -> &str {
        &self.origin
    }

    /// Number of stored coefficients, `N + 1`.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `N`, the index of the last stored coefficient.
    pub fn truncation_order(&self) -> Option<usize> {
        self.len().checked_sub(1)
    }

    /// True when every stored coefficient is zero.
    pub fn is_zero(&self) -> bool {
        match &self.coeffs {
            Coeffs::Exact(v) => v.iter().all(ExactScalar::is_zero),
            Coeffs::Approx { values, .. } => values.iter().all(Cplx::is_zero),
        }
    }

    pub fn to_approx(&self, prec: u32) -> BinomialSeries {
        BinomialSeries {
            coeffs: Coeffs::Approx { precision_bits: prec, values: self.coeffs.to_approx(prec) },
            tail: self.tail,
            origin: self.origin.clone(),
        }
    }

    fn derived(&self, coeffs: Coeffs, tail: Tail) -> BinomialSeries {
        BinomialSeries { coeffs, tail, origin: self.origin.clone() }
    }

    /// `ΔY`: `bₙ = (n+1)·a_{n+1}`. Length drops by one under both tails.
    pub fn delta(&self) -> BinomialSeries {
        self.derived(map_coeffs!(&self.coeffs, |v, ctx| delta_v(v)), self.tail)
    }

    /// `Δᵏ Y`.
    pub fn delta_pow(&self, k: usize) -> BinomialSeries {
        (0..k).fold(self.clone(), |acc, _| acc.delta())
    }

    /// `Y(z+m) = Σⱼ C(m,j) Δʲ Y`. A terminating series keeps its length;
    /// a truncated one loses `m` coefficients.
    pub fn shift(&self, m: usize) -> BinomialSeries {
        let len = match self.tail {
            Tail::Terminating => self.len(),
            Tail::Truncated => self.len().saturating_sub(m),
        };
        let coeffs = map_coeffs!(&self.coeffs, |v, ctx| shift_v(v, m, len, ctx));
        self.derived(coeffs, self.tail)
    }

    /// `z·Y`: `c₀ = 0`, `cₙ = n·aₙ + a_{n-1}`. A terminating series grows by one
    /// coefficient; a truncated one keeps its length, since `c_{N+1}` would
    /// need the unknown `a_{N+1}`.
    pub fn mul_by_z(&self) -> BinomialSeries {
        let grow = self.tail == Tail::Terminating;
        self.derived(map_coeffs!(&self.coeffs, |v, ctx| mul_z_v(v, ctx, grow)), self.tail)
    }

    /// `p(z)·Y` by Horner's scheme over [`mul_by_z`](Self::mul_by_z).
    pub fn mul_by_poly(&self, p: &Polynomial) -> BinomialSeries {
        let zero = self.derived(self.coeffs.empty_like(), self.tail);
        if p.is_zero() {
            return match self.tail {
                Tail::Terminating => zero,
                Tail::Truncated => self.scale(&ExactScalar::zero()),
            };
        }
        let mut acc: Option<BinomialSeries> = None;
        for c in p.coeffs().iter().rev() {
            let term = self.scale(c);
            acc = Some(match acc {
                None => term,
                Some(a) => linear_combine(&[(ExactScalar::one(), a.mul_by_z()), (ExactScalar::one(), term)])
                    .expect("same regime by construction"),
            });
        }
        acc.unwrap_or(zero)
    }

    /// `z·ΔᵏY` from the closed form: constant term 0 and, for `n ≥ 1`,
    /// `n(n+1)···(n+k-1)·((n+k)a_{n+k} + a_{n+k-1})`.
    pub fn z_delta_k(&self, k: usize) -> BinomialSeries {
        assert!(k >= 1, "z_delta_k needs k >= 1");
        let inner = self.len().saturating_sub(k);
        let len = match self.tail {
            Tail::Terminating if inner > 0 => inner + 1,
            _ => inner,
        };
        let coeffs = map_coeffs!(&self.coeffs, |v, ctx| z_delta_k_v(v, k, len, ctx));
        self.derived(coeffs, self.tail)
    }

    pub fn scale(&self, s: &ExactScalar) -> BinomialSeries {
        self.derived(map_coeffs!(&self.coeffs, |v, ctx| v.iter().map(|c| c.mul_exact(s)).collect()), self.tail)
    }

    /// Keep only the first `len` coefficients; the result is truncated.
    pub fn truncated(&self, len: usize) -> BinomialSeries {
        let mut c = self.coeffs.clone();
        c.truncate(len);
        let tail = if len >= self.len() { self.tail } else { Tail::Truncated };
        self.derived(c, tail)
    }

    /// Exact `Y(m)` at a nonnegative integer, when it is determined by the
    /// stored coefficients: `Σ_{n ≤ m} aₙ · m!/(m-n)!`.
    pub fn exact_value_at(&self, m: u64) -> Option<ExactScalar> {
        let a = self.exact_coeffs()?;
        if self.tail == Tail::Truncated && m as usize >= a.len() {
            return None;
        }
        let top = (m as usize).min(a.len().saturating_sub(1));
        let mut ff = Integer::from(1);
        let mut sum = ExactScalar::zero();
        for (n, an) in a.iter().enumerate().take(top + 1) {
            sum = &sum + &an.mul_integer(&ff);
            ff *= m as i64 - n as i64;
        }
        Some(sum)
    }

    pub fn evaluate(&self, z: &Cplx, cfg: &EvalConfig) -> Result<EvaluationResult> {
        evaluate(self, z, cfg)
    }

    /// The value at `z`, or [`Error::NotConverged`] if the sum did not settle.
    pub fn value_at(&self, z: &Cplx, cfg: &EvalConfig) -> Result<Cplx> {
        let r = evaluate(self, z, cfg)?;
        if r.converged {
            Ok(r.value)
        } else {
            Err(Error::NotConverged { z: z.to_string(), terms: r.terms_used })
        }
    }
}

fn delta_v<C: Coefficient>(a: &[C]) -> Vec<C> {
    a.iter().enumerate().skip(1).map(|(k, x)| x.mul_i64(k as i64)).collect()
}

fn shift_v<C: Coefficient>(a: &[C], m: usize, len: usize, ctx: C::Ctx) -> Vec<C> {
    let mut out = vec![C::zero(ctx); len];
    let mut d = a.to_vec();
    for j in 0..=m {
        let c = basis_binomial(m, j);
        for (o, x) in out.iter_mut().zip(d.iter()) {
            *o = o.plus(&x.mul_exact(&c));
        }
        d = delta_v(&d);
        if d.is_empty() {
            break;
        }
    }
    out
}

fn basis_binomial(m: usize, j: usize) -> ExactScalar {
    ExactScalar::from(crate::scalar::binomial(m as u32, j as u32))
}

fn mul_z_v<C: Coefficient>(a: &[C], ctx: C::Ctx, grow: bool) -> Vec<C> {
    if a.is_empty() {
        return Vec::new();
    }
    let len = if grow { a.len() + 1 } else { a.len() };
    (0..len)
        .map(|n| {
            let mut c = a.get(n).map(|x| x.mul_i64(n as i64)).unwrap_or_else(|| C::zero(ctx));
            if n >= 1 {
                c = c.plus(&a[n - 1]);
            }
            c
        })
        .collect()
}

fn z_delta_k_v<C: Coefficient>(a: &[C], k: usize, len: usize, ctx: C::Ctx) -> Vec<C> {
    let zero = C::zero(ctx);
    (0..len)
        .map(|n| {
            if n == 0 {
                return C::zero(ctx);
            }
            let hi = a.get(n + k).unwrap_or(&zero).mul_i64((n + k) as i64);
            let mut c = hi.plus(a.get(n + k - 1).unwrap_or(&zero));
            for f in n..n + k {
                c = c.mul_i64(f as i64);
            }
            c
        })
        .collect()
}

/// `Σ sᵢ·Yᵢ`. All inputs must share a regime. If every input terminates the
/// result terminates with the longest length; otherwise it is truncated at
/// the shortest truncated input.
pub fn linear_combine(terms: &[(ExactScalar, BinomialSeries)]) -> Result<BinomialSeries> {
    let Some((_, first)) = terms.first() else {
        return Err(Error::InvalidInput("linear_combine of an empty list".into()));
    };
    let exact = first.coeffs.is_exact();
    if terms.iter().any(|(_, y)| y.coeffs.is_exact() != exact) {
        return Err(Error::RegimeMismatch);
    }
    let truncated_len = terms.iter().filter(|(_, y)| y.tail == Tail::Truncated).map(|(_, y)| y.len()).min();
    let (len, tail) = match truncated_len {
        Some(l) => (l, Tail::Truncated),
        None => (terms.iter().map(|(_, y)| y.len()).max().unwrap_or(0), Tail::Terminating),
    };
    let coeffs = if exact {
        let mut out = vec![ExactScalar::zero(); len];
        for (s, y) in terms {
            for (o, c) in out.iter_mut().zip(y.exact_coeffs().unwrap_or_default()) {
                *o = &*o + &(c * s);
            }
        }
        Coeffs::Exact(out)
    } else {
        let prec = terms
            .iter()
            .map(|(_, y)| match &y.coeffs {
                Coeffs::Approx { precision_bits, .. } => *precision_bits,
                Coeffs::Exact(_) => 0,
            })
            .max()
            .unwrap_or(DEFAULT_PRECISION);
        let mut out = vec![Cplx::zero(prec); len];
        for (s, y) in terms {
            if let Coeffs::Approx { values, .. } = &y.coeffs {
                for (o, c) in out.iter_mut().zip(values) {
                    *o = &*o + &c.mul_exact(s);
                }
            }
        }
        Coeffs::Approx { precision_bits: prec, values: out }
    };
    Ok(BinomialSeries { coeffs, tail, origin: first.origin.clone() })
}

/// How partial sums are turned into a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Acceleration {
    /// Plain partial sums.
    #[default]
    None,
    /// Repeated averaging of neighbouring partial sums (`levels` rounds), which
    /// damps the slowly decaying oscillation typical near the boundary of the
    /// convergence half plane.
    Averaging { levels: usize },
}

#[derive(Clone, Debug)]
pub struct EvalConfig {
    pub eps: f64,
    pub n_max: usize,
    /// Consecutive small terms required before stopping.
    pub window: usize,
    pub precision_bits: u32,
    pub acceleration: Acceleration,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            eps: 1e-12,
            n_max: 10_000,
            window: 5,
            precision_bits: DEFAULT_PRECISION,
            acceleration: Acceleration::None,
        }
    }
}

impl EvalConfig {
    pub fn with_precision(mut self, bits: u32) -> Self {
        self.precision_bits = bits;
        self
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn with_acceleration(mut self, a: Acceleration) -> Self {
        self.acceleration = a;
        self
    }
}

#[derive(Clone, Debug)]
pub struct EvaluationResult {
    pub value: Cplx,
    pub terms_used: usize,
    /// Magnitude of the last term added; with averaging, of the last change
    /// in the averaged estimate.
    pub last_term_magnitude: f64,
    /// Geometric tail estimate from the last term ratio; infinite when the
    /// ratio is not below one.
    pub tail_bound: f64,
    pub converged: bool,
}

/// Partial sums of `Σ aₙ z^(n)` with `z^(n)` updated multiplicatively.
///
/// Stops once `window` consecutive terms satisfy `|t| < eps·max(1, |S|)` and
/// `n ≥ ⌈|z|⌉ + 5`. At a nonnegative integer `m ≤ N` the sum is finite and
/// reported converged; for exact coefficients it is computed exactly and cast.
/// Running out of coefficients or hitting `n_max` returns the last partial sum
/// with `converged = false`.
pub fn evaluate(y: &BinomialSeries, z: &Cplx, cfg: &EvalConfig) -> Result<EvaluationResult> {
    let prec = cfg.precision_bits.max(z.prec());
    let z = z.with_prec(prec);

    if let Some(m) = z.as_nonneg_integer() {
        if let Some(v) = y.exact_value_at(m) {
            return Ok(finite_result(v.to_cplx(prec), (m as usize + 1).min(y.len())));
        }
        if (m as usize) < y.len() {
            return sum_all(y, &z, prec, m as usize + 1);
        }
    }
    if y.tail == Tail::Terminating {
        return sum_all(y, &z, prec, y.len());
    }

    let a = y.coeffs.to_approx(prec);
    let limit = a.len().min(cfg.n_max);
    let min_index = z.abs_f64().ceil() as usize + 5;
    let mut ff = Cplx::from_i64(prec, 1);
    let mut partial = Cplx::zero(prec);
    let mut small = 0usize;
    let mut ln_terms: Vec<f64> = Vec::with_capacity(limit);
    let mut last_mag = f64::INFINITY;

    let levels = match cfg.acceleration {
        Acceleration::None => 0,
        Acceleration::Averaging { levels } => levels,
    };
    let weights: Vec<Float> = (0..=levels)
        .map(|i| {
            let c = Float::with_val(prec, crate::scalar::binomial(levels as u32, i as u32));
            c >> levels as u32
        })
        .collect();
    let mut sums: Vec<Cplx> = Vec::new();
    let mut prev_est: Option<Cplx> = None;
    let mut value = Cplx::zero(prec);

    for (n, an) in a.iter().enumerate().take(limit) {
        let term = an * &ff;
        if !term.is_finite() {
            return Err(Error::EvaluationOverflow { index: n });
        }
        partial = &partial + &term;
        let ln_t = if term.is_zero() { f64::NEG_INFINITY } else { term.ln_abs() };
        ln_terms.push(ln_t);
        let scale = partial.abs_f64().max(1.0);

        let (small_now, mag) = if levels == 0 {
            value = partial.clone();
            let mag = ln_t.exp();
            (mag < cfg.eps * scale, mag)
        } else {
            sums.push(partial.clone());
            if sums.len() > levels + 1 {
                sums.remove(0);
            }
            if sums.len() < levels + 1 {
                value = partial.clone();
                (false, f64::INFINITY)
            } else {
                let est = sums.iter().zip(&weights).fold(Cplx::zero(prec), |acc, (s, w)| {
                    &acc + &Cplx::new(Float::with_val(prec, s.re() * w), Float::with_val(prec, s.im() * w))
                });
                let mag = prev_est.as_ref().map_or(f64::INFINITY, |p| (&est - p).abs_f64());
                let decreasing = n >= cfg.window && (ln_t == f64::NEG_INFINITY || ln_t < ln_terms[n - cfg.window]);
                prev_est = Some(est.clone());
                value = est;
                (decreasing && mag < cfg.eps * value.abs_f64().max(1.0), mag)
            }
        };
        last_mag = mag;
        small = if small_now { small + 1 } else { 0 };
        if small >= cfg.window && n >= min_index {
            return Ok(EvaluationResult {
                value,
                terms_used: n + 1,
                last_term_magnitude: last_mag,
                tail_bound: ratio_tail(&ln_terms),
                converged: true,
            });
        }
        ff = &ff * &z.add_i64(-(n as i64));
    }
    Ok(EvaluationResult {
        value,
        terms_used: limit,
        last_term_magnitude: last_mag,
        tail_bound: ratio_tail(&ln_terms),
        converged: false,
    })
}

fn finite_result(value: Cplx, terms: usize) -> EvaluationResult {
    EvaluationResult { value, terms_used: terms, last_term_magnitude: 0.0, tail_bound: 0.0, converged: true }
}

fn sum_all(y: &BinomialSeries, z: &Cplx, prec: u32, count: usize) -> Result<EvaluationResult> {
    let a = y.coeffs.to_approx(prec);
    let mut ff = Cplx::from_i64(prec, 1);
    let mut s = Cplx::zero(prec);
    for (n, an) in a.iter().enumerate().take(count) {
        let t = an * &ff;
        if !t.is_finite() {
            return Err(Error::EvaluationOverflow { index: n });
        }
        s = &s + &t;
        ff = &ff * &z.add_i64(-(n as i64));
    }
    Ok(finite_result(s, count))
}

/// `|t|·r/(1-r)` with `r` the ratio of the last two nonzero term magnitudes.
fn ratio_tail(ln_terms: &[f64]) -> f64 {
    let nz: Vec<f64> = ln_terms.iter().rev().copied().filter(|t| t.is_finite()).take(2).collect();
    match nz.as_slice() {
        [] => 0.0,
        [last, prev] if last < prev => {
            let r = (last - prev).exp();
            last.exp() * r / (1.0 - r)
        }
        _ => f64::INFINITY,
    }
}

/// Result of a Taylor/binomial basis conversion of a truncated series.
#[derive(Clone, Debug)]
pub struct TaylorCoefficients {
    pub coeffs: Coeffs,
    /// Set when the input's χ estimate is at least 1: the inner sums are then
    /// at best conditionally convergent and the truncated values unreliable.
    pub chi_warning: bool,
}

/// `bₙ = Σ_{k=n}^{k_cut} a_k·η(n,k)` for `n ≤ m_max`.
pub fn taylor_from_binomial(y: &BinomialSeries, m_max: usize, k_cut: usize) -> Result<TaylorCoefficients> {
    let top = y.truncation_order().map_or(0, |n| n);
    if y.is_empty() || k_cut > top {
        return Err(Error::InvalidInput(format!("k_cut = {k_cut} exceeds the truncation order {top}")));
    }
    let rows: Vec<Vec<Integer>> = (0..=k_cut).map(basis::first_row_int).collect();
    let coeffs = convert(y.coeffs(), m_max, k_cut, &rows);
    Ok(TaylorCoefficients { coeffs, chi_warning: chi_flag(y.coeffs()) })
}

/// `aₙ = Σ_{k=n}^{k_cut} b_k·η̃(n,k)` for `n ≤ n_max`. The input is taken as
/// given; entries past its end count as zero.
pub fn binomial_from_taylor(b: &Coeffs, n_max: usize, k_cut: usize) -> BinomialSeries {
    let k_cut = k_cut.min(b.len().saturating_sub(1));
    let rows: Vec<Vec<Integer>> = (0..=k_cut).map(basis::second_row_int).collect();
    let coeffs = if b.is_empty() { b.empty_like() } else { convert(b, n_max, k_cut, &rows) };
    BinomialSeries::new(coeffs, Tail::Truncated)
}

fn convert(input: &Coeffs, out_max: usize, k_cut: usize, rows: &[Vec<Integer>]) -> Coeffs {
    map_coeffs!(input, |v, ctx| {
        (0..=out_max)
            .map(|n| {
                let mut acc = Coefficient::zero(ctx);
                for k in n..=k_cut.min(v.len() - 1) {
                    let s = &rows[k][n];
                    if *s != 0 && !Coefficient::is_zero(&v[k]) {
                        acc = Coefficient::plus(&acc, &v[k].mul_exact(&ExactScalar::from(s.clone())));
                    }
                }
                acc
            })
            .collect()
    })
}

fn chi_flag(c: &Coeffs) -> bool {
    if c.len() < crate::analysis::MIN_LENGTH {
        return false;
    }
    crate::analysis::chi_estimate(c, crate::analysis::DEFAULT_WINDOW).map(|e| e.value >= 1.0).unwrap_or(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::factorial;
    use rug::Rational;

    fn ints(v: &[i64]) -> Vec<ExactScalar> {
        v.iter().map(|&x| ExactScalar::from(x)).collect()
    }

    fn inv_fact(n: usize) -> ExactScalar {
        ExactScalar::from(Rational::from((1, factorial(n as u32))))
    }

    fn exact(y: &BinomialSeries) -> Vec<ExactScalar> {
        y.exact_coeffs().unwrap().to_vec()
    }

    fn z(re: f64, im: f64) -> Cplx {
        Cplx::from_f64(128, re, im)
    }

    #[test]
    fn delta_examples() {
        assert_eq!(exact(&BinomialSeries::from_ints(&[0, 0, 1]).delta()), ints(&[0, 2]));
        assert!(BinomialSeries::from_ints(&[7]).delta().is_empty());
        let e = BinomialSeries::from_fn(20, inv_fact);
        assert_eq!(exact(&e.delta()), exact(&BinomialSeries::from_fn(19, inv_fact)));
    }

    #[test]
    fn shift_examples() {
        assert_eq!(exact(&BinomialSeries::from_ints(&[0, 1]).shift(1)), ints(&[1, 1]));
        let y = BinomialSeries::from_ints(&[3, -2, 5]);
        assert_eq!(exact(&y.shift(0)), exact(&y));
        let e = BinomialSeries::from_fn(20, inv_fact);
        let shifted = e.shift(1);
        assert_eq!(shifted.len(), 20);
        let twice: Vec<_> = (0..20).map(|n| inv_fact(n).mul_i64(2)).collect();
        assert_eq!(exact(&shifted), twice);
    }

    #[test]
    fn mul_by_z_examples() {
        assert_eq!(exact(&BinomialSeries::from_ints(&[1]).mul_by_z()), ints(&[0, 1]));
        assert_eq!(exact(&BinomialSeries::from_ints(&[0, 1]).mul_by_z()), ints(&[0, 1, 1]));
        // truncated input keeps its length
        let t = BinomialSeries::exact(ints(&[1, 2, 3]));
        assert_eq!(exact(&t.mul_by_z()), ints(&[0, 3, 8]));
    }

    #[test]
    fn mul_by_z_squared_closed_form() {
        let y = BinomialSeries::from_ints(&[4, -1, 7, 2, -3, 5]);
        let a = exact(&y);
        let zz = exact(&y.mul_by_z().mul_by_z());
        assert_eq!(zz[0], ExactScalar::zero());
        assert_eq!(zz[1], &a[0] + &a[1]);
        for (n, got) in zz.iter().enumerate().skip(2) {
            let get = |i: usize| a.get(i).cloned().unwrap_or_default();
            let nn = n as i64;
            let expect = &(&get(n).mul_i64(nn * nn) + &get(n - 1).mul_i64(2 * nn - 1)) + &get(n - 2);
            assert_eq!(*got, expect, "n = {n}");
        }
        let p = Polynomial::monomial(2);
        assert_eq!(exact(&y.mul_by_poly(&p)), zz);
    }

    #[test]
    fn mul_by_poly_examples() {
        let y = BinomialSeries::from_ints(&[2, 5, -1]);
        assert_eq!(exact(&y.mul_by_poly(&Polynomial::from_ints(&[1]))), exact(&y));
        let r = BinomialSeries::from_ints(&[1]).mul_by_poly(&Polynomial::from_ints(&[-1, 1]));
        assert_eq!(exact(&r), ints(&[-1, 1]));
    }

    #[test]
    fn z_delta_k_matches_composition() {
        let y = BinomialSeries::from_ints(&[1, -2, 3, 5, -7, 11, 13, -1]);
        for k in 1..=5 {
            assert_eq!(exact(&y.z_delta_k(k)), exact(&y.delta_pow(k).mul_by_z()), "k = {k}");
        }
        let t = BinomialSeries::exact(ints(&[1, -2, 3, 5, -7, 11, 13, -1]));
        for k in 1..=5 {
            assert_eq!(exact(&t.z_delta_k(k)), exact(&t.delta_pow(k).mul_by_z()), "k = {k}");
        }
    }

    #[test]
    fn linear_combine_examples() {
        let y = BinomialSeries::from_ints(&[1, 2, 3]);
        let r = linear_combine(&[(ExactScalar::one(), y.clone()), (ExactScalar::from(-1), y)]).unwrap();
        assert!(r.is_zero());
        let r = linear_combine(&[
            (ExactScalar::from(2), BinomialSeries::from_ints(&[1, 1])),
            (ExactScalar::one(), BinomialSeries::from_ints(&[0, 0, 1])),
        ])
        .unwrap();
        assert_eq!(exact(&r), ints(&[2, 2, 1]));
        let mixed = linear_combine(&[
            (ExactScalar::one(), BinomialSeries::from_ints(&[1])),
            (ExactScalar::one(), BinomialSeries::from_ints(&[1]).to_approx(64)),
        ]);
        assert!(matches!(mixed, Err(Error::RegimeMismatch)));
        assert!(linear_combine(&[]).is_err());
    }

    #[test]
    fn evaluation_examples() {
        let cfg = EvalConfig::default();
        let e = BinomialSeries::from_fn(60, inv_fact);
        let r = e.evaluate(&z(3.0, 0.0), &cfg).unwrap();
        assert!(r.converged);
        assert_eq!(r.value.to_f64(), (8.0, 0.0));

        let c = BinomialSeries::from_fn(60, |n| {
            let s = ExactScalar::from(Rational::from((1, factorial(2 * n as u32))));
            if n % 2 == 1 {
                -s
            } else {
                s
            }
        });
        let r = c.evaluate(&z(1.0, 0.0), &cfg).unwrap();
        assert_eq!(r.value.to_f64(), (0.5, 0.0));

        let h = BinomialSeries::from_fn(80, |n| {
            ExactScalar::from(Rational::from((1, Integer::from(1) << n as u32)) / Rational::from(factorial(n as u32)))
        });
        let r = h.evaluate(&z(2.0, 0.0), &cfg).unwrap();
        assert!((r.value.to_f64().0 - 2.25).abs() < 1e-15);
        // non-integer argument through the summation loop
        let r = h.evaluate(&z(2.5, 0.0), &cfg).unwrap();
        assert!(r.converged);
        assert!((r.value.to_f64().0 - 1.5f64.powf(2.5)).abs() < 1e-12);
    }

    #[test]
    fn evaluation_reports_non_convergence() {
        let e = BinomialSeries::from_fn(40, inv_fact);
        let r = e.evaluate(&z(-2.5, 0.0), &EvalConfig::default()).unwrap();
        assert!(!r.converged);
        assert_eq!(r.terms_used, 41);
    }

    #[test]
    fn averaging_accelerates_boundary_sums() {
        let e = BinomialSeries::from_fn(59, inv_fact);
        let plain = e.evaluate(&z(0.5, 0.0), &EvalConfig::default()).unwrap();
        let avg = e
            .evaluate(&z(0.5, 0.0), &EvalConfig::default().with_acceleration(Acceleration::Averaging { levels: 12 }))
            .unwrap();
        let root2 = std::f64::consts::SQRT_2;
        assert!((plain.value.to_f64().0 - root2).abs() > 1e-5);
        assert!((avg.value.to_f64().0 - root2).abs() < 1e-9);
    }

    #[test]
    fn terminating_series_agree_with_monomial_horner() {
        let c = ints(&[3, -1, 4, 1, -5, 9]);
        let p = basis::binomial_to_poly(&c);
        let y = BinomialSeries::polynomial(c);
        for (re, im) in [(0.3, 0.0), (-7.25, 2.0), (55.0, -80.0)] {
            let zz = z(re, im);
            let v = y.evaluate(&zz, &EvalConfig::default()).unwrap().value;
            let h = p.eval_cplx(&zz);
            assert!((&v - &h).abs_f64() <= 1e-12 * h.abs_f64());
        }
    }

    #[test]
    fn taylor_conversion_examples() {
        let y = BinomialSeries::from_ints(&[0, 0, 1]);
        let t = taylor_from_binomial(&y, 2, 2).unwrap();
        assert_eq!(t.coeffs, Coeffs::Exact(ints(&[0, -1, 1])));
        let back = binomial_from_taylor(&Coeffs::Exact(ints(&[0, -1, 1])), 2, 2);
        assert_eq!(exact(&back), ints(&[0, 0, 1]));
        assert!(taylor_from_binomial(&y, 2, 3).is_err());
    }

    #[test]
    fn taylor_of_two_to_the_z_approaches_ln2() {
        let e = BinomialSeries::from_fn(400, inv_fact);
        let t = taylor_from_binomial(&e, 1, 400).unwrap();
        assert!(t.chi_warning);
        let Coeffs::Exact(b) = t.coeffs else { panic!() };
        assert_eq!(b[0], ExactScalar::one());
        let b1 = b[1].to_cplx(64).to_f64().0;
        assert!((b1 - std::f64::consts::LN_2).abs() < 2.0 / 400.0);
    }
}
