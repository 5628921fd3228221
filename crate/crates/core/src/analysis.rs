//! Growth and convergence diagnostics for coefficient sequences and for the
//! functions they sum to.
//!
//! The central quantity is
//!
//! ```text
//! χ({aₙ}) = limsup n·ln n / (-ln |aₙ|)
//! ```
//!
//! estimated on a trailing window of indices. `χ < 1` means the binomial
//! series converges everywhere; `|aₙ| ≤ K/n!` gives convergence on the right
//! half plane.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{ln_factorial, Cplx};
use crate::series::{Coeffs, EvaluationResult};

/// Shortest coefficient list accepted by the χ estimators.
pub const MIN_LENGTH: usize = 16;
/// Fraction of trailing indices used by default.
pub const DEFAULT_WINDOW: f64 = 0.5;
/// Slack below 1 required before declaring a series entire.
pub const DEFAULT_MARGIN: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChiFlag {
    /// Every coefficient in the window is zero; the estimate is 0 by convention.
    ZeroTail,
    /// No window entry has `0 < |aₙ| < 1`; the estimate is `+∞`.
    Undefined,
    /// Some window entries had `|aₙ| ≥ 1` and were skipped.
    SkippedLarge,
}

#[derive(Clone, Debug, Serialize)]
pub struct ChiEstimate {
    pub value: f64,
    /// Inclusive index range `[lo, hi]`.
    pub window: (usize, usize),
    /// `(n, sₙ)` for every usable index in the window.
    pub trace: Vec<(usize, f64)>,
    pub flags: Vec<ChiFlag>,
}

/// Finite-window estimate of `χ`: the maximum of `sₙ = n·ln n / (-ln|aₙ|)`
/// over the last `window_fraction` of the indices. Zeros are skipped.
pub fn chi_estimate(coeffs: &Coeffs, window_fraction: f64) -> Result<ChiEstimate> {
    chi_from_logs(&coeffs.ln_abs(), window_fraction)
}

/// Same estimator, from precomputed `ln |aₙ|` (`None` for zero entries).
pub fn chi_from_logs(ln_abs: &[Option<f64>], window_fraction: f64) -> Result<ChiEstimate> {
    let len = ln_abs.len();
    if len < MIN_LENGTH {
        return Err(Error::TooShort { len, min: MIN_LENGTH });
    }
    if !(window_fraction > 0.0 && window_fraction <= 1.0) {
        return Err(Error::InvalidInput(format!("window fraction {window_fraction} not in (0, 1]")));
    }
    let span = ((len as f64) * window_fraction).ceil() as usize;
    let lo = len - span.clamp(1, len);
    let hi = len - 1;

    let mut trace = Vec::new();
    let mut flags = Vec::new();
    let mut any_nonzero = false;
    for (n, l) in ln_abs.iter().enumerate().take(hi + 1).skip(lo.max(2)) {
        let Some(l) = *l else { continue };
        any_nonzero = true;
        if l >= 0.0 {
            if !flags.contains(&ChiFlag::SkippedLarge) {
                flags.push(ChiFlag::SkippedLarge);
            }
            continue;
        }
        let nf = n as f64;
        trace.push((n, nf * nf.ln() / -l));
    }
    let value = if !any_nonzero {
        flags.push(ChiFlag::ZeroTail);
        0.0
    } else if trace.is_empty() {
        flags.retain(|f| *f != ChiFlag::SkippedLarge);
        flags.push(ChiFlag::Undefined);
        f64::INFINITY
    } else {
        trace.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max)
    };
    Ok(ChiEstimate { value, window: (lo, hi), trace, flags })
}

/// Order of an entire function from its Taylor coefficients, by the same
/// estimator. A zero tail (a polynomial) gives 0.
pub fn order_from_taylor(taylor: &Coeffs, window_fraction: f64) -> Result<ChiEstimate> {
    chi_estimate(taylor, window_fraction)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum Classification {
    Entire,
    RightHalfPlane { k: f64 },
    Unknown,
}

impl Classification {
    pub fn label(&self) -> &'static str {
        match self {
            Classification::Entire => "entire",
            Classification::RightHalfPlane { .. } => "right_half_plane",
            Classification::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthEstimate {
    pub chi: f64,
    pub window: (usize, usize),
    pub s_trace: Vec<(usize, f64)>,
    pub chi_flags: Vec<ChiFlag>,
    pub classification: Classification,
    /// `max |aₙ|·n!` over the computed range, whatever the verdict.
    pub k: Option<f64>,
    pub rho_fit: Option<f64>,
    pub tau_fit: Option<f64>,
}

#[derive(Clone, Copy, Debug)]
pub struct ClassifyConfig {
    pub margin: f64,
    pub window_fraction: f64,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig { margin: DEFAULT_MARGIN, window_fraction: DEFAULT_WINDOW }
    }
}

/// `max |aₙ|·n!` and where it is attained, in log form.
fn max_scaled(ln_abs: &[Option<f64>]) -> Option<(usize, f64)> {
    ln_abs.iter().enumerate().filter_map(|(n, l)| l.map(|l| (n, l + ln_factorial(n as u64)))).fold(
        None,
        |best, (n, v)| match best {
            Some((_, b)) if b >= v => best,
            _ => Some((n, v)),
        },
    )
}

/// Entire if `χ < 1 - margin`; right half plane with `K = max |aₙ|·n!` if that
/// maximum is reached before the last quarter of the indices; otherwise
/// unknown. Sequences shorter than [`MIN_LENGTH`] are unknown.
pub fn classify(coeffs: &Coeffs, cfg: &ClassifyConfig) -> GrowthEstimate {
    let logs = coeffs.ln_abs();
    let scaled = max_scaled(&logs);
    let k = scaled.map(|(_, l)| l.exp()).or(Some(0.0));
    let Ok(chi) = chi_from_logs(&logs, cfg.window_fraction) else {
        return GrowthEstimate {
            chi: f64::NAN,
            window: (0, logs.len().saturating_sub(1)),
            s_trace: Vec::new(),
            chi_flags: Vec::new(),
            classification: Classification::Unknown,
            k,
            rho_fit: None,
            tau_fit: None,
        };
    };
    let classification = if chi.value < 1.0 - cfg.margin {
        Classification::Entire
    } else {
        match scaled {
            Some((n, l)) if n < logs.len() * 3 / 4 => Classification::RightHalfPlane { k: l.exp() },
            _ => Classification::Unknown,
        }
    };
    GrowthEstimate {
        chi: chi.value,
        window: chi.window,
        s_trace: chi.trace,
        chi_flags: chi.flags,
        classification,
        k,
        rho_fit: None,
        tau_fit: None,
    }
}

/// Sampled maximum modulus `M(r)`, kept in log form so that values far past
/// the `f64` range survive.
#[derive(Clone, Debug, Serialize)]
pub struct ModulusProfile {
    pub radii: Vec<f64>,
    /// `ln M(r)`; `None` where some sample on the circle failed to converge.
    pub ln_max_modulus: Vec<Option<f64>>,
    pub samples_per_circle: usize,
}

impl ModulusProfile {
    pub fn from_ln(radii: Vec<f64>, ln_m: Vec<f64>) -> Self {
        ModulusProfile { samples_per_circle: 0, ln_max_modulus: ln_m.into_iter().map(Some).collect(), radii }
    }

    pub fn max_modulus(&self) -> Vec<Option<f64>> {
        self.ln_max_modulus.iter().map(|l| l.map(f64::exp)).collect()
    }
}

/// Points `r·e^{iθ}` with `θ = π + 2πk/samples`, so the negative real axis is
/// always sampled.
pub fn circle_points(r: f64, samples: usize, prec: u32) -> Vec<Cplx> {
    (0..samples)
        .map(|k| {
            let t = PI + 2.0 * PI * k as f64 / samples as f64;
            let (s, c) = if k == 0 { (0.0, -1.0) } else { t.sin_cos() };
            Cplx::from_f64(prec, r * c, r * s)
        })
        .collect()
}

/// `M(r)` on each radius from `evaluator`, in parallel across all points.
pub fn modulus_profile<F>(evaluator: F, radii: &[f64], samples_per_circle: usize, prec: u32) -> Result<ModulusProfile>
where
    F: Fn(&Cplx) -> Result<EvaluationResult> + Sync,
{
    if radii.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidInput("radii must be strictly increasing".into()));
    }
    if samples_per_circle == 0 {
        return Err(Error::InvalidInput("need at least one sample per circle".into()));
    }
    let jobs: Vec<(usize, Cplx)> = radii
        .iter()
        .enumerate()
        .flat_map(|(i, &r)| circle_points(r, samples_per_circle, prec).into_iter().map(move |z| (i, z)))
        .collect();
    let results: Vec<(usize, Option<f64>)> = jobs
        .par_iter()
        .map(|(i, z)| {
            let v = match evaluator(z) {
                Ok(r) if r.converged => Some(if r.value.is_zero() { f64::NEG_INFINITY } else { r.value.ln_abs() }),
                _ => None,
            };
            (*i, v)
        })
        .collect();
    let mut ln_m: Vec<Option<f64>> = vec![Some(f64::NEG_INFINITY); radii.len()];
    for (i, v) in results {
        ln_m[i] = match (ln_m[i], v) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
    }
    Ok(ModulusProfile { radii: radii.to_vec(), ln_max_modulus: ln_m, samples_per_circle })
}

/// Smallest ratio `r_max / r_min` accepted by [`fit_order_type`].
pub const MIN_RADIUS_RATIO: f64 = 10.0;

/// `ρ` as the least-squares slope of `ln ln M(r)` against `ln r`, and
/// `τ = max ln M(r) / r^ρ`. Radii with `M(r) ≤ 1` or a failed circle are
/// dropped; at least three must remain, spanning a factor of
/// [`MIN_RADIUS_RATIO`].
pub fn fit_order_type(profile: &ModulusProfile) -> Result<(f64, f64)> {
    let pts: Vec<(f64, f64)> = profile
        .radii
        .iter()
        .zip(&profile.ln_max_modulus)
        .filter_map(|(&r, l)| l.filter(|l| *l > 0.0).map(|l| (r, l)))
        .collect();
    if pts.len() < 3 {
        return Err(Error::InsufficientProfile {
            needed: "3 radii with M(r) > 1".into(),
            reason: format!("{} usable", pts.len()),
        });
    }
    let ratio = pts[pts.len() - 1].0 / pts[0].0;
    if ratio < MIN_RADIUS_RATIO {
        return Err(Error::InsufficientProfile {
            needed: format!("r_max/r_min >= {MIN_RADIUS_RATIO}"),
            reason: format!("ratio is {ratio}"),
        });
    }
    let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let rho = sxy / sxx;
    let tau = pts.iter().map(|(r, l)| l / r.powf(rho)).fold(f64::NEG_INFINITY, f64::max);
    Ok((rho, tau))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ExactScalar;

    fn logs(f: impl Fn(usize) -> f64, n: usize) -> Vec<Option<f64>> {
        (0..=n).map(|k| Some(f(k))).collect()
    }

    #[test]
    fn chi_of_power_sequence_is_one_half() {
        let l = logs(|n| if n == 0 { 0.0 } else { -2.0 * n as f64 * (n as f64).ln() }, 100);
        let e = chi_from_logs(&l, 0.5).unwrap();
        assert!(e.trace.iter().all(|(_, s)| (s - 0.5).abs() < 1e-12));
    }

    #[test]
    fn chi_of_reciprocal_factorials() {
        let e = chi_from_logs(&logs(|n| -ln_factorial(2 * n as u64), 1000), 0.5).unwrap();
        assert!((e.value - 0.5256).abs() < 1e-3, "{}", e.value);
        let e = chi_from_logs(&logs(|n| -ln_factorial(n as u64), 1000), 0.5).unwrap();
        assert!((e.value - 1.19).abs() < 1e-2, "{}", e.value);
        assert!((e.trace.last().unwrap().1 - 1.17).abs() < 1e-2);
    }

    #[test]
    fn chi_edge_cases() {
        let zeros = vec![None; 20];
        let e = chi_from_logs(&zeros, 0.5).unwrap();
        assert_eq!(e.value, 0.0);
        assert_eq!(e.flags, vec![ChiFlag::ZeroTail]);
        let ones = vec![Some(0.0); 20];
        let e = chi_from_logs(&ones, 0.5).unwrap();
        assert!(e.value.is_infinite());
        assert_eq!(e.flags, vec![ChiFlag::Undefined]);
        assert!(matches!(chi_from_logs(&ones[..10], 0.5), Err(Error::TooShort { .. })));
        // interior zeros are skipped
        let mut l = logs(|n| -ln_factorial(n as u64), 40);
        l[30] = None;
        assert!(chi_from_logs(&l, 0.5).unwrap().trace.iter().all(|t| t.0 != 30));
    }

    #[test]
    fn scale_invariance() {
        for base in [|n: usize| -ln_factorial(2 * n as u64), |n: usize| -ln_factorial(n as u64)] {
            let plain = chi_from_logs(&logs(base, 2000), 0.5).unwrap().value;
            for c in [1e-6f64, 1e6] {
                let scaled = chi_from_logs(&logs(|n| base(n) + c.ln(), 2000), 0.5).unwrap().value;
                assert!((plain - scaled).abs() < 0.02);
            }
        }
    }

    fn exact_seq(n: usize, f: impl Fn(usize) -> ExactScalar) -> Coeffs {
        Coeffs::Exact((0..=n).map(f).collect())
    }

    fn inv_fact(n: usize) -> ExactScalar {
        ExactScalar::from(rug::Rational::from((1, crate::scalar::factorial(n as u32))))
    }

    #[test]
    fn classification_examples() {
        let cfg = ClassifyConfig::default();
        let alt = exact_seq(200, |n| {
            let v = inv_fact(2 * n);
            if n % 2 == 1 {
                -v
            } else {
                v
            }
        });
        assert_eq!(classify(&alt, &cfg).classification, Classification::Entire);

        let e = classify(&exact_seq(200, inv_fact), &cfg);
        match e.classification {
            Classification::RightHalfPlane { k } => assert!((k - 1.0).abs() < 1e-12),
            c => panic!("{c:?}"),
        }
        let half = exact_seq(200, |n| &inv_fact(n) * &ExactScalar::ratio(1, 2).pow(n as u32));
        assert!(matches!(classify(&half, &cfg).classification, Classification::RightHalfPlane { .. }));

        let ones = exact_seq(200, |_| ExactScalar::one());
        assert_eq!(classify(&ones, &cfg).classification, Classification::Unknown);

        let short = exact_seq(5, inv_fact);
        assert_eq!(classify(&short, &cfg).classification, Classification::Unknown);
    }

    #[test]
    fn classification_is_monotone_under_factorial_damping() {
        let cfg = ClassifyConfig::default();
        let base = exact_seq(120, |n| inv_fact(2 * n));
        let damped = exact_seq(120, |n| &inv_fact(2 * n) * &inv_fact(n));
        assert_eq!(classify(&base, &cfg).classification, Classification::Entire);
        assert_eq!(classify(&damped, &cfg).classification, Classification::Entire);
    }

    #[test]
    fn order_of_polynomial_is_zero() {
        let mut c = vec![ExactScalar::one(); 4];
        c.resize(30, ExactScalar::zero());
        assert_eq!(order_from_taylor(&Coeffs::Exact(c), 0.5).unwrap().value, 0.0);
    }

    #[test]
    fn fit_synthetic_profiles() {
        let radii = vec![10.0, 100.0, 1000.0, 10000.0];
        let p = ModulusProfile::from_ln(radii.clone(), radii.iter().map(|r| 2.0 * r.sqrt()).collect());
        let (rho, tau) = fit_order_type(&p).unwrap();
        assert!((rho - 0.5).abs() < 1e-6 && (tau - 2.0).abs() < 1e-6);
        let p = ModulusProfile::from_ln(radii.clone(), radii.clone());
        let (rho, tau) = fit_order_type(&p).unwrap();
        assert!((rho - 1.0).abs() < 1e-6 && (tau - 1.0).abs() < 1e-6);

        let p = ModulusProfile::from_ln(vec![10.0, 20.0], vec![1.0, 2.0]);
        assert!(fit_order_type(&p).is_err());
        let p = ModulusProfile::from_ln(vec![10.0, 11.0, 12.0], vec![1.0, 2.0, 3.0]);
        assert!(fit_order_type(&p).is_err());
        let p = ModulusProfile::from_ln(vec![1.0, 10.0, 100.0], vec![-1.0, 2.0, 3.0]);
        assert!(fit_order_type(&p).is_err());
    }

    #[test]
    fn constant_series_profile() {
        let y = crate::series::BinomialSeries::from_ints(&[3]);
        let cfg = crate::series::EvalConfig::default();
        let p = modulus_profile(|z| y.evaluate(z, &cfg), &[1.0, 10.0, 100.0], 16, 64).unwrap();
        for l in &p.ln_max_modulus {
            assert!((l.unwrap() - 3f64.ln()).abs() < 1e-14);
        }
    }

    #[test]
    fn falling_square_profile() {
        let y = crate::series::BinomialSeries::from_ints(&[0, 0, 1]);
        let cfg = crate::series::EvalConfig::default();
        let p = modulus_profile(|z| y.evaluate(z, &cfg), &[1000.0], 64, 64).unwrap();
        let m = p.max_modulus()[0].unwrap();
        assert!((m / 1e6 - 1.0).abs() < 0.05);
    }
}
