//! Univariate polynomials with exact Gaussian-rational coefficients, and
//! reduced rational functions built from them.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Integer, Rational};

use crate::scalar::{Cplx, ExactScalar};

/// Degree of a polynomial; the zero polynomial sits below every finite degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

/// Little-endian coefficient vector: `coeffs[i]` multiplies `zⁱ`.
/// The highest stored coefficient is never zero; the zero polynomial is empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<ExactScalar>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<ExactScalar>) -> Self {
        while coeffs.last().is_some_and(ExactScalar::is_zero) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| ExactScalar::from(c)).collect())
    }

    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn constant(c: ExactScalar) -> Self {
        Polynomial::new(vec![c])
    }

    /// The monomial `z`.
    pub fn z() -> Self {
        Polynomial::from_ints(&[0, 1])
    }

    /// `zᵏ`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![ExactScalar::zero(); k + 1];
        c[k] = ExactScalar::one();
        Polynomial { coeffs: c }
    }

    pub fn coeffs(&self) -> &[ExactScalar] {
        &self.coeffs
    }

    /// Coefficient of `zᵏ`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> ExactScalar {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    pub fn leading(&self) -> Option<&ExactScalar> {
        self.coeffs.last()
    }

    pub fn scale(&self, s: &ExactScalar) -> Self {
        Polynomial::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul_z(&self) -> Self {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut c = Vec::with_capacity(self.coeffs.len() + 1);
        c.push(ExactScalar::zero());
        c.extend(self.coeffs.iter().cloned());
        Polynomial { coeffs: c }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Polynomial::constant(ExactScalar::one()), |acc, _| &acc * self)
    }

    /// `p(z + s)` by Horner composition.
    pub fn shift_arg(&self, s: &ExactScalar) -> Self {
        let lin = Polynomial::new(vec![s.clone(), ExactScalar::one()]);
        self.coeffs.iter().rev().fold(Polynomial::zero(), |acc, c| &(&acc * &lin) + &Polynomial::constant(c.clone()))
    }

    pub fn eval(&self, x: &ExactScalar) -> ExactScalar {
        self.coeffs.iter().rev().fold(ExactScalar::zero(), |acc, c| &(&acc * x) + c)
    }

    pub fn eval_i64(&self, n: i64) -> ExactScalar {
        self.eval(&ExactScalar::from(n))
    }

    pub fn eval_cplx(&self, z: &Cplx) -> Cplx {
        let prec = z.prec();
        self.coeffs.iter().rev().fold(Cplx::zero(prec), |acc, c| &(&acc * z) + &c.to_cplx(prec))
    }

    /// `Σ |cᵢ|·rⁱ`, a cheap magnitude scale for the value at `|z| = r`.
    pub fn abs_scale(&self, r: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm_sqr().to_f64().sqrt())
    }

    /// Euclidean division over the coefficient field. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Polynomial) -> (Polynomial, Polynomial) {
        let lead_inv = d.leading().and_then(ExactScalar::recip).expect("division by zero polynomial");
        let dd = d.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Polynomial::zero(), self.clone());
        }
        let mut quot = vec![ExactScalar::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if !c.is_zero() {
                for (i, dc) in d.coeffs.iter().enumerate() {
                    rem[k + i] = &rem[k + i] - &(&c * dc);
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Polynomial::new(quot), Polynomial::new(rem))
    }

    pub fn monic(&self) -> Self {
        match self.leading().and_then(ExactScalar::recip) {
            Some(inv) => self.scale(&inv),
            None => Polynomial::zero(),
        }
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Render with a chosen variable name, highest power first: `64z^2+80z+9`.
    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let body = if c.is_real() { c.re().to_string() } else { format!("({c})") };
            let (sign, mag) = match body.strip_prefix('-') {
                Some(m) => ("-", m.to_string()),
                None => ("+", body),
            };
            let var_part = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            let coef_part = if k > 0 && mag == "1" { String::new() } else { mag };
            if !out.is_empty() || sign == "-" {
                out.push_str(sign);
            }
            out.push_str(&coef_part);
            out.push_str(&var_part);
        }
        out
    }

    /// Number of nonzero terms.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("z"))
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, o: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        Polynomial::new((0..n).map(|k| &self.coeff(k) + &o.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, o: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        Polynomial::new((0..n).map(|k| &self.coeff(k) - &o.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, o: &Polynomial) -> Polynomial {
        if self.is_zero() || o.is_zero() {
            return Polynomial::zero();
        }
        let mut c = vec![ExactScalar::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        Polynomial::new(c)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

/// `numerator / denominator` with no common factor, normalized so that the
/// coefficients of both parts are Gaussian integers with joint content 1 and
/// the denominator's leading coefficient has a positive first nonzero part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    numerator: Polynomial,
    denominator: Polynomial,
}

impl RationalFunction {
    /// Returns `None` if the denominator is identically zero.
    pub fn new(numerator: Polynomial, denominator: Polynomial) -> Option<Self> {
        if denominator.is_zero() {
            return None;
        }
        let g = numerator.gcd(&denominator);
        let (num, den) = if g.degree() > Degree::Finite(0) {
            (numerator.div_rem(&g).0, denominator.div_rem(&g).0)
        } else {
            (numerator, denominator)
        };
        Some(normalize_content(num, den))
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.denominator
    }

    /// Value at `z`, `None` where the denominator vanishes.
    pub fn eval_cplx(&self, z: &Cplx) -> Option<Cplx> {
        let d = self.denominator.eval_cplx(z);
        if d.is_zero() {
            return None;
        }
        Some(&self.numerator.eval_cplx(z) / &d)
    }

    pub fn eval(&self, x: &ExactScalar) -> Option<ExactScalar> {
        self.numerator.eval(x).checked_div(&self.denominator.eval(x))
    }

    /// Equality as functions: `p/q == r/s` iff `p·s == r·q`.
    pub fn same_function(&self, other: &RationalFunction) -> bool {
        &self.numerator * &other.denominator == &other.numerator * &self.denominator
    }
}

impl fmt::Display for RationalFunction {
    /// `(16z+23)/(64z^2+80z+9)`; single-term parts are not parenthesized and a
    /// unit denominator is omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |p: &Polynomial| {
            if p.term_count() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        if self.denominator == Polynomial::constant(ExactScalar::one()) {
            return write!(f, "{}", self.numerator);
        }
        write!(f, "{}/{}", wrap(&self.numerator), wrap(&self.denominator))
    }
}

fn normalize_content(num: Polynomial, den: Polynomial) -> RationalFunction {
    let all = || num.coeffs.iter().chain(den.coeffs.iter()).flat_map(|c| [c.re(), c.im()]);
    let mut lcm = Integer::from(1);
    for r in all() {
        lcm.lcm_mut(r.denom());
    }
    let mut content = Integer::new();
    for r in all() {
        let scaled = Rational::from(r * &lcm);
        content.gcd_mut(scaled.numer());
    }
    let mut factor = Rational::from(lcm);
    if content != 0 {
        factor /= content;
    }
    let lead = den.leading().expect("nonzero denominator");
    let first = if lead.re().cmp0() != Ordering::Equal { lead.re() } else { lead.im() };
    if first.cmp0() == Ordering::Less {
        factor = -factor;
    }
    let s = ExactScalar::from(factor);
    RationalFunction { numerator: num.scale(&s), denominator: den.scale(&s) }
}
