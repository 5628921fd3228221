//! Scalar types: exact Gaussian rationals and arbitrary-precision complex floats.
//!
//! [`ExactScalar`] carries every coefficient that must stay exact (Stirling
//! entries, equation coefficients, solved series coefficients). [`Cplx`] is the
//! evaluation-side number: a pair of MPFR floats at a caller-chosen precision.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};

/// A Gaussian rational `re + im·i` with both parts in lowest terms.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    re: Rational,
    im: Rational,
}

impl ExactScalar {
    pub fn new(re: Rational, im: Rational) -> Self {
        ExactScalar { re, im }
    }

    pub fn zero() -> Self {
        ExactScalar::default()
    }

    pub fn one() -> Self {
        ExactScalar::from(1)
    }

    pub fn i() -> Self {
        ExactScalar::new(Rational::new(), Rational::from(1))
    }

    /// `num/den` as a real scalar. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        ExactScalar::from(Rational::from((num, den)))
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.cmp0() == Ordering::Equal && self.im.cmp0() == Ordering::Equal
    }

    pub fn is_real(&self) -> bool {
        self.im.cmp0() == Ordering::Equal
    }

    pub fn conj(&self) -> Self {
        ExactScalar::new(self.re.clone(), Rational::from(-&self.im))
    }

    /// `re² + im²`.
    pub fn norm_sqr(&self) -> Rational {
        Rational::from(&self.re * &self.re) + Rational::from(&self.im * &self.im)
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.is_real() {
            return Some(ExactScalar::from(Rational::from(self.re.recip_ref())));
        }
        let n = self.norm_sqr();
        Some(ExactScalar::new(Rational::from(&self.re / &n), Rational::from(-&self.im) / n))
    }

    pub fn checked_div(&self, other: &Self) -> Option<Self> {
        other.recip().map(|r| self * &r)
    }

    pub fn pow(&self, k: u32) -> Self {
        if self.is_real() {
            return ExactScalar::from(Rational::from((&self.re).pow(k)));
        }
        let mut acc = ExactScalar::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        ExactScalar::new(Rational::from(&self.re * k), Rational::from(&self.im * k))
    }

    pub fn mul_integer(&self, k: &Integer) -> Self {
        ExactScalar::new(Rational::from(&self.re * k), Rational::from(&self.im * k))
    }

    /// Integer value, if this scalar is a real integer.
    pub fn to_integer(&self) -> Option<Integer> {
        if self.is_real() && *self.re.denom() == 1 {
            Some(self.re.numer().clone())
        } else {
            None
        }
    }

    /// Natural log of the modulus, `None` for zero. Computed at 64 bits,
    /// which is enough for coefficients far outside the `f64` range.
    pub fn ln_abs(&self) -> Option<f64> {
        if self.is_zero() {
            return None;
        }
        let n = Float::with_val(64, self.norm_sqr());
        Some(n.ln().to_f64() / 2.0)
    }

    pub fn to_cplx(&self, prec: u32) -> Cplx {
        Cplx::new(Float::with_val(prec, &self.re), Float::with_val(prec, &self.im))
    }
}

impl From<i64> for ExactScalar {
    fn from(v: i64) -> Self {
        ExactScalar::new(Rational::from(v), Rational::new())
    }
}

impl From<i32> for ExactScalar {
    fn from(v: i32) -> Self {
        ExactScalar::from(v as i64)
    }
}

impl From<Rational> for ExactScalar {
    fn from(v: Rational) -> Self {
        ExactScalar::new(v, Rational::new())
    }
}

impl From<Integer> for ExactScalar {
    fn from(v: Integer) -> Self {
        ExactScalar::new(Rational::from(v), Rational::new())
    }
}

impl<'a> Add<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn add(self, o: &ExactScalar) -> ExactScalar {
        ExactScalar::new(Rational::from(&self.re + &o.re), Rational::from(&self.im + &o.im))
    }
}

impl<'a> Sub<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn sub(self, o: &ExactScalar) -> ExactScalar {
        ExactScalar::new(Rational::from(&self.re - &o.re), Rational::from(&self.im - &o.im))
    }
}

impl<'a> Mul<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn mul(self, o: &ExactScalar) -> ExactScalar {
        match (self.is_real(), o.is_real()) {
            (true, true) => ExactScalar::from(Rational::from(&self.re * &o.re)),
            (true, false) => ExactScalar::new(Rational::from(&self.re * &o.re), Rational::from(&self.re * &o.im)),
            (false, true) => ExactScalar::new(Rational::from(&self.re * &o.re), Rational::from(&self.im * &o.re)),
            (false, false) => ExactScalar::new(
                Rational::from(&self.re * &o.re) - Rational::from(&self.im * &o.im),
                Rational::from(&self.re * &o.im) + Rational::from(&self.im * &o.re),
            ),
        }
    }
}

impl<'a> Div<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    /// Panics on division by zero; use [`ExactScalar::checked_div`] otherwise.
    fn div(self, o: &ExactScalar) -> ExactScalar {
        self.checked_div(o).expect("division by zero")
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar::new(Rational::from(-&self.re), Rational::from(-&self.im))
    }
}

macro_rules! forward_owned {
    ($ty:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr<$ty> for $ty {
            type Output = $ty;
            fn $m(self, o: $ty) -> $ty { (&self).$m(&o) }
        }
        impl<'a> $tr<&'a $ty> for $ty {
            type Output = $ty;
            fn $m(self, o: &'a $ty) -> $ty { (&self).$m(o) }
        }
    )*};
}
forward_owned!(ExactScalar, Add add, Sub sub, Mul mul, Div div);
forward_owned!(Cplx, Add add, Sub sub, Mul mul, Div div);

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

impl fmt::Display for ExactScalar {
    /// `"p/q"` for reals, `"re+imi"` otherwise (e.g. `"1/2-3i"`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_real() {
            return write!(f, "{}", self.re);
        }
        if self.im.cmp0() == Ordering::Less {
            write!(f, "{}-{}i", self.re, Rational::from(-&self.im))
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let s = s.strip_prefix('+').unwrap_or(s);
    s.parse::<Rational>().map_err(|_| Error::Parse(format!("not an exact rational: {s:?}")))
}

/// Split `"re±im"` at the last sign that is not the leading one.
fn split_complex(body: &str) -> (Option<&str>, &str) {
    let bytes = body.as_bytes();
    for idx in (1..bytes.len()).rev() {
        if (bytes[idx] == b'+' || bytes[idx] == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
            return (Some(&body[..idx]), &body[idx..]);
        }
    }
    (None, body)
}

fn imag_coefficient(s: &str) -> &str {
    match s {
        "" | "+" => "1",
        "-" => "-1",
        _ => s,
    }
}

impl FromStr for ExactScalar {
    type Err = Error;

    /// Accepts `"p/q"`, `"re+im i"`, `"re-imi"` and bare imaginary `"im i"`.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::Parse("empty scalar".into()));
        }
        match compact.strip_suffix('i') {
            None => Ok(ExactScalar::from(parse_rational(&compact)?)),
            Some(body) => {
                let (re, im) = split_complex(body);
                let im = parse_rational(imag_coefficient(im))?;
                let re = match re {
                    Some(r) => parse_rational(r)?,
                    None => Rational::new(),
                };
                Ok(ExactScalar::new(re, im))
            }
        }
    }
}

/// Complex number over two MPFR floats of equal precision.
#[derive(Clone, Debug, PartialEq)]
pub struct Cplx {
    re: Float,
    im: Float,
}

impl Cplx {
    pub fn new(re: Float, im: Float) -> Self {
        Cplx { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Cplx::new(Float::new(prec), Float::new(prec))
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        Cplx::new(Float::with_val(prec, re), Float::with_val(prec, im))
    }

    pub fn from_i64(prec: u32, v: i64) -> Self {
        Cplx::new(Float::with_val(prec, v), Float::new(prec))
    }

    /// Parses `"x"`, `"x+yi"`, `"x-y i"` with decimal/exponent notation.
    pub fn parse(prec: u32, s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let float = |t: &str| -> Result<Float> {
            let t = t.strip_prefix('+').unwrap_or(t);
            Float::parse(t).map(|p| Float::with_val(prec, p)).map_err(|_| Error::Parse(format!("not a number: {t:?}")))
        };
        if compact.is_empty() {
            return Err(Error::Parse("empty complex number".into()));
        }
        match compact.strip_suffix('i') {
            None => Ok(Cplx::new(float(&compact)?, Float::new(prec))),
            Some(body) => {
                let (re, im) = split_complex(body);
                let re = match re {
                    Some(r) => float(r)?,
                    None => Float::new(prec),
                };
                Ok(Cplx::new(re, float(imag_coefficient(im))?))
            }
        }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn re(&self) -> &Float {
        &self.re
    }

    pub fn im(&self) -> &Float {
        &self.im
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Cplx::new(Float::with_val(prec, &self.re), Float::with_val(prec, &self.im))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    /// `|z|` at the working precision.
    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    /// `ln |z|` as `f64`; finite even when `|z|` is outside the `f64` range.
    pub fn ln_abs(&self) -> f64 {
        self.abs().ln().to_f64()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// `Some(m)` when this is exactly the nonnegative integer `m`.
    pub fn as_nonneg_integer(&self) -> Option<u64> {
        if !self.im.is_zero() || !self.re.is_integer() || self.re.is_sign_negative() && !self.re.is_zero() {
            return None;
        }
        self.re.to_integer().and_then(|i| i.to_u64())
    }

    pub fn neg(&self) -> Self {
        Cplx::new(Float::with_val(self.prec(), -&self.re), Float::with_val(self.prec(), -&self.im))
    }

    pub fn add_i64(&self, k: i64) -> Self {
        Cplx::new(Float::with_val(self.prec(), &self.re + k), self.im.clone())
    }

    pub fn mul_i64(&self, k: i64) -> Self {
        let p = self.prec();
        Cplx::new(Float::with_val(p, &self.re * k), Float::with_val(p, &self.im * k))
    }

    pub fn mul_exact(&self, s: &ExactScalar) -> Self {
        self * &s.to_cplx(self.prec())
    }

    pub fn recip(&self) -> Self {
        Cplx::from_i64(self.prec(), 1) / self
    }

    /// Decimal rendering with `digits` significant digits per part.
    pub fn to_string_digits(&self, digits: usize) -> (String, String) {
        (self.re.to_string_radix(10, Some(digits)), self.im.to_string_radix(10, Some(digits)))
    }
}

impl<'a> Add<&'a Cplx> for &'a Cplx {
    type Output = Cplx;
    fn add(self, o: &Cplx) -> Cplx {
        let p = self.prec().max(o.prec());
        Cplx::new(Float::with_val(p, &self.re + &o.re), Float::with_val(p, &self.im + &o.im))
    }
}

impl<'a> Sub<&'a Cplx> for &'a Cplx {
    type Output = Cplx;
    fn sub(self, o: &Cplx) -> Cplx {
        let p = self.prec().max(o.prec());
        Cplx::new(Float::with_val(p, &self.re - &o.re), Float::with_val(p, &self.im - &o.im))
    }
}

impl<'a> Mul<&'a Cplx> for &'a Cplx {
    type Output = Cplx;
    fn mul(self, o: &Cplx) -> Cplx {
        let p = self.prec().max(o.prec());
        let rr = Float::with_val(p, &self.re * &o.re);
        let ii = Float::with_val(p, &self.im * &o.im);
        let ri = Float::with_val(p, &self.re * &o.im);
        let ir = Float::with_val(p, &self.im * &o.re);
        Cplx::new(rr - ii, ri + ir)
    }
}

impl<'a> Div<&'a Cplx> for &'a Cplx {
    type Output = Cplx;
    fn div(self, o: &Cplx) -> Cplx {
        let p = self.prec().max(o.prec());
        let den = Float::with_val(p, &o.re * &o.re) + Float::with_val(p, &o.im * &o.im);
        let re = Float::with_val(p, &self.re * &o.re) + Float::with_val(p, &self.im * &o.im);
        let im = Float::with_val(p, &self.im * &o.re) - Float::with_val(p, &self.re * &o.im);
        Cplx::new(re / &den, im / &den)
    }
}

impl fmt::Display for Cplx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64();
        if im < 0.0 {
            write!(f, "{re:e}-{:e}i", -im)
        } else {
            write!(f, "{re:e}+{im:e}i")
        }
    }
}

/// Coefficient arithmetic shared by the exact and approximate regimes.
///
/// `Ctx` carries what is needed to make fresh values: nothing for exact
/// scalars, the precision for floats.
pub trait Coefficient: Clone + fmt::Debug + Send + Sync {
    type Ctx: Copy + Send + Sync;

    fn zero(ctx: Self::Ctx) -> Self;
    fn from_exact(ctx: Self::Ctx, s: &ExactScalar) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn mul_i64(&self, k: i64) -> Self;
    fn mul_exact(&self, s: &ExactScalar) -> Self;
    fn ln_abs(&self) -> Option<f64>;
}

impl Coefficient for ExactScalar {
    type Ctx = ();

    fn zero(_: ()) -> Self {
        ExactScalar::zero()
    }
    fn from_exact(_: (), s: &ExactScalar) -> Self {
        s.clone()
    }
    fn is_zero(&self) -> bool {
        ExactScalar::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn mul_i64(&self, k: i64) -> Self {
        ExactScalar::mul_i64(self, k)
    }
    fn mul_exact(&self, s: &ExactScalar) -> Self {
        self * s
    }
    fn ln_abs(&self) -> Option<f64> {
        ExactScalar::ln_abs(self)
    }
}

impl Coefficient for Cplx {
    type Ctx = u32;

    fn zero(prec: u32) -> Self {
        Cplx::zero(prec)
    }
    fn from_exact(prec: u32, s: &ExactScalar) -> Self {
        s.to_cplx(prec)
    }
    fn is_zero(&self) -> bool {
        Cplx::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn mul_i64(&self, k: i64) -> Self {
        Cplx::mul_i64(self, k)
    }
    fn mul_exact(&self, s: &ExactScalar) -> Self {
        Cplx::mul_exact(self, s)
    }
    fn ln_abs(&self) -> Option<f64> {
        if self.is_zero() {
            None
        } else {
            Some(Cplx::ln_abs(self))
        }
    }
}

/// `n!` as an exact integer.
pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

/// `ln n!` via MPFR's log-gamma.
pub fn ln_factorial(n: u64) -> f64 {
    Float::with_val(64, n + 1).ln_abs_gamma().0.to_f64()
}

/// Binomial coefficient `C(n, k)` as an exact integer.
pub fn binomial(n: u32, k: u32) -> Integer {
    Integer::from(Integer::binomial_u(n, k))
}
