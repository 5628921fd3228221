use std::fmt;

use crate::error::{Error, Result};
use crate::poly::{Degree, Polynomial};
use crate::scalar::{binomial, ExactScalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Form {
    /// `Σ pⱼ(z)·Δʲy(z) = 0`
    Delta,
    /// `Σ qⱼ(z)·y(z+j) = 0`
    Shift,
}

/// A linear difference equation with polynomial coefficients, homogeneous.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearDifferenceEquation {
    form: Form,
    coeffs: Vec<Polynomial>,
}

impl LinearDifferenceEquation {
    /// Trailing zero coefficients are dropped; an all-zero list is rejected.
    pub fn new(form: Form, mut coeffs: Vec<Polynomial>) -> Result<Self> {
        while coeffs.last().is_some_and(Polynomial::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("equation has no nonzero coefficient".into()));
        }
        Ok(LinearDifferenceEquation { form, coeffs })
    }

    pub fn delta(coeffs: Vec<Polynomial>) -> Result<Self> {
        Self::new(Form::Delta, coeffs)
    }

    pub fn shift(coeffs: Vec<Polynomial>) -> Result<Self> {
        Self::new(Form::Shift, coeffs)
    }

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn coeffs(&self) -> &[Polynomial] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `Aⱼ = deg pⱼ`.
    pub fn degrees(&self) -> Vec<Degree> {
        self.coeffs.iter().map(Polynomial::degree).collect()
    }

    /// `Δʲ = Σᵢ C(j,i)(-1)^{j-i} Eⁱ`.
    pub fn to_shift_form(&self) -> LinearDifferenceEquation {
        match self.form {
            Form::Shift => self.clone(),
            Form::Delta => self.recombine(Form::Shift, |j, i| {
                let c = ExactScalar::from(binomial(j as u32, i as u32));
                if (j - i) % 2 == 1 {
                    -c
                } else {
                    c
                }
            }),
        }
    }

    /// `Eⁱ = Σⱼ C(i,j) Δʲ`.
    pub fn to_delta_form(&self) -> LinearDifferenceEquation {
        match self.form {
            Form::Delta => self.clone(),
            Form::Shift => self.recombine(Form::Delta, |i, j| ExactScalar::from(binomial(i as u32, j as u32))),
        }
    }

    fn recombine(&self, form: Form, weight: impl Fn(usize, usize) -> ExactScalar) -> LinearDifferenceEquation {
        let p = self.order();
        let mut out = vec![Polynomial::zero(); p + 1];
        for (j, pj) in self.coeffs.iter().enumerate() {
            for (i, o) in out.iter_mut().enumerate().take(j + 1) {
                *o = &*o + &pj.scale(&weight(j, i));
            }
        }
        LinearDifferenceEquation::new(form, out).expect("conversion is invertible")
    }

    pub fn scale(&self, s: &ExactScalar) -> Result<LinearDifferenceEquation> {
        LinearDifferenceEquation::new(self.form, self.coeffs.iter().map(|c| c.scale(s)).collect())
    }

    pub fn mul_poly(&self, p: &Polynomial) -> Result<LinearDifferenceEquation> {
        LinearDifferenceEquation::new(self.form, self.coeffs.iter().map(|c| c * p).collect())
    }
}

impl fmt::Display for LinearDifferenceEquation {
    /// `(4z+6)·Δ^2y + 3·Δy + y = 0` or `(4z+6)·y(z+2) + … = 0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (j, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let op = match (self.form, j) {
                (Form::Delta, 0) | (Form::Shift, 0) => "y".to_string(),
                (Form::Delta, 1) => "Δy".to_string(),
                (Form::Delta, _) => format!("Δ^{j}y"),
                (Form::Shift, _) => format!("y(z+{j})"),
            };
            let coef = c.to_string();
            parts.push(match coef.as_str() {
                "1" => op,
                "-1" => format!("-{op}"),
                _ if c.term_count() > 1 => format!("({coef})·{op}"),
                _ => format!("{coef}·{op}"),
            });
        }
        write!(f, "{} = 0", parts.join(" + ").replace("+ -", "- "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    #[test]
    fn shift_form_examples() {
        let lam = ExactScalar::ratio(1, 2);
        let eq = LinearDifferenceEquation::delta(vec![Polynomial::constant(-&lam), poly(&[1])]).unwrap();
        let s = eq.to_shift_form();
        assert_eq!(s.coeffs(), &[Polynomial::constant(ExactScalar::ratio(-3, 2)), poly(&[1])]);

        let eq = LinearDifferenceEquation::delta(vec![poly(&[1, -1]), poly(&[1])]).unwrap();
        assert_eq!(eq.to_shift_form().coeffs(), &[poly(&[0, -1]), poly(&[1])]);

        let eq = LinearDifferenceEquation::delta(vec![poly(&[1]), poly(&[3]), poly(&[6, 4])]).unwrap();
        assert_eq!(eq.to_shift_form().coeffs(), &[poly(&[4, 4]), poly(&[-9, -8]), poly(&[6, 4])]);
        assert_eq!(eq.to_shift_form().to_delta_form(), eq);
    }

    #[test]
    fn rejects_zero_equation() {
        assert!(LinearDifferenceEquation::delta(vec![Polynomial::zero()]).is_err());
        let eq = LinearDifferenceEquation::delta(vec![poly(&[1]), Polynomial::zero()]).unwrap();
        assert_eq!(eq.order(), 0);
    }

    #[test]
    fn display() {
        let eq = LinearDifferenceEquation::delta(vec![poly(&[1]), poly(&[3]), poly(&[6, 4])]).unwrap();
        assert_eq!(eq.to_string(), "(4z+6)·Δ^2y + 3·Δy + y = 0");
        assert_eq!(eq.to_shift_form().to_string(), "(4z+6)·y(z+2) + (-8z-9)·y(z+1) + (4z+4)·y = 0");
    }
}
