//! Worked equations with known binomial-series solutions.

use crate::poly::Polynomial;
use crate::scalar::ExactScalar;
use crate::solver::{InitialData, LinearConstraint, LinearDifferenceEquation};

#[derive(Clone, Debug)]
pub struct Example {
    /// File stem used by `fallfact seed-examples`.
    pub name: &'static str,
    pub summary: &'static str,
    pub equation: LinearDifferenceEquation,
    pub initial: InitialData,
}

/// `Δy = λy`, solved by `(1+λ)^z` with `aₙ = λⁿ/n!`.
pub fn exponential_equation(lambda: ExactScalar) -> LinearDifferenceEquation {
    LinearDifferenceEquation::delta(vec![Polynomial::constant(-lambda), Polynomial::from_ints(&[1])])
        .expect("leading coefficient is 1")
}

/// `Δy = (z-1)y`, i.e. `y(z+1) = z·y(z)`. The formal solution with `a₀ = 1`
/// has `aₙ = (-1)ⁿ/n!`.
pub fn gamma_equation() -> LinearDifferenceEquation {
    LinearDifferenceEquation::delta(vec![Polynomial::from_ints(&[1, -1]), Polynomial::from_ints(&[1])])
        .expect("leading coefficient is 1")
}

/// `(4z+6)Δ²y + 3Δy + y = 0`, solved by `aₙ = (-1)ⁿ/(2n)!`. The solution
/// space of the recurrence is two-dimensional and `a₀ + 2a₁ = 0` selects
/// this one.
pub fn half_order_equation() -> LinearDifferenceEquation {
    LinearDifferenceEquation::delta(vec![
        Polynomial::from_ints(&[1]),
        Polynomial::from_ints(&[3]),
        Polynomial::from_ints(&[6, 4]),
    ])
    .expect("nonzero")
}

pub fn half_order_constraint() -> LinearConstraint {
    LinearConstraint::new(vec![(0, ExactScalar::one()), (1, ExactScalar::from(2))], ExactScalar::zero())
}

pub fn examples() -> Vec<Example> {
    vec![
        Example {
            name: "exponential",
            summary: "Δy = (1/2)y, solution (3/2)^z",
            equation: exponential_equation(ExactScalar::ratio(1, 2)),
            initial: InitialData::default().free(0, ExactScalar::one()),
        },
        Example {
            name: "gamma",
            summary: "Δy = (z-1)y, formal solution with a_n = (-1)^n/n!",
            equation: gamma_equation(),
            initial: InitialData::default().free(0, ExactScalar::one()),
        },
        Example {
            name: "half_order",
            summary: "(4z+6)Δ²y + 3Δy + y = 0, entire solution of order 1/2",
            equation: half_order_equation(),
            initial: InitialData::default().free(0, ExactScalar::one()).constraint(half_order_constraint()),
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::{derive_recurrence, solve_recurrence};

    #[test]
    fn examples_solve() {
        for ex in examples() {
            let rec = derive_recurrence(&ex.equation).unwrap();
            let a = solve_recurrence(&rec, &ex.initial.free, &ex.initial.constraints, 10).unwrap();
            assert_eq!(a[0], ExactScalar::one(), "{}", ex.name);
        }
        assert_eq!(half_order_constraint().to_string(), "a0+2a1=0");
    }
}
