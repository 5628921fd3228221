//! Strategies, oracles and property checks shared by the property tests and
//! the acceptance harness.
#![allow(dead_code)]

use fallfact::basis::{binomial_to_poly, poly_to_binomial, stirling_first_row, stirling_second_row};
use fallfact::poly::Polynomial;
use fallfact::scalar::{binomial, factorial, ExactScalar};
use fallfact::series::{linear_combine, BinomialSeries, Coeffs, Tail};
use fallfact::solver::{derive_recurrence, solve_recurrence, LinearDifferenceEquation};
use proptest::prelude::*;
use rug::{Integer, Rational};

pub fn rational() -> impl Strategy<Value = ExactScalar> {
    (-9i64..=9, 1i64..=7).prop_map(|(p, q)| ExactScalar::ratio(p, q))
}

/// Mostly real, sometimes Gaussian.
pub fn scalar() -> impl Strategy<Value = ExactScalar> {
    prop_oneof![
        3 => rational(),
        1 => (rational(), rational()).prop_map(|(re, im)| ExactScalar::new(re.re().clone(), im.re().clone())),
    ]
}

pub fn polynomial(max_deg: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(scalar(), 0..=max_deg + 1).prop_map(Polynomial::new)
}

pub fn real_polynomial(max_deg: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(rational(), 0..=max_deg + 1).prop_map(Polynomial::new)
}

pub fn series(max_len: usize) -> impl Strategy<Value = BinomialSeries> {
    (prop::collection::vec(scalar(), 1..=max_len), any::<bool>()).prop_map(|(c, term)| {
        let tail = if term { Tail::Terminating } else { Tail::Truncated };
        BinomialSeries::new(Coeffs::Exact(c), tail)
    })
}

fn coeffs(y: &BinomialSeries) -> &[ExactScalar] {
    y.exact_coeffs().expect("exact")
}

/// Agreement on every coefficient both sides determine: all of them when
/// both terminate, otherwise the shortest truncated prefix.
pub fn agree(a: &BinomialSeries, b: &BinomialSeries) -> Result<(), String> {
    let truncated: Vec<usize> = [a, b].iter().filter(|s| s.tail() == Tail::Truncated).map(|s| s.len()).collect();
    let n = truncated.iter().copied().min().unwrap_or(a.len().max(b.len()));
    let zero = ExactScalar::zero();
    for i in 0..n {
        let x = coeffs(a).get(i).unwrap_or(&zero);
        let y = coeffs(b).get(i).unwrap_or(&zero);
        if x != y {
            return Err(format!("coefficient {i}: {x} != {y}"));
        }
    }
    Ok(())
}

/// `Y(m)` at an integer from the finite sum, which only needs `a₀ … a_m`.
pub fn value_at_integer(y: &BinomialSeries, m: usize) -> Option<ExactScalar> {
    y.exact_value_at(m as u64)
}

/// `(Δᵏf)(m) = Σᵢ (-1)^{k-i} C(k,i) f(m+i)`.
pub fn delta_at(f: &dyn Fn(usize) -> Option<ExactScalar>, k: usize, m: usize) -> Option<ExactScalar> {
    let mut acc = ExactScalar::zero();
    for i in 0..=k {
        let t = f(m + i)?.mul_integer(&binomial(k as u32, i as u32));
        acc = if (k - i) % 2 == 1 { &acc - &t } else { &acc + &t };
    }
    Some(acc)
}

/// `E = I + Δ`, coefficientwise and at integers.
pub fn check_shift_identity(y: &BinomialSeries) -> Result<(), String> {
    let sum = linear_combine(&[(ExactScalar::one(), y.clone()), (ExactScalar::one(), y.delta())])
        .map_err(|e| e.to_string())?;
    agree(&y.shift(1), &sum)?;
    let e = y.shift(1);
    for m in 0..y.len().saturating_sub(1) {
        if let (Some(a), Some(b)) = (value_at_integer(&e, m), value_at_integer(y, m + 1)) {
            if a != b {
                return Err(format!("E y at {m}: {a} != {b}"));
            }
        }
    }
    Ok(())
}

/// `Δ(p·Y) = Δp · EY + p · ΔY`, with `Δp` computed in the monomial basis.
pub fn check_product_rule(y: &BinomialSeries, p: &Polynomial) -> Result<(), String> {
    let dp = &p.shift_arg(&ExactScalar::one()) - p;
    let lhs = y.mul_by_poly(p).delta();
    let rhs = linear_combine(&[
        (ExactScalar::one(), y.shift(1).mul_by_poly(&dp)),
        (ExactScalar::one(), y.delta().mul_by_poly(p)),
    ])
    .map_err(|e| e.to_string())?;
    agree(&lhs, &rhs)
}

/// `zΔᵏ` from its closed form equals `z·` after `Δᵏ`, and matches
/// `m·(ΔᵏY)(m)` at integers.
pub fn check_z_delta_k(y: &BinomialSeries, k: usize) -> Result<(), String> {
    let closed = y.z_delta_k(k);
    agree(&closed, &y.delta_pow(k).mul_by_z())?;
    let f = |m: usize| value_at_integer(y, m);
    for m in 0..closed.len() {
        let (Some(got), Some(dk)) = (value_at_integer(&closed, m), delta_at(&f, k, m)) else {
            continue;
        };
        if got != dk.mul_i64(m as i64) {
            return Err(format!("zΔ^{k} at {m}: {got} != {m}·{dk}"));
        }
    }
    Ok(())
}

/// `Σₖ η(k,n) η̃(m,k) = δ(n,m)` for `m ≤ n`, and the same with the kinds swapped.
pub fn check_stirling_inverse(n: usize, m: usize) -> Result<(), String> {
    let (n, m) = (n.max(m), n.min(m));
    let first = stirling_first_row(n);
    let mut a = ExactScalar::zero();
    let mut b = ExactScalar::zero();
    let second_n = stirling_second_row(n);
    for k in m..=n {
        a = &a + &(&first[k] * &stirling_second_row(k)[m]);
        b = &b + &(&second_n[k] * &stirling_first_row(k)[m]);
    }
    let want = if n == m { ExactScalar::one() } else { ExactScalar::zero() };
    if a != want || b != want {
        return Err(format!("inverse identity fails at n={n}, m={m}: {a}, {b}"));
    }
    Ok(())
}

pub fn check_basis_round_trip(p: &Polynomial) -> Result<(), String> {
    let back = binomial_to_poly(&poly_to_binomial(p));
    if &back != p {
        return Err(format!("{} -> {}", p.display_in("z"), back.display_in("z")));
    }
    Ok(())
}

/// `z(z-1)···(z-n+1)` multiplied out one factor at a time.
pub fn expand_falling_factorial(n: usize) -> Polynomial {
    (0..n as i64).fold(Polynomial::from_ints(&[1]), |acc, k| &acc * &Polynomial::from_ints(&[-k, 1]))
}

/// `η̃(k,n) = (1/k!) Σⱼ (-1)^j C(k,j) (k-j)^n`.
pub fn second_kind_explicit(k: usize, n: usize) -> ExactScalar {
    let mut s = Integer::new();
    for j in 0..=k {
        let t = binomial(k as u32, j as u32) * Integer::from(Integer::u_pow_u((k - j) as u32, n as u32));
        if j % 2 == 1 {
            s -= t;
        } else {
            s += t;
        }
    }
    ExactScalar::from(Rational::from((s, factorial(k as u32))))
}

/// Solves the equation with the given initial values and checks the shift
/// form `Σ qⱼ(m)·Y(m+j) = 0` at every integer the coefficients determine.
/// `Ok(false)` when the data does not yield a solution (singular, inconsistent).
pub fn check_solution_at_integers(
    eq: &LinearDifferenceEquation,
    values: &[ExactScalar],
    n: usize,
) -> Result<bool, String> {
    let rec = derive_recurrence(eq).map_err(|e| e.to_string())?;
    let block = rec.initial_block();
    let free: Vec<(usize, ExactScalar)> = values.iter().cloned().enumerate().take(block).collect();
    if free.len() < block {
        return Ok(false);
    }
    let Ok(a) = solve_recurrence(&rec, &free, &[], n) else {
        return Ok(false);
    };
    let y = BinomialSeries::exact(a);
    let shift = eq.to_shift_form();
    let p = shift.order();
    for m in 0..=n.saturating_sub(p) {
        let mut acc = ExactScalar::zero();
        for (j, q) in shift.coeffs().iter().enumerate() {
            let v = value_at_integer(&y, m + j).expect("m + j <= n");
            acc = &acc + &(&q.eval_i64(m as i64) * &v);
        }
        if !acc.is_zero() {
            return Err(format!("{eq}: residual {acc} at z = {m}"));
        }
    }
    Ok(true)
}

/// Small Δ-form equations of order 1 to 3 with coefficient degree at most 2.
pub fn equation() -> impl Strategy<Value = LinearDifferenceEquation> {
    (1usize..=3).prop_flat_map(|p| prop::collection::vec(real_polynomial(2), p + 1)).prop_filter_map(
        "nonzero leading coefficient",
        |mut c| {
            if c.last().is_some_and(|l| l.is_zero()) {
                c.pop();
                c.push(Polynomial::from_ints(&[1]));
            }
            LinearDifferenceEquation::delta(c).ok()
        },
    )
}
