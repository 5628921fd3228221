use fallfact::analysis::{classify, Classification, ClassifyConfig};
use fallfact::catalog::{examples, exponential_equation, gamma_equation, half_order_equation};
use fallfact::rug::Float;
use fallfact::scalar::{factorial, Cplx, ExactScalar};
use fallfact::series::EvalConfig;
use fallfact::solver::{
    continuation_eval, derive_recurrence, formal_solve, newton_polygon, solve_recurrence, verify_solution,
    ContinuationConfig, InitialData,
};
use rug::Rational;

fn one() -> InitialData {
    InitialData::default().free(0, ExactScalar::one())
}

#[test]
fn exponential_equation_with_complex_rate() {
    let lambda: ExactScalar = "1/3+1/2i".parse().unwrap();
    let eq = exponential_equation(lambda.clone());
    let (y, _) = formal_solve(&eq, &one(), 80, &ClassifyConfig::default()).unwrap();
    let a = y.exact_coeffs().unwrap();
    for (n, an) in a.iter().enumerate().take(20) {
        let want = lambda.pow(n as u32).checked_div(&ExactScalar::from(factorial(n as u32))).unwrap();
        assert_eq!(*an, want);
    }
    // (1+λ)^z at z = 2 is exact
    let one_plus = &ExactScalar::one() + &lambda;
    assert_eq!(y.exact_value_at(2).unwrap(), one_plus.pow(2));
}

#[test]
fn gamma_formal_solution_sums_to_zero() {
    let eq = gamma_equation();
    let (y, g) = formal_solve(&eq, &one(), 400, &ClassifyConfig::default()).unwrap();
    assert!(matches!(g.classification, Classification::RightHalfPlane { .. }));
    // Σ (-1)ⁿ C(z,n) = (1-1)^z vanishes for Re z > 0; the series is not Γ.
    // Terms decay like n^(-1-Re z), so only points well to the right settle.
    let cfg = EvalConfig::default();
    for x in [4.0, 9.5, 14.25] {
        let z = Cplx::from_f64(128, x, 0.0);
        let v = y.evaluate(&z, &cfg).unwrap();
        assert!(v.converged);
        assert!(v.value.abs_f64() < 1e-10, "{x}: {}", v.value);
        let gamma = Float::with_val(64, x).gamma().to_f64();
        assert!((v.value.to_f64().0 - gamma).abs() > 0.5);
    }
}

#[test]
fn half_order_solution_residual_and_shape() {
    let eq = half_order_equation();
    let data = examples().into_iter().find(|e| e.name == "half_order").unwrap().initial;
    let (y, g) = formal_solve(&eq, &data, 120, &ClassifyConfig::default()).unwrap();
    assert_eq!(g.classification, Classification::Entire);
    let cfg = EvalConfig::default().with_precision(192).with_eps(1e-30);
    let pts: Vec<Cplx> =
        [(0.3, 0.0), (1.7, 0.4), (4.2, -1.0)].iter().map(|&(x, y)| Cplx::from_f64(192, x, y)).collect();
    let rep = verify_solution(&eq, |z| y.evaluate(z, &cfg), &pts).unwrap();
    assert!(rep.passes(1e-20), "{}", rep.max_relative);

    // without the constraint the second initial value is free
    let rec = derive_recurrence(&eq).unwrap();
    assert_eq!(rec.initial_block(), 2);
    let other = solve_recurrence(&rec, &[(0, ExactScalar::one()), (1, ExactScalar::one())], &[], 60).unwrap();
    let growth = classify(&fallfact::series::Coeffs::Exact(other), &ClassifyConfig::default());
    assert!(growth.chi > 0.9, "{}", growth.chi);
}

#[test]
fn half_order_coefficients_exact() {
    let data = examples().into_iter().find(|e| e.name == "half_order").unwrap().initial;
    let (y, _) = formal_solve(&half_order_equation(), &data, 60, &ClassifyConfig::default()).unwrap();
    for (n, an) in y.exact_coeffs().unwrap().iter().enumerate() {
        let sign = if n % 2 == 0 { 1 } else { -1 };
        assert_eq!(*an, ExactScalar::from(Rational::from((sign, factorial(2 * n as u32)))));
    }
}

#[test]
fn continuation_of_exponential_solution() {
    let eq = exponential_equation(ExactScalar::ratio(1, 2));
    let (y, _) = formal_solve(&eq, &one(), 100, &ClassifyConfig::default()).unwrap();
    let cfg = ContinuationConfig::default();
    for (x, t) in [(-1.5, 0.0), (-7.25, 2.0)] {
        let r = continuation_eval(&eq, &y, &Cplx::from_f64(128, x, t), &cfg).unwrap();
        // (3/2)^(x+it)
        let m = 1.5f64.powf(x);
        let arg = t * 1.5f64.ln();
        let (re, im) = r.value.to_f64();
        assert!((re - m * arg.cos()).abs() < 1e-12 * m && (im - m * arg.sin()).abs() < 1e-12 * m);
    }
}

#[test]
fn polygons_of_examples() {
    let slopes = |eq| newton_polygon(&eq).slopes.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    assert_eq!(slopes(half_order_equation()), ["1/2"]);
    assert_eq!(slopes(exponential_equation(ExactScalar::ratio(1, 2))), ["1"]);
    assert_eq!(slopes(gamma_equation()), ["2"]);
    assert!(newton_polygon(&gamma_equation()).candidate_orders().is_empty());
}
