//! Coefficient recurrences for formal binomial-series solutions.
//!
//! Substituting `Y = Σ aₙ z^(n)` into `Σ pⱼ(z)Δʲy = 0` and reading off the
//! coefficient of `z^(n)` gives, for every `n ≥ 0`,
//!
//! ```text
//! Σ_s G_s(n)·a_{n+s} = 0        (a_k = 0 for k < 0)
//! ```
//!
//! built from two sequence-level rules: `Δ` sends `aₙ` to `(n+1)a_{n+1}` and
//! multiplication by `z` sends `cₙ` to `n·cₙ + c_{n-1}`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::ExactScalar;

use super::equation::{Form, LinearDifferenceEquation};

/// `Σ cᵢ·a_{kᵢ} = rhs` over exact scalars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearConstraint {
    pub terms: Vec<(usize, ExactScalar)>,
    pub rhs: ExactScalar,
}

impl LinearConstraint {
    pub fn new(terms: Vec<(usize, ExactScalar)>, rhs: ExactScalar) -> Self {
        let mut merged: BTreeMap<usize, ExactScalar> = BTreeMap::new();
        for (k, c) in terms {
            let e = merged.entry(k).or_default();
            *e = &*e + &c;
        }
        LinearConstraint { terms: merged.into_iter().filter(|(_, c)| !c.is_zero()).collect(), rhs }
    }

    /// `a_k = v`.
    pub fn fix(k: usize, v: ExactScalar) -> Self {
        LinearConstraint::new(vec![(k, ExactScalar::one())], v)
    }

    pub fn max_index(&self) -> Option<usize> {
        self.terms.iter().map(|t| t.0).max()
    }
}

impl fmt::Display for LinearConstraint {
    /// `a0+2a1=0`, the same syntax [`FromStr`] accepts.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0={}", self.rhs);
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            let s = c.to_string();
            let (sign, mag) = match s.strip_prefix('-') {
                Some(m) if c.is_real() => ("-", m.to_string()),
                _ => ("+", s),
            };
            if i > 0 || sign == "-" {
                f.write_str(sign)?;
            }
            match mag.as_str() {
                "1" => write!(f, "a{k}")?,
                m if c.is_real() => write!(f, "{m}a{k}")?,
                m => write!(f, "({m})a{k}")?,
            }
        }
        write!(f, "={}", self.rhs)
    }
}

impl FromStr for LinearConstraint {
    type Err = Error;

    /// Parses `"a0+2a1=0"`, `"2*a1 + a0 = 0"`, `"a3 - 1/2 a2 = 1"`, `"a0=1"`.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
        let bad = || Error::Parse(format!("constraint {s:?}: expected terms like 2a1 joined by + or -, then = value"));
        let (lhs, rhs) = compact.split_once('=').ok_or_else(bad)?;
        let rhs: ExactScalar = if rhs.is_empty() { return Err(bad()) } else { rhs.parse()? };
        let mut terms = Vec::new();
        let mut start = 0;
        let mut depth = 0i32;
        let bytes = lhs.as_bytes();
        for idx in 0..=bytes.len() {
            let at_end = idx == bytes.len();
            if !at_end {
                match bytes[idx] {
                    b'(' => depth += 1,
                    b')' => depth -= 1,
                    _ => {}
                }
            }
            let split = at_end || (idx > start && depth == 0 && matches!(bytes[idx], b'+' | b'-'));
            if !split {
                continue;
            }
            let piece = &lhs[start..idx];
            start = idx;
            let (coef, index) = piece.rsplit_once('a').ok_or_else(bad)?;
            let k: usize = index.parse().map_err(|_| bad())?;
            let (sign, body) = match coef.strip_prefix('-') {
                Some(b) => (-1, b),
                None => (1, coef.strip_prefix('+').unwrap_or(coef)),
            };
            let body = body.strip_prefix('(').and_then(|b| b.strip_suffix(')')).unwrap_or(body);
            let c: ExactScalar = if body.is_empty() { ExactScalar::one() } else { body.parse()? };
            terms.push((k, c.mul_i64(sign)));
        }
        if terms.is_empty() {
            return Err(bad());
        }
        Ok(LinearConstraint::new(terms, rhs))
    }
}

/// `Σ_{i=0}^{d} qᵢ(n)·a_{n+i} = 0` for every `n ≥ n_start`, plus the equations
/// among `a₀ … a_{n_start+d-1}` that the general form does not cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientRecurrence {
    pub q: Vec<Polynomial>,
    pub n_start: usize,
    pub prefix_constraints: Vec<LinearConstraint>,
}

impl CoefficientRecurrence {
    pub fn order(&self) -> usize {
        self.q.len() - 1
    }

    /// Size of the block `a₀ … a_{n_start+d-1}` fixed by initial data.
    pub fn initial_block(&self) -> usize {
        self.n_start + self.order()
    }

    /// `Σ qᵢ(n)·a_{n+i}` for a given sequence; zero when it satisfies the recurrence at `n`.
    pub fn residual(&self, a: &[ExactScalar], n: usize) -> ExactScalar {
        self.q.iter().enumerate().fold(ExactScalar::zero(), |acc, (i, qi)| &acc + &(&qi.eval_i64(n as i64) * &a[n + i]))
    }
}

impl fmt::Display for CoefficientRecurrence {
    /// e.g. `(2n+2)a[n+1] + (-1)a[n] = 0, n >= 0`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, qi) in self.q.iter().enumerate().rev() {
            if qi.is_zero() {
                continue;
            }
            let idx = if i == 0 { "a[n]".to_string() } else { format!("a[n+{i}]") };
            parts.push(format!("({}){idx}", qi.display_in("n")));
        }
        write!(f, "{} = 0, n >= {}", parts.join(" + "), self.n_start)?;
        for c in &self.prefix_constraints {
            write!(f, "; {c}")?;
        }
        Ok(())
    }
}

/// Sequence operator `cₙ = Σ_s G_s(n)·a_{n+s}`, keyed by the offset `s`.
type SeqOp = BTreeMap<i64, Polynomial>;

fn add_into(acc: &mut SeqOp, s: i64, p: Polynomial) {
    let e = acc.entry(s).or_default();
    *e = &*e + &p;
    if e.is_zero() {
        acc.remove(&s);
    }
}

/// `Δʲ`: `cₙ = (n+1)(n+2)···(n+j)·a_{n+j}`.
fn delta_power(j: usize) -> SeqOp {
    let g = (1..=j as i64).fold(Polynomial::from_ints(&[1]), |acc, k| &acc * &Polynomial::from_ints(&[k, 1]));
    SeqOp::from([(j as i64, g)])
}

/// `z·T`: `n·Tₙ + T_{n-1}`.
fn times_z(t: &SeqOp) -> SeqOp {
    let mut out = SeqOp::new();
    let minus_one = ExactScalar::from(-1);
    for (&s, g) in t {
        add_into(&mut out, s, g.mul_z());
        add_into(&mut out, s - 1, g.shift_arg(&minus_one));
    }
    out
}

/// Derives the recurrence satisfied by the coefficients of every formal
/// solution `Σ aₙ z^(n)`. A shift-form equation is converted first.
pub fn derive_recurrence(eq: &LinearDifferenceEquation) -> Result<CoefficientRecurrence> {
    let eq = match eq.form() {
        Form::Delta => eq.clone(),
        Form::Shift => eq.to_delta_form(),
    };
    let mut total = SeqOp::new();
    for (j, pj) in eq.coeffs().iter().enumerate() {
        let mut zk = delta_power(j);
        for c in pj.coeffs() {
            if !c.is_zero() {
                for (&s, g) in &zk {
                    add_into(&mut total, s, g.scale(c));
                }
            }
            zk = times_z(&zk);
        }
    }
    let (Some(&s_min), Some(&s_max)) = (total.keys().next(), total.keys().next_back()) else {
        return Err(Error::InvalidInput("equation annihilates every series".into()));
    };
    let d = (s_max - s_min) as usize;

    // Equation n reads Σ_s G_s(n)a_{n+s}; with m = n + s_min it becomes
    // Σ_i q_i(m)a_{m+i} with q_i(m) = G_{s_min+i}(m - s_min).
    let back = ExactScalar::from(-s_min);
    let q: Vec<Polynomial> =
        (0..=d as i64).map(|i| total.get(&(s_min + i)).map_or_else(Polynomial::zero, |g| g.shift_arg(&back))).collect();

    // Equations with n < -s_min touch negative indices; they are kept verbatim.
    let mut prefix = Vec::new();
    for n in 0..(-s_min).max(0) {
        let terms =
            total.iter().filter(|(&s, _)| n + s >= 0).map(|(&s, g)| ((n + s) as usize, g.eval_i64(n))).collect();
        let c = LinearConstraint::new(terms, ExactScalar::zero());
        if !c.terms.is_empty() {
            prefix.push(c);
        }
    }
    Ok(CoefficientRecurrence { q, n_start: s_min.max(0) as usize, prefix_constraints: prefix })
}

/// Solves for `a₀ … a_n`.
///
/// The initial block is fixed by the prefix constraints, the `extra`
/// constraints and the `free` assignments together, by exact Gaussian
/// elimination; redundant but consistent data is accepted. The rest follows by
/// forward iteration, which stops with [`Error::SingularIndex`] where the
/// leading coefficient `q_d` vanishes.
pub fn solve_recurrence(
    rec: &CoefficientRecurrence,
    free: &[(usize, ExactScalar)],
    extra: &[LinearConstraint],
    n: usize,
) -> Result<Vec<ExactScalar>> {
    let block = rec.initial_block();
    let mut rows: Vec<LinearConstraint> = rec.prefix_constraints.clone();
    for c in extra {
        if let Some(k) = c.max_index().filter(|&k| k >= block) {
            return Err(Error::FreeIndexOutOfRange { index: k, block });
        }
        rows.push(c.clone());
    }
    for (k, v) in free {
        if *k >= block {
            return Err(Error::FreeIndexOutOfRange { index: *k, block });
        }
        rows.push(LinearConstraint::fix(*k, v.clone()));
    }
    let init = solve_block(&rows, block)?;

    let d = rec.order();
    let len = n + 1;
    let mut a = init;
    a.resize(len.max(block), ExactScalar::zero());
    let lead: &Polynomial = &rec.q[d];
    let mut m = rec.n_start;
    while m + d < len {
        let qd = lead.eval_i64(m as i64);
        let Some(inv) = qd.recip() else {
            return Err(Error::SingularIndex { n: m, order: d });
        };
        let mut s = ExactScalar::zero();
        for (i, qi) in rec.q.iter().enumerate().take(d) {
            if !a[m + i].is_zero() {
                s = &s + &(&qi.eval_i64(m as i64) * &a[m + i]);
            }
        }
        a[m + d] = -&(&s * &inv);
        m += 1;
    }
    a.truncate(len);
    Ok(a)
}

/// Unique solution of `rows` in the unknowns `0..block`.
fn solve_block(rows: &[LinearConstraint], block: usize) -> Result<Vec<ExactScalar>> {
    let mut mat: Vec<Vec<ExactScalar>> = rows
        .iter()
        .map(|r| {
            let mut row = vec![ExactScalar::zero(); block + 1];
            for (k, c) in &r.terms {
                row[*k] = c.clone();
            }
            row[block] = r.rhs.clone();
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..block {
        let Some(p) = (r..mat.len()).find(|&i| !mat[i][col].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        let inv = mat[r][col].recip().expect("nonzero pivot");
        let pivot_row: Vec<ExactScalar> = mat[r].iter().map(|x| x * &inv).collect();
        for (i, row) in mat.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x = &*x - &(&f * p);
                }
            }
        }
        mat[r] = pivot_row;
        pivots.push(col);
        r += 1;
    }
    if mat[r..].iter().any(|row| !row[block].is_zero()) {
        return Err(Error::Inconsistent);
    }
    if pivots.len() < block {
        return Err(Error::Underdetermined { missing: block - pivots.len() });
    }
    Ok((0..block).map(|i| mat[i][block].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::factorial;
    use rug::Rational;

    fn poly(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    fn rational(num: i64, den: rug::Integer) -> ExactScalar {
        ExactScalar::from(Rational::from((num, den)))
    }

    fn proportional(a: &[Polynomial], b: &[Polynomial]) -> bool {
        let (Some(la), Some(lb)) = (a.last().and_then(|p| p.leading()), b.last().and_then(|p| p.leading())) else {
            return false;
        };
        let f = lb / la;
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| &x.scale(&f) == y)
    }

    #[test]
    fn exponential_recurrence() {
        let lam = ExactScalar::ratio(1, 2);
        let eq = LinearDifferenceEquation::delta(vec![Polynomial::constant(-&lam), poly(&[1])]).unwrap();
        let rec = derive_recurrence(&eq).unwrap();
        assert!(proportional(&rec.q, &[Polynomial::constant(-&lam), poly(&[1, 1])]));
        assert_eq!(rec.n_start, 0);
        assert!(rec.prefix_constraints.is_empty());
        let a = solve_recurrence(&rec, &[(0, ExactScalar::one())], &[], 10).unwrap();
        for (n, an) in a.iter().enumerate() {
            assert_eq!(*an, &lam.pow(n as u32) * &rational(1, factorial(n as u32)));
        }
    }

    #[test]
    fn gamma_recurrence() {
        let eq = LinearDifferenceEquation::delta(vec![poly(&[1, -1]), poly(&[1])]).unwrap();
        let rec = derive_recurrence(&eq).unwrap();
        assert_eq!(rec.prefix_constraints.len(), 1);
        let c = &rec.prefix_constraints[0];
        assert_eq!(c.to_string(), "a0+a1=0");
        // (m+2)a_{m+2} - m·a_{m+1} - a_m = 0
        assert!(proportional(&rec.q, &[poly(&[-1]), poly(&[0, -1]), poly(&[2, 1])]));
        let a = solve_recurrence(&rec, &[(0, ExactScalar::one())], &[], 200).unwrap();
        for (n, an) in a.iter().enumerate() {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(*an, rational(sign, factorial(n as u32)));
        }
    }

    #[test]
    fn half_order_recurrence() {
        let eq = LinearDifferenceEquation::delta(vec![poly(&[1]), poly(&[3]), poly(&[6, 4])]).unwrap();
        let rec = derive_recurrence(&eq).unwrap();
        // 2(n+2)(n+1)(2n+3)a_{n+2} + (n+1)(4n+3)a_{n+1} + a_n = 0
        let lead = &(&poly(&[2, 1]) * &poly(&[1, 1])) * &poly(&[6, 4]);
        let mid = &poly(&[1, 1]) * &poly(&[3, 4]);
        assert_eq!(rec.q, vec![poly(&[1]), mid, lead]);
        assert!(rec.prefix_constraints.is_empty());

        let sel: LinearConstraint = "a0+2a1=0".parse().unwrap();
        let a = solve_recurrence(&rec, &[(0, ExactScalar::one())], &[sel], 60).unwrap();
        for (n, an) in a.iter().enumerate() {
            let sign = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(*an, rational(sign, factorial(2 * n as u32)));
        }
        // spot check at n = 0: 2·2·1·3·a2 + 3a1 + a0 = 0
        assert!(rec.residual(&a, 0).is_zero());
    }

    #[test]
    fn free_value_errors() {
        let eq = LinearDifferenceEquation::delta(vec![poly(&[1]), poly(&[3]), poly(&[6, 4])]).unwrap();
        let rec = derive_recurrence(&eq).unwrap();
        assert!(matches!(
            solve_recurrence(&rec, &[(0, ExactScalar::one())], &[], 5),
            Err(Error::Underdetermined { missing: 1 })
        ));
        assert!(matches!(
            solve_recurrence(&rec, &[(5, ExactScalar::one())], &[], 5),
            Err(Error::FreeIndexOutOfRange { index: 5, block: 2 })
        ));
        let free = [(0, ExactScalar::one()), (1, ExactScalar::one())];
        let conflicting: LinearConstraint = "a0+2a1=0".parse().unwrap();
        assert!(matches!(solve_recurrence(&rec, &free, &[conflicting], 5), Err(Error::Inconsistent)));
        let consistent: LinearConstraint = "a0-a1=0".parse().unwrap();
        assert!(solve_recurrence(&rec, &free, &[consistent], 5).is_ok());
    }

    #[test]
    fn singular_index_is_reported() {
        // (z-1)Δy + y = 0 gives q_1(n) = (n+1)(n-1), zero at n = 1
        let eq = LinearDifferenceEquation::delta(vec![poly(&[1]), poly(&[-1, 1])]).unwrap();
        let rec = derive_recurrence(&eq).unwrap();
        assert!(matches!(
            solve_recurrence(&rec, &[(0, ExactScalar::one())], &[], 10),
            Err(Error::SingularIndex { n: 1, order: 1 })
        ));
    }

    #[test]
    fn zero_data_gives_zero_series() {
        let eq = LinearDifferenceEquation::delta(vec![poly(&[1]), poly(&[3]), poly(&[6, 4])]).unwrap();
        let rec = derive_recurrence(&eq).unwrap();
        let free = [(0, ExactScalar::zero()), (1, ExactScalar::zero())];
        assert!(solve_recurrence(&rec, &free, &[], 30).unwrap().iter().all(ExactScalar::is_zero));
    }

    #[test]
    fn constraint_parsing() {
        let c: LinearConstraint = "2*a1 + a0 = 0".parse().unwrap();
        assert_eq!(c.to_string(), "a0+2a1=0");
        let c: LinearConstraint = "a3 - 1/2 a2 = 1".parse().unwrap();
        assert_eq!(c.to_string(), "-1/2a2+a3=1");
        assert_eq!(c.to_string().parse::<LinearConstraint>().unwrap(), c);
        assert!("a0 + 2a1".parse::<LinearConstraint>().is_err());
        assert!("b0 = 1".parse::<LinearConstraint>().is_err());
    }
}
