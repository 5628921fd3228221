//! Falling factorials, Stirling numbers of both kinds, and conversion between
//! the monomial basis `{zⁿ}` and the falling-factorial basis `{z^(n)}`.
//!
//! With `z^(n) = z(z-1)···(z-n+1)`:
//!
//! ```text
//! z^(n) = Σ_j η(j,n) zʲ          (first kind, signed)
//! zⁿ    = Σ_k η̃(k,n) z^(k)       (second kind)
//! ```

use std::sync::{OnceLock, RwLock};

use rug::{Integer, Rational};
use serde::Serialize;

use crate::poly::Polynomial;
use crate::scalar::{factorial, Cplx, ExactScalar};

/// `z(z-1)···(z-n+1)`, and `1` for `n = 0`.
///
/// When `z` is an integer in `0..n` one factor is exactly zero, so the result is
/// an exact zero rather than a rounded one.
pub fn falling_factorial(z: &Cplx, n: u32) -> Cplx {
    let mut acc = Cplx::from_i64(z.prec(), 1);
    for k in 0..n {
        acc = &acc * &z.add_i64(-(k as i64));
    }
    acc
}

#[derive(Default)]
struct Rows {
    first: Vec<Vec<Integer>>,
    second: Vec<Vec<Integer>>,
}

impl Rows {
    fn extend_to(&mut self, n_max: usize) {
        if self.first.is_empty() {
            self.first.push(vec![Integer::from(1)]);
            self.second.push(vec![Integer::from(1)]);
        }
        while self.first.len() <= n_max {
            let n = self.first.len() - 1;
            let (f, s) = (&self.first[n], &self.second[n]);
            let mut nf = vec![Integer::new(); n + 2];
            let mut ns = vec![Integer::new(); n + 2];
            for j in 1..=n + 1 {
                // η(j,n+1) = η(j-1,n) - n·η(j,n)
                let below = f.get(j).map(|v| Integer::from(v * n as u64)).unwrap_or_default();
                nf[j] = Integer::from(&f[j - 1] - &below);
                // η̃(k,n+1) = η̃(k-1,n) + k·η̃(k,n)
                let below = s.get(j).map(|v| Integer::from(v * j as u64)).unwrap_or_default();
                ns[j] = Integer::from(&s[j - 1] + &below);
            }
            self.first.push(nf);
            self.second.push(ns);
        }
    }
}

fn cache() -> &'static RwLock<Rows> {
    static CACHE: OnceLock<RwLock<Rows>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(Rows::default()))
}

/// Run `f` on a cached table holding at least rows `0..=n_max`.
fn with_rows<T>(n_max: usize, f: impl FnOnce(&Rows) -> T) -> T {
    {
        let rows = cache().read().expect("stirling cache poisoned");
        if rows.first.len() > n_max {
            return f(&rows);
        }
    }
    let mut rows = cache().write().expect("stirling cache poisoned");
    rows.extend_to(n_max);
    f(&rows)
}

fn to_exact(row: &[Integer]) -> Vec<ExactScalar> {
    row.iter().cloned().map(ExactScalar::from).collect()
}

/// `[η(0,n), …, η(n,n)]`.
pub fn stirling_first_row(n: usize) -> Vec<ExactScalar> {
    with_rows(n, |r| to_exact(&r.first[n]))
}

/// `[η̃(0,n), …, η̃(n,n)]`.
pub fn stirling_second_row(n: usize) -> Vec<ExactScalar> {
    with_rows(n, |r| to_exact(&r.second[n]))
}

/// Integer view of a first-kind row, for hot loops that avoid `ExactScalar`.
pub(crate) fn first_row_int(n: usize) -> Vec<Integer> {
    with_rows(n, |r| r.first[n].clone())
}

pub(crate) fn second_row_int(n: usize) -> Vec<Integer> {
    with_rows(n, |r| r.second[n].clone())
}

/// A materialized snapshot of both Stirling tables up to `n_max`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StirlingTable {
    pub n_max: usize,
    pub first_kind: Vec<Vec<ExactScalar>>,
    pub second_kind: Vec<Vec<ExactScalar>>,
}

impl StirlingTable {
    pub fn new(n_max: usize) -> Self {
        with_rows(n_max, |r| StirlingTable {
            n_max,
            first_kind: r.first[..=n_max].iter().map(|row| to_exact(row)).collect(),
            second_kind: r.second[..=n_max].iter().map(|row| to_exact(row)).collect(),
        })
    }
}

/// Coefficients `c` with `p(z) = Σ cₙ z^(n)`; length is `deg p + 1`.
pub fn poly_to_binomial(p: &Polynomial) -> Vec<ExactScalar> {
    let Some(deg) = p.degree().finite() else {
        return Vec::new();
    };
    with_rows(deg, |r| {
        let mut c = vec![ExactScalar::zero(); deg + 1];
        for (n, pn) in p.coeffs().iter().enumerate() {
            if pn.is_zero() {
                continue;
            }
            for (k, s) in r.second[n].iter().enumerate() {
                if *s != 0 {
                    c[k] = &c[k] + &pn.mul_integer(s);
                }
            }
        }
        c
    })
}

/// Inverse of [`poly_to_binomial`].
pub fn binomial_to_poly(c: &[ExactScalar]) -> Polynomial {
    if c.is_empty() {
        return Polynomial::zero();
    }
    let top = c.len() - 1;
    with_rows(top, |r| {
        let mut p = vec![ExactScalar::zero(); top + 1];
        for (n, cn) in c.iter().enumerate() {
            if cn.is_zero() {
                continue;
            }
            for (j, s) in r.first[n].iter().enumerate() {
                if *s != 0 {
                    p[j] = &p[j] + &cn.mul_integer(s);
                }
            }
        }
        Polynomial::new(p)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    First,
    Second,
}

/// One checked entry of the Stirling magnitude bound.
#[derive(Clone, Debug, Serialize)]
pub struct BoundCheck {
    pub kind: Kind,
    pub j: usize,
    pub n: usize,
    pub value: String,
    pub bound: String,
    pub holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub n_max: usize,
    pub all_hold: bool,
    pub checks: Vec<BoundCheck>,
}

/// `((n-1)!/(j-1)!)² / (n-j)!` for `1 ≤ j ≤ n`.
pub fn stirling_bound(j: usize, n: usize) -> Rational {
    assert!(1 <= j && j <= n, "bound needs 1 <= j <= n");
    let ratio = factorial(n as u32 - 1) / factorial(j as u32 - 1);
    let sq = Integer::from(&ratio * &ratio);
    Rational::from((sq, factorial((n - j) as u32)))
}

/// Checks `|η(j,n)| ≤ bound(j,n)` and `|η̃(j,n)| ≤ bound(j,n)` for all
/// `1 ≤ j ≤ n ≤ n_max`, exactly. Column 0 is left out: the bound is undefined there.
pub fn verify_stirling_bounds(n_max: usize) -> BoundReport {
    with_rows(n_max, |r| {
        let mut checks = Vec::new();
        for n in 1..=n_max {
            for j in 1..=n {
                let bound = stirling_bound(j, n);
                for (kind, v) in [(Kind::First, &r.first[n][j]), (Kind::Second, &r.second[n][j])] {
                    let abs = Integer::from(v.abs_ref());
                    checks.push(BoundCheck {
                        kind,
                        j,
                        n,
                        value: v.to_string(),
                        bound: bound.to_string(),
                        holds: abs <= bound,
                    });
                }
            }
        }
        BoundReport { n_max, all_hold: checks.iter().all(|c| c.holds), checks }
    })
}
