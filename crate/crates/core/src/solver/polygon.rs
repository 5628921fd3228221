use rug::Rational;
use serde::Serialize;

use super::equation::{Form, LinearDifferenceEquation};

/// Upper-left boundary of the Newton polygon of a Δ-form equation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewtonPolygon {
    /// `(j, A_{p-j} - (p-j))` for each nonzero coefficient `a_{p-j}`.
    pub points: Vec<(i64, i64)>,
    /// Hull vertices from the leftmost point up to the first one at maximal height.
    pub hull: Vec<(i64, i64)>,
    /// Slopes of the hull segments, left to right, strictly decreasing and positive.
    #[serde(serialize_with = "rationals_as_strings")]
    pub slopes: Vec<Rational>,
}

fn rationals_as_strings<S: serde::Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

impl NewtonPolygon {
    /// Slopes in the open interval `(0, 1)`.
    pub fn candidate_orders(&self) -> Vec<Rational> {
        self.slopes.iter().filter(|s| s.cmp0().is_gt() && **s < 1).cloned().collect()
    }
}

/// Builds the polygon from the generating points. Each point stands for the
/// region to its right and below, so only the rising part of the upper hull
/// matters; past the highest point the boundary is horizontal.
pub fn newton_polygon(eq: &LinearDifferenceEquation) -> NewtonPolygon {
    let eq = match eq.form() {
        Form::Delta => eq.clone(),
        Form::Shift => eq.to_delta_form(),
    };
    let p = eq.order();
    let points: Vec<(i64, i64)> = (0..=p)
        .filter_map(|j| {
            let k = p - j;
            eq.coeffs()[k].degree().finite().map(|a| (j as i64, a as i64 - k as i64))
        })
        .collect();

    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in &points {
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (a.0 - o.0) * (pt.1 - o.1) - (a.1 - o.1) * (pt.0 - o.0);
            if cross >= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let top = hull.iter().map(|v| v.1).max().unwrap_or(0);
    let cut = hull.iter().position(|v| v.1 == top).unwrap_or(0);
    hull.truncate(cut + 1);
    let slopes = hull.windows(2).map(|w| Rational::from((w[1].1 - w[0].1, w[1].0 - w[0].0))).collect();
    NewtonPolygon { points, hull, slopes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Polynomial;
    use crate::scalar::ExactScalar;

    fn poly(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    #[test]
    fn half_order_polygon() {
        let eq = LinearDifferenceEquation::delta(vec![poly(&[1]), poly(&[3]), poly(&[6, 4])]).unwrap();
        let np = newton_polygon(&eq);
        assert_eq!(np.points, vec![(0, -1), (1, -1), (2, 0)]);
        assert_eq!(np.hull, vec![(0, -1), (2, 0)]);
        assert_eq!(np.slopes, vec![Rational::from((1, 2))]);
        assert_eq!(np.candidate_orders(), vec![Rational::from((1, 2))]);
    }

    #[test]
    fn first_order_polygons() {
        let eq =
            LinearDifferenceEquation::delta(vec![Polynomial::constant(ExactScalar::ratio(-1, 2)), poly(&[1])]).unwrap();
        let np = newton_polygon(&eq);
        assert_eq!(np.points, vec![(0, -1), (1, 0)]);
        assert_eq!(np.slopes, vec![Rational::from(1)]);
        assert!(np.candidate_orders().is_empty());

        let eq = LinearDifferenceEquation::delta(vec![poly(&[1, -1]), poly(&[1])]).unwrap();
        let np = newton_polygon(&eq);
        assert_eq!(np.points, vec![(0, -1), (1, 1)]);
        assert_eq!(np.slopes, vec![Rational::from(2)]);
        assert!(np.candidate_orders().is_empty());
    }

    #[test]
    fn zero_coefficients_are_skipped() {
        // Δ²y + z·y = 0: a₁ ≡ 0
        let eq = LinearDifferenceEquation::delta(vec![poly(&[0, 1]), Polynomial::zero(), poly(&[1])]).unwrap();
        let np = newton_polygon(&eq);
        assert_eq!(np.points, vec![(0, -2), (2, 1)]);
        assert_eq!(np.slopes, vec![Rational::from((3, 2))]);
    }

    #[test]
    fn flat_polygon_has_no_slopes() {
        // z·Δy + y = 0: highest point first
        let eq = LinearDifferenceEquation::delta(vec![poly(&[1]), poly(&[0, 1])]).unwrap();
        let np = newton_polygon(&eq);
        assert_eq!(np.points, vec![(0, 0), (1, 0)]);
        assert!(np.slopes.is_empty());
    }

    #[test]
    fn scaling_leaves_slopes_alone() {
        let eq = LinearDifferenceEquation::delta(vec![poly(&[1]), poly(&[3]), poly(&[6, 4])]).unwrap();
        let scaled = eq.scale(&ExactScalar::ratio(-7, 3)).unwrap();
        assert_eq!(newton_polygon(&eq).slopes, newton_polygon(&scaled).slopes);
    }
}
