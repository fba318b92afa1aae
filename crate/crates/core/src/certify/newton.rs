//! Log canonical thresholds of plane curve germs from Newton polyhedra, and
//! the shear that straightens a double-line tangent cone.

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{Rat, Q};
use crate::wps::{chart_multiplicity, ChartSupport, ChartTerm, Coeff};

/// Smallest `t` with `(t,t)` in the convex hull of `points` plus the positive
/// quadrant. The boundary meets the diagonal on a vertex, a compact edge, or a
/// vertex of an unbounded face, so scanning single points and pairs suffices.
pub fn diagonal_depth(points: &[(u32, u32)]) -> Option<Rat> {
    let mut best: Option<Rat> = None;
    let mut offer = |t: Rat| {
        if best.is_none_or(|b| t < b) {
            best = Some(t);
        }
    };
    for &(a, b) in points {
        offer(Rat::from_integer(a.max(b) as i64));
    }
    for (n, &(px, py)) in points.iter().enumerate() {
        for &(qx, qy) in &points[n + 1..] {
            let dp = px as i64 - py as i64;
            let dq = qx as i64 - qy as i64;
            // The segment crosses the diagonal only when the endpoints lie
            // on opposite sides of it.
            if dp.signum() * dq.signum() >= 0 {
                continue;
            }
            // lambda*dp + (1-lambda)*dq = 0
            let lambda = Rat::new(dq, dq - dp);
            let t = lambda * Rat::from_integer(px as i64)
                + (Rat::one() - lambda) * Rat::from_integer(qx as i64);
            offer(t);
        }
    }
    best
}

/// `min(1, 1/t)` for the diagonal depth `t` of a two-variable support.
pub fn newton_lct_points(points: &[(u32, u32)]) -> Rat {
    match diagonal_depth(points) {
        Some(t) if t > Rat::one() => t.recip(),
        _ => Rat::one(),
    }
}

/// Newton-polyhedron log canonical threshold of a two-coordinate chart germ,
/// capped at 1. Assumes coefficients nondegenerate on the Newton boundary.
pub fn newton_lct(chart: &ChartSupport) -> Rat {
    newton_lct_points(&chart.pairs())
}

/// The quadratic tangent cone of a multiplicity-2 germ.
fn quadratic_part(chart: &ChartSupport) -> Vec<(u32, u32)> {
    chart
        .pairs()
        .into_iter()
        .filter(|&(a, b)| a + b == 2)
        .collect()
}

/// Whether the generic quadratic cone splits into two distinct lines.
pub fn is_generic_node(chart: &ChartSupport) -> bool {
    if chart.coords.len() != 2 || chart_multiplicity(chart) != 2 {
        return false;
    }
    let quad = quadratic_part(chart);
    quad.contains(&(1, 1)) || (quad.contains(&(2, 0)) && quad.contains(&(0, 2)))
}

/// Rewrites a germ whose quadratic cone `b y^2 + c y z + e z^2` is the double
/// line `e (z + s y)^2` in coordinates `(y, z' = z + s y)`.
///
/// The cone becomes `e z'^2` exactly. A generic degree-`n` term `y^i z^j`
/// expands over `y^{i+k} z'^{j-k}` for `k = 0..=j`; each resulting coefficient
/// includes an independent generic coefficient with a nonzero weight, so it
/// stays generic.
pub fn shear_double_line(chart: &ChartSupport) -> Result<ChartSupport> {
    if chart.coords.len() != 2 || chart_multiplicity(chart) != 2 {
        return Err(Error::UnsupportedDegeneration(format!(
            "coincident tangents need a multiplicity-2 plane germ, got multiplicity {} in {} coordinates",
            chart_multiplicity(chart),
            chart.coords.len()
        )));
    }
    let quad = quadratic_part(chart);
    if !(quad.contains(&(2, 0)) && quad.contains(&(1, 1)) && quad.contains(&(0, 2))) {
        return Err(Error::UnsupportedDegeneration(
            "a skew double line needs all three quadratic terms".into(),
        ));
    }
    let mut reach: BTreeMap<u32, u32> = BTreeMap::new();
    for (a, b) in chart.pairs() {
        let n = a + b;
        if n == 2 {
            continue;
        }
        let e = reach.entry(n).or_insert(0);
        *e = (*e).max(b);
    }
    let mut terms = vec![ChartTerm {
        exps: vec![0, 2],
        coeff: Coeff::Exact(Q(Rat::one())),
    }];
    for (n, top) in reach {
        for e in 0..=top {
            terms.push(ChartTerm {
                exps: vec![n - e, e],
                coeff: Coeff::Generic,
            });
        }
    }
    terms.sort_by(|x, y| x.exps.cmp(&y.exps));
    Ok(ChartSupport {
        chart: chart.chart,
        coords: chart.coords.clone(),
        stabilizer: chart.stabilizer,
        terms,
    })
}

/// Drops terms with an exact zero coefficient.
pub fn nonzero_terms(chart: &ChartSupport) -> ChartSupport {
    let mut out = chart.clone();
    out.terms
        .retain(|t| !matches!(t.coeff, Coeff::Exact(q) if q.0.is_zero()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chart(points: &[(u32, u32)]) -> ChartSupport {
        ChartSupport {
            chart: 0,
            coords: vec![1, 2],
            stabilizer: 1,
            terms: points
                .iter()
                .map(|&(a, b)| ChartTerm {
                    exps: vec![a, b],
                    coeff: Coeff::Generic,
                })
                .collect(),
        }
    }

    #[test]
    fn reference_thresholds() {
        assert_eq!(newton_lct_points(&[(5, 0), (0, 3)]), Rat::new(8, 15));
        assert_eq!(newton_lct_points(&[(1, 1)]), Rat::one());
        assert_eq!(newton_lct_points(&[(5, 0), (0, 2)]), Rat::new(7, 10));
        assert_eq!(newton_lct_points(&[(0, 0), (4, 4)]), Rat::one());
        assert_eq!(newton_lct_points(&[(3, 0)]), Rat::new(1, 3));
    }

    #[test]
    fn edge_meeting_unbounded_face() {
        // x^2 y^5 + y^7: diagonal first hits the vertical ray above (2,5).
        assert_eq!(newton_lct_points(&[(2, 5), (0, 7)]), Rat::new(1, 5));
    }

    #[test]
    fn shear_on_double_line() {
        let c = chart(&[(5, 0), (2, 0), (1, 1), (0, 2)]);
        assert!(is_generic_node(&c));
        let s = shear_double_line(&c).unwrap();
        let mut pts = s.pairs();
        pts.sort();
        assert_eq!(pts, vec![(0, 2), (5, 0)]);
        assert_eq!(newton_lct(&s), Rat::new(7, 10));
    }

    #[test]
    fn shear_spreads_higher_terms() {
        let c = chart(&[(2, 0), (1, 1), (0, 2), (1, 2), (4, 0)]);
        let s = shear_double_line(&c).unwrap();
        let mut pts = s.pairs();
        pts.sort();
        assert_eq!(pts, vec![(0, 2), (1, 2), (2, 1), (3, 0), (4, 0)]);
    }

    #[test]
    fn shear_rejects_other_shapes() {
        assert!(shear_double_line(&chart(&[(5, 0), (0, 3), (1, 1)])).is_err());
        assert!(shear_double_line(&chart(&[(2, 0), (0, 2)])).is_err());
        assert!(shear_double_line(&chart(&[(3, 0), (0, 3)])).is_err());
    }
}
