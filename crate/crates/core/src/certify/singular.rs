//! Bounds on `mult_Q p_i^* D` at the singular points of X.

use num::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Rat, Q};
use crate::quasismooth::{BoundaryCurve, Irreducibility};
use crate::wps::{chart_localize, chart_multiplicity, ChartSupport, Location, SingularPoint, Surface};

use super::newton::{is_generic_node, newton_lct, shear_double_line};

/// The pencil bound at `point`, minimized over admissible chart pairs.
///
/// Coordinate point `P_i`, pair `(j,k)`, rest `l`: `d / (min(q_j,q_k) q_l)`.
/// Line point with stabilizer `g` on `(x_a = x_b = 0)`: the pencil
/// `|x_a^{q_b}, x_b^{q_a}|` meets `p^*D` at the `q_i/g` preimages of the point,
/// giving `g d / (min(q_a,q_b) q_c q_d)`.
///
/// `None` when no pair is admissible.
pub fn pencil_estimate(surface: &Surface, point: &SingularPoint) -> Option<(Rat, [usize; 2])> {
    let ws = &surface.ws;
    let d = ws.d() as i64;
    point
        .charts
        .iter()
        .map(|c| {
            let [j, k] = c.pair;
            let near = ws.weight(j).min(ws.weight(k)) as i64;
            let value = match point.location {
                Location::Coordinate(_) => Rat::new(d, near * ws.weight(c.rest) as i64),
                Location::Line { .. } => Rat::new(
                    point.index as i64 * d,
                    near * (ws.weight(c.chart) * ws.weight(c.rest)) as i64,
                ),
            };
            (value, c.pair)
        })
        .min()
}

/// Splitting bound along `C_v` at a coordinate point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitBound {
    pub v: usize,
    /// Multiplicity of `p_i^* C_v` at the chart origin.
    pub m: u32,
    /// Bound on `mult_Q p_i^* D'` for `D'` not containing `C_v`.
    pub bprime: Q,
    /// `max(m/q_v, bprime)`.
    pub value: Q,
}

fn usable_curve(surface: &Surface, point: &SingularPoint, v: usize) -> Result<(usize, BoundaryCurve)> {
    let unusable = |reason: String| Error::BoundaryUnusable {
        v,
        point: point.label(),
        reason,
    };
    let i = point
        .coordinate()
        .ok_or_else(|| unusable("split bounds are only taken at coordinate points".into()))?;
    if v > 3 {
        return Err(Error::BadIndex(v));
    }
    if v == i {
        return Err(unusable(format!("x{v} does not vanish there")));
    }
    let curve = BoundaryCurve::new(surface, v);
    match curve.irreducible {
        Irreducibility::Yes => Ok((i, curve)),
        Irreducibility::No(k) => Err(unusable(format!("the curve has {k} components"))),
        Irreducibility::Unknown => Err(unusable("irreducibility undecided".into())),
    }
}

fn boundary_chart(curve: &BoundaryCurve, point: &SingularPoint, i: usize) -> Result<ChartSupport> {
    chart_localize(&curve.support, i, point, &[curve.v])
}

/// Writes `D = a C_v + (1 - q_v a) D'` with `0 <= a <= 1/q_v`. Then
/// `mult p^*D' <= (1/m)(p^*C . p^*D') <= (q_i/m) q_v d/pi`, and the affine
/// function `a m + (1 - q_v a) B'` peaks at an endpoint.
pub fn refined_split_bound(surface: &Surface, point: &SingularPoint, v: usize) -> Result<SplitBound> {
    let (i, curve) = usable_curve(surface, point, v)?;
    let chart = boundary_chart(&curve, point, i)?;
    let m = chart_multiplicity(&chart);
    if m == 0 {
        return Err(Error::BoundaryUnusable {
            v,
            point: point.label(),
            reason: "the curve misses the point".into(),
        });
    }
    let ws = &surface.ws;
    let qv = ws.weight(v) as i64;
    let bprime = Rat::new(point.index as i64, m as i64) * Rat::new(qv * ws.d() as i64, ws.pi() as i64);
    let value = Rat::new(m as i64, qv).max(bprime);
    Ok(SplitBound {
        v,
        m,
        bprime: Q(bprime),
        value: Q(value),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LctMode {
    /// klt of `(X, D)` for every `D ≡ -K_X`.
    Tiger,
    /// klt of `(X, (2+e)/3 D)` for some `e > 0`.
    Ke,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LctMethod {
    Smooth,
    Node,
    Newton,
    ShearThenNewton,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LctPath {
    pub v: usize,
    pub mode: LctMode,
    pub lct: Q,
    pub bprime: Q,
    pub method: LctMethod,
    pub passed: bool,
}

/// Log canonical threshold of `p_i^* C_v` at the chart origin.
pub fn boundary_lct(surface: &Surface, point: &SingularPoint, v: usize) -> Result<(Rat, LctMethod)> {
    let (i, curve) = usable_curve(surface, point, v)?;
    let chart = boundary_chart(&curve, point, i)?;
    let m = chart_multiplicity(&chart);
    if surface.coincident_tangents(i, v) {
        let sheared = shear_double_line(&chart)?;
        return Ok((newton_lct(&sheared), LctMethod::ShearThenNewton));
    }
    Ok(match m {
        0 | 1 => (Rat::one(), LctMethod::Smooth),
        2 if is_generic_node(&chart) => (Rat::one(), LctMethod::Node),
        _ => (newton_lct(&chart), LctMethod::Newton),
    })
}

/// Decides the pair near `point` through `C_v`: with `D = a C_v + (1 - q_v a) D'`
/// both `(X, c C_v / q_v)` and `(X, c D')` must be klt there.
///
/// * `Ke` (`c = (2+e)/3`): `lct > 2/(3 q_v)` and `B' < 3/2`.
/// * `Tiger` (`c = 1`): `lct > 1/q_v` and `B' <= 1`.
pub fn lct_path(surface: &Surface, point: &SingularPoint, v: usize, mode: LctMode) -> Result<LctPath> {
    let split = refined_split_bound(surface, point, v)?;
    let (lct, method) = boundary_lct(surface, point, v)?;
    let qv = surface.ws.weight(v) as i64;
    let b = split.bprime.0;
    let passed = match mode {
        LctMode::Ke => lct > Rat::new(2, 3 * qv) && b < Rat::new(3, 2),
        LctMode::Tiger => lct > Rat::new(1, qv) && b <= Rat::one(),
    };
    Ok(LctPath {
        v,
        mode,
        lct: Q(lct),
        bprime: split.bprime,
        method,
        passed,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TigerWitness {
    pub v: usize,
    pub point: usize,
    pub multiplicity: u32,
}

impl TigerWitness {
    pub fn describe(&self) -> String {
        format!("(x{}=0)", self.v)
    }
}

/// `C_v` itself when `q_v = 1` (so `C_v ≡ -K_X`) and `p_i^* C_v` has
/// multiplicity at least 2 at some singular coordinate point: then its lct
/// is at most `2/m <= 1` and `(X, C_v)` is not klt.
pub fn tiger_witness(surface: &Surface, points: &[SingularPoint]) -> Option<TigerWitness> {
    let ws = &surface.ws;
    for v in (0..4).filter(|&v| ws.weight(v) == 1) {
        let support = surface.support_in(Some(&(0..4).filter(|&k| k != v).collect::<Vec<_>>()));
        for p in points {
            let Some(i) = p.coordinate() else { continue };
            if i == v {
                continue;
            }
            let Ok(chart) = chart_localize(&support, i, p, &[v]) else {
                continue;
            };
            let m = chart_multiplicity(&chart);
            if m >= 2 {
                return Some(TigerWitness {
                    v,
                    point: i,
                    multiplicity: m,
                });
            }
        }
    }
    None
}
