//! Multiplicity bounds at the smooth points of X.
//!
//! Two kinds of pieces cover the smooth locus:
//! * a separating strategy `(avoid v, project from P_p, degree l)` bounds
//!   `mult_P D <= l*d/pi` at smooth points with `x_v != 0`;
//! * a boundary bound bounds `mult_P D` on the curve `C_v = (x_v = 0)` by
//!   splitting `D = a*C_v + (1 - q_v*a)*D'`.
//!
//! The cover is chosen by exhaustive search over the 2^4 x 2^4 piece sets.

use num::integer::gcd;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Rat, Q};
use crate::quasismooth::{BoundaryCurve, Irreducibility, Smoothness};
use crate::wps::{line_point_count, Monomial, Surface, WeightSystem};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparatingStrategy {
    pub avoid: usize,
    pub projection: usize,
    pub l: u64,
    pub bound: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryBound {
    pub v: usize,
    pub value: Q,
    pub available: bool,
    pub irreducible: Irreducibility,
    pub smooth_outside_sing: Smoothness,
    pub components: Option<u64>,
    pub reason: Option<String>,
}

/// A coordinate stratum `{x_i = 0 for i in zero, x_i != 0 otherwise}` left
/// uncovered by the chosen pieces.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Leftover {
    pub zero: Vec<usize>,
    pub label: String,
    pub points: u64,
    pub singular: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmoothCertificate {
    pub strategies: Vec<SeparatingStrategy>,
    pub boundary: Vec<BoundaryBound>,
    /// Every boundary curve, used or not.
    pub curves: Vec<BoundaryBound>,
    pub leftover: Vec<Leftover>,
    pub leftover_check: bool,
    pub overall_bound: Option<Q>,
}

fn count_reps(a: u64, b: u64, l: u64, want: usize) -> bool {
    let mut n = 0;
    let mut beta = 0;
    while beta * b <= l {
        if (l - beta * b).is_multiple_of(a) {
            n += 1;
            if n >= want {
                return true;
            }
        }
        beta += 1;
    }
    false
}

/// Weights-only core of [`separating_degree`].
pub fn minimal_separating_degree(ws: &WeightSystem, avoid: usize, projection: usize) -> Option<u64> {
    let rest: Vec<usize> = (0..4).filter(|&i| i != avoid && i != projection).collect();
    let qv = ws.weight(avoid);
    (1..=ws.pi()).find(|&l| rest.iter().all(|&i| count_reps(qv, ws.weight(i), l, 2)))
}

/// Least `l <= pi` such that for both indices `i` outside `{avoid, projection}`
/// there are two distinct monomials `x_avoid^a x_i^b` of degree `l`.
///
/// Requires the pure power of `x_projection` so that the projection from
/// `P_projection` has finite fibers.
pub fn separating_degree(surface: &Surface, avoid: usize, projection: usize) -> Result<Option<u64>> {
    for i in [avoid, projection] {
        if i > 3 {
            return Err(Error::BadIndex(i));
        }
    }
    if avoid == projection {
        return Ok(None);
    }
    if surface.pure_power(projection).is_none() {
        return Err(Error::InfiniteFiber(projection));
    }
    Ok(minimal_separating_degree(&surface.ws, avoid, projection))
}

fn strategy_bound(ws: &WeightSystem, l: u64) -> Rat {
    Rat::new((l * ws.d()) as i64, ws.pi() as i64)
}

/// Best strategy avoiding `v`: least bound, then least projection index.
pub fn best_strategy(surface: &Surface, v: usize) -> Option<SeparatingStrategy> {
    (0..4)
        .filter(|&p| p != v && surface.pure_power(p).is_some())
        .filter_map(|p| {
            let l = separating_degree(surface, v, p).ok()??;
            Some(SeparatingStrategy {
                avoid: v,
                projection: p,
                l,
                bound: Q(strategy_bound(&surface.ws, l)),
            })
        })
        .min_by(|a, b| (a.bound, a.projection).cmp(&(b.bound, b.projection)))
}

/// `max(1/q_v, d / prod_{i != v} q_i)`, available when `C_v` is irreducible,
/// smooth away from Sing X, and `d <= prod_{i != v} q_i`.
pub fn boundary_bound(surface: &Surface, v: usize) -> BoundaryBound {
    let ws = &surface.ws;
    let curve = BoundaryCurve::new(surface, v);
    let prod = ws.product_without(v);
    let value = Rat::new(1, ws.weight(v) as i64).max(Rat::new(ws.d() as i64, prod as i64));
    let mut reasons = Vec::new();
    match curve.irreducible {
        Irreducibility::Yes => {}
        Irreducibility::No(k) => reasons.push(format!("{} has {k} components", curve.label())),
        Irreducibility::Unknown => reasons.push(format!("irreducibility of {} undecided", curve.label())),
    }
    if curve.smooth_outside_sing != Smoothness::Yes {
        reasons.push(format!("smoothness of {} away from Sing X undecided", curve.label()));
    }
    if ws.d() > prod {
        reasons.push(format!("d = {} exceeds {prod}", ws.d()));
    }
    BoundaryBound {
        v,
        value: Q(value),
        available: reasons.is_empty(),
        irreducible: curve.irreducible,
        smooth_outside_sing: curve.smooth_outside_sing,
        components: match curve.irreducible {
            Irreducibility::Yes => Some(1),
            Irreducibility::No(k) => Some(k),
            Irreducibility::Unknown => None,
        },
        reason: (!reasons.is_empty()).then(|| reasons.join("; ")),
    }
}

/// Points of X in the stratum with zero set `zero`: `None` if empty, else
/// the point count when finite (0 when infinite).
fn stratum_points(surface: &Surface, zero: &[usize]) -> Option<u64> {
    let live: Vec<usize> = (0..4).filter(|i| !zero.contains(i)).collect();
    let restricted: Vec<Monomial> = surface.support_in(Some(&live));
    match live.len() {
        1 => restricted.is_empty().then_some(1),
        2 => {
            if restricted.is_empty() {
                return Some(0);
            }
            let n = line_point_count(
                &surface.ws,
                live[0],
                live[1],
                restricted.iter().map(|m| m.exp(live[0])),
            );
            (n > 0).then_some(n)
        }
        _ => (restricted.len() != 1).then_some(0),
    }
}

fn stratum_label(zero: &[usize]) -> String {
    match zero.len() {
        3 => {
            let k = (0..4).find(|i| !zero.contains(i)).unwrap();
            format!("P{k}")
        }
        0 => "open torus".to_string(),
        _ => {
            let eqs: Vec<String> = zero.iter().map(|i| format!("x{i}")).collect();
            format!("({}=0)", eqs.join("="))
        }
    }
}

struct Cover {
    /// (max bound, boundary pieces, pieces, leftover points, sum of bounds, masks)
    key: (Rat, u32, u32, u64, Rat, u8, u8),
    leftover: Vec<Leftover>,
}

fn evaluate_cover(
    surface: &Surface,
    strategies: &[Option<SeparatingStrategy>],
    bounds: &[BoundaryBound],
    smask: u8,
    bmask: u8,
) -> Option<Cover> {
    let ws = &surface.ws;
    let mut worst = Rat::from_integer(0);
    let mut total = Rat::from_integer(0);
    for v in 0..4 {
        if smask & (1 << v) != 0 {
            let b = strategies[v].as_ref()?.bound.0;
            worst = worst.max(b);
            total += b;
        }
        if bmask & (1 << v) != 0 {
            worst = worst.max(bounds[v].value.0);
            total += bounds[v].value.0;
        }
    }
    let mut leftover = Vec::new();
    let mut leftover_points = 0;
    for zmask in 0u8..15 {
        let zero: Vec<usize> = (0..4).filter(|i| zmask & (1 << i) != 0).collect();
        let covered = (smask & !zmask) != 0 || (bmask & zmask) != 0;
        if covered {
            continue;
        }
        let Some(points) = stratum_points(surface, &zero) else {
            continue;
        };
        let live: Vec<u64> = (0..4).filter(|i| !zero.contains(i)).map(|i| ws.weight(i)).collect();
        let stabilizer = live.iter().fold(0, |g, &q| gcd(g, q));
        if stabilizer == 1 || points == 0 {
            return None;
        }
        leftover_points += points;
        leftover.push(Leftover {
            label: stratum_label(&zero),
            zero,
            points,
            singular: true,
        });
    }
    let pieces = smask.count_ones() + bmask.count_ones();
    Some(Cover {
        key: (worst, bmask.count_ones(), pieces, leftover_points, total, smask, bmask),
        leftover,
    })
}

/// Chooses the cover of the smooth locus with the least overall bound. Ties
/// go to fewer boundary pieces (those rest on the curve criteria), then fewer
/// pieces, fewer leftover points, and the smaller sum of bounds.
pub fn smooth_point_certificate(surface: &Surface) -> SmoothCertificate {
    let strategies: Vec<Option<SeparatingStrategy>> = (0..4).map(|v| best_strategy(surface, v)).collect();
    let curves: Vec<BoundaryBound> = (0..4).map(|v| boundary_bound(surface, v)).collect();
    let smax: u8 = (0..4).filter(|&v| strategies[v].is_some()).map(|v| 1 << v).sum();
    let bmax: u8 = (0..4).filter(|&v| curves[v].available).map(|v| 1 << v).sum();
    let mut best: Option<Cover> = None;
    for smask in 0u8..16 {
        if smask & !smax != 0 {
            continue;
        }
        for bmask in 0u8..16 {
            if bmask & !bmax != 0 || smask | bmask == 0 {
                continue;
            }
            if let Some(c) = evaluate_cover(surface, &strategies, &curves, smask, bmask) {
                if best.as_ref().is_none_or(|b| c.key < b.key) {
                    best = Some(c);
                }
            }
        }
    }
    match best {
        Some(cover) => {
            let (worst, _, _, _, _, smask, bmask) = cover.key;
            SmoothCertificate {
                strategies: (0..4)
                    .filter(|v| smask & (1 << v) != 0)
                    .filter_map(|v| strategies[v].clone())
                    .collect(),
                boundary: (0..4)
                    .filter(|v| bmask & (1 << v) != 0)
                    .map(|v| curves[v].clone())
                    .collect(),
                curves,
                leftover: cover.leftover,
                leftover_check: true,
                overall_bound: Some(Q(worst)),
            }
        }
        None => SmoothCertificate {
            strategies: Vec::new(),
            boundary: Vec::new(),
            curves,
            leftover: Vec::new(),
            leftover_check: false,
            overall_bound: None,
        },
    }
}
