//! Weighted projective 3-space: weights, graded monomial bases, singular
//! loci, intersection numbers and orbifold-chart localization.
//!
//! Coordinates are indexed `0..=3` in ascending weight order. A point written
//! `P_i` is the coordinate point where every `x_j` with `j != i` vanishes.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num::integer::gcd;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{Rat, Q};

/// Weights `q0 <= q1 <= q2 <= q3`, a degree `d`, and `pi = q0*q1*q2*q3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightSystem {
    q: [u64; 4],
    d: u64,
    pi: u64,
}

impl WeightSystem {
    /// Anticanonical weight system for `raw` (any order).
    pub fn new(raw: [u64; 4]) -> Result<Self> {
        normalize_weights(raw, None)
    }

    pub fn q(&self) -> [u64; 4] {
        self.q
    }

    pub fn weight(&self, i: usize) -> u64 {
        self.q[i]
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn pi(&self) -> u64 {
        self.pi
    }

    pub fn anticanonical_degree(&self) -> u64 {
        self.q.iter().sum::<u64>() - 1
    }

    pub fn is_anticanonical(&self) -> bool {
        self.d == self.anticanonical_degree()
    }

    /// Product of the three weights other than `q_v`.
    pub fn product_without(&self, v: usize) -> u64 {
        (0..4).filter(|&i| i != v).map(|i| self.q[i]).product()
    }
}

impl fmt::Display for WeightSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, e] = self.q;
        write!(f, "X_{} in P({},{},{},{})", self.d, a, b, c, e)
    }
}

/// Sorts and validates raw weights. `degree` defaults to the anticanonical
/// degree `q0+q1+q2+q3-1`.
pub fn normalize_weights(raw: [u64; 4], degree: Option<u64>) -> Result<WeightSystem> {
    if raw.contains(&0) {
        return Err(Error::NonPositiveWeight(raw));
    }
    let mut q = raw;
    q.sort_unstable();
    for (i, j, k) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
        let g = gcd(gcd(q[i], q[j]), q[k]);
        if g > 1 {
            return Err(Error::TripleGcd {
                weights: q,
                a: q[i],
                b: q[j],
                c: q[k],
                gcd: g,
            });
        }
    }
    let d = match degree {
        Some(0) => return Err(Error::ZeroDegree),
        Some(d) => d,
        None => q.iter().sum::<u64>() - 1,
    };
    Ok(WeightSystem {
        q,
        d,
        pi: q.iter().product(),
    })
}

/// Exponent vector `(a0,a1,a2,a3)` of `x0^a0 x1^a1 x2^a2 x3^a3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Monomial(pub [u32; 4]);

impl Monomial {
    pub fn pure_power(i: usize, m: u32) -> Self {
        let mut e = [0; 4];
        e[i] = m;
        Monomial(e)
    }

    pub fn exp(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn degree(&self, ws: &WeightSystem) -> u64 {
        (0..4).map(|i| self.0[i] as u64 * ws.q[i]).sum()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// True if only the variables in `vars` occur.
    pub fn only_in(&self, vars: &[usize]) -> bool {
        (0..4).all(|i| self.0[i] == 0 || vars.contains(&i))
    }

    /// True if none of the variables in `vars` occur.
    pub fn avoids(&self, vars: &[usize]) -> bool {
        vars.iter().all(|&i| self.0[i] == 0)
    }

    /// The variable `i` if this is `x_i^m` with `m >= 1`.
    pub fn as_pure_power(&self) -> Option<usize> {
        let nz: Vec<usize> = (0..4).filter(|&i| self.0[i] > 0).collect();
        (nz.len() == 1).then(|| nz[0])
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("x{i}")),
                _ => parts.push(format!("x{i}^{e}")),
            }
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

impl FromStr for Monomial {
    type Err = String;

    /// Exponent-vector syntax `a0,a1,a2,a3`.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(format!("expected four comma-separated exponents, got {s:?}"));
        }
        let mut e = [0u32; 4];
        for (slot, p) in e.iter_mut().zip(parts) {
            *slot = p
                .parse()
                .map_err(|_| format!("bad exponent {p:?} in {s:?}"))?;
        }
        Ok(Monomial(e))
    }
}

/// All monomials of weighted degree `degree` in the allowed variables
/// (`None` = all four), in descending lexicographic order of exponents.
pub fn enumerate_monomials(
    ws: &WeightSystem,
    degree: u64,
    support: Option<&[usize]>,
) -> Vec<Monomial> {
    let allowed: [bool; 4] = match support {
        None => [true; 4],
        Some(s) => {
            let mut a = [false; 4];
            for &i in s {
                if i < 4 {
                    a[i] = true;
                }
            }
            a
        }
    };
    let mut out = Vec::new();
    let mut exps = [0u32; 4];
    fill(ws, &allowed, 0, degree, &mut exps, &mut out);
    out
}

fn fill(
    ws: &WeightSystem,
    allowed: &[bool; 4],
    i: usize,
    left: u64,
    exps: &mut [u32; 4],
    out: &mut Vec<Monomial>,
) {
    if i == 4 {
        if left == 0 {
            out.push(Monomial(*exps));
        }
        return;
    }
    let max = if allowed[i] { left / ws.q[i] } else { 0 };
    for e in (0..=max).rev() {
        exps[i] = e as u32;
        fill(ws, allowed, i + 1, left - e * ws.q[i], exps, out);
    }
    exps[i] = 0;
}

/// `O_X(a) . O_X(b) = a*b*d/pi`.
pub fn intersection_number(ws: &WeightSystem, a: u64, b: u64) -> Rat {
    Rat::new((a * b * ws.d) as i64, ws.pi as i64)
}

/// Coefficient degeneration at a coordinate point: the quadratic tangent
/// cone of the boundary curve `(x_curve = 0)` at `P_point` is a double line.
/// All other coefficients stay generic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CoincidentTangents {
    pub point: usize,
    pub curve: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Coefficients {
    Generic,
    GenericWithZeros(BTreeSet<Monomial>),
}

/// A member of `|O(d)|` described by which coefficients vanish.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Surface {
    pub ws: WeightSystem,
    pub coefficients: Coefficients,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tangents: Vec<CoincidentTangents>,
}

impl Surface {
    pub fn generic(ws: WeightSystem) -> Self {
        Surface {
            ws,
            coefficients: Coefficients::Generic,
            tangents: Vec::new(),
        }
    }

    /// Generic member with the listed coefficients set to zero.
    pub fn with_zeros(ws: WeightSystem, zeros: impl IntoIterator<Item = Monomial>) -> Result<Self> {
        let zeros: BTreeSet<Monomial> = zeros.into_iter().collect();
        for m in &zeros {
            let deg = m.degree(&ws);
            if deg != ws.d {
                return Err(Error::WrongDegree {
                    monomial: m.to_string(),
                    actual: deg,
                    expected: ws.d,
                });
            }
        }
        let coefficients = if zeros.is_empty() {
            Coefficients::Generic
        } else {
            Coefficients::GenericWithZeros(zeros)
        };
        Ok(Surface {
            ws,
            coefficients,
            tangents: Vec::new(),
        })
    }

    pub fn with_coincident_tangents(mut self, point: usize, curve: usize) -> Result<Self> {
        if point > 3 {
            return Err(Error::BadIndex(point));
        }
        if curve > 3 {
            return Err(Error::BadIndex(curve));
        }
        let t = CoincidentTangents { point, curve };
        if !self.tangents.contains(&t) {
            self.tangents.push(t);
            self.tangents.sort();
        }
        Ok(self)
    }

    pub fn zeroed(&self) -> impl Iterator<Item = &Monomial> {
        let set = match &self.coefficients {
            Coefficients::Generic => None,
            Coefficients::GenericWithZeros(z) => Some(z),
        };
        set.into_iter().flatten()
    }

    pub fn is_zeroed(&self, m: &Monomial) -> bool {
        match &self.coefficients {
            Coefficients::Generic => false,
            Coefficients::GenericWithZeros(z) => z.contains(m),
        }
    }

    /// Monomials of degree `d` with nonzero coefficient.
    pub fn support(&self) -> Vec<Monomial> {
        self.support_in(None)
    }

    pub fn support_in(&self, vars: Option<&[usize]>) -> Vec<Monomial> {
        enumerate_monomials(&self.ws, self.ws.d, vars)
            .into_iter()
            .filter(|m| !self.is_zeroed(m))
            .collect()
    }

    /// The pure power `x_i^m` of degree `d`, if present with nonzero coefficient.
    pub fn pure_power(&self, i: usize) -> Option<Monomial> {
        let q = self.ws.q[i];
        if !self.ws.d.is_multiple_of(q) {
            return None;
        }
        let m = Monomial::pure_power(i, (self.ws.d / q) as u32);
        (!self.is_zeroed(&m)).then_some(m)
    }

    pub fn coincident_tangents(&self, point: usize, curve: usize) -> bool {
        self.tangents.contains(&CoincidentTangents { point, curve })
    }
}

/// Whether `P_i` lies on the surface: no pure power `x_i^m` of degree `d`.
pub fn coordinate_point_on_surface(surface: &Surface, i: usize) -> Result<bool> {
    if i > 3 {
        return Err(Error::BadIndex(i));
    }
    Ok(surface.pure_power(i).is_none())
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Location {
    /// The coordinate point `P_i`.
    Coordinate(usize),
    /// The `count` points of X in the open part of the line
    /// `(x_a = x_b = 0)`; `count` is the generic value.
    Line { vanishing: [usize; 2], count: u64 },
}

/// A chart `x_chart = 1` together with the pair `(j,k)` of coordinates cut
/// by the pencil `|x_j^{q_k}, x_k^{q_j}|` and the remaining index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ChartPair {
    pub chart: usize,
    pub pair: [usize; 2],
    pub rest: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SingularPoint {
    pub location: Location,
    /// Order of the local quotient group.
    pub index: u64,
    /// Admissible chart pairs: `(x_j = x_k = 0)` is not contained in X.
    pub charts: Vec<ChartPair>,
}

impl SingularPoint {
    pub fn coordinate(&self) -> Option<usize> {
        match self.location {
            Location::Coordinate(i) => Some(i),
            Location::Line { .. } => None,
        }
    }

    /// Whether `x_v` vanishes at this point.
    pub fn vanishes(&self, v: usize) -> bool {
        match self.location {
            Location::Coordinate(i) => i != v,
            Location::Line { vanishing, .. } => vanishing.contains(&v),
        }
    }

    pub fn label(&self) -> String {
        match self.location {
            Location::Coordinate(i) => format!("P{i}"),
            Location::Line { vanishing: [a, b], count } => {
                format!("{count} point(s) on (x{a}=x{b}=0)")
            }
        }
    }
}

impl fmt::Display for SingularPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} index {}", self.label(), self.index)
    }
}

fn others(exclude: &[usize]) -> Vec<usize> {
    (0..4).filter(|i| !exclude.contains(i)).collect()
}

/// The singular points of X: coordinate points of index `q_i > 1` on X and
/// the points of X on singular lines of the ambient space.
///
/// Fails with [`Error::NonIsolated`] when a singular line lies on X.
pub fn singular_points(surface: &Surface) -> Result<Vec<SingularPoint>> {
    let ws = &surface.ws;
    let support = surface.support();
    let mut out = Vec::new();
    for i in 0..4 {
        if ws.q[i] == 1 || !coordinate_point_on_surface(surface, i)? {
            continue;
        }
        let rest = others(&[i]);
        let mut charts = Vec::new();
        for (a, b) in [(0, 1), (0, 2), (1, 2)] {
            let (j, k) = (rest[a], rest[b]);
            let l = rest[3 - a - b];
            if support.iter().any(|m| m.avoids(&[j, k])) {
                charts.push(ChartPair {
                    chart: i,
                    pair: [j, k],
                    rest: l,
                });
            }
        }
        out.push(SingularPoint {
            location: Location::Coordinate(i),
            index: ws.q[i],
            charts,
        });
    }
    for c in 0..4 {
        for d in c + 1..4 {
            let g = gcd(ws.q[c], ws.q[d]);
            if g == 1 {
                continue;
            }
            let line = others(&[c, d]);
            let (a, b) = (line[0], line[1]);
            let restricted: Vec<&Monomial> = support.iter().filter(|m| m.only_in(&[c, d])).collect();
            if restricted.is_empty() {
                return Err(Error::NonIsolated { a, b });
            }
            let count = line_point_count(ws, c, d, restricted.iter().map(|m| m.exp(c)));
            if count == 0 {
                continue;
            }
            out.push(SingularPoint {
                location: Location::Line {
                    vanishing: [a, b],
                    count,
                },
                index: g,
                charts: vec![
                    ChartPair {
                        chart: c,
                        pair: [a, b],
                        rest: d,
                    },
                    ChartPair {
                        chart: d,
                        pair: [a, b],
                        rest: c,
                    },
                ],
            });
        }
    }
    Ok(out)
}

/// Generic number of points of `{f = 0}` in the open part of the line with
/// coordinates `x_c, x_d`, given the `x_c`-exponents of the restricted
/// support. The invariant coordinate of the line is `x_c^{q_d/g} / x_d^{q_c/g}`,
/// so consecutive admissible exponents differ by `q_d/g`.
pub fn line_point_count(
    ws: &WeightSystem,
    c: usize,
    d: usize,
    c_exponents: impl Iterator<Item = u32>,
) -> u64 {
    let g = gcd(ws.q[c], ws.q[d]);
    let step = ws.q[d] / g;
    let (mut lo, mut hi) = (u32::MAX, 0);
    for e in c_exponents {
        lo = lo.min(e);
        hi = hi.max(e);
    }
    if lo > hi {
        return 0;
    }
    (hi - lo) as u64 / step
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Coeff {
    Generic,
    Exact(Q),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartTerm {
    pub exps: Vec<u32>,
    pub coeff: Coeff,
}

/// A polynomial localized to an orbifold chart, translated so the base point
/// is the origin.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChartSupport {
    pub chart: usize,
    /// Global indices of the local coordinates, in order.
    pub coords: Vec<usize>,
    /// Order of the stabilizer of the base point.
    pub stabilizer: u64,
    pub terms: Vec<ChartTerm>,
}

impl ChartSupport {
    pub fn points(&self) -> Vec<Vec<u32>> {
        self.terms.iter().map(|t| t.exps.clone()).collect()
    }

    /// Exponent pairs of a two-coordinate chart.
    pub fn pairs(&self) -> Vec<(u32, u32)> {
        self.terms
            .iter()
            .filter(|t| t.exps.len() == 2)
            .map(|t| (t.exps[0], t.exps[1]))
            .collect()
    }
}

/// Localizes `support` to the chart `x_chart = 1` at `point`, restricting to
/// `x_v = 0` for every `v` in `drop`.
///
/// At a coordinate point the coordinates are the other three variables minus
/// `drop`. At a line point only the two transverse coordinates are kept; the
/// terms free of them carry the simple root along the line and become the
/// along-line coordinate, so they are omitted.
pub fn chart_localize(
    support: &[Monomial],
    chart: usize,
    point: &SingularPoint,
    drop: &[usize],
) -> Result<ChartSupport> {
    if chart > 3 {
        return Err(Error::BadIndex(chart));
    }
    if point.vanishes(chart) {
        return Err(Error::ChartMissesPoint {
            chart,
            point: point.label(),
        });
    }
    let (coords, line) = match point.location {
        Location::Coordinate(i) => (others(&[i]), false),
        Location::Line { vanishing, .. } => (vanishing.to_vec(), true),
    };
    let coords: Vec<usize> = coords.into_iter().filter(|c| !drop.contains(c)).collect();
    let mut seen = BTreeSet::new();
    for m in support {
        if !m.avoids(drop) {
            continue;
        }
        let exps: Vec<u32> = coords.iter().map(|&c| m.exp(c)).collect();
        if line && exps.iter().all(|&e| e == 0) {
            continue;
        }
        seen.insert(exps);
    }
    let terms = seen
        .into_iter()
        .map(|exps| ChartTerm {
            exps,
            coeff: Coeff::Generic,
        })
        .collect();
    Ok(ChartSupport {
        chart,
        coords,
        stabilizer: point.index,
        terms,
    })
}

/// Multiplicity at the origin for generic coefficients: the minimum total
/// degree over the support. Zero when the support contains a unit.
pub fn chart_multiplicity(chart: &ChartSupport) -> u32 {
    chart
        .terms
        .iter()
        .map(|t| t.exps.iter().sum::<u32>())
        .min()
        .unwrap_or(0)
}
