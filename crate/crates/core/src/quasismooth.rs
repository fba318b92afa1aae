//! Quasi-smoothness of the general member and the boundary curves
//! `C_v = X ∩ (x_v = 0)`.

use num::integer::gcd;
use serde::{Deserialize, Serialize};

use crate::wps::{Monomial, Surface, WeightSystem};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PairWitness {
    /// A monomial in `x_i, x_j` alone.
    Binomial(Monomial),
    /// Monomials `x_i^a x_j^b x_k` and `x_i^c x_j^e x_l` with `k != l`.
    TwoMonomials(Monomial, Monomial),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCheck {
    pub pair: [usize; 2],
    pub witness: Option<PairWitness>,
}

/// Outcome of the three monomial conditions, each pass carrying witnesses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiSmoothReport {
    /// Per index `i`, a monomial `x_i^m x_j` of degree `d`.
    pub cond_i: Vec<Option<Monomial>>,
    pub cond_ii: Vec<PairCheck>,
    /// Only pairs with `gcd(q_i, q_j) > 1`.
    pub cond_iii: Vec<PairCheck>,
}

impl QuasiSmoothReport {
    pub fn passes_i(&self) -> bool {
        self.cond_i.iter().all(Option::is_some)
    }

    pub fn passes_ii(&self) -> bool {
        self.cond_ii.iter().all(|c| c.witness.is_some())
    }

    pub fn passes_iii(&self) -> bool {
        self.cond_iii.iter().all(|c| c.witness.is_some())
    }

    pub fn passes(&self) -> bool {
        self.passes_i() && self.passes_ii() && self.passes_iii()
    }

    /// `Y`/`N` for (I), (II), (III) in that order.
    pub fn flags(&self) -> String {
        [self.passes_i(), self.passes_ii(), self.passes_iii()]
            .iter()
            .map(|&b| if b { 'Y' } else { 'N' })
            .collect()
    }

    /// Human-readable list of the failing clauses.
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (i, w) in self.cond_i.iter().enumerate() {
            if w.is_none() {
                out.push(format!("(I) fails for i={i}: no monomial x{i}^m*x_j"));
            }
        }
        for c in &self.cond_ii {
            if c.witness.is_none() {
                let [i, j] = c.pair;
                out.push(format!("(II) fails for pair ({i},{j})"));
            }
        }
        for c in &self.cond_iii {
            if c.witness.is_none() {
                let [i, j] = c.pair;
                out.push(format!("(III) fails for pair ({i},{j}): singular line lies on X"));
            }
        }
        out
    }
}

fn is_linear_over(m: &Monomial, i: usize) -> bool {
    m.exp(i) >= 1 && (0..4).filter(|&k| k != i).map(|k| m.exp(k)).sum::<u32>() <= 1
}

/// Witness `x_i^m x_j` for clause (I) at index `i`; pure powers first.
fn linear_witness(support: &[Monomial], i: usize) -> Option<Monomial> {
    support
        .iter()
        .find(|m| m.as_pure_power() == Some(i))
        .or_else(|| support.iter().find(|m| is_linear_over(m, i)))
        .copied()
}

fn binomial_witness(support: &[Monomial], i: usize, j: usize) -> Option<Monomial> {
    support.iter().find(|m| m.only_in(&[i, j])).copied()
}

/// Decides the three quasi-smoothness conditions for the general member by
/// explicit search over the nonzero support.
pub fn check_quasismooth(surface: &Surface) -> QuasiSmoothReport {
    let ws = &surface.ws;
    let support = surface.support();
    let cond_i = (0..4).map(|i| linear_witness(&support, i)).collect();
    let mut cond_ii = Vec::new();
    let mut cond_iii = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            let rest: Vec<usize> = (0..4).filter(|&x| x != i && x != j).collect();
            let witness = binomial_witness(&support, i, j)
                .map(PairWitness::Binomial)
                .or_else(|| {
                    let with = |k: usize| {
                        support
                            .iter()
                            .find(|m| m.exp(k) == 1 && m.only_in(&[i, j, k]))
                            .copied()
                    };
                    Some(PairWitness::TwoMonomials(with(rest[0])?, with(rest[1])?))
                });
            cond_ii.push(PairCheck {
                pair: [i, j],
                witness,
            });
            if gcd(ws.weight(i), ws.weight(j)) > 1 {
                cond_iii.push(PairCheck {
                    pair: [i, j],
                    witness: binomial_witness(&support, i, j).map(PairWitness::Binomial),
                });
            }
        }
    }
    QuasiSmoothReport {
        cond_i,
        cond_ii,
        cond_iii,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Irreducibility {
    Yes,
    /// Reducible; the generic member has this many components.
    No(u64),
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Smoothness {
    Yes,
    Unknown,
}

/// `C_v = X ∩ (x_v = 0)`, a member of `|O_X(q_v)|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryCurve {
    pub v: usize,
    pub ws: WeightSystem,
    pub support: Vec<Monomial>,
    pub irreducible: Irreducibility,
    pub smooth_outside_sing: Smoothness,
    pub degree_class: u64,
}

impl BoundaryCurve {
    pub fn new(surface: &Surface, v: usize) -> Self {
        let vars: Vec<usize> = (0..4).filter(|&i| i != v).collect();
        let support = surface.support_in(Some(&vars));
        let mut curve = BoundaryCurve {
            v,
            ws: surface.ws,
            support,
            irreducible: Irreducibility::Unknown,
            smooth_outside_sing: Smoothness::Unknown,
            degree_class: surface.ws.weight(v),
        };
        curve.irreducible = curve_irreducible(&curve);
        curve.smooth_outside_sing = curve_smooth_outside_sing(&curve);
        curve
    }

    pub fn label(&self) -> String {
        format!("(x{}=0)", self.v)
    }
}

fn has_fixed_component(support: &[Monomial]) -> bool {
    (0..4).any(|i| support.iter().all(|m| m.exp(i) > 0))
}

fn vec_gcd(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| gcd(g, x.abs()))
}

/// If all exponent vectors lie on one lattice line, the spread of the support
/// along it measured in primitive steps.
pub fn pencil_spread(support: &[Monomial]) -> Option<u64> {
    let base = support.first()?;
    let diff = |m: &Monomial| -> [i64; 4] {
        let mut d = [0i64; 4];
        for (i, slot) in d.iter_mut().enumerate() {
            *slot = m.exp(i) as i64 - base.exp(i) as i64;
        }
        d
    };
    let dir = support.iter().map(diff).find(|d| d.iter().any(|&x| x != 0));
    let Some(dir) = dir else {
        return Some(0);
    };
    let g = vec_gcd(&dir);
    let prim: Vec<i64> = dir.iter().map(|x| x / g).collect();
    let pivot = prim.iter().position(|&x| x != 0).unwrap();
    let (mut lo, mut hi) = (0i64, 0i64);
    for m in support {
        let d = diff(m);
        let t = d[pivot] / prim[pivot];
        if d[pivot] % prim[pivot] != 0 || (0..4).any(|i| d[i] != t * prim[i]) {
            return None;
        }
        lo = lo.min(t);
        hi = hi.max(t);
    }
    Some((hi - lo) as u64)
}

/// Irreducibility of the generic member from its support.
///
/// * no variable divides the whole support and the support is a coprime
///   binomial with primitive difference, or spans a rank-2 lattice
///   (not composite with a pencil, so Bertini applies): `Yes`;
/// * the support lies on a lattice line with spread `k >= 2`: the member
///   factors through the pencil into `k` components, `No(k)`;
/// * anything else: `Unknown`.
pub fn curve_irreducible(curve: &BoundaryCurve) -> Irreducibility {
    if curve.support.is_empty() || has_fixed_component(&curve.support) {
        return Irreducibility::Unknown;
    }
    match pencil_spread(&curve.support) {
        None => Irreducibility::Yes,
        Some(0) => Irreducibility::Unknown,
        Some(1) => Irreducibility::Yes,
        Some(k) => Irreducibility::No(k),
    }
}

/// Smoothness of the generic member away from the singular points of X.
///
/// Away from base points the generic member is smooth. With no fixed
/// component the only base points are coordinate points `P_k` missing a pure
/// power; those with `q_k = 1` need a witness `x_k^m x_j`.
pub fn curve_smooth_outside_sing(curve: &BoundaryCurve) -> Smoothness {
    if curve.support.is_empty() || has_fixed_component(&curve.support) {
        return Smoothness::Unknown;
    }
    for k in (0..4).filter(|&k| k != curve.v) {
        let on_curve = !curve.support.iter().any(|m| m.as_pure_power() == Some(k));
        if on_curve && curve.ws.weight(k) == 1 && linear_witness(&curve.support, k).is_none() {
            return Smoothness::Unknown;
        }
    }
    Smoothness::Yes
}
