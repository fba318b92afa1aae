//! Independent oracles shared by the property and acceptance suites.
#![allow(dead_code)]

use delpezzo_cert::certify::{certify, KeVerdict, TigerVerdict};
use delpezzo_cert::wps::{Monomial, Surface, WeightSystem};
use delpezzo_cert::Rat;
use num::{BigInt, BigRational, One, Signed, Zero};

pub const GOLDEN: [[u64; 4]; 6] = [
    [3, 5, 11, 18],
    [3, 5, 7, 14],
    [3, 5, 7, 11],
    [2, 3, 5, 9],
    [1, 3, 5, 7],
    [1, 2, 3, 5],
];

pub fn ws(q: [u64; 4]) -> WeightSystem {
    WeightSystem::new(q).expect("valid weights")
}

/// Nested loops over every exponent vector with `a_i q_i <= degree`.
pub fn brute_monomials(q: [u64; 4], degree: u64, support: Option<&[usize]>) -> Vec<[u32; 4]> {
    let allowed = |i: usize| support.is_none_or(|s| s.contains(&i));
    let cap = |i: usize| if allowed(i) { degree / q[i] } else { 0 };
    let mut out = Vec::new();
    for a in 0..=cap(0) {
        for b in 0..=cap(1) {
            for c in 0..=cap(2) {
                for e in 0..=cap(3) {
                    if a * q[0] + b * q[1] + c * q[2] + e * q[3] == degree {
                        out.push([a as u32, b as u32, c as u32, e as u32]);
                    }
                }
            }
        }
    }
    out.sort_unstable_by(|x, y| y.cmp(x));
    out
}

/// Newton distance by LP duality: the largest `t` with
/// `w.(t,t) <= min_s w.s` for some `w = (w, 1-w)`, `0 <= w <= 1`. The
/// objective is concave piecewise linear, so it peaks at an endpoint or where
/// two support functionals cross.
pub fn newton_depth_dual(points: &[(u32, u32)]) -> Option<Rat> {
    if points.is_empty() {
        return None;
    }
    let eval = |w: Rat| {
        points
            .iter()
            .map(|&(a, b)| w * Rat::from(a as i64) + (Rat::one() - w) * Rat::from(b as i64))
            .min()
            .unwrap()
    };
    let mut cands = vec![Rat::zero(), Rat::one()];
    for &(a1, b1) in points {
        for &(a2, b2) in points {
            // w a1 + (1-w) b1 = w a2 + (1-w) b2
            let den = (a1 as i64 - b1 as i64) - (a2 as i64 - b2 as i64);
            if den != 0 {
                let w = Rat::new(b2 as i64 - b1 as i64, den);
                if w >= Rat::zero() && w <= Rat::one() {
                    cands.push(w);
                }
            }
        }
    }
    cands.into_iter().map(eval).max()
}

pub fn lct_from_depth(t: Option<Rat>) -> Rat {
    match t {
        Some(t) if t > Rat::one() => t.recip(),
        _ => Rat::one(),
    }
}

fn trim(p: &mut Vec<BigRational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    trim(&mut r);
    let lead = b.last().expect("nonzero divisor").clone();
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let f = r.last().unwrap().clone() / lead.clone();
        for (i, c) in b.iter().enumerate() {
            r[shift + i] = r[shift + i].clone() - f.clone() * c.clone();
        }
        trim(&mut r);
    }
    r
}

/// Number of distinct roots of `sum c_k u^k` over the algebraic closure:
/// `deg P - deg gcd(P, P')`.
pub fn distinct_roots(coeffs: &[BigRational]) -> usize {
    let mut p = coeffs.to_vec();
    trim(&mut p);
    if p.len() <= 1 {
        return 0;
    }
    let deriv: Vec<BigRational> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.clone() * BigRational::from(BigInt::from(k)))
        .collect();
    let (mut a, mut b) = (p.clone(), deriv);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    (p.len() - 1) - (a.len() - 1)
}

pub fn big(n: i64, d: i64) -> BigRational {
    let r = BigRational::new(BigInt::from(n), BigInt::from(d));
    if r.is_zero() {
        BigRational::one()
    } else {
        r.abs()
    }
}

/// 2 = certified, 1 = inconclusive, 0 = not applicable.
pub fn ke_rank(surface: &Surface) -> u8 {
    match certify(surface) {
        Ok(r) => match r.verdict.ke {
            KeVerdict::Certified => 2,
            KeVerdict::Inconclusive => 1,
        },
        Err(_) => 0,
    }
}

/// 2 = tiger-free certified, 1 = undecided or witness, 0 = not applicable.
pub fn tiger_rank(surface: &Surface) -> u8 {
    match certify(surface) {
        Ok(r) => match r.verdict.tiger_free {
            TigerVerdict::Certified => 2,
            _ => 1,
        },
        Err(_) => 0,
    }
}

/// Monomials of `C_v`'s support for the generic member.
pub fn boundary_support(w: WeightSystem, v: usize) -> Vec<Monomial> {
    let vars: Vec<usize> = (0..4).filter(|&i| i != v).collect();
    Surface::generic(w).support_in(Some(&vars))
}

/// Every subset of `items`, as bitmasks.
pub fn subsets<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    (0u32..1 << items.len())
        .map(|mask| {
            items
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, m)| m.clone())
                .collect()
        })
        .collect()
}
