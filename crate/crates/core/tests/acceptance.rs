//! One PASS/FAIL line per acceptance criterion. All numeric checks are exact
//! rational equalities. Run with `--nocapture` to see the lines.

mod common;

use std::time::{Duration, Instant};

use common::*;
use delpezzo_cert::certify::{
    certify, lct_path, newton_lct_points, refined_split_bound, CertReport, KeVerdict, LctMethod,
    LctMode, SingularBound, TigerVerdict,
};
use delpezzo_cert::quasismooth::Irreducibility;
use delpezzo_cert::search::{render, run_batch, Format};
use delpezzo_cert::wps::{
    enumerate_monomials, normalize_weights, singular_points, Monomial, Surface,
};
use delpezzo_cert::{Rat, Q};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Check = Result<(), String>;

macro_rules! expect_eq {
    ($what:expr, $got:expr, $want:expr) => {{
        let (g, w) = (&$got, &$want);
        if g != w {
            return Err(format!("{}: got {:?}, want {:?}", $what, g, w));
        }
    }};
}

macro_rules! expect {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

struct Suite {
    failed: Vec<String>,
}

impl Suite {
    fn run(&mut self, id: &str, what: &str, check: impl FnOnce() -> Check) {
        match check() {
            Ok(()) => println!("PASS {id}: {what}"),
            Err(e) => {
                println!("FAIL {id}: {what} ({e})");
                self.failed.push(id.to_string());
            }
        }
    }
}

fn report(q: [u64; 4]) -> Result<CertReport, String> {
    certify(&Surface::generic(ws(q))).map_err(|e| e.to_string())
}

fn at(r: &CertReport, i: usize) -> Result<&SingularBound, String> {
    r.singular
        .iter()
        .find(|s| s.point.coordinate() == Some(i))
        .ok_or_else(|| format!("no singular bound at P{i}"))
}

fn labels(r: &CertReport) -> Vec<String> {
    r.singular_points.iter().map(|p| p.label()).collect()
}

fn no_tiger_and_ke(r: &CertReport) -> Check {
    expect_eq!("tiger verdict", r.verdict.tiger_free, TigerVerdict::Certified);
    expect_eq!("KE verdict", r.verdict.ke, KeVerdict::Certified);
    Ok(())
}

fn criterion_1() -> Check {
    let r = report([3, 5, 7, 11])?;
    let p3 = at(&r, 3)?;
    expect_eq!("pencil estimate at P3", p3.basic, Some(Q::new(25, 21)));
    let split = p3.refined.as_ref().ok_or("no split bound at P3")?;
    expect_eq!("m", split.m, 2);
    expect_eq!("B'", split.bprime, Q::new(5, 14));
    expect_eq!("split bound", split.value, Q::new(2, 3));
    expect_eq!("singular set", labels(&r), vec!["P0", "P2", "P3"]);
    no_tiger_and_ke(&r)
}

fn criterion_2() -> Check {
    let r = report([3, 5, 7, 14])?;
    let got: Vec<(u64, Q)> = r.smooth.strategies.iter().map(|s| (s.l, s.bound)).collect();
    expect_eq!("separating degrees", got, vec![(21, Q::new(2, 5)), (35, Q::new(2, 3))]);
    let c0 = r.smooth.curves.iter().find(|c| c.v == 0).ok_or("no C_0")?;
    expect_eq!("C_0 irreducibility", c0.irreducible, Irreducibility::No(2));
    expect_eq!("C_0 components", c0.components, Some(2));
    expect!(!c0.available, "C_0 must not be usable");
    let left: Vec<(String, bool)> = r.smooth.leftover.iter().map(|l| (l.label.clone(), l.singular)).collect();
    expect_eq!("leftover", left, vec![("P1".to_string(), true)]);
    expect!(r.smooth.leftover_check, "leftover check failed");
    no_tiger_and_ke(&r)
}

fn criterion_3() -> Check {
    for q in [[3, 5, 11, 18], [2, 3, 5, 9]] {
        let r = report(q)?;
        for s in &r.singular {
            let best = s.best().ok_or(format!("{q:?}: no bound at {}", s.point.label()))?;
            expect!(best <= Q::one(), "{q:?}: bound {best} at {}", s.point.label());
        }
        let smooth = r.smooth.overall_bound.ok_or(format!("{q:?}: no smooth cover"))?;
        expect!(smooth < Q::one(), "{q:?}: smooth bound {smooth}");
        no_tiger_and_ke(&r)?;
    }
    let r = report([2, 3, 5, 9])?;
    let exact_one = r.singular.iter().any(|s| s.best() == Some(Q::one()));
    expect!(exact_one, "X18 has no singular bound equal to 1");
    expect!(
        r.verdict.borderline.iter().any(|b| b.ends_with("= 1/1")),
        "X18 borderline list {:?}",
        r.verdict.borderline
    );
    Ok(())
}

fn criterion_4() -> Check {
    let w = ws([1, 3, 5, 7]);
    let r = report([1, 3, 5, 7])?;
    let p3 = at(&r, 3)?;
    let path = p3.lct_path.as_ref().ok_or("no lct path at P3")?;
    expect_eq!("curve", path.v, 0);
    expect_eq!("method", path.method, LctMethod::Node);
    expect_eq!("lct", path.lct, Q::one());
    expect_eq!("B'", path.bprime, Q::new(1, 2));
    expect!(path.passed, "lct path did not pass");
    expect_eq!("KE", r.verdict.ke, KeVerdict::Certified);
    expect_eq!("tiger", r.verdict.tiger_free, TigerVerdict::TigerWitness("(x0=0)".into()));

    let degenerate = Surface::with_zeros(w, [Monomial([0, 1, 1, 1])]).map_err(|e| e.to_string())?;
    let rd = certify(&degenerate).map_err(|e| e.to_string())?;
    let pt = rd.singular_points.iter().find(|p| p.coordinate() == Some(3)).ok_or("P3 missing")?;
    let lct = lct_path(&degenerate, pt, 0, LctMode::Ke).map_err(|e| e.to_string())?;
    expect_eq!("degenerate lct", lct.lct, Q::new(8, 15));
    expect!(!lct.passed, "8/15 must not pass 2/3");
    expect_eq!("degenerate KE", rd.verdict.ke, KeVerdict::Inconclusive);
    Ok(())
}

fn criterion_5() -> Check {
    let w = ws([1, 2, 3, 5]);
    let generic = Surface::generic(w);
    let r = certify(&generic).map_err(|e| e.to_string())?;
    expect_eq!("singular set", labels(&r), vec!["P2"]);
    let pt = &r.singular_points[0];
    let split = refined_split_bound(&generic, pt, 0).map_err(|e| e.to_string())?;
    expect_eq!("m", split.m, 2);
    expect_eq!("B'", split.bprime, Q::new(1, 2));
    let lct = lct_path(&generic, pt, 0, LctMode::Ke).map_err(|e| e.to_string())?;
    expect_eq!("generic lct", (lct.lct, lct.method), (Q::one(), LctMethod::Node));
    expect_eq!("generic KE", r.verdict.ke, KeVerdict::Certified);
    expect_eq!("generic tiger", r.verdict.tiger_free, TigerVerdict::TigerWitness("(x0=0)".into()));

    let tangent = Surface::generic(w).with_coincident_tangents(2, 0).map_err(|e| e.to_string())?;
    let rt = certify(&tangent).map_err(|e| e.to_string())?;
    let lct = lct_path(&tangent, pt, 0, LctMode::Ke).map_err(|e| e.to_string())?;
    expect_eq!("sheared lct", (lct.lct, lct.method), (Q::new(7, 10), LctMethod::ShearThenNewton));
    expect!(lct.lct > Q::new(2, 3), "7/10 must exceed 2/3");
    expect!(lct.passed, "sheared lct path did not pass");
    expect_eq!("sheared KE", rt.verdict.ke, KeVerdict::Certified);
    expect_eq!("sheared tiger", rt.verdict.tiger_free, TigerVerdict::TigerWitness("(x0=0)".into()));
    Ok(())
}

fn criterion_6() -> Check {
    let rows = run_batch(18, true, Some(4));
    let want = [
        ([3, 5, 11, 18], 36, "no-tiger", "ke-certified"),
        ([3, 5, 7, 14], 28, "no-tiger", "ke-certified"),
        ([3, 5, 7, 11], 25, "no-tiger", "ke-certified"),
        ([2, 3, 5, 9], 18, "no-tiger", "ke-certified"),
        ([1, 3, 5, 7], 15, "tiger", "ke-certified"),
        ([1, 2, 3, 5], 10, "tiger", "ke-certified"),
    ];
    for (q, d, tiger, ke) in want {
        let row = rows.iter().find(|r| r.weights == q).ok_or(format!("{q:?} missing"))?;
        expect_eq!(format!("{q:?} row"), (row.d, row.verdict_tiger.as_str(), row.verdict_ke.as_str()), (d, tiger, ke));
    }
    let z16 = rows.iter().find(|r| r.weights == [1, 3, 5, 8]).ok_or("(1,3,5,8) missing")?;
    expect_eq!("(1,3,5,8) degree", z16.d, 16);
    expect_eq!("(1,3,5,8) conditions", z16.quasismooth.as_str(), "YYY");
    for format in [Format::Csv, Format::Json] {
        let a = render(&rows, format);
        let b = render(&run_batch(18, true, Some(4)), format);
        let serial = render(&run_batch(18, true, Some(1)), format);
        expect!(a == b, "{format:?}: two runs differ");
        expect!(a == serial, "{format:?}: jobs=1 and jobs=4 differ");
    }
    Ok(())
}

fn criterion_7(rng: &mut StdRng) -> Vec<(&'static str, Check)> {
    let mut out = Vec::new();

    out.push(("monomial enumeration matches nested-loop oracle (q3<=20, degree<=60)", (|| {
        for _ in 0..400 {
            let raw = [0; 4].map(|_| rng.gen_range(1..=20u64));
            let Ok(w) = normalize_weights(raw, None) else { continue };
            let degree = rng.gen_range(0..=60u64);
            let got: Vec<[u32; 4]> = enumerate_monomials(&w, degree, None).iter().map(|m| m.0).collect();
            expect_eq!(format!("{w} degree {degree}"), got, brute_monomials(w.q(), degree, None));
        }
        Ok(())
    })()));

    out.push(("Newton lct closed forms and dual oracle", (|| {
        for m in 1..=30u32 {
            for n in 1..=30u32 {
                let want = (Rat::new(1, m as i64) + Rat::new(1, n as i64)).min(Rat::from(1));
                expect_eq!(format!("({m},0),(0,{n})"), newton_lct_points(&[(m, 0), (0, n)]), want);
                let want = Rat::new(1, m.max(n) as i64).min(Rat::from(1));
                expect_eq!(format!("({m},{n})"), newton_lct_points(&[(m, n)]), want);
            }
        }
        for _ in 0..500 {
            let k = rng.gen_range(1..6);
            let pts: Vec<(u32, u32)> = (0..k).map(|_| (rng.gen_range(0..10), rng.gen_range(1..10))).collect();
            expect_eq!(format!("{pts:?}"), newton_lct_points(&pts), lct_from_depth(newton_depth_dual(&pts)));
        }
        Ok(())
    })()));

    out.push(("refined bound is the max of its affine segment", (|| {
        for row in run_batch(18, true, Some(1)) {
            let s = Surface::generic(ws(row.weights));
            for p in singular_points(&s).map_err(|e| e.to_string())? {
                for v in 0..4 {
                    let Ok(r) = refined_split_bound(&s, &p, v) else { continue };
                    let qv = s.ws.weight(v) as i64;
                    let f = |a: Rat| a * Rat::from(r.m as i64) + (Rat::from(1) - Rat::from(qv) * a) * r.bprime.0;
                    for k in 0..=10 {
                        expect!(f(Rat::new(k, 10 * qv)) <= r.value.0, "{:?} {p} v={v}", row.weights);
                    }
                    expect_eq!("endpoint max", r.value.0, f(Rat::from(0)).max(f(Rat::new(1, qv))));
                }
            }
        }
        Ok(())
    })()));

    out.push(("no-tiger implies KE on every analyzed surface", (|| {
        for row in run_batch(18, false, Some(1)) {
            if row.verdict_tiger == "no-tiger" {
                expect_eq!(format!("{:?}", row.weights), row.verdict_ke.as_str(), "ke-certified");
            }
        }
        for q in [[1, 3, 5, 7], [1, 2, 3, 5]] {
            for zeros in subsets(&boundary_support(ws(q), 0)) {
                let s = Surface::with_zeros(ws(q), zeros).unwrap();
                expect!(tiger_rank(&s) < 2 || ke_rank(&s) == 2, "{q:?}");
            }
        }
        Ok(())
    })()));

    out.push(("weight permutations give identical reports", (|| {
        for q in GOLDEN {
            let base = report(q)?;
            let mut idx = [0, 1, 2, 3];
            for _ in 0..24 {
                let p = idx.map(|i| q[i]);
                let r = certify(&Surface::generic(normalize_weights(p, None).unwrap())).unwrap();
                expect!(r == base, "{q:?} permuted to {p:?}");
                next_permutation(&mut idx);
            }
        }
        Ok(())
    })()));

    out.push(("zeroing never improves verdicts on the X15/X10 boundary lattices", (|| {
        for (q, tangent) in [([1, 3, 5, 7], false), ([1, 2, 3, 5], false), ([1, 2, 3, 5], true)] {
            let lattice: Vec<(Vec<Monomial>, (u8, u8))> = subsets(&boundary_support(ws(q), 0))
                .into_iter()
                .map(|zeros| {
                    let mut s = Surface::with_zeros(ws(q), zeros.clone()).unwrap();
                    if tangent {
                        s = s.with_coincident_tangents(2, 0).unwrap();
                    }
                    let rank = (ke_rank(&s), tiger_rank(&s));
                    (zeros, rank)
                })
                .collect();
            for (zi, ri) in &lattice {
                for (zj, rj) in &lattice {
                    if zi.iter().all(|m| zj.contains(m)) {
                        expect!(rj.0 <= ri.0 && rj.1 <= ri.1, "{q:?}: {zi:?} -> {zj:?}");
                    }
                }
            }
        }
        Ok(())
    })()));

    out
}

fn next_permutation(a: &mut [usize; 4]) {
    let Some(i) = (0..3).rev().find(|&i| a[i] < a[i + 1]) else {
        a.reverse();
        return;
    };
    let j = (i + 1..4).rev().find(|&j| a[j] > a[i]).unwrap();
    a.swap(i, j);
    a[i + 1..].reverse();
}

#[test]
fn acceptance() {
    let start = Instant::now();
    let mut suite = Suite { failed: Vec::new() };
    suite.run("1", "X25 in P(3,5,7,11): 25/21, m=2, B'=5/14, 2/3, Sing={P0,P2,P3}, no-tiger + KE", criterion_1);
    suite.run("2", "X28 in P(3,5,7,14): l=21 -> 2/5, l=35 -> 2/3, C_0 has 2 components, leftover {P1}", criterion_2);
    suite.run("3", "X36 and X18: singular bounds <= 1 with an exact-1 entry, smooth < 1, no-tiger + KE", criterion_3);
    suite.run("4", "X15 in P(1,3,5,7): node lct 1 with B'=1/2; x1x2x3 zeroed gives lct 8/15 and inconclusive", criterion_4);
    suite.run("5", "X10 in P(1,2,3,5): Sing={P2}, m=2, B'=1/2, lct 1 generic, 7/10 after shear, KE both ways", criterion_5);
    suite.run("6", "search to 18: six rows with verdicts, (1,3,5,8)/16 quasi-smooth, deterministic, jobs-invariant", criterion_6);
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for (n, (what, result)) in criterion_7(&mut rng).into_iter().enumerate() {
        suite.run(&format!("7.{}", n + 1), what, || result);
    }
    suite.run("timing", "certify under 1s per golden surface", || {
        for q in GOLDEN {
            let t = Instant::now();
            report(q)?;
            let dt = t.elapsed();
            expect!(dt < Duration::from_secs(1), "{q:?} took {dt:?}");
        }
        Ok(())
    });
    println!("acceptance suite finished in {:.2?}", start.elapsed());
    assert!(suite.failed.is_empty(), "failed criteria: {:?}", suite.failed);
}
