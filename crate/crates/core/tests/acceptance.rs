//! End-to-end acceptance checks. One line per criterion; exits nonzero if
//! any criterion fails. Everything is exact except criterion 13.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use mvcheb::diffops::{apply_right, build_dtilde, lambda_d};
use mvcheb::recurrence::{monic_p, nevai_deviation, squared_norm_h};
use mvcheb::special::chebyshev_u;
use mvcheb::verify::{run_suite, VerifyParams};
use mvcheb::weight::{c_k, det_weight, generalized_moment, verify_ldu};
use mvcheb::{int, q, MatPoly, PiRational};

/// Relative slack on the Nevai envelope: deviations at `n = 200` must be
/// below `NEVAI_C / n`.
const NEVAI_C: f64 = 0.3;
const NEVAI_RANGE: (usize, usize) = (10, 200);
const NEVAI_TWO_L: usize = 4;

/// Wall-clock budgets (release-mode figures from the criteria, doubled to
/// absorb debug builds).
const BUDGET_LDU: Duration = Duration::from_secs(10);
const BUDGET_DET: Duration = Duration::from_secs(20);
const BUDGET_UDL_FOURIER: Duration = Duration::from_secs(60);

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn suite(name: &str, two_l_max: usize, degree_max: usize) -> Outcome {
    let r = run_suite(name, &VerifyParams { two_l_max, degree_max, alpha: None }).map_err(|e| e.to_string())?;
    match r.cases.iter().find(|c| !c.pass) {
        Some(c) => Err(format!("{name} [{}]: {}", c.id, c.witness.clone().unwrap_or_default())),
        None => Ok(format!("{name}: {} cases", r.cases.len())),
    }
}

fn within(start: Instant, budget: Duration, detail: String) -> Outcome {
    let t = start.elapsed();
    if t > budget {
        Err(format!("{detail}, took {:.1}s > {}s", t.as_secs_f64(), budget.as_secs()))
    } else {
        Ok(detail)
    }
}

fn c1() -> Outcome {
    let start = Instant::now();
    for tl in 0..=6 {
        if !verify_ldu(tl) {
            return Err(format!("LDU fails at 2l={tl}"));
        }
    }
    within(start, BUDGET_LDU, "2l <= 6".into())
}

fn c2() -> Outcome {
    let start = Instant::now();
    for tl in 0..=5 {
        let d = det_weight(tl);
        let prod = (0..=tl).fold(int(1), |acc, k| acc * c_k(tl, k));
        let l = q(tl as i64 + 1, 2);
        if !d.confirmed || d.constant != prod || d.exponent != int(2) * &l * &l {
            return Err(format!("determinant mismatch at 2l={tl}"));
        }
    }
    within(start, BUDGET_DET, "2l <= 5".into())
}

fn c3() -> Outcome {
    let start = Instant::now();
    let a = suite("udl", 4, 0)?;
    let b = suite("fourier", 4, 4)?;
    within(start, BUDGET_UDL_FOURIER, format!("{a}; {b}"))
}

fn c4() -> Outcome {
    suite("racah-integral", 0, 4)
}

fn c5() -> Outcome {
    let s = suite("orthogonality", 4, 4)?;
    let h1 = squared_norm_h(1, 1);
    if h1[(0, 0)] != PiRational(q(3, 16)) {
        return Err(format!("(H_1)_00 = {}", h1[(0, 0)]));
    }
    for tl in 0..=4usize {
        let h0 = squared_norm_h(tl, 0);
        for i in 0..=tl {
            let want = q(1, 2) * int((tl as i64 + 1).pow(2)) / int((i as i64 + 1) * (tl as i64 - i as i64 + 1));
            if h0[(i, i)] != PiRational(want) {
                return Err(format!("H_0 at 2l={tl}, i={i}"));
            }
        }
        if generalized_moment(tl, 0) != h0 {
            return Err(format!("zeroth moment differs from H_0 at 2l={tl}"));
        }
    }
    Ok(format!("{s}; (H_1)_00 = 3/16·pi; H_0 closed form"))
}

fn c6() -> Outcome {
    let a = suite("eigen", 4, 5)?;
    let b = suite("commute", 3, 0)?;
    let c = suite("symmetry", 4, 3)?;
    Ok(format!("{a}; {b}; {c}"))
}

fn c7() -> Outcome {
    let a = suite("2h1", 3, 4)?;
    Ok(format!("{a} over alpha in {{1/3, -1/3, 5/7}}"))
}

fn c8() -> Outcome {
    suite("decouple", 3, 4)
}

fn c9() -> Outcome {
    suite("c-closed", 4, 4)
}

fn c10() -> Outcome {
    suite("group", 4, 0)
}

fn c11() -> Outcome {
    let a = suite("appendix", 4, 4)?;
    let b = suite("moments", 3, 4)?;
    Ok(format!("{a}; {b}"))
}

fn c12() -> Outcome {
    let d = build_dtilde(0);
    for n in 0..=10usize {
        let p = monic_p(0, n);
        let u = chebyshev_u(n).scale(&q(1, 1 << n));
        if p[(0, 0)] != u {
            return Err(format!("P_{n} != 2^-n U_{n}"));
        }
        if squared_norm_h(0, n)[(0, 0)] != PiRational(q(1, 2) / int(4).pow(n as i32)) {
            return Err(format!("H_{n}"));
        }
        let eig = lambda_d(0, n)[(0, 0)].clone();
        if eig != int(-(n as i64) * (n as i64 + 2)) {
            return Err(format!("eigenvalue at n={n} is {eig}"));
        }
        let lhs = apply_right(&p, &d).map_err(|e| e.to_string())?;
        if lhs != MatPoly::from_fn(1, 1, |_, _| p[(0, 0)].scale(&eig)) {
            return Err(format!("D P_{n} != -n(n+2) P_{n}"));
        }
    }
    Ok("n <= 10".into())
}

fn c13() -> Outcome {
    let (lo, hi) = NEVAI_RANGE;
    let mut prev = (f64::INFINITY, f64::INFINITY);
    for n in lo..=hi {
        let cur = nevai_deviation(NEVAI_TWO_L, n);
        if !(cur.0 < prev.0 && cur.1 < prev.1) {
            return Err(format!("not decreasing at n={n}: {cur:?} after {prev:?}"));
        }
        prev = cur;
    }
    let bound = NEVAI_C / hi as f64;
    if prev.0 >= bound || prev.1 >= bound {
        return Err(format!("at n={hi}: {prev:?} vs bound {bound:e}"));
    }
    Ok(format!("n={hi}: |X-1/2| = {:.3e}, |Y-1/16| = {:.3e}, bound {bound:.3e}", prev.0, prev.1))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 13] = [
        ("LDU identity", c1),
        ("determinant", c2),
        ("UDL and Fourier expansion", c3),
        ("Racah integral", c4),
        ("orthogonality and norms", c5),
        ("eigen-equations and commutation", c6),
        ("2H1 construction", c7),
        ("decoupling", c8),
        ("Racah x Gegenbauer closed form", c9),
        ("group-side relations", c10),
        ("appendix identities and moments", c11),
        ("scalar reduction", c12),
        ("Nevai limits", c13),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = f();
        let secs = start.elapsed().as_secs_f64();
        match res {
            Ok(d) => println!("criterion {:>2} PASS {name} ({d}) [{secs:.2}s]", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({d}) [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
