use std::fmt::Write as _;

use mvcheb::hypergeometric::{
    brackets_regular, choose_alpha, degeneracy_check, eigenvalue_lambda, krawtchouk_eigencheck, row_via_2h1,
    structure_matrices,
};
use mvcheb::recurrence::{monic_p_seq, monic_r_seq, recurrence_x, recurrence_y, squared_norm_h};
use mvcheb::verify::{self, VerifyParams};
use mvcheb::weight::{det_weight, lower_l, t_matpoly, weight_poly};
use mvcheb::{int, RatGrid, Rational};
use num_traits::Zero;
use serde_json::{json, Map, Value};

use crate::output::{num, Report, Style};
use crate::{Domain, UsageError};

fn params(pairs: &[(&str, Value)]) -> Map<String, Value> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

fn report(params: Map<String, Value>, data: Map<String, Value>, equation: &str) -> Report {
    Report { params, data, equation: equation.into(), pretty: None }
}

pub fn weight(two_l: usize, domain: Domain, float: bool) -> Report {
    let st = Style { float, var: domain.var() };
    let mut w = weight_poly(two_l);
    let mut l = lower_l(two_l);
    let mut t = t_matpoly(two_l);
    if domain == Domain::U {
        w = w.reparam_x_to_u();
        l = l.reparam_x_to_u();
        t = t.reparam_x_to_u();
    }
    let det = det_weight(two_l);
    let mut data = Map::new();
    data.insert("W".into(), st.poly_grid(&w));
    data.insert("L".into(), st.poly_grid(&l));
    data.insert("T".into(), st.poly_grid(&t));
    data.insert(
        "det".into(),
        json!({
            "constant": st.rat(&det.constant),
            "exponent": st.rat(&det.exponent),
            "confirmed": det.confirmed,
        }),
    );
    let equation = match domain {
        Domain::X => "W(x) = sqrt(1-x^2) L(x) T(x) L(x)^t; det W(x) = constant (1-x^2)^exponent",
        Domain::U => "W(u) = 2 sqrt(u(1-u)) L(u) T(u) L(u)^t with x = 1-2u; det W = constant (4u(1-u))^exponent",
    };
    report(
        params(&[("two_ell", json!(two_l)), ("domain", json!(domain.var())), ("float", json!(float))]),
        data,
        equation,
    )
}

pub fn polys(two_l: usize, degrees: &[usize], domain: Domain, float: bool) -> Result<Report, UsageError> {
    let st = Style { float, var: domain.var() };
    let top = degrees.iter().copied().max().unwrap_or(0);
    let seq = match domain {
        Domain::X => monic_p_seq(two_l, top),
        Domain::U => monic_r_seq(two_l, top),
    };
    let size = two_l + 1;
    let mut out = Vec::new();
    for &n in degrees {
        let x = recurrence_x(two_l, n);
        let y = recurrence_y(two_l, n);
        let mut entry = Map::new();
        entry.insert("n".into(), json!(n));
        match domain {
            Domain::X => {
                entry.insert("P".into(), st.poly_grid(&seq[n]));
                let a = &RatGrid::identity(size) - &x.scale(&int(2));
                entry.insert("A".into(), st.rat_grid(&a));
                entry.insert("B".into(), st.rat_grid(&y.scale(&int(4))));
            }
            Domain::U => {
                entry.insert("R".into(), st.poly_grid(&seq[n]));
                entry.insert("X".into(), st.rat_grid(&x));
                entry.insert("Y".into(), st.rat_grid(&y));
            }
        }
        entry.insert("H".into(), st.pi_grid(&squared_norm_h(two_l, n)));
        out.push(Value::Object(entry));
    }
    let mut data = Map::new();
    data.insert("polys".into(), Value::Array(out));
    let equation = match domain {
        Domain::X => "x P_n = P_{n+1} + A_n P_n + B_n P_{n-1}; H_n = int P_n W P_n^t dx",
        Domain::U => "u R_n = R_{n+1} + X_n R_n + Y_n R_{n-1}; H_n = 4 Y_n H_{n-1}",
    };
    Ok(report(
        params(&[
            ("two_ell", json!(two_l)),
            ("degrees", json!(degrees)),
            ("domain", json!(domain.var())),
            ("float", json!(float)),
        ]),
        data,
        equation,
    ))
}

pub fn hyp(two_l: usize, n: usize, alpha: Option<Rational>, float: bool) -> Result<Report, UsageError> {
    let st = Style { float, var: "u" };
    let alpha = match alpha {
        Some(a) => a,
        None => choose_alpha(two_l, n)?,
    };
    let t = structure_matrices(two_l, &alpha)?;
    let lambdas = (0..=two_l).map(|i| eigenvalue_lambda(two_l, &alpha, i, n)).collect::<Result<Vec<_>, _>>()?;
    let regular = brackets_regular(two_l, &alpha, n);
    let mut data = Map::new();
    data.insert("alpha".into(), Value::String(alpha.to_string()));
    data.insert("C".into(), st.rat_grid(&t.c));
    data.insert("U".into(), st.rat_grid(&t.u));
    data.insert("V".into(), st.rat_grid(&t.v));
    data.insert("lambda".into(), Value::Array(lambdas.iter().map(|l| st.rat(l)).collect()));
    data.insert("distinct".into(), json!(degeneracy_check(two_l, &alpha, n)));
    data.insert("brackets_regular".into(), json!(regular));
    if two_l > 0 {
        data.insert("krawtchouk_eigenvectors".into(), json!(krawtchouk_eigencheck(two_l, &alpha)?));
    }
    if !regular {
        return Err(UsageError(format!(
            "alpha = {alpha} makes a bracket singular up to degree {n}; pick another alpha"
        )));
    }
    let rows = (0..=two_l)
        .map(|i| row_via_2h1(two_l, &alpha, n, i).map(|r| Value::Array(r.iter().map(|p| st.poly(p)).collect())))
        .collect::<Result<Vec<_>, _>>()?;
    data.insert("R".into(), Value::Array(rows));
    Ok(report(
        params(&[
            ("two_ell", json!(two_l)),
            ("degree", json!(n)),
            ("alpha", json!(alpha.to_string())),
            ("float", json!(float)),
        ]),
        data,
        "u(1-u) p'' + p' (C - uU) - p (V + lambda_i) = 0 for row i of R_n, solved by the matrix 2H1 series",
    ))
}

/// Returns the report and whether every case passed. Timings go to stderr so
/// that stdout stays identical between runs.
pub fn verify(selector: &str, p: &VerifyParams) -> Result<(Report, bool), UsageError> {
    let reports = verify::run(selector, p)?;
    let ok = reports.iter().all(|r| r.passed());
    let mut suites = Vec::new();
    let mut pretty = String::new();
    for r in &reports {
        eprintln!("{}: {} cases in {} ms", r.suite, r.cases.len(), r.elapsed_ms);
        let cases: Vec<Value> = r
            .cases
            .iter()
            .map(|c| {
                let params: Map<String, Value> =
                    c.params.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
                let mut m = Map::new();
                m.insert("id".into(), json!(c.id));
                m.insert("params".into(), Value::Object(params));
                m.insert("pass".into(), json!(c.pass));
                if let Some(w) = &c.witness {
                    m.insert("witness".into(), json!(w));
                }
                Value::Object(m)
            })
            .collect();
        suites.push(json!({
            "suite": r.suite,
            "pass": r.passed(),
            "failures": r.failures(),
            "cases": cases,
        }));
        let status = if r.passed() { "PASS" } else { "FAIL" };
        let total = r.cases.len();
        writeln!(pretty, "{:<15} {status}  {}/{total}", r.suite, total - r.failures()).expect("write to string");
        for c in r.cases.iter().filter(|c| !c.pass) {
            writeln!(pretty, "    {}: {}", c.id, c.witness.as_deref().unwrap_or("")).expect("write to string");
        }
    }
    let mut data = Map::new();
    data.insert("pass".into(), json!(ok));
    data.insert("suites".into(), Value::Array(suites));
    let alpha = p.alpha.as_ref().map_or(Value::Null, |a| json!(a.to_string()));
    let mut rep = report(
        params(&[
            ("suite", json!(selector)),
            ("two_ell_max", json!(p.two_l_max)),
            ("degree_max", json!(p.degree_max)),
            ("alpha", alpha),
        ]),
        data,
        "exact equality of both sides of each identity",
    );
    rep.pretty = Some(pretty);
    Ok((rep, ok))
}

fn rounded(x: f64, precision: Option<usize>) -> Value {
    match precision {
        Some(d) => num(format!("{x:.d$}").parse().unwrap_or(x)),
        None => num(x),
    }
}

fn float_grid(g: &[Vec<f64>], precision: Option<usize>) -> Value {
    Value::Array(g.iter().map(|r| Value::Array(r.iter().map(|&x| rounded(x, precision)).collect())).collect())
}

/// Evaluates with the exact coefficients at the exact binary value of `x0`,
/// so the only rounding is the final conversion.
pub fn eval(two_l: usize, n: usize, x0: f64, precision: Option<usize>, domain: Domain) -> Result<Report, UsageError> {
    let (lo, hi) = match domain {
        Domain::X => (-1.0, 1.0),
        Domain::U => (0.0, 1.0),
    };
    if !(lo..=hi).contains(&x0) {
        return Err(UsageError(format!("{} = {x0} is outside [{lo}, {hi}]", domain.var())));
    }
    let point = Rational::from_float(x0).ok_or_else(|| UsageError(format!("cannot represent {x0}")))?;
    let (poly, x) = match domain {
        Domain::X => (monic_p_seq(two_l, n).pop().expect("non-empty"), point.clone()),
        Domain::U => (monic_r_seq(two_l, n).pop().expect("non-empty"), int(1) - &point * int(2)),
    };
    let p = poly.eval(&point).to_f64();
    let root = {
        let s = int(1) - &x * &x;
        if s.is_zero() {
            0.0
        } else {
            mvcheb::exact::to_f64(&s).sqrt()
        }
    };
    let w: Vec<Vec<f64>> =
        weight_poly(two_l).eval(&x).to_f64().into_iter().map(|r| r.into_iter().map(|v| v * root).collect()).collect();
    let key = match domain {
        Domain::X => "P",
        Domain::U => "R",
    };
    let mut data = Map::new();
    data.insert(key.into(), float_grid(&p, precision));
    data.insert("W".into(), float_grid(&w, precision));
    Ok(report(
        params(&[
            ("two_ell", json!(two_l)),
            ("degree", json!(n)),
            (domain.var(), num(x0)),
            ("precision", precision.map_or(Value::Null, |d| json!(d))),
        ]),
        data,
        "monic polynomial and weight W(x) = sqrt(1-x^2) L(x) T(x) L(x)^t at a point",
    ))
}
