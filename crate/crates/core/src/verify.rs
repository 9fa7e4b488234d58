//! Named verification suites. Each suite is a list of independent exact
//! checks ("cases"); cases run in parallel and are reported in generation
//! order.

use std::fmt::Display;
use std::time::Instant;

use num_traits::Zero;
use rayon::prelude::*;

use crate::diffops::{self, group};
use crate::exact::{int, q, Grid, MatPoly, PiGrid, RatGrid, Rational};
use crate::hypergeometric::{brackets_regular, row_via_2h1};
use crate::recurrence::{inner_product_w, monic_p_seq, monic_r_seq, nevai_check, recurrence_y, squared_norm_h};
use crate::special::{beta_via_racah, hahn_fourier_check, racah_sum_check};
use crate::weight::{
    beta_closed, cg_fourier_check, det_weight, generalized_moment, generalized_moment_closed, lower_l,
    racah_integral_check, t_matpoly, udl_check, weight_poly,
};
use crate::{Error, Result};

/// All suite names, in the order `all` runs them.
pub const SUITES: [&str; 15] = [
    "ldu",
    "det",
    "udl",
    "fourier",
    "racah-integral",
    "moments",
    "orthogonality",
    "eigen",
    "commute",
    "symmetry",
    "2h1",
    "decouple",
    "c-closed",
    "group",
    "appendix",
];

/// Ranges shared by all suites.
#[derive(Clone, Debug)]
pub struct VerifyParams {
    pub two_l_max: usize,
    pub degree_max: usize,
    /// Fixed `α` for the `2h1` suite; by default `1/3`, `-1/3` and `5/7`.
    pub alpha: Option<Rational>,
}

impl Default for VerifyParams {
    fn default() -> Self {
        VerifyParams { two_l_max: 3, degree_max: 4, alpha: None }
    }
}

/// Outcome of one case.
#[derive(Clone, Debug)]
pub struct CaseResult {
    pub id: String,
    pub params: Vec<(String, String)>,
    pub pass: bool,
    /// For failures: the first differing exact entry, or the error.
    pub witness: Option<String>,
}

#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub suite: String,
    pub cases: Vec<CaseResult>,
    pub elapsed_ms: u128,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> usize {
        self.cases.iter().filter(|c| !c.pass).count()
    }
}

type Witness = Result<Option<String>>;
type Check = Box<dyn Fn() -> Witness + Send + Sync>;

struct Case {
    params: Vec<(String, String)>,
    check: Check,
}

fn case(params: &[(&str, usize)], check: impl Fn() -> Witness + Send + Sync + 'static) -> Case {
    Case { params: params.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(), check: Box::new(check) }
}

fn flag(ok: bool, what: &str) -> Option<String> {
    (!ok).then(|| what.to_string())
}

/// First entry where two grids differ, as `(i,j): got …, expected …`.
pub fn grid_diff<T: PartialEq + Display>(got: &Grid<T>, want: &Grid<T>) -> Option<String> {
    if (got.rows(), got.cols()) != (want.rows(), want.cols()) {
        return Some(format!("shape {}x{} vs {}x{}", got.rows(), got.cols(), want.rows(), want.cols()));
    }
    for i in 0..got.rows() {
        for j in 0..got.cols() {
            if got[(i, j)] != want[(i, j)] {
                return Some(format!("({i},{j}): got {}, expected {}", got[(i, j)], want[(i, j)]));
            }
        }
    }
    None
}

fn op_diff(got: &diffops::MatDiffOp, want: &diffops::MatDiffOp) -> Option<String> {
    let len = got.order().max(want.order()) + 1;
    (0..len).find_map(|d| grid_diff(&got.coeff(d), &want.coeff(d)).map(|w| format!("d^{d} {w}")))
}

pub fn is_suite(name: &str) -> bool {
    SUITES.contains(&name)
}

/// Run one suite by name.
pub fn run_suite(name: &str, p: &VerifyParams) -> Result<VerifyReport> {
    let start = Instant::now();
    let cases = build_cases(name, p)?;
    let results: Vec<CaseResult> = cases
        .into_par_iter()
        .map(|c| {
            let (pass, witness) = match (c.check)() {
                Ok(None) => (true, None),
                Ok(Some(w)) => (false, Some(w)),
                Err(e) => (false, Some(e.to_string())),
            };
            let id = c.params.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(",");
            CaseResult { id, params: c.params, pass, witness }
        })
        .collect();
    Ok(VerifyReport { suite: name.to_string(), cases: results, elapsed_ms: start.elapsed().as_millis() })
}

/// Run `all` or a single suite.
pub fn run(selector: &str, p: &VerifyParams) -> Result<Vec<VerifyReport>> {
    if selector == "all" {
        SUITES.iter().map(|s| run_suite(s, p)).collect()
    } else {
        Ok(vec![run_suite(selector, p)?])
    }
}

fn alphas(p: &VerifyParams, two_l: usize) -> Vec<Rational> {
    if two_l == 0 {
        return vec![Rational::zero()];
    }
    match &p.alpha {
        Some(a) => vec![a.clone()],
        None => vec![q(1, 3), q(-1, 3), q(5, 7)],
    }
}

fn build_cases(name: &str, p: &VerifyParams) -> Result<Vec<Case>> {
    let tmax = p.two_l_max;
    let dmax = p.degree_max;
    let mut out = Vec::new();
    match name {
        "ldu" => {
            for tl in 0..=tmax {
                out.push(case(&[("2l", tl)], move || {
                    let l = lower_l(tl);
                    let prod = &(&l * &t_matpoly(tl)) * &l.transpose();
                    Ok(grid_diff(&prod, &weight_poly(tl)))
                }));
            }
        }
        "det" => {
            for tl in 0..=tmax {
                out.push(case(&[("2l", tl)], move || {
                    let d = det_weight(tl);
                    let l = q(tl as i64, 2) + q(1, 2);
                    Ok(flag(d.confirmed && d.exponent == int(2) * &l * &l, "determinant does not factor"))
                }));
            }
        }
        "udl" => {
            for tl in 0..=tmax {
                out.push(case(&[("2l", tl)], move || Ok(flag(udl_check(tl), "UDL product differs from W"))));
            }
        }
        "fourier" => {
            for tl in 0..=tmax {
                for n in 0..=tl {
                    for m in 0..=tl {
                        out.push(case(&[("2l", tl), ("n", n), ("m", m)], move || {
                            Ok(flag(cg_fourier_check(tl, n, m)?, "Fourier expansions disagree"))
                        }));
                    }
                }
            }
            for n in 0..=dmax {
                for k in 0..=n {
                    out.push(case(&[("k", k), ("n", n)], move || {
                        Ok(flag(hahn_fourier_check(k, n)?, "Hahn expansion disagrees"))
                    }));
                }
            }
        }
        "racah-integral" => {
            for n in 0..=dmax {
                for m in 0..=n {
                    for k in 0..=m {
                        for t in 0..=(n + m) / 2 {
                            out.push(case(&[("n", n), ("m", m), ("k", k), ("t", t)], move || {
                                Ok(flag(racah_integral_check(k, t, m, n)?, "integral differs from closed form"))
                            }));
                        }
                    }
                }
            }
        }
        "moments" => {
            for tl in 0..=tmax {
                for pp in 0..=dmax {
                    out.push(case(&[("2l", tl), ("p", pp)], move || {
                        Ok(grid_diff(&generalized_moment(tl, pp), &generalized_moment_closed(tl, pp)))
                    }));
                }
            }
        }
        "orthogonality" => {
            for tl in 0..=tmax {
                out.push(case(&[("2l", tl)], move || {
                    let ps = monic_p_seq(tl, dmax);
                    for n in 0..=dmax {
                        for m in 0..=dmax {
                            let ip = inner_product_w(tl, &ps[n], &ps[m])?;
                            let want: PiGrid = if n == m {
                                squared_norm_h(tl, n)
                            } else {
                                Grid::from_fn(tl + 1, tl + 1, |_, _| crate::PiRational::zero())
                            };
                            if let Some(w) = grid_diff(&ip, &want) {
                                return Ok(Some(format!("<P_{n}, P_{m}> {w}")));
                            }
                        }
                    }
                    for n in 1..=dmax {
                        let y4 = recurrence_y(tl, n).scale(&int(4));
                        let prev = squared_norm_h(tl, n - 1);
                        let rec = Grid::from_fn(tl + 1, tl + 1, |i, j| prev[(i, j)].scale(&y4[(i, i)]));
                        if let Some(w) = grid_diff(&squared_norm_h(tl, n), &rec) {
                            return Ok(Some(format!("H_{n} = 4 Y_{n} H_{} {w}", n - 1)));
                        }
                    }
                    Ok(None)
                }));
            }
            for tl in 1..=tmax {
                out.push(case(&[("2l", tl), ("nevai", 200)], move || {
                    Ok(flag(nevai_check(tl, 10, 200, 0.3), "recurrence coefficients not within 0.3/n"))
                }));
            }
        }
        "eigen" => {
            for tl in 0..=tmax {
                for n in 0..=dmax {
                    out.push(case(&[("2l", tl), ("n", n)], move || {
                        let pn = monic_p_seq(tl, n).pop().expect("non-empty");
                        let lhs = diffops::apply_right(&pn, &diffops::build_dtilde(tl))?;
                        let rhs = diffops::lambda_d(tl, n).to_matpoly().try_mul(&pn)?;
                        if let Some(w) = grid_diff(&lhs, &rhs) {
                            return Ok(Some(format!("D: {w}")));
                        }
                        if tl > 0 {
                            let lhs = diffops::apply_right(&pn, &diffops::build_etilde(tl)?)?;
                            let rhs = diffops::lambda_etilde(tl, n)?.to_matpoly().try_mul(&pn)?;
                            if let Some(w) = grid_diff(&lhs, &rhs) {
                                return Ok(Some(format!("E: {w}")));
                            }
                        }
                        Ok(None)
                    }));
                }
            }
        }
        "commute" => {
            for tl in 1..=tmax {
                out.push(case(&[("2l", tl)], move || {
                    let d = diffops::build_dtilde(tl);
                    let c = diffops::commutator(&d, &diffops::build_etilde(tl)?)?;
                    let zero = diffops::MatDiffOp::multiplication(MatPoly::zeros(tl + 1, tl + 1));
                    if let Some(w) = op_diff(&c, &zero) {
                        return Ok(Some(format!("commutator {w}")));
                    }
                    Ok(op_diff(&d.flip(), &d).map(|w| format!("JDJ {w}")))
                }));
            }
        }
        "symmetry" => {
            let deg = dmax.min(3);
            for tl in 0..=tmax {
                out.push(case(&[("2l", tl), ("deg", deg)], move || {
                    if !diffops::symmetry_check(tl, &diffops::build_dtilde(tl), deg)? {
                        return Ok(Some("D not symmetric".into()));
                    }
                    if tl > 0 && !diffops::symmetry_check(tl, &diffops::build_etilde(tl)?, deg)? {
                        return Ok(Some("E not symmetric".into()));
                    }
                    Ok(None)
                }));
            }
        }
        "2h1" => {
            for tl in 0..=tmax {
                for a in alphas(p, tl) {
                    let mut params = vec![("2l".to_string(), tl.to_string())];
                    params.push(("alpha".to_string(), a.to_string()));
                    out.push(Case {
                        params,
                        check: Box::new(move || {
                            if !brackets_regular(tl, &a, dmax) {
                                return Err(Error::Degenerate {
                                    alpha: a.to_string(),
                                    reason: "eigenvalues of different degrees collide".into(),
                                });
                            }
                            let rs = monic_r_seq(tl, dmax);
                            for (n, r) in rs.iter().enumerate() {
                                for i in 0..=tl {
                                    let row = row_via_2h1(tl, &a, n, i)?;
                                    for (j, e) in row.iter().enumerate() {
                                        if e != &r[(i, j)] {
                                            return Ok(Some(format!(
                                                "n={n} ({i},{j}): got {}, expected {}",
                                                e.render("u"),
                                                r[(i, j)].render("u")
                                            )));
                                        }
                                    }
                                }
                            }
                            Ok(None)
                        }),
                    });
                }
            }
        }
        "decouple" => {
            for tl in 1..=tmax {
                out.push(case(&[("2l", tl)], move || {
                    let d = diffops::build_d(tl);
                    let e = diffops::build_e(tl)?;
                    let dm = d.minus(&e.scale(&int(tl as i64)));
                    let got = diffops::conjugate_by_m(tl, &dm)?;
                    if let Some(w) = op_diff(&got, &diffops::script_d_expected(tl)) {
                        return Ok(Some(format!("M^-1 (D - 2l E) M {w}")));
                    }
                    let got = diffops::conjugate_by_m(tl, &e)?;
                    if let Some(w) = op_diff(&got, &diffops::script_e_expected(tl)?) {
                        return Ok(Some(format!("M^-1 E M {w}")));
                    }
                    let plain = diffops::conjugate_by_m(tl, &d)?;
                    if plain.coeffs().iter().all(|c| c.is_diagonal()) {
                        return Ok(Some("conjugate of D is diagonal".into()));
                    }
                    for n in 0..=dmax {
                        if !diffops::script_r_eigen_check(tl, n)? {
                            return Ok(Some(format!("R_{n} M is not an eigenfunction")));
                        }
                    }
                    Ok(None)
                }));
            }
        }
        "c-closed" => {
            for tl in 0..=tmax {
                for n in 0..=dmax {
                    out.push(case(&[("2l", tl), ("n", n)], move || {
                        for k in 0..=tl {
                            let rec = diffops::c_recurrence(tl, k, n)?;
                            for (j, c) in rec.iter().enumerate() {
                                let closed = diffops::c_closed(tl, k, j, n)?;
                                if c != &closed {
                                    return Ok(Some(format!("c_{k}{j}: recurrence {c}, closed {closed}")));
                                }
                            }
                            for m in 0..=dmax {
                                if !diffops::c_orthogonality_check(tl, n, m, k)? {
                                    return Ok(Some(format!("orthogonality n={n} m={m} k={k}")));
                                }
                            }
                        }
                        if !diffops::script_r_factorization_check(tl, n)? {
                            return Ok(Some("R_n M factorization".into()));
                        }
                        Ok(flag(diffops::script_p_gegenbauer_check(tl, n)?, "P_n L Gegenbauer form"))
                    }));
                }
            }
        }
        "group" => {
            for tl in 0..=tmax {
                out.push(case(&[("2l", tl)], move || {
                    if !group::group_operator_relation_check(tl)? {
                        return Ok(Some("group operators do not map to D, E".into()));
                    }
                    Ok(flag(group::phi0_identity_checks(tl), "Phi_0 identities fail"))
                }));
            }
        }
        "appendix" => {
            for tl in 0..=tmax {
                for n in 0..=tl.min(dmax) {
                    for m in 0..=n {
                        for k in 0..=m {
                            out.push(case(&[("2l", tl), ("n", n), ("m", m), ("k", k)], move || {
                                if !racah_sum_check(tl, n, m, k)? {
                                    return Ok(Some("Racah sum".into()));
                                }
                                let got = beta_via_racah(tl, m, n, k)?;
                                let want = beta_closed(tl, m, n, k);
                                Ok((got != want).then(|| format!("beta: got {got}, expected {want}")))
                            }));
                        }
                    }
                }
            }
        }
        other => return Err(Error::Precondition(format!("unknown suite '{other}'"))),
    }
    Ok(out)
}

/// `J W J = W`, exposed for the `weight` table.
pub fn weight_flip_symmetric(two_l: usize) -> bool {
    let j: RatGrid = RatGrid::flip(two_l + 1);
    let jm = j.to_matpoly();
    let w = weight_poly(two_l);
    &(&jm * &w) * &jm == w
}
