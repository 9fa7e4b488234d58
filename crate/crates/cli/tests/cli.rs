use std::process::{Command, Output};

use mvcheb::exact::parse_rational;
use mvcheb::recurrence::squared_norm_h;
use mvcheb::weight::weight_poly;
use mvcheb::{q, Poly};
use serde_json::Value;

fn mvcheb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mvcheb")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = mvcheb(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn strings(grid: &Value) -> Vec<Vec<String>> {
    grid.as_array()
        .unwrap()
        .iter()
        .map(|r| r.as_array().unwrap().iter().map(|e| e.as_str().unwrap().to_string()).collect())
        .collect()
}

#[test]
fn weight_json_shape_and_round_trip() {
    for tl in 0..=3 {
        let t = tl.to_string();
        let v = json(&["weight", "--two-ell", &t, "--format", "json"]);
        assert!(v["provenance"]["equation"].is_string());
        assert_eq!(v["params"]["two_ell"], tl);
        let w = strings(&v["data"]["W"]);
        let exact = weight_poly(tl);
        for (i, row) in w.iter().enumerate() {
            for (j, s) in row.iter().enumerate() {
                assert_eq!(Poly::parse(s, "x").unwrap(), exact[(i, j)]);
            }
        }
        assert_eq!(v["data"]["det"]["confirmed"], true);
    }
    let v = json(&["weight", "--two-ell", "1", "--format", "json"]);
    assert_eq!(strings(&v["data"]["W"]), [["2", "2x"], ["2x", "2"]]);
}

#[test]
fn polys_examples() {
    let v = json(&["polys", "--two-ell", "1", "--degree", "1", "--domain", "u", "--format", "json"]);
    assert_eq!(strings(&v["data"]["polys"][0]["R"]), [["u - 1/2", "1/8"], ["1/8", "u - 1/2"]]);
    let v = json(&["polys", "--two-ell", "1", "--degree", "1", "--format", "json"]);
    assert_eq!(strings(&v["data"]["polys"][0]["P"]), [["x", "-1/4"], ["-1/4", "x"]]);
    let v = json(&["polys", "--two-ell", "2", "--degree", "0", "--format", "json"]);
    assert_eq!(strings(&v["data"]["polys"][0]["P"]), [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]]);
}

#[test]
fn norms_round_trip_as_pi_multiples() {
    let v = json(&["polys", "--two-ell", "2", "--degree-max", "3", "--format", "json"]);
    let list = v["data"]["polys"].as_array().unwrap();
    assert_eq!(list.len(), 4);
    for (n, entry) in list.iter().enumerate() {
        let h = strings(&entry["H"]);
        let exact = squared_norm_h(2, n);
        for i in 0..3 {
            let s = h[i][i].strip_suffix("·pi").unwrap();
            assert_eq!(&parse_rational(s).unwrap(), exact[(i, i)].coeff());
        }
    }
    assert_eq!(
        strings(&json(&["polys", "--two-ell", "1", "--degree", "1", "--format", "json"])["data"]["polys"][0]["H"])[0]
            [0],
        "3/16·pi"
    );
}

#[test]
fn csv_one_entry_per_row() {
    let out = mvcheb(&["weight", "--two-ell", "1", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("key,row,col,value"));
    assert_eq!(lines.next(), Some("W,0,0,2"));
    assert_eq!(lines.next(), Some("W,0,1,2x"));
    assert!(text.contains("det.exponent,,,2\n"));
}

#[test]
fn eval_examples() {
    let v = json(&["eval", "--two-ell", "0", "--degree", "2", "--x0", "1", "--format", "json"]);
    assert_eq!(v["data"]["P"][0][0].as_f64(), Some(0.75));
    let v = json(&["eval", "--two-ell", "1", "--degree", "1", "--x0", "0", "--format", "json"]);
    assert_eq!(v["data"]["P"], serde_json::json!([[0.0, -0.25], [-0.25, 0.0]]));
    let out = mvcheb(&["eval", "--x0", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("outside"));
}

/// Independent float three-term recurrence in x.
fn float_recurrence(two_l: usize, n: usize, x: f64) -> Vec<Vec<f64>> {
    use mvcheb::recurrence::{recurrence_x, recurrence_y};
    let size = two_l + 1;
    let eye: Vec<Vec<f64>> = (0..size).map(|i| (0..size).map(|j| f64::from(u8::from(i == j))).collect()).collect();
    let mul = |a: &Vec<Vec<f64>>, b: &Vec<Vec<f64>>| -> Vec<Vec<f64>> {
        (0..size).map(|i| (0..size).map(|j| (0..size).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
    };
    let (mut prev, mut cur) = (vec![vec![0.0; size]; size], eye);
    for k in 0..n {
        let a = recurrence_x(two_l, k).to_f64();
        let b = recurrence_y(two_l, k).to_f64();
        let (ac, bp) = (mul(&a, &cur), mul(&b, &prev));
        let next = (0..size)
            .map(|i| (0..size).map(|j| x * cur[i][j] - (cur[i][j] - 2.0 * ac[i][j]) - 4.0 * bp[i][j]).collect())
            .collect();
        prev = std::mem::replace(&mut cur, next);
    }
    cur
}

#[test]
fn eval_relative_error() {
    for x0 in ["-0.9", "0.3", "1"] {
        let v = json(&["eval", "--two-ell", "2", "--degree", "20", "--x0", x0, "--format", "json"]);
        let want = float_recurrence(2, 20, x0.parse().unwrap());
        let scale = want.iter().flatten().fold(0.0f64, |m, w| m.max(w.abs()));
        for i in 0..3 {
            for j in 0..3 {
                let got = v["data"]["P"][i][j].as_f64().unwrap();
                assert!((got - want[i][j]).abs() <= 1e-12 * scale, "x0={x0}: {got} vs {}", want[i][j]);
            }
        }
    }
}

#[test]
fn exit_codes() {
    assert_eq!(mvcheb(&["weight", "--two-ell", "-1"]).status.code(), Some(2));
    assert_eq!(mvcheb(&["verify", "--suite", "nosuch"]).status.code(), Some(2));
    assert_eq!(mvcheb(&["polys", "--alpha", "1/3"]).status.code(), Some(2));
    assert_eq!(mvcheb(&["verify", "--suite", "ldu", "--two-ell-max", "4"]).status.code(), Some(0));
    // λ_1(0) = λ_0(2) at this alpha, so the 2h1 case must fail.
    let a = mvcheb::hypergeometric::collision_alpha(1, 1, 0, 0, 2).unwrap().to_string();
    let out = mvcheb(&["verify", "--suite", "2h1", "--two-ell-max", "1", "--degree-max", "3", "--alpha", &a]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
    assert_eq!(mvcheb(&["hyp", "--two-ell", "1", "--degree", "3", "--alpha", &a]).status.code(), Some(2));
}

#[test]
fn verify_all_small_and_deterministic() {
    let args = ["verify", "--suite", "all", "--two-ell-max", "2", "--degree-max", "3", "--format", "json"];
    let a = mvcheb(&args);
    assert_eq!(a.status.code(), Some(0));
    let b = mvcheb(&args);
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["data"]["suites"].as_array().unwrap().len(), 15);
    assert_eq!(v["data"]["pass"], true);
}

#[test]
fn thread_cap() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_mvcheb"))
            .args(["verify", "--suite", "fourier", "--two-ell-max", "2", "--format", "json"])
            .env("MVCHEB_THREADS", threads)
            .output()
            .unwrap()
    };
    let one = run("1");
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, run("4").stdout);
    assert_eq!(run("zero").status.code(), Some(2));
}

#[test]
fn hyp_rows_and_float() {
    let v = json(&["hyp", "--two-ell", "1", "--degree", "1", "--alpha", "1/3", "--format", "json"]);
    assert_eq!(strings(&v["data"]["R"]), [["u - 1/2", "1/8"], ["1/8", "u - 1/2"]]);
    let v = json(&["hyp", "--two-ell", "1", "--degree", "1", "--alpha", "-1/3", "--float", "--format", "json"]);
    assert!(v["data"]["lambda"][0].is_number());
    assert_eq!(parse_rational(v["data"]["alpha"].as_str().unwrap()).unwrap(), q(-1, 3));
}
