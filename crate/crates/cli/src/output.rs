//! Rendering of command results. Every command builds a JSON tree; the csv
//! and pretty formats are derived from it so all three carry the same data.

use std::fmt::Write as _;

use mvcheb::exact::to_f64;
use mvcheb::{Grid, PiRational, Poly, Rational};
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

/// How numbers are written: exact strings, or binary floats.
#[derive(Clone, Copy, Debug)]
pub struct Style {
    pub float: bool,
    pub var: &'static str,
}

impl Style {
    pub fn rat(&self, r: &Rational) -> Value {
        if self.float {
            num(to_f64(r))
        } else {
            Value::String(r.to_string())
        }
    }

    pub fn pi(&self, r: &PiRational) -> Value {
        if self.float {
            num(r.to_f64())
        } else {
            Value::String(r.to_string())
        }
    }

    pub fn poly(&self, p: &Poly) -> Value {
        if self.float {
            Value::String(float_poly(p, self.var))
        } else {
            Value::String(p.render(self.var))
        }
    }

    pub fn grid<T>(&self, g: &Grid<T>, f: impl Fn(&Self, &T) -> Value) -> Value {
        Value::Array((0..g.rows()).map(|i| Value::Array(g.row(i).iter().map(|e| f(self, e)).collect())).collect())
    }

    pub fn rat_grid(&self, g: &Grid<Rational>) -> Value {
        self.grid(g, Self::rat)
    }

    pub fn poly_grid(&self, g: &Grid<Poly>) -> Value {
        self.grid(g, Self::poly)
    }

    pub fn pi_grid(&self, g: &Grid<PiRational>) -> Value {
        self.grid(g, Self::pi)
    }
}

pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn float_poly(p: &Poly, var: &str) -> String {
    let mut out = String::new();
    for (d, c) in p.coeffs().iter().enumerate().rev() {
        let c = to_f64(c);
        if c == 0.0 {
            continue;
        }
        if out.is_empty() {
            if c < 0.0 {
                out.push('-');
            }
        } else {
            out.push_str(if c < 0.0 { " - " } else { " + " });
        }
        let a = c.abs();
        let coef = if a == 1.0 && d > 0 { String::new() } else { a.to_string() };
        match d {
            0 => write!(out, "{a}"),
            1 => write!(out, "{coef}{var}"),
            _ => write!(out, "{coef}{var}^{d}"),
        }
        .expect("write to string");
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// A finished command result.
pub struct Report {
    pub params: Map<String, Value>,
    pub data: Map<String, Value>,
    pub equation: String,
    /// Replaces the generic pretty layout when set.
    pub pretty: Option<String>,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "params": self.params,
            "data": self.data,
            "provenance": { "equation": self.equation },
        })
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
                s.push('\n');
                s
            }
            Format::Csv => self.csv(),
            Format::Pretty => self.pretty.clone().unwrap_or_else(|| self.pretty()),
        }
    }

    /// One exact entry per record: `key,row,col,value`.
    fn csv(&self) -> String {
        let mut rows = Vec::new();
        for (k, v) in &self.data {
            flatten(k, v, &mut rows);
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["key", "row", "col", "value"]).expect("in-memory write");
        for r in rows {
            w.write_record(&r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    fn pretty(&self) -> String {
        let mut out = String::new();
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={}", scalar(v))).collect();
        writeln!(out, "# {}", params.join(" ")).expect("write to string");
        writeln!(out, "# {}", self.equation).expect("write to string");
        for (k, v) in &self.data {
            pretty_value(&mut out, k, v, 0);
        }
        out
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "null".into(),
        other => other.to_string(),
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Array(_) | Value::Object(_))
}

fn as_grid(v: &Value) -> Option<Vec<&Vec<Value>>> {
    let rows = v.as_array()?;
    if rows.is_empty() {
        return None;
    }
    rows.iter().map(|r| r.as_array().filter(|r| r.iter().all(is_scalar))).collect::<Option<Vec<_>>>()
}

fn flatten(key: &str, v: &Value, out: &mut Vec<[String; 4]>) {
    if let Some(grid) = as_grid(v) {
        for (i, r) in grid.iter().enumerate() {
            for (j, e) in r.iter().enumerate() {
                out.push([key.into(), i.to_string(), j.to_string(), scalar(e)]);
            }
        }
        return;
    }
    match v {
        Value::Array(items) if items.iter().all(is_scalar) => {
            for (i, e) in items.iter().enumerate() {
                out.push([key.into(), i.to_string(), String::new(), scalar(e)]);
            }
        }
        Value::Array(items) => {
            for (i, e) in items.iter().enumerate() {
                flatten(&format!("{key}[{i}]"), e, out);
            }
        }
        Value::Object(m) => {
            for (k, e) in m {
                flatten(&format!("{key}.{k}"), e, out);
            }
        }
        _ => out.push([key.into(), String::new(), String::new(), scalar(v)]),
    }
}

fn pretty_value(out: &mut String, key: &str, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    if let Some(grid) = as_grid(v) {
        writeln!(out, "{pad}{key} =").expect("write to string");
        let cells: Vec<Vec<String>> = grid.iter().map(|r| r.iter().map(scalar).collect()).collect();
        let ncols = cells.iter().map(Vec::len).max().unwrap_or(0);
        let widths: Vec<usize> = (0..ncols)
            .map(|j| cells.iter().filter_map(|r| r.get(j)).map(|s| s.chars().count()).max().unwrap_or(0))
            .collect();
        for r in &cells {
            let line: Vec<String> = r.iter().enumerate().map(|(j, s)| format!("{s:>w$}", w = widths[j])).collect();
            writeln!(out, "{pad}  [ {} ]", line.join("  ")).expect("write to string");
        }
        return;
    }
    match v {
        Value::Array(items) if items.iter().all(is_scalar) => {
            let s: Vec<String> = items.iter().map(scalar).collect();
            writeln!(out, "{pad}{key} = [{}]", s.join(", ")).expect("write to string");
        }
        Value::Array(items) => {
            for (i, e) in items.iter().enumerate() {
                pretty_value(out, &format!("{key}[{i}]"), e, indent);
            }
        }
        Value::Object(m) => {
            writeln!(out, "{pad}{key}:").expect("write to string");
            for (k, e) in m {
                pretty_value(out, k, e, indent + 2);
            }
        }
        _ => writeln!(out, "{pad}{key} = {}", scalar(v)).expect("write to string"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use mvcheb::q;

    #[test]
    fn float_poly_rendering() {
        let p = Poly::new(vec![q(-1, 4), q(0, 1), q(1, 1)]);
        assert_eq!(float_poly(&p, "x"), "x^2 - 0.25");
        assert_eq!(float_poly(&Poly::zero(), "x"), "0");
    }

    #[test]
    fn csv_flattens_grids_and_scalars() {
        let mut data = Map::new();
        data.insert("A".into(), json!([["1", "1/2"], ["0", "x"]]));
        data.insert("ok".into(), json!(true));
        let r = Report { params: Map::new(), data, equation: String::new(), pretty: None };
        let csv = r.render(Format::Csv);
        assert_eq!(csv, "key,row,col,value\nA,0,0,1\nA,0,1,1/2\nA,1,0,0\nA,1,1,x\nok,,,true\n");
    }
}
