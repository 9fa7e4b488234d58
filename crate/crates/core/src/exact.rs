//! Exact scalars, polynomials and matrices over them.
//!
//! Everything here is immutable-by-value: operations build new values and
//! never mutate their inputs, so all types are `Send + Sync` and can be
//! shared freely across threads.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::Error;

/// Arbitrary precision rational, always reduced with positive denominator.
pub type Rational = BigRational;

/// `n / d` as a [`Rational`].
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a [`Rational`].
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `n!` for small `n`.
pub fn factorial(n: usize) -> Rational {
    let mut r = BigInt::one();
    for k in 2..=n {
        r *= k;
    }
    Rational::from_integer(r)
}

/// Binomial coefficient `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> Rational {
    if k < 0 || n < 0 || k > n {
        return Rational::zero();
    }
    let mut r = Rational::one();
    for j in 0..k {
        r = r * int(n - j) / int(j + 1);
    }
    r
}

/// Parses `"p"`, `"-p"` or `"p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Lossy conversion used only by the float layer.
pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// A rational multiple of π.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiRational(pub Rational);

impl PiRational {
    pub fn zero() -> Self {
        PiRational(Rational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn coeff(&self) -> &Rational {
        &self.0
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PiRational(&self.0 * c)
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.0) * std::f64::consts::PI
    }
}

impl Add for PiRational {
    type Output = PiRational;
    fn add(self, o: PiRational) -> PiRational {
        PiRational(self.0 + o.0)
    }
}

impl Sub for PiRational {
    type Output = PiRational;
    fn sub(self, o: PiRational) -> PiRational {
        PiRational(self.0 - o.0)
    }
}

impl Neg for PiRational {
    type Output = PiRational;
    fn neg(self) -> PiRational {
        PiRational(-self.0)
    }
}

impl fmt::Display for PiRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}·pi", self.0)
        }
    }
}

/// `re + i·im` with rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussianRational { re, im: Rational::zero() }
    }

    pub fn i() -> Self {
        GaussianRational { re: Rational::zero(), im: Rational::one() }
    }

    pub fn zero() -> Self {
        Self::real(Rational::zero())
    }

    pub fn one() -> Self {
        Self::real(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut r = Self::one();
        for _ in 0..n {
            r = r.times(self);
        }
        r
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) if self.im.is_negative() => write!(f, "{} - {}i", self.re, -&self.im),
            (false, false) => write!(f, "{} + {}i", self.re, self.im),
        }
    }
}

/// The arithmetic a matrix entry needs.
///
/// The method names are deliberately distinct from `num_traits` and
/// `std::ops` so that both can be in scope without ambiguity.
pub trait Ring: Clone + PartialEq + fmt::Debug {
    fn nil() -> Self;
    fn unit() -> Self;
    fn is_nil(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
}

impl Ring for Rational {
    fn nil() -> Self {
        Zero::zero()
    }
    fn unit() -> Self {
        One::one()
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
}

impl Ring for GaussianRational {
    fn nil() -> Self {
        Self::real(Rational::zero())
    }
    fn unit() -> Self {
        Self::real(Rational::one())
    }
    fn is_nil(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        Self::new(&self.re + &o.re, &self.im + &o.im)
    }
    fn minus(&self, o: &Self) -> Self {
        Self::new(&self.re - &o.re, &self.im - &o.im)
    }
    fn times(&self, o: &Self) -> Self {
        Self::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
    fn negated(&self) -> Self {
        Self::new(-&self.re, -&self.im)
    }
}

/// Dense univariate polynomial with rational coefficients, lowest degree
/// first. Trailing zeros are always trimmed, so the zero polynomial has no
/// coefficients and `degree() == None`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&v| int(v)).collect())
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::constant(Rational::one())
    }

    /// The indeterminate.
    pub fn x() -> Self {
        Poly::from_ints(&[0, 1])
    }

    pub fn monomial(c: Rational, d: usize) -> Self {
        let mut v = vec![Rational::zero(); d + 1];
        v[d] = c;
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `x^d`, zero past the degree.
    pub fn coeff(&self, d: usize) -> Rational {
        self.coeffs.get(d).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * int(i as i64)).collect())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + to_f64(c))
    }

    /// `self(inner)`.
    pub fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Poly::default();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Poly::constant(c.clone());
        }
        acc
    }

    /// Horner evaluation in any ring that rationals embed into.
    pub fn eval_in<T: Ring>(&self, x: &T, embed: impl Fn(&Rational) -> T) -> T {
        let mut acc = T::nil();
        for c in self.coeffs.iter().rev() {
            acc = acc.times(x).plus(&embed(c));
        }
        acc
    }

    /// `p(1 - 2u)`, the change of variables from `[-1, 1]` to `[0, 1]`.
    pub fn reparam_x_to_u(&self) -> Poly {
        self.compose(&Poly::from_ints(&[1, -2]))
    }

    /// `p((1 - x) / 2)`, the inverse of [`Poly::reparam_x_to_u`].
    pub fn reparam_u_to_x(&self) -> Poly {
        self.compose(&Poly::new(vec![q(1, 2), q(-1, 2)]))
    }

    /// Quotient and remainder of polynomial long division.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_nil(), "division by the zero polynomial");
        let dd = d.coeffs.len() - 1;
        let lead = d.leading();
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::default(), self.clone());
        }
        let mut quot = vec![Rational::zero(); r.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &r[k + dd] / &lead;
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] -= &c * dc;
            }
            quot[k] = c;
        }
        (Poly::new(quot), Poly::new(r))
    }

    pub fn pow(&self, n: usize) -> Poly {
        let mut r = Poly::constant(Rational::one());
        for _ in 0..n {
            r = &r * self;
        }
        r
    }

    /// Renders with the given variable name, highest degree first, e.g.
    /// `4x^2 - 1` or `u - 1/2`.
    pub fn render(&self, var: &str) -> String {
        if self.is_nil() {
            return "0".into();
        }
        let mut out = String::new();
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_nil() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match d {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{d}"),
            };
            if d == 0 {
                out.push_str(&a.to_string());
            } else if a.is_one() {
                out.push_str(&mono);
            } else if a.is_integer() {
                out.push_str(&format!("{a}{mono}"));
            } else {
                out.push_str(&format!("({a}){mono}"));
            }
        }
        out
    }

    /// Inverse of [`Poly::render`].
    pub fn parse(s: &str, var: &str) -> Result<Poly, Error> {
        let bad = || Error::Parse(format!("not a polynomial in {var}: {s:?}"));
        let s = s.trim();
        if s.is_empty() {
            return Err(bad());
        }
        // Split into signed terms at top-level + and - separated by spaces.
        let mut terms: Vec<(bool, String)> = Vec::new();
        let mut rest = s;
        let mut neg = false;
        if let Some(r) = rest.strip_prefix('-') {
            neg = true;
            rest = r;
        }
        loop {
            let plus = rest.find(" + ");
            let minus = rest.find(" - ");
            let cut = match (plus, minus) {
                (Some(p), Some(m)) => Some(p.min(m)),
                (a, b) => a.or(b),
            };
            match cut {
                Some(i) => {
                    terms.push((neg, rest[..i].trim().to_string()));
                    neg = &rest[i..i + 3] == " - ";
                    rest = &rest[i + 3..];
                }
                None => {
                    terms.push((neg, rest.trim().to_string()));
                    break;
                }
            }
        }
        let mut p = Poly::default();
        for (neg, t) in terms {
            let (coef, deg) = match t.find(var) {
                None => (parse_rational(&t)?, 0usize),
                Some(i) => {
                    let head = t[..i].trim();
                    let tail = &t[i + var.len()..];
                    let deg = if tail.is_empty() {
                        1
                    } else {
                        tail.strip_prefix('^').ok_or_else(bad)?.parse().map_err(|_| bad())?
                    };
                    let head = head.trim_start_matches('(').trim_end_matches(')');
                    let c = if head.is_empty() { Rational::one() } else { parse_rational(head)? };
                    (c, deg)
                }
            };
            let c = if neg { -coef } else { coef };
            p = &p + &Poly::monomial(c, deg);
        }
        Ok(p)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("x"))
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_nil() || o.is_nil() {
            return Poly::default();
        }
        let mut v = vec![Rational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_nil() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::new(v)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Ring for Poly {
    fn nil() -> Self {
        Poly::default()
    }
    fn unit() -> Self {
        Poly::constant(Rational::one())
    }
    fn is_nil(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
}

/// Laurent polynomial `Σ c_k w^k` with Gaussian rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    min_exp: i64,
    coeffs: Vec<GaussianRational>,
}

impl LaurentPoly {
    pub fn new(min_exp: i64, mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_nil()) {
            coeffs.pop();
        }
        let lead = coeffs.iter().take_while(|c| c.is_nil()).count();
        coeffs.drain(..lead);
        if coeffs.is_empty() {
            return LaurentPoly::default();
        }
        LaurentPoly { min_exp: min_exp + lead as i64, coeffs }
    }

    pub fn monomial(c: GaussianRational, e: i64) -> Self {
        LaurentPoly::new(e, vec![c])
    }

    pub fn real_monomial(c: Rational, e: i64) -> Self {
        Self::monomial(GaussianRational::real(c), e)
    }

    /// Embeds a polynomial in the variable `w`.
    pub fn from_poly(p: &Poly) -> Self {
        LaurentPoly::new(0, p.coeffs().iter().cloned().map(GaussianRational::real).collect())
    }

    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(GaussianRational::one(), 0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn coeff(&self, e: i64) -> GaussianRational {
        let i = e - self.min_exp;
        if i < 0 {
            return GaussianRational::zero();
        }
        self.coeffs.get(i as usize).cloned().unwrap_or_else(GaussianRational::zero)
    }

    pub fn max_exp(&self) -> Option<i64> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.min_exp + self.coeffs.len() as i64 - 1)
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        LaurentPoly::new(self.min_exp, self.coeffs.iter().map(|a| a.times(c)).collect())
    }

    /// Multiplies by `w^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly::new(self.min_exp + k, self.coeffs.clone())
    }

    /// `d/dw`.
    pub fn derivative(&self) -> Self {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, a)| a.times(&GaussianRational::real(int(self.min_exp + i as i64))))
            .collect();
        LaurentPoly::new(self.min_exp - 1, c)
    }

    pub fn pow(&self, n: usize) -> Self {
        let mut r = Self::one();
        for _ in 0..n {
            r = r.times(self);
        }
        r
    }

    pub fn render(&self, var: &str) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_nil() {
                continue;
            }
            let e = self.min_exp + i as i64;
            let m = match e {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{e}"),
            };
            let c = if c.im.is_nil() { c.re.to_string() } else { format!("({c})") };
            parts.push(if m.is_empty() { c } else { format!("{c}·{m}") });
        }
        parts.join(" + ")
    }
}

impl Ring for LaurentPoly {
    fn nil() -> Self {
        LaurentPoly::default()
    }
    fn unit() -> Self {
        LaurentPoly::monomial(GaussianRational::one(), 0)
    }
    fn is_nil(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn plus(&self, o: &Self) -> Self {
        if self.is_nil() {
            return o.clone();
        }
        if o.is_nil() {
            return self.clone();
        }
        let lo = self.min_exp.min(o.min_exp);
        let hi = self.max_exp().unwrap().max(o.max_exp().unwrap());
        LaurentPoly::new(lo, (lo..=hi).map(|e| self.coeff(e).plus(&o.coeff(e))).collect())
    }
    fn minus(&self, o: &Self) -> Self {
        Ring::plus(self, &o.negated())
    }
    fn times(&self, o: &Self) -> Self {
        if self.is_nil() || o.is_nil() {
            return LaurentPoly::default();
        }
        let mut v = vec![GaussianRational::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].plus(&a.times(b));
            }
        }
        LaurentPoly::new(self.min_exp + o.min_exp, v)
    }
    fn negated(&self) -> Self {
        LaurentPoly::new(self.min_exp, self.coeffs.iter().map(|c| c.negated()).collect())
    }
}

/// Dense row-major matrix over any [`Ring`] (or plain storage for types
/// such as [`PiRational`]).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Grid<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type RatGrid = Grid<Rational>;
pub type MatPoly = Grid<Poly>;
pub type PiGrid = Grid<PiRational>;
pub type LaurentGrid = Grid<LaurentPoly>;

impl<T> Grid<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Grid { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        assert!(rows.iter().all(|v| v.len() == c), "ragged rows");
        Grid { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&T> {
        (i < self.rows && j < self.cols).then(|| &self.data[i * self.cols + j])
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> Grid<U> {
        Grid { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Row-major nested vectors.
    pub fn to_rows(&self) -> Vec<Vec<&T>> {
        (0..self.rows).map(|i| self.row(i).iter().collect()).collect()
    }
}

impl<T: Clone> Grid<T> {
    pub fn transpose(&self) -> Self {
        Grid::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }
}

impl<T> Index<(usize, usize)> for Grid<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(i < self.rows && j < self.cols, "grid index out of range");
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Grid<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(i < self.rows && j < self.cols, "grid index out of range");
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Ring> Grid<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Grid::from_fn(rows, cols, |_, _| T::nil())
    }

    pub fn identity(n: usize) -> Self {
        Grid::from_fn(n, n, |i, j| if i == j { T::unit() } else { T::nil() })
    }

    pub fn diagonal(d: Vec<T>) -> Self {
        let n = d.len();
        let mut g = Self::zeros(n, n);
        for (i, v) in d.into_iter().enumerate() {
            g[(i, i)] = v;
        }
        g
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_nil())
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_nil()))
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|v| c.times(v))
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self, Error> {
        if self.cols != o.rows {
            return Err(Error::Shape(format!("{}x{} times {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        Ok(Grid::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = T::nil();
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_nil() {
                    continue;
                }
                acc = acc.plus(&a.times(&o[(k, j)]));
            }
            acc
        }))
    }

    fn zip(&self, o: &Self, f: impl Fn(&T, &T) -> T) -> Self {
        assert!(self.rows == o.rows && self.cols == o.cols, "shape mismatch");
        Grid::from_fn(self.rows, self.cols, |i, j| f(&self[(i, j)], &o[(i, j)]))
    }

    /// The anti-diagonal involution `J` with `J_{nm} = δ_{n+m, N-1}`.
    pub fn flip(n: usize) -> Self {
        Grid::from_fn(n, n, |i, j| if i + j + 1 == n { T::unit() } else { T::nil() })
    }
}

impl<'a, T: Ring> Add<&'a Grid<T>> for &'a Grid<T> {
    type Output = Grid<T>;
    fn add(self, o: &Grid<T>) -> Grid<T> {
        self.zip(o, |a, b| a.plus(b))
    }
}

impl<'a, T: Ring> Sub<&'a Grid<T>> for &'a Grid<T> {
    type Output = Grid<T>;
    fn sub(self, o: &Grid<T>) -> Grid<T> {
        self.zip(o, |a, b| a.minus(b))
    }
}

impl<'a, T: Ring> Mul<&'a Grid<T>> for &'a Grid<T> {
    type Output = Grid<T>;
    fn mul(self, o: &Grid<T>) -> Grid<T> {
        self.try_mul(o).expect("shape mismatch")
    }
}

impl<T: Ring> Neg for &Grid<T> {
    type Output = Grid<T>;
    fn neg(self) -> Grid<T> {
        self.map(|v| v.negated())
    }
}

impl RatGrid {
    pub fn to_matpoly(&self) -> MatPoly {
        self.map(|c| Poly::constant(c.clone()))
    }

    /// Exact inverse by Gauss-Jordan with a nonzero pivot search; `None`
    /// when singular.
    pub fn inverse(&self) -> Option<RatGrid> {
        assert!(self.is_square(), "inverse of a non-square grid");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RatGrid::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&r| !a[(r, c)].is_nil())?;
            if p != c {
                for j in 0..n {
                    a.data.swap(p * n + j, c * n + j);
                    inv.data.swap(p * n + j, c * n + j);
                }
            }
            let piv = a[(c, c)].clone();
            for j in 0..n {
                a[(c, j)] = &a[(c, j)] / &piv;
                inv[(c, j)] = &inv[(c, j)] / &piv;
            }
            for r in 0..n {
                if r == c || a[(r, c)].is_nil() {
                    continue;
                }
                let f = a[(r, c)].clone();
                for j in 0..n {
                    let t = &f * &a[(c, j)];
                    a[(r, j)] -= t;
                    let t = &f * &inv[(c, j)];
                    inv[(r, j)] -= t;
                }
            }
        }
        Some(inv)
    }

    pub fn to_f64(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).iter().map(to_f64).collect()).collect()
    }
}

impl MatPoly {
    pub fn derivative(&self) -> MatPoly {
        self.map(Poly::derivative)
    }

    pub fn eval(&self, x: &Rational) -> RatGrid {
        self.map(|p| p.eval(x))
    }

    pub fn eval_f64(&self, x: f64) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|p| p.eval_f64(x)).collect()).collect()
    }

    /// Multiplies every entry by the scalar polynomial `p`.
    pub fn scale_poly(&self, p: &Poly) -> MatPoly {
        self.map(|v| v * p)
    }

    /// Coefficient grid of `x^d`.
    pub fn coeff_grid(&self, d: usize) -> RatGrid {
        self.map(|p| p.coeff(d))
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.data.iter().filter_map(Poly::degree).max()
    }

    pub fn reparam_x_to_u(&self) -> MatPoly {
        self.map(Poly::reparam_x_to_u)
    }

    pub fn reparam_u_to_x(&self) -> MatPoly {
        self.map(Poly::reparam_u_to_x)
    }
}

/// `∫_{-1}^{1} p(x) √(1 - x²) dx`, exactly.
pub fn integrate_halfcircle(p: &Poly) -> PiRational {
    // x^{2m} contributes π (1/2)_m / (2 (m+1)!).
    let mut acc = Rational::zero();
    let mut half_poch = Rational::one();
    for (e, c) in p.coeffs().iter().enumerate() {
        if e % 2 == 1 {
            continue;
        }
        let m = e / 2;
        if m > 0 {
            half_poch *= q(2 * m as i64 - 1, 2);
        }
        if !c.is_nil() {
            acc += c * &half_poch / (int(2) * factorial(m + 1));
        }
    }
    PiRational(acc)
}

/// Determinant of a square polynomial matrix by fraction-free (Bareiss)
/// elimination.
pub fn matpoly_det(m: &MatPoly) -> Result<Poly, Error> {
    if !m.is_square() {
        return Err(Error::Shape(format!("determinant of a {}x{} matrix", m.rows, m.cols)));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(Poly::one());
    }
    let mut a = m.clone();
    let mut prev = Poly::one();
    let mut negate = false;
    for k in 0..n - 1 {
        let Some(p) = (k..n).find(|&r| !a[(r, k)].is_nil()) else {
            return Ok(Poly::zero());
        };
        if p != k {
            for j in 0..n {
                a.data.swap(p * n + j, k * n + j);
            }
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[(i, j)] * &a[(k, k)]) - &(&a[(i, k)] * &a[(k, j)]);
                let (quot, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_nil(), "Bareiss division must be exact");
                a[(i, j)] = quot;
            }
            a[(i, k)] = Poly::zero();
        }
        prev = a[(k, k)].clone();
    }
    let d = a[(n - 1, n - 1)].clone();
    Ok(if negate { -&d } else { d })
}

/// Inverse of a lower triangular polynomial matrix with unit diagonal.
pub fn invert_unitriangular(m: &MatPoly) -> Result<MatPoly, Error> {
    if !m.is_square() {
        return Err(Error::Precondition("unitriangular inverse needs a square matrix".into()));
    }
    let n = m.rows;
    for i in 0..n {
        if m[(i, i)] != Poly::one() {
            return Err(Error::Precondition(format!("diagonal entry {i} is not 1")));
        }
        for j in i + 1..n {
            if !m[(i, j)].is_nil() {
                return Err(Error::Precondition(format!("entry ({i},{j}) above the diagonal")));
            }
        }
    }
    // Forward substitution: (M X)_{ij} = δ_ij, solve row by row.
    let mut x = MatPoly::identity(n);
    for i in 0..n {
        for j in 0..i {
            let mut acc = Poly::zero();
            for k in j..i {
                acc = &acc + &(&m[(i, k)] * &x[(k, j)]);
            }
            x[(i, j)] = -&acc;
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    #[test]
    fn halfcircle_moments() {
        assert_eq!(integrate_halfcircle(&p(&[1])), PiRational(q(1, 2)));
        assert_eq!(integrate_halfcircle(&p(&[0, 1])), PiRational::zero());
        assert_eq!(integrate_halfcircle(&p(&[0, 0, 1])), PiRational(q(1, 8)));
    }

    #[test]
    fn halfcircle_against_quadrature() {
        // Midpoint rule in θ with x = cos θ; smooth periodic integrand so
        // convergence is spectral.
        let poly = p(&[3, -1, 4, 1, -5, 9, 2]);
        let n = 4000;
        let h = std::f64::consts::PI / n as f64;
        let mut s = 0.0;
        for k in 0..n {
            let t = (k as f64 + 0.5) * h;
            s += poly.eval_f64(t.cos()) * t.sin().powi(2);
        }
        let exact = integrate_halfcircle(&poly).to_f64();
        assert!((s * h - exact).abs() < 1e-12 * exact.abs().max(1.0));
    }

    #[test]
    fn det_examples() {
        let m = Grid::from_rows(vec![vec![p(&[2]), p(&[0, 2])], vec![p(&[0, 2]), p(&[2])]]);
        assert_eq!(matpoly_det(&m).unwrap(), p(&[4, 0, -4]));
        assert_eq!(matpoly_det(&MatPoly::identity(3)).unwrap(), Poly::one());
        let l = Grid::from_rows(vec![vec![p(&[1]), p(&[])], vec![p(&[0, 1]), p(&[1])]]);
        assert_eq!(matpoly_det(&l).unwrap(), Poly::one());
        assert!(matpoly_det(&Grid::from_rows(vec![vec![p(&[1]), p(&[2])]])).is_err());
    }

    #[test]
    fn det_needs_row_swap() {
        let m = Grid::from_rows(vec![vec![p(&[]), p(&[1])], vec![p(&[1]), p(&[0, 1])]]);
        assert_eq!(matpoly_det(&m).unwrap(), p(&[-1]));
    }

    #[test]
    fn unitriangular_inverse() {
        let l = Grid::from_rows(vec![vec![p(&[1]), p(&[])], vec![p(&[0, 1]), p(&[1])]]);
        let li = invert_unitriangular(&l).unwrap();
        assert_eq!(li[(1, 0)], p(&[0, -1]));
        assert_eq!(invert_unitriangular(&MatPoly::identity(3)).unwrap(), MatPoly::identity(3));
        assert!(invert_unitriangular(&l.transpose()).is_err());
    }

    #[test]
    fn reparam_examples() {
        assert_eq!(p(&[0, 2]).reparam_x_to_u(), p(&[2, -4]));
        assert_eq!(p(&[1]).reparam_x_to_u(), p(&[1]));
        assert_eq!(p(&[-1, 0, 4]).reparam_x_to_u(), p(&[3, -16, 16]));
        assert_eq!(p(&[-1, 0, 4]).reparam_x_to_u().reparam_u_to_x(), p(&[-1, 0, 4]));
    }

    #[test]
    fn render_and_parse() {
        let r = Poly::new(vec![q(-1, 2), int(1)]);
        assert_eq!(r.render("u"), "u - 1/2");
        assert_eq!(p(&[-1, 0, 4]).to_string(), "4x^2 - 1");
        let odd = Poly::new(vec![q(3, 7), q(-3, 4), int(0), int(-2)]);
        assert_eq!(odd.to_string(), "-2x^3 - (3/4)x + 3/7");
        for poly in [r, odd, Poly::zero(), p(&[0, -1])] {
            assert_eq!(Poly::parse(&poly.render("u"), "u").unwrap(), poly);
        }
        assert!(Poly::parse("x +", "x").is_err());
    }

    #[test]
    fn pi_rational_display() {
        assert_eq!(PiRational(q(3, 16)).to_string(), "3/16·pi");
        assert_eq!(PiRational::zero().to_string(), "0");
    }

    #[test]
    fn laurent_normalizes() {
        let a = LaurentPoly::real_monomial(int(1), 1);
        let b = LaurentPoly::real_monomial(int(1), -1);
        let s = Ring::plus(&a, &b);
        assert_eq!(s.min_exp(), -1);
        assert_eq!(Ring::minus(&s, &a), b);
        assert!(Ring::minus(&s, &s).is_nil());
        assert_eq!(s.times(&s).coeff(0), GaussianRational::real(int(2)));
        assert_eq!(a.derivative(), LaurentPoly::real_monomial(int(1), 0));
    }

    #[test]
    fn rational_grid_inverse() {
        let g = Grid::from_rows(vec![vec![int(0), int(1)], vec![int(2), int(3)]]);
        let inv = g.inverse().unwrap();
        assert_eq!(&g * &inv, RatGrid::identity(2));
        assert!(Grid::from_rows(vec![vec![int(1), int(2)], vec![int(2), int(4)]]).inverse().is_none());
    }

    fn arb_poly(max_deg: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec((-20i64..20, 1i64..6), 0..=max_deg + 1)
            .prop_map(|v| Poly::new(v.into_iter().map(|(a, b)| q(a, b)).collect()))
    }

    fn arb_matpoly3() -> impl Strategy<Value = MatPoly> {
        prop::collection::vec(arb_poly(2), 9).prop_map(|v| {
            let mut it = v.into_iter();
            Grid::from_fn(3, 3, |_, _| it.next().unwrap())
        })
    }

    proptest! {
        #[test]
        fn halfcircle_is_linear(a in -9i64..9, b in 1i64..9, pp in arb_poly(12), qq in arb_poly(12)) {
            let c = q(a, b);
            let lhs = integrate_halfcircle(&(&pp.scale(&c) + &qq));
            let rhs = integrate_halfcircle(&pp).scale(&c) + integrate_halfcircle(&qq);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn det_is_multiplicative(a in arb_matpoly3(), b in arb_matpoly3()) {
            let lhs = matpoly_det(&(&a * &b)).unwrap();
            let rhs = &matpoly_det(&a).unwrap() * &matpoly_det(&b).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn unitriangular_round_trip(v in prop::collection::vec(arb_poly(3), 6)) {
            let mut it = v.into_iter();
            let m = Grid::from_fn(4, 4, |i, j| match i.cmp(&j) {
                std::cmp::Ordering::Equal => Poly::one(),
                std::cmp::Ordering::Greater => it.next().unwrap(),
                std::cmp::Ordering::Less => Poly::zero(),
            });
            let inv = invert_unitriangular(&m).unwrap();
            prop_assert_eq!(&m * &inv, MatPoly::identity(4));
            prop_assert_eq!(&inv * &m, MatPoly::identity(4));
        }

        #[test]
        fn reparam_is_multiplicative(pp in arb_poly(6), qq in arb_poly(6)) {
            prop_assert_eq!((&pp * &qq).reparam_x_to_u(), &pp.reparam_x_to_u() * &qq.reparam_x_to_u());
        }

        #[test]
        fn render_round_trips(pp in arb_poly(8)) {
            prop_assert_eq!(Poly::parse(&pp.render("x"), "x").unwrap(), pp);
        }
    }
}
