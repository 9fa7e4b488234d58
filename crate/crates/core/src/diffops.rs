//! Matrix differential operators acting on the right,
//!
//! ```text
//! (P·F)(x) = Σ_i (d^i P / dx^i)(x) F_i(x),
//! ```
//!
//! with eigenvalue matrices multiplying from the left. The same type serves
//! the `x`-domain operators `D̃`, `Ẽ` on `[-1, 1]` and the `u`-domain
//! operators `D`, `E` on `[0, 1]`; the variable is whatever the coefficient
//! polynomials are written in.
//!
//! The second half of the module conjugates by `M(u) = L(1-2u)`, which
//! decouples `D - 2ℓE` into a diagonal operator, and checks the resulting
//! closed form of `R_n M` in terms of Racah and Gegenbauer polynomials.

pub mod group;

use num_traits::{One, Zero};

use crate::exact::{binomial, factorial, int, invert_unitriangular, q, Grid, MatPoly, Poly, RatGrid, Rational};
use crate::hypergeometric::{a0_b0_b1, cuv};
use crate::recurrence::{monic_p, monic_p_seq, monic_r, squared_norm_h};
use crate::special::{gegenbauer, pochhammer, racah, HypSeries};
use crate::weight::{lower_l, weight_poly};
use crate::{Error, Result};

/// A right-acting differential operator `Σ_i d^i/dx^i · F_i`.
///
/// Trailing zero coefficients are dropped, so two operators are equal
/// exactly when they act the same way.
#[derive(Clone, Debug, PartialEq)]
pub struct MatDiffOp {
    coeffs: Vec<MatPoly>,
}

impl MatDiffOp {
    pub fn new(coeffs: Vec<MatPoly>) -> Result<Self> {
        let Some(first) = coeffs.first() else {
            return Err(Error::Shape("an operator needs at least one coefficient".into()));
        };
        let n = first.rows();
        if coeffs.iter().any(|c| c.rows() != n || c.cols() != n) {
            return Err(Error::Shape("operator coefficients must be square of one size".into()));
        }
        Ok(Self::trimmed(coeffs))
    }

    fn trimmed(mut coeffs: Vec<MatPoly>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        MatDiffOp { coeffs }
    }

    /// Multiplication by a fixed matrix, an operator of order zero.
    pub fn multiplication(m: MatPoly) -> Self {
        MatDiffOp { coeffs: vec![m] }
    }

    pub fn identity(size: usize) -> Self {
        Self::multiplication(MatPoly::identity(size))
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn size(&self) -> usize {
        self.coeffs[0].rows()
    }

    pub fn coeffs(&self) -> &[MatPoly] {
        &self.coeffs
    }

    /// The coefficient of `d^i`, zero beyond the order.
    pub fn coeff(&self, i: usize) -> MatPoly {
        self.coeffs.get(i).cloned().unwrap_or_else(|| MatPoly::zeros(self.size(), self.size()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Entrywise combination of coefficients.
    fn zip(&self, o: &Self, f: impl Fn(&MatPoly, &MatPoly) -> MatPoly) -> Self {
        let len = self.coeffs.len().max(o.coeffs.len());
        Self::trimmed((0..len).map(|i| f(&self.coeff(i), &o.coeff(i))).collect())
    }

    pub fn plus(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a + b)
    }

    pub fn minus(&self, o: &Self) -> Self {
        self.zip(o, |a, b| a - b)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let p = Poly::constant(c.clone());
        Self::trimmed(self.coeffs.iter().map(|m| m.scale_poly(&p)).collect())
    }

    /// Adds `c·I` to the order zero coefficient.
    pub fn shift(&self, c: &Rational) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs[0] = &coeffs[0] + &RatGrid::identity(self.size()).scale(c).to_matpoly();
        Self::trimmed(coeffs)
    }

    /// Transposes every coefficient.
    pub fn transpose(&self) -> Self {
        Self::trimmed(self.coeffs.iter().map(MatPoly::transpose).collect())
    }

    /// `J F_i J` for every coefficient.
    pub fn flip(&self) -> Self {
        let j = RatGrid::flip(self.size()).to_matpoly();
        Self::trimmed(self.coeffs.iter().map(|c| &(&j * c) * &j).collect())
    }

    /// Substitutes `x = 1 - 2u` in an `x`-domain operator.
    pub fn to_u_domain(&self) -> Self {
        // d/dx = -½ d/du
        Self::trimmed(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c.reparam_x_to_u().scale_poly(&Poly::constant(q(-1, 2).pow(i as i32))))
                .collect(),
        )
    }
}

/// `P·op`.
pub fn apply_right(p: &MatPoly, op: &MatDiffOp) -> Result<MatPoly> {
    if p.cols() != op.size() {
        return Err(Error::Shape(format!("{} columns against an operator of size {}", p.cols(), op.size())));
    }
    let mut acc = MatPoly::zeros(p.rows(), op.size());
    let mut d = p.clone();
    for f in &op.coeffs {
        acc = &acc + &d.try_mul(f)?;
        d = d.derivative();
    }
    Ok(acc)
}

/// The operator `c` with `P·c = (P·a)·b` for all `P`.
pub fn compose(a: &MatDiffOp, b: &MatDiffOp) -> Result<MatDiffOp> {
    if a.size() != b.size() {
        return Err(Error::Shape("composing operators of different sizes".into()));
    }
    let n = a.size();
    let mut out = vec![MatPoly::zeros(n, n); a.coeffs.len() + b.coeffs.len() - 1];
    for (i, ai) in a.coeffs.iter().enumerate() {
        // derivatives of A_i, computed once
        let mut ders = vec![ai.clone()];
        for _ in 0..b.order() {
            let next = ders.last().expect("non-empty").derivative();
            ders.push(next);
        }
        for (j, bj) in b.coeffs.iter().enumerate() {
            for r in 0..=j {
                let term = (&ders[j - r] * bj).scale_poly(&Poly::constant(binomial(j as i64, r as i64)));
                out[i + r] = &out[i + r] + &term;
            }
        }
    }
    Ok(MatDiffOp::trimmed(out))
}

/// `a·b - b·a` in the composition order of [`compose`].
pub fn commutator(a: &MatDiffOp, b: &MatDiffOp) -> Result<MatDiffOp> {
    Ok(compose(a, b)?.minus(&compose(b, a)?))
}

/// `a + x·b` as a polynomial matrix.
fn affine(a: &RatGrid, b: &RatGrid) -> MatPoly {
    &a.to_matpoly() + &b.to_matpoly().scale_poly(&Poly::x())
}

fn scalar_poly(size: usize, p: Poly) -> MatPoly {
    MatPoly::identity(size).scale_poly(&p)
}

fn need_positive(two_l: usize, what: &str) -> Result<()> {
    if two_l == 0 {
        return Err(Error::Precondition(format!("{what} does not exist for 2l = 0")));
    }
    Ok(())
}

/// `D̃ = (1-x²) d² + d·(C̃ - xŨ) - Ṽ` on `[-1, 1]`.
pub fn build_dtilde(two_l: usize) -> MatDiffOp {
    let size = two_l + 1;
    let tl = two_l as i64;
    let c = Grid::from_fn(size, size, |r, c| {
        let i = r as i64;
        if r + 1 == c {
            int(tl - i)
        } else if c + 1 == r {
            int(i)
        } else {
            Rational::zero()
        }
    });
    let u = RatGrid::identity(size).scale(&int(tl + 3));
    let v = RatGrid::diagonal((0..=tl).map(|i| int(-i * (tl - i))).collect());
    MatDiffOp::trimmed(vec![(-&v).to_matpoly(), affine(&c, &-&u), scalar_poly(size, Poly::from_ints(&[1, 0, -1]))])
}

/// `Ẽ = d·(B̃₀ + xB̃₁) + Ã`, the first order operator commuting with `D̃`.
pub fn build_etilde(two_l: usize) -> Result<MatDiffOp> {
    need_positive(two_l, "the first order operator")?;
    let size = two_l + 1;
    let tl = two_l as i64;
    let b0 = Grid::from_fn(size, size, |r, c| {
        let i = r as i64;
        if r + 1 == c {
            q(-(tl - i), 2 * tl)
        } else if c + 1 == r {
            q(i, 2 * tl)
        } else {
            Rational::zero()
        }
    });
    let b1 = RatGrid::diagonal((0..=tl).map(|i| q(tl - 2 * i, 2 * tl)).collect());
    let a = RatGrid::diagonal((0..=tl).map(|i| int((tl + 2) * (i - tl)) / int(-2 * tl)).collect());
    Ok(MatDiffOp::trimmed(vec![a.to_matpoly(), affine(&b0, &b1)]))
}

/// `D = u(1-u) d² + d·(C - uU) - V` on `[0, 1]`.
pub fn build_d(two_l: usize) -> MatDiffOp {
    let (c, u, v) = cuv(two_l);
    MatDiffOp::trimmed(vec![(-&v).to_matpoly(), affine(&c, &-&u), scalar_poly(two_l + 1, Poly::from_ints(&[0, 1, -1]))])
}

/// `E = d·(B₀ + uB₁) + A₀` on `[0, 1]`.
pub fn build_e(two_l: usize) -> Result<MatDiffOp> {
    need_positive(two_l, "the first order operator")?;
    let (a0, b0, b1) = a0_b0_b1(two_l);
    Ok(MatDiffOp::trimmed(vec![a0.to_matpoly(), affine(&b0, &b1)]))
}

/// `D + αE`.
pub fn combine_d_alpha(two_l: usize, alpha: &Rational) -> Result<MatDiffOp> {
    if alpha.is_zero() {
        return Ok(build_d(two_l));
    }
    if two_l == 0 {
        return Err(Error::Degenerate {
            alpha: alpha.to_string(),
            reason: "the first order operator does not exist for 2l = 0".into(),
        });
    }
    Ok(build_d(two_l).plus(&build_e(two_l)?.scale(alpha)))
}

/// `Λ_n(D̃) = Λ_n(D)`, diagonal with entries `-n(n-1) - n(2ℓ+3) + i(2ℓ-i)`.
pub fn lambda_d(two_l: usize, n: usize) -> RatGrid {
    let (tl, nl) = (two_l as i64, n as i64);
    RatGrid::diagonal((0..=tl).map(|i| int(-nl * (nl - 1) - nl * (tl + 3) + i * (tl - i))).collect())
}

/// `Λ_n(Ẽ)`, diagonal with entries `n(ℓ-i)/(2ℓ) - (2ℓ+2)(i-2ℓ)/(4ℓ)`.
pub fn lambda_etilde(two_l: usize, n: usize) -> Result<RatGrid> {
    need_positive(two_l, "the first order operator")?;
    let (tl, nl) = (two_l as i64, n as i64);
    Ok(RatGrid::diagonal((0..=tl).map(|i| q(nl * (tl - 2 * i), 2 * tl) - q((tl + 2) * (i - tl), 2 * tl)).collect()))
}

/// `Λ_n(E)`, diagonal with entries `-n(ℓ-i)/ℓ + (2ℓ+2)(i-2ℓ)/(2ℓ)`.
pub fn lambda_e(two_l: usize, n: usize) -> Result<RatGrid> {
    need_positive(two_l, "the first order operator")?;
    let (tl, nl) = (two_l as i64, n as i64);
    Ok(RatGrid::diagonal((0..=tl).map(|i| q(-nl * (tl - 2 * i), tl) + q((tl + 2) * (i - tl), tl)).collect()))
}

/// `P·op == Λ·P`.
pub fn is_eigenfunction(p: &MatPoly, op: &MatDiffOp, lambda: &RatGrid) -> Result<bool> {
    Ok(apply_right(p, op)? == lambda.to_matpoly().try_mul(p)?)
}

/// `P_n·D̃ = Λ_n(D̃)P_n` and, for `2ℓ ≥ 1`, `P_n·Ẽ = Λ_n(Ẽ)P_n`, for
/// `n <= n_max`.
pub fn eigen_check(two_l: usize, n_max: usize) -> Result<bool> {
    let dt = build_dtilde(two_l);
    let et = if two_l > 0 { Some(build_etilde(two_l)?) } else { None };
    for (n, p) in monic_p_seq(two_l, n_max).iter().enumerate() {
        if !is_eigenfunction(p, &dt, &lambda_d(two_l, n))? {
            return Ok(false);
        }
        if let Some(e) = &et {
            if !is_eigenfunction(p, e, &lambda_etilde(two_l, n)?)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `D̃Ẽ - ẼD̃ = 0`.
pub fn commute_check(two_l: usize) -> Result<bool> {
    Ok(commutator(&build_dtilde(two_l), &build_etilde(two_l)?)?.is_zero())
}

/// Symmetry `⟨P·op, Q⟩ = ⟨P, Q·op⟩` for the `W`-inner product, over all
/// `P = x^a E_rs`, `Q = x^b E_tv` with `a, b <= deg_max`.
///
/// `(x^a E_rs)·op` has the single nonzero row `g_{a,s} = Σ_i (x^a)^{(i)} F_i[s, ·]`
/// in position `r`, so the condition reduces to
/// `∫ g_{a,s} W e_v x^b = ∫ x^a e_sᵗ W g_{b,v}ᵗ` for all `a, b, s, v`.
pub fn symmetry_check(two_l: usize, op: &MatDiffOp, deg_max: usize) -> Result<bool> {
    let size = two_l + 1;
    if op.size() != size {
        return Err(Error::Shape(format!("operator of size {} for 2l = {two_l}", op.size())));
    }
    let w = weight_poly(two_l);
    // g[a][s] as a row of polynomials
    let g: Vec<Vec<Vec<Poly>>> = (0..=deg_max)
        .map(|a| {
            (0..size)
                .map(|s| {
                    let mut row = vec![Poly::zero(); size];
                    let mut d = Poly::monomial(Rational::one(), a);
                    for f in op.coeffs() {
                        for (k, slot) in row.iter_mut().enumerate() {
                            *slot = &*slot + &(&d * &f[(s, k)]);
                        }
                        d = d.derivative();
                    }
                    row
                })
                .collect()
        })
        .collect();
    // row vector times W, column v
    let row_w =
        |row: &[Poly], v: usize| row.iter().enumerate().fold(Poly::zero(), |acc, (k, p)| &acc + &(p * &w[(k, v)]));
    for a in 0..=deg_max {
        for b in 0..=deg_max {
            let xa = Poly::monomial(Rational::one(), a);
            let xb = Poly::monomial(Rational::one(), b);
            for s in 0..size {
                for v in 0..size {
                    let lhs = &row_w(&g[a][s], v) * &xb;
                    let rhs = &row_w(&g[b][v], s) * &xa;
                    if crate::exact::integrate_halfcircle(&(&lhs - &rhs)) != crate::exact::PiRational::zero() {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// `M(u) = L(1 - 2u)`.
pub fn m_matrix(two_l: usize) -> MatPoly {
    lower_l(two_l).reparam_x_to_u()
}

/// `M⁻¹·op·M`, the operator with `(P M)·result = (P·op) M`.
pub fn conjugate_by_m(two_l: usize, op: &MatDiffOp) -> Result<MatDiffOp> {
    if op.size() != two_l + 1 {
        return Err(Error::Precondition(format!("operator of size {} for 2l = {two_l}", op.size())));
    }
    if op.order() == 2 && op.coeff(2) != scalar_poly(two_l + 1, Poly::from_ints(&[0, 1, -1])) {
        return Err(Error::Precondition("second order symbol must be u(1-u)".into()));
    }
    let m = m_matrix(two_l);
    let m_inv = invert_unitriangular(&m)?;
    compose(&compose(&MatDiffOp::multiplication(m_inv), op)?, &MatDiffOp::multiplication(m))
}

fn t11(two_l: usize) -> RatGrid {
    RatGrid::diagonal((0..=two_l as i64).map(|i| int(2 * i + 3)).collect())
}

fn t0(two_l: usize) -> RatGrid {
    let tl = two_l as i64;
    RatGrid::diagonal((0..=tl).map(|i| int((tl - i) * (tl + i + 2))).collect())
}

/// The diagonal operator `u(1-u) d² + d·(½T₁¹ - uT₁¹) + T₀`.
pub fn script_d_expected(two_l: usize) -> MatDiffOp {
    let t = t11(two_l);
    MatDiffOp::trimmed(vec![
        t0(two_l).to_matpoly(),
        affine(&t.scale(&q(1, 2)), &-&t),
        scalar_poly(two_l + 1, Poly::from_ints(&[0, 1, -1])),
    ])
}

/// `S₁(u)` and `S₀(u)` of the conjugated first order operator.
fn s1_s0(two_l: usize) -> (MatPoly, MatPoly) {
    let size = two_l + 1;
    let tl = two_l as i64;
    let l = q(tl, 2);
    let u1u = Poly::from_ints(&[0, 1, -1]);
    let one_2u = Poly::from_ints(&[1, -2]);
    let s1 = Grid::from_fn(size, size, |r, c| {
        let i = r as i64;
        if c + 1 == r {
            u1u.scale(&(int(i * i * (tl + i + 1)) / (&l * int((2 * i - 1) * (2 * i + 1)))))
        } else if r + 1 == c {
            Poly::constant(-int(tl - i) / (int(4) * &l))
        } else {
            Poly::zero()
        }
    });
    let s0 = Grid::from_fn(size, size, |r, c| {
        let i = r as i64;
        if c + 1 == r {
            one_2u.scale(&(int(i * i * (tl + i + 1)) / (int(2) * &l * int(2 * i - 1))))
        } else if r == c {
            Poly::constant((int(i * (i + 1)) - int(4) * &l * (&l + int(1))) / (int(2) * &l))
        } else {
            Poly::zero()
        }
    });
    (s1, s0)
}

/// `d·S₁(u) + S₀(u)`, the conjugate of `E`.
pub fn script_e_expected(two_l: usize) -> Result<MatDiffOp> {
    need_positive(two_l, "the first order operator")?;
    let (s1, s0) = s1_s0(two_l);
    Ok(MatDiffOp::trimmed(vec![s0, s1]))
}

/// `N(λ) = (λ - T₀)(½T₁¹)⁻¹ S₁(0) + S₀(0)`, acting on row vectors from
/// the right.
pub fn n_lambda(two_l: usize, lambda: &Rational) -> Result<RatGrid> {
    need_positive(two_l, "N(λ)")?;
    let size = two_l + 1;
    let (s1, s0) = s1_s0(two_l);
    let zero = Rational::zero();
    let half_inv = t11(two_l).scale(&q(1, 2)).inverse().expect("positive diagonal");
    let first = &(&(&RatGrid::identity(size).scale(lambda) - &t0(two_l)) * &half_inv) * &s1.eval(&zero);
    Ok(&first + &s0.eval(&zero))
}

/// Conjugating `D - 2ℓE` gives [`script_d_expected`], conjugating `E` gives
/// [`script_e_expected`], and the conjugate of `D` alone is not diagonal.
pub fn decouple_check(two_l: usize) -> Result<bool> {
    need_positive(two_l, "the decoupling")?;
    let d = build_d(two_l);
    let e = build_e(two_l)?;
    let dm = d.minus(&e.scale(&int(two_l as i64)));
    let ok_d = conjugate_by_m(two_l, &dm)? == script_d_expected(two_l);
    let ok_e = conjugate_by_m(two_l, &e)? == script_e_expected(two_l)?;
    let plain = conjugate_by_m(two_l, &d)?;
    let off_diag = plain.coeffs().iter().any(|c| !c.is_diagonal());
    Ok(ok_d && ok_e && off_diag)
}

/// `ℛ_n = R_n M`.
pub fn script_r(two_l: usize, n: usize) -> MatPoly {
    &monic_r(two_l, n) * &m_matrix(two_l)
}

/// `ℛ_n·𝒟 = (Λ_n(D) - 2ℓΛ_n(E))ℛ_n`, `ℛ_n·ℰ = Λ_n(E)ℛ_n`, and
/// `c_k N(λ_n(k)) = μ_n(k) c_k` for the rows `c_k = ℛ_n(0)_{k·}`.
pub fn script_r_eigen_check(two_l: usize, n: usize) -> Result<bool> {
    need_positive(two_l, "the decoupled operators")?;
    let r = script_r(two_l, n);
    let le = lambda_e(two_l, n)?;
    let ld = &lambda_d(two_l, n) - &le.scale(&int(two_l as i64));
    if !is_eigenfunction(&r, &script_d_expected(two_l), &ld)? || !is_eigenfunction(&r, &script_e_expected(two_l)?, &le)?
    {
        return Ok(false);
    }
    let r0 = r.eval(&Rational::zero());
    for k in 0..=two_l {
        let nl = n_lambda(two_l, &ld[(k, k)])?;
        for j in 0..=two_l {
            let s: Rational = (0..=two_l).map(|i| &r0[(k, i)] * &nl[(i, j)]).sum();
            if s != &le[(k, k)] * &r0[(k, j)] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `c_{k0}(n) = (-1)^n 4^{-n} n! (2ℓ+2)_n / ((k+1)_n (2ℓ-k+1)_n)`.
pub fn c_k0(two_l: usize, k: usize, n: usize) -> Rational {
    let tl = two_l as i64;
    let sign = if n.is_multiple_of(2) { int(1) } else { int(-1) };
    sign / int(4).pow(n as i32) * factorial(n) * pochhammer(&int(tl + 2), n)
        / (pochhammer(&int(k as i64 + 1), n) * pochhammer(&int(tl - k as i64 + 1), n))
}

/// The closed form of `c_{kj}(n) = ℛ_n(0)_{kj}` as a Racah polynomial.
pub fn c_closed(two_l: usize, k: usize, j: usize, n: usize) -> Result<Rational> {
    if k > two_l || j > two_l {
        return Err(Error::Precondition(format!("indices ({k}, {j}) out of range for 2l = {two_l}")));
    }
    if j > k + n {
        return Ok(Rational::zero());
    }
    let (tl, kl, jl, nl) = (two_l as i64, k as i64, j as i64, n as i64);
    let sign = if j.is_multiple_of(2) { int(1) } else { int(-1) };
    let f =
        HypSeries::new(vec![int(-jl), int(jl + 1), int(-kl), int(-tl - nl - 1)], vec![int(1), int(-kl - nl), int(-tl)])
            .eval(&int(1))?;
    Ok(c_k0(two_l, k, n) * sign * pochhammer(&int(-tl), j) * pochhammer(&int(-kl - nl), j)
        / (factorial(j) * pochhammer(&int(tl + 2), j))
        * f)
}

/// `(c_{k0}(n), …, c_{k,2ℓ}(n))` from the three-term recurrence in the
/// second index, started at the closed form of `c_{k0}(n)`.
pub fn c_recurrence(two_l: usize, k: usize, n: usize) -> Result<Vec<Rational>> {
    if k > two_l {
        return Err(Error::Precondition(format!("k = {k} out of range for 2l = {two_l}")));
    }
    let (tl, kl, nl) = (two_l as i64, k as i64, n as i64);
    let l = q(tl, 2);
    let mu = int(-2 * nl) * (&l - int(kl)) + int((tl + 2) * (kl - tl));
    let mut c = vec![c_k0(two_l, k, n)];
    let mut prev = Rational::zero();
    for i in 0..two_l as i64 {
        let cur = c[i as usize].clone();
        let diag = int(i * (i + 1)) - int(4) * &l * (&l + int(1));
        let below = int((i + kl + nl + 1) * (i - kl - nl - 1) * (tl - i + 1)) / int(2 * i + 1);
        let above = int((i + 1) * (i + 1) * (tl + i + 2)) / int(2 * i + 1);
        let next = ((&mu - diag) * &cur + below * &prev) / above;
        prev = cur;
        c.push(next);
    }
    Ok(c)
}

/// `(R_n M)_{kj} = c_{kj}(n) ₂F₁(j-k-n, n+k+j+2; j+3/2; u)`, zero for
/// `j > k+n`.
pub fn script_r_factorization_check(two_l: usize, n: usize) -> Result<bool> {
    let r = script_r(two_l, n);
    for k in 0..=two_l {
        for j in 0..=two_l {
            let expect = if j > k + n {
                Poly::zero()
            } else {
                let (kl, jl, nl) = (k as i64, j as i64, n as i64);
                HypSeries::new(vec![int(jl - kl - nl), int(nl + kl + jl + 2)], vec![q(2 * jl + 3, 2)])
                    .poly()?
                    .scale(&c_closed(two_l, k, j, n)?)
            };
            if r[(k, j)] != expect {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `(P_n L)_{kj} = (-2)^n c_{kj}(n) (n+k-j)!/(2j+2)_{n+k-j} C^{(j+1)}_{n+k-j}(x)`.
pub fn script_p_gegenbauer_check(two_l: usize, n: usize) -> Result<bool> {
    let pl = &monic_p(two_l, n) * &lower_l(two_l);
    let front = int(-2).pow(n as i32);
    for k in 0..=two_l {
        for j in 0..=two_l {
            let expect = if j > k + n {
                Poly::zero()
            } else {
                let d = n + k - j;
                let s = &front * c_closed(two_l, k, j, n)? * factorial(d) / pochhammer(&int(2 * j as i64 + 2), d);
                gegenbauer(&int(j as i64 + 1), d)?.scale(&s)
            };
            if pl[(k, j)] != expect {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Orthogonality of the coefficients `c_{kj}(n)`. With `l = n + k - m`,
///
/// ```text
/// Σ_j c_{kj}(n) c_{lj}(m) w_j · π/2 = δ_{nm} (H_n)_{kk} 2^{-2n},
/// w_j = (j!)² (2j+1) (2ℓ+j+1)! (2ℓ-j)! (n+k-j)! / ((n+k+j+1)! (n+k+1) ((2ℓ)!)²),
/// ```
///
/// and the same statement normalized to Racah polynomials,
/// `Σ_j (2j+1) (-2ℓ)_j (-n-k)_j / ((2ℓ+2)_j (n+k+2)_j) R_k(j) R_l(j) = δ_{nm} (2ℓ+1)(n+k+1)/(2ℓ+1+n-k)`
/// with `R_i(j) = R_i(λ(j); -2ℓ-1, -k-n-1, 0, 0)`. Pairs with `l` outside
/// `0..=2ℓ` hold vacuously.
pub fn c_orthogonality_check(two_l: usize, n: usize, m: usize, k: usize) -> Result<bool> {
    if k > two_l || n + k < m || n + k - m > two_l {
        return Ok(true);
    }
    let l = n + k - m;
    let tl = two_l as i64;
    let nk = n + k;
    let mut s = Rational::zero();
    let mut s_racah = Rational::zero();
    let a = int(-tl - 1);
    let b = int(-(nk as i64) - 1);
    for j in 0..=two_l.min(nk) {
        let wj = factorial(j).pow(2)
            * int(2 * j as i64 + 1)
            * factorial(two_l + j + 1)
            * factorial(two_l - j)
            * factorial(nk - j)
            / (factorial(nk + j + 1) * int(nk as i64 + 1) * factorial(two_l).pow(2));
        s += c_closed(two_l, k, j, n)? * c_closed(two_l, l, j, m)? * wj;
        let jl = j as i64;
        let rw = int(2 * jl + 1) * pochhammer(&int(-tl), j) * pochhammer(&int(-(nk as i64)), j)
            / (pochhammer(&int(tl + 2), j) * pochhammer(&int(nk as i64 + 2), j));
        s_racah += rw
            * racah(k, j, &a, &b, &Rational::zero(), &Rational::zero())?
            * racah(l, j, &a, &b, &Rational::zero(), &Rational::zero())?;
    }
    let (want, want_racah) = if n == m {
        let h = squared_norm_h(two_l, n)[(k, k)].coeff().clone();
        (h * int(2) / int(4).pow(n as i32), int((tl + 1) * (nk as i64 + 1)) / int(tl + 1 + n as i64 - k as i64))
    } else {
        (Rational::zero(), Rational::zero())
    };
    Ok(s == want && s_racah == want_racah)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::monic_p;
    use crate::special::chebyshev_u;

    #[test]
    fn operator_examples() {
        let d0 = build_dtilde(0);
        assert_eq!(d0.coeff(0)[(0, 0)], Poly::zero());
        assert_eq!(d0.coeff(1)[(0, 0)], Poly::from_ints(&[0, -3]));
        assert_eq!(d0.coeff(2)[(0, 0)], Poly::from_ints(&[1, 0, -1]));
        let e1 = build_etilde(1).unwrap();
        assert_eq!(e1.coeff(0), RatGrid::diagonal(vec![q(3, 2), int(0)]).to_matpoly());
        assert_eq!(build_dtilde(3).coeff(1)[(0, 1)], Poly::constant(int(3)));
        assert!(build_etilde(0).is_err());
        let dd = build_d(0);
        assert_eq!(dd.coeff(1)[(0, 0)], Poly::new(vec![q(3, 2), int(-3)]));
        assert_eq!(dd.coeff(2)[(0, 0)], Poly::from_ints(&[0, 1, -1]));
        // R_0·D = -V = Λ_0(D)
        for tl in 0..4 {
            let id = MatPoly::identity(tl + 1);
            assert_eq!(apply_right(&id, &build_d(tl)).unwrap(), lambda_d(tl, 0).to_matpoly());
        }
        assert!(combine_d_alpha(0, &q(1, 3)).is_err());
    }

    #[test]
    fn d_alpha_first_order_coefficient() {
        use crate::hypergeometric::structure_matrices;
        let a = q(2, 5);
        let t = structure_matrices(3, &a).unwrap();
        assert_eq!(combine_d_alpha(3, &a).unwrap().coeff(1), affine(&t.c, &-&t.u));
        assert_eq!(combine_d_alpha(3, &a).unwrap().coeff(0), (-&t.v).to_matpoly());
    }

    #[test]
    fn x_and_u_operators_agree() {
        for tl in 0..4 {
            assert_eq!(build_dtilde(tl).to_u_domain(), build_d(tl));
        }
        for tl in 1..4 {
            assert_eq!(build_etilde(tl).unwrap().to_u_domain(), build_e(tl).unwrap().scale(&q(-1, 2)));
        }
    }

    #[test]
    fn compose_rules() {
        let d = build_dtilde(2);
        let id = MatDiffOp::identity(3);
        assert_eq!(compose(&d, &id).unwrap(), d);
        assert_eq!(compose(&id, &d).unwrap(), d);
        let e = build_etilde(2).unwrap();
        let ee = compose(&e, &e).unwrap();
        assert_eq!(ee.order(), 2);
        let p = monic_p(2, 3);
        let lhs = apply_right(&p, &ee).unwrap();
        let rhs = apply_right(&apply_right(&p, &e).unwrap(), &e).unwrap();
        assert_eq!(lhs, rhs);
        let de = compose(&d, &e).unwrap();
        let x5 = Grid::from_fn(3, 3, |i, j| Poly::from_ints(&[i as i64, 1, j as i64, 0, 2, -1]));
        assert_eq!(apply_right(&x5, &de).unwrap(), apply_right(&apply_right(&x5, &d).unwrap(), &e).unwrap());
    }

    #[test]
    fn eigen_and_commute() {
        for tl in 0..=4 {
            assert!(eigen_check(tl, 5).unwrap(), "2l={tl}");
        }
        for tl in 1..=3 {
            assert!(commute_check(tl).unwrap());
            assert_eq!(build_dtilde(tl).flip(), build_dtilde(tl));
        }
        // scalar: U_2·D̃ = -8 U_2
        let u2 = Grid::from_rows(vec![vec![chebyshev_u(2)]]);
        assert_eq!(apply_right(&u2, &build_dtilde(0)).unwrap(), u2.scale_poly(&Poly::constant(int(-8))));
    }

    #[test]
    fn symmetry() {
        assert!(symmetry_check(1, &build_dtilde(1), 3).unwrap());
        assert!(symmetry_check(1, &build_etilde(1).unwrap(), 3).unwrap());
        assert!(symmetry_check(2, &build_dtilde(2), 3).unwrap());
        assert!(symmetry_check(2, &build_etilde(2).unwrap(), 3).unwrap());
        let mut broken = build_dtilde(1).coeffs().to_vec();
        broken[0][(1, 1)] = Poly::constant(int(5));
        assert!(!symmetry_check(1, &MatDiffOp::new(broken).unwrap(), 3).unwrap());
    }

    #[test]
    fn decoupling() {
        for tl in 1..=3 {
            assert!(decouple_check(tl).unwrap(), "2l={tl}");
            for n in 0..=4 {
                assert!(script_r_eigen_check(tl, n).unwrap(), "2l={tl} n={n}");
            }
        }
        let id = MatDiffOp::identity(3);
        assert_eq!(conjugate_by_m(2, &id).unwrap(), id);
        let e = script_d_expected(3);
        assert_eq!(e.coeff(0)[(1, 1)], Poly::constant(int(2 * 6)));
        assert_eq!(e.coeff(1)[(2, 2)], Poly::new(vec![q(7, 2), int(-7)]));
        let s = script_e_expected(2).unwrap();
        assert_eq!(s.coeff(0)[(1, 1)], Poly::constant(q(2 - 8, 2)));
    }

    #[test]
    fn c_values() {
        assert_eq!(c_closed(1, 0, 0, 0).unwrap(), int(1));
        assert_eq!(c_closed(1, 0, 0, 1).unwrap(), q(-3, 8));
        for tl in 0..=4 {
            for k in 0..=tl {
                for j in 0..=tl {
                    assert_eq!(c_closed(tl, k, j, 0).unwrap(), binomial(k as i64, j as i64));
                }
                for n in 0..=4 {
                    let rec = c_recurrence(tl, k, n).unwrap();
                    let closed: Vec<Rational> = (0..=tl).map(|j| c_closed(tl, k, j, n).unwrap()).collect();
                    assert_eq!(rec, closed, "2l={tl} k={k} n={n}");
                    let sign = if n.is_multiple_of(2) { int(1) } else { int(-1) };
                    assert!((c_k0(tl, k, n) * sign) > Rational::zero());
                    let r0 = script_r(tl, n).eval(&Rational::zero());
                    for (j, c) in closed.iter().enumerate() {
                        assert_eq!(&r0[(k, j)], c);
                    }
                }
            }
        }
        let r = script_r(1, 1);
        assert_eq!(r[(0, 0)], Poly::new(vec![q(-3, 8), q(3, 4)]));
    }

    #[test]
    fn racah_gegenbauer_forms() {
        for tl in 0..=4 {
            for n in 0..=4 {
                assert!(script_r_factorization_check(tl, n).unwrap(), "R 2l={tl} n={n}");
                assert!(script_p_gegenbauer_check(tl, n).unwrap(), "P 2l={tl} n={n}");
            }
        }
        assert_eq!(script_r(2, 0), m_matrix(2));
    }

    #[test]
    fn c_orthogonality() {
        for tl in 0..=4 {
            for n in 0..=4 {
                for m in 0..=4 {
                    for k in 0..=tl {
                        assert!(c_orthogonality_check(tl, n, m, k).unwrap(), "2l={tl} n={n} m={m} k={k}");
                    }
                }
            }
        }
    }

    #[test]
    fn n_lambda_examples() {
        let nl = n_lambda(1, &int(0)).unwrap();
        // T₀ = diag(3, 0), ½T₁¹ = diag(3/2, 5/2), S₁(0) = [[0, -1/2], [0, 0]],
        // S₀(0) = diag(-3, -1) plus (1,0) entry 1·(2+1)/(1·1) = 3.
        let expect = Grid::from_rows(vec![vec![int(-3), int(1)], vec![int(3), int(-1)]]);
        assert_eq!(nl, expect);
    }
}
