//! Rows of `R_n` as Tirao's matrix hypergeometric functions.
//!
//! Row `i` of `R_n` solves
//!
//! ```text
//! u(1-u) p'' + p' (C_α - u U_α) - p (V_α + λ) = 0,    λ = λ_i^α(n),
//! ```
//!
//! and is recovered from the matrix Pochhammer brackets
//! `[C,U,V]_{k+1} = (C+k)^{-1}(k² + k(U-1) + V)[C,U,V]_k`.
//!
//! The construction needs the eigenvalues `λ_j^α(m)` of different degrees
//! to stay apart. That holds for every irrational `α`; here `α` is
//! rational, so [`brackets_regular`] scans the finite range actually used.
//! [`degeneracy_check`] is the stricter test that no two eigenvalues agree
//! at all.

use num_traits::Zero;

use crate::exact::{factorial, int, q, Grid, Poly, RatGrid, Rational};
use crate::special::krawtchouk;
use crate::{Error, Result};

/// Default `α` values, tried in order by [`choose_alpha`].
pub const ALPHA_LADDER: [(i64, i64); 4] = [(1, 3), (2, 5), (5, 7), (7, 11)];

/// `C_α = C + αB₀`, `U_α = U - αB₁`, `V_α = V - αA₀`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureTriple {
    pub c: RatGrid,
    pub u: RatGrid,
    pub v: RatGrid,
    pub alpha: Rational,
    pub two_l: usize,
}

impl StructureTriple {
    /// The triple `(Cᵗ, Uᵗ, Vᵗ)` used for the row equation.
    pub fn transpose(&self) -> StructureTriple {
        StructureTriple {
            c: self.c.transpose(),
            u: self.u.transpose(),
            v: self.v.transpose(),
            alpha: self.alpha.clone(),
            two_l: self.two_l,
        }
    }
}

fn check_alpha(two_l: usize, alpha: &Rational) -> Result<()> {
    if two_l == 0 && !alpha.is_zero() {
        return Err(Error::Degenerate {
            alpha: alpha.to_string(),
            reason: "the first order operator does not exist for 2l = 0".into(),
        });
    }
    Ok(())
}

/// Tridiagonal matrix with the given sub-, main and superdiagonal entry
/// functions of the row index.
fn tridiag(
    size: usize,
    sub: impl Fn(i64) -> Rational,
    main: impl Fn(i64) -> Rational,
    sup: impl Fn(i64) -> Rational,
) -> RatGrid {
    Grid::from_fn(size, size, |r, c| {
        let i = r as i64;
        if r == c {
            main(i)
        } else if c + 1 == r {
            sub(i)
        } else if r + 1 == c {
            sup(i)
        } else {
            Rational::zero()
        }
    })
}

/// `C`, `U`, `V` of the second order operator `D`.
pub(crate) fn cuv(two_l: usize) -> (RatGrid, RatGrid, RatGrid) {
    let tl = two_l as i64;
    let size = two_l + 1;
    let c = tridiag(size, |i| q(-i, 2), |_| q(tl + 3, 2), |i| q(-(tl - i), 2));
    let u = RatGrid::identity(size).scale(&int(tl + 3));
    let v = RatGrid::diagonal((0..=tl).map(|i| int(-i * (tl - i))).collect());
    (c, u, v)
}

/// `A₀`, `B₀`, `B₁` of the first order operator `E`; requires `2ℓ ≥ 1`.
pub(crate) fn a0_b0_b1(two_l: usize) -> (RatGrid, RatGrid, RatGrid) {
    let tl = two_l as i64;
    let size = two_l + 1;
    let a0 = RatGrid::diagonal((0..=tl).map(|i| int((tl + 2) * (i - tl)) / int(tl)).collect());
    let b0 = tridiag(size, |i| q(i, 2 * tl), |i| q(tl - 2 * i, 2 * tl), |i| q(-(tl - i), 2 * tl));
    let b1 = RatGrid::diagonal((0..=tl).map(|i| q(-(tl - 2 * i), tl)).collect());
    (a0, b0, b1)
}

/// The structure triple of `D + αE`.
pub fn structure_matrices(two_l: usize, alpha: &Rational) -> Result<StructureTriple> {
    check_alpha(two_l, alpha)?;
    let (mut c, mut u, mut v) = cuv(two_l);
    if !alpha.is_zero() {
        let (a0, b0, b1) = a0_b0_b1(two_l);
        c = &c + &b0.scale(alpha);
        u = &u - &b1.scale(alpha);
        v = &v - &a0.scale(alpha);
    }
    Ok(StructureTriple { c, u, v, alpha: alpha.clone(), two_l })
}

/// Brackets `[C, U, V+λ]_0 … [C, U, V+λ]_N`.
#[derive(Clone, Debug, PartialEq)]
pub struct BracketSeq {
    pub triple: StructureTriple,
    pub shift: Rational,
    pub brackets: Vec<RatGrid>,
}

/// `k² + k(U-1) + V + λ`.
fn bracket_factor(t: &StructureTriple, lambda: &Rational, k: usize) -> RatGrid {
    let size = t.c.rows();
    let kk = int(k as i64);
    let id = RatGrid::identity(size);
    let mut m = &t.u - &id;
    m = &m.scale(&kk) + &t.v;
    &m + &id.scale(&(&kk * &kk + lambda))
}

/// Build the brackets of `triple` with `V` shifted by `lambda`, up to
/// index `n`.
pub fn bracket_seq(triple: &StructureTriple, lambda: &Rational, n: usize) -> Result<BracketSeq> {
    let size = triple.c.rows();
    let id = RatGrid::identity(size);
    let mut brackets = vec![id.clone()];
    for k in 0..n {
        let inv = (&triple.c + &id.scale(&int(k as i64))).inverse().ok_or(Error::SingularBracket { index: k })?;
        let next = &(&inv * &bracket_factor(triple, lambda, k)) * &brackets[k];
        brackets.push(next);
    }
    Ok(BracketSeq { triple: triple.clone(), shift: lambda.clone(), brackets })
}

/// `λ_j^α(n) = Λ_n(D)_{jj} + α Λ_n(E)_{jj}`.
pub fn eigenvalue_lambda(two_l: usize, alpha: &Rational, j: usize, n: usize) -> Result<Rational> {
    check_alpha(two_l, alpha)?;
    let (d, e) = lambda_parts(two_l, j, n);
    Ok(d + alpha * e)
}

/// Whether the `λ_j^α(n)` are pairwise distinct on `{0..2ℓ} × {0..n_max}`.
pub fn degeneracy_check(two_l: usize, alpha: &Rational, n_max: usize) -> bool {
    let mut seen = Vec::new();
    for n in 0..=n_max {
        for j in 0..=two_l {
            match eigenvalue_lambda(two_l, alpha, j, n) {
                Ok(l) => seen.push(l),
                Err(_) => return false,
            }
        }
    }
    seen.sort();
    seen.windows(2).all(|w| w[0] != w[1])
}

/// `(Λ_n(D)_{jj}, Λ_n(E)_{jj})`, so that `λ_j^α(n)` is `d + α e`.
fn lambda_parts(two_l: usize, j: usize, n: usize) -> (Rational, Rational) {
    let (tl, nl, jl) = (two_l as i64, n as i64, j as i64);
    let d = int(-nl * (nl - 1) - nl * (tl + 3) + jl * (tl - jl));
    if two_l == 0 {
        return (d, Rational::zero());
    }
    // -n(ℓ-j)/ℓ + (2ℓ+2)(j-2ℓ)/(2ℓ)
    let e = int(-nl * (tl - 2 * jl)) / int(tl) + int((tl + 2) * (jl - tl)) / int(tl);
    (d, e)
}

/// The `α` with `λ_j^α(n) = λ_i^α(m)`, if there is exactly one.
pub fn collision_alpha(two_l: usize, j: usize, n: usize, i: usize, m: usize) -> Option<Rational> {
    let (d1, e1) = lambda_parts(two_l, j, n);
    let (d2, e2) = lambda_parts(two_l, i, m);
    if e1 == e2 {
        return None;
    }
    Some((d2 - d1) / (e1 - e2))
}

/// Whether every bracket `[Cᵗ, Uᵗ, Vᵗ + λ_i^α(n)]_k`, `k <= n`, is
/// regular, for all rows `i` and degrees up to `n_max`. This is what the
/// row construction needs: `λ_i^α(n)` must avoid every `λ_j^α(k)` with
/// `k < n`. Collisions inside one degree are harmless.
pub fn brackets_regular(two_l: usize, alpha: &Rational, n_max: usize) -> bool {
    let Ok(_) = check_alpha(two_l, alpha) else {
        return false;
    };
    let lam = |j: usize, n: usize| {
        let (d, e) = lambda_parts(two_l, j, n);
        d + alpha * e
    };
    (0..=n_max).all(|n| {
        (0..=two_l).all(|i| {
            let l = lam(i, n);
            (0..n).all(|k| (0..=two_l).all(|j| lam(j, k) != l))
        })
    })
}

/// First `α` of [`ALPHA_LADDER`] that passes [`degeneracy_check`]; `0` for
/// `2ℓ = 0`, where the eigenvalues are already distinct.
pub fn choose_alpha(two_l: usize, n_max: usize) -> Result<Rational> {
    if two_l == 0 {
        return Ok(Rational::zero());
    }
    ALPHA_LADDER.iter().map(|&(a, b)| q(a, b)).find(|a| degeneracy_check(two_l, a, n_max)).ok_or_else(|| {
        Error::Degenerate {
            alpha: "ladder".into(),
            reason: format!("no default alpha separates the spectrum up to degree {n_max}"),
        }
    })
}

/// Row `i` of `R_n` as the terminating matrix hypergeometric series
/// `Σ_k u^k/k! [Cᵗ, Uᵗ, Vᵗ+λ]_k · n! [Cᵗ, Uᵗ, Vᵗ+λ]_n^{-1} e_i`,
/// `λ = λ_i^α(n)`.
pub fn row_via_2h1(two_l: usize, alpha: &Rational, n: usize, i: usize) -> Result<Vec<Poly>> {
    if i > two_l {
        return Err(Error::Precondition(format!("row {i} out of range for 2l = {two_l}")));
    }
    check_alpha(two_l, alpha)?;
    if !brackets_regular(two_l, alpha, n) {
        return Err(Error::Degenerate {
            alpha: alpha.to_string(),
            reason: format!("an eigenvalue of degree {n} repeats one of a lower degree"),
        });
    }
    let size = two_l + 1;
    let triple = structure_matrices(two_l, alpha)?.transpose();
    let lambda = eigenvalue_lambda(two_l, alpha, i, n)?;
    let seq = bracket_seq(&triple, &lambda, n)?;
    let inv = seq.brackets[n].inverse().ok_or(Error::SingularBracket { index: n })?;
    let f0: Vec<Rational> = (0..size).map(|r| factorial(n) * &inv[(r, i)]).collect();
    let mut row = vec![vec![Rational::zero(); n + 1]; size];
    for (k, b) in seq.brackets.iter().enumerate() {
        let kf = factorial(k);
        for (j, slot) in row.iter_mut().enumerate() {
            let mut s = Rational::zero();
            for (r, f) in f0.iter().enumerate() {
                s += &b[(j, r)] * f;
            }
            slot[k] = s / &kf;
        }
    }
    Ok(row.into_iter().map(Poly::new).collect())
}

/// Checks that `C_α` has the eigenvalues `3/2 + x`, `x = 0..2ℓ`, with
/// Krawtchouk eigenvectors `v_m = K_m(x; (2ℓ+α)/(4ℓ), 2ℓ)`. For `α = ±2ℓ`
/// the matrix is triangular and the spectrum is read off the diagonal.
pub fn krawtchouk_eigencheck(two_l: usize, alpha: &Rational) -> Result<bool> {
    if two_l == 0 {
        return Err(Error::Precondition("needs 2l >= 1".into()));
    }
    let t = structure_matrices(two_l, alpha)?;
    let tl = int(two_l as i64);
    let size = two_l + 1;
    if alpha == &tl || alpha == &-&tl {
        let mut diag: Vec<Rational> = (0..size).map(|i| t.c[(i, i)].clone()).collect();
        diag.sort();
        let expect: Vec<Rational> = (0..size).map(|x| q(2 * x as i64 + 3, 2)).collect();
        return Ok(diag == expect);
    }
    let p = (&tl + alpha) / (int(2) * &tl);
    for x in 0..size {
        let v = (0..size).map(|m| krawtchouk(m, x, &p, two_l)).collect::<Result<Vec<_>>>()?;
        let ev = q(3, 2) + int(x as i64);
        for r in 0..size {
            let mut s = Rational::zero();
            for (c, vc) in v.iter().enumerate() {
                s += &t.c[(r, c)] * vc;
            }
            if s != &ev * &v[r] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether `M_n^α(λ) = n² + n(U_α-1) + V_α + λ` is singular.
pub fn m_singular(two_l: usize, alpha: &Rational, n: usize, lambda: &Rational) -> Result<bool> {
    let t = structure_matrices(two_l, alpha)?;
    let m = bracket_factor(&t, lambda, n);
    Ok((0..=two_l).any(|i| m[(i, i)].is_zero()))
}
