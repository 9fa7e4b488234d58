//! Operators coming from the group `SU(2) × SU(2)`.
//!
//! Rows and columns are labelled by `p ∈ {-ℓ, …, ℓ}`, stored at index
//! `p + ℓ`. With that order no further relabeling is needed to compare with
//! `D̃` and `Ẽ`.
//!
//! `Φ₀(w)` has Laurent polynomial entries in `w`, where `a(w)` is the torus
//! element and `z = ½(w² + w⁻²)`.

use num_traits::Zero;

use super::{build_dtilde, build_etilde, MatDiffOp};
use crate::exact::{factorial, int, q, Grid, LaurentGrid, LaurentPoly, MatPoly, Poly, RatGrid, Rational, Ring};
use crate::Result;

/// `p = i - ℓ` for index `i`.
fn label(two_l: usize, i: usize) -> Rational {
    q(2 * i as i64 - two_l as i64, 2)
}

/// The matrix coefficients of `Φ₀(a(w))`,
///
/// ```text
/// Φ₀_{pj} = (ℓ-j)!(ℓ+j)!(ℓ-p)!(ℓ+p)!/(2ℓ)! Σ_r w^{4r-2ℓ+2p+2j} / (r!(ℓ-p-r)!(ℓ-j-r)!(p+j+r)!).
/// ```
pub fn phi0(two_l: usize) -> LaurentGrid {
    let size = two_l + 1;
    let tl = two_l as i64;
    Grid::from_fn(size, size, |a, b| {
        let (al, bl) = (a as i64, b as i64);
        let pre = factorial(two_l - b) * factorial(b) * factorial(two_l - a) * factorial(a) / factorial(two_l);
        let lo = (tl - al - bl).max(0);
        let hi = (tl - al).min(tl - bl);
        let mut acc = LaurentPoly::zero();
        for r in lo..=hi {
            let c = &pre
                / (factorial(r as usize)
                    * factorial((tl - al - r) as usize)
                    * factorial((tl - bl - r) as usize)
                    * factorial((al + bl - tl + r) as usize));
            acc = acc.plus(&LaurentPoly::real_monomial(c, 4 * r + 2 * al + 2 * bl - 3 * tl));
        }
        acc
    })
}

/// `S` with `-(ℓ-j)` at `p = j+1` and `-(ℓ+j)` at `p = j-1`.
pub fn s_matrix(two_l: usize) -> RatGrid {
    let size = two_l + 1;
    let l = q(two_l as i64, 2);
    Grid::from_fn(size, size, |a, b| {
        let j = label(two_l, b);
        if a == b + 1 {
            -(&l - &j)
        } else if b == a + 1 {
            -(&l + &j)
        } else {
            Rational::zero()
        }
    })
}

/// `diag(-2p)`.
pub fn u_diag(two_l: usize) -> RatGrid {
    RatGrid::diagonal((0..=two_l).map(|i| -label(two_l, i) * int(2)).collect())
}

/// `(2j-2ℓ)` at `p = j+1` and `(2j+2ℓ)` at `p = j-1`.
pub fn u_lu(two_l: usize) -> RatGrid {
    let size = two_l + 1;
    let tl = int(two_l as i64);
    Grid::from_fn(size, size, |a, b| {
        let j2 = label(two_l, b) * int(2);
        if a == b + 1 {
            &j2 - &tl
        } else if b == a + 1 {
            &j2 + &tl
        } else {
            Rational::zero()
        }
    })
}

/// The Casimir operator restricted to `z`: `Ω = ¼(z²-1) d² + ¼ d·((2ℓ+3)z + S) + Λ₀`,
/// `Λ₀ = diag((p² + ℓ(ℓ+2))/4)`.
pub fn omega(two_l: usize) -> MatDiffOp {
    let size = two_l + 1;
    let tl = two_l as i64;
    let l = q(tl, 2);
    let lam0 = RatGrid::diagonal((0..size).map(|i| (label(two_l, i).pow(2) + &l * (&l + int(2))) / int(4)).collect());
    let first = &s_matrix(two_l).scale(&q(1, 4)).to_matpoly()
        + &MatPoly::identity(size).scale_poly(&Poly::monomial(q(tl + 3, 4), 1));
    let second = MatPoly::identity(size).scale_poly(&Poly::new(vec![q(-1, 4), int(0), q(1, 4)]));
    MatDiffOp::trimmed(vec![lam0.to_matpoly(), first, second])
}

/// The first order operator `Δ = ⅛ d·(2zU_diag + U_lu) + Γ₀`,
/// `Γ₀ = diag(-½p(ℓ+1))`.
pub fn delta(two_l: usize) -> MatDiffOp {
    let size = two_l + 1;
    let l1 = q(two_l as i64 + 2, 2);
    let gam0 = RatGrid::diagonal((0..size).map(|i| -label(two_l, i) * &l1 / int(2)).collect());
    let first =
        &u_lu(two_l).scale(&q(1, 8)).to_matpoly() + &u_diag(two_l).scale(&q(1, 4)).to_matpoly().scale_poly(&Poly::x());
    MatDiffOp::trimmed(vec![gam0.to_matpoly(), first])
}

/// `-4Ωᵗ + 2(ℓ²+ℓ) = D̃` and `-(2/ℓ)Δᵗ - (ℓ+1) = -2Ẽ`, coefficientwise.
pub fn group_operator_relation_check(two_l: usize) -> Result<bool> {
    let l = q(two_l as i64, 2);
    let d = omega(two_l).transpose().scale(&int(-4)).shift(&(int(2) * (&l * &l + &l)));
    if d != build_dtilde(two_l) {
        return Ok(false);
    }
    if two_l == 0 {
        return Ok(true);
    }
    let e = delta(two_l).transpose().scale(&(int(-2) / &l)).shift(&-(&l + int(1)));
    Ok(e == build_etilde(two_l)?.scale(&int(-2)))
}

fn rat_laurent(c: Rational, e: i64) -> LaurentPoly {
    LaurentPoly::real_monomial(c, e)
}

fn grid_to_laurent(g: &RatGrid, e: i64) -> LaurentGrid {
    g.map(|c| rat_laurent(c.clone(), e))
}

/// `½w(w² - w⁻²) dΦ₀/dw = Φ₀ σ(w)` with `σ(w) = ℓ(w² + w⁻²) + S`, and
/// `(w⁴-1) b₁(w) Φ₀ = Φ₀ (w⁴-1) υ(w)` with `b₁(w) = -(w/8) diag(2p)` and
/// `(w⁴-1) υ(w) = ⅛(w(1+w⁴) U_diag + w³ U_lu)`.
pub fn phi0_identity_checks(two_l: usize) -> bool {
    let size = two_l + 1;
    let f = phi0(two_l);
    let l = q(two_l as i64, 2);
    let half_w = rat_laurent(q(1, 2), 3).plus(&rat_laurent(q(-1, 2), -1));
    let lhs = f.map(|e| half_w.times(&e.derivative()));
    let sigma = &grid_to_laurent(&RatGrid::identity(size).scale(&l), 2)
        + &(&grid_to_laurent(&RatGrid::identity(size).scale(&l), -2) + &grid_to_laurent(&s_matrix(two_l), 0));
    if lhs != &f * &sigma {
        return false;
    }
    let theta = RatGrid::diagonal((0..size).map(|i| label(two_l, i) * int(2)).collect());
    let w4m1 = rat_laurent(int(1), 4).plus(&rat_laurent(int(-1), 0));
    let b1 = grid_to_laurent(&theta.scale(&q(-1, 8)), 1).map(|e| e.times(&w4m1));
    let ud = u_diag(two_l).scale(&q(1, 8));
    let ups =
        &(&grid_to_laurent(&ud, 1) + &grid_to_laurent(&ud, 5)) + &grid_to_laurent(&u_lu(two_l).scale(&q(1, 8)), 3);
    &b1 * &f == &f * &ups
}

/// Determinant of a `2 × 2` Laurent grid, used for small sanity checks.
pub fn det2(g: &LaurentGrid) -> Option<LaurentPoly> {
    if g.rows() != 2 || g.cols() != 2 {
        return None;
    }
    Some(g[(0, 0)].times(&g[(1, 1)]).minus(&g[(0, 1)].times(&g[(1, 0)])))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi0_examples() {
        let f = phi0(1);
        assert_eq!(f[(0, 0)], rat_laurent(int(1), 1));
        assert_eq!(f[(0, 1)], rat_laurent(int(1), -1));
        assert_eq!(f[(1, 0)], rat_laurent(int(1), -1));
        assert_eq!(f[(1, 1)], rat_laurent(int(1), 1));
        assert_eq!(det2(&f).unwrap(), rat_laurent(int(1), 2).plus(&rat_laurent(int(-1), -2)));
        assert_eq!(phi0(0)[(0, 0)], LaurentPoly::one());
    }

    #[test]
    fn relations() {
        for tl in 0..=4 {
            assert!(group_operator_relation_check(tl).unwrap(), "2l={tl}");
        }
        for tl in 0..=4 {
            assert!(phi0_identity_checks(tl), "2l={tl}");
        }
        let om = omega(2);
        assert_eq!(om.coeff(0)[(0, 0)], Poly::constant(q(1 + 3, 4)));
    }
}
