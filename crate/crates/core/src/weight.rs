//! The matrix weight `W(x) = √(1-x²) Ŵ(x)` on `[-1, 1]`, its LDU and UDL
//! factorizations, determinant, moments and the integral identities
//! behind them.
//!
//! Only the polynomial part `Ŵ` is ever stored; the common `√(1-x²)` is
//! tracked by the callers that integrate.

use num_traits::{One, Signed, Zero};

use crate::exact::{
    binomial, factorial, int, integrate_halfcircle, matpoly_det, q, GaussianRational, Grid, LaurentPoly, MatPoly,
    PiGrid, PiRational, Poly, RatGrid, Rational, Ring,
};
use crate::special::{
    chebyshev_u, gegenbauer, hahn_generating, pochhammer, poly_at_cos, racah, racah_integral_constant_over_pi,
};
use crate::{Error, Result};

fn sign(k: usize) -> Rational {
    if k.is_multiple_of(2) {
        int(1)
    } else {
        int(-1)
    }
}

/// `1 - x²`.
pub fn one_minus_x2() -> Poly {
    Poly::from_ints(&[1, 0, -1])
}

/// Coefficient `α_t(m, n)` of `U_{n+m-2t}` in `Ŵ_{nm}`, for `m <= n`.
pub fn alpha_coeff(two_l: usize, m: usize, n: usize, t: usize) -> Result<Rational> {
    if !(m <= n && n <= two_l && t <= m) {
        return Err(Error::Precondition(format!(
            "need t <= m <= n <= 2l, got t = {t}, m = {m}, n = {n}, 2l = {two_l}"
        )));
    }
    let (tl, nl) = (two_l as i64, n as i64);
    Ok(int(tl + 1) / int(nl + 1) * factorial(two_l - m) * factorial(m) / factorial(two_l)
        * sign(m - t)
        * pochhammer(&int(nl - tl), m - t)
        / pochhammer(&int(nl + 2), m - t)
        * pochhammer(&int(tl + 2 - t as i64), t)
        / factorial(t))
}

/// The polynomial part `Ŵ` of the weight, of size `2ℓ + 1`.
pub fn weight_poly(two_l: usize) -> MatPoly {
    let size = two_l + 1;
    let mut w = MatPoly::zeros(size, size);
    for n in 0..size {
        for m in 0..=n {
            let mut e = Poly::zero();
            for t in 0..=m {
                let a = alpha_coeff(two_l, m, n, t).expect("indices in range");
                if !a.is_zero() {
                    e = &e + &chebyshev_u(n + m - 2 * t).scale(&a);
                }
            }
            w[(m, n)] = e.clone();
            w[(n, m)] = e;
        }
    }
    w
}

/// `m! (2k+1)! / ((m+k+1)! k!)`, the scalar in front of `L_{mk}`.
fn l_scalar(m: usize, k: usize) -> Rational {
    factorial(m) * factorial(2 * k + 1) / (factorial(m + k + 1) * factorial(k))
}

/// The unipotent lower triangular factor `L`.
pub fn lower_l(two_l: usize) -> MatPoly {
    let size = two_l + 1;
    Grid::from_fn(size, size, |m, k| {
        if k > m {
            Poly::zero()
        } else {
            gegenbauer(&int(k as i64 + 1), m - k).expect("positive parameter").scale(&l_scalar(m, k))
        }
    })
}

/// `c_k(ℓ)`, the constant in the `k`-th diagonal entry `c_k (1-x²)^k` of `T`.
pub fn c_k(two_l: usize, k: usize) -> Rational {
    int(4).pow(k as i32) * factorial(k).pow(4) * int(2 * k as i64 + 1) / factorial(2 * k + 1).pow(2)
        * factorial(two_l + k + 1)
        * factorial(two_l - k)
        / factorial(two_l).pow(2)
}

/// Diagonal of `T` as pairs `(c_k, k)` meaning `c_k (1-x²)^k`.
pub fn diag_t(two_l: usize) -> Vec<(Rational, usize)> {
    (0..=two_l).map(|k| (c_k(two_l, k), k)).collect()
}

/// `T` as a polynomial matrix.
pub fn t_matpoly(two_l: usize) -> MatPoly {
    MatPoly::diagonal(diag_t(two_l).into_iter().map(|(c, k)| one_minus_x2().pow(k).scale(&c)).collect())
}

/// The closed form `β_k(m, n) = c_k L-scalar(m,k) L-scalar(n,k)`.
pub fn beta_closed(two_l: usize, m: usize, n: usize, k: usize) -> Rational {
    c_k(two_l, k) * l_scalar(m, k) * l_scalar(n, k)
}

/// `Ŵ = L T Lᵗ`.
pub fn verify_ldu(two_l: usize) -> bool {
    let l = lower_l(two_l);
    weight_poly(two_l) == &(&l * &t_matpoly(two_l)) * &l.transpose()
}

/// Result of [`det_weight`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DetWeight {
    /// `∏ c_k(ℓ)`.
    pub constant: Rational,
    /// Exponent `e` in `det W = constant · (1-x²)^e`; always `2(ℓ+½)²`.
    pub exponent: Rational,
    /// Whether the Bareiss determinant of `Ŵ` matched.
    pub confirmed: bool,
}

/// `det W(x) = ∏ c_k (1-x²)^{2(ℓ+½)²}`, confirmed against an exact
/// determinant of `Ŵ`. The `√(1-x²)` factors contribute `(2ℓ+1)/2` to the
/// exponent.
pub fn det_weight(two_l: usize) -> DetWeight {
    let constant = diag_t(two_l).into_iter().fold(Rational::one(), |acc, (c, _)| acc * c);
    let poly_power = two_l * (two_l + 1) / 2;
    let det = matpoly_det(&weight_poly(two_l)).expect("square");
    let confirmed = det == one_minus_x2().pow(poly_power).scale(&constant);
    let exponent = int(poly_power as i64) + q(two_l as i64 + 1, 2);
    DetWeight { constant, exponent, confirmed }
}

/// `Ŵ = (JLJ)(JTJ)(JLJ)ᵗ`.
pub fn udl_check(two_l: usize) -> bool {
    let j = MatPoly::flip(two_l + 1);
    let jlj = &(&j * &lower_l(two_l)) * &j;
    let jtj = &(&j * &t_matpoly(two_l)) * &j;
    weight_poly(two_l) == &(&jlj * &jtj) * &jlj.transpose()
}

/// Racah integral: `∫ (1-x²)^{k+½} C_{n-k}^{(k+1)} C_{m-k}^{(k+1)} U_{n+m-2t} dx`
/// against the closed form in `R_k(λ(t); 0,0,-n-1,-m-1)`. For `t > m` only
/// the vanishing of the integral is checked.
pub fn racah_integral_check(k: usize, t: usize, m: usize, n: usize) -> Result<bool> {
    if !(k <= m && m <= n && 2 * t <= n + m) {
        return Err(Error::Precondition(format!("need k <= m <= n and 2t <= n + m, got ({k}, {t}, {m}, {n})")));
    }
    let a = int(k as i64 + 1);
    let integrand =
        &(&one_minus_x2().pow(k) * &gegenbauer(&a, n - k)?) * &(&gegenbauer(&a, m - k)? * &chebyshev_u(n + m - 2 * t));
    let lhs = integrate_halfcircle(&integrand);
    if t > m {
        return Ok(lhs.is_zero());
    }
    let r = racah(k, t, &int(0), &int(0), &int(-(n as i64) - 1), &int(-(m as i64) - 1))?;
    Ok(lhs == PiRational(racah_integral_constant_over_pi(k, m, n) * r))
}

/// Fourier expansion of `Ŵ_{nm}(cos t)` in `e^{it}`, three ways: the
/// `k`-sum over Hahn generating functions, the quintuple binomial sum, and
/// direct substitution. The `k`-sum carries `(-1)^k`.
pub fn cg_fourier_check(two_l: usize, n: usize, m: usize) -> Result<bool> {
    if n > two_l || m > two_l {
        return Err(Error::Precondition(format!("need n, m <= 2l, got n = {n}, m = {m}, 2l = {two_l}")));
    }
    let mut lhs = LaurentPoly::zero();
    for k in 0..=n.min(m) {
        let kk = k as i64;
        let coef =
            sign(k) * int(2 * kk + 1) * pochhammer(&int(m as i64 - kk + 1), k) * pochhammer(&int(n as i64 - kk + 1), k)
                / (pochhammer(&int(m as i64 + 1), k + 1) * pochhammer(&int(n as i64 + 1), k + 1))
                * factorial(two_l + k + 1)
                * factorial(two_l - k)
                / factorial(two_l).pow(2);
        let term = hahn_generating(k, n).times(&hahn_generating(k, m));
        lhs = lhs.plus(&term.scale(&GaussianRational::real(coef)));
    }
    let (tl, nl, ml) = (two_l as i64, n as i64, m as i64);
    let mut rhs = LaurentPoly::zero();
    for j in 0..=tl {
        let bj = binomial(tl, j);
        for j1 in 0..=nl {
            let j2 = j - j1;
            if !(0..=tl - nl).contains(&j2) {
                continue;
            }
            for i1 in 0..=ml {
                let i2 = j - i1;
                if !(0..=tl - ml).contains(&i2) {
                    continue;
                }
                let c = binomial(nl, j1) * binomial(tl - nl, j2) / &bj * binomial(ml, i1) * binomial(tl - ml, i2) / &bj;
                let e = (nl - j1 + j2) - (ml - i1 + i2);
                rhs = rhs.plus(&LaurentPoly::real_monomial(c, e));
            }
        }
    }
    let direct = poly_at_cos(&weight_poly(two_l)[(n, m)]);
    Ok(lhs == rhs && rhs == direct)
}

/// `∫ (1-x)^p W(x) dx` by exact integration.
pub fn generalized_moment(two_l: usize, p: usize) -> PiGrid {
    let w = weight_poly(two_l);
    let f = Poly::from_ints(&[1, -1]).pow(p);
    w.map(|e| integrate_halfcircle(&(&f * e)))
}

/// `∫ (1-x)^p W(x) dx` by the closed single sum over `t`.
pub fn generalized_moment_closed(two_l: usize, p: usize) -> PiGrid {
    let size = two_l + 1;
    let tl = two_l as i64;
    let pl = p as i64;
    // 2^{p+2} Γ(p+3/2) Γ(3/2) / Γ(p+3), without its π.
    let front = int(2).pow(p as i32 + 2) * pochhammer(&q(1, 2), p + 1) / int(2) / factorial(p + 2);
    let entry = |m: usize, n: usize| {
        let nl = n as i64;
        let mut s = Rational::zero();
        for t in 0..=m {
            let d = n + m - 2 * t;
            s += sign(m - t) * pochhammer(&int(nl - tl), m - t) / pochhammer(&int(nl + 2), m - t)
                * pochhammer(&int(tl + 2 - t as i64), t)
                / factorial(t)
                * int(d as i64 + 1)
                * pochhammer(&int(-pl), d)
                / pochhammer(&int(pl + 3), d);
        }
        PiRational(&front * int(tl + 1) / int(nl + 1) * factorial(two_l - m) * factorial(m) / factorial(two_l) * s)
    };
    Grid::from_fn(size, size, |i, j| if i <= j { entry(i, j) } else { entry(j, i) })
}

/// Leading principal minors of `Ŵ(x₀)`, all positive when `Ŵ(x₀)` is
/// positive definite.
pub fn principal_minors(two_l: usize, x0: &Rational) -> Vec<Rational> {
    let w = weight_poly(two_l).eval(x0);
    (1..=two_l + 1)
        .map(|s| {
            let sub: RatGrid = Grid::from_fn(s, s, |i, j| w[(i, j)].clone());
            let mp = sub.to_matpoly();
            matpoly_det(&mp).expect("square").coeff(0)
        })
        .collect()
}

/// Whether `Ŵ(x₀)` is positive definite (Sylvester's criterion, exact).
pub fn positive_definite_at(two_l: usize, x0: &Rational) -> bool {
    principal_minors(two_l, x0).iter().all(|d| d.is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::beta_via_racah;

    fn px(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha_coeff(1, 0, 0, 0).unwrap(), int(2));
        assert_eq!(alpha_coeff(1, 1, 1, 0).unwrap(), int(0));
        assert_eq!(alpha_coeff(1, 1, 1, 1).unwrap(), int(2));
        assert!(alpha_coeff(1, 1, 0, 0).is_err());
        assert!(alpha_coeff(1, 1, 2, 0).is_err());
    }

    #[test]
    fn weight_examples() {
        let w1 = Grid::from_rows(vec![vec![px(&[2]), px(&[0, 2])], vec![px(&[0, 2]), px(&[2])]]);
        assert_eq!(weight_poly(1), w1);
        assert_eq!(weight_poly(0), MatPoly::identity(1));
    }

    #[test]
    fn weight_degrees() {
        for two_l in 0..=6 {
            let w = weight_poly(two_l);
            for n in 0..=two_l {
                for m in 0..=two_l {
                    if n + m <= two_l {
                        assert_eq!(w[(n, m)].degree(), Some(n + m));
                    }
                }
            }
        }
    }

    #[test]
    fn weight_symmetric_and_j_invariant() {
        for two_l in 0..=6 {
            let w = weight_poly(two_l);
            assert_eq!(w, w.transpose());
            let j = MatPoly::flip(two_l + 1);
            assert_eq!(&(&j * &w) * &j, w);
        }
    }

    #[test]
    fn weight_positive_definite_spot() {
        for two_l in 0..=6 {
            for x0 in [q(-9, 10), int(0), q(1, 2)] {
                assert!(positive_definite_at(two_l, &x0), "2l = {two_l}, x0 = {x0}");
            }
        }
    }

    #[test]
    fn lower_l_examples() {
        for two_l in 0..=5 {
            let l = lower_l(two_l);
            for i in 0..=two_l {
                assert_eq!(l[(i, i)], Poly::one());
                for j in i + 1..=two_l {
                    assert!(l[(i, j)].is_zero());
                }
            }
        }
        assert_eq!(lower_l(1)[(1, 0)], Poly::x());
    }

    #[test]
    fn diag_t_examples() {
        for two_l in 0..=6 {
            assert_eq!(c_k(two_l, 0), int(two_l as i64 + 1));
            assert!(diag_t(two_l).iter().all(|(c, _)| c.is_positive()));
        }
        assert_eq!(c_k(1, 1), int(2));
    }

    #[test]
    fn ldu_and_udl() {
        for two_l in 0..=4 {
            assert!(verify_ldu(two_l));
            assert!(udl_check(two_l));
        }
    }

    #[test]
    fn det_examples() {
        let d1 = det_weight(1);
        assert_eq!((d1.constant, d1.exponent, d1.confirmed), (int(4), int(2), true));
        let d0 = det_weight(0);
        assert_eq!((d0.constant, d0.exponent, d0.confirmed), (int(1), q(1, 2), true));
        let d2 = det_weight(2);
        assert_eq!(d2.exponent, q(9, 2));
        assert!(d2.confirmed);
    }

    #[test]
    fn racah_integral_examples() {
        assert!(racah_integral_check(0, 0, 0, 0).unwrap());
        assert!(racah_integral_check(1, 1, 1, 2).unwrap());
        assert!(racah_integral_check(0, 2, 1, 3).unwrap());
        assert!(racah_integral_check(0, 2, 1, 2).is_err());
        assert!(racah_integral_check(2, 0, 1, 2).is_err());
        // The t = m = n = k = 0 integral is π/2.
        assert_eq!(integrate_halfcircle(&Poly::one()), PiRational(q(1, 2)));
    }

    #[test]
    fn fourier_examples() {
        assert!(cg_fourier_check(0, 0, 0).unwrap());
        assert!(cg_fourier_check(1, 1, 0).unwrap());
        assert!(cg_fourier_check(2, 2, 2).unwrap());
        assert!(cg_fourier_check(1, 2, 0).is_err());
    }

    #[test]
    fn moment_examples() {
        let m1 = generalized_moment(1, 0);
        assert_eq!(m1[(0, 0)], PiRational(int(1)));
        assert_eq!(m1[(1, 1)], PiRational(int(1)));
        assert!(m1[(0, 1)].is_zero());
        assert_eq!(generalized_moment(0, 0)[(0, 0)], PiRational(q(1, 2)));
        // ∫ (1-x) 2x √(1-x²) dx = -2 · π/8
        assert_eq!(generalized_moment(1, 1)[(1, 0)], PiRational(q(-1, 4)));
    }

    #[test]
    fn moments_match_closed_form() {
        for two_l in 0..=3 {
            for p in 0..=4 {
                assert_eq!(generalized_moment(two_l, p), generalized_moment_closed(two_l, p));
            }
        }
    }

    #[test]
    fn zeroth_moment_is_h0() {
        for two_l in 0..=5usize {
            let m = generalized_moment(two_l, 0);
            for n in 0..=two_l {
                let want =
                    q(1, 2) * int((two_l as i64 + 1).pow(2)) / int((n as i64 + 1) * (two_l as i64 - n as i64 + 1));
                assert_eq!(m[(n, n)], PiRational(want));
            }
            assert!(m.is_diagonal_pi());
        }
    }

    #[test]
    fn beta_via_racah_matches_closed() {
        for two_l in 0..=4 {
            for n in 0..=two_l {
                for m in 0..=n {
                    for k in 0..=m {
                        assert_eq!(beta_via_racah(two_l, m, n, k).unwrap(), beta_closed(two_l, m, n, k));
                    }
                }
            }
        }
    }

    trait PiDiag {
        fn is_diagonal_pi(&self) -> bool;
    }

    impl PiDiag for PiGrid {
        fn is_diagonal_pi(&self) -> bool {
            (0..self.rows()).all(|i| (0..self.cols()).all(|j| i == j || self[(i, j)].is_zero()))
        }
    }
}
