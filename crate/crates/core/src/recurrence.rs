//! The monic families `R_n` on `[0, 1]` and `P_n` on `[-1, 1]`, generated
//! from the explicit three-term recurrence
//!
//! ```text
//! u R_n = R_{n+1} + X_n R_n + Y_n R_{n-1},      P_n(x) = (-2)^n R_n((1-x)/2),
//! ```
//!
//! together with their squared norms and the closed forms for the two
//! subleading coefficients.

use num_traits::Zero;

use crate::exact::{
    factorial, int, integrate_halfcircle, q, Grid, MatPoly, PiGrid, PiRational, Poly, RatGrid, Rational,
};
use crate::special::pochhammer;
use crate::weight::weight_poly;
use crate::{Error, Result};

/// Tridiagonal `X_n`.
pub fn recurrence_x(two_l: usize, n: usize) -> RatGrid {
    let size = two_l + 1;
    let (tl, nl) = (two_l as i64, n as i64);
    Grid::from_fn(size, size, |r, c| {
        let i = r as i64;
        if r == c {
            q(1, 2)
        } else if c + 1 == r {
            -int(i * i) / int(4 * (nl + i) * (nl + i + 1))
        } else if r + 1 == c {
            -int((tl - i) * (tl - i)) / int(4 * (tl + nl - i) * (tl + nl - i + 1))
        } else {
            Rational::zero()
        }
    })
}

/// Diagonal `Y_n`; `Y_0 = 0` since it only ever multiplies `R_{-1} = 0`.
pub fn recurrence_y(two_l: usize, n: usize) -> RatGrid {
    let (tl, nl) = (two_l as i64, n as i64);
    RatGrid::diagonal(
        (0..=tl)
            .map(|i| {
                if n == 0 {
                    return Rational::zero();
                }
                int(nl * nl * (tl + nl + 1) * (tl + nl + 1))
                    / int(16 * (nl + i) * (nl + i + 1) * (tl + nl - i) * (tl + nl - i + 1))
            })
            .collect(),
    )
}

/// `R_0, …, R_{n_max}` in the variable `u`.
pub fn monic_r_seq(two_l: usize, n_max: usize) -> Vec<MatPoly> {
    let size = two_l + 1;
    let mut out = vec![MatPoly::identity(size)];
    let mut prev = MatPoly::zeros(size, size);
    for n in 0..n_max {
        let cur = out[n].clone();
        let u_cur = cur.scale_poly(&Poly::x());
        let next = &(&u_cur - &(&recurrence_x(two_l, n).to_matpoly() * &cur))
            - &(&recurrence_y(two_l, n).to_matpoly() * &prev);
        prev = cur;
        out.push(next);
    }
    out
}

/// `R_n(u)`.
pub fn monic_r(two_l: usize, n: usize) -> MatPoly {
    monic_r_seq(two_l, n).pop().expect("non-empty")
}

/// `P_n(x) = (-2)^n R_n((1-x)/2)`.
pub fn monic_p(two_l: usize, n: usize) -> MatPoly {
    p_from_r(&monic_r(two_l, n), n)
}

/// `P_0, …, P_{n_max}`.
pub fn monic_p_seq(two_l: usize, n_max: usize) -> Vec<MatPoly> {
    monic_r_seq(two_l, n_max).iter().enumerate().map(|(n, r)| p_from_r(r, n)).collect()
}

fn p_from_r(r: &MatPoly, n: usize) -> MatPoly {
    let s = Poly::constant(int(-2).pow(n as i32));
    r.reparam_u_to_x().scale_poly(&s)
}

/// `∫ A(x) W(x) B(x)ᵗ dx` over `[-1, 1]`, for x-domain polynomials.
pub fn inner_product_w(two_l: usize, a: &MatPoly, b: &MatPoly) -> Result<PiGrid> {
    let size = two_l + 1;
    if a.cols() != size || b.cols() != size {
        return Err(Error::Shape(format!("inner product needs {size} columns, got {} and {}", a.cols(), b.cols())));
    }
    let prod = a.try_mul(&weight_poly(two_l))?.try_mul(&b.transpose())?;
    Ok(prod.map(integrate_halfcircle))
}

/// The diagonal squared norm `H_n = ⟨P_n, P_n⟩`.
pub fn squared_norm_h(two_l: usize, n: usize) -> PiGrid {
    let size = two_l + 1;
    let tl = two_l as i64;
    let nl = n as i64;
    Grid::from_fn(size, size, |r, c| {
        if r != c {
            return PiRational::zero();
        }
        let i = r as i64;
        let num = factorial(n).pow(2) * pochhammer(&int(tl + 1), n + 1).pow(2);
        let den = pochhammer(&int(i + 1), n).pow(2)
            * pochhammer(&int(tl - i + 1), n).pow(2)
            * int(nl + i + 1)
            * int(tl - i + nl + 1);
        PiRational(q(1, 2) * num / den / int(4).pow(n as i32))
    })
}

/// Closed forms for `R^n_{n-1}` and `R^n_{n-2}`, the coefficients of
/// `u^{n-1}` and `u^{n-2}` in `R_n`. The second is zero for `n < 2`.
pub fn leading_coeffs(two_l: usize, n: usize) -> (RatGrid, RatGrid) {
    let size = two_l + 1;
    let (tl, nl) = (two_l as i64, n as i64);
    let l = q(tl, 2);
    let r1 = Grid::from_fn(size, size, |r, c| {
        let j = r as i64;
        if n == 0 {
            Rational::zero()
        } else if r == c {
            -q(nl, 2)
        } else if c + 1 == r {
            int(j * nl) / int(4 * (nl + j))
        } else if r + 1 == c {
            int(nl * (tl - j)) / int(4 * (tl - j + nl))
        } else {
            Rational::zero()
        }
    });
    let r2 = Grid::from_fn(size, size, |r, c| {
        if n < 2 {
            return Rational::zero();
        }
        let j = r as i64;
        let f = nl * (nl - 1);
        let jr = int(j);
        match c as i64 - j {
            -2 => int(f * j * (j - 1)) / int(32 * (nl + j) * (nl + j - 1)),
            -1 => -int(f * j) / int(8 * (nl + j)),
            0 => {
                let top = int(3 * j * j) - int(6) * &l * &jr - int(2 * nl * nl - nl) - int(4 * nl) * &l;
                int(f) * top / (int(16 * (nl + j)) * int(j - tl - nl))
            }
            1 => -int(f * (tl - j)) / int(8 * (tl + nl - j)),
            2 => int(f * (tl - j) * (tl - j - 1)) / int(32 * (tl - j + nl - 1) * (tl + nl - j)),
            _ => Rational::zero(),
        }
    });
    (r1, r2)
}

/// Recover `(X_n, Y_n)` from the subleading coefficients of `R_n` and
/// `R_{n+1}`.
pub fn coeffs_to_recurrence(
    rn1_n: &RatGrid,
    rn1_np1: &RatGrid,
    rn2_n: &RatGrid,
    rn2_np1: &RatGrid,
) -> Result<(RatGrid, RatGrid)> {
    let shape = (rn1_n.rows(), rn1_n.cols());
    if [rn1_np1, rn2_n, rn2_np1].iter().any(|g| (g.rows(), g.cols()) != shape) {
        return Err(Error::Shape("subleading coefficient grids differ in shape".into()));
    }
    let x = rn1_n - rn1_np1;
    let y = &(rn2_n - rn2_np1) - &x.try_mul(rn1_n)?;
    Ok((x, y))
}

/// `max |X_n - 1/2|` and `max |Y_n - 1/16|` over all entries, in floats.
pub fn nevai_deviation(two_l: usize, n: usize) -> (f64, f64) {
    let x = recurrence_x(two_l, n).to_f64();
    let y = recurrence_y(two_l, n).to_f64();
    let mut dx: f64 = 0.0;
    let mut dy: f64 = 0.0;
    for (r, row) in x.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            let target = if r == c { 0.5 } else { 0.0 };
            dx = dx.max((v - target).abs());
            let ty = if r == c { 0.0625 } else { 0.0 };
            dy = dy.max((y[r][c] - ty).abs());
        }
    }
    (dx, dy)
}

/// The Nevai-class check: both deviations decrease strictly on
/// `n_min..=n_max` and end below `bound / n_max`.
pub fn nevai_check(two_l: usize, n_min: usize, n_max: usize, bound: f64) -> bool {
    let devs: Vec<(f64, f64)> = (n_min..=n_max).map(|n| nevai_deviation(two_l, n)).collect();
    let monotone = devs.windows(2).all(|w| w[1].0 < w[0].0 && w[1].1 < w[0].1);
    let (lx, ly) = *devs.last().expect("non-empty range");
    monotone && lx < bound / n_max as f64 && ly < bound / n_max as f64
}

/// Whether `P_n` has leading coefficient `I` in degree `n` and nothing
/// above.
pub fn is_monic(p: &MatPoly, n: usize) -> bool {
    p.max_degree().unwrap_or(0) <= n && p.coeff_grid(n) == RatGrid::identity(p.rows())
}
