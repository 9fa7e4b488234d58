//! Classical families and terminating hypergeometric series.
//!
//! Series are always summed by the term-ratio recurrence, never through
//! factorial quotients, so Pochhammer symbols with negative integer bases
//! vanish exactly where they should.

use num_traits::{One, Signed, Zero};

use crate::exact::{factorial, int, q, GaussianRational, LaurentPoly, Poly, Rational, Ring};
use crate::{weight, Error, Result};

/// Rising factorial `(a)_n`, computed as a direct product.
pub fn pochhammer(a: &Rational, n: usize) -> Rational {
    let mut r = Rational::one();
    for j in 0..n {
        r *= a + int(j as i64);
    }
    r
}

fn as_nonpositive_int(a: &Rational) -> Option<usize> {
    (a.is_integer() && !a.is_positive()).then(|| (-a.to_integer()).try_into().ok()).flatten()
}

/// A terminating `pFq` series, without its argument.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypSeries {
    pub num: Vec<Rational>,
    pub den: Vec<Rational>,
}

impl HypSeries {
    pub fn new(num: Vec<Rational>, den: Vec<Rational>) -> Self {
        HypSeries { num, den }
    }

    /// Least `n` such that some numerator parameter equals `-n`.
    pub fn termination_index(&self) -> Option<usize> {
        self.num.iter().filter_map(as_nonpositive_int).min()
    }

    /// Coefficients `t_j` of `z^j`, for `j` up to the termination index.
    pub fn terms(&self) -> Result<Vec<Rational>> {
        let last = self.termination_index().ok_or(Error::NonTerminating)?;
        let mut out = Vec::with_capacity(last + 1);
        let mut t = Rational::one();
        out.push(t.clone());
        for j in 0..last {
            let jj = int(j as i64);
            let mut den = int(j as i64 + 1);
            for b in &self.den {
                let f = b + &jj;
                if f.is_zero() {
                    return Err(Error::DenominatorPole { index: j + 1 });
                }
                den *= f;
            }
            let mut num = Rational::one();
            for a in &self.num {
                num *= a + &jj;
            }
            t = t * num / den;
            out.push(t.clone());
        }
        Ok(out)
    }

    pub fn eval(&self, z: &Rational) -> Result<Rational> {
        Ok(Poly::new(self.terms()?).eval(z))
    }

    /// The series as a polynomial in its argument.
    pub fn poly(&self) -> Result<Poly> {
        Ok(Poly::new(self.terms()?))
    }
}

/// Shorthand for `HypSeries::new(num, den).eval(z)`.
pub fn hyp_terminating(num: &[Rational], den: &[Rational], z: &Rational) -> Result<Rational> {
    HypSeries::new(num.to_vec(), den.to_vec()).eval(z)
}

fn half_minus_half_x() -> Poly {
    Poly::new(vec![q(1, 2), q(-1, 2)])
}

/// Chebyshev polynomial of the second kind,
/// `U_r(x) = (r+1) ₂F₁(-r, r+2; 3/2; (1-x)/2)`.
pub fn chebyshev_u(r: usize) -> Poly {
    let s = HypSeries::new(vec![int(-(r as i64)), int(r as i64 + 2)], vec![q(3, 2)]);
    s.poly().expect("terminates").compose(&half_minus_half_x()).scale(&int(r as i64 + 1))
}

/// Gegenbauer polynomial `C_n^{(α)}(x)`.
pub fn gegenbauer(alpha: &Rational, n: usize) -> Result<Poly> {
    if !alpha.is_positive() {
        return Err(Error::Precondition(format!("Gegenbauer parameter {alpha} must be positive")));
    }
    let two_a = alpha * int(2);
    let s = HypSeries::new(vec![int(-(n as i64)), int(n as i64) + &two_a], vec![alpha + q(1, 2)]);
    let pre = pochhammer(&two_a, n) / factorial(n);
    Ok(s.poly()?.compose(&half_minus_half_x()).scale(&pre))
}

/// Racah polynomial `R_k(λ(t); a, b, g, d)`.
pub fn racah(k: usize, t: usize, a: &Rational, b: &Rational, g: &Rational, d: &Rational) -> Result<Rational> {
    let num = vec![int(-(k as i64)), int(k as i64) + a + b + int(1), int(-(t as i64)), int(t as i64) + g + d + int(1)];
    let den = vec![a + int(1), b + d + int(1), g + int(1)];
    hyp_terminating(&num, &den, &int(1))
}

/// Hahn polynomial `Q_k(j; a, b, N)`.
pub fn hahn(k: usize, j: usize, a: &Rational, b: &Rational, n: usize) -> Result<Rational> {
    if k > n {
        return Err(Error::Precondition(format!("Hahn degree {k} exceeds N = {n}")));
    }
    let num = vec![int(-(k as i64)), int(k as i64 + 1) + a + b, int(-(j as i64))];
    let den = vec![a + int(1), int(-(n as i64))];
    hyp_terminating(&num, &den, &int(1))
}

/// Krawtchouk polynomial `K_n(x; p, N) = ₂F₁(-n, -x; -N; 1/p)`.
pub fn krawtchouk(n: usize, x: usize, p: &Rational, big_n: usize) -> Result<Rational> {
    if n > big_n || x > big_n {
        return Err(Error::Precondition(format!("Krawtchouk indices ({n}, {x}) exceed N = {big_n}")));
    }
    if p.is_zero() {
        return Err(Error::Precondition("Krawtchouk parameter p must be nonzero".into()));
    }
    let num = vec![int(-(n as i64)), int(-(x as i64))];
    hyp_terminating(&num, &[int(-(big_n as i64))], &p.recip())
}

/// Coefficients `a_k` with `C_n^{(γ)} = Σ_k a_k C_{n-2k}^{(β)}`.
pub fn gegenbauer_connection(gamma: &Rational, beta: &Rational, n: usize) -> Vec<Rational> {
    (0..=n / 2)
        .map(|k| {
            let nk = int((n - 2 * k) as i64);
            pochhammer(&(gamma - beta), k) * pochhammer(gamma, n - k)
                / (factorial(k) * pochhammer(&(beta + int(1)), n - k))
                * (beta + nk)
                / beta
        })
        .collect()
}

/// Coefficients `b_k` with `C_n^{(α)} C_m^{(α)} = Σ_k b_k C_{n+m-2k}^{(α)}`.
pub fn gegenbauer_linearize(alpha: &Rational, n: usize, m: usize) -> Vec<Rational> {
    let two_a = alpha * int(2);
    (0..=n.min(m))
        .map(|k| {
            let s = n + m - 2 * k;
            let top = (int(s as i64) + alpha)
                * factorial(s)
                * pochhammer(alpha, k)
                * pochhammer(alpha, n - k)
                * pochhammer(alpha, m - k)
                * pochhammer(&two_a, n + m - k);
            let bottom = (int((n + m - k) as i64) + alpha)
                * factorial(k)
                * factorial(n - k)
                * factorial(m - k)
                * pochhammer(alpha, n + m - k)
                * pochhammer(&two_a, s);
            top / bottom
        })
        .collect()
}

/// `cos t` and `sin t` as Laurent polynomials in `e^{it}`.
pub(crate) fn cos_laurent() -> LaurentPoly {
    LaurentPoly::new(
        -1,
        vec![GaussianRational::real(q(1, 2)), GaussianRational::zero(), GaussianRational::real(q(1, 2))],
    )
}

pub(crate) fn sin_laurent() -> LaurentPoly {
    // (q - 1/q) / (2i) = -i/2 q + i/2 q^{-1}
    LaurentPoly::new(
        -1,
        vec![GaussianRational::new(int(0), q(1, 2)), GaussianRational::zero(), GaussianRational::new(int(0), q(-1, 2))],
    )
}

/// `p(cos t)` as a Laurent polynomial in `e^{it}`.
pub(crate) fn poly_at_cos(p: &Poly) -> LaurentPoly {
    p.eval_in(&cos_laurent(), |c| LaurentPoly::real_monomial(c.clone(), 0))
}

/// `Σ_j t_j e^{2ijt}` for a terminating series' coefficients.
pub(crate) fn series_at_e2it(terms: &[Rational]) -> LaurentPoly {
    LaurentPoly::new(
        0,
        terms
            .iter()
            .enumerate()
            .flat_map(|(j, t)| {
                let z = if j == 0 { vec![] } else { vec![GaussianRational::zero()] };
                z.into_iter().chain(std::iter::once(GaussianRational::real(t.clone())))
            })
            .collect(),
    )
}

/// `e^{-int} (1 - e^{2it})^k ₂F₁(k-n, k+1; -n; e^{2it})`.
pub(crate) fn hahn_generating(k: usize, n: usize) -> LaurentPoly {
    let s = HypSeries::new(vec![int(k as i64 - n as i64), int(k as i64 + 1)], vec![int(-(n as i64))]);
    let f = series_at_e2it(&s.terms().expect("terminates before the pole"));
    let one_minus =
        LaurentPoly::new(0, vec![GaussianRational::one(), GaussianRational::zero(), GaussianRational::real(int(-1))]);
    one_minus.pow(k).times(&f).shift(-(n as i64))
}

/// Checks the Fourier expansion of `sin^k t C_{n-k}^{(k+1)}(cos t)` in Hahn
/// polynomials, both against the Hahn sum and the generating function.
///
/// The prefactor is `(-i)^k`; with `i^k` the odd-`k` cases come out with
/// the opposite sign.
pub fn hahn_fourier_check(k: usize, n: usize) -> Result<bool> {
    if k > n {
        return Err(Error::Precondition(format!("need k <= n, got k = {k}, n = {n}")));
    }
    let pre = pochhammer(&int(n as i64 + 1), k + 1) * factorial(n - k)
        / (int(2).pow(k as i32) * pochhammer(&q(3, 2), k) * pochhammer(&int(2 * k as i64 + 2), n - k));
    let minus_i = GaussianRational::new(int(0), int(-1));
    let c = gegenbauer(&int(k as i64 + 1), n - k)?;
    let lhs =
        sin_laurent().pow(k).times(&poly_at_cos(&c)).scale(&minus_i.pow(k as u32).times(&GaussianRational::real(pre)));
    let mut mid = LaurentPoly::zero();
    for j in 0..=n {
        let h = hahn(k, j, &int(0), &int(0), n)?;
        mid = mid.plus(&LaurentPoly::real_monomial(h, 2 * j as i64 - n as i64));
    }
    let rhs = hahn_generating(k, n);
    Ok(lhs == mid && mid == rhs)
}

/// Checks the finite Racah sum used to identify `β_k(m, n)`:
/// `Σ_t (-1)^t (n-2ℓ)_{m-t}/(n+2)_{m-t} (2ℓ+2-t)_t/t! (m+n+1-2t) R_k(λ(t); 0,0,-m-1,-n-1)`
/// against its closed value.
pub fn racah_sum_check(two_l: usize, n: usize, m: usize, k: usize) -> Result<bool> {
    if !(k <= m && m <= n && n <= two_l) {
        return Err(Error::Precondition(format!("need k <= m <= n <= 2l, got ({k}, {m}, {n}, {two_l})")));
    }
    let (nl, ml, tl) = (n as i64, m as i64, two_l as i64);
    let zero = int(0);
    let mut lhs = Rational::zero();
    for t in 0..=m {
        let tt = t as i64;
        let sign = if t % 2 == 0 { int(1) } else { int(-1) };
        let r = racah(k, t, &zero, &zero, &int(-ml - 1), &int(-nl - 1))?;
        lhs += sign * pochhammer(&int(nl - tl), m - t) / pochhammer(&int(nl + 2), m - t)
            * pochhammer(&int(tl + 2 - tt), t)
            / factorial(t)
            * int(ml + nl + 1 - 2 * tt)
            * r;
    }
    let sign = if (m + k).is_multiple_of(2) { int(1) } else { int(-1) };
    let rhs = sign * factorial(two_l + k + 1) * factorial(two_l - k) * int(nl + 1)
        / (factorial(two_l + 1) * factorial(m) * factorial(two_l - m));
    Ok(lhs == rhs)
}

/// `C_k(m, n) / π`, the constant of the Racah integral.
pub(crate) fn racah_integral_constant_over_pi(k: usize, m: usize, n: usize) -> Rational {
    // √π Γ(k + 3/2) = π (3/2)_k / 2
    let sign = if k.is_multiple_of(2) { int(1) } else { int(-1) };
    pochhammer(&q(3, 2), k) / int(2) / int(k as i64 + 1) * pochhammer(&int(k as i64 + 1), m - k) / factorial(m - k)
        * pochhammer(&int(k as i64 + 1), n - k)
        / factorial(n - k)
        * sign
        * pochhammer(&int(2 * k as i64 + 2), m + n - 2 * k)
        * factorial(k + 1)
        / factorial(n + m + 1)
}

/// `β_k(m, n)` recovered from the weight coefficients through Racah
/// orthogonality.
pub fn beta_via_racah(two_l: usize, m: usize, n: usize, k: usize) -> Result<Rational> {
    if !(k <= m && m <= n && n <= two_l) {
        return Err(Error::Precondition(format!("need k <= m <= n <= 2l, got ({k}, {m}, {n}, {two_l})")));
    }
    let (nl, ml) = (n as i64, m as i64);
    let zero = int(0);
    let mut sum = Rational::zero();
    for t in 0..=m {
        let r = racah(k, t, &zero, &zero, &int(-ml - 1), &int(-nl - 1))?;
        sum += int(ml + nl + 1 - 2 * t as i64) * r * weight::alpha_coeff(two_l, m, n, t)?;
    }
    // The π of C_k cancels the π/2 of the inner product.
    Ok(sum / int(2) / racah_integral_constant_over_pi(k, m, n) * int(2 * k as i64 + 1) / int((nl + 1) * (ml + 1))
        * pochhammer(&int(-ml), k)
        * pochhammer(&int(-nl), k)
        / (pochhammer(&int(ml + 2), k) * pochhammer(&int(nl + 2), k)))
}
