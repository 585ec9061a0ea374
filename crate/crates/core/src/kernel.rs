//! The kernel series `R`, `S`, `T`, `R_p` and `T_p`, and an independent
//! coefficient formula for powers of `R_p`.
//!
//! `R_p` is the unique series with
//!
//! ```text
//! R_p = t + sum_i x_i * C(p*i - 1, i) * R_p^((p-1)*i)
//! ```
//!
//! and `R = R_2`. It counts rooted p-mobiles: `t` marks round vertices and
//! `x_i` light squares of degree `p*i`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{BoundaryError, SeriesError};
use crate::numeric::{binomial, factorial, Integer, Rational};
use crate::series::{solve_fixpoint, Monomial, Series, TruncationSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KernelParams {
    pub p: u32,
    pub trunc: TruncationSpec,
}

impl KernelParams {
    pub fn new(p: u32, trunc: TruncationSpec) -> Result<Self, BoundaryError> {
        if p < 2 {
            return Err(BoundaryError::InvalidP(p));
        }
        Ok(KernelParams { p, trunc })
    }

    pub fn rp(&self) -> Result<Series, SeriesError> {
        compute_rp(self.p, self.trunc)
    }

    pub fn tp(&self) -> Result<Series, SeriesError> {
        compute_tp(self.p, self.trunc)
    }
}

/// `t + sum_i x_i * coef(i) * X^(step*i)` for the indices `i` that can
/// contribute under `trunc` (`X` has no constant term, so `X^(step*i)`
/// starts at `t^(step*i)`).
fn kernel_update(
    x: &Series,
    step: u32,
    coef: &[Rational],
) -> Result<Series, SeriesError> {
    let trunc = *x.trunc();
    let base = x.pow(step);
    let mut power = Series::one(trunc);
    let mut out = Series::t(trunc);
    for (k, c) in coef.iter().enumerate() {
        power = power.mul(&base)?;
        if power.is_zero() {
            break;
        }
        let i = k as u32 + 1;
        let xi = Monomial::new(0, &[(i, 1)]);
        out = out.add(&power.shift(&xi).scale(c))?;
    }
    Ok(out)
}

/// Indices `1..=i_max` of variables that can appear at all.
fn active_vars(step: u32, trunc: &TruncationSpec) -> u32 {
    if trunc.xdeg_max == 0 {
        return 0;
    }
    trunc.var_max.min(trunc.t_max / step)
}

fn solve_kernel(step: u32, coef: Vec<Rational>, trunc: TruncationSpec) -> Result<Series, SeriesError> {
    solve_fixpoint(|x| kernel_update(x, step, &coef), trunc)
}

pub fn compute_r(trunc: TruncationSpec) -> Result<Series, SeriesError> {
    compute_rp(2, trunc)
}

pub fn compute_rp(p: u32, trunc: TruncationSpec) -> Result<Series, SeriesError> {
    assert!(p >= 2, "p must be at least 2");
    let step = p - 1;
    let coef = (1..=active_vars(step, &trunc))
        .map(|i| Rational::from_integer(binomial((p * i - 1) as u64, i as i64)))
        .collect();
    solve_kernel(step, coef, trunc)
}

/// `S = sum_i x_i * C(2i - 1, i) * R^(i-1)`, so that `R = t + R*S`.
pub fn compute_s(trunc: TruncationSpec) -> Result<Series, SeriesError> {
    let r = compute_r(trunc)?;
    let mut out = Series::zero(trunc);
    let mut power = Series::one(trunc);
    let i_max = if trunc.xdeg_max == 0 { 0 } else { trunc.var_max.min(trunc.t_max + 1) };
    for i in 1..=i_max {
        let c = Rational::from_integer(binomial((2 * i - 1) as u64, i as i64));
        out = out.add(&power.shift(&Monomial::new(0, &[(i, 1)])).scale(&c))?;
        power = power.mul(&r)?;
    }
    Ok(out)
}

/// Blossoming trees: a black vertex of arity `i` interleaves its `i`
/// children with `i - 1` buds, in `C(2i - 1, i - 1)` ways.
pub fn compute_t(trunc: TruncationSpec) -> Result<Series, SeriesError> {
    let coef = (1..=active_vars(1, &trunc))
        .map(|i| Rational::from_integer(binomial((2 * i - 1) as u64, (i - 1) as i64)))
        .collect();
    solve_kernel(1, coef, trunc)
}

/// Blossoming p-trees: `p - 1` bud placements at the intermediate dark
/// square above the root, times `C(p*i - 1, i - 1)` arrangements of the
/// `i - 1` big buds among the `(p-1)*i` children.
pub fn compute_tp(p: u32, trunc: TruncationSpec) -> Result<Series, SeriesError> {
    assert!(p >= 2, "p must be at least 2");
    let step = p - 1;
    let coef = (1..=active_vars(step, &trunc))
        .map(|i| {
            Rational::from_integer(Integer::from(p - 1) * binomial((p * i - 1) as u64, (i - 1) as i64))
        })
        .collect();
    solve_kernel(step, coef, trunc)
}

/// `[t^n prod x_i^(n_i)] R_p^s` by Lagrange inversion.
///
/// With `t = z - A(z)` and `A(z) = sum_i c_i x_i z^((p-1)i)`,
/// `[t^n] z^s = (s/n) [z^(n-s)] (1 - A(z)/z)^(-n)`. Expanding the binomial
/// series and the multinomial gives
///
/// ```text
/// (s/n) * C(n+k-1, k) * k!/prod(n_i!) * prod(c_i^n_i),   k = sum n_i,
/// ```
///
/// provided `sum n_i ((p-1)i - 1) = n - s`, and 0 otherwise.
pub fn lagrange_coeff(p: u32, s: u32, n: u32, profile: &BTreeMap<u32, u32>) -> Rational {
    if n == 0 || p < 2 {
        return Rational::zero();
    }
    let mut z_exp: i64 = 0;
    let mut k: u64 = 0;
    let mut weight = Rational::from_integer(Integer::from(1));
    for (&i, &ni) in profile {
        if ni == 0 {
            continue;
        }
        if i == 0 {
            return Rational::zero();
        }
        z_exp += ni as i64 * ((p - 1) as i64 * i as i64 - 1);
        k += ni as u64;
        let ci = binomial((p * i - 1) as u64, i as i64);
        weight *= Rational::new(num_traits::pow(ci, ni as usize), factorial(ni as u64));
    }
    if z_exp != n as i64 - s as i64 {
        return Rational::zero();
    }
    let n64 = n as u64;
    weight
        * Rational::from_integer(binomial(n64 + k - 1, k as i64) * factorial(k))
        * Rational::new(Integer::from(s), Integer::from(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational;

    fn tr(t: u32, x: u32) -> TruncationSpec {
        TruncationSpec::with_default_vars(t, x).unwrap()
    }

    fn m(t: u32, xs: &[(u32, u32)]) -> Monomial {
        Monomial::new(t, xs)
    }

    fn q(n: i64) -> Rational {
        rational(n, 1)
    }

    #[test]
    fn r_small_coefficients() {
        let r = compute_r(tr(3, 1)).unwrap();
        assert_eq!(r.x_free(), Series::t(tr(3, 1)));
        assert_eq!(r.coeff(&m(1, &[(1, 1)])).unwrap(), q(1));
        assert_eq!(r.coeff(&m(2, &[(2, 1)])).unwrap(), q(3));
        assert_eq!(r.coeff(&m(3, &[(3, 1)])).unwrap(), q(10));
        assert_eq!(r.len(), 4);

        let r2 = compute_r(tr(4, 2)).unwrap();
        assert_eq!(r2.coeff(&m(2, &[(1, 1), (2, 1)])).unwrap(), q(9));
    }

    #[test]
    fn rp_small_coefficients() {
        let s = tr(4, 2);
        assert_eq!(compute_rp(2, s).unwrap(), compute_r(s).unwrap());
        let r3 = compute_rp(3, s).unwrap();
        assert_eq!(r3.coeff(&m(2, &[(1, 1)])).unwrap(), q(2));
        assert_eq!(r3.x_free(), Series::t(s));
    }

    #[test]
    fn kernels_satisfy_their_equations() {
        let s = tr(6, 3);
        let r = compute_r(s).unwrap();
        let sr = compute_s(s).unwrap();
        assert!(sr.x_free().is_zero());
        assert_eq!(sr.coeff(&m(0, &[(1, 1)])).unwrap(), q(1));
        let rhs = Series::t(s).add(&r.mul(&sr).unwrap()).unwrap();
        assert_eq!(r, rhs);

        for p in 2..=4 {
            let rp = compute_rp(p, s).unwrap();
            let coef: Vec<Rational> = (1..=active_vars(p - 1, &s))
                .map(|i| Rational::from_integer(binomial((p * i - 1) as u64, i as i64)))
                .collect();
            assert_eq!(kernel_update(&rp, p - 1, &coef).unwrap(), rp);
        }
    }

    #[test]
    fn blossoming_series_match_kernels() {
        let s = tr(7, 3);
        assert_eq!(compute_t(s).unwrap(), compute_r(s).unwrap());
        for p in 2..=5 {
            assert_eq!(compute_tp(p, s).unwrap(), compute_rp(p, s).unwrap());
        }
        assert_eq!(compute_t(s).unwrap().x_free(), Series::t(s));
    }

    #[test]
    fn lagrange_examples() {
        let empty = BTreeMap::new();
        assert_eq!(lagrange_coeff(2, 1, 1, &empty), q(1));
        assert_eq!(lagrange_coeff(2, 1, 2, &BTreeMap::from([(2, 1)])), q(3));
        assert_eq!(lagrange_coeff(2, 1, 2, &BTreeMap::from([(1, 1), (2, 1)])), q(9));
        assert_eq!(lagrange_coeff(3, 2, 2, &empty), q(1));
        assert_eq!(lagrange_coeff(3, 2, 3, &empty), q(0));
        assert_eq!(lagrange_coeff(2, 1, 0, &empty), q(0));
    }

    #[test]
    fn lagrange_agrees_with_fixpoint() {
        let s = tr(6, 3);
        for p in 2..=4 {
            let rp = compute_rp(p, s).unwrap();
            for pow in 1..=3 {
                let series = rp.pow(pow);
                for (mono, c) in series.terms() {
                    let profile: BTreeMap<u32, u32> = mono.x_exps().into_iter().collect();
                    assert_eq!(&lagrange_coeff(p, pow, mono.t_exp(), &profile), c, "p={p} s={pow} {mono}");
                }
                // and the formula predicts nothing the series lacks
                for n in 0..=6 {
                    for i in 1..=3u32 {
                        let profile = BTreeMap::from([(i, 1)]);
                        let mono = Monomial::new(n, &[(i, 1)]);
                        if s.admits(&mono) {
                            assert_eq!(series.coeff(&mono).unwrap(), lagrange_coeff(p, pow, n, &profile));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn kernel_params_reject_small_p() {
        assert!(KernelParams::new(1, tr(2, 1)).is_err());
        let k = KernelParams::new(3, tr(4, 2)).unwrap();
        assert_eq!(k.rp().unwrap(), k.tp().unwrap());
    }
}
