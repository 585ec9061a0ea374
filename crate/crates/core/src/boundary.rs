//! Generating functions of maps and p-constellations with boundaries.
//!
//! For boundary degrees `l_1..l_r` (sum divisible by `p`, at most two of
//! them not divisible by `p`) the series of p-hypermaps with numbered,
//! corner-marked light boundary faces is
//!
//! ```text
//! G = prod alpha(l_i) * (c/s) * d^(r-2)/dt^(r-2) R_p^s
//! ```
//!
//! with `s = (p-1)/p * sum l_i` and `c = 1` if every `l_i` is a multiple of
//! `p`, `c = p - 1` otherwise. For `r = 1` the operator is an integration
//! with constant 0. Setting `t = 1, x = 0` gives the closed count
//! [`slicings_count`].

use num_traits::Zero;

use crate::error::{BoundaryError, SeriesError};
use crate::kernel::{compute_r, compute_rp};
use crate::numeric::{factorial, inverse_factorial, Integer, Rational};
use crate::series::{Series, TruncationSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundarySpec {
    p: u32,
    degrees: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DerivedQuantities {
    /// Exponent of `R_p`: `(p-1)/p * sum l_i`.
    pub s: u64,
    /// Number of edges, `sum l_i`. For `p = 2` the edge count of the map
    /// itself is `epsilon / 2`.
    pub epsilon: u64,
    /// Number of dark faces, `sum l_i / p`.
    pub d: u64,
    /// Number of vertices, `epsilon - d - r + 2`.
    pub v: i64,
    pub c: u64,
}

impl BoundarySpec {
    pub fn new(p: u32, degrees: Vec<u32>) -> Result<Self, BoundaryError> {
        if p < 2 {
            return Err(BoundaryError::InvalidP(p));
        }
        if degrees.is_empty() {
            return Err(BoundaryError::NoBoundary);
        }
        if degrees.contains(&0) {
            return Err(BoundaryError::ZeroDegree);
        }
        let sum: u64 = degrees.iter().map(|&l| l as u64).sum();
        if sum % p as u64 != 0 {
            return Err(BoundaryError::ResidueSum { p, sum });
        }
        let count = degrees.iter().filter(|&&l| l % p != 0).count();
        if count != 0 && count != 2 {
            return Err(BoundaryError::UnsupportedParity { p, count });
        }
        Ok(BoundarySpec { p, degrees })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn r(&self) -> usize {
        self.degrees.len()
    }

    pub fn derived(&self) -> DerivedQuantities {
        let p = self.p as u64;
        let epsilon: u64 = self.degrees.iter().map(|&l| l as u64).sum();
        let d = epsilon / p;
        let all_multiples = self.degrees.iter().all(|&l| l % self.p == 0);
        DerivedQuantities {
            s: epsilon - d,
            epsilon,
            d,
            v: (epsilon - d) as i64 - self.r() as i64 + 2,
            c: if all_multiples { 1 } else { p - 1 },
        }
    }

    /// `prod alpha(l_i) * c / s`, the constant in front of the series factor.
    pub fn constant(&self) -> Rational {
        let q = self.derived();
        let prod: Integer = self.degrees.iter().map(|&l| alpha(self.p, l)).product();
        Rational::new(prod * q.c, Integer::from(q.s))
    }
}

/// `l! / (floor(l/p)! * (l - floor(l/p) - 1)!)`.
pub fn alpha(p: u32, l: u32) -> Integer {
    assert!(p >= 2 && l >= 1, "alpha needs p >= 2 and l >= 1");
    let l = l as u64;
    let q = l / p as u64;
    factorial(l) / (factorial(q) * factorial(l - q - 1))
}

/// The series `G^(p)_{l_1..l_r}`. Each derivative lowers `t_max` by one, so
/// the result carries `t_max - (r - 2)` when `r >= 3`.
pub fn gf_boundaries(spec: &BoundarySpec, trunc: TruncationSpec) -> Result<Series, SeriesError> {
    let r = spec.r() as u32;
    if r >= 3 && trunc.t_max < r - 2 {
        return Err(SeriesError::InvalidTruncation(format!(
            "t_max = {} cannot absorb {} derivatives",
            trunc.t_max,
            r - 2
        )));
    }
    let q = spec.derived();
    let rp = compute_rp(spec.p, trunc)?;
    let mut g = rp.pow(q.s as u32);
    if r == 1 {
        g = g.integrate_dt();
    }
    for _ in 2..r {
        g = g.d_dt();
    }
    Ok(g.scale(&spec.constant()))
}

/// `c * (epsilon - d - 1)! / v! * prod alpha(l_i)`.
pub fn slicings_count(spec: &BoundarySpec) -> Result<Integer, BoundaryError> {
    let q = spec.derived();
    if q.v < 1 {
        return Err(BoundaryError::NoVertices);
    }
    let prod: Integer = spec.degrees.iter().map(|&l| alpha(spec.p, l)).product();
    let value = Integer::from(q.c) * factorial(q.s - 1) * prod / factorial(q.v as u64);
    Ok(value)
}

fn parity_error(degrees: &[u32]) -> BoundaryError {
    let count = degrees.iter().filter(|&&l| l % 2 == 1).count();
    BoundaryError::UnsupportedParity { p: 2, count }
}

/// Eynard's two-boundary formula with `gamma^2 = R`:
///
/// ```text
/// R^((l1+l2)/2) * sum_{j=0}^{floor(l2/2)} (l2 - 2j) l1! l2! /
///     (j! ((l1-l2)/2 + j)! ((l1+l2)/2 - j)! (l2 - j)!)
/// ```
///
/// where `1/n! = 0` for negative `n`.
pub fn eynard_two(l1: u32, l2: u32, trunc: TruncationSpec) -> Result<Series, crate::Error> {
    if l1 == 0 || l2 == 0 {
        return Err(BoundaryError::ZeroDegree.into());
    }
    if (l1 + l2) % 2 == 1 {
        return Err(parity_error(&[l1, l2]).into());
    }
    let (a, b) = (l1 as i64, l2 as i64);
    let fa = Rational::from_integer(factorial(l1 as u64) * factorial(l2 as u64));
    let mut sum = Rational::zero();
    for j in 0..=b / 2 {
        let term = Rational::from_integer(Integer::from(b - 2 * j))
            * &fa
            * inverse_factorial(j)
            * inverse_factorial((a - b) / 2 + j)
            * inverse_factorial((a + b) / 2 - j)
            * inverse_factorial(b - j);
        sum += term;
    }
    let r = compute_r(trunc)?;
    Ok(r.pow((l1 + l2) / 2).scale(&sum))
}

/// Eynard's three-boundary formula `gamma^(L-1) / y'(1) * prod alpha(l_i)`,
/// with `y'(1) = gamma / R'`, i.e. `R^(L/2 - 1) * R' * prod alpha(l_i)`.
/// The result carries `t_max - 1`, like `R'`.
pub fn eynard_three(l1: u32, l2: u32, l3: u32, trunc: TruncationSpec) -> Result<Series, crate::Error> {
    let ls = [l1, l2, l3];
    if ls.contains(&0) {
        return Err(BoundaryError::ZeroDegree.into());
    }
    let odd = ls.iter().filter(|&&l| l % 2 == 1).count();
    if odd != 0 && odd != 2 {
        return Err(parity_error(&ls).into());
    }
    let total = l1 + l2 + l3;
    let r = compute_r(trunc)?;
    let dr = r.d_dt();
    let low = *dr.trunc();
    let power = r.pow(total / 2 - 1).restrict(low)?;
    let prod: Integer = ls.iter().map(|&l| alpha(2, l)).product();
    Ok(power.mul(&dr)?.scale(&Rational::from_integer(prod)))
}

/// Rooted p-constellations: the antiderivative of `p/(p-1) * R_p`. For
/// `p = 2` these are rooted bipartite maps.
///
/// The `x`-free part `p/(2(p-1)) t^2` is an artifact of the formula and
/// counts no map: every rooted map has at least one face besides the
/// dark ones, hence at least one `x` factor.
pub fn rooted_maps_gf(p: u32, trunc: TruncationSpec) -> Result<Series, SeriesError> {
    let rp = compute_rp(p, trunc)?;
    Ok(rp.scale(&Rational::new(Integer::from(p), Integer::from(p - 1))).integrate_dt())
}

/// `prod alpha * (c/s) * s!/(s-r+2)!`, the value of `G` at `t = 1, x = 0`.
pub fn evaluation_at_origin(spec: &BoundarySpec) -> Rational {
    let q = spec.derived();
    if q.v < 0 {
        return Rational::zero();
    }
    spec.constant() * Rational::new(factorial(q.s), factorial(q.v as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{binomial, rational};
    use crate::series::Monomial;

    fn tr(t: u32, x: u32) -> TruncationSpec {
        TruncationSpec::with_default_vars(t, x).unwrap()
    }

    fn spec(p: u32, ls: &[u32]) -> BoundarySpec {
        BoundarySpec::new(p, ls.to_vec()).unwrap()
    }

    fn q(n: i64) -> Rational {
        rational(n, 1)
    }

    #[test]
    fn alpha_values() {
        assert_eq!(alpha(2, 1), Integer::from(1));
        assert_eq!(alpha(2, 4), Integer::from(12));
        assert_eq!(alpha(3, 3), Integer::from(6));
        assert_eq!(alpha(3, 4), Integer::from(12));
        for l in 1..12u64 {
            let two_form = factorial(l) / (factorial(l / 2) * factorial((l - 1) / 2));
            assert_eq!(alpha(2, l as u32), two_form);
        }
    }

    #[test]
    fn spec_validation() {
        assert_eq!(BoundarySpec::new(1, vec![2]), Err(BoundaryError::InvalidP(1)));
        assert_eq!(BoundarySpec::new(2, vec![]), Err(BoundaryError::NoBoundary));
        assert_eq!(BoundarySpec::new(2, vec![0, 2]), Err(BoundaryError::ZeroDegree));
        assert_eq!(BoundarySpec::new(2, vec![1, 2]), Err(BoundaryError::ResidueSum { p: 2, sum: 3 }));
        assert_eq!(
            BoundarySpec::new(2, vec![1, 1, 1, 1]),
            Err(BoundaryError::UnsupportedParity { p: 2, count: 4 })
        );
        assert_eq!(
            BoundarySpec::new(3, vec![1, 1, 1]),
            Err(BoundaryError::UnsupportedParity { p: 3, count: 3 })
        );
        let d = spec(3, &[2, 4]).derived();
        assert_eq!((d.s, d.epsilon, d.d, d.v, d.c), (4, 6, 2, 4, 2));
        let d = spec(2, &[1, 3]).derived();
        assert_eq!((d.s, d.epsilon / 2, d.v, d.c), (2, 2, 2, 1));
    }

    #[test]
    fn slicings_examples() {
        let cases: [(u32, &[u32], i64); 8] = [
            (2, &[4], 2),
            (2, &[1, 1], 1),
            (2, &[2, 2], 2),
            (2, &[1, 3], 3),
            (2, &[3, 3], 12),
            (2, &[2, 2, 2], 8),
            (3, &[3, 3], 9),
            (3, &[2, 4], 12),
        ];
        for (p, ls, want) in cases {
            assert_eq!(slicings_count(&spec(p, ls)).unwrap(), Integer::from(want), "{p} {ls:?}");
        }
        assert_eq!(slicings_count(&spec(3, &[3])).unwrap(), Integer::from(1));
    }

    #[test]
    fn catalan() {
        for a in 1..=6u32 {
            let cat = binomial(2 * a as u64, a as i64) / (a + 1);
            assert_eq!(slicings_count(&spec(2, &[2 * a])).unwrap(), cat);
        }
    }

    #[test]
    fn gf_examples() {
        let s = tr(6, 2);
        let r = compute_r(s).unwrap();
        assert_eq!(gf_boundaries(&spec(2, &[2, 2]), s).unwrap(), r.pow(2).scale(&q(2)));
        assert_eq!(gf_boundaries(&spec(2, &[1, 1]), s).unwrap(), r);
        let g222 = gf_boundaries(&spec(2, &[2, 2, 2]), s).unwrap();
        let dr = r.d_dt();
        let expected = r.pow(2).restrict(*dr.trunc()).unwrap().mul(&dr).unwrap().scale(&q(8));
        assert_eq!(g222, expected);
        assert_eq!(g222.x_free().coeff(&Monomial::t_pow(2)).unwrap(), q(8));

        let g3 = gf_boundaries(&spec(3, &[3]), s).unwrap();
        assert_eq!(g3.x_free(), Series::monomial(s, Monomial::t_pow(3), q(1)));
        let r3 = compute_rp(3, s).unwrap();
        assert_eq!(g3, r3.pow(2).integrate_dt().scale(&q(3)));

        let g24 = gf_boundaries(&spec(3, &[2, 4]), s).unwrap();
        assert_eq!(g24, r3.pow(4).scale(&q(12)));
        assert_eq!(g24.x_free(), Series::monomial(s, Monomial::t_pow(4), q(12)));

        let g4 = gf_boundaries(&spec(2, &[4]), s).unwrap();
        assert_eq!(g4.x_free(), Series::monomial(s, Monomial::t_pow(3), q(2)));
    }

    #[test]
    fn evaluation_matches_slicings() {
        for p in 2..=3u32 {
            for ls in admissible(p, 8) {
                let sp = spec(p, &ls);
                let want = slicings_count(&sp).unwrap();
                assert_eq!(evaluation_at_origin(&sp), Rational::from_integer(want.clone()));
                let v = sp.derived().v as u32;
                let t = tr(v + sp.r() as u32, 0);
                let g = gf_boundaries(&sp, t).unwrap();
                assert_eq!(g.coeff(&Monomial::t_pow(v)).unwrap(), Rational::from_integer(want));
                assert_eq!(g.len(), 1, "{p} {ls:?}");
            }
        }
    }

    /// Nondecreasing boundary lists with sum at most `max_sum` that pass validation.
    fn admissible(p: u32, max_sum: u32) -> Vec<Vec<u32>> {
        fn go(p: u32, left: u32, min: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if !cur.is_empty() && BoundarySpec::new(p, cur.clone()).is_ok() {
                out.push(cur.clone());
            }
            for l in min..=left {
                cur.push(l);
                go(p, left - l, l, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(p, max_sum, 1, &mut Vec::new(), &mut out);
        out
    }

    #[test]
    fn eynard_examples() {
        let s = tr(6, 2);
        let r = compute_r(s).unwrap();
        assert_eq!(eynard_two(2, 2, s).unwrap(), r.pow(2).scale(&q(2)));
        assert_eq!(eynard_two(1, 3, s).unwrap(), r.pow(2).scale(&q(3)));
        assert_eq!(eynard_two(3, 1, s).unwrap(), r.pow(2).scale(&q(3)));
        assert_eq!(
            eynard_three(2, 2, 2, s).unwrap(),
            gf_boundaries(&spec(2, &[2, 2, 2]), s).unwrap()
        );
        assert!(eynard_two(1, 2, s).is_err());
        assert!(eynard_three(1, 1, 1, s).is_err());
    }

    #[test]
    fn rooted_maps_identity() {
        let s = tr(6, 2);
        let m = rooted_maps_gf(2, s).unwrap();
        assert_eq!(m.x_free().coeff(&Monomial::t_pow(2)).unwrap(), q(1));
        assert_eq!(m.coeff(&Monomial::new(2, &[(1, 1)])).unwrap(), q(1));
        let low = TruncationSpec { t_max: 5, ..s };
        assert_eq!(m.d_dt(), compute_r(s).unwrap().scale(&q(2)).restrict(low).unwrap());
    }

    #[test]
    fn single_boundary_derivative_is_binomial_times_power() {
        let s = tr(7, 2);
        for p in 2..=4u32 {
            let rp = compute_rp(p, s).unwrap();
            for a in 1..=2u32 {
                let g = gf_boundaries(&spec(p, &[p * a]), s).unwrap();
                let c = Rational::from_integer(binomial((p * a) as u64, a as i64));
                let want = rp.pow((p - 1) * a).scale(&c).restrict(*g.d_dt().trunc()).unwrap();
                assert_eq!(g.d_dt(), want);
            }
        }
    }
}
