//! Truncated multivariate power series in `t` and `x_1..x_D` with exact
//! rational coefficients.
//!
//! Every [`Series`] carries its [`TruncationSpec`]. Binary operations check
//! that both operands use the same spec, and every result drops the terms
//! that fall outside it.

mod monomial;

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::{One, Zero};
use serde_json::{json, Value};

pub use monomial::{Monomial, MAX_VARS, MAX_XDEG};

use crate::error::SeriesError;
use crate::numeric::{format_rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TruncationSpec {
    pub t_max: u32,
    pub xdeg_max: u32,
    pub var_max: u32,
}

impl TruncationSpec {
    pub fn new(t_max: u32, xdeg_max: u32, var_max: u32) -> Result<Self, SeriesError> {
        if var_max == 0 || var_max > MAX_VARS {
            return Err(SeriesError::InvalidTruncation(format!(
                "var_max must be in 1..={MAX_VARS}, got {var_max}"
            )));
        }
        if xdeg_max > MAX_XDEG {
            return Err(SeriesError::InvalidTruncation(format!(
                "xdeg_max must be at most {MAX_XDEG}, got {xdeg_max}"
            )));
        }
        Ok(TruncationSpec { t_max, xdeg_max, var_max })
    }

    /// Spec whose `var_max` is `t_max`: a term `x_i t^a` of any series here
    /// needs `a >= i`, so larger indices never fit.
    pub fn with_default_vars(t_max: u32, xdeg_max: u32) -> Result<Self, SeriesError> {
        TruncationSpec::new(t_max, xdeg_max, t_max.clamp(1, MAX_VARS))
    }

    pub fn admits(&self, m: &Monomial) -> bool {
        m.t_exp() <= self.t_max && m.x_degree() <= self.xdeg_max && m.max_index() <= self.var_max
    }

    /// True if every monomial admitted by `other` is admitted by `self`.
    pub fn contains(&self, other: &TruncationSpec) -> bool {
        other.t_max <= self.t_max && other.xdeg_max <= self.xdeg_max && other.var_max <= self.var_max
    }
}

impl fmt::Display for TruncationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(t_max={}, xdeg_max={}, var_max={})", self.t_max, self.xdeg_max, self.var_max)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    trunc: TruncationSpec,
    terms: BTreeMap<Monomial, Rational>,
}

impl Series {
    pub fn zero(trunc: TruncationSpec) -> Self {
        Series { trunc, terms: BTreeMap::new() }
    }

    pub fn constant(trunc: TruncationSpec, c: Rational) -> Self {
        let mut s = Series::zero(trunc);
        s.add_term(Monomial::ONE, c);
        s
    }

    pub fn one(trunc: TruncationSpec) -> Self {
        Series::constant(trunc, Rational::one())
    }

    /// The series `t`.
    pub fn t(trunc: TruncationSpec) -> Self {
        let mut s = Series::zero(trunc);
        s.add_term(Monomial::t_pow(1), Rational::one());
        s
    }

    /// `c * m`, or zero if `m` lies outside the truncation.
    pub fn monomial(trunc: TruncationSpec, m: Monomial, c: Rational) -> Self {
        let mut s = Series::zero(trunc);
        s.add_term(m, c);
        s
    }

    pub fn from_terms(
        trunc: TruncationSpec,
        terms: impl IntoIterator<Item = (Monomial, Rational)>,
    ) -> Self {
        let mut s = Series::zero(trunc);
        for (m, c) in terms {
            s.add_term(m, c);
        }
        s
    }

    pub fn trunc(&self) -> &TruncationSpec {
        &self.trunc
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c * m` in place, dropping it if out of truncation.
    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() || !self.trunc.admits(&m) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check(&self, other: &Series) -> Result<(), SeriesError> {
        if self.trunc != other.trunc {
            return Err(SeriesError::TruncationMismatch(
                self.trunc.to_string(),
                other.trunc.to_string(),
            ));
        }
        Ok(())
    }

    pub fn coeff(&self, m: &Monomial) -> Result<Rational, SeriesError> {
        if !self.trunc.admits(m) {
            return Err(SeriesError::OutOfTruncation(m.to_string(), self.trunc.to_string()));
        }
        Ok(self.terms.get(m).cloned().unwrap_or_else(Rational::zero))
    }

    pub fn add(&self, other: &Series) -> Result<Series, SeriesError> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Series) -> Result<Series, SeriesError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Series {
        Series {
            trunc: self.trunc,
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Series {
        if k.is_zero() {
            return Series::zero(self.trunc);
        }
        Series {
            trunc: self.trunc,
            terms: self.terms.iter().map(|(m, c)| (*m, c * k)).collect(),
        }
    }

    /// Multiplies every term by the monomial `m` (truncating).
    pub fn shift(&self, m: &Monomial) -> Series {
        let mut out = Series::zero(self.trunc);
        for (a, c) in &self.terms {
            if let Some(p) = a.checked_mul(m) {
                out.add_term(p, c.clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &Series) -> Result<Series, SeriesError> {
        self.check(other)?;
        let tr = self.trunc;
        let mut acc: HashMap<Monomial, Rational> = HashMap::new();
        // Terms are ordered by t-exponent first, so the inner loop can stop
        // as soon as the t budget is exhausted.
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if ma.t_exp() + mb.t_exp() > tr.t_max {
                    break;
                }
                if ma.x_degree() + mb.x_degree() > tr.xdeg_max {
                    continue;
                }
                let m = ma.checked_mul(mb).expect("x-degree checked against xdeg_max");
                let prod = ca * cb;
                match acc.get_mut(&m) {
                    Some(c) => *c += prod,
                    None => {
                        acc.insert(m, prod);
                    }
                }
            }
        }
        Ok(Series::from_terms(tr, acc))
    }

    pub fn pow(&self, n: u32) -> Series {
        let mut result = Series::one(self.trunc);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base).expect("same truncation");
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base).expect("same truncation");
            }
        }
        result
    }

    /// Termwise t-derivative. The result is only reliable up to `t_max - 1`,
    /// so its spec has `t_max` lowered by one (saturating at 0).
    pub fn d_dt(&self) -> Series {
        let trunc = TruncationSpec { t_max: self.trunc.t_max.saturating_sub(1), ..self.trunc };
        let mut out = Series::zero(trunc);
        for (m, c) in &self.terms {
            let a = m.t_exp();
            if a > 0 {
                out.add_term(m.with_t(a - 1), c * Rational::from_integer(a.into()));
            }
        }
        out
    }

    /// Antiderivative in t with constant 0. Keeps the spec; the term of
    /// order `t_max` integrates out of range and is dropped.
    pub fn integrate_dt(&self) -> Series {
        let mut out = Series::zero(self.trunc);
        for (m, c) in &self.terms {
            let a = m.t_exp() + 1;
            out.add_term(m.with_t(a), c / Rational::from_integer(a.into()));
        }
        out
    }

    /// Drops the terms outside a smaller spec.
    pub fn restrict(&self, trunc: TruncationSpec) -> Result<Series, SeriesError> {
        if !self.trunc.contains(&trunc) {
            return Err(SeriesError::InvalidTruncation(format!(
                "cannot restrict {} to larger {}",
                self.trunc, trunc
            )));
        }
        Ok(Series {
            trunc,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| trunc.admits(m))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        })
    }

    /// Evaluation at `x_1 = x_2 = ... = 0`.
    pub fn x_free(&self) -> Series {
        Series {
            trunc: self.trunc,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.x_degree() == 0)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// One term per line, `t^a x1^b : num/den`, in monomial order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (m, c) in &self.terms {
            out.push_str(&format!("{m} : {}\n", format_rational(c)));
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let x: serde_json::Map<String, Value> =
                    m.x_exps().into_iter().map(|(i, e)| (i.to_string(), json!(e))).collect();
                json!({ "t": m.t_exp(), "x": x, "coeff": format_rational(c) })
            })
            .collect();
        json!({
            "truncation": {
                "t_max": self.trunc.t_max,
                "xdeg_max": self.trunc.xdeg_max,
                "var_max": self.trunc.var_max,
            },
            "terms": terms,
        })
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series{} {{", self.trunc)?;
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, " {m}: {}", format_rational(c))?;
        }
        f.write_str(" }")
    }
}

/// Solves `X = update(X)` by iterating from `update(0)`.
///
/// The update must raise x-degree: the part of `update(X)` of x-degree `k`
/// may only depend on the part of `X` of x-degree below `k`. Then iterate
/// `k` is exact through x-degree `k`, and `xdeg_max + 1` iterations reach
/// the fixed point.
pub fn solve_fixpoint<F>(mut update: F, trunc: TruncationSpec) -> Result<Series, SeriesError>
where
    F: FnMut(&Series) -> Result<Series, SeriesError>,
{
    let mut x = update(&Series::zero(trunc))?;
    let steps = trunc.xdeg_max as usize + 1;
    for _ in 0..steps {
        let next = update(&x)?;
        if next == x {
            return Ok(x);
        }
        x = next;
    }
    Err(SeriesError::NotConverged(steps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rational;
    use proptest::prelude::*;

    fn tr(t: u32, x: u32) -> TruncationSpec {
        TruncationSpec::new(t, x, 4).unwrap()
    }

    fn q(n: i64) -> Rational {
        rational(n, 1)
    }

    fn mono(t: u32, xs: &[(u32, u32)]) -> Monomial {
        Monomial::new(t, xs)
    }

    #[test]
    fn add_examples() {
        let s = tr(4, 2);
        let t = Series::t(s);
        assert_eq!(t.add(&t).unwrap(), Series::monomial(s, mono(1, &[]), q(2)));
        let a = Series::from_terms(s, [(mono(1, &[]), q(1)), (mono(1, &[(1, 1)]), q(1))]);
        let b = Series::monomial(s, mono(1, &[(1, 1)]), q(-1));
        assert_eq!(a.add(&b).unwrap(), t);
        let c = Series::monomial(s, mono(2, &[(2, 1)]), q(3));
        let d = Series::monomial(s, mono(2, &[(2, 1)]), q(1));
        assert_eq!(c.add(&d).unwrap(), Series::monomial(s, mono(2, &[(2, 1)]), q(4)));
    }

    #[test]
    fn mismatched_truncation_is_an_error() {
        let a = Series::t(tr(3, 1));
        let b = Series::t(tr(4, 1));
        assert!(matches!(a.add(&b), Err(SeriesError::TruncationMismatch(..))));
        assert!(matches!(a.mul(&b), Err(SeriesError::TruncationMismatch(..))));
    }

    #[test]
    fn mul_and_pow_examples() {
        let s = tr(4, 2);
        let t = Series::t(s);
        assert_eq!(t.mul(&t).unwrap(), Series::monomial(s, mono(2, &[]), q(1)));
        let a = Series::from_terms(s, [(mono(1, &[]), q(1)), (mono(1, &[(1, 1)]), q(1))]);
        let expected = Series::from_terms(
            s,
            [(mono(2, &[]), q(1)), (mono(2, &[(1, 1)]), q(2)), (mono(2, &[(1, 2)]), q(1))],
        );
        assert_eq!(a.mul(&a).unwrap(), expected);
        assert_eq!(a.pow(2), expected);
        assert_eq!(t.pow(3), Series::monomial(s, mono(3, &[]), q(1)));
        assert_eq!(t.pow(0), Series::one(s));

        let small = tr(1, 2);
        let t1 = Series::t(small);
        assert!(t1.mul(&t1).unwrap().is_zero());
    }

    #[test]
    fn derivative_and_integral_examples() {
        let s = tr(4, 2);
        let t3 = Series::monomial(s, mono(3, &[]), q(1));
        let d = t3.d_dt();
        assert_eq!(d.trunc().t_max, 3);
        assert_eq!(d.coeff(&mono(2, &[])).unwrap(), q(3));
        let x2t2 = Series::monomial(s, mono(2, &[(2, 1)]), q(1));
        assert_eq!(x2t2.d_dt().coeff(&mono(1, &[(2, 1)])).unwrap(), q(2));
        assert!(Series::one(s).d_dt().is_zero());

        let three_t2 = Series::monomial(s, mono(2, &[]), q(3));
        assert_eq!(three_t2.integrate_dt(), t3);
        let six_t2 = Series::monomial(s, mono(2, &[]), q(6));
        assert_eq!(six_t2.integrate_dt().coeff(&mono(3, &[])).unwrap(), q(2));
    }

    #[test]
    fn fixpoint_examples() {
        let s = tr(4, 2);
        let t = Series::t(s);
        let constant = solve_fixpoint(|_| Ok(t.clone()), s).unwrap();
        assert_eq!(constant, t);

        let x1 = Monomial::new(0, &[(1, 1)]);
        let geo = solve_fixpoint(|x| t.add(&x.shift(&x1)), s).unwrap();
        let expected = Series::from_terms(
            s,
            [(mono(1, &[]), q(1)), (mono(1, &[(1, 1)]), q(1)), (mono(1, &[(1, 2)]), q(1))],
        );
        assert_eq!(geo, expected);
    }

    #[test]
    fn fixpoint_detects_non_contracting_update() {
        let s = tr(4, 2);
        let mut n = 0i64;
        let r = solve_fixpoint(
            |_| {
                n += 1;
                Ok(Series::constant(s, q(n)))
            },
            s,
        );
        assert_eq!(r, Err(SeriesError::NotConverged(3)));
    }

    #[test]
    fn coeff_outside_truncation_is_an_error() {
        let s = tr(2, 1);
        let a = Series::t(s);
        assert_eq!(a.coeff(&mono(1, &[])).unwrap(), q(1));
        assert!(a.coeff(&mono(3, &[])).is_err());
        assert!(a.coeff(&mono(1, &[(1, 2)])).is_err());
        assert!(a.coeff(&mono(1, &[(5, 1)])).is_err());
    }

    #[test]
    fn text_and_json_rendering() {
        let s = tr(3, 2);
        let a = Series::from_terms(
            s,
            [
                (mono(2, &[(2, 1)]), q(3)),
                (mono(1, &[]), q(1)),
                (mono(1, &[(1, 1)]), rational(-1, 2)),
            ],
        );
        assert_eq!(a.to_text(), "t^1 : 1/1\nt^1 x1^1 : -1/2\nt^2 x2^1 : 3/1\n");
        let j = a.to_json();
        assert_eq!(j["terms"][2]["x"]["2"], json!(1));
        assert_eq!(j["terms"][1]["coeff"], json!("-1/2"));
        assert_eq!(j["truncation"]["t_max"], json!(3));
    }

    #[test]
    fn invalid_truncations() {
        assert!(TruncationSpec::new(3, 2, 0).is_err());
        assert!(TruncationSpec::new(3, 16, 1).is_err());
        assert!(TruncationSpec::new(3, 2, 33).is_err());
        assert_eq!(TruncationSpec::with_default_vars(6, 2).unwrap().var_max, 6);
    }

    fn arb_series(trunc: TruncationSpec) -> impl Strategy<Value = Series> {
        let term = (
            0..=trunc.t_max,
            proptest::collection::vec(1..=trunc.var_max, 0..=trunc.xdeg_max as usize),
            -5i64..=5,
        );
        proptest::collection::vec(term, 0..6).prop_map(move |ts| {
            Series::from_terms(
                trunc,
                ts.into_iter().map(|(t, idx, c)| (Monomial::from_indices(t, &idx), q(c))),
            )
        })
    }

    const PT: TruncationSpec = TruncationSpec { t_max: 5, xdeg_max: 3, var_max: 3 };

    proptest! {
        #[test]
        fn ring_laws(a in arb_series(PT), b in arb_series(PT), c in arb_series(PT)) {
            prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
            prop_assert_eq!(a.add(&b).unwrap().add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
            prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
            prop_assert_eq!(
                a.mul(&b.add(&c).unwrap()).unwrap(),
                a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap()
            );
            prop_assert!(a.sub(&a).unwrap().is_zero());
        }

        #[test]
        fn derivative_inverts_integral(a in arb_series(PT)) {
            let low = TruncationSpec { t_max: PT.t_max - 1, ..PT };
            let a = a.restrict(low).unwrap();
            let a_full = Series::from_terms(PT, a.terms().map(|(m, c)| (*m, c.clone())));
            prop_assert_eq!(a_full.integrate_dt().d_dt(), a);
        }

        #[test]
        fn truncation_monotone(a in arb_series(PT), b in arb_series(PT)) {
            let small = TruncationSpec { t_max: 3, xdeg_max: 2, var_max: 2 };
            let direct = a.restrict(small).unwrap().mul(&b.restrict(small).unwrap()).unwrap();
            let via_big = a.mul(&b).unwrap().restrict(small).unwrap();
            prop_assert_eq!(direct, via_big);
            let direct_pow = a.restrict(small).unwrap().pow(3);
            prop_assert_eq!(direct_pow, a.pow(3).restrict(small).unwrap());
        }
    }
}
