//! Exact integers, rationals and truncated power series.
//!
//! [`UniSeries`] is a dense series in `x` with rational coefficients.
//! [`BiSeries`] is a series in `x` whose coefficients are sparse polynomials
//! in `q` with integer coefficients; only the `x`-degree is truncated.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Integer = BigInt;
pub type Rational = BigRational;

pub fn int(v: i64) -> Integer {
    Integer::from(v)
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(Integer::from(num), Integer::from(den))
}

pub fn rat_from_int(v: Integer) -> Rational {
    Rational::from_integer(v)
}

pub fn factorial(n: usize) -> Integer {
    (1..=n).fold(Integer::one(), |acc, i| acc * Integer::from(i))
}

pub fn binomial(n: usize, k: usize) -> Integer {
    if k > n {
        return Integer::zero();
    }
    let k = k.min(n - k);
    let mut acc = Integer::one();
    for i in 0..k {
        acc = acc * Integer::from(n - i) / Integer::from(i + 1);
    }
    acc
}

fn check_orders(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::usage(format!("series orders differ: {a} vs {b}")));
    }
    Ok(())
}

/// Power series in one variable, truncated after `x^order`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniSeries {
    coeffs: Vec<Rational>,
}

impl UniSeries {
    pub fn zero(order: usize) -> Self {
        UniSeries {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(order, 0, Rational::one())
    }

    /// `c * x^power`; vanishes when `power > order`.
    pub fn monomial(order: usize, power: usize, c: Rational) -> Self {
        let mut s = Self::zero(order);
        if power <= order {
            s.coeffs[power] = c;
        }
        s
    }

    /// Takes the first `order + 1` values, padding with zeros.
    pub fn from_coeffs<I>(order: usize, coeffs: I) -> Self
    where
        I: IntoIterator<Item = Rational>,
    {
        let mut s = Self::zero(order);
        for (slot, c) in s.coeffs.iter_mut().zip(coeffs) {
            *slot = c;
        }
        s
    }

    pub fn from_ints<I>(order: usize, coeffs: I) -> Self
    where
        I: IntoIterator<Item = i64>,
    {
        Self::from_coeffs(order, coeffs.into_iter().map(|c| rat(c, 1)))
    }

    /// `1 / (1 - ratio * x)`.
    pub fn geometric(order: usize, ratio: &Rational) -> Self {
        let mut s = Self::zero(order);
        let mut p = Rational::one();
        for c in s.coeffs.iter_mut() {
            *c = p.clone();
            p *= ratio;
        }
        s
    }

    /// `exp(m * x)`.
    pub fn exp_linear(order: usize, m: &Rational) -> Self {
        let mut s = Self::zero(order);
        let mut term = Rational::one();
        for (n, c) in s.coeffs.iter_mut().enumerate() {
            if n > 0 {
                term = term * m / rat(n as i64, 1);
            }
            *c = term.clone();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> &Rational {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `n! [x^n]`, the sequence term when `self` is read as an EGF.
    pub fn egf_coeff(&self, n: usize) -> Rational {
        &self.coeffs[n] * rat_from_int(factorial(n))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &UniSeries) -> Result<UniSeries> {
        check_orders(self.order(), other.order())?;
        Ok(UniSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &UniSeries) -> Result<UniSeries> {
        check_orders(self.order(), other.order())?;
        Ok(UniSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, c: &Rational) -> UniSeries {
        UniSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &UniSeries) -> Result<UniSeries> {
        check_orders(self.order(), other.order())?;
        let order = self.order();
        let mut out = Self::zero(order);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=order - i].iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Multiplies by `x^k`, dropping what falls past the order.
    pub fn shift(&self, k: usize) -> UniSeries {
        let order = self.order();
        let mut out = Self::zero(order);
        for n in k..=order {
            out.coeffs[n] = self.coeffs[n - k].clone();
        }
        out
    }

    /// `exp(self)` from `n b_n = sum_{j=1}^{n} j a_j b_{n-j}`, i.e. `b' = a' b`.
    pub fn exp(&self) -> Result<UniSeries> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::domain("exp requires a zero constant term"));
        }
        let order = self.order();
        let mut b = Self::zero(order);
        b.coeffs[0] = Rational::one();
        for n in 1..=order {
            let mut acc = Rational::zero();
            for j in 1..=n {
                let a = &self.coeffs[j];
                if !a.is_zero() {
                    acc += a * &b.coeffs[n - j] * rat(j as i64, 1);
                }
            }
            b.coeffs[n] = acc / rat(n as i64, 1);
        }
        Ok(b)
    }

    pub fn reciprocal(&self) -> Result<UniSeries> {
        let a0 = &self.coeffs[0];
        if a0.is_zero() {
            return Err(Error::domain("reciprocal requires a nonzero constant term"));
        }
        let inv = a0.recip();
        let order = self.order();
        let mut b = Self::zero(order);
        b.coeffs[0] = inv.clone();
        for n in 1..=order {
            let mut acc = Rational::zero();
            for j in 1..=n {
                let a = &self.coeffs[j];
                if !a.is_zero() {
                    acc += a * &b.coeffs[n - j];
                }
            }
            b.coeffs[n] = -acc * &inv;
        }
        Ok(b)
    }
}

impl fmt::Display for UniSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            first = false;
            let abs = c.abs();
            match n {
                0 => write!(f, "{abs}")?,
                _ if abs.is_one() => write!(f, "x^{n}")?,
                _ => write!(f, "{abs}*x^{n}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(x^{})", self.order() + 1)
    }
}

/// Sparse polynomial in `q`: exponent to nonzero coefficient.
pub type QPoly = BTreeMap<u64, Integer>;

/// Power series in `x` with polynomial coefficients in `q`, truncated in `x` only.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BiSeries {
    coeffs: Vec<QPoly>,
}

impl BiSeries {
    pub fn zero(order: usize) -> Self {
        BiSeries {
            coeffs: vec![QPoly::new(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(order, 0, 0, Integer::one())
    }

    /// `c * x^n * q^s`.
    pub fn monomial(order: usize, n: usize, s: u64, c: Integer) -> Self {
        let mut out = Self::zero(order);
        out.add_term(n, s, c);
        out
    }

    /// `x^lead * q^shift / (1 - ratio * x * q^step)`, expanded as a geometric series.
    pub fn geometric_factor(order: usize, lead: usize, shift: u64, ratio: u64, step: u64) -> Self {
        let mut out = Self::zero(order);
        let mut c = Integer::one();
        let mut j = 0u64;
        while lead + (j as usize) <= order {
            out.add_term(lead + j as usize, shift + j * step, c.clone());
            c *= ratio;
            j += 1;
        }
        out
    }

    /// Adds `c * x^n * q^s` in place; terms past the order are dropped.
    pub fn add_term(&mut self, n: usize, s: u64, c: Integer) {
        if n > self.order() || c.is_zero() {
            return;
        }
        let slot = self.coeffs[n].entry(s).or_insert_with(Integer::zero);
        *slot += c;
        if slot.is_zero() {
            self.coeffs[n].remove(&s);
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// The `q`-polynomial multiplying `x^n`.
    pub fn coeff(&self, n: usize) -> &QPoly {
        &self.coeffs[n]
    }

    /// Every stored `(n, s, c)` in increasing `(n, s)` order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, u64, &Integer)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .flat_map(|(n, poly)| poly.iter().map(move |(s, c)| (n, *s, c)))
    }

    pub fn add(&self, other: &BiSeries) -> Result<BiSeries> {
        check_orders(self.order(), other.order())?;
        let mut out = self.clone();
        for (n, s, c) in other.terms() {
            out.add_term(n, s, c.clone());
        }
        Ok(out)
    }

    pub fn mul(&self, other: &BiSeries) -> Result<BiSeries> {
        check_orders(self.order(), other.order())?;
        let order = self.order();
        let mut out = Self::zero(order);
        for (n1, p1) in self.coeffs.iter().enumerate() {
            for (n2, p2) in other.coeffs[..=order - n1].iter().enumerate() {
                for (s1, c1) in p1 {
                    for (s2, c2) in p2 {
                        out.add_term(n1 + n2, s1 + s2, c1 * c2);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Substitutes `x -> x * q^k`: each term `(n, s, c)` becomes `(n, s + k n, c)`.
    pub fn substitute_x_qpow(&self, k: u64) -> BiSeries {
        BiSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(n, poly)| {
                    poly.iter()
                        .map(|(s, c)| (s + k * n as u64, c.clone()))
                        .collect()
                })
                .collect(),
        }
    }

    /// `d/dq` followed by `q = 1`: the `n`-th coefficient becomes `sum_s s * c_{n,s}`.
    pub fn q_weighted_sum(&self) -> UniSeries {
        UniSeries::from_coeffs(
            self.order(),
            self.coeffs.iter().map(|poly| {
                let total: Integer = poly.iter().map(|(s, c)| c * Integer::from(*s)).sum();
                rat_from_int(total)
            }),
        )
    }

    /// `q = 1`.
    pub fn at_q_one(&self) -> UniSeries {
        UniSeries::from_coeffs(
            self.order(),
            self.coeffs
                .iter()
                .map(|poly| rat_from_int(poly.values().sum())),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn series(order: usize, cs: &[i64]) -> UniSeries {
        UniSeries::from_ints(order, cs.iter().copied())
    }

    fn qpoly(pairs: &[(u64, i64)]) -> QPoly {
        pairs.iter().map(|&(s, c)| (s, int(c))).collect()
    }

    #[test]
    fn difference_of_squares() {
        let p = series(3, &[1, 1]).mul(&series(3, &[1, -1])).unwrap();
        assert_eq!(p, series(3, &[1, 0, -1]));
    }

    #[test]
    fn multiplicative_identity() {
        let s = series(4, &[2, -3, 0, 5, 1]);
        assert_eq!(s.mul(&UniSeries::one(4)).unwrap(), s);
    }

    #[test]
    fn geometric_squared() {
        let g = series(3, &[1, 1, 1, 1]);
        assert_eq!(g.mul(&g).unwrap(), series(3, &[1, 2, 3, 4]));
    }

    #[test]
    fn mismatched_orders_rejected() {
        let a = UniSeries::one(3);
        let b = UniSeries::one(4);
        assert!(matches!(a.mul(&b), Err(Error::Usage(_))));
        assert!(matches!(a.add(&b), Err(Error::Usage(_))));
        let c = BiSeries::one(2);
        assert!(matches!(c.mul(&BiSeries::one(3)), Err(Error::Usage(_))));
    }

    #[test]
    fn exp_of_zero_and_x() {
        assert_eq!(UniSeries::zero(5).exp().unwrap(), UniSeries::one(5));
        let e = UniSeries::monomial(4, 1, rat(1, 1)).exp().unwrap();
        let want =
            UniSeries::from_coeffs(4, [rat(1, 1), rat(1, 1), rat(1, 2), rat(1, 6), rat(1, 24)]);
        assert_eq!(e, want);
    }

    #[test]
    fn exp_of_bell_exponent_gives_bell_numbers() {
        let ex_minus_one = UniSeries::exp_linear(5, &rat(1, 1))
            .sub(&UniSeries::one(5))
            .unwrap();
        let b = ex_minus_one.exp().unwrap();
        let got: Vec<Rational> = (0..=5).map(|n| b.egf_coeff(n)).collect();
        let want: Vec<Rational> = [1, 1, 2, 5, 15, 52].iter().map(|&v| rat(v, 1)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn exp_rejects_constant_term() {
        assert!(matches!(UniSeries::one(3).exp(), Err(Error::Domain(_))));
    }

    #[test]
    fn reciprocal_geometric() {
        let r = series(3, &[1, -1]).reciprocal().unwrap();
        assert_eq!(r, series(3, &[1, 1, 1, 1]));
        let r = series(2, &[1, -2]).reciprocal().unwrap();
        assert_eq!(r, series(2, &[1, 2, 4]));
        assert_eq!(r, UniSeries::geometric(2, &rat(2, 1)));
    }

    #[test]
    fn reciprocal_round_trip() {
        let a = series(6, &[1, 3, 1]);
        assert_eq!(a.reciprocal().unwrap().reciprocal().unwrap(), a);
    }

    #[test]
    fn reciprocal_rejects_zero_constant() {
        assert!(matches!(
            series(3, &[0, 1]).reciprocal(),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn shift_truncates() {
        assert_eq!(series(3, &[1, 2, 3, 4]).shift(2), series(3, &[0, 0, 1, 2]));
    }

    #[test]
    fn display_is_readable() {
        let s = UniSeries::from_coeffs(2, [rat(0, 1), rat(-1, 2), rat(1, 1)]);
        assert_eq!(s.to_string(), "-1/2*x^1 + x^2 + O(x^3)");
    }

    #[test]
    fn bi_monomial_product() {
        let a = BiSeries::monomial(4, 1, 1, int(1));
        let b = BiSeries::monomial(4, 1, 2, int(1));
        assert_eq!(a.mul(&b).unwrap(), BiSeries::monomial(4, 2, 3, int(1)));
    }

    #[test]
    fn bi_identity() {
        let a = BiSeries::geometric_factor(5, 1, 3, 2, 4);
        assert_eq!(a.mul(&BiSeries::one(5)).unwrap(), a);
    }

    #[test]
    fn bi_product_of_two_factors() {
        // xq^3/(1 - xq^2) * xq^2/(1 - 2x)
        let a = BiSeries::geometric_factor(3, 1, 3, 1, 2);
        let b = BiSeries::geometric_factor(3, 1, 2, 2, 0);
        let p = a.mul(&b).unwrap();
        assert_eq!(p.coeff(3), &qpoly(&[(5, 2), (7, 1)]));
    }

    #[test]
    fn substitution() {
        let a = BiSeries::monomial(3, 1, 1, int(1));
        assert_eq!(a.substitute_x_qpow(2), BiSeries::monomial(3, 1, 3, int(1)));
        let b = BiSeries::geometric_factor(4, 1, 2, 3, 1);
        assert_eq!(b.substitute_x_qpow(0), b);
        let c = BiSeries::monomial(3, 2, 5, int(1));
        assert_eq!(c.substitute_x_qpow(3), BiSeries::monomial(3, 2, 11, int(1)));
    }

    #[test]
    fn weighted_sum_of_monomials() {
        assert_eq!(
            BiSeries::monomial(2, 1, 1, int(1)).q_weighted_sum(),
            series(2, &[0, 1])
        );
        assert_eq!(
            BiSeries::monomial(2, 2, 5, int(1)).q_weighted_sum(),
            series(2, &[0, 0, 5])
        );
    }

    #[test]
    fn cancelling_terms_are_removed() {
        let mut a = BiSeries::monomial(2, 1, 4, int(3));
        a.add_term(1, 4, int(-3));
        assert!(a.coeff(1).is_empty());
        assert_eq!(a, BiSeries::zero(2));
    }

    #[test]
    fn small_binomials_and_factorials() {
        assert_eq!(binomial(5, 2), int(10));
        assert_eq!(binomial(2, 3), int(0));
        assert_eq!(factorial(0), int(1));
        assert_eq!(factorial(6), int(720));
    }

    const ORDER: usize = 7;

    fn arb_series() -> impl Strategy<Value = UniSeries> {
        prop::collection::vec((-9i64..=9, 1i64..=4), ORDER + 1)
            .prop_map(|cs| UniSeries::from_coeffs(ORDER, cs.into_iter().map(|(n, d)| rat(n, d))))
    }

    fn arb_unit_series() -> impl Strategy<Value = UniSeries> {
        (arb_series(), prop_oneof![-5i64..=-1, 1i64..=5]).prop_map(|(s, c0)| {
            let mut cs = s.coeffs().to_vec();
            cs[0] = rat(c0, 1);
            UniSeries::from_coeffs(ORDER, cs)
        })
    }

    fn arb_bi() -> impl Strategy<Value = BiSeries> {
        prop::collection::vec((0usize..=5, 0u64..=6, -4i64..=4), 0..6).prop_map(|terms| {
            let mut b = BiSeries::zero(5);
            for (n, s, c) in terms {
                b.add_term(n, s, int(c));
            }
            b
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn uni_mul_commutes(a in arb_series(), b in arb_series()) {
            prop_assert_eq!(a.mul(&b).unwrap(), b.mul(&a).unwrap());
        }

        #[test]
        fn reciprocal_is_inverse(a in arb_unit_series()) {
            let r = a.reciprocal().unwrap();
            prop_assert_eq!(a.mul(&r).unwrap(), UniSeries::one(ORDER));
        }

        #[test]
        fn bi_mul_associates(a in arb_bi(), b in arb_bi(), c in arb_bi()) {
            let left = a.mul(&b).unwrap().mul(&c).unwrap();
            let right = a.mul(&b.mul(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn stored_q_coefficients_nonzero(a in arb_bi(), b in arb_bi()) {
            let p = a.mul(&b).unwrap();
            prop_assert!(p.terms().all(|(_, _, c)| !c.is_zero()));
        }
    }
}
