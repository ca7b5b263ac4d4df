//! Generating functions for `swrec` over partitions with exactly `k` blocks.
//!
//! `P_k(x, q) = sum_n sum_{pi in P_{n,k}} x^n q^{swrec(pi)}` is built two
//! ways: as a product of `k` geometric factors and by iterating the
//! first-block recurrence. Its `q`-derivative at `q = 1` has a closed form in
//! `x` and, after `x = 1/y`, a partial-fraction decomposition with double
//! poles at `y = 1..k`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, rat, rat_from_int, BiSeries, Rational, UniSeries};

fn check_k(k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::usage("k must be at least 1"));
    }
    Ok(())
}

/// `1 + 2 + ... + k`.
fn triangular(k: usize) -> u64 {
    (k * (k + 1) / 2) as u64
}

/// `P_k` as the product over `i = 1..k` of
/// `x q^{i + (k+1-i)(k-i)} / (1 - i x q^{T_i})`, `T_i = (i+1) + ... + k`.
pub fn gf_product(k: usize, order: usize) -> Result<BiSeries> {
    check_k(k)?;
    let mut acc = BiSeries::one(order);
    for i in 1..=k {
        let shift = (i + (k + 1 - i) * (k - i)) as u64;
        let step = triangular(k) - triangular(i);
        let factor = BiSeries::geometric_factor(order, 1, shift, i as u64, step);
        acc = acc.mul(&factor)?;
    }
    Ok(acc)
}

/// `P_k` from `P_1 = xq / (1 - x)` and `P_j(x, q) = x q^j / (1 - j x) * P_{j-1}(x q^j, q)`.
pub fn gf_recurrence(k: usize, order: usize) -> Result<BiSeries> {
    check_k(k)?;
    let mut p = BiSeries::geometric_factor(order, 1, 1, 1, 0);
    for j in 2..=k {
        let lead = BiSeries::geometric_factor(order, 1, j as u64, j as u64, 0);
        p = lead.mul(&p.substitute_x_qpow(j as u64))?;
    }
    Ok(p)
}

/// `i (i + 1 + k) (k - i) / 2`, the numerator attached to the pole at `i`.
fn pole_weight(k: usize, i: usize) -> Rational {
    rat((i * (i + 1 + k) * (k - i)) as i64, 2)
}

/// `C(k+1, 2) + 2 C(k+1, 3) = k (k+1) (2k+1) / 6`.
fn constant_term(k: usize) -> Rational {
    rat_from_int(binomial(k + 1, 2) + binomial(k + 1, 3) * 2)
}

/// Closed form of `d/dq P_k(x, q)` at `q = 1`, expanded in `x`:
///
/// `x^k c_k / prod(1 - i x) + x^{k+1} / prod(1 - i x) * sum_i w_i / (1 - i x)`.
pub fn lemma2_series(k: usize, order: usize) -> Result<UniSeries> {
    check_k(k)?;
    let mut inv_prod = UniSeries::one(order);
    let mut tail = UniSeries::zero(order);
    for i in 1..=k {
        let geo = UniSeries::geometric(order, &rat(i as i64, 1));
        inv_prod = inv_prod.mul(&geo)?;
        tail = tail.add(&geo.scale(&pole_weight(k, i)))?;
    }
    let head = inv_prod.scale(&constant_term(k)).shift(k);
    let tail = inv_prod.mul(&tail)?.shift(k + 1);
    head.add(&tail)
}

/// The same function at `x = 1/y`:
/// `prod(y - i)^{-1} * (k(k+1)(2k+1)/6 + sum_i w_i / (y - i))`.
pub fn lemma2_eval_at(k: usize, y: &Rational) -> Result<Rational> {
    check_k(k)?;
    check_not_pole(k, y)?;
    let mut denom = Rational::one();
    let mut bracket = rat((k * (k + 1) * (2 * k + 1)) as i64, 6);
    for i in 1..=k {
        let d = y - rat(i as i64, 1);
        bracket += pole_weight(k, i) / &d;
        denom *= d;
    }
    Ok(bracket / denom)
}

fn check_not_pole(k: usize, y: &Rational) -> Result<()> {
    if y.is_integer() && *y >= Rational::one() && *y <= rat(k as i64, 1) {
        return Err(Error::domain(format!("y = {y} is a pole (1 <= y <= {k})")));
    }
    Ok(())
}

/// Coefficients of `sum_{m=1}^{k} a_m / (y - m)^2 + b_m / (y - m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialFractionDecomposition {
    k: usize,
    a: Vec<Rational>,
    b: Vec<Rational>,
}

impl PartialFractionDecomposition {
    pub fn new(k: usize, a: Vec<Rational>, b: Vec<Rational>) -> Result<Self> {
        if a.len() != k || b.len() != k {
            return Err(Error::usage(format!(
                "expected {k} coefficients per family, got {} and {}",
                a.len(),
                b.len()
            )));
        }
        Ok(PartialFractionDecomposition { k, a, b })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Double-pole coefficient at `y = m` (1-based).
    pub fn a(&self, m: usize) -> &Rational {
        &self.a[m - 1]
    }

    /// Simple-pole coefficient at `y = m` (1-based).
    pub fn b(&self, m: usize) -> &Rational {
        &self.b[m - 1]
    }

    pub fn eval(&self, y: &Rational) -> Result<Rational> {
        partial_fraction_eval(self, y)
    }
}

/// `a_{k,m} = (-1)^{k-m} m (1+k+m) (k-m) / (2 (m-1)! (k-m)!)` and
/// `b_{k,m} = (-1)^{k-m} (k^2 (m/4 + 1) + k (m^2/2 + 3m/4 + 1) - (3m^2/2 + m)) / ((m-1)! (k-m)!)`.
pub fn partial_fraction_coeffs(k: usize) -> Result<PartialFractionDecomposition> {
    check_k(k)?;
    let mut a = Vec::with_capacity(k);
    let mut b = Vec::with_capacity(k);
    for m in 1..=k {
        let sign = if (k - m).is_multiple_of(2) { 1 } else { -1 };
        let denom = rat_from_int(factorial(m - 1) * factorial(k - m));
        let (ki, mi) = (k as i64, m as i64);
        a.push(rat(sign * mi * (1 + ki + mi) * (ki - mi), 2) / &denom);
        let num = rat(ki * ki, 1) * (rat(mi, 4) + rat(1, 1))
            + rat(ki, 1) * (rat(mi * mi, 2) + rat(3 * mi, 4) + rat(1, 1))
            - (rat(3 * mi * mi, 2) + rat(mi, 1));
        b.push(num * rat(sign, 1) / &denom);
    }
    PartialFractionDecomposition::new(k, a, b)
}

pub fn partial_fraction_eval(d: &PartialFractionDecomposition, y: &Rational) -> Result<Rational> {
    check_not_pole(d.k, y)?;
    let mut acc = Rational::zero();
    for m in 1..=d.k {
        let t = y - rat(m as i64, 1);
        acc += d.a(m) / (&t * &t) + d.b(m) / &t;
    }
    Ok(acc)
}

/// Residues of [`lemma2_eval_at`]'s function found by Laurent expansion at
/// each pole, without using the closed forms of [`partial_fraction_coeffs`].
///
/// With `y = m + t`, `t^2 f(m + t) = A(t) (c t + w_m + t sum_{i != m} w_i / (m - i + t))`
/// where `A(t) = prod_{i != m} 1 / (m - i + t)`; `a_m` and `b_m` are its
/// `t^0` and `t^1` coefficients.
pub fn residues_by_expansion(k: usize) -> Result<PartialFractionDecomposition> {
    check_k(k)?;
    const ORDER: usize = 1;
    let mut a = Vec::with_capacity(k);
    let mut b = Vec::with_capacity(k);
    for m in 1..=k {
        let mut outer = UniSeries::one(ORDER);
        let mut others = UniSeries::zero(ORDER);
        for i in (1..=k).filter(|&i| i != m) {
            let lin = UniSeries::from_coeffs(ORDER, [rat(m as i64 - i as i64, 1), Rational::one()]);
            let inv = lin.reciprocal()?;
            outer = outer.mul(&inv)?;
            others = others.add(&inv.scale(&pole_weight(k, i)))?;
        }
        let inner = UniSeries::monomial(ORDER, 0, pole_weight(k, m))
            .add(&UniSeries::monomial(ORDER, 1, constant_term(k)))?
            .add(&others.shift(1))?;
        let local = outer.mul(&inner)?;
        a.push(local.coeff(0).clone());
        b.push(local.coeff(1).clone());
    }
    PartialFractionDecomposition::new(k, a, b)
}

/// 25 rational points away from the poles `1..=k`: `k + 1 + j/2` for
/// `j < 20`, plus `0, -1/3, 1/2, 7/3` and `k + 1/2`.
pub fn sample_points(k: usize) -> Vec<Rational> {
    let k = k as i64;
    let mut pts: Vec<Rational> = (0..20).map(|j| rat(2 * (k + 1) + j, 2)).collect();
    pts.extend([
        rat(0, 1),
        rat(-1, 3),
        rat(1, 2),
        rat(7, 3),
        rat(2 * k + 1, 2),
    ]);
    pts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, QPoly};
    use crate::setpart::{for_each_rgs, swrec, swrec_histogram};

    fn qpoly(pairs: &[(u64, i64)]) -> QPoly {
        pairs.iter().map(|&(s, c)| (s, int(c))).collect()
    }

    #[test]
    fn single_block_product() {
        let p = gf_product(1, 3).unwrap();
        let mut want = BiSeries::zero(3);
        for n in 1..=3 {
            want.add_term(n, 1, int(1));
        }
        assert_eq!(p, want);
    }

    #[test]
    fn two_block_coefficients() {
        let p = gf_product(2, 4).unwrap();
        assert_eq!(p.coeff(2), &qpoly(&[(5, 1)]));
        assert_eq!(p.coeff(3), &qpoly(&[(5, 2), (7, 1)]));
        let r = gf_recurrence(2, 4).unwrap();
        assert_eq!(r.coeff(4), &qpoly(&[(5, 4), (7, 2), (9, 1)]));
    }

    #[test]
    fn recurrence_base_and_agreement() {
        assert_eq!(gf_recurrence(1, 8).unwrap(), gf_product(1, 8).unwrap());
        assert_eq!(gf_recurrence(3, 6).unwrap(), gf_product(3, 6).unwrap());
    }

    #[test]
    fn zero_blocks_rejected() {
        assert!(matches!(gf_product(0, 3), Err(Error::Usage(_))));
        assert!(matches!(lemma2_series(0, 3), Err(Error::Usage(_))));
        assert!(matches!(partial_fraction_coeffs(0), Err(Error::Usage(_))));
    }

    #[test]
    fn product_matches_histograms() {
        let order = 8;
        for k in 1..=order {
            let p = gf_product(k, order).unwrap();
            for n in 0..=order {
                let hist: QPoly = swrec_histogram(n, Some(k))
                    .into_iter()
                    .map(|(s, c)| (s, int(c as i64)))
                    .collect();
                assert_eq!(p.coeff(n), &hist, "n = {n}, k = {k}");
            }
        }
    }

    #[test]
    fn q_support_bounds() {
        let order = 9;
        for k in 1..=6 {
            let p = gf_product(k, order).unwrap();
            for (n, s, _) in p.terms() {
                assert!(s >= triangular(k));
                assert!(s <= (n * (n + 1) * (2 * n + 1) / 6) as u64);
            }
        }
    }

    #[test]
    fn minimum_swrec_is_sum_of_squares() {
        // Record j sits at position >= j, so 12...k1...1 is minimal.
        for n in 1..=9 {
            for k in 1..=n {
                let mut min = u64::MAX;
                for_each_rgs(n, Some(k), |w| min = min.min(swrec(w)));
                let squares = (k * (k + 1) * (2 * k + 1) / 6) as u64;
                assert_eq!(min, squares, "n = {n}, k = {k}");
                let p = gf_product(k, n).unwrap();
                assert_eq!(*p.coeff(n).keys().next().unwrap(), squares);
            }
        }
    }

    #[test]
    fn lemma2_examples() {
        let one = lemma2_series(1, 6).unwrap();
        assert_eq!(one, UniSeries::from_ints(6, [0, 1, 1, 1, 1, 1, 1]));
        assert_eq!(lemma2_series(2, 3).unwrap().coeff(3), &rat(17, 1));
        for n in 1..=9 {
            let s = lemma2_series(n, n).unwrap();
            assert_eq!(s.coeff(n), &rat((n * (n + 1) * (2 * n + 1) / 6) as i64, 1));
        }
    }

    #[test]
    fn lemma2_matches_weighted_sum() {
        for k in 1..=5 {
            let lhs = gf_product(k, 10).unwrap().q_weighted_sum();
            assert_eq!(lhs, lemma2_series(k, 10).unwrap(), "k = {k}");
        }
    }

    #[test]
    fn rational_form_values() {
        assert_eq!(lemma2_eval_at(1, &rat(2, 1)).unwrap(), rat(1, 1));
        assert_eq!(lemma2_eval_at(2, &rat(3, 1)).unwrap(), rat(3, 1));
        assert_eq!(lemma2_eval_at(2, &rat(4, 1)).unwrap(), rat(17, 18));
        assert!(matches!(
            lemma2_eval_at(3, &rat(2, 1)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn closed_form_coefficients() {
        let d = partial_fraction_coeffs(2).unwrap();
        assert_eq!((d.a(1), d.a(2)), (&rat(-2, 1), &rat(0, 1)));
        assert_eq!((d.b(1), d.b(2)), (&rat(-7, 1), &rat(7, 1)));
        let d = partial_fraction_coeffs(1).unwrap();
        assert_eq!((d.a(1), d.b(1)), (&rat(0, 1), &rat(1, 1)));
        for k in 1..=12 {
            assert!(partial_fraction_coeffs(k).unwrap().a(k).is_zero());
        }
    }

    #[test]
    fn expansion_oracle_spot_values() {
        let d = residues_by_expansion(2).unwrap();
        assert_eq!((d.a(1), d.b(1)), (&rat(-2, 1), &rat(-7, 1)));
        assert_eq!((d.a(2), d.b(2)), (&rat(0, 1), &rat(7, 1)));
        // k = 3 values from an independent symbolic decomposition.
        let d = residues_by_expansion(3).unwrap();
        assert_eq!(d.a(1), &rat(5, 2));
        assert_eq!(d.b(1), &rat(31, 4));
        assert_eq!(d.a(2), &rat(-6, 1));
        assert_eq!(d.b(2), &rat(-19, 1));
        assert_eq!(d.b(3), &rat(45, 4));
    }

    #[test]
    fn closed_form_matches_expansion() {
        for k in 1..=12 {
            assert_eq!(
                partial_fraction_coeffs(k).unwrap(),
                residues_by_expansion(k).unwrap(),
                "k = {k}"
            );
        }
    }

    #[test]
    fn reconstruction() {
        let d2 = partial_fraction_coeffs(2).unwrap();
        assert_eq!(d2.eval(&rat(3, 1)).unwrap(), rat(3, 1));
        assert_eq!(d2.eval(&rat(4, 1)).unwrap(), rat(17, 18));
        let d1 = partial_fraction_coeffs(1).unwrap();
        assert_eq!(d1.eval(&rat(2, 1)).unwrap(), rat(1, 1));
        assert!(matches!(d2.eval(&rat(1, 1)), Err(Error::Domain(_))));
        for k in 1..=10 {
            let d = partial_fraction_coeffs(k).unwrap();
            let pts = sample_points(k);
            assert_eq!(pts.len(), 25);
            for y in &pts {
                assert_eq!(d.eval(y).unwrap(), lemma2_eval_at(k, y).unwrap());
            }
        }
    }

    #[test]
    fn bad_family_lengths() {
        assert!(PartialFractionDecomposition::new(2, vec![rat(1, 1)], vec![]).is_err());
    }
}
