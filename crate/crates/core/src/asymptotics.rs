//! Saddle-point parameter `r` (`r e^r = n + 1`), the asymptotic estimate
//! `B_n n^3 / r^3 (1 + r/n)` of the `swrec` total, and the Bell-shift
//! approximation `B_{n+h} ~ B_n (n+h)! / (n! r^h)`.
//!
//! Bell numbers leave `f64` range near `n = 220`, so every magnitude is
//! carried as a natural logarithm.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::Sign;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::closed_form::{total_swrec_formula, BellStirlingTables};
use crate::error::{Error, Result};
use crate::exact::Integer;

pub const DEFAULT_TOLERANCE: f64 = 1e-12;
pub const MAX_NEWTON_ITERATIONS: usize = 100;
const MIN_START: f64 = 1e-3;

/// A positive real stored as its natural logarithm.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Magnitude {
    ln: f64,
}

impl Magnitude {
    pub fn from_ln(ln: f64) -> Self {
        Magnitude { ln }
    }

    pub fn ln(&self) -> f64 {
        self.ln
    }

    /// `None` when the value overflows `f64`.
    pub fn to_f64(&self) -> Option<f64> {
        let v = self.ln.exp();
        v.is_finite().then_some(v)
    }

    /// `m.mmmmmmeE` with a mantissa in `[1, 10)`.
    pub fn scientific(&self, digits: usize) -> String {
        let log10 = self.ln / std::f64::consts::LN_10;
        let mut exp = log10.floor();
        let mut mant = 10f64.powf(log10 - exp);
        // Rounding can push the mantissa to 10.
        if format!("{mant:.digits$}").starts_with("10") {
            mant /= 10.0;
            exp += 1.0;
        }
        format!("{mant:.digits$}e{}", exp as i64)
    }
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.scientific(6))
    }
}

impl Serialize for Magnitude {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.scientific(9))
    }
}

/// Natural log of a positive integer from its leading 64 bits and bit length.
pub fn ln_integer(x: &Integer) -> Result<f64> {
    if x.sign() != Sign::Plus {
        return Err(Error::domain(format!("ln of non-positive integer {x}")));
    }
    let shift = x.bits().saturating_sub(64);
    let top = (x >> shift).to_u64().expect("at most 64 bits after shift") as f64;
    Ok(top.ln() + shift as f64 * std::f64::consts::LN_2)
}

/// `ln(b!) - ln(a!)` for `a <= b`.
fn ln_falling(a: usize, b: usize) -> f64 {
    (a + 1..=b).map(|i| (i as f64).ln()).sum()
}

/// Positive root of `r e^r = t` with `|r e^r - t| / t <= tol`.
///
/// Newton's method on the convex increasing map `r -> r e^r - t` from
/// `max(ln t - ln ln t, 1e-3)`; after the first step the iterates decrease
/// monotonically to the root. Bisection takes over if Newton stalls.
pub fn solve_r(t: f64, tol: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::domain(format!("r e^r = t needs t > 0, got {t}")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::usage(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let residual = |r: f64| (r * r.exp() - t) / t;
    let lt = t.ln();
    let mut r = if lt > 1.0 { lt - lt.ln() } else { MIN_START };
    r = r.max(MIN_START);
    for _ in 0..MAX_NEWTON_ITERATIONS {
        let f = residual(r);
        if f.abs() <= tol {
            return Ok(r);
        }
        let slope = (1.0 + r) * r.exp() / t;
        let next = r - f / slope;
        if next.is_nan() || next <= 0.0 || next == r {
            break;
        }
        r = next;
    }
    bisect_r(t, tol)
}

fn bisect_r(t: f64, tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = (0.0f64, t.ln().max(1.0));
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        let f = (mid * mid.exp() - t) / t;
        if f.abs() <= tol || hi - lo <= f64::EPSILON * hi {
            return Ok(mid);
        }
        if f < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::Consistency(format!("no root of r e^r = {t} found")))
}

fn saddle(n: usize) -> Result<f64> {
    solve_r((n + 1) as f64, DEFAULT_TOLERANCE)
}

/// `B_n n^3 / r^3 (1 + r/n)`.
pub fn corollary_estimate(n: usize, tables: &BellStirlingTables) -> Result<Magnitude> {
    if n == 0 {
        return Err(Error::usage("the estimate needs n >= 1"));
    }
    tables.require(n)?;
    let r = saddle(n)?;
    let nf = n as f64;
    let ln = ln_integer(tables.bell(n))? + 3.0 * (nf.ln() - r.ln()) + (r / nf).ln_1p();
    Ok(Magnitude::from_ln(ln))
}

/// `|B_{n+h} n! r^h / (B_n (n+h)!) - 1|`.
pub fn bell_shift_check(n: usize, h: usize, tables: &BellStirlingTables) -> Result<f64> {
    tables.require(n + h)?;
    if h == 0 {
        return Ok(0.0);
    }
    let r = saddle(n)?;
    let ln_ratio =
        ln_integer(tables.bell(n + h))? - ln_integer(tables.bell(n))? - ln_falling(n, n + h)
            + h as f64 * r.ln();
    Ok(ln_ratio.exp_m1().abs())
}

fn as_decimal<S: Serializer>(v: &Integer, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Exact-versus-asymptotic diagnostics at one `n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsymptoticReport {
    pub n: usize,
    pub r: f64,
    #[serde(serialize_with = "as_decimal")]
    pub exact_total: Integer,
    pub estimate: Magnitude,
    /// `exact_total / estimate`.
    pub ratio: f64,
    /// Keyed by shift `h = 1, 2, 3`.
    pub bell_shift_errors: BTreeMap<usize, f64>,
}

pub fn asymptotic_report(
    ns: &[usize],
    tables: &BellStirlingTables,
) -> Result<Vec<AsymptoticReport>> {
    ns.iter()
        .map(|&n| {
            tables.require(n + 3)?;
            let r = saddle(n)?;
            let exact_total = total_swrec_formula(n, tables)?;
            let estimate = corollary_estimate(n, tables)?;
            let ratio = (ln_integer(&exact_total)? - estimate.ln()).exp();
            let bell_shift_errors = (1..=3)
                .map(|h| Ok((h, bell_shift_check(n, h, tables)?)))
                .collect::<Result<_>>()?;
            Ok(AsymptoticReport {
                n,
                r,
                exact_total,
                estimate,
                ratio,
                bell_shift_errors,
            })
        })
        .collect()
}
