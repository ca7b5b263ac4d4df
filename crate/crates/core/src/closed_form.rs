//! Bell and Stirling tables, the exponential generating function of the
//! `swrec` totals, and the Bell-number formula for those totals.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::{factorial, rat, rat_from_int, Integer, Rational, UniSeries};

/// Environment variable naming the directory of the optional Bell cache.
pub const CACHE_DIR_ENV: &str = "SWREC_BELL_CACHE_DIR";
pub const CACHE_FILE_NAME: &str = "bell.txt";

/// Stirling rows past this are not built by [`BellStirlingTables::build`];
/// the triangle is quadratic in size while Bell numbers alone are linear.
pub const DEFAULT_STIRLING_ROWS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BellStirlingTables {
    bell: Vec<Integer>,
    /// `stirling[n][k]` for `k = 0..=n`.
    stirling: Vec<Vec<Integer>>,
}

impl BellStirlingTables {
    /// Bell numbers through `max_n` and Stirling rows through `min(max_n, 64)`.
    pub fn build(max_n: usize) -> Self {
        Self::build_with_stirling_rows(max_n, max_n.min(DEFAULT_STIRLING_ROWS))
    }

    pub fn build_with_stirling_rows(max_n: usize, stirling_rows: usize) -> Self {
        BellStirlingTables {
            bell: bell_triangle(max_n),
            stirling: stirling_triangle(stirling_rows.min(max_n)),
        }
    }

    fn from_bell(bell: Vec<Integer>, stirling_rows: usize) -> Self {
        let rows = stirling_rows.min(bell.len() - 1);
        BellStirlingTables {
            bell,
            stirling: stirling_triangle(rows),
        }
    }

    pub fn max_n(&self) -> usize {
        self.bell.len() - 1
    }

    pub fn stirling_rows(&self) -> usize {
        self.stirling.len() - 1
    }

    pub fn bell(&self, n: usize) -> &Integer {
        &self.bell[n]
    }

    pub fn bells(&self) -> &[Integer] {
        &self.bell
    }

    /// `None` outside the built triangle or when `k > n`.
    pub fn stirling(&self, n: usize, k: usize) -> Option<&Integer> {
        self.stirling.get(n)?.get(k)
    }

    pub fn require(&self, n: usize) -> Result<()> {
        if n > self.max_n() {
            return Err(Error::usage(format!(
                "tables cover n <= {} but {n} is needed",
                self.max_n()
            )));
        }
        Ok(())
    }
}

/// Bell numbers via the Bell (Aitken) triangle: each row starts with the
/// last entry of the previous row, and each entry adds its left neighbour to
/// the entry above that neighbour.
fn bell_triangle(max_n: usize) -> Vec<Integer> {
    let mut bell = Vec::with_capacity(max_n + 1);
    let mut row = vec![Integer::one()];
    bell.push(Integer::one());
    for _ in 0..max_n {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().unwrap().clone());
        for v in &row {
            let left = next.last().unwrap().clone();
            next.push(left + v);
        }
        bell.push(next[0].clone());
        row = next;
    }
    bell
}

/// `S(n, k) = k S(n-1, k) + S(n-1, k-1)`.
fn stirling_triangle(rows: usize) -> Vec<Vec<Integer>> {
    let mut tri: Vec<Vec<Integer>> = vec![vec![Integer::one()]];
    for n in 1..=rows {
        let prev = &tri[n - 1];
        let mut row = vec![Integer::zero(); n + 1];
        for (k, slot) in row.iter_mut().enumerate().skip(1) {
            let stay = prev
                .get(k)
                .map_or_else(Integer::zero, |s| s * Integer::from(k));
            *slot = stay + &prev[k - 1];
        }
        tri.push(row);
    }
    tri
}

pub fn build_tables(max_n: usize) -> BellStirlingTables {
    BellStirlingTables::build(max_n)
}

/// Writes `<n> <B_n>` per line.
pub fn write_bell_cache(path: &Path, tables: &BellStirlingTables) -> Result<()> {
    let mut out = Vec::new();
    for (n, b) in tables.bells().iter().enumerate() {
        writeln!(out, "{n} {b}")?;
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn read_bell_cache(path: &Path) -> Result<Vec<Integer>> {
    let text = fs::read_to_string(path)?;
    let mut bell = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let bad = || {
            Error::Validation(format!(
                "{}:{}: malformed line",
                path.display(),
                line_no + 1
            ))
        };
        let (n, b) = line.trim().split_once(' ').ok_or_else(bad)?;
        let n: usize = n.parse().map_err(|_| bad())?;
        let b: Integer = b.trim().parse().map_err(|_| bad())?;
        if n != bell.len() {
            return Err(bad());
        }
        bell.push(b);
    }
    if bell.first() != Some(&Integer::one()) {
        return Err(Error::Validation(format!(
            "{}: missing B_0 = 1",
            path.display()
        )));
    }
    Ok(bell)
}

pub fn cache_path(dir: &Path) -> PathBuf {
    dir.join(CACHE_FILE_NAME)
}

/// Tables through `max_n`, reusing `dir/bell.txt` when it is long enough
/// and rewriting it otherwise. An absent file just means a rebuild.
pub fn load_or_build(max_n: usize, dir: Option<&Path>) -> Result<BellStirlingTables> {
    let Some(dir) = dir else {
        return Ok(BellStirlingTables::build(max_n));
    };
    let path = cache_path(dir);
    if path.exists() {
        let mut bell = read_bell_cache(&path)?;
        if bell.len() > max_n {
            bell.truncate(max_n + 1);
            return Ok(BellStirlingTables::from_bell(bell, DEFAULT_STIRLING_ROWS));
        }
    }
    let tables = BellStirlingTables::build(max_n);
    fs::create_dir_all(dir)?;
    write_bell_cache(&path, &tables)?;
    Ok(tables)
}

/// `e^{e^x - 1}` with coefficients `B_n / n!` taken from the tables.
pub fn bell_egf(order: usize, tables: &BellStirlingTables) -> Result<UniSeries> {
    tables.require(order)?;
    Ok(UniSeries::from_coeffs(
        order,
        (0..=order).map(|n| Rational::new(tables.bell(n).clone(), factorial(n))),
    ))
}

/// `e^{jx} e^{e^x - 1}`, for `j <= 3`.
pub fn shifted_bell_series(
    j: usize,
    order: usize,
    tables: &BellStirlingTables,
) -> Result<UniSeries> {
    if j > 3 {
        return Err(Error::usage(format!("shift j = {j} must be at most 3")));
    }
    bell_egf(order, tables)?.mul(&UniSeries::exp_linear(order, &rat(j as i64, 1)))
}

/// Bell-number combination equal to `n! [x^n] e^{jx} e^{e^x - 1}`:
/// `B_n`, `B_{n+1}`, `B_{n+2} - B_{n+1}`, `B_{n+3} - 3 B_{n+2} + 2 B_{n+1}`.
pub fn shifted_bell_identity(j: usize, n: usize, tables: &BellStirlingTables) -> Result<Integer> {
    tables.require(n + j)?;
    let b = |h: usize| tables.bell(n + h).clone();
    Ok(match j {
        0 => b(0),
        1 => b(1),
        2 => b(2) - b(1),
        3 => b(3) - b(2) * 3 + b(1) * 2,
        _ => return Err(Error::usage(format!("shift j = {j} must be at most 3"))),
    })
}

/// `W(x) = e^{e^x-1} (3/4 e^{3x} + 3/2 e^{2x} - 7/4 e^x - x e^{2x} - 3/2 x e^x - 1/2)`,
/// whose coefficient `n! [x^n]` is the `swrec` total over all of `P_n`.
pub fn egf_w(order: usize, tables: &BellStirlingTables) -> Result<UniSeries> {
    let bell = bell_egf(order, tables)?;
    let e = |m: i64| UniSeries::exp_linear(order, &rat(m, 1));
    let bracket = e(3)
        .scale(&rat(3, 4))
        .add(&e(2).scale(&rat(3, 2)))?
        .sub(&e(1).scale(&rat(7, 4)))?
        .sub(&e(2).shift(1))?
        .sub(&e(1).shift(1).scale(&rat(3, 2)))?
        .sub(&UniSeries::one(order).scale(&rat(1, 2)))?;
    bell.mul(&bracket)
}

/// `3/4 (B_{n+3} - B_{n+2}) - (n + 7/4) B_{n+1} - (n + 1) B_n / 2`.
pub fn total_swrec_formula(n: usize, tables: &BellStirlingTables) -> Result<Integer> {
    tables.require(n + 3)?;
    let b = |h: usize| rat_from_int(tables.bell(n + h).clone());
    let nn = rat(n as i64, 1);
    let total =
        rat(3, 4) * (b(3) - b(2)) - (&nn + rat(7, 4)) * b(1) - (nn + rat(1, 1)) * b(0) / rat(2, 1);
    if !total.is_integer() {
        return Err(Error::Consistency(format!(
            "total for n = {n} is {total}, not an integer"
        )));
    }
    Ok(total.to_integer())
}

/// `n! [x^n] W(x)`.
pub fn total_swrec_egf(n: usize, tables: &BellStirlingTables) -> Result<Integer> {
    let w = egf_w(n, tables)?;
    let c = w.egf_coeff(n);
    if !c.is_integer() {
        return Err(Error::Consistency(format!("n! [x^{n}] W = {c}")));
    }
    Ok(c.to_integer())
}
