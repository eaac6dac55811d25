//! Discriminant exponents: Schmidt's `(n+2)/4`, the pair bound
//! `2d - d(d-1)(d+4)/(6n)`, the general `dr` bound over admissible `(r, d)`,
//! the scan for the constant `c` in `X^{c (log n)^2}`, and the asymptotic
//! optimum `alpha = beta = 1/(2 log 2)`.
//!
//! Exponents are exact rationals. Only the ratio to `(log n)^2` is a float,
//! and logs are natural.

use std::fmt;

use num_bigint::BigUint;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinat::{self, binomial};
use crate::Error;

pub type Exponent = Ratio<i64>;

/// Constant claimed for all `n >= 6`.
pub const THEOREM_CONSTANT: f64 = 1.564;

/// `ceil(e^12)`, the default upper end of the constant scan.
pub const SCAN_UPPER_DEFAULT: u64 = 162_755;

/// Smallest degree covered by the general-`r` construction's stated hypothesis.
pub const LEMMA_MIN_N: u64 = 6;

/// Whether `C(d+r-1, r-1) = rn` is admitted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FeasibilityMode {
    Strict,
    Equality,
}

impl fmt::Display for FeasibilityMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FeasibilityMode::Strict => "strict",
            FeasibilityMode::Equality => "equality",
        })
    }
}

/// `(n + 2) / 4`.
pub fn schmidt_exponent(n: u64) -> Exponent {
    Ratio::new(n as i64 + 2, 4)
}

/// `sum_{i=2}^n i / (2n - 2)`: coefficient `a_i` ranges over `O(X^{i/(2n-2)})`.
pub fn schmidt_coefficient_sum(n: u64) -> Exponent {
    let denom = 2 * n as i64 - 2;
    (2..=n as i64).map(|i| Ratio::new(i, denom)).sum()
}

/// `n^2 + n - 2`, the exponent of `Y` when counting pairs by their
/// unmixed power sums alone.
pub fn naive_pair_exponent(n: u64) -> u64 {
    n * n + n - 2
}

/// Least `d` with `C(d+2,2) >= 2n+1` and the exponent `2d - d(d-1)(d+4)/(6n)`.
pub fn r2_exponent(n: u64) -> (u32, Exponent) {
    let d = combinat::r2_degree(n);
    let di = d as i64;
    let exp = Ratio::from_integer(2 * di) - Ratio::new(di * (di - 1) * (di + 4), 6 * n as i64);
    (d, exp)
}

/// The finite exception list for double points imposing independent
/// conditions on degree-`d` forms in `r` variables.
pub fn ah_exception(d: u64, r: u64, n: u64) -> bool {
    match d {
        2 => 2 <= n && n < r,
        3 => r == 5 && n == 7,
        4 => matches!((r, n), (3, 5) | (4, 9) | (5, 14)),
        _ => false,
    }
}

/// Triples excluded from the equality case.
fn equality_exception(d: u64, r: u64, n: u64) -> bool {
    matches!((d, r, n), (3, 5, 7) | (4, 5, 14))
}

fn admits(c_vs_rn: std::cmp::Ordering, d: u64, r: u64, n: u64, mode: FeasibilityMode) -> bool {
    use std::cmp::Ordering::*;
    let by_count = match c_vs_rn {
        Greater => true,
        Equal => mode == FeasibilityMode::Equality && !equality_exception(d, r, n),
        Less => false,
    };
    by_count && !ah_exception(d, r, n)
}

/// Explains why `(n, r, d)` is not admissible, or returns `Ok`.
pub fn check_feasible(n: u64, r: u64, d: u64, mode: FeasibilityMode) -> Result<(), Error> {
    if r < 3 || d < 1 || n < 1 {
        return Err(Error::InvalidArgument(format!(
            "feasibility needs r >= 3, d >= 1, n >= 1 (got n={n}, r={r}, d={d})"
        )));
    }
    let c = binomial(d + r - 1, r - 1)?;
    let rn = BigUint::from(r) * n;
    let ord = c.cmp(&rn);
    if admits(ord, d, r, n, mode) {
        return Ok(());
    }
    if ord == std::cmp::Ordering::Greater || (ord == std::cmp::Ordering::Equal && mode == FeasibilityMode::Equality) {
        Err(Error::Infeasible(format!("(d,r,n)=({d},{r},{n}) is an exceptional triple")))
    } else {
        Err(Error::Infeasible(format!("C({},{})={c} ≤ {rn}", d + r - 1, r - 1)))
    }
}

/// `C(d+r-1, r-1) > rn` (or `= rn` in equality mode), minus exceptional triples.
pub fn feasible(n: u64, r: u64, d: u64, mode: FeasibilityMode) -> bool {
    check_feasible(n, r, d, mode).is_ok()
}

/// Least admissible `d` for fixed `(n, r)` with `d * r < below`, if any.
///
/// `C(d+r-1, r-1)` is updated in place as `d` grows; the search stops as soon
/// as the binomial exceeds `rn`, so the running value never gets far above
/// `rn * (d + r)` and fits a `u128` exactly.
pub fn min_feasible_degree(n: u64, r: u64, mode: FeasibilityMode, below: u64) -> Option<u64> {
    let rn = r as u128 * n as u128;
    let mut c: u128 = 1; // C(r-1, 0)
    let mut d = 0u64;
    loop {
        d += 1;
        if d.checked_mul(r).is_none_or(|dr| dr >= below) {
            return None;
        }
        // C(d+r-1, d) = C(d+r-2, d-1) * (d+r-1) / d
        c = match c.checked_mul((d + r - 1) as u128) {
            Some(v) => v / d as u128,
            None => u128::MAX,
        };
        if admits(c.cmp(&rn), d, r, n, mode) {
            return Some(d);
        }
        if c == u128::MAX {
            return None;
        }
    }
}

/// Best `(r, d)` for the general bound `X^{dr}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneralChoice {
    pub r: u64,
    pub d: u64,
    pub dr: u64,
}

/// Minimizes `dr` over `3 <= r <= n` with `d` minimal for each `r`; ties go
/// to the smaller `r`.
pub fn best_general(n: u64, mode: FeasibilityMode) -> Option<GeneralChoice> {
    let mut best: Option<GeneralChoice> = None;
    let mut incumbent = u64::MAX;
    for r in 3..=n {
        // d >= 1, so dr >= r
        if r >= incumbent {
            break;
        }
        if let Some(d) = min_feasible_degree(n, r, mode, incumbent) {
            incumbent = d * r;
            best = Some(GeneralChoice { r, d, dr: incumbent });
        }
    }
    best
}

/// Per-degree comparison of all exponents.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub n: u64,
    pub schmidt_exponent: Exponent,
    pub r2_d: u32,
    pub r2_exponent: Exponent,
    pub best_general: Option<GeneralChoice>,
    pub overall_exponent: Exponent,
    /// `overall_exponent / (ln n)^2`.
    pub ratio: f64,
    pub naive_pair_exponent: u64,
    /// `n < 6`: the general construction is used outside its stated range.
    pub below_lemma_range: bool,
}

pub const CSV_HEADER: &str = "n,schmidt,r2_d,r2_exponent,best_r,best_d,best_dr,overall,ratio";

impl BoundReport {
    pub fn csv_row(&self) -> String {
        let (br, bd, bdr) = match self.best_general {
            Some(g) => (g.r.to_string(), g.d.to_string(), g.dr.to_string()),
            None => (String::new(), String::new(), String::new()),
        };
        format!(
            "{},{},{},{},{},{},{},{},{:.12}",
            self.n, self.schmidt_exponent, self.r2_d, self.r2_exponent, br, bd, bdr, self.overall_exponent, self.ratio
        )
    }
}

pub fn bound_report(n: u64, mode: FeasibilityMode) -> Result<BoundReport, Error> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("bounds need n >= 2, got {n}")));
    }
    let schmidt = schmidt_exponent(n);
    let (r2_d, r2) = r2_exponent(n);
    let general = best_general(n, mode);
    let mut overall = schmidt.min(r2);
    if let Some(g) = general {
        overall = overall.min(Ratio::from_integer(g.dr as i64));
    }
    let ln = (n as f64).ln();
    Ok(BoundReport {
        n,
        schmidt_exponent: schmidt,
        r2_d,
        r2_exponent: r2,
        best_general: general,
        overall_exponent: overall,
        ratio: ratio_to_f64(&overall) / (ln * ln),
        naive_pair_exponent: naive_pair_exponent(n),
        below_lemma_range: n < LEMMA_MIN_N,
    })
}

fn ratio_to_f64(r: &Exponent) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Summary of a constant scan, as written to JSON.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanSummary {
    pub n_min: u64,
    pub n_max: u64,
    pub mode: FeasibilityMode,
    pub argmax_n: u64,
    pub max_ratio: f64,
}

#[derive(Clone, Debug)]
pub struct ScanResult {
    pub summary: ScanSummary,
    pub table: Vec<BoundReport>,
}

/// Computes every report in `[n_min, n_max]` and the largest ratio.
///
/// Work is spread over the current rayon pool; the table is in `n` order and
/// ties in the maximum go to the smaller `n`, so the output does not depend
/// on the number of workers.
pub fn scan_constant(n_min: u64, n_max: u64, mode: FeasibilityMode) -> Result<ScanResult, Error> {
    if n_min < LEMMA_MIN_N || n_min > n_max {
        return Err(Error::InvalidArgument(format!("scan needs 6 <= n_min <= n_max, got [{n_min}, {n_max}]")));
    }
    let table: Vec<BoundReport> =
        (n_min..=n_max).into_par_iter().map(|n| bound_report(n, mode)).collect::<Result<_, _>>()?;
    let mut best = &table[0];
    for rep in &table[1..] {
        if rep.ratio > best.ratio {
            best = rep;
        }
    }
    Ok(ScanResult { summary: ScanSummary { n_min, n_max, mode, argmax_n: best.n, max_ratio: best.ratio }, table })
}

/// `(a+b) ln(a+b) - a ln a - b ln b`, the growth rate of
/// `ln C(d+r-1, r-1) / ln n` for `d = a ln n`, `r - 1 = b ln n`.
pub fn entropy_h(alpha: f64, beta: f64) -> Result<f64, Error> {
    if !(alpha > 0.0 && beta > 0.0) {
        return Err(Error::InvalidArgument(format!("entropy needs positive inputs, got ({alpha}, {beta})")));
    }
    let s = alpha + beta;
    Ok(s * s.ln() - alpha * alpha.ln() - beta * beta.ln())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticParams {
    pub alpha: f64,
    pub beta: f64,
    pub h: f64,
}

impl AsymptoticParams {
    /// `alpha * beta`, the leading coefficient of the exponent in `(ln n)^2`.
    pub fn product(&self) -> f64 {
        self.alpha * self.beta
    }
}

/// Minimizer of `alpha * beta` subject to `H(alpha, beta) = 1`.
///
/// Both `H` and the objective are symmetric, so the optimum lies on the
/// diagonal, where `H(a, a) = 2a ln 2`.
pub fn lagrange_optimum() -> AsymptoticParams {
    let a = 1.0 / (2.0 * std::f64::consts::LN_2);
    AsymptoticParams { alpha: a, beta: a, h: entropy_h(a, a).expect("positive") }
}

/// The explicit large-`n` choice `d = r - 1 = ceil(ln n)` and its checks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Theorem1Choice {
    pub n: u64,
    pub d: u64,
    pub r: u64,
    #[serde(serialize_with = "serialize_display")]
    pub central_binomial: BigUint,
    /// `4^d / (2 sqrt d) <= C(2d, d)`, checked as `16^d <= 4d C(2d,d)^2`.
    pub central_lower_bound: bool,
    /// `C(2d, d) >= rn`.
    pub covers_rn: bool,
    /// `dr < 1.564 (ln n)^2`.
    pub below_constant: bool,
}

fn serialize_display<T: std::fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl Theorem1Choice {
    pub fn all_pass(&self) -> bool {
        self.central_lower_bound && self.covers_rn && self.below_constant
    }
}

pub fn theorem1_choice(n: u64) -> Result<Theorem1Choice, Error> {
    let ln = (n as f64).ln();
    if n < SCAN_UPPER_DEFAULT || ln <= 12.0 {
        return Err(Error::OutOfRegime(format!("n={n} is not above e^12")));
    }
    let d = ln.ceil() as u64;
    let r = d + 1;
    let c = binomial(2 * d, d)?;
    let lhs = BigUint::from(16u32).pow(d as u32);
    let rhs = BigUint::from(4 * d) * &c * &c;
    Ok(Theorem1Choice {
        n,
        d,
        r,
        central_lower_bound: lhs <= rhs,
        covers_rn: c >= BigUint::from(r) * n,
        below_constant: ((d * r) as f64) < THEOREM_CONSTANT * ln * ln,
        central_binomial: c,
    })
}
