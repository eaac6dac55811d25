//! Exponent vectors, graded monomial enumeration and exact binomials.
//!
//! Monomials of a fixed total degree are listed in graded order with a
//! lexicographic tie-break on the reversed entries `(a_r, a_{r-1}, ..., a_1)`.
//! For `r = 2` this is "by total degree, then by the second entry", so the
//! list `(1,0), (0,1), (2,0), (1,1), (0,2), (3,0), ...` comes out directly.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::Error;

/// An exponent vector `a = (a_1, ..., a_r)` indexing one mixed trace.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(entries: Vec<u32>) -> Result<Self, Error> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument("exponent vector needs r >= 1 entries".into()));
        }
        Ok(ExponentVector(entries))
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn r(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// True when one vector is a rational multiple of the other.
    pub fn is_parallel_to(&self, other: &ExponentVector) -> bool {
        if self.r() != other.r() {
            return false;
        }
        // all 2x2 minors vanish
        let (a, b) = (&self.0, &other.0);
        for i in 0..a.len() {
            for j in (i + 1)..a.len() {
                if a[i] as u64 * b[j] as u64 != a[j] as u64 * b[i] as u64 {
                    return false;
                }
            }
        }
        true
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// Graded order: total degree first, then lexicographic on reversed entries.
pub fn graded_cmp(a: &ExponentVector, b: &ExponentVector) -> Ordering {
    a.total_degree().cmp(&b.total_degree()).then_with(|| a.0.iter().rev().cmp(b.0.iter().rev()))
}

/// An ordered set `A` of exponent vectors for degree `n` and `r` elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExponentSet {
    r: usize,
    n: usize,
    vectors: Vec<ExponentVector>,
}

impl ExponentSet {
    /// Builds a set, checking that all vectors have `r` entries and that
    /// there are no duplicates.
    pub fn new(r: usize, n: usize, vectors: Vec<ExponentVector>) -> Result<Self, Error> {
        if r < 2 || n < 1 {
            return Err(Error::InvalidArgument(format!("exponent set needs r >= 2 and n >= 1, got r={r}, n={n}")));
        }
        if let Some(v) = vectors.iter().find(|v| v.r() != r) {
            return Err(Error::DimensionMismatch(format!("vector {v} does not have r={r} entries")));
        }
        let mut seen = std::collections::HashSet::new();
        for v in &vectors {
            if !seen.insert(v) {
                return Err(Error::InvalidArgument(format!("duplicate exponent vector {v}")));
            }
        }
        Ok(ExponentSet { r, n, vectors })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vectors(&self) -> &[ExponentVector] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Total degrees in set order.
    pub fn degree_profile(&self) -> Vec<u32> {
        self.vectors.iter().map(ExponentVector::total_degree).collect()
    }

    pub fn degree_sum(&self) -> u64 {
        self.vectors.iter().map(|v| v.total_degree() as u64).sum()
    }

    /// Plain nested arrays, `[[1,0],[0,1],...]`.
    pub fn to_arrays(&self) -> Vec<Vec<u32>> {
        self.vectors.iter().map(|v| v.0.clone()).collect()
    }

    pub fn from_arrays(r: usize, n: usize, arrays: &[Vec<u32>]) -> Result<Self, Error> {
        let vectors = arrays.iter().map(|a| ExponentVector::new(a.clone())).collect::<Result<Vec<_>, _>>()?;
        ExponentSet::new(r, n, vectors)
    }
}

/// All exponent vectors with `r` entries and total degree `d`, in graded order.
///
/// The count is `C(d + r - 1, r - 1)`.
pub fn enumerate_monomials(r: usize, d: u32) -> Result<Vec<ExponentVector>, Error> {
    if r < 1 {
        return Err(Error::InvalidArgument("enumerate_monomials needs r >= 1".into()));
    }
    let mut out = Vec::new();
    let mut current = vec![0u32; r];
    fill_from_top(&mut current, r - 1, d, &mut out);
    Ok(out)
}

// Entries are assigned from the last coordinate down, each ascending, so the
// reversed entries come out in increasing lexicographic order.
fn fill_from_top(current: &mut [u32], idx: usize, remaining: u32, out: &mut Vec<ExponentVector>) {
    if idx == 0 {
        current[0] = remaining;
        out.push(ExponentVector(current.to_vec()));
        return;
    }
    for e in 0..=remaining {
        current[idx] = e;
        fill_from_top(current, idx - 1, remaining - e, out);
    }
    current[idx] = 0;
}

/// The set `A_n` for `r = 2` with its top degree and degree sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairExponentSet {
    pub set: ExponentSet,
    /// Least `d` with `C(d+2, 2) >= 2n + 1`; also the largest degree in the set.
    pub d: u32,
    pub degree_sum: u64,
}

/// The first `2n` nonzero vectors of `Z_{>=0}^2` in graded order.
pub fn build_a2(n: usize) -> Result<PairExponentSet, Error> {
    if n < 1 {
        return Err(Error::InvalidArgument("build_a2 needs n >= 1".into()));
    }
    let want = 2 * n;
    let mut vectors = Vec::with_capacity(want);
    let mut deg = 1u32;
    while vectors.len() < want {
        for v in enumerate_monomials(2, deg)? {
            if vectors.len() == want {
                break;
            }
            vectors.push(v);
        }
        deg += 1;
    }
    let d = r2_degree(n as u64);
    let set = ExponentSet::new(2, n, vectors)?;
    let degree_sum = set.degree_sum();
    Ok(PairExponentSet { set, d, degree_sum })
}

/// Least `d` with `C(d+2, 2) >= 2n + 1`.
pub fn r2_degree(n: u64) -> u32 {
    let target = 2 * n as u128 + 1;
    let mut d: u128 = 0;
    while (d + 2) * (d + 1) / 2 < target {
        d += 1;
    }
    d as u32
}

/// Closed form `2nd - d(d-1)(d+4)/6` of the degree sum of `A_n`.
pub fn a2_degree_sum_closed_form(n: u64, d: u64) -> i128 {
    let (n, d) = (n as i128, d as i128);
    2 * n * d - d * (d - 1) * (d + 4) / 6
}

/// Exact `C(a, b)`.
pub fn binomial(a: u64, b: u64) -> Result<BigUint, Error> {
    if b > a {
        return Err(Error::InvalidArgument(format!("binomial({a}, {b}) needs b <= a")));
    }
    Ok(num_integer::binomial(BigUint::from(a), BigUint::from(b)))
}
