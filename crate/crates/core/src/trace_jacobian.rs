//! Mixed-trace maps `Tr_{n,a}(x) = sum_i x_{1,i}^{a_1} ... x_{r,i}^{a_r}`,
//! their Jacobian matrices, and certificates that the Jacobian determinant
//! is not identically zero.
//!
//! A certificate is an integer point together with a prime `p` at which
//! the determinant is nonzero mod `p`. That is a sound witness: if the
//! determinant polynomial were zero over the integers, every evaluation
//! would vanish mod `p` as well. Only failure to find such a point is
//! probabilistic, with chance at most `degree_bound / p` per attempt.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, FeasibilityMode};
use crate::combinat::{self, ExponentSet, ExponentVector};
use crate::linalg;
use crate::modp::PrimeField;
use crate::Error;

/// Exact evaluation domain for traces and Jacobians.
pub trait Scalars {
    type Elem: Clone + PartialEq + std::fmt::Debug;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn from_u64(&self, v: u64) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn pow(&self, base: &Self::Elem, mut exp: u32) -> Self::Elem {
        let mut acc = self.one();
        let mut b = base.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            exp >>= 1;
            if exp > 0 {
                b = self.mul(&b, &b);
            }
        }
        acc
    }
}

impl Scalars for PrimeField {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn from_u64(&self, v: u64) -> u64 {
        self.reduce(v)
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        PrimeField::add(self, *a, *b)
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        PrimeField::mul(self, *a, *b)
    }
}

/// The integers, with arbitrary precision.
#[derive(Clone, Copy, Debug, Default)]
pub struct Integers;

impl Scalars for Integers {
    type Elem = BigInt;
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn from_u64(&self, v: u64) -> BigInt {
        BigInt::from(v)
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
}

/// A point of `(A^n)^r`; `coords[k][i]` holds `x_{k+1,i+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvaluationPoint<T> {
    r: usize,
    n: usize,
    coords: Vec<Vec<T>>,
}

impl<T> EvaluationPoint<T> {
    pub fn new(coords: Vec<Vec<T>>) -> Result<Self, Error> {
        let r = coords.len();
        let n = coords.first().map_or(0, Vec::len);
        if r == 0 || n == 0 || coords.iter().any(|row| row.len() != n) {
            return Err(Error::DimensionMismatch("evaluation point must be a nonempty r x n array".into()));
        }
        Ok(EvaluationPoint { r, n, coords })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn coords(&self) -> &[Vec<T>] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Vec<T>> {
        self.coords
    }

    fn slot(&self, i: usize) -> Vec<T>
    where
        T: Clone,
    {
        self.coords.iter().map(|row| row[i].clone()).collect()
    }
}

// prod_k y_k^{e_k}
fn monomial_at<S: Scalars>(s: &S, exps: &[u32], y: &[S::Elem]) -> S::Elem {
    exps.iter().zip(y).fold(s.one(), |acc, (&e, yk)| if e == 0 { acc } else { s.mul(&acc, &s.pow(yk, e)) })
}

/// `d/dy_k` of the monomial `y^e`, evaluated at `y`. Zero when `e_k = 0`.
fn partial_at<S: Scalars>(s: &S, exps: &[u32], k: usize, y: &[S::Elem]) -> S::Elem {
    if exps[k] == 0 {
        return s.zero();
    }
    let mut lowered = exps.to_vec();
    lowered[k] -= 1;
    s.mul(&s.from_u64(exps[k] as u64), &monomial_at(s, &lowered, y))
}

/// `Tr_{n,a}(x)`.
pub fn eval_trace<S: Scalars>(s: &S, a: &ExponentVector, x: &EvaluationPoint<S::Elem>) -> Result<S::Elem, Error> {
    if a.r() != x.r() {
        return Err(Error::DimensionMismatch(format!("vector {a} has r={}, point has r={}", a.r(), x.r())));
    }
    let mut acc = s.zero();
    for i in 0..x.n() {
        let y = x.slot(i);
        acc = s.add(&acc, &monomial_at(s, a.entries(), &y));
    }
    Ok(acc)
}

/// The `rn x rn` matrix `(d Tr_{n,a} / d x_{k,i})`: rows follow the set
/// order, columns are `(k, i)` with `k` outer.
pub fn jacobian_matrix<S: Scalars>(
    s: &S,
    set: &ExponentSet,
    x: &EvaluationPoint<S::Elem>,
) -> Result<Vec<Vec<S::Elem>>, Error> {
    let (r, n) = (set.r(), set.n());
    if x.r() != r || x.n() != n {
        return Err(Error::DimensionMismatch(format!("set is for (r={r}, n={n}), point is ({}, {})", x.r(), x.n())));
    }
    if set.len() != r * n {
        return Err(Error::DimensionMismatch(format!("set has {} vectors, need rn={}", set.len(), r * n)));
    }
    let slots: Vec<Vec<S::Elem>> = (0..n).map(|i| x.slot(i)).collect();
    Ok(set
        .vectors()
        .iter()
        .map(|a| {
            let mut row = Vec::with_capacity(r * n);
            for k in 0..r {
                for y in &slots {
                    row.push(partial_at(s, a.entries(), k, y));
                }
            }
            row
        })
        .collect())
}

/// `sum_{a in A} (|a| - 1)`, the degree of the Jacobian determinant.
pub fn degree_bound(set: &ExponentSet) -> u64 {
    set.vectors().iter().map(|a| (a.total_degree() as u64).saturating_sub(1)).sum()
}

/// `prod_{a in A} |a|`, the Bezout bound on the size of a zero-dimensional fiber.
pub fn bezout_bound(set: &ExponentSet) -> Result<BigUint, Error> {
    let mut acc = BigUint::one();
    for a in set.vectors() {
        let deg = a.total_degree();
        if deg == 0 {
            return Err(Error::ZeroDegree);
        }
        acc *= deg;
    }
    Ok(acc)
}

/// How the determinant was evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateMode {
    #[serde(rename = "modular")]
    Modular,
    /// Integer point, exact fraction-free determinant, then reduced mod `p`.
    #[serde(rename = "exact-rational")]
    ExactRational,
}

/// Witness that `det (D Tr_{n,a})_{a in A}` is not the zero polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JacobianCertificate {
    pub n: usize,
    pub r: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    pub set: Vec<Vec<u32>>,
    pub prime: u64,
    pub point: Vec<Vec<u64>>,
    pub det_residue: u64,
    pub degree_bound: u64,
    pub seed: u64,
    pub mode: CertificateMode,
    /// Index of the PRNG stream that produced `point`.
    #[serde(default)]
    pub attempt: u32,
}

impl JacobianCertificate {
    pub fn exponent_set(&self) -> Result<ExponentSet, Error> {
        ExponentSet::from_arrays(self.r, self.n, &self.set)
    }
}

/// Coordinates for exact mode are drawn from `[0, EXACT_SAMPLE_RANGE)`.
pub const EXACT_SAMPLE_RANGE: u64 = 1 << 16;

/// Exact mode evaluates over the integers and is limited to small degrees.
pub const EXACT_MODE_MAX_N: usize = 8;

/// Samples an `r x n` point from stream `attempt` of the ChaCha8 generator
/// seeded with `seed`. Coordinates are drawn in `(k, i)` order, `k` outer,
/// each uniform in `[0, range)`.
pub fn sample_point(seed: u64, attempt: u32, r: usize, n: usize, range: u64) -> Vec<Vec<u64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(attempt as u64);
    (0..r).map(|_| (0..n).map(|_| rng.gen_range(0..range)).collect()).collect()
}

/// Jacobian determinant of `set` at `point`, mod the field's prime.
pub fn determinant_mod_p(field: &PrimeField, set: &ExponentSet, point: &[Vec<u64>]) -> Result<u64, Error> {
    let reduced: Vec<Vec<u64>> = point.iter().map(|row| row.iter().map(|&c| field.reduce(c)).collect()).collect();
    let x = EvaluationPoint::new(reduced)?;
    let jac = jacobian_matrix(field, set, &x)?;
    Ok(linalg::det_mod_p(field, &jac))
}

/// Exact Jacobian determinant of `set` at an integer `point`.
pub fn determinant_exact(set: &ExponentSet, point: &[Vec<u64>]) -> Result<BigInt, Error> {
    let x = EvaluationPoint::new(point.iter().map(|row| row.iter().map(|&c| BigInt::from(c)).collect()).collect())?;
    let jac = jacobian_matrix(&Integers, set, &x)?;
    Ok(linalg::bareiss_det(&jac))
}

fn residue_of(field: &PrimeField, v: &BigInt) -> u64 {
    let p = BigInt::from(field.modulus());
    let r = ((v % &p) + &p) % &p;
    u64::try_from(r).expect("residue fits in u64")
}

/// Certifies the pair set `A_n` by random evaluation.
///
/// Makes one attempt plus up to `max_retries` resamples; attempt `t` uses
/// PRNG stream `t`.
pub fn certify_r2(
    n: usize,
    prime: u64,
    seed: u64,
    max_retries: u32,
    mode: CertificateMode,
) -> Result<JacobianCertificate, Error> {
    let field = PrimeField::new(prime)?;
    let set = combinat::build_a2(n)?.set;
    certify_set(&field, &set, None, seed, max_retries, mode)
}

/// Certifies an arbitrary set of size `rn` by random evaluation.
pub fn certify_set(
    field: &PrimeField,
    set: &ExponentSet,
    d: Option<u32>,
    seed: u64,
    max_retries: u32,
    mode: CertificateMode,
) -> Result<JacobianCertificate, Error> {
    let (r, n) = (set.r(), set.n());
    if set.len() != r * n {
        return Err(Error::DimensionMismatch(format!("set has {} vectors, need rn={}", set.len(), r * n)));
    }
    let bound = degree_bound(set);
    if field.modulus() <= bound {
        return Err(Error::InvalidPrime(field.modulus()));
    }
    let range = match mode {
        CertificateMode::Modular => field.modulus(),
        CertificateMode::ExactRational => {
            if n > EXACT_MODE_MAX_N {
                return Err(Error::InvalidArgument(format!(
                    "exact-rational mode supports n <= {EXACT_MODE_MAX_N}, got {n}"
                )));
            }
            EXACT_SAMPLE_RANGE.min(field.modulus())
        }
    };
    for attempt in 0..=max_retries {
        let point = sample_point(seed, attempt, r, n, range);
        let det_residue = match mode {
            CertificateMode::Modular => determinant_mod_p(field, set, &point)?,
            CertificateMode::ExactRational => residue_of(field, &determinant_exact(set, &point)?),
        };
        if det_residue != 0 {
            return Ok(JacobianCertificate {
                n,
                r,
                d,
                set: set.to_arrays(),
                prime: field.modulus(),
                point,
                det_residue,
                degree_bound: bound,
                seed,
                mode,
                attempt,
            });
        }
    }
    Err(Error::CertificationFailed { attempts: max_retries + 1 })
}

/// The `rn x C(d+r-1, r-1)` matrix whose column for monomial `m` lists the
/// first-order partials of `m` at each of the `n` points, rows `(k, i)`
/// with `k` outer.
pub fn partials_matrix(field: &PrimeField, monomials: &[ExponentVector], point: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let r = point.len();
    let n = point[0].len();
    let slots: Vec<Vec<u64>> = (0..n).map(|i| point.iter().map(|row| row[i]).collect()).collect();
    let mut rows = Vec::with_capacity(r * n);
    for k in 0..r {
        for y in &slots {
            rows.push(monomials.iter().map(|m| partial_at(field, m.entries(), k, y)).collect());
        }
    }
    rows
}

/// Builds a set of `rn` degree-`d` vectors with nonvanishing Jacobian by
/// selecting full-rank columns of the partials matrix at `n` random points.
///
/// Pivot columns are taken in monomial enumeration order, so the result is
/// determined by `(seed, prime)`.
pub fn construct_a_general(
    n: usize,
    r: usize,
    d: u32,
    prime: u64,
    seed: u64,
    max_retries: u32,
    mode: FeasibilityMode,
) -> Result<(ExponentSet, JacobianCertificate), Error> {
    if r < 3 {
        return Err(Error::InvalidArgument(format!("general construction needs r >= 3, got {r}")));
    }
    if n < 1 || d < 1 {
        return Err(Error::InvalidArgument("general construction needs n >= 1 and d >= 1".into()));
    }
    bounds::check_feasible(n as u64, r as u64, d as u64, mode)?;
    let field = PrimeField::new(prime)?;
    let rn = r * n;
    let bound = rn as u64 * (d as u64 - 1);
    if prime <= bound {
        return Err(Error::InvalidPrime(prime));
    }
    let monomials = combinat::enumerate_monomials(r, d)?;
    for attempt in 0..=max_retries {
        let point = sample_point(seed, attempt, r, n, prime);
        let m = partials_matrix(&field, &monomials, &point);
        let pivots = linalg::pivot_columns_mod_p(&field, &m, rn);
        if pivots.len() < rn {
            continue;
        }
        let set = ExponentSet::new(r, n, pivots.iter().map(|&c| monomials[c].clone()).collect())?;
        let det_residue = determinant_mod_p(&field, &set, &point)?;
        if det_residue == 0 {
            // the pivot minor is the transposed Jacobian
            unreachable!("full-rank pivot minor with vanishing Jacobian determinant");
        }
        let cert = JacobianCertificate {
            n,
            r,
            d: Some(d),
            set: set.to_arrays(),
            prime,
            point,
            det_residue,
            degree_bound: bound,
            seed,
            mode: CertificateMode::Modular,
            attempt,
        };
        return Ok((set, cert));
    }
    Err(Error::RankDeficient { attempts: max_retries + 1 })
}

/// Re-checks a certificate from scratch. Returns the recomputed residue.
///
/// Structural problems are [`Error::MalformedCertificate`]; a residue that
/// does not reproduce, or is zero, is [`Error::CertificateMismatch`].
pub fn verify_certificate(cert: &JacobianCertificate) -> Result<u64, Error> {
    let malformed = |m: String| Error::MalformedCertificate(m);
    let field = PrimeField::new(cert.prime).map_err(|_| malformed(format!("{} is not a usable prime", cert.prime)))?;
    let set = cert.exponent_set().map_err(|e| malformed(e.to_string()))?;
    if set.len() != cert.r * cert.n {
        return Err(malformed(format!("set has {} vectors, need rn={}", set.len(), cert.r * cert.n)));
    }
    if cert.point.len() != cert.r || cert.point.iter().any(|row| row.len() != cert.n) {
        return Err(malformed("point is not an r x n array".into()));
    }
    if cert.point.iter().flatten().any(|&c| c >= cert.prime) {
        return Err(malformed("point coordinates are not reduced mod the prime".into()));
    }
    if let Some(d) = cert.d {
        if set.vectors().iter().any(|a| a.total_degree() != d) {
            return Err(Error::CertificateMismatch(format!("not every vector has total degree {d}")));
        }
    }
    if degree_bound(&set) != cert.degree_bound {
        return Err(Error::CertificateMismatch(format!(
            "degree_bound {} but the set gives {}",
            cert.degree_bound,
            degree_bound(&set)
        )));
    }
    let residue = match cert.mode {
        CertificateMode::Modular => determinant_mod_p(&field, &set, &cert.point)?,
        CertificateMode::ExactRational => {
            let exact = residue_of(&field, &determinant_exact(&set, &cert.point)?);
            let modular = determinant_mod_p(&field, &set, &cert.point)?;
            if exact != modular {
                return Err(Error::CertificateMismatch("exact and modular determinants disagree".into()));
            }
            exact
        }
    };
    if residue == 0 {
        return Err(Error::CertificateMismatch("determinant vanishes at the stored point".into()));
    }
    if residue != cert.det_residue {
        return Err(Error::CertificateMismatch(format!(
            "stored det_residue {} but recomputed {residue}",
            cert.det_residue
        )));
    }
    Ok(residue)
}
