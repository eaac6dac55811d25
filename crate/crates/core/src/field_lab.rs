//! Small totally real fields `K = Q(theta)`, worked in the order `Z[theta]`.
//!
//! The trace form `(x, y) -> Tr(xy)` is positive definite on a totally real
//! field, so short elements come from exact LLL on the integer Gram matrix
//! `Tr(theta^{i+j})`. Tuples of small combinations of the reduced basis are
//! then turned into mixed-trace fingerprints `(Tr(alpha^a))_{a in A}`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::combinat::{ExponentSet, ExponentVector};
use crate::modp::{self, PrimeField};
use crate::{linalg, poly, Error};

/// Largest degree accepted by [`analyze_poly`].
pub const MAX_DEGREE: usize = 10;

/// Primes below this are tried as irreducibility witnesses for `n >= 4`.
pub const IRREDUCIBILITY_PRIME_BOUND: u64 = 100;

/// LLL parameter `delta = 99/100`.
pub const LLL_DELTA: (i64, i64) = (99, 100);

/// A monic integer polynomial of degree at least 2.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    // ascending: coeffs[0] is the constant term, coeffs[n] = 1
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    /// From coefficients listed leading term first, constant term last.
    pub fn from_descending<T: Into<BigInt> + Clone>(coeffs: &[T]) -> Result<Self, Error> {
        let mut asc: Vec<BigInt> = coeffs.iter().rev().cloned().map(Into::into).collect();
        poly::trim(&mut asc);
        if asc.len() < 3 {
            return Err(Error::InvalidArgument("polynomial must have degree >= 2".into()));
        }
        if !asc.last().unwrap().is_one() {
            return Err(Error::InvalidArgument("polynomial must be monic".into()));
        }
        Ok(IntPolynomial { coeffs: asc })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Ascending coefficients.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn descending(&self) -> Vec<BigInt> {
        self.coeffs.iter().rev().cloned().collect()
    }

    /// `f(x + shift)`.
    pub fn shifted(&self, shift: i64) -> IntPolynomial {
        // Horner in the shifted variable
        let s = BigInt::from(shift);
        let mut out: Vec<BigInt> = vec![BigInt::zero()];
        for c in self.coeffs.iter().rev() {
            // out = out * (x + s) + c
            let mut next = vec![BigInt::zero(); out.len() + 1];
            for (i, o) in out.iter().enumerate() {
                next[i + 1] += o;
                next[i] += o * &s;
            }
            next[0] += c;
            out = next;
        }
        poly::trim(&mut out);
        IntPolynomial { coeffs: out }
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.descending().iter().map(ToString::to_string).collect();
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for IntPolynomial {
    type Err = Error;

    /// One polynomial as coefficients, leading first; separators may be
    /// spaces or commas, with optional surrounding brackets.
    fn from_str(s: &str) -> Result<Self, Error> {
        let body = s.trim().trim_start_matches('[').trim_end_matches(']');
        let coeffs = body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<BigInt>().map_err(|e| Error::Parse(format!("bad coefficient {t:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        IntPolynomial::from_descending(&coeffs)
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        json_ints(&self.descending(), s)
    }
}

/// Parses a corpus: one polynomial per line, `#` comments and blank lines skipped.
pub fn parse_corpus(text: &str) -> Result<Vec<IntPolynomial>, Error> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| l.parse().map_err(|e| Error::Parse(format!("line {}: {e}", i + 1))))
        .collect()
}

// Integers go out as JSON numbers when they fit an i64, otherwise as strings.
fn json_int<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    match i64::try_from(v) {
        Ok(x) => s.serialize_i64(x),
        Err(_) => s.serialize_str(&v.to_string()),
    }
}

fn json_ints<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&JsonInt(x))?;
    }
    seq.end()
}

fn json_int_rows<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for row in v {
        seq.serialize_element(&JsonInts(row))?;
    }
    seq.end()
}

struct JsonInt<'a>(&'a BigInt);
impl Serialize for JsonInt<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        json_int(self.0, s)
    }
}

struct JsonInts<'a>(&'a [BigInt]);
impl Serialize for JsonInts<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        json_ints(self.0, s)
    }
}

/// Why a polynomial was not accepted into the lab.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Rejection {
    #[error("degree {0} outside 2..=10")]
    DegreeOutOfRange(usize),
    #[error("not squarefree (discriminant 0)")]
    NotSquarefree,
    #[error("not totally real ({real_roots} of {degree} roots real)")]
    NotTotallyReal { real_roots: usize, degree: usize },
    #[error("reducible over Q")]
    NotIrreducible,
    #[error("irreducibility unknown (no witness prime below 100)")]
    IrreducibilityUnknown,
}

/// Power sums `p_0, ..., p_upto` of the roots of monic `f`, by Newton's
/// identities on the coefficients.
pub fn power_sums(f: &IntPolynomial, upto: usize) -> Vec<BigInt> {
    let n = f.degree();
    let c = f.coeffs();
    let mut p: Vec<BigInt> = Vec::with_capacity(upto + 1);
    p.push(BigInt::from(n));
    for k in 1..=upto {
        // p_k + c_{n-1} p_{k-1} + ... + c_{n-k} k  (k <= n)
        // p_k + c_{n-1} p_{k-1} + ... + c_0 p_{k-n} (k > n)
        let mut s = BigInt::zero();
        for j in 1..=n.min(k) {
            if j == k {
                s += &c[n - k] * BigInt::from(k);
            } else {
                s += &c[n - j] * &p[k - j];
            }
        }
        p.push(-s);
    }
    p
}

/// Gram matrix of the trace form in the power basis: entry `(i, j)` is
/// `p_{i+j}`.
pub fn trace_gram(f: &IntPolynomial) -> Vec<Vec<BigInt>> {
    let n = f.degree();
    let p = power_sums(f, 2 * n - 2);
    (0..n).map(|i| (0..n).map(|j| p[i + j].clone()).collect()).collect()
}

fn gram_of(transform: &[Vec<BigInt>], gram: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = gram.len();
    let tg: Vec<Vec<BigInt>> =
        transform.iter().map(|row| (0..n).map(|j| (0..n).map(|l| &row[l] * &gram[l][j]).sum()).collect()).collect();
    tg.iter().map(|row| transform.iter().map(|t| (0..n).map(|j| &row[j] * &t[j]).sum()).collect()).collect()
}

/// Gram-Schmidt data from a Gram matrix: `mu[i][j]` for `j < i` and the
/// squared lengths `b[i]` of the orthogonalized vectors.
pub fn gram_schmidt(gram: &[Vec<BigInt>]) -> (Vec<Vec<BigRational>>, Vec<BigRational>) {
    let n = gram.len();
    let mut mu = vec![vec![BigRational::zero(); n]; n];
    let mut b = vec![BigRational::zero(); n];
    for i in 0..n {
        for j in 0..i {
            let mut v = BigRational::from_integer(gram[i][j].clone());
            for l in 0..j {
                v -= &mu[j][l] * &mu[i][l] * &b[l];
            }
            mu[i][j] = v / &b[j];
        }
        let mut v = BigRational::from_integer(gram[i][i].clone());
        for l in 0..i {
            v -= &mu[i][l] * &mu[i][l] * &b[l];
        }
        b[i] = v;
    }
    (mu, b)
}

fn round_nearest(q: &BigRational) -> BigInt {
    (q + BigRational::new(BigInt::one(), BigInt::from(2))).floor().to_integer()
}

/// Exact LLL reduction of a lattice given by its Gram matrix.
///
/// Returns the reduced Gram matrix and the unimodular transform `T` whose
/// rows express the reduced basis in the input basis, so the reduced Gram
/// matrix is `T G T^t`.
pub fn lll_reduce(gram: &[Vec<BigInt>]) -> Result<(Vec<Vec<BigInt>>, Vec<Vec<BigInt>>), Error> {
    if !linalg::is_positive_definite(gram) {
        return Err(Error::NotPositiveDefinite);
    }
    let n = gram.len();
    let delta = BigRational::new(BigInt::from(LLL_DELTA.0), BigInt::from(LLL_DELTA.1));
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut t: Vec<Vec<BigInt>> =
        (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let mut g = gram.to_vec();
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let (mu, _) = gram_schmidt(&g);
            if mu[k][j].abs() > half {
                let q = round_nearest(&mu[k][j]);
                let (head, tail) = t.split_at_mut(k);
                for (x, y) in tail[0].iter_mut().zip(&head[j]) {
                    *x -= &q * y;
                }
                g = gram_of(&t, gram);
            }
        }
        let (mu, b) = gram_schmidt(&g);
        let lovasz = b[k] >= (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &b[k - 1];
        if lovasz {
            k += 1;
        } else {
            t.swap(k, k - 1);
            g = gram_of(&t, gram);
            k = (k - 1).max(1);
        }
    }
    Ok((g, t))
}

/// Arithmetic in `Z[theta] = Z[x]/(f)`, elements as ascending coefficient
/// vectors of length `n`.
#[derive(Clone, Debug)]
struct Order {
    f: IntPolynomial,
    power_sums: Vec<BigInt>,
}

impl Order {
    fn new(f: &IntPolynomial) -> Self {
        let n = f.degree();
        Order { f: f.clone(), power_sums: power_sums(f, n) }
    }

    fn n(&self) -> usize {
        self.f.degree()
    }

    fn one(&self) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.n()];
        v[0] = BigInt::one();
        v
    }

    fn mul(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let n = self.n();
        let mut prod = vec![BigInt::zero(); 2 * n - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        // theta^n = -(c_{n-1} theta^{n-1} + ... + c_0)
        let c = self.f.coeffs();
        for top in (n..prod.len()).rev() {
            let lead = std::mem::take(&mut prod[top]);
            if lead.is_zero() {
                continue;
            }
            for j in 0..n {
                prod[top - n + j] -= &lead * &c[j];
            }
        }
        prod.truncate(n);
        prod
    }

    fn pow(&self, a: &[BigInt], mut e: u32) -> Vec<BigInt> {
        let mut acc = self.one();
        let mut base = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `Tr(g) = sum_j g_j p_j`.
    fn trace(&self, g: &[BigInt]) -> BigInt {
        g.iter().zip(&self.power_sums).map(|(x, p)| x * p).sum()
    }

    fn check_element(&self, a: &[BigInt]) -> Result<(), Error> {
        if a.len() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "element has {} coefficients, field degree is {}",
                a.len(),
                self.n()
            )));
        }
        Ok(())
    }

    /// `Tr(alpha_1^{a_1} ... alpha_r^{a_r})`.
    fn mixed_trace(&self, alphas: &[Vec<BigInt>], a: &ExponentVector) -> Result<BigInt, Error> {
        if alphas.len() != a.r() {
            return Err(Error::DimensionMismatch(format!("{} elements for exponent vector {a}", alphas.len())));
        }
        let mut prod = self.one();
        for (alpha, &e) in alphas.iter().zip(a.entries()) {
            self.check_element(alpha)?;
            if e > 0 {
                prod = self.mul(&prod, &self.pow(alpha, e));
            }
        }
        Ok(self.trace(&prod))
    }

    /// Matrix of multiplication by `alpha` in the power basis; column `j`
    /// is `alpha * theta^j`.
    fn multiplication_matrix(&self, alpha: &[BigInt]) -> Vec<Vec<BigInt>> {
        let n = self.n();
        let mut cols = Vec::with_capacity(n);
        let mut basis = self.one();
        let mut theta = vec![BigInt::zero(); n];
        theta[1] = BigInt::one();
        for _ in 0..n {
            cols.push(self.mul(alpha, &basis));
            basis = self.mul(&basis, &theta);
        }
        (0..n).map(|i| (0..n).map(|j| cols[j][i].clone()).collect()).collect()
    }
}

/// Characteristic polynomial (ascending, monic) of an integer matrix by the
/// Faddeev-LeVerrier recurrence; every division is exact.
pub fn charpoly(m: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = m.len();
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let identity = |i: usize, j: usize| if i == j { BigInt::one() } else { BigInt::zero() };
    let mut aux: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| identity(i, j)).collect()).collect();
    for k in 1..=n {
        // A M_k, then c_{n-k} = -tr(A M_k) / k, M_{k+1} = A M_k + c_{n-k} I
        let am: Vec<Vec<BigInt>> =
            (0..n).map(|i| (0..n).map(|j| (0..n).map(|l| &m[i][l] * &aux[l][j]).sum()).collect()).collect();
        let tr: BigInt = (0..n).map(|i| am[i][i].clone()).sum();
        let c = -(tr / BigInt::from(k));
        aux = (0..n).map(|i| (0..n).map(|j| &am[i][j] + &c * identity(i, j)).collect()).collect();
        coeffs[n - k] = c;
    }
    coeffs
}

/// A polynomial accepted into the lab with its trace-form data.
#[derive(Clone, Debug, Serialize)]
pub struct FieldSample {
    pub f: IntPolynomial,
    #[serde(serialize_with = "json_int")]
    pub disc: BigInt,
    pub real_roots: usize,
    #[serde(serialize_with = "json_int_rows")]
    pub gram: Vec<Vec<BigInt>>,
    /// LLL-reduced basis of `Z[theta]`, rows in power-basis coordinates.
    #[serde(serialize_with = "json_int_rows")]
    pub short_basis: Vec<Vec<BigInt>>,
}

impl FieldSample {
    pub fn degree(&self) -> usize {
        self.f.degree()
    }
}

fn irreducible_mod_some_prime(f: &IntPolynomial) -> bool {
    modp::primes_below(IRREDUCIBILITY_PRIME_BOUND).into_iter().any(|p| {
        let field = PrimeField::new(p).expect("prime");
        let fp = poly::reduce_mod_p(&field, f.coeffs());
        // a squarefree reduction with one factor of full degree
        poly::degree(&fp) == Some(f.degree())
            && !poly::discriminant(f.coeffs()).is_multiple_of(&BigInt::from(p))
            && poly::factor_degrees_mod_p(&field, &fp) == vec![f.degree()]
    })
}

/// Accepts `f` when it is squarefree, totally real and provably irreducible.
pub fn analyze_poly(f: &IntPolynomial) -> Result<FieldSample, Rejection> {
    let n = f.degree();
    if !(2..=MAX_DEGREE).contains(&n) {
        return Err(Rejection::DegreeOutOfRange(n));
    }
    let disc = poly::discriminant(f.coeffs());
    if disc.is_zero() {
        return Err(Rejection::NotSquarefree);
    }
    let real_roots = poly::count_real_roots(f.coeffs());
    if real_roots != n {
        return Err(Rejection::NotTotallyReal { real_roots, degree: n });
    }
    if poly::has_integer_root(f.coeffs()) {
        return Err(Rejection::NotIrreducible);
    }
    if n > 3 && !irreducible_mod_some_prime(f) {
        return Err(Rejection::IrreducibilityUnknown);
    }
    let gram = trace_gram(f);
    let (_, short_basis) = lll_reduce(&gram).expect("trace form of a totally real field is positive definite");
    Ok(FieldSample { f: f.clone(), disc, real_roots, gram, short_basis })
}

/// `Tr(alpha_1^{a_1} ... alpha_r^{a_r})` in `Z[theta]`, exactly.
pub fn mixed_trace(f: &IntPolynomial, alphas: &[Vec<BigInt>], a: &ExponentVector) -> Result<BigInt, Error> {
    Order::new(f).mixed_trace(alphas, a)
}

/// True when the characteristic polynomial of `alpha` is squarefree, so
/// that its `n` conjugates are distinct and `alpha` generates `K`.
pub fn is_generator(f: &IntPolynomial, alpha: &[BigInt]) -> bool {
    let order = Order::new(f);
    if order.check_element(alpha).is_err() {
        return false;
    }
    poly::is_squarefree(&charpoly(&order.multiplication_matrix(alpha)))
}

/// Integer vectors in `[-h, h]^n` with max norm exactly `h`, lexicographic.
fn shell(n: usize, h: i64) -> impl Iterator<Item = Vec<i64>> {
    let mut cur = vec![-h; n];
    let mut done = n == 0;
    std::iter::from_fn(move || loop {
        if done {
            return None;
        }
        let out = cur.clone();
        // odometer, last coordinate fastest
        let mut i = n;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            if cur[i] < h {
                cur[i] += 1;
                break;
            }
            cur[i] = -h;
        }
        if out.iter().any(|c| c.abs() == h) {
            return Some(out);
        }
    })
}

/// First `r` pairwise distinct non-rational combinations of the short
/// basis with coefficients in `[-bound, bound]`, the first of which
/// generates the field.
///
/// Candidates are visited by max-norm of the coefficient vector, then
/// lexicographically, so the result depends only on the sample and `bound`.
pub fn pick_small_generators(sample: &FieldSample, r: usize, bound: i64) -> Result<Vec<Vec<BigInt>>, Error> {
    if r < 1 {
        return Err(Error::InvalidArgument("need r >= 1".into()));
    }
    let n = sample.degree();
    let mut chosen: Vec<Vec<BigInt>> = Vec::with_capacity(r);
    for h in 1..=bound.max(0) {
        for coeffs in shell(n, h) {
            let elem: Vec<BigInt> = (0..n)
                .map(|j| coeffs.iter().zip(&sample.short_basis).map(|(c, row)| BigInt::from(*c) * &row[j]).sum())
                .collect();
            if elem[1..].iter().all(Zero::is_zero) || chosen.contains(&elem) {
                continue;
            }
            if chosen.is_empty() && !is_generator(&sample.f, &elem) {
                continue;
            }
            chosen.push(elem);
            if chosen.len() == r {
                return Ok(chosen);
            }
        }
    }
    Err(Error::SearchExhausted(format!("no {r}-tuple with coefficients in [-{bound}, {bound}] for {}", sample.f)))
}

/// Default coefficient bound for the generator search.
pub const DEFAULT_COEFF_BOUND: i64 = 2;

/// Mixed-trace values of a small generating tuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub set: Vec<Vec<u32>>,
    #[serde(serialize_with = "json_int_rows")]
    pub alphas: Vec<Vec<BigInt>>,
    #[serde(serialize_with = "json_ints")]
    pub values: Vec<BigInt>,
}

pub fn fingerprint(sample: &FieldSample, set: &ExponentSet, bound: i64) -> Result<Fingerprint, Error> {
    if set.n() != sample.degree() {
        return Err(Error::DimensionMismatch(format!(
            "exponent set is for n={}, field has degree {}",
            set.n(),
            sample.degree()
        )));
    }
    let alphas = pick_small_generators(sample, set.r(), bound)?;
    let order = Order::new(&sample.f);
    let values = set.vectors().iter().map(|a| order.mixed_trace(&alphas, a)).collect::<Result<Vec<_>, _>>()?;
    Ok(Fingerprint { set: set.to_arrays(), alphas, values })
}

/// Degrees of the factors of `f mod p`, ascending; `p` must not divide `disc(f)`.
pub fn splitting_type(f: &IntPolynomial, p: u64) -> Result<Vec<usize>, Error> {
    let field = PrimeField::new(p)?;
    let disc = poly::discriminant(f.coeffs());
    if disc.is_multiple_of(&BigInt::from(p)) {
        return Err(Error::RamifiedPrime(p));
    }
    Ok(poly::factor_degrees_mod_p(&field, &poly::reduce_mod_p(&field, f.coeffs())))
}

/// Least prime `p <= prime_bound`, coprime to both discriminants, where the
/// splitting types differ. Such a prime proves the fields non-isomorphic.
pub fn distinctness_certificate(f1: &IntPolynomial, f2: &IntPolynomial, prime_bound: u64) -> Option<u64> {
    let d1 = poly::discriminant(f1.coeffs());
    let d2 = poly::discriminant(f2.coeffs());
    SplittingProfile::new(f1, &d1, prime_bound).first_difference(&SplittingProfile::new(f2, &d2, prime_bound))
}

/// Splitting types at every prime up to a bound, `None` where ramified.
#[derive(Clone, Debug)]
struct SplittingProfile {
    degree: usize,
    types: Vec<(u64, Option<Vec<usize>>)>,
}

impl SplittingProfile {
    fn new(f: &IntPolynomial, disc: &BigInt, prime_bound: u64) -> Self {
        let types = modp::primes_below(prime_bound + 1)
            .into_iter()
            .map(|p| {
                let field = PrimeField::new(p).expect("prime");
                let t = (!disc.is_multiple_of(&BigInt::from(p)))
                    .then(|| poly::factor_degrees_mod_p(&field, &poly::reduce_mod_p(&field, f.coeffs())));
                (p, t)
            })
            .collect();
        SplittingProfile { degree: f.degree(), types }
    }

    fn first_difference(&self, other: &SplittingProfile) -> Option<u64> {
        if self.degree != other.degree {
            return self.types.first().map(|(p, _)| *p);
        }
        self.types.iter().zip(&other.types).find_map(|((p, a), (_, b))| match (a, b) {
            (Some(a), Some(b)) if a != b => Some(*p),
            _ => None,
        })
    }
}

/// Pair statistics of the fingerprint map over a corpus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InjectivityReport {
    pub fields: usize,
    pub pairs: usize,
    pub certified_distinct_pairs: usize,
    /// Certified-distinct pairs with equal fingerprints; must be 0.
    pub fingerprint_collisions: usize,
    pub undetermined_pairs: usize,
    /// Undetermined pairs whose fingerprints happen to agree.
    pub undetermined_equal_fingerprints: usize,
    /// Index pairs of the collisions, for inspection.
    pub collisions: Vec<(usize, usize)>,
}

/// Fingerprints every sample, then checks each pair: where splitting types
/// certify the fields distinct, their fingerprints must differ.
pub fn injectivity_report(
    corpus: &[FieldSample],
    set: &ExponentSet,
    prime_bound: u64,
    coeff_bound: i64,
) -> Result<InjectivityReport, Error> {
    let prints = corpus.par_iter().map(|s| fingerprint(s, set, coeff_bound)).collect::<Result<Vec<_>, _>>()?;
    let profiles: Vec<SplittingProfile> =
        corpus.par_iter().map(|s| SplittingProfile::new(&s.f, &s.disc, prime_bound)).collect();
    let per_row: Vec<(usize, usize, usize, Vec<(usize, usize)>)> = (0..corpus.len())
        .into_par_iter()
        .map(|i| {
            let (mut certified, mut undetermined, mut undetermined_equal) = (0, 0, 0);
            let mut collisions = Vec::new();
            for j in (i + 1)..corpus.len() {
                let same = prints[i].values == prints[j].values;
                if profiles[i].first_difference(&profiles[j]).is_some() {
                    certified += 1;
                    if same {
                        collisions.push((i, j));
                    }
                } else {
                    undetermined += 1;
                    undetermined_equal += same as usize;
                }
            }
            (certified, undetermined, undetermined_equal, collisions)
        })
        .collect();
    let n = corpus.len();
    let mut report = InjectivityReport {
        fields: n,
        pairs: n * n.saturating_sub(1) / 2,
        certified_distinct_pairs: 0,
        fingerprint_collisions: 0,
        undetermined_pairs: 0,
        undetermined_equal_fingerprints: 0,
        collisions: Vec::new(),
    };
    for (c, u, ue, col) in per_row {
        report.certified_distinct_pairs += c;
        report.undetermined_pairs += u;
        report.undetermined_equal_fingerprints += ue;
        report.collisions.extend(col);
    }
    report.fingerprint_collisions = report.collisions.len();
    Ok(report)
}

/// Monic cubics `x^3 + a x^2 + b x + c` with `a in {-1, 0, 1}` (every cubic
/// is a translate of one of these) and `|b|, |c| <= height`, in
/// lexicographic order of `(a, b, c)`.
pub fn cubic_candidates(height: i64) -> Vec<IntPolynomial> {
    let mut out = Vec::new();
    for a in -1..=1i64 {
        for b in -height..=height {
            for c in -height..=height {
                out.push(IntPolynomial::from_descending(&[1, a, b, c]).expect("monic cubic"));
            }
        }
    }
    out
}

/// The accepted members of [`cubic_candidates`].
pub fn cubic_corpus(height: i64) -> Vec<FieldSample> {
    cubic_candidates(height).par_iter().filter_map(|f| analyze_poly(f).ok()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::build_a2;
    use proptest::prelude::*;

    fn poly(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_descending(c).unwrap()
    }

    fn z(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&v| BigInt::from(v)).collect()
    }

    fn zm(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| z(r)).collect()
    }

    fn ev(v: &[u32]) -> ExponentVector {
        ExponentVector::new(v.to_vec()).unwrap()
    }

    fn cyclic() -> IntPolynomial {
        poly(&[1, -1, -2, 1])
    }

    // trace of the k-th power of the companion matrix
    fn companion_power_trace(f: &IntPolynomial, k: usize) -> BigInt {
        let n = f.degree();
        let c = f.coeffs();
        let mut comp = vec![vec![BigInt::zero(); n]; n];
        for i in 1..n {
            comp[i][i - 1] = BigInt::one();
        }
        for i in 0..n {
            comp[i][n - 1] = -c[i].clone();
        }
        let mut acc: Vec<Vec<BigInt>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
        for _ in 0..k {
            acc = (0..n).map(|i| (0..n).map(|j| (0..n).map(|l| &acc[i][l] * &comp[l][j]).sum()).collect()).collect();
        }
        (0..n).map(|i| acc[i][i].clone()).sum()
    }

    #[test]
    fn parse_and_display() {
        let f: IntPolynomial = "1 -1 -2 1".parse().unwrap();
        assert_eq!(f, cyclic());
        assert_eq!("[1, -1, -2, 1]".parse::<IntPolynomial>().unwrap(), f);
        assert_eq!(f.to_string(), "1 -1 -2 1");
        assert!("2 0 1".parse::<IntPolynomial>().is_err());
        assert!("1 x".parse::<IntPolynomial>().is_err());
        assert!("1 5".parse::<IntPolynomial>().is_err());
        let corpus = parse_corpus("# cubics\n1 -1 -2 1\n\n1 0 -3 -1  # inert at 13\n").unwrap();
        assert_eq!(corpus.len(), 2);
        assert!(parse_corpus("1 0 1\nbogus\n").is_err());
    }

    #[test]
    fn analyze_examples() {
        let s = analyze_poly(&cyclic()).unwrap();
        assert_eq!(s.disc, BigInt::from(49));
        assert_eq!(s.real_roots, 3);
        assert_eq!(
            analyze_poly(&poly(&[1, 0, 0, -2])).unwrap_err(),
            Rejection::NotTotallyReal { real_roots: 1, degree: 3 }
        );
        assert_eq!(analyze_poly(&poly(&[1, 0, -1])).unwrap_err(), Rejection::NotIrreducible);
        assert_eq!(analyze_poly(&poly(&[1, -2, 1])).unwrap_err(), Rejection::NotSquarefree);
        // (x^2 - 2)(x^2 - 3): totally real, no rational root, reducible mod every prime
        assert_eq!(analyze_poly(&poly(&[1, 0, -5, 0, 6])).unwrap_err(), Rejection::IrreducibilityUnknown);
        // x^4 - 4x^2 + 2: Eisenstein at 2, totally real
        let s = analyze_poly(&poly(&[1, 0, -4, 0, 2])).unwrap();
        assert_eq!(s.degree(), 4);
        assert!(linalg::is_positive_definite(&s.gram));
        assert_eq!(
            analyze_poly(&IntPolynomial::from_descending(&[1i64; 12]).unwrap()).unwrap_err(),
            Rejection::DegreeOutOfRange(11)
        );
    }

    #[test]
    fn gram_examples() {
        assert_eq!(trace_gram(&cyclic()), zm(&[&[3, 1, 5], &[1, 5, 4], &[5, 4, 13]]));
        assert_eq!(trace_gram(&poly(&[1, 0, -2])), zm(&[&[2, 0], &[0, 4]]));
    }

    #[test]
    fn power_sums_match_companion_traces() {
        for f in [cyclic(), poly(&[1, 0, -3, -1]), poly(&[1, 0, -4, 0, 2]), poly(&[1, 3, -7, 2, 5, -1])] {
            let p = power_sums(&f, 2 * f.degree());
            for (k, pk) in p.iter().enumerate() {
                assert_eq!(pk, &companion_power_trace(&f, k), "{f} k={k}");
            }
            // Newton recurrence p_k = e1 p_{k-1} - e2 p_{k-2} + ... for k > n
            let n = f.degree();
            let e: Vec<BigInt> = (0..=n)
                .map(|i| if i % 2 == 0 { f.coeffs()[n - i].clone() } else { -f.coeffs()[n - i].clone() })
                .collect();
            for k in (n + 1)..=2 * n {
                let mut s = BigInt::zero();
                for i in 1..=n {
                    let term = &e[i] * &p[k - i];
                    if i % 2 == 1 {
                        s += term;
                    } else {
                        s -= term;
                    }
                }
                assert_eq!(s, p[k]);
            }
        }
    }

    fn is_lll_reduced(g: &[Vec<BigInt>]) -> bool {
        let (mu, b) = gram_schmidt(g);
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let delta = BigRational::new(BigInt::from(99), BigInt::from(100));
        let n = g.len();
        let size = (0..n).all(|i| (0..i).all(|j| mu[i][j].abs() <= half));
        let lovasz = (1..n).all(|k| b[k] >= (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &b[k - 1]);
        size && lovasz
    }

    #[test]
    fn lll_identity_and_reduced_input() {
        let id = zm(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        let (g, t) = lll_reduce(&id).unwrap();
        assert_eq!(g, id);
        assert_eq!(t, id);
        let g2 = trace_gram(&poly(&[1, 0, -2]));
        assert!(is_lll_reduced(&g2));
        let (g, t) = lll_reduce(&g2).unwrap();
        assert_eq!(g, g2);
        assert_eq!(t, zm(&[&[1, 0], &[0, 1]]));
        assert_eq!(lll_reduce(&zm(&[&[1, 2], &[2, 1]])).unwrap_err(), Error::NotPositiveDefinite);
    }

    #[test]
    fn lll_recovers_from_scrambles() {
        let base = trace_gram(&cyclic());
        let (reduced, _) = lll_reduce(&base).unwrap();
        let scrambles = [
            zm(&[&[1, 3, 0], &[0, 1, 0], &[0, 0, 1]]),
            zm(&[&[1, 0, 0], &[-4, 1, 0], &[2, 5, 1]]),
            zm(&[&[2, 1, 0], &[1, 1, 0], &[7, -3, 1]]),
        ];
        for u in &scrambles {
            let scrambled = gram_of(u, &reduced);
            let (g, t) = lll_reduce(&scrambled).unwrap();
            assert!(is_lll_reduced(&g));
            assert_eq!(gram_of(&t, &scrambled), g);
            assert!(linalg::bareiss_det(&t).abs().is_one());
            assert_eq!(linalg::bareiss_det(&g), linalg::bareiss_det(&base));
        }
    }

    #[test]
    fn mixed_trace_examples() {
        let f = cyclic();
        let theta = z(&[0, 1, 0]);
        let theta2 = z(&[0, 0, 1]);
        assert_eq!(mixed_trace(&f, &[theta.clone(), theta2.clone()], &ev(&[1, 1])).unwrap(), BigInt::from(4));
        assert_eq!(mixed_trace(&f, &[theta.clone(), theta2], &ev(&[0, 0])).unwrap(), BigInt::from(3));
        let p = power_sums(&f, 8);
        for i in 0..=8u32 {
            for j in 0..=(8 - i) {
                let t = mixed_trace(&f, &[theta.clone(), theta.clone()], &ev(&[i, j])).unwrap();
                assert_eq!(t, p[(i + j) as usize]);
            }
        }
        assert!(mixed_trace(&f, &[z(&[0, 1])], &ev(&[1])).is_err());
        assert!(mixed_trace(&f, &[theta.clone()], &ev(&[1, 1])).is_err());
    }

    #[test]
    fn generator_examples() {
        let f = cyclic();
        assert!(is_generator(&f, &z(&[0, 1, 0])));
        assert!(!is_generator(&f, &z(&[1, 0, 0])));
        assert!(is_generator(&f, &z(&[0, 1, 1])));
        // theta^2 in Q(sqrt 2)-ish quartic x^4 - 4x^2 + 2 lies in the quadratic subfield
        let q = poly(&[1, 0, -4, 0, 2]);
        assert!(!is_generator(&q, &z(&[0, 0, 1, 0])));
        assert!(is_generator(&q, &z(&[0, 1, 0, 0])));
    }

    // char poly by the power-sum route: Tr(alpha^k), then Newton's identities
    fn charpoly_by_traces(f: &IntPolynomial, alpha: &[BigInt]) -> Vec<BigInt> {
        let n = f.degree();
        let p: Vec<BigInt> = (0..=n as u32).map(|k| mixed_trace(f, &[alpha.to_vec()], &ev(&[k])).unwrap()).collect();
        // e_k = (1/k) sum_{i=1}^k (-1)^{i-1} e_{k-i} p_i
        let mut e = vec![BigInt::one()];
        for k in 1..=n {
            let mut s = BigInt::zero();
            for i in 1..=k {
                let t = &e[k - i] * &p[i];
                if i % 2 == 1 {
                    s += t;
                } else {
                    s -= t;
                }
            }
            e.push(s / BigInt::from(k));
        }
        // x^n - e1 x^{n-1} + e2 x^{n-2} - ...
        let mut c = vec![BigInt::zero(); n + 1];
        for k in 0..=n {
            c[n - k] = if k % 2 == 0 { e[k].clone() } else { -e[k].clone() };
        }
        c
    }

    #[test]
    fn charpoly_matches_trace_route() {
        let fields = [cyclic(), poly(&[1, 0, -4, 0, 2]), poly(&[1, 0, -3, -1])];
        for f in &fields {
            let order = Order::new(f);
            for seed in 0..20i64 {
                let alpha: Vec<BigInt> =
                    (0..f.degree() as i64).map(|j| BigInt::from((seed * 7 + j * 3) % 5 - 2)).collect();
                let m = order.multiplication_matrix(&alpha);
                assert_eq!(charpoly(&m), charpoly_by_traces(f, &alpha), "{f} {alpha:?}");
            }
            // alpha = theta gives f itself
            let mut theta = vec![BigInt::zero(); f.degree()];
            theta[1] = BigInt::one();
            assert_eq!(charpoly(&order.multiplication_matrix(&theta)), f.coeffs().to_vec());
        }
    }

    #[test]
    fn generator_search() {
        let s = analyze_poly(&cyclic()).unwrap();
        let tuple = pick_small_generators(&s, 2, 2).unwrap();
        assert_eq!(tuple.len(), 2);
        assert!(is_generator(&s.f, &tuple[0]));
        assert_ne!(tuple[0], tuple[1]);
        assert_eq!(pick_small_generators(&s, 2, 2).unwrap(), tuple);
        assert!(matches!(pick_small_generators(&s, 2, 0), Err(Error::SearchExhausted(_))));
    }

    #[test]
    fn fingerprint_shape() {
        let s = analyze_poly(&cyclic()).unwrap();
        let a3 = build_a2(3).unwrap().set;
        let fp = fingerprint(&s, &a3, 2).unwrap();
        assert_eq!(fp.values.len(), 6);
        assert_eq!(fp.set, a3.to_arrays());
        assert_eq!(fingerprint(&s, &a3, 2).unwrap(), fp);
        assert!(fingerprint(&s, &build_a2(4).unwrap().set, 2).is_err());
        let json = serde_json::to_value(&fp).unwrap();
        assert!(json["values"].as_array().unwrap().iter().all(|v| v.is_i64()));
    }

    #[test]
    fn splitting_examples() {
        assert_eq!(splitting_type(&cyclic(), 13).unwrap(), vec![1, 1, 1]);
        assert_eq!(splitting_type(&poly(&[1, 0, -3, -1]), 13).unwrap(), vec![3]);
        assert_eq!(splitting_type(&cyclic(), 7), Err(Error::RamifiedPrime(7)));
        assert_eq!(splitting_type(&poly(&[1, 0, -3, -1]), 3), Err(Error::RamifiedPrime(3)));
        assert_eq!(distinctness_certificate(&cyclic(), &poly(&[1, 0, -3, -1]), 100), Some(13));
        assert_eq!(distinctness_certificate(&cyclic(), &cyclic().shifted(-1), 200), None);
    }

    #[test]
    fn worked_pair_report() {
        let corpus: Vec<FieldSample> =
            [cyclic(), poly(&[1, 0, -3, -1])].iter().map(|f| analyze_poly(f).unwrap()).collect();
        let rep = injectivity_report(&corpus, &build_a2(3).unwrap().set, 100, 2).unwrap();
        assert_eq!(rep.certified_distinct_pairs, 1);
        assert_eq!(rep.fingerprint_collisions, 0);
        assert_eq!(rep.undetermined_pairs, 0);
    }

    #[test]
    fn shifted_presentation_is_undetermined() {
        let f = cyclic();
        let g = f.shifted(-1);
        assert_eq!(g, poly(&[1, -4, 3, 1]));
        let corpus: Vec<FieldSample> = [f, g].iter().map(|p| analyze_poly(p).unwrap()).collect();
        let rep = injectivity_report(&corpus, &build_a2(3).unwrap().set, 200, 2).unwrap();
        assert_eq!((rep.certified_distinct_pairs, rep.undetermined_pairs), (0, 1));
    }

    #[test]
    fn prime_degree_elements_generate() {
        // in a cubic field every non-rational element generates
        for s in cubic_corpus(4) {
            for coeffs in shell(3, 1).chain(shell(3, 2)) {
                let elem: Vec<BigInt> = (0..3)
                    .map(|j| coeffs.iter().zip(&s.short_basis).map(|(c, row)| BigInt::from(*c) * &row[j]).sum())
                    .collect();
                let rational = elem[1..].iter().all(Zero::is_zero);
                assert_eq!(is_generator(&s.f, &elem), !rational, "{} {elem:?}", s.f);
            }
        }
    }

    #[test]
    fn corpus_samples_are_well_formed() {
        let corpus = cubic_corpus(5);
        assert!(!corpus.is_empty());
        for s in &corpus {
            assert!(linalg::is_positive_definite(&s.gram));
            let (g, t) = lll_reduce(&s.gram).unwrap();
            assert_eq!(t, s.short_basis);
            assert!(is_lll_reduced(&g));
            assert!(linalg::bareiss_det(&t).abs().is_one());
            assert_eq!(linalg::bareiss_det(&g), linalg::bareiss_det(&s.gram));
            assert_eq!(linalg::bareiss_det(&s.gram), s.disc);
        }
    }

    #[test]
    fn shell_enumeration() {
        let all: Vec<Vec<i64>> = shell(2, 1).collect();
        assert_eq!(all.len(), 8);
        assert_eq!(all[0], vec![-1, -1]);
        assert!(!all.contains(&vec![0, 0]));
        assert_eq!(shell(3, 2).count(), 125 - 27);
    }

    proptest! {
        #[test]
        fn mixed_trace_swap_symmetry(
            a1 in proptest::collection::vec(-3i64..=3, 3),
            a2 in proptest::collection::vec(-3i64..=3, 3),
            e1 in 0u32..4,
            e2 in 0u32..4,
        ) {
            let f = cyclic();
            let (x, y) = (z(&a1), z(&a2));
            let lhs = mixed_trace(&f, &[x.clone(), y.clone()], &ev(&[e1, e2])).unwrap();
            let rhs = mixed_trace(&f, &[y.clone(), x.clone()], &ev(&[e2, e1])).unwrap();
            prop_assert_eq!(&lhs, &rhs);
            // a = e_1 gives the plain trace of alpha_1
            let tr = mixed_trace(&f, &[x.clone(), y], &ev(&[1, 0])).unwrap();
            let p = power_sums(&f, 2);
            let expect: BigInt = x.iter().zip(&p).map(|(c, pk)| c * pk).sum();
            prop_assert_eq!(tr, expect);
        }
    }
}
