//! Dense univariate polynomials, coefficients ascending (`c[0]` is the
//! constant term), over the integers, the rationals and `F_p`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::linalg;
use crate::modp::PrimeField;

pub fn trim<T: Zero>(p: &mut Vec<T>) {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

/// Degree, with the zero polynomial at `None`.
pub fn degree<T: Zero>(p: &[T]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn derivative(f: &[BigInt]) -> Vec<BigInt> {
    f.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect()
}

/// `res(f, g)` as the determinant of the Sylvester matrix.
pub fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let (Some(m), Some(k)) = (degree(f), degree(g)) else {
        return BigInt::zero();
    };
    let size = m + k;
    if size == 0 {
        return BigInt::one();
    }
    let mut rows = vec![vec![BigInt::zero(); size]; size];
    // k shifted copies of f, then m shifted copies of g, leading coefficient first
    for i in 0..k {
        for j in 0..=m {
            rows[i][i + j] = f[m - j].clone();
        }
    }
    for i in 0..m {
        for j in 0..=k {
            rows[k + i][i + j] = g[k - j].clone();
        }
    }
    linalg::bareiss_det(&rows)
}

/// Discriminant of a monic polynomial: `(-1)^{n(n-1)/2} res(f, f')`.
pub fn discriminant(f: &[BigInt]) -> BigInt {
    let n = degree(f).unwrap_or(0);
    let res = resultant(f, &derivative(f));
    if (n * n.saturating_sub(1) / 2) % 2 == 1 {
        -res
    } else {
        res
    }
}

pub fn to_rational(f: &[BigInt]) -> Vec<BigRational> {
    f.iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

/// Remainder of `a` by nonzero `b` over Q.
pub fn rem_q(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let db = degree(b).expect("division by zero polynomial");
    let mut r: Vec<BigRational> = a.to_vec();
    trim(&mut r);
    let lead = b[db].clone();
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let q = &r[dr] / &lead;
        for j in 0..=db {
            let t = &q * &b[j];
            r[dr - db + j] -= t;
        }
        trim(&mut r);
    }
    r
}

/// Monic gcd over Q.
pub fn gcd_q(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    trim(&mut x);
    trim(&mut y);
    while degree(&y).is_some() {
        let r = rem_q(&x, &y);
        x = y;
        y = r;
    }
    if let Some(d) = degree(&x) {
        let lead = x[d].clone();
        for c in x.iter_mut() {
            *c = &*c / &lead;
        }
    }
    x
}

/// True when `gcd(f, f') = 1`.
pub fn is_squarefree(f: &[BigInt]) -> bool {
    let g = gcd_q(&to_rational(f), &to_rational(&derivative(f)));
    degree(&g) == Some(0)
}

fn sign_at_infinity(p: &[BigRational], positive: bool) -> i32 {
    match degree(p) {
        None => 0,
        Some(d) => {
            let s = if p[d].is_positive() { 1 } else { -1 };
            if positive || d % 2 == 0 {
                s
            } else {
                -s
            }
        }
    }
}

fn sign_changes(signs: impl Iterator<Item = i32>) -> usize {
    let nonzero: Vec<i32> = signs.filter(|&s| s != 0).collect();
    nonzero.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Number of distinct real roots by Sturm's theorem, in exact rational arithmetic.
pub fn count_real_roots(f: &[BigInt]) -> usize {
    let mut chain = vec![to_rational(f), to_rational(&derivative(f))];
    trim(&mut chain[0]);
    trim(&mut chain[1]);
    if degree(&chain[0]).is_none() {
        return 0;
    }
    while degree(&chain[chain.len() - 1]).is_some_and(|d| d > 0) {
        let k = chain.len();
        let r: Vec<BigRational> = rem_q(&chain[k - 2], &chain[k - 1]).into_iter().map(|c| -c).collect();
        if degree(&r).is_none() {
            break;
        }
        chain.push(r);
    }
    let at_neg = sign_changes(chain.iter().map(|p| sign_at_infinity(p, false)));
    let at_pos = sign_changes(chain.iter().map(|p| sign_at_infinity(p, true)));
    at_neg - at_pos
}

/// Integer roots of a monic integer polynomial (candidates divide the
/// constant term, or the root is zero).
pub fn has_integer_root(f: &[BigInt]) -> bool {
    let Some(first) = f.iter().position(|c| !c.is_zero()) else {
        return true;
    };
    if first > 0 {
        return true;
    }
    let c0 = f[0].abs();
    let eval = |x: &BigInt| f.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c);
    // divisors up to sqrt, paired
    let mut d = BigInt::one();
    while &d * &d <= c0 {
        if c0.is_multiple_of(&d) {
            let e = &c0 / &d;
            for cand in [d.clone(), -d.clone(), e.clone(), -e] {
                if eval(&cand).is_zero() {
                    return true;
                }
            }
        }
        d += 1;
    }
    false
}

// ---------------------------------------------------------------------------
// polynomials over F_p

pub type FpPoly = Vec<u64>;

pub fn reduce_mod_p(field: &PrimeField, f: &[BigInt]) -> FpPoly {
    let p = BigInt::from(field.modulus());
    let mut out: FpPoly = f.iter().map(|c| u64::try_from(c.mod_floor(&p)).expect("reduced coefficient fits")).collect();
    trim(&mut out);
    out
}

fn fp_sub(field: &PrimeField, a: &[u64], b: &[u64]) -> FpPoly {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = field.sub(x, y);
    }
    trim(&mut out);
    out
}

fn fp_mul(field: &PrimeField, a: &[u64], b: &[u64]) -> FpPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = field.add(out[i + j], field.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

/// `(quotient, remainder)` of `a` by nonzero `b`.
fn fp_divrem(field: &PrimeField, a: &[u64], b: &[u64]) -> (FpPoly, FpPoly) {
    let db = degree(b).expect("division by zero polynomial");
    let mut r: FpPoly = a.to_vec();
    trim(&mut r);
    let inv = field.inv(b[db]);
    let mut q = vec![0u64; r.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = field.mul(r[dr], inv);
        q[dr - db] = c;
        for j in 0..=db {
            r[dr - db + j] = field.sub(r[dr - db + j], field.mul(c, b[j]));
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

fn fp_monic(field: &PrimeField, mut a: FpPoly) -> FpPoly {
    if let Some(d) = degree(&a) {
        let inv = field.inv(a[d]);
        for c in a.iter_mut() {
            *c = field.mul(*c, inv);
        }
    }
    a
}

fn fp_gcd(field: &PrimeField, a: &[u64], b: &[u64]) -> FpPoly {
    let (mut x, mut y) = (a.to_vec(), b.to_vec());
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = fp_divrem(field, &x, &y);
        x = y;
        y = r;
    }
    fp_monic(field, x)
}

fn fp_powmod(field: &PrimeField, base: &[u64], mut exp: u64, modulus: &[u64]) -> FpPoly {
    let mut acc: FpPoly = vec![1];
    let mut b = fp_divrem(field, base, modulus).1;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = fp_divrem(field, &fp_mul(field, &acc, &b), modulus).1;
        }
        b = fp_divrem(field, &fp_mul(field, &b, &b), modulus).1;
        exp >>= 1;
    }
    acc
}

/// Degrees of the irreducible factors of a squarefree polynomial over
/// `F_p`, ascending, by distinct-degree factorization.
pub fn factor_degrees_mod_p(field: &PrimeField, f: &[u64]) -> Vec<usize> {
    let mut rest = fp_monic(field, f.to_vec());
    let x: FpPoly = vec![0, 1];
    let mut h = x.clone(); // x^{p^i} mod rest
    let mut degrees = Vec::new();
    let mut i = 0;
    while degree(&rest).is_some_and(|d| d >= 2 * (i + 1)) {
        i += 1;
        h = fp_powmod(field, &h, field.modulus(), &rest);
        let g = fp_gcd(field, &rest, &fp_sub(field, &h, &x));
        if let Some(dg) = degree(&g).filter(|&dg| dg > 0) {
            degrees.extend(std::iter::repeat(i).take(dg / i));
            rest = fp_divrem(field, &rest, &g).0;
            h = fp_divrem(field, &h, &rest).1;
        }
    }
    if let Some(dr) = degree(&rest).filter(|&dr| dr > 0) {
        degrees.push(dr);
    }
    degrees.sort_unstable();
    degrees
}
