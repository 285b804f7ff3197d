//! Exact discriminants and resultants.
//!
//! The discriminant is evaluated as the signed determinant of the
//! `(2n-1) x (2n-1)` Sylvester-type matrix of `p` and `p'` whose first column
//! has been divided through by `a_n`. That matrix is polynomial in all
//! `n + 1` coefficients, so the *formal* discriminant stays defined when the
//! leading coefficient vanishes. [`discriminant_via_resultant`] is the
//! independent second route `(-1)^{n(n-1)/2} R(p, p') / a_n`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linalg::{determinant_i128, IntMatrix};
use crate::poly::{IntPolynomial, RealPolynomial};

fn discriminant_sign(n: usize) -> bool {
    (n * (n - 1) / 2) % 2 == 1
}

/// The matrix whose signed determinant is the discriminant.
///
/// Rows `0..n-1` carry `a_n, ..., a_0` shifted right by the row index, with
/// the first row's leading entry replaced by `1`. Rows `n-1..2n-1` carry
/// `n a_n, ..., 1 a_1` shifted right, with the first of them starting at `n`.
pub fn discriminant_matrix(p: &IntPolynomial) -> Result<IntMatrix> {
    let n = p.formal_degree();
    if n < 2 {
        return Err(Error::DiscriminantDegree);
    }
    let entries = discriminant_layout(n, |power| p.coeff(power).clone(), BigInt::from);
    IntMatrix::new(2 * n - 1, entries)
}

/// Fills the discriminant matrix layout for any integer-like entry type.
fn discriminant_layout<T: Clone + Zero + std::ops::Mul<Output = T>>(
    n: usize,
    coeff: impl Fn(usize) -> T,
    from_usize: impl Fn(usize) -> T,
) -> Vec<T> {
    let d = 2 * n - 1;
    let mut m = vec![T::zero(); d * d];
    for r in 0..n - 1 {
        for j in 0..=n {
            m[r * d + r + j] = coeff(n - j);
        }
    }
    for s in 0..n {
        let row = n - 1 + s;
        for j in 0..n {
            let power = n - j;
            m[row * d + s + j] = from_usize(power) * coeff(power);
        }
    }
    m[0] = from_usize(1);
    m[(n - 1) * d] = from_usize(n);
    m
}

/// Formal discriminant `D(p)` as an exact integer.
pub fn discriminant(p: &IntPolynomial) -> Result<BigInt> {
    let n = p.formal_degree();
    let det = discriminant_matrix(p)?.determinant();
    Ok(if discriminant_sign(n) { -det } else { det })
}

/// Sylvester matrix of `p` (formal degree `n`) and `q` (formal degree `m`):
/// `m` shifted rows of `p` followed by `n` shifted rows of `q`, highest power
/// first.
pub fn sylvester_matrix(p: &IntPolynomial, q: &IntPolynomial) -> Result<IntMatrix> {
    let (n, m) = (p.formal_degree(), q.formal_degree());
    if n == 0 || m == 0 {
        return Err(Error::ResultantDegree);
    }
    let entries = sylvester_layout(n, m, |i| p.coeff(i).clone(), |i| q.coeff(i).clone());
    IntMatrix::new(n + m, entries)
}

fn sylvester_layout<T: Clone + Zero>(
    n: usize,
    m: usize,
    p: impl Fn(usize) -> T,
    q: impl Fn(usize) -> T,
) -> Vec<T> {
    let d = n + m;
    let mut out = vec![T::zero(); d * d];
    for r in 0..m {
        for j in 0..=n {
            out[r * d + r + j] = p(n - j);
        }
    }
    for s in 0..n {
        for j in 0..=m {
            out[(m + s) * d + s + j] = q(m - j);
        }
    }
    out
}

/// Resultant `R(p, q)` over the formal degrees.
pub fn resultant(p: &IntPolynomial, q: &IntPolynomial) -> Result<BigInt> {
    Ok(sylvester_matrix(p, q)?.determinant())
}

/// `(-1)^{n(n-1)/2} R(p, p') / a_n`, with the division checked for exactness.
pub fn discriminant_via_resultant(p: &IntPolynomial) -> Result<BigInt> {
    let n = p.formal_degree();
    if n < 2 {
        return Err(Error::DiscriminantDegree);
    }
    let lead = p.formal_leading();
    if lead.is_zero() {
        return Err(Error::LeadingZero);
    }
    let r = resultant(p, &p.derivative())?;
    let (quot, rem) = r.div_rem(lead);
    if !rem.is_zero() {
        return Err(Error::InvariantViolation(format!(
            "R(p, p') = {r} is not divisible by the leading coefficient {lead}"
        )));
    }
    Ok(if discriminant_sign(n) { -quot } else { quot })
}

/// Discriminant of a polynomial with machine-integer coefficients.
///
/// Degree two uses `b^2 - 4ac` directly; higher degrees run the same matrix
/// through checked `i128` elimination and fall back to the big-integer route
/// on overflow.
pub fn discriminant_small(coeffs: &[i64]) -> Result<BigInt> {
    match discriminant_i128(coeffs) {
        Some(v) => Ok(BigInt::from(v)),
        None => discriminant(&IntPolynomial::from_i64(coeffs)),
    }
}

/// `i128` discriminant kernel; `None` on overflow or degree < 2.
pub fn discriminant_i128(coeffs: &[i64]) -> Option<i128> {
    let n = coeffs.len().checked_sub(1)?;
    match n {
        0 | 1 => None,
        2 => {
            let (c, b, a) = (coeffs[0] as i128, coeffs[1] as i128, coeffs[2] as i128);
            Some(b * b - 4 * a * c)
        }
        _ => {
            let m = discriminant_layout(n, |i| coeffs[i] as i128, |k| k as i128);
            let det = determinant_i128(2 * n - 1, &m)?;
            Some(if discriminant_sign(n) { -det } else { det })
        }
    }
}

/// Resultant of two machine-integer polynomials, `i128` first.
pub fn resultant_small(p: &[i64], q: &[i64]) -> Result<BigInt> {
    let (n, m) = (p.len().saturating_sub(1), q.len().saturating_sub(1));
    if n == 0 || m == 0 {
        return Err(Error::ResultantDegree);
    }
    let entries = sylvester_layout(n, m, |i| p[i] as i128, |i| q[i] as i128);
    match determinant_i128(n + m, &entries) {
        Some(v) => Ok(BigInt::from(v)),
        None => resultant(&IntPolynomial::from_i64(p), &IntPolynomial::from_i64(q)),
    }
}

/// Discriminant of a real polynomial. The double-precision coefficients are
/// converted exactly to scaled integers, so the only rounding is the final
/// conversion of the exact value to `f64`.
pub fn discriminant_real(p: &RealPolynomial) -> Result<f64> {
    let n = p.formal_degree();
    if n < 2 {
        return Err(Error::DiscriminantDegree);
    }
    let (ip, exp) = p.to_dyadic();
    let d = discriminant(&ip)?;
    Ok(scale_by_pow2(&d, exp as i64 * (2 * n as i64 - 2)))
}

/// Resultant of two real polynomials, computed exactly as in
/// [`discriminant_real`].
pub fn resultant_real(p: &RealPolynomial, q: &RealPolynomial) -> Result<f64> {
    let (n, m) = (p.formal_degree() as i64, q.formal_degree() as i64);
    let (ip, ep) = p.to_dyadic();
    let (iq, eq) = q.to_dyadic();
    let r = resultant(&ip, &iq)?;
    Ok(scale_by_pow2(&r, ep as i64 * m + eq as i64 * n))
}

/// `value * 2^exp` as a double; `value` is cut to its top 64 bits first.
pub(crate) fn scale_by_pow2(value: &BigInt, exp: i64) -> f64 {
    if value.is_zero() {
        return 0.0;
    }
    // Shift so the conversion happens on a value with ~64 significant bits,
    // then apply the remaining power of two in floating point.
    let bits = value.bits() as i64;
    let shift = (bits - 64).max(0);
    let top = value >> (shift as usize);
    let mut out = top.to_f64().expect("bounded");
    let mut e = exp + shift;
    while e > 0 {
        let step = e.min(1000);
        out *= 2f64.powi(step as i32);
        e -= step;
    }
    while e < 0 {
        let step = (-e).min(1000);
        out /= 2f64.powi(step as i32);
        e += step;
    }
    out
}

/// Crude explicit constant for `|D(p)| <= (2n-1)! n^n H(p)^{2n-2}`.
pub fn height_bound(n: usize, height: &BigInt) -> BigInt {
    let fact: BigInt = (1..=(2 * n - 1)).map(BigInt::from).product();
    let nn = num_traits::pow(BigInt::from(n), n);
    fact * nn * num_traits::pow(height.clone(), 2 * n - 2)
}
