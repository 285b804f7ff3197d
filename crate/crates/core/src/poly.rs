//! Polynomial value types.
//!
//! Coefficients are stored dense, lowest power first. Both types carry an
//! explicit *formal* degree (`coeffs.len() - 1`) that is never inferred from
//! the top nonzero coefficient, so `0x^2 + 4x + 1` remains a degree-2 object.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Integral polynomial `a_0 + a_1 x + ... + a_n x^n` with formal degree `n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Parse("empty coefficient list".into()));
        }
        Ok(Self { coeffs })
    }

    /// Builds a polynomial from machine integers, lowest power first.
    ///
    /// Panics if `coeffs` is empty.
    pub fn from_i64(coeffs: &[i64]) -> Self {
        assert!(!coeffs.is_empty(), "polynomial needs at least one coefficient");
        Self {
            coeffs: coeffs.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    /// The zero polynomial of the given formal degree.
    pub fn zero(formal_degree: usize) -> Self {
        Self {
            coeffs: vec![BigInt::zero(); formal_degree + 1],
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, power: usize) -> &BigInt {
        &self.coeffs[power]
    }

    pub fn formal_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Index of the top nonzero coefficient; `None` for the zero polynomial.
    pub fn effective_degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Coefficient at the formal degree (may be zero).
    pub fn formal_leading(&self) -> &BigInt {
        self.coeffs.last().expect("non-empty")
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// `H(p) = max |a_i|`.
    pub fn height(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// `sum |a_i|`.
    pub fn abs_sum(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// Formal derivative; formal degree drops by one (floored at zero).
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::zero(0);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigInt::from(k))
            .collect();
        Self { coeffs }
    }

    /// Same polynomial with trailing zero coefficients dropped, i.e. with
    /// formal degree equal to the effective degree. The zero polynomial
    /// becomes the constant `0`.
    pub fn truncated(&self) -> Self {
        let top = self.effective_degree().unwrap_or(0);
        Self {
            coeffs: self.coeffs[..=top].to_vec(),
        }
    }

    /// Non-negative gcd of all coefficients.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divides out the content and makes the leading (effective) coefficient
    /// positive. The zero polynomial is returned unchanged.
    pub fn primitive_part(&self) -> Self {
        let content = self.content();
        if content.is_zero() {
            return self.clone();
        }
        let mut coeffs: Vec<BigInt> = self.coeffs.iter().map(|c| c / &content).collect();
        let top = self.effective_degree().expect("nonzero");
        if coeffs[top].is_negative() {
            coeffs.iter_mut().for_each(|c| *c = -&*c);
        }
        Self { coeffs }
    }

    pub fn scaled(&self, factor: &BigInt) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect()
    }

    /// Horner evaluation in double precision.
    pub fn evaluate(&self, x: Complex64) -> Complex64 {
        horner(&self.to_f64_coeffs(), x)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for IntPolynomial {
    type Err = Error;

    /// Parses `a_0,a_1,...,a_n` (lowest power first).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Parse("empty coefficient list".into()));
        }
        let coeffs = s
            .split(',')
            .map(|tok| {
                let tok = tok.trim();
                tok.parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("not an integer coefficient: {tok:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(coeffs)
    }
}

/// Real polynomial `xi_0 + xi_1 x + ... + xi_n x^n` in double precision.
#[derive(Debug, Clone, PartialEq)]
pub struct RealPolynomial {
    coeffs: Vec<f64>,
}

impl RealPolynomial {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Parse("empty coefficient list".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn formal_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn effective_degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0.0)
    }

    pub fn evaluate(&self, x: Complex64) -> Complex64 {
        horner(&self.coeffs, x)
    }

    /// Exact integer representation: returns `(p, e)` with
    /// `coeffs[i] == p.coeffs[i] * 2^e` for every `i`.
    pub fn to_dyadic(&self) -> (IntPolynomial, i32) {
        let parts: Vec<(i64, i32)> = self.coeffs.iter().map(|&c| decode_f64(c)).collect();
        let exp = parts
            .iter()
            .filter(|(m, _)| *m != 0)
            .map(|&(_, e)| e)
            .min()
            .unwrap_or(0);
        let coeffs = parts
            .into_iter()
            .map(|(m, e)| {
                if m == 0 {
                    BigInt::zero()
                } else {
                    BigInt::from(m) << ((e - exp) as usize)
                }
            })
            .collect();
        (IntPolynomial { coeffs }, exp)
    }
}

/// Splits a finite double into `(mantissa, exponent)` with `x = m * 2^e`.
fn decode_f64(x: f64) -> (i64, i32) {
    if x == 0.0 {
        return (0, 0);
    }
    let bits = x.to_bits();
    let sign = if bits >> 63 == 0 { 1 } else { -1 };
    let raw_exp = ((bits >> 52) & 0x7ff) as i32;
    let frac = bits & 0x000f_ffff_ffff_ffff;
    let (mut m, mut e) = if raw_exp == 0 {
        (frac as i64, -1074)
    } else {
        ((frac | 0x0010_0000_0000_0000) as i64, raw_exp - 1075)
    };
    while m & 1 == 0 {
        m >>= 1;
        e += 1;
    }
    (sign * m, e)
}

pub(crate) fn horner(coeffs: &[f64], x: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    #[test]
    fn height_examples() {
        assert_eq!(p(&[-3, 0, 1]).height(), BigInt::from(3));
        assert_eq!(IntPolynomial::zero(4).height(), BigInt::from(0));
        assert_eq!(p(&[2, -7, 0, 5]).height(), BigInt::from(7));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(p(&[1, -2, 0, 1]).derivative(), p(&[-2, 0, 3]));
        assert_eq!(p(&[7]).derivative(), p(&[0]));
        let d = p(&[1, 4, 0]).derivative();
        assert_eq!(d, p(&[4, 0]));
        assert_eq!(d.formal_degree(), 1);
    }

    #[test]
    fn evaluate_examples() {
        let z = |re| Complex64::new(re, 0.0);
        assert_eq!(p(&[-1, 0, 1]).evaluate(z(2.0)), z(3.0));
        assert!(p(&[1, 0, 1]).evaluate(Complex64::i()).norm() < 1e-15);
        assert_eq!(p(&[2, -7, 0, 5]).evaluate(z(0.0)), z(2.0));
    }

    #[test]
    fn parse_and_display() {
        let q: IntPolynomial = "-1, 0,1".parse().unwrap();
        assert_eq!(q, p(&[-1, 0, 1]));
        assert_eq!(q.to_string(), "-1,0,1");
        assert!("".parse::<IntPolynomial>().is_err());
        assert!("1,,2".parse::<IntPolynomial>().is_err());
        assert!("1,2.5".parse::<IntPolynomial>().is_err());
        assert!("1,x".parse::<IntPolynomial>().is_err());
    }

    #[test]
    fn degrees_and_primitive_part() {
        let q = p(&[2, 0, -4, 0]);
        assert_eq!(q.formal_degree(), 3);
        assert_eq!(q.effective_degree(), Some(2));
        assert_eq!(q.content(), BigInt::from(2));
        assert_eq!(q.primitive_part(), p(&[-1, 0, 2, 0]));
        assert_eq!(q.truncated(), p(&[2, 0, -4]));
        assert_eq!(IntPolynomial::zero(3).effective_degree(), None);
    }

    #[test]
    fn dyadic_is_exact() {
        let r = RealPolynomial::new(vec![0.5, -0.75, 0.0, 3.0, 1e-300]).unwrap();
        let (ip, e) = r.to_dyadic();
        for (a, b) in r.coeffs().iter().zip(ip.coeffs()) {
            assert_eq!(*a, crate::discriminant::scale_by_pow2(b, e as i64));
        }
    }

    proptest! {
        #[test]
        fn derivative_formal_degree(cs in prop::collection::vec(-100i64..=100, 1..9), k in 0usize..5) {
            let mut q = p(&cs);
            let n = q.formal_degree();
            for _ in 0..k {
                q = q.derivative();
            }
            prop_assert_eq!(q.formal_degree(), n.saturating_sub(k));
        }

        #[test]
        fn derivative_matches_central_difference(
            cs in prop::collection::vec(-100i64..=100, 2..8),
            re in -2.0f64..2.0,
            im in -2.0f64..2.0,
        ) {
            let q = p(&cs);
            let x = Complex64::new(re, im);
            if x.norm() > 2.0 { return Ok(()); }
            let h = 1e-6;
            let fd = (q.evaluate(x + h) - q.evaluate(x - h)) / (2.0 * h);
            let exact = q.derivative().evaluate(x);
            // Relative to the evaluation scale sum|a_i| max(1,|x|)^n, which
            // bounds the rounding noise of p(x +- h).
            let n = cs.len() as i32 - 1;
            let scale = q.to_f64_coeffs().iter().map(|c| c.abs()).sum::<f64>()
                * x.norm().max(1.0).powi(n);
            let err = (fd - exact).norm();
            prop_assert!(err <= 1e-6 * exact.norm().max(scale), "err {} exact {}", err, exact);
        }

        #[test]
        fn height_scales(cs in prop::collection::vec(-1000i64..=1000, 1..8), c in -50i64..=50) {
            prop_assume!(c != 0);
            let q = p(&cs);
            let scaled = q.scaled(&BigInt::from(c));
            prop_assert_eq!(scaled.height(), q.height() * BigInt::from(c.abs()));
        }
    }
}
