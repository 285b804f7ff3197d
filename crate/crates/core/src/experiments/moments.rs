//! Exact even moments of the coefficient distributions.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::Serialize;

use super::spec::rational_to_string;

/// `E xi^{2k} = 1 / (2k + 1)` for `xi` uniform on `[-1, 1]`.
pub fn moment_uniform(k: u32) -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(2 * k + 1))
}

/// `E xi_Q^{2k} = 2 / (2Q + 1) * sum_{j=1}^{Q} j^{2k}` for `xi_Q` uniform on
/// `{-Q, ..., Q}`.
pub fn moment_discrete(k: u32, q: u64) -> BigRational {
    let sum: BigInt = (1..=q).map(|j| num_traits::pow(BigInt::from(j), 2 * k as usize)).sum();
    BigRational::new(BigInt::from(2) * sum, BigInt::from(2 * q + 1))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentCheck {
    pub k: u32,
    #[serde(rename = "Q")]
    pub q: u64,
    /// `|E (xi_Q / Q)^{2k} - E xi^{2k}|` as `num/den`.
    pub difference: String,
    /// `4^k / Q` as `num/den`.
    pub bound: String,
    pub holds: bool,
}

/// Checks `|E (xi_Q/Q)^{2k} - 1/(2k+1)| <= 4^k / Q` in exact arithmetic.
pub fn moment_bound_check(k: u32, q: u64) -> MomentCheck {
    let qpow = num_traits::pow(BigInt::from(q), 2 * k as usize);
    let scaled = moment_discrete(k, q) / BigRational::from_integer(qpow);
    let diff = (scaled - moment_uniform(k)).abs();
    let bound = BigRational::new(num_traits::pow(BigInt::from(4), k as usize), BigInt::from(q));
    MomentCheck {
        k,
        q,
        holds: diff <= bound,
        difference: rational_to_string(&diff),
        bound: rational_to_string(&bound),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::ensemble::{draw_stream, sample_g, sample_gq};
    use num_traits::ToPrimitive;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn examples() {
        assert_eq!(moment_uniform(1), r(1, 3));
        assert_eq!(moment_discrete(1, 1), r(2, 3));
        assert_eq!(moment_discrete(2, 2), r(34, 5));
        assert!(moment_bound_check(1, 2).holds);
        assert!(moment_bound_check(5, 2).holds);
        assert!(moment_bound_check(8, 100).holds);
    }

    #[test]
    fn bound_check_reports_exact_sides() {
        // (2/5)(1 + 4) / 4 = 1/2; |1/2 - 1/3| = 1/6; 4/2 = 2
        let c = moment_bound_check(1, 2);
        assert_eq!(c.difference, "1/6");
        assert_eq!(c.bound, "2");
    }

    #[test]
    fn discrete_second_moment_matches_sampling() {
        let q = 10u64;
        let exact = (moment_discrete(1, q) / BigRational::from_integer(100.into())).to_f64().unwrap();
        let n = 1_000_000u64;
        let (mut s, mut s2) = (0.0, 0.0);
        for i in 0..n / 3 {
            // three coefficients per draw of a quadratic
            let p = sample_gq(2, q, &mut draw_stream(21, "moment-gq", i));
            for c in p.coeffs() {
                let x = (c.to_f64().unwrap() / q as f64).powi(2);
                s += x;
                s2 += x * x;
            }
        }
        let count = (n / 3 * 3) as f64;
        let mean = s / count;
        let se = ((s2 / count - mean * mean) / count).sqrt();
        assert!((mean - exact).abs() <= 3.0 * se, "{mean} vs {exact} (se {se})");
    }

    #[test]
    fn uniform_first_two_moments() {
        let n = 1_000_000u64;
        let (mut s, mut s2) = (0.0, 0.0);
        for i in 0..n {
            let g = sample_g(0, &mut draw_stream(22, "moment-g", i));
            let x = g.coeffs()[0];
            s += x;
            s2 += x * x;
        }
        assert!((s / n as f64).abs() < 0.004);
        assert!((s2 / n as f64 - 1.0 / 3.0).abs() < 0.002);
    }
}
