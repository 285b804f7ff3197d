//! Random and exhaustive generation of the coefficient ensembles.
//!
//! Draw `i` of an ensemble always comes from its own ChaCha stream keyed by
//! `(seed, label, i)`, so results do not depend on how draws are scheduled
//! across worker threads.

use std::ops::Range;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::{IntPolynomial, RealPolynomial};

/// Default cap on the number of polynomials an exhaustive run may touch.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Indices handled by one parallel work item. Fixed so that chunk boundaries
/// never depend on the thread count.
const CHUNK: u64 = 1 << 15;

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

fn label_hash(label: &str) -> u64 {
    // FNV-1a
    label
        .bytes()
        .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// Deterministic per-draw random stream.
pub fn draw_stream(seed: u64, label: &str, index: u64) -> ChaCha8Rng {
    let key = splitmix64(seed ^ splitmix64(label_hash(label)));
    let mut rng = ChaCha8Rng::seed_from_u64(key);
    rng.set_stream(index);
    rng
}

/// Fills `out` with independent coefficients uniform on `{-q, ..., q}`.
pub fn sample_gq_into<R: Rng + ?Sized>(q: u64, rng: &mut R, out: &mut [i64]) {
    let q = q as i64;
    for c in out.iter_mut() {
        *c = rng.gen_range(-q..=q);
    }
}

/// One draw of `G_Q`: `n + 1` coefficients uniform on `{-q, ..., q}`.
pub fn sample_gq<R: Rng + ?Sized>(n: usize, q: u64, rng: &mut R) -> IntPolynomial {
    let mut buf = vec![0i64; n + 1];
    sample_gq_into(q, rng, &mut buf);
    IntPolynomial::from_i64(&buf)
}

/// One draw of `G`: `n + 1` coefficients uniform on `[-1, 1]`.
pub fn sample_g<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RealPolynomial {
    let coeffs = (0..=n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    RealPolynomial::new(coeffs).expect("finite and non-empty")
}

/// All `(2Q+1)^{n+1}` integral polynomials of formal degree `n` and height at
/// most `Q`, in odometer order (`a_0` varies fastest, starting from `-Q`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Enumeration {
    pub n: usize,
    pub q: u64,
}

impl Enumeration {
    /// Fails with [`Error::BudgetExceeded`] before any work is done.
    pub fn new(n: usize, q: u64, budget: u128) -> Result<Self> {
        let e = Self { n, q };
        let needed = e.count_u128();
        if needed > budget {
            return Err(Error::BudgetExceeded { needed, budget });
        }
        Ok(e)
    }

    pub fn count_u128(&self) -> u128 {
        let width = 2 * self.q as u128 + 1;
        (0..=self.n).try_fold(1u128, |acc, _| acc.checked_mul(width)).unwrap_or(u128::MAX)
    }

    /// Number of polynomials; only valid once the budget check passed.
    pub fn count(&self) -> u64 {
        self.count_u128() as u64
    }

    pub fn count_big(&self) -> BigInt {
        num_traits::pow(BigInt::from(2 * self.q + 1), self.n + 1)
    }

    /// Coefficients of the polynomial at position `index`.
    pub fn coeffs_at(&self, index: u64, out: &mut [i64]) {
        let width = 2 * self.q + 1;
        let mut rest = index;
        for c in out.iter_mut().take(self.n + 1) {
            *c = (rest % width) as i64 - self.q as i64;
            rest /= width;
        }
    }

    /// Steps `coeffs` to the next tuple in odometer order.
    fn advance(&self, coeffs: &mut [i64]) {
        let q = self.q as i64;
        for c in coeffs.iter_mut() {
            if *c < q {
                *c += 1;
                return;
            }
            *c = -q;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = IntPolynomial> + '_ {
        let mut buf = vec![-(self.q as i64); self.n + 1];
        let mut first = true;
        (0..self.count()).map(move |_| {
            if !first {
                self.advance(&mut buf);
            }
            first = false;
            IntPolynomial::from_i64(&buf)
        })
    }

    /// Visits `range` sequentially, passing each index and its coefficients.
    pub fn visit_range(&self, range: Range<u64>, mut f: impl FnMut(u64, &[i64])) {
        if range.is_empty() {
            return;
        }
        let mut buf = vec![0i64; self.n + 1];
        self.coeffs_at(range.start, &mut buf);
        for idx in range {
            f(idx, &buf);
            self.advance(&mut buf);
        }
    }

    /// Parallel fold over the whole enumeration. Each fixed-size chunk is
    /// folded from `init()`, and chunk results are merged left to right, so
    /// the outcome is independent of the worker count.
    pub fn fold<T, I, F, M>(&self, init: I, fold: F, merge: M) -> T
    where
        T: Send,
        I: Fn() -> T + Sync,
        F: Fn(&mut T, u64, &[i64]) + Sync,
        M: Fn(T, T) -> T,
    {
        let total = self.count();
        let chunks = total.div_ceil(CHUNK);
        let parts: Vec<T> = (0..chunks)
            .into_par_iter()
            .map(|c| {
                let mut acc = init();
                let range = c * CHUNK..((c + 1) * CHUNK).min(total);
                self.visit_range(range, |idx, coeffs| fold(&mut acc, idx, coeffs));
                acc
            })
            .collect();
        parts.into_iter().fold(init(), merge)
    }
}

/// Maps `f` over draw indices `0..count` in parallel, returning results in
/// index order.
pub fn par_draws<T, F>(count: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync,
{
    (0..count).into_par_iter().map(&f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    #[test]
    fn enumeration_counts() {
        assert_eq!(Enumeration::new(1, 1, DEFAULT_BUDGET).unwrap().iter().count(), 9);
        assert_eq!(Enumeration::new(2, 2, DEFAULT_BUDGET).unwrap().iter().count(), 125);
    }

    #[test]
    fn enumeration_visits_each_polynomial_once_in_odometer_order() {
        let e = Enumeration::new(2, 2, DEFAULT_BUDGET).unwrap();
        let all: Vec<IntPolynomial> = e.iter().collect();
        let set: std::collections::HashSet<_> = all.iter().cloned().collect();
        assert_eq!(set.len(), 125);
        assert_eq!(all[0], IntPolynomial::from_i64(&[-2, -2, -2]));
        assert_eq!(all[1], IntPolynomial::from_i64(&[-1, -2, -2]));
        assert_eq!(all[5], IntPolynomial::from_i64(&[-2, -1, -2]));
        assert_eq!(all[124], IntPolynomial::from_i64(&[2, 2, 2]));
        let mut buf = [0i64; 3];
        for (i, p) in all.iter().enumerate() {
            e.coeffs_at(i as u64, &mut buf);
            let back: Vec<i64> = p.coeffs().iter().map(|c| c.to_i64().unwrap()).collect();
            assert_eq!(back, buf);
        }
    }

    #[test]
    fn budget_is_checked_up_front() {
        let err = Enumeration::new(3, 10, 1000).unwrap_err();
        assert_eq!(err, Error::BudgetExceeded { needed: 194_481, budget: 1000 });
    }

    #[test]
    fn fold_matches_sequential_iteration() {
        let e = Enumeration::new(3, 6, DEFAULT_BUDGET).unwrap();
        let par = e.fold(|| 0i64, |acc, _, c| *acc += c[0] * c[3] + c[1], |a, b| a + b);
        let seq: i64 = e
            .iter()
            .map(|p| {
                let c: Vec<i64> = p.coeffs().iter().map(|x| x.to_i64().unwrap()).collect();
                c[0] * c[3] + c[1]
            })
            .sum();
        assert_eq!(par, seq);
    }

    #[test]
    fn gq_values_are_uniform_on_three_points() {
        let mut counts = [0u32; 3];
        for i in 0..100_000u64 {
            let mut rng = draw_stream(3, "uniformity", i);
            let p = sample_gq(0, 1, &mut rng);
            counts[(p.coeff(0).to_i64().unwrap() + 1) as usize] += 1;
        }
        for c in counts {
            assert!((c as f64 / 1e5 - 1.0 / 3.0).abs() < 0.01, "{counts:?}");
        }
    }

    #[test]
    fn streams_are_deterministic_and_distinct() {
        let a: Vec<_> = (0..20).map(|i| sample_gq(4, 100, &mut draw_stream(9, "x", i))).collect();
        let b: Vec<_> = (0..20).map(|i| sample_gq(4, 100, &mut draw_stream(9, "x", i))).collect();
        let c: Vec<_> = (0..20).map(|i| sample_gq(4, 100, &mut draw_stream(10, "x", i))).collect();
        let d: Vec<_> = (0..20).map(|i| sample_gq(4, 100, &mut draw_stream(9, "y", i))).collect();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn g_draws_lie_in_unit_interval() {
        for i in 0..10_000 {
            let g = sample_g(3, &mut draw_stream(1, "g", i));
            assert!(g.coeffs().iter().all(|c| (-1.0..=1.0).contains(c)));
        }
    }
}
