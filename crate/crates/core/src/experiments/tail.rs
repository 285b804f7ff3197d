//! Probability that the discriminant of `G_Q` is unusually small.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use super::ensemble::{draw_stream, par_draws, sample_gq_into, Enumeration};
use super::spec::{rational_to_string, tail_threshold, ExperimentSpec, Model, Nu, Samples};
use crate::discriminant::{discriminant, discriminant_i128};
use crate::error::{Error, Result};
use crate::poly::IntPolynomial;

/// Estimate of `P(|D(G_Q)| < Q^{2n-2-2nu})`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailEstimate {
    pub n: usize,
    #[serde(rename = "Q")]
    pub q: u64,
    pub nu: String,
    /// `ceil(Q^{2n-2-2nu})`; the event is `|D| < threshold`.
    pub threshold: String,
    pub mode: &'static str,
    pub hits: u64,
    /// Hits with `D > 0`.
    pub positive_hits: u64,
    pub total: u64,
    /// Exact `hits / total` in lowest terms (exhaustive mode only).
    pub exact: Option<String>,
    pub probability: f64,
    /// Binomial standard error; zero in exhaustive mode.
    pub std_error: f64,
}

struct Threshold {
    small: Option<i128>,
    big: BigInt,
}

impl Threshold {
    /// `Some(d > 0)` when `|D| < threshold`, else `None`.
    fn classify(&self, coeffs: &[i64]) -> Option<bool> {
        match discriminant_i128(coeffs) {
            Some(d) => {
                let below = self.small.is_none_or(|t| d.unsigned_abs() < t as u128);
                below.then_some(d > 0)
            }
            None => {
                let d = discriminant(&IntPolynomial::from_i64(coeffs)).expect("degree >= 2");
                (d.abs() < self.big).then_some(d.is_positive())
            }
        }
    }
}

/// Exhaustive count or Monte Carlo estimate of the small-discriminant
/// probability for one value of `nu`.
pub fn small_disc_probability(spec: &ExperimentSpec, nu: &Nu) -> Result<TailEstimate> {
    spec.validate()?;
    if spec.model != Model::Discrete {
        return Err(Error::InvalidArgument("tail probabilities need the discrete model".into()));
    }
    if spec.n < 2 {
        return Err(Error::DiscriminantDegree);
    }
    nu.check_range(spec.n)?;
    let big = tail_threshold(spec.n, spec.q, nu);
    let threshold = Threshold {
        small: big.to_i128(),
        big: big.clone(),
    };
    let n = spec.n;
    let (hits, positive_hits, total) = match spec.samples {
        Samples::Exhaustive => {
            let e = Enumeration::new(n, spec.q, spec.budget)?;
            let (h, p) = e.fold(
                || (0u64, 0u64),
                |acc, _, c| {
                    if let Some(pos) = threshold.classify(c) {
                        acc.0 += 1;
                        acc.1 += u64::from(pos);
                    }
                },
                |a, b| (a.0 + b.0, a.1 + b.1),
            );
            (h, p, e.count())
        }
        Samples::MonteCarlo(count) => {
            let flags = par_draws(count, |i| {
                let mut buf = vec![0i64; n + 1];
                sample_gq_into(spec.q, &mut draw_stream(spec.seed, "gq", i), &mut buf);
                threshold.classify(&buf)
            });
            let hits = flags.iter().filter(|f| f.is_some()).count() as u64;
            let pos = flags.iter().filter(|f| **f == Some(true)).count() as u64;
            (hits, pos, count)
        }
    };
    let probability = hits as f64 / total as f64;
    let exhaustive = spec.samples == Samples::Exhaustive;
    Ok(TailEstimate {
        n,
        q: spec.q,
        nu: nu.to_string(),
        threshold: big.to_string(),
        mode: spec.samples.mode_name(),
        hits,
        positive_hits,
        total,
        exact: exhaustive.then(|| {
            rational_to_string(&BigRational::new(BigInt::from(hits), BigInt::from(total)))
        }),
        probability,
        std_error: if exhaustive {
            0.0
        } else {
            (probability * (1.0 - probability) / total as f64).sqrt()
        },
    })
}
