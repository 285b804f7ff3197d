//! Stochastic boundedness of the root separation `Delta(G_Q)`.

use num_traits::Zero;
use serde::Serialize;

use super::ensemble::{draw_stream, par_draws, sample_gq_into, Enumeration};
use super::irreducible::irreducible_small;
use super::spec::{ExperimentSpec, Model, Samples};
use crate::discriminant::discriminant_small;
use crate::error::{Error, Result};
use crate::roots::separation;

/// Per-draw record; `None` for draws of effective degree below two.
#[derive(Debug, Clone, Copy, PartialEq)]
struct DrawOutcome {
    delta: f64,
    converged: bool,
    irreducible: bool,
}

/// Fractions of non-degenerate draws with `delta < Delta < 1/delta`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Boundedness {
    pub n: usize,
    #[serde(rename = "Q")]
    pub q: u64,
    pub mode: &'static str,
    pub total: u64,
    /// Draws with effective degree below two, left out of every fraction.
    pub excluded: u64,
    pub considered: u64,
    pub unconverged: u64,
    pub irreducible_considered: u64,
    pub rows: Vec<BoundednessRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundednessRow {
    pub delta: f64,
    pub in_band: u64,
    pub fraction: f64,
    /// Same fraction conditioned on irreducibility; reported, never asserted.
    pub irreducible_fraction: f64,
}

fn outcome(coeffs: &[i64], tol: f64) -> Result<Option<DrawOutcome>> {
    let Some(deg) = coeffs.iter().rposition(|&c| c != 0).filter(|&d| d >= 2) else {
        return Ok(None);
    };
    let eff = &coeffs[..=deg];
    if discriminant_small(eff)?.is_zero() {
        // repeated root
        return Ok(Some(DrawOutcome {
            delta: 0.0,
            converged: true,
            irreducible: false,
        }));
    }
    let floats: Vec<f64> = eff.iter().map(|&c| c as f64).collect();
    let sep = separation(floats.as_slice(), tol)?;
    let irreducible = if deg <= super::irreducible::MAX_DEGREE {
        irreducible_small(eff, tol).unwrap_or(false)
    } else {
        false
    };
    Ok(Some(DrawOutcome {
        delta: sep.delta,
        converged: sep.roots.converged,
        irreducible,
    }))
}

/// Evaluates every `delta` in `deltas` on one shared set of draws.
pub fn delta_boundedness_grid(spec: &ExperimentSpec, deltas: &[f64]) -> Result<Boundedness> {
    spec.validate()?;
    if spec.model != Model::Discrete {
        return Err(Error::InvalidArgument("boundedness needs the discrete model".into()));
    }
    if deltas.iter().any(|d| !d.is_finite() || *d < 0.0) {
        return Err(Error::InvalidArgument("delta must be finite and >= 0".into()));
    }
    let tol = spec.tol;
    let outcomes: Vec<Option<DrawOutcome>> = match spec.samples {
        Samples::Exhaustive => {
            let e = Enumeration::new(spec.n, spec.q, spec.budget)?;
            e.fold(
                || Ok(Vec::new()),
                |acc: &mut Result<Vec<_>>, _, c| {
                    if let Ok(v) = acc {
                        match outcome(c, tol) {
                            Ok(o) => v.push(o),
                            Err(err) => *acc = Err(err),
                        }
                    }
                },
                |a, b| {
                    let mut a = a?;
                    a.extend(b?);
                    Ok(a)
                },
            )?
        }
        Samples::MonteCarlo(count) => par_draws(count, |i| {
            let mut buf = vec![0i64; spec.n + 1];
            sample_gq_into(spec.q, &mut draw_stream(spec.seed, "gq", i), &mut buf);
            outcome(&buf, tol)
        })
        .into_iter()
        .collect::<Result<_>>()?,
    };
    let considered: Vec<DrawOutcome> = outcomes.iter().flatten().copied().collect();
    let irr: Vec<&DrawOutcome> = considered.iter().filter(|o| o.irreducible).collect();
    let in_band = |o: &DrawOutcome, d: f64| {
        let upper = if d == 0.0 { f64::INFINITY } else { 1.0 / d };
        d < o.delta && o.delta < upper
    };
    let rows = deltas
        .iter()
        .map(|&d| {
            let hits = considered.iter().filter(|o| in_band(o, d)).count() as u64;
            let irr_hits = irr.iter().filter(|o| in_band(o, d)).count();
            BoundednessRow {
                delta: d,
                in_band: hits,
                fraction: hits as f64 / considered.len().max(1) as f64,
                irreducible_fraction: irr_hits as f64 / irr.len().max(1) as f64,
            }
        })
        .collect();
    Ok(Boundedness {
        n: spec.n,
        q: spec.q,
        mode: spec.samples.mode_name(),
        total: outcomes.len() as u64,
        excluded: outcomes.iter().filter(|o| o.is_none()).count() as u64,
        considered: considered.len() as u64,
        unconverged: considered.iter().filter(|o| !o.converged).count() as u64,
        irreducible_considered: irr.len() as u64,
        rows,
    })
}

/// Fraction of non-degenerate draws with `delta < Delta(G_Q) < 1/delta`.
pub fn delta_boundedness(spec: &ExperimentSpec, delta: f64) -> Result<Boundedness> {
    delta_boundedness_grid(spec, &[delta])
}
