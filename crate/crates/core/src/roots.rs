//! Complex roots by Aberth–Ehrlich iteration, root separation, Mahler's
//! lower bound, and exhaustive minimum-separation scans.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::discriminant::{discriminant, discriminant_small};
use crate::error::{Error, Result};
use crate::experiments::ensemble::Enumeration;
use crate::poly::{horner, IntPolynomial, RealPolynomial};

pub const DEFAULT_TOL: f64 = 1e-12;
pub const MAX_ITERATIONS: u32 = 500;

/// Angular offset of the initial guesses, `(sqrt 5 - 1) / 2` radians.
const ANGLE_OFFSET: f64 = 0.618_033_988_749_894_8;

/// Roots of the effective-degree polynomial, with an accuracy certificate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    /// `max |p(z)| / (sum |a_i| * max(1, |z|)^n)` over the returned roots.
    pub residual_bound: f64,
    pub converged: bool,
    pub iterations: u32,
}

/// Anything whose coefficients can be viewed as doubles, lowest power first.
pub trait RootInput {
    fn float_coeffs(&self) -> Vec<f64>;
}

impl RootInput for IntPolynomial {
    fn float_coeffs(&self) -> Vec<f64> {
        self.to_f64_coeffs()
    }
}

impl RootInput for RealPolynomial {
    fn float_coeffs(&self) -> Vec<f64> {
        self.coeffs().to_vec()
    }
}

impl RootInput for [f64] {
    fn float_coeffs(&self) -> Vec<f64> {
        self.to_vec()
    }
}

pub fn find_roots<P: RootInput + ?Sized>(p: &P, tol: f64) -> Result<RootSet> {
    aberth(&p.float_coeffs(), tol)
}

/// Aberth–Ehrlich simultaneous iteration on the effective-degree polynomial.
///
/// A root estimate `z` is settled once its last correction is at most
/// `tol * max(1, |z|)`; the set is `converged` when every root settled and the
/// normalized residual is at most `tol`.
fn aberth(all_coeffs: &[f64], tol: f64) -> Result<RootSet> {
    let Some(n) = all_coeffs.iter().rposition(|&c| c != 0.0) else {
        return Err(Error::ZeroPolynomial);
    };
    let coeffs = &all_coeffs[..=n];
    if n == 0 {
        return Ok(RootSet {
            roots: Vec::new(),
            residual_bound: 0.0,
            converged: true,
            iterations: 0,
        });
    }
    let lead = coeffs[n].abs();
    let height = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let radius = 1.0 + height / lead;
    let deriv: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &c)| k as f64 * c)
        .collect();

    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + ANGLE_OFFSET))
        .collect();

    let mut iterations = 0;
    let mut settled = false;
    while iterations < MAX_ITERATIONS {
        iterations += 1;
        let mut all_small = true;
        for k in 0..n {
            let pz = horner(coeffs, z[k]);
            if pz == Complex64::zero() {
                continue;
            }
            let dz = horner(&deriv, z[k]);
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let denom = dz - pz * repulsion;
            let step = if denom.norm() == 0.0 || !denom.is_finite() {
                // Nudge off a critical point.
                Complex64::new(tol.max(1e-8), tol.max(1e-8)) * z[k].norm().max(1.0)
            } else {
                pz / denom
            };
            if !step.is_finite() {
                all_small = false;
                continue;
            }
            z[k] -= step;
            if step.norm() > tol * z[k].norm().max(1.0) {
                all_small = false;
            }
        }
        if all_small {
            settled = true;
            break;
        }
    }

    let scale: f64 = coeffs.iter().map(|c| c.abs()).sum();
    let residual_bound = z
        .iter()
        .map(|&r| horner(coeffs, r).norm() / (scale * r.norm().max(1.0).powi(n as i32)))
        .fold(0.0f64, f64::max);
    let finite = z.iter().all(|r| r.is_finite());
    Ok(RootSet {
        roots: z,
        residual_bound,
        converged: settled && finite && residual_bound <= tol,
        iterations,
    })
}

/// Root separation together with the roots it was computed from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Separation {
    pub delta: f64,
    pub roots: RootSet,
}

pub fn min_pairwise_distance(roots: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            best = best.min((roots[i] - roots[j]).norm());
        }
    }
    best
}

/// `Delta(p)`: smallest distance between two complex roots.
pub fn separation<P: RootInput + ?Sized>(p: &P, tol: f64) -> Result<Separation> {
    let coeffs = p.float_coeffs();
    match coeffs.iter().rposition(|&c| c != 0.0) {
        None => return Err(Error::ZeroPolynomial),
        Some(d) if d < 2 => return Err(Error::SeparationDegree),
        _ => {}
    }
    let roots = aberth(&coeffs, tol)?;
    Ok(Separation {
        delta: min_pairwise_distance(&roots.roots),
        roots,
    })
}

/// Natural log of `|x|` for a nonzero big integer, without overflow.
fn ln_abs(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        x.abs().to_f64().expect("fits").ln()
    } else {
        let shift = bits - 64;
        (x.abs() >> shift).to_f64().expect("fits").ln() + shift as f64 * std::f64::consts::LN_2
    }
}

/// Mahler's separation bound
/// `sqrt(3) n^{-(n+2)/2} |D(p)|^{1/2} / (sum |a_i|)^{n-1}` with `n` the
/// effective degree and `D` the exact discriminant of the truncated polynomial.
pub fn mahler_bound(p: &IntPolynomial) -> Result<f64> {
    let n = match p.effective_degree() {
        None => return Err(Error::ZeroPolynomial),
        Some(d) if d < 2 => return Err(Error::SeparationDegree),
        Some(d) => d,
    };
    let t = p.truncated();
    let d = discriminant(&t)?;
    Ok(mahler_from_parts(n, &d, &t.abs_sum()))
}

pub(crate) fn mahler_from_parts(n: usize, disc: &BigInt, abs_sum: &BigInt) -> f64 {
    if disc.is_zero() {
        return 0.0;
    }
    let n_f = n as f64;
    let log = 0.5 * 3f64.ln() - 0.5 * (n_f + 2.0) * n_f.ln() + 0.5 * ln_abs(disc)
        - (n_f - 1.0) * ln_abs(abs_sum);
    log.exp()
}

/// Constant `c_n` with `Delta(p) >= c_n H(p)^{-(n-1)}` for squarefree integral
/// `p` of degree `n`: the Mahler bound with `|D| >= 1` and
/// `sum |a_i| <= (n+1) H`.
pub fn separation_floor_constant(n: usize) -> f64 {
    let n_f = n as f64;
    3f64.sqrt() * n_f.powf(-(n_f + 2.0) / 2.0) / (n_f + 1.0).powi(n as i32 - 1)
}

/// Result of an exhaustive minimum-separation scan at one height.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub n: usize,
    #[serde(rename = "Q")]
    pub q: u64,
    pub min_delta: f64,
    pub witness: String,
    pub witness_mahler: f64,
    /// Polynomials with nonzero discriminant whose separation was computed.
    pub examined: u64,
    /// Polynomials skipped: zero discriminant or effective degree below 2.
    pub excluded: u64,
    /// Examined polynomials whose roots failed to converge.
    pub unconverged: u64,
}

#[derive(Clone)]
struct ScanAcc {
    best: Option<(f64, u64)>,
    examined: u64,
    excluded: u64,
    unconverged: u64,
}

/// Minimum of `Delta(p)` over all integral polynomials of formal degree `n`
/// and height at most `q` with nonzero discriminant and effective degree at
/// least two. Ties go to the earliest polynomial in odometer order.
pub fn min_separation_scan(n: usize, q: u64, tol: f64, budget: u128) -> Result<ScanRow> {
    if n < 2 {
        return Err(Error::InvalidArgument("scan requires n >= 2".into()));
    }
    let e = Enumeration::new(n, q, budget)?;
    let init = || ScanAcc {
        best: None,
        examined: 0,
        excluded: 0,
        unconverged: 0,
    };
    let acc = e.fold(
        init,
        |acc, idx, c| {
            let eff = c.iter().rposition(|&v| v != 0);
            if eff.is_none_or(|d| d < 2) {
                acc.excluded += 1;
                return;
            }
            let d = discriminant_small(c).expect("degree >= 2");
            if d.is_zero() {
                acc.excluded += 1;
                return;
            }
            let coeffs: Vec<f64> = c.iter().map(|&v| v as f64).collect();
            let sep = separation(coeffs.as_slice(), tol).expect("effective degree >= 2");
            acc.examined += 1;
            if !sep.roots.converged {
                acc.unconverged += 1;
            }
            if acc.best.is_none_or(|(b, _)| sep.delta < b) {
                acc.best = Some((sep.delta, idx));
            }
        },
        |a, b| {
            let best = match (a.best, b.best) {
                (Some(x), Some(y)) => Some(if y.0 < x.0 || (y.0 == x.0 && y.1 < x.1) { y } else { x }),
                (x, None) => x,
                (None, y) => y,
            };
            ScanAcc {
                best,
                examined: a.examined + b.examined,
                excluded: a.excluded + b.excluded,
                unconverged: a.unconverged + b.unconverged,
            }
        },
    );
    let (min_delta, idx) = acc
        .best
        .ok_or_else(|| Error::InvalidArgument("no polynomial with two distinct roots".into()))?;
    let mut buf = vec![0i64; n + 1];
    e.coeffs_at(idx, &mut buf);
    let witness = IntPolynomial::from_i64(&buf);
    Ok(ScanRow {
        n,
        q,
        min_delta,
        witness_mahler: mahler_bound(&witness)?,
        witness: witness.to_string(),
        examined: acc.examined,
        excluded: acc.excluded,
        unconverged: acc.unconverged,
    })
}

/// Scans over increasing heights. When a height exceeds the budget the rows
/// already computed are returned inside [`PartialScan`].
pub fn scan_heights(n: usize, qs: &[u64], tol: f64, budget: u128) -> std::result::Result<Vec<ScanRow>, PartialScan> {
    let mut rows = Vec::new();
    for &q in qs {
        match min_separation_scan(n, q, tol, budget) {
            Ok(row) => rows.push(row),
            Err(error) => return Err(PartialScan { rows, error }),
        }
    }
    Ok(rows)
}

/// Scan aborted part-way; `rows` holds the completed heights.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialScan {
    pub rows: Vec<ScanRow>,
    pub error: Error,
}

/// Least-squares slope of `log y` against `log x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
