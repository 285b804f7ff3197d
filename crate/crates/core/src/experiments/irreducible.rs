//! Irreducibility over the rationals for low-degree integral polynomials.
//!
//! Candidate factors are rebuilt from subsets of the numeric roots: the monic
//! product over a subset, scaled by each positive divisor of the leading
//! coefficient and rounded to integers. A polynomial is declared reducible
//! only when a candidate divides it exactly, so a wrong "reducible" is
//! impossible; a true factor is always among the candidates once the roots
//! are accurate to well under half a unit after scaling.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{CheckedMul, CheckedSub, FromPrimitive, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::ensemble::{draw_stream, sample_gq_into, Enumeration};
use super::spec::{ExperimentSpec, Samples};
use crate::discriminant::{discriminant, discriminant_i128};
use crate::error::{Error, Result};
use crate::poly::IntPolynomial;
use crate::roots::find_roots;

pub const MAX_DEGREE: usize = 6;

/// Coefficient types the factor search runs over. `i128` is the fast path;
/// its checked operations report overflow so the caller can retry in
/// `BigInt`.
trait Coeff: Clone + Integer + Signed + CheckedMul + CheckedSub + FromPrimitive + ToPrimitive {}
impl<T> Coeff for T where T: Clone + Integer + Signed + CheckedMul + CheckedSub + FromPrimitive + ToPrimitive {}

/// Whether `g` divides `f` in `Z[x]`; `None` on arithmetic overflow.
fn divides<T: Coeff>(f: &[T], g: &[T]) -> Option<bool> {
    let dg = g.len() - 1;
    if f.len() <= dg {
        return Some(false);
    }
    let lead = &g[dg];
    if !f[0].is_zero() && !g[0].is_zero() && !(f[0].clone() % g[0].clone()).is_zero() {
        return Some(false);
    }
    let mut r = f.to_vec();
    for k in (0..f.len() - dg).rev() {
        let top = r[k + dg].clone();
        if top.is_zero() {
            continue;
        }
        let (quot, rem) = top.div_rem(lead);
        if !rem.is_zero() {
            return Some(false);
        }
        for j in 0..=dg {
            let sub = quot.checked_mul(&g[j])?;
            r[k + j] = r[k + j].checked_sub(&sub)?;
        }
    }
    Some(r[..dg].iter().all(Zero::is_zero))
}

fn positive_divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Coefficients of `prod_{z in subset} (x - z)`, lowest power first.
fn monic_product(roots: &[Complex64], subset: &[usize]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(1.0, 0.0)];
    for &i in subset {
        let mut next = vec![Complex64::new(0.0, 0.0); out.len() + 1];
        for (k, c) in out.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= c * roots[i];
        }
        out = next;
    }
    out
}

fn for_each_subset(n: usize, size: usize, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, f: &mut impl FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == size {
            return f(cur);
        }
        for i in start..n {
            cur.push(i);
            if rec(i + 1, n, size, cur, f) {
                return true;
            }
            cur.pop();
        }
        false
    }
    rec(0, n, size, &mut Vec::with_capacity(size), f)
}

/// Factor search on a primitive, squarefree polynomial of exact degree
/// `f.len() - 1 >= 2` with positive leading coefficient. `Some(true)` means a
/// factor was found; `None` signals overflow in `T`.
fn has_factor<T: Coeff>(f: &[T], roots: &[Complex64]) -> Result<Option<bool>> {
    let n = f.len() - 1;
    let lead = f[n]
        .to_u64()
        .ok_or_else(|| Error::InvalidArgument("leading coefficient too large to factor".into()))?;
    let divisors = positive_divisors(lead);
    let mut overflow = false;
    let mut found = false;
    for size in 1..=n / 2 {
        let hit = for_each_subset(n, size, &mut |subset| {
            let monic = monic_product(roots, subset);
            for &d in &divisors {
                let d = d as f64;
                if monic.iter().any(|c| (c.im * d).abs() > 0.25) {
                    continue;
                }
                let cand: Option<Vec<T>> = monic.iter().map(|c| T::from_f64((c.re * d).round())).collect();
                let Some(cand) = cand else { continue };
                if cand[0].is_zero() && !f[0].is_zero() {
                    continue;
                }
                match divides(f, &cand) {
                    Some(true) => return true,
                    Some(false) => {}
                    None => overflow = true,
                }
            }
            false
        });
        if hit {
            found = true;
            break;
        }
    }
    if found {
        Ok(Some(true))
    } else if overflow {
        Ok(None)
    } else {
        Ok(Some(false))
    }
}

/// Irreducibility over `Q` (equivalently, of the primitive part over `Z`).
///
/// Degree-1 polynomials are irreducible. A zero discriminant means a repeated
/// factor, hence reducible. Otherwise the root-subset search decides.
pub fn irreducible(p: &IntPolynomial, tol: f64) -> Result<bool> {
    let degree = p.effective_degree().unwrap_or(0);
    if degree == 0 {
        return Err(Error::InvalidArgument("irreducibility undefined for degree 0".into()));
    }
    if degree > MAX_DEGREE {
        return Err(Error::InvalidArgument(format!(
            "irreducibility test supports degree <= {MAX_DEGREE}"
        )));
    }
    let small: Option<Vec<i64>> = p.coeffs().iter().map(|c| c.to_i64()).collect();
    if let Some(c) = small.filter(|c| c.iter().all(|v| v.unsigned_abs() < 1 << 40)) {
        return irreducible_small(&c, tol);
    }
    let f = p.truncated().primitive_part();
    if degree == 1 {
        return Ok(true);
    }
    if discriminant(&f)?.is_zero() {
        return Ok(false);
    }
    let roots = converged_roots(&f, tol)?;
    let fc = f.coeffs().to_vec();
    Ok(!has_factor::<BigInt>(&fc, &roots)?.expect("big integers do not overflow"))
}

fn converged_roots(f: &IntPolynomial, tol: f64) -> Result<Vec<Complex64>> {
    let rs = find_roots(f, tol)?;
    if !rs.converged {
        return Err(Error::NotConverged {
            residual: rs.residual_bound,
        });
    }
    Ok(rs.roots)
}

/// Machine-integer entry point used by the experiment loops.
pub fn irreducible_small(coeffs: &[i64], tol: f64) -> Result<bool> {
    let degree = match coeffs.iter().rposition(|&c| c != 0) {
        None | Some(0) => {
            return Err(Error::InvalidArgument("irreducibility undefined for degree 0".into()))
        }
        Some(d) if d > MAX_DEGREE => {
            return Err(Error::InvalidArgument(format!(
                "irreducibility test supports degree <= {MAX_DEGREE}"
            )))
        }
        Some(d) => d,
    };
    if degree == 1 {
        return Ok(true);
    }
    let mut f: Vec<i64> = coeffs[..=degree].to_vec();
    let content = f.iter().fold(0i64, |g, &c| g.gcd(&c));
    let sign = if f[degree] < 0 { -1 } else { 1 };
    f.iter_mut().for_each(|c| *c = *c / content * sign);

    let disc_zero = match discriminant_i128(&f) {
        Some(d) => d == 0,
        None => discriminant(&IntPolynomial::from_i64(&f))?.is_zero(),
    };
    if disc_zero {
        return Ok(false);
    }
    let fp = IntPolynomial::from_i64(&f);
    let roots = converged_roots(&fp, tol)?;
    let wide: Vec<i128> = f.iter().map(|&c| c as i128).collect();
    match has_factor::<i128>(&wide, &roots)? {
        Some(found) => Ok(!found),
        None => {
            let big: Vec<BigInt> = f.iter().map(|&c| BigInt::from(c)).collect();
            Ok(!has_factor::<BigInt>(&big, &roots)?.expect("big integers do not overflow"))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IrreducibleRate {
    pub n: usize,
    #[serde(rename = "Q")]
    pub q: u64,
    pub mode: &'static str,
    pub total: u64,
    pub irreducible: u64,
    /// Draws of effective degree 0 (constants and zero); never irreducible.
    pub degree_zero: u64,
    /// Among draws of effective degree exactly 1.
    pub linear: u64,
    pub linear_irreducible: u64,
    pub fraction: f64,
}

#[derive(Default, Clone, Copy)]
struct RateAcc {
    total: u64,
    irreducible: u64,
    degree_zero: u64,
    linear: u64,
    linear_irreducible: u64,
}

impl RateAcc {
    fn add(&mut self, c: &[i64], tol: f64) -> Result<()> {
        self.total += 1;
        match c.iter().rposition(|&v| v != 0) {
            None | Some(0) => self.degree_zero += 1,
            Some(d) => {
                let irr = irreducible_small(c, tol)?;
                if irr {
                    self.irreducible += 1;
                }
                if d == 1 {
                    self.linear += 1;
                    self.linear_irreducible += u64::from(irr);
                }
            }
        }
        Ok(())
    }

    fn merge(self, o: Self) -> Self {
        Self {
            total: self.total + o.total,
            irreducible: self.irreducible + o.irreducible,
            degree_zero: self.degree_zero + o.degree_zero,
            linear: self.linear + o.linear,
            linear_irreducible: self.linear_irreducible + o.linear_irreducible,
        }
    }
}

/// Fraction of `G_Q` draws (or of the whole ensemble) irreducible over `Q`.
pub fn irreducible_rate(spec: &ExperimentSpec) -> Result<IrreducibleRate> {
    spec.validate()?;
    if !spec.model.is_discrete() {
        return Err(Error::InvalidArgument("irreducibility needs the discrete model".into()));
    }
    let tol = spec.tol;
    let acc: Result<RateAcc> = match spec.samples {
        Samples::Exhaustive => {
            let e = Enumeration::new(spec.n, spec.q, spec.budget)?;
            e.fold(
                || Ok(RateAcc::default()),
                |acc, _, c| {
                    if let Ok(a) = acc {
                        if let Err(err) = a.add(c, tol) {
                            *acc = Err(err);
                        }
                    }
                },
                |a, b| Ok(a?.merge(b?)),
            )
        }
        Samples::MonteCarlo(count) => {
            let parts = super::ensemble::par_draws(count, |i| {
                let mut buf = vec![0i64; spec.n + 1];
                sample_gq_into(spec.q, &mut draw_stream(spec.seed, "gq", i), &mut buf);
                let mut a = RateAcc::default();
                a.add(&buf, tol).map(|_| a)
            });
            parts
                .into_iter()
                .try_fold(RateAcc::default(), |acc, a| Ok(acc.merge(a?)))
        }
    };
    let acc = acc?;
    Ok(IrreducibleRate {
        n: spec.n,
        q: spec.q,
        mode: spec.samples.mode_name(),
        total: acc.total,
        irreducible: acc.irreducible,
        degree_zero: acc.degree_zero,
        linear: acc.linear,
        linear_irreducible: acc.linear_irreducible,
        fraction: acc.irreducible as f64 / acc.total as f64,
    })
}
