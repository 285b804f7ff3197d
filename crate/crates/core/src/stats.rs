//! Empirical distributions, Kolmogorov and interval distances, and the
//! discriminant/resultant convergence experiments.
//!
//! Distributions hold integer counts, so every CDF value is an exact ratio
//! `count / total` and distances are maximized over exact integer
//! differences before a single final division.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::discriminant::{
    discriminant_i128, discriminant_real, discriminant_small, resultant_real, resultant_small,
};
use crate::error::{Error, Result};
use crate::experiments::ensemble::{draw_stream, par_draws, sample_g, sample_gq_into, Enumeration};

/// Sorted sample with integer multiplicities.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    values: Vec<f64>,
    /// `cumulative[i]` = number of samples `<= values[i]`.
    cumulative: Vec<u64>,
}

impl EmpiricalDistribution {
    pub fn from_samples(mut samples: Vec<f64>) -> Result<Self> {
        if samples.iter().any(|x| x.is_nan()) {
            return Err(Error::InvalidArgument("NaN sample".into()));
        }
        samples.sort_unstable_by(f64::total_cmp);
        let mut values = Vec::new();
        let mut cumulative = Vec::new();
        for (i, &x) in samples.iter().enumerate() {
            // -0.0 and 0.0 collapse to one support point
            if values.last().is_some_and(|&v: &f64| v == x) {
                *cumulative.last_mut().expect("paired") = i as u64 + 1;
            } else {
                values.push(x);
                cumulative.push(i as u64 + 1);
            }
        }
        Self::checked(values, cumulative)
    }

    /// Builds from `(value, count)` pairs; zero counts are dropped.
    pub fn from_counts(mut pairs: Vec<(f64, u64)>) -> Result<Self> {
        if pairs.iter().any(|(x, _)| x.is_nan()) {
            return Err(Error::InvalidArgument("NaN sample".into()));
        }
        pairs.retain(|&(_, c)| c > 0);
        pairs.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
        let mut values: Vec<f64> = Vec::new();
        let mut cumulative: Vec<u64> = Vec::new();
        let mut running = 0u64;
        for (x, c) in pairs {
            running += c;
            if values.last() == Some(&x) {
                *cumulative.last_mut().expect("paired") = running;
            } else {
                values.push(x);
                cumulative.push(running);
            }
        }
        Self::checked(values, cumulative)
    }

    fn checked(values: Vec<f64>, cumulative: Vec<u64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("empty distribution".into()));
        }
        Ok(Self { values, cumulative })
    }

    pub fn total(&self) -> u64 {
        *self.cumulative.last().expect("non-empty")
    }

    /// Distinct support points, ascending.
    pub fn support(&self) -> &[f64] {
        &self.values
    }

    pub fn count_at(&self, i: usize) -> u64 {
        self.cumulative[i] - if i == 0 { 0 } else { self.cumulative[i - 1] }
    }

    /// Number of samples `<= x`.
    pub fn count_le(&self, x: f64) -> u64 {
        let idx = self.values.partition_point(|&v| v <= x);
        if idx == 0 {
            0
        } else {
            self.cumulative[idx - 1]
        }
    }

    /// Number of samples `< x`.
    pub fn count_lt(&self, x: f64) -> u64 {
        let idx = self.values.partition_point(|&v| v < x);
        if idx == 0 {
            0
        } else {
            self.cumulative[idx - 1]
        }
    }

    /// `P(sample <= x)`.
    pub fn ecdf(&self, x: f64) -> f64 {
        self.count_le(x) as f64 / self.total() as f64
    }

    /// Sum of the point masses as an exact rational; always one.
    pub fn weight_sum(&self) -> BigRational {
        let total = BigInt::from(self.total());
        (0..self.values.len())
            .map(|i| BigRational::new(BigInt::from(self.count_at(i)), total.clone()))
            .sum()
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().expect("non-empty")
    }

    /// Applies a strictly increasing map to the support.
    pub fn map_support(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let pairs = (0..self.values.len())
            .map(|i| (f(self.values[i]), self.count_at(i)))
            .collect();
        Self::from_counts(pairs)
    }
}

/// Merged support of two distributions with right and left CDF differences
/// scaled by `t1 * t2`: at each point `x`, `(F1(x) - F2(x)) t1 t2` and
/// `(F1(x-) - F2(x-)) t1 t2`.
fn scaled_differences(d1: &EmpiricalDistribution, d2: &EmpiricalDistribution) -> Vec<(f64, i128, i128)> {
    let (t1, t2) = (d1.total() as i128, d2.total() as i128);
    let (mut i, mut j) = (0usize, 0usize);
    let (mut c1, mut c2) = (0i128, 0i128);
    let mut out = Vec::with_capacity(d1.values.len() + d2.values.len());
    while i < d1.values.len() || j < d2.values.len() {
        let x = match (d1.values.get(i), d2.values.get(j)) {
            (Some(&a), Some(&b)) => if a.total_cmp(&b) == Ordering::Greater { b } else { a },
            (Some(&a), None) => a,
            (None, Some(&b)) => b,
            (None, None) => unreachable!(),
        };
        let before = c1 * t2 - c2 * t1;
        if d1.values.get(i) == Some(&x) {
            c1 = d1.cumulative[i] as i128;
            i += 1;
        }
        if d2.values.get(j) == Some(&x) {
            c2 = d2.cumulative[j] as i128;
            j += 1;
        }
        out.push((x, c1 * t2 - c2 * t1, before));
    }
    out
}

/// Kolmogorov distance `sup_x |F1(x) - F2(x)|`, maximized exactly over the
/// merged support.
pub fn ks_distance(d1: &EmpiricalDistribution, d2: &EmpiricalDistribution) -> f64 {
    let scale = d1.total() as f64 * d2.total() as f64;
    ks_scaled(&scaled_differences(d1, d2)) as f64 / scale
}

fn ks_scaled(diffs: &[(f64, i128, i128)]) -> u128 {
    diffs.iter().map(|d| d.1.unsigned_abs()).max().unwrap_or(0)
}

/// Supremum over closed intervals `[a, b]` of `|P1([a,b]) - P2([a,b])|`,
/// with endpoints restricted to a grid of `grid_size` pooled quantiles of the
/// merged sample (plus the infinite endpoints). When `grid_size` reaches the
/// merged support size every support point is used and the value is the
/// exact supremum. The result is never below [`ks_distance`] and never above
/// twice it.
pub fn interval_distance(
    d1: &EmpiricalDistribution,
    d2: &EmpiricalDistribution,
    grid_size: usize,
) -> Result<f64> {
    if grid_size < 2 {
        return Err(Error::InvalidArgument("grid_size must be >= 2".into()));
    }
    let diffs = scaled_differences(d1, d2);
    let grid: Vec<usize> = if grid_size >= diffs.len() {
        (0..diffs.len()).collect()
    } else {
        pooled_quantile_grid(d1, d2, &diffs, grid_size)
    };
    // Interval [g_i, g_j] has mass difference h(g_j) - h(g_i-); a = -inf
    // contributes h(-inf) = 0, b = +inf contributes h(+inf) = 0.
    let mut lo = 0i128;
    let mut hi = 0i128;
    let mut best = 0u128;
    for &k in &grid {
        let (_, right, left) = diffs[k];
        lo = lo.min(left);
        hi = hi.max(left);
        best = best.max((right - lo).unsigned_abs()).max((hi - right).unsigned_abs());
    }
    best = best.max(hi.unsigned_abs()).max(lo.unsigned_abs());
    best = best.max(ks_scaled(&diffs));
    Ok(best as f64 / (d1.total() as f64 * d2.total() as f64))
}

/// Indices into `diffs` at pooled-CDF levels `i / (grid_size - 1)`.
fn pooled_quantile_grid(
    d1: &EmpiricalDistribution,
    d2: &EmpiricalDistribution,
    diffs: &[(f64, i128, i128)],
    grid_size: usize,
) -> Vec<usize> {
    let (t1, t2) = (d1.total() as f64, d2.total() as f64);
    let pooled: Vec<f64> = diffs
        .iter()
        .map(|&(x, _, _)| 0.5 * (d1.count_le(x) as f64 / t1 + d2.count_le(x) as f64 / t2))
        .collect();
    let mut grid: Vec<usize> = (0..grid_size)
        .map(|i| {
            let level = i as f64 / (grid_size - 1) as f64;
            pooled.partition_point(|&p| p < level).min(diffs.len() - 1)
        })
        .collect();
    grid.dedup();
    grid
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ConvergenceMode {
    /// Exhaustive when the ensemble fits the budget, Monte Carlo otherwise.
    Auto,
    Exhaustive,
    MonteCarlo,
}

impl std::str::FromStr for ConvergenceMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Self::Auto),
            "exhaustive" => Ok(Self::Exhaustive),
            "montecarlo" | "mc" => Ok(Self::MonteCarlo),
            other => Err(Error::Parse(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceConfig {
    pub n: usize,
    /// Second degree; `Some` selects the resultant experiment.
    pub m: Option<usize>,
    #[serde(rename = "Q_list")]
    pub q_list: Vec<u64>,
    /// Draws of the discrete ensemble in Monte Carlo mode.
    pub samples: u64,
    /// Draws of the continuous reference ensemble.
    pub reference_samples: u64,
    pub mode: ConvergenceMode,
    pub seed: u64,
    pub budget: u128,
    pub grid_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub m: Option<usize>,
    #[serde(rename = "Q")]
    pub q: u64,
    pub mode: &'static str,
    #[serde(rename = "N")]
    pub samples: u64,
    pub distance_ks: f64,
    pub distance_interval: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares `C` in `distance ~ C / log Q`; descriptive only.
    pub fitted_constant: f64,
}

impl ConvergenceTable {
    pub const CSV_HEADER: &'static str = "n,m,Q,mode,N,distance_ks,distance_interval,seed";

    pub fn csv_rows(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|r| {
                format!(
                    "{},{},{},{},{},{},{},{}",
                    r.n,
                    r.m.map(|m| m.to_string()).unwrap_or_default(),
                    r.q,
                    r.mode,
                    r.samples,
                    r.distance_ks,
                    r.distance_interval,
                    r.seed
                )
            })
            .collect()
    }

    /// Two columns `1/log Q` and interval distance, tab separated.
    pub fn plot_tsv(&self) -> String {
        let mut out = String::from("inv_log_q\tdistance\n");
        for r in self.rows.iter().filter(|r| r.q >= 2) {
            out.push_str(&format!("{}\t{}\n", 1.0 / (r.q as f64).ln(), r.distance_interval));
        }
        out
    }
}

fn fit_inverse_log(rows: &[ConvergenceRow]) -> f64 {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.q >= 2)
        .map(|r| (1.0 / (r.q as f64).ln(), r.distance_interval))
        .collect();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    if sxx == 0.0 {
        f64::NAN
    } else {
        sxy / sxx
    }
}

/// Which statistic of a coefficient vector an experiment studies.
#[derive(Clone, Copy)]
enum Statistic {
    Discriminant { n: usize },
    Resultant { n: usize, m: usize },
}

impl Statistic {
    fn coefficient_count(self) -> usize {
        match self {
            Statistic::Discriminant { n } => n + 1,
            Statistic::Resultant { n, m } => n + m + 2,
        }
    }

    /// Normalizing power of `Q`.
    fn q_power(self) -> i32 {
        match self {
            Statistic::Discriminant { n } => 2 * n as i32 - 2,
            Statistic::Resultant { n, m } => (n + m) as i32,
        }
    }

    fn label(self) -> &'static str {
        match self {
            Statistic::Discriminant { .. } => "disc",
            Statistic::Resultant { .. } => "res",
        }
    }

    fn integral(self, c: &[i64]) -> Result<f64> {
        match self {
            Statistic::Discriminant { .. } => Ok(match discriminant_i128(c) {
                Some(v) => v as f64,
                None => crate::discriminant::scale_by_pow2(&discriminant_small(c)?, 0),
            }),
            Statistic::Resultant { n, .. } => {
                let r = resultant_small(&c[..=n], &c[n + 1..])?;
                Ok(crate::discriminant::scale_by_pow2(&r, 0))
            }
        }
    }

    fn continuous(self, seed: u64, index: u64) -> Result<f64> {
        let mut rng = draw_stream(seed, &format!("{}-g", self.label()), index);
        match self {
            Statistic::Discriminant { n } => discriminant_real(&sample_g(n, &mut rng)),
            Statistic::Resultant { n, m } => {
                let g = sample_g(n, &mut rng);
                let f = sample_g(m, &mut rng);
                resultant_real(&g, &f)
            }
        }
    }
}

fn discrete_distribution(
    stat: Statistic,
    q: u64,
    exhaustive: bool,
    cfg: &ConvergenceConfig,
) -> Result<(EmpiricalDistribution, u64)> {
    let scale = (q as f64).powi(stat.q_power());
    let k = stat.coefficient_count();
    let values: Vec<f64> = if exhaustive {
        let e = Enumeration::new(k - 1, q, cfg.budget)?;
        e.fold(
            || Ok(Vec::new()),
            |acc: &mut Result<Vec<f64>>, _, c| {
                if let Ok(v) = acc {
                    match stat.integral(c) {
                        Ok(x) => v.push(x / scale),
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
    } else {
        let label = format!("{}-gq-{q}", stat.label());
        par_draws(cfg.samples, |i| {
            let mut buf = vec![0i64; k];
            sample_gq_into(q, &mut draw_stream(cfg.seed, &label, i), &mut buf);
            stat.integral(&buf).map(|x| x / scale)
        })
        .into_iter()
        .collect::<Result<_>>()?
    };
    let count = values.len() as u64;
    Ok((EmpiricalDistribution::from_samples(values)?, count))
}

fn convergence(stat: Statistic, cfg: &ConvergenceConfig) -> Result<ConvergenceTable> {
    if cfg.q_list.is_empty() || cfg.q_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument("Q_list must be non-empty and strictly ascending".into()));
    }
    if cfg.q_list[0] == 0 {
        return Err(Error::InvalidArgument("Q must be >= 1".into()));
    }
    if cfg.reference_samples == 0 || (cfg.samples == 0 && cfg.mode != ConvergenceMode::Exhaustive) {
        return Err(Error::InvalidArgument("sample counts must be positive".into()));
    }
    let reference: Vec<f64> = par_draws(cfg.reference_samples, |i| stat.continuous(cfg.seed, i))
        .into_iter()
        .collect::<Result<_>>()?;
    let reference = EmpiricalDistribution::from_samples(reference)?;

    let mut rows = Vec::with_capacity(cfg.q_list.len());
    for &q in &cfg.q_list {
        let size = Enumeration { n: stat.coefficient_count() - 1, q }.count_u128();
        let exhaustive = match cfg.mode {
            ConvergenceMode::Exhaustive => {
                if size > cfg.budget {
                    return Err(Error::BudgetExceeded { needed: size, budget: cfg.budget });
                }
                true
            }
            ConvergenceMode::MonteCarlo => false,
            ConvergenceMode::Auto => size <= cfg.budget,
        };
        let (dist, count) = discrete_distribution(stat, q, exhaustive, cfg)?;
        let (n, m) = match stat {
            Statistic::Discriminant { n } => (n, None),
            Statistic::Resultant { n, m } => (n, Some(m)),
        };
        rows.push(ConvergenceRow {
            n,
            m,
            q,
            mode: if exhaustive { "exhaustive" } else { "montecarlo" },
            samples: count,
            distance_ks: ks_distance(&dist, &reference),
            distance_interval: interval_distance(&dist, &reference, cfg.grid_size)?,
            seed: cfg.seed,
        });
    }
    Ok(ConvergenceTable {
        fitted_constant: fit_inverse_log(&rows),
        rows,
    })
}

/// Distance between the laws of `D(G_Q) / Q^{2n-2}` and `D(G)` for each `Q`.
pub fn disc_convergence(cfg: &ConvergenceConfig) -> Result<ConvergenceTable> {
    if cfg.n < 2 {
        return Err(Error::DiscriminantDegree);
    }
    convergence(Statistic::Discriminant { n: cfg.n }, cfg)
}

/// Distance between the laws of `R(G_Q, F_Q) / Q^{n+m}` and `R(G, F)`.
pub fn resultant_convergence(cfg: &ConvergenceConfig) -> Result<ConvergenceTable> {
    let m = cfg
        .m
        .ok_or_else(|| Error::InvalidArgument("resultant convergence needs m".into()))?;
    if cfg.n == 0 || m == 0 {
        return Err(Error::ResultantDegree);
    }
    convergence(Statistic::Resultant { n: cfg.n, m }, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dist(v: &[f64]) -> EmpiricalDistribution {
        EmpiricalDistribution::from_samples(v.to_vec()).unwrap()
    }

    #[test]
    fn ecdf_examples() {
        let d = dist(&[1.0, 2.0, 3.0]);
        assert!((d.ecdf(2.0) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(d.ecdf(0.5), 0.0);
        assert_eq!(d.ecdf(3.5), 1.0);
        assert!(EmpiricalDistribution::from_samples(vec![]).is_err());
        assert!(EmpiricalDistribution::from_samples(vec![f64::NAN]).is_err());
    }

    #[test]
    fn ks_examples() {
        assert_eq!(ks_distance(&dist(&[1.0, 2.0]), &dist(&[2.0, 1.0])), 0.0);
        assert_eq!(ks_distance(&dist(&[0.0]), &dist(&[1.0])), 1.0);
        let d = ks_distance(&dist(&[0.0, 1.0]), &dist(&[0.0, 1.0, 2.0]));
        assert!((d - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn interval_examples() {
        let a = dist(&[0.0, 1.0, 2.0, 2.0]);
        assert_eq!(interval_distance(&a, &a, 10).unwrap(), 0.0);
        // Mass at 1 differs by 1/2 - 0, mass outside it by the same amount:
        // intervals see 1/2 + 0 while the CDFs only differ by 1/4 at a time.
        let b = dist(&[0.0, 1.0, 1.0, 2.0]);
        let c = dist(&[0.0, 0.0, 2.0, 2.0]);
        assert_eq!(ks_distance(&b, &c), 0.25);
        assert_eq!(interval_distance(&b, &c, 100).unwrap(), 0.5);
        assert!(interval_distance(&b, &c, 1).is_err());
    }

    #[test]
    fn counts_and_samples_agree() {
        let a = dist(&[3.0, 1.0, 1.0, 2.0]);
        let b = EmpiricalDistribution::from_counts(vec![(2.0, 1), (1.0, 2), (3.0, 1), (5.0, 0)]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.weight_sum(), BigRational::from_integer(1.into()));
    }

    fn sample_vec() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec((-20i32..20).prop_map(|v| v as f64 * 0.5), 1..40)
    }

    proptest! {
        #[test]
        fn ks_is_a_metric(a in sample_vec(), b in sample_vec(), c in sample_vec()) {
            let (a, b, c) = (dist(&a), dist(&b), dist(&c));
            let ab = ks_distance(&a, &b);
            prop_assert_eq!(ab, ks_distance(&b, &a));
            prop_assert!(ab <= ks_distance(&a, &c) + ks_distance(&c, &b) + 1e-12);
            prop_assert_eq!(ks_distance(&a, &a), 0.0);
        }

        #[test]
        fn interval_sandwich(a in sample_vec(), b in sample_vec(), grid in 2usize..50) {
            let (a, b) = (dist(&a), dist(&b));
            let ks = ks_distance(&a, &b);
            let iv = interval_distance(&a, &b, grid).unwrap();
            prop_assert!(ks <= iv + 1e-15);
            prop_assert!(iv <= 2.0 * ks + 1e-15);
            prop_assert_eq!(interval_distance(&a, &a, grid).unwrap(), 0.0);
        }

        #[test]
        fn exact_interval_matches_brute_force(a in sample_vec(), b in sample_vec()) {
            let (da, db) = (dist(&a), dist(&b));
            let mut pts: Vec<f64> = a.iter().chain(b.iter()).copied().collect();
            pts.sort_by(f64::total_cmp);
            pts.dedup();
            let mass = |v: &[f64], lo: f64, hi: f64| v.iter().filter(|&&x| lo <= x && x <= hi).count() as f64 / v.len() as f64;
            let mut best: f64 = 0.0;
            for i in 0..pts.len() {
                for j in i..pts.len() {
                    best = best.max((mass(&a, pts[i], pts[j]) - mass(&b, pts[i], pts[j])).abs());
                }
            }
            let iv = interval_distance(&da, &db, usize::MAX).unwrap();
            prop_assert!((iv - best).abs() < 1e-12, "{} vs {}", iv, best);
        }

        #[test]
        fn scale_invariance(a in sample_vec(), b in sample_vec(), k in 1u32..6) {
            let c = 2f64.powi(k as i32) * 0.75;
            let (da, db) = (dist(&a), dist(&b));
            let sa = da.map_support(|x| x * c).unwrap();
            let sb = db.map_support(|x| x * c).unwrap();
            prop_assert_eq!(interval_distance(&da, &db, usize::MAX).unwrap(), interval_distance(&sa, &sb, usize::MAX).unwrap());
            prop_assert_eq!(interval_distance(&da, &db, 7).unwrap(), interval_distance(&sa, &sb, 7).unwrap());
        }
    }

    fn small_cfg(qs: Vec<u64>) -> ConvergenceConfig {
        ConvergenceConfig {
            n: 2,
            m: None,
            q_list: qs,
            samples: 20_000,
            reference_samples: 20_000,
            mode: ConvergenceMode::Auto,
            seed: 1,
            budget: crate::experiments::DEFAULT_BUDGET,
            grid_size: usize::MAX,
        }
    }

    #[test]
    fn quadratic_support_is_bounded() {
        for q in [1u64, 3, 10, 30] {
            let cfg = small_cfg(vec![q]);
            let (d, count) = discrete_distribution(Statistic::Discriminant { n: 2 }, q, true, &cfg).unwrap();
            assert_eq!(count, (2 * q + 1).pow(3));
            assert!(d.min() >= -5.0 && d.max() <= 5.0);
            assert_eq!(d.weight_sum(), BigRational::from_integer(1.into()));
        }
    }

    #[test]
    fn linear_resultant_matches_sylvester_closed_form() {
        // R(a x + b, c x + d) = a d - b c for the standard Sylvester order
        for i in 0..200u64 {
            let mut buf = [0i64; 4];
            sample_gq_into(50, &mut draw_stream(4, "res-linear", i), &mut buf);
            let [b, a, d, c] = buf;
            let r = Statistic::Resultant { n: 1, m: 1 }.integral(&buf).unwrap();
            assert_eq!(r, (a * d - b * c) as f64);
        }
    }

    #[test]
    fn table_is_deterministic_and_bounded() {
        let cfg = small_cfg(vec![2, 5, 200]);
        let a = disc_convergence(&cfg).unwrap();
        let b = disc_convergence(&cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.rows[0].mode, "exhaustive");
        for r in &a.rows {
            assert!((0.0..=1.0).contains(&r.distance_interval));
            assert!(r.distance_ks <= r.distance_interval);
        }
        assert!(a.fitted_constant.is_finite());
        assert_eq!(a.plot_tsv().lines().count(), 4);

        let mut rc = small_cfg(vec![3, 30]);
        rc.m = Some(2);
        rc.mode = ConvergenceMode::MonteCarlo;
        let t = resultant_convergence(&rc).unwrap();
        assert!(t.rows.iter().all(|r| (0.0..=1.0).contains(&r.distance_interval)));
    }

    #[test]
    fn rejects_bad_q_lists() {
        assert!(disc_convergence(&small_cfg(vec![])).is_err());
        assert!(disc_convergence(&small_cfg(vec![10, 5])).is_err());
        let mut cfg = small_cfg(vec![1000]);
        cfg.mode = ConvergenceMode::Exhaustive;
        assert!(matches!(disc_convergence(&cfg), Err(Error::BudgetExceeded { .. })));
    }
}
