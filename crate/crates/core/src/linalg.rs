//! Exact determinants by fraction-free (Bareiss) elimination.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Dense square matrix of arbitrary-precision integers, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(dim: usize, entries: Vec<BigInt>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("matrix dimension must be >= 1".into()));
        }
        if entries.len() != dim * dim {
            return Err(Error::InvalidArgument(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Ok(Self { dim, entries })
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1);
        Self {
            dim,
            entries: vec![BigInt::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Panics unless `rows` is non-empty and square.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let dim = rows.len();
        assert!(dim >= 1 && rows.iter().all(|r| r.len() == dim), "square rows required");
        Self {
            dim,
            entries: rows.iter().flatten().map(|&v| BigInt::from(v)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &BigInt {
        &self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: BigInt) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn row(&self, row: usize) -> &[BigInt] {
        &self.entries[row * self.dim..(row + 1) * self.dim]
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        let entries = (0..d * d)
            .map(|idx| self.entries[(idx % d) * d + idx / d].clone())
            .collect();
        Self { dim: d, entries }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let d = self.dim;
        for j in 0..d {
            self.entries.swap(a * d + j, b * d + j);
        }
    }

    /// Exact determinant. Every division performed is exact.
    pub fn determinant(&self) -> BigInt {
        bareiss(self.dim, self.entries.clone())
    }
}

fn bareiss(d: usize, mut m: Vec<BigInt>) -> BigInt {
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..d {
        if m[k * d + k].is_zero() {
            let Some(p) = (k + 1..d).find(|&i| !m[i * d + k].is_zero()) else {
                return BigInt::zero();
            };
            for j in 0..d {
                m.swap(k * d + j, p * d + j);
            }
            negate = !negate;
        }
        if k + 1 == d {
            break;
        }
        let pivot = m[k * d + k].clone();
        for i in k + 1..d {
            let lead = m[i * d + k].clone();
            for j in k + 1..d {
                let v = &m[i * d + j] * &pivot - &lead * &m[k * d + j];
                m[i * d + j] = v / &prev;
            }
            m[i * d + k] = BigInt::zero();
        }
        prev = pivot;
    }
    let det = m[d * d - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Bareiss elimination in checked `i128` arithmetic, for matrices with small
/// entries. Returns `None` if any intermediate value overflows.
pub fn determinant_i128(dim: usize, entries: &[i128]) -> Option<i128> {
    debug_assert_eq!(entries.len(), dim * dim);
    let mut m = [0i128; 32 * 32];
    if dim == 0 || dim > 32 {
        return None;
    }
    m[..dim * dim].copy_from_slice(entries);
    let d = dim;
    let mut negate = false;
    let mut prev: i128 = 1;
    for k in 0..d {
        if m[k * d + k] == 0 {
            let Some(p) = (k + 1..d).find(|&i| m[i * d + k] != 0) else {
                return Some(0);
            };
            for j in 0..d {
                m.swap(k * d + j, p * d + j);
            }
            negate = !negate;
        }
        if k + 1 == d {
            break;
        }
        let pivot = m[k * d + k];
        for i in k + 1..d {
            let lead = m[i * d + k];
            for j in k + 1..d {
                let v = m[i * d + j]
                    .checked_mul(pivot)?
                    .checked_sub(lead.checked_mul(m[k * d + j])?)?;
                m[i * d + j] = v / prev;
            }
            m[i * d + k] = 0;
        }
        prev = pivot;
    }
    let det = m[d * d - 1];
    Some(if negate { -det } else { det })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Laplace expansion along the first row; independent of elimination.
    fn cofactor_det(rows: &[Vec<i64>]) -> BigInt {
        let d = rows.len();
        if d == 1 {
            return BigInt::from(rows[0][0]);
        }
        let mut total = BigInt::zero();
        for col in 0..d {
            if rows[0][col] == 0 {
                continue;
            }
            let minor: Vec<Vec<i64>> = rows[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(j, _)| j != col)
                        .map(|(_, &v)| v)
                        .collect()
                })
                .collect();
            let term = BigInt::from(rows[0][col]) * cofactor_det(&minor);
            if col % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    fn random_rows(rng: &mut ChaCha8Rng, d: usize) -> Vec<Vec<i64>> {
        (0..d)
            .map(|_| (0..d).map(|_| rng.gen_range(-9..=9)).collect())
            .collect()
    }

    #[test]
    fn small_examples() {
        assert_eq!(IntMatrix::identity(3).determinant(), BigInt::from(1));
        assert_eq!(
            IntMatrix::from_rows(&[vec![2, 3], vec![4, 5]]).determinant(),
            BigInt::from(-2)
        );
        assert_eq!(IntMatrix::from_rows(&[vec![7]]).determinant(), BigInt::from(7));
        assert_eq!(IntMatrix::zeros(4).determinant(), BigInt::zero());
    }

    #[test]
    fn zero_pivot_requires_swap() {
        let m = IntMatrix::from_rows(&[vec![0, 1, 2], vec![3, 4, 5], vec![6, 7, 9]]);
        assert_eq!(m.determinant(), BigInt::from(-3));
    }

    #[test]
    fn random_5x5_against_cofactor_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let rows = random_rows(&mut rng, 5);
            assert_eq!(IntMatrix::from_rows(&rows).determinant(), cofactor_det(&rows));
        }
    }

    #[test]
    fn agrees_with_cofactor_expansion_up_to_dim_6() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for case in 0..1200 {
            let d = 1 + case % 6;
            let mut rows = random_rows(&mut rng, d);
            // Sprinkle zeros so that pivot swaps and singular cases occur.
            for r in rows.iter_mut() {
                for v in r.iter_mut() {
                    if rng.gen_bool(0.3) {
                        *v = 0;
                    }
                }
            }
            let exact = cofactor_det(&rows);
            assert_eq!(IntMatrix::from_rows(&rows).determinant(), exact);
            let flat: Vec<i128> = rows.iter().flatten().map(|&v| v as i128).collect();
            assert_eq!(determinant_i128(d, &flat).map(BigInt::from), Some(exact));
        }
    }

    #[test]
    fn i128_overflow_reports_none() {
        let big = i128::MAX / 4;
        assert_eq!(determinant_i128(2, &[big, big, big, -big]), None);
    }

    fn matrix_strategy() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..=6).prop_flat_map(|d| {
            prop::collection::vec(prop::collection::vec(-9i64..=9, d), d)
        })
    }

    proptest! {
        #[test]
        fn transpose_invariant(rows in matrix_strategy()) {
            let m = IntMatrix::from_rows(&rows);
            prop_assert_eq!(m.determinant(), m.transpose().determinant());
        }

        #[test]
        fn row_swap_negates(rows in matrix_strategy(), a in 0usize..6, b in 0usize..6) {
            let d = rows.len();
            let (a, b) = (a % d, b % d);
            prop_assume!(a != b);
            let m = IntMatrix::from_rows(&rows);
            let mut s = m.clone();
            s.swap_rows(a, b);
            prop_assert_eq!(s.determinant(), -m.determinant());
        }

        #[test]
        fn duplicated_row_is_singular(rows in matrix_strategy(), a in 0usize..6, b in 0usize..6) {
            let d = rows.len();
            let (a, b) = (a % d, b % d);
            prop_assume!(a != b);
            let mut rows = rows;
            rows[b] = rows[a].clone();
            prop_assert_eq!(IntMatrix::from_rows(&rows).determinant(), BigInt::zero());
        }
    }
}
