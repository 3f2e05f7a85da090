//! Deciding whether `r(A, Delta) = inf`.
//!
//! `[A - Delta, A + Delta]` is regular iff `|Ax| <= Delta|x|` has only the
//! trivial solution. Rows of `Delta` that vanish force `A_k x = 0`; a column
//! `j` whose coordinate is zero on that whole subspace cannot contribute, so
//! its weights are removed, which may empty further rows. The radius is
//! infinite iff this fixed point empties every row.

use std::collections::BTreeSet;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::Result;
use crate::linalg::{invert, rank_of};
use crate::matrix::{check_same_dim, RadiusMatrix, SquareMatrix};
use crate::radius::Tolerances;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FinitenessReport {
    pub infinite: bool,
    /// Rows of the working radius matrix that ended up zero (0-based).
    pub final_index_set: BTreeSet<usize>,
    /// Positions `(i, j)` whose weight was removed, in removal order.
    pub zeroed_positions: Vec<(usize, usize)>,
    pub iterations: usize,
    /// Index-set size after each iteration.
    #[serde(skip)]
    pub index_set_sizes: Vec<usize>,
}

/// Decides whether a linear subspace forces a coordinate to zero.
trait ForcedZero {
    /// Coordinates `j` with `x_j = 0` for every `x` in the null space of `rows`.
    fn forced_coordinates(&self, a: &SquareMatrix, rows: &[usize]) -> Vec<bool>;
}

struct FloatRank<'a>(&'a Tolerances);

impl ForcedZero for FloatRank<'_> {
    fn forced_coordinates(&self, a: &SquareMatrix, rows: &[usize]) -> Vec<bool> {
        let n = a.n();
        if rows.is_empty() {
            return vec![false; n];
        }
        // Unit-normalized rows so that appending e_j is on the same scale.
        let m = a.as_dmatrix();
        let mut base = DMatrix::zeros(rows.len() + 1, n);
        for (r, &k) in rows.iter().enumerate() {
            let norm = m.row(k).norm();
            for j in 0..n {
                base[(r, j)] = m[(k, j)] / norm;
            }
        }
        let sub = base.rows(0, rows.len()).into_owned();
        let rank = rank_of(&sub, self.0);
        (0..n)
            .map(|j| {
                let mut aug = base.clone();
                aug[(rows.len(), j)] = 1.0;
                rank_of(&aug, self.0) == rank
            })
            .collect()
    }
}

/// Runs the fixed-point procedure with floating-point rank decisions.
///
/// Fails with [`Error::SingularInput`] when `A` is singular (the radius is
/// then zero, hence finite).
pub fn is_radius_infinite(
    a: &SquareMatrix,
    delta: &RadiusMatrix,
    tol: &Tolerances,
) -> Result<FinitenessReport> {
    check_same_dim(a, delta)?;
    invert(a, tol)?;
    Ok(run_procedure(a, delta, &FloatRank(tol)))
}

/// Same procedure with rank decisions in exact rational arithmetic on the
/// binary values of the entries.
#[cfg(feature = "exact-rank")]
pub fn is_radius_infinite_exact(
    a: &SquareMatrix,
    delta: &RadiusMatrix,
    tol: &Tolerances,
) -> Result<FinitenessReport> {
    check_same_dim(a, delta)?;
    if exact::rank(a.rows(), a.n()) < a.n() {
        return Err(crate::error::Error::SingularInput);
    }
    let _ = tol;
    Ok(run_procedure(a, delta, &exact::ExactRank))
}

fn zero_rows(work: &DMatrix<f64>) -> BTreeSet<usize> {
    (0..work.nrows())
        .filter(|&i| work.row(i).iter().all(|x| *x == 0.0))
        .collect()
}

fn run_procedure(a: &SquareMatrix, delta: &RadiusMatrix, forced: &dyn ForcedZero) -> FinitenessReport {
    let n = a.n();
    let mut work = delta.as_dmatrix().clone();
    let mut index_set = zero_rows(&work);
    let mut zeroed = Vec::new();
    let mut sizes = vec![index_set.len()];
    let mut iterations = 0;
    loop {
        iterations += 1;
        if index_set.len() == n || index_set.is_empty() {
            break;
        }
        let rows: Vec<usize> = index_set.iter().copied().collect();
        let forced_cols = forced.forced_coordinates(a, &rows);
        let mut changed = false;
        for j in (0..n).filter(|&j| forced_cols[j]) {
            for i in 0..n {
                if work[(i, j)] > 0.0 {
                    work[(i, j)] = 0.0;
                    zeroed.push((i, j));
                    changed = true;
                }
            }
        }
        let next = zero_rows(&work);
        debug_assert!(next.is_superset(&index_set));
        sizes.push(next.len());
        let grew = next.len() > index_set.len();
        index_set = next;
        if !changed || !grew {
            break;
        }
    }
    FinitenessReport {
        infinite: index_set.len() == n,
        final_index_set: index_set,
        zeroed_positions: zeroed,
        iterations,
        index_set_sizes: sizes,
    }
}

/// `Delta e > 0` or `Delta^T e > 0`; `true` guarantees a finite radius.
pub fn finiteness_sufficient(delta: &RadiusMatrix) -> bool {
    let d = delta.as_dmatrix();
    let rows = (0..d.nrows()).all(|i| d.row(i).sum() > 0.0);
    let cols = (0..d.ncols()).all(|j| d.column(j).sum() > 0.0);
    rows || cols
}

/// The largest number of nonzero weights compatible with an infinite radius,
/// `n(n-1)/2`.
pub fn max_nonzeros_for_infinite(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Identity centre with a strictly upper triangular all-ones radius matrix,
/// which attains [`max_nonzeros_for_infinite`].
pub fn infinite_radius_witness(n: usize) -> (SquareMatrix, RadiusMatrix) {
    let d = DMatrix::from_fn(n, n, |i, j| if i < j { 1.0 } else { 0.0 });
    (
        SquareMatrix::identity(n),
        RadiusMatrix::from_dmatrix(d).expect("nonnegative witness"),
    )
}

#[cfg(feature = "exact-rank")]
mod exact {
    use num_rational::BigRational;
    use num_traits::{One, Zero};

    use super::ForcedZero;
    use crate::matrix::SquareMatrix;

    pub(super) struct ExactRank;

    fn to_rational(x: f64) -> BigRational {
        BigRational::from_float(x).expect("finite entry")
    }

    /// Rank by fraction-exact Gaussian elimination.
    pub(super) fn rank(rows: Vec<Vec<f64>>, n: usize) -> usize {
        let mut m: Vec<Vec<BigRational>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(to_rational).collect())
            .collect();
        rank_rational(&mut m, n)
    }

    fn rank_rational(m: &mut [Vec<BigRational>], n: usize) -> usize {
        let mut rank = 0;
        for col in 0..n {
            let Some(p) = (rank..m.len()).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            let pivot = m[rank][col].clone();
            for r in rank + 1..m.len() {
                if m[r][col].is_zero() {
                    continue;
                }
                let f = &m[r][col] / &pivot;
                for c in col..n {
                    let delta = &f * &m[rank][c];
                    m[r][c] -= delta;
                }
            }
            rank += 1;
        }
        rank
    }

    impl ForcedZero for ExactRank {
        fn forced_coordinates(&self, a: &SquareMatrix, rows: &[usize]) -> Vec<bool> {
            let n = a.n();
            let base: Vec<Vec<BigRational>> = rows
                .iter()
                .map(|&k| (0..n).map(|j| to_rational(a[(k, j)])).collect())
                .collect();
            let r0 = rank_rational(&mut base.clone(), n);
            (0..n)
                .map(|j| {
                    let mut aug = base.clone();
                    let mut e = vec![BigRational::zero(); n];
                    e[j] = BigRational::one();
                    aug.push(e);
                    rank_rational(&mut aug, n) == r0
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn example_one() -> (SquareMatrix, RadiusMatrix) {
        let a = SquareMatrix::from_rows(&[
            vec![1.0, 1.0, 1.0],
            vec![1.0, 1.0, 2.0],
            vec![1.0, 2.0, 3.0],
        ])
        .unwrap();
        let mut w = vec![0.0; 9];
        w[8] = 1.0;
        (a, RadiusMatrix::new(3, w).unwrap())
    }

    #[test]
    fn constant_determinant_example_is_infinite() {
        let (a, d) = example_one();
        let rep = is_radius_infinite(&a, &d, &tol()).unwrap();
        assert!(rep.infinite);
        assert_eq!(rep.zeroed_positions, vec![(2, 2)]);
        assert_eq!(rep.final_index_set.len(), 3);
    }

    #[test]
    fn strict_upper_triangle_is_infinite() {
        for n in 1..=6 {
            let (a, d) = infinite_radius_witness(n);
            assert_eq!(d.nonzeros(), max_nonzeros_for_infinite(n));
            let rep = is_radius_infinite(&a, &d, &tol()).unwrap();
            assert!(rep.infinite, "n={n}");
            assert!(rep.iterations <= n + 1);
            assert!(rep.index_set_sizes.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn positive_weights_are_finite() {
        let a = SquareMatrix::from_rows(&[vec![3.0, -1.0], vec![2.0, 5.0]]).unwrap();
        let rep = is_radius_infinite(&a, &RadiusMatrix::ones(2), &tol()).unwrap();
        assert!(!rep.infinite);
        assert!(rep.final_index_set.is_empty());
        assert_eq!(rep.iterations, 1);
    }

    #[test]
    fn singular_centre_is_rejected() {
        let a = SquareMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert_eq!(
            is_radius_infinite(&a, &RadiusMatrix::ones(2), &tol()),
            Err(Error::SingularInput)
        );
    }

    #[test]
    fn sufficient_condition_examples() {
        assert!(finiteness_sufficient(&RadiusMatrix::ones(3)));
        let (_, d) = example_one();
        assert!(!finiteness_sufficient(&d));
        let last_col = RadiusMatrix::from_rows(&[
            vec![0.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap();
        // Row sums are positive here, column sums are not.
        assert!(finiteness_sufficient(&last_col));
        let one_entry = RadiusMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(!finiteness_sufficient(&one_entry));
    }

    #[test]
    fn binomial_counts() {
        assert_eq!(max_nonzeros_for_infinite(1), 0);
        assert_eq!(max_nonzeros_for_infinite(3), 3);
        assert_eq!(max_nonzeros_for_infinite(5), 10);
    }

    #[cfg(feature = "exact-rank")]
    #[test]
    fn exact_mode_agrees_on_examples() {
        let (a, d) = example_one();
        assert!(is_radius_infinite_exact(&a, &d, &tol()).unwrap().infinite);
        let (a, d) = infinite_radius_witness(5);
        assert!(is_radius_infinite_exact(&a, &d, &tol()).unwrap().infinite);
        let a = SquareMatrix::from_rows(&[vec![3.0, -1.0], vec![2.0, 5.0]]).unwrap();
        assert!(!is_radius_infinite_exact(&a, &RadiusMatrix::ones(2), &tol()).unwrap().infinite);
    }
}
