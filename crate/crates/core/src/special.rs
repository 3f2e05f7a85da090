//! Closed-form radii for totally positive and inverse-nonnegative matrices,
//! the rank-one radius reduction and the rank-one approximation scheme.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{radius_allones, radius_full_search};
use crate::linalg::{invert, spectral_radius_of, svd_of};
use crate::matrix::{check_same_dim, RadiusMatrix, SignVector, SquareMatrix};
use crate::radius::{Method, RadiusResult, RadiusValue, Tolerances};

/// Largest dimension for which total positivity is decided from all minors.
pub const FULL_MINOR_CHECK_MAX_N: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassKind {
    TotallyPositive,
    InverseNonnegative,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassTag {
    pub kind: ClassKind,
    pub evidence: String,
}

fn inverse_slack(inv: &DMatrix<f64>, tol: &Tolerances) -> f64 {
    tol.eps_lp * inv.amax()
}

/// Determinant of the submatrix on `rows x cols` and its positivity cutoff,
/// `eps_lp` times the Hadamard bound (product of the row norms).
fn minor(a: &DMatrix<f64>, rows: &[usize], cols: &[usize], tol: &Tolerances) -> (f64, f64) {
    let k = rows.len();
    let sub = DMatrix::from_fn(k, k, |i, j| a[(rows[i], cols[j])]);
    let hadamard: f64 = sub.row_iter().map(|r| r.norm()).product();
    (sub.determinant(), tol.eps_lp * hadamard)
}

/// Every `k`-subset of `0..n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// First non-positive minor over all square submatrices, if any.
fn failing_minor(a: &DMatrix<f64>, tol: &Tolerances) -> Option<(Vec<usize>, Vec<usize>, f64)> {
    let n = a.nrows();
    for k in 1..=n {
        let sets = subsets(n, k);
        for r in &sets {
            for c in &sets {
                let (d, thr) = minor(a, r, c, tol);
                if d <= thr {
                    return Some((r.clone(), c.clone(), d));
                }
            }
        }
    }
    None
}

/// First non-positive initial minor. The initial minor at `(i, j)` is the
/// contiguous `k x k` minor ending at `(i, j)` with `k = min(i, j) + 1`, so it
/// touches the first row or the first column.
fn failing_initial_minor(a: &DMatrix<f64>, tol: &Tolerances) -> Option<(usize, usize, f64)> {
    let n = a.nrows();
    for i in 0..n {
        for j in 0..n {
            let k = i.min(j) + 1;
            let rows: Vec<usize> = (i + 1 - k..=i).collect();
            let cols: Vec<usize> = (j + 1 - k..=j).collect();
            let (d, thr) = minor(a, &rows, &cols, tol);
            if d <= thr {
                return Some((i, j, d));
            }
        }
    }
    None
}

/// Whether every minor of `A` is positive. All minors are checked up to
/// [`FULL_MINOR_CHECK_MAX_N`]; larger matrices use the `n^2` initial minors.
pub fn is_totally_positive(a: &SquareMatrix, tol: &Tolerances) -> bool {
    let m = a.as_dmatrix();
    if a.n() <= FULL_MINOR_CHECK_MAX_N {
        failing_minor(m, tol).is_none()
    } else {
        failing_initial_minor(m, tol).is_none()
    }
}

/// Classifies `A`. Inverse nonnegativity is tested first.
pub fn detect_class(a: &SquareMatrix, tol: &Tolerances) -> Result<ClassTag> {
    let inv = invert(a, tol)?;
    let inv = inv.as_dmatrix();
    let slack = inverse_slack(inv, tol);
    let most_negative = inv.min();
    if most_negative >= -slack {
        return Ok(ClassTag {
            kind: ClassKind::InverseNonnegative,
            evidence: format!("min entry of inverse {most_negative:e} >= -{slack:e}"),
        });
    }
    let m = a.as_dmatrix();
    let failure = if a.n() <= FULL_MINOR_CHECK_MAX_N {
        failing_minor(m, tol).map(|(r, c, d)| format!("minor rows {r:?} cols {c:?} = {d:e}"))
    } else {
        failing_initial_minor(m, tol).map(|(i, j, d)| format!("initial minor at ({i},{j}) = {d:e}"))
    };
    Ok(match failure {
        None => ClassTag {
            kind: ClassKind::TotallyPositive,
            evidence: if a.n() <= FULL_MINOR_CHECK_MAX_N {
                "all minors positive".into()
            } else {
                "all initial minors positive".into()
            },
        },
        Some(reason) => ClassTag {
            kind: ClassKind::Neither,
            evidence: format!(
                "inverse has entry {most_negative:e}; not totally positive: {reason}"
            ),
        },
    })
}

fn closed_form(
    inv_signed: &DMatrix<f64>,
    a: &SquareMatrix,
    delta: &RadiusMatrix,
    method: Method,
) -> Result<RadiusResult> {
    let denom = if delta.is_all_ones() {
        inv_signed.sum()
    } else {
        spectral_radius_of(&(inv_signed * delta.as_dmatrix()))?
    };
    Ok(
        RadiusResult::new(RadiusValue::reciprocal(denom), method, 1e-12 * (1.0 + denom.abs()))
            .with_diagnostic("denominator", denom)
            .with_diagnostic("n", a.n() as f64),
    )
}

/// `1/(s^T A^-1 s)` for the all-ones radius matrix and
/// `1/rho(D_s A^-1 D_s Delta)` otherwise, with `s = (1, -1, 1, ...)`.
///
/// Fails with [`Error::ClassMismatch`] unless `A^-1` has the checkerboard
/// sign pattern.
pub fn radius_totally_positive(
    a: &SquareMatrix,
    delta: &RadiusMatrix,
    tol: &Tolerances,
) -> Result<RadiusResult> {
    check_same_dim(a, delta)?;
    let inv = invert(a, tol)?;
    let s = SignVector::checkerboard(a.n()).to_f64();
    let signed = crate::linalg::sign_scale(inv.as_dmatrix(), &s, &s);
    let slack = inverse_slack(&signed, tol);
    if signed.min() < -slack {
        return Err(Error::ClassMismatch(
            "inverse does not have the checkerboard sign pattern".into(),
        ));
    }
    closed_form(&signed, a, delta, Method::ClosedFormTp)
}

/// `1/(e^T A^-1 e)` for the all-ones radius matrix and `1/rho(A^-1 Delta)`
/// otherwise.
///
/// Fails with [`Error::ClassMismatch`] unless `A^-1 >= 0`.
pub fn radius_inverse_nonnegative(
    a: &SquareMatrix,
    delta: &RadiusMatrix,
    tol: &Tolerances,
) -> Result<RadiusResult> {
    check_same_dim(a, delta)?;
    let inv = invert(a, tol)?;
    let inv = inv.as_dmatrix();
    if inv.min() < -inverse_slack(inv, tol) {
        return Err(Error::ClassMismatch("inverse has negative entries".into()));
    }
    closed_form(inv, a, delta, Method::ClosedFormInvnonneg)
}

/// `D_u^-1 A D_v^-1`, whose all-ones radius equals `r(A, u v^T)`.
pub fn reduce_rank_one(a: &SquareMatrix, u: &[f64], v: &[f64]) -> Result<SquareMatrix> {
    let n = a.n();
    if u.len() != n || v.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: if u.len() != n { u.len() } else { v.len() },
        });
    }
    if u.iter().chain(v).any(|x| !(*x > 0.0)) {
        return Err(Error::NonpositiveWeights);
    }
    let m = DMatrix::from_fn(n, n, |i, j| a[(i, j)] / (u[i] * v[j]));
    SquareMatrix::from_dmatrix(m)
}

/// Leading rank-one factor `B = sigma_1 u_1 v_1^T` of a radius matrix, with
/// the entrywise envelope `alpha ee^T <= Delta <= beta ee^T`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankOneApprox {
    #[serde(skip)]
    pub b: RadiusMatrix,
    pub sigma1: f64,
    /// Nonnegative leading left singular vector.
    pub u: Vec<f64>,
    /// Nonnegative leading right singular vector.
    pub v: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankOneApproximation {
    pub approx: RankOneApprox,
    /// `r(A, B)`.
    pub approx_radius: RadiusValue,
    /// `r(A, ee^T) / beta`.
    pub lower: RadiusValue,
    /// `r(A, ee^T) / alpha`, infinite when `alpha = 0`.
    pub upper: RadiusValue,
    /// `beta / alpha`.
    pub quality: f64,
}

/// Best rank-one factor of `Delta` with nonnegative singular vectors.
pub fn leading_rank_one(delta: &RadiusMatrix) -> Result<RankOneApprox> {
    if delta.is_zero() {
        return Err(Error::ZeroRadiusMatrix);
    }
    let dec = svd_of(delta.as_dmatrix())?;
    let mut u: Vec<f64> = dec.u.column(0).iter().copied().collect();
    let mut v: Vec<f64> = dec.v.column(0).iter().copied().collect();
    // Perron-Frobenius: a nonnegative pair exists; fix the sign, then drop
    // round-off negatives.
    if u.iter().sum::<f64>() < 0.0 {
        u.iter_mut().for_each(|x| *x = -*x);
        v.iter_mut().for_each(|x| *x = -*x);
    }
    u.iter_mut().for_each(|x| *x = x.max(0.0));
    v.iter_mut().for_each(|x| *x = x.max(0.0));
    let sigma1 = dec.sigma[0];
    let su: Vec<f64> = u.iter().map(|x| x * sigma1).collect();
    Ok(RankOneApprox {
        b: RadiusMatrix::outer(&su, &v)?,
        sigma1,
        u,
        v,
        alpha: delta.min_entry(),
        beta: delta.max_entry(),
    })
}

/// Approximates `r(A, Delta)` by `r(A, B)` for the leading rank-one factor
/// `B` of `Delta`, and brackets the true radius between
/// `r(A, ee^T)/beta` and `r(A, ee^T)/alpha`.
pub fn approximate_by_rank_one(
    a: &SquareMatrix,
    delta: &RadiusMatrix,
    tol: &Tolerances,
) -> Result<RankOneApproximation> {
    check_same_dim(a, delta)?;
    let approx = leading_rank_one(delta)?;
    let positive = approx.u.iter().chain(&approx.v).all(|x| *x > 0.0);
    let approx_radius = if positive {
        let su: Vec<f64> = approx.u.iter().map(|x| x * approx.sigma1).collect();
        radius_allones(&reduce_rank_one(a, &su, &approx.v)?, tol)?.value
    } else {
        radius_full_search(a, &approx.b, tol)?.value
    };
    let base = radius_allones(a, tol)?.value;
    let lower = base.scale(1.0 / approx.beta);
    let upper = if approx.alpha > 0.0 {
        base.scale(1.0 / approx.alpha)
    } else {
        RadiusValue::Infinite
    };
    let quality = approx.beta / approx.alpha;
    Ok(RankOneApproximation {
        approx,
        approx_radius,
        lower,
        upper,
        quality,
    })
}
