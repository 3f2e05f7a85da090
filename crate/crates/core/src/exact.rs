//! Exact radius by enumeration of sign pairs.
//!
//! `r(A, Delta) = 1 / max_{y,z} rho0(A^-1 D_y Delta D_z)` where `rho0` is the
//! real spectral radius. The search is exponential in `n` and is capped by
//! [`Tolerances::full_search_cap`]; it is the reference every faster method
//! is checked against.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, extreme_singular_values, invert, norm_inf1_argmax};
use crate::matrix::{check_same_dim, IntervalMatrix, RadiusMatrix, SignVector, SquareMatrix};
use crate::radius::{Certificate, Method, RadiusResult, RadiusValue, Tolerances};

/// Outcome of [`radius_full_search`].
///
/// Each pair is oriented so that its dominant real eigenvalue is positive
/// (`z` replaced by `-z` otherwise). Among oriented pairs attaining the
/// maximal `rho0` the lexicographically smallest `(y, z)` is reported (signs
/// ordered `-1 < +1`, with `y_1 = +1` fixed).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FullSearchReport {
    pub value: RadiusValue,
    pub argmax_y: SignVector,
    pub argmax_z: SignVector,
    /// `max rho0(A^-1 D_y Delta D_z)` at the argmax.
    pub max_rho: f64,
    pub pairs_evaluated: u64,
}

fn gray(k: u64) -> u64 {
    k ^ (k >> 1)
}

/// `y` with `y_1 = +1` and bit `k` of `bits` negating `y_{k+2}`.
fn y_from_bits(n: usize, bits: u64) -> SignVector {
    SignVector::from_bits(n, bits << 1)
}

fn check_cap(n: usize, tol: &Tolerances) -> Result<()> {
    let cap = tol.full_search_cap.min(31);
    if n > cap {
        return Err(Error::DimensionTooLarge { n, cap });
    }
    Ok(())
}

fn singular_report(n: usize) -> FullSearchReport {
    FullSearchReport {
        value: RadiusValue::Finite(0.0),
        argmax_y: SignVector::all_plus(n),
        argmax_z: SignVector::all_plus(n),
        max_rho: f64::INFINITY,
        pairs_evaluated: 0,
    }
}

#[derive(Clone, Copy)]
struct Best {
    rho: f64,
    y: u64,
    z: u64,
}

impl Best {
    const NONE: Best = Best {
        rho: f64::NEG_INFINITY,
        y: u64::MAX,
        z: u64::MAX,
    };
}

/// Lexicographic order on `(y, z)` with `-1 < +1`: a set bit means `-1`, and
/// the first component is the least significant bit.
fn lex_less(n: usize, a: (u64, u64), b: (u64, u64)) -> bool {
    let key = |bits: u64, len: usize| -> u64 {
        // Reverse the bit order and complement so integer order is lexicographic.
        (0..len).fold(0u64, |acc, k| (acc << 1) | (1 - ((bits >> k) & 1)))
    };
    let ka = (key(a.0 << 1, n), key(a.1, n));
    let kb = (key(b.0 << 1, n), key(b.1, n));
    ka < kb
}

fn better(n: usize, a: Best, b: Best) -> Best {
    if b.rho > a.rho || (b.rho == a.rho && lex_less(n, (b.y, b.z), (a.y, a.z))) {
        b
    } else {
        a
    }
}

/// Exact radius by enumerating the `2^(2n-1)` sign pairs in Gray-code order.
///
/// A singular `A` yields the value `0`; a zero maximum yields `+inf`.
pub fn radius_full_search(
    a: &SquareMatrix,
    delta: &RadiusMatrix,
    tol: &Tolerances,
) -> Result<FullSearchReport> {
    check_same_dim(a, delta)?;
    let n = a.n();
    check_cap(n, tol)?;
    let inv = match invert(a, tol) {
        Ok(inv) => inv,
        Err(Error::SingularInput) => return Ok(singular_report(n)),
        Err(e) => return Err(e),
    };
    let inv = inv.as_dmatrix();
    let d = delta.as_dmatrix();
    let y_count: u64 = 1 << (n - 1);
    let z_count: u64 = 1 << n;

    let best = (0..y_count)
        .into_par_iter()
        .map(|ky| -> Result<Best> {
            let yb = gray(ky);
            let y = y_from_bits(n, yb).to_f64();
            // A^-1 D_y Delta
            let left = DMatrix::from_fn(n, n, |i, j| {
                (0..n).map(|k| inv[(i, k)] * y[k] * d[(k, j)]).sum::<f64>()
            });
            let mut best = Best::NONE;
            for kz in 0..z_count {
                let zb = gray(kz);
                let z = SignVector::from_bits(n, zb).to_f64();
                let m = DMatrix::from_fn(n, n, |i, j| left[(i, j)] * z[j]);
                let (rho, zb) = match linalg::dominant_real_eigenvalue(&m, tol)? {
                    // (y, -z) carries the eigenvalue -lambda; keep the pair
                    // whose eigenvalue is positive so A - r D_y Delta D_z is singular.
                    Some(lambda) if lambda < 0.0 => (-lambda, !zb & (z_count - 1)),
                    Some(lambda) => (lambda, zb),
                    None => (0.0, zb),
                };
                best = better(n, best, Best { rho, y: yb, z: zb });
            }
            Ok(best)
        })
        .try_reduce(|| Best::NONE, |a, b| Ok(better(n, a, b)))?;

    Ok(FullSearchReport {
        value: RadiusValue::reciprocal(best.rho),
        argmax_y: y_from_bits(n, best.y),
        argmax_z: SignVector::from_bits(n, best.z),
        max_rho: best.rho,
        pairs_evaluated: y_count * z_count,
    })
}

/// `r(A) = 1 / ||A^-1||_{inf,1}` for the all-ones radius matrix, with a
/// verified nearest-singular certificate `A - r y z^T`.
pub fn radius_allones(a: &SquareMatrix, tol: &Tolerances) -> Result<RadiusResult> {
    let n = a.n();
    if n > tol.norm_cap {
        return Err(Error::DimensionTooLarge {
            n,
            cap: tol.norm_cap,
        });
    }
    let inv = match invert(a, tol) {
        Ok(inv) => inv,
        Err(Error::SingularInput) => {
            return Ok(RadiusResult::new(RadiusValue::Finite(0.0), Method::FullSearch, 0.0));
        }
        Err(e) => return Err(e),
    };
    let (norm, y) = norm_inf1_argmax(&inv, tol)?;
    let value = RadiusValue::reciprocal(norm);
    let mut result = RadiusResult::new(value, Method::FullSearch, tol.eps_bisect)
        .with_diagnostic("norm_inf1", norm)
        .with_diagnostic("sign_vectors_evaluated", (1u64 << (n - 1)) as f64);
    if let RadiusValue::Finite(r) = value {
        // rho0(A^-1 y z^T) = |z^T A^-1 y| is maximal for z = sgn(A^-1 y).
        let w = inv.as_dmatrix() * nalgebra::DVector::from_vec(y.to_f64());
        let z = SignVector::of(w.as_slice());
        let matrix = certificate_matrix(a, &RadiusMatrix::ones(n), r, &y, &z);
        verify_singular(a, &matrix, tol)?;
        result.certificate = Some(Certificate { y, z, matrix });
    }
    Ok(result)
}

fn certificate_matrix(
    a: &SquareMatrix,
    delta: &RadiusMatrix,
    value: f64,
    y: &SignVector,
    z: &SignVector,
) -> SquareMatrix {
    let pert = linalg::sign_scale(delta.as_dmatrix(), &y.to_f64(), &z.to_f64());
    SquareMatrix::from_dmatrix(a.as_dmatrix() - pert * value).expect("finite certificate")
}

fn verify_singular(a: &SquareMatrix, s: &SquareMatrix, tol: &Tolerances) -> Result<()> {
    let (_, sigma_a) = extreme_singular_values(a.as_dmatrix())?;
    let (sigma_min, _) = extreme_singular_values(s.as_dmatrix())?;
    let threshold = tol.tol_singular * sigma_a;
    if sigma_min > threshold {
        return Err(Error::CertificateFailed {
            sigma_min,
            threshold,
        });
    }
    Ok(())
}

/// The singular matrix `A - r D_y Delta D_z` at the reported maximizers.
///
/// Fails with [`Error::CertificateFailed`] when its smallest singular value
/// exceeds `tol_singular * sigma_1(A)`.
pub fn nearest_singular_certificate(
    a: &SquareMatrix,
    report: &FullSearchReport,
    delta: &RadiusMatrix,
    tol: &Tolerances,
) -> Result<SquareMatrix> {
    check_same_dim(a, delta)?;
    let RadiusValue::Finite(r) = report.value else {
        return Err(Error::InfiniteRadius);
    };
    let s = certificate_matrix(a, delta, r, &report.argmax_y, &report.argmax_z);
    verify_singular(a, &s, tol)?;
    debug_assert!(IntervalMatrix::scaled(a, delta, r)
        .map(|iv| iv.contains(&s, 1e-12 * (1.0 + a.max_abs())))
        .unwrap_or(false));
    Ok(s)
}

/// Full search packaged as a [`RadiusResult`] with its certificate.
pub fn full_search_result(
    a: &SquareMatrix,
    delta: &RadiusMatrix,
    tol: &Tolerances,
) -> Result<RadiusResult> {
    let report = radius_full_search(a, delta, tol)?;
    let mut result = RadiusResult::new(report.value, Method::FullSearch, tol.eps_bisect)
        .with_diagnostic("pairs_evaluated", report.pairs_evaluated as f64);
    if report.value.is_finite() {
        let matrix = nearest_singular_certificate(a, &report, delta, tol)?;
        result.certificate = Some(Certificate {
            y: report.argmax_y.clone(),
            z: report.argmax_z.clone(),
            matrix,
        });
    }
    Ok(result)
}

/// Whether `[A - delta*Delta, A + delta*Delta]` is regular, decided through
/// the full search.
///
/// Returns [`Error::Indeterminate`] when `delta` lies within `eps_bisect` of
/// the radius.
pub fn is_regular_oracle(
    a: &SquareMatrix,
    delta_matrix: &RadiusMatrix,
    delta: f64,
    tol: &Tolerances,
) -> Result<bool> {
    if !(delta >= 0.0) {
        return Err(Error::InvalidInput(format!("delta must be nonnegative, got {delta}")));
    }
    let report = radius_full_search(a, delta_matrix, tol)?;
    let regular = match report.value {
        RadiusValue::Infinite => true,
        RadiusValue::Finite(r) => {
            if (delta - r).abs() <= tol.eps_bisect {
                return Err(Error::Indeterminate(format!(
                    "delta {delta} within {} of the radius {r}",
                    tol.eps_bisect
                )));
            }
            delta < r
        }
    };
    #[cfg(debug_assertions)]
    if a.n() <= 4 && report.value.is_finite() {
        if let Some(by_vertices) = vertex_determinant_test(a, delta_matrix, delta) {
            debug_assert_eq!(by_vertices, regular, "vertex determinant cross-check");
        }
    }
    Ok(regular)
}

/// Regularity of `[A - delta*Delta, A + delta*Delta]` from the signs of the
/// determinants of the vertex matrices `A - delta D_y Delta D_z`: the
/// interval matrix is regular iff all of them are nonzero with one sign.
///
/// Returns `None` when some determinant is too close to zero to judge.
pub fn vertex_determinant_test(
    a: &SquareMatrix,
    delta_matrix: &RadiusMatrix,
    delta: f64,
) -> Option<bool> {
    let n = a.n();
    let scale = (a.max_abs() + delta * delta_matrix.max_entry()).max(1e-300);
    let guard = 1e-9 * scale.powi(n as i32);
    let mut sign = 0.0;
    for yb in 0..(1u64 << n) {
        let y = SignVector::from_bits(n, yb).to_f64();
        for zb in 0..(1u64 << n) {
            let z = SignVector::from_bits(n, zb).to_f64();
            let v = a.as_dmatrix() - linalg::sign_scale(delta_matrix.as_dmatrix(), &y, &z) * delta;
            let det = v.determinant();
            if det.abs() <= guard {
                return None;
            }
            if sign == 0.0 {
                sign = det.signum();
            } else if det.signum() != sign {
                return Some(false);
            }
        }
    }
    Some(true)
}
