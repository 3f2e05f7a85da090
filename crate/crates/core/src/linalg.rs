//! Dense kernels: inversion, singular values, rank, eigenvalue radii and
//! the `inf,1` norm.
//!
//! Decompositions are delegated to `nalgebra` (Householder-bidiagonal SVD,
//! Hessenberg reduction followed by shifted QR for the real Schur form).

use nalgebra::{Complex, DMatrix, DVector};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::{SignVector, SquareMatrix};
use crate::radius::Tolerances;

const MAX_SWEEPS_PER_DIM: usize = 200;

/// Singular value decomposition `M = U diag(sigma) V^T`, `sigma` non-increasing.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: DMatrix<f64>,
    pub sigma: Vec<f64>,
    pub v: DMatrix<f64>,
}

impl Svd {
    pub fn reconstruct(&self) -> DMatrix<f64> {
        let s = DMatrix::from_diagonal(&DVector::from_column_slice(&self.sigma));
        &self.u * s * self.v.transpose()
    }
}

/// SVD of an arbitrary (possibly rectangular) matrix.
pub fn svd_of(m: &DMatrix<f64>) -> Result<Svd> {
    let iters = MAX_SWEEPS_PER_DIM * m.nrows().max(m.ncols()).max(1);
    let svd = nalgebra::SVD::try_new(m.clone(), true, true, f64::EPSILON, iters)
        .ok_or(Error::EigenFailure)?;
    let u = svd.u.ok_or(Error::EigenFailure)?;
    let v_t = svd.v_t.ok_or(Error::EigenFailure)?;
    let mut sigma: Vec<f64> = svd.singular_values.iter().copied().collect();
    // try_new sorts, except for the 2x2/3x3 special paths which are already ordered.
    debug_assert!(sigma.windows(2).all(|w| w[0] >= w[1]));
    for s in &mut sigma {
        *s = s.max(0.0);
    }
    Ok(Svd {
        u,
        sigma,
        v: v_t.transpose(),
    })
}

pub fn svd(m: &SquareMatrix) -> Result<Svd> {
    svd_of(m.as_dmatrix())
}

pub fn singular_values(m: &DMatrix<f64>) -> Result<Vec<f64>> {
    let iters = MAX_SWEEPS_PER_DIM * m.nrows().max(m.ncols()).max(1);
    let svd = nalgebra::SVD::try_new(m.clone(), false, false, f64::EPSILON, iters)
        .ok_or(Error::EigenFailure)?;
    let mut s: Vec<f64> = svd.singular_values.iter().map(|x| x.max(0.0)).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    Ok(s)
}

/// Numerical rank: singular values above the rank cutoff.
pub fn rank_of(m: &DMatrix<f64>, tol: &Tolerances) -> usize {
    if m.nrows() == 0 || m.ncols() == 0 {
        return 0;
    }
    let Ok(s) = singular_values(m) else {
        // Fall back to column-pivoted QR diagonal when SVD iteration stalls.
        return qr_rank(m, tol);
    };
    let sigma_max = s.first().copied().unwrap_or(0.0);
    if sigma_max == 0.0 {
        return 0;
    }
    let cut = tol.rank_threshold(m.nrows(), m.ncols(), sigma_max);
    s.iter().filter(|x| **x > cut).count()
}

fn qr_rank(m: &DMatrix<f64>, tol: &Tolerances) -> usize {
    let qr = m.clone().col_piv_qr();
    let r = qr.r();
    let d0 = r[(0, 0)].abs();
    let cut = tol.rank_threshold(m.nrows(), m.ncols(), d0);
    (0..r.nrows().min(r.ncols()))
        .filter(|&i| r[(i, i)].abs() > cut)
        .count()
}

pub fn rank(m: &SquareMatrix, tol: &Tolerances) -> usize {
    rank_of(m.as_dmatrix(), tol)
}

/// Smallest and largest singular values.
pub fn extreme_singular_values(m: &DMatrix<f64>) -> Result<(f64, f64)> {
    let s = singular_values(m)?;
    Ok((*s.last().unwrap_or(&0.0), *s.first().unwrap_or(&0.0)))
}

/// Inverse of a nonsingular matrix.
///
/// Fails with [`Error::SingularInput`] when the smallest singular value is at
/// or below the rank cutoff.
pub fn invert(a: &SquareMatrix, tol: &Tolerances) -> Result<SquareMatrix> {
    let m = a.as_dmatrix();
    let n = a.n();
    let (smin, smax) = extreme_singular_values(m)?;
    if smax == 0.0 || smin <= tol.rank_threshold(n, n, smax) {
        return Err(Error::SingularInput);
    }
    let inv = m.clone().lu().try_inverse().ok_or(Error::SingularInput)?;
    if inv.iter().any(|x| !x.is_finite()) {
        return Err(Error::SingularInput);
    }
    Ok(SquareMatrix::from_dmatrix(inv).expect("inverse of a finite square matrix"))
}

/// All eigenvalues of a square matrix.
pub fn eigenvalues(m: &DMatrix<f64>) -> Result<Vec<Complex<f64>>> {
    let n = m.nrows();
    if n == 1 {
        return Ok(vec![Complex::new(m[(0, 0)], 0.0)]);
    }
    // The QR iteration can stall without exceptional shifts; retry on
    // similar matrices, which have the same spectrum.
    let schur = similar_matrices(m)
        .find_map(|s| nalgebra::Schur::try_new(s, f64::EPSILON, MAX_SWEEPS_PER_DIM * n))
        .ok_or(Error::EigenFailure)?;
    let ev: Vec<Complex<f64>> = schur.complex_eigenvalues().iter().copied().collect();
    if ev.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::EigenFailure);
    }
    Ok(ev)
}

/// `m`, its transpose, its index reversal and a fixed plane rotation of it.
fn similar_matrices(m: &DMatrix<f64>) -> impl Iterator<Item = DMatrix<f64>> + '_ {
    let n = m.nrows();
    (0..4).map(move |k| match k {
        0 => m.clone(),
        1 => m.transpose(),
        2 => DMatrix::from_fn(n, n, |i, j| m[(n - 1 - i, n - 1 - j)]),
        _ => {
            let (c, s) = (0.6, 0.8);
            let mut g = DMatrix::identity(n, n);
            g[(0, 0)] = c;
            g[(0, 1)] = -s;
            g[(1, 0)] = s;
            g[(1, 1)] = c;
            &g * m * g.transpose()
        }
    })
}

/// Largest `|lambda|` over the eigenvalues with
/// `|Im lambda| <= eps_imag * (1 + |lambda|)`; zero when none qualify.
pub fn real_spectral_radius_of(m: &DMatrix<f64>, tol: &Tolerances) -> Result<f64> {
    Ok(eigenvalues(m)?
        .iter()
        .filter(|z| z.im.abs() <= tol.eps_imag * (1.0 + z.norm()))
        .map(|z| z.norm())
        .fold(0.0, f64::max))
}

/// The real eigenvalue of largest modulus (positive preferred on ties), or
/// `None` when no eigenvalue passes the realness cutoff.
pub fn dominant_real_eigenvalue(m: &DMatrix<f64>, tol: &Tolerances) -> Result<Option<f64>> {
    Ok(eigenvalues(m)?
        .iter()
        .filter(|z| z.im.abs() <= tol.eps_imag * (1.0 + z.norm()))
        .map(|z| z.re)
        .fold(None, |best: Option<f64>, x| match best {
            Some(b) if b.abs() > x.abs() || (b.abs() == x.abs() && b >= x) => Some(b),
            _ => Some(x),
        }))
}

pub fn real_spectral_radius(m: &SquareMatrix, tol: &Tolerances) -> Result<f64> {
    real_spectral_radius_of(m.as_dmatrix(), tol)
}

/// Ordinary spectral radius `max |lambda|`.
///
/// For a nonnegative matrix this is the Perron root.
pub fn spectral_radius_of(m: &DMatrix<f64>) -> Result<f64> {
    if m.iter().all(|x| *x == 0.0) {
        return Ok(0.0);
    }
    Ok(eigenvalues(m)?.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

/// Entrywise absolute value.
pub fn abs_matrix(m: &DMatrix<f64>) -> DMatrix<f64> {
    m.map(f64::abs)
}

/// `D_y M D_z` for sign vectors given as floats.
pub fn sign_scale(m: &DMatrix<f64>, y: &[f64], z: &[f64]) -> DMatrix<f64> {
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| y[i] * m[(i, j)] * z[j])
}

fn l1_of(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}

/// Chunk length of the Gray-code walk before the running product is
/// recomputed from scratch.
const GRAY_BLOCK_BITS: usize = 12;

/// `max_{z in {+-1}^n} ||M z||_1` by enumeration of the `2^(n-1)` sign vectors
/// with `z_1 = +1`.
///
/// Fails with [`Error::DimensionTooLarge`] above `tol.norm_cap`.
pub fn norm_inf1(m: &SquareMatrix, tol: &Tolerances) -> Result<f64> {
    norm_inf1_argmax(m, tol).map(|(v, _)| v)
}

/// [`norm_inf1`] together with a maximizing sign vector (smallest in the
/// enumeration order on ties).
pub fn norm_inf1_argmax(m: &SquareMatrix, tol: &Tolerances) -> Result<(f64, SignVector)> {
    let n = m.n();
    if n > tol.norm_cap || n > 62 {
        return Err(Error::DimensionTooLarge {
            n,
            cap: tol.norm_cap.min(62),
        });
    }
    let a = m.as_dmatrix();
    let free = n - 1;
    let block_bits = GRAY_BLOCK_BITS.min(free);
    let blocks: u64 = 1 << (free - block_bits);
    let per_block: u64 = 1 << block_bits;

    let pick = |x: (f64, u64), y: (f64, u64)| {
        if y.0 > x.0 || (y.0 == x.0 && y.1 < x.1) {
            y
        } else {
            x
        }
    };
    let (best, bits) = (0..blocks)
        .into_par_iter()
        .map(|blk| {
            // Gray code over the low `block_bits` free signs, high bits fixed by `blk`.
            let mut z = GraySigns {
                bits: blk << block_bits,
            };
            let mut mz: Vec<f64> = (0..n)
                .map(|i| (0..n).map(|j| a[(i, j)] * z.sign(j)).sum())
                .collect();
            let mut best = (l1_of(&mz), z.bits);
            for step in 1..per_block {
                // Free bit k is sign index k+1.
                let j = step.trailing_zeros() as usize + 1;
                let old = z.sign(j);
                z.flip(j);
                for (i, v) in mz.iter_mut().enumerate() {
                    *v -= 2.0 * old * a[(i, j)];
                }
                best = pick(best, (l1_of(&mz), z.bits));
            }
            best
        })
        .reduce(|| (f64::NEG_INFINITY, u64::MAX), pick);
    Ok((best, SignVector::from_bits(n, bits << 1)))
}

/// Sign vector with `z_0 = +1` and bit `k` of `bits` negating `z_{k+1}`.
struct GraySigns {
    bits: u64,
}

impl GraySigns {
    fn sign(&self, j: usize) -> f64 {
        if j == 0 || (self.bits >> (j - 1)) & 1 == 0 {
            1.0
        } else {
            -1.0
        }
    }
    fn flip(&mut self, j: usize) {
        self.bits ^= 1 << (j - 1);
    }
}
