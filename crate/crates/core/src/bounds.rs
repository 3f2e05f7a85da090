//! Polynomial-time lower and upper bounds on `r(A, Delta)`.
//!
//! Every bound is returned with a name so callers can see which estimate
//! produced the tightest sandwich.

use nalgebra::DVector;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{abs_matrix, invert, singular_values, spectral_radius_of, svd};
use crate::matrix::{check_same_dim, RadiusMatrix, SignVector, SquareMatrix};
use crate::radius::{RadiusValue, Tolerances};

/// Factor in the lower/upper sandwich `1/rho <= r <= gamma(n)/rho`.
pub fn gamma(n: usize) -> f64 {
    2.4 * (n as f64).powf(1.7)
}

/// `1 / rho(|A^-1| Delta)`, infinite when the Perron root vanishes.
pub fn perron_lower(a: &SquareMatrix, delta: &RadiusMatrix, tol: &Tolerances) -> Result<RadiusValue> {
    check_same_dim(a, delta)?;
    let inv = invert(a, tol)?;
    let m = abs_matrix(inv.as_dmatrix()) * delta.as_dmatrix();
    Ok(RadiusValue::reciprocal(spectral_radius_of(&m)?))
}

/// `sigma_n(A) / sigma_1(Delta)`.
pub fn singular_value_lower(a: &SquareMatrix, delta: &RadiusMatrix) -> Result<RadiusValue> {
    check_same_dim(a, delta)?;
    let sa = singular_values(a.as_dmatrix())?;
    let sd = singular_values(delta.as_dmatrix())?;
    let smin = *sa.last().unwrap_or(&0.0);
    let dmax = sd[0];
    Ok(if dmax > 0.0 {
        RadiusValue::Finite(smin / dmax)
    } else {
        RadiusValue::Infinite
    })
}

/// The larger of the Perron and singular-value lower bounds.
pub fn bound_spectral_lower(
    a: &SquareMatrix,
    delta: &RadiusMatrix,
    tol: &Tolerances,
) -> Result<RadiusValue> {
    let p = perron_lower(a, delta, tol)?;
    let s = singular_value_lower(a, delta)?;
    Ok(if s > p { s } else { p })
}

/// `(1/rho(|A^-1| Delta), 1/max_ij |A^-1_ji| Delta_ij)`.
///
/// The upper end comes from perturbing the single entry `(i, j)`, which makes
/// `A` singular at `1 / |(A^-1)_ji|`.
pub fn bound_demmel(
    a: &SquareMatrix,
    delta: &RadiusMatrix,
    tol: &Tolerances,
) -> Result<(RadiusValue, RadiusValue)> {
    check_same_dim(a, delta)?;
    let inv = invert(a, tol)?;
    let inv = inv.as_dmatrix();
    let d = delta.as_dmatrix();
    let n = a.n();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            worst = worst.max(inv[(j, i)].abs() * d[(i, j)]);
        }
    }
    Ok((perron_lower(a, delta, tol)?, RadiusValue::reciprocal(worst)))
}

/// `1 / max_i (|A^-1| Delta)_ii`.
pub fn bound_rohn_upper(
    a: &SquareMatrix,
    delta: &RadiusMatrix,
    tol: &Tolerances,
) -> Result<RadiusValue> {
    check_same_dim(a, delta)?;
    let inv = invert(a, tol)?;
    let m = abs_matrix(inv.as_dmatrix()) * delta.as_dmatrix();
    let diag = (0..a.n()).map(|i| m[(i, i)]).fold(0.0, f64::max);
    Ok(RadiusValue::reciprocal(diag))
}

/// `(1/rho(|A^-1| Delta), gamma(n)/rho(|A^-1| Delta))` with `gamma(n) = 2.4 n^1.7`.
pub fn bound_gamma_sandwich(
    a: &SquareMatrix,
    delta: &RadiusMatrix,
    tol: &Tolerances,
) -> Result<(RadiusValue, RadiusValue)> {
    if delta.is_zero() {
        return Err(Error::ZeroRadiusMatrix);
    }
    let lower = perron_lower(a, delta, tol)?;
    Ok((lower, lower.scale(gamma(a.n()))))
}

/// `(sigma_min(A)/n, sigma_min(A))`, valid for the all-ones radius matrix.
pub fn bound_chebyshev_spectral(a: &SquareMatrix, tol: &Tolerances) -> Result<(f64, f64)> {
    // The rank test is the one used everywhere else.
    invert(a, tol)?;
    let s = singular_values(a.as_dmatrix())?;
    let smin = *s.last().unwrap();
    Ok((smin / a.n() as f64, smin))
}

/// `1 / |z^T A^-1 y|` with `y = sgn(u)`, `z = sgn(v)` taken from the singular
/// vectors of `sigma_min(A)`; valid for the all-ones radius matrix.
pub fn bound_sign_vector_upper(a: &SquareMatrix, tol: &Tolerances) -> Result<RadiusValue> {
    let inv = invert(a, tol)?;
    let dec = svd(a)?;
    let last = a.n() - 1;
    let u: Vec<f64> = dec.u.column(last).iter().copied().collect();
    let v: Vec<f64> = dec.v.column(last).iter().copied().collect();
    let y = DVector::from_vec(SignVector::of(&u).to_f64());
    let z = DVector::from_vec(SignVector::of(&v).to_f64());
    let eig = z.dot(&(inv.as_dmatrix() * &y));
    Ok(RadiusValue::reciprocal(eig.abs()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedBound {
    pub name: &'static str,
    pub value: RadiusValue,
}

/// All applicable bounds for one `(A, Delta)` pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundSet {
    pub lower: Vec<NamedBound>,
    pub upper: Vec<NamedBound>,
    pub best_lower: RadiusValue,
    pub best_upper: RadiusValue,
}

impl BoundSet {
    fn from_parts(lower: Vec<NamedBound>, upper: Vec<NamedBound>) -> Self {
        let best_lower = lower
            .iter()
            .map(|b| b.value)
            .fold(RadiusValue::Finite(0.0), |a, b| if b > a { b } else { a });
        let best_upper = upper
            .iter()
            .map(|b| b.value)
            .fold(RadiusValue::Infinite, |a, b| if b < a { b } else { a });
        BoundSet {
            lower,
            upper,
            best_lower,
            best_upper,
        }
    }
}

/// Computes every bound that applies to `(A, Delta)`. The spectral-norm and
/// sign-vector bounds are included only when `Delta` is the all-ones matrix.
pub fn compute_bounds(a: &SquareMatrix, delta: &RadiusMatrix, tol: &Tolerances) -> Result<BoundSet> {
    check_same_dim(a, delta)?;
    let nb = |name, value| NamedBound { name, value };
    let perron = perron_lower(a, delta, tol)?;
    let mut lower = vec![
        nb("perron", perron),
        nb("singular-value", singular_value_lower(a, delta)?),
    ];
    let (_, demmel_up) = bound_demmel(a, delta, tol)?;
    let mut upper = vec![
        nb("demmel", demmel_up),
        nb("rohn", bound_rohn_upper(a, delta, tol)?),
    ];
    if !delta.is_zero() {
        upper.push(nb("gamma", perron.scale(gamma(a.n()))));
    }
    if delta.is_all_ones() {
        let (lo, hi) = bound_chebyshev_spectral(a, tol)?;
        lower.push(nb("chebyshev-spectral", RadiusValue::Finite(lo)));
        upper.push(nb("chebyshev-spectral", RadiusValue::Finite(hi)));
        upper.push(nb("sign-vector", bound_sign_vector_upper(a, tol)?));
    }
    Ok(BoundSet::from_parts(lower, upper))
}
