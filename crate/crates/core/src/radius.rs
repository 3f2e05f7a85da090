//! Result types shared by all radius computations.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{SignVector, SquareMatrix};

/// A nonnegative radius or the distinguished value `+inf`.
///
/// Serializes as a JSON number, or as the string `"inf"`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadiusValue {
    Finite(f64),
    Infinite,
}

impl RadiusValue {
    /// `1 / denom`, infinite when `denom` is zero.
    pub fn reciprocal(denom: f64) -> Self {
        if denom > 0.0 {
            RadiusValue::Finite(1.0 / denom)
        } else {
            RadiusValue::Infinite
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, RadiusValue::Finite(_))
    }

    pub fn finite(&self) -> Option<f64> {
        match self {
            RadiusValue::Finite(x) => Some(*x),
            RadiusValue::Infinite => None,
        }
    }

    /// The value as a float, `f64::INFINITY` for the infinite radius.
    pub fn as_f64(&self) -> f64 {
        self.finite().unwrap_or(f64::INFINITY)
    }

    /// Multiplies a finite value by `factor >= 0`; infinity is preserved.
    pub fn scale(&self, factor: f64) -> Self {
        match self {
            RadiusValue::Finite(x) => RadiusValue::Finite(x * factor),
            RadiusValue::Infinite => RadiusValue::Infinite,
        }
    }
}

impl PartialOrd for RadiusValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (RadiusValue::Finite(a), RadiusValue::Finite(b)) => a.partial_cmp(b),
            (RadiusValue::Finite(_), RadiusValue::Infinite) => Some(Ordering::Less),
            (RadiusValue::Infinite, RadiusValue::Finite(_)) => Some(Ordering::Greater),
            (RadiusValue::Infinite, RadiusValue::Infinite) => Some(Ordering::Equal),
        }
    }
}

impl fmt::Display for RadiusValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadiusValue::Finite(x) => write!(f, "{x}"),
            RadiusValue::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for RadiusValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            RadiusValue::Finite(x) => s.serialize_f64(*x),
            RadiusValue::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for RadiusValue {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = RadiusValue;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a nonnegative number or \"inf\"")
            }
            fn visit_f64<E: de::Error>(self, x: f64) -> std::result::Result<RadiusValue, E> {
                Ok(RadiusValue::Finite(x))
            }
            fn visit_u64<E: de::Error>(self, x: u64) -> std::result::Result<RadiusValue, E> {
                Ok(RadiusValue::Finite(x as f64))
            }
            fn visit_i64<E: de::Error>(self, x: i64) -> std::result::Result<RadiusValue, E> {
                Ok(RadiusValue::Finite(x as f64))
            }
            fn visit_str<E: de::Error>(self, s: &str) -> std::result::Result<RadiusValue, E> {
                match s {
                    "inf" => Ok(RadiusValue::Infinite),
                    _ => s
                        .parse::<f64>()
                        .map(RadiusValue::Finite)
                        .map_err(|_| E::custom(format!("bad radius value {s:?}"))),
                }
            }
        }
        d.deserialize_any(V)
    }
}

/// Which algorithm produced a [`RadiusResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    FullSearch,
    OrthantSearch,
    Tridiagonal,
    ClosedFormTp,
    ClosedFormInvnonneg,
    Bound,
}

/// Sign vectors `y`, `z` and the singular matrix `A - r * D_y Delta D_z`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub y: SignVector,
    pub z: SignVector,
    #[serde(serialize_with = "ser_matrix")]
    pub matrix: SquareMatrix,
}

fn ser_matrix<S: Serializer>(m: &SquareMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    m.rows().serialize(s)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusResult {
    pub value: RadiusValue,
    pub method: Method,
    pub certificate: Option<Certificate>,
    /// Achieved numerical tolerance on `value`.
    pub tolerance: f64,
    pub diagnostics: BTreeMap<String, f64>,
}

impl RadiusResult {
    pub fn new(value: RadiusValue, method: Method, tolerance: f64) -> Self {
        RadiusResult {
            value,
            method,
            certificate: None,
            tolerance,
            diagnostics: BTreeMap::new(),
        }
    }

    pub fn with_diagnostic(mut self, key: &str, value: f64) -> Self {
        self.diagnostics.insert(key.to_string(), value);
        self
    }
}

/// Numerical tolerances and enumeration caps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Width at which a bisection on `delta` stops.
    pub eps_bisect: f64,
    /// Relative imaginary-part cutoff for treating an eigenvalue as real.
    pub eps_imag: f64,
    /// Absolute singular-value cutoff for rank decisions; `None` selects
    /// `max(rows, cols) * machine epsilon * sigma_1`.
    pub eps_rank: Option<f64>,
    pub eps_lp: f64,
    /// Relative smallest-singular-value threshold for certificates.
    pub tol_singular: f64,
    /// Largest dimension accepted by the sign-pair enumeration.
    pub full_search_cap: usize,
    /// Largest dimension accepted by the `inf,1` norm enumeration.
    pub norm_cap: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps_bisect: 1e-9,
            eps_imag: 1e-8,
            eps_rank: None,
            eps_lp: 1e-9,
            tol_singular: 1e-7,
            full_search_cap: 10,
            norm_cap: 25,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let positive = [self.eps_bisect, self.eps_imag, self.eps_lp, self.tol_singular]
            .iter()
            .chain(self.eps_rank.iter())
            .all(|x| *x > 0.0 && x.is_finite());
        if !positive || self.full_search_cap == 0 || self.norm_cap == 0 {
            return Err(Error::InvalidInput(
                "tolerances must be strictly positive".into(),
            ));
        }
        Ok(())
    }

    /// Rank cutoff for a matrix of the given shape and largest singular value.
    pub fn rank_threshold(&self, rows: usize, cols: usize, sigma_max: f64) -> f64 {
        self.eps_rank
            .unwrap_or(rows.max(cols) as f64 * f64::EPSILON * sigma_max)
    }
}
