//! Seeded random matrix families.
//!
//! Every instance draws from `ChaCha8Rng::seed_from_u64(seed)` on stream
//! `family << 40 | n << 20 | instance`, so rows of an experiment are
//! independent and reproducible. The centre is drawn first, then `Delta`
//! with entries uniform on `[0, 1]`.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::extreme_singular_values;
use crate::matrix::{RadiusMatrix, SquareMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    ZeroCentered,
    RandomOrthogonal,
    InverseNonnegative,
    AlmostInverseNonnegative,
}

impl Family {
    pub const ALL: [Family; 4] = [
        Family::ZeroCentered,
        Family::RandomOrthogonal,
        Family::InverseNonnegative,
        Family::AlmostInverseNonnegative,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::ZeroCentered => "zero-centered",
            Family::RandomOrthogonal => "random-orthogonal",
            Family::InverseNonnegative => "inverse-nonnegative",
            Family::AlmostInverseNonnegative => "almost-inverse-nonnegative",
        }
    }

    fn stream_tag(self) -> u64 {
        self as u64 + 1
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        Family::ALL
            .into_iter()
            .find(|f| f.name().replace('-', "") == key)
            .ok_or_else(|| {
                Error::Parse(format!(
                    "unknown family {s:?}; expected one of zero-centered, random-orthogonal, inverse-nonnegative, almost-inverse-nonnegative"
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
    /// Instance index within `(family, n)`; selects the RNG stream.
    #[serde(default)]
    pub instance: u32,
    /// Fraction of entries negated, almost-inverse-nonnegative family only.
    #[serde(default = "default_negate_fraction")]
    pub negate_fraction: f64,
}

fn default_negate_fraction() -> f64 {
    0.10
}

impl GeneratorSpec {
    pub fn new(family: Family, n: usize, seed: u64) -> Self {
        Self { family, n, seed, instance: 0, negate_fraction: default_negate_fraction() }
    }

    pub fn with_instance(mut self, instance: u32) -> Self {
        self.instance = instance;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n >= 1 << 20 {
            return Err(Error::InvalidInput(format!("dimension {} out of range", self.n)));
        }
        if !(0.0..=1.0).contains(&self.negate_fraction) {
            return Err(Error::InvalidInput(format!(
                "negate_fraction must lie in [0, 1], got {}",
                self.negate_fraction
            )));
        }
        Ok(())
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.family.stream_tag() << 40 | (self.n as u64) << 20 | self.instance as u64);
        rng
    }
}

/// Condition number bound for the inverted factor `B`.
pub const CONDITION_GUARD: f64 = 1e10;
pub const MAX_REJECTIONS: usize = 100;

fn uniform(rng: &mut impl Rng, n: usize, lo: f64, hi: f64) -> DMatrix<f64> {
    // Row-major draw order, independent of the storage layout.
    let entries: Vec<f64> = (0..n * n).map(|_| rng.random_range(lo..=hi)).collect();
    DMatrix::from_row_slice(n, n, &entries)
}

pub fn generate(spec: &GeneratorSpec) -> Result<(SquareMatrix, RadiusMatrix)> {
    spec.validate()?;
    let n = spec.n;
    let mut rng = spec.rng();
    let a = match spec.family {
        Family::ZeroCentered => uniform(&mut rng, n, -5.0, 5.0),
        Family::RandomOrthogonal => random_orthogonal(&mut rng, n)?,
        Family::InverseNonnegative => random_inverse_nonnegative(&mut rng, n)?,
        Family::AlmostInverseNonnegative => {
            let mut a = random_inverse_nonnegative(&mut rng, n)?;
            let count = ((spec.negate_fraction * (n * n) as f64).ceil() as usize).min(n * n);
            for k in sample(&mut rng, n * n, count).into_iter() {
                a[(k / n, k % n)] = -a[(k / n, k % n)];
            }
            a
        }
    };
    let delta = uniform(&mut rng, n, 0.0, 1.0);
    Ok((
        SquareMatrix::from_dmatrix(a)?,
        RadiusMatrix::from_dmatrix(delta)?,
    ))
}

fn random_orthogonal(rng: &mut impl Rng, n: usize) -> Result<DMatrix<f64>> {
    for _ in 0..MAX_REJECTIONS {
        let m = uniform(rng, n, -1.0, 1.0);
        let (smin, smax) = extreme_singular_values(&m)?;
        if smin * CONDITION_GUARD > smax {
            return Ok(m.qr().q());
        }
    }
    Err(Error::GenerationFailed(MAX_REJECTIONS))
}

/// `B^{-1}` for `B` uniform on `[0, 1]`, redrawn while `cond(B) > 1e10`.
pub fn random_inverse_nonnegative(rng: &mut impl Rng, n: usize) -> Result<DMatrix<f64>> {
    for _ in 0..MAX_REJECTIONS {
        let b = uniform(rng, n, 0.0, 1.0);
        let (smin, smax) = extreme_singular_values(&b)?;
        if smin * CONDITION_GUARD <= smax {
            continue;
        }
        if let Some(inv) = b.lu().try_inverse() {
            return Ok(inv);
        }
    }
    Err(Error::GenerationFailed(MAX_REJECTIONS))
}

/// A totally positive matrix as a product of bidiagonal factors with
/// positive multipliers in the full Neville pattern and a positive diagonal.
pub fn random_totally_positive(rng: &mut impl Rng, n: usize) -> SquareMatrix {
    let mut m = DMatrix::from_diagonal(&nalgebra::DVector::from_fn(n, |_, _| rng.random_range(0.5..=2.0)));
    for k in 0..n.saturating_sub(1) {
        for j in (k + 1..n).rev() {
            let l: f64 = rng.random_range(0.2..=1.0);
            // Left factor I + l E_{j, j-1}: row j += l row (j-1).
            for c in 0..n {
                m[(j, c)] += l * m[(j - 1, c)];
            }
            let u: f64 = rng.random_range(0.2..=1.0);
            // Right factor I + u E_{j-1, j}: column j += u column (j-1).
            for r in 0..n {
                m[(r, j)] += u * m[(r, j - 1)];
            }
        }
    }
    SquareMatrix::from_dmatrix(m).expect("finite product")
}
