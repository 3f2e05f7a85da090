//! Shared matrix types and the plain-text matrix format.
//!
//! The text format is a dimension line `n` followed by `n` rows of `n`
//! whitespace-separated decimal reals. Blank lines and lines starting with
//! `#` are ignored.

use std::fmt;
use std::ops::Index;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense real `n x n` matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix(DMatrix<f64>);

/// Nonnegative `n x n` matrix of perturbation weights.
#[derive(Debug, Clone, PartialEq)]
pub struct RadiusMatrix(DMatrix<f64>);

fn check_len(n: usize, len: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidInput("dimension must be positive".into()));
    }
    if len != n * n {
        return Err(Error::DimensionMismatch {
            expected: n * n,
            found: len,
        });
    }
    Ok(())
}

fn rows_to_vec(rows: &[Vec<f64>]) -> Result<(usize, Vec<f64>)> {
    let n = rows.len();
    let mut out = Vec::with_capacity(n * n);
    for r in rows {
        if r.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: r.len(),
            });
        }
        out.extend_from_slice(r);
    }
    Ok((n, out))
}

impl SquareMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        check_len(n, entries.len())?;
        if let Some(x) = entries.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidInput(format!("non-finite entry {x}")));
        }
        Ok(SquareMatrix(DMatrix::from_row_slice(n, n, &entries)))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let (n, v) = rows_to_vec(rows)?;
        Self::new(n, v)
    }

    pub fn from_dmatrix(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidInput(format!(
                "matrix is {}x{}, not square",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.nrows() == 0 {
            return Err(Error::InvalidInput("dimension must be positive".into()));
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("non-finite entry".into()));
        }
        Ok(SquareMatrix(m))
    }

    pub fn identity(n: usize) -> Self {
        SquareMatrix(DMatrix::identity(n, n))
    }

    pub fn zeros(n: usize) -> Self {
        SquareMatrix(DMatrix::zeros(n, n))
    }

    pub fn diagonal(d: &[f64]) -> Self {
        SquareMatrix(DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(d)))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_dmatrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<f64> {
        self.0
    }

    /// Row-major copy of the entries.
    pub fn to_row_major(&self) -> Vec<f64> {
        self.0.transpose().as_slice().to_vec()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n())
            .map(|i| self.0.row(i).iter().copied().collect())
            .collect()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.0.amax()
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        SquareMatrix(&self.0 * alpha)
    }

    pub fn transpose(&self) -> Self {
        SquareMatrix(self.0.transpose())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (n, v) = parse_square(text)?;
        Self::new(n, v)
    }

    pub fn to_text(&self) -> String {
        format_square(&self.0)
    }
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = f64;
    fn index(&self, ij: (usize, usize)) -> &f64 {
        &self.0[ij]
    }
}

impl RadiusMatrix {
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        check_len(n, entries.len())?;
        if let Some(x) = entries.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(Error::InvalidInput(format!(
                "radius entries must be finite and nonnegative, found {x}"
            )));
        }
        Ok(RadiusMatrix(DMatrix::from_row_slice(n, n, &entries)))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let (n, v) = rows_to_vec(rows)?;
        Self::new(n, v)
    }

    pub fn from_dmatrix(m: DMatrix<f64>) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::InvalidInput("radius matrix must be square".into()));
        }
        if m.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::InvalidInput(
                "radius entries must be finite and nonnegative".into(),
            ));
        }
        Ok(RadiusMatrix(m))
    }

    /// The all-ones matrix `ee^T`.
    pub fn ones(n: usize) -> Self {
        RadiusMatrix(DMatrix::from_element(n, n, 1.0))
    }

    pub fn zeros(n: usize) -> Self {
        RadiusMatrix(DMatrix::zeros(n, n))
    }

    /// Outer product `uv^T` of two nonnegative vectors.
    pub fn outer(u: &[f64], v: &[f64]) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::DimensionMismatch {
                expected: u.len(),
                found: v.len(),
            });
        }
        let n = u.len();
        let m = DMatrix::from_fn(n, n, |i, j| u[i] * v[j]);
        Self::from_dmatrix(m)
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_dmatrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn to_row_major(&self) -> Vec<f64> {
        self.0.transpose().as_slice().to_vec()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n())
            .map(|i| self.0.row(i).iter().copied().collect())
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| *x == 0.0)
    }

    pub fn is_all_ones(&self) -> bool {
        self.0.iter().all(|x| *x == 1.0)
    }

    pub fn nonzeros(&self) -> usize {
        self.0.iter().filter(|x| **x != 0.0).count()
    }

    pub fn min_entry(&self) -> f64 {
        self.0.min()
    }

    pub fn max_entry(&self) -> f64 {
        self.0.max()
    }

    /// Multiplies by `beta`, which must be nonnegative.
    pub fn scaled(&self, beta: f64) -> Result<Self> {
        Self::from_dmatrix(&self.0 * beta)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (n, v) = parse_square(text)?;
        Self::new(n, v)
    }

    pub fn to_text(&self) -> String {
        format_square(&self.0)
    }
}

impl Index<(usize, usize)> for RadiusMatrix {
    type Output = f64;
    fn index(&self, ij: (usize, usize)) -> &f64 {
        &self.0[ij]
    }
}

pub(crate) fn check_same_dim(a: &SquareMatrix, delta: &RadiusMatrix) -> Result<()> {
    if a.n() != delta.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: delta.n(),
        });
    }
    Ok(())
}

/// The interval matrix `[center - radius, center + radius]`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalMatrix {
    pub center: SquareMatrix,
    pub radius: RadiusMatrix,
}

impl IntervalMatrix {
    pub fn new(center: SquareMatrix, radius: RadiusMatrix) -> Result<Self> {
        check_same_dim(&center, &radius)?;
        Ok(IntervalMatrix { center, radius })
    }

    /// `[A - delta*D, A + delta*D]`.
    pub fn scaled(center: &SquareMatrix, delta_matrix: &RadiusMatrix, delta: f64) -> Result<Self> {
        Self::new(center.clone(), delta_matrix.scaled(delta)?)
    }

    /// Membership with an absolute slack on each entry.
    pub fn contains(&self, m: &SquareMatrix, slack: f64) -> bool {
        m.n() == self.center.n()
            && m
                .as_dmatrix()
                .iter()
                .zip(self.center.as_dmatrix().iter())
                .zip(self.radius.as_dmatrix().iter())
                .all(|((x, c), r)| (x - c).abs() <= r + slack)
    }
}

/// A vector in `{+1, -1}^n`.
///
/// Ordering is lexicographic with `-1 < +1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct SignVector(Vec<i8>);

impl SignVector {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.is_empty() {
            return Err(Error::InvalidInput("sign vector must be nonempty".into()));
        }
        if signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(Error::InvalidInput("signs must be +1 or -1".into()));
        }
        Ok(SignVector(signs))
    }

    pub fn all_plus(n: usize) -> Self {
        SignVector(vec![1; n])
    }

    /// Bit `k` of `bits` set means component `k` is `-1`.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        SignVector((0..n).map(|k| if bits >> k & 1 == 1 { -1 } else { 1 }).collect())
    }

    /// Alternating `(1, -1, 1, ...)`.
    pub fn checkerboard(n: usize) -> Self {
        SignVector((0..n).map(|k| if k % 2 == 0 { 1 } else { -1 }).collect())
    }

    /// Signs of a real vector, zero mapped to `+1`.
    pub fn of(v: &[f64]) -> Self {
        SignVector(v.iter().map(|x| if *x < 0.0 { -1 } else { 1 }).collect())
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, k: usize) -> f64 {
        self.0[k] as f64
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.0.iter().map(|s| *s as f64).collect()
    }

    pub fn flipped(&self, k: usize) -> Self {
        let mut s = self.0.clone();
        s[k] = -s[k];
        SignVector(s)
    }

    pub fn negated(&self) -> Self {
        SignVector(self.0.iter().map(|s| -s).collect())
    }
}

impl TryFrom<Vec<i8>> for SignVector {
    type Error = Error;
    fn try_from(v: Vec<i8>) -> Result<Self> {
        SignVector::new(v)
    }
}

impl From<SignVector> for Vec<i8> {
    fn from(s: SignVector) -> Vec<i8> {
        s.0
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(if *s > 0 { "+" } else { "-" })?;
        }
        Ok(())
    }
}

pub(crate) fn data_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

pub(crate) fn parse_reals(line: &str) -> Result<Vec<f64>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| Error::Parse(format!("not a real number: {t:?}")))
        })
        .collect()
}

pub(crate) fn parse_dimension(line: Option<&str>) -> Result<usize> {
    let line = line.ok_or_else(|| Error::Parse("missing dimension line".into()))?;
    let n: usize = line
        .parse()
        .map_err(|_| Error::Parse(format!("bad dimension line {line:?}")))?;
    if n == 0 {
        return Err(Error::Parse("dimension must be positive".into()));
    }
    Ok(n)
}

fn parse_square(text: &str) -> Result<(usize, Vec<f64>)> {
    let mut lines = data_lines(text);
    let n = parse_dimension(lines.next())?;
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {n} rows, found {i}")))?;
        let row = parse_reals(line)?;
        if row.len() != n {
            return Err(Error::Parse(format!(
                "row {} has {} entries, expected {n}",
                i + 1,
                row.len()
            )));
        }
        out.extend(row);
    }
    if lines.next().is_some() {
        return Err(Error::Parse(format!("more than {n} rows")));
    }
    Ok((n, out))
}

pub(crate) fn format_row(v: impl IntoIterator<Item = f64>) -> String {
    v.into_iter()
        .map(|x| format!("{x:?}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn format_square(m: &DMatrix<f64>) -> String {
    let mut s = format!("{}\n", m.nrows());
    for i in 0..m.nrows() {
        s.push_str(&format_row(m.row(i).iter().copied()));
        s.push('\n');
    }
    s
}
