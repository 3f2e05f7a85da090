//! Radius of unreduced tridiagonal matrices whose weights share the
//! tridiagonal zero structure.
//!
//! With `p_k = b_k c_{k-1}` the leading minors satisfy
//! `f_k = a_k f_{k-1} - p_k f_{k-2}`. Each step draws fresh parameters
//! `a_k` and `p_k` from independent intervals, so the set of reachable
//! ratios `f_k / f_{k-1}` can be propagated exactly as an arc of the
//! projective line `R ∪ {∞}`. The interval matrix is singular iff the final
//! arc contains zero, or the state vector `(f_k, f_{k-1})` can vanish on the
//! way (both minors zero forces `f_n = 0`).

use nalgebra::DMatrix;

use crate::bounds::bound_rohn_upper;
use crate::error::{Error, Result};
use crate::finiteness::is_radius_infinite;
use crate::matrix::{data_lines, format_row, parse_dimension, parse_reals, RadiusMatrix, SquareMatrix};
use crate::radius::{Method, RadiusResult, RadiusValue, Tolerances};

#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalMatrix {
    /// Diagonal, length `n`.
    pub a: Vec<f64>,
    /// Subdiagonal `b_2..b_n`; `b[k]` sits at `(k + 1, k)`.
    pub b: Vec<f64>,
    /// Superdiagonal `c_1..c_{n-1}`; `c[k]` sits at `(k, k + 1)`.
    pub c: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalRadius {
    pub da: Vec<f64>,
    pub db: Vec<f64>,
    pub dc: Vec<f64>,
}

fn check_lengths(a: &[f64], b: &[f64], c: &[f64]) -> Result<usize> {
    let n = a.len();
    if n == 0 {
        return Err(Error::InvalidInput("empty tridiagonal matrix".into()));
    }
    for (name, v) in [("subdiagonal", b), ("superdiagonal", c)] {
        if v.len() != n - 1 {
            return Err(Error::InvalidInput(format!(
                "{name} has {} entries, expected {}",
                v.len(),
                n - 1
            )));
        }
    }
    if a.iter().chain(b).chain(c).any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput("non-finite entry".into()));
    }
    Ok(n)
}

/// Reads "n", then lines for the diagonal, superdiagonal and subdiagonal.
fn parse_three(text: &str) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let mut lines = data_lines(text);
    let n = parse_dimension(lines.next())?;
    let mut take = |len: usize, what: &str| -> Result<Vec<f64>> {
        if len == 0 {
            return Ok(Vec::new());
        }
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("missing {what} line")))?;
        let v = parse_reals(line)?;
        if v.len() != len {
            return Err(Error::Parse(format!("{what} has {} entries, expected {len}", v.len())));
        }
        Ok(v)
    };
    let a = take(n, "diagonal")?;
    let c = take(n - 1, "superdiagonal")?;
    let b = take(n - 1, "subdiagonal")?;
    if lines.next().is_some() {
        return Err(Error::Parse("trailing lines after the subdiagonal".into()));
    }
    Ok((a, b, c))
}

fn format_three(a: &[f64], b: &[f64], c: &[f64]) -> String {
    let mut out = format!("{}\n{}\n", a.len(), format_row(a.iter().copied()));
    if a.len() > 1 {
        out.push_str(&format_row(c.iter().copied()));
        out.push('\n');
        out.push_str(&format_row(b.iter().copied()));
        out.push('\n');
    }
    out
}

fn dense(a: &[f64], b: &[f64], c: &[f64]) -> DMatrix<f64> {
    let n = a.len();
    let mut m = DMatrix::zeros(n, n);
    for k in 0..n {
        m[(k, k)] = a[k];
        if k + 1 < n {
            m[(k + 1, k)] = b[k];
            m[(k, k + 1)] = c[k];
        }
    }
    m
}

fn bands(m: &DMatrix<f64>) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let n = m.nrows();
    for i in 0..n {
        for j in 0..n {
            if i.abs_diff(j) > 1 && m[(i, j)] != 0.0 {
                return Err(Error::StructureMismatch(format!(
                    "nonzero entry outside the tridiagonal band at ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    let a = (0..n).map(|k| m[(k, k)]).collect();
    let b = (1..n).map(|k| m[(k, k - 1)]).collect();
    let c = (1..n).map(|k| m[(k - 1, k)]).collect();
    Ok((a, b, c))
}

impl TridiagonalMatrix {
    /// Fails unless every off-diagonal entry is nonzero.
    pub fn new(a: Vec<f64>, b: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        check_lengths(&a, &b, &c)?;
        if let Some(k) = (0..b.len()).find(|&k| b[k] == 0.0 || c[k] == 0.0) {
            return Err(Error::StructureMismatch(format!(
                "reduced matrix: zero off-diagonal pair at position {}",
                k + 1
            )));
        }
        Ok(Self { a, b, c })
    }

    pub fn from_dense(m: &SquareMatrix) -> Result<Self> {
        let (a, b, c) = bands(m.as_dmatrix())?;
        Self::new(a, b, c)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (a, b, c) = parse_three(text)?;
        Self::new(a, b, c)
    }

    pub fn to_text(&self) -> String {
        format_three(&self.a, &self.b, &self.c)
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn to_dense(&self) -> SquareMatrix {
        SquareMatrix::from_dmatrix(dense(&self.a, &self.b, &self.c)).expect("finite entries")
    }
}

impl TridiagonalRadius {
    pub fn new(da: Vec<f64>, db: Vec<f64>, dc: Vec<f64>) -> Result<Self> {
        check_lengths(&da, &db, &dc)?;
        if da.iter().chain(&db).chain(&dc).any(|x| *x < 0.0) {
            return Err(Error::InvalidInput("negative weight".into()));
        }
        Ok(Self { da, db, dc })
    }

    /// Unit weights on the whole band.
    pub fn ones(n: usize) -> Self {
        let m = n.saturating_sub(1);
        Self { da: vec![1.0; n], db: vec![1.0; m], dc: vec![1.0; m] }
    }

    pub fn from_dense(m: &RadiusMatrix) -> Result<Self> {
        let (da, db, dc) = bands(m.as_dmatrix())?;
        Self::new(da, db, dc)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let (da, db, dc) = parse_three(text)?;
        Self::new(da, db, dc)
    }

    pub fn to_text(&self) -> String {
        format_three(&self.da, &self.db, &self.dc)
    }

    pub fn n(&self) -> usize {
        self.da.len()
    }

    pub fn is_zero(&self) -> bool {
        self.da.iter().chain(&self.db).chain(&self.dc).all(|x| *x == 0.0)
    }

    /// Zero-padded full form.
    pub fn to_dense(&self) -> RadiusMatrix {
        RadiusMatrix::from_dmatrix(dense(&self.da, &self.db, &self.dc)).expect("nonnegative weights")
    }
}

fn check_structure(t: &TridiagonalMatrix, d: &TridiagonalRadius) -> Result<()> {
    if t.n() != d.n() {
        return Err(Error::StructureMismatch(format!(
            "matrix has order {}, weights have order {}",
            t.n(),
            d.n()
        )));
    }
    // Off-diagonal entries are nonzero by construction; only zero diagonal
    // entries can carry a forbidden weight.
    if let Some(k) = (0..t.n()).find(|&k| t.a[k] == 0.0 && d.da[k] > 0.0) {
        return Err(Error::StructureMismatch(format!(
            "weight on the zero diagonal entry {}",
            k + 1
        )));
    }
    Ok(())
}

/// Closed connected subset of the projective line.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Arc {
    /// `[lo, hi]` with finite endpoints.
    Segment(f64, f64),
    /// Complement of the open gap `(lo, hi)`, including `∞`; `lo < hi`,
    /// either end may be infinite.
    Exterior(f64, f64),
    Whole,
}

fn recip(x: f64) -> f64 {
    if x.is_infinite() {
        0.0
    } else {
        1.0 / x
    }
}

impl Arc {
    fn exterior(lo: f64, hi: f64) -> Self {
        if lo < hi {
            Arc::Exterior(lo, hi)
        } else {
            Arc::Whole
        }
    }

    fn contains_zero(self) -> bool {
        match self {
            Arc::Segment(l, u) => l <= 0.0 && 0.0 <= u,
            Arc::Exterior(l, u) => !(l < 0.0 && 0.0 < u),
            Arc::Whole => true,
        }
    }

    fn contains_infinity(self) -> bool {
        !matches!(self, Arc::Segment(..))
    }

    /// Image under `x -> 1/x`.
    fn invert(self) -> Self {
        match self {
            Arc::Segment(l, u) if l > 0.0 || u < 0.0 => Arc::Segment(1.0 / u, 1.0 / l),
            Arc::Segment(l, u) if l == 0.0 && u == 0.0 => {
                Arc::Exterior(f64::NEG_INFINITY, f64::INFINITY)
            }
            Arc::Segment(l, u) if l == 0.0 => Arc::Exterior(f64::NEG_INFINITY, 1.0 / u),
            Arc::Segment(l, u) if u == 0.0 => Arc::Exterior(1.0 / l, f64::INFINITY),
            Arc::Segment(l, u) => Arc::Exterior(1.0 / l, 1.0 / u),
            Arc::Exterior(l, u) if l < 0.0 && 0.0 < u => Arc::Segment(recip(l), recip(u)),
            Arc::Exterior(l, u) if l >= 0.0 => {
                let hi = if l == 0.0 { f64::INFINITY } else { 1.0 / l };
                Arc::exterior(recip(u), hi)
            }
            Arc::Exterior(l, u) => {
                let lo = if u == 0.0 { f64::NEG_INFINITY } else { 1.0 / u };
                Arc::exterior(lo, recip(l))
            }
            Arc::Whole => Arc::Whole,
        }
    }

    fn negate(self) -> Self {
        match self {
            Arc::Segment(l, u) => Arc::Segment(-u, -l),
            Arc::Exterior(l, u) => Arc::Exterior(-u, -l),
            Arc::Whole => Arc::Whole,
        }
    }

    /// `{p x : p in [p1, p2], x in self}`; `None` when the product is
    /// undefined (`0 · ∞`).
    fn scale(self, p1: f64, p2: f64) -> Option<Self> {
        if p2 < 0.0 {
            return self.negate().scale(-p2, -p1);
        }
        match self {
            Arc::Segment(l, u) => {
                let ends = [p1 * l, p1 * u, p2 * l, p2 * u];
                let lo = ends.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = ends.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                Some(Arc::Segment(lo, hi))
            }
            _ if p1 <= 0.0 => None,
            Arc::Exterior(l, u) => {
                // Intersection of the scaled gaps.
                let lo = if l < 0.0 { p1 * l } else { p2 * l };
                let hi = if u > 0.0 { p1 * u } else { p2 * u };
                Some(Arc::exterior(lo, hi))
            }
            Arc::Whole => Some(Arc::Whole),
        }
    }

    /// `{a - x : a in [a1, a2], x in self}`.
    fn subtract_from(self, a1: f64, a2: f64) -> Self {
        match self.negate() {
            Arc::Segment(l, u) => Arc::Segment(l + a1, u + a2),
            Arc::Exterior(l, u) => Arc::exterior(l + a2, u + a1),
            Arc::Whole => Arc::Whole,
        }
    }
}

/// Outcome of one regularity test with its operation count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegularityCheck {
    pub regular: bool,
    /// Arc operations performed; at most a fixed multiple of `n`.
    pub operations: usize,
}

/// Whether `[T - delta D, T + delta D]` contains only nonsingular matrices.
pub fn tridiag_is_regular(t: &TridiagonalMatrix, d: &TridiagonalRadius, delta: f64) -> Result<bool> {
    Ok(tridiag_regularity_check(t, d, delta)?.regular)
}

/// [`tridiag_is_regular`] with its operation count.
pub fn tridiag_regularity_check(
    t: &TridiagonalMatrix,
    d: &TridiagonalRadius,
    delta: f64,
) -> Result<RegularityCheck> {
    check_structure(t, d)?;
    if !(delta >= 0.0) || delta.is_infinite() {
        return Err(Error::InvalidInput(format!("delta must be finite and nonnegative, got {delta}")));
    }
    let interval = |x: f64, w: f64| (x - delta * w, x + delta * w);
    let (a1, a2) = interval(t.a[0], d.da[0]);
    let mut theta = Arc::Segment(a1, a2);
    let mut operations = 1;
    for k in 1..t.n() {
        let (b1, b2) = interval(t.b[k - 1], d.db[k - 1]);
        let (c1, c2) = interval(t.c[k - 1], d.dc[k - 1]);
        let ends = [b1 * c1, b1 * c2, b2 * c1, b2 * c2];
        let p1 = ends.iter().copied().fold(f64::INFINITY, f64::min);
        let p2 = ends.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let inv = theta.invert();
        operations += 2;
        let Some(x) = inv.scale(p1, p2) else {
            // f_{k-1} = 0 together with p_k = 0 zeroes every later minor.
            debug_assert!(inv.contains_infinity());
            return Ok(RegularityCheck { regular: false, operations });
        };
        let (a1, a2) = interval(t.a[k], d.da[k]);
        theta = x.subtract_from(a1, a2);
        operations += 2;
        if theta == Arc::Whole {
            return Ok(RegularityCheck { regular: false, operations });
        }
    }
    Ok(RegularityCheck { regular: !theta.contains_zero(), operations })
}

/// Radius by bisection on `delta` with the linear-time regularity test.
///
/// The result lies within `eps` above the true radius. A singular `T`
/// yields zero.
pub fn tridiag_radius(
    t: &TridiagonalMatrix,
    d: &TridiagonalRadius,
    eps: f64,
    tol: &Tolerances,
) -> Result<RadiusResult> {
    check_structure(t, d)?;
    if !(eps > 0.0) {
        return Err(Error::InvalidInput(format!("eps must be positive, got {eps}")));
    }
    if !tridiag_is_regular(t, d, 0.0)? {
        return Ok(RadiusResult::new(RadiusValue::Finite(0.0), Method::Tridiagonal, 0.0));
    }
    let (a_full, d_full) = (t.to_dense(), d.to_dense());
    let rohn = match bound_rohn_upper(&a_full, &d_full, tol) {
        Ok(v) => v,
        Err(Error::SingularInput) => {
            return Ok(RadiusResult::new(RadiusValue::Finite(0.0), Method::Tridiagonal, 0.0))
        }
        Err(e) => return Err(e),
    };
    let mut hi = match rohn {
        RadiusValue::Finite(r) => r * (1.0 + 1e-6),
        RadiusValue::Infinite => {
            if is_radius_infinite(&a_full, &d_full, tol)?.infinite {
                return Err(Error::InfiniteRadius);
            }
            1.0
        }
    };
    let mut doublings = 0;
    while tridiag_is_regular(t, d, hi)? {
        hi *= 2.0;
        doublings += 1;
        if !hi.is_finite() {
            return Err(Error::InfiniteRadius);
        }
    }
    let mut lo = 0.0;
    let mut iterations = 0usize;
    let mut operations = 0usize;
    while hi - lo > eps {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        let check = tridiag_regularity_check(t, d, mid)?;
        operations += check.operations;
        iterations += 1;
        if check.regular {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(RadiusResult::new(RadiusValue::Finite(hi), Method::Tridiagonal, hi - lo)
        .with_diagnostic("bisection_iterations", iterations as f64)
        .with_diagnostic("bracket_doublings", doublings as f64)
        .with_diagnostic("arc_operations", operations as f64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{is_regular_oracle, radius_full_search};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn two_by_two() -> TridiagonalMatrix {
        TridiagonalMatrix::new(vec![2.0, 2.0], vec![1.0], vec![1.0]).unwrap()
    }

    fn random_instance(rng: &mut ChaCha8Rng, n: usize) -> (TridiagonalMatrix, TridiagonalRadius) {
        let off = |rng: &mut ChaCha8Rng| {
            let x: f64 = rng.random_range(0.2..3.0);
            if rng.random_bool(0.5) {
                x
            } else {
                -x
            }
        };
        let a = (0..n).map(|_| rng.random_range(-4.0..4.0)).collect();
        let b = (1..n).map(|_| off(rng)).collect();
        let c = (1..n).map(|_| off(rng)).collect();
        let w = |rng: &mut ChaCha8Rng, k: usize| (0..k).map(|_| rng.random_range(0.0..1.0)).collect();
        let d = TridiagonalRadius::new(w(rng, n), w(rng, n - 1), w(rng, n - 1)).unwrap();
        (TridiagonalMatrix::new(a, b, c).unwrap(), d)
    }

    #[test]
    fn two_by_two_regularity() {
        let t = two_by_two();
        let d = TridiagonalRadius::ones(2);
        assert!(tridiag_is_regular(&t, &d, 0.25).unwrap());
        assert!(!tridiag_is_regular(&t, &d, 0.75).unwrap());
    }

    #[test]
    fn point_matrix_regular_iff_nonsingular() {
        let d = TridiagonalRadius::ones(2);
        assert!(tridiag_is_regular(&two_by_two(), &d, 0.0).unwrap());
        let singular = TridiagonalMatrix::new(vec![1.0, 1.0], vec![1.0], vec![1.0]).unwrap();
        assert!(!tridiag_is_regular(&singular, &d, 0.0).unwrap());
        let zero_lead = TridiagonalMatrix::new(vec![0.0, 0.0, 1.0], vec![1.0, 1.0], vec![1.0, 1.0]).unwrap();
        let dz = TridiagonalRadius::new(vec![0.0; 3], vec![1.0; 2], vec![1.0; 2]).unwrap();
        // det = -1 although the leading minor f_1 vanishes.
        assert_eq!(zero_lead.to_dense().as_dmatrix().determinant(), -1.0);
        assert!(tridiag_is_regular(&zero_lead, &dz, 0.0).unwrap());
    }

    #[test]
    fn radius_of_two_by_two() {
        let r = tridiag_radius(&two_by_two(), &TridiagonalRadius::ones(2), 1e-9, &tol()).unwrap();
        assert!((r.value.as_f64() - 0.5).abs() <= 1e-9);
        assert!(r.tolerance <= 1e-9);
    }

    #[test]
    fn second_difference_matrix_matches_full_search() {
        let t = TridiagonalMatrix::new(vec![2.0; 3], vec![-1.0; 2], vec![-1.0; 2]).unwrap();
        let d = TridiagonalRadius::ones(3);
        let r = tridiag_radius(&t, &d, 1e-10, &tol()).unwrap().value.as_f64();
        let full = radius_full_search(&t.to_dense(), &d.to_dense(), &tol()).unwrap();
        assert!((r - full.value.as_f64()).abs() <= 1e-8, "{r} vs {:?}", full.value);
    }

    #[test]
    fn reduced_matrix_rejected() {
        let e = TridiagonalMatrix::new(vec![1.0, 1.0], vec![0.0], vec![0.0]).unwrap_err();
        assert!(matches!(e, Error::StructureMismatch(_)));
        let e = TridiagonalMatrix::from_dense(&SquareMatrix::identity(2)).unwrap_err();
        assert!(matches!(e, Error::StructureMismatch(_)));
    }

    #[test]
    fn weight_on_zero_entry_rejected() {
        let t = TridiagonalMatrix::new(vec![0.0, 1.0], vec![1.0], vec![1.0]).unwrap();
        let e = tridiag_is_regular(&t, &TridiagonalRadius::ones(2), 0.1).unwrap_err();
        assert!(matches!(e, Error::StructureMismatch(_)));
    }

    #[test]
    fn singular_matrix_has_zero_radius() {
        let t = TridiagonalMatrix::new(vec![1.0, 1.0], vec![1.0], vec![1.0]).unwrap();
        let r = tridiag_radius(&t, &TridiagonalRadius::ones(2), 1e-9, &tol()).unwrap();
        assert_eq!(r.value, RadiusValue::Finite(0.0));
    }

    #[test]
    fn diagonal_weights_only() {
        let t = two_by_two();
        let d = TridiagonalRadius::new(vec![1.0, 1.0], vec![0.0], vec![0.0]).unwrap();
        let r = tridiag_radius(&t, &d, 1e-10, &tol()).unwrap().value.as_f64();
        // det(T - diag(x, y)) = (2-x)(2-y) - 1 first vanishes at x = y = 1.
        assert!((r - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn text_round_trip() {
        let t = TridiagonalMatrix::new(vec![2.0, 3.0, 4.0], vec![-1.0, 5.0], vec![0.5, 7.0]).unwrap();
        let back = TridiagonalMatrix::parse(&t.to_text()).unwrap();
        assert_eq!(back, t);
        let dense = t.to_dense();
        assert_eq!(dense[(0, 1)], 0.5);
        assert_eq!(dense[(1, 0)], -1.0);
        assert_eq!(TridiagonalMatrix::from_dense(&dense).unwrap(), t);
        let one = TridiagonalMatrix::parse("1\n3.5\n").unwrap();
        assert_eq!(one.a, vec![3.5]);
        assert!(TridiagonalMatrix::parse("2\n1 2\n3\n").is_err());
    }

    #[test]
    fn agrees_with_oracle_on_delta_grid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..30 {
            let n = 2 + trial % 4;
            let (t, d) = random_instance(&mut rng, n);
            let full = radius_full_search(&t.to_dense(), &d.to_dense(), &tol()).unwrap();
            let top = full.value.finite().map_or(4.0, |r| 2.0 * r).max(0.1);
            for g in 0..20 {
                let delta = top * (g as f64 + 0.5) / 20.0;
                match is_regular_oracle(&t.to_dense(), &d.to_dense(), delta, &tol()) {
                    Ok(expected) => assert_eq!(
                        tridiag_is_regular(&t, &d, delta).unwrap(),
                        expected,
                        "trial {trial}, delta {delta}"
                    ),
                    Err(Error::Indeterminate(_)) => {}
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }

    #[test]
    fn operation_count_is_linear() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [10, 100, 1000] {
            let (t, d) = random_instance(&mut rng, n);
            let ops = tridiag_regularity_check(&t, &d, 0.0).unwrap().operations;
            assert!(ops <= 4 * n, "n={n}, ops={ops}");
        }
    }

    #[test]
    fn arc_inversion_cases() {
        let inf = f64::INFINITY;
        assert_eq!(Arc::Segment(2.0, 4.0).invert(), Arc::Segment(0.25, 0.5));
        assert_eq!(Arc::Segment(-1.0, 2.0).invert(), Arc::Exterior(-1.0, 0.5));
        assert_eq!(Arc::Segment(0.0, 2.0).invert(), Arc::Exterior(-inf, 0.5));
        assert_eq!(Arc::Exterior(-1.0, 0.5).invert(), Arc::Segment(-1.0, 2.0));
        assert_eq!(Arc::Exterior(1.0, 2.0).invert(), Arc::Exterior(0.5, 1.0));
        assert_eq!(Arc::Exterior(-2.0, -1.0).invert(), Arc::Exterior(-1.0, -0.5));
        assert_eq!(Arc::Exterior(-inf, inf).invert(), Arc::Segment(0.0, 0.0));
        assert_eq!(Arc::Exterior(1.0, 2.0).scale(1.0, 3.0), Some(Arc::Whole));
        assert_eq!(Arc::Exterior(-1.0, 2.0).scale(1.0, 2.0), Some(Arc::Exterior(-1.0, 2.0)));
        assert_eq!(Arc::Exterior(-1.0, 2.0).scale(-1.0, -1.0), Some(Arc::Exterior(-2.0, 1.0)));
        assert_eq!(Arc::Exterior(-1.0, 2.0).scale(0.0, 1.0), None);
        assert_eq!(Arc::Exterior(-1.0, 2.0).subtract_from(0.0, 1.0), Arc::Exterior(-1.0, 1.0));
        assert_eq!(Arc::Exterior(-0.5, 0.5).subtract_from(0.0, 2.0), Arc::Whole);
    }
}
