//! Linear feasibility by a dense phase-one simplex with Bland's rule.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::radius::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    Le,
    Eq,
}

/// `a x (rel) b`, with optional sign constraints `x_j >= 0` on variables
/// (variables are free by default).
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    a: DMatrix<f64>,
    relations: Vec<Relation>,
    b: Vec<f64>,
    nonnegative: Vec<bool>,
}

impl LinearSystem {
    pub fn new(a: DMatrix<f64>, relations: Vec<Relation>, b: Vec<f64>) -> Result<Self> {
        let m = a.nrows();
        for (len, what) in [(relations.len(), "relations"), (b.len(), "right-hand side")] {
            if len != m {
                return Err(Error::InvalidInput(format!("{what} has length {len}, expected {m}")));
            }
        }
        if a.iter().chain(&b).any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("non-finite coefficient".into()));
        }
        let n = a.ncols();
        Ok(Self { a, relations, b, nonnegative: vec![false; n] })
    }

    /// An empty system over `n` free variables.
    pub fn empty(n: usize) -> Self {
        Self { a: DMatrix::zeros(0, n), relations: Vec::new(), b: Vec::new(), nonnegative: vec![false; n] }
    }

    pub fn with_nonnegative(mut self, flags: Vec<bool>) -> Result<Self> {
        if flags.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: flags.len() });
        }
        self.nonnegative = flags;
        Ok(self)
    }

    /// Appends one row.
    pub fn push(&mut self, row: &[f64], rel: Relation, rhs: f64) -> Result<()> {
        if row.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: row.len() });
        }
        if row.iter().any(|x| !x.is_finite()) || !rhs.is_finite() {
            return Err(Error::InvalidInput("non-finite coefficient".into()));
        }
        let m = self.m();
        self.a = self.a.clone().insert_row(m, 0.0);
        for (j, x) in row.iter().enumerate() {
            self.a[(m, j)] = *x;
        }
        self.relations.push(rel);
        self.b.push(rhs);
        Ok(())
    }

    /// Appends `row · x >= rhs` as `-row · x <= -rhs`.
    pub fn push_ge(&mut self, row: &[f64], rhs: f64) -> Result<()> {
        let neg: Vec<f64> = row.iter().map(|x| -x).collect();
        self.push(&neg, Relation::Le, -rhs)
    }

    pub fn m(&self) -> usize {
        self.a.nrows()
    }

    pub fn n(&self) -> usize {
        self.a.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn rhs(&self) -> &[f64] {
        &self.b
    }

    pub fn nonnegative(&self) -> &[bool] {
        &self.nonnegative
    }

    /// Largest violation of `x`, each row measured relative to its scale
    /// `max(|a_i|, |b_i|) (1 + |x|_inf)`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let xn = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut worst = 0.0f64;
        for i in 0..self.m() {
            let row = self.a.row(i);
            let lhs: f64 = row.iter().zip(x).map(|(a, v)| a * v).sum();
            let scale = row.iter().fold(self.b[i].abs(), |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
            let raw = match self.relations[i] {
                Relation::Le => (lhs - self.b[i]).max(0.0),
                Relation::Eq => (lhs - self.b[i]).abs(),
            };
            worst = worst.max(raw / (scale * (1.0 + xn)));
        }
        for (j, v) in x.iter().enumerate() {
            if self.nonnegative[j] {
                worst = worst.max((-v).max(0.0) / (1.0 + xn));
            }
        }
        worst
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityAnswer {
    pub feasible: bool,
    pub witness: Option<Vec<f64>>,
    /// Witness violation when feasible; the phase-one optimum otherwise.
    pub max_violation: f64,
    pub pivots: usize,
}

pub fn default_iteration_limit(sys: &LinearSystem) -> usize {
    50 * (sys.m() + sys.n()).max(1)
}

pub fn lp_feasible(sys: &LinearSystem, tol: &Tolerances) -> Result<FeasibilityAnswer> {
    lp_feasible_with_limit(sys, tol, default_iteration_limit(sys))
}

const PIVOT_EPS: f64 = 1e-11;

struct Tableau {
    /// Rows `0..m` are constraints, the last row holds reduced costs; the last
    /// column is the right-hand side.
    t: DMatrix<f64>,
    basis: Vec<usize>,
    first_artificial: usize,
}

impl Tableau {
    fn rhs_col(&self) -> usize {
        self.t.ncols() - 1
    }

    fn m(&self) -> usize {
        self.basis.len()
    }

    fn entering(&self) -> Option<usize> {
        let cost = self.m();
        (0..self.first_artificial).find(|&j| self.t[(cost, j)] < -PIVOT_EPS)
    }

    fn leaving(&self, col: usize) -> Option<usize> {
        let rhs = self.rhs_col();
        let mut best: Option<(usize, f64)> = None;
        for i in 0..self.m() {
            let p = self.t[(i, col)];
            if p <= PIVOT_EPS {
                continue;
            }
            let ratio = self.t[(i, rhs)].max(0.0) / p;
            best = match best {
                None => Some((i, ratio)),
                Some((k, r)) => {
                    let tie = (ratio - r).abs() <= 1e-12 * (1.0 + r.abs());
                    if ratio < r && !tie || tie && self.basis[i] < self.basis[k] {
                        Some((i, ratio))
                    } else {
                        Some((k, r))
                    }
                }
            };
        }
        best.map(|(i, _)| i)
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.t[(row, col)];
        let width = self.t.ncols();
        for j in 0..width {
            self.t[(row, j)] /= p;
        }
        for i in 0..self.t.nrows() {
            if i == row {
                continue;
            }
            let f = self.t[(i, col)];
            if f == 0.0 {
                continue;
            }
            for j in 0..width {
                let v = self.t[(row, j)];
                self.t[(i, j)] -= f * v;
            }
            self.t[(i, col)] = 0.0;
        }
        self.basis[row] = col;
    }
}

/// [`lp_feasible`] with an explicit pivot budget.
pub fn lp_feasible_with_limit(
    sys: &LinearSystem,
    tol: &Tolerances,
    limit: usize,
) -> Result<FeasibilityAnswer> {
    let (m, n) = (sys.m(), sys.n());
    // Column layout: structural (one per sign-constrained variable, two per
    // free one), then slacks of `<=` rows, then artificials.
    let mut var_cols: Vec<(usize, Option<usize>)> = Vec::with_capacity(n);
    let mut ncols = 0;
    for j in 0..n {
        if sys.nonnegative[j] {
            var_cols.push((ncols, None));
            ncols += 1;
        } else {
            var_cols.push((ncols, Some(ncols + 1)));
            ncols += 2;
        }
    }
    let mut slack_of = vec![None; m];
    for i in 0..m {
        if sys.relations[i] == Relation::Le {
            slack_of[i] = Some(ncols);
            ncols += 1;
        }
    }
    let first_artificial = ncols;
    let mut row_sign = vec![1.0; m];
    let mut basis = vec![0; m];
    let mut artificial_rows = Vec::new();
    for i in 0..m {
        if sys.b[i] < 0.0 {
            row_sign[i] = -1.0;
        }
        match slack_of[i] {
            Some(s) if row_sign[i] > 0.0 => basis[i] = s,
            _ => {
                basis[i] = ncols;
                artificial_rows.push(i);
                ncols += 1;
            }
        }
    }
    let mut t = DMatrix::zeros(m + 1, ncols + 1);
    for i in 0..m {
        let row = sys.a.row(i);
        let scale = row.iter().fold(sys.b[i].abs(), |acc, v| acc.max(v.abs()));
        let f = if scale > 0.0 { row_sign[i] / scale } else { 1.0 };
        for j in 0..n {
            let (p, q) = var_cols[j];
            t[(i, p)] = f * row[j];
            if let Some(q) = q {
                t[(i, q)] = -f * row[j];
            }
        }
        if let Some(s) = slack_of[i] {
            t[(i, s)] = row_sign[i];
        }
        if basis[i] >= first_artificial {
            t[(i, basis[i])] = 1.0;
        }
        t[(i, ncols)] = f * sys.b[i];
    }
    for &i in &artificial_rows {
        for j in 0..=ncols {
            if j < first_artificial || j == ncols {
                let v = t[(i, j)];
                t[(m, j)] -= v;
            }
        }
    }
    let mut tab = Tableau { t, basis, first_artificial };
    let mut pivots = 0;
    while let Some(col) = tab.entering() {
        let Some(row) = tab.leaving(col) else {
            // Phase one is bounded below; a missing ratio means the reduced
            // cost is numerical noise.
            break;
        };
        if pivots == limit {
            return Err(Error::IterationLimit(limit));
        }
        tab.pivot(row, col);
        pivots += 1;
    }
    let rhs = tab.rhs_col();
    let objective: f64 = (0..m)
        .filter(|&i| tab.basis[i] >= first_artificial)
        .map(|i| tab.t[(i, rhs)].max(0.0))
        .sum();
    if objective > tol.eps_lp {
        return Ok(FeasibilityAnswer { feasible: false, witness: None, max_violation: objective, pivots });
    }
    let mut value = vec![0.0; first_artificial];
    for i in 0..m {
        if tab.basis[i] < first_artificial {
            value[tab.basis[i]] = tab.t[(i, rhs)];
        }
    }
    let x: Vec<f64> = var_cols
        .iter()
        .enumerate()
        .map(|(j, &(p, q))| {
            let v = value[p] - q.map_or(0.0, |q| value[q]);
            if sys.nonnegative[j] {
                v.max(0.0)
            } else {
                v
            }
        })
        .collect();
    let violation = sys.max_violation(&x);
    if violation > tol.eps_lp {
        return Err(Error::Indeterminate(format!(
            "simplex witness violates a constraint by {violation:e}"
        )));
    }
    Ok(FeasibilityAnswer { feasible: true, witness: Some(x), max_violation: violation, pivots })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn system(rows: &[(&[f64], Relation, f64)], n: usize) -> LinearSystem {
        let mut s = LinearSystem::empty(n);
        for (r, rel, b) in rows {
            s.push(r, *rel, *b).unwrap();
        }
        s
    }

    #[test]
    fn unit_interval_is_feasible() {
        let mut s = LinearSystem::empty(1);
        s.push_ge(&[1.0], 0.0).unwrap();
        s.push(&[1.0], Relation::Le, 1.0).unwrap();
        let ans = lp_feasible(&s, &tol()).unwrap();
        assert!(ans.feasible);
        let x = ans.witness.unwrap()[0];
        assert!((0.0..=1.0).contains(&x));
    }

    #[test]
    fn contradictory_bounds_are_infeasible() {
        let mut s = LinearSystem::empty(1);
        s.push(&[1.0], Relation::Le, -1.0).unwrap();
        s.push_ge(&[1.0], 0.0).unwrap();
        let ans = lp_feasible(&s, &tol()).unwrap();
        assert!(!ans.feasible);
        assert!(ans.witness.is_none());
    }

    #[test]
    fn recession_system_for_identity() {
        // x1 + x2 = 1, x >= 0, x_i <= 0.6 (x1 + x2).
        let s = system(
            &[
                (&[1.0, 1.0], Relation::Eq, 1.0),
                (&[0.4, -0.6], Relation::Le, 0.0),
                (&[-0.6, 0.4], Relation::Le, 0.0),
            ],
            2,
        )
        .with_nonnegative(vec![true, true])
        .unwrap();
        let ans = lp_feasible(&s, &tol()).unwrap();
        assert!(ans.feasible);
        let x = ans.witness.unwrap();
        assert!(x.iter().all(|v| (0.4 - 1e-9..=0.6 + 1e-9).contains(v)));
        assert!((x[0] + x[1] - 1.0).abs() < 1e-9);
    }

    #[test]
    fn free_variables_take_negative_values() {
        let s = system(&[(&[1.0, 0.0], Relation::Eq, -3.0), (&[1.0, 1.0], Relation::Le, -5.0)], 2);
        let x = lp_feasible(&s, &tol()).unwrap().witness.unwrap();
        assert!((x[0] + 3.0).abs() < 1e-9);
        assert!(x[1] <= -2.0 + 1e-9);
    }

    #[test]
    fn redundant_equalities() {
        let s = system(
            &[
                (&[1.0, 2.0], Relation::Eq, 3.0),
                (&[2.0, 4.0], Relation::Eq, 6.0),
                (&[0.0, 0.0], Relation::Eq, 0.0),
            ],
            2,
        );
        assert!(lp_feasible(&s, &tol()).unwrap().feasible);
        let s = system(&[(&[1.0, 2.0], Relation::Eq, 3.0), (&[2.0, 4.0], Relation::Eq, 7.0)], 2);
        assert!(!lp_feasible(&s, &tol()).unwrap().feasible);
    }

    #[test]
    fn empty_system_is_feasible() {
        let ans = lp_feasible(&LinearSystem::empty(3), &tol()).unwrap();
        assert!(ans.feasible);
        assert_eq!(ans.witness.unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn iteration_limit_is_an_error() {
        let s = system(&[(&[1.0, 1.0], Relation::Eq, 1.0), (&[1.0, -1.0], Relation::Eq, 0.0)], 2);
        assert_eq!(lp_feasible_with_limit(&s, &tol(), 0), Err(Error::IterationLimit(0)));
        assert!(lp_feasible(&s, &tol()).unwrap().feasible);
    }

    #[test]
    fn deterministic_answers() {
        let s = system(
            &[(&[1.0, 1.0, 1.0], Relation::Eq, 1.0), (&[1.0, -1.0, 0.0], Relation::Le, 0.0)],
            3,
        )
        .with_nonnegative(vec![true; 3])
        .unwrap();
        assert_eq!(lp_feasible(&s, &tol()).unwrap(), lp_feasible(&s, &tol()).unwrap());
    }

    #[test]
    fn badly_scaled_rows() {
        let s = system(&[(&[1e8, 0.0], Relation::Le, 1e8), (&[-1e-6, 0.0], Relation::Le, -5e-7)], 2);
        let x = lp_feasible(&s, &tol()).unwrap().witness.unwrap();
        assert!((0.5 - 1e-9..=1.0 + 1e-9).contains(&x[0]));
    }
}
