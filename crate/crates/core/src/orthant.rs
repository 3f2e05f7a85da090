//! Radius by traversing orthants of the solution set of `A_delta x = Ae`.
//!
//! For an orthant `s`, `delta_s` is the least `delta` at which the solution
//! set meets the orthant and `delta_e` the least `delta` at which it is
//! unbounded there. Both are found by bisection on LP feasibility in the
//! variables `y = D_s x >= 0`. The radius is `min_s delta_e`. Orthants are
//! visited best-first by `delta_s`; below the radius the solution set is
//! connected, so every orthant it meets is reached through neighbours with
//! no larger `delta_s`, and the search may stop once the best `delta_e` does
//! not exceed the smallest unexplored key.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap};

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::bound_rohn_upper;
use crate::error::{Error, Result};
use crate::finiteness::is_radius_infinite;
use crate::linalg::invert;
use crate::lp::{lp_feasible, LinearSystem, Relation};
use crate::matrix::{check_same_dim, RadiusMatrix, SignVector, SquareMatrix};
use crate::radius::{Method, RadiusResult, RadiusValue, Tolerances};

/// Outcome of a bisection for the least feasible `delta` in `[0, upper]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bisection {
    Found(f64),
    /// Infeasible even at `upper`.
    AboveUpper,
}

impl Bisection {
    pub fn value(self) -> Option<f64> {
        match self {
            Bisection::Found(d) => Some(d),
            Bisection::AboveUpper => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VisitedOrthant {
    pub s: SignVector,
    /// `None` when unbounded only above the current bracket.
    pub delta_e: Option<f64>,
    /// Flipped index to the neighbour's `delta_s`, for neighbours probed
    /// from here and reachable below the bracket.
    pub neighbor_deltas: BTreeMap<usize, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrthantTrace {
    pub visited: Vec<VisitedOrthant>,
    pub lp_calls: usize,
    pub result: RadiusResult,
    /// Index into `visited` of the orthant whose `delta_e` is the result.
    pub terminal: usize,
}

/// Rows `(A D_s - delta Delta) y <= b` and `(-A D_s - delta Delta) y <= -b`
/// with `y >= 0`.
fn orthant_system(
    ads: &DMatrix<f64>,
    delta_matrix: &DMatrix<f64>,
    b: &[f64],
    delta: f64,
) -> LinearSystem {
    let n = ads.nrows();
    let mut a = DMatrix::zeros(2 * n, n);
    let mut rhs = vec![0.0; 2 * n];
    for i in 0..n {
        for j in 0..n {
            a[(i, j)] = ads[(i, j)] - delta * delta_matrix[(i, j)];
            a[(n + i, j)] = -ads[(i, j)] - delta * delta_matrix[(i, j)];
        }
        rhs[i] = b[i];
        rhs[n + i] = -b[i];
    }
    LinearSystem::new(a, vec![Relation::Le; 2 * n], rhs)
        .and_then(|s| s.with_nonnegative(vec![true; n]))
        .expect("well-formed orthant system")
}

fn signed_columns(a: &SquareMatrix, s: &SignVector) -> DMatrix<f64> {
    let mut m = a.as_dmatrix().clone();
    for j in 0..m.ncols() {
        if s.get(j) < 0.0 {
            m.column_mut(j).neg_mut();
        }
    }
    m
}

/// Least `delta` in `[0, upper]` at which `feasible(delta)` holds, assuming
/// monotonicity; also returns the LP call count.
fn bisect(
    upper: f64,
    eps: f64,
    feasible: impl Fn(f64) -> Result<bool>,
) -> Result<(Bisection, usize)> {
    let mut calls = 1;
    if !feasible(upper)? {
        return Ok((Bisection::AboveUpper, calls));
    }
    calls += 1;
    if feasible(0.0)? {
        return Ok((Bisection::Found(0.0), calls));
    }
    let (mut lo, mut hi) = (0.0, upper);
    while hi - lo > eps {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        calls += 1;
        if feasible(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((Bisection::Found(hi), calls))
}

fn check_upper(upper: f64) -> Result<()> {
    if upper > 0.0 && upper.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("upper bracket must be positive and finite, got {upper}")))
    }
}

fn unbounded_feasible(ads: &DMatrix<f64>, d: &DMatrix<f64>, delta: f64, tol: &Tolerances) -> Result<bool> {
    let n = ads.nrows();
    let mut sys = orthant_system(ads, d, &vec![0.0; n], delta);
    sys.push(&vec![1.0; n], Relation::Eq, 1.0)?;
    Ok(lp_feasible(&sys, tol)?.feasible)
}

fn intersect_feasible(
    ads: &DMatrix<f64>,
    d: &DMatrix<f64>,
    b: &[f64],
    delta: f64,
    tol: &Tolerances,
) -> Result<bool> {
    Ok(lp_feasible(&orthant_system(ads, d, b, delta), tol)?.feasible)
}

fn unbounded_counted(
    a: &SquareMatrix,
    delta: &RadiusMatrix,
    s: &SignVector,
    upper: f64,
    tol: &Tolerances,
) -> Result<(Bisection, usize)> {
    let ads = signed_columns(a, s);
    bisect(upper, tol.eps_bisect, |t| unbounded_feasible(&ads, delta.as_dmatrix(), t, tol))
}

fn intersect_counted(
    a: &SquareMatrix,
    b: &[f64],
    delta: &RadiusMatrix,
    s: &SignVector,
    upper: f64,
    tol: &Tolerances,
) -> Result<(Bisection, usize)> {
    let ads = signed_columns(a, s);
    bisect(upper, tol.eps_bisect, |t| intersect_feasible(&ads, delta.as_dmatrix(), b, t, tol))
}

fn check_orthant(a: &SquareMatrix, delta: &RadiusMatrix, s: &SignVector) -> Result<()> {
    check_same_dim(a, delta)?;
    if s.n() != a.n() {
        return Err(Error::DimensionMismatch { expected: a.n(), found: s.n() });
    }
    Ok(())
}

/// Least `delta <= upper` at which the solution set of `A_delta x = b` is
/// unbounded in orthant `s`.
pub fn delta_unbounded(
    a: &SquareMatrix,
    delta: &RadiusMatrix,
    s: &SignVector,
    upper: f64,
    tol: &Tolerances,
) -> Result<Bisection> {
    check_orthant(a, delta, s)?;
    check_upper(upper)?;
    Ok(unbounded_counted(a, delta, s, upper, tol)?.0)
}

/// Least `delta <= upper` at which the solution set of `A_delta x = b` meets
/// orthant `s`.
pub fn delta_intersect(
    a: &SquareMatrix,
    b: &[f64],
    delta: &RadiusMatrix,
    s: &SignVector,
    upper: f64,
    tol: &Tolerances,
) -> Result<Bisection> {
    check_orthant(a, delta, s)?;
    check_upper(upper)?;
    if b.len() != a.n() {
        return Err(Error::DimensionMismatch { expected: a.n(), found: b.len() });
    }
    Ok(intersect_counted(a, b, delta, s, upper, tol)?.0)
}

#[derive(Debug, Clone, PartialEq)]
struct FrontierEntry {
    key: f64,
    s: SignVector,
}

impl Eq for FrontierEntry {}

impl Ord for FrontierEntry {
    // Reversed so that `BinaryHeap` pops the smallest key, then the
    // lexicographically smallest sign vector.
    fn cmp(&self, other: &Self) -> Ordering {
        other.key.total_cmp(&self.key).then_with(|| other.s.cmp(&self.s))
    }
}

impl PartialOrd for FrontierEntry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

enum Traversal {
    Done(OrthantTrace),
    Exhausted { lp_calls: usize },
}

fn traverse(a: &SquareMatrix, delta: &RadiusMatrix, upper: f64, tol: &Tolerances) -> Result<Traversal> {
    let n = a.n();
    let b: Vec<f64> = (a.as_dmatrix() * DMatrix::from_element(n, 1, 1.0)).iter().copied().collect();
    let slack = 2.0 * tol.eps_bisect;
    let mut frontier = BinaryHeap::new();
    let mut queued: BTreeSet<SignVector> = BTreeSet::new();
    let start = SignVector::all_plus(n);
    queued.insert(start.clone());
    frontier.push(FrontierEntry { key: 0.0, s: start });
    let mut visited: Vec<VisitedOrthant> = Vec::new();
    let mut seen: BTreeSet<SignVector> = BTreeSet::new();
    let mut best: Option<(f64, usize)> = None;
    let mut lp_calls = 0;
    while let Some(entry) = frontier.pop() {
        if let Some((best_e, _)) = best {
            if best_e <= entry.key + slack {
                frontier.push(entry);
                break;
            }
        }
        let s = entry.s;
        seen.insert(s.clone());
        let cap = best.map_or(upper, |(e, _)| e.min(upper));
        let (de, calls) = unbounded_counted(a, delta, &s, cap, tol)?;
        lp_calls += calls;
        let delta_e = de.value();
        let index = visited.len();
        if let Some(e) = delta_e {
            if best.is_none_or(|(b, _)| e < b) {
                best = Some((e, index));
            }
        }
        let cap = best.map_or(upper, |(e, _)| e.min(upper));
        let candidates: Vec<usize> = (0..n)
            .filter(|&k| {
                let t = s.flipped(k);
                !seen.contains(&t) && !queued.contains(&t)
            })
            .collect();
        let probes: Vec<Result<(usize, Bisection, usize)>> = candidates
            .par_iter()
            .map(|&k| {
                let (r, c) = intersect_counted(a, &b, delta, &s.flipped(k), cap, tol)?;
                Ok((k, r, c))
            })
            .collect();
        let mut neighbor_deltas = BTreeMap::new();
        for probe in probes {
            let (k, r, c) = probe?;
            lp_calls += c;
            if let Bisection::Found(ds) = r {
                neighbor_deltas.insert(k, ds);
                if best.is_none_or(|(e, _)| ds < e) {
                    let t = s.flipped(k);
                    queued.insert(t.clone());
                    frontier.push(FrontierEntry { key: ds, s: t });
                }
            }
        }
        visited.push(VisitedOrthant { s, delta_e, neighbor_deltas });
    }
    let Some((value, terminal)) = best else {
        return Ok(Traversal::Exhausted { lp_calls });
    };
    let result = RadiusResult::new(RadiusValue::Finite(value), Method::OrthantSearch, slack)
        .with_diagnostic("visited_orthants", visited.len() as f64)
        .with_diagnostic("lp_calls", lp_calls as f64)
        .with_diagnostic("upper_bracket", upper);
    Ok(Traversal::Done(OrthantTrace { visited, lp_calls, result, terminal }))
}

const MAX_BRACKET_GROWTH: usize = 60;

/// Radius by best-first orthant traversal.
///
/// The bracket starts from the Rohn bound (or 1 when that is infinite) and
/// doubles whenever no orthant becomes unbounded below it.
pub fn radius_orthant_search(a: &SquareMatrix, delta: &RadiusMatrix, tol: &Tolerances) -> Result<OrthantTrace> {
    check_same_dim(a, delta)?;
    tol.validate()?;
    invert(a, tol)?;
    if is_radius_infinite(a, delta, tol)?.infinite {
        return Err(Error::InfiniteRadius);
    }
    let mut upper = match bound_rohn_upper(a, delta, tol)? {
        RadiusValue::Finite(u) => u * (1.0 + 1e-6),
        RadiusValue::Infinite => 1.0,
    };
    let mut spent = 0;
    for _ in 0..MAX_BRACKET_GROWTH {
        match traverse(a, delta, upper, tol)? {
            Traversal::Done(mut trace) => {
                trace.lp_calls += spent;
                trace.result = trace
                    .result
                    .with_diagnostic("lp_calls", trace.lp_calls as f64);
                return Ok(trace);
            }
            Traversal::Exhausted { lp_calls } => {
                spent += lp_calls;
                upper *= 2.0;
            }
        }
    }
    Err(Error::FrontierExhausted { upper })
}
