//! Acceptance criteria. Each test writes one `PASS`/`FAIL` line to stdout
//! (bypassing the test harness capture) and then asserts.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use regrad::bench::{
    generate, random_inverse_nonnegative, random_totally_positive, run_experiment, BenchMethod,
    ExperimentConfig, Family, GeneratorSpec,
};
use regrad::bounds::{compute_bounds, perron_lower};
use regrad::exact::radius_full_search;
use regrad::finiteness::{infinite_radius_witness, is_radius_infinite, max_nonzeros_for_infinite};
use regrad::linalg::extreme_singular_values;
use regrad::matrix::{RadiusMatrix, SquareMatrix};
use regrad::orthant::radius_orthant_search;
use regrad::radius::{RadiusValue, Tolerances};
use regrad::special::{radius_inverse_nonnegative, radius_totally_positive};
use regrad::tridiagonal::{tridiag_is_regular, tridiag_radius, TridiagonalMatrix, TridiagonalRadius};

fn tol() -> Tolerances {
    Tolerances::default()
}

fn report(criterion: u32, ok: bool, elapsed: Duration, detail: &str) {
    let status = if ok { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "acceptance {criterion:>2}: {status} ({:.2} s) {detail}", elapsed.as_secs_f64());
}

fn finite(v: RadiusValue) -> f64 {
    v.finite().expect("finite radius")
}

fn full(a: &SquareMatrix, d: &RadiusMatrix) -> RadiusValue {
    radius_full_search(a, d, &tol()).unwrap().value
}

/// `|x - y| <= tol * max(1, |y|)`.
fn close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * y.abs().max(1.0)
}

fn random_delta(rng: &mut impl Rng, n: usize) -> RadiusMatrix {
    RadiusMatrix::new(n, (0..n * n).map(|_| rng.random_range(0.0..1.0)).collect()).unwrap()
}

fn pattern(n: usize, bits: u64) -> RadiusMatrix {
    RadiusMatrix::new(n, (0..n * n).map(|k| ((bits >> k) & 1) as f64).collect()).unwrap()
}

fn int_matrix(rows: &[Vec<i64>]) -> SquareMatrix {
    SquareMatrix::from_rows(&rows.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect::<Vec<_>>())
        .unwrap()
}

#[test]
fn criterion_01_two_by_two_value() {
    let start = Instant::now();
    let a = SquareMatrix::identity(2);
    let d = RadiusMatrix::from_rows(&[vec![1.0, 2.0], vec![1.0, 1.0]]).unwrap();
    let expected = 2f64.sqrt() - 1.0;
    let fs = finite(full(&a, &d));
    let os = finite(radius_orthant_search(&a, &d, &tol()).unwrap().result.value);
    let elapsed = start.elapsed();
    let ok = (fs - expected).abs() <= 1e-8 && (os - expected).abs() <= 1e-8 && elapsed < Duration::from_secs(1);
    report(1, ok, elapsed, &format!("full {fs:.12}, orthant {os:.12}, expected {expected:.12}"));
    assert!(ok);
}

#[test]
fn criterion_02_example_with_infinite_radius() {
    let start = Instant::now();
    let a = SquareMatrix::from_rows(&[vec![1.0, 1.0, 1.0], vec![1.0, 1.0, 2.0], vec![1.0, 2.0, 3.0]]).unwrap();
    let mut w = vec![0.0; 9];
    w[8] = 1.0;
    let d = RadiusMatrix::new(3, w).unwrap();
    let procedure = is_radius_infinite(&a, &d, &tol()).unwrap().infinite;
    let fs = full(&a, &d);
    let elapsed = start.elapsed();
    let ok = procedure && fs == RadiusValue::Infinite && elapsed < Duration::from_secs(1);
    report(2, ok, elapsed, &format!("procedure infinite = {procedure}, full search {fs:?}"));
    assert!(ok);
}

#[test]
fn criterion_03_orthant_search_matches_full_search() {
    let start = Instant::now();
    let cfg = ExperimentConfig {
        sizes: (3..=7).collect(),
        instances_per_size: 10,
        families: Family::ALL.to_vec(),
        methods: [BenchMethod::FullSearch, BenchMethod::OrthantSearch].into(),
        ..ExperimentConfig::default()
    };
    let out = run_experiment(&cfg).unwrap();
    let mut worst = 0.0f64;
    let mut bad = Vec::new();
    for row in &out.rows {
        match (row.r_fs, row.r_os) {
            (Some(RadiusValue::Infinite), Some(RadiusValue::Infinite)) => {}
            _ => match row.delta_r {
                Some(d) if d.abs() <= 1e-6 => worst = worst.max(d.abs()),
                _ => bad.push(format!("{} n={} #{}", row.family, row.n, row.instance)),
            },
        }
    }
    let elapsed = start.elapsed();
    let ok = out.rows.len() == 200 && bad.is_empty() && elapsed < Duration::from_secs(600);
    report(3, ok, elapsed, &format!("{} rows, max |delta_r| = {worst:.2e}, failures {bad:?}", out.rows.len()));
    assert!(ok);
}

#[test]
fn criterion_04_inverse_nonnegative_visits_one_orthant() {
    let start = Instant::now();
    let cfg = ExperimentConfig {
        sizes: (3..=10).collect(),
        instances_per_size: 10,
        families: vec![Family::InverseNonnegative],
        methods: [BenchMethod::OrthantSearch].into(),
        ..ExperimentConfig::default()
    };
    let out = run_experiment(&cfg).unwrap();
    let mut bad = Vec::new();
    for row in &out.rows {
        if row.visited_orthants != Some(1) {
            bad.push(format!("n={} #{}: {:?}", row.n, row.instance, row.visited_orthants));
        }
    }
    let ok = out.rows.len() == 80 && bad.is_empty();
    report(4, ok, start.elapsed(), &format!("{} of {} instances visit more than one orthant {bad:?}", bad.len(), out.rows.len()));
    assert!(ok);
}

#[test]
fn criterion_05_closed_forms_match_full_search() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst_tp = 0.0f64;
    let mut worst_in = 0.0f64;
    let mut ok = true;
    for k in 0..50 {
        let n = 1 + k % 5;
        let a = random_totally_positive(&mut rng, n);
        let d = random_delta(&mut rng, n);
        let cf = finite(radius_totally_positive(&a, &d, &tol()).unwrap().value);
        let fs = finite(full(&a, &d));
        ok &= close(cf, fs, 1e-7);
        worst_tp = worst_tp.max((cf - fs).abs() / fs.max(1.0));

        let b = SquareMatrix::from_dmatrix(random_inverse_nonnegative(&mut rng, n).unwrap()).unwrap();
        let d = random_delta(&mut rng, n);
        let cf = finite(radius_inverse_nonnegative(&b, &d, &tol()).unwrap().value);
        let fs = finite(full(&b, &d));
        ok &= close(cf, fs, 1e-7);
        worst_in = worst_in.max((cf - fs).abs() / fs.max(1.0));
    }
    report(5, ok, start.elapsed(), &format!("max error: totally positive {worst_tp:.2e}, inverse nonnegative {worst_in:.2e}"));
    assert!(ok);
}

fn random_tridiagonal(rng: &mut impl Rng, n: usize) -> (TridiagonalMatrix, TridiagonalRadius) {
    let mut off = || {
        let m = rng.random_range(0.2..2.0);
        if rng.random_bool(0.5) {
            m
        } else {
            -m
        }
    };
    let b: Vec<f64> = (1..n).map(|_| off()).collect();
    let c: Vec<f64> = (1..n).map(|_| off()).collect();
    let a: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
    let mut w = |len| (0..len).map(|_| rng.random_range(0.0..1.0)).collect::<Vec<f64>>();
    let d = TridiagonalRadius::new(w(n), w(n - 1), w(n - 1)).unwrap();
    (TridiagonalMatrix::new(a, b, c).unwrap(), d)
}

#[test]
fn criterion_06_tridiagonal_radius_and_regularity() {
    let start = Instant::now();
    let tol = tol();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    let mut disagreements = 0;
    let mut ok = true;
    for k in 0..100 {
        let n = 2 + k % 5;
        let (t, d) = random_tridiagonal(&mut rng, n);
        let fs = finite(full(&t.to_dense(), &d.to_dense()));
        let tr = finite(tridiag_radius(&t, &d, tol.eps_bisect, &tol).unwrap().value);
        ok &= close(tr, fs, 1e-7);
        worst = worst.max((tr - fs).abs() / fs.max(1.0));
        for g in 0..20 {
            let delta = fs * (g as f64 + 0.5) / 10.0;
            let oracle = delta < fs;
            if tridiag_is_regular(&t, &d, delta).unwrap() != oracle {
                disagreements += 1;
            }
        }
    }
    ok &= disagreements == 0;
    report(6, ok, start.elapsed(), &format!("max radius error {worst:.2e}, grid disagreements {disagreements} of 2000"));
    assert!(ok);
}

#[test]
fn criterion_07_bounds_sandwich() {
    let start = Instant::now();
    let mut violations = Vec::new();
    let mut worst_eq = 0.0f64;
    let mut inverse_nonnegative = 0;
    for k in 0..100u32 {
        let family = Family::ALL[k as usize % 4];
        let n = 3 + (k as usize / 4) % 4;
        let (a, d) = generate(&GeneratorSpec::new(family, n, 7).with_instance(k)).unwrap();
        let r = finite(full(&a, &d));
        let set = compute_bounds(&a, &d, &tol()).unwrap();
        for b in &set.lower {
            if b.value.as_f64() > r + 1e-7 {
                violations.push(format!("#{k} lower {} = {:?} > {r}", b.name, b.value));
            }
        }
        for b in &set.upper {
            if b.value.as_f64() < r - 1e-7 {
                violations.push(format!("#{k} upper {} = {:?} < {r}", b.name, b.value));
            }
        }
        if family == Family::InverseNonnegative {
            inverse_nonnegative += 1;
            let lower = finite(perron_lower(&a, &d, &tol()).unwrap());
            worst_eq = worst_eq.max((lower - r).abs());
        }
    }
    let ok = violations.is_empty() && worst_eq <= 1e-7;
    report(
        7,
        ok,
        start.elapsed(),
        &format!(
            "violations {violations:?}; Perron bound attained on {inverse_nonnegative} inverse-nonnegative instances, max gap {worst_eq:.2e}"
        ),
    );
    assert!(ok);
}

fn det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i64>> = m[1..].iter().map(|r| [&r[..j], &r[j + 1..]].concat()).collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * det(&minor)
        })
        .sum()
}

/// `det(A + X)` with `X` supported on the pattern is multilinear in the
/// entries of `X`. The coefficient of the monomial over a partial matching
/// `S` is, up to sign, the minor of `A` with the rows and columns of `S`
/// removed. The radius is infinite iff every such coefficient vanishes.
fn brute_force_infinite(a: &[Vec<i64>], support: &[(usize, usize)]) -> bool {
    fn extend(a: &[Vec<i64>], support: &[(usize, usize)], from: usize, rows: &mut Vec<usize>, cols: &mut Vec<usize>) -> bool {
        for k in from..support.len() {
            let (i, j) = support[k];
            if rows.contains(&i) || cols.contains(&j) {
                continue;
            }
            rows.push(i);
            cols.push(j);
            let keep_r: Vec<usize> = (0..a.len()).filter(|r| !rows.contains(r)).collect();
            let keep_c: Vec<usize> = (0..a.len()).filter(|c| !cols.contains(c)).collect();
            let minor: Vec<Vec<i64>> = keep_r.iter().map(|&r| keep_c.iter().map(|&c| a[r][c]).collect()).collect();
            let vanishes = det(&minor) == 0 && extend(a, support, k + 1, rows, cols);
            rows.pop();
            cols.pop();
            if !vanishes {
                return false;
            }
        }
        true
    }
    extend(a, support, 0, &mut Vec::new(), &mut Vec::new())
}

fn random_int_matrix(rng: &mut impl Rng, n: usize) -> Vec<Vec<i64>> {
    loop {
        let m: Vec<Vec<i64>> = match rng.random_range(0..3) {
            // Unit upper triangular: many vanishing minors.
            0 => (0..n)
                .map(|i| (0..n).map(|j| if i == j { 1 } else if j > i { rng.random_range(-2..=2) } else { 0 }).collect())
                .collect(),
            1 => (0..n).map(|_| (0..n).map(|_| rng.random_range(0..=1)).collect()).collect(),
            _ => (0..n).map(|_| (0..n).map(|_| rng.random_range(-3..=3)).collect()).collect(),
        };
        if det(&m) != 0 {
            return m;
        }
    }
}

#[test]
fn criterion_08_finiteness_against_brute_force() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut centres = vec![
        vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
        vec![vec![1, 1, 1], vec![1, 1, 2], vec![1, 2, 3]],
        vec![vec![1, 2, 0], vec![0, 1, 3], vec![0, 0, 1]],
    ];
    centres.extend((0..3).map(|_| random_int_matrix(&mut rng, 3)));
    let mut checked = 0;
    let mut infinite = 0;
    let mut mismatches = Vec::new();
    let mut run = |a: &[Vec<i64>], bits: u64, n: usize| {
        let d = pattern(n, bits);
        let support: Vec<(usize, usize)> =
            (0..n * n).filter(|k| (bits >> k) & 1 == 1).map(|k| (k / n, k % n)).collect();
        let expected = brute_force_infinite(a, &support);
        let got = is_radius_infinite(&int_matrix(a), &d, &tol()).unwrap().infinite;
        checked += 1;
        infinite += expected as usize;
        if got != expected {
            mismatches.push(format!("A={a:?} pattern={bits:#x}"));
        }
    };
    for a in &centres {
        for bits in 0..1u64 << 9 {
            run(a, bits, 3);
        }
    }
    for _ in 0..500 {
        let a = random_int_matrix(&mut rng, 4);
        run(&a, rng.random_range(0..1u64 << 16), 4);
    }
    let ok = mismatches.is_empty();
    report(8, ok, start.elapsed(), &format!("{checked} cases ({infinite} infinite), mismatches {mismatches:?}"));
    assert!(ok);
}

#[test]
fn criterion_09_scaling_law() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    for k in 0..20u32 {
        let n = 2 + k as usize % 4;
        let (a, d) = generate(&GeneratorSpec::new(Family::ZeroCentered, n, 9).with_instance(k)).unwrap();
        let alpha = rng.random_range(0.1..4.0) * if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        let beta = rng.random_range(0.1..4.0);
        let r = finite(full(&a, &d));
        let scaled = finite(full(&a.scaled(alpha), &d.scaled(beta).unwrap()));
        let expected = alpha.abs() / beta * r;
        worst = worst.max((scaled - expected).abs() / expected);
    }
    let ok = worst <= 1e-7;
    report(9, ok, start.elapsed(), &format!("max relative error {worst:.2e}"));
    assert!(ok);
}

#[test]
fn criterion_10_nonzero_count_threshold() {
    let start = Instant::now();
    let (a, d) = infinite_radius_witness(5);
    let nonzeros = d.nonzeros();
    let witness_infinite = is_radius_infinite(&a, &d, &tol()).unwrap().infinite && full(&a, &d) == RadiusValue::Infinite;
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut finite_count = 0;
    let trials = 200u32;
    for k in 0..trials {
        let count = rng.random_range(max_nonzeros_for_infinite(5) + 1..=25);
        let mut w = vec![0.0; 25];
        for p in sample(&mut rng, 25, count) {
            w[p] = 1.0;
        }
        let pattern = RadiusMatrix::new(5, w).unwrap();
        let centre = if k % 2 == 0 {
            SquareMatrix::identity(5)
        } else {
            let (c, _) = generate(&GeneratorSpec::new(Family::ZeroCentered, 5, 10).with_instance(k)).unwrap();
            let (smin, smax) = extreme_singular_values(c.as_dmatrix()).unwrap();
            assert!(smin > 1e-8 * smax);
            c
        };
        let by_procedure = !is_radius_infinite(&centre, &pattern, &tol()).unwrap().infinite;
        let by_search = full(&centre, &pattern).is_finite();
        finite_count += (by_procedure && by_search) as u32;
    }
    let ok = nonzeros == 10 && witness_infinite && finite_count == trials;
    report(
        10,
        ok,
        start.elapsed(),
        &format!("witness has {nonzeros} nonzeros, infinite = {witness_infinite}; {finite_count} of {trials} dense patterns finite"),
    );
    assert!(ok);
}

#[test]
fn operation_counts_grow_slower_than_full_search() {
    let start = Instant::now();
    let cfg = ExperimentConfig {
        sizes: (3..=12).collect(),
        instances_per_size: 3,
        families: vec![Family::ZeroCentered, Family::InverseNonnegative],
        methods: [BenchMethod::OrthantSearch].into(),
        ..ExperimentConfig::default()
    };
    let out = run_experiment(&cfg).unwrap();
    let mean_calls = |n: usize| {
        let calls: Vec<f64> = out.rows.iter().filter(|r| r.n == n).filter_map(|r| r.lp_calls.map(|c| c as f64)).collect();
        calls.iter().sum::<f64>() / calls.len() as f64
    };
    let pairs = |n: usize| 2f64.powi(2 * n as i32 - 1);
    let mut trend = String::new();
    for n in [3, 6, 9, 12] {
        trend.push_str(&format!(" n={n}: lp_calls {:.0} vs pairs {:.0};", mean_calls(n), pairs(n)));
    }
    let ok = mean_calls(12) / mean_calls(3) < pairs(12) / pairs(3) && mean_calls(12) < pairs(12);
    let mut stdout = std::io::stdout().lock();
    let status = if ok { "PASS" } else { "FAIL" };
    let _ = writeln!(stdout, "operation counts: {status} ({:.2} s){trend}", start.elapsed().as_secs_f64());
    assert!(ok);
}
