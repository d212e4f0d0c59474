//! Acceptance suite. Each `criterion_*` test prints one PASS/FAIL line with
//! its detail; run with `--nocapture` to see the lines of passing tests too.

use std::collections::HashMap;
use std::sync::OnceLock;

use diagopt::bench::{
    self, is_documented_miss, published_averages, run_table, table_rows, Method, TableId, TableReport, METHODS,
};
use diagopt::engine::{solve_with_observer, IterationEvent};
use diagopt::geometry::VertexRef;
use diagopt::problems::get_problem;
use diagopt::{DiagonalBox, Error, Estimator, SolverConfig, Strategy};
use proptest::prelude::*;
use proptest::strategy::Strategy as _;
use rayon::prelude::*;

/// Each cell's count must lie in `[published / COUNT_FACTOR, published * COUNT_FACTOR]`.
const COUNT_FACTOR: f64 = 2.0;
/// Upper bound on the local/global count ratio at the finest Table 5 tolerance.
const MAX_RATIO: f64 = 0.5;
/// Located means within `LOCATION_FACTOR * eps * |b - a|` of a reference minimizer.
const LOCATION_FACTOR: f64 = 2.0;
/// Bounds on the diagonal parameter of every placed point.
const PARAM_RANGE: std::ops::RangeInclusive<f64> = 0.125..=0.875;
const TILING_CASES: u32 = 1000;

fn report(table: TableId) -> &'static TableReport {
    static REPORTS: OnceLock<HashMap<TableId, TableReport>> = OnceLock::new();
    let all = REPORTS.get_or_init(|| {
        TableId::ALL
            .par_iter()
            .map(|&t| (t, run_table(t).expect("table runs")))
            .collect()
    });
    &all[&table]
}

fn outcome(name: &str, failures: &[String], detail: &str) {
    if failures.is_empty() {
        println!("PASS  {name}: {detail}");
    } else {
        println!("FAIL  {name}: {} problem(s)", failures.len());
        for f in failures {
            println!("      - {f}");
        }
        panic!("{name} failed: {}", failures.join("; "));
    }
}

fn cell_failures(rep: &TableReport) -> Vec<String> {
    let mut out = Vec::new();
    for row in &rep.rows {
        let published = row.spec.published.expect("published counts");
        for (rec, &p) in row.records.iter().zip(&published) {
            let ratio = rec.evaluations as f64 / p as f64;
            if !(1.0 / COUNT_FACTOR..=COUNT_FACTOR).contains(&ratio) {
                out.push(format!(
                    "problem {} {} eps={}: {} evaluations vs published {p}",
                    rec.problem_id, rec.method, rec.eps, rec.evaluations
                ));
            }
        }
    }
    out
}

fn ordering(values: &[f64; 4]) -> Vec<Method> {
    let mut idx: Vec<usize> = (0..4).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    idx.into_iter().map(|i| METHODS[i]).collect()
}

fn ordering_failure(rep: &TableReport) -> Option<String> {
    let expected = ordering(&published_averages(rep.table).unwrap());
    let got = ordering(&rep.averages);
    let show = |v: &[Method]| v.iter().map(|m| m.label()).collect::<Vec<_>>().join(" < ");
    (got != expected).then(|| format!("average ordering {} differs from published {}", show(&got), show(&expected)))
}

fn check_table(name: &str, table: TableId, extra: impl Fn(&TableReport) -> Vec<String>) {
    let rep = report(table);
    let mut failures = cell_failures(rep);
    failures.extend(ordering_failure(rep));
    failures.extend(extra(rep));
    let averages: Vec<String> = METHODS
        .iter()
        .zip(&rep.averages)
        .map(|(m, a)| format!("{m} {a:.2}"))
        .collect();
    outcome(
        name,
        &failures,
        &format!("{} cells within x/÷{COUNT_FACTOR}; averages {}", rep.rows.len() * 4, averages.join(", ")),
    );
}

#[test]
fn criterion_1_table_2_reproduction() {
    check_table("criterion 1 (table 2)", TableId::T2, |_| Vec::new());
}

#[test]
fn criterion_2_table_3_reproduction() {
    check_table("criterion 2 (table 3)", TableId::T3, |rep| {
        rep.rows
            .iter()
            .filter(|row| row.spec.problem_id == 14)
            .flat_map(|row| &row.records)
            .filter(|rec| !rec.located)
            .map(|rec| format!("problem 14 {} not located (distance {:.4})", rec.method, rec.distance))
            .collect()
    });
}

#[test]
fn criterion_3_table_4_reproduction() {
    check_table("criterion 3 (table 4)", TableId::T4, |_| Vec::new());
}

#[test]
fn criterion_4_table_5_monotone_and_ratio() {
    let rep = report(TableId::T5);
    let mut failures = Vec::new();
    let mut ratios = Vec::new();
    for r in [1.1, 1.3] {
        let rows: Vec<_> = rep.rows.iter().filter(|row| row.spec.r == r).collect();
        for w in rows.windows(2) {
            assert!(w[1].spec.eps < w[0].spec.eps);
            for (coarse, fine) in w[0].records.iter().zip(&w[1].records) {
                if fine.evaluations < coarse.evaluations {
                    failures.push(format!(
                        "{} r={r}: {} evaluations at eps={} below {} at eps={}",
                        fine.method, fine.evaluations, fine.eps, coarse.evaluations, coarse.eps
                    ));
                }
            }
        }
        let finest = rows.last().unwrap();
        for strategy in [Strategy::Partition2n, Strategy::Bisection] {
            let count = |estimator| {
                finest
                    .records
                    .iter()
                    .find(|rec| rec.method == Method { estimator, strategy })
                    .unwrap()
                    .evaluations as f64
            };
            let ratio = count(Estimator::LocalTuning) / count(Estimator::GlobalEstimate);
            ratios.push(format!("{strategy} r={r} {ratio:.3}"));
            if ratio > MAX_RATIO {
                failures.push(format!("{strategy} r={r}: local/global ratio {ratio:.3} above {MAX_RATIO}"));
            }
        }
    }
    outcome(
        "criterion 4 (table 5)",
        &failures,
        &format!("counts non-decreasing in 1/eps; ratios {}", ratios.join(", ")),
    );
}

#[test]
fn criterion_5_optimum_location() {
    let mut failures = Vec::new();
    let mut checked = 0;
    for table in TableId::ALL {
        for rec in report(table).records() {
            if is_documented_miss(table, rec.problem_id, rec.method) {
                continue;
            }
            checked += 1;
            let p = get_problem(rec.problem_id, matches!(rec.problem_id, 15 | 16).then_some(rec.n)).unwrap();
            let tolerance = LOCATION_FACTOR * rec.eps * p.domain.diag_norm();
            let distance = p.distance_to_minimizer(&rec.best_point);
            if distance > tolerance {
                failures.push(format!(
                    "{table} problem {} {} r={}: best point {:?} (f = {:.4}) is {distance:.4} from the nearest minimizer, tolerance {tolerance:.4}",
                    rec.problem_id, rec.method, rec.r, rec.best_point, rec.best_value
                ));
            }
        }
    }
    outcome(
        "criterion 5 (location)",
        &failures,
        &format!("{checked} runs within {LOCATION_FACTOR} eps |b - a| of a reference minimizer"),
    );
}

fn boxed_point() -> impl proptest::strategy::Strategy<Value = (DiagonalBox, Vec<f64>)> {
    (2usize..=5).prop_flat_map(|n| {
        (
            prop::collection::vec((-100.0f64..100.0, 1e-3f64..50.0), n),
            prop::collection::vec(1e-3f64..(1.0 - 1e-3), n),
        )
            .prop_map(|(sides, fractions)| {
                let lower: Vec<f64> = sides.iter().map(|s| s.0).collect();
                let upper: Vec<f64> = sides.iter().map(|s| s.0 + s.1).collect();
                let x = (0..lower.len())
                    .map(|i| lower[i] + fractions[i] * (upper[i] - lower[i]))
                    .collect();
                (DiagonalBox::new(lower, upper).unwrap(), x)
            })
    })
}

fn tiling_failure(strategy: Strategy, parent: &DiagonalBox, x: &[f64]) -> Option<String> {
    let n = parent.dim();
    let sub = match strategy.subdivide(parent, x) {
        Ok(sub) => sub,
        Err(e) => return Some(format!("subdivide failed: {e}")),
    };
    if sub.children.len() != strategy.children_count(n) {
        return Some(format!("{} children", sub.children.len()));
    }
    if sub.new_vertices.len() != strategy.new_vertex_count(n) {
        return Some(format!("{} new vertices", sub.new_vertices.len()));
    }
    let total: f64 = sub.children.iter().map(|c| c.bx.volume()).sum();
    if (total - parent.volume()).abs() > 1e-10 * parent.volume() {
        return Some(format!("children volume {total} vs parent {}", parent.volume()));
    }
    let resolve = |r: VertexRef| match r {
        VertexRef::ParentLower => parent.lower(),
        VertexRef::ParentUpper => parent.upper(),
        VertexRef::New(i) => sub.new_vertices[i].as_slice(),
    };
    for (i, c) in sub.children.iter().enumerate() {
        if !parent.contains(c.bx.lower()) || !parent.contains(c.bx.upper()) {
            return Some(format!("child {i} leaves the parent"));
        }
        if resolve(c.lower_vertex) != c.bx.lower() || resolve(c.upper_vertex) != c.bx.upper() {
            return Some(format!("child {i} vertex references do not match its box"));
        }
        if sub.children[i + 1..].iter().any(|o| o.bx.overlaps(&c.bx)) {
            return Some(format!("child {i} overlaps a sibling"));
        }
    }
    None
}

#[test]
fn criterion_6a_partition_tiling() {
    let mut failures = Vec::new();
    for strategy in [Strategy::Bisection, Strategy::Partition2n] {
        let mut runner = proptest::test_runner::TestRunner::new(ProptestConfig {
            cases: TILING_CASES,
            failure_persistence: None,
            ..ProptestConfig::default()
        });
        let result = runner.run(&boxed_point(), |(bx, x)| match tiling_failure(strategy, &bx, &x) {
            None => Ok(()),
            Some(msg) => Err(TestCaseError::fail(msg)),
        });
        if let Err(e) = result {
            failures.push(format!("{strategy}: {e}"));
        }
    }
    outcome(
        "criterion 6a (tiling)",
        &failures,
        &format!("{TILING_CASES} random boxes per strategy, dimensions 2 to 5"),
    );
}

struct GridStats {
    runs: usize,
    iterations: usize,
    k_bound_errors: Vec<String>,
    placement_errors: Vec<String>,
    record_errors: Vec<String>,
    param_min: f64,
    param_max: f64,
}

/// Every cell of every table, run with an observer.
fn observed_grid() -> &'static GridStats {
    static STATS: OnceLock<GridStats> = OnceLock::new();
    STATS.get_or_init(|| {
        let cells: Vec<_> = TableId::ALL
            .iter()
            .flat_map(|&t| table_rows(t))
            .flat_map(|row| METHODS.iter().map(move |&m| (row.clone(), m)))
            .collect();
        let per_cell: Vec<_> = cells
            .par_iter()
            .map(|(row, method)| {
                let p = get_problem(row.problem_id, matches!(row.problem_id, 15 | 16).then_some(row.n)).unwrap();
                let config = SolverConfig {
                    r: row.r,
                    c: row.c,
                    eps: row.eps,
                    strategy: method.strategy,
                    estimator: method.estimator,
                    ..SolverConfig::default()
                };
                let label = format!("problem {} {method} r={} eps={}", row.problem_id, row.r, row.eps);
                let mut params = (f64::INFINITY, f64::NEG_INFINITY);
                let mut record = Vec::new();
                let mut z_prev = f64::INFINITY;
                let mut iterations = 0;
                let result = solve_with_observer(&p.domain, p.objective(), &config, |e: &IterationEvent<'_>| {
                    iterations += 1;
                    params = (params.0.min(e.diagonal_param), params.1.max(e.diagonal_param));
                    let expected = e.new_values.iter().copied().fold(z_prev.min(e.selected.f_a.min(e.selected.f_b)), f64::min);
                    if e.z_star > z_prev || (e.z_star > expected) {
                        record.push(format!("{label}: z* {} after {z_prev} at l={}", e.z_star, e.l));
                    }
                    z_prev = e.z_star;
                });
                let mut k_bound = Vec::new();
                let mut placement = Vec::new();
                match result {
                    Ok(res) => {
                        let min_trial = res.trials.iter().map(|t| t.value).fold(f64::INFINITY, f64::min);
                        if res.best_value != min_trial {
                            record.push(format!("{label}: best {} but smallest trial {min_trial}", res.best_value));
                        }
                    }
                    Err(Error::Invariant(msg)) => k_bound.push(format!("{label}: {msg}")),
                    Err(e @ Error::PlacementOutside { .. }) => placement.push(format!("{label}: {e}")),
                    Err(e) => panic!("{label}: {e}"),
                }
                if !PARAM_RANGE.contains(&params.0) || !PARAM_RANGE.contains(&params.1) {
                    placement.push(format!("{label}: diagonal parameter range [{}, {}]", params.0, params.1));
                }
                (iterations, k_bound, placement, record, params)
            })
            .collect();

        let mut stats = GridStats {
            runs: per_cell.len(),
            iterations: 0,
            k_bound_errors: Vec::new(),
            placement_errors: Vec::new(),
            record_errors: Vec::new(),
            param_min: f64::INFINITY,
            param_max: f64::NEG_INFINITY,
        };
        for (iterations, k, pl, rec, params) in per_cell {
            stats.iterations += iterations;
            stats.k_bound_errors.extend(k);
            stats.placement_errors.extend(pl);
            stats.record_errors.extend(rec);
            stats.param_min = stats.param_min.min(params.0);
            stats.param_max = stats.param_max.max(params.1);
        }
        stats
    })
}

#[test]
fn criterion_6b_k_bound_never_fires() {
    let s = observed_grid();
    outcome(
        "criterion 6b (K bound)",
        &s.k_bound_errors,
        &format!("{} runs, {} iterations checked", s.runs, s.iterations),
    );
}

#[test]
fn criterion_6c_placement_interior() {
    let s = observed_grid();
    outcome(
        "criterion 6c (placement)",
        &s.placement_errors,
        &format!("diagonal parameter within [{:.4}, {:.4}] over {} iterations", s.param_min, s.param_max, s.iterations),
    );
}

#[test]
fn criterion_6d_table_2_reports_are_reproducible() {
    let first = report(TableId::T2);
    let second = run_table(TableId::T2).unwrap();
    let mut failures = Vec::new();
    if bench::to_csv(first) != bench::to_csv(&second) {
        failures.push("CSV reports differ".to_string());
    }
    let (v1, v2) = (bench::check_against_reference(first), bench::check_against_reference(&second));
    if bench::to_text(first, &v1) != bench::to_text(&second, &v2) {
        failures.push("text reports differ".to_string());
    }
    outcome("criterion 6d (determinism)", &failures, "two table 2 runs give byte-identical reports");
}

#[test]
fn criterion_6e_record_monotone() {
    let s = observed_grid();
    outcome(
        "criterion 6e (record)",
        &s.record_errors,
        &format!("z* non-increasing and equal to the smallest trial in {} runs", s.runs),
    );
}

#[test]
fn criterion_6f_constant_objective() {
    let mut failures = Vec::new();
    let mut runs = 0;
    for strategy in [Strategy::Bisection, Strategy::Partition2n] {
        for n in 2..=3 {
            for value in [-3.0, 0.0, 7.25] {
                let domain = DiagonalBox::cube(-2.0, 5.0, n).unwrap();
                let run = |estimator| {
                    let config = SolverConfig {
                        strategy,
                        estimator,
                        eps: 0.05,
                        ..SolverConfig::default()
                    };
                    diagopt::solve(&domain, |_: &[f64]| value, &config).unwrap()
                };
                let (local, global) = (run(Estimator::LocalTuning), run(Estimator::GlobalEstimate));
                runs += 1;
                if local.trials != global.trials {
                    failures.push(format!("{strategy} n={n} f={value}: trial sequences differ"));
                }
            }
        }
    }
    outcome(
        "criterion 6f (constant objective)",
        &failures,
        &format!("{runs} constant objectives, identical trial sequences"),
    );
}
