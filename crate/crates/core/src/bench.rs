//! Benchmark grids and their comparison with the published evaluation counts.
//!
//! Four tables are known:
//!
//! | table | problems             | r          | C   | eps                      |
//! |-------|----------------------|------------|-----|--------------------------|
//! | T2    | 1-16, n = 2          | 1.1        | 10  | 0.01                     |
//! | T3    | 1-16, n = 2          | 1.3        | 10  | 0.01                     |
//! | T4    | 15-20, n = 3         | 1.2        | 100 | 0.02                     |
//! | T5    | 7                    | 1.1, 1.3   | 10  | 0.01, 0.001, 0.0001      |
//!
//! Each row is run with the four methods in [`METHODS`] order.

use std::fmt::{self, Write as _};
use std::time::Instant;

use rayon::prelude::*;

use crate::engine::{Estimator, SolverConfig, Status};
use crate::error::{Error, Result};
use crate::geometry::Strategy;
use crate::problems::get_problem;

/// Per-cell tolerance on evaluation counts: within a factor of two either way.
pub const COUNT_FACTOR: f64 = 2.0;

/// Largest accepted local/global evaluation ratio at the finest accuracy of T5.
pub const T5_MAX_LOCAL_GLOBAL_RATIO: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Method {
    pub estimator: Estimator,
    pub strategy: Strategy,
}

impl Method {
    pub const fn new(estimator: Estimator, strategy: Strategy) -> Self {
        Self { estimator, strategy }
    }

    pub fn label(self) -> String {
        format!("{}+{}", self.estimator.name(), self.strategy.name())
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let (est, strat) = s
            .split_once('+')
            .ok_or_else(|| format!("method `{s}` must look like estimator+strategy"))?;
        Ok(Method::new(est.parse()?, strat.parse()?))
    }
}

/// Column order of every table.
pub const METHODS: [Method; 4] = [
    Method::new(Estimator::GlobalEstimate, Strategy::Partition2n),
    Method::new(Estimator::GlobalEstimate, Strategy::Bisection),
    Method::new(Estimator::LocalTuning, Strategy::Partition2n),
    Method::new(Estimator::LocalTuning, Strategy::Bisection),
];

const GLOBAL_P2N: usize = 0;
const GLOBAL_BIS: usize = 1;
const LOCAL_P2N: usize = 2;
const LOCAL_BIS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TableId {
    T2,
    T3,
    T4,
    T5,
}

impl TableId {
    pub const ALL: [TableId; 4] = [TableId::T2, TableId::T3, TableId::T4, TableId::T5];

    pub fn name(self) -> &'static str {
        match self {
            TableId::T2 => "T2",
            TableId::T3 => "T3",
            TableId::T4 => "T4",
            TableId::T5 => "T5",
        }
    }

    fn caption(self) -> &'static str {
        match self {
            TableId::T2 => "Two-dimensional problems, r = 1.1, C = 10, eps = 0.01",
            TableId::T3 => "Two-dimensional problems, r = 1.3, C = 10, eps = 0.01",
            TableId::T4 => "Three-dimensional problems, r = 1.2, C = 100, eps = 0.02",
            TableId::T5 => "Problem 7 by reliability r and accuracy eps, C = 10",
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for TableId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "T2" => Ok(TableId::T2),
            "T3" => Ok(TableId::T3),
            "T4" => Ok(TableId::T4),
            "T5" => Ok(TableId::T5),
            other => Err(format!("unknown table `{other}` (expected T2, T3, T4 or T5)")),
        }
    }
}

/// Published evaluation counts, in [`METHODS`] order.
const PUBLISHED_T2: [[u32; 4]; 16] = [
    [12412, 8950, 4742, 3508],
    [8037, 2670, 2947, 1354],
    [19427, 20392, 14832, 14244],
    [4687, 2762, 1332, 998],
    [4187, 2818, 807, 602],
    [20522, 17732, 14572, 10924],
    [6837, 4766, 5532, 3936],
    [4057, 3922, 2822, 3372],
    [16187, 16446, 10307, 7328],
    [6267, 4384, 1797, 1286],
    [312, 256, 272, 146],
    [292, 200, 167, 96],
    [1827, 2002, 282, 238],
    [1127, 96, 592, 186],
    [4857, 2736, 2237, 1336],
    [1627, 532, 492, 118],
];

const PUBLISHED_T3: [[u32; 4]; 16] = [
    [13987, 9874, 7012, 5620],
    [9862, 4774, 3357, 2072],
    [20057, 21608, 16802, 16754],
    [5812, 3728, 2332, 1190],
    [4817, 3180, 1402, 650],
    [21922, 22424, 17812, 12622],
    [7267, 7374, 6422, 5128],
    [5467, 4504, 3717, 3938],
    [16752, 17378, 10852, 8250],
    [8852, 6820, 3432, 1858],
    [417, 324, 362, 174],
    [347, 232, 177, 114],
    [2102, 2306, 307, 284],
    [1297, 800, 747, 360],
    [7167, 3880, 3137, 1740],
    [1852, 778, 612, 162],
];

const PUBLISHED_T4: [[u32; 4]; 6] = [
    [173513, 43780, 98412, 12060],
    [26938, 3732, 12625, 1032],
    [6879, 1810, 4825, 1020],
    [83475, 27760, 15862, 3470],
    [8556, 2040, 7568, 1358],
    [122436, 74254, 59646, 21756],
];

/// Rows ordered r = 1.1 then 1.3, each with eps = 0.01, 0.001, 0.0001.
const PUBLISHED_T5: [[u32; 4]; 6] = [
    [6837, 4766, 5532, 3936],
    [10742, 11664, 7012, 4662],
    [35697, 32218, 7367, 4694],
    [7267, 7374, 6422, 5128],
    [23712, 17322, 8962, 8270],
    [54397, 42584, 11862, 8582],
];

/// Published "Average" rows of T2 to T4.
pub fn published_averages(table: TableId) -> Option<[f64; 4]> {
    match table {
        TableId::T2 => Some([7041.36, 5666.50, 3983.25, 3104.50]),
        TableId::T3 => Some([7998.56, 6874.00, 4905.13, 3807.25]),
        TableId::T4 => Some([70299.50, 25562.67, 33156.33, 6782.67]),
        TableId::T5 => None,
    }
}

/// Coordinates of one table row; the four methods are run for each.
#[derive(Debug, Clone, PartialEq)]
pub struct RowSpec {
    pub problem_id: u32,
    pub n: usize,
    pub r: f64,
    pub c: f64,
    pub eps: f64,
    pub published: Option<[u32; 4]>,
}

pub fn table_rows(table: TableId) -> Vec<RowSpec> {
    let row = |problem_id, n, r, c, eps, published: [u32; 4]| RowSpec {
        problem_id,
        n,
        r,
        c,
        eps,
        published: Some(published),
    };
    match table {
        TableId::T2 | TableId::T3 => {
            let (r, published) = if table == TableId::T2 { (1.1, &PUBLISHED_T2) } else { (1.3, &PUBLISHED_T3) };
            (1..=16u32)
                .zip(published)
                .map(|(id, counts)| row(id, 2, r, 10.0, 0.01, *counts))
                .collect()
        }
        TableId::T4 => (15..=20u32)
            .zip(&PUBLISHED_T4)
            .map(|(id, counts)| row(id, 3, 1.2, 100.0, 0.02, *counts))
            .collect(),
        TableId::T5 => {
            let mut rows = Vec::new();
            let mut published = PUBLISHED_T5.iter();
            for r in [1.1, 1.3] {
                for eps in [0.01, 0.001, 0.0001] {
                    rows.push(row(7, 2, r, 10.0, eps, *published.next().unwrap()));
                }
            }
            rows
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub problem_id: u32,
    pub n: usize,
    pub method: Method,
    pub r: f64,
    pub c: f64,
    pub eps: f64,
    pub evaluations: usize,
    pub iterations: usize,
    pub best_value: f64,
    pub best_point: Vec<f64>,
    /// Distance from the best point to the nearest reference minimizer.
    pub distance: f64,
    /// Whether `distance <= 2 eps |b - a|`.
    pub located: bool,
    pub status: Status,
    /// Seconds; excluded from reports so that they stay reproducible.
    pub wall_time: f64,
}

impl RunRecord {
    /// Everything except the timing.
    pub fn same_outcome(&self, other: &RunRecord) -> bool {
        let mut a = self.clone();
        a.wall_time = other.wall_time;
        &a == other
    }
}

/// Fixed dimension problems take `n = None`; problems 15 and 16 need it.
fn dimension_arg(problem_id: u32, n: usize) -> Option<usize> {
    matches!(problem_id, 15 | 16).then_some(n)
}

/// Solve one cell of a table. A run that exhausts its budget is recorded, not raised.
pub fn run_cell(problem_id: u32, n: usize, method: Method, r: f64, c: f64, eps: f64) -> Result<RunRecord> {
    let problem = get_problem(problem_id, dimension_arg(problem_id, n))?;
    if problem.dimension != n {
        return Err(Error::DimensionMismatch {
            expected: problem.dimension,
            got: n,
        });
    }
    let config = SolverConfig {
        r,
        c,
        eps,
        strategy: method.strategy,
        estimator: method.estimator,
        ..SolverConfig::default()
    };
    let start = Instant::now();
    let result = problem.solve(&config)?;
    let wall_time = start.elapsed().as_secs_f64();

    let distance = problem.distance_to_minimizer(&result.best_point);
    let located = distance <= 2.0 * eps * problem.domain.diag_norm();
    debug_assert_eq!(result.evaluations, result.trials.len());
    Ok(RunRecord {
        problem_id,
        n,
        method,
        r,
        c,
        eps,
        evaluations: result.evaluations,
        iterations: result.iterations,
        best_value: result.best_value,
        best_point: result.best_point,
        distance,
        located,
        status: result.status,
        wall_time,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub spec: RowSpec,
    /// One record per method, in [`METHODS`] order.
    pub records: Vec<RunRecord>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableReport {
    pub table: TableId,
    pub rows: Vec<ReportRow>,
    /// Mean evaluation count per method over all rows.
    pub averages: [f64; 4],
}

impl TableReport {
    pub fn from_rows(table: TableId, rows: Vec<ReportRow>) -> Self {
        let averages = column_means(rows.iter().map(|row| {
            let mut counts = [0.0; 4];
            for (slot, rec) in counts.iter_mut().zip(&row.records) {
                *slot = rec.evaluations as f64;
            }
            counts
        }));
        Self { table, rows, averages }
    }

    pub fn records(&self) -> impl Iterator<Item = &RunRecord> {
        self.rows.iter().flat_map(|row| row.records.iter())
    }
}

fn column_means(rows: impl Iterator<Item = [f64; 4]>) -> [f64; 4] {
    let mut sums = [0.0; 4];
    let mut count = 0usize;
    for row in rows {
        for (s, v) in sums.iter_mut().zip(row) {
            *s += v;
        }
        count += 1;
    }
    sums.map(|s| if count == 0 { 0.0 } else { s / count as f64 })
}

/// Run every cell of `table`. Cells run in parallel; the report keeps table order.
pub fn run_table(table: TableId) -> Result<TableReport> {
    let specs = table_rows(table);
    let jobs: Vec<(usize, usize)> = (0..specs.len()).flat_map(|i| (0..4).map(move |j| (i, j))).collect();
    let results: Vec<RunRecord> = jobs
        .par_iter()
        .map(|&(i, j)| {
            let s = &specs[i];
            run_cell(s.problem_id, s.n, METHODS[j], s.r, s.c, s.eps)
        })
        .collect::<Result<_>>()?;

    let mut results = results.into_iter();
    let rows = specs
        .into_iter()
        .map(|spec| ReportRow {
            spec,
            records: results.by_ref().take(4).collect(),
        })
        .collect();
    Ok(TableReport::from_rows(table, rows))
}

/// True for the one run known to miss the global minimizer: T2, problem 14,
/// global estimate with bisection.
pub fn is_documented_miss(table: TableId, problem_id: u32, method: Method) -> bool {
    table == TableId::T2 && problem_id == 14 && method == METHODS[GLOBAL_BIS]
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    CellOutOfTolerance {
        problem_id: u32,
        method: Method,
        r: f64,
        eps: f64,
        evaluations: usize,
        published: u32,
    },
    AverageOrdering {
        expected: Vec<Method>,
        got: Vec<Method>,
    },
    NotMonotone {
        method: Method,
        r: f64,
        eps_coarse: f64,
        eps_fine: f64,
        coarse: usize,
        fine: usize,
    },
    LocalGlobalRatio {
        strategy: Strategy,
        r: f64,
        ratio: f64,
    },
    NotLocated {
        problem_id: u32,
        method: Method,
        r: f64,
        eps: f64,
        distance: f64,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::CellOutOfTolerance { problem_id, method, r, eps, evaluations, published } => write!(
                f,
                "problem {problem_id} {method} r={r} eps={eps}: {evaluations} evaluations, published {published}"
            ),
            Violation::AverageOrdering { expected, got } => {
                let join = |v: &[Method]| v.iter().map(|m| m.label()).collect::<Vec<_>>().join(" < ");
                write!(f, "average ordering {} differs from published {}", join(got), join(expected))
            }
            Violation::NotMonotone { method, r, eps_coarse, eps_fine, coarse, fine } => write!(
                f,
                "{method} r={r}: {fine} evaluations at eps={eps_fine} fewer than {coarse} at eps={eps_coarse}"
            ),
            Violation::LocalGlobalRatio { strategy, r, ratio } => {
                write!(f, "{strategy} r={r}: local/global ratio {ratio:.3} above {T5_MAX_LOCAL_GLOBAL_RATIO}")
            }
            Violation::NotLocated { problem_id, method, r, eps, distance } => write!(
                f,
                "problem {problem_id} {method} r={r} eps={eps}: best point {distance:.4} from nearest minimizer"
            ),
        }
    }
}

/// Outcome of comparing a report with the published tables.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Verdict {
    pub violations: Vec<Violation>,
    /// Cells where the local method needed more evaluations than the global one
    /// with the same strategy. Reported, never failing.
    pub warnings: Vec<String>,
}

impl Verdict {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn order_by(values: &[f64; 4]) -> Vec<Method> {
    let mut idx: Vec<usize> = (0..4).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    idx.into_iter().map(|i| METHODS[i]).collect()
}

pub fn check_against_reference(report: &TableReport) -> Verdict {
    let mut verdict = Verdict::default();

    for row in &report.rows {
        let s = &row.spec;
        for (j, rec) in row.records.iter().enumerate() {
            if let Some(published) = s.published.map(|p| p[j]) {
                let ratio = rec.evaluations as f64 / published as f64;
                if !(1.0 / COUNT_FACTOR..=COUNT_FACTOR).contains(&ratio) {
                    verdict.violations.push(Violation::CellOutOfTolerance {
                        problem_id: s.problem_id,
                        method: rec.method,
                        r: s.r,
                        eps: s.eps,
                        evaluations: rec.evaluations,
                        published,
                    });
                }
            }
            if !rec.located && !is_documented_miss(report.table, s.problem_id, rec.method) {
                verdict.violations.push(Violation::NotLocated {
                    problem_id: s.problem_id,
                    method: rec.method,
                    r: s.r,
                    eps: s.eps,
                    distance: rec.distance,
                });
            }
        }
        for (local, global) in [(LOCAL_P2N, GLOBAL_P2N), (LOCAL_BIS, GLOBAL_BIS)] {
            let (l, g) = (&row.records[local], &row.records[global]);
            if l.evaluations > g.evaluations {
                verdict.warnings.push(format!(
                    "problem {} r={} eps={}: {} used {} evaluations, {} used {}",
                    s.problem_id, s.r, s.eps, l.method, l.evaluations, g.method, g.evaluations
                ));
            }
        }
    }

    if let Some(published) = published_averages(report.table) {
        let expected = order_by(&published);
        let got = order_by(&report.averages);
        if expected != got {
            verdict.violations.push(Violation::AverageOrdering { expected, got });
        }
    }

    if report.table == TableId::T5 {
        check_accuracy_sweep(report, &mut verdict);
    }
    verdict
}

fn check_accuracy_sweep(report: &TableReport, verdict: &mut Verdict) {
    let mut rs: Vec<f64> = report.rows.iter().map(|row| row.spec.r).collect();
    rs.dedup();
    for r in rs {
        let mut rows: Vec<&ReportRow> = report.rows.iter().filter(|row| row.spec.r == r).collect();
        // coarse to fine
        rows.sort_by(|a, b| b.spec.eps.total_cmp(&a.spec.eps));
        for pair in rows.windows(2) {
            for j in 0..4 {
                let (coarse, fine) = (&pair[0].records[j], &pair[1].records[j]);
                if fine.evaluations < coarse.evaluations {
                    verdict.violations.push(Violation::NotMonotone {
                        method: METHODS[j],
                        r,
                        eps_coarse: pair[0].spec.eps,
                        eps_fine: pair[1].spec.eps,
                        coarse: coarse.evaluations,
                        fine: fine.evaluations,
                    });
                }
            }
        }
        if let Some(finest) = rows.last() {
            for (local, global) in [(LOCAL_P2N, GLOBAL_P2N), (LOCAL_BIS, GLOBAL_BIS)] {
                let ratio = finest.records[local].evaluations as f64 / finest.records[global].evaluations as f64;
                if ratio > T5_MAX_LOCAL_GLOBAL_RATIO {
                    verdict.violations.push(Violation::LocalGlobalRatio {
                        strategy: METHODS[local].strategy,
                        r,
                        ratio,
                    });
                }
            }
        }
    }
}

/// Header of the comma-separated report.
pub const CSV_HEADER: &str = "problem,method,r,C,eps,evaluations,located,best_value";

pub fn to_csv(report: &TableReport) -> String {
    let mut out = String::new();
    out.push_str(CSV_HEADER);
    out.push('\n');
    for rec in report.records() {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            rec.problem_id,
            rec.method,
            rec.r,
            rec.c,
            rec.eps,
            rec.evaluations,
            rec.located,
            rec.best_value
        );
    }
    out
}

/// One line of a comma-separated report read back from disk.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRow {
    pub problem: u32,
    pub method: Method,
    pub r: f64,
    pub c: f64,
    pub eps: f64,
    pub evaluations: usize,
    pub located: bool,
    pub best_value: f64,
}

pub fn parse_csv(text: &str) -> Result<Vec<CsvRow>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim_end() == CSV_HEADER => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected header `{CSV_HEADER}`"),
            })
        }
    }
    let mut rows = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line.trim_end();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: lineno, msg };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(err(format!("expected 8 fields, found {}", fields.len())));
        }
        let num = |i: usize| -> Result<f64> {
            let v: f64 = fields[i].parse().map_err(|e| err(format!("field {}: {e}", i + 1)))?;
            if v.is_nan() {
                return Err(err(format!("field {} is NaN", i + 1)));
            }
            Ok(v)
        };
        rows.push(CsvRow {
            problem: fields[0].parse().map_err(|e| err(format!("problem: {e}")))?,
            method: fields[1].parse().map_err(err)?,
            r: num(2)?,
            c: num(3)?,
            eps: num(4)?,
            evaluations: fields[5].parse().map_err(|e| err(format!("evaluations: {e}")))?,
            located: fields[6].parse().map_err(|e| err(format!("located: {e}")))?,
            best_value: num(7)?,
        });
    }
    Ok(rows)
}

/// Aligned text table in the published layout, with the published counts in
/// parentheses and the verdict at the bottom.
pub fn to_text(report: &TableReport, verdict: &Verdict) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Table {}: {}", report.table, report.table.caption());
    let _ = writeln!(out);
    let first = if report.table == TableId::T5 { "r     eps   " } else { "Problem     " };
    let _ = writeln!(
        out,
        "{first}| {:>21} | {:>21} | {:>21} | {:>21}",
        "Global, Partition 2^n", "Global, Bisection", "Local, Partition 2^n", "Local, Bisection"
    );
    let _ = writeln!(out, "{}", "-".repeat(12 + 4 * 24));
    for row in &report.rows {
        let label = if report.table == TableId::T5 {
            format!("{:<5} {:<6}", row.spec.r, row.spec.eps)
        } else {
            format!("{:<12}", row.spec.problem_id)
        };
        let cells: Vec<String> = row
            .records
            .iter()
            .enumerate()
            .map(|(j, rec)| {
                let mark = if rec.located { ' ' } else { '*' };
                match row.spec.published {
                    Some(p) => format!("{:>8}{mark} ({:>7})", rec.evaluations, p[j]),
                    None => format!("{:>8}{mark}", rec.evaluations),
                }
            })
            .collect();
        let _ = writeln!(out, "{label}| {:>21} | {:>21} | {:>21} | {:>21}", cells[0], cells[1], cells[2], cells[3]);
    }
    let _ = writeln!(out, "{}", "-".repeat(12 + 4 * 24));
    let avg: Vec<String> = match published_averages(report.table) {
        Some(p) => report
            .averages
            .iter()
            .zip(p)
            .map(|(a, p)| format!("{a:>9.2} ({p:>8.2})"))
            .collect(),
        None => report.averages.iter().map(|a| format!("{a:>9.2}")).collect(),
    };
    let _ = writeln!(out, "{:<12}| {:>21} | {:>21} | {:>21} | {:>21}", "Average", avg[0], avg[1], avg[2], avg[3]);
    let _ = writeln!(out);
    let _ = writeln!(out, "* = best point farther than 2 eps |b - a| from every reference minimizer");
    let _ = writeln!(out, "verdict: {}", if verdict.passed() { "PASS" } else { "FAIL" });
    for v in &verdict.violations {
        let _ = writeln!(out, "  violation: {v}");
    }
    for w in &verdict.warnings {
        let _ = writeln!(out, "  note: {w}");
    }
    out
}
