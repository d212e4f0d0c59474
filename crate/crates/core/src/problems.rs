//! The twenty box-constrained test problems used by the benchmark tables.
//!
//! Problems 1 to 14 are two-dimensional, 17 to 20 three-dimensional, and
//! 15 and 16 are defined for any dimension `n >= 2`. Reference optima come
//! from the fixture file `data/reference_optima.txt`, produced by the
//! brute-force oracle in `examples/reference_oracle.rs`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::engine::{solve, SolverConfig, SolverResult};
use crate::error::{Error, Result};
use crate::geometry::DiagonalBox;
use crate::reference::{ReferenceRecord, ReferenceTable};

pub type Objective = fn(&[f64]) -> f64;

/// Smallest and largest dimension accepted for the dimension-generic problems.
pub const GENERIC_DIM_RANGE: std::ops::RangeInclusive<usize> = 2..=10;

/// The 20 problem ids, in table order.
pub const PROBLEM_IDS: std::ops::RangeInclusive<u32> = 1..=20;

static FIXTURE_TEXT: &str = include_str!("../data/reference_optima.txt");

fn fixtures() -> &'static ReferenceTable {
    static TABLE: OnceLock<ReferenceTable> = OnceLock::new();
    TABLE.get_or_init(|| ReferenceTable::parse(FIXTURE_TEXT).expect("bundled reference fixture is malformed"))
}

/// A benchmark problem: objective, domain and known global minimizers.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    pub id: u32,
    pub dimension: usize,
    pub domain: DiagonalBox,
    objective: Objective,
    pub f_star: f64,
    pub minimizers: Vec<Vec<f64>>,
    pub source_note: &'static str,
}

impl ProblemSpec {
    /// Objective value at `x`, rejecting points outside the domain.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                got: x.len(),
            });
        }
        if !self.domain.contains(x) {
            return Err(Error::OutOfDomain { point: x.to_vec() });
        }
        Ok((self.objective)(x))
    }

    /// The raw objective, without domain checks.
    pub fn objective(&self) -> Objective {
        self.objective
    }

    pub fn solve(&self, config: &SolverConfig) -> Result<SolverResult> {
        solve(&self.domain, self.objective, config)
    }

    /// Distance from `x` to the closest reference minimizer.
    pub fn distance_to_minimizer(&self, x: &[f64]) -> f64 {
        self.minimizers
            .iter()
            .map(|m| crate::geometry::distance(m, x))
            .fold(f64::INFINITY, f64::min)
    }
}

struct Definition {
    domain: fn(usize) -> DiagonalBox,
    objective: Objective,
    /// `None` for the dimension-generic problems.
    fixed_dim: Option<usize>,
    source_note: &'static str,
}

fn definition(id: u32) -> Result<Definition> {
    let def = |domain: fn(usize) -> DiagonalBox, objective: Objective, fixed_dim, source_note| Definition {
        domain,
        objective,
        fixed_dim,
        source_note,
    };
    Ok(match id {
        1 => def(|n| cube(-10.0, 10.0, n), p01, Some(2), "Lucidi (1989)"),
        2 => def(|_| rect(&[-2.5, -1.5], &[2.5, 1.5]), p02, Some(2), "six-hump camel, Torn and Zilinskas (1989)"),
        3 => def(|n| cube(-5.0, 5.0, n), p03, Some(2), "three-hump camel, Dixon and Szego (1975)"),
        4 => def(|_| rect(&[-5.0, 0.0], &[10.0, 15.0]), p04, Some(2), "Branin (1972)"),
        5 => def(|n| cube(-10.0, 10.0, n), p05, Some(2), "Dixon and Szego (1975)"),
        6 => def(|n| cube(-2.0, 2.0, n), p06, Some(2), "Goldstein and Price (1971)"),
        7 => def(|n| cube(-10.0, 10.0, n), p07, Some(2), "Shubert product, Lucidi (1989)"),
        8 => def(|n| cube(-10.0, 10.0, n), p08, Some(2), "penalized Shubert product, Lucidi (1989)"),
        9 => def(|n| cube(-2.0, 8.0, n), p09, Some(2), "Rosenbrock, Dixon and Szego (1975)"),
        10 => def(|n| cube(-6.0, 6.0, n), p10, Some(2), "Himmelblau (1972)"),
        11 => def(|n| cube(0.0, 1.0, n), p11, Some(2), "Mladineo (1986)"),
        12 => def(|n| cube(0.0, 1.0, n), p12, Some(2), "Mladineo (1986)"),
        13 => def(|n| cube(1.0, 2.0, n), p13, Some(2), "Schittkowski (1987)"),
        14 => def(|n| cube(0.0, 2.0 * PI, n), p14, Some(2), "sine product with quadratic penalty"),
        15 => def(|n| cube(-10.0, 10.0, n), p15, None, "Levy-type, Lucidi (1989)"),
        16 => def(|n| cube(-10.0, 10.0, n), p16, None, "Levy-type, Lucidi (1989)"),
        17 => def(|n| cube(0.0, 1.0, n), p17, Some(3), "Hartman-3, Dixon-Szego constants"),
        18 => def(|n| cube(0.0, 1.0, n), p18, Some(3), "Schittkowski (1987)"),
        19 => def(|n| cube(-1.0, 1.0, n), p19, Some(3), "Mladineo (1992)"),
        20 => def(|n| cube(-10.0, 10.0, n), p20, Some(3), "Walster et al. (1985)"),
        other => return Err(Error::UnknownProblem(other)),
    })
}

fn cube(lo: f64, hi: f64, n: usize) -> DiagonalBox {
    DiagonalBox::cube(lo, hi, n).expect("static domain is valid")
}

fn rect(lo: &[f64], hi: &[f64]) -> DiagonalBox {
    DiagonalBox::new(lo.to_vec(), hi.to_vec()).expect("static domain is valid")
}

/// Dimension the problem is instantiated in, validating an optional override.
pub fn resolve_dimension(id: u32, n: Option<usize>) -> Result<usize> {
    let def = definition(id)?;
    match (def.fixed_dim, n) {
        (Some(fixed), None) => Ok(fixed),
        (Some(fixed), Some(_)) => Err(Error::FixedDimension { id, fixed }),
        (None, None) => Ok(2),
        (None, Some(n)) if GENERIC_DIM_RANGE.contains(&n) => Ok(n),
        (None, Some(n)) => Err(Error::UnsupportedDimension { id, n }),
    }
}

/// The problem without reference optimum data; used by the fixture oracle.
pub fn raw_problem(id: u32, n: Option<usize>) -> Result<(DiagonalBox, Objective)> {
    let def = definition(id)?;
    let n = resolve_dimension(id, n)?;
    Ok(((def.domain)(n), def.objective))
}

/// Fully populated problem `id`; `n` only for problems 15 and 16 (default 2).
pub fn get_problem(id: u32, n: Option<usize>) -> Result<ProblemSpec> {
    let def = definition(id)?;
    let dimension = resolve_dimension(id, n)?;
    let reference = reference_optimum(id, n)?;
    Ok(ProblemSpec {
        id,
        dimension,
        domain: (def.domain)(dimension),
        objective: def.objective,
        f_star: reference.f_star,
        minimizers: reference.minimizers,
        source_note: def.source_note,
    })
}

/// Reference global minimum value and minimizers.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceOptimum {
    pub f_star: f64,
    pub minimizers: Vec<Vec<f64>>,
}

/// Reference optimum for problem `id` from the bundled fixtures.
///
/// Problems 15 and 16 in dimensions without a fixture fall back to their
/// closed-form minimizer `(1, ..., 1)` with value 0.
pub fn reference_optimum(id: u32, n: Option<usize>) -> Result<ReferenceOptimum> {
    let dimension = resolve_dimension(id, n)?;
    let records: Vec<&ReferenceRecord> = fixtures().lookup(id, dimension).collect();
    if records.is_empty() {
        if matches!(id, 15 | 16) {
            return Ok(ReferenceOptimum {
                f_star: 0.0,
                minimizers: vec![vec![1.0; dimension]],
            });
        }
        return Err(Error::MissingReference { id, n: dimension });
    }
    let f_star = records.iter().map(|r| r.value).fold(f64::INFINITY, f64::min);
    Ok(ReferenceOptimum {
        f_star,
        minimizers: records.iter().map(|r| r.minimizer.clone()).collect(),
    })
}

fn p01(x: &[f64]) -> f64 {
    let (x1, x2) = (x[0], x[1]);
    0.25 * x1.powi(4) - 0.5 * x1 * x1 + 0.1 * x1 + 0.5 * x2 * x2
}

fn p02(x: &[f64]) -> f64 {
    let (x1, x2) = (x[0], x[1]);
    (4.0 - 2.1 * x1 * x1 + x1.powi(4) / 3.0) * x1 * x1 + x1 * x2 + (-4.0 + 4.0 * x2 * x2) * x2 * x2
}

fn p03(x: &[f64]) -> f64 {
    let (x1, x2) = (x[0], x[1]);
    2.0 * x1 * x1 - 1.05 * x1.powi(4) + x1.powi(6) / 6.0 + x1 * x2 + x2 * x2
}

fn p04(x: &[f64]) -> f64 {
    let (x1, x2) = (x[0], x[1]);
    let t = x2 - 5.1 * x1 * x1 / (4.0 * PI * PI) + 5.0 * x1 / PI - 6.0;
    t * t + 10.0 * (1.0 - 1.0 / (8.0 * PI)) * x1.cos() + 10.0
}

fn p05(x: &[f64]) -> f64 {
    let (x1, x2) = (x[0], x[1]);
    let u = 1.0 - 2.0 * x2 + 0.05 * (4.0 * PI * x2).sin() - x1;
    let v = x2 - 0.5 * (2.0 * PI * x1).sin();
    u * u + v * v
}

fn p06(x: &[f64]) -> f64 {
    let (x1, x2) = (x[0], x[1]);
    let s = x1 + x2 + 1.0;
    let d = 2.0 * x1 - 3.0 * x2;
    let first = 1.0 + s * s * (19.0 - 14.0 * x1 + 3.0 * x1 * x1 - 14.0 * x2 + 6.0 * x1 * x2 + 3.0 * x2 * x2);
    let second =
        30.0 + d * d * (18.0 - 32.0 * x1 + 12.0 * x1 * x1 + 48.0 * x2 - 36.0 * x1 * x2 + 27.0 * x2 * x2);
    first * second
}

fn shubert_factor(t: f64) -> f64 {
    (1..=5)
        .map(|i| {
            let i = i as f64;
            i * ((i + 1.0) * t + i).cos()
        })
        .sum()
}

fn p07(x: &[f64]) -> f64 {
    shubert_factor(x[0]) * shubert_factor(x[1])
}

/// Quadratic term added to problem 7 to obtain problem 8.
pub fn shubert_penalty(x: &[f64]) -> f64 {
    (x[0] + 1.42513).powi(2) + (x[1] + 0.80032).powi(2)
}

fn p08(x: &[f64]) -> f64 {
    p07(x) + shubert_penalty(x)
}

fn p09(x: &[f64]) -> f64 {
    let (x1, x2) = (x[0], x[1]);
    100.0 * (x2 - x1 * x1).powi(2) + (x1 - 1.0).powi(2)
}

fn p10(x: &[f64]) -> f64 {
    let (x1, x2) = (x[0], x[1]);
    (x1 * x1 + x2 - 11.0).powi(2) + (x1 + x2 * x2 - 7.0).powi(2)
}

fn p11(x: &[f64]) -> f64 {
    -4.0 * x[0] * x[1] * (4.0 * PI * x[1]).sin()
}

fn p12(x: &[f64]) -> f64 {
    -(2.0 * x[0] + 1.0).sin() - 2.0 * (3.0 * x[1] + 2.0).sin()
}

fn p13(x: &[f64]) -> f64 {
    let (x1, x2) = (x[0], x[1]);
    (x1 - 2.0).powi(2) + (x2 - 1.0).powi(2) - 0.04 / (0.25 * x1 * x1 + x2 * x2 - 1.0)
        + 5.0 * (x1 - 2.0 * x2 + 1.0).powi(2)
}

fn p14(x: &[f64]) -> f64 {
    let (x1, x2) = (x[0], x[1]);
    -(x1.sin() * (2.0 * x2).sin()).abs() + 0.01 * (x1 * x2 + (x1 - PI).powi(2) + 3.0 * (x2 - PI).powi(2))
}

/// Problem 15 written in the transformed variables `y_i = 1 + (x_i - 1)/4`.
pub fn levy_in_y(y: &[f64]) -> f64 {
    let n = y.len();
    let sin2 = |t: f64| (PI * t).sin().powi(2);
    let mut sum = 10.0 * sin2(y[0]);
    for i in 0..n - 1 {
        sum += (y[i] - 1.0).powi(2) * (1.0 + 10.0 * sin2(y[i + 1]));
    }
    sum += (y[n - 1] - 1.0).powi(2);
    PI / n as f64 * sum
}

fn p15(x: &[f64]) -> f64 {
    let y: Vec<f64> = x.iter().map(|xi| 1.0 + 0.25 * (xi - 1.0)).collect();
    levy_in_y(&y)
}

fn p16(x: &[f64]) -> f64 {
    let n = x.len();
    let mut sum = (3.0 * PI * x[0]).sin().powi(2);
    for i in 0..n - 1 {
        sum += (x[i] - 1.0).powi(2) * (1.0 + (3.0 * PI * x[i + 1]).sin().powi(2));
    }
    0.1 * sum + 0.1 * (x[n - 1] - 1.0).powi(2) * (1.0 + (2.0 * PI * x[n - 1]).sin().powi(2))
}

// Hartman-3 constants from the Dixon-Szego test set.
const HARTMAN3_C: [f64; 4] = [1.0, 1.2, 3.0, 3.2];
const HARTMAN3_ALPHA: [[f64; 3]; 4] = [
    [3.0, 10.0, 30.0],
    [0.1, 10.0, 35.0],
    [3.0, 10.0, 30.0],
    [0.1, 10.0, 35.0],
];
const HARTMAN3_P: [[f64; 3]; 4] = [
    [0.3689, 0.1170, 0.2673],
    [0.4699, 0.4387, 0.7470],
    [0.1091, 0.8732, 0.5547],
    [0.038150, 0.5743, 0.8828],
];

fn p17(x: &[f64]) -> f64 {
    -(0..4)
        .map(|i| {
            let inner: f64 = (0..3)
                .map(|j| HARTMAN3_ALPHA[i][j] * (x[j] - HARTMAN3_P[i][j]).powi(2))
                .sum();
            HARTMAN3_C[i] * (-inner).exp()
        })
        .sum::<f64>()
}

fn p18(x: &[f64]) -> f64 {
    let (x1, x2, x3) = (x[0], x[1], x[2]);
    100.0 * (x3 - 0.25 * (x1 + x2).powi(2)).powi(2) + (1.0 - x1).powi(2) + (1.0 - x2).powi(2)
}

fn p19(x: &[f64]) -> f64 {
    let (x1, x2, x3) = (x[0], x[1], x[2]);
    (x1 * x1 - 2.0 * x2 * x2 + x3 * x3) * x1.sin() * x2.sin() * x3.sin()
}

fn p20(x: &[f64]) -> f64 {
    (0..3)
        .map(|i| (x[0] - x[i] * x[i]).powi(2) + (x[i] - 1.0).powi(2))
        .sum()
}
