//! The diagonal search itself.
//!
//! Every iteration recomputes a characteristic
//! `R_i = (K_i |a_i - b_i| - f(a_i) - f(b_i)) / 2` for all current intervals,
//! picks the interval with the largest one, places a point on its main
//! diagonal and subdivides it. With [`Estimator::LocalTuning`] the
//! Lipschitz estimate `K_i` balances the slope `λ_i` observed when the
//! interval was created against a global term scaled by the interval size;
//! [`Estimator::GlobalEstimate`] uses one adaptive constant for all intervals.

use crate::error::{Error, Result};
use crate::geometry::{self, place_on_diagonal, DiagonalBox, Strategy, VertexRef, MAX_PARTITION_DIM};

/// How the per-interval Lipschitz estimate is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Estimator {
    /// `K_i = (r + C/l) max{λ_i, γ_i, ξ}`.
    LocalTuning,
    /// `K_i = (r + C/l) max{μ, ξ}` for every interval.
    GlobalEstimate,
}

impl Estimator {
    pub fn name(self) -> &'static str {
        match self {
            Estimator::LocalTuning => "local",
            Estimator::GlobalEstimate => "global",
        }
    }
}

impl std::fmt::Display for Estimator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Estimator {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "local" | "localtuning" | "local-tuning" => Ok(Estimator::LocalTuning),
            "global" | "globalestimate" | "global-estimate" => Ok(Estimator::GlobalEstimate),
            other => Err(format!("unknown estimator `{other}` (expected local or global)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Reliability parameter, `r > 1`.
    pub r: f64,
    /// Weight of the `C / l` term, `C > 0`.
    pub c: f64,
    /// Floor for Lipschitz estimates, `ξ > 0`.
    pub xi: f64,
    /// Stop once the selected diagonal is at most `eps` times the domain diagonal.
    pub eps: f64,
    pub strategy: Strategy,
    pub estimator: Estimator,
    /// Evaluation budget; the run stops with [`Status::BudgetExhausted`] once reached.
    pub max_evals: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            r: 1.1,
            c: 10.0,
            xi: 1e-6,
            eps: 0.01,
            strategy: Strategy::Bisection,
            estimator: Estimator::LocalTuning,
            max_evals: 1_000_000,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.r > 1.0) || !self.r.is_finite() {
            return bad(format!("r must be a finite value above 1, got {}", self.r));
        }
        if !(self.c > 0.0) || !self.c.is_finite() {
            return bad(format!("C must be positive, got {}", self.c));
        }
        if !(self.xi > 0.0) || !self.xi.is_finite() {
            return bad(format!("xi must be positive, got {}", self.xi));
        }
        if !(self.eps >= 0.0) || !self.eps.is_finite() {
            return bad(format!("eps must be non-negative, got {}", self.eps));
        }
        if self.max_evals < 2 {
            return bad(format!("max_evals must be at least 2, got {}", self.max_evals));
        }
        Ok(())
    }
}

/// A box of the current partition with its vertex values.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    pub bx: DiagonalBox,
    pub f_a: f64,
    pub f_b: f64,
    /// Local slope estimate, fixed when the interval is created.
    pub lambda: f64,
    /// Creation sequence number; lower is older.
    pub created_at: u64,
    diag: f64,
}

impl Interval {
    pub fn new(bx: DiagonalBox, f_a: f64, f_b: f64, lambda: f64, created_at: u64) -> Self {
        let diag = bx.diag_norm();
        Self {
            bx,
            f_a,
            f_b,
            lambda,
            created_at,
            diag,
        }
    }

    pub fn diag(&self) -> f64 {
        self.diag
    }

    /// `|f(a) - f(b)| / |a - b|`.
    pub fn slope(&self) -> f64 {
        (self.f_a - self.f_b).abs() / self.diag
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trial {
    pub point: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub domain: DiagonalBox,
    pub intervals: Vec<Interval>,
    /// Iteration counter, starting at 1.
    pub l: usize,
    /// Number of trials.
    pub k: usize,
    /// Largest `λ_i` over the current intervals.
    pub mu: f64,
    /// Largest diagonal over the current intervals.
    pub dmax: f64,
    pub z_star: f64,
    pub x_star: Vec<f64>,
    pub trials: Vec<Trial>,
    next_id: u64,
}

impl SolverState {
    /// Number of intervals in the partition.
    pub fn m(&self) -> usize {
        self.intervals.len()
    }

    fn record(&mut self, point: Vec<f64>, value: f64) -> Result<()> {
        if !value.is_finite() {
            return Err(Error::NonFiniteObjective { point, value });
        }
        if value < self.z_star {
            self.z_star = value;
            self.x_star.clone_from(&point);
        }
        self.trials.push(Trial { point, value });
        Ok(())
    }

    fn refresh_maxima(&mut self) {
        let (mu, dmax) = self
            .intervals
            .iter()
            .fold((0.0f64, 0.0f64), |(mu, d), iv| (mu.max(iv.lambda), d.max(iv.diag)));
        self.mu = mu;
        self.dmax = dmax;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    ToleranceReached,
    BudgetExhausted,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::ToleranceReached => "tolerance",
            Status::BudgetExhausted => "budget",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverResult {
    pub best_point: Vec<f64>,
    pub best_value: f64,
    pub evaluations: usize,
    pub iterations: usize,
    pub status: Status,
    pub trials: Vec<Trial>,
}

/// What an observer sees after each completed iteration.
#[derive(Debug)]
pub struct IterationEvent<'a> {
    /// Iteration counter before the update.
    pub l: usize,
    /// Position of the subdivided interval in the interval list.
    pub selected_index: usize,
    pub selected: &'a Interval,
    /// Point placed on the selected diagonal.
    pub point: &'a [f64],
    /// Parameter `s` of the placed point `a + s (b - a)`.
    pub diagonal_param: f64,
    pub new_vertices: &'a [Vec<f64>],
    pub new_values: &'a [f64],
    pub z_star: f64,
    pub mu: f64,
    pub dmax: f64,
}

/// First two trials at the domain corners and the single starting interval.
pub fn init_state<F>(domain: &DiagonalBox, f: &F, config: &SolverConfig) -> Result<SolverState>
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    config.validate()?;
    check_dimension(domain, config)?;

    let mut state = SolverState {
        domain: domain.clone(),
        intervals: Vec::new(),
        l: 1,
        k: 2,
        mu: 0.0,
        dmax: 0.0,
        z_star: f64::INFINITY,
        x_star: domain.lower().to_vec(),
        trials: Vec::new(),
        next_id: 1,
    };
    let f_a = f(domain.lower());
    state.record(domain.lower().to_vec(), f_a)?;
    let f_b = f(domain.upper());
    state.record(domain.upper().to_vec(), f_b)?;

    let mut first = Interval::new(domain.clone(), f_a, f_b, 0.0, 0);
    first.lambda = first.slope();
    state.mu = first.lambda;
    state.dmax = first.diag;
    state.intervals.push(first);
    Ok(state)
}

fn check_dimension(domain: &DiagonalBox, config: &SolverConfig) -> Result<()> {
    if config.strategy == Strategy::Partition2n && domain.dim() > MAX_PARTITION_DIM {
        return Err(Error::DimensionCap {
            n: domain.dim(),
            cap: MAX_PARTITION_DIM,
        });
    }
    Ok(())
}

/// Global term `γ_i = μ |a_i - b_i| / d_max`.
pub fn gamma(interval: &Interval, mu: f64, dmax: f64) -> f64 {
    // ratio first so that the largest interval gets exactly μ
    mu * (interval.diag / dmax)
}

fn growth(l: usize, config: &SolverConfig) -> f64 {
    config.r + config.c / l as f64
}

/// Lipschitz estimate `K_i` used in the characteristic.
pub fn k_estimate(interval: &Interval, state: &SolverState, config: &SolverConfig) -> f64 {
    let base = match config.estimator {
        Estimator::LocalTuning => interval
            .lambda
            .max(gamma(interval, state.mu, state.dmax))
            .max(config.xi),
        Estimator::GlobalEstimate => state.mu.max(config.xi),
    };
    growth(state.l, config) * base
}

/// `R_i = 0.5 (K |a_i - b_i| - f(a_i) - f(b_i))`.
pub fn characteristic(interval: &Interval, k: f64) -> f64 {
    0.5 * (k * interval.diag - interval.f_a - interval.f_b)
}

struct Scan {
    best: usize,
    k_min: f64,
    k_max: f64,
}

fn scan(state: &SolverState, config: &SolverConfig) -> Scan {
    let mut best = 0;
    let mut best_r = f64::NEG_INFINITY;
    let mut k_min = f64::INFINITY;
    let mut k_max = f64::NEG_INFINITY;
    for (i, iv) in state.intervals.iter().enumerate() {
        let k = k_estimate(iv, state, config);
        k_min = k_min.min(k);
        k_max = k_max.max(k);
        let r = characteristic(iv, k);
        if r > best_r || (r == best_r && iv.created_at < state.intervals[best].created_at) {
            best = i;
            best_r = r;
        }
    }
    Scan { best, k_min, k_max }
}

/// Index of the interval with the largest characteristic; the oldest wins ties.
pub fn select(state: &SolverState, config: &SolverConfig) -> usize {
    scan(state, config).best
}

/// Stopping rule applied to the selected interval `t`.
pub fn should_stop(state: &SolverState, t: usize, config: &SolverConfig) -> Option<Status> {
    if state.intervals[t].diag <= config.eps * state.domain.diag_norm() {
        Some(Status::ToleranceReached)
    } else if state.k >= config.max_evals {
        Some(Status::BudgetExhausted)
    } else {
        None
    }
}

/// Constant used to place the new point: `(4 + C/l) max{μ, ξ}`.
pub fn khat(state: &SolverState, config: &SolverConfig) -> f64 {
    (4.0 + config.c / state.l as f64) * state.mu.max(config.xi)
}

/// Slope estimate shared by all children of `parent`: the largest of the
/// parent's own slope and the slopes of the children.
pub fn lambda_new(parent: &Interval, children: &[(&DiagonalBox, f64, f64)]) -> f64 {
    children
        .iter()
        .map(|(bx, f_a, f_b)| (f_a - f_b).abs() / bx.diag_norm())
        .fold(parent.slope(), f64::max)
}

/// Select an interval and subdivide it. The caller is responsible for
/// checking the stopping rule first.
pub fn iterate<F>(state: &mut SolverState, f: &F, config: &SolverConfig) -> Result<()>
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    let t = checked_select(state, config)?;
    subdivide_at(state, t, f, config, &mut |_: &IterationEvent<'_>| {})
}

fn checked_select(state: &SolverState, config: &SolverConfig) -> Result<usize> {
    let s = scan(state, config);
    let floor = config.r * config.xi;
    let ceiling = (config.r + config.c) * state.mu.max(config.xi);
    if !(s.k_min > floor) || !(s.k_max <= ceiling) {
        return Err(Error::Invariant(format!(
            "Lipschitz estimates [{}, {}] outside ({floor}, {ceiling}] at iteration {}",
            s.k_min, s.k_max, state.l
        )));
    }
    Ok(s.best)
}

fn subdivide_at<F, O>(state: &mut SolverState, t: usize, f: &F, config: &SolverConfig, observer: &mut O) -> Result<()>
where
    F: Fn(&[f64]) -> f64 + ?Sized,
    O: FnMut(&IterationEvent<'_>) + ?Sized,
{
    let khat = khat(state, config);
    let selected = &state.intervals[t];
    let param = geometry::diagonal_parameter(&selected.bx, selected.f_a, selected.f_b, khat);
    if !(0.125..=0.875).contains(&param) {
        return Err(Error::Invariant(format!(
            "placed point at diagonal parameter {param} outside [1/8, 7/8]"
        )));
    }
    let point = place_on_diagonal(&selected.bx, selected.f_a, selected.f_b, khat)?;
    let sub = config.strategy.subdivide(&selected.bx, &point)?;

    let mut new_values = Vec::with_capacity(sub.new_vertices.len());
    for v in &sub.new_vertices {
        let value = f(v);
        state.record(v.clone(), value)?;
        new_values.push(value);
    }

    let parent = state.intervals.swap_remove(t);
    let value_of = |r: VertexRef| match r {
        VertexRef::ParentLower => parent.f_a,
        VertexRef::ParentUpper => parent.f_b,
        VertexRef::New(i) => new_values[i],
    };
    let child_values: Vec<(f64, f64)> = sub
        .children
        .iter()
        .map(|c| (value_of(c.lower_vertex), value_of(c.upper_vertex)))
        .collect();
    let slopes: Vec<(&DiagonalBox, f64, f64)> = sub
        .children
        .iter()
        .zip(&child_values)
        .map(|(c, &(fa, fb))| (&c.bx, fa, fb))
        .collect();
    let lambda = lambda_new(&parent, &slopes);

    let p = sub.children.len();
    for (child, (f_a, f_b)) in sub.children.into_iter().zip(child_values) {
        let id = state.next_id;
        state.next_id += 1;
        state.intervals.push(Interval::new(child.bx, f_a, f_b, lambda, id));
    }
    state.refresh_maxima();

    observer(&IterationEvent {
        l: state.l,
        selected_index: t,
        selected: &parent,
        point: &point,
        diagonal_param: param,
        new_vertices: &sub.new_vertices,
        new_values: &new_values,
        z_star: state.z_star,
        mu: state.mu,
        dmax: state.dmax,
    });

    debug_assert_eq!(p, config.strategy.children_count(state.domain.dim()));
    state.l += 1;
    state.k += new_values.len();
    Ok(())
}

/// Run the search on `domain` until the stopping rule fires.
pub fn solve<F>(domain: &DiagonalBox, f: F, config: &SolverConfig) -> Result<SolverResult>
where
    F: Fn(&[f64]) -> f64,
{
    solve_with_observer(domain, f, config, |_: &IterationEvent<'_>| {})
}

/// [`solve`] with a callback invoked after every iteration.
pub fn solve_with_observer<F, O>(domain: &DiagonalBox, f: F, config: &SolverConfig, mut observer: O) -> Result<SolverResult>
where
    F: Fn(&[f64]) -> f64,
    O: FnMut(&IterationEvent<'_>),
{
    let mut state = init_state(domain, &f, config)?;
    let status = loop {
        let t = checked_select(&state, config)?;
        if let Some(status) = should_stop(&state, t, config) {
            break status;
        }
        subdivide_at(&mut state, t, &f, config, &mut observer)?;
    };
    Ok(SolverResult {
        best_point: state.x_star,
        best_value: state.z_star,
        evaluations: state.k,
        iterations: state.l,
        status,
        trials: state.trials,
    })
}
