use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use diagopt::bench::{self, Method, TableId};
use diagopt::engine::{solve_with_observer, IterationEvent};
use diagopt::trace::{self, TraceRow};
use diagopt::{get_problem, Estimator, ProblemSpec, SolverConfig, SolverResult, Strategy};

/// Diagonal Lipschitz global optimizer.
#[derive(Parser)]
#[command(name = "diagopt", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimize one benchmark problem.
    Solve {
        #[command(flatten)]
        run: RunArgs,
        /// Write a per-iteration trace CSV.
        #[arg(long, value_name = "FILE")]
        trace: Option<PathBuf>,
    },
    /// Reproduce a benchmark table and compare it with the published counts.
    Bench {
        #[arg(long, value_name = "T2|T3|T4|T5")]
        table: TableId,
        #[arg(long, value_name = "DIR", default_value = "reports")]
        out: PathBuf,
        /// Exit with a nonzero status when the verdict fails.
        #[arg(long)]
        strict: bool,
    },
    /// Sample a two-dimensional problem on a grid and record the trial points.
    Plot {
        #[command(flatten)]
        run: RunArgs,
        /// Grid points per axis.
        #[arg(long, default_value_t = 201, value_parser = parse_grid)]
        grid: usize,
        #[arg(long, value_name = "DIR", default_value = "plots")]
        out: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Problem number, 1 to 20.
    #[arg(long)]
    problem: u32,
    /// Dimension, for problems 15 and 16 only.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value = "bisection", value_name = "bisection|p2n")]
    strategy: Strategy,
    #[arg(long, default_value = "local", value_name = "local|global")]
    estimator: Estimator,
    /// Reliability parameter.
    #[arg(long, default_value_t = 1.1, value_parser = parse_r)]
    r: f64,
    /// Weight of the C/l term.
    #[arg(long = "C", alias = "c", default_value_t = 10.0, value_parser = parse_positive)]
    c: f64,
    /// Floor for Lipschitz estimates.
    #[arg(long, default_value_t = 1e-6, value_parser = parse_positive)]
    xi: f64,
    /// Relative diagonal tolerance.
    #[arg(long, default_value_t = 0.01, value_parser = parse_non_negative)]
    eps: f64,
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(2..))]
    max_evals: u64,
}

impl RunArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            r: self.r,
            c: self.c,
            xi: self.xi,
            eps: self.eps,
            strategy: self.strategy,
            estimator: self.estimator,
            max_evals: self.max_evals as usize,
        }
    }

    fn problem(&self) -> Result<ProblemSpec> {
        get_problem(self.problem, self.n).with_context(|| format!("--problem {}", self.problem))
    }

    fn method(&self) -> Method {
        Method {
            estimator: self.estimator,
            strategy: self.strategy,
        }
    }
}

fn parse_finite(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if !v.is_finite() {
        return Err("must be finite".into());
    }
    Ok(v)
}

fn parse_r(s: &str) -> Result<f64, String> {
    let v = parse_finite(s)?;
    if v <= 1.0 {
        return Err("must be greater than 1".into());
    }
    Ok(v)
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let v = parse_finite(s)?;
    if v <= 0.0 {
        return Err("must be positive".into());
    }
    Ok(v)
}

fn parse_non_negative(s: &str) -> Result<f64, String> {
    let v = parse_finite(s)?;
    if v < 0.0 {
        return Err("must not be negative".into());
    }
    Ok(v)
}

fn parse_grid(s: &str) -> Result<usize, String> {
    let v: usize = s.parse().map_err(|e| format!("{e}"))?;
    if v < 2 {
        return Err("needs at least 2 points per axis".into());
    }
    Ok(v)
}

fn join(values: &[f64], sep: &str) -> String {
    values.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(sep)
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn run_traced(problem: &ProblemSpec, config: &SolverConfig, trace: Option<&mut String>) -> Result<SolverResult> {
    let f = problem.objective();
    let result = match trace {
        Some(out) => {
            out.push_str(&trace::header(problem.dimension));
            out.push('\n');
            solve_with_observer(&problem.domain, f, config, |e: &IterationEvent<'_>| {
                out.push_str(&TraceRow::from_event(e).to_line());
                out.push('\n');
            })?
        }
        None => solve_with_observer(&problem.domain, f, config, |_: &IterationEvent<'_>| {})?,
    };
    Ok(result)
}

fn cmd_solve(run: &RunArgs, trace_path: Option<&Path>) -> Result<()> {
    let problem = run.problem()?;
    let config = run.config();
    let mut trace_text = trace_path.map(|_| String::new());
    let result = run_traced(&problem, &config, trace_text.as_mut())?;
    if let (Some(path), Some(text)) = (trace_path, &trace_text) {
        write_file(path, text)?;
    }

    println!("problem      {} (n = {})", problem.id, problem.dimension);
    println!("method       {}", run.method());
    println!("best_point   {}", join(&result.best_point, " "));
    println!("best_value   {}", result.best_value);
    println!("evaluations  {}", result.evaluations);
    println!("iterations   {}", result.iterations);
    println!("status       {}", result.status.name());
    Ok(())
}

fn cmd_bench(table: TableId, out: &Path, strict: bool) -> Result<bool> {
    let report = bench::run_table(table)?;
    let verdict = bench::check_against_reference(&report);
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let stem = table.name();
    let text = bench::to_text(&report, &verdict);
    write_file(&out.join(format!("{stem}.csv")), &bench::to_csv(&report))?;
    write_file(&out.join(format!("{stem}.txt")), &text)?;
    print!("{text}");

    let passed = verdict.passed();
    if !passed && strict {
        eprintln!("{stem}: verdict FAIL ({} violations)", verdict.violations.len());
    }
    Ok(passed || !strict)
}

fn cmd_plot(run: &RunArgs, grid: usize, out: &Path) -> Result<()> {
    let problem = run.problem()?;
    if problem.dimension != 2 {
        bail!(
            "--problem {}: plotting needs a two-dimensional problem, this one has n = {}",
            problem.id,
            problem.dimension
        );
    }
    let config = run.config();
    let result = run_traced(&problem, &config, None)?;
    let f = problem.objective();
    let (lo, hi) = (problem.domain.lower(), problem.domain.upper());
    let coord = |axis: usize, i: usize| lo[axis] + (hi[axis] - lo[axis]) * i as f64 / (grid - 1) as f64;

    let mut grid_csv = String::from("x1,x2,f\n");
    for j in 0..grid {
        let x2 = coord(1, j);
        for i in 0..grid {
            let x1 = coord(0, i);
            let _ = writeln!(grid_csv, "{x1},{x2},{}", f(&[x1, x2]));
        }
    }
    let mut trials_csv = String::from("x1,x2,f\n");
    for t in &result.trials {
        let _ = writeln!(trials_csv, "{},{},{}", t.point[0], t.point[1], t.value);
    }
    let meta = format!(
        "problem,method,r,C,xi,eps,evaluations,iterations,best_value,status\n{},{},{},{},{},{},{},{},{},{}\n",
        problem.id,
        run.method(),
        config.r,
        config.c,
        config.xi,
        config.eps,
        result.evaluations,
        result.iterations,
        result.best_value,
        result.status.name()
    );

    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let stem = format!("problem{}_{}", problem.id, run.method());
    write_file(&out.join(format!("{stem}_grid.csv")), &grid_csv)?;
    write_file(&out.join(format!("{stem}_trials.csv")), &trials_csv)?;
    write_file(&out.join(format!("{stem}_meta.csv")), &meta)?;
    println!("wrote {}/{stem}_{{grid,trials,meta}}.csv ({} trials)", out.display(), result.evaluations);
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Solve { run, trace } => cmd_solve(run, trace.as_deref()).map(|()| true),
        Command::Bench { table, out, strict } => cmd_bench(*table, out, *strict),
        Command::Plot { run, grid, out } => cmd_plot(run, *grid, out).map(|()| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
