//! Diagonal Lipschitz global optimization with local tuning.
//!
//! Box-constrained minimization of a Lipschitz objective by repeatedly
//! subdividing the box whose main-diagonal samples look most promising.
//! The crate provides
//!
//! * [`geometry`]: diagonal boxes and the bisection / `2^n` partition strategies,
//! * [`engine`]: the solver, with local-tuning or global Lipschitz estimates,
//! * [`problems`]: twenty classic test functions with reference optima,
//! * [`bench`]: the benchmark tables and their comparison against published counts.
//!
//! ```
//! use diagopt::{geometry::DiagonalBox, engine::{solve, SolverConfig}};
//!
//! let domain = DiagonalBox::cube(0.0, 1.0, 2).unwrap();
//! let f = |x: &[f64]| (x[0] - 0.5).powi(2) + (x[1] - 0.5).powi(2);
//! let result = solve(&domain, f, &SolverConfig::default()).unwrap();
//! assert!(result.best_value < 1e-3);
//! ```

pub mod bench;
pub mod engine;
pub mod error;
pub mod geometry;
pub mod problems;
pub mod reference;
pub mod trace;

pub use engine::{solve, Estimator, SolverConfig, SolverResult, Status};
pub use error::{Error, Result};
pub use geometry::{DiagonalBox, Strategy};
pub use problems::{get_problem, ProblemSpec};
