//! Pareto fronts of makespan and maximum lateness for jobs with delivery
//! times on two identical parallel machines.
//!
//! [`dp::solve_exact`] enumerates the exact front with a pseudo-polynomial
//! layered dynamic program. [`fptas::solve_fptas`] trims the same recurrence
//! on a grid of boxes and returns, for any `ε > 0`, a front in which every
//! exact point has a neighbour within a factor `1 + ε` in both objectives.
//! Every returned point comes with a schedule that realizes it.
//!
//! ```
//! use bipareto::{fptas::Epsilon, Instance};
//!
//! let inst = Instance::normalize(&[(2, 5), (3, 4), (4, 1)]).unwrap();
//! let exact = bipareto::solve_exact(&inst).unwrap();
//! assert_eq!(exact.front.points(), &[(5, 9).into(), (6, 7).into()]);
//!
//! let eps: Epsilon = "0.3".parse().unwrap();
//! let approx = bipareto::solve_fptas(&inst, eps).unwrap();
//! assert!(bipareto::fptas::coverage_check(&exact.front, &approx.front, eps));
//! ```

pub mod bench;
pub mod cli;
pub mod dp;
pub mod error;
pub mod fptas;
pub mod model;
pub mod oracle;
pub mod rational;

pub use dp::{solve_exact, Solution, SolveOptions};
pub use error::{Error, Result};
pub use fptas::{solve_fptas, Epsilon};
pub use model::{dominates, evaluate_schedule, pareto_filter, Front, Instance, Machine, ParetoPoint, Schedule};
