//! Script runner, JSON formats, seeded suites and Monte Carlo demos for
//! [`kolmo_core`].
//!
//! ```
//! use kolmo::runner::{run_script, RunOptions};
//! use kolmo::script::parse_script;
//!
//! let script = parse_script(r#"
//!     object X = ["a", "b"]
//!     morphism coin = {"cod": "X", "state": ["1/2", "1/2"]}
//!     check comonoid X
//!     check not deterministic coin
//! "#).unwrap();
//! let report = run_script(&script, &RunOptions::default());
//! assert!(report.passed);
//! ```

pub mod json;
pub mod montecarlo;
pub mod report;
pub mod runner;
pub mod script;
pub mod suites;

pub use report::{Case, Report};
