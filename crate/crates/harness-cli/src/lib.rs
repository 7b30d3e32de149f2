//! Library side of the `sl2c-verify` command: run configuration, the plane
//! check corpus, report documents, the verify and sweep runners and the
//! built-in self-test.

pub mod config;
pub mod corpus;
pub mod report;
pub mod run;
pub mod selftest;

pub use config::{parse_mu_list, parse_points, Request, RunConfig, SweepSpec, Target};
pub use report::{Outcome, Record, ReportDocument, Summary, REPORT_SCHEMA, SCHEMA_VERSION};
pub use run::{run_sweep, run_verify};
pub use selftest::{run_selftest, Level, SelftestOptions};
