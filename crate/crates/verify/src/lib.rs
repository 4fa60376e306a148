//! Acceptance criteria for `boussinesq-lab`, each evaluated against an
//! oracle from [`oracle`] or against a pinned tolerance.
//!
//! ```no_run
//! for outcome in boussinesq_verify::run_all() {
//!     println!("{outcome}");
//! }
//! ```

pub mod criteria;
pub mod oracle;

pub use criteria::{run, run_all, Criterion, Outcome, CRITERIA};
