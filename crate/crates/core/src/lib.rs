//! Maximum packing of vertex-disjoint S-paths (Mader's problem) through a
//! reduction to linear matroid parity over a small prime field.
//!
//! ```
//! use mader::{instance::Instance, solver::solve};
//!
//! let inst = Instance::parse("3 2 2\n1\n3\n1 2\n2 3\n").unwrap();
//! let report = solve(&inst).unwrap();
//! assert_eq!(report.packing_size, 1);
//! ```

pub mod augment;
pub mod base;
pub mod bounds;
pub mod cli;
pub mod dependence;
pub mod error;
pub mod exact;
pub mod field;
pub mod instance;
pub mod oracle;
pub mod representation;
pub mod solver;

pub use error::{Error, Result};
