//! Oracles, generators and the differential fuzz driver behind the hered3
//! test suites.

pub mod generate;
pub mod fuzz;
pub mod oracle;
pub mod probe;

pub use fuzz::{differential_fuzz, Budget, FuzzOptions, FuzzReport};
pub use generate::{generate, Directed, GeneratorKind, GeneratorSpec, Named};
pub use oracle::{count_proper_3colorings, oracle_3colorable, oracle_list3color};
