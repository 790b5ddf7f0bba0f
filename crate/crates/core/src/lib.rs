//! Exact 3-colorability for graphs without an induced C5 or two disjoint,
//! mutually non-adjacent induced P4s.

pub mod cograph;
pub mod color;
pub mod exact;
pub mod graph;
pub mod io;
pub mod pattern;
pub mod reduction;
pub mod solver;
pub mod twosat;

pub use color::{Color, Palette};
pub use graph::{Graph, GraphError, VertexId, VertexSet};
pub use pattern::{PatternKind, PatternWitness};
pub use reduction::Instance;
pub use solver::{solve, Decision, Mode, SolveError, SolveOptions, SolveReport, SolveStats, StageDiagnostic, StageTelemetry};
