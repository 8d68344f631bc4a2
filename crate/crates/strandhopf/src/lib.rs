//! Stranded graphs (2-graphs), their contraction and insertion calculus, the
//! renormalization Hopf algebra built on them, and power counting for matrix
//! and tensorial field theories.

pub mod cli_io;
pub mod fixtures;
pub mod graph_core;
pub mod hopf;
pub mod iso;
pub mod models;
pub mod rewrite;
pub mod series;
