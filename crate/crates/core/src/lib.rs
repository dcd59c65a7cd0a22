//! Ground AC completion modulo a Shostak theory.

pub mod bench;
pub mod canon;
pub mod cli;
pub mod completion;
pub mod error;
pub mod oracle;
pub mod ordering;
pub mod preprocess;
pub mod problem;
pub mod prover;
pub mod random;
pub mod rewrite;
pub mod samples;
pub mod shostak;
pub mod term;
