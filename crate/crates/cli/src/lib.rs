//! Command-line pipeline for fractal product codes: carpet graphs, code
//! parameters, invariant checks, Ising sectors and duals, and Monte Carlo.

pub mod args;
pub mod commands;
pub mod fail;
pub mod manifest;

pub use args::{Cli, Command};
pub use commands::{execute, QUBIT_GATE};
pub use fail::Failure;
pub use manifest::RunManifest;
