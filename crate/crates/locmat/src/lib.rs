//! File formats, seeded sampling, verification suites and the command-line
//! front end for `locmat-core`.

pub mod cli;
pub mod formats;
pub mod sample;
pub mod verify;

pub use locmat_core as core;
