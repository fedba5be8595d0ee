//! Potential files, output records and the `hill` command-line front end for
//! [`hill_core`].

pub mod cli;
pub mod parallel;
pub mod potential_file;
pub mod records;

pub use hill_core;
