//! Support library for the `densepf` binary: file formats, deterministic
//! instance generation, enumeration-cap configuration and report
//! rendering. Kept as a library so integration tests drive the same code
//! paths as the CLI.

#![forbid(unsafe_code)]

pub mod caps;
pub mod formats;
pub mod gen;
pub mod report;
