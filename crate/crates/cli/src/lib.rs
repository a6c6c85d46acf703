//! Library surface of the CLI crate: the run-config schema, exposed so
//! the fuzz targets can drive the parser directly.

pub mod config;
