//! Command-line experiments and exact JSON/CSV formats for `zstab-core`.

#![allow(clippy::result_large_err)]

pub mod cli;
pub mod families;
pub mod format;
pub mod sweep;
