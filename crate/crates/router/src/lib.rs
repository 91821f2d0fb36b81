//! File formats, device presets, reports, and the command-line driver for
//! the `codar-core` router.

pub mod bench;
pub mod cli;
pub mod pipeline;
pub mod presets;
pub mod report;
