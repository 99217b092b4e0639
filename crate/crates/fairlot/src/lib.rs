//! File formats and reports around `fairlot-core`, shared by the `fairlot`
//! command-line tool.

pub mod io;
pub mod report;

pub use io::{Allocation, FormatError};
