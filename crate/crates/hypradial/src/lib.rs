//! Command-line support for `hypradial-core`: threaded sphere averages,
//! output encodings and the property checks behind `hypradial verify`.

pub mod checks;
pub mod output;
pub mod parallel;
