//! Command-line front end: JSON formats, the function syntax and the commands.

pub mod commands;
pub mod dsl;
pub mod error;
pub mod formats;
pub mod io;
