//! Command-line front end: symbol expressions, job descriptions, dispatch
//! and output.

pub mod cli;
pub mod expr;
pub mod job;
pub mod output;
pub mod reproduce;
pub mod run;

pub use cli::{main_with_args, ExitStatus};
pub use expr::{parse_symbol_expression, ParseError, ParsedSymbol};
pub use job::{Command, JobSpec, SymbolInput};
