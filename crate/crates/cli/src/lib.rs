//! Command-line front end for the factorization engine: document schemas,
//! reference-table rendering, and the subcommand drivers.

pub mod commands;
pub mod document;
pub mod tables;

pub use commands::{run, Cli, Command, FamilyArgs, Format, EXIT_DEGENERATE, EXIT_INVALID, EXIT_MISMATCH, EXIT_OK};
pub use document::{
    build_document, factored, render_csv, render_json, render_table, reparse_inputs,
    ExponentsSpec, FactorizationRecord, OperatorCoeffs, ProblemFile, ResultDocument,
};
