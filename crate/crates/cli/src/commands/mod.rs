//! One module per subcommand; each produces an [`Output`](crate::report::Output)
//! that the front end persists and turns into an exit code.

pub mod algebra;
pub mod boundary;
pub mod evals;
pub mod identity;
pub mod scan;
