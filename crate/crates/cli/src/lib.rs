//! Command-line front end: an expression language over the algebra, plus
//! drivers for the identity harness and the p-adic index sets.

pub mod app;
pub mod ast;
pub mod error;
pub mod eval;
pub mod parse;

pub use app::run;
pub use ast::{random_expr, Expr, Invariant, Op};
pub use error::{CliError, ParseError, ParseErrorKind};
pub use eval::eval;
pub use parse::parse_expr;
