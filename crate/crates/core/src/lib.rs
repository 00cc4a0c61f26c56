//! Exact computation in `P_n = E(x_1..x_n) ⊗ F_p[y_1..y_n]`, the action of
//! the Steenrod–Milnor operations on it, the Dickson and Mùi invariants, and
//! a registry of identities between them checked by finite instantiation.

pub mod error;
pub mod harness;
pub mod invariants;
pub mod milnor;
pub mod modp;
pub mod padic;
pub mod poly;

pub use error::{Error, Result};
pub use milnor::MilnorOp;
pub use poly::{Context, Degree, Element, GenKind, MatrixFp, Monomial, Term};
