//! Multi-sorted signatures, sorted terms, substitution and evaluation.

mod algebra;
mod error;
mod op;
mod signature;
mod sort;
mod subst;
mod term;

pub use algebra::{evaluate, evaluate_in, Algebra, PowersetAlgebra, TermAlgebra};
pub use error::{KernelError, NodePath};
pub use op::{Op, ShowOp};
pub use signature::{check_sort, Arity, JoinArities, RawTerm, Signature, VarContext};
pub use sort::Sort;
pub use subst::{substitute, Substitution};
pub use term::{Name, ShowTerm, Term, TermKind};
