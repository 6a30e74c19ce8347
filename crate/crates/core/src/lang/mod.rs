//! The term language: types, contexts, terms, the checker, parsing and printing.

pub mod check;
pub mod context;
pub mod generic;
pub mod parse;
pub mod print;
pub mod sexpr;
pub mod term;
pub mod types;

pub use check::{infer, type_check, TypeError, TypedTerm};
pub use context::{Context, GContext, IndexOutOfRange, Name};
pub use generic::{GSlot, GTerm, Idx, Note, TermPath};
pub use parse::{parse_generic, parse_term, parse_term_file, parse_type};
pub use print::{gterm_sexpr, term_sexpr, type_sexpr};
pub use sexpr::SyntaxError;
pub use term::{AppKind, Binder, CompKind, Slot, Subject, Term};
pub use types::{Dim, GType, Ty, TypeExpr, MAX_ARITY};

/// Resolve a de Bruijn index in a concrete context.
pub fn lookup(ctx: &Context, i: usize) -> Result<(Name, TypeExpr), IndexOutOfRange> {
    ctx.lookup(i).cloned()
}
