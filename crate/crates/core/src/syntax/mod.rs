//! Terms, concrete syntax and the size measure.

mod decl;
mod expr;
pub mod gen;
mod name;
mod parse;
mod print;

pub use decl::{ConInfo, DataDecl, DataEnv};
pub use expr::{Alt, Binding, Expr, Path, SizeOptions};
pub use name::{Fresh, Name, Symbol};
pub use parse::{duplicate_letrec_binders, parse, parse_expr, parse_program, Program};
pub use print::{print, print_pretty};

use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SyntaxError {
    #[error("{line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: unknown constructor `{name}`")]
    UnknownConstructor { name: String, line: usize, col: usize },
    #[error("{line}:{col}: constructor `{name}` takes {expected} argument(s), found {found}")]
    Arity { name: String, expected: usize, found: usize, line: usize, col: usize },
    #[error("{line}:{col}: {msg}")]
    CaseAlternatives { line: usize, col: usize, msg: String },
    #[error("{line}:{col}: `{name}` is bound twice")]
    DuplicateBinder { name: String, line: usize, col: usize },
    #[error("`{0}` is declared twice")]
    DuplicateDeclaration(String),
}

pub fn free_vars(e: &Expr) -> BTreeSet<Name> {
    e.free_vars()
}

pub fn size(e: &Expr, opts: SizeOptions) -> usize {
    e.size(opts)
}

/// Alpha-equivalent copy with every binder renamed from a counter that starts
/// above all numeric suffixes already in `e`.
pub fn freshen(e: &Expr) -> Expr {
    let mut fresh = Fresh::above(e);
    e.freshen_with(&mut fresh)
}
