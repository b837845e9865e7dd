//! Program transformations used as rewrites at arbitrary positions.
//!
//! Every rule of the catalog is matched by [`list_redexes`] and applied by
//! [`apply_rule`]. The composite operations [`seq_insert`], [`psi_translate`]
//! and [`inline`] build on the same primitives.

mod apply;
mod inline;
mod matching;
mod psi;

use std::fmt;

use thiserror::Error;

use crate::reduce::{label, RuleName};
use crate::syntax::{Expr, Name, Path};

pub use apply::apply_rule;
pub use inline::inline;
pub use matching::{list_redexes, redexes_at};
pub use psi::psi_translate;

/// Position classes, from the weakest to the strongest guarantee.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ContextClass {
    /// Under an abstraction.
    General,
    /// Not under an abstraction.
    Surface,
    /// Neither under an abstraction nor inside a case alternative.
    Top,
    /// On the normal-order demand path.
    Reduction,
}

impl fmt::Display for ContextClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ContextClass::General => "C",
            ContextClass::Surface => "S",
            ContextClass::Top => "T",
            ContextClass::Reduction => "R",
        })
    }
}

/// Classifies the context around the subterm at `p`.
pub fn classify_context(e: &Expr, p: &Path) -> Result<ContextClass, TransformError> {
    if e.at(p).is_none() {
        return Err(TransformError::InvalidPath(p.clone()));
    }
    if e.under_lambda(p) {
        return Ok(ContextClass::General);
    }
    if e.under_alternative(p) {
        return Ok(ContextClass::Surface);
    }
    let on_demand_path = p.is_empty() || label(e).is_ok_and(|l| l.demanded.contains(p));
    Ok(if on_demand_path { ContextClass::Reduction } else { ContextClass::Top })
}

/// Rule-specific part of a redex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Detail {
    /// The node at the position is the whole left-hand side.
    Node,
    /// Bindings of the letrec at the position, by index.
    Bindings(Vec<usize>),
    /// The binding of the letrec at the position whose right-hand side is
    /// copied or inspected, and the absolute path of the affected occurrence.
    Target { binding: usize, target: Path },
    /// Two bindings of the letrec at the position.
    Pair(usize, usize),
}

/// A match of a rule's left-hand side inside a term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RuleInstance {
    pub rule: RuleName,
    pub position: Path,
    pub context: ContextClass,
    pub detail: Detail,
}

impl fmt::Display for RuleInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}", self.rule, self.position, self.context)?;
        match &self.detail {
            Detail::Node => Ok(()),
            Detail::Bindings(is) => {
                let is: Vec<String> = is.iter().map(usize::to_string).collect();
                write!(f, "\tbindings={}", is.join(","))
            }
            Detail::Target { binding, target } => write!(f, "\tbinding={binding}\ttarget={target}"),
            Detail::Pair(i, j) => write!(f, "\tbindings={i},{j}"),
        }
    }
}

/// Whether type-dependent rules may be applied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Typing {
    #[default]
    Untyped,
    /// The caller asserts the term is the erasure of a well-typed term.
    AssumeTyped,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("no subterm at position {0}")]
    InvalidPath(Path),
    #[error("({rule}) does not match at {position}")]
    NoMatch { rule: RuleName, position: Path },
    #[error("({0}) is only correct for typed programs; assume typing explicitly")]
    RequiresTyping(RuleName),
    #[error("({0}) is not applied through rule instances")]
    NotARewrite(RuleName),
    #[error("variable `{0}` is not in scope at the insertion point")]
    NotInScope(Name),
    #[error("`{0}` is not bound to an abstraction")]
    NotAbstraction(Name),
    #[error("occurrence at {0} is not an applied occurrence of the inlined binder")]
    NotApplied(Path),
}

/// Replaces the subterm `t` at `p` by `seq x t`.
pub fn seq_insert(e: &Expr, p: &Path, x: Name) -> Result<Expr, TransformError> {
    let scope = e.binders_above(p).ok_or_else(|| TransformError::InvalidPath(p.clone()))?;
    if !scope.contains(&x) {
        return Err(TransformError::NotInScope(x));
    }
    let mut out = e.clone();
    let slot = out.at_mut(p).expect("path checked");
    let t = std::mem::replace(slot, Expr::Var(x));
    *slot = Expr::Seq(Box::new(Expr::Var(x)), Box::new(t));
    Ok(out)
}
