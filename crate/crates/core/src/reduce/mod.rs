//! Normal-order LRPgc evaluation.
//!
//! Every step first tries maximal garbage collection of the top environment;
//! only when nothing is collectible does the normal-order rule at the labeled
//! redex fire. [`evaluate`] records the trace and the space and time measures.

mod gc;
mod label;
mod rule;
mod step;
mod whnf;

use std::fmt;

use thiserror::Error;

use crate::syntax::{Expr, Fresh, Name, SizeOptions};

pub use gc::{gc_max, gc_max_in_place};
pub use label::{label, Labeling, Outcome};
pub use rule::{ParseRuleError, RuleName};
pub use step::{step, step_in_place, Step};
pub use whnf::{is_lrpgc_whnf, is_whnf};

pub(crate) use gc::reachable;
pub(crate) use step::apply;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("free variable `{0}` demanded")]
    FreeVariable(Name),
    #[error("stuck: {0}")]
    Stuck(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Whnf,
    FuelExhausted,
    Blackhole,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Whnf => "WHNF",
            Status::FuelExhausted => "FuelExhausted",
            Status::Blackhole => "Blackhole",
        })
    }
}

/// Maximal size; divergence makes it unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Spmax {
    Finite(usize),
    Unbounded,
}

impl Spmax {
    pub fn finite(self) -> Option<usize> {
        match self {
            Spmax::Finite(n) => Some(n),
            Spmax::Unbounded => None,
        }
    }
}

impl fmt::Display for Spmax {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Spmax::Finite(n) => write!(f, "{n}"),
            Spmax::Unbounded => f.write_str("inf"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Measures {
    pub rln: u64,
    pub rlnall: u64,
    pub rln_lcsc: u64,
    pub spmax: Spmax,
}

#[derive(Clone, Debug)]
pub struct EvalResult {
    /// Every step with the size of the state it started from; gc steps included.
    pub steps: Vec<(RuleName, usize)>,
    pub final_expr: Expr,
    pub status: Status,
    pub measures: Measures,
}

impl EvalResult {
    /// One `index TAB rule TAB size` line per step, numbered from 1.
    pub fn trace_lines(&self) -> Vec<String> {
        self.steps
            .iter()
            .enumerate()
            .map(|(i, (r, s))| format!("{}\t{}\t{}", i + 1, r, s))
            .collect()
    }

    /// `status TAB rln TAB rlnall TAB rlnLCSC TAB spmax`.
    pub fn summary_line(&self) -> String {
        let m = &self.measures;
        format!("{}\t{}\t{}\t{}\t{}", self.status, m.rln, m.rlnall, m.rln_lcsc, m.spmax)
    }
}

/// Evaluates a closed term to LRPgc-WHNF, taking at most `fuel` non-gc steps.
///
/// Terms whose binders are not distinct are renamed first.
/// Number of top bindings, `None` unless `e` is a letrec.
fn top_len(e: &Expr) -> Option<usize> {
    match e {
        Expr::Letrec(bs, _) => Some(bs.len()),
        _ => None,
    }
}

pub fn evaluate(e: &Expr, fuel: u64, opts: SizeOptions) -> Result<EvalResult, EvalError> {
    let mut cur = if e.has_distinct_binders() { e.clone() } else { crate::syntax::freshen(e) };
    let mut fresh = Fresh::above(&cur);
    let mut steps = Vec::new();
    let (mut rln, mut rlnall, mut rln_lcsc) = (0u64, 0u64, 0u64);
    let mut spmax = 0usize;
    let mut env = gc::EnvCache::default();
    // Size of `cur` when it is known to hold no top-level garbage.
    let mut known: Option<usize> = None;
    let status = loop {
        env.sync(&cur);
        let size = match known.take() {
            Some(size) => size,
            None => {
                let (live, size) = gc::live_scan(&cur, &env.index, opts);
                if live.contains(&false) {
                    let full = size + gc::dead_size(&cur, &live, opts);
                    let rule = gc::collect(&mut cur, &live).expect("garbage present");
                    steps.push((rule, full));
                    // after gc2 the exposed body may be a letrec with garbage
                    known = (rule == RuleName::Gc1).then_some(size);
                    continue;
                }
                size
            }
        };
        let lab = label::label_indexed(&cur, &env.index, false)?;
        let rule = match lab.outcome {
            Outcome::Whnf => {
                spmax = spmax.max(size);
                break Status::Whnf;
            }
            Outcome::Blackhole => break Status::Blackhole,
            Outcome::Redex(rule) => rule,
        };
        spmax = spmax.max(size);
        if rlnall >= fuel {
            break Status::FuelExhausted;
        }
        let top = top_len(&cur);
        apply(&mut cur, rule, &lab, &mut fresh);
        steps.push((rule, size));
        // the skipped rules drop no references; a new top letrec may hold garbage
        known = match (rule, top, top_len(&cur) == top) {
            (RuleName::Lbeta, _, true) => Some(size - 2),
            (RuleName::Lapp | RuleName::Lcase | RuleName::Lseq, _, true) => Some(size),
            // merged bindings are reachable only from one root
            (RuleName::LletIn, Some(n), _) if gc::merged_all_reachable(&cur, n, None) => Some(size),
            (RuleName::LletE, Some(n), _) if gc::merged_all_reachable(&cur, n, lab.focus.0.first().copied()) => {
                Some(size)
            }
            _ => None,
        };
        rlnall += 1;
        rln += u64::from(rule.counts_for_rln());
        rln_lcsc += u64::from(rule.counts_for_lcsc());
    };
    let spmax = if status == Status::Blackhole { Spmax::Unbounded } else { Spmax::Finite(spmax) };
    Ok(EvalResult { steps, final_expr: cur, status, measures: Measures { rln, rlnall, rln_lcsc, spmax } })
}

#[cfg(test)]
mod tests;
